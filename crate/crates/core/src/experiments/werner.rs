//! Werner-state sweeps: joint irreality over `(alpha, theta)`, per unit of
//! information, and against the correlation measures.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use super::{
    execute, fmt_sig, max_of, min_of, par_indexed, theta_grid, Analysis, Cell, Check,
    ExperimentConfig, ExperimentId, PlotSpec, Sweep, SweepRecord, DELTA_JI_FLOOR,
    DELTA_PCT_CEILING, DELTA_PCT_FLOOR, SPOT_CHECK_TOL,
};
use crate::closedform::{
    werner_information, werner_ji, werner_ji_per_info, werner_ji_per_info_limit,
    werner_onesided_discord, WernerConfig,
};
use crate::error::Result;
use crate::linalg::Side;
use crate::measures::{delta_correlation, information, joint_irreality, onesided_discord_min};
use crate::qstate::{werner_state, werner_x, werner_y, BellSign, RngStream};

fn numeric_ji(alpha: f64, theta: f64, sign: BellSign) -> Result<f64> {
    joint_irreality(&werner_state(alpha, sign)?, &werner_x(), &werner_y(theta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Record {
    pub alpha: f64,
    pub theta: f64,
    pub ji_closed: f64,
    pub ji_numeric: f64,
    pub info: f64,
    pub ji_per_info: f64,
}

impl SweepRecord for Fig2Record {
    fn header() -> &'static [&'static str] {
        &[
            "alpha",
            "theta",
            "ji_closed",
            "ji_numeric",
            "info",
            "ji_per_info",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.alpha.into(),
            self.theta.into(),
            self.ji_closed.into(),
            self.ji_numeric.into(),
            self.info.into(),
            self.ji_per_info.into(),
        ]
    }
}

/// Grid over the configured alpha set (outer) and theta (inner). At
/// `alpha = 0` the per-information column holds the small-alpha limit.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Sweep<Fig2Record>> {
    execute(cfg, ExperimentId::Fig2, |cfg| {
        let thetas = theta_grid(cfg.theta_points);
        let nt = thetas.len() as u64;
        let total = nt * cfg.alphas.len() as u64;
        let records = par_indexed(0..total, |i| {
            let alpha = cfg.alphas[(i / nt) as usize];
            let theta = thetas[(i % nt) as usize];
            let c = WernerConfig::new(alpha, theta)?;
            Ok(Fig2Record {
                alpha,
                theta,
                ji_closed: werner_ji(c),
                ji_numeric: numeric_ji(alpha, theta, cfg.werner_sign)?,
                info: werner_information(alpha),
                ji_per_info: werner_ji_per_info(c),
            })
        })?;
        let analysis = analyze_fig2(cfg, &records, thetas.len());
        Ok((records, analysis))
    })
}

fn analyze_fig2(cfg: &ExperimentConfig, records: &[Fig2Record], nt: usize) -> Analysis {
    let n = records.len() as u64;
    let max_diff = max_of(records.iter().map(|r| (r.ji_closed - r.ji_numeric).abs()));
    let zero_row = max_of(
        records
            .iter()
            .filter(|r| r.alpha == 0.0)
            .map(|r| r.ji_closed.abs().max(r.ji_numeric.abs())),
    );
    let global_max = max_of(records.iter().map(|r| r.ji_closed.max(r.ji_numeric)));

    // Largest drop when stepping to the next larger alpha at fixed theta.
    let mut order: Vec<usize> = (0..cfg.alphas.len()).collect();
    order.sort_by(|&a, &b| cfg.alphas[a].total_cmp(&cfg.alphas[b]));
    let (mut drop_closed, mut drop_numeric) = (0.0f64, 0.0f64);
    for pair in order.windows(2) {
        for j in 0..nt {
            let lo = &records[pair[0] * nt + j];
            let hi = &records[pair[1] * nt + j];
            drop_closed = drop_closed.max(lo.ji_closed - hi.ji_closed);
            drop_numeric = drop_numeric.max(lo.ji_numeric - hi.ji_numeric);
        }
    }

    let mut summary = BTreeMap::new();
    summary.insert("points".into(), n as f64);
    summary.insert("max_closed_vs_numeric".into(), max_diff);
    summary.insert("alpha0_max_abs".into(), zero_row);
    summary.insert("global_max".into(), global_max);
    summary.insert("max_alpha_drop_closed".into(), drop_closed);
    summary.insert("max_alpha_drop_numeric".into(), drop_numeric);

    let mut checks = vec![Check::at_most(
        "closed_vs_numeric",
        max_diff,
        cfg.agreement_tol(),
        n,
    )];
    if cfg.alphas.contains(&0.0) {
        checks.push(Check::at_most(
            "alpha0_row_zero",
            zero_row,
            1e-10,
            nt as u64,
        ));
    }
    checks.push(Check::at_most("max_two_bits", global_max, 2.0 + 1e-12, n));
    checks.push(Check::new(
        "monotone_in_alpha",
        drop_closed <= 1e-12 && drop_numeric <= cfg.agreement_tol(),
        drop_closed.max(drop_numeric),
        1e-12,
        n,
        format!(
            "largest drop closed {} numeric {}",
            fmt_sig(drop_closed),
            fmt_sig(drop_numeric)
        ),
    ));
    Analysis {
        summary,
        checks,
        extras: Vec::new(),
        plot: PlotSpec {
            kind: "line".into(),
            x: "theta".into(),
            y: vec!["ji_closed".into(), "ji_numeric".into()],
            group_by: Some("alpha".into()),
            x_label: "theta (rad)".into(),
            y_label: "joint irreality (bits)".into(),
            notes: vec!["one curve per alpha; numeric drawn as markers".into()],
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fig3Kind {
    Grid,
    AlphaToZero,
    AlphaToOne,
    Random,
}

impl Fig3Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Fig3Kind::Grid => "grid",
            Fig3Kind::AlphaToZero => "alpha_to_zero",
            Fig3Kind::AlphaToOne => "alpha_to_one",
            Fig3Kind::Random => "random",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig3Record {
    pub kind: Fig3Kind,
    /// Position of the curve within its kind.
    pub curve: u64,
    pub alpha: f64,
    pub theta: f64,
    pub ji: f64,
    pub info: f64,
    pub ji_per_info: f64,
    /// Matrix value, only for `alpha >= FIG3_NUMERIC_ALPHA_MIN`.
    pub ji_per_info_numeric: Option<f64>,
    /// Richardson gap of the limit estimate, on `alpha_to_zero` rows.
    pub limit_gap: Option<f64>,
}

impl SweepRecord for Fig3Record {
    fn header() -> &'static [&'static str] {
        &[
            "kind",
            "curve",
            "alpha",
            "theta",
            "ji",
            "info",
            "ji_per_info",
            "ji_per_info_numeric",
            "limit_gap",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.kind.as_str().into()),
            self.curve.into(),
            self.alpha.into(),
            self.theta.into(),
            self.ji.into(),
            self.info.into(),
            self.ji_per_info.into(),
            self.ji_per_info_numeric.into(),
            self.limit_gap.into(),
        ]
    }
}

/// Below this alpha the matrix ratio is dominated by rounding in `I ~ alpha^2`.
pub const FIG3_NUMERIC_ALPHA_MIN: f64 = 1e-2;

/// alpha values of the fig3 grid: one per decade from 1e-8 to 1e-2, then 0.05 steps to 1.
pub fn fig3_alphas() -> Vec<f64> {
    let mut a: Vec<f64> = (2..=8).rev().map(|k| 10f64.powi(-k)).collect();
    a.extend((1..=20).map(|k| k as f64 * 0.05));
    a
}

fn fig3_point(
    kind: Fig3Kind,
    curve: u64,
    alpha: f64,
    theta: f64,
    sign: BellSign,
) -> Result<Fig3Record> {
    let c = WernerConfig::new(alpha, theta)?;
    let numeric = if alpha >= FIG3_NUMERIC_ALPHA_MIN {
        let rho = werner_state(alpha, sign)?;
        Some(joint_irreality(&rho, &werner_x(), &werner_y(theta))? / information(&rho)?)
    } else {
        None
    };
    Ok(Fig3Record {
        kind,
        curve,
        alpha,
        theta,
        ji: werner_ji(c),
        info: werner_information(alpha),
        ji_per_info: werner_ji_per_info(c),
        ji_per_info_numeric: numeric,
        limit_gap: None,
    })
}

/// Per-information joint irreality on a grid, the two boundary curves and
/// `samples` curves at uniformly random alpha in `(0, 1]`.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<Sweep<Fig3Record>> {
    execute(cfg, ExperimentId::Fig3, |cfg| {
        let thetas = theta_grid(cfg.theta_points);
        let nt = thetas.len() as u64;
        let grid = fig3_alphas();
        let mut records = Vec::new();

        records.extend(par_indexed(0..nt, |j| {
            let theta = thetas[j as usize];
            let (v8, _, gap) = werner_ji_per_info_limit(theta);
            Ok(Fig3Record {
                kind: Fig3Kind::AlphaToZero,
                curve: 0,
                alpha: 0.0,
                theta,
                ji: 0.0,
                info: 0.0,
                ji_per_info: v8,
                ji_per_info_numeric: None,
                limit_gap: Some(gap),
            })
        })?);
        records.extend(par_indexed(0..nt, |j| {
            fig3_point(
                Fig3Kind::AlphaToOne,
                0,
                1.0,
                thetas[j as usize],
                cfg.werner_sign,
            )
        })?);
        records.extend(par_indexed(0..nt * grid.len() as u64, |i| {
            let k = i / nt;
            fig3_point(
                Fig3Kind::Grid,
                k,
                grid[k as usize],
                thetas[(i % nt) as usize],
                cfg.werner_sign,
            )
        })?);
        let random_alphas: Vec<f64> = (0..cfg.samples as u64)
            .map(|k| 1.0 - RngStream::new(cfg.seed, k).rng().random::<f64>())
            .collect();
        records.extend(par_indexed(0..nt * cfg.samples as u64, |i| {
            let k = i / nt;
            fig3_point(
                Fig3Kind::Random,
                k,
                random_alphas[k as usize],
                thetas[(i % nt) as usize],
                cfg.werner_sign,
            )
        })?);

        let analysis = analyze_fig3(cfg, &records);
        Ok((records, analysis))
    })
}

fn analyze_fig3(cfg: &ExperimentConfig, records: &[Fig3Record]) -> Analysis {
    let n = records.len() as u64;
    let min = min_of(records.iter().map(|r| r.ji_per_info));
    let half_pi: Vec<&Fig3Record> = records
        .iter()
        .filter(|r| (r.theta - PI / 2.0).abs() < 1e-12)
        .collect();
    let half_pi_dev = max_of(half_pi.iter().map(|r| (r.ji_per_info - 1.0).abs()));
    let numeric: Vec<f64> = records
        .iter()
        .filter_map(|r| r.ji_per_info_numeric.map(|v| (v - r.ji_per_info).abs()))
        .collect();
    let max_diff = max_of(numeric.iter().copied());
    let limit_gap = max_of(records.iter().filter_map(|r| r.limit_gap));
    let min_alpha = min_of(
        records
            .iter()
            .filter(|r| r.kind == Fig3Kind::Grid)
            .map(|r| r.alpha),
    );

    let mut summary = BTreeMap::new();
    summary.insert("points".into(), n as f64);
    summary.insert("random_curves".into(), cfg.samples as f64);
    summary.insert("min_ji_per_info".into(), min);
    summary.insert("half_pi_max_deviation".into(), half_pi_dev);
    summary.insert("max_closed_vs_numeric".into(), max_diff);
    summary.insert("numeric_points".into(), numeric.len() as f64);
    summary.insert("limit_richardson_gap".into(), limit_gap);
    summary.insert("smallest_grid_alpha".into(), min_alpha);

    let mut checks = vec![
        Check::new(
            "per_info_floor",
            min >= 0.5 - 1e-6,
            min,
            0.5 - 1e-6,
            n,
            format!("min {} >= 0.5 - 1e-6", fmt_sig(min)),
        ),
        Check::at_most(
            "closed_vs_numeric",
            max_diff,
            cfg.agreement_tol(),
            numeric.len() as u64,
        ),
    ];
    if !half_pi.is_empty() {
        checks.push(Check::at_most(
            "half_pi_column",
            half_pi_dev,
            1e-8,
            half_pi.len() as u64,
        ));
    }
    Analysis {
        summary,
        checks,
        extras: Vec::new(),
        plot: PlotSpec {
            kind: "line".into(),
            x: "theta".into(),
            y: vec!["ji_per_info".into()],
            group_by: Some("kind,curve".into()),
            x_label: "theta (rad)".into(),
            y_label: "joint irreality per unit information".into(),
            notes: vec![
                "alpha_to_zero evaluated at alpha = 1e-8".into(),
                "random curves drawn thin, boundary curves solid".into(),
            ],
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig4Record {
    pub index: u64,
    pub alpha: f64,
    pub theta: f64,
    pub ji_closed: f64,
    pub ji_numeric: f64,
    pub delta_xy: f64,
    pub delta_yx: f64,
    pub delta_xy_signed: f64,
    pub delta_yx_signed: f64,
    pub script_d: f64,
    /// `100 (D - JI) / JI`, absent when JI is below the exclusion floor.
    pub delta_pct: Option<f64>,
    /// Averaged one-sided discord, closed form.
    pub d_ab: f64,
    /// Optimizer value on spot-checked samples.
    pub d_ab_numeric: Option<f64>,
}

impl SweepRecord for Fig4Record {
    fn header() -> &'static [&'static str] {
        &[
            "index",
            "alpha",
            "theta",
            "ji_closed",
            "ji_numeric",
            "delta_xy",
            "delta_yx",
            "delta_xy_signed",
            "delta_yx_signed",
            "script_d",
            "delta_pct",
            "d_ab",
            "d_ab_numeric",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.index.into(),
            self.alpha.into(),
            self.theta.into(),
            self.ji_closed.into(),
            self.ji_numeric.into(),
            self.delta_xy.into(),
            self.delta_yx.into(),
            self.delta_xy_signed.into(),
            self.delta_yx_signed.into(),
            self.script_d.into(),
            self.delta_pct.into(),
            self.d_ab.into(),
            self.d_ab_numeric.into(),
        ]
    }
}

fn fig4_sample(cfg: &ExperimentConfig, index: u64) -> Result<Fig4Record> {
    let mut rng = RngStream::new(cfg.seed, index).rng();
    let alpha: f64 = rng.random();
    let theta = PI * rng.random::<f64>();
    let rho = werner_state(alpha, cfg.werner_sign)?;
    let (x, y) = (werner_x(), werner_y(theta));
    let ji_numeric = joint_irreality(&rho, &x, &y)?;
    let dxy = delta_correlation(&rho, &x, &y)?;
    let dyx = delta_correlation(&rho, &y, &x)?;
    let script_d = 0.5 * (dxy.value + dyx.value);
    let d_ab_numeric = if index.is_multiple_of(cfg.spot_check_every as u64) {
        let a = onesided_discord_min(&rho, Side::A)?.value;
        let b = onesided_discord_min(&rho, Side::B)?.value;
        Some(0.5 * (a + b))
    } else {
        None
    };
    Ok(Fig4Record {
        index,
        alpha,
        theta,
        ji_closed: werner_ji(WernerConfig::new(alpha, theta)?),
        ji_numeric,
        delta_xy: dxy.value,
        delta_yx: dyx.value,
        delta_xy_signed: dxy.signed,
        delta_yx_signed: dyx.signed,
        script_d,
        delta_pct: (ji_numeric > DELTA_JI_FLOOR)
            .then(|| 100.0 * (script_d - ji_numeric) / ji_numeric),
        d_ab: werner_onesided_discord(alpha)?,
        d_ab_numeric,
    })
}

/// Largest `|D_AB - JI|` on the parameter lines where the two coincide:
/// `theta in {0, pi}` for any alpha and `alpha = 0` for any theta.
fn equality_cases(sign: BellSign) -> Result<(f64, usize)> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    for k in 0..=20 {
        let alpha = k as f64 / 20.0;
        points.push((alpha, 0.0));
        points.push((alpha, PI));
    }
    points.extend(theta_grid(37).into_iter().map(|t| (0.0, t)));
    let gaps = par_indexed(0..points.len() as u64, |i| {
        let (alpha, theta) = points[i as usize];
        Ok((werner_onesided_discord(alpha)? - numeric_ji(alpha, theta, sign)?).abs())
    })?;
    Ok((max_of(gaps), points.len()))
}

/// Random `(alpha, theta)`, uniform on `[0, 1) x [0, pi)`: joint irreality,
/// the symmetrized correlation measure and the averaged one-sided discord.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<Sweep<Fig4Record>> {
    execute(cfg, ExperimentId::Fig4, |cfg| {
        let records = par_indexed(0..cfg.samples as u64, |i| fig4_sample(cfg, i))?;
        let equality = equality_cases(cfg.werner_sign)?;
        let analysis = analyze_fig4(cfg, &records, equality);
        Ok((records, analysis))
    })
}

fn analyze_fig4(
    cfg: &ExperimentConfig,
    records: &[Fig4Record],
    equality: (f64, usize),
) -> Analysis {
    let n = records.len() as u64;
    let pcts: Vec<f64> = records.iter().filter_map(|r| r.delta_pct).collect();
    let pct_min = min_of(pcts.iter().copied());
    let pct_max = max_of(pcts.iter().copied());
    let pct_bad = pcts
        .iter()
        .filter(|&&p| !(DELTA_PCT_FLOOR..DELTA_PCT_CEILING).contains(&p))
        .count();
    let excluded = records.len() - pcts.len();
    let discord_excess = max_of(records.iter().map(|r| r.d_ab - r.ji_numeric));
    let spot: Vec<f64> = records
        .iter()
        .filter_map(|r| r.d_ab_numeric.map(|v| (v - r.d_ab).abs()))
        .collect();
    let spot_max = max_of(spot.iter().copied());
    let ji_diff = max_of(records.iter().map(|r| (r.ji_closed - r.ji_numeric).abs()));
    let negative_signed = records
        .iter()
        .filter(|r| r.delta_xy_signed < 0.0 || r.delta_yx_signed < 0.0)
        .count();

    let mut summary = BTreeMap::new();
    summary.insert("samples".into(), n as f64);
    summary.insert("delta_pct_min".into(), pct_min);
    summary.insert("delta_pct_max".into(), pct_max);
    summary.insert("delta_pct_out_of_range".into(), pct_bad as f64);
    summary.insert("delta_pct_excluded_low_ji".into(), excluded as f64);
    summary.insert("max_discord_minus_ji".into(), discord_excess);
    summary.insert("spot_checks".into(), spot.len() as f64);
    summary.insert("max_spot_check_diff".into(), spot_max);
    summary.insert("max_ji_closed_vs_numeric".into(), ji_diff);
    summary.insert("equality_cases".into(), equality.1 as f64);
    summary.insert("equality_max_gap".into(), equality.0);
    summary.insert("negative_signed_delta".into(), negative_signed as f64);

    let checks = vec![
        Check::new(
            "delta_pct_range",
            pct_bad == 0,
            pct_max,
            DELTA_PCT_CEILING,
            pcts.len() as u64,
            format!(
                "range [{}, {}] percent, {excluded} excluded with JI <= {}",
                fmt_sig(pct_min),
                fmt_sig(pct_max),
                fmt_sig(DELTA_JI_FLOOR)
            ),
        ),
        Check::at_most("discord_below_ji", discord_excess, 1e-9, n),
        Check::at_most("spot_check", spot_max, SPOT_CHECK_TOL, spot.len() as u64),
        Check::at_most("ji_closed_vs_numeric", ji_diff, cfg.agreement_tol(), n),
        Check::at_most("equality_cases", equality.0, 1e-9, equality.1 as u64),
    ];
    Analysis {
        summary,
        checks,
        extras: Vec::new(),
        plot: PlotSpec {
            kind: "scatter".into(),
            x: "ji_numeric".into(),
            y: vec!["script_d".into(), "d_ab".into()],
            group_by: None,
            x_label: "joint irreality (bits)".into(),
            y_label: "correlation measure (bits)".into(),
            notes: vec![
                "panel a: script_d vs ji; inset: delta_pct vs index".into(),
                "panel b: d_ab vs ji".into(),
                "dashed identity line".into(),
            ],
        },
    }
}
