//! Invariant suites over random inputs, reported as one check per invariant.

use std::collections::BTreeMap;

use rand::Rng;

use super::{
    execute, par_indexed, Analysis, Check, ExperimentConfig, ExperimentId, PlotSpec, Sweep,
};
use crate::channels::{dephase_seq, is_joint_reality_state};
use crate::classical::{
    classical_sequential, classical_unrevealed, JointDistribution, Order, Variable, DEFAULT_GRID,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, Side, C64};
use crate::measures::{
    entropic_ur_margin, information, irreality, ji_bounds, ji_decomposition, joint_irreality,
    symmetric_discord,
};
use crate::qstate::{
    mub_pair, random_density_matrix, random_observable, random_unitary, DensityMatrix, Observable,
    RngStream, StreamRng,
};

const IDENTITY_TOL: f64 = 1e-10;
const BOUND_TOL: f64 = 1e-9;
const NONNEG_TOL: f64 = 1e-10;
const FAITHFUL_JI: f64 = 1e-9;
const FAITHFUL_STATE: f64 = 1e-6;
const COVARIANCE_TOL: f64 = 1e-9;
const CLASSICAL_TOL: f64 = 1e-12;
/// Every n-th generic triple is replaced by a jointly real one.
const JOINT_REALITY_STRIDE: u64 = 8;

/// Disjoint stream index ranges per suite.
fn stream(seed: u64, suite: u64, i: u64) -> StreamRng {
    RngStream::new(seed, (suite << 40) | i).rng()
}

fn random_rank_state(d: usize, rng: &mut StreamRng) -> DensityMatrix {
    let rank = rng.random_range(1..=d);
    random_density_matrix(d, rank, rng)
}

/// State diagonal in the eigenbasis of `x`, with `y` sharing that basis.
fn joint_reality_triple(
    d: usize,
    rng: &mut StreamRng,
) -> Result<(DensityMatrix, Observable, Observable)> {
    let u = random_unitary(d, rng);
    let weights: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&p).conjugate_by(&u), None)?;
    let labels: Vec<f64> = (0..d).map(|k| k as f64).collect();
    let x = Observable::from_eigenbasis(labels.clone(), u.clone())?;
    let y = Observable::from_eigenbasis(labels.into_iter().rev().collect(), u)?;
    Ok((rho, x, y))
}

/// Worst residuals of one generic triple.
#[derive(Clone, Copy, Default)]
struct TripleResiduals {
    decomposition: f64,
    average_bound: f64,
    bounds: f64,
    ur: f64,
    negativity: f64,
    covariance: f64,
    faithfulness_mismatch: bool,
}

fn triple_residuals(seed: u64, d: usize, i: u64) -> Result<TripleResiduals> {
    let mut rng = stream(seed, d as u64, i);
    let (rho, x, y) = if i.is_multiple_of(JOINT_REALITY_STRIDE) {
        joint_reality_triple(d, &mut rng)?
    } else {
        (
            random_rank_state(d, &mut rng),
            random_observable(d, &mut rng),
            random_observable(d, &mut rng),
        )
    };
    let ji = joint_irreality(&rho, &x, &y)?;
    let dec = ji_decomposition(&rho, &x, &y)?;
    let b = ji_bounds(&rho, &x, &y)?;
    let u = random_unitary(d, &mut rng);
    let ji_rot = joint_irreality(
        &rho.conjugate_by(&u)?,
        &x.conjugate_by(&u)?,
        &y.conjugate_by(&u)?,
    )?;
    let real = is_joint_reality_state(&rho, &x, &y, FAITHFUL_STATE)?;
    Ok(TripleResiduals {
        decomposition: (dec.joint() - ji).abs(),
        average_bound: dec.x + dec.y - 2.0 * ji,
        bounds: (b.lower - ji).max(ji - b.upper),
        ur: -entropic_ur_margin(&rho, &x, &y)?,
        negativity: -ji.min(dec.x).min(dec.y),
        covariance: (ji_rot - ji).abs(),
        faithfulness_mismatch: (ji <= FAITHFUL_JI) != real,
    })
}

fn random_qubit_observable(rng: &mut StreamRng) -> Observable {
    random_observable(2, rng)
}

/// `(local decomposition residual, product additivity residual, min discord)`
fn local_residuals(seed: u64, i: u64) -> Result<(f64, f64, f64)> {
    let mut rng = stream(seed, 10, i);
    let rho = random_rank_state(4, &mut rng).with_bipartition((2, 2))?;
    let a = random_qubit_observable(&mut rng);
    let b = random_qubit_observable(&mut rng);
    let (ax, by) = (a.local(Side::A, 2), b.local(Side::B, 2));

    let ji = joint_irreality(&rho, &ax, &by)?;
    let d_ab = symmetric_discord(&rho, &a, &b)?;
    let local = irreality(&rho.reduced(Side::A)?, &a)? + irreality(&rho.reduced(Side::B)?, &b)?;
    let eq11 = (ji - local - d_ab).abs();

    let ra = random_rank_state(2, &mut rng);
    let rb = random_rank_state(2, &mut rng);
    let prod = DensityMatrix::product(&ra, &rb);
    let additive =
        (joint_irreality(&prod, &ax, &by)? - irreality(&ra, &a)? - irreality(&rb, &b)?).abs();
    Ok((eq11, additive, d_ab))
}

/// `(distance of Phi_{X Xbar} rho from 1/d, |JI - I|)`
fn mub_residuals(seed: u64, d: usize, i: u64) -> Result<(f64, f64)> {
    let mut rng = stream(seed, 20 + d as u64, i);
    let rho = random_rank_state(d, &mut rng);
    let (x, xbar) = mub_pair(d)?;
    let collapsed = dephase_seq(&rho, &x, &xbar)?;
    let flat = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    let dist = (collapsed.matrix() - &flat).max_abs();
    let ji = joint_irreality(&rho, &x, &xbar)?;
    Ok((dist, (ji - information(&rho)?).abs()))
}

fn classical_residual(seed: u64, i: u64) -> Result<f64> {
    let mut rng = stream(seed, 30, i);
    let w = JointDistribution::random(DEFAULT_GRID.0, DEFAULT_GRID.1, &mut rng)?;
    let mut worst: f64 = 0.0;
    for var in [Variable::Q, Variable::P] {
        worst = worst.max(classical_unrevealed(&w, var).max_abs_diff(&w));
    }
    for order in [Order::QThenP, Order::PThenQ] {
        worst = worst.max(classical_sequential(&w, order).max_abs_diff(&w));
    }
    Ok(worst)
}

/// A matrix with a skew-Hermitian defect must be rejected at construction.
fn fault_rejected() -> bool {
    let mut m = ComplexMatrix::identity(2).scale_real(0.5);
    let mut skew = ComplexMatrix::zeros(2);
    skew[(0, 1)] = C64::new(0.0, 1e-3);
    skew[(1, 0)] = C64::new(0.0, 1e-3);
    m = &m + &skew;
    matches!(
        HermitianOperator::new(m.clone()),
        Err(Error::NotHermitian { .. })
    ) && DensityMatrix::new(m, None).is_err()
}

fn fold_max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs every invariant suite. `samples` random triples per dimension
/// (d = 2 and d = 4) and bipartite states; a tenth as many for the MUB and
/// classical suites.
pub fn run_verify(cfg: &ExperimentConfig) -> Result<Sweep<Check>> {
    execute(cfg, ExperimentId::Verify, |cfg| {
        let n = cfg.samples as u64;
        let small = (n / 10).max(1);
        let mut checks = Vec::new();

        let mut triples = Vec::new();
        for d in [2usize, 4] {
            triples.extend(par_indexed(0..n, |i| triple_residuals(cfg.seed, d, i))?);
        }
        let nt = triples.len() as u64;
        checks.push(Check::at_most(
            "ji_decomposition",
            fold_max(triples.iter().map(|t| t.decomposition)),
            IDENTITY_TOL,
            nt,
        ));
        checks.push(Check::at_most(
            "ji_at_least_average_irreality",
            fold_max(triples.iter().map(|t| t.average_bound)),
            IDENTITY_TOL,
            nt,
        ));
        checks.push(Check::at_most(
            "ji_bounds",
            fold_max(triples.iter().map(|t| t.bounds)),
            BOUND_TOL,
            nt,
        ));
        checks.push(Check::at_most(
            "entropic_uncertainty",
            fold_max(triples.iter().map(|t| t.ur)),
            BOUND_TOL,
            nt,
        ));
        checks.push(Check::at_most(
            "nonnegativity",
            fold_max(triples.iter().map(|t| t.negativity)),
            NONNEG_TOL,
            nt,
        ));
        checks.push(Check::at_most(
            "basis_covariance",
            fold_max(triples.iter().map(|t| t.covariance)),
            COVARIANCE_TOL,
            nt,
        ));
        let mismatches = triples.iter().filter(|t| t.faithfulness_mismatch).count();
        checks.push(Check::new(
            "ji_faithfulness",
            mismatches == 0,
            mismatches as f64,
            0.0,
            nt,
            format!(
                "{mismatches} triples where JI <= 1e-9 disagrees with the joint-reality criterion"
            ),
        ));

        let local = par_indexed(0..n, |i| local_residuals(cfg.seed, i))?;
        checks.push(Check::at_most(
            "local_decomposition",
            fold_max(local.iter().map(|l| l.0)),
            IDENTITY_TOL,
            n,
        ));
        checks.push(Check::at_most(
            "product_additivity",
            fold_max(local.iter().map(|l| l.1)),
            IDENTITY_TOL,
            n,
        ));
        checks.push(Check::at_most(
            "symmetric_discord_nonnegative",
            fold_max(local.iter().map(|l| -l.2)),
            NONNEG_TOL,
            n,
        ));

        for d in [2usize, 3, 4] {
            let mub = par_indexed(0..small, |i| mub_residuals(cfg.seed, d, i))?;
            checks.push(Check::at_most(
                &format!("mub_collapse_d{d}"),
                fold_max(mub.iter().map(|m| m.0)),
                IDENTITY_TOL,
                small,
            ));
            checks.push(Check::at_most(
                &format!("mub_ji_equals_information_d{d}"),
                fold_max(mub.iter().map(|m| m.1)),
                BOUND_TOL,
                small,
            ));
        }

        let classical = par_indexed(0..small, |i| classical_residual(cfg.seed, i))?;
        checks.push(Check::at_most(
            "classical_identity",
            fold_max(classical),
            CLASSICAL_TOL,
            small,
        ));

        let rejected = fault_rejected();
        checks.push(Check::new(
            "fault_injection_rejected",
            rejected,
            if rejected { 0.0 } else { 1.0 },
            0.0,
            1,
            "skewed Hermitian input must fail construction",
        ));

        let passed = checks.iter().filter(|c| c.passed).count();
        let mut summary = BTreeMap::new();
        summary.insert("checks".into(), checks.len() as f64);
        summary.insert("passed".into(), passed as f64);
        summary.insert("triples_per_dimension".into(), n as f64);
        let analysis = Analysis {
            summary,
            checks: checks.clone(),
            extras: Vec::new(),
            plot: PlotSpec {
                kind: "table".into(),
                x: "name".into(),
                y: vec!["worst".into(), "tolerance".into()],
                group_by: None,
                x_label: "invariant".into(),
                y_label: "worst residual".into(),
                notes: vec!["log scale on the residual axis".into()],
            },
        };
        Ok((checks, analysis))
    })
}
