use std::fs;

use irreality_core::channels::dephase;
use irreality_core::classical::{
    classical_sequential, classical_unrevealed, JointDistribution, Order, Variable,
};
use irreality_core::experiments::{
    fmt_sig, run_and_write, ExperimentConfig, ExperimentId, RunOutcome,
};
use irreality_core::qstate::document::{ObservableDoc, StateDoc};
use irreality_core::qstate::{bloch_observable, bloch_state};
use irreality_core::{BlochVector, MeasureReport, Result, RngStream};

use crate::render::{self, Value};
use crate::{
    ClassicalArgs, ExperimentArgs, Format, LogBase, MeasureArgs, EXIT_ACCEPTANCE, EXIT_OK,
};

pub fn measure(args: &MeasureArgs) -> Result<u8> {
    let rho = StateDoc::load(&args.state)?.resolve()?;
    let x = ObservableDoc::load(&args.x)?.resolve()?;
    let y = match &args.y {
        Some(p) => Some(ObservableDoc::load(p)?.resolve()?),
        None => None,
    };
    let report = MeasureReport::compute(&rho, &x, y.as_ref())?;
    if let Some(path) = &args.out {
        fs::write(path, report.to_json()? + "\n")?;
    }
    let shown = match args.log_base {
        LogBase::Two => report,
        LogBase::E => report.in_nats(),
    };
    let pairs: Vec<(String, Value)> = shown
        .fields()
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), Value::Num(Some(v)))))
        .collect();
    println!("{}", render::flat(&pairs, args.format));
    Ok(EXIT_OK)
}

fn config_from(id: ExperimentId, args: &ExperimentArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(id, args.seed).with_samples(args.samples.resolve(id));
    cfg.out_dir = args.out.clone();
    cfg.tolerance = args.tol;
    cfg.werner_sign = args.werner_sign.into();
    cfg.threads = args.threads;
    if let Some(t) = args.theta_points {
        cfg.theta_points = t;
    }
    if let Some(k) = args.spot_check_every {
        cfg.spot_check_every = k;
    }
    cfg
}

fn outcome_csv(out: &RunOutcome) -> String {
    let mut lines = vec!["kind,name,value,passed,tolerance".to_string()];
    lines.push(format!("info,rows,{},,", out.rows));
    lines.push(format!("info,csv,{},,", out.files.csv.display()));
    lines.push(format!("info,manifest,{},,", out.files.manifest.display()));
    for (k, v) in &out.summary {
        lines.push(format!("summary,{k},{},,", fmt_sig(*v)));
    }
    for c in &out.checks {
        lines.push(format!(
            "check,{},{},{},{}",
            c.name,
            fmt_sig(c.worst),
            c.passed,
            fmt_sig(c.tolerance)
        ));
    }
    lines.join("\n")
}

fn outcome_json(out: &RunOutcome) -> String {
    let head = vec![
        (
            "experiment".to_string(),
            Value::Text(out.experiment.to_string()),
        ),
        ("rows".to_string(), Value::Num(Some(out.rows as f64))),
        (
            "csv".to_string(),
            Value::Text(out.files.csv.display().to_string()),
        ),
        (
            "manifest".to_string(),
            Value::Text(out.files.manifest.display().to_string()),
        ),
        ("passed".to_string(), Value::Bool(out.all_passed())),
    ];
    let summary: Vec<(String, Value)> = out
        .summary
        .iter()
        .map(|(k, v)| (k.clone(), Value::Num(Some(*v))))
        .collect();
    let checks: Vec<String> = out
        .checks
        .iter()
        .map(|c| {
            render::object(&[
                ("name".to_string(), Value::Text(c.name.clone())),
                ("passed".to_string(), Value::Bool(c.passed)),
                ("worst".to_string(), Value::Num(Some(c.worst))),
                ("tolerance".to_string(), Value::Num(Some(c.tolerance))),
                ("samples".to_string(), Value::Num(Some(c.samples as f64))),
            ])
            .replace("\n  ", " ")
            .replace("\n}", " }")
        })
        .collect();
    let head = render::object(&head);
    let head = head.trim_end_matches('}').trim_end();
    format!(
        "{head},\n  \"summary\": {},\n  \"checks\": [\n    {}\n  ]\n}}",
        render::object(&summary).replace('\n', "\n  "),
        checks.join(",\n    ")
    )
}

pub fn experiment(id: ExperimentId, args: &ExperimentArgs) -> Result<u8> {
    let cfg = config_from(id, args);
    let out = run_and_write(&cfg)?;
    match args.format {
        Format::Csv => println!("{}", outcome_csv(&out)),
        Format::Json => println!("{}", outcome_json(&out)),
    }
    if out.all_passed() {
        Ok(EXIT_OK)
    } else {
        for c in out.checks.iter().filter(|c| !c.passed) {
            eprintln!("acceptance violation: {} ({})", c.name, c.detail);
        }
        Ok(EXIT_ACCEPTANCE)
    }
}

/// Tolerance on the classical identity.
const CLASSICAL_TOL: f64 = 1e-12;

pub fn classical_demo(args: &ClassicalArgs) -> Result<u8> {
    let mut rng = RngStream::new(args.seed, 0).rng();
    let w = JointDistribution::random(args.nq, args.np, &mut rng)?;
    let dev_q = classical_unrevealed(&w, Variable::Q).max_abs_diff(&w);
    let dev_p = classical_unrevealed(&w, Variable::P).max_abs_diff(&w);
    let dev_qp = classical_sequential(&w, Order::QThenP).max_abs_diff(&w);
    let dev_pq = classical_sequential(&w, Order::PThenQ).max_abs_diff(&w);
    let classical = dev_q.max(dev_p).max(dev_qp).max(dev_pq);

    let plus = bloch_state(BlochVector::new([1.0, 0.0, 0.0])?);
    let z = bloch_observable([0.0, 0.0, 1.0])?;
    let quantum = dephase(&plus, &z)?.distance(&plus)?;

    let pairs = vec![
        ("grid_q".to_string(), Value::Num(Some(args.nq as f64))),
        ("grid_p".to_string(), Value::Num(Some(args.np as f64))),
        (
            "classical_max_deviation".to_string(),
            Value::Num(Some(classical)),
        ),
        ("classical_q_then_p".to_string(), Value::Num(Some(dev_qp))),
        ("classical_p_then_q".to_string(), Value::Num(Some(dev_pq))),
        (
            "quantum_plus_sigma_z_schatten2".to_string(),
            Value::Num(Some(quantum)),
        ),
    ];
    println!("{}", render::flat(&pairs, args.format));
    Ok(if classical < CLASSICAL_TOL {
        EXIT_OK
    } else {
        EXIT_ACCEPTANCE
    })
}
