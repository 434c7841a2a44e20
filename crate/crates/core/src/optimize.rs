//! Derivative-free simplex minimization.

/// Stopping rules for [`nelder_mead`].
#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    /// Largest vertex distance from the best vertex at convergence.
    pub x_tol: f64,
    /// Spread of function values across the simplex at convergence.
    pub f_tol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-8,
            f_tol: 1e-14,
            max_evals: 4000,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0` with the standard reflect/expand/contract/shrink moves.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p, &mut evals)).collect();

    let mut converged = false;
    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let size = pts[1..]
            .iter()
            .map(|p| dist(p, &pts[0]))
            .fold(0.0, f64::max);
        if size <= opts.x_tol
            && (vals[n] - vals[0]).abs() <= opts.f_tol.max(f64::EPSILON * vals[0].abs())
        {
            converged = true;
            break;
        }
        if size <= opts.x_tol * 1e-3 {
            // flat direction: further moves cannot separate the vertices
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let toward = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, x)| c + t * (c - x))
                .collect()
        };

        let xr = toward(REFLECT, &pts[n]);
        let fr = eval(&xr, &mut evals);
        if fr < vals[0] {
            let xe = toward(EXPAND, &pts[n]);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let xc = toward(REFLECT * CONTRACT, &pts[n]);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = toward(-CONTRACT, &pts[n]);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for i in 1..=n {
                    let moved: Vec<f64> = pts[0]
                        .iter()
                        .zip(&pts[i])
                        .map(|(b, x)| b + SHRINK * (x - b))
                        .collect();
                    vals[i] = eval(&moved, &mut evals);
                    pts[i] = moved;
                }
            }
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap();
    SimplexResult {
        x: pts[best].clone(),
        value: vals[best],
        evals,
        converged,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &SimplexOptions::default(),
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-7 && (r.x[1] + 2.0).abs() < 1e-7,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn rosenbrock() {
        let opts = SimplexOptions {
            max_evals: 20_000,
            ..SimplexOptions::default()
        };
        let r = nelder_mead(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &opts,
        );
        assert!(r.value < 1e-12, "{}", r.value);
    }

    #[test]
    fn respects_eval_budget() {
        let opts = SimplexOptions {
            max_evals: 10,
            ..SimplexOptions::default()
        };
        let r = nelder_mead(|x| x[0].sin() + x[1].cos(), &[0.3, 0.3], &opts);
        assert!(!r.converged);
        assert!(r.evals <= 12);
    }

    #[test]
    fn one_dimensional() {
        let r = nelder_mead(
            |x| (x[0] - 0.25).powi(2),
            &[3.0],
            &SimplexOptions::default(),
        );
        assert!((r.x[0] - 0.25).abs() < 1e-7);
    }
}
