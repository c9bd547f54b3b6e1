//! Derivative-free simplex maximization.
//!
//! Plain Nelder-Mead with the dimension-adaptive coefficients of Gao and
//! Han, plus an inner restart: once half the evaluation budget is spent the
//! simplex is re-seeded around the incumbent with a smaller spread, which
//! recovers from degenerate simplices at the dimensions used here.

/// Outcome of one simplex search.
#[derive(Debug, Clone)]
pub(crate) struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
}

/// Maximize `f` starting from `x0`, spending at most `max_evals` objective
/// evaluations; stops early when the simplex value spread drops below `tol`.
pub(crate) fn maximize<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    tol: f64,
) -> SearchResult {
    let evals = std::cell::Cell::new(0usize);
    let mut g = |x: &[f64]| {
        evals.set(evals.get() + 1);
        -f(x)
    };

    let phase1 = max_evals / 2;
    let mut best = run_simplex(&mut g, x0, step, phase1, tol);
    let remaining = max_evals.saturating_sub(evals.get());
    if remaining > 0 {
        let refined = run_simplex(&mut g, &best.0, step * 0.25, remaining, tol);
        if refined.1 < best.1 {
            best = refined;
        }
    }
    SearchResult {
        x: best.0,
        value: -best.1,
    }
}

/// One Nelder-Mead run minimizing `g`; returns the best point and value.
fn run_simplex<G: FnMut(&[f64]) -> f64>(
    g: &mut G,
    x0: &[f64],
    step: f64,
    budget: usize,
    tol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    if n == 0 || budget == 0 {
        let v = g(x0);
        return (x0.to_vec(), v);
    }
    let nf = n as f64;
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / nf; // expansion
    let gamma = 0.75 - 1.0 / (2.0 * nf); // contraction
    let delta = 1.0 - 1.0 / nf; // shrink

    let mut used = 0usize;
    let spend = |g: &mut G, x: &[f64], used: &mut usize| {
        *used += 1;
        g(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = spend(g, x0, &mut used);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        if used >= budget {
            break;
        }
        let mut xi = x0.to_vec();
        xi[i] += step;
        let vi = spend(g, &xi, &mut used);
        simplex.push((xi, vi));
    }
    sort_simplex(&mut simplex);
    if simplex.len() < n + 1 {
        return simplex.swap_remove(0);
    }

    while used < budget {
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= tol {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / nf)
            .collect();
        let worst = simplex[n].clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let vr = spend(g, &reflected, &mut used);

        if vr < simplex[0].1 {
            if used < budget {
                let expanded: Vec<f64> = centroid
                    .iter()
                    .zip(&reflected)
                    .map(|(c, r)| c + beta * (r - c))
                    .collect();
                let ve = spend(g, &expanded, &mut used);
                if ve < vr {
                    replace_worst(&mut simplex, expanded, ve);
                } else {
                    replace_worst(&mut simplex, reflected, vr);
                }
            } else {
                replace_worst(&mut simplex, reflected, vr);
            }
        } else if vr < simplex[n - 1].1 {
            replace_worst(&mut simplex, reflected, vr);
        } else if vr < worst.1 {
            // outside contraction
            if used >= budget {
                replace_worst(&mut simplex, reflected, vr);
                break;
            }
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + gamma * (r - c))
                .collect();
            let vc = spend(g, &contracted, &mut used);
            if vc <= vr {
                replace_worst(&mut simplex, contracted, vc);
            } else {
                shrink(g, &mut simplex, delta, budget, &mut used);
            }
        } else {
            // inside contraction
            if used >= budget {
                break;
            }
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + gamma * (w - c))
                .collect();
            let vc = spend(g, &contracted, &mut used);
            if vc < worst.1 {
                replace_worst(&mut simplex, contracted, vc);
            } else {
                shrink(g, &mut simplex, delta, budget, &mut used);
            }
        }
    }
    simplex.swap_remove(0)
}

fn sort_simplex(simplex: &mut [(Vec<f64>, f64)]) {
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
}

fn replace_worst(simplex: &mut [(Vec<f64>, f64)], x: Vec<f64>, v: f64) {
    let n = simplex.len() - 1;
    simplex[n] = (x, v);
    sort_simplex(simplex);
}

fn shrink<G: FnMut(&[f64]) -> f64>(
    g: &mut G,
    simplex: &mut [(Vec<f64>, f64)],
    delta: f64,
    budget: usize,
    used: &mut usize,
) {
    let best = simplex[0].0.clone();
    for entry in simplex.iter_mut().skip(1) {
        if *used >= budget {
            break;
        }
        let xi: Vec<f64> = best
            .iter()
            .zip(&entry.0)
            .map(|(b, x)| b + delta * (x - b))
            .collect();
        *used += 1;
        let vi = g(&xi);
        *entry = (xi, vi);
    }
    sort_simplex(simplex);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_concave_quadratic() {
        let f = |x: &[f64]| -(x[0] - 1.5).powi(2) - (x[1] + 0.5).powi(2) + 3.0;
        let result = maximize(f, &[0.0, 0.0], 1.0, 2000, 1e-12);
        assert!((result.value - 3.0).abs() < 1e-6);
        assert!((result.x[0] - 1.5).abs() < 1e-3);
        assert!((result.x[1] + 0.5).abs() < 1e-3);
    }

    #[test]
    fn respects_evaluation_budget() {
        let count = std::cell::Cell::new(0usize);
        let f = |x: &[f64]| {
            count.set(count.get() + 1);
            -x.iter().map(|v| v * v).sum::<f64>()
        };
        maximize(f, &[1.0; 8], 0.5, 300, 0.0);
        assert!(count.get() <= 300);
    }

    #[test]
    fn handles_moderate_dimension() {
        let f = |x: &[f64]| -x.iter().map(|v| (v - 0.3).powi(2)).sum::<f64>();
        let result = maximize(f, &[0.0; 30], 0.7, 20_000, 1e-13);
        assert!(result.value > -1e-4, "value {}", result.value);
    }
}
