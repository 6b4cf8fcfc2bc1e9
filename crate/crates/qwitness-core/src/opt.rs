//! Gradient-free optimization utilities: a Nelder-Mead simplex, a coarse
//! grid + local refinement driver for smooth low-dimensional landscapes,
//! and an ordinary least-squares line fit.

/// Result of a maximization run.
#[derive(Clone, Debug)]
pub struct OptOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Nelder-Mead maximization (standard reflection/expansion/contraction/shrink
/// coefficients). Stops when the simplex value spread falls below `tol`.
pub fn nelder_mead_max(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    max_iter: usize,
    tol: f64,
) -> OptOutcome {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for d in 0..dim {
        let mut v = x0.to_vec();
        v[d] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        // Descending by value: best first (maximization).
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];
        if (values[best] - values[worst]).abs() <= tol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += simplex[i][d];
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let at = |t: f64| -> Vec<f64> {
            (0..dim)
                .map(|d| centroid[d] + t * (centroid[d] - simplex[worst][d]))
                .collect()
        };

        let reflected = at(1.0);
        let fr = f(&reflected);
        if fr > values[best] {
            let expanded = at(2.0);
            let fe = f(&expanded);
            if fe > fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr > values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = at(-0.5);
            let fc = f(&contracted);
            if fc > values[worst] {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[best].clone();
                for i in 0..simplex.len() {
                    if i == best {
                        continue;
                    }
                    for d in 0..dim {
                        simplex[i][d] = anchor[d] + 0.5 * (simplex[i][d] - anchor[d]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let (mut bx, mut bv) = (simplex[0].clone(), values[0]);
    for i in 1..simplex.len() {
        if values[i] > bv {
            bv = values[i];
            bx = simplex[i].clone();
        }
    }
    OptOutcome {
        x: bx,
        value: bv,
        converged,
        iterations,
    }
}

/// Maximizes a smooth 2D function over [0, 2π)² by coarse grid scan plus
/// Nelder-Mead refinement from the top grid cells.
pub fn maximize_periodic_2d(f: &dyn Fn(f64, f64) -> f64, grid: usize, tol: f64) -> OptOutcome {
    let tau = std::f64::consts::TAU;
    let step = tau / grid as f64;
    // Keep the best few seeds; smooth landscapes may hold symmetric maxima.
    let mut seeds: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..grid {
        let x = i as f64 * step;
        for j in 0..grid {
            let y = j as f64 * step;
            let v = f(x, y);
            if seeds.len() < 3 {
                seeds.push((v, x, y));
                seeds.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            } else if v > seeds[2].0 {
                seeds[2] = (v, x, y);
                seeds.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            }
        }
    }
    let wrapped = |v: &[f64]| f(v[0], v[1]);
    let mut best: Option<OptOutcome> = None;
    for &(_, x, y) in &seeds {
        let out = nelder_mead_max(&wrapped, &[x, y], step, 400, tol);
        if best.as_ref().map_or(true, |b| out.value > b.value) {
            best = Some(out);
        }
    }
    best.expect("grid produced at least one seed")
}

/// Ordinary least-squares fit y = slope·x + intercept.
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}
