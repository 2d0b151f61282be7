//! Helpers shared across the unit-test modules. Compiled only for tests.

/// Independent grid-refinement root search, used to cross-check interior
/// rest points against the closed forms.
pub(crate) fn grid_root_2d(
    f: impl Fn(&[f64]) -> Vec<f64>,
    mut lo: [f64; 2],
    mut hi: [f64; 2],
) -> [f64; 2] {
    let mut best = [0.0; 2];
    for _ in 0..14 {
        let mut best_norm = f64::INFINITY;
        let steps = 32;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64;
                let y = lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64;
                let r = f(&[x, y]);
                let norm = r[0].abs().max(r[1].abs());
                if norm < best_norm {
                    best_norm = norm;
                    best = [x, y];
                }
            }
        }
        let span = [(hi[0] - lo[0]) * 0.125, (hi[1] - lo[1]) * 0.125];
        lo = [best[0] - span[0], best[1] - span[1]];
        hi = [best[0] + span[0], best[1] + span[1]];
    }
    best
}

/// Central finite-difference Jacobian, the independent oracle for the
/// analytic linearizations.
pub(crate) fn fd_jacobian(
    f: impl Fn(&[f64]) -> Vec<f64>,
    at: &[f64],
    h: f64,
) -> Vec<Vec<f64>> {
    let n = at.len();
    let mut rows = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut plus = at.to_vec();
        let mut minus = at.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let fp = f(&plus);
        let fm = f(&minus);
        for i in 0..n {
            rows[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    rows
}
