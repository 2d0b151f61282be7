//! Steady-point catalogues for every model family, the n-player interior
//! point by linear solve, and residual verification against the dynamics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelSpec, NPlayerParams, ValidatedModel};

/// Default absolute residual tolerance (max-norm). Closed forms are exact, so
/// only rounding noise is admitted.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Origin,
    Axis,
    Interior,
}

impl std::fmt::Display for PointKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointKind::Origin => write!(f, "origin"),
            PointKind::Axis => write!(f, "axis"),
            PointKind::Interior => write!(f, "interior"),
        }
    }
}

/// A candidate rest point together with the evidence for it.
///
/// `residual` is the max-norm of the model derivative at `coords`;
/// `is_true_fixed_point` records whether it met the tolerance. Candidates the
/// source material lists that are not genuine rest points are returned with
/// their nonzero residual rather than silently dropped or corrected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumPoint {
    pub coords: Vec<f64>,
    pub residual: f64,
    pub kind: PointKind,
    pub is_true_fixed_point: bool,
}

fn point(model: &ValidatedModel, coords: Vec<f64>, kind: PointKind, tol: f64) -> EquilibriumPoint {
    let rate = model
        .derivative(&coords)
        .expect("candidate coords share the model dimension");
    let residual = max_norm(&rate);
    EquilibriumPoint {
        coords,
        residual,
        kind,
        is_true_fixed_point: residual <= tol,
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Lists the candidate rest points of a nondimensional two-player or
/// predator-prey model, each annotated with its residual.
///
/// Two-player families return (0,0), (1,0), (0,1) and the interior point
/// P* = ((1 -+ a12)/(1 - a12 a21), (1 -+ a21)/(1 - a12 a21)) (minus for
/// competitive, plus for cooperative). Predator-prey returns (0,0),
/// (delta/alpha, 0), (0, delta/epsilon), (beta/alpha, delta/epsilon); the two
/// axis candidates carry nonzero residuals delta^2/alpha and beta delta/epsilon.
pub fn enumerate_equilibria(model: &ValidatedModel, tol: f64) -> Result<Vec<EquilibriumPoint>> {
    match model.spec() {
        ModelSpec::Nondim(p) => {
            let d = 1.0 - p.a12 * p.a21;
            if d == 0.0 || d.abs() < 1e-12 * (p.a12 * p.a21).max(1.0) {
                return Err(Error::SingularInteraction(format!(
                    "a12*a21 = {} leaves the interior point undefined",
                    p.a12 * p.a21
                )));
            }
            let s = p.mode.sign();
            let interior = vec![(1.0 + s * p.a12) / d, (1.0 + s * p.a21) / d];
            Ok(vec![
                point(model, vec![0.0, 0.0], PointKind::Origin, tol),
                point(model, vec![1.0, 0.0], PointKind::Axis, tol),
                point(model, vec![0.0, 1.0], PointKind::Axis, tol),
                point(model, interior, PointKind::Interior, tol),
            ])
        }
        ModelSpec::PredatorPrey(p) => Ok(vec![
            point(model, vec![0.0, 0.0], PointKind::Origin, tol),
            point(model, vec![p.delta / p.alpha, 0.0], PointKind::Axis, tol),
            point(model, vec![0.0, p.delta / p.epsilon], PointKind::Axis, tol),
            point(
                model,
                vec![p.beta / p.alpha, p.delta / p.epsilon],
                PointKind::Interior,
                tol,
            ),
        ]),
        other => Err(Error::UnsupportedModel {
            op: "enumerate_equilibria",
            variant: other.variant_name(),
        }),
    }
}

/// Solves the n-player interior balance in nondimensional units
/// (u_i = N_i/K_i):
///
/// u_i + sum_{j != i} a_ij u_j = 1   (competitive; minus for cooperative)
///
/// with a_ij = C[i][j] K_j, by Gaussian elimination with partial pivoting.
/// The residual is the max-norm of the nondimensionalized derivative at the
/// solution. Negative components are rejected as infeasible.
pub fn interior_equilibrium_nplayer(params: &NPlayerParams, tol: f64) -> Result<EquilibriumPoint> {
    params.validate()?;
    let nd = params.nondimensionalized();
    let n = nd.n;
    let s = nd.mode.sign();

    let mut aug = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            aug[i][j] = if i == j { 1.0 } else { -s * nd.c[i][j] };
        }
        aug[i][n] = 1.0;
    }
    let u = solve_linear(&mut aug)?;

    if let Some(i) = u.iter().position(|x| *x < 0.0) {
        return Err(Error::InfeasibleEquilibrium {
            index: i,
            value: u[i],
        });
    }

    let canonical = ModelSpec::NPlayer(nd).validate()?;
    let rate = canonical.derivative(&u)?;
    let residual = max_norm(&rate);
    Ok(EquilibriumPoint {
        coords: u,
        residual,
        kind: PointKind::Interior,
        is_true_fixed_point: residual <= tol,
    })
}

/// Gaussian elimination with partial pivoting on an augmented n x (n+1)
/// system. Pivots below 1e-12 report a singular interaction structure.
fn solve_linear(aug: &mut [Vec<f64>]) -> Result<Vec<f64>> {
    let n = aug.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                aug[a][col]
                    .abs()
                    .partial_cmp(&aug[b][col].abs())
                    .expect("pivot entries are finite")
            })
            .expect("column range is nonempty");
        if aug[pivot_row][col].abs() < 1e-12 {
            return Err(Error::SingularInteraction(format!(
                "pivot {:.3e} below 1e-12 in column {col}",
                aug[pivot_row][col]
            )));
        }
        aug.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = aug[row][col] / aug[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..=n {
                aug[row][k] -= factor * aug[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = aug[row][n];
        for col in row + 1..n {
            acc -= aug[row][col] * x[col];
        }
        x[row] = acc / aug[row][row];
    }
    Ok(x)
}

/// Evaluates the derivative at `coords` and reports (max-norm residual,
/// residual <= tol).
pub fn verify_fixed_point(model: &ValidatedModel, coords: &[f64], tol: f64) -> Result<(f64, bool)> {
    let rate = model.derivative(coords)?;
    let residual = max_norm(&rate);
    Ok((residual, residual <= tol))
}
