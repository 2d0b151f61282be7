//! Linearization at rest points: analytic Jacobians, closed-form 2x2
//! eigenvalues, trace-determinant classification, interaction regimes, and
//! the matrix certificates (sign structure, diagonal dominance, stability
//! verdicts).

use num_complex::Complex64;
use serde::Serialize;

use crate::equilibria::EquilibriumPoint;
use crate::error::{Error, Result};
use crate::model::{ModelSpec, NondimParams, ValidatedModel};

/// Analytic Jacobian of a model's derivative, evaluated `at` a state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobianMatrix {
    pub n: usize,
    /// Row-major entries, `entries[i * n + j] = d f_i / d x_j`.
    pub entries: Vec<f64>,
    pub at: Vec<f64>,
}

impl JacobianMatrix {
    pub fn from_rows(rows: &[Vec<f64>], at: &[f64]) -> Self {
        let n = rows.len();
        for row in rows {
            assert_eq!(row.len(), n, "jacobian rows must form a square matrix");
        }
        JacobianMatrix {
            n,
            entries: rows.iter().flatten().copied().collect(),
            at: at.to_vec(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Determinant of a 2x2 matrix. Panics on other sizes.
    pub fn det2(&self) -> f64 {
        assert_eq!(self.n, 2, "det2 requires a 2x2 matrix");
        self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

/// Differentiates the model derivative analytically at `at`.
pub fn jacobian(model: &ValidatedModel, at: &[f64]) -> Result<JacobianMatrix> {
    let n = model.dimension();
    if at.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: at.len(),
        });
    }
    let rows: Vec<Vec<f64>> = match model.spec() {
        ModelSpec::Logistic(p) => vec![vec![p.rho * (1.0 - 2.0 * at[0] / p.k)]],
        ModelSpec::Competitive2(p) | ModelSpec::Cooperative2(p) => {
            let s = match model.spec() {
                ModelSpec::Cooperative2(_) => 1.0,
                _ => -1.0,
            };
            let (n1, n2) = (at[0], at[1]);
            vec![
                vec![
                    p.rho1 * (1.0 - 2.0 * n1 / p.k1 + s * p.c1 * n2),
                    p.rho1 * s * p.c1 * n1,
                ],
                vec![
                    p.rho2 * s * p.c2 * n2,
                    p.rho2 * (1.0 - 2.0 * n2 / p.k2 + s * p.c2 * n1),
                ],
            ]
        }
        ModelSpec::Nondim(p) => {
            let s = p.mode.sign();
            let (u1, u2) = (at[0], at[1]);
            vec![
                vec![1.0 - 2.0 * u1 + s * p.a12 * u2, s * p.a12 * u1],
                vec![
                    p.rho * s * p.a21 * u2,
                    p.rho * (1.0 - 2.0 * u2 + s * p.a21 * u1),
                ],
            ]
        }
        ModelSpec::PredatorPrey(p) => {
            let (pp, r) = (at[0], at[1]);
            vec![
                vec![p.delta - p.epsilon * r, -p.epsilon * pp],
                vec![p.alpha * r, p.alpha * pp - p.beta],
            ]
        }
        ModelSpec::NPlayer(p) => {
            let s = p.mode.sign();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                let coupling: f64 = (0..n)
                                    .filter(|&m| m != i)
                                    .map(|m| p.c[i][m] * at[m])
                                    .sum();
                                p.rho[i] * (1.0 - 2.0 * at[i] / p.k[i] + s * coupling)
                            } else {
                                p.rho[i] * at[i] * s * p.c[i][j]
                            }
                        })
                        .collect()
                })
                .collect()
        }
    };
    Ok(JacobianMatrix::from_rows(&rows, at))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EigenMethod {
    #[serde(rename = "closed-form-2x2")]
    ClosedForm2x2,
    #[serde(rename = "certificate")]
    Certificate,
}

impl std::fmt::Display for EigenMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EigenMethod::ClosedForm2x2 => write!(f, "closed-form-2x2"),
            EigenMethod::Certificate => write!(f, "certificate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub values: Vec<Complex64>,
    pub method: EigenMethod,
}

/// Eigenvalues of a 2x2 matrix from trace and determinant, with the
/// cancellation-safe quadratic form: the large root is computed first and the
/// small one recovered from the product, so trace and determinant identities
/// hold to rounding. Panics if the matrix is not 2x2.
pub fn eigenvalues_2x2(j: &JacobianMatrix) -> EigenPair {
    assert_eq!(j.n, 2, "eigenvalues_2x2 requires a 2x2 matrix");
    let tau = j.trace();
    let delta = j.det2();
    let disc = tau * tau - 4.0 * delta;
    let values = if disc >= 0.0 {
        let root = disc.sqrt();
        let big = if tau >= 0.0 {
            0.5 * (tau + root)
        } else {
            0.5 * (tau - root)
        };
        let (l1, l2) = if big == 0.0 {
            (0.0, 0.0)
        } else {
            (big, delta / big)
        };
        vec![Complex64::new(l1, 0.0), Complex64::new(l2, 0.0)]
    } else {
        let re = 0.5 * tau;
        let im = 0.5 * (-disc).sqrt();
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    };
    EigenPair {
        values,
        method: EigenMethod::ClosedForm2x2,
    }
}

/// Trace-determinant taxonomy of a planar linearization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    #[serde(rename = "saddle")]
    Saddle,
    #[serde(rename = "stable node")]
    StableNode,
    #[serde(rename = "unstable node")]
    UnstableNode,
    #[serde(rename = "stable spiral")]
    StableSpiral,
    #[serde(rename = "unstable spiral")]
    UnstableSpiral,
    #[serde(rename = "center")]
    Center,
    #[serde(rename = "improper/degenerate")]
    Degenerate,
    #[serde(rename = "non-equilibrium-linearization")]
    NonEquilibrium,
}

impl std::fmt::Display for PointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PointClass::Saddle => "saddle",
            PointClass::StableNode => "stable node",
            PointClass::UnstableNode => "unstable node",
            PointClass::StableSpiral => "stable spiral",
            PointClass::UnstableSpiral => "unstable spiral",
            PointClass::Center => "center",
            PointClass::Degenerate => "improper/degenerate",
            PointClass::NonEquilibrium => "non-equilibrium-linearization",
        };
        write!(f, "{s}")
    }
}

/// Labels a planar eigenvalue pair. Zero comparisons use a tolerance scaled
/// to the pair's magnitude so the closed forms land on exact-zero boundaries.
pub fn classify(eigen: &EigenPair, is_true_fixed_point: bool) -> PointClass {
    if !is_true_fixed_point {
        return PointClass::NonEquilibrium;
    }
    let scale: f64 = eigen
        .values
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.norm()));
    let zero = 1e-12 * scale;
    let complex = eigen.values.iter().any(|v| v.im.abs() > zero);
    if complex {
        let re = eigen.values[0].re;
        if re.abs() <= zero {
            PointClass::Center
        } else if re < 0.0 {
            PointClass::StableSpiral
        } else {
            PointClass::UnstableSpiral
        }
    } else {
        let mut reals: Vec<f64> = eigen.values.iter().map(|v| v.re).collect();
        reals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        if reals.iter().any(|l| l.abs() <= zero) {
            PointClass::Degenerate
        } else if reals[0] < 0.0 && reals[reals.len() - 1] > 0.0 {
            PointClass::Saddle
        } else if reals[reals.len() - 1] < 0.0 {
            PointClass::StableNode
        } else {
            PointClass::UnstableNode
        }
    }
}

/// Interaction regime of a nondimensional two-player model.
///
/// Competitive: A coexistence (both couplings < 1), B bistable (both > 1),
/// C first-player exclusion of the second ((1,0) stable), D the mirror case.
/// Cooperative: A bounded steady point (a12 a21 < 1), B unbounded growth.
/// Any equality in the defining comparisons reports Boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeCase {
    A,
    B,
    C,
    D,
    Boundary,
}

impl std::fmt::Display for RegimeCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeCase::A => write!(f, "A"),
            RegimeCase::B => write!(f, "B"),
            RegimeCase::C => write!(f, "C"),
            RegimeCase::D => write!(f, "D"),
            RegimeCase::Boundary => write!(f, "Boundary"),
        }
    }
}

pub fn regime_case(params: &NondimParams) -> RegimeCase {
    use crate::model::InteractionMode::*;
    match params.mode {
        Competitive => {
            if params.a12 == 1.0 || params.a21 == 1.0 {
                RegimeCase::Boundary
            } else if params.a12 < 1.0 && params.a21 < 1.0 {
                RegimeCase::A
            } else if params.a12 > 1.0 && params.a21 > 1.0 {
                RegimeCase::B
            } else if params.a12 < 1.0 {
                RegimeCase::C
            } else {
                RegimeCase::D
            }
        }
        Cooperative => {
            let product = params.a12 * params.a21;
            if product == 1.0 {
                RegimeCase::Boundary
            } else if product < 1.0 {
                RegimeCase::A
            } else {
                RegimeCase::B
            }
        }
    }
}

/// True iff every off-diagonal entry is nonnegative (the cooperative sign
/// structure).
pub fn cooperative_sign_check(j: &JacobianMatrix) -> bool {
    for i in 0..j.n {
        for k in 0..j.n {
            if i != k && j.get(i, k) < 0.0 {
                return false;
            }
        }
    }
    true
}

/// Searches for a positive vector d with
///
///   a_ii d_i + sum_{j != i} |a_ij| d_j < 0   for all i,
///
/// by rescaling the most recently violated row's d_i (with a small slack
/// factor) until all rows pass or the budget runs out. A nonnegative diagonal
/// entry rules a witness out immediately. Returns the witness, or None when
/// the search fails; failure is a value, not an error, since the certificate
/// is only sufficient.
pub fn negative_diagonal_dominance(j: &JacobianMatrix) -> Option<Vec<f64>> {
    let n = j.n;
    if (0..n).any(|i| j.get(i, i) >= 0.0) {
        return None;
    }
    let mut d = vec![1.0; n];
    let budget = 200 * n.max(1);
    for _ in 0..budget {
        let mut violated = None;
        for i in 0..n {
            let off: f64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| j.get(i, k).abs() * d[k])
                .sum();
            if j.get(i, i) * d[i] + off >= 0.0 {
                violated = Some((i, off));
                break;
            }
        }
        match violated {
            None => return Some(d),
            Some((i, off)) => {
                d[i] = off / (-j.get(i, i)) * 1.01;
                if d[i] > 1e12 {
                    return None;
                }
            }
        }
    }
    None
}

/// Three-valued stability verdict for a square matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Stable => write!(f, "stable"),
            Verdict::Unstable => write!(f, "unstable"),
            Verdict::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// Decides whether all eigenvalues have strictly negative real part.
///
/// Dimensions one and two are exact (a zero real part counts as unstable,
/// the condition being strict). Larger matrices use sufficient certificates:
/// a diagonal-dominance witness proves stability; instability follows when a
/// connected component of the Gershgorin disc union lies strictly in the
/// right half-plane (the component traps as many eigenvalues as it has
/// discs), or when the trace is positive. Everything else is undetermined.
pub fn is_stable_matrix(j: &JacobianMatrix) -> Verdict {
    match j.n {
        0 => Verdict::Undetermined,
        1 => {
            if j.get(0, 0) < 0.0 {
                Verdict::Stable
            } else {
                Verdict::Unstable
            }
        }
        2 => {
            let eig = eigenvalues_2x2(j);
            if eig.values.iter().all(|v| v.re < 0.0) {
                Verdict::Stable
            } else {
                Verdict::Unstable
            }
        }
        _ => {
            if negative_diagonal_dominance(j).is_some() {
                return Verdict::Stable;
            }
            if gershgorin_component_strictly_right(j) || j.trace() > 0.0 {
                return Verdict::Unstable;
            }
            Verdict::Undetermined
        }
    }
}

/// True when some connected component of the Gershgorin discs sits entirely
/// in Re > 0. Centers are real, so discs are connected exactly when their
/// real intervals [c - R, c + R] overlap; merge the sorted intervals and
/// test each merged group's left edge.
fn gershgorin_component_strictly_right(j: &JacobianMatrix) -> bool {
    let n = j.n;
    let mut intervals: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let c = j.get(i, i);
            let r: f64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| j.get(i, k).abs())
                .sum();
            (c - r, c + r)
        })
        .collect();
    intervals.sort_by(|a, b| a.partial_cmp(b).expect("finite interval bounds"));
    let mut group_left = intervals[0].0;
    let mut group_right = intervals[0].1;
    for &(lo, hi) in &intervals[1..] {
        if lo <= group_right {
            group_right = group_right.max(hi);
        } else {
            if group_left > 0.0 {
                return true;
            }
            group_left = lo;
            group_right = hi;
        }
    }
    group_left > 0.0
}

/// Full linearization record for one rest-point candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub point: EquilibriumPoint,
    pub jacobian: JacobianMatrix,
    pub eigen: EigenPair,
    pub class: PointClass,
    pub notes: String,
}

/// Linearizes a two-dimensional model at a candidate point and classifies it.
/// Candidates that failed residual verification keep their report but carry
/// the non-equilibrium class, so no stability claim is made for them.
pub fn stability_report(model: &ValidatedModel, point: &EquilibriumPoint) -> Result<StabilityReport> {
    if model.dimension() != 2 {
        return Err(Error::UnsupportedModel {
            op: "stability_report",
            variant: model.spec().variant_name(),
        });
    }
    let jac = jacobian(model, &point.coords)?;
    let eigen = eigenvalues_2x2(&jac);
    let class = classify(&eigen, point.is_true_fixed_point);
    let notes = match class {
        PointClass::NonEquilibrium => format!(
            "derivative residual {:.3e} exceeds tolerance; linearization shown without a stability claim",
            point.residual
        ),
        PointClass::Center => {
            "purely imaginary pair: the linearization has closed orbits".to_string()
        }
        PointClass::Degenerate => {
            "zero eigenvalue: the linear test alone does not settle stability".to_string()
        }
        other => format!("hyperbolic point, {other}"),
    };
    Ok(StabilityReport {
        point: point.clone(),
        jacobian: jac,
        eigen,
        class,
        notes,
    })
}
