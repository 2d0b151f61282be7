//! Model parameterizations, validation, right-hand sides, and the
//! competitive/cooperative nondimensionalization.
//!
//! Six model families share one `ModelSpec` umbrella: single-player logistic,
//! dimensional two-player competition/cooperation, the nondimensional
//! two-player form, the insurer/policyholder predator-prey pair, and the
//! n-player generalization used by the premium game.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interaction sign for two-player and n-player models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionMode {
    Competitive,
    Cooperative,
}

impl InteractionMode {
    /// Sign of the coupling term: competition suppresses, cooperation feeds.
    pub fn sign(self) -> f64 {
        match self {
            InteractionMode::Competitive => -1.0,
            InteractionMode::Cooperative => 1.0,
        }
    }
}

impl std::fmt::Display for InteractionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InteractionMode::Competitive => write!(f, "competitive"),
            InteractionMode::Cooperative => write!(f, "cooperative"),
        }
    }
}

/// Single-player logistic growth: dN/dt = rho N (1 - N/K).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub rho: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

/// Dimensional two-player parameters, shared by the competitive and
/// cooperative variants:
///
/// dN1/dt = rho1 N1 (1 - N1/K1 -+ c1 N2)
/// dN2/dt = rho2 N2 (1 - N2/K2 -+ c2 N1)
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPlayerParams {
    pub rho1: f64,
    pub rho2: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Nondimensional two-player form:
///
/// du1/dT = u1 (1 - u1 -+ a12 u2)
/// du2/dT = rho u2 (1 - u2 -+ a21 u1)
///
/// with u_i = N_i/K_i, T = rho1 t, and rho the rate ratio rho2/rho1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondimParams {
    pub a12: f64,
    pub a21: f64,
    pub rho: f64,
    pub mode: InteractionMode,
}

/// Insurer/policyholder predator-prey pair:
///
/// dP/dt = P (delta - epsilon R)
/// dR/dt = R (alpha P - beta)
///
/// P is policyholder claim risk, R insurer return.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredatorPreyParams {
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// n-player generalization:
///
/// dN_i/dt = rho_i N_i (1 - N_i/K_i -+ sum_{j != i} C[i][j] N_j)
///
/// C[i][j] is the intensity of player j's pressure on player i; the diagonal
/// is identically zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NPlayerParams {
    pub n: usize,
    pub rho: Vec<f64>,
    #[serde(rename = "K")]
    pub k: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    pub mode: InteractionMode,
}

/// Tagged union over every supported model family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ModelSpec {
    #[serde(rename = "logistic")]
    Logistic(LogisticParams),
    #[serde(rename = "competitive2")]
    Competitive2(TwoPlayerParams),
    #[serde(rename = "cooperative2")]
    Cooperative2(TwoPlayerParams),
    #[serde(rename = "predator-prey")]
    PredatorPrey(PredatorPreyParams),
    #[serde(rename = "nplayer")]
    NPlayer(NPlayerParams),
    #[serde(rename = "nondim")]
    Nondim(NondimParams),
}

/// Scales recorded by `nondimensionalize`: T = time * t, u_i = N_i / state[i].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleRecord {
    pub time: f64,
    pub state: [f64; 2],
}

fn require_positive(value: f64, field: &'static str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            field,
            constraint: "> 0",
        })
    }
}

impl LogisticParams {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.rho, "rho")?;
        require_positive(self.k, "K")
    }
}

impl TwoPlayerParams {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.rho1, "rho1")?;
        require_positive(self.rho2, "rho2")?;
        require_positive(self.k1, "K1")?;
        require_positive(self.k2, "K2")?;
        require_positive(self.c1, "c1")?;
        require_positive(self.c2, "c2")
    }
}

impl NondimParams {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.a12, "a12")?;
        require_positive(self.a21, "a21")?;
        require_positive(self.rho, "rho")
    }
}

impl PredatorPreyParams {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.delta, "delta")?;
        require_positive(self.epsilon, "epsilon")?;
        require_positive(self.alpha, "alpha")?;
        require_positive(self.beta, "beta")?;
        // Growth must not be dominated by decay, nor risk coupling by
        // return coupling; ties are admitted.
        if self.delta < self.beta {
            return Err(Error::ParameterOutOfRange {
                field: "delta",
                constraint: "> beta",
            });
        }
        if self.alpha < self.epsilon {
            return Err(Error::ParameterOutOfRange {
                field: "alpha",
                constraint: "> epsilon",
            });
        }
        Ok(())
    }
}

impl NPlayerParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ParameterOutOfRange {
                field: "n",
                constraint: ">= 1",
            });
        }
        if self.rho.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.rho.len(),
            });
        }
        if self.k.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.k.len(),
            });
        }
        if self.c.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.c.len(),
            });
        }
        for row in &self.c {
            if row.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: row.len(),
                });
            }
        }
        for r in &self.rho {
            require_positive(*r, "rho[i]")?;
        }
        for k in &self.k {
            require_positive(*k, "K[i]")?;
        }
        for (i, row) in self.c.iter().enumerate() {
            for (j, &cij) in row.iter().enumerate() {
                if i == j {
                    if cij != 0.0 {
                        return Err(Error::ParameterOutOfRange {
                            field: "C[i][i]",
                            constraint: "= 0",
                        });
                    }
                } else if !(cij.is_finite() && cij >= 0.0) {
                    return Err(Error::ParameterOutOfRange {
                        field: "C[i][j]",
                        constraint: ">= 0",
                    });
                }
            }
        }
        Ok(())
    }

    /// Canonical analysis form: unit thresholds, rates relative to player 1,
    /// couplings a_ij = C[i][j] * K_j.
    pub fn nondimensionalized(&self) -> NPlayerParams {
        let rho0 = self.rho[0];
        let rho = self.rho.iter().map(|r| r / rho0).collect();
        let c = self
            .c
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, cij)| cij * self.k[j])
                    .collect()
            })
            .collect();
        NPlayerParams {
            n: self.n,
            rho,
            k: vec![1.0; self.n],
            c,
            mode: self.mode,
        }
    }
}

impl ModelSpec {
    pub fn dimension(&self) -> usize {
        match self {
            ModelSpec::Logistic(_) => 1,
            ModelSpec::Competitive2(_)
            | ModelSpec::Cooperative2(_)
            | ModelSpec::PredatorPrey(_)
            | ModelSpec::Nondim(_) => 2,
            ModelSpec::NPlayer(p) => p.n,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            ModelSpec::Logistic(_) => "logistic",
            ModelSpec::Competitive2(_) => "competitive2",
            ModelSpec::Cooperative2(_) => "cooperative2",
            ModelSpec::PredatorPrey(_) => "predator-prey",
            ModelSpec::NPlayer(_) => "nplayer",
            ModelSpec::Nondim(_) => "nondim",
        }
    }

    /// Checks every type invariant and wraps the spec for use by the rest of
    /// the library.
    pub fn validate(self) -> Result<ValidatedModel> {
        match &self {
            ModelSpec::Logistic(p) => p.validate()?,
            ModelSpec::Competitive2(p) | ModelSpec::Cooperative2(p) => p.validate()?,
            ModelSpec::PredatorPrey(p) => p.validate()?,
            ModelSpec::NPlayer(p) => p.validate()?,
            ModelSpec::Nondim(p) => p.validate()?,
        }
        Ok(ValidatedModel { spec: self })
    }
}

/// A `ModelSpec` whose invariants have been checked. Immutable afterwards;
/// every operation on it is pure, so values can be shared across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedModel {
    spec: ModelSpec,
}

impl ValidatedModel {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    /// Evaluates the right-hand side at `state`.
    ///
    /// Non-finite state components are not screened here; they propagate
    /// through the arithmetic and are caught by the integrator's blow-up
    /// detection.
    pub fn derivative(&self, state: &[f64]) -> Result<Vec<f64>> {
        let dim = self.dimension();
        if state.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: state.len(),
            });
        }
        let mut out = vec![0.0; dim];
        self.eval_into(state, &mut out);
        Ok(out)
    }

    /// Hot-path evaluation without checks or allocation. Callers guarantee
    /// `state` and `out` have the model dimension.
    pub(crate) fn eval_into(&self, state: &[f64], out: &mut [f64]) {
        match &self.spec {
            ModelSpec::Logistic(p) => {
                out[0] = p.rho * state[0] * (1.0 - state[0] / p.k);
            }
            ModelSpec::Competitive2(p) => two_player_rhs(p, -1.0, state, out),
            ModelSpec::Cooperative2(p) => two_player_rhs(p, 1.0, state, out),
            ModelSpec::PredatorPrey(p) => {
                out[0] = state[0] * (p.delta - p.epsilon * state[1]);
                out[1] = state[1] * (p.alpha * state[0] - p.beta);
            }
            ModelSpec::NPlayer(p) => {
                let s = p.mode.sign();
                for i in 0..p.n {
                    let mut coupling = 0.0;
                    for j in 0..p.n {
                        if j != i {
                            coupling += p.c[i][j] * state[j];
                        }
                    }
                    out[i] = p.rho[i] * state[i] * (1.0 - state[i] / p.k[i] + s * coupling);
                }
            }
            ModelSpec::Nondim(p) => {
                let s = p.mode.sign();
                out[0] = state[0] * (1.0 - state[0] + s * p.a12 * state[1]);
                out[1] = p.rho * state[1] * (1.0 - state[1] + s * p.a21 * state[0]);
            }
        }
    }
}

fn two_player_rhs(p: &TwoPlayerParams, s: f64, state: &[f64], out: &mut [f64]) {
    out[0] = p.rho1 * state[0] * (1.0 - state[0] / p.k1 + s * p.c1 * state[1]);
    out[1] = p.rho2 * state[1] * (1.0 - state[1] / p.k2 + s * p.c2 * state[0]);
}

/// Converts dimensional two-player parameters to the nondimensional form:
/// a12 = c1 K2, a21 = c2 K1, rho = rho2/rho1, with scales T = rho1 t and
/// u_i = N_i/K_i.
pub fn nondimensionalize(
    params: &TwoPlayerParams,
    mode: InteractionMode,
) -> Result<(NondimParams, ScaleRecord)> {
    params.validate()?;
    let nondim = NondimParams {
        a12: params.c1 * params.k2,
        a21: params.c2 * params.k1,
        rho: params.rho2 / params.rho1,
        mode,
    };
    let scales = ScaleRecord {
        time: params.rho1,
        state: [params.k1, params.k2],
    };
    Ok((nondim, scales))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nondim_competitive(a12: f64, a21: f64, rho: f64) -> ValidatedModel {
        ModelSpec::Nondim(NondimParams {
            a12,
            a21,
            rho,
            mode: InteractionMode::Competitive,
        })
        .validate()
        .unwrap()
    }

    #[test]
    fn validate_accepts_logistic_in_range() {
        assert!(ModelSpec::Logistic(LogisticParams { rho: 1.0, k: 10.0 })
            .validate()
            .is_ok());
    }

    #[test]
    fn validate_rejects_zero_threshold() {
        let err = ModelSpec::Logistic(LogisticParams { rho: 1.0, k: 0.0 })
            .validate()
            .unwrap_err();
        match err {
            Error::ParameterOutOfRange { field, .. } => assert_eq!(field, "K"),
            other => panic!("expected ParameterOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_return_dominating_interdependence() {
        let err = ModelSpec::PredatorPrey(PredatorPreyParams {
            delta: 0.5,
            epsilon: 0.6,
            alpha: 0.5,
            beta: 0.25,
        })
        .validate()
        .unwrap_err();
        match err {
            Error::ParameterOutOfRange { field, constraint } => {
                assert_eq!(field, "alpha");
                assert_eq!(constraint, "> epsilon");
            }
            other => panic!("expected ParameterOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn logistic_rate_vanishes_at_threshold() {
        let m = ModelSpec::Logistic(LogisticParams { rho: 1.0, k: 10.0 })
            .validate()
            .unwrap();
        assert_eq!(m.derivative(&[10.0]).unwrap(), vec![0.0]);
        assert_eq!(m.derivative(&[0.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn coexistence_point_is_stationary() {
        let m = ModelSpec::PredatorPrey(PredatorPreyParams {
            delta: 1.0,
            epsilon: 0.5,
            alpha: 0.5,
            beta: 0.25,
        })
        .validate()
        .unwrap();
        // (beta/alpha, delta/epsilon) = (0.5, 2).
        let rate = m.derivative(&[0.5, 2.0]).unwrap();
        assert!(rate[0].abs() <= 1e-15 && rate[1].abs() <= 1e-15, "{rate:?}");
    }

    #[test]
    fn symmetric_competitive_interior_is_stationary() {
        let m = nondim_competitive(0.5, 0.5, 1.0);
        let rate = m.derivative(&[2.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!(rate[0].abs() <= 1e-15 && rate[1].abs() <= 1e-15, "{rate:?}");
    }

    #[test]
    fn root_search_recovers_symmetric_interior() {
        let m = nondim_competitive(0.5, 0.5, 1.0);
        let root =
            crate::testkit::grid_root_2d(|s| m.derivative(s).unwrap(), [0.2, 0.2], [0.95, 0.95]);
        assert!((root[0] - 2.0 / 3.0).abs() < 1e-6, "{root:?}");
        assert!((root[1] - 2.0 / 3.0).abs() < 1e-6, "{root:?}");
    }

    #[test]
    fn derivative_checks_state_dimension() {
        let m = nondim_competitive(0.5, 0.5, 1.0);
        match m.derivative(&[1.0]) {
            Err(Error::DimensionMismatch { expected: 2, got: 1 }) => {}
            other => panic!("expected DimensionMismatch, got {other:?}"),
        }
    }

    #[test]
    fn nondimensionalize_matches_scale_definitions() {
        let cases = [
            ((1.0, 1.0, 1.0, 1.0, 0.5, 0.5), (0.5, 0.5, 1.0)),
            ((2.0, 1.0, 4.0, 3.0, 0.2, 0.1), (0.6, 0.4, 0.5)),
            ((1.0, 3.0, 2.0, 2.0, 1.0, 1.0), (2.0, 2.0, 3.0)),
        ];
        for ((rho1, rho2, k1, k2, c1, c2), (a12, a21, rho)) in cases {
            let p = TwoPlayerParams {
                rho1,
                rho2,
                k1,
                k2,
                c1,
                c2,
            };
            let (nd, scales) = nondimensionalize(&p, InteractionMode::Competitive).unwrap();
            assert!((nd.a12 - a12).abs() < 1e-15, "{nd:?}");
            assert!((nd.a21 - a21).abs() < 1e-15, "{nd:?}");
            assert!((nd.rho - rho).abs() < 1e-15, "{nd:?}");
            assert_eq!(scales.time, rho1);
            assert_eq!(scales.state, [k1, k2]);
        }
    }

    #[test]
    fn nplayer_validate_rejects_nonzero_diagonal() {
        let p = NPlayerParams {
            n: 2,
            rho: vec![1.0, 1.0],
            k: vec![1.0, 1.0],
            c: vec![vec![0.1, 0.5], vec![0.5, 0.0]],
            mode: InteractionMode::Competitive,
        };
        match p.validate() {
            Err(Error::ParameterOutOfRange { field, .. }) => assert_eq!(field, "C[i][i]"),
            other => panic!("expected ParameterOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn nplayer_validate_rejects_ragged_interaction_matrix() {
        let p = NPlayerParams {
            n: 2,
            rho: vec![1.0, 1.0],
            k: vec![1.0, 1.0],
            c: vec![vec![0.0, 0.5], vec![0.5]],
            mode: InteractionMode::Competitive,
        };
        assert!(matches!(
            p.validate(),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn nplayer_reduces_to_two_player_form() {
        let two = ModelSpec::Competitive2(TwoPlayerParams {
            rho1: 1.2,
            rho2: 0.8,
            k1: 3.0,
            k2: 2.0,
            c1: 0.3,
            c2: 0.4,
        })
        .validate()
        .unwrap();
        let n = ModelSpec::NPlayer(NPlayerParams {
            n: 2,
            rho: vec![1.2, 0.8],
            k: vec![3.0, 2.0],
            c: vec![vec![0.0, 0.3], vec![0.4, 0.0]],
            mode: InteractionMode::Competitive,
        })
        .validate()
        .unwrap();
        let state = [1.7, 0.9];
        assert_eq!(two.derivative(&state).unwrap(), n.derivative(&state).unwrap());
    }

    fn arb_mode() -> impl Strategy<Value = InteractionMode> {
        prop_oneof![
            Just(InteractionMode::Competitive),
            Just(InteractionMode::Cooperative)
        ]
    }

    proptest! {
        #[test]
        fn zero_component_has_zero_rate_nondim(
            a12 in 0.05f64..3.0, a21 in 0.05f64..3.0, rho in 0.1f64..3.0,
            mode in arb_mode(), other in 0.0f64..2.0, zero_first in any::<bool>(),
        ) {
            let m = ModelSpec::Nondim(NondimParams { a12, a21, rho, mode }).validate().unwrap();
            let state = if zero_first { [0.0, other] } else { [other, 0.0] };
            let rate = m.derivative(&state).unwrap();
            let idx = usize::from(!zero_first);
            prop_assert_eq!(rate[idx], 0.0);
        }

        #[test]
        fn zero_component_has_zero_rate_nplayer(
            seed_rho in proptest::collection::vec(0.1f64..2.0, 3),
            seed_k in proptest::collection::vec(0.1f64..2.0, 3),
            coupling in 0.0f64..0.5,
            mode in arb_mode(),
            zero_at in 0usize..3,
            fill in 0.0f64..2.0,
        ) {
            let mut c = vec![vec![coupling; 3]; 3];
            for i in 0..3 { c[i][i] = 0.0; }
            let m = ModelSpec::NPlayer(NPlayerParams {
                n: 3, rho: seed_rho, k: seed_k, c, mode,
            }).validate().unwrap();
            let mut state = vec![fill; 3];
            state[zero_at] = 0.0;
            let rate = m.derivative(&state).unwrap();
            prop_assert_eq!(rate[zero_at], 0.0);
        }

        #[test]
        fn zero_component_has_zero_rate_predator_prey(
            delta in 0.3f64..1.0, beta_frac in 0.05f64..0.95,
            alpha in 0.3f64..1.0, eps_frac in 0.05f64..0.95,
            other in 0.0f64..3.0, zero_first in any::<bool>(),
        ) {
            let m = ModelSpec::PredatorPrey(PredatorPreyParams {
                delta,
                epsilon: alpha * eps_frac,
                alpha,
                beta: delta * beta_frac,
            }).validate().unwrap();
            let state = if zero_first { [0.0, other] } else { [other, 0.0] };
            let rate = m.derivative(&state).unwrap();
            let idx = usize::from(!zero_first);
            prop_assert_eq!(rate[idx], 0.0);
        }
    }
}
