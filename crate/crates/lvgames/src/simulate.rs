//! Fixed-step Runge-Kutta integration, phase-portrait grids, attractor
//! detection, and the predator-prey conserved-quantity drift monitor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equilibria::EquilibriumPoint;
use crate::error::{Error, Result};
use crate::fmt::fmt_sig;
use crate::model::{PredatorPreyParams, ValidatedModel};

/// Integrator settings. The seed only feeds optional grid jitter; the
/// integration itself is deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationConfig {
    pub t_end: f64,
    pub step: f64,
    pub blowup_threshold: f64,
    pub seed: u64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            t_end: 100.0,
            step: 1e-3,
            blowup_threshold: 1e9,
            seed: 0,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "t_end = {} must be positive and finite",
                self.t_end
            )));
        }
        if !self.step.is_finite() || self.step <= 0.0 || self.step > self.t_end {
            return Err(Error::InvalidConfig(format!(
                "step = {} must lie in (0, t_end]",
                self.step
            )));
        }
        if !self.blowup_threshold.is_finite() || self.blowup_threshold <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "blowup_threshold = {} must be positive and finite",
                self.blowup_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrajectoryStatus {
    /// Ran to t_end.
    Completed,
    /// State left the admissible region; integration stopped at `t` and the
    /// offending state was not recorded.
    Blowup { t: f64 },
    /// The initial state already violated the blow-up threshold.
    Invalid,
}

/// A sampled solution on the uniform grid t_i = i * step. States are stored
/// row-major: sample i occupies `states[i*dim .. (i+1)*dim]`. Every recorded
/// state is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<f64>,
    pub dim: usize,
    pub status: TrajectoryStatus,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn final_state(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    /// CSV rendering with header `t,x1,...,xn` and significant-digit
    /// formatting.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("t");
        for j in 1..=self.dim {
            out.push_str(&format!(",x{j}"));
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&fmt_sig(self.times[i], digits));
            for x in self.state(i) {
                out.push(',');
                out.push_str(&fmt_sig(*x, digits));
            }
            out.push('\n');
        }
        out
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Classical fourth-order Runge-Kutta with a fixed step.
///
/// Sample times are i * step up to the multiple of step nearest t_end. If a
/// step produces a non-finite state or one whose max-norm exceeds the
/// blow-up threshold, that state is dropped and the trajectory ends with
/// blow-up status at the offending time. An initial state already past the
/// threshold yields a single-sample trajectory with invalid status.
pub fn integrate(
    model: &ValidatedModel,
    initial: &[f64],
    config: &IntegrationConfig,
) -> Result<Trajectory> {
    config.validate()?;
    let dim = model.dimension();
    if initial.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: initial.len(),
        });
    }
    for (i, &x) in initial.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "initial state [{i}] = {x} must be finite and nonnegative"
            )));
        }
    }

    let n_steps = (config.t_end / config.step).round() as usize;
    let n_steps = n_steps.max(1);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity((n_steps + 1) * dim);
    times.push(0.0);
    states.extend_from_slice(initial);

    if max_norm(initial) > config.blowup_threshold {
        return Ok(Trajectory {
            times,
            states,
            dim,
            status: TrajectoryStatus::Invalid,
        });
    }

    let h = config.step;
    let mut y = initial.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];

    for i in 1..=n_steps {
        model.eval_into(&y, &mut k1);
        for j in 0..dim {
            stage[j] = y[j] + 0.5 * h * k1[j];
        }
        model.eval_into(&stage, &mut k2);
        for j in 0..dim {
            stage[j] = y[j] + 0.5 * h * k2[j];
        }
        model.eval_into(&stage, &mut k3);
        for j in 0..dim {
            stage[j] = y[j] + h * k3[j];
        }
        model.eval_into(&stage, &mut k4);
        for j in 0..dim {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = i as f64 * h;
        if y.iter().any(|v| !v.is_finite()) || max_norm(&y) > config.blowup_threshold {
            return Ok(Trajectory {
                times,
                states,
                dim,
                status: TrajectoryStatus::Blowup { t },
            });
        }
        times.push(t);
        states.extend_from_slice(&y);
    }

    Ok(Trajectory {
        times,
        states,
        dim,
        status: TrajectoryStatus::Completed,
    })
}

/// Initial conditions for a portrait: a uniform lattice (optionally jittered)
/// or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum PortraitGrid {
    Lattice {
        mins: Vec<f64>,
        maxs: Vec<f64>,
        counts: Vec<usize>,
        /// Jitter amplitude as a fraction of the lattice spacing per axis;
        /// 0 disables it. Jittered coordinates are clamped at 0.
        jitter: f64,
    },
    Explicit(Vec<Vec<f64>>),
}

impl PortraitGrid {
    /// Expands the grid to concrete initial conditions in row-major order
    /// (the last axis varies fastest). Jitter draws from a seeded generator,
    /// so equal seeds give equal grids.
    pub fn points(&self, dim: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        match self {
            PortraitGrid::Explicit(points) => {
                if points.is_empty() {
                    return Err(Error::InvalidConfig("empty initial-condition list".into()));
                }
                for p in points {
                    if p.len() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            got: p.len(),
                        });
                    }
                }
                Ok(points.clone())
            }
            PortraitGrid::Lattice {
                mins,
                maxs,
                counts,
                jitter,
            } => {
                if mins.len() != dim || maxs.len() != dim || counts.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: mins.len().min(maxs.len()).min(counts.len()),
                    });
                }
                if *jitter < 0.0 || !jitter.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "jitter = {jitter} must be finite and nonnegative"
                    )));
                }
                let mut spacing = vec![0.0; dim];
                for a in 0..dim {
                    if counts[a] == 0 {
                        return Err(Error::InvalidConfig(format!(
                            "count along axis {a} must be at least 1"
                        )));
                    }
                    if counts[a] > 1 {
                        if maxs[a] <= mins[a] {
                            return Err(Error::InvalidConfig(format!(
                                "axis {a} range [{}, {}] must have positive width",
                                mins[a], maxs[a]
                            )));
                        }
                        spacing[a] = (maxs[a] - mins[a]) / (counts[a] - 1) as f64;
                    }
                }
                let total: usize = counts.iter().product();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut points = Vec::with_capacity(total);
                let mut index = vec![0usize; dim];
                for _ in 0..total {
                    let mut p = Vec::with_capacity(dim);
                    for a in 0..dim {
                        let mut x = mins[a] + index[a] as f64 * spacing[a];
                        if *jitter > 0.0 && spacing[a] > 0.0 {
                            let amp = jitter * spacing[a];
                            x += rng.gen_range(-amp..=amp);
                            x = x.max(0.0);
                        }
                        p.push(x);
                    }
                    points.push(p);
                    for a in (0..dim).rev() {
                        index[a] += 1;
                        if index[a] < counts[a] {
                            break;
                        }
                        index[a] = 0;
                    }
                }
                Ok(points)
            }
        }
    }
}

/// Integrates one trajectory per grid point. Trajectories are independent
/// and run in parallel; results are assembled in grid order, so output is
/// identical to the sequential run.
pub fn phase_portrait(
    model: &ValidatedModel,
    grid: &PortraitGrid,
    config: &IntegrationConfig,
) -> Result<Vec<Trajectory>> {
    config.validate()?;
    let points = grid.points(model.dimension(), config.seed)?;
    points
        .par_iter()
        .map(|p| integrate(model, p, config))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttractorOutcome {
    /// Settled on `candidates[index]`.
    Converged { index: usize },
    Divergent,
    Undecided,
}

/// Decides which candidate point a trajectory settled on.
///
/// Blow-up means divergent. Otherwise the nearest candidate (Euclidean) to
/// the final state must lie within `tol`, and the last 10% of samples must
/// all stay within `tol` of it; an oscillating or still-transient orbit is
/// undecided, as is an invalid trajectory.
pub fn detect_attractor(
    traj: &Trajectory,
    candidates: &[EquilibriumPoint],
    tol: f64,
) -> AttractorOutcome {
    match traj.status {
        TrajectoryStatus::Blowup { .. } => return AttractorOutcome::Divergent,
        TrajectoryStatus::Invalid => return AttractorOutcome::Undecided,
        TrajectoryStatus::Completed => {}
    }
    if traj.is_empty() || candidates.is_empty() {
        return AttractorOutcome::Undecided;
    }
    let distance = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    let final_state = traj.final_state();
    let (index, dist) = candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.coords.len() == traj.dim)
        .map(|(i, c)| (i, distance(final_state, &c.coords)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("distances are finite"))
        .unwrap_or((0, f64::INFINITY));
    if dist > tol {
        return AttractorOutcome::Undecided;
    }
    let tail = (traj.len() / 10).max(1);
    let target = &candidates[index].coords;
    let settled = (traj.len() - tail..traj.len()).all(|i| distance(traj.state(i), target) <= tol);
    if settled {
        AttractorOutcome::Converged { index }
    } else {
        AttractorOutcome::Undecided
    }
}

/// Maximum drift of the conserved quantity
///
///   H(p, r) = alpha p - beta ln p + epsilon r - delta ln r
///
/// over a predator-prey trajectory: max_t |H(t) - H(0)|. H is constant on
/// exact solutions, so the drift measures integration error. States must be
/// strictly positive for the logarithms.
pub fn first_integral_drift(traj: &Trajectory, params: &PredatorPreyParams) -> Result<f64> {
    assert_eq!(traj.dim, 2, "first integral is defined for the planar model");
    let h = |p: f64, r: f64| {
        params.alpha * p - params.beta * p.ln() + params.epsilon * r - params.delta * r.ln()
    };
    let mut h0 = 0.0;
    let mut drift = 0.0f64;
    for i in 0..traj.len() {
        let s = traj.state(i);
        for (j, &x) in s.iter().enumerate() {
            if x <= 0.0 {
                return Err(Error::NonPositiveState {
                    t: traj.times[i],
                    index: j,
                    value: x,
                });
            }
        }
        let hi = h(s[0], s[1]);
        if i == 0 {
            h0 = hi;
        } else {
            drift = drift.max((hi - h0).abs());
        }
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::logistic_solution;
    use crate::equilibria::{enumerate_equilibria, DEFAULT_RESIDUAL_TOL};
    use crate::model::{InteractionMode, LogisticParams, ModelSpec, NondimParams};
    use proptest::prelude::*;

    fn logistic(rho: f64, k: f64) -> ValidatedModel {
        ModelSpec::Logistic(LogisticParams { rho, k }).validate().unwrap()
    }

    fn nondim(a12: f64, a21: f64, rho: f64, mode: InteractionMode) -> ValidatedModel {
        ModelSpec::Nondim(NondimParams { a12, a21, rho, mode })
            .validate()
            .unwrap()
    }

    fn pp_example() -> ValidatedModel {
        ModelSpec::PredatorPrey(PredatorPreyParams {
            delta: 1.0,
            epsilon: 0.5,
            alpha: 0.5,
            beta: 0.25,
        })
        .validate()
        .unwrap()
    }

    fn pp_params() -> PredatorPreyParams {
        PredatorPreyParams {
            delta: 1.0,
            epsilon: 0.5,
            alpha: 0.5,
            beta: 0.25,
        }
    }

    fn config(t_end: f64, step: f64) -> IntegrationConfig {
        IntegrationConfig {
            t_end,
            step,
            ..IntegrationConfig::default()
        }
    }

    #[test]
    fn config_invariants_are_enforced() {
        let bad = [
            IntegrationConfig { t_end: 0.0, ..Default::default() },
            IntegrationConfig { t_end: -1.0, ..Default::default() },
            IntegrationConfig { step: 0.0, ..Default::default() },
            IntegrationConfig { step: 101.0, ..Default::default() },
            IntegrationConfig { blowup_threshold: 0.0, ..Default::default() },
            IntegrationConfig { t_end: f64::NAN, ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))), "{c:?}");
        }
        IntegrationConfig::default().validate().unwrap();
    }

    #[test]
    fn logistic_matches_closed_form() {
        let m = logistic(1.0, 10.0);
        let traj = integrate(&m, &[1.0], &config(10.0, 1e-3)).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::Completed);
        let expected = logistic_solution(1.0, 10.0, 1.0, 10.0).unwrap();
        let got = traj.final_state()[0];
        assert!((got - expected).abs() < 1e-8, "{got} vs {expected}");
    }

    #[test]
    fn weak_competition_settles_at_interior_point() {
        let m = nondim(0.5, 0.5, 1.0, InteractionMode::Competitive);
        let traj = integrate(&m, &[0.1, 0.9], &config(100.0, 1e-3)).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::Completed);
        let f = traj.final_state();
        assert!((f[0] - 2.0 / 3.0).abs() < 1e-4, "{f:?}");
        assert!((f[1] - 2.0 / 3.0).abs() < 1e-4, "{f:?}");
    }

    #[test]
    fn strong_cooperation_blows_up() {
        let m = nondim(2.0, 2.0, 1.0, InteractionMode::Cooperative);
        let traj = integrate(&m, &[1.0, 1.0], &config(100.0, 1e-3)).unwrap();
        match traj.status {
            TrajectoryStatus::Blowup { t } => assert!(t < 2.0, "blow-up at {t}"),
            other => panic!("expected blow-up, got {other:?}"),
        }
        assert!(traj.states.iter().all(|x| x.is_finite()));
        assert!(max_norm(traj.final_state()) <= 1e9);
    }

    #[test]
    fn initial_state_past_threshold_is_invalid() {
        let m = nondim(0.5, 0.5, 1.0, InteractionMode::Competitive);
        let traj = integrate(&m, &[2e9, 0.5], &config(1.0, 0.1)).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::Invalid);
        assert_eq!(traj.len(), 1);
    }

    #[test]
    fn negative_initial_state_is_rejected() {
        let m = nondim(0.5, 0.5, 1.0, InteractionMode::Competitive);
        assert!(matches!(
            integrate(&m, &[-0.1, 0.5], &config(1.0, 0.1)),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            integrate(&m, &[0.1], &config(1.0, 0.1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sample_times_are_uniform() {
        let m = logistic(1.0, 1.0);
        let traj = integrate(&m, &[0.5], &config(1.0, 0.125)).unwrap();
        assert_eq!(traj.len(), 9);
        for (i, t) in traj.times.iter().enumerate() {
            assert_eq!(*t, i as f64 * 0.125);
        }
    }

    #[test]
    fn trajectory_started_at_rest_stays_put() {
        let m = nondim(0.5, 0.5, 1.0, InteractionMode::Competitive);
        let grid = PortraitGrid::Explicit(vec![vec![2.0 / 3.0, 2.0 / 3.0]]);
        let trajs = phase_portrait(&m, &grid, &config(1.0, 1e-2)).unwrap();
        assert_eq!(trajs.len(), 1);
        for i in 0..trajs[0].len() {
            let s = trajs[0].state(i);
            assert!((s[0] - 2.0 / 3.0).abs() < 1e-12);
            assert!((s[1] - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lattice_points_come_in_row_major_order() {
        let grid = PortraitGrid::Lattice {
            mins: vec![0.0, 10.0],
            maxs: vec![1.0, 20.0],
            counts: vec![2, 3],
            jitter: 0.0,
        };
        let pts = grid.points(2, 0).unwrap();
        assert_eq!(
            pts,
            vec![
                vec![0.0, 10.0],
                vec![0.0, 15.0],
                vec![0.0, 20.0],
                vec![1.0, 10.0],
                vec![1.0, 15.0],
                vec![1.0, 20.0],
            ]
        );
    }

    #[test]
    fn lattice_validation() {
        let grid = PortraitGrid::Lattice {
            mins: vec![0.0],
            maxs: vec![0.0],
            counts: vec![3],
            jitter: 0.0,
        };
        assert!(matches!(grid.points(1, 0), Err(Error::InvalidConfig(_))));
        let grid = PortraitGrid::Lattice {
            mins: vec![0.0],
            maxs: vec![1.0],
            counts: vec![0],
            jitter: 0.0,
        };
        assert!(matches!(grid.points(1, 0), Err(Error::InvalidConfig(_))));
        let grid = PortraitGrid::Explicit(vec![]);
        assert!(matches!(grid.points(1, 0), Err(Error::InvalidConfig(_))));
        let grid = PortraitGrid::Lattice {
            mins: vec![0.0],
            maxs: vec![1.0],
            counts: vec![2],
            jitter: 0.0,
        };
        assert!(matches!(grid.points(2, 0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn jitter_is_seeded_and_clamped() {
        let grid = |jitter| PortraitGrid::Lattice {
            mins: vec![0.0, 0.0],
            maxs: vec![1.0, 1.0],
            counts: vec![3, 3],
            jitter,
        };
        let a = grid(0.4).points(2, 7).unwrap();
        let b = grid(0.4).points(2, 7).unwrap();
        assert_eq!(a, b);
        let c = grid(0.4).points(2, 8).unwrap();
        assert_ne!(a, c);
        let plain = grid(0.0).points(2, 7).unwrap();
        assert_ne!(a, plain);
        for p in &a {
            assert!(p.iter().all(|x| *x >= 0.0), "{p:?}");
        }
    }

    #[test]
    fn detect_attractor_picks_nearest_settled_candidate() {
        let m = nondim(0.5, 0.5, 1.0, InteractionMode::Competitive);
        let candidates = enumerate_equilibria(&m, DEFAULT_RESIDUAL_TOL).unwrap();
        let traj = Trajectory {
            times: vec![0.0, 1.0, 2.0],
            states: vec![0.1, 0.9, 0.6667, 0.6666, 0.66668, 0.66665],
            dim: 2,
            status: TrajectoryStatus::Completed,
        };
        assert_eq!(
            detect_attractor(&traj, &candidates, 1e-3),
            AttractorOutcome::Converged { index: 3 }
        );
    }

    #[test]
    fn blowup_is_divergent() {
        let m = nondim(2.0, 2.0, 1.0, InteractionMode::Cooperative);
        let traj = integrate(&m, &[1.0, 1.0], &config(100.0, 1e-3)).unwrap();
        assert_eq!(detect_attractor(&traj, &[], 1e-3), AttractorOutcome::Divergent);
    }

    #[test]
    fn oscillating_orbit_is_undecided() {
        let m = pp_example();
        let candidates = enumerate_equilibria(&m, DEFAULT_RESIDUAL_TOL).unwrap();
        let traj = integrate(&m, &[1.0, 1.0], &config(40.0, 1e-3)).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::Completed);
        assert_eq!(
            detect_attractor(&traj, &candidates, 1e-3),
            AttractorOutcome::Undecided
        );
    }

    #[test]
    fn drift_is_zero_on_the_coexistence_point() {
        let m = pp_example();
        let traj = integrate(&m, &[0.5, 2.0], &config(5.0, 1e-2)).unwrap();
        let drift = first_integral_drift(&traj, &pp_params()).unwrap();
        assert!(drift <= 1e-12, "drift {drift}");
    }

    #[test]
    fn drift_stays_small_at_fine_steps_and_grows_with_coarse_ones() {
        let m = pp_example();
        let fine = integrate(&m, &[1.0, 1.0], &config(50.0, 1e-3)).unwrap();
        let fine_drift = first_integral_drift(&fine, &pp_params()).unwrap();
        assert!(fine_drift < 1e-6, "drift {fine_drift}");
        let coarse = integrate(&m, &[1.0, 1.0], &config(50.0, 0.1)).unwrap();
        let coarse_drift = first_integral_drift(&coarse, &pp_params()).unwrap();
        assert!(coarse_drift > fine_drift, "{coarse_drift} vs {fine_drift}");
    }

    #[test]
    fn drift_rejects_states_on_the_axes() {
        let m = pp_example();
        let traj = integrate(&m, &[0.0, 2.0], &config(1.0, 1e-2)).unwrap();
        match first_integral_drift(&traj, &pp_params()) {
            Err(Error::NonPositiveState { index: 0, value, .. }) => assert_eq!(value, 0.0),
            other => panic!("expected NonPositiveState, got {other:?}"),
        }
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let m = logistic(1.0, 1.0);
        let traj = integrate(&m, &[0.5], &config(0.5, 0.25)).unwrap();
        let csv = traj.to_csv(6);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x1");
        assert_eq!(lines.len(), 1 + traj.len());
        let last: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(last[0], 0.5);
        assert!((last[1] - traj.final_state()[0]).abs() < 1e-5);
    }

    #[test]
    fn integration_is_deterministic() {
        let m = pp_example();
        let a = integrate(&m, &[1.0, 1.0], &config(10.0, 1e-2)).unwrap();
        let b = integrate(&m, &[1.0, 1.0], &config(10.0, 1e-2)).unwrap();
        assert_eq!(a, b);
        let grid = PortraitGrid::Lattice {
            mins: vec![0.1, 0.1],
            maxs: vec![1.5, 1.5],
            counts: vec![4, 4],
            jitter: 0.25,
        };
        let m2 = nondim(0.5, 0.5, 1.0, InteractionMode::Competitive);
        let cfg = IntegrationConfig { t_end: 5.0, step: 1e-2, seed: 11, ..Default::default() };
        let pa = phase_portrait(&m2, &grid, &cfg).unwrap();
        let pb = phase_portrait(&m2, &grid, &cfg).unwrap();
        assert_eq!(pa, pb);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rk4_shows_fourth_order_convergence(
            rho in 0.5f64..2.0, k in 0.5f64..3.0, frac in 0.1f64..0.9,
        ) {
            let n0 = frac * k;
            let m = logistic(rho, k);
            let exact = logistic_solution(n0, k, rho, 2.0).unwrap();
            let coarse = integrate(&m, &[n0], &config(2.0, 0.05)).unwrap();
            let fine = integrate(&m, &[n0], &config(2.0, 0.025)).unwrap();
            let e_coarse = (coarse.final_state()[0] - exact).abs();
            let e_fine = (fine.final_state()[0] - exact).abs();
            prop_assume!(e_fine > 1e-14);
            prop_assert!(
                e_coarse / e_fine >= 8.0,
                "ratio {} (errors {e_coarse} / {e_fine})", e_coarse / e_fine
            );
        }

        // The -10*step overshoot bound is a statement about orbits that stay
        // at order-one scale, so the draws cover the bounded regimes:
        // competitive pairs of any strength and cooperative pairs below the
        // divergence boundary a12*a21 = 1. Exploding cooperative orbits leave
        // that scale and are covered by the blow-up status contract instead.
        #[test]
        fn orthant_is_preserved_to_overshoot_tolerance(
            a12 in 0.05f64..3.0, a21 in 0.05f64..3.0, rho in 0.2f64..3.0,
            x in 0.0f64..1.5, y in 0.0f64..1.5,
            coop in any::<bool>(),
        ) {
            prop_assume!(!coop || a12 * a21 < 0.8);
            let mode = if coop { InteractionMode::Cooperative } else { InteractionMode::Competitive };
            let m = nondim(a12, a21, rho, mode);
            let step = 0.01;
            let traj = integrate(&m, &[x, y], &config(5.0, step)).unwrap();
            for s in traj.states.iter() {
                prop_assert!(*s >= -10.0 * step, "state {s}");
            }
        }
    }
}
