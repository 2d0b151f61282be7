//! Deterministic Lotka-Volterra dynamics for insurance market games.
//!
//! The crate models insurers as interacting populations: logistic growth for
//! a lone player, competitive or cooperative pressure between two players, a
//! predator-prey pairing of policyholder risk and insurer return, and an
//! n-player generalization with a full coupling matrix. On top of the
//! dynamics sit equilibrium enumeration with stability classification, a
//! fixed-step RK4 integrator with phase-portrait sweeps, a premium game that
//! prices the interior Nash state, and regression over market series.
//!
//! Everything is deterministic: integration is fixed-step, randomized grid
//! jitter is seeded explicitly, and parallel sweeps preserve input order.
//! The `lvgames` binary in this crate exposes the same operations as
//! subcommands emitting JSON and CSV.

pub mod analytic;
pub mod cli;
pub mod equilibria;
pub mod error;
pub mod fmt;
pub mod market;
pub mod model;
pub mod premium;
pub mod simulate;
pub mod stability;

#[cfg(test)]
pub(crate) mod testkit;

pub use error::{Error, Result};
pub use model::{
    nondimensionalize, InteractionMode, LogisticParams, ModelSpec, NPlayerParams, NondimParams,
    PredatorPreyParams, ScaleRecord, TwoPlayerParams, ValidatedModel,
};

pub use equilibria::{
    enumerate_equilibria, interior_equilibrium_nplayer, verify_fixed_point, EquilibriumPoint,
    PointKind, DEFAULT_RESIDUAL_TOL,
};
pub use stability::{
    classify, cooperative_sign_check, eigenvalues_2x2, is_stable_matrix, jacobian,
    negative_diagonal_dominance, regime_case, stability_report, EigenPair, JacobianMatrix,
    PointClass, RegimeCase, StabilityReport, Verdict,
};

pub use simulate::{
    detect_attractor, first_integral_drift, integrate, phase_portrait, AttractorOutcome,
    IntegrationConfig, PortraitGrid, Trajectory, TrajectoryStatus,
};

pub use premium::{
    compare_to_market, exposure_premium_association, nash_premiums, parse_market_premiums,
    AssociationReport, GameResult, PremiumMapping,
};

pub use market::{
    load_series, ols_slope, plot_csv, premium_claim_report, MarketReport, MarketSeries,
    RegressionResult, SeriesField, SERIES_HEADER,
};
