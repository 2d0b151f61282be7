//! Closed forms: the single-player logistic solution, the zero-interaction
//! exponential risk/return curves, and the amplitude/e decision threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form solution of dN/dt = rho N (1 - N/K):
///
/// N(t) = N0 / (N0/K + (1 - N0/K) e^{-rho t})
pub fn logistic_solution(n0: f64, k: f64, rho: f64, t: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::ParameterOutOfRange {
            field: "K",
            constraint: "> 0",
        });
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::ParameterOutOfRange {
            field: "rho",
            constraint: "> 0",
        });
    }
    if !(n0.is_finite() && n0 >= 0.0) {
        return Err(Error::ParameterOutOfRange {
            field: "N0",
            constraint: ">= 0",
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::ParameterOutOfRange {
            field: "t",
            constraint: ">= 0",
        });
    }
    if n0 == 0.0 {
        return Ok(0.0);
    }
    let frac = n0 / k;
    // The denominator stays in [min(1, frac), max(1, frac)]; it cannot vanish
    // for t >= 0.
    Ok(n0 / (frac + (1.0 - frac) * (-rho * t).exp()))
}

/// Direction of a zero-interaction exponential curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveSign {
    Growth,
    Decay,
}

/// One exponential branch of the decoupled predator-prey system: amplitude
/// A (or B) and exponent magnitude delta (or alpha).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialCurve {
    pub amplitude: f64,
    pub rate: f64,
    pub sign: CurveSign,
}

impl ExponentialCurve {
    pub fn growth(amplitude: f64, rate: f64) -> Result<Self> {
        Self::new(amplitude, rate, CurveSign::Growth)
    }

    pub fn decay(amplitude: f64, rate: f64) -> Result<Self> {
        Self::new(amplitude, rate, CurveSign::Decay)
    }

    fn new(amplitude: f64, rate: f64, sign: CurveSign) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::ParameterOutOfRange {
                field: "amplitude",
                constraint: "> 0",
            });
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::ParameterOutOfRange {
                field: "rate",
                constraint: "> 0",
            });
        }
        Ok(ExponentialCurve {
            amplitude,
            rate,
            sign,
        })
    }
}

fn require_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            field: "t",
            constraint: ">= 0",
        })
    }
}

/// Zero-interaction policyholder risk P(t) = A e^{delta t}.
///
/// Results past the representable range are reported as `Overflow` instead of
/// infinity.
pub fn zero_interaction_risk(curve: &ExponentialCurve, t: f64) -> Result<f64> {
    if curve.sign != CurveSign::Growth {
        return Err(Error::ParameterOutOfRange {
            field: "curve.sign",
            constraint: "growth",
        });
    }
    require_time(t)?;
    let value = curve.amplitude * (curve.rate * t).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!(
            "risk curve exceeds f64 range at t = {t}"
        )))
    }
}

/// Zero-interaction insurer return R(t) = B e^{-alpha t}.
pub fn zero_interaction_return(curve: &ExponentialCurve, t: f64) -> Result<f64> {
    if curve.sign != CurveSign::Decay {
        return Err(Error::ParameterOutOfRange {
            field: "curve.sign",
            constraint: "decay",
        });
    }
    require_time(t)?;
    Ok(curve.amplitude * (-curve.rate * t).exp())
}

/// Decision guideline for an exponential curve with limit A: the threshold
/// A/e.
pub fn threshold_constant(limit: f64) -> Result<f64> {
    if !(limit.is_finite() && limit > 0.0) {
        return Err(Error::ParameterOutOfRange {
            field: "limit",
            constraint: "> 0",
        });
    }
    Ok(limit / std::f64::consts::E)
}
