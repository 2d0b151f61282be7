//! Annual premium/claim series: CSV loading, per-year OLS slopes, and the
//! premium-claim relationship report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::fmt_sig;

/// Net written premiums and net claims incurred by calendar year
/// (currency, millions).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketSeries {
    pub years: Vec<i32>,
    pub premiums: Vec<f64>,
    pub claims: Vec<f64>,
}

impl MarketSeries {
    /// Validates equal lengths of at least two rows and strictly increasing
    /// years.
    pub fn new(years: Vec<i32>, premiums: Vec<f64>, claims: Vec<f64>) -> Result<Self> {
        if years.len() != premiums.len() || years.len() != claims.len() {
            return Err(Error::DimensionMismatch {
                expected: years.len(),
                got: premiums.len().min(claims.len()),
            });
        }
        if years.is_empty() {
            return Err(Error::EmptySeries);
        }
        if years.len() < 2 {
            return Err(Error::TooFewRows(years.len()));
        }
        for (i, w) in years.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NonMonotoneYears { row: i + 2 });
            }
        }
        Ok(MarketSeries {
            years,
            premiums,
            claims,
        })
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }
}

pub const SERIES_HEADER: &str = "year,net_written_premium,net_claims_incurred";

/// Parses CSV text with header `year,net_written_premium,net_claims_incurred`
/// into a validated series.
pub fn load_series(text: &str) -> Result<MarketSeries> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptySeries)?;
    if header.trim() != SERIES_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {SERIES_HEADER:?}, found {:?}", header.trim()),
        });
    }
    let mut years = Vec::new();
    let mut premiums = Vec::new();
    let mut claims = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        years.push(fields[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad year {:?}", fields[0]),
        })?);
        premiums.push(fields[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad premium {:?}", fields[1]),
        })?);
        claims.push(fields[2].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad claim {:?}", fields[2]),
        })?);
    }
    MarketSeries::new(years, premiums, claims)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesField {
    Premiums,
    Claims,
}

impl std::fmt::Display for SeriesField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesField::Premiums => write!(f, "premiums"),
            SeriesField::Claims => write!(f, "claims"),
        }
    }
}

/// Least-squares fit y = intercept + slope * year. The slope is currency per
/// calendar year; the intercept refers to year 0 of the expanded centered
/// form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
}

/// Ordinary least squares of the chosen field against calendar year, by the
/// centered formula slope = sum((x - mean x)(y - mean y)) / sum((x - mean x)^2).
pub fn ols_slope(series: &MarketSeries, field: SeriesField) -> Result<RegressionResult> {
    let y = match field {
        SeriesField::Premiums => &series.premiums,
        SeriesField::Claims => &series.claims,
    };
    let n = series.len();
    let xs: Vec<f64> = series.years.iter().map(|&y| y as f64).collect();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(y) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let slope = sxy / sxx;
    Ok(RegressionResult {
        slope,
        intercept: my - slope * mx,
        n,
    })
}

/// Premium-claim relationship summary: both time slopes plus the Pearson
/// correlation between the two series. The correlation is None when either
/// series is constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketReport {
    pub premium_regression: RegressionResult,
    pub claim_regression: RegressionResult,
    pub correlation: Option<f64>,
    /// -1, 0, or +1; 0 when the correlation is undefined or exactly zero.
    pub correlation_sign: i8,
}

pub fn premium_claim_report(series: &MarketSeries) -> Result<MarketReport> {
    let premium_regression = ols_slope(series, SeriesField::Premiums)?;
    let claim_regression = ols_slope(series, SeriesField::Claims)?;
    let correlation = pearson(&series.premiums, &series.claims);
    let correlation_sign = match correlation {
        None => 0,
        Some(r) if r > 0.0 => 1,
        Some(r) if r < 0.0 => -1,
        Some(_) => 0,
    };
    Ok(MarketReport {
        premium_regression,
        claim_regression,
        correlation,
        correlation_sign,
    })
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        None
    } else {
        Some(sab / (saa * sbb).sqrt())
    }
}

/// Plot-ready CSV `year,premium,claim`, one row per observation.
pub fn plot_csv(series: &MarketSeries, digits: usize) -> String {
    let mut out = String::from("year,premium,claim\n");
    for i in 0..series.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            series.years[i],
            fmt_sig(series.premiums[i], digits),
            fmt_sig(series.claims[i], digits)
        ));
    }
    out
}
