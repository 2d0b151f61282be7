//! The n-player premium game: map the interior Nash state to currency
//! premiums and claim exposures, compare against market premiums, and rank
//! the premium/exposure association.

use serde::Serialize;

use crate::equilibria::{interior_equilibrium_nplayer, DEFAULT_RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::model::NPlayerParams;

/// Affine state-to-currency map: premium_i = base + scale * u_i and
/// claim_exposure_i = claim_base + claim_scale * w_i * u_i, with w the
/// per-player exposure weights (1 when omitted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumMapping {
    pub base: f64,
    pub scale: f64,
    pub claim_base: f64,
    pub claim_scale: f64,
    pub exposure_weights: Option<Vec<f64>>,
}

impl Default for PremiumMapping {
    fn default() -> Self {
        PremiumMapping {
            base: 0.0,
            scale: 300.0,
            claim_base: 0.0,
            claim_scale: 1.0,
            exposure_weights: None,
        }
    }
}

impl PremiumMapping {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !self.base.is_finite() {
            return Err(Error::ParameterOutOfRange {
                field: "base",
                constraint: "finite",
            });
        }
        if !self.claim_base.is_finite() {
            return Err(Error::ParameterOutOfRange {
                field: "claim_base",
                constraint: "finite",
            });
        }
        if !self.scale.is_finite() || self.scale <= 0.0 {
            return Err(Error::ParameterOutOfRange {
                field: "scale",
                constraint: "> 0",
            });
        }
        if !self.claim_scale.is_finite() || self.claim_scale <= 0.0 {
            return Err(Error::ParameterOutOfRange {
                field: "claim_scale",
                constraint: "> 0",
            });
        }
        if let Some(w) = &self.exposure_weights {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::ParameterOutOfRange {
                    field: "exposure_weights",
                    constraint: ">= 0",
                });
            }
        }
        Ok(())
    }
}

/// Premium-game outcome. Market fields stay empty until
/// `compare_to_market` fills them; `nash_state` is empty for results built
/// from observed premium tables, which carry no generating state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameResult {
    pub nash_state: Vec<f64>,
    pub nash_premiums: Vec<f64>,
    pub claim_exposures: Vec<f64>,
    pub market_premiums: Option<Vec<f64>>,
    /// Per player: Nash premium >= market premium.
    pub at_or_above_market: Option<Vec<bool>>,
}

impl GameResult {
    /// Wraps observed premium and exposure rows (no generating state).
    pub fn from_observations(nash_premiums: Vec<f64>, claim_exposures: Vec<f64>) -> Result<Self> {
        if nash_premiums.len() != claim_exposures.len() {
            return Err(Error::DimensionMismatch {
                expected: nash_premiums.len(),
                got: claim_exposures.len(),
            });
        }
        Ok(GameResult {
            nash_state: Vec::new(),
            nash_premiums,
            claim_exposures,
            market_premiums: None,
            at_or_above_market: None,
        })
    }

    pub fn n(&self) -> usize {
        self.nash_premiums.len()
    }

    /// 1-based indices of players whose Nash premium is strictly below
    /// market. None until market premiums are attached.
    pub fn below_market_players(&self) -> Option<Vec<usize>> {
        let market = self.market_premiums.as_ref()?;
        Some(
            self.nash_premiums
                .iter()
                .zip(market)
                .enumerate()
                .filter(|(_, (nash, m))| nash < m)
                .map(|(i, _)| i + 1)
                .collect(),
        )
    }
}

/// Solves the game's interior equilibrium and prices it.
pub fn nash_premiums(params: &NPlayerParams, mapping: &PremiumMapping) -> Result<GameResult> {
    params.validate()?;
    mapping.validate(params.n)?;
    let interior = interior_equilibrium_nplayer(params, DEFAULT_RESIDUAL_TOL)?;
    let u = interior.coords;
    let premiums: Vec<f64> = u.iter().map(|x| mapping.base + mapping.scale * x).collect();
    let exposures: Vec<f64> = u
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let w = mapping.exposure_weights.as_ref().map_or(1.0, |w| w[i]);
            mapping.claim_base + mapping.claim_scale * w * x
        })
        .collect();
    Ok(GameResult {
        nash_state: u,
        nash_premiums: premiums,
        claim_exposures: exposures,
        market_premiums: None,
        at_or_above_market: None,
    })
}

/// Attaches market premiums and the per-player comparison flags.
pub fn compare_to_market(mut result: GameResult, market: &[f64]) -> Result<GameResult> {
    if market.len() != result.n() {
        return Err(Error::DimensionMismatch {
            expected: result.n(),
            got: market.len(),
        });
    }
    result.at_or_above_market = Some(
        result
            .nash_premiums
            .iter()
            .zip(market)
            .map(|(nash, m)| nash >= m)
            .collect(),
    );
    result.market_premiums = Some(market.to_vec());
    Ok(result)
}

/// Ranking summary of the premium/exposure relationship. Player indices are
/// 1-based; ties pick the lowest index and are mentioned in the note.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociationReport {
    pub max_premium_player: usize,
    pub max_exposure_player: usize,
    pub min_premium_player: usize,
    /// Spearman rank correlation between premiums and exposures, when
    /// defined (constant inputs leave it undefined).
    pub spearman: Option<f64>,
    /// -1, 0, or +1; 0 when the correlation is undefined or exactly zero.
    pub spearman_sign: i8,
    pub note: Option<String>,
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x > xs[best] {
            best = i;
        }
    }
    best
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x < xs[best] {
            best = i;
        }
    }
    best
}

/// Ranks with ties averaged (1 = smallest value).
fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("rank inputs are finite"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
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

fn has_ties(xs: &[f64]) -> bool {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Extremal players and the Spearman sign for a priced game.
pub fn exposure_premium_association(result: &GameResult) -> Result<AssociationReport> {
    if result.n() < 2 {
        return Err(Error::InvalidConfig(
            "association needs at least two players".into(),
        ));
    }
    let premiums = &result.nash_premiums;
    let exposures = &result.claim_exposures;
    let spearman = pearson(&average_ranks(premiums), &average_ranks(exposures));
    let spearman_sign = match spearman {
        None => 0,
        Some(r) if r > 0.0 => 1,
        Some(r) if r < 0.0 => -1,
        Some(_) => 0,
    };
    let mut notes = Vec::new();
    if spearman.is_none() {
        notes.push("rank correlation undefined on constant inputs; sign reported as 0".to_string());
    } else if has_ties(premiums) || has_ties(exposures) {
        notes.push("tied values ranked by average".to_string());
    }
    if has_ties(premiums) || has_ties(exposures) {
        notes.push("extremal players tie-broken by lowest index".to_string());
    }
    Ok(AssociationReport {
        max_premium_player: argmax(premiums) + 1,
        max_exposure_player: argmax(exposures) + 1,
        min_premium_player: argmin(premiums) + 1,
        spearman,
        spearman_sign,
        note: if notes.is_empty() {
            None
        } else {
            Some(notes.join("; "))
        },
    })
}

/// Parses `player,market_premium[,claim_exposure]` CSV text. Player indices
/// must run 1..n in order. Returns the premiums and, when the column is
/// present, the exposures.
pub fn parse_market_premiums(text: &str) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptySeries)?;
    let header = header.trim();
    let with_exposure = match header {
        "player,market_premium" => false,
        "player,market_premium,claim_exposure" => true,
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "expected header player,market_premium[,claim_exposure], found {header:?}"
                ),
            })
        }
    };
    let mut premiums = Vec::new();
    let mut exposures = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        let expected = if with_exposure { 3 } else { 2 };
        if fields.len() != expected {
            return Err(Error::Parse {
                line,
                msg: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let player: usize = fields[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad player index {:?}", fields[0]),
        })?;
        if player != premiums.len() + 1 {
            return Err(Error::Parse {
                line,
                msg: format!("player indices must run 1..n in order, found {player}"),
            });
        }
        let premium: f64 = fields[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad premium {:?}", fields[1]),
        })?;
        premiums.push(premium);
        if with_exposure {
            let e: f64 = fields[2].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad claim exposure {:?}", fields[2]),
            })?;
            exposures.push(e);
        }
    }
    if premiums.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok((premiums, if with_exposure { Some(exposures) } else { None }))
}
