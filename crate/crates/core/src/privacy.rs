//! Noise sources and privacy-budget bookkeeping.
//!
//! [`Epsilon::Infinite`] is the noiseless mode: every draw returns 0 and every
//! `c / ε` quantity (penalties, thresholds) collapses to 0, so the private
//! algorithms reduce to their exact counterparts.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Privacy parameter. `Infinite` disables all noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Epsilon {
    Finite(f64),
    Infinite,
}

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_infinite() && value > 0.0 {
            return Ok(Epsilon::Infinite);
        }
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {value}"
            )));
        }
        Ok(Epsilon::Finite(value))
    }

    pub fn is_noiseless(self) -> bool {
        matches!(self, Epsilon::Infinite)
    }

    pub fn value(self) -> f64 {
        match self {
            Epsilon::Finite(e) => e,
            Epsilon::Infinite => f64::INFINITY,
        }
    }

    /// Splits the budget: `ε / parts`.
    pub fn split(self, parts: f64) -> Epsilon {
        match self {
            Epsilon::Finite(e) => Epsilon::Finite(e / parts),
            Epsilon::Infinite => Epsilon::Infinite,
        }
    }

    /// `numerator / ε`, which is 0 in noiseless mode.
    pub fn inverse_times(self, numerator: f64) -> f64 {
        match self {
            Epsilon::Finite(e) => numerator / e,
            Epsilon::Infinite => 0.0,
        }
    }

    /// Noise scale `numerator / ε` (Laplace scale or exponential mean).
    pub fn scale(self, numerator: f64) -> NoiseScale {
        match self {
            Epsilon::Finite(e) => NoiseScale::Finite(numerator / e),
            Epsilon::Infinite => NoiseScale::Noiseless,
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Finite(e) => write!(f, "{e}"),
            Epsilon::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinite" | "noiseless" => Ok(Epsilon::Infinite),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad epsilon {other:?}")))
                .and_then(Epsilon::new),
        }
    }
}

/// Scale parameter of a noise draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseScale {
    Finite(f64),
    Noiseless,
}

impl NoiseScale {
    fn checked(self) -> Result<Option<f64>> {
        match self {
            NoiseScale::Noiseless => Ok(None),
            NoiseScale::Finite(b) if b > 0.0 && b.is_finite() => Ok(Some(b)),
            NoiseScale::Finite(b) => Err(Error::InvalidParameter(format!(
                "noise scale must be positive and finite, got {b}"
            ))),
        }
    }

    /// The raw scale, or `None` in noiseless mode.
    pub fn get(self) -> Option<f64> {
        match self {
            NoiseScale::Finite(b) => Some(b),
            NoiseScale::Noiseless => None,
        }
    }
}

impl From<f64> for NoiseScale {
    fn from(b: f64) -> Self {
        NoiseScale::Finite(b)
    }
}

/// Seedable random stream. Child streams are keyed by `(seed, path)` and do
/// not depend on how much of the parent has been consumed.
#[derive(Debug, Clone)]
pub struct NoiseRng {
    seed: u64,
    path: String,
    inner: ChaCha20Rng,
}

impl NoiseRng {
    pub fn new(seed: u64) -> Self {
        Self::keyed(seed, String::new())
    }

    fn keyed(seed: u64, path: String) -> Self {
        let mut h = Sha256::new();
        h.update(seed.to_le_bytes());
        h.update(path.as_bytes());
        let key: [u8; 32] = h.finalize().into();
        Self {
            seed,
            path,
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    pub fn child(&self, label: &str) -> NoiseRng {
        Self::keyed(self.seed, format!("{}/{}", self.path, label))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }
}

impl RngCore for NoiseRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Draws from the Laplace density `exp(-|x|/b) / 2b` by inverting the CDF.
pub fn sample_laplace(scale: NoiseScale, rng: &mut NoiseRng) -> Result<f64> {
    let Some(b) = scale.checked()? else {
        return Ok(0.0);
    };
    let u = rng.uniform() - 0.5;
    Ok(-b * u.signum() * (1.0 - 2.0 * u.abs()).ln())
}

/// Draws from the exponential distribution with the given mean.
pub fn sample_exponential(mean: NoiseScale, rng: &mut NoiseRng) -> Result<f64> {
    let Some(m) = mean.checked()? else {
        return Ok(0.0);
    };
    let u = rng.uniform();
    Ok(-m * (1.0 - u).ln())
}

/// How a ledger entry spends budget.
#[derive(Debug, Clone, PartialEq)]
pub enum Charge {
    /// `count` Laplace releases of a sensitivity-`sensitivity` statistic at
    /// scale `scale`; costs `count · Δ / b`.
    Laplace {
        sensitivity: f64,
        scale: NoiseScale,
        count: usize,
    },
    /// `count` invocations of a subroutine that is `epsilon`-DP as a whole.
    Pure { epsilon: Epsilon, count: usize },
}

impl Charge {
    pub fn cost(&self) -> f64 {
        match *self {
            Charge::Laplace {
                sensitivity,
                scale,
                count,
            } => match scale {
                NoiseScale::Finite(b) => count as f64 * sensitivity / b,
                NoiseScale::Noiseless => 0.0,
            },
            Charge::Pure { epsilon, count } => match epsilon {
                Epsilon::Finite(e) => count as f64 * e,
                Epsilon::Infinite => 0.0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub mechanism: String,
    pub charge: Charge,
}

impl LedgerEntry {
    pub fn cost(&self) -> f64 {
        self.charge.cost()
    }
}

/// Audit log of every mechanism invocation in a run, checked against a
/// target budget under basic composition.
#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyLedger {
    budget: Epsilon,
    entries: Vec<LedgerEntry>,
}

impl PrivacyLedger {
    pub fn new(budget: Epsilon) -> Self {
        Self {
            budget,
            entries: Vec::new(),
        }
    }

    pub fn budget(&self) -> Epsilon {
        self.budget
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn charge_laplace(
        &mut self,
        mechanism: impl Into<String>,
        sensitivity: f64,
        scale: NoiseScale,
        count: usize,
    ) {
        self.push(LedgerEntry {
            mechanism: mechanism.into(),
            charge: Charge::Laplace {
                sensitivity,
                scale,
                count,
            },
        });
    }

    pub fn charge_pure(&mut self, mechanism: impl Into<String>, epsilon: Epsilon, count: usize) {
        self.push(LedgerEntry {
            mechanism: mechanism.into(),
            charge: Charge::Pure { epsilon, count },
        });
    }

    pub fn push(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    /// Appends all entries of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: &PrivacyLedger) {
        for e in &other.entries {
            self.entries.push(LedgerEntry {
                mechanism: format!("{prefix}{}", e.mechanism),
                charge: e.charge.clone(),
            });
        }
    }

    /// Total spent under basic composition.
    pub fn total(&self) -> f64 {
        self.entries.iter().map(LedgerEntry::cost).sum()
    }

    /// True iff the total is within the budget (relative slack 1e-12).
    pub fn within_budget(&self) -> bool {
        match self.budget {
            Epsilon::Infinite => true,
            Epsilon::Finite(e) => self.total() <= e * (1.0 + 1e-12),
        }
    }
}

/// Free-function form of [`PrivacyLedger::charge_laplace`].
pub fn ledger_charge(
    ledger: &mut PrivacyLedger,
    name: &str,
    sensitivity: f64,
    scale: NoiseScale,
    count: usize,
) {
    ledger.charge_laplace(name, sensitivity, scale, count);
}

/// Free-function form of [`PrivacyLedger::within_budget`].
pub fn ledger_assert(ledger: &PrivacyLedger) -> bool {
    ledger.within_budget()
}
