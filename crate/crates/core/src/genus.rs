//! Per-`n` verdicts on the Schwartz genus of the covering of unordered
//! configurations of `n` points in the plane.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::dyer_lashof::{obstruction_group, HomologyVerdict, VerdictStatus};
use crate::error::{Error, Result};

pub const TABLE_MAX: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "shape")]
pub enum FactorShape {
    One,
    PrimePower { p: u64, k: u32 },
    TwicePrimePower { p: u64, k: u32 },
    Other,
}

impl fmt::Display for FactorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorShape::One => write!(f, "1"),
            FactorShape::PrimePower { p, k } => write!(f, "{p}^{k}"),
            FactorShape::TwicePrimePower { p, k } => write!(f, "2*{p}^{k}"),
            FactorShape::Other => write!(f, "other"),
        }
    }
}

/// Classifies `n` as `p^k`, `2p^k` (odd `p`) or neither; powers of two are
/// always prime powers.
pub fn factor_shape(n: u64) -> FactorShape {
    if n <= 1 {
        return if n == 1 { FactorShape::One } else { FactorShape::Other };
    }
    if let Some((p, k)) = prime_power(n) {
        return FactorShape::PrimePower { p, k };
    }
    if n.is_multiple_of(2) {
        if let Some((p, k)) = prime_power(n / 2) {
            return FactorShape::TwicePrimePower { p, k };
        }
    }
    FactorShape::Other
}

fn prime_power(mut n: u64) -> Option<(u64, u32)> {
    let p = smallest_prime_factor(n);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut q = 3;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return q;
        }
        q += 2;
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GenusStatus {
    EqualsN,
    LessThanN,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GenusSource {
    Vassiliev,
    VanishingTheorem,
    TwoPCase,
    ObstructionZero,
    ObstructionNonZeroConjecture,
    ObstructionUndetermined,
}

impl fmt::Display for GenusStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for GenusSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusVerdict {
    pub n: u64,
    pub status: GenusStatus,
    pub source: GenusSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<HomologyVerdict>,
}

const CONJECTURE_NOTE: &str = "conjectured g(q_n) = n: the obstruction group is nonzero, so the vanishing criterion gives no bound";

/// The genus verdict for `n ≥ 1`. Prime powers (and `n = 1`) have genus
/// `n`; other `n` that are not twice a prime power have genus below `n`;
/// for `n = 2p^k` the answer rests on the obstruction group
/// `H_{n−1}(Σ_n; L_n)`, whose vanishing forces genus below `n`.
pub fn classify(n: u64) -> Result<GenusVerdict> {
    let verdict = |status, source| GenusVerdict {
        n,
        status,
        source,
        conjecture_note: None,
        evidence: None,
    };
    match factor_shape(n) {
        FactorShape::One | FactorShape::PrimePower { .. } => Ok(verdict(GenusStatus::EqualsN, GenusSource::Vassiliev)),
        FactorShape::Other if n == 0 => Err(Error::InvalidInput("n must be at least 1".into())),
        FactorShape::Other => Ok(verdict(GenusStatus::LessThanN, GenusSource::VanishingTheorem)),
        FactorShape::TwicePrimePower { k, .. } => {
            let evidence = obstruction_group(n)?;
            let mut v = match evidence.status {
                VerdictStatus::Zero if k == 1 => verdict(GenusStatus::LessThanN, GenusSource::TwoPCase),
                VerdictStatus::Zero => verdict(GenusStatus::LessThanN, GenusSource::ObstructionZero),
                VerdictStatus::NonZero => GenusVerdict {
                    conjecture_note: Some(CONJECTURE_NOTE.into()),
                    ..verdict(GenusStatus::Unknown, GenusSource::ObstructionNonZeroConjecture)
                },
                VerdictStatus::Undetermined => verdict(GenusStatus::Unknown, GenusSource::ObstructionUndetermined),
            };
            v.evidence = Some(evidence);
            Ok(v)
        }
    }
}

/// [`classify`] over `lo..=hi`, computed in parallel, in order of `n`.
pub fn table(lo: u64, hi: u64) -> Result<Vec<GenusVerdict>> {
    if lo == 0 || hi > TABLE_MAX || lo > hi {
        return Err(Error::InvalidInput(format!("table range must lie within 1..={TABLE_MAX}")));
    }
    (lo..=hi).into_par_iter().map(classify).collect()
}
