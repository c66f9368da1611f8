//! Completely inadmissible Dyer–Lashof words on a degree-one class at an
//! odd prime, and the integral verdicts they support.
//!
//! A word `β^{ε_1}Q^{s_1} ⋯ β^{ε_k}Q^{s_k}u` has degree
//! `1 + (k − 1) + Σ (2 s_i (p − 1) − ε_i)`, the `k − 1` accounting for the
//! suspension shift of length-`k` words.
//!
//! Counting uses slack variables: with `t_k = s_k − 1` and
//! `t_i = s_i − (p s_{i+1} − ε_{i+1} + 1)`, all `t_i ≥ 0` and
//! `Σ s_i = C(ε) + Σ_j w_j t_j` where `w_j = 1 + p + ⋯ + p^{j−1}`. The
//! degree fixes `Σ s_i`, so for each `ε` the words are the ways to make
//! change for `Σ s_i − C(ε)` in coins `w_1 = 1, w_2, …`.

use std::fmt;
use std::str::FromStr;

use pn_linalg::{is_prime, AbelianGroup};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::genus::{factor_shape, FactorShape};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DLWord {
    pub p: u64,
    /// `(ε_i, s_i)` from left to right.
    pub entries: Vec<(u8, u64)>,
}

impl DLWord {
    pub fn new(p: u64, entries: Vec<(u8, u64)>) -> Result<DLWord> {
        check_prime(p)?;
        if entries.is_empty() {
            return Err(Error::InvalidInput("a word needs at least one operation".into()));
        }
        if entries.iter().any(|&(e, s)| e > 1 || s == 0) {
            return Err(Error::InvalidInput("need epsilon in {0,1} and s >= 1".into()));
        }
        Ok(DLWord { p, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self) -> u128 {
        let k = self.entries.len() as u128;
        let p = self.p as u128;
        self.entries
            .iter()
            .map(|&(e, s)| 2 * s as u128 * (p - 1) - e as u128)
            .sum::<u128>()
            + k
    }

    pub fn is_completely_inadmissible(&self) -> bool {
        let p = self.p as u128;
        self.entries.last().is_some_and(|e| e.1 >= 1)
            && self
                .entries
                .windows(2)
                .all(|w| w[0].1 as u128 + w[1].0 as u128 > p * w[1].1 as u128)
    }

    pub fn epsilon1(&self) -> u8 {
        self.entries[0].0
    }

    /// Parses the text form with the prime supplied separately.
    pub fn parse(p: u64, text: &str) -> Result<DLWord> {
        let bad = || Error::InvalidInput(format!("bad word {text:?}; expected e.g. bQ7Q1u"));
        let body = text.strip_suffix('u').ok_or_else(bad)?;
        let mut entries = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let (eps, after) = match rest.strip_prefix('b').or_else(|| rest.strip_prefix('β')) {
                Some(r) => (1, r),
                None => (0, rest),
            };
            let after = after.strip_prefix('Q').ok_or_else(bad)?;
            let digits = after.chars().take_while(char::is_ascii_digit).count();
            let s: u64 = after[..digits].parse().map_err(|_| bad())?;
            entries.push((eps, s));
            rest = &after[digits..];
        }
        DLWord::new(p, entries)
    }
}

/// `bQ7Q1u` for `βQ^7Q^1u`.
impl fmt::Display for DLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(e, s) in &self.entries {
            if e == 1 {
                write!(f, "b")?;
            }
            write!(f, "Q{s}")?;
        }
        write!(f, "u")
    }
}

impl Serialize for DLWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Longest words handled; the counting loops are exponential in length.
pub const MAX_WORD_LENGTH: usize = 24;

fn check_length(k: usize) -> Result<()> {
    match k {
        0 => Err(Error::InvalidInput("word length must be at least 1".into())),
        k if k > MAX_WORD_LENGTH => Err(Error::Resource(format!(
            "word length {k} exceeds the supported maximum {MAX_WORD_LENGTH}"
        ))),
        _ => Ok(()),
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::InvalidInput("p = 2 is not supported; use an odd prime".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// The words of a given length and degree that can exist at all: `Σ s_i`
/// for each `ε`, or `None` when the degree is unreachable.
fn target_sum(p: u64, k: usize, d: u128, eps_count: usize) -> Option<u128> {
    let num = (d + eps_count as u128).checked_sub(k as u128)?;
    let m = 2 * (p as u128 - 1);
    (num % m == 0).then(|| num / m)
}

/// `C(ε)`: `Σ s_i` of the smallest inadmissible sequence for `ε`, or
/// `None` on overflow (then no word of any reasonable degree exists).
fn base_sum(p: u64, eps: &[u8]) -> Option<u128> {
    let k = eps.len();
    let p = p as u128;
    let mut s = 1u128;
    let mut sum = 1u128;
    for i in (0..k - 1).rev() {
        s = p.checked_mul(s)?.checked_sub(eps[i + 1] as u128)?.checked_add(1)?;
        sum = sum.checked_add(s)?;
    }
    Some(sum)
}

fn eps_vectors(k: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u64 << k).rev().map(move |mask| (0..k).map(|i| ((mask >> (k - 1 - i)) & 1) as u8).collect())
}

/// All completely inadmissible words of length `k` and degree `d`, in
/// descending lexicographic order of `(ε_1, s_1, ε_2, s_2, …)`.
pub fn enumerate_basis(p: u64, k: usize, d: u128) -> Result<Vec<DLWord>> {
    check_prime(p)?;
    check_length(k)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let rem = match d.checked_sub(k as u128) {
        Some(r) => r as i128,
        None => return Ok(out),
    };
    descend(p, k, rem, None, &mut cur, &mut out);
    Ok(out)
}

/// Fills position `cur.len()`; `prev_s` is `s_{i−1}`; `rem` is what is left
/// of `d − k` for the remaining `2 s (p − 1) − ε` contributions.
fn descend(p: u64, k: usize, rem: i128, prev_s: Option<u64>, cur: &mut Vec<(u8, u64)>, out: &mut Vec<DLWord>) {
    let m = 2 * (p as i128 - 1);
    let left = k - cur.len();
    for eps in [1u8, 0] {
        // s must satisfy p s − ε < prev_s
        let s_max_chain = prev_s.map(|ps| ((ps as i128 + eps as i128 - 1) / p as i128) as u64);
        if left == 1 {
            let need = rem + eps as i128;
            if need <= 0 || need % m != 0 {
                continue;
            }
            let s = (need / m) as u64;
            if s_max_chain.is_some_and(|mx| s > mx) {
                continue;
            }
            cur.push((eps, s));
            out.push(DLWord {
                p,
                entries: cur.clone(),
            });
            cur.pop();
            continue;
        }
        // every later entry contributes at least m − 1 > 0
        let budget = rem + eps as i128 - (left as i128 - 1) * (m - 1);
        if budget < m {
            continue;
        }
        let mut s_hi = (budget / m) as u64;
        if let Some(mx) = s_max_chain {
            s_hi = s_hi.min(mx);
        }
        for s in (1..=s_hi).rev() {
            cur.push((eps, s));
            descend(p, k, rem - (s as i128 * m - eps as i128), Some(s), cur, out);
            cur.pop();
        }
    }
}

/// Number of change-making ways for every amount `0..=max` with coins
/// `w_1 … w_k`.
fn coin_counts(p: u64, k: usize, max: u128) -> Result<Vec<u128>> {
    let len = usize::try_from(max)
        .ok()
        .filter(|&l| l < 1 << 30)
        .ok_or_else(|| Error::Resource(format!("word count needs a table of {max} entries")))?
        + 1;
    let mut ways = vec![0u128; len];
    ways[0] = 1;
    let mut w: u128 = 1;
    for _ in 0..k {
        if w >= len as u128 {
            break;
        }
        let w_us = w as usize;
        for a in w_us..len {
            ways[a] = ways[a]
                .checked_add(ways[a - w_us])
                .ok_or_else(|| Error::Resource("word count exceeds 128 bits".into()))?;
        }
        w = match w.checked_mul(p as u128).and_then(|x| x.checked_add(1)) {
            Some(x) => x,
            None => break,
        };
    }
    Ok(ways)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BasisCount {
    pub total: u128,
    /// Words with `ε_1 = 1`.
    pub with_bockstein: u128,
}

/// Sizes of the basis of [`enumerate_basis`] without listing it.
pub fn count_basis(p: u64, k: usize, d: u128) -> Result<BasisCount> {
    check_prime(p)?;
    check_length(k)?;
    let mut need: Vec<(bool, u128)> = Vec::new();
    for eps in eps_vectors(k) {
        let count = eps.iter().filter(|&&e| e == 1).count();
        let (Some(s), Some(c)) = (target_sum(p, k, d, count), base_sum(p, &eps)) else {
            continue;
        };
        if let Some(a) = s.checked_sub(c) {
            need.push((eps[0] == 1, a));
        }
    }
    let Some(max) = need.iter().map(|x| x.1).max() else {
        return Ok(BasisCount::default());
    };
    let ways = coin_counts(p, k, max)?;
    let mut out = BasisCount::default();
    for (bock, a) in need {
        let c = ways[a as usize];
        out.total = out.total.checked_add(c).ok_or_else(|| Error::Resource("word count overflow".into()))?;
        if bock {
            out.with_bockstein += c;
        }
    }
    Ok(out)
}

/// The lexicographically largest word with `ε_1 = 1` in degree `d`, if any.
/// For a fixed `ε` the largest `s_1` puts all slack in `t_1`, which also
/// fixes the rest of the word; the answer is the best of these over `ε`.
pub fn bockstein_witness(p: u64, k: usize, d: u128) -> Result<Option<DLWord>> {
    check_prime(p)?;
    check_length(k)?;
    let mut best: Option<Vec<(u8, u128)>> = None;
    for eps in eps_vectors(k).filter(|e| e[0] == 1) {
        let count = eps.iter().filter(|&&e| e == 1).count();
        let (Some(s), Some(c)) = (target_sum(p, k, d, count), base_sum(p, &eps)) else {
            continue;
        };
        let Some(slack) = s.checked_sub(c) else {
            continue;
        };
        let mut svals = vec![0u128; k];
        svals[k - 1] = 1;
        for i in (0..k - 1).rev() {
            svals[i] = p as u128 * svals[i + 1] - eps[i + 1] as u128 + 1;
        }
        svals[0] += slack;
        let cand: Vec<(u8, u128)> = eps.into_iter().zip(svals).collect();
        if best.as_ref().is_none_or(|b| cand > *b) {
            best = Some(cand);
        }
    }
    best.map(|entries| {
        let entries = entries
            .into_iter()
            .map(|(e, s)| u64::try_from(s).map(|s| (e, s)))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Resource("word exponent exceeds 64 bits".into()))?;
        Ok(DLWord { p, entries })
    })
    .transpose()
}

/// The integral homology in degree `d` for `k = 1`: `Z/p` exactly when
/// `d` is a positive multiple of `2(p − 1)`, where `βQ^s u` is the
/// Bockstein of `Q^s u`.
pub fn k1_integral(p: u64, d: u128) -> Result<AbelianGroup> {
    check_prime(p)?;
    let m = 2 * (p as u128 - 1);
    Ok(if d > 0 && d.is_multiple_of(m) {
        AbelianGroup::cyclic(p)
    } else {
        AbelianGroup::trivial()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictStatus {
    Zero,
    NonZero,
    Undetermined,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyVerdict {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub p: u64,
    pub k: usize,
    pub dimension: u128,
    pub status: VerdictStatus,
    pub mod_p_dimension: u128,
    pub bockstein_image_rank: u128,
    pub witnesses: Vec<DLWord>,
}

/// The integral homology of the length-`k` word model in degree `d`: zero
/// when there are no words (the group is `p`-torsion), nonzero when a word
/// starts with `β` (a Bockstein image, hence reduced from an integral
/// class), exact for `k = 1`, and undetermined otherwise.
pub fn integral_verdict(p: u64, k: usize, d: u128) -> Result<HomologyVerdict> {
    let counts = count_basis(p, k, d)?;
    let witness = bockstein_witness(p, k, d)?;
    let status = if k == 1 {
        if k1_integral(p, d)?.is_trivial() {
            VerdictStatus::Zero
        } else {
            VerdictStatus::NonZero
        }
    } else if counts.total == 0 {
        VerdictStatus::Zero
    } else if witness.is_some() {
        VerdictStatus::NonZero
    } else {
        VerdictStatus::Undetermined
    };
    let witnesses = match status {
        VerdictStatus::NonZero => witness.into_iter().collect(),
        _ => Vec::new(),
    };
    Ok(HomologyVerdict {
        n: None,
        p,
        k,
        dimension: d,
        status,
        mod_p_dimension: counts.total,
        bockstein_image_rank: counts.with_bockstein,
        witnesses,
    })
}

/// `H_{n−1}(Σ_n; L_n)` for `n = 2p^k`, which is the degree `4p^k − 3`
/// homology of the length-`k` word model.
pub fn obstruction_group(n: u64) -> Result<HomologyVerdict> {
    match factor_shape(n) {
        FactorShape::TwicePrimePower { p, k } if p != 2 => {
            let d = 4 * (p as u128).pow(k) - 3;
            let mut v = integral_verdict(p, k as usize, d)?;
            v.n = Some(n);
            Ok(v)
        }
        _ => Err(Error::InvalidInput(format!("{n} is not twice a power of an odd prime"))),
    }
}

impl FromStr for VerdictStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<VerdictStatus> {
        match s {
            "Zero" => Ok(VerdictStatus::Zero),
            "NonZero" => Ok(VerdictStatus::NonZero),
            "Undetermined" => Ok(VerdictStatus::Undetermined),
            _ => Err(Error::InvalidInput(format!("unknown status {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: u64, s: &str) -> DLWord {
        DLWord::parse(p, s).unwrap()
    }

    fn names(v: &[DLWord]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn degrees() {
        assert_eq!(w(3, "Q2u").degree(), 9);
        assert_eq!(w(3, "bQ7Q1u").degree(), 33);
        assert_eq!(w(5, "bQ1u").degree(), 8);
    }

    #[test]
    fn inadmissibility() {
        assert!(w(3, "bQ7Q1u").is_completely_inadmissible());
        assert!(!w(3, "Q3Q1u").is_completely_inadmissible());
        assert!(w(3, "Q3bQ1u").is_completely_inadmissible());
        assert!(w(3, "Q1u").is_completely_inadmissible());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(names(&enumerate_basis(3, 1, 9).unwrap()), vec!["Q2u"]);
        assert_eq!(names(&enumerate_basis(3, 2, 33).unwrap()), vec!["bQ7Q1u", "Q7bQ1u", "Q6bQ2u"]);
        assert!(enumerate_basis(3, 1, 7).unwrap().is_empty());
        assert!(enumerate_basis(2, 1, 7).is_err());
    }

    #[test]
    fn k1_examples() {
        assert_eq!(k1_integral(3, 4).unwrap(), AbelianGroup::cyclic(3));
        assert!(k1_integral(3, 9).unwrap().is_trivial());
        assert!(k1_integral(5, 17).unwrap().is_trivial());
    }

    #[test]
    fn verdict_examples() {
        let v = integral_verdict(3, 2, 33).unwrap();
        assert_eq!(v.status, VerdictStatus::NonZero);
        assert_eq!(names(&v.witnesses), vec!["bQ7Q1u"]);
        assert_eq!(v.mod_p_dimension, 3);
        assert_eq!(integral_verdict(3, 1, 9).unwrap().status, VerdictStatus::Zero);
        let v = integral_verdict(5, 2, 97).unwrap();
        assert_eq!(names(&v.witnesses), vec!["bQ11Q1u"]);
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(obstruction_group(6).unwrap().status, VerdictStatus::Zero);
        assert_eq!(obstruction_group(10).unwrap().status, VerdictStatus::Zero);
        let v = obstruction_group(18).unwrap();
        assert_eq!((v.status, v.dimension), (VerdictStatus::NonZero, 33));
        assert!(obstruction_group(12).is_err());
        assert!(obstruction_group(8).is_err());
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(w(3, "bQ7Q1u").entries, vec![(1, 7), (0, 1)]);
        assert_eq!(w(3, "βQ7Q1u").to_string(), "bQ7Q1u");
        assert!(DLWord::parse(3, "Q0u").is_err());
        assert!(DLWord::parse(3, "Q7").is_err());
        assert!(DLWord::parse(3, "u").is_err());
    }
}
