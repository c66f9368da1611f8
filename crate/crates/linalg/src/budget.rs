//! Explicit resource limits for exact elimination.
//!
//! Fill-in and coefficient growth are the two ways an exact computation
//! runs away; both are bounded here and exceeding either produces
//! [`LinalgError::Resource`] instead of an answer.

use std::str::FromStr;
use std::sync::RwLock;
use std::time::{Duration, Instant};

use crate::error::{LinalgError, Result};
use crate::int::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of stored nonzeros in a working matrix.
    pub max_entries: usize,
    /// Maximum bit length of any single coefficient.
    pub max_bits: u64,
    /// Maximum size (rows × cols) of a dense sub-problem.
    pub max_dense: usize,
    /// Wall-clock limit per elimination.
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_entries: 200_000_000,
            max_bits: 1 << 16,
            max_dense: 16_000_000,
            max_time: None,
        }
    }
}

static GLOBAL: RwLock<Option<Budget>> = RwLock::new(None);

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            max_entries: usize::MAX,
            max_bits: u64::MAX,
            max_dense: usize::MAX,
            max_time: None,
        }
    }

    /// Process-wide budget used by operations that take none explicitly.
    pub fn global() -> Budget {
        GLOBAL.read().expect("budget lock").unwrap_or_default()
    }

    pub fn set_global(b: Budget) {
        *GLOBAL.write().expect("budget lock") = Some(b);
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter {
            budget: *self,
            start: Instant::now(),
            ticks: 0,
        }
    }
}

/// Parses `entries=<n>,bits=<n>,dense=<n>,seconds=<n>`; omitted keys keep
/// their defaults. Integer fields accept `1e8`-style shorthand.
impl FromStr for Budget {
    type Err = LinalgError;

    fn from_str(spec: &str) -> Result<Budget> {
        let mut b = Budget::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| LinalgError::InvalidInput(format!("budget item {part:?} lacks '='")))?;
            let num = parse_count(val)
                .ok_or_else(|| LinalgError::InvalidInput(format!("bad budget value {val:?}")))?;
            match key.trim() {
                "entries" => b.max_entries = num as usize,
                "bits" => b.max_bits = num,
                "dense" => b.max_dense = num as usize,
                "seconds" => b.max_time = Some(Duration::from_secs(num)),
                other => {
                    return Err(LinalgError::InvalidInput(format!("unknown budget key {other:?}")))
                }
            }
        }
        Ok(b)
    }
}

fn parse_count(s: &str) -> Option<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let (mant, exp) = s.split_once(['e', 'E'])?;
    let mant: u64 = mant.parse().ok()?;
    let exp: u32 = exp.parse().ok()?;
    mant.checked_mul(10u64.checked_pow(exp)?)
}

pub(crate) struct Meter {
    budget: Budget,
    start: Instant,
    ticks: u32,
}

impl Meter {
    pub fn entries(&self, live: usize) -> Result<()> {
        if live > self.budget.max_entries {
            return Err(LinalgError::Resource(format!(
                "{live} working entries exceed the limit of {}",
                self.budget.max_entries
            )));
        }
        Ok(())
    }

    pub fn value(&self, v: &Int) -> Result<()> {
        if v.to_i64().is_none() && v.bits() > self.budget.max_bits {
            return Err(LinalgError::Resource(format!(
                "coefficient of {} bits exceeds the limit of {}",
                v.bits(),
                self.budget.max_bits
            )));
        }
        Ok(())
    }

    pub fn dense(&self, rows: usize, cols: usize) -> Result<()> {
        if rows.saturating_mul(cols) > self.budget.max_dense {
            return Err(LinalgError::Resource(format!(
                "dense block {rows}x{cols} exceeds the limit of {} cells",
                self.budget.max_dense
            )));
        }
        Ok(())
    }

    /// Cheap enough to call in inner loops; reads the clock every 256 calls.
    pub fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(256) {
            if let Some(limit) = self.budget.max_time {
                if self.start.elapsed() > limit {
                    return Err(LinalgError::Resource(format!(
                        "time limit of {}s exceeded",
                        limit.as_secs()
                    )));
                }
            }
        }
        Ok(())
    }
}
