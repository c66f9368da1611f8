use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LinalgError, Result};
use crate::int::Int;
use crate::snf::invariant_factors;
use crate::sparse::SparseIntMatrix;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup::default()
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> AbelianGroup {
        AbelianGroup::from_invariant_factors(0, [Int::from(order)]).expect("valid order")
    }

    /// Accepts invariant factors that may include units, which are dropped.
    pub fn from_invariant_factors<I>(free_rank: usize, factors: I) -> Result<AbelianGroup>
    where
        I: IntoIterator<Item = Int>,
    {
        let mut torsion = Vec::new();
        for f in factors {
            if f.is_zero() || f.is_negative() {
                return Err(LinalgError::InvalidInput(format!("invariant factor {f} must be positive")));
            }
            if !f.is_one() {
                torsion.push(f);
            }
        }
        if torsion.windows(2).any(|w| w[1].div_exact(&w[0]).is_none()) {
            return Err(LinalgError::InvalidInput(
                "invariant factors must form a divisibility chain".into(),
            ));
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    /// `Z^rows / image(m)`.
    pub fn cokernel(m: &SparseIntMatrix) -> Result<AbelianGroup> {
        let factors = invariant_factors(m)?;
        AbelianGroup::from_invariant_factors(m.rows() - factors.len(), factors)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `dim_{F_p} (G ⊗ F_p)`.
    pub fn tensor_dim(&self, p: u64) -> usize {
        self.free_rank + self.torsion.iter().filter(|d| d.mod_u64(p) == 0).count()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::ONE, |a, b| a * b)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // group equal factors as (Z/d)^k
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let k = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") });
            i += k;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
