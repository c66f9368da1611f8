//! Homology of finite free chain complexes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{LinalgError, Result};
use crate::group::AbelianGroup;
use crate::int::Int;
use crate::modp::rank_mod_p_with;
use crate::snf::invariant_factors_with;
use crate::sparse::SparseIntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Integers,
    ModP(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomologyGroup {
    Integral(AbelianGroup),
    ModP { p: u64, dim: usize },
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        match self {
            HomologyGroup::Integral(g) => g.is_trivial(),
            HomologyGroup::ModP { dim, .. } => *dim == 0,
        }
    }

    pub fn integral(&self) -> Option<&AbelianGroup> {
        match self {
            HomologyGroup::Integral(g) => Some(g),
            HomologyGroup::ModP { .. } => None,
        }
    }

    pub fn mod_p_dim(&self) -> Option<usize> {
        match self {
            HomologyGroup::ModP { dim, .. } => Some(*dim),
            HomologyGroup::Integral(_) => None,
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyGroup::Integral(g) => write!(f, "{g}"),
            HomologyGroup::ModP { p, dim: 0 } => write!(f, "0 (F_{p})"),
            HomologyGroup::ModP { p, dim: 1 } => write!(f, "F_{p}"),
            HomologyGroup::ModP { p, dim } => write!(f, "(F_{p})^{dim}"),
        }
    }
}

/// `C_top → … → C_1 → C_0` with `boundaries[k - 1] = ∂_k : C_k → C_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<SparseIntMatrix>,
}

/// Rank and nontrivial invariant factors of one boundary map.
#[derive(Debug, Clone)]
struct MapData {
    rank: usize,
    torsion: Vec<Int>,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseIntMatrix>) -> Result<ChainComplex> {
        if ranks.is_empty() {
            if boundaries.is_empty() {
                return Ok(ChainComplex { ranks, boundaries });
            }
            return Err(LinalgError::InvalidInput("boundaries without chain groups".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(LinalgError::InvalidInput(format!(
                "{} chain groups need {} boundary maps, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let k = i + 1;
            if d.cols() != ranks[k] || d.rows() != ranks[k - 1] {
                return Err(LinalgError::InvalidInput(format!(
                    "d_{k} is {}x{} but C_{k} -> C_{} needs {}x{}",
                    d.rows(),
                    d.cols(),
                    k - 1,
                    ranks[k - 1],
                    ranks[k]
                )));
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    /// Highest degree with a chain group, or `None` for the zero complex.
    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// `∂_k`, for `1 ≤ k ≤ top`.
    pub fn boundary(&self, k: usize) -> Option<&SparseIntMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn boundaries(&self) -> &[SparseIntMatrix] {
        &self.boundaries
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0` for every `k`.
    pub fn is_chain_complex(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].mul(&w[1]).map(|m| m.is_zero()).unwrap_or(false))
    }

    fn augmentation(&self) -> SparseIntMatrix {
        let n0 = self.rank(0);
        SparseIntMatrix::from_triplets(1, n0, (0..n0).map(|j| (0, j, Int::ONE)))
            .expect("valid augmentation")
    }

    fn map_data(&self, k: usize, coeff: Coefficients, reduced: bool, budget: &Budget) -> Result<MapData> {
        let owned;
        let m = if k == 0 {
            if !reduced {
                return Ok(MapData { rank: 0, torsion: vec![] });
            }
            owned = self.augmentation();
            &owned
        } else {
            match self.boundary(k) {
                Some(m) => m,
                None => return Ok(MapData { rank: 0, torsion: vec![] }),
            }
        };
        match coeff {
            Coefficients::Integers => {
                let f = invariant_factors_with(m, budget)?;
                Ok(MapData {
                    rank: f.len(),
                    torsion: f.into_iter().filter(|d| !d.is_one()).collect(),
                })
            }
            Coefficients::ModP(p) => Ok(MapData {
                rank: rank_mod_p_with(m, p, budget)?,
                torsion: vec![],
            }),
        }
    }

    /// `H_k = ker ∂_k / im ∂_{k+1}`; with `reduced` the augmentation is
    /// used as `∂_0`.
    pub fn homology(&self, k: usize, coeff: Coefficients, reduced: bool) -> Result<HomologyGroup> {
        self.homology_with(k, coeff, reduced, &Budget::global())
    }

    pub fn homology_with(
        &self,
        k: usize,
        coeff: Coefficients,
        reduced: bool,
        budget: &Budget,
    ) -> Result<HomologyGroup> {
        let out = self.map_data(k, coeff, reduced, budget)?;
        let inc = self.map_data(k + 1, coeff, reduced, budget)?;
        Ok(assemble(self.rank(k), &out, &inc, coeff))
    }

    /// Homology in every degree `0..=top`, computing each map once.
    pub fn homology_all(&self, coeff: Coefficients, reduced: bool) -> Result<Vec<HomologyGroup>> {
        self.homology_all_with(coeff, reduced, &Budget::global())
    }

    pub fn homology_all_with(
        &self,
        coeff: Coefficients,
        reduced: bool,
        budget: &Budget,
    ) -> Result<Vec<HomologyGroup>> {
        let Some(top) = self.top_degree() else {
            return Ok(Vec::new());
        };
        let maps = (0..=top + 1)
            .map(|k| self.map_data(k, coeff, reduced, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..=top)
            .map(|k| assemble(self.rank(k), &maps[k], &maps[k + 1], coeff))
            .collect())
    }

    /// Reduced or unreduced Euler characteristic from the chain ranks.
    pub fn euler_characteristic(&self, reduced: bool) -> i64 {
        let chi: i64 = self
            .ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum();
        if reduced {
            chi - 1
        } else {
            chi
        }
    }
}

fn assemble(rank_k: usize, out: &MapData, inc: &MapData, coeff: Coefficients) -> HomologyGroup {
    let free = rank_k - out.rank - inc.rank;
    match coeff {
        Coefficients::Integers => HomologyGroup::Integral(
            AbelianGroup::from_invariant_factors(free, inc.torsion.iter().cloned())
                .expect("invariant factors from a Smith form"),
        ),
        Coefficients::ModP(p) => HomologyGroup::ModP { p, dim: free },
    }
}
