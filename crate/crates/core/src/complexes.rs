//! Oriented simplicial complexes built from the partition lattice, with the
//! symmetric group acting by signed permutations of simplices.
//!
//! Vertices carry a global order (poles first, then partitions in their
//! canonical order) and every simplex is stored as the ascending list of
//! its vertex indices. A group element maps a simplex to the re-sorted image
//! of its vertices; the parity of that sort is the orientation sign.

use std::collections::{BTreeMap, HashMap};

use pn_linalg::{write_bundle, Budget, ChainComplex, Coefficients, HomologyGroup, Int, SparseIntMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{all_partitions, apply_unchecked, refines_unchecked, Permutation, SetPartition};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    South,
    North,
    Part(SetPartition),
    /// A vertex of the `factor`-th join factor.
    Joined { factor: u16, inner: Box<Vertex> },
}

/// A signed permutation of the simplices of one dimension: simplex `i`
/// goes to `sign[i] * simplex image[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPerm {
    pub image: Vec<u32>,
    pub sign: Vec<i8>,
}

impl SignedPerm {
    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Sum of signs over fixed simplices, i.e. the trace of the matrix.
    pub fn trace(&self) -> i64 {
        self.image
            .iter()
            .zip(&self.sign)
            .enumerate()
            .filter(|(i, (img, _))| *i as u32 == **img)
            .map(|(_, (_, s))| *s as i64)
            .sum()
    }

    pub fn to_matrix(&self) -> SparseIntMatrix {
        let n = self.len();
        SparseIntMatrix::from_triplets(
            n,
            n,
            (0..n).map(|j| (self.image[j] as usize, j, Int::from(self.sign[j]))),
        )
        .expect("signed permutation is a valid matrix")
    }
}

#[derive(Debug, Clone)]
pub struct EquivariantComplex {
    group_degree: usize,
    vertices: Vec<Vertex>,
    /// `simplices[k]` holds the k-simplices back to back, `k + 1` entries each.
    simplices: Vec<Vec<u32>>,
    /// `boundaries[k - 1] = ∂_k`.
    boundaries: Vec<SparseIntMatrix>,
    /// Vertex permutations of the generators `(1 2)` and `(1 2 … n)`; empty
    /// when the complex carries no action.
    vertex_actions: Vec<Vec<u32>>,
    /// `actions[g][k]`, generator `g` on k-simplices.
    actions: Vec<Vec<SignedPerm>>,
}

/// Sorts `v` and returns the sign of the sorting permutation.
fn sort_with_sign(v: &mut [u32]) -> i8 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

type Index = HashMap<Box<[u32]>, u32>;

fn index_of(flat: &[u32], width: usize) -> Index {
    flat.chunks_exact(width)
        .enumerate()
        .map(|(i, s)| (s.into(), i as u32))
        .collect()
}

impl EquivariantComplex {
    /// Assembles a complex from per-dimension simplex lists (any order,
    /// each simplex ascending) and optional generator vertex permutations.
    fn assemble(
        group_degree: usize,
        vertices: Vec<Vertex>,
        mut simplices: Vec<Vec<u32>>,
        vertex_actions: Vec<Vec<u32>>,
    ) -> Result<EquivariantComplex> {
        while simplices.last().is_some_and(|s| s.is_empty()) {
            simplices.pop();
        }
        for (k, flat) in simplices.iter_mut().enumerate() {
            let mut rows: Vec<&[u32]> = flat.chunks_exact(k + 1).collect();
            rows.sort_unstable();
            let sorted: Vec<u32> = rows.concat();
            *flat = sorted;
        }
        let indices: Vec<Index> = simplices
            .iter()
            .enumerate()
            .map(|(k, flat)| index_of(flat, k + 1))
            .collect();

        let mut boundaries = Vec::new();
        for k in 1..simplices.len() {
            let mut triplets = Vec::with_capacity(simplices[k].len());
            let mut face = vec![0u32; k];
            for (j, s) in simplices[k].chunks_exact(k + 1).enumerate() {
                for drop in 0..=k {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| *v));
                    let row = *indices[k - 1].get(face.as_slice()).ok_or_else(|| {
                        Error::Invariant(format!("face {face:?} of {s:?} is missing"))
                    })?;
                    let sign = if drop % 2 == 0 { 1 } else { -1 };
                    triplets.push((row as usize, j, Int::from(sign)));
                }
            }
            let rows = simplices[k - 1].len() / k;
            let cols = simplices[k].len() / (k + 1);
            boundaries.push(SparseIntMatrix::from_triplets(rows, cols, triplets)?);
        }

        let actions = vertex_actions
            .iter()
            .map(|vperm| signed_actions(&simplices, &indices, vperm))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantComplex {
            group_degree,
            vertices,
            simplices,
            boundaries,
            vertex_actions,
            actions,
        })
    }

    /// The complex with no simplices at all.
    pub fn empty(group_degree: usize) -> EquivariantComplex {
        EquivariantComplex {
            group_degree,
            vertices: Vec::new(),
            simplices: Vec::new(),
            boundaries: Vec::new(),
            vertex_actions: Vec::new(),
            actions: Vec::new(),
        }
    }

    pub fn group_degree(&self) -> usize {
        self.group_degree
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, flat)| flat.len() / (k + 1))
            .collect()
    }

    pub fn num_simplices(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, |flat| flat.len() / (k + 1))
    }

    /// The `i`-th `k`-simplex as ascending vertex indices.
    pub fn simplex(&self, k: usize, i: usize) -> &[u32] {
        &self.simplices[k][i * (k + 1)..(i + 1) * (k + 1)]
    }

    /// `∂_k`, for `1 ≤ k ≤ dim`.
    pub fn boundary(&self, k: usize) -> Option<&SparseIntMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn has_action(&self) -> bool {
        !self.actions.is_empty()
    }

    /// Signed permutations of the generators `(1 2)` and `(1 2 … n)`, per
    /// dimension.
    pub fn generator_actions(&self) -> &[Vec<SignedPerm>] {
        &self.actions
    }

    pub fn chain_complex(&self) -> Result<ChainComplex> {
        Ok(ChainComplex::new(self.f_vector(), self.boundaries.clone())?)
    }

    pub fn homology(&self, k: usize, coeff: Coefficients, reduced: bool) -> Result<HomologyGroup> {
        self.homology_with(k, coeff, reduced, &Budget::global())
    }

    pub fn homology_with(&self, k: usize, coeff: Coefficients, reduced: bool, budget: &Budget) -> Result<HomologyGroup> {
        match self.dimension() {
            Some(d) if k <= d => Ok(self.chain_complex()?.homology_with(k, coeff, reduced, budget)?),
            _ => Err(Error::InvalidInput(format!(
                "degree {k} outside the complex (dimension {:?})",
                self.dimension()
            ))),
        }
    }

    /// Homology in degrees `0..=dim`; empty for the empty complex.
    pub fn homology_all(&self, coeff: Coefficients, reduced: bool) -> Result<Vec<HomologyGroup>> {
        self.homology_all_with(coeff, reduced, &Budget::global())
    }

    pub fn homology_all_with(&self, coeff: Coefficients, reduced: bool, budget: &Budget) -> Result<Vec<HomologyGroup>> {
        Ok(self.chain_complex()?.homology_all_with(coeff, reduced, budget)?)
    }

    /// Reduced Euler characteristic; `-1` for the empty complex.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let chi: i64 = self
            .f_vector()
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum();
        chi - 1
    }

    /// The action of an arbitrary permutation, per dimension. Requires a
    /// complex whose vertices are poles and partitions.
    pub fn act(&self, sigma: &Permutation) -> Result<Vec<SignedPerm>> {
        if !self.has_action() {
            return Err(Error::InvalidInput("complex carries no group action".into()));
        }
        if sigma.n() != self.group_degree {
            return Err(Error::InvalidInput(format!(
                "permutation of degree {} on a complex with group degree {}",
                sigma.n(),
                self.group_degree
            )));
        }
        let vperm = self.vertex_permutation(sigma)?;
        let indices: Vec<Index> = self
            .simplices
            .iter()
            .enumerate()
            .map(|(k, flat)| index_of(flat, k + 1))
            .collect();
        signed_actions(&self.simplices, &indices, &vperm)
    }

    fn vertex_permutation(&self, sigma: &Permutation) -> Result<Vec<u32>> {
        self.vertices
            .iter()
            .map(|v| {
                let image = match v {
                    Vertex::South | Vertex::North => v.clone(),
                    Vertex::Part(p) => Vertex::Part(apply_unchecked(sigma, p)),
                    Vertex::Joined { .. } => {
                        return Err(Error::InvalidInput("join vertices carry no action".into()))
                    }
                };
                self.vertices
                    .binary_search(&image)
                    .map(|i| i as u32)
                    .map_err(|_| Error::InvalidInput("vertex set is not closed under the group".into()))
            })
            .collect()
    }

    /// Checks `∂∘∂ = 0`, that each generator acts by signed permutations,
    /// and that the action commutes with the boundary.
    pub fn check_invariants(&self) -> Result<()> {
        for w in self.boundaries.windows(2) {
            if !w[0].mul(&w[1])?.is_zero() {
                return Err(Error::Invariant("boundary of a boundary is nonzero".into()));
            }
        }
        for (g, per_dim) in self.actions.iter().enumerate() {
            for (k, a) in per_dim.iter().enumerate() {
                let mut seen = vec![false; a.len()];
                for &i in &a.image {
                    if std::mem::replace(&mut seen[i as usize], true) {
                        return Err(Error::Invariant(format!("generator {g} is not bijective in dimension {k}")));
                    }
                }
            }
            for k in 1..per_dim.len() {
                let d = &self.boundaries[k - 1];
                let lhs = per_dim[k - 1].to_matrix().mul(d)?;
                let rhs = d.mul(&per_dim[k].to_matrix())?;
                if lhs != rhs {
                    return Err(Error::Invariant(format!(
                        "generator {g} does not commute with the boundary in dimension {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Boundary matrices as a labelled triplet bundle, one block `d_k` per
    /// dimension `k ≥ 1`.
    pub fn to_bundle(&self) -> String {
        let items: Vec<(String, &SparseIntMatrix)> = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("d_{}", i + 1), d))
            .collect();
        write_bundle(&items)
    }
}

fn signed_actions(simplices: &[Vec<u32>], indices: &[Index], vperm: &[u32]) -> Result<Vec<SignedPerm>> {
    simplices
        .iter()
        .enumerate()
        .map(|(k, flat)| {
            let count = flat.len() / (k + 1);
            let mut out = SignedPerm {
                image: Vec::with_capacity(count),
                sign: Vec::with_capacity(count),
            };
            let mut buf = vec![0u32; k + 1];
            for s in flat.chunks_exact(k + 1) {
                for (b, v) in buf.iter_mut().zip(s) {
                    *b = vperm[*v as usize];
                }
                let sign = sort_with_sign(&mut buf);
                let img = *indices[k]
                    .get(buf.as_slice())
                    .ok_or_else(|| Error::Invariant(format!("image of simplex {s:?} is not a simplex")))?;
                out.image.push(img);
                out.sign.push(sign);
            }
            Ok(out)
        })
        .collect()
}

/// Largest number of stored vertex entries, as a fraction of the entry
/// budget: boundary assembly and elimination need roughly this factor.
const ENTRY_FACTOR: usize = 10;

/// Order complex of a set of partitions of `{1..n}` under refinement:
/// k-simplices are chains `λ_0 < … < λ_k`, listed coarse to fine. The
/// group action is attached when the set is stable under relabeling.
pub fn order_complex(elements: &[SetPartition]) -> Result<EquivariantComplex> {
    order_complex_with(elements, &Budget::global())
}

pub fn order_complex_with(elements: &[SetPartition], budget: &Budget) -> Result<EquivariantComplex> {
    let Some(n) = elements.first().map(SetPartition::n) else {
        return Ok(EquivariantComplex::empty(0));
    };
    if elements.iter().any(|e| e.n() != n) {
        return Err(Error::InvalidInput("partitions of different ground sets".into()));
    }
    let mut elems = elements.to_vec();
    elems.sort();
    if elems.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("duplicate element".into()));
    }
    let m = elems.len();
    // finer[i]: later elements strictly refining elems[i]
    let finer: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            (i + 1..m)
                .filter(|&j| elems[j].num_blocks() > elems[i].num_blocks() && refines_unchecked(&elems[j], &elems[i]))
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    // chain counts by length, to refuse oversized requests up front
    let mut by_len: Vec<Vec<u128>> = vec![Vec::new(); m];
    for i in (0..m).rev() {
        let mut counts = vec![1u128];
        for &j in &finer[i] {
            for (len, c) in by_len[j as usize].iter().enumerate() {
                if counts.len() <= len + 1 {
                    counts.resize(len + 2, 0);
                }
                counts[len + 1] += c;
            }
        }
        by_len[i] = counts;
    }
    let entries: u128 = by_len
        .iter()
        .flat_map(|c| c.iter().enumerate().map(|(len, c)| c * (len as u128 + 1)))
        .sum();
    let limit = (budget.max_entries / ENTRY_FACTOR) as u128;
    if entries > limit {
        return Err(Error::Resource(format!(
            "order complex needs {entries} vertex entries, budget allows {limit}"
        )));
    }

    let mut simplices: Vec<Vec<u32>> = Vec::new();
    let mut chain: Vec<u32> = Vec::new();
    fn extend(i: u32, finer: &[Vec<u32>], chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        chain.push(i);
        let k = chain.len() - 1;
        if out.len() <= k {
            out.resize(k + 1, Vec::new());
        }
        out[k].extend_from_slice(chain);
        for &j in &finer[i as usize] {
            extend(j, finer, chain, out);
        }
        chain.pop();
    }
    for i in 0..m as u32 {
        extend(i, &finer, &mut chain, &mut simplices);
    }

    let vertices: Vec<Vertex> = elems.into_iter().map(Vertex::Part).collect();
    let vertex_actions = generator_vertex_actions(&vertices, n);
    EquivariantComplex::assemble(n, vertices, simplices, vertex_actions)
}

/// Vertex permutations for `(1 2)` and `(1 2 … n)`, or none if the vertex
/// set is not stable (or `n < 2`).
fn generator_vertex_actions(vertices: &[Vertex], n: usize) -> Vec<Vec<u32>> {
    if n < 2 {
        return Vec::new();
    }
    let gens = [Permutation::transposition(n), Permutation::long_cycle(n)];
    let mut out = Vec::new();
    for g in &gens {
        let mut perm = Vec::with_capacity(vertices.len());
        for v in vertices {
            let image = match v {
                Vertex::Part(p) => Vertex::Part(apply_unchecked(g, p)),
                Vertex::South | Vertex::North => v.clone(),
                Vertex::Joined { .. } => return Vec::new(),
            };
            match vertices.binary_search(&image) {
                Ok(i) => perm.push(i as u32),
                Err(_) => return Vec::new(),
            }
        }
        out.push(perm);
    }
    out
}

/// Unreduced suspension: two action-fixed poles, each coned over the whole
/// complex. The suspension of the empty complex is `S^0`.
pub fn unreduced_suspension(c: &EquivariantComplex) -> Result<EquivariantComplex> {
    let mut vertices = vec![Vertex::South, Vertex::North];
    vertices.extend(c.vertices.iter().cloned());
    let shift = |s: &[u32]| s.iter().map(|v| v + 2).collect::<Vec<_>>();
    let mut simplices: Vec<Vec<u32>> = vec![Vec::new(); c.simplices.len() + 1];
    simplices[0].extend([0, 1]);
    for (k, flat) in c.simplices.iter().enumerate() {
        simplices[k].extend(shift(flat));
        for s in flat.chunks_exact(k + 1) {
            for pole in [0u32, 1] {
                simplices[k + 1].push(pole);
                simplices[k + 1].extend(s.iter().map(|v| v + 2));
            }
        }
    }
    let vertex_actions = c
        .vertex_actions
        .iter()
        .map(|vp| [0, 1].into_iter().chain(vp.iter().map(|v| v + 2)).collect())
        .collect();
    EquivariantComplex::assemble(c.group_degree, vertices, simplices, vertex_actions)
}

/// `K_n`: the unreduced suspension of the order complex of the partitions
/// other than the one-block and discrete ones. `K_1` is empty.
pub fn k_n(n: usize) -> Result<EquivariantComplex> {
    k_n_with(n, &Budget::global())
}

pub fn k_n_with(n: usize, budget: &Budget) -> Result<EquivariantComplex> {
    if n == 0 {
        return Err(Error::InvalidInput("K_n needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(EquivariantComplex::empty(1));
    }
    if n > crate::partitions::ENUMERATION_CAP {
        return Err(Error::Resource(format!(
            "K_{n} is beyond the enumeration cap of {}",
            crate::partitions::ENUMERATION_CAP
        )));
    }
    let proper = all_partitions(n, false, false)?;
    let mut inner = order_complex_with(&proper, budget)?;
    inner.group_degree = n;
    if proper.is_empty() {
        // n = 2: the poset is empty but the action still has generators
        inner.vertex_actions = vec![Vec::new(), Vec::new()];
        inner.actions = vec![Vec::new(), Vec::new()];
    }
    unreduced_suspension(&inner)
}

/// Join of complexes; empty factors are dropped since the empty complex is
/// the join identity. The result carries no group action unless only one
/// factor survives, in which case that factor is returned unchanged.
pub fn join(c1: &EquivariantComplex, c2: &EquivariantComplex) -> Result<EquivariantComplex> {
    join_all(&[(0, c1), (1, c2)], c1.group_degree.max(c2.group_degree))
}

fn join_all(factors: &[(u16, &EquivariantComplex)], group_degree: usize) -> Result<EquivariantComplex> {
    let live: Vec<&(u16, &EquivariantComplex)> = factors.iter().filter(|f| !f.1.is_empty()).collect();
    match live.len() {
        0 => return Ok(EquivariantComplex::empty(group_degree)),
        1 => return Ok(live[0].1.clone()),
        _ => {}
    }
    let mut vertices = Vec::new();
    let mut offsets = Vec::new();
    for (label, c) in &live {
        offsets.push(vertices.len() as u32);
        vertices.extend(c.vertices.iter().map(|v| Vertex::Joined {
            factor: *label,
            inner: Box::new(v.clone()),
        }));
    }
    // partial joins over the first factors, keyed by dimension + 1 (0 = empty face)
    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
    for (f, (_, c)) in live.iter().enumerate() {
        let off = offsets[f];
        let mut next: Vec<Vec<u32>> = vec![Vec::new(); acc.len() + c.simplices.len()];
        for (a_len, a_flat) in acc.iter().enumerate() {
            let a_items: Vec<&[u32]> = if a_len == 0 {
                vec![&[]]
            } else {
                a_flat.chunks_exact(a_len).collect()
            };
            for a in &a_items {
                // with the empty face of this factor
                next[a_len].extend_from_slice(a);
                for (k, flat) in c.simplices.iter().enumerate() {
                    for s in flat.chunks_exact(k + 1) {
                        next[a_len + k + 1].extend_from_slice(a);
                        next[a_len + k + 1].extend(s.iter().map(|v| v + off));
                    }
                }
            }
        }
        acc = next;
    }
    // drop the global empty face; re-index by dimension
    let simplices: Vec<Vec<u32>> = acc.into_iter().skip(1).collect();
    EquivariantComplex::assemble(group_degree, vertices, simplices, Vec::new())
}

/// `K_λ`: the join of `K_{|B|}` over the blocks `B` of `λ`.
pub fn k_lambda(lambda: &SetPartition) -> Result<EquivariantComplex> {
    if lambda.is_discrete() {
        return Err(Error::InvalidInput(format!("K_lambda is undefined for the discrete partition {lambda}")));
    }
    if lambda.is_one_block() {
        return k_n(lambda.n());
    }
    let factors = lambda
        .block_sizes()
        .into_iter()
        .map(k_n)
        .collect::<Result<Vec<_>>>()?;
    let labelled: Vec<(u16, &EquivariantComplex)> = factors.iter().enumerate().map(|(i, c)| (i as u16, c)).collect();
    join_all(&labelled, lambda.n())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationTerm {
    /// Block sizes of `λ`, non-increasing.
    pub shape: Vec<usize>,
    /// Number of partitions with this shape.
    pub count: usize,
    /// Reduced Euler characteristic of `K_λ`.
    pub reduced_euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub n: usize,
    pub terms: Vec<FiltrationTerm>,
    /// `Σ_λ χ̃(K_λ) · χ̃(S^{2|c(λ)|})` over non-discrete `λ`.
    pub subquotient_sum: i64,
    /// `χ̃` of the complement of the configuration space in `S^{2n}`.
    pub target: i64,
    pub agree: bool,
}

/// Euler characteristic shadow of the filtration of the fat diagonal by
/// number of blocks: the reduced Euler characteristics of the subquotients
/// `K_λ ∧ S^{2|c(λ)|}` must add up to that of the whole space.
pub fn euler_filtration_check(n: usize) -> Result<FiltrationReport> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidInput(format!("filtration check needs 2 <= n <= 7, got {n}")));
    }
    let mut shapes: BTreeMap<Vec<usize>, (SetPartition, usize)> = BTreeMap::new();
    for lambda in all_partitions(n, true, false)? {
        let mut shape = lambda.block_sizes();
        shape.sort_unstable_by(|a, b| b.cmp(a));
        shapes.entry(shape).or_insert((lambda, 0)).1 += 1;
    }
    let mut terms = Vec::new();
    let mut sum = 0i64;
    for (shape, (rep, count)) in shapes.into_iter().rev() {
        let chi = k_lambda(&rep)?.reduced_euler_characteristic();
        // χ̃(S^{2c}) = 1 for every c
        sum += chi * count as i64;
        terms.push(FiltrationTerm {
            shape,
            count,
            reduced_euler: chi,
        });
    }
    // χ(S^{2n}) = χ(complement) + χ_c(F(C,n)); the open manifold F(C,n) is
    // even-dimensional so χ_c = χ, and χ(F(C,n)) = Π_{j<n} (1 - j).
    let chi_config: i64 = (0..n as i64).map(|j| 1 - j).product();
    let target = 2 - chi_config - 1;
    Ok(FiltrationReport {
        n,
        terms,
        subquotient_sum: sum,
        target,
        agree: sum == target,
    })
}
