//! Set partitions of `{1..n}`, the refinement lattice and the symmetric
//! group acting on it.
//!
//! Order convention: `a ≤ b` when `b` refines `a`. The one-block partition
//! is therefore the initial element and the discrete partition the final
//! one; [`refines`] reads the order in that direction.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ground set for which the whole lattice is enumerated
/// (Bell(9) = 21147).
pub const ENUMERATION_CAP: usize = 9;

/// A partition of `{1..n}` stored as its restricted growth string: element
/// `i` (0-based) lies in block `labels[i]`, and blocks are numbered in order
/// of their minimum element. This is exactly the canonical block form, so
/// derived equality and hashing are canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    labels: Vec<u8>,
    blocks: u8,
}

impl SetPartition {
    /// From explicit 1-based blocks; order of blocks and elements is free.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<SetPartition> {
        if n == 0 || n > 255 {
            return Err(Error::InvalidInput(format!("ground set size {n} out of range")));
        }
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidInput("empty block".into()));
            }
            for &x in block {
                if x == 0 || x > n {
                    return Err(Error::InvalidInput(format!("element {x} not in 1..{n}")));
                }
                if owner[x - 1] != usize::MAX {
                    return Err(Error::InvalidInput(format!("element {x} appears twice")));
                }
                owner[x - 1] = b;
            }
        }
        if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidInput(format!("element {} is not covered", missing + 1)));
        }
        Ok(SetPartition::from_owner(&owner))
    }

    /// From any block assignment `owner[i]`, canonicalizing the labels.
    fn from_owner<T: Copy + Eq + std::hash::Hash>(owner: &[T]) -> SetPartition {
        let mut relabel: HashMap<T, u8> = HashMap::new();
        let labels: Vec<u8> = owner
            .iter()
            .map(|o| {
                let next = relabel.len() as u8;
                *relabel.entry(*o).or_insert(next)
            })
            .collect();
        let blocks = relabel.len() as u8;
        SetPartition { labels, blocks }
    }

    pub fn one_block(n: usize) -> SetPartition {
        SetPartition {
            labels: vec![0; n],
            blocks: 1,
        }
    }

    pub fn discrete(n: usize) -> SetPartition {
        SetPartition {
            labels: (0..n as u8).collect(),
            blocks: n as u8,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks as usize
    }

    pub fn is_one_block(&self) -> bool {
        self.blocks == 1
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.n()
    }

    /// Block label of the 1-based element `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x - 1] as usize
    }

    /// Blocks as ascending 1-based element lists, ordered by minimum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i + 1);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

/// Global total order: by number of blocks, then restricted growth string.
/// Strict refinement increases the block count, so this order extends the
/// lattice order and chains list their elements from coarse to fine.
impl Ord for SetPartition {
    fn cmp(&self, other: &SetPartition) -> Ordering {
        (self.n(), self.blocks, &self.labels).cmp(&(other.n(), other.blocks, &other.labels))
    }
}

impl PartialOrd for SetPartition {
    fn partial_cmp(&self, other: &SetPartition) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorted block notation, e.g. `1,2|3`.
impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", text.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses block notation; the ground set is `{1..max}`.
impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<SetPartition> {
        let mut blocks = Vec::new();
        for part in s.trim().split('|') {
            let block = part
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad element {x:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        SetPartition::from_blocks(n, &blocks)
    }
}

/// A permutation of `{1..n}`; `images[i]` is the 0-based image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// From 1-based images `σ(1), …, σ(n)`.
    pub fn from_images(images: &[usize]) -> Result<Permutation> {
        let n = images.len();
        if n > 255 {
            return Err(Error::InvalidInput("permutation degree above 255".into()));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidInput(format!("{images:?} is not a bijection of 1..{n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&x| (x - 1) as u8).collect(),
        })
    }

    /// From disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                if x == 0 || x > n || used[x] {
                    return Err(Error::InvalidInput(format!("bad cycle {cyc:?}")));
                }
                used[x] = true;
                images[x - 1] = cyc[(i + 1) % cyc.len()];
            }
        }
        Permutation::from_images(&images)
    }

    /// The transposition `(1 2)`.
    pub fn transposition(n: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        if n >= 2 {
            p.images.swap(0, 1);
        }
        p
    }

    /// The long cycle `(1 2 … n)`.
    pub fn long_cycle(n: usize) -> Permutation {
        Permutation {
            images: (0..n).map(|i| ((i + 1) % n) as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `σ(x)` for 1-based `x`.
    pub fn image(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    pub(crate) fn image0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut lens = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn sign(&self) -> i32 {
        let even_cycles = self.cycle_type().iter().filter(|&&l| l % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// A word `[i_1, …, i_l]` in adjacent transpositions `s_i = (i i+1)`
    /// with `σ = s_{i_1} ∘ … ∘ s_{i_l}` and `l` the number of inversions.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut cur = self.images.clone();
        let mut word = Vec::new();
        // σ = σ' ∘ s_i whenever i is a descent of σ; peel descents off the right
        while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| cur[i] > cur[i + 1]) {
            cur.swap(i, i + 1);
            word.push(i + 1);
        }
        word.reverse();
        word
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.n()];
        let mut any = false;
        for start in 0..self.n() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.images[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Enumerates the partitions of `{1..n}`, optionally dropping the one-block
/// (initial) and discrete (final) partitions, in the global order.
pub fn all_partitions(n: usize, include_initial: bool, include_final: bool) -> Result<Vec<SetPartition>> {
    if n == 0 || n > ENUMERATION_CAP {
        return Err(Error::InvalidInput(format!(
            "partition enumeration needs 1 <= n <= {ENUMERATION_CAP}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    let mut maxes = vec![0u8; n];
    loop {
        let blocks = maxes[n - 1] + 1;
        out.push(SetPartition {
            labels: rgs.clone(),
            blocks,
        });
        // next restricted growth string
        let Some(i) = (1..n).rev().find(|&i| rgs[i] <= maxes[i - 1]) else {
            break;
        };
        rgs[i] += 1;
        maxes[i] = maxes[i - 1].max(rgs[i]);
        for j in i + 1..n {
            rgs[j] = 0;
            maxes[j] = maxes[i];
        }
    }
    out.retain(|p| {
        // for n = 1 the single partition is both initial and final
        (include_initial || !p.is_one_block()) && (include_final || !p.is_discrete())
    });
    out.sort();
    Ok(out)
}

/// True iff every block of `a` lies inside a block of `b`.
pub fn refines(a: &SetPartition, b: &SetPartition) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::InvalidInput(format!(
            "partitions of different ground sets ({} vs {})",
            a.n(),
            b.n()
        )));
    }
    Ok(refines_unchecked(a, b))
}

#[inline]
pub(crate) fn refines_unchecked(a: &SetPartition, b: &SetPartition) -> bool {
    if a.blocks < b.blocks {
        return false;
    }
    let mut image = [u8::MAX; 256];
    for (la, lb) in a.labels.iter().zip(&b.labels) {
        let slot = &mut image[*la as usize];
        if *slot == u8::MAX {
            *slot = *lb;
        } else if *slot != *lb {
            return false;
        }
    }
    true
}

/// The coarsest common refinement: blocks are the nonempty intersections.
pub fn common_refinement(parts: &[SetPartition]) -> Result<SetPartition> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidInput("common refinement of an empty family".into()))?;
    let n = first.n();
    if parts.iter().any(|p| p.n() != n) {
        return Err(Error::InvalidInput("partitions of different ground sets".into()));
    }
    let owner: Vec<Vec<u8>> = (0..n)
        .map(|i| parts.iter().map(|p| p.labels[i]).collect())
        .collect();
    let owner_refs: Vec<&Vec<u8>> = owner.iter().collect();
    Ok(SetPartition::from_owner(&owner_refs))
}

/// Relabels elements through `σ`: `x` and `y` share a block of the result
/// iff `σ⁻¹(x)` and `σ⁻¹(y)` share one in `λ`.
pub fn apply(sigma: &Permutation, lambda: &SetPartition) -> Result<SetPartition> {
    if sigma.n() != lambda.n() {
        return Err(Error::InvalidInput("permutation and partition degrees differ".into()));
    }
    Ok(apply_unchecked(sigma, lambda))
}

pub(crate) fn apply_unchecked(sigma: &Permutation, lambda: &SetPartition) -> SetPartition {
    let mut owner = vec![0u8; lambda.n()];
    for (i, &l) in lambda.labels.iter().enumerate() {
        owner[sigma.image0(i)] = l;
    }
    SetPartition::from_owner(&owner)
}

/// `μ(0̂, 1̂)` of the full partition lattice by the recursion
/// `μ(0̂, x) = −Σ_{0̂ ≤ y < x} μ(0̂, y)` over the refinement order.
pub fn mobius_partition_lattice(n: usize) -> Result<i64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("Mobius function needs n >= 2, got {n}")));
    }
    let elems = all_partitions(n, true, true)?;
    // global order is a linear extension, so predecessors come first
    let mut mu = vec![0i64; elems.len()];
    for x in 0..elems.len() {
        if x == 0 {
            mu[0] = 1;
            continue;
        }
        let s: i64 = (0..x)
            .filter(|&y| elems[y].blocks < elems[x].blocks && refines_unchecked(&elems[x], &elems[y]))
            .map(|y| mu[y])
            .sum();
        mu[x] = -s;
    }
    Ok(mu[elems.len() - 1])
}

/// One permutation per cycle type with its class size.
pub fn conjugacy_class_reps(n: usize) -> Result<Vec<(Permutation, u128)>> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidInput(format!("class representatives need 1 <= n <= 30, got {n}")));
    }
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let mut out = Vec::new();
    for shape in integer_partitions(n) {
        let mut cycles = Vec::new();
        let mut next = 1;
        for &len in &shape {
            cycles.push((next..next + len).collect::<Vec<_>>());
            next += len;
        }
        let perm = Permutation::from_cycles(n, &cycles)?;
        let mut centralizer: u128 = 1;
        let mut i = 0;
        while i < shape.len() {
            let len = shape[i];
            let mult = shape[i..].iter().take_while(|&&l| l == len).count();
            centralizer *= (len as u128).pow(mult as u32) * fact(mult);
            i += mult;
        }
        out.push((perm, fact(n) / centralizer));
    }
    Ok(out)
}

/// Integer partitions of `n`, each non-increasing, starting from `1^n` and
/// ending at `(n)`.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in 1..=max.min(rest) {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}
