//! `L_n`, the top reduced homology of `K_n`, as an explicit lattice with
//! integer matrices for the generators `(1 2)` and `(1 2 … n)`.

use std::fmt::Write as _;

use pn_linalg::{kernel_basis_with, read_bundle, solve_in_basis, write_bundle, Budget, Int, IntMatrix, SparseIntMatrix};
use serde::Serialize;

use crate::complexes::{k_n_with, EquivariantComplex};
use crate::error::{Error, Result};
use crate::partitions::{conjugacy_class_reps, Permutation};

const BUNDLE_MAGIC: &str = "pn-representation 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    None,
    Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralRepresentation {
    pub n: usize,
    pub dim: usize,
    /// Matrices of `(1 2)` and `(1 2 … n)` acting on coordinate columns.
    pub generators: [IntMatrix; 2],
    pub twist: Twist,
    pub basis_provenance: String,
}

/// One value of a class function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassValue {
    pub cycle_type: Vec<usize>,
    pub class_size: u128,
    pub value: i64,
}

impl IntegralRepresentation {
    /// The rank-one trivial or sign representation.
    pub fn rank_one(n: usize, twist: Twist) -> IntegralRepresentation {
        let one = IntMatrix::identity(1);
        let rep = IntegralRepresentation {
            n,
            dim: 1,
            generators: [one.clone(), one],
            twist: Twist::None,
            basis_provenance: "trivial module Z".into(),
        };
        match twist {
            Twist::None => rep,
            Twist::Sign => tensor_sign(&rep),
        }
    }

    pub fn t(&self) -> &IntMatrix {
        &self.generators[0]
    }

    pub fn c(&self) -> &IntMatrix {
        &self.generators[1]
    }

    /// Matrix of `s_i = (i i+1) = c^{i-1} t c^{-(i-1)}` for `1 ≤ i < n`.
    fn adjacent(&self) -> Vec<IntMatrix> {
        let c_inv = self.c().pow(self.n as u64 - 1);
        let mut out = Vec::with_capacity(self.n.saturating_sub(1));
        let mut conj = (IntMatrix::identity(self.dim), IntMatrix::identity(self.dim));
        for _ in 1..self.n {
            out.push(conj.0.mul(self.t()).mul(&conj.1));
            conj = (conj.0.mul(self.c()), c_inv.mul(&conj.1));
        }
        out
    }

    /// The matrix of an arbitrary permutation, from a reduced word in the
    /// adjacent transpositions.
    pub fn matrix_of(&self, sigma: &Permutation) -> Result<IntMatrix> {
        if sigma.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "permutation of degree {} for a representation of degree {}",
                sigma.n(),
                self.n
            )));
        }
        let s = self.adjacent();
        Ok(sigma
            .adjacent_word()
            .into_iter()
            .fold(IntMatrix::identity(self.dim), |acc, i| acc.mul(&s[i - 1])))
    }

    /// Checks unimodularity and the Coxeter relations of the adjacent
    /// transpositions obtained from the two generators, together with
    /// `t² = c^n = 1` and `c = s_1 ⋯ s_{n-1}`.
    pub fn check_relations(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Invariant(format!("degree {} representation: {what}", self.n)));
        for g in &self.generators {
            if g.rows() != self.dim || g.cols() != self.dim {
                return fail("generator has the wrong shape");
            }
            if !g.det().is_unit() {
                return fail("generator is not unimodular");
            }
        }
        if self.n == 1 {
            return if self.t().is_identity() && self.c().is_identity() {
                Ok(())
            } else {
                fail("nontrivial action of the trivial group")
            };
        }
        if !self.t().mul(self.t()).is_identity() {
            return fail("t^2 != 1");
        }
        if !self.c().pow(self.n as u64).is_identity() {
            return fail("c^n != 1");
        }
        let s = self.adjacent();
        for i in 0..s.len() {
            if !s[i].mul(&s[i]).is_identity() {
                return fail("s_i^2 != 1");
            }
            if i + 1 < s.len() && !s[i].mul(&s[i + 1]).pow(3).is_identity() {
                return fail("braid relation fails");
            }
            for j in i + 2..s.len() {
                if s[i].mul(&s[j]) != s[j].mul(&s[i]) {
                    return fail("distant transpositions do not commute");
                }
            }
        }
        let product = s.iter().fold(IntMatrix::identity(self.dim), |acc, m| acc.mul(m));
        if &product != self.c() {
            return fail("c != s_1 ... s_{n-1}");
        }
        Ok(())
    }

    /// Text form: a small header followed by the two generator matrices as
    /// a triplet bundle.
    pub fn to_bundle(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{BUNDLE_MAGIC}");
        let _ = writeln!(s, "n {}", self.n);
        let _ = writeln!(s, "dim {}", self.dim);
        let _ = writeln!(s, "twist {}", if self.twist == Twist::Sign { "sign" } else { "none" });
        let _ = writeln!(s, "basis {}", self.basis_provenance);
        let t = SparseIntMatrix::from_dense(self.t());
        let c = SparseIntMatrix::from_dense(self.c());
        s.push_str(&write_bundle(&[("t".to_string(), &t), ("c".to_string(), &c)]));
        s
    }

    pub fn from_bundle(text: &str) -> Result<IntegralRepresentation> {
        let bad = |m: &str| Error::InvalidInput(format!("representation bundle: {m}"));
        let mut lines = text.lines();
        if lines.next() != Some(BUNDLE_MAGIC) {
            return Err(bad("missing header"));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("expected `{key}`")))
        };
        let n: usize = field("n")?.parse().map_err(|_| bad("bad n"))?;
        let dim: usize = field("dim")?.parse().map_err(|_| bad("bad dim"))?;
        let twist = match field("twist")?.as_str() {
            "none" => Twist::None,
            "sign" => Twist::Sign,
            _ => return Err(bad("bad twist")),
        };
        let basis_provenance = field("basis")?;
        let rest: Vec<&str> = lines.collect();
        let mats = read_bundle(&rest.join("\n"))?;
        let [(lt, t), (lc, c)]: [(String, SparseIntMatrix); 2] =
            mats.try_into().map_err(|_| bad("expected two matrices"))?;
        if lt != "t" || lc != "c" {
            return Err(bad("matrices must be labelled t and c"));
        }
        let rep = IntegralRepresentation {
            n,
            dim,
            generators: [t.to_dense(), c.to_dense()],
            twist,
            basis_provenance,
        };
        if rep.generators.iter().any(|g| g.rows() != dim || g.cols() != dim) {
            return Err(bad("matrix shape does not match dim"));
        }
        Ok(rep)
    }
}

/// Extracts `L_n = H̃_{n-2}(K_n)` for `2 ≤ n ≤ 7`. `K_n` has dimension
/// `n − 2`, so top homology is the lattice of top cycles; its Hermite basis
/// is the canonical basis here.
pub fn extract_ln(n: usize) -> Result<IntegralRepresentation> {
    extract_ln_with(n, &Budget::global())
}

pub fn extract_ln_with(n: usize, budget: &Budget) -> Result<IntegralRepresentation> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidInput(format!("L_n extraction needs 2 <= n <= 7, got {n}")));
    }
    let k = k_n_with(n, budget)?;
    extract_top_homology(&k, budget)
}

fn extract_top_homology(k: &EquivariantComplex, budget: &Budget) -> Result<IntegralRepresentation> {
    let n = k.group_degree();
    let top = k.dimension().ok_or_else(|| Error::InvalidInput("empty complex".into()))?;
    let boundary = if top == 0 {
        // reduced H_0: kernel of the augmentation
        let v = k.num_simplices(0);
        SparseIntMatrix::from_triplets(1, v, (0..v).map(|j| (0, j, Int::ONE)))?
    } else {
        k.boundary(top).expect("top boundary").clone()
    };
    let basis = kernel_basis_with(&boundary, budget)?;
    let cycles = basis.columns();
    let mut generators = Vec::with_capacity(2);
    for action in k.generator_actions() {
        let moved = action[top].to_matrix().mul(&basis)?;
        let a = solve_in_basis(cycles, &moved)
            .map_err(|e| Error::Invariant(format!("generator does not preserve the cycles: {e}")))?;
        generators.push(a);
    }
    let [t, c] = <[IntMatrix; 2]>::try_from(generators)
        .map_err(|_| Error::Invariant("complex must carry exactly two generator actions".into()))?;
    let rep = IntegralRepresentation {
        n,
        dim: basis.cols(),
        generators: [t, c],
        twist: Twist::None,
        basis_provenance: format!("Hermite basis of the top cycles of K_{n} (dimension {top})"),
    };
    Ok(rep)
}

/// `M ⊗ Z[−1]`: each generator matrix times the sign of the generator.
pub fn tensor_sign(rep: &IntegralRepresentation) -> IntegralRepresentation {
    let minus = Int::from(-1);
    let t = rep.t().scale(&minus);
    let c = if rep.n.is_multiple_of(2) { rep.c().scale(&minus) } else { rep.c().clone() };
    IntegralRepresentation {
        n: rep.n,
        dim: rep.dim,
        generators: [t, c],
        twist: match rep.twist {
            Twist::None => Twist::Sign,
            Twist::Sign => Twist::None,
        },
        basis_provenance: rep.basis_provenance.clone(),
    }
}

/// Traces of representing matrices on one element of each conjugacy class.
pub fn character(rep: &IntegralRepresentation) -> Result<Vec<ClassValue>> {
    conjugacy_class_reps(rep.n)?
        .into_iter()
        .map(|(sigma, size)| {
            let value = rep.matrix_of(&sigma)?.trace();
            Ok(ClassValue {
                cycle_type: sigma.cycle_type(),
                class_size: size,
                value: value
                    .to_i64()
                    .ok_or_else(|| Error::Invariant("character value out of range".into()))?,
            })
        })
        .collect()
}

/// The character of `L_n` (optionally twisted) from the chains of `K_n`
/// alone: homology is concentrated in degree `n − 2`, so the alternating
/// sum of chain traces equals `1 + (−1)^{n−2} χ(σ)`.
pub fn character_via_hopf_trace(n: usize, twist: Twist) -> Result<Vec<ClassValue>> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidInput(format!("trace formula needs 2 <= n <= 7, got {n}")));
    }
    let k = k_n_with(n, &Budget::global())?;
    let sign_n: i64 = if n.is_multiple_of(2) { 1 } else { -1 };
    conjugacy_class_reps(n)?
        .into_iter()
        .map(|(sigma, size)| {
            let lefschetz: i64 = k
                .act(&sigma)?
                .iter()
                .enumerate()
                .map(|(dim, a)| if dim % 2 == 0 { a.trace() } else { -a.trace() })
                .sum();
            let mut value = sign_n * (lefschetz - 1);
            if twist == Twist::Sign {
                value *= sigma.sign() as i64;
            }
            Ok(ClassValue {
                cycle_type: sigma.cycle_type(),
                class_size: size,
                value,
            })
        })
        .collect()
}

/// `(1/n!) Σ |C| χ(C) ψ(C)` for integer-valued characters, or `None` when
/// the sum is not divisible by `n!`.
pub fn inner_product(a: &[ClassValue], b: &[ClassValue]) -> Option<i64> {
    if a.len() != b.len() {
        return None;
    }
    let mut order: u128 = 0;
    let mut sum: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        if x.cycle_type != y.cycle_type {
            return None;
        }
        order += x.class_size;
        sum += x.class_size as i128 * x.value as i128 * y.value as i128;
    }
    let order = order as i128;
    (order > 0 && sum % order == 0).then(|| (sum / order) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(chi: &[ClassValue]) -> Vec<i64> {
        chi.iter().map(|c| c.value).collect()
    }

    #[test]
    fn l2_is_trivial() {
        let l2 = extract_ln(2).unwrap();
        assert_eq!(l2.dim, 1);
        assert!(l2.t().is_identity() && l2.c().is_identity());
        assert_eq!(values(&character(&l2).unwrap()), vec![1, 1]);
        let twisted = tensor_sign(&l2);
        assert_eq!(twisted.t()[(0, 0)], Int::from(-1));
    }

    #[test]
    fn l3_relations_and_character() {
        let l3 = extract_ln(3).unwrap();
        assert_eq!(l3.dim, 2);
        l3.check_relations().unwrap();
        assert!(l3.t().mul(l3.t()).is_identity());
        assert!(l3.c().pow(3).is_identity());
        assert_eq!(values(&character(&l3).unwrap()), vec![2, 0, -1]);
        let tw = tensor_sign(&l3);
        assert_eq!(character(&tw).unwrap()[2].value, -1);
        assert_eq!(tensor_sign(&tw), l3);
    }

    #[test]
    fn hopf_trace_small() {
        assert_eq!(values(&character_via_hopf_trace(3, Twist::None).unwrap()), vec![2, 0, -1]);
        assert_eq!(values(&character_via_hopf_trace(2, Twist::None).unwrap()), vec![1, 1]);
        assert_eq!(values(&character_via_hopf_trace(2, Twist::Sign).unwrap()), vec![1, -1]);
    }

    #[test]
    fn bundle_round_trip() {
        let l3 = extract_ln(3).unwrap();
        let text = l3.to_bundle();
        assert_eq!(IntegralRepresentation::from_bundle(&text).unwrap(), l3);
        assert!(IntegralRepresentation::from_bundle("nonsense").is_err());
    }

    #[test]
    fn inner_products() {
        let chi = character(&extract_ln(3).unwrap()).unwrap();
        assert_eq!(inner_product(&chi, &chi), Some(1));
    }
}
