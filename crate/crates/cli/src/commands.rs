use clap::{Args, Subcommand};
use pn_core::complexes::{euler_filtration_check, k_lambda, k_n};
use pn_core::dyer_lashof::{count_basis, enumerate_basis, obstruction_group};
use pn_core::genus::{classify, table};
use pn_core::group_homology::{
    bar_homology, coinvariants, lie_or_twist, verify_corollary3, verify_corollary4_degree0, verify_les_n4,
};
use pn_core::lie_module::{character, Twist};
use pn_core::linalg::{Budget, Coefficients, HomologyGroup};
use pn_core::partitions::{all_partitions, mobius_partition_lattice, SetPartition};
use pn_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Set partitions of {1..n} ordered by refinement
    Lattice {
        n: usize,
        /// Report the Mobius number of the whole lattice instead of listing it
        #[arg(long)]
        mobius: bool,
    },
    /// Partition complexes
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// The top homology module L_n of K_n
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Symmetric group homology with coefficients in L_n
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Consistency checks between independent computations
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Dyer-Lashof word calculus at an odd prime
    #[command(subcommand)]
    Dl(DlCmd),
    /// Genus verdicts
    Genus(GenusArgs),
}

#[derive(Debug, Subcommand)]
pub enum ComplexCmd {
    /// K_n: suspended order complex of the proper part of the lattice
    Kn {
        n: usize,
        /// Number of simplices per dimension
        #[arg(long, conflicts_with = "homology")]
        f_vector: bool,
        /// Reduced homology in every degree
        #[arg(long)]
        homology: bool,
        /// Coefficients in F_p instead of Z
        #[arg(long = "mod", value_name = "P", requires = "homology")]
        modulus: Option<u64>,
    },
    /// K_lambda for a partition written like 1,2|3,4
    Klambda { partition: String },
}

#[derive(Debug, Subcommand)]
pub enum ModuleCmd {
    /// Integral matrices of (1 2) and (1 2 ... n) on L_n
    Extract {
        n: usize,
        /// Character table values instead of matrices
        #[arg(long)]
        character: bool,
        /// Tensor with the sign representation
        #[arg(long)]
        sign_twist: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum HomologyCmd {
    /// H_0, the coinvariants
    Coinvariants {
        n: usize,
        #[arg(long)]
        sign_twist: bool,
    },
    /// H_d from the normalized bar complex
    Bar {
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
        #[arg(long)]
        sign_twist: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// H_i(S_3; L_3) against H_{i-2}(S_3; L_3 (x) Z[-1])
    Cor3 {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Degree-0 groups for S_3, S_6 and the word model
    Cor4,
    /// The exact sequence for n = 4 in low degrees
    Les4 {
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Euler characteristics along the filtration by number of blocks
    Filtration { n: usize },
}

#[derive(Debug, Subcommand)]
pub enum DlCmd {
    /// Completely inadmissible words of length k in one degree
    Words {
        p: u64,
        k: usize,
        #[arg(long)]
        dim: u128,
    },
    /// The verdict on H_{n-1}(S_n; L_n) for n = 2p^k
    Obstruction { n: u64 },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct GenusArgs {
    pub n: Option<u64>,
    #[command(subcommand)]
    pub table: Option<GenusCmd>,
}

#[derive(Debug, Subcommand)]
pub enum GenusCmd {
    /// Verdicts for every n in a range
    Table {
        #[arg(long, default_value_t = 1)]
        min: u64,
        #[arg(long)]
        max: u64,
    },
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Invariant(format!("serialization failed: {e}")))
}

fn twist(sign: bool) -> Twist {
    if sign {
        Twist::Sign
    } else {
        Twist::None
    }
}

fn coefficients(modulus: Option<u64>) -> Coefficients {
    modulus.map_or(Coefficients::Integers, Coefficients::ModP)
}

fn coefficient_name(c: Coefficients) -> String {
    match c {
        Coefficients::Integers => "Z".into(),
        Coefficients::ModP(p) => format!("F_{p}"),
    }
}

fn group_rows(h: &[HomologyGroup], coeff: Coefficients, extra: &[(&str, Value)]) -> Value {
    let rows = h
        .iter()
        .enumerate()
        .map(|(degree, g)| {
            let mut row = serde_json::Map::new();
            for (k, v) in extra {
                row.insert(k.to_string(), v.clone());
            }
            row.insert("degree".into(), json!(degree));
            row.insert("coefficients".into(), json!(coefficient_name(coeff)));
            row.insert("group".into(), json!(g.to_string()));
            Value::Object(row)
        })
        .collect();
    Value::Array(rows)
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn run(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::Lattice { n, mobius: true } => {
            let elements = all_partitions(*n, true, true)?.len();
            Ok(json!({"n": n, "elements": elements, "mobius": mobius_partition_lattice(*n)?}))
        }
        Command::Lattice { n, mobius: false } => Ok(Value::Array(
            all_partitions(*n, true, true)?
                .iter()
                .map(|p| json!({"partition": p.to_string(), "blocks": p.num_blocks()}))
                .collect(),
        )),
        Command::Complex(c) => complex(c),
        Command::Module(ModuleCmd::Extract { n, character: show, sign_twist }) => {
            let rep = lie_or_twist(*n, twist(*sign_twist))?;
            if *show {
                let values = character(&rep)?;
                Ok(Value::Array(
                    values
                        .iter()
                        .map(|c| {
                            json!({"cycle_type": join_usize(&c.cycle_type), "class_size": c.class_size, "value": c.value})
                        })
                        .collect(),
                ))
            } else {
                Ok(json!({
                    "n": rep.n,
                    "dim": rep.dim,
                    "twist": rep.twist,
                    "basis": rep.basis_provenance,
                    "bundle": rep.to_bundle(),
                }))
            }
        }
        Command::Homology(HomologyCmd::Coinvariants { n, sign_twist }) => {
            let rep = lie_or_twist(*n, twist(*sign_twist))?;
            Ok(json!({"n": n, "twist": rep.twist, "degree": 0, "group": coinvariants(&rep)?.to_string()}))
        }
        Command::Homology(HomologyCmd::Bar { n, degree, modulus, sign_twist }) => {
            let rep = lie_or_twist(*n, twist(*sign_twist))?;
            let coeff = coefficients(*modulus);
            let g = bar_homology(*n, &rep, *degree, coeff)?;
            Ok(json!({
                "n": n,
                "twist": rep.twist,
                "degree": degree,
                "coefficients": coefficient_name(coeff),
                "group": g.to_string(),
            }))
        }
        Command::Verify(v) => verify(v),
        Command::Dl(DlCmd::Words { p, k, dim }) => {
            let count = count_basis(*p, *k, *dim)?;
            let limit = Budget::global().max_entries as u128;
            if count.total > limit {
                return Err(Error::Resource(format!("{} words exceed the listing budget of {limit}", count.total)));
            }
            Ok(Value::Array(
                enumerate_basis(*p, *k, *dim)?
                    .iter()
                    .map(|w| json!({"p": p, "k": k, "dimension": dim, "word": w.to_string()}))
                    .collect(),
            ))
        }
        Command::Dl(DlCmd::Obstruction { n }) => to_value(&obstruction_group(*n)?),
        Command::Genus(GenusArgs { n: Some(n), .. }) => to_value(&classify(*n)?),
        Command::Genus(GenusArgs { table: Some(GenusCmd::Table { min, max }), .. }) => to_value(&table(*min, *max)?),
        Command::Genus(GenusArgs { n: None, table: None }) => {
            Err(Error::InvalidInput("genus needs <n> or the table subcommand".into()))
        }
    }
}

fn complex(cmd: &ComplexCmd) -> Result<Value> {
    match cmd {
        ComplexCmd::Kn { n, f_vector, homology, modulus } => {
            let k = k_n(*n)?;
            if *homology {
                let coeff = coefficients(*modulus);
                let h = k.homology_all(coeff, true)?;
                Ok(group_rows(&h, coeff, &[("n", json!(n))]))
            } else if *f_vector {
                Ok(Value::Array(
                    k.f_vector()
                        .iter()
                        .enumerate()
                        .map(|(d, c)| json!({"dimension": d, "simplices": c}))
                        .collect(),
                ))
            } else {
                Ok(json!({
                    "n": n,
                    "dimension": k.dimension(),
                    "vertices": k.vertices().len(),
                    "f_vector": k.f_vector(),
                    "reduced_euler_characteristic": k.reduced_euler_characteristic(),
                }))
            }
        }
        ComplexCmd::Klambda { partition } => {
            let lambda: SetPartition = partition.parse()?;
            let k = k_lambda(&lambda)?;
            let h = k.homology_all(Coefficients::Integers, true)?;
            Ok(group_rows(&h, Coefficients::Integers, &[("partition", json!(lambda.to_string()))]))
        }
    }
}

fn verify(cmd: &VerifyCmd) -> Result<Value> {
    let report = match cmd {
        VerifyCmd::Cor3 { max_degree } => verify_corollary3(0..=*max_degree)?,
        VerifyCmd::Cor4 => verify_corollary4_degree0()?,
        VerifyCmd::Les4 { max_degree } => verify_les_n4(0..=*max_degree)?,
        VerifyCmd::Filtration { n } => return to_value(&euler_filtration_check(*n)?),
    };
    to_value(&report.rows)
}
