//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so every line is printed even when everything passes.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pn_core::complexes::{euler_filtration_check, k_lambda, k_n};
use pn_core::dyer_lashof::{enumerate_basis, k1_integral, obstruction_group, VerdictStatus};
use pn_core::genus::{table, FactorShape, GenusSource, GenusStatus};
use pn_core::group_homology::{bar_homology, coinvariants, verify_les_n4};
use pn_core::lie_module::{character, character_via_hopf_trace, extract_ln, tensor_sign, Twist};
use pn_core::linalg::{invariant_factors, is_prime, rank_mod_p, AbelianGroup, Coefficients, HomologyGroup};
use pn_core::partitions::mobius_partition_lattice;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn free(r: usize) -> AbelianGroup {
    AbelianGroup::free(r)
}

fn integral(h: HomologyGroup) -> AbelianGroup {
    h.integral().cloned().expect("integral coefficients")
}

fn wedge_of_spheres(n: usize) -> Check {
    let h = k_n(n).map_err(|e| e.to_string())?.homology_all(Coefficients::Integers, true).map_err(|e| e.to_string())?;
    for (i, g) in h.into_iter().enumerate() {
        let want = if i == n - 2 { free(factorial(n - 1)) } else { AbelianGroup::trivial() };
        ensure!(integral(g.clone()) == want, "n = {n}: reduced H_{i} = {g}, expected {want}");
    }
    Ok(format!("Z^{}", factorial(n - 1)))
}

fn c1() -> Check {
    let mut parts = Vec::new();
    for n in 3..=6 {
        parts.push(format!("n={n}: {}", wedge_of_spheres(n)?));
    }
    let start = Instant::now();
    wedge_of_spheres(7)?;
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(600), "n = 7 took {t:?}");
    parts.push(format!("n=7: Z^720 in {:.1}s", t.as_secs_f64()));
    Ok(parts.join(", "))
}

fn c2() -> Check {
    for n in 2..=8 {
        let mu = mobius_partition_lattice(n).map_err(|e| e.to_string())?;
        ensure!(mu.unsigned_abs() as usize == factorial(n - 1), "mu(Pi_{n}) = {mu}");
        if n <= 6 {
            let l = extract_ln(n).map_err(|e| e.to_string())?;
            ensure!(l.dim == factorial(n - 1), "rank L_{n} = {}", l.dim);
        }
    }
    Ok("|mu| = (n-1)! = rank for n <= 6, mu alone to n = 8".into())
}

fn c3() -> Check {
    let lambda = "1,2|3,4".parse().map_err(|e: pn_core::Error| e.to_string())?;
    let h = k_lambda(&lambda).map_err(|e| e.to_string())?.homology_all(Coefficients::Integers, true).map_err(|e| e.to_string())?;
    let got: Vec<String> = h.iter().map(ToString::to_string).collect();
    ensure!(got == ["0", "Z"], "reduced homology {got:?}");
    Ok("reduced homology 0, Z".into())
}

fn c4() -> Check {
    for n in 2..=5 {
        let r = euler_filtration_check(n).map_err(|e| e.to_string())?;
        ensure!(r.agree && r.subquotient_sum == 1 && r.target == 1, "n = {n}: {} vs {}", r.subquotient_sum, r.target);
    }
    Ok("both sides 1 for n = 2..5".into())
}

fn c5() -> Check {
    for n in 2..=6 {
        let l = extract_ln(n).map_err(|e| e.to_string())?;
        let chi = character(&l).map_err(|e| e.to_string())?;
        ensure!(chi[0].value as usize == factorial(n - 1), "chi_L{n}(id) = {}", chi[0].value);
        if n <= 5 {
            for (twist, rep) in [(Twist::None, l.clone()), (Twist::Sign, tensor_sign(&l))] {
                let a = character(&rep).map_err(|e| e.to_string())?;
                let b = character_via_hopf_trace(n, twist).map_err(|e| e.to_string())?;
                ensure!(a == b, "n = {n} {twist:?}: matrix and Hopf traces differ");
            }
        }
    }
    let chi3: Vec<i64> = character(&extract_ln(3).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| c.value)
        .collect();
    ensure!(chi3 == [2, 0, -1], "chi_L3 = {chi3:?}");
    Ok("chi_L3 = (2, 0, -1); channels agree for n <= 5".into())
}

fn c6() -> Check {
    let l3 = extract_ln(3).map_err(|e| e.to_string())?;
    let h: Vec<AbelianGroup> = (0..=2)
        .map(|i| bar_homology(3, &l3, i, Coefficients::Integers).map(integral))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let twisted0 = coinvariants(&tensor_sign(&l3)).map_err(|e| e.to_string())?;
    let z3 = AbelianGroup::cyclic(3);
    ensure!(h[0].is_trivial() && h[1].is_trivial(), "H_0, H_1 = {}, {}", h[0], h[1]);
    ensure!(h[2] == z3 && twisted0 == z3, "H_2 = {}, twisted H_0 = {}", h[2], twisted0);
    let l5 = coinvariants(&extract_ln(5).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(l5.is_trivial(), "H_0(Sigma_5; L_5) = {l5}");
    Ok("H_*(Sigma_3; L_3) = 0, 0, Z/3; twisted H_0 = Z/3; H_0(Sigma_5; L_5) = 0".into())
}

fn c7() -> Check {
    let a = coinvariants(&extract_ln(6).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let b = coinvariants(&tensor_sign(&extract_ln(3).map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
    let c = k1_integral(3, 4).map_err(|e| e.to_string())?;
    let z3 = AbelianGroup::cyclic(3);
    ensure!(a == z3 && b == z3 && c == z3, "{a}, {b}, {c}");
    Ok("Z/3 = Z/3 = Z/3".into())
}

/// The statement as given expects `H_0 = Z` and `H_1 = Z/2`; both are
/// contradicted by direct computation. The corrected sequence, with the
/// sign twist on the `Σ_2` term, is asserted to hold.
fn c8() -> Check {
    let l4 = extract_ln(4).map_err(|e| e.to_string())?;
    let h0 = coinvariants(&l4).map_err(|e| e.to_string())?;
    let h1 = integral(bar_homology(4, &l4, 1, Coefficients::Integers).map_err(|e| e.to_string())?);
    assert_eq!((h0.to_string(), h1.to_string()), ("Z/2".to_string(), "0".to_string()));
    let corrected = verify_les_n4(0..=2).map_err(|e| e.to_string())?;
    assert!(corrected.all_equal, "corrected sequence fails: {corrected:?}");
    ensure!(
        h0 == free(1) && h1 == AbelianGroup::cyclic(2),
        "stated H_0 = Z, H_1 = Z/2 but computed H_0 = {h0}, H_1 = {h1}; \
         the sequence with H_i(Sigma_2; L_2 (x) Z[-1]) on the left holds in degrees 0..2"
    );
    Ok(String::new())
}

fn c9() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for p in (3..=97).filter(|&p| is_prime(p)) {
        let v = obstruction_group(2 * p).map_err(|e| e.to_string())?;
        ensure!(v.status == VerdictStatus::Zero, "n = {}: {}", 2 * p, v.status);
        count += 1;
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(1), "sweep took {t:?}");
    Ok(format!("{count} primes, all Zero, {:.1} ms", t.as_secs_f64() * 1e3))
}

fn c10() -> Check {
    let v = obstruction_group(18).map_err(|e| e.to_string())?;
    let w: Vec<String> = v.witnesses.iter().map(ToString::to_string).collect();
    ensure!(v.status == VerdictStatus::NonZero && v.dimension == 33 && w == ["bQ7Q1u"], "{v:?}");
    let basis = enumerate_basis(3, 2, 33).map_err(|e| e.to_string())?;
    ensure!(basis.len() == 3, "{} basis words", basis.len());
    Ok("NonZero, witness bQ7Q1u in dimension 33, 3 basis words".into())
}

fn c11() -> Check {
    let rows = table(1, 100).map_err(|e| e.to_string())?;
    let mut unknown = Vec::new();
    for v in &rows {
        let n = v.n;
        let prime_power = (2..=n).find(|d| n % d == 0).is_some_and(|p| {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            m == 1
        });
        let twice = n % 2 == 0 && n > 2 && {
            let h = n / 2;
            h % 2 == 1 && (3..=h).find(|d| h % d == 0).is_some_and(|p| {
                let mut m = h;
                while m % p == 0 {
                    m /= p;
                }
                m == 1
            })
        };
        if n == 1 || prime_power {
            ensure!(v.status == GenusStatus::EqualsN && v.source == GenusSource::Vassiliev, "n = {n}: {:?}", v.status);
        } else if twice {
            let ev = v.evidence.as_ref().ok_or(format!("n = {n} lacks evidence"))?;
            let want = if ev.status == VerdictStatus::Zero { GenusStatus::LessThanN } else { GenusStatus::Unknown };
            ensure!(v.status == want, "n = {n}: {:?} with obstruction {}", v.status, ev.status);
        } else {
            ensure!(
                v.status == GenusStatus::LessThanN && v.source == GenusSource::VanishingTheorem,
                "n = {n}: {:?}",
                v.status
            );
        }
        if v.status == GenusStatus::Unknown {
            unknown.push(n);
        }
    }
    ensure!(unknown == [18, 50, 54, 98], "Unknown for {unknown:?}");
    ensure!(pn_core::genus::factor_shape(18) == FactorShape::TwicePrimePower { p: 3, k: 2 }, "shape of 18");
    Ok("100 verdicts routed; Unknown exactly at 18, 50, 54, 98".into())
}

/// Direct computation in the large cases is out of reach; the substitute
/// invariants are checked instead.
fn c12() -> Check {
    for n in 2..=6 {
        k_n(n).map_err(|e| e.to_string())?.check_invariants().map_err(|e| e.to_string())?;
    }
    for n in 3..=5 {
        let k = k_n(n).map_err(|e| e.to_string())?;
        for d in 1..=n - 2 {
            let b = k.boundary(d).unwrap();
            let factors = invariant_factors(b).map_err(|e| e.to_string())?;
            for p in [2, 3, 5] {
                let units = factors.iter().filter(|f| f.mod_u64(p) != 0).count();
                ensure!(rank_mod_p(b, p).map_err(|e| e.to_string())? == units, "n = {n}, d_{d}, p = {p}");
            }
        }
    }
    let l3 = extract_ln(3).map_err(|e| e.to_string())?;
    let groups: Vec<AbelianGroup> = (0..=2)
        .map(|i| bar_homology(3, &l3, i, Coefficients::Integers).map(integral))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for p in [2u64, 3] {
        let tors = |g: &AbelianGroup| g.torsion.iter().filter(|d| d.mod_u64(p) == 0).count();
        for k in 0..=2 {
            let want = groups[k].free_rank + tors(&groups[k]) + k.checked_sub(1).map_or(0, |j| tors(&groups[j]));
            let got = bar_homology(3, &l3, k, Coefficients::ModP(p)).map_err(|e| e.to_string())?.mod_p_dim();
            ensure!(got == Some(want), "UCT fails for L_3, p = {p}, degree {k}");
        }
    }
    Ok("declared out of scope; boundary squares, equivariance, SNF vs mod-p rank and UCT checks pass".into())
}

/// Criteria whose statement cannot be met; see the project notes.
const EXPECTED_FAILURES: &[usize] = &[8];

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("K_n is a wedge of (n-1)! spheres", c1),
        ("Mobius number equals rank", c2),
        ("K_{12|34} homology", c3),
        ("filtration Euler identity", c4),
        ("characters of L_n", c5),
        ("Sigma_3 homology of L_3", c6),
        ("degree-0 coinvariants of L_6", c7),
        ("n = 4 exact sequence, stated values", c8),
        ("obstruction vanishes for n = 2p", c9),
        ("obstruction for n = 18", c10),
        ("genus classifier for n <= 100", c11),
        ("large cases via substitute invariants", c12),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let num = i + 1;
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let expected_fail = EXPECTED_FAILURES.contains(&num);
        match &outcome {
            Ok(detail) => println!("criterion {num:>2} PASS  {name}: {detail}"),
            Err(detail) => println!("criterion {num:>2} FAIL  {name}: {detail}"),
        }
        if outcome.is_ok() == expected_fail {
            unexpected += 1;
        }
    }
    let total_fail = EXPECTED_FAILURES.len();
    if unexpected == 0 {
        println!("acceptance: {} pass, {total_fail} fail as recorded", 12 - total_fail);
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} criteria differ from the recorded outcome");
        ExitCode::FAILURE
    }
}
