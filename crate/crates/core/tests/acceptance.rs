//! Acceptance suite: one PASS/FAIL line per criterion, each under its time
//! limit. Runs as a plain binary (`harness = false`) so the criteria execute
//! sequentially and their timings are not skewed by each other.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use hypershift::constructions::{
    build_schedule, hypercyclic_prefix, orbit_visit, periodic_fixpoint_check, periodic_point, periodic_point_distance,
    target_metadata, DenseEnumeration,
};
use hypershift::operators::{ShiftOperator, WeightSequence};
use hypershift::scalars::{Rational, Scalar};
use hypershift::spaces::{CoordVector, SpaceSpec};
use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// `2^e` for any integer `e`.
fn two_pow(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Independent model of the λ = 2 shift: `w_k = 2^k`, `(Ax)_k = w_k x_{k+1}`,
/// `(Bx)_{k+1} = x_k / w_k`, one step at a time.
mod oracle {
    use super::*;

    pub fn a(x: &CoordVector) -> CoordVector {
        let mut out = CoordVector::zero();
        for (k, v) in x.iter().filter(|&(k, _)| k >= 2) {
            out.set(k - 1, v * &Scalar::real(two_pow(k as i64 - 1))).unwrap();
        }
        out
    }

    pub fn b(x: &CoordVector) -> CoordVector {
        let mut out = CoordVector::zero();
        for (k, v) in x.iter() {
            out.set(k + 1, v * &Scalar::real(two_pow(-(k as i64)))).unwrap();
        }
        out
    }

    pub fn a_pow(n: usize, x: &CoordVector) -> CoordVector {
        (0..n).fold(x.clone(), |v, _| a(&v))
    }

    pub fn b_pow(n: usize, x: &CoordVector) -> CoordVector {
        (0..n).fold(x.clone(), |v, _| b(&v))
    }
}

fn exp2() -> WeightSequence {
    "exp:2".parse().unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-20i64..=20)), BigInt::from(rng.gen_range(1i64..=9)))
}

fn random_scalar(rng: &mut ChaCha8Rng, complex: bool) -> Scalar {
    if complex {
        Scalar::complex(random_rational(rng), random_rational(rng))
    } else {
        Scalar::real(random_rational(rng))
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, complex: bool) -> CoordVector {
    let mut v = CoordVector::zero();
    for _ in 0..rng.gen_range(0..=6) {
        let k = rng.gen_range(1..=16);
        v.set(k, random_scalar(rng, complex)).unwrap();
    }
    v
}

fn periodic_fixed_point() -> Outcome {
    let w = exp2();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut checked = 0;
    for n in 1..=5 {
        for h in 0..50 {
            let head: Vec<Scalar> = (0..n).map(|_| random_scalar(&mut rng, false)).collect();
            let full = periodic_point(&w, head.clone(), 20).map_err(|e| e.to_string())?;
            // A^N is local, so one oracle image of the 20-block prefix covers every K.
            let image = oracle::a_pow(n, full.vector());
            for k in 2..=20 {
                let pp = periodic_point(&w, head.clone(), k).map_err(|e| e.to_string())?;
                ensure!(pp.vector() == &full.vector().truncate((k + 1) * n), "N={n} head #{h}: K={k} prefix differs from the 20-block prefix");
                let cert = periodic_fixpoint_check(&w, &pp);
                ensure!(cert.passed() && cert.recheck(), "N={n} head #{h} K={k}: {cert}");
                ensure!(
                    image.truncate(k * n) == pp.vector().truncate(k * n),
                    "N={n} head #{h} K={k}: oracle A^N x differs from x on 1..{}",
                    k * n
                );
                checked += 1;
            }
        }
    }
    let pp = periodic_point(&w, vec![Scalar::one()], 20).map_err(|e| e.to_string())?;
    for k in 1..=20i64 {
        let expected = Scalar::real(two_pow(-k * (k + 1) / 2));
        let got = pp.vector().coordinate(k as usize + 1);
        ensure!(got == expected, "N=1 head 1: coordinate {} is {got}, expected {expected}", k + 1);
    }
    Ok(format!("{checked} (N, K, head) triples exact; N=1 reference coordinates match"))
}

fn orbit_decomposition() -> Outcome {
    let w = exp2();
    let targets = DenseEnumeration::real().take(10);
    let schedule = build_schedule(&w, &targets, 10_000).map_err(|e| e.to_string())?;
    let ns = schedule.exponents.clone();
    let x_oracle = (1..=10).fold(CoordVector::zero(), |acc, j| &acc + &oracle::b_pow(ns[j - 1], &targets[j - 1]));
    let mut worst = String::new();
    for space in [SpaceSpec::l1(), SpaceSpec::l2(), SpaceSpec::c0()] {
        let op = ShiftOperator::new(w.clone(), space.clone());
        let prefix = hypercyclic_prefix(&op, &schedule, 10).map_err(|e| e.to_string())?;
        ensure!(prefix.vector == x_oracle, "{space}: x_M differs from Σ B^(n_j) y^(j)");
        for m in 1..=10 {
            let visit = orbit_visit(&op, &prefix, m).map_err(|e| e.to_string())?;
            let image = oracle::a_pow(ns[m - 1], &x_oracle);
            let decomposition = (m + 1..=10).fold(targets[m - 1].clone(), |acc, j| {
                &acc + &oracle::b_pow(ns[j - 1] - ns[m - 1], &targets[j - 1])
            });
            ensure!(visit.image == image, "{space} m={m}: A^(n_m) x_M differs from the iterated oracle");
            ensure!(image == decomposition, "{space} m={m}: A^(n_m) x_M != y^(m) + Σ_(j>m) B^(n_j-n_m) y^(j)");
            let residual = &image - &targets[m - 1];
            ensure!(visit.residual == residual, "{space} m={m}: residual mismatch");
            let bound: Rational = (m as i64 + 1..=10).map(|j| two_pow(-j)).sum::<Rational>() + two_pow(-10);
            let norm = op.norm(&residual);
            ensure!(norm.hi <= bound, "{space} m={m}: residual norm {} exceeds {bound}", norm.hi);
            ensure!(visit.passed(), "{space} m={m}: a visit certificate failed");
            if m == 1 {
                worst.push_str(&format!(" {space}:{:.3e}", num_traits::ToPrimitive::to_f64(&norm.hi).unwrap_or(f64::NAN)));
            }
        }
    }
    Ok(format!("n = {ns:?}; identity exact in l1, l2, c0; m=1 residuals{worst}"))
}

/// Least `t ≥ floor` with `2^(t(t+1)/2) ≥ bound`, by direct search.
fn minimal_gap(floor: usize, bound: &Rational) -> usize {
    (floor..).find(|&t| two_pow((t * (t + 1) / 2) as i64) >= *bound).unwrap()
}

fn schedule_certificate() -> Outcome {
    let w = exp2();
    let targets = DenseEnumeration::real().take(10);
    let schedule = build_schedule(&w, &targets, 10_000).map_err(|e| e.to_string())?;
    ensure!(schedule.passed() && schedule.reverify(&w), "stored certificates fail or do not re-verify");
    let ns = &schedule.exponents;
    ensure!(ns[0] == 1, "n_1 = {}", ns[0]);
    let mut pairs = 0;
    for m in 2..=10 {
        let s_m = target_metadata(&targets[m - 1]).s;
        ensure!(s_m == targets[m - 1].iter().map(|(_, x)| num_traits::Signed::abs(&x.re())).sum::<Rational>(), "S_{m} is not Σ|y_k|");
        let bound = two_pow(m as i64) * &s_m;
        for j in 1..m {
            let gap = ns[m - 1] - ns[j - 1];
            let k_j = targets[j - 1].max_support();
            ensure!(gap >= m.max(k_j), "pair ({j},{m}): gap {gap} < max({m}, {k_j})");
            ensure!(two_pow((gap * (gap + 1) / 2) as i64) >= bound, "pair ({j},{m}): 2^(t(t+1)/2) < |w_m| S_m with t = {gap}");
            pairs += 1;
        }
        // Greedy minimality: one step lower must violate some pair.
        let lower = ns[m - 1] - 1;
        let admissible = lower > ns[m - 2]
            && ns[..m - 1].iter().zip(&targets).all(|(n_j, y)| {
                let t = lower - n_j;
                t >= m.max(y.max_support()) && two_pow((t * (t + 1) / 2) as i64) >= bound
            });
        ensure!(!admissible, "n_{m} = {} is not minimal", ns[m - 1]);
    }

    let worked: Vec<CoordVector> = vec!["{1: 1}".parse().unwrap(), "{1: 2, 2: -1}".parse().unwrap()];
    let meta: Vec<_> = worked.iter().map(target_metadata).collect();
    ensure!(
        (meta[0].k, meta[1].k) == (1, 2) && meta[0].s == Rational::one() && meta[1].s == Rational::from_integer(3.into()),
        "worked instance metadata is not ((1,1),(2,3))"
    );
    let t = minimal_gap(2, &(two_pow(2) * Rational::from_integer(3.into())));
    ensure!(t == 3, "oracle minimal t = {t}");
    let small = build_schedule(&w, &worked, 10_000).map_err(|e| e.to_string())?;
    ensure!(small.exponents == vec![1, 1 + t], "worked instance gives {:?}", small.exponents);
    Ok(format!("n = {ns:?}; {pairs} pairs exact; worked instance n = (1, 4)"))
}

fn right_inverse_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let weights: Vec<WeightSequence> = ["exp:2", "exp:3/2", "exp:1+1*i"].iter().map(|s| s.parse().unwrap()).collect();
    for i in 0..500 {
        let x = random_sparse(&mut rng, i % 3 == 2);
        for w in &weights {
            ensure!(w.apply_shift(&w.right_inverse(&x)) == x, "{w}: A B x != x for x = {x}");
            let (mut a, mut b) = (x.clone(), x.clone());
            for n in 1..=8 {
                a = w.apply_shift(&a);
                b = w.right_inverse(&b);
                ensure!(w.apply_power(n, &x) == a, "{w}: A^{n} closed form differs from iterated A on {x}");
                ensure!(w.right_inverse_power(n, &x) == b, "{w}: B^{n} closed form differs from iterated B on {x}");
            }
        }
        let w = &weights[0];
        for n in 0..=8 {
            ensure!(w.apply_power(n, &x) == oracle::a_pow(n, &x), "exp:2: A^{n} differs from the oracle on {x}");
            ensure!(w.right_inverse_power(n, &x) == oracle::b_pow(n, &x), "exp:2: B^{n} differs from the oracle on {x}");
        }
    }
    Ok("500 vectors, 3 weight sequences, n <= 8".to_string())
}

fn unboundedness_witness() -> Outcome {
    let op = ShiftOperator::new(exp2(), SpaceSpec::l1());
    let mut previous: Option<Rational> = None;
    for n in 1..=12usize {
        let wit = op.unboundedness_witness(n);
        let expected = two_pow((n * (3 * n - 1) / 2) as i64);
        let oracle_image = oracle::a_pow(n, &CoordVector::basis(2 * n).unwrap());
        ensure!(wit.image == oracle_image, "n={n}: A^n e_2n differs from the oracle");
        ensure!(wit.value.lo == expected && wit.value.hi == expected, "n={n}: norm {} != {expected}", wit.value);
        ensure!(wit.value.lo >= two_pow(n as i64) && wit.certified, "n={n}: norm below |w_n| = 2^{n}");
        ensure!(wit.floor.lo == two_pow(n as i64), "n={n}: |w_n| = {}", wit.floor.lo);
        if let Some(p) = &previous {
            ensure!(wit.value.lo > *p, "n={n}: not strictly increasing");
        }
        previous = Some(wit.value.hi.clone());
    }
    let three = op.unboundedness_witness(3).value.lo;
    ensure!(three == Rational::from_integer(4096.into()), "n=3 gives {three}");
    Ok("n = 1..12 exact; n=3 -> 4096".to_string())
}

fn periodic_density() -> Outcome {
    let y = CoordVector::basis(1).unwrap();
    let blocks = 12;
    for space in [SpaceSpec::l1(), SpaceSpec::l2(), SpaceSpec::c0()] {
        let op = ShiftOperator::new(exp2(), space.clone());
        for n in 1..=20usize {
            let d = periodic_point_distance(&op, &y, n, blocks).map_err(|e| e.to_string())?;
            let bound = two_pow(-(n as i64 - 1));
            ensure!(d.bound == bound, "{space} N={n}: bound {} != 2^-{}", d.bound, n - 1);
            ensure!(d.distance.hi <= bound, "{space} N={n}: distance {} exceeds {bound}", d.distance.hi);
            ensure!(d.certificate.passed(), "{space} N={n}: {}", d.certificate);
            if n >= 11 {
                ensure!(bound < Rational::new(1.into(), 1000.into()), "N={n}: bound not below 1e-3");
            }
            // The tail blocks sit at e_(kN+1) with coefficient Π_(i<=kN) 2^-i.
            let coeffs: Vec<Rational> = (1..=blocks).map(|k| two_pow(-((k * n * (k * n + 1) / 2) as i64))).collect();
            let exact = match space.to_string().as_str() {
                "l1" => Some(coeffs.iter().sum::<Rational>()),
                "c0" => Some(coeffs[0].clone()),
                _ => None,
            };
            if let Some(exact) = exact {
                ensure!(d.distance.contains(&exact), "{space} N={n}: distance {} misses {exact}", d.distance);
            }
        }
    }
    Ok("N = 1..20 in l1, l2, c0; bound 2^-(N-1)".to_string())
}

fn weight_conditions() -> Outcome {
    for spec in ["exp:2", "exp:3/2", "exp:1+1*i"] {
        let w: WeightSequence = spec.parse().unwrap();
        let c = w.check_conditions(200);
        ensure!(c.passed() && c.violation.is_none(), "{spec} fails its prefix checks");
        ensure!(c.certificates().all(|c| c.recheck()), "{spec}: a certificate does not re-check");
        for k in 1..200 {
            ensure!(w.weight(k).modulus_squared() <= w.weight(k + 1).modulus_squared(), "{spec}: |w_{k}| > |w_{}|", k + 1);
        }
    }
    let lambda: Scalar = "1+1*i".parse().unwrap();
    ensure!(lambda.modulus_squared() == Rational::from_integer(2.into()), "|1+i|^2 != 2");
    for spec in ["table:[1]", "table:[1,1,1,1];tail=claim:5"] {
        let w: WeightSequence = spec.parse().unwrap();
        let c = w.check_conditions(200);
        ensure!(!c.passed() && c.violation.is_some(), "constant-1 table `{spec}` passes");
    }
    Ok("exp:2, exp:3/2, exp:1+1*i pass at K=200; constant-1 table fails".to_string())
}

fn determinism() -> Outcome {
    let conf = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/reference.conf");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hypershift"))
            .env_remove(hypershift::cli::OUT_DIR_VAR)
            .args(["certify", "--no-timestamp", "--config"])
            .arg(&conf)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure!(a.status.code() == Some(0) && b.status.code() == Some(0), "certify exited with {:?} / {:?}", a.status, b.status);
    ensure!(a.stdout == b.stdout, "reports differ");
    let report = hypershift::certify::Report::from_json(&String::from_utf8_lossy(&a.stdout)).map_err(|e| e.to_string())?;
    ensure!(report.generated_at.is_none(), "timestamp present");
    ensure!(report.passed() && report.recheck(), "reference report does not pass");
    Ok(format!("{} bytes, {} certificates, all passed", a.stdout.len(), report.summary.total))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("periodic fixed point", periodic_fixed_point, 5),
        ("orbit decomposition and residual bound", orbit_decomposition, 30),
        ("schedule certificate", schedule_certificate, 1),
        ("right-inverse identities", right_inverse_identities, 5),
        ("unboundedness witness", unboundedness_witness, 1),
        ("periodic-point density", periodic_density, 5),
        ("weight conditions", weight_conditions, 1),
        ("determinism", determinism, 60),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({elapsed:.2?} < {limit} s): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {name} ({elapsed:.2?}): {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
