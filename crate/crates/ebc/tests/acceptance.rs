//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! Every tolerance is pinned in code; nothing is deferred to calibration.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};

use ebc::arith::{const_gamma, const_pi, log_u64, BigReal, PrecisionContext};
use ebc::characters::{
    enumerate_characters, exact_sum_equals_integer, exact_sum_is_zero, gcd, RootOfUnity,
};
use ebc::constants::{
    direct_sum_oracle, gamma_omega, gamma_omega_aq, gamma_omega_qq, periodic_dirichlet_sum,
    verify_identity, EBCKey, Identity, PeriodicFunction, PrimeSet,
};
use ebc::lfunctions::{l_one_digamma, l_one_series};
use ebc::relations::{
    dimension_probe, find_integer_relation, irreducible_family_check, probe_algebraic_ratio,
    probe_gamma_family, schanuel_probe, DimensionProbeSpec, RelationQuery, RelationStatus,
    SetFamily, Witness,
};

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

fn pset(ps: &[u64]) -> PrimeSet {
    PrimeSet::new(ps.to_vec()).unwrap()
}

fn report(n: u32, pass: bool, what: &str) {
    println!(
        "ACCEPTANCE {n:2} {} — {what}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {what}");
}

// 1. Closed form vs defining limit at 50 digits, |diff| < 1e-30, < 60 s/case.
#[test]
fn criterion_01_closed_form_vs_defining_limit() {
    let c = ctx(50);
    let cases: Vec<(PrimeSet, u64, u64)> = vec![
        (PrimeSet::empty(), 1, 3),
        (pset(&[2]), 1, 3),
        (pset(&[2, 5]), 3, 7),
        (pset(&[3]), 1, 4),
        (pset(&[7]), 2, 5),
    ];
    let mut ok = true;
    for (omega, a, q) in cases {
        let started = Instant::now();
        let closed = gamma_omega_aq(&EBCKey::new(omega.clone(), a, q).unwrap(), &c).unwrap();
        let oracle = direct_sum_oracle(&omega, a, q, &c).unwrap();
        let diff = closed.abs_diff(&oracle.value);
        let within = diff.is_below_pow10(-30);
        let fast = started.elapsed().as_secs() < 60;
        println!(
            "  gamma({omega},{a},{q}): |closed - oracle| = {}, {} ms",
            diff.to_decimal_digits(3),
            started.elapsed().as_millis()
        );
        ok &= within && fast;
    }
    report(1, ok, "closed form vs defining limit < 1e-30 at 50 digits");
}

// 2. Diamond-Ford identity, sieve oracle vs closed form, < 1e-30 at 50 digits.
#[test]
fn criterion_02_diamond_ford() {
    let c = ctx(50);
    let mut ok = true;
    for omega in [pset(&[2]), pset(&[2, 3]), pset(&[2, 3, 5])] {
        let closed = gamma_omega(&omega, &c).unwrap();
        let oracle = direct_sum_oracle(&omega, 1, 1, &c).unwrap();
        let diff = closed.abs_diff(&oracle.value);
        println!("  gamma({omega}): |diff| = {}", diff.to_decimal_digits(3));
        ok &= diff.is_below_pow10(-30);
    }
    report(2, ok, "Diamond-Ford identity < 1e-30 at 50 digits");
}

// 3. gamma(Omega, q, q) identity, oracle vs formula, < 1e-25.
#[test]
fn criterion_03_qq_identity() {
    let c = ctx(50);
    let mut ok = true;
    for (omega, q) in [
        (PrimeSet::empty(), 2u64),
        (pset(&[3]), 2),
        (pset(&[2]), 5),
    ] {
        let formula = gamma_omega_qq(&omega, q, &c).unwrap();
        let oracle = direct_sum_oracle(&omega, q, q, &c).unwrap();
        let diff = formula.abs_diff(&oracle.value);
        println!("  gamma({omega},{q},{q}): |diff| = {}", diff.to_decimal_digits(3));
        ok &= diff.is_below_pow10(-25);
    }
    report(3, ok, "gamma(Omega,q,q) identity < 1e-25");
}

// 4. Periodic-sum identity: 20 random zero-sum f (period <= 8, M in {1,5,7})
//    agree < 1e-25; 5 random non-zero-sum f are rejected.
#[test]
fn criterion_04_periodic_sum_identity() {
    let c = ctx(40);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
    let mut ok = true;
    let moduli = [1u64, 5, 7];
    let mut accepted = 0;
    while accepted < 20 {
        let m = moduli[rng.gen_range(0..moduli.len())];
        let period = rng.gen_range(2..=8u64);
        if gcd(m, period) != 1 {
            continue;
        }
        let mut values: Vec<Rational> = (0..period)
            .map(|_| Rational::from((rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))))
            .collect();
        let total: Rational = values.iter().fold(Rational::new(), |a, v| a + v);
        let last = values.last_mut().unwrap();
        *last -= total;
        let f = PeriodicFunction::new(values).unwrap();
        assert!(f.sum_is_zero());
        let reportv = verify_identity(&Identity::GsSum { f, m }, &c).unwrap();
        let within = reportv.abs_diff.is_below_pow10(-25);
        if !within {
            println!(
                "  period {period}, M = {m}: diff {}",
                reportv.abs_diff.to_decimal_digits(3)
            );
        }
        ok &= within;
        accepted += 1;
    }
    println!("  20 random zero-sum periodic functions matched < 1e-25");
    let mut rejected = 0;
    while rejected < 5 {
        let period = rng.gen_range(1..=8u64);
        let values: Vec<Rational> = (0..period)
            .map(|_| Rational::from((rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))))
            .collect();
        let f = PeriodicFunction::new(values).unwrap();
        if f.sum_is_zero() {
            continue;
        }
        let err = periodic_dirichlet_sum(&f, 1, &c);
        ok &= matches!(err, Err(ebc::Error::DivergentSum(_)));
        rejected += 1;
    }
    println!("  5 non-summable functions rejected");
    report(4, ok, "periodic-sum identity and divergence rejection");
}

// 5. L(1,chi4) = pi/4 and L(1,chi3) = pi/(3 sqrt 3) to 1e-40 at 50 digits;
//    dual-route agreement < 1e-38 for all non-principal chi with q <= 30.
#[test]
fn criterion_05_l_values() {
    let c = ctx(50);
    let mut ok = true;
    let pi = const_pi(&c).unwrap();
    let chi4 = &enumerate_characters(4).unwrap()[1];
    let l4 = l_one_digamma(chi4, &c).unwrap();
    let quarter = &pi / &BigReal::from_u64(4, c);
    ok &= l4.real.abs_diff(&quarter).is_below_pow10(-40) && l4.imag.is_below_pow10(-40);

    let chi3 = &enumerate_characters(3).unwrap()[1];
    let l3 = l_one_digamma(chi3, &c).unwrap();
    let bits = c.prec_bits();
    let denom = BigReal::from_raw(Float::with_val(bits, 3u32).sqrt() * 3u32, c);
    let expected3 = &pi / &denom;
    ok &= l3.real.abs_diff(&expected3).is_below_pow10(-40) && l3.imag.is_below_pow10(-40);
    println!("  L(1,chi4) and L(1,chi3) match their closed forms to 1e-40");

    let mut worst: f64 = f64::NEG_INFINITY;
    for q in 3..=30u64 {
        for chi in enumerate_characters(q).unwrap().iter().skip(1) {
            if chi.is_principal() {
                continue;
            }
            let a = l_one_digamma(chi, &c).unwrap();
            let b = l_one_series(chi, &c).unwrap();
            let diff = a.abs_diff(&b);
            ok &= diff.is_below_pow10(-38);
            if let Some(l) = diff.log10_abs() {
                worst = worst.max(l);
            }
        }
    }
    println!("  dual-route agreement for all chi, q <= 30: worst ~ 1e{worst:.0}");
    report(5, ok, "L-values: closed values to 1e-40, dual route < 1e-38");
}

// 6. Exact character orthogonality, rows and columns, q <= 50, zero error.
#[test]
fn criterion_06_exact_orthogonality() {
    let mut ok = true;
    for q in 1..=50u64 {
        let chars = enumerate_characters(q).unwrap();
        let phi = chars.len() as i64;
        for chi in chars.iter().skip(1) {
            let roots: Vec<RootOfUnity> = (1..=q as i64).map(|a| chi.evaluate(a)).collect();
            ok &= exact_sum_is_zero(&roots);
        }
        for a in 1..=q {
            for b in 1..=q {
                let terms: Vec<RootOfUnity> = chars
                    .iter()
                    .map(|chi| chi.evaluate(a as i64).mul(&chi.evaluate(b as i64).conj()))
                    .collect();
                let expected = if a % q == b % q && gcd(a, q) == 1 && gcd(b, q) == 1 {
                    phi
                } else {
                    0
                };
                ok &= exact_sum_equals_integer(&terms, expected);
            }
        }
    }
    report(6, ok, "exact row and column orthogonality for all q <= 50");
}

// 7. PSLQ positive controls, each < 10 s.
#[test]
fn criterion_07_pslq_positive_controls() {
    let mut ok = true;

    let started = Instant::now();
    let c60 = ctx(60);
    let r = find_integer_relation(&RelationQuery {
        entries: vec![
            ("gamma(1,2)".into(), ebc::constants::gamma_aq(1, 2, &c60).unwrap()),
            ("gamma".into(), const_gamma(&c60).unwrap()),
            ("log2".into(), log_u64(2, &c60).unwrap()),
        ],
        height: 10,
    })
    .unwrap();
    ok &= r.coefficients.as_deref() == Some(&[2, -1, -1]) && started.elapsed().as_secs() < 10;
    println!("  [gamma(1,2), gamma, log 2] -> {:?}", r.coefficients);

    let started = Instant::now();
    let omega = PrimeSet::empty();
    let extras = vec![
        (
            "gamma(3,3)".to_string(),
            gamma_omega_qq(&omega, 3, &c60).unwrap(),
        ),
        ("gamma".to_string(), const_gamma(&c60).unwrap()),
    ];
    let r = probe_gamma_family(&omega, 3, 10, &c60, &extras).unwrap();
    ok &= r.coefficients.as_deref() == Some(&[1, 1, 1, -1]) && started.elapsed().as_secs() < 10;
    println!("  [gamma(1,3), gamma(2,3), gamma(3,3), gamma] -> {:?}", r.coefficients);

    let started = Instant::now();
    let fams = [pset(&[2]), pset(&[3]), pset(&[2, 3])];
    let r = schanuel_probe(&fams, 1, 10, false, &c60).unwrap();
    ok &= r.coefficients.as_deref() == Some(&[1, 1, -1]) && started.elapsed().as_secs() < 10;
    println!("  A-combination on {{2}},{{3}},{{2,3}} -> {:?}", r.coefficients);

    report(7, ok, "PSLQ positive controls recover the stated relations");
}

// 8. PSLQ negative probes: Gamma_{{2},7} at H = 1e8, 200 digits, < 10 min;
//    ratio probe gamma({2},1,5)/gamma({3},1,5) deg 3 at H = 1e6, 150 digits.
#[test]
fn criterion_08_pslq_negative_probes() {
    let mut ok = true;

    let started = Instant::now();
    let c200 = ctx(200);
    let r = probe_gamma_family(&pset(&[2]), 7, 100_000_000, &c200, &[]).unwrap();
    let within = started.elapsed().as_secs() < 600;
    ok &= r.status == RelationStatus::NoneBelowHeight && within;
    println!(
        "  Gamma_{{{{2}},7}} at H=1e8, 200 digits: {:?} in {} s ({} iterations)",
        r.status,
        started.elapsed().as_secs(),
        r.iterations
    );

    let c150 = ctx(150);
    let x = gamma_omega_aq(&EBCKey::new(pset(&[2]), 1, 5).unwrap(), &c150).unwrap();
    let y = gamma_omega_aq(&EBCKey::new(pset(&[3]), 1, 5).unwrap(), &c150).unwrap();
    let r = probe_algebraic_ratio(&x, &y, 3, 1_000_000, &c150).unwrap();
    ok &= r.status == RelationStatus::NoneBelowHeight;
    println!(
        "  ratio gamma({{2}},1,5)/gamma({{3}},1,5) degree 3 at H=1e6: {:?}",
        r.status
    );

    report(8, ok, "PSLQ negative probes come back none_below_height");
}

// 9. 100/100 planted integer relations recovered at 80 digits.
#[test]
fn criterion_09_planted_relations() {
    let c = ctx(80);
    let bits = c.prec_bits();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5bd1e995);
    let mut recovered = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=6usize);
        // primitive coefficient vector, |c_i| <= 1000, c_last != 0
        let coeffs: Vec<i64> = loop {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000i64..=1000)).collect();
            if v[n - 1] == 0 || v.iter().all(|&x| x == 0) {
                continue;
            }
            let g = v.iter().fold(0u64, |acc, &x| gcd(acc, x.unsigned_abs()));
            break v.into_iter().map(|x| x / g as i64).collect();
        };
        // random entries in [1, 2), one solved to plant the relation
        let entries: Vec<Float> = loop {
            let mut xs: Vec<Float> = (0..n - 1)
                .map(|_| {
                    let mut acc = Float::with_val(bits, 1u32);
                    let mut scale = Float::with_val(bits, Float::i_exp(1, -64));
                    for _ in 0..5 {
                        let w: u64 = rng.gen();
                        acc += Float::with_val(bits, w) * &scale;
                        scale = Float::with_val(bits, &scale * &Float::with_val(bits, Float::i_exp(1, -64)));
                    }
                    acc
                })
                .collect();
            let mut dot = Float::new(bits);
            for (cf, x) in coeffs.iter().zip(xs.iter()) {
                dot += Float::with_val(bits, x * Integer::from(*cf));
            }
            let solved = Float::with_val(bits, -dot / Integer::from(coeffs[n - 1]));
            if solved.clone().abs() > 0.001 {
                xs.push(solved);
                break xs;
            }
        };
        let query = RelationQuery {
            entries: entries
                .into_iter()
                .enumerate()
                .map(|(i, f)| (format!("x{i}"), BigReal::from_raw(f, c)))
                .collect(),
            height: 1000,
        };
        let r = find_integer_relation(&query).unwrap();
        if let Some(found) = r.coefficients {
            let neg: Vec<i64> = coeffs.iter().map(|x| -x).collect();
            if found == coeffs || found == neg {
                recovered += 1;
            }
        }
    }
    println!("  planted relations recovered: {recovered}/100");
    report(9, recovered == 100, "planted-relation recovery 100/100");
}

// 10. Irreducibility checker vs the exhaustive proper-subset oracle on all
//     families of <= 4 subsets of {2,3,5,7}, plus the two worked examples.
#[test]
fn criterion_10_irreducibility() {
    fn exhaustive(members: &[Vec<u64>]) -> bool {
        let full: std::collections::BTreeSet<u64> = members.iter().flatten().copied().collect();
        for mask in 0..(1u32 << members.len()) - 1 {
            let union: std::collections::BTreeSet<u64> = members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .flat_map(|(_, s)| s.iter().copied())
                .collect();
            if union == full {
                return false;
            }
        }
        true
    }
    let primes = [2u64, 3, 5, 7];
    let subsets: Vec<Vec<u64>> = (0..16u32)
        .map(|mask| {
            primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect();
    let mut ok = true;
    let mut count = 0usize;
    let mut stack: Vec<usize> = Vec::new();
    fn walk(
        subsets: &[Vec<u64>],
        start: usize,
        stack: &mut Vec<usize>,
        ok: &mut bool,
        count: &mut usize,
        exhaustive: &dyn Fn(&[Vec<u64>]) -> bool,
    ) {
        if !stack.is_empty() {
            let members: Vec<Vec<u64>> = stack.iter().map(|&i| subsets[i].clone()).collect();
            let fam = SetFamily::PrimeSets(
                members
                    .iter()
                    .map(|m| PrimeSet::new(m.clone()).unwrap())
                    .collect(),
            );
            let got = irreducible_family_check(&fam).unwrap().irreducible;
            *ok &= got == exhaustive(&members);
            *count += 1;
        }
        if stack.len() == 4 {
            return;
        }
        for i in start..subsets.len() {
            stack.push(i);
            walk(subsets, i + 1, stack, ok, count, exhaustive);
            stack.pop();
        }
    }
    walk(&subsets, 0, &mut stack, &mut ok, &mut count, &exhaustive);
    println!("  {count} families checked against the exhaustive oracle");
    ok &= count == 16 + 120 + 560 + 1820;

    // worked examples: {p1},{p2},{p1,p2} reducible; distinct singletons not
    let fam = SetFamily::PrimeSets(vec![pset(&[11]), pset(&[13]), pset(&[11, 13])]);
    let rep = irreducible_family_check(&fam).unwrap();
    ok &= !rep.irreducible;
    ok &= matches!(rep.witness, Witness::Violator { ref member } if member == "{11,13}");
    let fam = SetFamily::PrimeSets(vec![pset(&[2]), pset(&[3]), pset(&[5]), pset(&[7])]);
    ok &= irreducible_family_check(&fam).unwrap().irreducible;
    report(10, ok, "irreducibility matches the exhaustive oracle");
}

// 11. dimension_probe(Omega = {2}, d = 1, N = 100): primes >= 13 coprime to
//     2, lower bound >= 12, and at least one family none_below_height at 1e6.
#[test]
fn criterion_11_dimension_probe() {
    let c = ctx(400);
    let spec = DimensionProbeSpec::new(pset(&[2]), 100, 1).unwrap();
    let rep = dimension_probe(&spec, 1_000_000, &c).unwrap();
    let mut ok = rep.p >= 13 && rep.ell >= 13 && rep.p % 2 == 1 && rep.ell % 2 == 1;
    ok &= rep.lower_bound >= 12;
    let nones = rep
        .family_results
        .iter()
        .filter(|(_, r)| r.status == RelationStatus::NoneBelowHeight)
        .count();
    ok &= nones >= 1;
    println!(
        "  p = {}, ell = {}, lower_bound = {}, none_below_height on {}/2 families",
        rep.p, rep.ell, rep.lower_bound, nones
    );
    report(11, ok, "dimension probe certifies the prime pair and bound");
}
