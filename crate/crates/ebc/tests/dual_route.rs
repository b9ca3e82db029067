//! Dual-route sweep: the closed form and the defining-limit oracle must
//! agree to at least 30 digits for every prime set with P_Omega <= 30 and
//! every coprime modulus q <= 12, at 50-digit contexts.

use ebc::arith::PrecisionContext;
use ebc::characters::gcd;
use ebc::constants::{direct_sum_oracle, gamma_omega_aq, EBCKey, PrimeSet};

fn prime_sets_with_product_up_to(limit: u64) -> Vec<PrimeSet> {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut out = vec![PrimeSet::empty()];
    let mut stack: Vec<(usize, u64, Vec<u64>)> = vec![(0, 1, Vec::new())];
    while let Some((idx, product, chosen)) = stack.pop() {
        for (i, &p) in primes.iter().enumerate().skip(idx) {
            if product * p > limit {
                continue;
            }
            let mut next = chosen.clone();
            next.push(p);
            out.push(PrimeSet::new(next.clone()).unwrap());
            stack.push((i + 1, product * p, next));
        }
    }
    out
}

#[test]
fn closed_form_agrees_with_oracle_across_the_range() {
    let ctx = PrecisionContext::new(50).unwrap();
    let sets = prime_sets_with_product_up_to(30);
    assert!(sets.len() >= 19, "expected all sets with P_Omega <= 30");
    let mut cases = 0usize;
    for omega in &sets {
        for q in 1..=12u64 {
            if gcd(q, omega.p_omega()) != 1 {
                continue;
            }
            // one small and one large residue per modulus, plus the zero class
            for a in [1, q.max(2) - 1, q] {
                let key = EBCKey::new(omega.clone(), a, q).unwrap();
                if key.a != q && gcd(key.a, q) != 1 {
                    continue; // no closed form to compare there
                }
                let closed = gamma_omega_aq(&key, &ctx).unwrap();
                let oracle = direct_sum_oracle(omega, a, q, &ctx).unwrap();
                assert!(oracle.achieved_digits >= 30);
                let diff = closed.abs_diff(&oracle.value);
                assert!(
                    diff.is_below_pow10(-30),
                    "gamma({omega},{a},{q}): diff {}",
                    diff.to_decimal_digits(3)
                );
                cases += 1;
            }
        }
    }
    println!("dual-route agreement held on {cases} (Omega, a, q) cases");
}
