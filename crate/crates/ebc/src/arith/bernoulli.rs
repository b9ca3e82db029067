//! Exact Bernoulli numbers for Euler-Maclaurin tail corrections.

use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

fn table() -> &'static Mutex<Vec<Rational>> {
    TABLE.get_or_init(|| {
        Mutex::new(vec![
            Rational::from(1),            // B_0
            Rational::from((-1, 2)),      // B_1
        ])
    })
}

/// B_m for m = 0..=m_max, exact, by the recurrence
/// B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k.
fn ensure(m_max: usize) -> Vec<Rational> {
    let mut all = table().lock().unwrap();
    while all.len() <= m_max {
        let m = all.len();
        let mut acc = Rational::new();
        for (k, bk) in all.iter().enumerate() {
            if bk.is_zero() {
                continue;
            }
            let binom = Integer::from(Integer::binomial_u(m as u32 + 1, k as u32));
            acc += Rational::from(bk * &binom);
        }
        acc /= -Rational::from(m as u32 + 1);
        all.push(acc);
    }
    all[..=m_max].to_vec()
}

/// B_{2j} for j = 1..=j_max.
pub(crate) fn bernoulli_even(j_max: usize) -> Vec<Rational> {
    let all = ensure(2 * j_max);
    (1..=j_max).map(|j| all[2 * j].clone()).collect()
}
