//! Euler-Maclaurin acceleration for periodic harmonic sums.
//!
//! For a function `f` of period `L`, [`harmonic_periodic_limit`] evaluates
//!
//! ```text
//!     lim_{x -> inf} [ sum_{n <= x} f(n)/n  -  mean(f) * ln x ]
//! ```
//!
//! where `mean(f)` is the average of `f` over one period. For zero-mean `f`
//! this is the convergent series `sum f(n)/n`; for the indicator of a sieved
//! arithmetic progression it is a generalized Euler-Briggs constant.
//!
//! The sum is taken over complete blocks of length `L` up to `x = K*L`, and
//! the tail is replaced by its Euler-Maclaurin expansion. Writing `t = KL + c`
//! for each residue `c` in the support:
//!
//! ```text
//!     value(K) = sum_{n <= KL} f(n)/n
//!              + sum_c f(c) * [ -ln(t)/L + 1/(2t)
//!                               + sum_{j=1}^{J} (B_2j / 2j) * L^(2j-1) / t^(2j) ]
//! ```
//!
//! The divergent `ln` pieces of the individual residue tails cancel against
//! `mean(f) * ln x` exactly, so no cancellation is left to floating point.
//! The remainder after order `J` is bounded by the first omitted term
//! (`1/(mL+c)` is completely monotone):
//!
//! ```text
//!     |R| <= sum_c |f(c)| * (|B_{2J+2}| / (2J+2)) * L^(2J+1) / t^(2J+2).
//! ```

use rug::ops::Pow;
use rug::{Assign, Float};

use crate::arith::bernoulli::bernoulli_even;
use crate::{Error, Result};

pub(crate) struct PeriodicSum<'a> {
    /// Pairs `(c, f(c))` with `1 <= c <= period` and `f(c) != 0`.
    pub support: &'a [(u64, Float)],
    pub period: u64,
    /// Euler-Maclaurin order: corrections up to `B_{2J}` are applied.
    pub em_order: usize,
}

pub(crate) struct SumOutcome {
    pub value: Float,
    /// Conservative bound on log10 of the absolute truncation error.
    pub err_log10: f64,
    pub x_used: u64,
}

const K_CAP: u32 = 40;

/// log10 of the truncation-error bound at `x = K*L`.
fn bound_log10(abs_sum: f64, period: u64, em_order: usize, x: f64) -> f64 {
    let j = em_order;
    let b_next = bernoulli_even(j + 1)[j].to_f64().abs() / (2.0 * (j + 1) as f64);
    abs_sum.log10()
        + b_next.log10()
        + (2 * j + 1) as f64 * (period as f64).log10()
        - (2 * j + 2) as f64 * x.log10()
}

pub(crate) fn harmonic_periodic_limit(
    spec: &PeriodicSum,
    bits: u32,
    target_digits: u32,
    confirm_by_doubling: bool,
) -> Result<SumOutcome> {
    let period = spec.period;
    assert!(period >= 1, "period must be positive");
    if spec.support.is_empty() {
        return Ok(SumOutcome {
            value: Float::new(bits),
            err_log10: f64::NEG_INFINITY,
            x_used: period,
        });
    }
    let abs_sum: f64 = spec
        .support
        .iter()
        .map(|(_, f)| f.to_f64().abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let goal = -(target_digits as f64) - 2.0;

    // least k with x = 2^k meeting the error bound
    let mut k: u32 = 4;
    while k < K_CAP && bound_log10(abs_sum, period, spec.em_order, (1u64 << k) as f64) > goal {
        k += 1;
    }

    let blocks_for = |k: u32| -> u64 { (1u64 << k).div_ceil(period) };

    let mut blocks_done: u64 = 0;
    let mut block_sum = Float::new(bits);
    let mut extend_blocks = |upto: u64, acc: &mut Float| {
        let mut term = Float::new(bits);
        for m in blocks_done..upto {
            let base = m * period;
            for (c, f) in spec.support {
                term.assign(f / (base + *c));
                *acc += &term;
            }
        }
        blocks_done = upto;
    };

    let mut prev: Option<Float> = None;
    loop {
        let blocks = blocks_for(k);
        extend_blocks(blocks, &mut block_sum);
        let x = blocks * period;
        let mut value = block_sum.clone();
        value += tail_correction(spec, bits, x);
        let tr_bound = bound_log10(abs_sum, period, spec.em_order, x as f64);

        if !confirm_by_doubling {
            return Ok(SumOutcome {
                value,
                err_log10: tr_bound,
                x_used: x,
            });
        }
        if let Some(prev_value) = &prev {
            let diff = Float::with_val(bits, prev_value - &value).abs();
            let diff_log10 = if diff.is_zero() {
                f64::NEG_INFINITY
            } else {
                diff.log10().to_f64()
            };
            if diff_log10 <= -(target_digits as f64) {
                return Ok(SumOutcome {
                    value,
                    err_log10: diff_log10.max(tr_bound),
                    x_used: x,
                });
            }
        }
        if k >= K_CAP {
            return Err(Error::CrossCheckFailed(format!(
                "periodic sum did not stabilize to {target_digits} digits by x = 2^{K_CAP}"
            )));
        }
        prev = Some(value);
        k += 1;
    }
}

/// Euler-Maclaurin tail at `x` (a whole number of blocks).
fn tail_correction(spec: &PeriodicSum, bits: u32, x: u64) -> Float {
    let period = spec.period;
    let coeffs: Vec<Float> = bernoulli_even(spec.em_order)
        .into_iter()
        .enumerate()
        .map(|(idx, b)| {
            let j = idx as u32 + 1;
            let mut c = Float::with_val(bits, b);
            c /= 2 * j;
            // L^(2j-1)
            c * Float::with_val(bits, period).pow(2 * j - 1)
        })
        .collect();

    let mut acc = Float::new(bits);
    let mut tail = Float::new(bits);
    let mut tpow = Float::new(bits);
    for (c, f) in spec.support {
        let t = x + *c;
        // -ln(t)/L
        tail.assign(t);
        tail.ln_mut();
        tail /= period;
        tail *= -1i32;
        // + 1/(2t)
        let half = Float::with_val(bits, Float::i_exp(1, -1));
        tail += half / t;
        // + sum_j coeff_j / t^(2j)
        let inv_t2 = Float::with_val(bits, t).square().recip();
        tpow.assign(&inv_t2);
        for coeff in &coeffs {
            tail += Float::with_val(bits, coeff * &tpow);
            tpow *= &inv_t2;
        }
        acc += Float::with_val(bits, f * &tail);
    }
    acc
}
