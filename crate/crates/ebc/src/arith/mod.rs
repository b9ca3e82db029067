//! Precision contexts, big reals, and the fundamental constants.
//!
//! Every numerical value in this crate is produced under a
//! [`PrecisionContext`]: a requested number of decimal digits plus guard
//! digits that absorb rounding drift. The contract is plain fixed precision,
//! not interval arithmetic — all downstream tolerances are stated against
//! `digits`, and values are carried at `digits + guard` internally.
//!
//! The constants pi and gamma are computed by two independent formulas and
//! must agree before a value is released; on disagreement the guard is
//! doubled and the computation retried once. Results are memoized per
//! (name, digits) in a process-wide, single-writer cache.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use rug::float::Constant;
use rug::ops::{CompleteRound, Pow};
use rug::{Assign, Float, Rational};

use crate::{Error, Result};

pub(crate) mod bernoulli;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits plus guard digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 20;

    /// A context with the default guard of 20 digits. `digits` must be >= 10.
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::InvalidPrecision(format!(
                "digits must be >= 10, got {digits}"
            )));
        }
        Ok(PrecisionContext { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Total decimal digits carried internally.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary precision backing this context.
    pub fn prec_bits(&self) -> u32 {
        (self.working_digits() as f64 * LOG2_10).ceil() as u32 + 16
    }

    /// Same requested digits with the guard doubled (cross-check retry).
    pub(crate) fn guard_doubled(&self) -> Self {
        PrecisionContext {
            digits: self.digits,
            guard: (self.guard.max(Self::DEFAULT_GUARD)) * 2,
        }
    }
}

/// A high-precision real together with the context it was computed under.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: Float,
    ctx: PrecisionContext,
}

impl BigReal {
    /// Wraps a raw float. The value should have been computed at (or above)
    /// the context's working precision; the context is what downstream
    /// tolerances are judged against.
    pub fn from_raw(value: Float, ctx: PrecisionContext) -> Self {
        BigReal { value, ctx }
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    pub(crate) fn as_float(&self) -> &Float {
        &self.value
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        BigReal::from_raw(Float::new(ctx.prec_bits()), ctx)
    }

    pub fn from_u64(n: u64, ctx: PrecisionContext) -> Self {
        BigReal::from_raw(Float::with_val(ctx.prec_bits(), n), ctx)
    }

    pub fn from_i64(n: i64, ctx: PrecisionContext) -> Self {
        BigReal::from_raw(Float::with_val(ctx.prec_bits(), n), ctx)
    }

    pub fn from_rational(r: &Rational, ctx: PrecisionContext) -> Self {
        BigReal::from_raw(Float::with_val(ctx.prec_bits(), r), ctx)
    }

    /// Parses a decimal string (plain or scientific notation).
    pub fn parse_decimal(s: &str, ctx: PrecisionContext) -> Result<Self> {
        let parsed = Float::parse(s)
            .map_err(|e| Error::Domain(format!("cannot parse '{s}' as a real: {e}")))?;
        Ok(BigReal::from_raw(
            Float::with_val(ctx.prec_bits(), parsed),
            ctx,
        ))
    }

    pub fn abs(&self) -> BigReal {
        BigReal::from_raw(self.value.clone().abs(), self.ctx)
    }

    pub fn abs_diff(&self, other: &BigReal) -> BigReal {
        let ctx = join_ctx(self.ctx, other.ctx);
        let d = (&self.value - &other.value).complete(ctx.prec_bits()).abs();
        BigReal::from_raw(d, ctx)
    }

    /// True when |self| < 10^exp.
    pub fn is_below_pow10(&self, exp: i64) -> bool {
        if self.value.is_zero() {
            return true;
        }
        let bound = pow10(self.value.prec(), exp);
        self.value.clone().abs() < bound
    }

    /// log10(|self|), or None for a zero value.
    pub fn log10_abs(&self) -> Option<f64> {
        if self.value.is_zero() {
            return None;
        }
        Some(self.value.clone().abs().log10().to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Decimal rendering at the context's requested digits.
    pub fn to_decimal(&self) -> String {
        self.to_decimal_digits(self.ctx.digits())
    }

    /// Decimal rendering at exactly `digits` significant digits. Plain
    /// notation when the exponent is moderate, scientific otherwise.
    pub fn to_decimal_digits(&self, digits: u32) -> String {
        format_decimal(&self.value, digits)
    }
}

fn join_ctx(a: PrecisionContext, b: PrecisionContext) -> PrecisionContext {
    if a.working_digits() >= b.working_digits() {
        a
    } else {
        b
    }
}

/// 10^exp at the given binary precision.
pub(crate) fn pow10(prec: u32, exp: i64) -> Float {
    Float::with_val(prec, 10).pow(exp)
}

fn format_decimal(value: &Float, digits: u32) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1) as usize;
    let (sign, mantissa, exp) = value.to_sign_string_exp(10, Some(digits));
    let exp = exp.unwrap_or(0);
    let mut digits_str = mantissa;
    // mpfr may return fewer digits for exactly-representable values
    while digits_str.len() < digits {
        digits_str.push('0');
    }
    let body = if exp <= 0 && exp > -6 {
        let zeros = "0".repeat((-exp) as usize);
        format!("0.{zeros}{digits_str}")
    } else if exp > 0 && (exp as usize) <= digits + 6 {
        if (exp as usize) >= digits_str.len() {
            let zeros = "0".repeat(exp as usize - digits_str.len());
            format!("{digits_str}{zeros}")
        } else {
            let (int_part, frac_part) = digits_str.split_at(exp as usize);
            format!("{int_part}.{frac_part}")
        }
    } else {
        let (first, rest) = digits_str.split_at(1);
        format!("{first}.{rest}e{}", exp - 1)
    };
    if sign {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl serde::Serialize for BigReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! bigreal_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let ctx = join_ctx(self.ctx, rhs.ctx);
                let v = std::ops::$trait::$method(&self.value, &rhs.value)
                    .complete(ctx.prec_bits());
                BigReal::from_raw(v, ctx)
            }
        }
    };
}

bigreal_binop!(Add, add);
bigreal_binop!(Sub, sub);
bigreal_binop!(Mul, mul);
bigreal_binop!(Div, div);

impl std::ops::Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::from_raw((-&self.value).complete(self.value.prec()), self.ctx)
    }
}

// ---------------------------------------------------------------------------
// Process-wide constant cache (single writer behind one mutex).

struct ConstCache {
    entries: HashMap<String, Vec<(u32, Float)>>, // name -> [(valid_digits, value)]
}

static CONST_CACHE: OnceLock<Mutex<ConstCache>> = OnceLock::new();

fn cache() -> &'static Mutex<ConstCache> {
    CONST_CACHE.get_or_init(|| {
        Mutex::new(ConstCache {
            entries: HashMap::new(),
        })
    })
}

fn cache_lookup(name: &str, need_digits: u32, bits: u32) -> Option<Float> {
    let guard = cache().lock().unwrap();
    let list = guard.entries.get(name)?;
    // smallest stored precision that still covers the request, for determinism
    list.iter()
        .filter(|(d, _)| *d >= need_digits)
        .min_by_key(|(d, _)| *d)
        .map(|(_, f)| Float::with_val(bits, f))
}

fn cache_store(name: &str, valid_digits: u32, value: &Float) {
    let mut guard = cache().lock().unwrap();
    let list = guard.entries.entry(name.to_string()).or_default();
    if !list.iter().any(|(d, _)| *d == valid_digits) {
        list.push((valid_digits, value.clone()));
    }
}

#[cfg(test)]
pub(crate) fn const_cache_len() -> usize {
    cache().lock().unwrap().entries.values().map(Vec::len).sum()
}

/// Memo access for other modules (digamma values and the like); same
/// single-writer cache as the named constants.
pub(crate) fn memo_lookup(name: &str, need_digits: u32, bits: u32) -> Option<Float> {
    cache_lookup(name, need_digits, bits)
}

pub(crate) fn memo_store(name: &str, valid_digits: u32, value: &Float) {
    cache_store(name, valid_digits, value);
}

// ---------------------------------------------------------------------------
// Constants.

/// Pi under `ctx`. Two internal formulas (MPFR's constant and a Machin
/// arctangent evaluation) must agree to the working digits before the value
/// is released.
pub fn const_pi(ctx: &PrecisionContext) -> Result<BigReal> {
    dual_route_const(ctx, "pi", |bits| Float::with_val(bits, Constant::Pi), machin_pi)
}

/// Euler's constant gamma under `ctx`. MPFR's builtin is cross-checked
/// against an Euler-Maclaurin evaluation of H_n - log n.
pub fn const_gamma(ctx: &PrecisionContext) -> Result<BigReal> {
    dual_route_const(
        ctx,
        "gamma",
        |bits| Float::with_val(bits, Constant::Euler),
        euler_maclaurin_gamma,
    )
}

fn dual_route_const(
    ctx: &PrecisionContext,
    name: &str,
    route_a: impl Fn(u32) -> Float,
    route_b: impl Fn(u32) -> Float,
) -> Result<BigReal> {
    let bits = ctx.prec_bits();
    if let Some(hit) = cache_lookup(name, ctx.working_digits(), bits) {
        return Ok(BigReal::from_raw(hit, *ctx));
    }
    let mut attempt_ctx = *ctx;
    for attempt in 0..2 {
        let abits = attempt_ctx.prec_bits();
        let a = route_a(abits);
        let b = route_b(abits);
        // both routes should be good to the working digits; demand agreement
        // a few digits short of that
        let check_digits = attempt_ctx.working_digits().saturating_sub(5);
        let diff = (&a - &b).complete(abits).abs();
        if diff < pow10(abits, -(check_digits as i64)) {
            cache_store(name, check_digits, &a);
            let out = Float::with_val(bits, &a);
            return Ok(BigReal::from_raw(out, *ctx));
        }
        if attempt == 0 {
            attempt_ctx = attempt_ctx.guard_doubled();
        } else {
            return Err(Error::CrossCheckFailed(format!(
                "{name}: independent formulas disagree at {} digits (|diff| ~ 1e{:.0})",
                attempt_ctx.working_digits(),
                diff.log10().to_f64()
            )));
        }
    }
    unreachable!()
}

/// Natural logarithm of a positive rational.
pub fn log_natural(x: &Rational, ctx: &PrecisionContext) -> Result<BigReal> {
    if *x <= 0 {
        return Err(Error::Domain(format!(
            "log of non-positive argument {x}"
        )));
    }
    let bits = ctx.prec_bits();
    // logs of small integers (prime and modulus logs) are hot; memoize them
    let memo_key = if x.denom() == &1 && x.numer().significant_bits() <= 40 {
        Some(format!("log:{}", x.numer()))
    } else {
        None
    };
    if let Some(key) = &memo_key {
        if let Some(hit) = cache_lookup(key, ctx.working_digits(), bits) {
            return Ok(BigReal::from_raw(hit, *ctx));
        }
    }
    let v = Float::with_val(bits, x).ln();
    if let Some(key) = &memo_key {
        // ln is correctly rounded; give one digit back for the embedding step
        cache_store(key, ctx.working_digits().saturating_sub(1), &v);
    }
    Ok(BigReal::from_raw(v, *ctx))
}

/// Convenience for log of a positive integer.
pub fn log_u64(n: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    log_natural(&Rational::from(n), ctx)
}

// ---------------------------------------------------------------------------
// Independent formula routes.

/// Machin's formula pi = 16 atan(1/5) - 4 atan(1/239), with the arctangents
/// summed term by term.
fn machin_pi(bits: u32) -> Float {
    let p = bits + 32;
    let a = atan_inv(5, p);
    let b = atan_inv(239, p);
    let v = Float::with_val(p, 16 * a - 4 * b);
    Float::with_val(bits, v)
}

/// atan(1/m) by the alternating Taylor series.
fn atan_inv(m: u64, p: u32) -> Float {
    let m2 = m * m;
    let mut power = Float::with_val(p, 1u32);
    power /= m; // 1/m
    let mut acc = Float::new(p);
    let threshold = Float::with_val(p, Float::i_exp(1, -(p as i32 + 8)));
    let mut k: u64 = 0;
    let mut term = Float::new(p);
    loop {
        term.assign(&power / (2 * k + 1));
        if k.is_multiple_of(2) {
            acc += &term;
        } else {
            acc -= &term;
        }
        if term < threshold {
            break;
        }
        power /= m2;
        k += 1;
    }
    acc
}

/// Euler-Maclaurin evaluation of gamma = H_n - log n - 1/2n + sum B_2j/(2j n^2j),
/// with n a power of two and the Bernoulli terms built from zeta values. The
/// expansion is asymptotic: if it stops converging before the target, n is
/// doubled and the evaluation restarts.
fn euler_maclaurin_gamma(bits: u32) -> Float {
    let p = bits + 32;
    let decimal_digits = p as f64 / LOG2_10;
    let mut n: u64 = (0.40 * decimal_digits).ceil().max(32.0) as u64;
    n = n.next_power_of_two();
    loop {
        if let Some(v) = em_gamma_at(n, p) {
            return Float::with_val(bits, v);
        }
        n *= 2;
    }
}

fn em_gamma_at(n: u64, p: u32) -> Option<Float> {
    let mut hn = Float::new(p);
    let mut term = Float::new(p);
    for i in 1..=n {
        term.assign(1u32);
        term /= i;
        hn += &term;
    }
    // n is a power of two, so log n = k log 2 exactly
    let k = n.trailing_zeros();
    let ln_n = Float::with_val(p, Constant::Log2) * k;
    let mut val = hn - ln_n;
    val -= Float::with_val(p, Rational::from((1u64, 2 * n)));
    let threshold = Float::with_val(p, Float::i_exp(1, -(p as i32 + 2)));
    let two_pi_sq = {
        let pi = Float::with_val(p, Constant::Pi);
        Float::with_val(p, 2 * pi).square()
    };
    let n_sq = Float::with_val(p, n).square();
    let mut fact = Float::with_val(p, 2u32); // (2j)! at j = 1
    let mut pw = two_pi_sq.clone(); // (2pi)^(2j)
    let mut npow = n_sq.clone(); // n^(2j)
    let mut prev_mag: Option<Float> = None;
    for j in 1u32..100_000 {
        let zeta = Float::with_val(p, Float::zeta_u(2 * j));
        // |B_2j| = 2 (2j)! zeta(2j) / (2pi)^(2j)
        let mut t = Float::with_val(p, 2 * &fact);
        t *= &zeta;
        t /= &pw;
        t /= 2 * j;
        t /= &npow;
        if let Some(prev) = &prev_mag {
            if t > *prev {
                // asymptotic tail started to grow before reaching the target
                return None;
            }
        }
        let converged = t < threshold;
        if j % 2 == 1 {
            val += &t;
        } else {
            val -= &t;
        }
        if converged {
            return Some(val);
        }
        prev_mag = Some(t);
        fact *= (2 * j + 1) as u64 * (2 * j + 2) as u64;
        pw *= &two_pi_sq;
        npow *= &n_sq;
    }
    None
}
