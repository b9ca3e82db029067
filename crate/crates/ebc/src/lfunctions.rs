//! L(1, chi) for non-principal Dirichlet characters, by two independent
//! routes.
//!
//! The digamma route is the workhorse: the finite closed form
//!
//! ```text
//!     L(1, chi) = -(1/q) sum_{a=1}^{q-1} chi(a) psi(a/q)
//! ```
//!
//! has q terms and no truncation error beyond its constituent constants.
//! psi at rationals comes from Gauss's closed form in gamma, pi*cot and
//! log-sin values. The series route sums chi(n)/n directly with an
//! Euler-Maclaurin tail and exists purely as an independent oracle; the two
//! must agree to working precision.

use rug::{Assign, Float, Rational};

use crate::arith::{self, BigReal, PrecisionContext};
use crate::characters::{gcd, DirichletCharacter, Parity};
use crate::summation::{harmonic_periodic_limit, PeriodicSum};
use crate::{Error, Result};

/// Which evaluation path produced an [`LValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LRoute {
    Digamma,
    Series,
}

impl LRoute {
    pub fn as_str(&self) -> &'static str {
        match self {
            LRoute::Digamma => "digamma",
            LRoute::Series => "series",
        }
    }
}

/// L(1, chi) as a (real, imaginary) pair of big reals.
#[derive(Clone, Debug)]
pub struct LValue {
    pub chi: DirichletCharacter,
    pub real: BigReal,
    pub imag: BigReal,
    pub route: LRoute,
}

impl LValue {
    /// Max-norm distance between two L-values.
    pub fn abs_diff(&self, other: &LValue) -> BigReal {
        let dr = self.real.abs_diff(&other.real);
        let di = self.imag.abs_diff(&other.imag);
        if dr >= di {
            dr
        } else {
            di
        }
    }
}

/// psi(a/q) by Gauss's digamma theorem, for 1 <= a <= q:
///
/// ```text
///     psi(a/q) = -gamma - ln(2q) - (pi/2) cot(pi a/q)
///              + 2 sum_{0 < n < q/2} cos(2 pi n a / q) ln sin(pi n / q)
/// ```
///
/// with psi(1) = -gamma.
pub fn digamma_rational(a: u64, q: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    if a == 0 || a > q || q == 0 {
        return Err(Error::Domain(format!(
            "digamma argument must satisfy 1 <= a <= q, got a = {a}, q = {q}"
        )));
    }
    let g = gcd(a, q);
    let (a, q) = (a / g, q / g);
    let bits = ctx.prec_bits();
    let gamma = arith::const_gamma(ctx)?;
    if a == q {
        // psi(1) = -gamma
        let mut v = gamma.as_float().clone();
        v *= -1i32;
        return Ok(BigReal::from_raw(v, *ctx));
    }

    let key = format!("digamma:{a}/{q}");
    if let Some(hit) = arith::memo_lookup(&key, ctx.working_digits(), bits) {
        return Ok(BigReal::from_raw(hit, *ctx));
    }

    let pi = arith::const_pi(ctx)?;
    let ln2q = arith::log_u64(2 * q, ctx)?;
    let mut val = Float::with_val(bits, -gamma.as_float());
    val -= ln2q.as_float();

    // -(pi/2) cot(pi a / q)
    let mut theta = Float::with_val(bits, pi.as_float());
    theta *= a;
    theta /= q;
    let cot = theta.cot();
    let mut t = Float::with_val(bits, pi.as_float());
    t /= 2u32;
    t *= &cot;
    val -= &t;

    // + 2 sum cos(2 pi n a / q) ln sin(pi n / q)
    let mut sum = Float::new(bits);
    for n in 1..=(q - 1) / 2 {
        let mut ang_cos = Float::with_val(bits, pi.as_float());
        ang_cos *= 2 * ((n * a) % q);
        ang_cos /= q;
        let c = ang_cos.cos();

        let mut ang_sin = Float::with_val(bits, pi.as_float());
        ang_sin *= n;
        ang_sin /= q;
        let ls = ang_sin.sin().ln();
        sum += Float::with_val(bits, &c * &ls);
    }
    sum *= 2u32;
    val += &sum;

    arith::memo_store(&key, ctx.working_digits().saturating_sub(2), &val);
    Ok(BigReal::from_raw(val, *ctx))
}

/// L(1, chi) through the digamma closed form. Errors on the principal
/// character, whose L-series diverges at 1.
pub fn l_one_digamma(chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<LValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus();
    let bits = ctx.prec_bits();
    let mut re = Float::new(bits);
    let mut im = Float::new(bits);
    for a in 1..q {
        let v = chi.evaluate(a as i64);
        if v.is_zero() {
            continue;
        }
        let psi = digamma_rational(a, q, ctx)?;
        let (vr, vi) = v.embed(bits);
        re += Float::with_val(bits, &vr * psi.as_float());
        im += Float::with_val(bits, &vi * psi.as_float());
    }
    re /= q;
    re *= -1i32;
    im /= q;
    im *= -1i32;
    Ok(LValue {
        chi: chi.clone(),
        real: BigReal::from_raw(re, *ctx),
        imag: BigReal::from_raw(im, *ctx),
        route: LRoute::Digamma,
    })
}

/// Euler-Maclaurin order for the series route; the tail bound picks the
/// truncation point as the least power of two meeting the target.
const SERIES_EM_ORDER: usize = 12;

/// L(1, chi) by direct summation of chi(n)/n over complete periods with an
/// Euler-Maclaurin tail. Independent of the digamma route: no gamma, no
/// cotangent — only harmonic blocks and logarithms at the boundary.
pub fn l_one_series(chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<LValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus();
    let bits = ctx.prec_bits();
    let mut support_re: Vec<(u64, Float)> = Vec::new();
    let mut support_im: Vec<(u64, Float)> = Vec::new();
    for c in 1..=q {
        let v = chi.evaluate(c as i64);
        if v.is_zero() {
            continue;
        }
        let (vr, vi) = v.embed(bits);
        if !vr.is_zero() {
            support_re.push((c, vr));
        }
        if !vi.is_zero() {
            support_im.push((c, vi));
        }
    }
    let target = ctx.digits() + 4;
    let run = |support: &[(u64, Float)]| -> Result<Float> {
        let spec = PeriodicSum {
            support,
            period: q,
            em_order: SERIES_EM_ORDER,
        };
        Ok(harmonic_periodic_limit(&spec, bits, target, false)?.value)
    };
    let re = run(&support_re)?;
    let im = run(&support_im)?;
    Ok(LValue {
        chi: chi.clone(),
        real: BigReal::from_raw(re, *ctx),
        imag: BigReal::from_raw(im, *ctx),
        route: LRoute::Series,
    })
}

/// True when the character is real-valued (so L(1, chi) is real).
pub fn is_real_character(chi: &DirichletCharacter) -> bool {
    chi.order() <= 2
}

/// Parity passthrough, for callers that do not want to import characters.
pub fn parity(chi: &DirichletCharacter) -> Parity {
    chi.parity()
}

/// Series-route digamma: psi(a/q) from the defining series with an
/// Euler-Maclaurin-regularized tail. This is the independent oracle the
/// Gauss closed form is validated against; only tests should need it.
/// Accepts a <= 2q so the recurrence psi(x+1) = psi(x) + 1/x is checkable.
#[doc(hidden)]
pub fn digamma_series_oracle(a: u64, q: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    if a == 0 || a > 2 * q {
        return Err(Error::Domain("need 1 <= a <= 2q".into()));
    }
    let bits = ctx.prec_bits();
    let gamma = arith::const_gamma(ctx)?;
    let t = Rational::from((a, q));
    let n_terms: u64 = 1 << 17;
    let mut acc = Float::new(bits);
    let mut term = Float::new(bits);
    let tf = Float::with_val(bits, &t);
    for n in 0..n_terms {
        // 1/(n+1) - 1/(n+t)
        term.assign(1u32);
        term /= n + 1;
        acc += &term;
        let mut d = Float::with_val(bits, &tf + n);
        d.recip_mut();
        acc -= &d;
    }
    // regularized tails R(s) = -ln(N+s) + 1/(2(N+s)) + sum_j B_2j/(2j (N+s)^2j)
    let reg = |s: &Float| -> Float {
        let ns = Float::with_val(bits, s + n_terms);
        let mut r = ns.clone().ln();
        r *= -1i32;
        r += Float::with_val(bits, Float::i_exp(1, -1)) / &ns;
        let inv2 = ns.square().recip();
        let mut pw = inv2.clone();
        for (idx, b) in crate::arith::bernoulli::bernoulli_even(6).into_iter().enumerate() {
            let j = idx as u32 + 1;
            let mut c = Float::with_val(bits, b);
            c /= 2 * j;
            c *= &pw;
            r += &c;
            pw *= &inv2;
        }
        r
    };
    let one = Float::with_val(bits, 1u32);
    let tail = Float::with_val(bits, reg(&one) - reg(&tf));
    let mut val = Float::with_val(bits, -gamma.as_float());
    val += &acc;
    val += &tail;
    Ok(BigReal::from_raw(val, *ctx))
}
