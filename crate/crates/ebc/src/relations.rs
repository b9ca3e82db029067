//! Integer-relation detection and desk-scale independence probes.
//!
//! [`find_integer_relation`] wraps a PSLQ search with an enforced
//! precision/height sufficiency rule (precision >= 4 log10(H) n digits) and a
//! deterministic outcome: either a residual-checked coefficient vector, or a
//! `none_below_height` certificate. The certificate is an empirical statement
//! about heights up to H at the stated precision, never a proof, and says so.
//!
//! On top of the engine sit the probes: rational-relation searches over the
//! families Gamma_{Omega,q} = { gamma(Omega, v, q) : (v, q) = 1 }, algebraic-
//! ratio probes between two constants, the log-combination constants A_n
//! feeding the conditional algebraic-independence statements, and the
//! irreducible-family combinatorics those statements hypothesize.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::arith::{self, BigReal, PrecisionContext};
use crate::characters::{enumerate_characters, euler_phi, factorize, gcd};
use crate::constants::{gamma_omega_aq, EBCKey, PrimeSet};
use crate::lfunctions::l_one_digamma;
use crate::{Error, Result};

mod pslq;
use pslq::{pslq, PslqOutcome};

/// A relation search: labeled entries, a height bound, one shared context.
#[derive(Clone, Debug)]
pub struct RelationQuery {
    pub entries: Vec<(String, BigReal)>,
    /// Max |coefficient| searched for.
    pub height: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationStatus {
    Found,
    NoneBelowHeight,
}

/// The (height, precision) pair backing a `none_below_height` outcome.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Certificate {
    pub height_bound: u64,
    pub precision_digits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResult {
    pub status: RelationStatus,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<BigReal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub iterations: usize,
}

fn disclaimer(height: u64, digits: u32, norm_bound: f64) -> String {
    format!(
        "no integer relation with max |c_i| <= {height} at {digits} digits \
         (certified max-norm lower bound {norm_bound:.3e}); empirical evidence, not a proof"
    )
}

/// Decimal digits the sufficiency rule demands for a search.
pub fn required_digits(height: u64, entries: usize) -> u32 {
    (4.0 * (height.max(2) as f64).log10() * entries as f64).ceil() as u32
}

/// PSLQ over the query entries. Deterministic for fixed inputs. Refuses to
/// run when the context cannot support the requested height (silent false
/// negatives are the failure mode this guards against).
pub fn find_integer_relation(query: &RelationQuery) -> Result<RelationResult> {
    let n = query.entries.len();
    if n < 2 {
        return Err(Error::InvalidQuery(format!(
            "need at least 2 entries, got {n}"
        )));
    }
    if query.height < 1 {
        return Err(Error::InvalidQuery("height bound must be positive".into()));
    }
    let ctx = query.entries[0].1.ctx();
    if query.entries.iter().any(|(_, v)| v.ctx() != ctx) {
        return Err(Error::InvalidQuery(
            "all entries must share one precision context".into(),
        ));
    }
    let required = required_digits(query.height, n);
    if ctx.digits() < required {
        return Err(Error::InsufficientPrecision {
            required,
            have: ctx.digits(),
            log10_height: (query.height as f64).log10().ceil() as u32,
            entries: n,
        });
    }
    for (label, v) in &query.entries {
        if v.is_below_pow10(-(ctx.working_digits() as i64) + 2) {
            return Err(Error::InvalidQuery(format!("entry '{label}' is zero")));
        }
    }

    let bits = ctx.prec_bits();
    let x: Vec<Float> = query.entries.iter().map(|(_, v)| v.as_float().clone()).collect();
    let detect_eps_log10 = -(ctx.working_digits() as i64 - 8);
    let residual_limit_log10 = -((ctx.digits() / 2) as i64);
    let max_iter = 200 + (30.0 * (n * n) as f64 * ((query.height as f64).log10() + 2.0)) as usize;
    let labels: Vec<String> = query.entries.iter().map(|(l, _)| l.clone()).collect();

    match pslq(&x, query.height, bits, detect_eps_log10, residual_limit_log10, max_iter)? {
        PslqOutcome::Found {
            coefficients,
            residual,
            iterations,
        } => {
            let height_int = Integer::from(query.height);
            if coefficients.iter().any(|c| c.clone().abs() > height_int) {
                return Err(Error::InvalidQuery(format!(
                    "a relation exists but its coefficients exceed the height bound {}; \
                     raise the height",
                    query.height
                )));
            }
            let coefficients: Vec<i64> = coefficients
                .iter()
                .map(|c| c.to_i64().expect("coefficients bounded by height fit i64"))
                .collect();
            Ok(RelationResult {
                status: RelationStatus::Found,
                labels,
                coefficients: Some(coefficients),
                residual: Some(BigReal::from_raw(residual, ctx)),
                certificate: None,
                note: None,
                iterations,
            })
        }
        PslqOutcome::NoneBelowHeight {
            norm_bound,
            iterations,
        } => Ok(RelationResult {
            status: RelationStatus::NoneBelowHeight,
            labels,
            coefficients: None,
            residual: None,
            certificate: Some(Certificate {
                height_bound: query.height,
                precision_digits: ctx.digits(),
            }),
            note: Some(disclaimer(query.height, ctx.digits(), norm_bound)),
            iterations,
        }),
    }
}

/// Relation search over Gamma_{Omega,q} = { gamma(Omega, v, q) : (v,q)=1 },
/// optionally extended with extra labeled entries (gamma itself, logs, the
/// a = q member). A single-element family is trivially independent.
pub fn probe_gamma_family(
    omega: &PrimeSet,
    q: u64,
    height: u64,
    ctx: &PrecisionContext,
    extras: &[(String, BigReal)],
) -> Result<RelationResult> {
    let g = gcd(q, omega.p_omega());
    if g > 1 {
        return Err(Error::UndefinedConstant {
            q,
            p_omega: omega.p_omega(),
            gcd: g,
        });
    }
    let mut entries: Vec<(String, BigReal)> = Vec::new();
    for v in 1..=q {
        if gcd(v, q) == 1 {
            let key = EBCKey::new(omega.clone(), v, q)?;
            let value = gamma_omega_aq(&key, ctx)?;
            entries.push((format!("gamma({omega},{v},{q})"), value));
        }
    }
    entries.extend(extras.iter().cloned());
    if entries.len() < 2 {
        // degenerate family: nothing to relate
        return Ok(RelationResult {
            status: RelationStatus::NoneBelowHeight,
            labels: entries.into_iter().map(|(l, _)| l).collect(),
            coefficients: None,
            residual: None,
            certificate: Some(Certificate {
                height_bound: height,
                precision_digits: ctx.digits(),
            }),
            note: Some("single-element family; no relation is possible".into()),
            iterations: 0,
        });
    }
    find_integer_relation(&RelationQuery { entries, height })
}

/// Probes whether x/y looks algebraic of bounded degree: a relation over
/// [1, r, r^2, ..., r^degree] with r = x/y.
pub fn probe_algebraic_ratio(
    x: &BigReal,
    y: &BigReal,
    degree: u32,
    height: u64,
    ctx: &PrecisionContext,
) -> Result<RelationResult> {
    if y.is_zero() {
        return Err(Error::Domain("ratio probe: division by zero".into()));
    }
    if degree < 1 {
        return Err(Error::ProbeSpec("degree must be >= 1".into()));
    }
    let bits = ctx.prec_bits();
    let r = Float::with_val(bits, x.as_float() / y.as_float());
    let mut entries = Vec::with_capacity(degree as usize + 1);
    let mut pw = Float::with_val(bits, 1u32);
    for k in 0..=degree {
        entries.push((format!("r^{k}"), BigReal::from_raw(pw.clone(), *ctx)));
        if k < degree {
            pw = Float::with_val(bits, &pw * &r);
        }
    }
    find_integer_relation(&RelationQuery { entries, height })
}

/// gamma* = q gamma(Omega, a, q) / delta, the alpha* coefficients per
/// non-principal character, and the log combination
/// A = gamma* - gamma - sum alpha* L(1, chi).
#[derive(Clone, Debug)]
pub struct StarConstants {
    pub gamma_star: BigReal,
    /// (index into `enumerate_characters(q)`, real, imag) per non-principal chi.
    pub alpha_star: Vec<(usize, BigReal, BigReal)>,
    /// A = sum_{p in Omega} log p/(p-1) + sum_{p | q} log p/(p-1), computed
    /// through the gamma* combination (not from the logs directly).
    pub a_value: BigReal,
}

/// Computes the starred constants and cross-checks the A-combination against
/// its explicit log formula to 10^(5 - digits).
pub fn compute_star_constants(
    omega: &PrimeSet,
    a: u64,
    q: u64,
    ctx: &PrecisionContext,
) -> Result<StarConstants> {
    if q == 0 || a == 0 {
        return Err(Error::Domain("a and q must be positive".into()));
    }
    if gcd(a, q) != 1 {
        return Err(Error::Domain(format!(
            "gamma* needs (a, q) = 1, got gcd = {}",
            gcd(a, q)
        )));
    }
    let key = EBCKey::new(omega.clone(), a, q)?;
    let bits = ctx.prec_bits();
    let gamma_aq_value = gamma_omega_aq(&key, ctx)?;
    // gamma* = q gamma / delta
    let mut gs = Float::with_val(bits, gamma_aq_value.as_float());
    gs *= q;
    gs /= &Float::with_val(bits, omega.delta_omega());
    let gamma_star = BigReal::from_raw(gs, *ctx);

    // alpha* = conj(chi)(a) prod_{p in Omega} (1 - chi(p)/p) * q / (phi(q) delta)
    let chars = enumerate_characters(q)?;
    let phi = euler_phi(q);
    let scalar = Rational::from(q) / (Rational::from(phi) * omega.delta_omega().clone());
    let scalar_f = Float::with_val(bits, &scalar);
    let mut alpha_star = Vec::new();
    let mut l_sum_re = Float::new(bits);
    let mut l_sum_im = Float::new(bits);
    for (idx, chi) in chars.iter().enumerate() {
        if chi.is_principal() {
            continue;
        }
        let (mut re, mut im) = chi.evaluate(key.a as i64).conj().embed(bits);
        for &p in omega.primes() {
            let (vr, vi) = chi.evaluate(p as i64).embed(bits);
            let fr = Float::with_val(bits, 1u32) - Float::with_val(bits, &vr / p);
            let fi = -Float::with_val(bits, &vi / p);
            let nre = Float::with_val(bits, &re * &fr) - Float::with_val(bits, &im * &fi);
            let nim = Float::with_val(bits, &re * &fi) + Float::with_val(bits, &im * &fr);
            re = nre;
            im = nim;
        }
        re *= &scalar_f;
        im *= &scalar_f;
        let l = l_one_digamma(chi, ctx)?;
        l_sum_re += Float::with_val(bits, &re * l.real.as_float())
            - Float::with_val(bits, &im * l.imag.as_float());
        l_sum_im += Float::with_val(bits, &re * l.imag.as_float())
            + Float::with_val(bits, &im * l.real.as_float());
        alpha_star.push((
            idx,
            BigReal::from_raw(re, *ctx),
            BigReal::from_raw(im, *ctx),
        ));
    }

    let g_euler = arith::const_gamma(ctx)?;
    let mut a_val = Float::with_val(bits, gamma_star.as_float() - g_euler.as_float());
    a_val -= &l_sum_re;
    let a_value = BigReal::from_raw(a_val, *ctx);

    // the imaginary parts must cancel
    if !BigReal::from_raw(l_sum_im, *ctx).is_below_pow10(-(ctx.digits() as i64) + 5) {
        return Err(Error::CrossCheckFailed(
            "imaginary part of the alpha*-L sum did not cancel".into(),
        ));
    }
    // post-condition: A matches its explicit log formula
    let explicit = explicit_a_value(omega, q, ctx)?;
    if !a_value
        .abs_diff(&explicit)
        .is_below_pow10(-(ctx.digits() as i64) + 5)
    {
        return Err(Error::CrossCheckFailed(format!(
            "A-combination mismatch: {} vs {}",
            a_value.to_decimal_digits(20),
            explicit.to_decimal_digits(20)
        )));
    }

    Ok(StarConstants {
        gamma_star,
        alpha_star,
        a_value,
    })
}

/// sum_{p in Omega} log p/(p-1) + sum_{p | q} log p/(p-1), directly.
fn explicit_a_value(omega: &PrimeSet, q: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    let bits = ctx.prec_bits();
    let mut acc = Float::new(bits);
    for &p in omega.primes() {
        let lp = arith::log_u64(p, ctx)?;
        acc += Float::with_val(bits, lp.as_float() / (p - 1));
    }
    for (p, _) in factorize(q) {
        let lp = arith::log_u64(p, ctx)?;
        acc += Float::with_val(bits, lp.as_float() / (p - 1));
    }
    Ok(BigReal::from_raw(acc, *ctx))
}

/// Relation search among the A_n = gamma*(Omega_n, a, q) combinations, the
/// numerical side of the conditional independence statements. A found
/// relation reflects multiplicative dependence among the underlying prime
/// logs; irreducible families are expected to come back empty-handed.
/// `augment_q_term` appends sum_{p|q} log p/(p-1) as an extra entry.
pub fn schanuel_probe(
    families: &[PrimeSet],
    q: u64,
    height: u64,
    augment_q_term: bool,
    ctx: &PrecisionContext,
) -> Result<RelationResult> {
    if families.is_empty() {
        return Err(Error::ProbeSpec("need at least one prime set".into()));
    }
    for omega in families {
        let g = gcd(q, omega.p_omega());
        if g > 1 {
            return Err(Error::UndefinedConstant {
                q,
                p_omega: omega.p_omega(),
                gcd: g,
            });
        }
    }
    let mut entries: Vec<(String, BigReal)> = Vec::new();
    for omega in families {
        let star = compute_star_constants(omega, 1, q, ctx)?;
        entries.push((format!("A({omega})"), star.a_value));
    }
    if augment_q_term && q > 1 {
        let bits = ctx.prec_bits();
        let mut acc = Float::new(bits);
        for (p, _) in factorize(q) {
            let lp = arith::log_u64(p, ctx)?;
            acc += Float::with_val(bits, lp.as_float() / (p - 1));
        }
        entries.push((
            format!("sum_logp_div_q({q})"),
            BigReal::from_raw(acc, *ctx),
        ));
    }
    find_integer_relation(&RelationQuery { entries, height })
}

// ---------------------------------------------------------------------------
// Irreducible families.

/// A family of prime sets, or of naturals taken through their prime divisors.
#[derive(Clone, Debug)]
pub enum SetFamily {
    PrimeSets(Vec<PrimeSet>),
    Naturals(Vec<u64>),
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Every member owns a prime absent from all the others.
    PrivatePrimes(Vec<(String, u64)>),
    /// This member's primes are covered by the rest of the family.
    Violator { member: String },
}

/// Decides irreducibility: the union of the members' prime sets must strictly
/// shrink when any single member is removed, equivalently every member
/// contributes a private prime. Members must be distinct.
pub fn irreducible_family_check(family: &SetFamily) -> Result<IrreducibilityReport> {
    let members: Vec<(String, Vec<u64>)> = match family {
        SetFamily::PrimeSets(sets) => sets
            .iter()
            .map(|s| (s.to_string(), s.primes().to_vec()))
            .collect(),
        SetFamily::Naturals(ns) => {
            let mut out = Vec::new();
            for &n in ns {
                if n == 0 {
                    return Err(Error::Domain("naturals must be positive".into()));
                }
                let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
                out.push((n.to_string(), primes));
            }
            out
        }
    };
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].0 == members[j].0 {
                return Err(Error::Domain(format!(
                    "family members must be distinct ({} appears twice)",
                    members[i].0
                )));
            }
        }
    }
    let mut assignment = Vec::new();
    let mut violators: Vec<(usize, String)> = Vec::new();
    for (i, (label, primes)) in members.iter().enumerate() {
        let private = primes.iter().find(|p| {
            members
                .iter()
                .enumerate()
                .all(|(j, (_, other))| j == i || !other.contains(p))
        });
        match private {
            Some(&p) => assignment.push((label.clone(), p)),
            None => violators.push((primes.len(), label.clone())),
        }
    }
    // witness: the violator most plausibly redundant (largest prime set,
    // earliest on ties)
    let mut best: Option<&(usize, String)> = None;
    for v in &violators {
        if best.is_none_or(|b| v.0 > b.0) {
            best = Some(v);
        }
    }
    if let Some((_, member)) = best {
        return Ok(IrreducibilityReport {
            irreducible: false,
            witness: Witness::Violator {
                member: member.clone(),
            },
        });
    }
    Ok(IrreducibilityReport {
        irreducible: true,
        witness: Witness::PrivatePrimes(assignment),
    })
}

// ---------------------------------------------------------------------------
// Dimension probe.

/// Parameters for the prime-pair dimension probe: Omega, the cutoff N, and a
/// discriminant surrogate d (d = 1 for the rational case). Requires
/// N > 2^(s+t+2) where s = #primes of d, t = |Omega|.
#[derive(Clone, Debug)]
pub struct DimensionProbeSpec {
    omega: PrimeSet,
    n_limit: u64,
    d: u64,
    s: u32,
    t: u32,
}

impl DimensionProbeSpec {
    pub fn new(omega: PrimeSet, n_limit: u64, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ProbeSpec("d must be positive".into()));
        }
        let s = factorize(d).len() as u32;
        let t = omega.len() as u32;
        let shift = s + t + 2;
        if shift >= 63 || n_limit <= (1u64 << shift) {
            return Err(Error::ProbeSpec(format!(
                "need N > 2^(s+t+2) = {}, got N = {n_limit}",
                1u128 << shift
            )));
        }
        Ok(DimensionProbeSpec {
            omega,
            n_limit,
            d,
            s,
            t,
        })
    }

    pub fn omega(&self) -> &PrimeSet {
        &self.omega
    }

    pub fn n_limit(&self) -> u64 {
        self.n_limit
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn t(&self) -> u32 {
        self.t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionProbeReport {
    pub p: u64,
    pub ell: u64,
    /// min(p, ell) - 1, the dimension lower bound the prime pair certifies.
    pub lower_bound: u64,
    /// Relation probes over Gamma_{Omega,p} and Gamma_{Omega,ell}.
    pub family_results: Vec<(u64, RelationResult)>,
}

/// Finds two primes p, ell >= N/2^(s+t+2) coprime to d * P_Omega, reports the
/// dimension lower bound min(p, ell) - 1, and runs the family probe on both
/// Gamma_{Omega,p} and Gamma_{Omega,ell} as empirical support.
pub fn dimension_probe(
    spec: &DimensionProbeSpec,
    height: u64,
    ctx: &PrecisionContext,
) -> Result<DimensionProbeReport> {
    let shift = spec.s + spec.t + 2;
    let qualifies = |p: u64| -> bool {
        // p >= N / 2^(s+t+2), exactly
        (p as u128) << shift >= spec.n_limit as u128
    };
    let mut found: Vec<u64> = Vec::new();
    for p in 2..=spec.n_limit {
        if found.len() == 2 {
            break;
        }
        if !qualifies(p) || !crate::constants::is_prime(p) {
            continue;
        }
        if spec.d.is_multiple_of(p) || spec.omega.contains(p) {
            continue;
        }
        found.push(p);
    }
    if found.len() < 2 {
        // unreachable when the spec invariant holds; guarded anyway
        return Err(Error::ProbeSpec(format!(
            "no two qualifying primes in [{}, {}]",
            spec.n_limit >> shift,
            spec.n_limit
        )));
    }
    let (p, ell) = (found[0], found[1]);
    let mut family_results = Vec::new();
    for q in [p, ell] {
        let result = probe_gamma_family(&spec.omega, q, height, ctx, &[])?;
        family_results.push((q, result));
    }
    Ok(DimensionProbeReport {
        p,
        ell,
        lower_bound: p.min(ell) - 1,
        family_results,
    })
}

#[cfg(test)]
mod tests;
