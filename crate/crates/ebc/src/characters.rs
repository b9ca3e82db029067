//! Exact Dirichlet-character arithmetic modulo q.
//!
//! Characters are represented by exponent tuples on a fixed generating set of
//! (Z/qZ)*, and their values are exact roots of unity (fractions of a full
//! turn). Nothing in this module touches floating point except the one
//! embedding function at the boundary to the L-value code; in particular the
//! orthogonality relations can be checked exactly, as sums of cyclotomic
//! integers.
//!
//! Generator choice is deterministic: the smallest generator per cyclic
//! component, components ordered by prime; the 2^k component for k >= 3 uses
//! the pair {-1, 5}. Character enumeration is lexicographic on exponent
//! tuples, so character indices are stable across runs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complete, Float, Integer};

use crate::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(1u64, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = (base % modulus) as u128;
    let m = modulus as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // extended Euclid; gcd(a, m) = 1 assumed
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// Smallest generator of the cyclic group (Z/p^e Z)* for odd prime p.
fn smallest_primitive_root(p: u64, e: u32) -> u64 {
    let modulus = p.pow(e);
    let order = (p - 1) * p.pow(e - 1);
    let order_primes: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
    'candidates: for g in 2..modulus {
        if g % p == 0 {
            continue;
        }
        for r in &order_primes {
            if pow_mod(g, order / r, modulus) == 1 {
                continue 'candidates;
            }
        }
        return g;
    }
    unreachable!("(Z/p^e)* is cyclic for odd p");
}

/// Parity of a character: even iff chi(-1) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// An exact root of unity exp(2 pi i num/den), or the value zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
    zero: bool,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let num = num % den;
        let g = gcd(num, den);
        if num == 0 {
            RootOfUnity { num: 0, den: 1, zero: false }
        } else {
            RootOfUnity { num: num / g, den: den / g, zero: false }
        }
    }

    pub fn zero() -> Self {
        RootOfUnity { num: 0, den: 1, zero: true }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1, zero: false }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_one(&self) -> bool {
        !self.zero && self.num == 0
    }

    /// True for values in {0, 1, -1}.
    pub fn is_real(&self) -> bool {
        self.zero || self.den <= 2
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        if self.zero || other.zero {
            return RootOfUnity::zero();
        }
        let den = lcm(self.den, other.den);
        let num =
            ((self.num as u128 * (den / self.den) as u128 + other.num as u128 * (den / other.den) as u128)
                % den as u128) as u64;
        RootOfUnity::new(num, den)
    }

    pub fn conj(&self) -> RootOfUnity {
        if self.zero || self.num == 0 {
            *self
        } else {
            RootOfUnity { num: self.den - self.num, den: self.den, zero: false }
        }
    }

    /// Embed into a (real, imaginary) float pair. Quarter-turn values are
    /// produced exactly.
    pub(crate) fn embed(&self, bits: u32) -> (Float, Float) {
        if self.zero {
            return (Float::new(bits), Float::new(bits));
        }
        match (self.num, self.den) {
            (0, _) => (Float::with_val(bits, 1), Float::new(bits)),
            (1, 2) => (Float::with_val(bits, -1), Float::new(bits)),
            (1, 4) => (Float::new(bits), Float::with_val(bits, 1)),
            (3, 4) => (Float::new(bits), Float::with_val(bits, -1)),
            (num, den) => {
                let mut theta = Float::with_val(bits, rug::float::Constant::Pi);
                theta *= 2 * num;
                theta /= den;
                let (sin, cos) = theta.sin_cos(Float::new(bits));
                (cos, sin)
            }
        }
    }
}

impl std::fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.zero {
            write!(f, "0")
        } else if self.is_one() {
            write!(f, "1")
        } else if self.den == 2 {
            write!(f, "-1")
        } else {
            write!(f, "e({}/{})", self.num, self.den)
        }
    }
}

/// CRT decomposition of (Z/qZ)* with deterministic generators.
#[derive(Debug)]
pub struct ResidueGroup {
    modulus: u64,
    factorization: Vec<(u64, u32)>,
    generators: Vec<u64>,
    orders: Vec<u64>,
    phi: u64,
    dlog: HashMap<u64, Vec<u64>>,
}

impl ResidueGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    fn dlog(&self, residue: u64) -> Option<&Vec<u64>> {
        self.dlog.get(&residue)
    }
}

static GROUP_CACHE: OnceLock<Mutex<HashMap<u64, Arc<ResidueGroup>>>> = OnceLock::new();

/// The unit group modulo q with its CRT decomposition. Cached per q.
pub fn residue_group(q: u64) -> Result<Arc<ResidueGroup>> {
    if q < 1 {
        return Err(Error::Domain("modulus must be >= 1".into()));
    }
    let cache = GROUP_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&q) {
        return Ok(g.clone());
    }
    let built = Arc::new(build_group(q));
    cache.lock().unwrap().insert(q, built.clone());
    Ok(built)
}

fn build_group(q: u64) -> ResidueGroup {
    let factorization = factorize(q);
    let mut generators = Vec::new();
    let mut orders = Vec::new();

    // local generators per prime power, CRT-lifted to mod q
    for &(p, e) in &factorization {
        let pe = p.pow(e);
        let rest = q / pe;
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % q;
            }
            // G = 1 + rest * t with t = (g - 1) * rest^{-1} mod pe
            let t = (g.wrapping_sub(1) % pe) as u128 * mod_inverse(rest % pe, pe) as u128 % pe as u128;
            ((1 + rest as u128 * t) % q as u128) as u64
        };
        if p == 2 {
            match e {
                1 => {} // trivial component
                2 => {
                    generators.push(lift(3));
                    orders.push(2);
                }
                _ => {
                    generators.push(lift(pe - 1)); // -1
                    orders.push(2);
                    generators.push(lift(5));
                    orders.push(1u64 << (e - 2));
                }
            }
        } else {
            generators.push(lift(smallest_primitive_root(p, e)));
            orders.push((p - 1) * p.pow(e - 1));
        }
    }

    let phi = euler_phi(q);
    debug_assert_eq!(orders.iter().product::<u64>(), phi);

    // discrete-log table over the direct product
    let mut dlog: HashMap<u64, Vec<u64>> = HashMap::with_capacity(phi as usize);
    dlog.insert(1 % q, Vec::new());
    for (&g, &d) in generators.iter().zip(orders.iter()) {
        let mut extended = HashMap::with_capacity(dlog.len() * d as usize);
        for (r, v) in &dlog {
            let mut pw = 1u64;
            for j in 0..d {
                let nr = (*r as u128 * pw as u128 % q as u128) as u64;
                let mut nv = v.clone();
                nv.push(j);
                extended.insert(nr, nv);
                pw = (pw as u128 * g as u128 % q as u128) as u64;
            }
        }
        dlog = extended;
    }

    ResidueGroup { modulus: q, factorization, generators, orders, phi, dlog }
}

/// A Dirichlet character mod q, as exponents on the group generators.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<ResidueGroup>,
    exponents: Vec<u64>,
    principal: bool,
    parity: Parity,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(self.group.orders.iter())
            .fold(1, |acc, (&e, &d)| lcm(acc, d / gcd(e, d)))
    }

    /// chi(n) as an exact root of unity; zero when gcd(n, q) > 1.
    pub fn evaluate(&self, n: i64) -> RootOfUnity {
        let q = self.group.modulus;
        if q == 1 {
            return RootOfUnity::one();
        }
        let r = n.rem_euclid(q as i64) as u64;
        if gcd(r, q) != 1 {
            return RootOfUnity::zero();
        }
        let exps = self
            .group
            .dlog(r)
            .expect("coprime residue must be in the discrete-log table");
        let mut den = 1u64;
        for &d in &self.group.orders {
            den = lcm(den, d);
        }
        let mut num: u128 = 0;
        for ((&e, &x), &d) in self
            .exponents
            .iter()
            .zip(exps.iter())
            .zip(self.group.orders.iter())
        {
            let frac = (e as u128 * x as u128) % d as u128;
            num = (num + frac * (den / d) as u128) % den as u128;
        }
        RootOfUnity::new(num as u64, den)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// The complex-conjugate character (exponents negated).
    pub fn conjugate(&self) -> DirichletCharacter {
        let exponents: Vec<u64> = self
            .exponents
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&e, &d)| if e == 0 { 0 } else { d - e })
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exponents,
            principal: self.principal,
            parity: self.parity,
        }
    }
}

fn character_from_exponents(group: &Arc<ResidueGroup>, exponents: Vec<u64>) -> DirichletCharacter {
    let principal = exponents.iter().all(|&e| e == 0);
    let mut chi = DirichletCharacter {
        group: group.clone(),
        exponents,
        principal,
        parity: Parity::Even,
    };
    let q = group.modulus;
    if q > 2 {
        let v = chi.evaluate(q as i64 - 1);
        debug_assert!(v.is_real() && !v.is_zero());
        if !v.is_one() {
            chi.parity = Parity::Odd;
        }
    }
    chi
}

/// All phi(q) characters mod q, principal first, lexicographic on exponent
/// tuples.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = residue_group(q)?;
    let orders = group.orders.clone();
    let mut out = Vec::with_capacity(group.phi as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(character_from_exponents(&group, exps.clone()));
        // odometer, last component fastest: lexicographic order
        let mut i = orders.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Exact cyclotomic-integer sums.

static CYCLOTOMIC_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Integer>>>>> = OnceLock::new();

/// Coefficients of the n-th cyclotomic polynomial, ascending degree.
pub(crate) fn cyclotomic_polynomial(n: u64) -> Arc<Vec<Integer>> {
    let cache = CYCLOTOMIC_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by all proper-divisor cyclotomics
    let mut f = vec![Integer::from(0); n as usize + 1];
    f[0] = Integer::from(-1);
    f[n as usize] = Integer::from(1);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            f = poly_div_exact(&f, &phi_d);
        }
    }
    let arc = Arc::new(f);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials; divisor must be monic and divide
/// exactly.
fn poly_div_exact(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let dn = den.len() - 1;
    assert!(den[dn] == 1, "divisor must be monic");
    let mut rem: Vec<Integer> = num.to_vec();
    let qn = num.len() - 1 - dn;
    let mut quot = vec![Integer::from(0); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= (dj * &c).complete();
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "division must be exact");
    quot
}

/// Exactly decides whether a sum of roots of unity equals the integer `m`.
/// This is membership of the polynomial sum - m in the ideal (Phi_L), no
/// floating point involved. Zero-valued roots contribute nothing.
pub fn exact_sum_equals_integer(roots: &[RootOfUnity], m: i64) -> bool {
    let mut l = 1u64;
    for r in roots {
        if !r.is_zero() {
            l = lcm(l, r.denominator());
        }
    }
    let mut coeffs = vec![Integer::from(0); l as usize];
    for r in roots {
        if r.is_zero() {
            continue;
        }
        let k = (r.numerator() * (l / r.denominator())) as usize;
        coeffs[k] += 1;
    }
    coeffs[0] -= m;
    if coeffs.iter().all(|c| *c == 0) {
        return true;
    }
    // remainder of the coefficient polynomial modulo Phi_L
    let phi = cyclotomic_polynomial(l);
    let dn = phi.len() - 1;
    let mut rem = coeffs;
    for i in (dn..rem.len()).rev() {
        let c = rem[i].clone();
        if c != 0 {
            let base = i - dn;
            for (j, pj) in phi.iter().enumerate() {
                rem[base + j] -= (pj * &c).complete();
            }
        }
    }
    rem.iter().all(|c| *c == 0)
}

/// Exactly decides whether a sum of roots of unity vanishes.
pub fn exact_sum_is_zero(roots: &[RootOfUnity]) -> bool {
    exact_sum_equals_integer(roots, 0)
}
