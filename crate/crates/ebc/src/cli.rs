//! Command front end: job specifications, execution, and rendering.
//!
//! Every numeric value in the output is a decimal string tagged with the
//! digits it is good for; nothing is ever transported as a binary float.
//! JSON key order is stable (struct order, parameters sorted), so emitted
//! documents re-render byte-identically after a parse.

use std::collections::BTreeMap;
use std::time::Instant;

use rug::Rational;
use serde::Serialize;

use crate::arith::{self, BigReal, PrecisionContext};
use crate::cache::{cache_get, cache_put, canonical_key, CacheConfig, CacheEntry};
use crate::characters::{
    enumerate_characters, exact_sum_equals_integer, exact_sum_is_zero, gcd, Parity, RootOfUnity,
};
use crate::constants::{
    direct_sum_oracle, gamma_aq, gamma_omega, gamma_omega_aq, gamma_omega_qq, verify_identity,
    EBCKey, Identity, PeriodicFunction, PrimeSet,
};
use crate::lfunctions::{l_one_digamma, l_one_series};
use crate::relations::{
    compute_star_constants, dimension_probe, find_integer_relation, probe_algebraic_ratio,
    probe_gamma_family, schanuel_probe, DimensionProbeSpec, RelationQuery, RelationResult,
    RelationStatus, SetFamily, Witness,
};
use crate::{Error, Result};

pub const MIN_DIGITS: u32 = 10;
pub const MAX_DIGITS: u32 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Compute,
    Lvalue,
    Chars,
    Verify,
    Pslq,
    Probe,
    Irreducible,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Lvalue => "lvalue",
            Command::Chars => "chars",
            Command::Verify => "verify",
            Command::Pslq => "pslq",
            Command::Probe => "probe",
            Command::Irreducible => "irreducible",
        }
    }

    fn allowed_params(&self) -> &'static [&'static str] {
        match self {
            Command::Compute => &["omega", "a", "q"],
            Command::Lvalue => &["q", "chi", "route"],
            Command::Chars => &["q", "verify"],
            Command::Verify => &["identity", "omega", "a", "q", "f", "m"],
            Command::Pslq => &["entries", "height"],
            Command::Probe => &[
                "kind", "omega", "q", "height", "with_gamma", "with_qq", "sets", "augment_q",
                "x", "y", "degree", "nlimit", "d",
            ],
            Command::Irreducible => &["sets", "naturals"],
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compute" => Ok(Command::Compute),
            "lvalue" => Ok(Command::Lvalue),
            "chars" => Ok(Command::Chars),
            "verify" => Ok(Command::Verify),
            "pslq" => Ok(Command::Pslq),
            "probe" => Ok(Command::Probe),
            "irreducible" => Ok(Command::Irreducible),
            other => Err(Error::Usage(format!("unknown command '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

/// One job: command, string parameters, precision, output format.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub digits: u32,
    pub output: OutputFormat,
}

impl JobSpec {
    pub fn validate(&self) -> Result<()> {
        if self.digits < MIN_DIGITS || self.digits > MAX_DIGITS {
            return Err(Error::Usage(format!(
                "digits must be in [{MIN_DIGITS}, {MAX_DIGITS}], got {}",
                self.digits
            )));
        }
        let allowed = self.command.allowed_params();
        for key in self.params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Usage(format!(
                    "unknown parameter '{key}' for command '{}'",
                    self.command.as_str()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub label: String,
    pub value: String,
    pub digits_achieved: u32,
    pub route: String,
}

/// The rendered outcome of a job. Field order is the stable JSON schema.
#[derive(Clone, Debug, Serialize)]
pub struct JobOutput {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub digits_requested: u32,
    pub results: Vec<ResultRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
    pub elapsed_ms: u128,
}

impl JobOutput {
    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("output serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} (digits = {})\n",
            self.command, self.digits_requested
        ));
        for row in &self.results {
            if row.digits_achieved > 0 {
                out.push_str(&format!(
                    "  {} = {}  [{} digits, {}]\n",
                    row.label, row.value, row.digits_achieved, row.route
                ));
            } else {
                out.push_str(&format!("  {} = {}  [{}]\n", row.label, row.value, row.route));
            }
        }
        if let Some(pass) = self.pass {
            out.push_str(&format!("  pass: {}\n", if pass { "PASS" } else { "FAIL" }));
        }
        if let Some(cert) = &self.certificate {
            out.push_str(&format!(
                "  certificate: {}\n",
                serde_json::to_string(cert).expect("certificate serializes")
            ));
        }
        out.push_str(&format!("  elapsed: {} ms\n", self.elapsed_ms));
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Json => self.render_json(),
        }
    }
}

// ---------------------------------------------------------------------------
// Parameter access.

struct Params<'a> {
    map: &'a BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    fn get(&self, key: &str) -> Option<&'a str> {
        self.map.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&'a str> {
        self.get(key)
            .ok_or_else(|| Error::Usage(format!("missing required parameter '{key}'")))
    }

    fn u64_opt(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::Usage(format!("parameter '{key}': '{s}' is not a positive integer"))),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        Ok(self.u64_opt(key)?.unwrap_or(default))
    }

    fn u32_opt(&self, key: &str) -> Result<Option<u32>> {
        Ok(self.u64_opt(key)?.map(|v| v as u32))
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(other) => Err(Error::Usage(format!(
                "parameter '{key}': '{other}' is not a boolean"
            ))),
        }
    }

    /// Height bounds accept plain integers, "1e8", or "10^8".
    fn height_or(&self, key: &str, default: u64) -> Result<u64> {
        let Some(s) = self.get(key) else {
            return Ok(default);
        };
        parse_height(s).ok_or_else(|| {
            Error::Usage(format!(
                "parameter '{key}': '{s}' is not a positive integer (forms: 100, 1e8, 10^8)"
            ))
        })
    }
}

fn parse_height(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return (v >= 1).then_some(v);
    }
    let exp = if let Some(rest) = s.strip_prefix("10^") {
        rest.parse::<u32>().ok()?
    } else {
        let rest = s.strip_prefix("1e").or_else(|| s.strip_prefix("1E"))?;
        rest.parse::<u32>().ok()?
    };
    10u64.checked_pow(exp)
}

fn parse_omega(s: &str) -> Result<PrimeSet> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Ok(PrimeSet::empty());
    }
    let mut primes = Vec::new();
    for part in trimmed.split(',') {
        let p: u64 = part
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("omega: '{part}' is not a positive integer")))?;
        primes.push(p);
    }
    PrimeSet::new(primes)
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Usage(format!("'{s}' is not a rational (forms: 3, -2/5)"));
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Usage(format!("'{s}': zero denominator")));
        }
        Ok(Rational::from((n, d)))
    } else {
        t.parse::<i64>().map(Rational::from).map_err(|_| bad())
    }
}

/// Entry expressions for relation queries: named constants or decimal
/// literals. Entries are ';'-separated on the command line.
///
///   pi | gamma | log:R | gamma:a,q | gammaomega:p1,p2 | ebc:p1,p2:a:q |
///   qq:p1,p2:q | <decimal literal>
fn parse_entry_expr(expr: &str, ctx: &PrecisionContext) -> Result<(String, BigReal)> {
    let e = expr.trim();
    let value = if e == "pi" {
        arith::const_pi(ctx)?
    } else if e == "gamma" {
        arith::const_gamma(ctx)?
    } else if let Some(rest) = e.strip_prefix("log:") {
        let r = parse_rational(rest)?;
        arith::log_natural(&r, ctx)?
    } else if let Some(rest) = e.strip_prefix("gamma:") {
        let (a, q) = rest
            .split_once(',')
            .ok_or_else(|| Error::Usage(format!("'{e}': expected gamma:a,q")))?;
        let a: u64 = a.trim().parse().map_err(|_| Error::Usage(format!("'{e}': bad a")))?;
        let q: u64 = q.trim().parse().map_err(|_| Error::Usage(format!("'{e}': bad q")))?;
        gamma_aq(a, q, ctx)?
    } else if let Some(rest) = e.strip_prefix("gammaomega:") {
        let omega = parse_omega(rest)?;
        gamma_omega(&omega, ctx)?
    } else if let Some(rest) = e.strip_prefix("ebc:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Usage(format!("'{e}': expected ebc:omega:a:q")));
        }
        let omega = parse_omega(parts[0])?;
        let a: u64 = parts[1].trim().parse().map_err(|_| Error::Usage(format!("'{e}': bad a")))?;
        let q: u64 = parts[2].trim().parse().map_err(|_| Error::Usage(format!("'{e}': bad q")))?;
        gamma_omega_aq(&EBCKey::new(omega, a, q)?, ctx)?
    } else if let Some(rest) = e.strip_prefix("qq:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::Usage(format!("'{e}': expected qq:omega:q")));
        }
        let omega = parse_omega(parts[0])?;
        let q: u64 = parts[1].trim().parse().map_err(|_| Error::Usage(format!("'{e}': bad q")))?;
        gamma_omega_qq(&omega, q, ctx)?
    } else {
        BigReal::parse_decimal(e, *ctx)
            .map_err(|_| Error::Usage(format!("'{e}' is not a known entry expression or decimal")))?
    };
    Ok((e.to_string(), value))
}

// ---------------------------------------------------------------------------
// Execution.

/// Executes a job. Numeric rows carry decimal strings and achieved digits;
/// relation outcomes land in `certificate`; verify/probe set `pass`.
pub fn run(job: &JobSpec, cache: &CacheConfig) -> Result<JobOutput> {
    job.validate()?;
    let started = Instant::now();
    let ctx = PrecisionContext::new(job.digits)?;
    let p = Params { map: &job.params };
    let (results, pass, certificate) = match job.command {
        Command::Compute => cmd_compute(&p, &ctx, cache)?,
        Command::Lvalue => cmd_lvalue(&p, &ctx, cache)?,
        Command::Chars => cmd_chars(&p)?,
        Command::Verify => cmd_verify(&p, &ctx)?,
        Command::Pslq => cmd_pslq(&p, &ctx)?,
        Command::Probe => cmd_probe(&p, &ctx)?,
        Command::Irreducible => cmd_irreducible(&p)?,
    };
    Ok(JobOutput {
        command: job.command.as_str().to_string(),
        params: job.params.clone(),
        digits_requested: job.digits,
        results,
        pass,
        certificate,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

type CommandOutcome = (Vec<ResultRow>, Option<bool>, Option<serde_json::Value>);

fn row(label: impl Into<String>, value: String, digits: u32, route: &str) -> ResultRow {
    ResultRow {
        label: label.into(),
        value,
        digits_achieved: digits,
        route: route.to_string(),
    }
}

fn cmd_compute(p: &Params, ctx: &PrecisionContext, cache: &CacheConfig) -> Result<CommandOutcome> {
    let omega = parse_omega(p.get("omega").unwrap_or(""))?;
    let a = p.u64_or("a", 1)?;
    let q = p.u64_or("q", 1)?;
    let key = EBCKey::new(omega.clone(), a, q)?;
    let mut rows = Vec::new();

    let closed = match gamma_omega_aq(&key, ctx) {
        Ok(v) => Some(v),
        Err(Error::ClosedFormUnavailable { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(value) = &closed {
        let cache_key = canonical_key(
            "ebc",
            &[
                ("omega", omega.to_string()),
                ("a", key.a.to_string()),
                ("q", key.q.to_string()),
            ],
        );
        let rendered = match cache_get(cache, &cache_key, ctx.digits()) {
            Some(hit) => BigReal::parse_decimal(&hit.decimal_string, *ctx)?.to_decimal(),
            None => {
                let s = value.to_decimal();
                cache_put(
                    cache,
                    &CacheEntry {
                        key: cache_key,
                        digits_stored: ctx.digits(),
                        decimal_string: s.clone(),
                        version: crate::cache::CACHE_VERSION,
                    },
                );
                s
            }
        };
        rows.push(row(
            format!("gamma({omega},{},{})", key.a, key.q),
            rendered,
            ctx.digits(),
            "closed_form",
        ));
    }

    let oracle = direct_sum_oracle(&omega, key.a, key.q, ctx)?;
    rows.push(row(
        format!("gamma({omega},{},{}) [defining limit]", key.a, key.q),
        oracle.value.to_decimal_digits(oracle.achieved_digits.min(ctx.digits())),
        oracle.achieved_digits.min(ctx.digits()),
        "oracle",
    ));

    if let Some(value) = &closed {
        let diff = value.abs_diff(&oracle.value);
        rows.push(row("difference", diff.to_decimal_digits(3), 3, "derived"));
    }
    Ok((rows, None, None))
}

fn cmd_lvalue(p: &Params, ctx: &PrecisionContext, cache: &CacheConfig) -> Result<CommandOutcome> {
    let q = p
        .u64_opt("q")?
        .ok_or_else(|| Error::Usage("missing required parameter 'q'".into()))?;
    let route = p.get("route").unwrap_or("digamma");
    if !["digamma", "series", "both"].contains(&route) {
        return Err(Error::Usage(format!(
            "parameter 'route': '{route}' is not one of digamma|series|both"
        )));
    }
    let chars = enumerate_characters(q)?;
    let indices: Vec<usize> = match p.u64_opt("chi")? {
        Some(i) => {
            let i = i as usize;
            if i >= chars.len() {
                return Err(Error::Usage(format!(
                    "parameter 'chi': index {i} out of range (phi({q}) = {})",
                    chars.len()
                )));
            }
            vec![i]
        }
        None => (0..chars.len()).filter(|&i| i > 0).collect(),
    };
    let mut rows = Vec::new();
    for idx in indices {
        let chi = &chars[idx];
        let mut per_route = Vec::new();
        for r in ["digamma", "series"] {
            if route != "both" && route != r {
                continue;
            }
            let (re_key, im_key) = (
                canonical_key(
                    "lvalue",
                    &[
                        ("q", q.to_string()),
                        ("chi", idx.to_string()),
                        ("route", r.to_string()),
                        ("part", "re".to_string()),
                    ],
                ),
                canonical_key(
                    "lvalue",
                    &[
                        ("q", q.to_string()),
                        ("chi", idx.to_string()),
                        ("route", r.to_string()),
                        ("part", "im".to_string()),
                    ],
                ),
            );
            let cached = match (
                cache_get(cache, &re_key, ctx.digits()),
                cache_get(cache, &im_key, ctx.digits()),
            ) {
                (Some(re), Some(im)) => Some((
                    BigReal::parse_decimal(&re.decimal_string, *ctx)?,
                    BigReal::parse_decimal(&im.decimal_string, *ctx)?,
                )),
                _ => None,
            };
            let (re, im) = match cached {
                Some(pair) => pair,
                None => {
                    let l = if r == "digamma" {
                        l_one_digamma(chi, ctx)?
                    } else {
                        l_one_series(chi, ctx)?
                    };
                    for (k, v) in [(&re_key, &l.real), (&im_key, &l.imag)] {
                        cache_put(
                            cache,
                            &CacheEntry {
                                key: k.clone(),
                                digits_stored: ctx.digits(),
                                decimal_string: v.to_decimal(),
                                version: crate::cache::CACHE_VERSION,
                            },
                        );
                    }
                    (l.real.clone(), l.imag.clone())
                }
            };
            rows.push(row(
                format!("L(1,chi[{q},{idx}]).re"),
                re.to_decimal(),
                ctx.digits(),
                r,
            ));
            rows.push(row(
                format!("L(1,chi[{q},{idx}]).im"),
                im.to_decimal(),
                ctx.digits(),
                r,
            ));
            per_route.push((re, im));
        }
        if per_route.len() == 2 {
            let dr = per_route[0].0.abs_diff(&per_route[1].0);
            let di = per_route[0].1.abs_diff(&per_route[1].1);
            let diff = if dr >= di { dr } else { di };
            rows.push(row(
                format!("L(1,chi[{q},{idx}]).route_diff"),
                diff.to_decimal_digits(3),
                3,
                "derived",
            ));
        }
    }
    Ok((rows, None, None))
}

fn cmd_chars(p: &Params) -> Result<CommandOutcome> {
    let q = p
        .u64_opt("q")?
        .ok_or_else(|| Error::Usage("missing required parameter 'q'".into()))?;
    let verify = p.flag("verify")?;
    let chars = enumerate_characters(q)?;
    let mut rows = Vec::new();
    for (i, chi) in chars.iter().enumerate() {
        let parity = match chi.parity() {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        rows.push(row(
            format!("chi[{q},{i}]"),
            format!(
                "exponents={:?} parity={parity} order={} principal={}",
                chi.exponents(),
                chi.order(),
                chi.is_principal()
            ),
            0,
            "exact",
        ));
    }
    let pass = if verify {
        let mut ok = true;
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
                    chars.len() as i64
                } else {
                    0
                };
                ok &= exact_sum_equals_integer(&terms, expected);
            }
        }
        rows.push(row(
            "orthogonality",
            format!("column and row relations checked exactly for q={q}"),
            0,
            "exact",
        ));
        Some(ok)
    } else {
        None
    };
    Ok((rows, pass, None))
}

fn cmd_verify(p: &Params, ctx: &PrecisionContext) -> Result<CommandOutcome> {
    let name = p.require("identity")?;
    let identity = match name {
        "closed_form_vs_oracle" => {
            let omega = parse_omega(p.get("omega").unwrap_or(""))?;
            let a = p.u64_or("a", 1)?;
            let q = p.u64_or("q", 1)?;
            Identity::ClosedFormVsOracle { omega, a, q }
        }
        "diamond_ford" => {
            let omega = parse_omega(p.get("omega").unwrap_or(""))?;
            Identity::DiamondFord { omega }
        }
        "qq_identity" => {
            let omega = parse_omega(p.get("omega").unwrap_or(""))?;
            let q = p.u64_or("q", 2)?;
            Identity::QqIdentity { omega, q }
        }
        "gs_sum" => {
            let f_spec = p.require("f")?;
            let values: Vec<Rational> = f_spec
                .split(',')
                .map(parse_rational)
                .collect::<Result<_>>()?;
            let f = PeriodicFunction::new(values)?;
            let m = p.u64_or("m", 1)?;
            Identity::GsSum { f, m }
        }
        other => return Err(Error::UnknownIdentity(other.to_string())),
    };
    let report = verify_identity(&identity, ctx)?;
    let rows = vec![
        row("lhs", report.lhs.to_decimal(), ctx.digits(), "identity"),
        row("rhs", report.rhs.to_decimal(), ctx.digits(), "independent"),
        row(
            "abs_diff",
            report.abs_diff.to_decimal_digits(3),
            3,
            "derived",
        ),
        row(
            "tolerance",
            format!("1e{}", report.tol_log10),
            0,
            "contract",
        ),
    ];
    Ok((rows, Some(report.pass), None))
}

fn relation_certificate(result: &RelationResult) -> Result<serde_json::Value> {
    serde_json::to_value(result)
        .map_err(|e| Error::Usage(format!("certificate serialization failed: {e}")))
}

fn cmd_pslq(p: &Params, ctx: &PrecisionContext) -> Result<CommandOutcome> {
    let spec = p.require("entries")?;
    let height = p.height_or("height", 10)?;
    let mut entries = Vec::new();
    for expr in spec.split(';') {
        if !expr.trim().is_empty() {
            entries.push(parse_entry_expr(expr, ctx)?);
        }
    }
    let rows: Vec<ResultRow> = entries
        .iter()
        .map(|(label, v)| row(label.clone(), v.to_decimal(), ctx.digits(), "entry"))
        .collect();
    let result = find_integer_relation(&RelationQuery { entries, height })?;
    let cert = relation_certificate(&result)?;
    Ok((rows, None, Some(cert)))
}

fn cmd_probe(p: &Params, ctx: &PrecisionContext) -> Result<CommandOutcome> {
    let kind = p.get("kind").unwrap_or("family");
    match kind {
        "family" => {
            let omega = parse_omega(p.get("omega").unwrap_or(""))?;
            let q = p.u64_or("q", 1)?;
            let height = p.height_or("height", 100)?;
            let mut extras: Vec<(String, BigReal)> = Vec::new();
            if p.flag("with_qq")? {
                extras.push((
                    format!("gamma({omega},{q},{q})"),
                    gamma_omega_qq(&omega, q, ctx)?,
                ));
            }
            if p.flag("with_gamma")? {
                extras.push(("gamma".to_string(), arith::const_gamma(ctx)?));
            }
            let result = probe_gamma_family(&omega, q, height, ctx, &extras)?;
            let mut rows = Vec::new();
            for v in 1..=q {
                if gcd(v, q) == 1 {
                    let value = gamma_omega_aq(&EBCKey::new(omega.clone(), v, q)?, ctx)?;
                    rows.push(row(
                        format!("gamma({omega},{v},{q})"),
                        value.to_decimal(),
                        ctx.digits(),
                        "closed_form",
                    ));
                }
            }
            for (label, v) in &extras {
                rows.push(row(label.clone(), v.to_decimal(), ctx.digits(), "entry"));
            }
            let pass = result.status == RelationStatus::NoneBelowHeight;
            let cert = relation_certificate(&result)?;
            Ok((rows, Some(pass), Some(cert)))
        }
        "ratio" => {
            let x = parse_entry_expr(p.require("x")?, ctx)?;
            let y = parse_entry_expr(p.require("y")?, ctx)?;
            let degree = p.u32_opt("degree")?.unwrap_or(2);
            let height = p.height_or("height", 100)?;
            let result = probe_algebraic_ratio(&x.1, &y.1, degree, height, ctx)?;
            let rows = vec![
                row(x.0, x.1.to_decimal(), ctx.digits(), "entry"),
                row(y.0, y.1.to_decimal(), ctx.digits(), "entry"),
            ];
            let pass = result.status == RelationStatus::NoneBelowHeight;
            let cert = relation_certificate(&result)?;
            Ok((rows, Some(pass), Some(cert)))
        }
        "schanuel" => {
            let sets_spec = p.require("sets")?;
            let mut families = Vec::new();
            for s in sets_spec.split('|') {
                families.push(parse_omega(s)?);
            }
            let q = p.u64_or("q", 1)?;
            let height = p.height_or("height", 100)?;
            let augment = p.flag("augment_q")?;
            let result = schanuel_probe(&families, q, height, augment, ctx)?;
            let mut rows = Vec::new();
            for omega in &families {
                let star = compute_star_constants(omega, 1, q, ctx)?;
                rows.push(row(
                    format!("A({omega})"),
                    star.a_value.to_decimal(),
                    ctx.digits(),
                    "star_combination",
                ));
            }
            let pass = result.status == RelationStatus::NoneBelowHeight;
            let cert = relation_certificate(&result)?;
            Ok((rows, Some(pass), Some(cert)))
        }
        "dimension" => {
            let omega = parse_omega(p.get("omega").unwrap_or(""))?;
            let nlimit = p
                .u64_opt("nlimit")?
                .ok_or_else(|| Error::Usage("missing required parameter 'nlimit'".into()))?;
            let d = p.u64_or("d", 1)?;
            let height = p.height_or("height", 100)?;
            let spec = DimensionProbeSpec::new(omega, nlimit, d)?;
            let report = dimension_probe(&spec, height, ctx)?;
            let mut rows = vec![
                row("p", report.p.to_string(), 0, "sieve"),
                row("ell", report.ell.to_string(), 0, "sieve"),
                row("lower_bound", report.lower_bound.to_string(), 0, "derived"),
            ];
            let mut any_none = false;
            for (q, res) in &report.family_results {
                let status = match res.status {
                    RelationStatus::Found => "found",
                    RelationStatus::NoneBelowHeight => {
                        any_none = true;
                        "none_below_height"
                    }
                };
                rows.push(row(format!("family(q={q})"), status.to_string(), 0, "pslq"));
            }
            let cert = serde_json::to_value(&report.family_results)
                .map_err(|e| Error::Usage(format!("certificate serialization failed: {e}")))?;
            Ok((rows, Some(any_none), Some(cert)))
        }
        other => Err(Error::Usage(format!(
            "parameter 'kind': '{other}' is not one of family|ratio|schanuel|dimension"
        ))),
    }
}

fn cmd_irreducible(p: &Params) -> Result<CommandOutcome> {
    let family = match (p.get("sets"), p.get("naturals")) {
        (Some(sets), None) => {
            let mut members = Vec::new();
            for s in sets.split('|') {
                members.push(parse_omega(s)?);
            }
            SetFamily::PrimeSets(members)
        }
        (None, Some(ns)) => {
            let mut members = Vec::new();
            for s in ns.split('|') {
                let n: u64 = s.trim().parse().map_err(|_| {
                    Error::Usage(format!("naturals: '{s}' is not a positive integer"))
                })?;
                members.push(n);
            }
            SetFamily::Naturals(members)
        }
        _ => {
            return Err(Error::Usage(
                "provide exactly one of 'sets' (e.g. \"2|3|2,3\") or 'naturals' (e.g. \"6|10|15\")"
                    .into(),
            ))
        }
    };
    let report = crate::relations::irreducible_family_check(&family)?;
    let mut rows = vec![row(
        "irreducible",
        report.irreducible.to_string(),
        0,
        "combinatorial",
    )];
    match &report.witness {
        Witness::Violator { member } => {
            rows.push(row(
                "witness",
                format!("{member} has no private prime"),
                0,
                "combinatorial",
            ));
        }
        Witness::PrivatePrimes(assignment) => {
            for (member, prime) in assignment {
                rows.push(row(
                    format!("private_prime({member})"),
                    prime.to_string(),
                    0,
                    "combinatorial",
                ));
            }
        }
    }
    Ok((rows, None, None))
}

/// Convenience used by the binary: run a job and render it, mapping errors
/// to the documented exit codes (0 success, 1 domain error, 2 usage error).
pub fn run_to_exit(job: &JobSpec, cache: &CacheConfig) -> (i32, String) {
    match run(job, cache) {
        Ok(out) => (0, out.render(job.output)),
        Err(e @ Error::Usage(_)) => (2, format!("error: {e}\n")),
        Err(e) => (1, format!("error: {e}\n")),
    }
}
