use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ebc::cache::CacheConfig;
use ebc::cli::{self, Command, JobSpec, OutputFormat};

#[derive(Parser)]
#[command(
    name = "ebc",
    version,
    about = "Generalized Euler-Briggs constants: dual-route evaluation, identity \
             verification, and integer-relation probes at arbitrary precision"
)]
struct Cli {
    /// Requested precision in decimal digits (10..=10000)
    #[arg(long, global = true, default_value_t = 50)]
    digits: u32,

    /// Output format: text or json
    #[arg(long, global = true, default_value = "text")]
    output: String,

    /// Cache directory (overrides EBC_CACHE_DIR and the platform default)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Disable the persistent digit cache
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// gamma(Omega, a, q) by the closed form and by the defining limit
    Compute {
        /// Comma-separated primes, e.g. "2,5"; empty for the plain constant
        #[arg(long, default_value = "")]
        omega: String,
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        q: u64,
    },
    /// L(1, chi) for non-principal characters mod q
    Lvalue {
        #[arg(long)]
        q: u64,
        /// Character index in enumeration order; omit for all non-principal
        #[arg(long)]
        chi: Option<u64>,
        /// digamma, series, or both
        #[arg(long, default_value = "digamma")]
        route: String,
    },
    /// List the Dirichlet characters mod q
    Chars {
        #[arg(long)]
        q: u64,
        /// Also check row/column orthogonality exactly
        #[arg(long)]
        verify: bool,
    },
    /// Verify a named identity by two independent routes
    Verify {
        /// closed_form_vs_oracle | diamond_ford | qq_identity | gs_sum
        #[arg(long)]
        identity: String,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// Periodic function values, comma-separated rationals (gs_sum)
        #[arg(long)]
        f: Option<String>,
        /// Sieve modulus M (gs_sum)
        #[arg(long)]
        m: Option<u64>,
    },
    /// Integer-relation search over constant expressions
    Pslq {
        /// ';'-separated entries: pi, gamma, log:R, gamma:a,q,
        /// gammaomega:p1,p2, ebc:p1,p2:a:q, qq:p1,p2:q, or decimal literals
        #[arg(long)]
        entries: String,
        /// Max |coefficient| (forms: 100, 1e8, 10^8)
        #[arg(long, default_value = "10")]
        height: String,
    },
    /// Independence probes over computed constants
    Probe {
        /// family | ratio | schanuel | dimension
        #[arg(long, default_value = "family")]
        kind: String,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        height: Option<String>,
        /// family: append gamma itself to the entries
        #[arg(long)]
        with_gamma: bool,
        /// family: append gamma(Omega, q, q) to the entries
        #[arg(long)]
        with_qq: bool,
        /// schanuel: '|'-separated prime sets, e.g. "2|3|2,3"
        #[arg(long)]
        sets: Option<String>,
        /// schanuel: append the sum over p|q of log p/(p-1)
        #[arg(long)]
        augment_q: bool,
        /// ratio: numerator / denominator entry expressions
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        /// dimension: the cutoff N
        #[arg(long)]
        nlimit: Option<u64>,
        /// dimension: discriminant surrogate d (1 for the rational case)
        #[arg(long)]
        d: Option<u64>,
    },
    /// Irreducibility of a family of prime sets or naturals
    Irreducible {
        /// '|'-separated prime sets, e.g. "2|3|2,3"
        #[arg(long)]
        sets: Option<String>,
        /// '|'-separated positive integers, e.g. "6|10|15"
        #[arg(long)]
        naturals: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    let output = match cli.output.as_str() {
        "json" => OutputFormat::Json,
        "text" => OutputFormat::Text,
        other => {
            eprintln!("error: --output must be text or json, got '{other}'");
            std::process::exit(2);
        }
    };

    let mut params: BTreeMap<String, String> = BTreeMap::new();
    let mut set = |k: &str, v: String| {
        params.insert(k.to_string(), v);
    };
    let command = match &cli.command {
        Cmd::Compute { omega, a, q } => {
            set("omega", omega.clone());
            set("a", a.to_string());
            set("q", q.to_string());
            Command::Compute
        }
        Cmd::Lvalue { q, chi, route } => {
            set("q", q.to_string());
            if let Some(chi) = chi {
                set("chi", chi.to_string());
            }
            set("route", route.clone());
            Command::Lvalue
        }
        Cmd::Chars { q, verify } => {
            set("q", q.to_string());
            if *verify {
                set("verify", "true".to_string());
            }
            Command::Chars
        }
        Cmd::Verify {
            identity,
            omega,
            a,
            q,
            f,
            m,
        } => {
            set("identity", identity.clone());
            if let Some(omega) = omega {
                set("omega", omega.clone());
            }
            if let Some(a) = a {
                set("a", a.to_string());
            }
            if let Some(q) = q {
                set("q", q.to_string());
            }
            if let Some(f) = f {
                set("f", f.clone());
            }
            if let Some(m) = m {
                set("m", m.to_string());
            }
            Command::Verify
        }
        Cmd::Pslq { entries, height } => {
            set("entries", entries.clone());
            set("height", height.clone());
            Command::Pslq
        }
        Cmd::Probe {
            kind,
            omega,
            q,
            height,
            with_gamma,
            with_qq,
            sets,
            augment_q,
            x,
            y,
            degree,
            nlimit,
            d,
        } => {
            set("kind", kind.clone());
            if let Some(omega) = omega {
                set("omega", omega.clone());
            }
            if let Some(q) = q {
                set("q", q.to_string());
            }
            if let Some(height) = height {
                set("height", height.clone());
            }
            if *with_gamma {
                set("with_gamma", "true".to_string());
            }
            if *with_qq {
                set("with_qq", "true".to_string());
            }
            if let Some(sets) = sets {
                set("sets", sets.clone());
            }
            if *augment_q {
                set("augment_q", "true".to_string());
            }
            if let Some(x) = x {
                set("x", x.clone());
            }
            if let Some(y) = y {
                set("y", y.clone());
            }
            if let Some(degree) = degree {
                set("degree", degree.to_string());
            }
            if let Some(nlimit) = nlimit {
                set("nlimit", nlimit.to_string());
            }
            if let Some(d) = d {
                set("d", d.to_string());
            }
            Command::Probe
        }
        Cmd::Irreducible { sets, naturals } => {
            if let Some(sets) = sets {
                set("sets", sets.clone());
            }
            if let Some(naturals) = naturals {
                set("naturals", naturals.clone());
            }
            Command::Irreducible
        }
    };

    let job = JobSpec {
        command,
        params,
        digits: cli.digits,
        output,
    };
    let cache = CacheConfig::resolve(cli.cache_dir.clone(), cli.no_cache);
    let (code, rendered) = cli::run_to_exit(&job, &cache);
    if code == 0 {
        print!("{rendered}");
    } else {
        eprint!("{rendered}");
    }
    std::process::exit(code);
}
