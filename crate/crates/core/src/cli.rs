//! Command-line front end: sweep configuration, suite execution and exit
//! codes.
//!
//! Exit codes: 0 when every evaluated record passes, 1 when any record
//! fails or hits an internal consistency error, 2 for usage and
//! configuration errors.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::identity_suite::identities::{check_recurrence, probe_mao31_sign, run_identities, IdentityDomain, IdentityId, IdentityResult};
use crate::identity_suite::lemmas::{run_lemmas, LemmaDomain, LemmaId, LemmaResult};
use crate::modmath::{primes_in, Modulus};
use crate::report::{emit_report, OutputFormat, RecordKind, Report, ReportRecord, Status};
use crate::special_sums::S2_MARGIN;
use crate::verifier::{sweep, CongruenceTarget, PrimeContext, SweepSpec, TargetArgs, VerificationRecord};

/// Environment variable consulted for the worker count when neither the
/// flag nor the config file sets one.
pub const JOBS_ENV: &str = "TRICONG_JOBS";

/// Highest identity bound accepted; the recurrence check runs to `2 * n_max`.
const N_MAX_LIMIT: i64 = 250;

/// Worker count: a fixed number or whatever rayon picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Auto,
    Workers(usize),
}

impl FromStr for Parallelism {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Parallelism::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected a positive worker count or \"auto\", got {s:?}")),
            Ok(n) => Ok(Parallelism::Workers(n)),
        }
    }
}

impl<'de> Deserialize<'de> for Parallelism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            Raw::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Everything a run depends on. The JSON form is accepted by `--config`;
/// the report echoes it without `output_path` and `parallelism`, neither
/// of which changes the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub targets: Vec<String>,
    pub prime_min: u64,
    pub prime_max: u64,
    pub b_range: (i64, i64),
    pub c_range: (i64, i64),
    pub x_range: (i64, i64),
    pub n_max: i64,
    pub modulus_margin: u32,
    pub output_format: OutputFormat,
    #[serde(skip_serializing)]
    pub output_path: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub parallelism: Option<Parallelism>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            targets: Vec::new(),
            prime_min: 5,
            prime_max: 97,
            b_range: (-4, 4),
            c_range: (-4, 4),
            x_range: (1, 8),
            n_max: 100,
            modulus_margin: S2_MARGIN,
            output_format: OutputFormat::Json,
            output_path: None,
            parallelism: None,
        }
    }
}

/// A usage or configuration problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: &str, message: impl Into<String>) -> Self {
        ConfigError { field: field.to_string(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Which suites a subcommand runs by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Verify,
    Identities,
    Lemmas,
    All,
}

/// Targets split by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TargetSet {
    pub congruences: Vec<CongruenceTarget>,
    pub identities: Vec<IdentityId>,
    pub lemmas: Vec<LemmaId>,
}

impl TargetSet {
    fn names(&self) -> Vec<String> {
        let c = self.congruences.iter().map(|t| t.name());
        let i = self.identities.iter().map(|t| t.name());
        let l = self.lemmas.iter().map(|t| t.name());
        c.chain(i).chain(l).map(String::from).collect()
    }
}

fn resolve_targets(names: &[String], suite: Suite) -> Result<TargetSet, ConfigError> {
    let mut set = TargetSet::default();
    if names.is_empty() {
        if matches!(suite, Suite::Verify | Suite::All) {
            set.congruences = CongruenceTarget::ALL.to_vec();
        }
        if matches!(suite, Suite::Identities | Suite::All) {
            set.identities = IdentityId::ALL.to_vec();
        }
        if matches!(suite, Suite::Lemmas | Suite::All) {
            set.lemmas = LemmaId::ALL.to_vec();
        }
        return Ok(set);
    }
    for name in names {
        let allowed = |s: Suite| suite == s || suite == Suite::All;
        if let Ok(t) = name.parse::<CongruenceTarget>() {
            if !allowed(Suite::Verify) {
                return Err(ConfigError::new("targets", format!("{name} is a congruence target; use `verify` or `all`")));
            }
            set.congruences.push(t);
        } else if let Ok(t) = name.parse::<IdentityId>() {
            if !allowed(Suite::Identities) {
                return Err(ConfigError::new("targets", format!("{name} is an identity; use `identities` or `all`")));
            }
            set.identities.push(t);
        } else if let Ok(t) = name.parse::<LemmaId>() {
            if !allowed(Suite::Lemmas) {
                return Err(ConfigError::new("targets", format!("{name} is a lemma; use `lemmas` or `all`")));
            }
            set.lemmas.push(t);
        } else {
            return Err(ConfigError::new("targets", format!("unknown target {name:?}")));
        }
    }
    set.congruences.sort_by_key(|t| t.index());
    set.congruences.dedup();
    set.identities.sort();
    set.identities.dedup();
    set.lemmas.sort();
    set.lemmas.dedup();
    Ok(set)
}

fn check_range(field: &str, (lo, hi): (i64, i64)) -> Result<(), ConfigError> {
    if lo > hi {
        return Err(ConfigError::new(field, format!("empty range {lo}..{hi}")));
    }
    Ok(())
}

/// Validate `cfg` for `suite` and return the resolved targets and primes.
pub fn validate(cfg: &SweepConfig, suite: Suite) -> Result<(TargetSet, Vec<u64>), ConfigError> {
    let targets = resolve_targets(&cfg.targets, suite)?;
    let needs_primes = !targets.congruences.is_empty() || !targets.lemmas.is_empty();
    if cfg.prime_min < 5 {
        return Err(ConfigError::new("prime_min", format!("must be at least 5, got {}", cfg.prime_min)));
    }
    if cfg.prime_max < cfg.prime_min {
        return Err(ConfigError::new("prime_max", format!("{} is below prime_min {}", cfg.prime_max, cfg.prime_min)));
    }
    if cfg.modulus_margin < S2_MARGIN {
        return Err(ConfigError::new("modulus_margin", format!("must be at least {S2_MARGIN}, got {}", cfg.modulus_margin)));
    }
    let primes = primes_in(cfg.prime_min, cfg.prime_max);
    if needs_primes {
        if primes.is_empty() {
            return Err(ConfigError::new("prime_max", format!("no primes in {}..{}", cfg.prime_min, cfg.prime_max)));
        }
        let top = *primes.last().expect("nonempty");
        if Modulus::new(top, 4 + cfg.modulus_margin).is_err() {
            return Err(ConfigError::new(
                "prime_max",
                format!("{top}^{} does not fit in 63 bits", 4 + cfg.modulus_margin),
            ));
        }
    }
    if !targets.congruences.is_empty() {
        check_range("b_range", cfg.b_range)?;
        check_range("c_range", cfg.c_range)?;
        check_range("x_range", cfg.x_range)?;
        for (field, (lo, hi)) in [("b_range", cfg.b_range), ("c_range", cfg.c_range), ("x_range", cfg.x_range)] {
            if lo.abs().max(hi.abs()) > 1_000_000 {
                return Err(ConfigError::new(field, "values must stay within +-1000000"));
            }
        }
    }
    if !targets.identities.is_empty() && !(0..=N_MAX_LIMIT).contains(&cfg.n_max) {
        return Err(ConfigError::new("n_max", format!("must lie in 0..={N_MAX_LIMIT}, got {}", cfg.n_max)));
    }
    Ok((targets, primes))
}

fn join_args(names: &[&str], values: &[i64]) -> String {
    names.iter().zip(values).map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(",")
}

fn congruence_record(r: &VerificationRecord) -> ReportRecord {
    let (b, c) = r.args.bc();
    let x = r.args.x();
    let args = match r.args {
        TargetArgs::Pair { b, c } => format!("b={b},c={c}"),
        TargetArgs::Legendre { x } => format!("x={x}"),
        TargetArgs::Fixed => String::new(),
    };
    let evaluated = r.lhs.is_some();
    ReportRecord {
        kind: RecordKind::Congruence,
        target: r.target.name().to_string(),
        p: Some(r.p.to_string()),
        b: Some(b.to_string()),
        c: Some(c.to_string()),
        x: x.map(|x| x.to_string()),
        args,
        modulus: r.lhs.map(|v| v.modulus().value().to_string()),
        lhs: r.lhs.map(|v| v.value().to_string()).unwrap_or_default(),
        rhs: r.rhs.map(|v| v.value().to_string()).unwrap_or_default(),
        residual_valuation: evaluated.then(|| r.verified_exponent.to_string()),
        required_valuation: Some(r.target.stated_exponent().to_string()),
        status: r.status,
        note: r.note.clone(),
        sort_key: (RecordKind::Congruence, r.target.index(), r.p, vec![b, c, x.unwrap_or(0)]),
    }
}

fn lemma_record(r: &LemmaResult) -> ReportRecord {
    let (b, c, x) = match r.id {
        LemmaId::Lemma11 => (Some(r.args[0].to_string()), Some(r.args[1].to_string()), None),
        LemmaId::Cgh2 | LemmaId::HSun => (None, None, Some(r.args[0].to_string())),
        _ => (None, None, None),
    };
    ReportRecord {
        kind: RecordKind::Lemma,
        target: r.id.name().to_string(),
        p: Some(r.p.to_string()),
        b,
        c,
        x,
        args: join_args(r.id.arg_names(), &r.args),
        modulus: r.lhs.map(|v| v.modulus().value().to_string()),
        lhs: r.lhs.map(|v| v.value().to_string()).unwrap_or_default(),
        rhs: r.rhs.map(|v| v.value().to_string()).unwrap_or_default(),
        residual_valuation: r.residual_valuation.map(|v| v.to_string()),
        required_valuation: Some(r.required_valuation.to_string()),
        status: r.status,
        note: r.note.clone(),
        sort_key: (RecordKind::Lemma, r.id.index(), r.p, r.args.clone()),
    }
}

fn identity_record(r: &IdentityResult) -> ReportRecord {
    let (b, c) = match r.id {
        IdentityId::Sun => (Some(r.args[1].to_string()), Some(r.args[2].to_string())),
        _ => (None, None),
    };
    ReportRecord {
        kind: RecordKind::Identity,
        target: r.id.name().to_string(),
        p: None,
        b,
        c,
        x: None,
        args: join_args(r.id.arg_names(), &r.args),
        modulus: None,
        lhs: r.lhs.to_string(),
        rhs: r.rhs.to_string(),
        residual_valuation: None,
        required_valuation: None,
        status: if r.equal { Status::Pass } else { Status::Fail },
        note: None,
        sort_key: (RecordKind::Identity, r.id.index(), 0, r.args.clone()),
    }
}

/// One record per index of the recurrence check; the sort key places them
/// ahead of the identity's ordinary evaluations.
fn recurrence_records(n_max: i64) -> Vec<ReportRecord> {
    let check = check_recurrence(IdentityId::CatalanNew, n_max).expect("n_max within bounds");
    let id = IdentityId::CatalanNew;
    (0..=n_max)
        .map(|n| {
            let (l, r) = (&check.lhs_residuals[n as usize], &check.rhs_residuals[n as usize]);
            let pass = num_traits::Zero::is_zero(l) && num_traits::Zero::is_zero(r);
            ReportRecord {
                kind: RecordKind::Identity,
                target: id.name().to_string(),
                p: None,
                b: None,
                c: None,
                x: None,
                args: format!("recurrence,n={n}"),
                modulus: None,
                lhs: l.to_string(),
                rhs: r.to_string(),
                residual_valuation: None,
                required_valuation: None,
                status: if pass { Status::Pass } else { Status::Fail },
                note: None,
                sort_key: (RecordKind::Identity, id.index(), 0, vec![-1, n]),
            }
        })
        .collect()
}

fn notes_for(targets: &TargetSet) -> Vec<String> {
    let mut notes = Vec::new();
    if targets.identities.contains(&IdentityId::Mao31) {
        let probe = probe_mao31_sign(30);
        let first = probe.first_failure.map_or("none".to_string(), |(n, i)| format!("n={n}, i={i}"));
        notes.push(format!(
            "ID_MAO_31 is checked as sum_{{k=i}}^{{n-1}} C(k+i,2i)(2k+1)(-1)^k = (-1)^(n-1)(i+n)C(n-1+i,2i); \
             without the (-1)^(n-1) factor it fails for {} of {} pairs with n <= 30 (first at {first}), \
             with it for {}",
            probe.unsigned_failures, probe.checked, probe.signed_failures
        ));
    }
    if targets.identities.contains(&IdentityId::Mao33) {
        notes.push(
            "ID_MAO_33 is checked as sum_{k=i}^{n-1} C(k+i,2i)(2k+1)^3(-1)^k = (-1)^(n-1)(i+n)C(n-1+i,2i)(4n^2-4i-3)"
                .to_string(),
        );
    }
    if targets.lemmas.contains(&LemmaId::Z3) {
        notes.push(
            "L_Z3 is checked with a leading minus: z(p,i,j,3) = -p(-1)^(i+j)C(i+j,j)(3+4i+4j+4ij) mod p^3; \
             the unsigned form fails already at i = j = 0"
                .to_string(),
        );
    }
    notes
}

/// Run the suites selected by `cfg` on the current rayon pool.
pub fn execute(cfg: &SweepConfig, suite: Suite) -> Result<Report<SweepConfig>, ConfigError> {
    let start = Instant::now();
    let (targets, primes) = validate(cfg, suite)?;
    let internal = |e: crate::error::Error| ConfigError::new("config", e.to_string());
    let mut records = Vec::new();
    if !targets.congruences.is_empty() {
        let spec = SweepSpec {
            targets: targets.congruences.clone(),
            primes: primes.clone(),
            b_range: cfg.b_range,
            c_range: cfg.c_range,
            x_range: cfg.x_range,
            margin: cfg.modulus_margin,
        };
        records.extend(sweep(&spec).map_err(internal)?.iter().map(congruence_record));
    }
    if !targets.identities.is_empty() {
        let domain = IdentityDomain::with_n_max(cfg.n_max);
        records.extend(run_identities(&targets.identities, &domain).map_err(internal)?.iter().map(identity_record));
        if targets.identities.contains(&IdentityId::CatalanNew) {
            records.extend(recurrence_records(2 * cfg.n_max));
        }
    }
    if !targets.lemmas.is_empty() {
        let results = run_lemmas(&targets.lemmas, &primes, &LemmaDomain::default()).map_err(internal)?;
        records.extend(results.iter().map(lemma_record));
    }
    let mut echo = cfg.clone();
    echo.targets = targets.names();
    let notes = notes_for(&targets);
    Ok(Report::new(echo, records, notes, start.elapsed()))
}

/// Run `f` on a pool with the requested worker count.
pub fn with_parallelism<T: Send>(jobs: Parallelism, f: impl FnOnce() -> T + Send) -> Result<T, ConfigError> {
    let threads = match jobs {
        Parallelism::Auto => 0,
        Parallelism::Workers(n) => n,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError::new("parallelism", e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Debug, Parser)]
#[command(name = "tricong", version, about = "Verify congruences for sums of powers of central trinomial coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the fourth-power congruences over primes and parameters.
    Verify(SweepArgs),
    /// Check the exact binomial and harmonic identities.
    Identities(SweepArgs),
    /// Check the auxiliary congruences over every prime in range.
    Lemmas(SweepArgs),
    /// Run all three suites.
    All(SweepArgs),
    /// Print the ingredients of one congruence check.
    Show(ShowArgs),
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|_| format!("malformed range {s:?}, expected LO..HI"));
    Ok((parse(lo)?, parse(hi)?))
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON file with the same fields as the report's config echo.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated target names.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<String>>,
    /// Inclusive prime range, e.g. 5..97.
    #[arg(long, allow_hyphen_values = true)]
    primes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n_max: Option<i64>,
    #[arg(long)]
    margin: Option<u32>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker count or "auto".
    #[arg(long)]
    jobs: Option<String>,
}

#[derive(Debug, Args)]
struct ShowArgs {
    #[arg(long)]
    target: String,
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<i64>,
    #[arg(long)]
    margin: Option<u32>,
}

fn load_config(path: &Path) -> Result<SweepConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError::new("config", e.to_string()))
}

fn build_config(args: &SweepArgs) -> Result<SweepConfig, ConfigError> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => SweepConfig::default(),
    };
    if let Some(t) = &args.targets {
        cfg.targets = t.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    if let Some(s) = &args.primes {
        let (lo, hi) = parse_range(s).map_err(|m| ConfigError::new("primes", m))?;
        if lo < 0 || hi < 0 {
            return Err(ConfigError::new("prime_min", format!("must be at least 5, got {lo}")));
        }
        cfg.prime_min = lo as u64;
        cfg.prime_max = hi as u64;
    }
    for (field, flag, slot) in [
        ("b_range", &args.b, &mut cfg.b_range),
        ("c_range", &args.c, &mut cfg.c_range),
        ("x_range", &args.x, &mut cfg.x_range),
    ] {
        if let Some(s) = flag {
            *slot = parse_range(s).map_err(|m| ConfigError::new(field, m))?;
        }
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    if let Some(m) = args.margin {
        cfg.modulus_margin = m;
    }
    if let Some(f) = &args.format {
        cfg.output_format = match f.to_ascii_lowercase().as_str() {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            _ => return Err(ConfigError::new("output_format", format!("expected json or csv, got {f:?}"))),
        };
    }
    if let Some(o) = &args.output {
        cfg.output_path = Some(o.clone());
    }
    if let Some(j) = &args.jobs {
        cfg.parallelism = Some(j.parse().map_err(|m| ConfigError::new("parallelism", m))?);
    }
    Ok(cfg)
}

fn effective_jobs(cfg: &SweepConfig) -> Result<Parallelism, ConfigError> {
    if let Some(j) = cfg.parallelism {
        return Ok(j);
    }
    match std::env::var(JOBS_ENV) {
        Ok(v) => v.parse().map_err(|m| ConfigError::new(JOBS_ENV, m)),
        Err(_) => Ok(Parallelism::Auto),
    }
}

fn run_suite(args: &SweepArgs, suite: Suite) -> Result<i32, ConfigError> {
    let cfg = build_config(args)?;
    let jobs = effective_jobs(&cfg)?;
    let report = with_parallelism(jobs, || execute(&cfg, suite))??;
    emit_report(&report, cfg.output_format, cfg.output_path.as_deref())
        .map_err(|e| ConfigError::new("output_path", e.to_string()))?;
    let t = &report.summary.totals;
    eprintln!(
        "checked {} passed {} failed {} skipped {} in {:.2}s",
        t.checked,
        t.passed,
        t.failed,
        t.skipped,
        report.wall_time.as_secs_f64()
    );
    Ok(if report.all_passed() { 0 } else { 1 })
}

/// The lines printed by `show`, in order.
pub fn show_lines(target: CongruenceTarget, p: u64, args: TargetArgs, margin: u32) -> Result<Vec<String>, ConfigError> {
    let ctx = PrimeContext::new(p, margin).map_err(|e| ConfigError::new("p", e.to_string()))?;
    let record = ctx.check(target, args, None);
    let r = congruence_record(&record);
    let mut lines = vec![format!("target={}", r.target), format!("p={p}")];
    match args {
        TargetArgs::Legendre { x } => lines.push(format!("x={x}")),
        _ => {
            let (b, c) = args.bc();
            lines.push(format!("b={b}"));
            lines.push(format!("c={c}"));
        }
    }
    if let Ok(parts) = ctx.ingredients(target, args) {
        lines.extend(parts.into_iter().map(|(k, v)| format!("{k}={v}")));
    }
    lines.push(format!("lhs={}", r.lhs));
    lines.push(format!("rhs={}", r.rhs));
    lines.push(format!("residual_valuation={}", r.residual_valuation.unwrap_or_default()));
    lines.push(format!("required_valuation={}", target.stated_exponent()));
    lines.push(format!("status={}", r.status));
    if let Some(note) = r.note {
        lines.push(format!("note={note}"));
    }
    Ok(lines)
}

fn run_show(args: &ShowArgs) -> Result<i32, ConfigError> {
    let target: CongruenceTarget = args.target.parse().map_err(|e: crate::error::Error| ConfigError::new("target", e.to_string()))?;
    let targs = match target.shape() {
        crate::verifier::ParamShape::Pair => match (args.b, args.c) {
            (Some(b), Some(c)) => TargetArgs::Pair { b, c },
            _ => return Err(ConfigError::new("b", format!("{target} needs --b and --c"))),
        },
        crate::verifier::ParamShape::Legendre => match args.x {
            Some(x) => TargetArgs::Legendre { x },
            None => return Err(ConfigError::new("x", format!("{target} needs --x"))),
        },
        crate::verifier::ParamShape::Fixed => TargetArgs::Fixed,
    };
    let lines = show_lines(target, args.p, targs, args.margin.unwrap_or(S2_MARGIN))?;
    let failed = lines.iter().any(|l| l == "status=fail" || l == "status=error");
    println!("{}", lines.join("\n"));
    Ok(if failed { 1 } else { 0 })
}

/// Parse `argv` (including the program name) and run; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Verify(a) => run_suite(a, Suite::Verify),
        Command::Identities(a) => run_suite(a, Suite::Identities),
        Command::Lemmas(a) => run_suite(a, Suite::Lemmas),
        Command::All(a) => run_suite(a, Suite::All),
        Command::Show(a) => run_show(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5..97"), Ok((5, 97)));
        assert_eq!(parse_range("-4..=4"), Ok((-4, 4)));
        assert_eq!(parse_range("3"), Ok((3, 3)));
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn parallelism_parsing() {
        assert_eq!("auto".parse::<Parallelism>(), Ok(Parallelism::Auto));
        assert_eq!("8".parse::<Parallelism>(), Ok(Parallelism::Workers(8)));
        assert!("0".parse::<Parallelism>().is_err());
        let cfg: SweepConfig = serde_json::from_str(r#"{"parallelism": 4}"#).unwrap();
        assert_eq!(cfg.parallelism, Some(Parallelism::Workers(4)));
        let cfg: SweepConfig = serde_json::from_str(r#"{"parallelism": "auto"}"#).unwrap();
        assert_eq!(cfg.parallelism, Some(Parallelism::Auto));
    }

    #[test]
    fn validation_names_fields() {
        let cfg = SweepConfig { prime_min: 4, ..SweepConfig::default() };
        assert_eq!(validate(&cfg, Suite::Verify).unwrap_err().field, "prime_min");
        let cfg = SweepConfig { b_range: (3, 1), ..SweepConfig::default() };
        assert_eq!(validate(&cfg, Suite::Verify).unwrap_err().field, "b_range");
        let cfg = SweepConfig { targets: vec!["NOPE".into()], ..SweepConfig::default() };
        assert_eq!(validate(&cfg, Suite::All).unwrap_err().field, "targets");
        let cfg = SweepConfig { targets: vec!["L_Z1".into()], ..SweepConfig::default() };
        assert_eq!(validate(&cfg, Suite::Verify).unwrap_err().field, "targets");
        let cfg = SweepConfig { modulus_margin: 1, ..SweepConfig::default() };
        assert_eq!(validate(&cfg, Suite::Verify).unwrap_err().field, "modulus_margin");
        let cfg = SweepConfig { prime_min: 24, prime_max: 28, ..SweepConfig::default() };
        assert_eq!(validate(&cfg, Suite::Verify).unwrap_err().field, "prime_max");
    }

    #[test]
    fn config_echo_omits_runtime_fields() {
        let cfg = SweepConfig {
            output_path: Some("out.json".into()),
            parallelism: Some(Parallelism::Workers(3)),
            ..SweepConfig::default()
        };
        let v = serde_json::to_value(&cfg).unwrap();
        assert!(v.get("output_path").is_none());
        assert!(v.get("parallelism").is_none());
        assert_eq!(v["b_range"], serde_json::json!([-4, 4]));
        assert!(serde_json::from_str::<SweepConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn show_abstract_case() {
        let lines = show_lines(CongruenceTarget::AbstractBc1, 5, TargetArgs::Fixed, 2).unwrap();
        assert!(lines.contains(&"lhs=115".to_string()));
        assert!(lines.contains(&"rhs=115".to_string()));
        assert!(lines.contains(&"status=pass".to_string()));
    }
}
