mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use entropylab::covers::{is_splitting, shearer_check, shifted_cover, KCover};
use entropylab::description::{preset, System, SystemDescription};
use entropylab::entropy::{EntropyFunction, Flavor};
use entropylab::group::{enumerate_subsets, Group, Subset};
use entropylab::properties::{
    check_property, counting_lemma_fuzz, infimum_rule_report, search_counterexample, CheckOptions, Family,
    Property, SearchTarget, Status,
};
use entropylab::report::scaled;
use entropylab::reproduce::reproduce;
use entropylab::{Error, Result};

use cache::Cache;

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "entropylab", version, about = "Entropy set functions of subshifts: values, properties, covers")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// System description file (JSON).
    #[arg(long, global = true, conflicts_with = "preset")]
    desc: Option<PathBuf>,
    /// Built-in system: golden_mean, z3_example, z3_example_5pt, f2_bernoulli, bernoulli_z.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Report values in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// H(F) and H(F)/|F| for the given sets.
    Entropy {
        /// A set: JSON array, `a..b`, `a..=b`, `all`, `ball:R` or `box:N`. Repeatable.
        #[arg(long = "set", allow_hyphen_values = true)]
        sets: Vec<String>,
        /// Evaluate every nonempty subset of this window instead.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value = "topological")]
        flavor: String,
    },
    /// Exhaustive check of one property over a window.
    Check {
        #[arg(long)]
        property: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value = "topological")]
        flavor: String,
        #[arg(long, default_value_t = 6)]
        max_parts: usize,
        #[arg(long, default_value_t = 2)]
        max_mult: usize,
    },
    /// Shearer's inequality for one k-cover.
    Shearer {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value = "topological")]
        flavor: String,
    },
    /// Whether a k-cover splits into k covers.
    Split {
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Infimum of H(F)/|F| over a window against the Følner profile.
    Infimum {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value = "topological")]
        flavor: String,
    },
    /// Seeded random instances of the counting lemma.
    Lemma {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        alphabet_max: usize,
    },
    /// Random search for violations.
    Search {
        /// z3, disjoint, random-sft or shifted-013.
        #[arg(long)]
        family: String,
        /// Sh or infimum_rule.
        #[arg(long, default_value = "Sh")]
        target: String,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Recompute the worked examples and compare with the expected values.
    Reproduce {
        /// Use the description in FILE in place of preset NAME. Repeatable.
        #[arg(long = "replace", value_name = "NAME=FILE")]
        replace: Vec<String>,
    },
}

#[derive(Args)]
struct CoverArgs {
    /// The covered set.
    #[arg(long = "set", allow_hyphen_values = true)]
    base: String,
    /// A part of the cover; repeat for each part, repeats count separately.
    #[arg(long = "part", allow_hyphen_values = true)]
    parts: Vec<String>,
    /// Use the translates Fg, g in F⁻¹E, of this shape as parts.
    #[arg(long, allow_hyphen_values = true)]
    shifted: Option<String>,
}

struct Outcome {
    results: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn new(results: Value, text: String, code: u8) -> Self {
        Outcome { results, text, code }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let (digest, outcome) = match run(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::Resource(_)) {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_INPUT
            };
            return ExitCode::from(code);
        }
    };
    let elapsed = start.elapsed();
    if cli.common.json {
        let mut report = json!({
            "command": name,
            "args": args,
            "input_digest": digest,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": cli.common.seed,
            "results": scale(outcome.results, cli.common.bits, None),
        });
        if cli.common.timings {
            report["wall_time_ms"] = json!(elapsed.as_millis() as u64);
        }
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        print!("{}", outcome.text);
        if cli.common.timings {
            println!("wall time: {} ms", elapsed.as_millis());
        }
    }
    ExitCode::from(outcome.code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Entropy { .. } => "entropy",
        Command::Check { .. } => "check",
        Command::Shearer { .. } => "shearer",
        Command::Split { .. } => "split",
        Command::Infimum { .. } => "infimum",
        Command::Lemma { .. } => "lemma",
        Command::Search { .. } => "search",
        Command::Reproduce { .. } => "reproduce",
    }
}

/// Rescales entropy-valued numbers for `--bits` and rounds every float to
/// 12 significant digits. Probabilities, ratios and tolerances keep their
/// unit.
fn scale(v: Value, bits: bool, key: Option<&str>) -> Value {
    let unitless = matches!(key, Some("tolerance" | "probs" | "ratio" | "min_ratio"));
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            json!(scaled(x, bits && !unitless))
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(|x| scale(x, bits, key)).collect()),
        Value::Object(m) => Value::Object(
            m.into_iter()
                .map(|(k, x)| {
                    let y = scale(x, bits, Some(&k));
                    (k, y)
                })
                .collect(),
        ),
        other => other,
    }
}

fn load_description(common: &Common) -> Result<Option<SystemDescription>> {
    match (&common.desc, &common.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Description(format!("{}: {e}", path.display())))?;
            Ok(Some(SystemDescription::from_json(&text)?))
        }
        (None, Some(name)) => Ok(Some(preset(name)?)),
        (None, None) => Ok(None),
    }
}

fn require(desc: Option<SystemDescription>) -> Result<SystemDescription> {
    desc.ok_or_else(|| Error::Description("a system is required: pass --desc FILE or --preset NAME".into()))
}

fn digest_of(desc: Option<&SystemDescription>) -> String {
    let text = desc.map(SystemDescription::to_json).unwrap_or_default();
    hex::encode(Sha256::digest(text.as_bytes()))
}

struct Session {
    system: System,
    h: EntropyFunction,
    cache: Option<Cache>,
}

impl Session {
    fn open(desc: SystemDescription, digest: &str, flavor: &str) -> Result<Session> {
        let flavor: Flavor = flavor.parse()?;
        let system = System::load(desc)?;
        let h = system.entropy(flavor)?;
        let cache = Cache::from_env(digest, &flavor.to_string());
        if let Some(c) = &cache {
            c.load_into(system.group(), &h);
        }
        Ok(Session { system, h, cache })
    }

    fn group(&self) -> &Group {
        self.system.group()
    }

    fn close(self) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.store(self.system.group(), &self.h) {
                eprintln!("warning: could not write the cache: {e}");
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(String, Outcome)> {
    let common = &cli.common;
    let desc = load_description(common)?;
    let digest = digest_of(desc.as_ref());
    let bits = common.bits;
    let unit = if bits { "bits" } else { "nats" };
    let outcome = match &cli.command {
        Command::Entropy {
            sets,
            window,
            max_size,
            flavor,
        } => {
            let s = Session::open(require(desc)?, &digest, flavor)?;
            let group = s.group().clone();
            let mut targets: Vec<Subset> = sets.iter().map(|t| parse_set(&group, t)).collect::<Result<_>>()?;
            if let Some(w) = window {
                let w = parse_set(&group, w)?;
                targets.extend(enumerate_subsets(&w, max_size.unwrap_or(w.len())));
            }
            if targets.is_empty() {
                return Err(Error::Description("give at least one --set or a --window".into()));
            }
            let mut rows = Vec::new();
            let mut text = String::new();
            for f in &targets {
                let v = s.h.value(f)?;
                let normalized = if f.is_empty() { None } else { Some(v / f.len() as f64) };
                writeln!(
                    text,
                    "H({f}) = {} {unit}{}",
                    scaled(v, bits),
                    normalized.map(|n| format!(", per element {}", scaled(n, bits))).unwrap_or_default()
                )
                .expect("string write");
                rows.push(json!({
                    "set": group.encode_subset(f),
                    "value": v,
                    "normalized": normalized,
                }));
            }
            s.close();
            Outcome::new(json!({"flavor": flavor, "unit": unit, "values": rows}), text, 0)
        }
        Command::Check {
            property,
            window,
            max_size,
            budget,
            flavor,
            max_parts,
            max_mult,
        } => {
            let property: Property = property.parse()?;
            let s = Session::open(require(desc)?, &digest, flavor)?;
            let group = s.group().clone();
            let window = parse_set(&group, window)?;
            let mut options = CheckOptions::with_max_size(max_size.unwrap_or(window.len()));
            options.max_parts = *max_parts;
            options.max_mult = *max_mult;
            if let Some(b) = budget {
                options.budget = *b;
            }
            let r = check_property(&s.h, property, &window, &options)?;
            let mut text = format!(
                "{} on {} (max size {}): {}, {} violation(s) in {} checks\n",
                r.property, r.window, r.max_size, r.status, r.violations, r.checked
            );
            for w in &r.witnesses {
                let sets: Vec<String> = w.sets.iter().map(ToString::to_string).collect();
                writeln!(
                    text,
                    "  witness {}{}: lhs {} > rhs {}",
                    sets.join(" "),
                    w.cover.as_ref().map(|c| format!(" with {c}")).unwrap_or_default(),
                    scaled(w.lhs, bits),
                    scaled(w.rhs, bits)
                )
                .expect("string write");
            }
            let code = status_code(r.status);
            let mut results = r.to_json(&group);
            results["budget"] = json!(options.budget);
            results["flavor"] = json!(flavor);
            s.close();
            Outcome::new(results, text, code)
        }
        Command::Shearer { cover, flavor } => {
            let s = Session::open(require(desc)?, &digest, flavor)?;
            let group = s.group().clone();
            let k = build_cover(&group, cover)?;
            let r = shearer_check(&s.h, &k)?;
            let text = format!(
                "{k}\nH(F) = {}, (1/k) sum H(K) = {}: {}\n",
                scaled(r.lhs, bits),
                scaled(r.rhs, bits),
                if r.violated { "violated" } else { "holds" }
            );
            s.close();
            Outcome::new(
                json!({"cover": k.to_json(&group), "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "violated": r.violated}),
                text,
                if r.violated { EXIT_VIOLATION } else { 0 },
            )
        }
        Command::Split { cover } => {
            let group = match desc {
                Some(d) => Group::new(d.group)?,
                None => Group::integers(),
            };
            let k = build_cover(&group, cover)?;
            let (splits, groups) = is_splitting(&k);
            let mut text = format!("{k}\n{}\n", if splits { "splitting" } else { "not splitting" });
            if let Some(gs) = &groups {
                for (i, g) in gs.iter().enumerate() {
                    let parts: Vec<String> = g.iter().map(ToString::to_string).collect();
                    writeln!(text, "  cover {}: {}", i + 1, parts.join(" ")).expect("string write");
                }
            }
            let decomposition = groups.map(|gs| {
                gs.iter()
                    .map(|g| g.iter().map(|p| group.encode_subset(p)).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            Outcome::new(
                json!({"cover": k.to_json(&group), "splitting": splits, "decomposition": decomposition}),
                text,
                if splits { 0 } else { EXIT_VIOLATION },
            )
        }
        Command::Infimum {
            window,
            max_size,
            n_max,
            flavor,
        } => {
            let s = Session::open(require(desc)?, &digest, flavor)?;
            let group = s.group().clone();
            let window = parse_set(&group, window)?;
            let r = infimum_rule_report(&s.h, &window, max_size.unwrap_or(window.len()), *n_max)?;
            let mut text = format!(
                "window infimum {} at {}\n",
                scaled(r.window_inf, bits),
                r.window_argmin
            );
            for (n, v) in &r.folner_values {
                writeln!(text, "  F_{n}: {}", scaled(*v, bits)).expect("string write");
            }
            writeln!(
                text,
                "infimum {} at {}, gap {}, stabilized {}, rule {}",
                scaled(r.inf_value, bits),
                r.argmin,
                scaled(r.gap, bits),
                r.stabilized,
                if r.violated { "violated" } else { "not violated at this scale" }
            )
            .expect("string write");
            let code = if r.violated { EXIT_VIOLATION } else { 0 };
            let results = r.to_json(&group);
            s.close();
            Outcome::new(results, text, code)
        }
        Command::Lemma {
            trials,
            n_max,
            alphabet_max,
        } => {
            let r = counting_lemma_fuzz(common.seed, *trials, *n_max, *alphabet_max)?;
            let text = format!(
                "{} instances, {} violations, {} equalities (seed {})\n",
                r.trials,
                r.violations.len(),
                r.equalities,
                r.seed
            );
            let code = if r.violations.is_empty() { 0 } else { EXIT_VIOLATION };
            Outcome::new(serde_json::to_value(&r)?, text, code)
        }
        Command::Search {
            family,
            target,
            budget,
        } => {
            let family: Family = family.parse()?;
            let target: SearchTarget = target.parse()?;
            let r = search_counterexample(family, target, *budget, common.seed, common.jobs)?;
            let mut text = format!(
                "family {family}, {} checks ({} skipped), status {:?}\n",
                r.checks, r.skipped, r.status
            );
            for f in &r.findings {
                writeln!(
                    text,
                    "  candidate {}: set {} lhs {} > rhs {}",
                    f.candidate,
                    f.set,
                    scaled(f.lhs, bits),
                    scaled(f.rhs, bits)
                )
                .expect("string write");
            }
            let code = if r.findings.is_empty() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_VIOLATION
            };
            Outcome::new(serde_json::to_value(&r)?, text, code)
        }
        Command::Reproduce { replace } => {
            let mut overrides = Vec::new();
            for r in replace {
                let (name, path) = r
                    .split_once('=')
                    .ok_or_else(|| Error::Description(format!("expected NAME=FILE, got {r:?}")))?;
                let text = std::fs::read_to_string(path).map_err(|e| Error::Description(format!("{path}: {e}")))?;
                let d = SystemDescription::from_json(&text)?;
                d.load()?;
                overrides.push((name.to_string(), d));
            }
            let rows = reproduce(&|name| match overrides.iter().find(|(n, _)| n == name) {
                Some((_, d)) => Ok(d.clone()),
                None => preset(name),
            })?;
            let width = rows.iter().map(|r| r.id.len()).max().unwrap_or(0);
            let mut text = String::new();
            for r in &rows {
                writeln!(
                    text,
                    "{} {:width$}  expected {}  computed {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.expected,
                    r.computed
                )
                .expect("string write");
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            writeln!(text, "{} of {} rows pass", rows.len() - failed, rows.len()).expect("string write");
            Outcome::new(
                json!({"rows": rows, "failed": failed}),
                text,
                if failed == 0 { 0 } else { EXIT_VIOLATION },
            )
        }
    };
    Ok((digest, outcome))
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Pass => 0,
        Status::Fail => EXIT_VIOLATION,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn build_cover(group: &Group, args: &CoverArgs) -> Result<KCover> {
    let base = parse_set(group, &args.base)?;
    match &args.shifted {
        Some(shape) => {
            if !args.parts.is_empty() {
                return Err(Error::Description("--shifted and --part are exclusive".into()));
            }
            shifted_cover(group, &parse_set(group, shape)?, &base)
        }
        None => KCover::new(
            base,
            args.parts.iter().map(|p| parse_set(group, p)).collect::<Result<_>>()?,
        ),
    }
}

/// `all`, `ball:R`, `box:N`, `a..b`, `a..=b` (integers only), or a JSON
/// array of elements.
fn parse_set(group: &Group, text: &str) -> Result<Subset> {
    let t = text.trim();
    let bad = || Error::Description(format!("cannot read the set {t:?}"));
    if t == "all" {
        return group
            .elements()
            .ok_or_else(|| Error::Description("`all` needs a finite group".into()));
    }
    if let Some(r) = t.strip_prefix("ball:") {
        return group.ball(r.parse().map_err(|_| bad())?);
    }
    if let Some(n) = t.strip_prefix("box:") {
        return group.folner(n.parse().map_err(|_| bad())?);
    }
    if let Some((a, b)) = t.split_once("..") {
        if !group.is_integers() {
            return Err(Error::Description("ranges need the group Z".into()));
        }
        let (b, inclusive) = match b.strip_prefix('=') {
            Some(b) => (b, true),
            None => (b, false),
        };
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        return Ok(Subset::interval(a, if inclusive { b + 1 } else { b }));
    }
    let v: Value = serde_json::from_str(t).map_err(|_| bad())?;
    group.parse_subset(&v)
}
