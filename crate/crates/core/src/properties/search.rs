//! Seeded random search for violations of Shearer's inequality or of the
//! infimum rule.
//!
//! Candidate `i` is drawn from its own ChaCha stream, so the candidates and
//! the merged findings do not depend on the number of worker threads.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covers::{enumerate_kcovers, shearer_check, shifted_cover, KCover, TOLERANCE};
use crate::description::{preset, ObservableSpec, SystemDescription};
use crate::entropy::Flavor;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, Subset};
use crate::properties::infimum::infimum_rule_report;
use crate::symbolic::{SubshiftSpec, WordSpec};

const BATCH: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// The three-point example with its non-disjoint cover, tested on
    /// 2-covers of the whole group by proper subsets.
    Z3,
    /// Random `Z`-SFTs with partitions of the alphabet as covers.
    Disjoint,
    /// Random `Z`-SFTs on three symbols with non-disjoint time-zero covers.
    RandomSft,
    /// Random systems as above tested on shifted `{0,1,3}` covers.
    Shifted013,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Z3, Family::Disjoint, Family::RandomSft, Family::Shifted013];

    pub fn name(self) -> &'static str {
        match self {
            Family::Z3 => "z3",
            Family::Disjoint => "disjoint",
            Family::RandomSft => "random-sft",
            Family::Shifted013 => "shifted-013",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Description(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchTarget {
    Sh,
    InfimumRule,
}

impl FromStr for SearchTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Sh" | "sh" => Ok(SearchTarget::Sh),
            "infimum_rule" | "infimum-rule" => Ok(SearchTarget::InfimumRule),
            other => Err(Error::Description(format!("unknown search target {other:?}"))),
        }
    }
}

/// A re-verifiable violation: the system, the sets involved and both sides
/// of the violated inequality (`lhs > rhs`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub candidate: u64,
    pub target: SearchTarget,
    pub system: SystemDescription,
    /// The covered set for Sh, the window for the infimum rule.
    pub set: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub family: Family,
    pub target: SearchTarget,
    pub seed: u64,
    pub budget: u64,
    /// Candidates evaluated, one inequality each.
    pub checks: u64,
    /// Candidates whose evaluation hit a resource limit.
    pub skipped: u64,
    pub status: SearchStatus,
    pub findings: Vec<Finding>,
}

/// Evaluates candidates in batches until a batch yields a finding or the
/// budget is spent.
pub fn search_counterexample(
    family: Family,
    target: SearchTarget,
    budget: u64,
    seed: u64,
    jobs: usize,
) -> Result<SearchReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let mut report = SearchReport {
        family,
        target,
        seed,
        budget,
        checks: 0,
        skipped: 0,
        status: SearchStatus::Inconclusive,
        findings: Vec::new(),
    };
    let mut next = 0u64;
    while next < budget && report.findings.is_empty() {
        let end = (next + BATCH).min(budget);
        let outcomes: Vec<Result<Outcome>> =
            pool.install(|| (next..end).into_par_iter().map(|i| evaluate(family, target, seed, i)).collect());
        for outcome in outcomes {
            report.checks += 1;
            match outcome {
                Ok(Outcome::Finding(f)) => report.findings.push(*f),
                Ok(Outcome::Clean) => {}
                Err(Error::Resource(_)) => report.skipped += 1,
                Err(e) => return Err(e),
            }
        }
        next = end;
    }
    if !report.findings.is_empty() {
        report.status = SearchStatus::Found;
    }
    Ok(report)
}

enum Outcome {
    Clean,
    Finding(Box<Finding>),
}

fn candidate_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn evaluate(family: Family, target: SearchTarget, seed: u64, i: u64) -> Result<Outcome> {
    let mut rng = candidate_rng(seed, i);
    let system = match family {
        Family::Z3 => preset(if rng.gen_bool(0.5) { "z3_example" } else { "z3_example_5pt" })?,
        Family::Disjoint => {
            let q = rng.gen_range(2..=3);
            random_sft(&mut rng, q, true)
        }
        Family::RandomSft | Family::Shifted013 => random_sft(&mut rng, 3, false),
    };
    let loaded = match system.load() {
        Ok(s) => s,
        // random forbidden words may leave nothing
        Err(Error::EmptySubshift) => return Ok(Outcome::Clean),
        Err(e) => return Err(e),
    };
    let group = loaded.group().clone();
    let h = loaded.entropy(Flavor::Topological)?;
    match target {
        SearchTarget::Sh => {
            let cover = match family {
                Family::Shifted013 => {
                    let n = rng.gen_range(4..=8);
                    shifted_cover(&group, &Subset::ints([0, 1, 3]), &Subset::interval(0, n))?
                }
                Family::Z3 => {
                    let all = group.elements().expect("finite group");
                    let covers: Vec<KCover> = enumerate_kcovers(&all, 2, 4, 2, 1_000_000)?
                        .into_iter()
                        .filter(|c| c.parts().iter().all(|p| p != &all))
                        .collect();
                    covers.choose(&mut rng).expect("proper 2-covers exist").clone()
                }
                _ => random_kcover(&mut rng, &Subset::interval(0, 5))?,
            };
            let r = shearer_check(&h, &cover)?;
            if !r.violated {
                return Ok(Outcome::Clean);
            }
            Ok(Outcome::Finding(Box::new(Finding {
                candidate: i,
                target,
                system,
                set: group.encode_subset(cover.base()),
                cover: Some(cover.to_json(&group)),
                max_size: None,
                n_max: None,
                lhs: r.lhs,
                rhs: r.rhs,
            })))
        }
        SearchTarget::InfimumRule => {
            let (window, max_size, n_max) = match group.elements() {
                Some(all) => {
                    let n = all.len();
                    (all, n, 3)
                }
                None => (Subset::interval(0, 5), 4, 6),
            };
            let r = infimum_rule_report(&h, &window, max_size, n_max)?;
            if !r.violated {
                return Ok(Outcome::Clean);
            }
            Ok(Outcome::Finding(Box::new(Finding {
                candidate: i,
                target,
                system,
                set: group.encode_subset(&window),
                cover: None,
                max_size: Some(max_size),
                n_max: Some(n_max),
                lhs: r.limsup_estimate,
                rhs: r.inf_value,
            })))
        }
    }
}

/// A `Z`-SFT with a few random forbidden words of length two or three and a
/// random time-zero cover (a partition of the alphabet when `disjoint`).
fn random_sft(rng: &mut ChaCha8Rng, q: usize, disjoint: bool) -> SystemDescription {
    let names: Vec<String> = (0..q).map(|s| ((b'a' + s as u8) as char).to_string()).collect();
    let count = rng.gen_range(0..=3);
    let mut forbidden: Vec<String> = (0..count)
        .map(|_| {
            let len = rng.gen_range(2..=3);
            (0..len).map(|_| names[rng.gen_range(0..q)].as_str()).collect()
        })
        .collect();
    forbidden.sort();
    forbidden.dedup();

    let cells: Vec<Vec<String>> = if disjoint {
        let mut cells = vec![Vec::new(); q];
        for name in &names {
            cells[rng.gen_range(0..q)].push(name.clone());
        }
        cells.retain(|c| !c.is_empty());
        cells
    } else {
        let count = rng.gen_range(2..=4);
        let mut cells: Vec<Vec<String>> = (0..count)
            .map(|_| {
                let mut c: Vec<String> = names.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                if c.is_empty() {
                    c.push(names.choose(rng).expect("nonempty").clone());
                }
                c
            })
            .collect();
        for name in &names {
            if !cells.iter().any(|c| c.contains(name)) {
                let i = rng.gen_range(0..cells.len());
                cells[i].push(name.clone());
                cells[i].sort();
            }
        }
        cells
    };
    SystemDescription {
        group: GroupSpec::ZPower { d: 1 },
        subshift: SubshiftSpec::ZSft {
            alphabet: names,
            forbidden: forbidden.into_iter().map(WordSpec::Text).collect(),
        },
        observable: ObservableSpec::TimeZeroCover { cells },
        partition: None,
        measure: None,
    }
}

/// One of the enumerated k-covers (at most four parts, multiplicity two)
/// of a random nonempty subset of `window`.
fn random_kcover(rng: &mut ChaCha8Rng, window: &Subset) -> Result<KCover> {
    let n = window.len().min(20);
    let mask = loop {
        let m = rng.gen_range(1u64..1 << n);
        if m.count_ones() <= 4 {
            break m;
        }
    };
    let base = window.select(mask);
    let covers = enumerate_kcovers(&base, 1, 4, 2, 1_000_000)?;
    Ok(covers.choose(rng).expect("the base covers itself").clone())
}

/// Recomputes a finding from its description and checks that both sides
/// match the recorded values to 1e-12 and still violate the inequality.
pub fn verify_finding(finding: &Finding) -> Result<bool> {
    let system = finding.system.load()?;
    let group = system.group().clone();
    let h = system.entropy(Flavor::Topological)?;
    let set = group.parse_subset(&finding.set)?;
    let (lhs, rhs) = match finding.target {
        SearchTarget::Sh => {
            let cover = finding
                .cover
                .as_ref()
                .ok_or_else(|| Error::Description("finding has no cover".into()))?;
            let cover = parse_kcover(&group, &set, cover)?;
            let r = shearer_check(&h, &cover)?;
            (r.lhs, r.rhs)
        }
        SearchTarget::InfimumRule => {
            let r = infimum_rule_report(
                &h,
                &set,
                finding.max_size.unwrap_or(set.len()),
                finding.n_max.unwrap_or(1),
            )?;
            if !r.violated {
                return Ok(false);
            }
            (r.limsup_estimate, r.inf_value)
        }
    };
    Ok((lhs - finding.lhs).abs() <= 1e-12 && (rhs - finding.rhs).abs() <= 1e-12 && lhs > rhs + TOLERANCE)
}

/// Reads the `{"base", "k", "parts": [{"set", "multiplicity"}]}` form.
pub fn parse_kcover(group: &crate::group::Group, base: &Subset, v: &Value) -> Result<KCover> {
    let parts = v["parts"]
        .as_array()
        .ok_or_else(|| Error::Description("cover has no parts".into()))?;
    let mut out = Vec::new();
    for p in parts {
        let set = group.parse_subset(&p["set"])?;
        let m = p["multiplicity"].as_u64().unwrap_or(1);
        out.extend(std::iter::repeat_n(set, m as usize));
    }
    let cover = KCover::new(base.clone(), out)?;
    if v.get("k").and_then(Value::as_u64).is_some_and(|k| k as usize != cover.k()) {
        return Err(Error::InvalidCover("recorded k differs from the coverage count".into()));
    }
    Ok(cover)
}

pub fn report_json(report: &SearchReport) -> Value {
    json!(report)
}
