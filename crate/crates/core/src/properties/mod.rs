//! Exhaustive checks of the defining inequalities over a window.

pub mod infimum;
pub mod lemma;
pub mod search;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covers::{enumerate_kcovers, KCover, TOLERANCE};
use crate::entropy::EntropyFunction;
use crate::error::{Error, Result};
use crate::group::{Group, Subset};

pub use infimum::{folner_profile, infimum_estimate, infimum_rule_report, InfimumReport};
pub use lemma::{counting_lemma_check, counting_lemma_fuzz, FuzzReport, LemmaReport};
pub use search::{search_counterexample, verify_finding, Family, Finding, SearchReport, SearchTarget};

/// Largest window the checkers accept.
pub const MAX_WINDOW: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    M,
    S,
    Sh,
    SS,
    MC,
    CS,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::M,
        Property::S,
        Property::Sh,
        Property::SS,
        Property::MC,
        Property::CS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::M => "M",
            Property::S => "S",
            Property::Sh => "Sh",
            Property::SS => "SS",
            Property::MC => "MC",
            Property::CS => "CS",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Description(format!("unknown property {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// One violated instance. The meaning of `sets` depends on the property:
/// `[F, F′]` for M, S and SS, `[F, F′, F″]` for MC and CS, `[F]` for Sh
/// (with the cover alongside).
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub sets: Vec<Subset>,
    pub cover: Option<KCover>,
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    pub fn excess(&self) -> f64 {
        self.lhs - self.rhs
    }

    pub fn to_json(&self, group: &Group) -> Value {
        let mut v = json!({
            "sets": self.sets.iter().map(|s| group.encode_subset(s)).collect::<Vec<_>>(),
            "lhs": self.lhs,
            "rhs": self.rhs,
        });
        if let Some(c) = &self.cover {
            v["cover"] = c.to_json(group);
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub max_size: usize,
    /// Maximum number of inequality instances to evaluate.
    pub budget: u64,
    pub max_witnesses: usize,
    pub max_parts: usize,
    pub max_mult: usize,
    pub cover_cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_size: 4,
            budget: 10_000_000,
            max_witnesses: 32,
            max_parts: 6,
            max_mult: 2,
            cover_cap: 1_000_000,
        }
    }
}

impl CheckOptions {
    pub fn with_max_size(max_size: usize) -> Self {
        CheckOptions {
            max_size,
            ..CheckOptions::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub property: Property,
    pub window: Subset,
    pub max_size: usize,
    pub status: Status,
    /// First violations in enumeration order, at most `max_witnesses`.
    pub witnesses: Vec<Witness>,
    pub violations: u64,
    pub checked: u64,
    pub tolerance: f64,
}

impl PropertyReport {
    pub fn to_json(&self, group: &Group) -> Value {
        json!({
            "property": self.property,
            "window": group.encode_subset(&self.window),
            "max_size": self.max_size,
            "status": self.status,
            "violations": self.violations,
            "checked": self.checked,
            "tolerance": self.tolerance,
            "witnesses": self.witnesses.iter().map(|w| w.to_json(group)).collect::<Vec<_>>(),
        })
    }
}

/// Both sides of the property's inequality, `lhs ≤ rhs` when it holds.
pub fn sides(h: &EntropyFunction, property: Property, sets: &[Subset], cover: Option<&KCover>) -> Result<(f64, f64)> {
    let arity = match property {
        Property::Sh => 1,
        Property::M | Property::S | Property::SS => 2,
        Property::MC | Property::CS => 3,
    };
    if sets.len() != arity {
        return Err(Error::InvalidCover(format!("{property} needs {arity} sets")));
    }
    Ok(match property {
        Property::M => (h.value(&sets[0])?, h.value(&sets[1])?),
        Property::S => (
            h.value(&sets[0].union(&sets[1]))?,
            h.value(&sets[0])? + h.value(&sets[1])?,
        ),
        Property::SS => (
            h.value(&sets[0].union(&sets[1]))? + h.value(&sets[0].intersection(&sets[1]))?,
            h.value(&sets[0])? + h.value(&sets[1])?,
        ),
        Property::MC => (
            h.conditional(&sets[0], &sets[2])?,
            h.conditional(&sets[0], &sets[1])?,
        ),
        Property::CS => (
            h.conditional(&sets[0].union(&sets[1]), &sets[2])?,
            h.conditional(&sets[0], &sets[2])? + h.conditional(&sets[1], &sets[2])?,
        ),
        Property::Sh => {
            let cover = cover.ok_or_else(|| Error::InvalidCover("Sh needs a cover".into()))?;
            if cover.base() != &sets[0] {
                return Err(Error::InvalidCover("cover base differs from the set".into()));
            }
            let r = crate::covers::shearer_check(h, cover)?;
            (r.lhs, r.rhs)
        }
    })
}

/// Checks one property exhaustively over the subsets of `window`: every set
/// that enters the inequality has at most `max_size` elements.
pub fn check_property(
    h: &EntropyFunction,
    property: Property,
    window: &Subset,
    options: &CheckOptions,
) -> Result<PropertyReport> {
    h.group().check_subset(window)?;
    if window.is_empty() {
        return Err(Error::Support("empty window".into()));
    }
    if window.len() > MAX_WINDOW {
        return Err(Error::Resource(format!(
            "window of {} elements exceeds {MAX_WINDOW}",
            window.len()
        )));
    }
    let mut run = Run {
        h,
        window,
        options,
        values: HashMap::new(),
        report: PropertyReport {
            property,
            window: window.clone(),
            max_size: options.max_size,
            status: Status::Pass,
            witnesses: Vec::new(),
            violations: 0,
            checked: 0,
            tolerance: TOLERANCE,
        },
    };
    let finished = match property {
        Property::M => run.monotone()?,
        Property::S | Property::SS => run.pairs(property)?,
        Property::MC => run.monotone_condition()?,
        Property::CS => run.conditional_subadditive()?,
        Property::Sh => run.shearer()?,
    };
    let mut report = run.report;
    report.status = if report.violations > 0 {
        Status::Fail
    } else if finished {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    Ok(report)
}

struct Run<'a> {
    h: &'a EntropyFunction,
    window: &'a Subset,
    options: &'a CheckOptions,
    values: HashMap<u64, f64>,
    report: PropertyReport,
}

impl Run<'_> {
    /// Masks of the nonempty subsets with at most `max_size` elements, in
    /// canonical order.
    fn masks(&self) -> Vec<u64> {
        let n = self.window.len();
        (1..=self.options.max_size.min(n))
            .flat_map(|k| {
                (0..n)
                    .combinations(k)
                    .map(|c| c.into_iter().fold(0u64, |m, i| m | 1 << i))
            })
            .collect()
    }

    fn fits(&self, mask: u64) -> bool {
        mask.count_ones() as usize <= self.options.max_size
    }

    fn value(&mut self, mask: u64) -> Result<f64> {
        if mask == 0 {
            return Ok(0.0);
        }
        if let Some(&v) = self.values.get(&mask) {
            return Ok(v);
        }
        let v = self.h.value(&self.window.select(mask))?;
        self.values.insert(mask, v);
        Ok(v)
    }

    /// Records one instance; returns false once the budget is spent.
    fn record(&mut self, masks: &[u64], cover: Option<&KCover>, lhs: f64, rhs: f64) -> bool {
        self.report.checked += 1;
        if lhs > rhs + TOLERANCE {
            self.report.violations += 1;
            if self.report.witnesses.len() < self.options.max_witnesses {
                self.report.witnesses.push(Witness {
                    sets: masks.iter().map(|&m| self.window.select(m)).collect(),
                    cover: cover.cloned(),
                    lhs,
                    rhs,
                });
            }
        }
        self.report.checked < self.options.budget
    }

    fn monotone(&mut self) -> Result<bool> {
        let masks = self.masks();
        for &a in &masks {
            for &b in &masks {
                if a != b && a & b == a {
                    let (lhs, rhs) = (self.value(a)?, self.value(b)?);
                    if !self.record(&[a, b], None, lhs, rhs) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn pairs(&mut self, property: Property) -> Result<bool> {
        let masks = self.masks();
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i + 1..] {
                if !self.fits(a | b) {
                    continue;
                }
                let union = self.value(a | b)?;
                let inter = if property == Property::SS {
                    self.value(a & b)?
                } else {
                    0.0
                };
                let rhs = self.value(a)? + self.value(b)?;
                if !self.record(&[a, b], None, union + inter, rhs) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `H(F|F′) ≥ H(F|F″)` for `F′ ⊊ F″`, `F′` possibly empty.
    fn monotone_condition(&mut self) -> Result<bool> {
        let masks = self.masks();
        let conditions: Vec<u64> = std::iter::once(0).chain(masks.iter().copied()).collect();
        for &f in &masks {
            for &small in &conditions {
                for &big in &masks {
                    if small == big || small & big != small || !self.fits(f | big) {
                        continue;
                    }
                    let lhs = self.value(f | big)? - self.value(big)?;
                    let rhs = self.value(f | small)? - self.value(small)?;
                    if !self.record(&[f, small, big], None, lhs, rhs) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `H(F ∪ F′|F″) ≤ H(F|F″) + H(F′|F″)`, `F″` possibly empty.
    fn conditional_subadditive(&mut self) -> Result<bool> {
        let masks = self.masks();
        let conditions: Vec<u64> = std::iter::once(0).chain(masks.iter().copied()).collect();
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i + 1..] {
                for &c in &conditions {
                    if !self.fits(a | b | c) {
                        continue;
                    }
                    let given = self.value(c)?;
                    let lhs = self.value(a | b | c)? - given;
                    let rhs = self.value(a | c)? + self.value(b | c)? - 2.0 * given;
                    if !self.record(&[a, b, c], None, lhs, rhs) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn shearer(&mut self) -> Result<bool> {
        for f in self.masks() {
            let base = self.window.select(f);
            let covers = enumerate_kcovers(
                &base,
                1,
                self.options.max_parts,
                self.options.max_mult,
                self.options.cover_cap,
            )?;
            let lhs = self.value(f)?;
            for cover in covers {
                let mut sum = 0.0;
                for part in cover.parts() {
                    sum += self.h.value(part)?;
                }
                let rhs = sum / cover.k() as f64;
                if !self.record(&[f], Some(&cover), lhs, rhs) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Outcomes of all six checks on one window and whether they respect
/// SS ⇒ Sh ⇒ S and SS ⇔ MC ⇔ CS.
#[derive(Clone, Debug)]
pub struct ImplicationReport {
    pub reports: Vec<PropertyReport>,
    pub monotone: bool,
    pub consistent: bool,
    pub problems: Vec<String>,
}

impl ImplicationReport {
    pub fn status(&self, p: Property) -> Status {
        self.reports
            .iter()
            .find(|r| r.property == p)
            .map(|r| r.status)
            .expect("all properties checked")
    }
}

pub fn implication_consistency(h: &EntropyFunction, window: &Subset, options: &CheckOptions) -> Result<ImplicationReport> {
    let reports = Property::ALL
        .into_iter()
        .map(|p| check_property(h, p, window, options))
        .collect::<Result<Vec<_>>>()?;
    let status = |p: Property| reports.iter().find(|r| r.property == p).expect("checked").status;
    let monotone = status(Property::M) == Status::Pass;
    let mut problems = Vec::new();
    if monotone {
        let implies = |a: Property, b: Property, problems: &mut Vec<String>| {
            if status(a) == Status::Pass && status(b) == Status::Fail {
                problems.push(format!("{a} passes but {b} fails"));
            }
        };
        implies(Property::SS, Property::Sh, &mut problems);
        implies(Property::Sh, Property::S, &mut problems);
        implies(Property::SS, Property::S, &mut problems);
        let trio = [Property::SS, Property::MC, Property::CS];
        let conclusive: Vec<_> = trio
            .iter()
            .filter(|&&p| status(p) != Status::Inconclusive)
            .map(|&p| (p, status(p)))
            .collect();
        if conclusive.iter().map(|(_, s)| s).dedup().count() > 1 {
            problems.push(format!(
                "SS, MC and CS disagree: {}",
                conclusive.iter().map(|(p, s)| format!("{p}={s}")).join(", ")
            ));
        }
    }
    Ok(ImplicationReport {
        consistent: problems.is_empty(),
        reports,
        monotone,
        problems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{Cover, Flavor, Observable};
    use crate::group::Element;
    use crate::measure::{Measure, MeasureSpec, Partition};
    use crate::symbolic::{Subshift, SubshiftSpec, WordSpec};
    use std::sync::Arc;

    fn golden_htop() -> EntropyFunction {
        let x = Arc::new(
            Subshift::new(
                Group::integers(),
                &SubshiftSpec::ZSft {
                    alphabet: vec!["0".into(), "1".into()],
                    forbidden: vec![WordSpec::Text("11".into())],
                },
            )
            .unwrap(),
        );
        let p = Partition::time_zero(&x).unwrap();
        EntropyFunction::from_observable(x, Flavor::Topological, &Observable::Partition(p), None).unwrap()
    }

    fn z3_htop() -> EntropyFunction {
        let spec: SubshiftSpec = serde_json::from_value(serde_json::json!({
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [["a","a","a"], ["b","b","b"], ["c","c","c"],
                               ["a","b","c"], ["b","c","a"], ["c","a","b"]]
        }))
        .unwrap();
        let x = Arc::new(Subshift::new(Group::cyclic(3).unwrap(), &spec).unwrap());
        let cover = Cover::time_zero(
            &x,
            vec![("ab".into(), vec![0, 1]), ("bc".into(), vec![1, 2]), ("ac".into(), vec![0, 2])],
        )
        .unwrap();
        EntropyFunction::topological(x, cover)
    }

    fn z3_window() -> Subset {
        Subset::new((0..3).map(Element::Residue))
    }

    /// Direct scan over all tuples of subsets (empty included) checking each
    /// inequality as written, with no size restriction.
    fn naive_fails(h: &EntropyFunction, p: Property, window: &Subset) -> bool {
        let n = window.len();
        let all: Vec<Subset> = (0..1u64 << n).map(|m| window.select(m)).collect();
        let v = |s: &Subset| h.value(s).unwrap();
        let bad = |l: f64, r: f64| l > r + TOLERANCE;
        match p {
            Property::M => all.iter().any(|a| all.iter().any(|b| a.is_subset_of(b) && bad(v(a), v(b)))),
            Property::S => all.iter().any(|a| all.iter().any(|b| bad(v(&a.union(b)), v(a) + v(b)))),
            Property::SS => all
                .iter()
                .any(|a| all.iter().any(|b| bad(v(&a.union(b)) + v(&a.intersection(b)), v(a) + v(b)))),
            Property::MC => all.iter().any(|f| {
                all.iter().any(|s| {
                    all.iter().any(|b| {
                        s.is_subset_of(b) && bad(v(&f.union(b)) - v(b), v(&f.union(s)) - v(s))
                    })
                })
            }),
            Property::CS => all.iter().any(|a| {
                all.iter().any(|b| {
                    all.iter().any(|c| {
                        bad(
                            v(&a.union(b).union(c)) - v(c),
                            v(&a.union(c)) + v(&b.union(c)) - 2.0 * v(c),
                        )
                    })
                })
            }),
            Property::Sh => all.iter().filter(|f| !f.is_empty()).any(|f| {
                enumerate_kcovers(f, 1, 6, 2, 1_000_000)
                    .unwrap()
                    .iter()
                    .any(|c| bad(v(f), c.parts().iter().map(v).sum::<f64>() / c.k() as f64))
            }),
        }
    }

    #[test]
    fn golden_mean_strong_subadditivity_witness() {
        let h = golden_htop();
        let r = check_property(&h, Property::SS, &Subset::interval(-1, 2), &CheckOptions::with_max_size(3)).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.violations, 1);
        let w = &r.witnesses[0];
        assert_eq!(w.sets, vec![Subset::ints([-1, 0]), Subset::ints([0, 1])]);
        assert!((w.lhs - 10f64.ln()).abs() < 1e-12);
        assert!((w.rhs - 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn z3_shearer_witness() {
        let h = z3_htop();
        let r = check_property(&h, Property::Sh, &z3_window(), &CheckOptions::with_max_size(3)).unwrap();
        assert_eq!(r.status, Status::Fail);
        let tri: Vec<Subset> = [[0, 1], [1, 2], [0, 2]]
            .iter()
            .map(|p| Subset::new(p.iter().map(|&r| Element::Residue(r))))
            .collect();
        let tri = KCover::new(z3_window(), tri).unwrap();
        assert!(r.witnesses.iter().any(|w| w.cover.as_ref() == Some(&tri)));
    }

    #[test]
    fn checkers_agree_with_naive_scan() {
        let cases = [
            (golden_htop(), Subset::interval(-1, 2)),
            (golden_htop(), Subset::ints([0, 2, 3])),
            (z3_htop(), z3_window()),
        ];
        for (h, window) in &cases {
            for p in Property::ALL {
                let r = check_property(h, p, window, &CheckOptions::with_max_size(window.len())).unwrap();
                assert_ne!(r.status, Status::Inconclusive);
                assert_eq!(r.status == Status::Fail, naive_fails(h, p, window), "{p} on {window}");
                for w in &r.witnesses {
                    let (l, rr) = sides(h, p, &w.sets, w.cover.as_ref()).unwrap();
                    assert_eq!((l, rr), (w.lhs, w.rhs));
                }
            }
        }
    }

    #[test]
    fn implications_are_consistent() {
        let r = implication_consistency(&golden_htop(), &Subset::interval(-1, 2), &CheckOptions::with_max_size(3)).unwrap();
        assert!(r.consistent, "{:?}", r.problems);
        assert_eq!(r.status(Property::SS), Status::Fail);
        assert_eq!(r.status(Property::Sh), Status::Pass);
        assert_eq!(r.status(Property::S), Status::Pass);

        let r = implication_consistency(&z3_htop(), &z3_window(), &CheckOptions::with_max_size(3)).unwrap();
        assert!(r.consistent, "{:?}", r.problems);
        assert_eq!(r.status(Property::Sh), Status::Fail);
        assert_eq!(r.status(Property::SS), Status::Fail);
        assert_eq!(r.status(Property::S), Status::Pass);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let h = golden_htop();
        let options = CheckOptions {
            budget: 3,
            ..CheckOptions::with_max_size(3)
        };
        let r = check_property(&h, Property::S, &Subset::interval(-1, 2), &options).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
    }

    #[test]
    fn shannon_parry_passes_everything() {
        let x = Arc::new(
            Subshift::new(
                Group::integers(),
                &SubshiftSpec::ZSft {
                    alphabet: vec!["0".into(), "1".into()],
                    forbidden: vec![WordSpec::Text("11".into())],
                },
            )
            .unwrap(),
        );
        let m = Measure::new(&MeasureSpec::Parry, &x).unwrap();
        let h = EntropyFunction::shannon(x.clone(), Partition::time_zero(&x).unwrap(), m).unwrap();
        let r = implication_consistency(&h, &Subset::interval(0, 4), &CheckOptions::with_max_size(4)).unwrap();
        assert!(r.consistent);
        assert!(r.reports.iter().all(|r| r.status == Status::Pass));
    }
}
