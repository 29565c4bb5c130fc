//! JSON system descriptions and named presets.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::entropy::{Cell, Cover, EntropyFunction, Flavor, Observable};
use crate::error::{Error, Result};
use crate::group::{Group, GroupSpec, Subset};
use crate::measure::{Measure, MeasureSpec, Partition};
use crate::symbolic::{Subshift, SubshiftSpec, WordSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelSpec {
    pub pattern: WordSpec,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub name: String,
    pub patterns: Vec<WordSpec>,
}

/// A partition or a cover on a finite support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    /// The partition by the symbol at the identity.
    TimeZero,
    /// The partition by the whole pattern on `support`.
    Block { support: Value },
    Partition { support: Value, labels: Vec<LabelSpec> },
    /// Cells are sets of symbols read at the identity.
    TimeZeroCover { cells: Vec<Vec<String>> },
    Cover { support: Value, cells: Vec<CellSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub group: GroupSpec,
    pub subshift: SubshiftSpec,
    pub observable: ObservableSpec,
    /// Partition used by the Shannon flavor when `observable` is a
    /// non-disjoint cover.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
}

impl SystemDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Description(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }

    pub fn load(&self) -> Result<System> {
        System::load(self.clone())
    }
}

/// A validated description.
#[derive(Clone, Debug)]
pub struct System {
    pub description: SystemDescription,
    pub subshift: Arc<Subshift>,
    pub observable: Observable,
    pub partition: Option<Partition>,
    pub measure: Option<Measure>,
}

impl System {
    pub fn load(description: SystemDescription) -> Result<Self> {
        let group = Group::new(description.group.clone())?;
        let subshift = Arc::new(Subshift::new(group, &description.subshift)?);
        let observable = build_observable(&subshift, &description.observable)?;
        let partition = description
            .partition
            .as_ref()
            .map(|spec| build_observable(&subshift, spec)?.as_partition(&subshift))
            .transpose()?;
        let measure = description
            .measure
            .as_ref()
            .map(|spec| Measure::new(spec, &subshift))
            .transpose()?;
        Ok(System {
            description,
            subshift,
            observable,
            partition,
            measure,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        System::load(SystemDescription::from_json(text)?)
    }

    pub fn group(&self) -> &Group {
        self.subshift.group()
    }

    /// The entropy set function of the requested flavor. The Shannon flavor
    /// uses `partition` when present, else the observable itself.
    pub fn entropy(&self, flavor: Flavor) -> Result<EntropyFunction> {
        match flavor {
            Flavor::Topological => Ok(EntropyFunction::topological(
                self.subshift.clone(),
                self.observable.as_cover(&self.subshift)?,
            )),
            Flavor::Shannon => {
                let measure = self
                    .measure
                    .clone()
                    .ok_or_else(|| Error::InvalidMeasure("the shannon flavor needs a measure".into()))?;
                let partition = match &self.partition {
                    Some(p) => p.clone(),
                    None => self.observable.as_partition(&self.subshift)?,
                };
                EntropyFunction::shannon(self.subshift.clone(), partition, measure)
            }
        }
    }
}

fn build_observable(subshift: &Subshift, spec: &ObservableSpec) -> Result<Observable> {
    let group = subshift.group();
    let alphabet = subshift.alphabet();
    Ok(match spec {
        ObservableSpec::TimeZero => Observable::Partition(Partition::time_zero(subshift)?),
        ObservableSpec::Block { support } => {
            Observable::Partition(Partition::block(subshift, nonempty(group.parse_subset(support)?)?)?)
        }
        ObservableSpec::Partition { support, labels } => {
            let support = nonempty(group.parse_subset(support)?)?;
            let entries = labels
                .iter()
                .map(|l| Ok((l.pattern.resolve(alphabet)?, l.label.clone())))
                .collect::<Result<Vec<_>>>()?;
            Observable::Partition(Partition::new(subshift, support, entries)?)
        }
        ObservableSpec::TimeZeroCover { cells } => {
            let cells = cells
                .iter()
                .map(|names| {
                    let symbols = names
                        .iter()
                        .map(|n| alphabet.symbol(n))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((names.concat(), symbols))
                })
                .collect::<Result<Vec<_>>>()?;
            Observable::Cover(Cover::time_zero(subshift, cells)?)
        }
        ObservableSpec::Cover { support, cells } => {
            let support = nonempty(group.parse_subset(support)?)?;
            let cells = cells
                .iter()
                .map(|c| {
                    Ok(Cell {
                        name: c.name.clone(),
                        rows: c
                            .patterns
                            .iter()
                            .map(|p| p.resolve(alphabet))
                            .collect::<Result<BTreeSet<_>>>()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Observable::Cover(Cover::new(subshift, support, cells)?)
        }
    })
}

fn nonempty(s: Subset) -> Result<Subset> {
    if s.is_empty() {
        Err(Error::Support("empty observable support".into()))
    } else {
        Ok(s)
    }
}

pub const PRESETS: [&str; 5] = ["golden_mean", "z3_example", "z3_example_5pt", "f2_bernoulli", "bernoulli_z"];

pub fn preset(name: &str) -> Result<SystemDescription> {
    let value = match name {
        "golden_mean" => json!({
            "group": {"kind": "z_power", "d": 1},
            "subshift": {"kind": "z_sft", "alphabet": ["0", "1"], "forbidden": ["11"]},
            "observable": {"kind": "time_zero"},
            "measure": {"kind": "parry"}
        }),
        "z3_example" | "z3_example_5pt" => {
            let mut configs = vec![["a", "a", "a"], ["b", "b", "b"], ["c", "c", "c"], ["a", "b", "c"], ["b", "c", "a"], ["c", "a", "b"]];
            if name == "z3_example_5pt" {
                configs.remove(2);
            }
            let n = configs.len();
            json!({
                "group": {"kind": "cyclic", "n": 3},
                "subshift": {"kind": "explicit_finite", "alphabet": ["a", "b", "c"], "configurations": configs},
                "observable": {"kind": "time_zero_cover", "cells": [["a", "b"], ["b", "c"], ["a", "c"]]},
                "partition": {"kind": "time_zero"},
                "measure": {"kind": "explicit", "probs": vec![1.0 / n as f64; n]}
            })
        }
        "f2_bernoulli" => json!({
            "group": {"kind": "free", "rank": 2},
            "subshift": {"kind": "full_shift", "alphabet": ["-1", "1"]},
            "observable": {"kind": "time_zero"},
            "measure": {"kind": "bernoulli", "probs": [0.5, 0.5]}
        }),
        "bernoulli_z" => json!({
            "group": {"kind": "z_power", "d": 1},
            "subshift": {"kind": "full_shift", "alphabet": ["0", "1"]},
            "observable": {"kind": "time_zero"},
            "measure": {"kind": "bernoulli", "probs": [0.5, 0.5]}
        }),
        other => {
            return Err(Error::Description(format!(
                "unknown preset {other:?}; known presets: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(serde_json::from_value(value)?)
}
