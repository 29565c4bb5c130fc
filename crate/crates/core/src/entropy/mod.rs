//! Entropy set functions `F ↦ H(F)` on finite subsets of the group.

pub mod cover;
pub mod setcover;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, Subset};
use crate::measure::{shannon_entropy, Measure, Partition};
use crate::symbolic::Subshift;

pub use cover::{min_subcover, refined_cover_elements, Cell, Cover, RefinedElement, Refinement, Subcover};
pub use setcover::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Topological,
    Shannon,
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topological" | "htop" => Ok(Flavor::Topological),
            "shannon" => Ok(Flavor::Shannon),
            other => Err(Error::Description(format!("unknown flavor {other:?}"))),
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flavor::Topological => "topological",
            Flavor::Shannon => "shannon",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Observable {
    Partition(Partition),
    Cover(Cover),
}

impl Observable {
    pub fn support(&self) -> &Subset {
        match self {
            Observable::Partition(p) => p.support(),
            Observable::Cover(c) => c.support(),
        }
    }

    pub fn as_cover(&self, subshift: &Subshift) -> Result<Cover> {
        match self {
            Observable::Partition(p) => Cover::from_partition(subshift, p),
            Observable::Cover(c) => Ok(c.clone()),
        }
    }

    pub fn as_partition(&self, subshift: &Subshift) -> Result<Partition> {
        match self {
            Observable::Partition(p) => Ok(p.clone()),
            Observable::Cover(c) => c.to_partition(subshift),
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Topological(Cover),
    Shannon { partition: Partition, measure: Measure },
}

/// `H(F) = log N(U^F)` or `H(F) = H_μ(P^F)`, memoized per set.
///
/// Values are deterministic functions of `F`; the cache is only an
/// accelerator and never changes an answer.
#[derive(Debug)]
pub struct EntropyFunction {
    subshift: Arc<Subshift>,
    kind: Kind,
    limits: Limits,
    cache: RwLock<HashMap<Subset, f64>>,
}

impl EntropyFunction {
    pub fn topological(subshift: Arc<Subshift>, cover: Cover) -> Self {
        EntropyFunction {
            subshift,
            kind: Kind::Topological(cover),
            limits: Limits::default(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn shannon(subshift: Arc<Subshift>, partition: Partition, measure: Measure) -> Result<Self> {
        measure.check_group(subshift.group())?;
        Ok(EntropyFunction {
            subshift,
            kind: Kind::Shannon { partition, measure },
            limits: Limits::default(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Builds either flavor from an observable; the Shannon flavor needs a
    /// measure and a disjoint observable.
    pub fn from_observable(
        subshift: Arc<Subshift>,
        flavor: Flavor,
        observable: &Observable,
        measure: Option<&Measure>,
    ) -> Result<Self> {
        match flavor {
            Flavor::Topological => {
                let cover = observable.as_cover(&subshift)?;
                Ok(EntropyFunction::topological(subshift, cover))
            }
            Flavor::Shannon => {
                let measure = measure
                    .ok_or_else(|| Error::InvalidMeasure("the shannon flavor needs a measure".into()))?
                    .clone();
                let partition = observable.as_partition(&subshift)?;
                EntropyFunction::shannon(subshift, partition, measure)
            }
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn flavor(&self) -> Flavor {
        match self.kind {
            Kind::Topological(_) => Flavor::Topological,
            Kind::Shannon { .. } => Flavor::Shannon,
        }
    }

    pub fn subshift(&self) -> &Arc<Subshift> {
        &self.subshift
    }

    pub fn group(&self) -> &Group {
        self.subshift.group()
    }

    pub fn cover(&self) -> Option<&Cover> {
        match &self.kind {
            Kind::Topological(c) => Some(c),
            Kind::Shannon { .. } => None,
        }
    }

    /// `H(F)` in nats. `H(∅) = 0`.
    pub fn value(&self, f: &Subset) -> Result<f64> {
        if f.is_empty() {
            return Ok(0.0);
        }
        self.group().check_subset(f)?;
        if let Some(&v) = self.cache.read().expect("cache lock").get(f) {
            return Ok(v);
        }
        let v = match &self.kind {
            Kind::Topological(cover) => {
                let n = min_subcover(&self.subshift, cover, f, &self.limits)?.size;
                (n as f64).ln()
            }
            Kind::Shannon { partition, measure } => shannon_entropy(&self.subshift, measure, partition, f)?,
        };
        self.cache
            .write()
            .expect("cache lock")
            .entry(f.clone())
            .or_insert(v);
        Ok(v)
    }

    /// `H(F | F') = H(F ∪ F') − H(F')`.
    pub fn conditional(&self, f: &Subset, given: &Subset) -> Result<f64> {
        Ok(self.value(&f.union(given))? - self.value(given)?)
    }

    /// `H(F) / |F|`.
    pub fn normalized(&self, f: &Subset) -> Result<f64> {
        if f.is_empty() {
            return Err(Error::Support("normalized entropy of the empty set".into()));
        }
        Ok(self.value(f)? / f.len() as f64)
    }

    /// Minimum subcover of `U^F` with a witness, topological flavor only.
    pub fn min_subcover(&self, f: &Subset) -> Result<Subcover> {
        match &self.kind {
            Kind::Topological(cover) => min_subcover(&self.subshift, cover, f, &self.limits),
            Kind::Shannon { .. } => Err(Error::InvalidObservable(
                "subcovers are defined for the topological flavor".into(),
            )),
        }
    }

    /// Cached values, sorted by set.
    pub fn cache_entries(&self) -> Vec<(Subset, f64)> {
        let mut v: Vec<_> = self
            .cache
            .read()
            .expect("cache lock")
            .iter()
            .map(|(k, &v)| (k.clone(), v))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn preload(&self, entries: impl IntoIterator<Item = (Subset, f64)>) {
        let mut cache = self.cache.write().expect("cache lock");
        for (k, v) in entries {
            cache.entry(k).or_insert(v);
        }
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// `log N(U^F)` for a one-off evaluation.
pub fn htop(subshift: &Subshift, cover: &Cover, f: &Subset) -> Result<f64> {
    if f.is_empty() {
        return Ok(0.0);
    }
    Ok((min_subcover(subshift, cover, f, &Limits::default())?.size as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Element;
    use crate::symbolic::{SubshiftSpec, WordSpec};

    fn golden() -> Arc<Subshift> {
        Arc::new(
            Subshift::new(
                Group::integers(),
                &SubshiftSpec::ZSft {
                    alphabet: vec!["0".into(), "1".into()],
                    forbidden: vec![WordSpec::Text("11".into())],
                },
            )
            .unwrap(),
        )
    }

    fn z3() -> Arc<Subshift> {
        let spec: SubshiftSpec = serde_json::from_value(serde_json::json!({
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [["a","a","a"], ["b","b","b"], ["c","c","c"],
                               ["a","b","c"], ["b","c","a"], ["c","a","b"]]
        }))
        .unwrap();
        Arc::new(Subshift::new(Group::cyclic(3).unwrap(), &spec).unwrap())
    }

    fn residues(xs: &[u64]) -> Subset {
        Subset::new(xs.iter().map(|&r| Element::Residue(r)))
    }

    #[test]
    fn golden_mean_time_zero_counts() {
        let x = golden();
        let p = Partition::time_zero(&x).unwrap();
        let h = EntropyFunction::from_observable(x, Flavor::Topological, &Observable::Partition(p), None).unwrap();
        assert_eq!(h.value(&Subset::empty()).unwrap(), 0.0);
        assert!((h.value(&Subset::ints([0])).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((h.value(&Subset::ints([0, 2])).unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!((h.value(&Subset::interval(-1, 2)).unwrap() - 5f64.ln()).abs() < 1e-12);
        assert_eq!(h.cache_len(), 3);
    }

    #[test]
    fn z3_cover_values() {
        let x = z3();
        let cover = Cover::time_zero(
            &x,
            vec![
                ("ab".into(), vec![0, 1]),
                ("bc".into(), vec![1, 2]),
                ("ac".into(), vec![0, 2]),
            ],
        )
        .unwrap();
        let h = EntropyFunction::topological(x, cover);
        assert!((h.value(&residues(&[0])).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((h.value(&residues(&[0, 1, 2])).unwrap() - 3f64.ln()).abs() < 1e-12);
        let c = h.conditional(&residues(&[2]), &residues(&[0, 1])).unwrap();
        assert!((c - (3f64.ln() - 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn shannon_needs_disjoint_observable() {
        let x = z3();
        let cover = Cover::time_zero(&x, vec![("ab".into(), vec![0, 1]), ("bc".into(), vec![1, 2])]).unwrap();
        let m = Measure::new(
            &crate::measure::MeasureSpec::Explicit {
                probs: vec![1.0 / 6.0; 6],
            },
            &x,
        )
        .unwrap();
        let err = EntropyFunction::from_observable(x, Flavor::Shannon, &Observable::Cover(cover), Some(&m));
        assert!(matches!(err, Err(Error::InvalidObservable(_))));
    }

    #[test]
    fn normalized_rejects_empty() {
        let x = golden();
        let p = Partition::time_zero(&x).unwrap();
        let h = EntropyFunction::topological(x.clone(), Cover::from_partition(&x, &p).unwrap());
        assert!(h.normalized(&Subset::empty()).is_err());
    }
}
