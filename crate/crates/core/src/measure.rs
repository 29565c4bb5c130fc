//! Invariant measures on subshifts and Shannon entropy of refined partitions.
//!
//! `H(F) = H_μ(P^F)` is evaluated by enumerating the language on the union
//! support `SF = ∪_{g∈F} Sg`, weighting each pattern by its cylinder measure
//! and aggregating over the label tuples `(label(x|Sg))_{g∈F}`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group, Subset};
use crate::symbolic::{Pattern, Subshift, Symbol};

const SUM_TOLERANCE: f64 = 1e-12;
const STATIONARY_TOLERANCE: f64 = 1e-10;
const POWER_ITERATION_TOLERANCE: f64 = 1e-12;
const POWER_ITERATION_MAX_STEPS: usize = 1_000_000;

/// Serializable measure description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Product measure `ν^G` on a full shift.
    Bernoulli { probs: Vec<f64> },
    /// Stationary Markov chain on the symbols of a `Z`-subshift.
    Markov {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stationary: Option<Vec<f64>>,
    },
    /// Parry measure of a memory-one `Z`-SFT.
    Parry,
    /// One probability per listed configuration of an explicit finite subshift.
    Explicit { probs: Vec<f64> },
}

/// Stationary Markov measure on `Z`.
#[derive(Debug)]
pub struct MarkovMeasure {
    matrix: Vec<Vec<f64>>,
    stationary: Vec<f64>,
    powers: Mutex<Vec<Vec<Vec<f64>>>>,
}

impl Clone for MarkovMeasure {
    fn clone(&self) -> Self {
        MarkovMeasure::new(self.matrix.clone(), self.stationary.clone())
    }
}

impl MarkovMeasure {
    fn new(matrix: Vec<Vec<f64>>, stationary: Vec<f64>) -> Self {
        let identity = identity(matrix.len());
        MarkovMeasure {
            powers: Mutex::new(vec![identity, matrix.clone()]),
            matrix,
            stationary,
        }
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Entry `(a, b)` of the `gap`-th power of the transition matrix.
    fn transition(&self, gap: usize, a: Symbol, b: Symbol) -> f64 {
        let mut powers = self.powers.lock().expect("power cache poisoned");
        while powers.len() <= gap {
            let next = mat_mul(powers.last().expect("nonempty"), &self.matrix);
            powers.push(next);
        }
        powers[gap][a as usize][b as usize]
    }

    /// Probability of a cylinder on sorted integer sites; gaps are summed out
    /// through matrix powers.
    fn prob(&self, sites: &[i64], values: &[Symbol]) -> f64 {
        let mut p = self.stationary[values[0] as usize];
        for i in 1..sites.len() {
            if p == 0.0 {
                return 0.0;
            }
            let gap = (sites[i] - sites[i - 1]) as usize;
            p *= self.transition(gap, values[i - 1], values[i]);
        }
        p
    }
}

/// A validated invariant measure.
#[derive(Clone, Debug)]
pub enum Measure {
    Bernoulli {
        group: Group,
        probs: Vec<f64>,
    },
    Markov(MarkovMeasure),
    Explicit {
        group: Group,
        configs: Vec<Vec<Symbol>>,
        probs: Vec<f64>,
    },
}

impl Measure {
    pub fn new(spec: &MeasureSpec, subshift: &Subshift) -> Result<Self> {
        let alphabet = subshift.alphabet().len();
        match spec {
            MeasureSpec::Bernoulli { probs } => {
                if !subshift.is_full_shift() {
                    return Err(Error::InvalidMeasure(
                        "bernoulli measures require a full shift".into(),
                    ));
                }
                check_probability_vector(probs, alphabet, "bernoulli")?;
                Ok(Measure::Bernoulli {
                    group: subshift.group().clone(),
                    probs: probs.clone(),
                })
            }
            MeasureSpec::Markov { matrix, stationary } => {
                Measure::markov(subshift, matrix.clone(), stationary.clone())
            }
            MeasureSpec::Parry => Measure::parry(subshift),
            MeasureSpec::Explicit { probs } => {
                let Some(configs) = subshift.configurations() else {
                    return Err(Error::InvalidMeasure(
                        "explicit measures require an explicit_finite subshift".into(),
                    ));
                };
                check_probability_vector(probs, configs.len(), "explicit")?;
                let group = subshift.group().clone();
                let elements = group.elements().expect("finite group");
                let index: HashMap<&Vec<Symbol>, usize> =
                    configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
                for (i, c) in configs.iter().enumerate() {
                    for g in elements.iter() {
                        let moved: Vec<Symbol> = elements
                            .iter()
                            .map(|h| {
                                let hg = group.op(h, g).expect("group element");
                                c[group.finite_index(&hg).expect("finite")]
                            })
                            .collect();
                        let j = index[&moved];
                        if (probs[i] - probs[j]).abs() > SUM_TOLERANCE {
                            return Err(Error::InvalidMeasure(format!(
                                "explicit measure is not invariant under translation by {g}"
                            )));
                        }
                    }
                }
                Ok(Measure::Explicit {
                    group,
                    configs: configs.to_vec(),
                    probs: probs.clone(),
                })
            }
        }
    }

    /// Markov measure with transition matrix `matrix`; the stationary vector
    /// is computed when not supplied.
    pub fn markov(
        subshift: &Subshift,
        matrix: Vec<Vec<f64>>,
        stationary: Option<Vec<f64>>,
    ) -> Result<Self> {
        if !subshift.group().is_integers() {
            return Err(Error::InvalidMeasure("markov measures require the group Z".into()));
        }
        let n = subshift.alphabet().len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure(format!(
                "transition matrix must be {n}x{n}"
            )));
        }
        if matrix.iter().flatten().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidMeasure("transition probabilities must be >= 0".into()));
        }
        let stationary = match stationary {
            Some(pi) => pi,
            None => {
                for row in &matrix {
                    check_sum(row, "transition matrix row")?;
                }
                stationary_vector(&matrix)?
            }
        };
        check_probability_vector(&stationary, n, "stationary")?;
        for (i, row) in matrix.iter().enumerate() {
            if stationary[i] > 0.0 {
                check_sum(row, "transition matrix row")?;
            }
        }
        for j in 0..n {
            let v: f64 = (0..n).map(|i| stationary[i] * matrix[i][j]).sum();
            if (v - stationary[j]).abs() > STATIONARY_TOLERANCE {
                return Err(Error::InvalidMeasure(format!(
                    "stationary vector is not invariant: (πP)_{j} = {v}, π_{j} = {}",
                    stationary[j]
                )));
            }
        }
        if let Some(graph) = subshift.sft_graph() {
            if graph.forbidden().iter().any(|w| w.len() > 2) {
                return Err(Error::InvalidMeasure(
                    "markov measures require forbidden words of length <= 2".into(),
                ));
            }
            let live: Vec<Symbol> = graph.vertices().iter().map(|v| v[0]).collect();
            for a in 0..n as Symbol {
                if stationary[a as usize] > 0.0 && !live.contains(&a) {
                    return Err(Error::InvalidMeasure(format!(
                        "symbol {} has positive mass but does not occur in the subshift",
                        subshift.alphabet().name(a)
                    )));
                }
                for b in 0..n as Symbol {
                    if stationary[a as usize] > 0.0
                        && matrix[a as usize][b as usize] > 0.0
                        && !graph.allows_transition(a, b)
                    {
                        return Err(Error::InvalidMeasure(format!(
                            "transition {}{} is forbidden but has positive probability",
                            subshift.alphabet().name(a),
                            subshift.alphabet().name(b)
                        )));
                    }
                }
            }
        } else if !subshift.is_full_shift() {
            return Err(Error::InvalidMeasure(
                "markov measures require a full shift or a Z-SFT".into(),
            ));
        }
        Ok(Measure::Markov(MarkovMeasure::new(matrix, stationary)))
    }

    /// Parry measure (the maximal-entropy Markov measure) of an irreducible
    /// memory-one `Z`-SFT, by power iteration on the adjacency matrix.
    pub fn parry(subshift: &Subshift) -> Result<Self> {
        let n = subshift.alphabet().len();
        let adjacency: Vec<Vec<f64>> = if subshift.is_full_shift() && subshift.group().is_integers() {
            vec![vec![1.0; n]; n]
        } else {
            let Some(graph) = subshift.sft_graph() else {
                return Err(Error::InvalidMeasure("parry measures require a Z-SFT".into()));
            };
            if graph.memory() != 1 {
                return Err(Error::InvalidMeasure(
                    "parry measures require forbidden words of length <= 2".into(),
                ));
            }
            let mut a = vec![vec![0.0; n]; n];
            for (i, succ) in graph.successors().iter().enumerate() {
                let from = graph.vertices()[i][0] as usize;
                for &j in succ {
                    a[from][graph.vertices()[j][0] as usize] = 1.0;
                }
            }
            a
        };
        let live: Vec<usize> = (0..n).filter(|&i| adjacency[i].iter().any(|&x| x > 0.0)).collect();
        if !strongly_connected(&adjacency, &live) {
            return Err(Error::InvalidMeasure(
                "parry measures require an irreducible SFT".into(),
            ));
        }
        let right = perron_vector(&adjacency)?;
        let transposed: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| adjacency[i][j]).collect()).collect();
        let left = perron_vector(&transposed)?;
        let i0 = live[0];
        let lambda: f64 = (0..n).map(|j| adjacency[i0][j] * right[j]).sum::<f64>() / right[i0];
        let mut matrix = vec![vec![0.0; n]; n];
        for &i in &live {
            for j in 0..n {
                if adjacency[i][j] > 0.0 {
                    matrix[i][j] = right[j] / (lambda * right[i]);
                }
            }
            // rows are stochastic up to the iteration error; remove it
            let s: f64 = matrix[i].iter().sum();
            matrix[i].iter_mut().for_each(|x| *x /= s);
        }
        let norm: f64 = (0..n).map(|i| left[i] * right[i]).sum();
        let stationary: Vec<f64> = (0..n).map(|i| left[i] * right[i] / norm).collect();
        Measure::markov(subshift, matrix, Some(stationary))
    }

    fn group(&self) -> Option<&Group> {
        match self {
            Measure::Bernoulli { group, .. } | Measure::Explicit { group, .. } => Some(group),
            Measure::Markov(_) => None,
        }
    }

    /// Measure of the cylinder `{x : x|support = p}`.
    pub fn pattern_prob(&self, p: &Pattern) -> Result<f64> {
        self.row_prob(p.support(), p.values())
    }

    /// Measure of the cylinder fixed by `row` on `support`.
    pub fn row_prob(&self, support: &Subset, row: &[Symbol]) -> Result<f64> {
        if support.is_empty() {
            return Ok(1.0);
        }
        match self {
            Measure::Bernoulli { probs, group } => {
                group.check_subset(support)?;
                row.iter()
                    .map(|&s| {
                        probs
                            .get(s as usize)
                            .copied()
                            .ok_or_else(|| Error::InvalidMeasure(format!("symbol {s} is outside the alphabet")))
                    })
                    .product()
            }
            Measure::Markov(m) => {
                if row.iter().any(|&s| s as usize >= m.stationary.len()) {
                    return Err(Error::InvalidMeasure("symbol outside the alphabet".into()));
                }
                let sites = support
                    .iter()
                    .map(|e| match e {
                        Element::Lattice(v) if v.len() == 1 => Ok(v[0]),
                        _ => Err(Error::MixedGroups(e.to_string())),
                    })
                    .collect::<Result<Vec<i64>>>()?;
                Ok(m.prob(&sites, row))
            }
            Measure::Explicit {
                group,
                configs,
                probs,
            } => {
                group.check_subset(support)?;
                let idx: Vec<usize> = support
                    .iter()
                    .map(|e| group.finite_index(e).expect("checked"))
                    .collect();
                Ok(configs
                    .iter()
                    .zip(probs)
                    .filter(|(c, _)| idx.iter().zip(row).all(|(&i, &s)| c[i] == s))
                    .map(|(_, p)| *p)
                    .sum())
            }
        }
    }

    pub fn markov_chain(&self) -> Option<&MarkovMeasure> {
        match self {
            Measure::Markov(m) => Some(m),
            _ => None,
        }
    }

    /// Checks that the measure can act on the given group.
    pub fn check_group(&self, group: &Group) -> Result<()> {
        match self.group() {
            Some(g) if g != group => Err(Error::InvalidMeasure("measure and subshift groups differ".into())),
            None if !group.is_integers() => Err(Error::InvalidMeasure("markov measures require Z".into())),
            _ => Ok(()),
        }
    }
}

fn check_sum(v: &[f64], what: &str) -> Result<()> {
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidMeasure(format!("{what} sums to {s}, not 1")));
    }
    Ok(())
}

fn check_probability_vector(v: &[f64], len: usize, what: &str) -> Result<()> {
    if v.len() != len {
        return Err(Error::InvalidMeasure(format!(
            "{what} probabilities: expected {len} entries, got {}",
            v.len()
        )));
    }
    if v.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidMeasure(format!("{what} probabilities must be >= 0")));
    }
    check_sum(v, what)
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn strongly_connected(adjacency: &[Vec<f64>], live: &[usize]) -> bool {
    let Some(&start) = live.first() else {
        return false;
    };
    let reach = |forward: bool| {
        let mut seen = vec![false; adjacency.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..adjacency.len() {
                let edge = if forward { adjacency[i][j] } else { adjacency[j][i] };
                if edge > 0.0 && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    live.iter().all(|&i| fwd[i] && bwd[i])
}

/// Normalized Perron vector of a nonnegative matrix, by power iteration on
/// `A + I` (which shares its eigenvectors and is aperiodic).
fn perron_vector(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = a.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut last_delta = f64::INFINITY;
    for _ in 0..POWER_ITERATION_MAX_STEPS {
        let mut next: Vec<f64> = (0..n)
            .map(|i| v[i] + (0..n).map(|j| a[i][j] * v[j]).sum::<f64>())
            .collect();
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= s);
        let delta = next
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        v = next;
        // past the tolerance, keep going until rounding noise takes over
        if delta == 0.0 || (delta < POWER_ITERATION_TOLERANCE && delta >= last_delta) {
            return Ok(v);
        }
        last_delta = delta;
    }
    Err(Error::InvalidMeasure("power iteration did not converge".into()))
}

/// Stationary row vector of a stochastic matrix, by power iteration on the
/// lazy chain `(P + I) / 2`.
fn stationary_vector(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    let transposed: Vec<Vec<f64>> = (0..p.len())
        .map(|j| (0..p.len()).map(|i| p[i][j]).collect())
        .collect();
    perron_vector(&transposed)
}

/// A finite partition observable: a labeling of the patterns on a support
/// `S`. The time-zero partition has `S = {e}` and labels each symbol by
/// itself.
#[derive(Clone, Debug)]
pub struct Partition {
    support: Subset,
    labels: HashMap<Vec<Symbol>, u32>,
    names: Vec<String>,
}

impl Partition {
    /// Builds a partition from explicit `(row, label)` entries; the labeling
    /// must be total on `language(support)`.
    pub fn new(
        subshift: &Subshift,
        support: Subset,
        entries: impl IntoIterator<Item = (Vec<Symbol>, String)>,
    ) -> Result<Self> {
        let entries: Vec<(Vec<Symbol>, String)> = entries.into_iter().collect();
        let mut names: Vec<String> = entries.iter().map(|(_, l)| l.clone()).collect();
        names.sort();
        names.dedup();
        let mut labels = HashMap::new();
        for (row, name) in entries {
            if row.len() != support.len() {
                return Err(Error::InvalidObservable("label pattern has the wrong length".into()));
            }
            let id = names.binary_search(&name).expect("collected") as u32;
            if let Some(prev) = labels.insert(row, id) {
                if prev != id {
                    return Err(Error::InvalidObservable("pattern labeled twice".into()));
                }
            }
        }
        let lang = subshift.language(&support)?;
        if let Some(row) = lang.rows().iter().find(|r| !labels.contains_key(*r)) {
            return Err(Error::InvalidObservable(format!(
                "labeling is undefined on the pattern {}",
                subshift.alphabet().render(row)
            )));
        }
        Ok(Partition {
            support,
            labels,
            names,
        })
    }

    /// Partition by a function of the pattern on `support`.
    pub fn from_fn(
        subshift: &Subshift,
        support: Subset,
        label: impl Fn(&[Symbol]) -> String,
    ) -> Result<Self> {
        let lang = subshift.language(&support)?;
        let entries: Vec<_> = lang.rows().iter().map(|r| (r.clone(), label(r))).collect();
        Partition::new(subshift, support, entries)
    }

    /// The time-zero partition `{[a] : a in Λ}`.
    pub fn time_zero(subshift: &Subshift) -> Result<Self> {
        let e = Subset::new([subshift.group().identity()]);
        let alphabet = subshift.alphabet().clone();
        Partition::from_fn(subshift, e, |r| alphabet.name(r[0]).to_string())
    }

    /// The partition `P_Λ^S` whose cells are the patterns on `support`.
    pub fn block(subshift: &Subshift, support: Subset) -> Result<Self> {
        let alphabet = subshift.alphabet().clone();
        Partition::from_fn(subshift, support, |r| alphabet.render(r))
    }

    pub fn support(&self) -> &Subset {
        &self.support
    }

    pub fn label_names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, row: &[Symbol]) -> Option<u32> {
        self.labels.get(row).copied()
    }

    /// `(row, label)` pairs sorted by row.
    pub fn entries(&self) -> Vec<(Vec<Symbol>, String)> {
        let mut v: Vec<_> = self
            .labels
            .iter()
            .map(|(r, &l)| (r.clone(), self.names[l as usize].clone()))
            .collect();
        v.sort();
        v
    }
}

/// `−Σ p log p` with `0 log 0 = 0`.
pub fn entropy_of_distribution<'a>(probs: impl IntoIterator<Item = &'a f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Union support `SF` and, for each `g` in `F`, the positions of `Sg` inside
/// it (in the order of `S`).
pub(crate) fn refinement_layout(
    group: &Group,
    support: &Subset,
    f: &Subset,
) -> Result<(Subset, Vec<Vec<usize>>)> {
    let translates = f
        .iter()
        .map(|g| {
            support
                .iter()
                .map(|s| group.op(s, g))
                .collect::<Result<Vec<Element>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sf = Subset::new(translates.iter().flatten().cloned());
    let positions = translates
        .iter()
        .map(|t| {
            t.iter()
                .map(|e| sf.position(e).expect("member of the union"))
                .collect()
        })
        .collect();
    Ok((sf, positions))
}

/// Shannon entropy `H_μ(P^F)` in nats.
pub fn shannon_entropy(
    subshift: &Subshift,
    measure: &Measure,
    partition: &Partition,
    f: &Subset,
) -> Result<f64> {
    if f.is_empty() {
        return Ok(0.0);
    }
    let (sf, layout) = refinement_layout(subshift.group(), partition.support(), f)?;
    let lang = subshift.language(&sf)?;
    let mut cells: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    let mut key = Vec::with_capacity(layout.len());
    let mut local = Vec::with_capacity(partition.support().len());
    for row in lang.rows() {
        let p = measure.row_prob(&sf, row)?;
        if p == 0.0 {
            continue;
        }
        key.clear();
        for pos in &layout {
            local.clear();
            local.extend(pos.iter().map(|&i| row[i]));
            let label = partition.label(&local).ok_or_else(|| {
                Error::InvalidObservable(format!(
                    "labeling is undefined on the realized pattern {}",
                    subshift.alphabet().render(&local)
                ))
            })?;
            key.push(label);
        }
        *cells.entry(key.clone()).or_insert(0.0) += p;
    }
    Ok(entropy_of_distribution(cells.values()))
}

/// `H_μ(P)`, the entropy of the partition itself.
pub fn entropy_of_partition(subshift: &Subshift, measure: &Measure, partition: &Partition) -> Result<f64> {
    let e = Subset::new([subshift.group().identity()]);
    shannon_entropy(subshift, measure, partition, &e)
}

/// Marginal distribution of `language(f)` under `measure`, keyed by row.
pub fn distribution(subshift: &Subshift, measure: &Measure, f: &Subset) -> Result<Vec<(Vec<Symbol>, f64)>> {
    let lang = subshift.language(f)?;
    lang.rows()
        .iter()
        .map(|r| Ok((r.clone(), measure.row_prob(f, r)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Alphabet, SubshiftSpec, WordSpec};
    use std::f64::consts::LN_2;

    fn golden_mean() -> Subshift {
        Subshift::new(
            Group::integers(),
            &SubshiftSpec::ZSft {
                alphabet: vec!["0".into(), "1".into()],
                forbidden: vec![WordSpec::Text("11".into())],
            },
        )
        .unwrap()
    }

    fn z3() -> Subshift {
        let spec: SubshiftSpec = serde_json::from_value(serde_json::json!({
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [["a","a","a"], ["b","b","b"], ["c","c","c"],
                               ["a","b","c"], ["b","c","a"], ["c","a","b"]]
        }))
        .unwrap();
        Subshift::new(Group::cyclic(3).unwrap(), &spec).unwrap()
    }

    fn coin(group: Group) -> (Subshift, Measure) {
        let x = Subshift::full_shift(group, Alphabet::from_strs(&["0", "1"]).unwrap());
        let m = Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.5, 0.5] }, &x).unwrap();
        (x, m)
    }

    #[test]
    fn pattern_prob_examples() {
        let (x, m) = coin(Group::integers());
        let p = Pattern::new(Subset::ints([0, 4, 9]), vec![1, 0, 1]).unwrap();
        assert_eq!(m.pattern_prob(&p).unwrap(), 0.125);
        let _ = x;

        let z3 = z3();
        let m = Measure::new(&MeasureSpec::Explicit { probs: vec![1.0 / 6.0; 6] }, &z3).unwrap();
        let p = Pattern::new(Subset::new([Element::Residue(0)]), vec![0]).unwrap();
        assert!((m.pattern_prob(&p).unwrap() - 1.0 / 3.0).abs() < 1e-15);

        let gm = golden_mean();
        let parry = Measure::new(&MeasureSpec::Parry, &gm).unwrap();
        let p = Pattern::new(Subset::ints([0, 1]), vec![1, 1]).unwrap();
        assert_eq!(parry.pattern_prob(&p).unwrap(), 0.0);
    }

    #[test]
    fn parry_measure_of_golden_mean() {
        let gm = golden_mean();
        let m = Measure::new(&MeasureSpec::Parry, &gm).unwrap();
        let chain = m.markov_chain().unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let pi0 = phi * phi / (1.0 + phi * phi);
        assert!((chain.stationary()[0] - pi0).abs() < 1e-10);
        assert!((chain.matrix()[0][0] - 1.0 / phi).abs() < 1e-10);
        assert!((chain.matrix()[1][0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shannon_examples() {
        let (x, m) = coin(Group::integers());
        let p = Partition::time_zero(&x).unwrap();
        let h = shannon_entropy(&x, &m, &p, &Subset::ints([0, 1, 5])).unwrap();
        assert!((h - 3.0 * LN_2).abs() < 1e-12);

        let z3 = z3();
        let m = Measure::new(&MeasureSpec::Explicit { probs: vec![1.0 / 6.0; 6] }, &z3).unwrap();
        let p = Partition::time_zero(&z3).unwrap();
        let h = shannon_entropy(&z3, &m, &p, &z3.group().elements().unwrap()).unwrap();
        assert!((h - 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_partition_examples() {
        let (x, m) = coin(Group::integers());
        let p = Partition::time_zero(&x).unwrap();
        assert!((entropy_of_partition(&x, &m, &p).unwrap() - LN_2).abs() < 1e-15);

        let x4 = Subshift::full_shift(Group::integers(), Alphabet::from_strs(&["a", "b", "c", "d"]).unwrap());
        let m4 = Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.25; 4] }, &x4).unwrap();
        let p4 = Partition::time_zero(&x4).unwrap();
        assert!((entropy_of_partition(&x4, &m4, &p4).unwrap() - 4f64.ln()).abs() < 1e-15);

        let m = Measure::new(&MeasureSpec::Bernoulli { probs: vec![1.0, 0.0] }, &x).unwrap();
        assert_eq!(entropy_of_partition(&x, &m, &p).unwrap(), 0.0);
    }

    #[test]
    fn validation_errors() {
        let (x, _) = coin(Group::integers());
        assert!(Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.5, 0.4] }, &x).is_err());
        assert!(Measure::new(&MeasureSpec::Bernoulli { probs: vec![1.5, -0.5] }, &x).is_err());
        let gm = golden_mean();
        assert!(Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.5, 0.5] }, &gm).is_err());
        // uniform chain puts mass on the forbidden transition 11
        let uniform = MeasureSpec::Markov {
            matrix: vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            stationary: None,
        };
        assert!(Measure::new(&uniform, &gm).is_err());
        let bad_pi = MeasureSpec::Markov {
            matrix: vec![vec![0.5, 0.5], vec![1.0, 0.0]],
            stationary: Some(vec![0.5, 0.5]),
        };
        assert!(Measure::new(&bad_pi, &gm).is_err());
        let z3 = z3();
        let skewed = MeasureSpec::Explicit {
            probs: vec![0.1, 0.1, 0.1, 0.5, 0.1, 0.1],
        };
        assert!(Measure::new(&skewed, &z3).is_err());
    }

    #[test]
    fn stationary_vector_is_computed() {
        let gm = golden_mean();
        let spec = MeasureSpec::Markov {
            matrix: vec![vec![0.5, 0.5], vec![1.0, 0.0]],
            stationary: None,
        };
        let m = Measure::new(&spec, &gm).unwrap();
        let pi = m.markov_chain().unwrap().stationary();
        assert!((pi[0] - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn partition_must_be_total() {
        let (x, _) = coin(Group::integers());
        let e = Subset::ints([0]);
        assert!(Partition::new(&x, e, [(vec![0], "zero".to_string())]).is_err());
    }
}
