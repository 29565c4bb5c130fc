//! Subshifts, finite patterns and window languages.
//!
//! A [`Subshift`] answers one question: which patterns `p: F -> Λ` occur as
//! restrictions of points of the subshift to a finite set `F`. For subshifts
//! of finite type over `Z` this is computed on the convex hull of `F` from the
//! transition graph trimmed to its bi-infinitely extendable part, then
//! projected onto `F`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group, Subset};

pub type Symbol = u16;

/// Largest number of rows a single window language may hold.
pub const MAX_LANGUAGE_SIZE: usize = 1_000_000;

/// Ordered list of distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet(Vec<String>);

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidSubshift("alphabet is empty".into()));
        }
        if names.len() > Symbol::MAX as usize {
            return Err(Error::InvalidSubshift("alphabet is too large".into()));
        }
        if names.iter().duplicates().next().is_some() {
            return Err(Error::InvalidSubshift("alphabet has duplicate symbols".into()));
        }
        Ok(Alphabet(names))
    }

    pub fn from_strs(names: &[&str]) -> Result<Self> {
        Alphabet::new(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.0[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.0
            .iter()
            .position(|n| n == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::InvalidSubshift(format!("symbol {name:?} is not in the alphabet")))
    }

    pub fn symbols(&self) -> std::ops::Range<Symbol> {
        0..self.0.len() as Symbol
    }

    /// Renders a row of symbols, concatenated when every name is one
    /// character long.
    pub fn render(&self, row: &[Symbol]) -> String {
        if self.0.iter().all(|n| n.chars().count() == 1) {
            row.iter().map(|&s| self.name(s)).collect()
        } else {
            row.iter().map(|&s| self.name(s)).join(" ")
        }
    }
}

/// A finite configuration `p: F -> Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    support: Subset,
    values: Vec<Symbol>,
}

impl Pattern {
    pub fn new(support: Subset, values: Vec<Symbol>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::Support(format!(
                "pattern has {} values for a support of size {}",
                values.len(),
                support.len()
            )));
        }
        Ok(Pattern { support, values })
    }

    pub fn support(&self) -> &Subset {
        &self.support
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, e: &Element) -> Option<Symbol> {
        self.support.position(e).map(|i| self.values[i])
    }

    pub fn restrict(&self, k: &Subset) -> Result<Pattern> {
        let values = k
            .iter()
            .map(|e| {
                self.get(e)
                    .ok_or_else(|| Error::Support(format!("{e} is not in the pattern support")))
            })
            .collect::<Result<_>>()?;
        Ok(Pattern {
            support: k.clone(),
            values,
        })
    }
}

/// A set of patterns sharing one support, stored as sorted distinct rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    support: Subset,
    rows: Vec<Vec<Symbol>>,
}

impl PatternSet {
    pub fn new(support: Subset, rows: impl IntoIterator<Item = Vec<Symbol>>) -> Result<Self> {
        let mut rows: Vec<Vec<Symbol>> = rows.into_iter().collect();
        if rows.iter().any(|r| r.len() != support.len()) {
            return Err(Error::Support("row length differs from support size".into()));
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(PatternSet { support, rows })
    }

    pub fn support(&self) -> &Subset {
        &self.support
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: &[Symbol]) -> bool {
        self.rows.binary_search_by(|r| r.as_slice().cmp(row)).is_ok()
    }

    pub fn index_of(&self, row: &[Symbol]) -> Option<usize> {
        self.rows.binary_search_by(|r| r.as_slice().cmp(row)).ok()
    }

    pub fn patterns(&self) -> impl Iterator<Item = Pattern> + '_ {
        self.rows.iter().map(|r| Pattern {
            support: self.support.clone(),
            values: r.clone(),
        })
    }

    /// Restrictions of all patterns to `k`, duplicates collapsed.
    pub fn project(&self, k: &Subset) -> Result<PatternSet> {
        let positions = positions_in(&self.support, k)?;
        PatternSet::new(
            k.clone(),
            self.rows
                .iter()
                .map(|r| positions.iter().map(|&i| r[i]).collect()),
        )
    }
}

/// Projects an arbitrary collection of patterns onto `k`. Every pattern's
/// support must contain `k`.
pub fn project(patterns: &[Pattern], k: &Subset) -> Result<Vec<Pattern>> {
    let set: BTreeSet<Pattern> = patterns
        .iter()
        .map(|p| p.restrict(k))
        .collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

/// Positions of the elements of `k` inside `support`.
pub fn positions_in(support: &Subset, k: &Subset) -> Result<Vec<usize>> {
    k.iter()
        .map(|e| {
            support
                .position(e)
                .ok_or_else(|| Error::Support(format!("{e} is not contained in {support}")))
        })
        .collect()
}

/// A forbidden word, written either as a string of one-character symbols or
/// as an explicit list of symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Text(String),
    Symbols(Vec<String>),
}

impl WordSpec {
    pub fn resolve(&self, alphabet: &Alphabet) -> Result<Vec<Symbol>> {
        match self {
            WordSpec::Text(s) => s
                .chars()
                .map(|c| alphabet.symbol(&c.to_string()))
                .collect(),
            WordSpec::Symbols(v) => v.iter().map(|s| alphabet.symbol(s)).collect(),
        }
    }
}

/// Serializable description of a subshift. The acting group is given next to
/// it in the system description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubshiftSpec {
    FullShift {
        alphabet: Vec<String>,
    },
    ExplicitFinite {
        alphabet: Vec<String>,
        configurations: Vec<Vec<String>>,
    },
    ZSft {
        alphabet: Vec<String>,
        forbidden: Vec<WordSpec>,
    },
}

#[derive(Clone, Debug)]
enum Kind {
    Full,
    Explicit(Vec<Vec<Symbol>>),
    Sft(SftGraph),
}

/// A validated subshift together with its acting group.
#[derive(Clone, Debug)]
pub struct Subshift {
    group: Group,
    alphabet: Alphabet,
    kind: Kind,
}

impl Subshift {
    pub fn new(group: Group, spec: &SubshiftSpec) -> Result<Self> {
        match spec {
            SubshiftSpec::FullShift { alphabet } => Ok(Subshift {
                group,
                alphabet: Alphabet::new(alphabet.clone())?,
                kind: Kind::Full,
            }),
            SubshiftSpec::ExplicitFinite {
                alphabet,
                configurations,
            } => {
                let alphabet = Alphabet::new(alphabet.clone())?;
                let configs = configurations
                    .iter()
                    .map(|c| c.iter().map(|s| alphabet.symbol(s)).collect())
                    .collect::<Result<Vec<Vec<Symbol>>>>()?;
                Subshift::explicit(group, alphabet, configs)
            }
            SubshiftSpec::ZSft {
                alphabet,
                forbidden,
            } => {
                let alphabet = Alphabet::new(alphabet.clone())?;
                let words = forbidden
                    .iter()
                    .map(|w| w.resolve(&alphabet))
                    .collect::<Result<Vec<_>>>()?;
                Subshift::sft(group, alphabet, words)
            }
        }
    }

    pub fn full_shift(group: Group, alphabet: Alphabet) -> Self {
        Subshift {
            group,
            alphabet,
            kind: Kind::Full,
        }
    }

    /// Finite-group subshift given by its complete list of configurations,
    /// each indexed by the canonical listing of the group. The list must be
    /// closed under translation.
    pub fn explicit(group: Group, alphabet: Alphabet, configs: Vec<Vec<Symbol>>) -> Result<Self> {
        let Some(elements) = group.elements() else {
            return Err(Error::InvalidSubshift(
                "explicit_finite requires a finite group".into(),
            ));
        };
        let m = elements.len();
        if configs.is_empty() {
            return Err(Error::EmptySubshift);
        }
        if configs.iter().any(|c| c.len() != m) {
            return Err(Error::InvalidSubshift(format!(
                "every configuration must assign a symbol to each of the {m} group elements"
            )));
        }
        if configs.iter().any(|c| c.iter().any(|&s| s as usize >= alphabet.len())) {
            return Err(Error::InvalidSubshift("symbol outside the alphabet".into()));
        }
        let set: HashSet<&Vec<Symbol>> = configs.iter().collect();
        if set.len() != configs.len() {
            return Err(Error::InvalidSubshift("duplicate configuration".into()));
        }
        for c in &configs {
            for g in elements.iter() {
                let moved = translate_config(&group, &elements, c, g)?;
                if !set.contains(&moved) {
                    return Err(Error::InvalidSubshift(format!(
                        "configuration {} is not closed under translation by {g}",
                        alphabet.render(c)
                    )));
                }
            }
        }
        Ok(Subshift {
            group,
            alphabet,
            kind: Kind::Explicit(configs),
        })
    }

    /// Subshift of finite type over `Z` given by forbidden words.
    pub fn sft(group: Group, alphabet: Alphabet, forbidden: Vec<Vec<Symbol>>) -> Result<Self> {
        if !group.is_integers() {
            return Err(Error::InvalidSubshift("z_sft requires the group Z".into()));
        }
        let graph = SftGraph::build(alphabet.len(), forbidden)?;
        Ok(Subshift {
            group,
            alphabet,
            kind: Kind::Sft(graph),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_full_shift(&self) -> bool {
        matches!(self.kind, Kind::Full)
    }

    /// Listed configurations of an explicit finite subshift.
    pub fn configurations(&self) -> Option<&[Vec<Symbol>]> {
        match &self.kind {
            Kind::Explicit(c) => Some(c),
            _ => None,
        }
    }

    pub fn sft_graph(&self) -> Option<&SftGraph> {
        match &self.kind {
            Kind::Sft(g) => Some(g),
            _ => None,
        }
    }

    /// Restrictions to `f` of the points of the subshift.
    pub fn language(&self, f: &Subset) -> Result<PatternSet> {
        if f.is_empty() {
            return Err(Error::Support("language of the empty set".into()));
        }
        self.group.check_subset(f)?;
        match &self.kind {
            Kind::Full => {
                let size = (self.alphabet.len() as f64).powi(f.len() as i32);
                if size > MAX_LANGUAGE_SIZE as f64 {
                    return Err(Error::Resource(format!(
                        "full-shift language on {} sites has {size} patterns",
                        f.len()
                    )));
                }
                let rows = (0..f.len())
                    .map(|_| self.alphabet.symbols())
                    .multi_cartesian_product();
                PatternSet::new(f.clone(), rows)
            }
            Kind::Explicit(configs) => {
                let idx: Vec<usize> = f
                    .iter()
                    .map(|e| self.group.finite_index(e).expect("checked element"))
                    .collect();
                PatternSet::new(
                    f.clone(),
                    configs.iter().map(|c| idx.iter().map(|&i| c[i]).collect()),
                )
            }
            Kind::Sft(graph) => {
                let xs: Vec<i64> = f.iter().map(int_of).collect();
                let lo = xs[0];
                let hi = *xs.last().expect("nonempty");
                let words = graph.words((hi - lo + 1) as usize)?;
                let offsets: Vec<usize> = xs.iter().map(|x| (x - lo) as usize).collect();
                PatternSet::new(
                    f.clone(),
                    words
                        .into_iter()
                        .map(|w| offsets.iter().map(|&o| w[o]).collect()),
                )
            }
        }
    }

    /// Number of patterns in `language(f)`.
    pub fn count_language(&self, f: &Subset) -> Result<usize> {
        if let Kind::Sft(graph) = &self.kind {
            if !f.is_empty() && self.group.check_subset(f).is_ok() {
                let xs: Vec<i64> = f.iter().map(int_of).collect();
                let span = (xs[xs.len() - 1] - xs[0] + 1) as usize;
                if span == xs.len() {
                    let n = graph.count_words(span);
                    return usize::try_from(n)
                        .map_err(|_| Error::Resource("language count overflows".into()));
                }
            }
        }
        Ok(self.language(f)?.len())
    }

    /// Serializable spec reproducing this subshift.
    pub fn to_spec(&self) -> SubshiftSpec {
        let alphabet = self.alphabet.names().to_vec();
        match &self.kind {
            Kind::Full => SubshiftSpec::FullShift { alphabet },
            Kind::Explicit(configs) => SubshiftSpec::ExplicitFinite {
                configurations: configs
                    .iter()
                    .map(|c| c.iter().map(|&s| self.alphabet.name(s).to_string()).collect())
                    .collect(),
                alphabet,
            },
            Kind::Sft(g) => SubshiftSpec::ZSft {
                forbidden: g
                    .forbidden
                    .iter()
                    .map(|w| WordSpec::Symbols(w.iter().map(|&s| self.alphabet.name(s).to_string()).collect()))
                    .collect(),
                alphabet,
            },
        }
    }
}

impl fmt::Display for Subshift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Full => write!(f, "full shift over {} symbols", self.alphabet.len()),
            Kind::Explicit(c) => write!(f, "explicit subshift with {} configurations", c.len()),
            Kind::Sft(g) => write!(
                f,
                "Z-SFT forbidding {}",
                g.forbidden.iter().map(|w| self.alphabet.render(w)).join(", ")
            ),
        }
    }
}

pub(crate) fn int_of(e: &Element) -> i64 {
    match e {
        Element::Lattice(v) if v.len() == 1 => v[0],
        _ => panic!("expected an element of Z, got {e}"),
    }
}

/// The configuration `y` with `y_h = x_{hg}`.
fn translate_config(
    group: &Group,
    elements: &Subset,
    config: &[Symbol],
    g: &Element,
) -> Result<Vec<Symbol>> {
    elements
        .iter()
        .map(|h| {
            let hg = group.op(h, g)?;
            Ok(config[group.finite_index(&hg).expect("finite group element")])
        })
        .collect()
}

/// Transition graph of a `Z`-SFT: vertices are admissible words of length
/// `memory`, edges are admissible words of length `memory + 1`. Only the
/// vertices lying on bi-infinite paths are kept.
#[derive(Clone, Debug)]
pub struct SftGraph {
    symbols: usize,
    memory: usize,
    forbidden: Vec<Vec<Symbol>>,
    vertices: Vec<Vec<Symbol>>,
    successors: Vec<Vec<usize>>,
}

impl SftGraph {
    fn build(symbols: usize, forbidden: Vec<Vec<Symbol>>) -> Result<Self> {
        if forbidden.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidSubshift("forbidden words must be nonempty".into()));
        }
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
        let memory = longest.saturating_sub(1).max(1);
        let candidates = (symbols as f64).powi(memory as i32);
        if candidates > MAX_LANGUAGE_SIZE as f64 {
            return Err(Error::Resource(format!(
                "SFT transition graph would have {candidates} vertices"
            )));
        }
        let avoids = |w: &[Symbol]| !forbidden.iter().any(|f| contains_block(w, f));
        let mut vertices: Vec<Vec<Symbol>> = (0..memory)
            .map(|_| 0..symbols as Symbol)
            .multi_cartesian_product()
            .filter(|w| avoids(w))
            .collect();
        let index: HashMap<Vec<Symbol>, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut successors: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            for s in 0..symbols as Symbol {
                let mut w = v.clone();
                w.push(s);
                if !avoids(&w) {
                    continue;
                }
                if let Some(&j) = index.get(&w[1..]) {
                    successors[i].push(j);
                }
            }
        }
        // trim to vertices with both predecessors and successors, repeatedly
        let mut alive = vec![true; vertices.len()];
        loop {
            let mut indeg = vec![0usize; vertices.len()];
            for (i, succ) in successors.iter().enumerate() {
                if alive[i] {
                    for &j in succ {
                        if alive[j] {
                            indeg[j] += 1;
                        }
                    }
                }
            }
            let mut changed = false;
            for i in 0..vertices.len() {
                if alive[i] {
                    let out = successors[i].iter().filter(|&&j| alive[j]).count();
                    if out == 0 || indeg[i] == 0 {
                        alive[i] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let remap: Vec<Option<usize>> = alive
            .iter()
            .scan(0usize, |next, &a| {
                Some(if a {
                    *next += 1;
                    Some(*next - 1)
                } else {
                    None
                })
            })
            .collect();
        let successors: Vec<Vec<usize>> = successors
            .into_iter()
            .enumerate()
            .filter(|(i, _)| alive[*i])
            .map(|(_, succ)| succ.into_iter().filter_map(|j| remap[j]).collect())
            .collect();
        vertices = vertices
            .into_iter()
            .zip(&alive)
            .filter(|(_, a)| **a)
            .map(|(v, _)| v)
            .collect();
        if vertices.is_empty() {
            return Err(Error::EmptySubshift);
        }
        Ok(SftGraph {
            symbols,
            memory,
            forbidden,
            vertices,
            successors,
        })
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn forbidden(&self) -> &[Vec<Symbol>] {
        &self.forbidden
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// Vertex words of the trimmed graph.
    pub fn vertices(&self) -> &[Vec<Symbol>] {
        &self.vertices
    }

    pub fn successors(&self) -> &[Vec<usize>] {
        &self.successors
    }

    /// Whether a transition `a -> b` is admissible (memory-one SFTs only).
    pub fn allows_transition(&self, a: Symbol, b: Symbol) -> bool {
        !self
            .forbidden
            .iter()
            .any(|f| contains_block(&[a, b], f))
    }

    /// Number of globally admissible words of length `n`, by transfer-matrix
    /// counting of paths in the trimmed graph.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        if n <= self.memory {
            return self
                .vertices
                .iter()
                .map(|v| &v[..n])
                .collect::<HashSet<_>>()
                .len() as u128;
        }
        let mut paths = vec![1u128; self.vertices.len()];
        for _ in 0..n - self.memory {
            let mut next = vec![0u128; self.vertices.len()];
            for (i, succ) in self.successors.iter().enumerate() {
                for &j in succ {
                    next[j] = next[j].saturating_add(paths[i]);
                }
            }
            paths = next;
        }
        paths.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    /// All globally admissible words of length `n`, sorted.
    pub fn words(&self, n: usize) -> Result<Vec<Vec<Symbol>>> {
        if self.count_words(n) > MAX_LANGUAGE_SIZE as u128 {
            return Err(Error::Resource(format!(
                "SFT language of length {n} exceeds {MAX_LANGUAGE_SIZE} words"
            )));
        }
        let mut out: Vec<Vec<Symbol>> = if n <= self.memory {
            self.vertices.iter().map(|v| v[..n].to_vec()).collect()
        } else {
            let mut out = Vec::new();
            let mut word = Vec::with_capacity(n);
            for (i, v) in self.vertices.iter().enumerate() {
                word.clear();
                word.extend_from_slice(v);
                self.extend(i, n, &mut word, &mut out);
            }
            out
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn extend(&self, at: usize, n: usize, word: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        for &j in &self.successors[at] {
            word.push(*self.vertices[j].last().expect("memory >= 1"));
            self.extend(j, n, word, out);
            word.pop();
        }
    }
}

fn contains_block(word: &[Symbol], block: &[Symbol]) -> bool {
    block.len() <= word.len() && word.windows(block.len()).any(|w| w == block)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn golden_mean() -> Subshift {
        let spec = SubshiftSpec::ZSft {
            alphabet: vec!["0".into(), "1".into()],
            forbidden: vec![WordSpec::Text("11".into())],
        };
        Subshift::new(Group::integers(), &spec).unwrap()
    }

    fn z3_example() -> Subshift {
        let spec: SubshiftSpec = serde_json::from_value(serde_json::json!({
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [["a","a","a"], ["b","b","b"], ["c","c","c"],
                               ["a","b","c"], ["b","c","a"], ["c","a","b"]]
        }))
        .unwrap();
        Subshift::new(Group::cyclic(3).unwrap(), &spec).unwrap()
    }

    #[test]
    fn golden_mean_languages() {
        let gm = golden_mean();
        assert_eq!(gm.language(&Subset::ints([0])).unwrap().len(), 2);
        assert_eq!(gm.language(&Subset::ints([-1, 0, 1])).unwrap().len(), 5);
        let gapped = gm.language(&Subset::ints([0, 2])).unwrap();
        assert_eq!(gapped.len(), 4);
        assert_eq!(gm.count_language(&Subset::interval(0, 3)).unwrap(), 5);
        assert_eq!(gm.count_language(&Subset::interval(0, 5)).unwrap(), 13);
    }

    #[test]
    fn full_shift_count() {
        let full = Subshift::full_shift(Group::integers(), Alphabet::from_strs(&["0", "1"]).unwrap());
        assert_eq!(full.count_language(&Subset::ints([0, 3, 7, 9])).unwrap(), 16);
    }

    #[test]
    fn projection_examples() {
        let full = Subshift::full_shift(Group::integers(), Alphabet::from_strs(&["0", "1"]).unwrap());
        let lang = full.language(&Subset::ints([1, 2, 3])).unwrap();
        assert_eq!(lang.len(), 8);
        assert_eq!(lang.project(&Subset::ints([1, 2])).unwrap().len(), 4);

        let z3 = z3_example();
        let g = z3.group().elements().unwrap();
        let k = Subset::new([Element::Residue(0), Element::Residue(1)]);
        let proj = z3.language(&g).unwrap().project(&k).unwrap();
        let rendered: Vec<String> = proj.rows().iter().map(|r| z3.alphabet().render(r)).collect();
        assert_eq!(rendered, vec!["aa", "ab", "bb", "bc", "ca", "cc"]);

        let single = PatternSet::new(Subset::ints([0, 1]), [vec![0, 1]]).unwrap();
        assert_eq!(single.project(&Subset::ints([1])).unwrap().len(), 1);
        assert!(single.project(&Subset::ints([5])).is_err());
    }

    #[test]
    fn generic_projection_requires_containment() {
        let p = Pattern::new(Subset::ints([0, 1]), vec![1, 0]).unwrap();
        let q = Pattern::new(Subset::ints([0, 1]), vec![1, 1]).unwrap();
        assert_eq!(project(&[p.clone(), q], &Subset::ints([0])).unwrap().len(), 1);
        assert!(project(&[p], &Subset::ints([2])).is_err());
    }

    #[test]
    fn explicit_finite_must_be_invariant() {
        let spec: SubshiftSpec = serde_json::from_value(serde_json::json!({
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [["a","b","c"]]
        }))
        .unwrap();
        assert!(matches!(
            Subshift::new(Group::cyclic(3).unwrap(), &spec),
            Err(Error::InvalidSubshift(_))
        ));
    }

    #[test]
    fn empty_sft_rejected() {
        let spec = SubshiftSpec::ZSft {
            alphabet: vec!["0".into(), "1".into()],
            forbidden: vec![WordSpec::Text("0".into()), WordSpec::Text("1".into())],
        };
        assert!(matches!(
            Subshift::new(Group::integers(), &spec),
            Err(Error::EmptySubshift)
        ));
        // 01 and 10 forbidden with 00 forbidden leaves only the fixed point 1^Z
        let spec = SubshiftSpec::ZSft {
            alphabet: vec!["0".into(), "1".into()],
            forbidden: vec![WordSpec::Text("00".into()), WordSpec::Text("01".into())],
        };
        let x = Subshift::new(Group::integers(), &spec).unwrap();
        assert_eq!(x.count_language(&Subset::interval(0, 4)).unwrap(), 1);
    }

    #[test]
    fn transient_words_are_trimmed() {
        // only the two fixed points survive
        let spec = SubshiftSpec::ZSft {
            alphabet: vec!["0".into(), "1".into()],
            forbidden: vec![WordSpec::Text("10".into()), WordSpec::Text("01".into())],
        };
        let x = Subshift::new(Group::integers(), &spec).unwrap();
        assert_eq!(x.count_language(&Subset::interval(0, 5)).unwrap(), 2);
        let spec = SubshiftSpec::ZSft {
            alphabet: vec!["0".into(), "1".into()],
            forbidden: vec![
                WordSpec::Text("11".into()),
                WordSpec::Text("10".into()),
            ],
        };
        let x = Subshift::new(Group::integers(), &spec).unwrap();
        // 01 is locally admissible but 1 has no successor
        assert_eq!(x.language(&Subset::ints([0])).unwrap().len(), 1);
    }

    #[test]
    fn empty_window_is_an_error() {
        assert!(golden_mean().language(&Subset::empty()).is_err());
    }
}
