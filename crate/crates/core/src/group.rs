//! Acting groups: canonical elements, finite subsets, translates, product
//! sets and the canonical Følner sequence.
//!
//! Four kinds of group are supported: cyclic groups `Z/n`, lattices `Z^d`,
//! finite groups given by a Cayley table and free groups of finite rank. All
//! translates are right translates `Fg = {fg : f in F}`, matching the shift
//! action `(gx)_h = x_{hg}` used by the symbolic layer.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Longest reduced word a free-group element may have unless configured
/// otherwise.
pub const DEFAULT_MAX_WORD_LEN: usize = 32;

/// Serializable description of an acting group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic {
        n: u64,
    },
    ZPower {
        d: usize,
    },
    FiniteExplicit {
        table: Vec<Vec<usize>>,
    },
    Free {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_word_len: Option<usize>,
    },
}

/// A free generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn to_char(self) -> char {
        let c = (b'a' + self.generator) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// Reduced word in a free group, ordered shortlex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from letters, freely reducing it.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverted())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Parses `e` (identity) or a string of letters where `a..z` are
    /// generators and `A..Z` their inverses.
    pub fn parse(s: &str) -> Option<Word> {
        if s == "e" || s.is_empty() {
            return Some(Word::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            if c.is_ascii_lowercase() {
                letters.push(Letter::new(c as u8 - b'a', false));
            } else if c.is_ascii_uppercase() {
                letters.push(Letter::new(c.to_ascii_lowercase() as u8 - b'a', true));
            } else {
                return None;
            }
        }
        Some(Word::from_letters(letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Group element in canonical form. Equality of elements is equality of
/// canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Residue in `[0, n)` of a cyclic group.
    Residue(u64),
    /// Integer vector of `Z^d`.
    Lattice(Vec<i64>),
    /// Row index into a Cayley table.
    Index(usize),
    /// Reduced free-group word.
    Word(Word),
}

impl Element {
    /// Shorthand for an element of `Z`.
    pub fn int(x: i64) -> Self {
        Element::Lattice(vec![x])
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Residue(r) => write!(f, "{r}"),
            Element::Lattice(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Lattice(v) => write!(f, "({})", v.iter().join(",")),
            Element::Index(i) => write!(f, "{i}"),
            Element::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Duplicate-free, canonically sorted finite subset of a group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(Vec<Element>);

impl Subset {
    pub fn new(elements: impl IntoIterator<Item = Element>) -> Self {
        let mut v: Vec<Element> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        Subset(v)
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    /// The integer interval `[start, end)` of `Z`.
    pub fn interval(start: i64, end: i64) -> Self {
        Subset((start..end).map(Element::int).collect())
    }

    /// Subset of `Z` from integers.
    pub fn ints(xs: impl IntoIterator<Item = i64>) -> Self {
        Subset::new(xs.into_iter().map(Element::int))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.0.iter()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.0.binary_search(e).is_ok()
    }

    pub fn position(&self, e: &Element) -> Option<usize> {
        self.0.binary_search(e).ok()
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset(
            self.0
                .iter()
                .merge(other.0.iter())
                .dedup()
                .cloned()
                .collect(),
        )
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset(
            self.0
                .iter()
                .filter(|e| other.contains(e))
                .cloned()
                .collect(),
        )
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        Subset(
            self.0
                .iter()
                .filter(|e| !other.contains(e))
                .cloned()
                .collect(),
        )
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.0.iter().all(|e| other.contains(e))
    }

    /// Subset made of the elements at the given positions.
    pub fn select(&self, mask: u64) -> Subset {
        Subset(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect(),
        )
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl FromIterator<Element> for Subset {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        Subset::new(iter)
    }
}

impl<'a> IntoIterator for &'a Subset {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug)]
struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// A validated acting group.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    cayley: Option<Arc<CayleyTable>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let mut cayley = None;
        match &spec {
            GroupSpec::Cyclic { n } => {
                if *n == 0 {
                    return Err(Error::InvalidGroup("cyclic order must be >= 1".into()));
                }
            }
            GroupSpec::ZPower { d } => {
                if *d == 0 {
                    return Err(Error::InvalidGroup("lattice dimension must be >= 1".into()));
                }
            }
            GroupSpec::Free { rank, max_word_len } => {
                if *rank == 0 || *rank > 26 {
                    return Err(Error::InvalidGroup("free rank must lie in 1..=26".into()));
                }
                if max_word_len == &Some(0) {
                    return Err(Error::InvalidGroup("max_word_len must be >= 1".into()));
                }
            }
            GroupSpec::FiniteExplicit { table } => {
                cayley = Some(Arc::new(validate_table(table)?));
            }
        }
        Ok(Group { spec, cayley })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Group::new(GroupSpec::Cyclic { n })
    }

    /// The integers `Z`.
    pub fn integers() -> Self {
        Group::new(GroupSpec::ZPower { d: 1 }).expect("Z is a valid group")
    }

    pub fn z_power(d: usize) -> Result<Self> {
        Group::new(GroupSpec::ZPower { d })
    }

    pub fn free(rank: usize) -> Result<Self> {
        Group::new(GroupSpec::Free {
            rank,
            max_word_len: None,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn max_word_len(&self) -> usize {
        match &self.spec {
            GroupSpec::Free { max_word_len, .. } => max_word_len.unwrap_or(DEFAULT_MAX_WORD_LEN),
            _ => usize::MAX,
        }
    }

    /// Number of elements for finite groups.
    pub fn order(&self) -> Option<usize> {
        match &self.spec {
            GroupSpec::Cyclic { n } => Some(*n as usize),
            GroupSpec::FiniteExplicit { table } => Some(table.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Whether the group is `Z`.
    pub fn is_integers(&self) -> bool {
        matches!(self.spec, GroupSpec::ZPower { d: 1 })
    }

    pub fn identity(&self) -> Element {
        match &self.spec {
            GroupSpec::Cyclic { .. } => Element::Residue(0),
            GroupSpec::ZPower { d } => Element::Lattice(vec![0; *d]),
            GroupSpec::FiniteExplicit { .. } => Element::Index(self.table().identity),
            GroupSpec::Free { .. } => Element::Word(Word::identity()),
        }
    }

    fn table(&self) -> &CayleyTable {
        self.cayley.as_deref().expect("finite_explicit group carries a table")
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (&self.spec, e) {
            (GroupSpec::Cyclic { n }, Element::Residue(r)) => r < n,
            (GroupSpec::ZPower { d }, Element::Lattice(v)) => v.len() == *d,
            (GroupSpec::FiniteExplicit { table }, Element::Index(i)) => *i < table.len(),
            (GroupSpec::Free { rank, .. }, Element::Word(w)) => {
                w.is_reduced()
                    && w.len() <= self.max_word_len()
                    && w.letters().iter().all(|l| (l.generator as usize) < *rank)
            }
            _ => false,
        }
    }

    pub fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::MixedGroups(e.to_string()))
        }
    }

    pub fn check_subset(&self, s: &Subset) -> Result<()> {
        s.iter().try_for_each(|e| self.check(e))
    }

    /// Group product `gh` in canonical form.
    pub fn op(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (&self.spec, g, h) {
            (GroupSpec::Cyclic { n }, Element::Residue(a), Element::Residue(b)) => {
                Element::Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (GroupSpec::ZPower { .. }, Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupSpec::FiniteExplicit { .. }, Element::Index(a), Element::Index(b)) => {
                Element::Index(self.table().table[*a][*b])
            }
            (GroupSpec::Free { .. }, Element::Word(a), Element::Word(b)) => {
                let w = a.concat(b);
                if w.len() > self.max_word_len() {
                    return Err(Error::WordTooLong(self.max_word_len()));
                }
                Element::Word(w)
            }
            _ => unreachable!("operands were checked against the group"),
        })
    }

    pub fn inverse(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(match (&self.spec, g) {
            (GroupSpec::Cyclic { n }, Element::Residue(a)) => Element::Residue((n - a) % n),
            (GroupSpec::ZPower { .. }, Element::Lattice(a)) => {
                Element::Lattice(a.iter().map(|x| -x).collect())
            }
            (GroupSpec::FiniteExplicit { .. }, Element::Index(a)) => {
                Element::Index(self.table().inverses[*a])
            }
            (GroupSpec::Free { .. }, Element::Word(w)) => Element::Word(w.inverse()),
            _ => unreachable!("operand was checked against the group"),
        })
    }

    /// Right translate `Fg`.
    pub fn translate(&self, f: &Subset, g: &Element) -> Result<Subset> {
        f.iter().map(|x| self.op(x, g)).collect()
    }

    /// Product set `EF = {ef : e in E, f in F}`.
    pub fn product_set(&self, e: &Subset, f: &Subset) -> Result<Subset> {
        e.iter()
            .cartesian_product(f.iter())
            .map(|(x, y)| self.op(x, y))
            .collect()
    }

    pub fn inverse_set(&self, f: &Subset) -> Result<Subset> {
        f.iter().map(|x| self.inverse(x)).collect()
    }

    /// All elements of a finite group, in canonical order.
    pub fn elements(&self) -> Option<Subset> {
        match &self.spec {
            GroupSpec::Cyclic { n } => Some(Subset((0..*n).map(Element::Residue).collect())),
            GroupSpec::FiniteExplicit { table } => {
                Some(Subset((0..table.len()).map(Element::Index).collect()))
            }
            _ => None,
        }
    }

    /// Position of an element of a finite group in its canonical listing.
    pub fn finite_index(&self, e: &Element) -> Option<usize> {
        match (&self.spec, e) {
            (GroupSpec::Cyclic { n }, Element::Residue(r)) if r < n => Some(*r as usize),
            (GroupSpec::FiniteExplicit { table }, Element::Index(i)) if *i < table.len() => {
                Some(*i)
            }
            _ => None,
        }
    }

    /// The `n`-th set of the canonical Følner sequence: the box `[0,n)^d` for
    /// `Z^d`, the whole group for finite groups.
    pub fn folner(&self, n: usize) -> Result<Subset> {
        if n == 0 {
            return Err(Error::InvalidGroup("Følner index must be >= 1".into()));
        }
        match &self.spec {
            GroupSpec::ZPower { d } => Ok(Subset::new(
                (0..*d)
                    .map(|_| 0..n as i64)
                    .multi_cartesian_product()
                    .map(Element::Lattice),
            )),
            GroupSpec::Cyclic { .. } | GroupSpec::FiniteExplicit { .. } => {
                Ok(self.elements().expect("finite group"))
            }
            GroupSpec::Free { rank, .. } => Err(Error::NoFolner(format!("free group of rank {rank}"))),
        }
    }

    /// Free-group generator `i` (0 = a, 1 = b, ...).
    pub fn generator(&self, i: usize) -> Result<Element> {
        let e = Element::Word(Word::from_letters([Letter::new(i as u8, false)]));
        self.check(&e)?;
        Ok(e)
    }

    /// All free-group words of length at most `radius`.
    pub fn ball(&self, radius: usize) -> Result<Subset> {
        let GroupSpec::Free { rank, .. } = &self.spec else {
            return Err(Error::InvalidGroup("balls are only provided for free groups".into()));
        };
        let letters: Vec<Letter> = (0..*rank as u8)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect();
        let mut layer = vec![Word::identity()];
        let mut all = layer.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &layer {
                for l in &letters {
                    if w.letters().last() != Some(&l.inverted()) {
                        let mut v = w.letters().to_vec();
                        v.push(*l);
                        next.push(Word(v));
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        let out = Subset::new(all.into_iter().map(Element::Word));
        self.check_subset(&out)?;
        Ok(out)
    }

    /// Decodes an element from its JSON form: an integer for cyclic, finite
    /// and `Z` groups, an integer array for `Z^d`, a word string for free
    /// groups.
    pub fn parse_element(&self, v: &Value) -> Result<Element> {
        let bad = || Error::MixedGroups(v.to_string());
        let e = match &self.spec {
            GroupSpec::Cyclic { .. } => Element::Residue(v.as_u64().ok_or_else(bad)?),
            GroupSpec::FiniteExplicit { .. } => {
                Element::Index(v.as_u64().ok_or_else(bad)? as usize)
            }
            GroupSpec::ZPower { d } => match v {
                Value::Number(n) if *d == 1 => Element::int(n.as_i64().ok_or_else(bad)?),
                Value::Array(xs) => Element::Lattice(
                    xs.iter()
                        .map(|x| x.as_i64().ok_or_else(bad))
                        .collect::<Result<_>>()?,
                ),
                _ => return Err(bad()),
            },
            GroupSpec::Free { .. } => {
                let s = v.as_str().ok_or_else(bad)?;
                Element::Word(Word::parse(s).ok_or_else(bad)?)
            }
        };
        self.check(&e)?;
        Ok(e)
    }

    pub fn encode_element(&self, e: &Element) -> Value {
        match e {
            Element::Residue(r) => Value::from(*r),
            Element::Lattice(v) if v.len() == 1 && self.is_integers() => Value::from(v[0]),
            Element::Lattice(v) => Value::from(v.clone()),
            Element::Index(i) => Value::from(*i),
            Element::Word(w) => Value::from(w.to_string()),
        }
    }

    pub fn parse_subset(&self, v: &Value) -> Result<Subset> {
        let Value::Array(items) = v else {
            return Err(Error::Support(format!("expected an array of elements, got {v}")));
        };
        items.iter().map(|x| self.parse_element(x)).collect()
    }

    pub fn encode_subset(&self, s: &Subset) -> Value {
        Value::Array(s.iter().map(|e| self.encode_element(e)).collect())
    }
}

fn validate_table(table: &[Vec<usize>]) -> Result<CayleyTable> {
    let m = table.len();
    let bad = |msg: &str| Err(Error::InvalidGroup(format!("cayley table: {msg}")));
    if m == 0 {
        return bad("empty table");
    }
    if table.iter().any(|row| row.len() != m || row.iter().any(|&x| x >= m)) {
        return bad("rows must have length m with entries in [0, m)");
    }
    let Some(identity) = (0..m).find(|&e| (0..m).all(|x| table[e][x] == x && table[x][e] == x))
    else {
        return bad("no identity element");
    };
    let mut inverses = Vec::with_capacity(m);
    for (x, row) in table.iter().enumerate() {
        match (0..m).find(|&y| row[y] == identity && table[y][x] == identity) {
            Some(y) => inverses.push(y),
            None => return bad(&format!("element {x} has no inverse")),
        }
    }
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return bad(&format!("not associative at ({a},{b},{c})"));
                }
            }
        }
    }
    Ok(CayleyTable {
        table: table.to_vec(),
        identity,
        inverses,
    })
}

/// All nonempty subsets of `window` with at most `max_size` elements, ordered
/// by size and then lexicographically.
pub fn enumerate_subsets(window: &Subset, max_size: usize) -> impl Iterator<Item = Subset> + '_ {
    let max_size = max_size.min(window.len());
    (1..=max_size).flat_map(move |k| {
        window
            .elements()
            .iter()
            .combinations(k)
            .map(|c| Subset(c.into_iter().cloned().collect()))
    })
}
