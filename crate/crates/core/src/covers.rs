//! k-covers of finite sets: coverage counts, shifted covers, enumeration,
//! splitting and Shearer's inequality.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use serde_json::{json, Value};

use crate::entropy::EntropyFunction;
use crate::error::{Error, Result};
use crate::group::{enumerate_subsets, Group, Subset};

/// Absolute tolerance on log-scale values.
pub const TOLERANCE: f64 = 1e-9;

/// A multiset of nonempty sets covering every point of `base` at least
/// `k` times, repeated parts counted separately.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KCover {
    base: Subset,
    parts: Vec<Subset>,
    k: usize,
}

impl KCover {
    pub fn new(base: Subset, mut parts: Vec<Subset>) -> Result<Self> {
        if parts.iter().any(Subset::is_empty) {
            return Err(Error::InvalidCover("empty part".into()));
        }
        parts.sort();
        let k = coverage_count(&base, &parts)?;
        Ok(KCover { base, parts, k })
    }

    pub fn base(&self) -> &Subset {
        &self.base
    }

    /// Parts in sorted order, repeats adjacent.
    pub fn parts(&self) -> &[Subset] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Distinct parts with their multiplicities.
    pub fn multiplicities(&self) -> Vec<(&Subset, usize)> {
        let mut out: Vec<(&Subset, usize)> = Vec::new();
        for p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn to_json(&self, group: &Group) -> Value {
        json!({
            "base": group.encode_subset(&self.base),
            "k": self.k,
            "parts": self.multiplicities().iter().map(|(p, m)| json!({
                "set": group.encode_subset(p),
                "multiplicity": m,
            })).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for KCover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-cover of {} by [", self.k, self.base)?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Minimum over the base of the number of parts containing each point.
pub fn coverage_count(base: &Subset, parts: &[Subset]) -> Result<usize> {
    if base.is_empty() {
        return Err(Error::InvalidCover("empty base set".into()));
    }
    let k = base
        .iter()
        .map(|x| parts.iter().filter(|p| p.contains(x)).count())
        .min()
        .unwrap_or(0);
    if k == 0 {
        let x = base
            .iter()
            .find(|x| !parts.iter().any(|p| p.contains(x)))
            .expect("uncovered point");
        return Err(Error::InvalidCover(format!("{x} is not covered")));
    }
    Ok(k)
}

/// The cover `{Fg : g ∈ F⁻¹E}` of `E`, one part per translating element.
pub fn shifted_cover(group: &Group, f: &Subset, e: &Subset) -> Result<KCover> {
    if f.is_empty() {
        return Err(Error::InvalidCover("empty shape".into()));
    }
    let shifts = group.product_set(&group.inverse_set(f)?, e)?;
    let parts = shifts
        .iter()
        .map(|g| group.translate(f, g))
        .collect::<Result<Vec<_>>>()?;
    KCover::new(e.clone(), parts)
}

/// Default cap on the number of covers [`enumerate_kcovers`] may return.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Every multiset of at most `max_parts` nonempty subsets of `f`, each
/// repeated at most `max_mult` times, covering `f` at least `k` times.
///
/// Covers come ordered by number of parts, then lexicographically by the
/// canonical indices of their parts.
pub fn enumerate_kcovers(
    f: &Subset,
    k: usize,
    max_parts: usize,
    max_mult: usize,
    cap: usize,
) -> Result<Vec<KCover>> {
    if f.is_empty() {
        return Err(Error::InvalidCover("empty base set".into()));
    }
    if f.len() > 20 {
        return Err(Error::Resource(format!("{} points is too many to enumerate covers", f.len())));
    }
    let candidates: Vec<Subset> = enumerate_subsets(f, f.len()).filter(|s| !s.is_empty()).collect();
    let masks: Vec<Vec<usize>> = candidates
        .iter()
        .map(|c| c.iter().map(|x| f.position(x).expect("subset of f")).collect())
        .collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; f.len()];
    let mut chosen = Vec::new();
    for r in 1..=max_parts {
        extend(
            &Enumeration {
                masks: &masks,
                target: r,
                k,
                max_mult,
            },
            0,
            &mut chosen,
            &mut counts,
            &mut |idx: &[usize]| {
                if out.len() >= cap {
                    return Err(Error::Resource(format!("more than {cap} k-covers")));
                }
                let parts = idx.iter().map(|&i| candidates[i].clone()).collect();
                out.push(KCover::new(f.clone(), parts)?);
                Ok(())
            },
        )?;
    }
    Ok(out)
}

struct Enumeration<'a> {
    masks: &'a [Vec<usize>],
    target: usize,
    k: usize,
    max_mult: usize,
}

fn extend(
    en: &Enumeration<'_>,
    start: usize,
    chosen: &mut Vec<usize>,
    counts: &mut [usize],
    emit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if chosen.len() == en.target {
        if counts.iter().all(|&c| c >= en.k) {
            emit(chosen)?;
        }
        return Ok(());
    }
    // each remaining part adds at most one to every count
    let left = en.target - chosen.len();
    if counts.iter().any(|&c| c + left < en.k) {
        return Ok(());
    }
    for i in start..en.masks.len() {
        let used = chosen.iter().rev().take_while(|&&j| j == i).count();
        if used >= en.max_mult {
            continue;
        }
        chosen.push(i);
        for &x in &en.masks[i] {
            counts[x] += 1;
        }
        extend(en, i, chosen, counts, emit)?;
        for &x in &en.masks[i] {
            counts[x] -= 1;
        }
        chosen.pop();
    }
    Ok(())
}

/// Whether the parts split into `k` sub-multisets that each cover the base,
/// with one such decomposition.
pub fn is_splitting(cover: &KCover) -> (bool, Option<Vec<Vec<Subset>>>) {
    let base = cover.base();
    let masks: Vec<FixedBitSet> = cover
        .parts()
        .iter()
        .map(|p| {
            let mut b = FixedBitSet::with_capacity(base.len());
            for (i, x) in base.iter().enumerate() {
                if p.contains(x) {
                    b.insert(i);
                }
            }
            b
        })
        .collect();
    let k = cover.k();
    let mut split = Splitter {
        masks: &masks,
        parts: cover.parts(),
        points: base.len(),
        k,
        group_of: vec![usize::MAX; masks.len()],
    };
    let mut covered = FixedBitSet::with_capacity(base.len());
    if !split.fill(0, &mut covered) {
        return (false, None);
    }
    let mut groups: Vec<Vec<Subset>> = vec![Vec::new(); k];
    for (i, &g) in split.group_of.iter().enumerate() {
        // parts left over once all groups are complete go to the first one
        let g = if g == usize::MAX { 0 } else { g };
        groups[g].push(cover.parts()[i].clone());
    }
    (true, Some(groups))
}

struct Splitter<'a> {
    masks: &'a [FixedBitSet],
    parts: &'a [Subset],
    points: usize,
    k: usize,
    group_of: Vec<usize>,
}

impl Splitter<'_> {
    /// Completes group `g` given the points it already covers.
    fn fill(&mut self, g: usize, covered: &mut FixedBitSet) -> bool {
        if g == self.k {
            return true;
        }
        let Some(x) = (0..self.points).find(|&x| !covered.contains(x)) else {
            let mut fresh = FixedBitSet::with_capacity(self.points);
            return self.fill(g + 1, &mut fresh);
        };
        if !self.enough_left(g) {
            return false;
        }
        let mut tried: Vec<&Subset> = Vec::new();
        for i in 0..self.masks.len() {
            if self.group_of[i] != usize::MAX || !self.masks[i].contains(x) {
                continue;
            }
            // identical parts are interchangeable
            if tried.contains(&&self.parts[i]) {
                continue;
            }
            tried.push(&self.parts[i]);
            self.group_of[i] = g;
            let before = covered.clone();
            covered.union_with(&self.masks[i]);
            if self.fill(g, covered) {
                return true;
            }
            *covered = before;
            self.group_of[i] = usize::MAX;
        }
        false
    }

    /// Unused parts must still cover every point once for each group from
    /// `g` on.
    fn enough_left(&self, g: usize) -> bool {
        let need = self.k - g;
        (0..self.points).all(|x| {
            let here = (0..self.masks.len())
                .filter(|&i| self.masks[i].contains(x) && (self.group_of[i] == usize::MAX || self.group_of[i] == g))
                .count();
            here >= need
        })
    }
}

/// Both sides of Shearer's inequality for one cover.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShearerReport {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    /// `rhs − lhs`; negative when violated.
    pub margin: f64,
}

/// `H(F) ≤ (1/k) Σ_K H(K)` for the base `F` of the cover.
pub fn shearer_check(h: &EntropyFunction, cover: &KCover) -> Result<ShearerReport> {
    let lhs = h.value(cover.base())?;
    let mut sum = 0.0;
    for part in cover.parts() {
        sum += h.value(part)?;
    }
    let rhs = sum / cover.k() as f64;
    Ok(ShearerReport {
        lhs,
        rhs,
        violated: lhs > rhs + TOLERANCE,
        margin: rhs - lhs,
    })
}
