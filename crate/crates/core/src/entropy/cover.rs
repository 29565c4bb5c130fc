use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use crate::entropy::setcover::{self, Limits};
use crate::error::{Error, Result};
use crate::group::Subset;
use crate::measure::{refinement_layout, Partition};
use crate::symbolic::{PatternSet, Subshift, Symbol};

/// A named set of patterns on the cover support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub rows: BTreeSet<Vec<Symbol>>,
}

/// A cylinder cover of a subshift: finitely many sets of patterns on a
/// common support `S` whose union contains `language(S)`.
#[derive(Clone, Debug)]
pub struct Cover {
    support: Subset,
    cells: Vec<Cell>,
    membership: HashMap<Vec<Symbol>, Vec<u32>>,
    disjoint: bool,
}

impl Cover {
    pub fn new(subshift: &Subshift, support: Subset, cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidObservable("a cover needs at least one cell".into()));
        }
        if cells.len() > u32::MAX as usize {
            return Err(Error::InvalidObservable("too many cells".into()));
        }
        if cells
            .iter()
            .flat_map(|c| c.rows.iter())
            .any(|r| r.len() != support.len())
        {
            return Err(Error::InvalidObservable("cell pattern has the wrong length".into()));
        }
        let lang = subshift.language(&support)?;
        let mut membership = HashMap::with_capacity(lang.len());
        for row in lang.rows() {
            let owners: Vec<u32> = cells
                .iter()
                .enumerate()
                .filter(|(_, c)| c.rows.contains(row))
                .map(|(i, _)| i as u32)
                .collect();
            if owners.is_empty() {
                return Err(Error::InvalidObservable(format!(
                    "the cells do not cover the pattern {}",
                    subshift.alphabet().render(row)
                )));
            }
            membership.insert(row.clone(), owners);
        }
        let disjoint = cells
            .iter()
            .tuple_combinations()
            .all(|(a, b)| a.rows.is_disjoint(&b.rows));
        Ok(Cover {
            support,
            cells,
            membership,
            disjoint,
        })
    }

    /// Time-zero cover whose cells are sets of symbols.
    pub fn time_zero(subshift: &Subshift, cells: Vec<(String, Vec<Symbol>)>) -> Result<Self> {
        let e = Subset::new([subshift.group().identity()]);
        let cells = cells
            .into_iter()
            .map(|(name, symbols)| Cell {
                name,
                rows: symbols.into_iter().map(|s| vec![s]).collect(),
            })
            .collect();
        Cover::new(subshift, e, cells)
    }

    /// The cover whose cells are the label classes of a partition.
    pub fn from_partition(subshift: &Subshift, partition: &Partition) -> Result<Self> {
        let mut cells: BTreeMap<String, BTreeSet<Vec<Symbol>>> = BTreeMap::new();
        for (row, label) in partition.entries() {
            cells.entry(label).or_default().insert(row);
        }
        Cover::new(
            subshift,
            partition.support().clone(),
            cells
                .into_iter()
                .map(|(name, rows)| Cell { name, rows })
                .collect(),
        )
    }

    pub fn support(&self) -> &Subset {
        &self.support
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_disjoint(&self) -> bool {
        self.disjoint
    }

    /// Cells containing a pattern of `language(S)`.
    pub fn cells_containing(&self, row: &[Symbol]) -> Option<&[u32]> {
        self.membership.get(row).map(Vec::as_slice)
    }

    /// The partition with one label per cell, when the cells are disjoint.
    pub fn to_partition(&self, subshift: &Subshift) -> Result<Partition> {
        if !self.disjoint {
            return Err(Error::InvalidObservable(
                "a non-disjoint cover is not a partition".into(),
            ));
        }
        let entries = self
            .membership
            .iter()
            .map(|(row, owners)| (row.clone(), self.cells[owners[0] as usize].name.clone()));
        Partition::new(subshift, self.support.clone(), entries)
    }

    pub fn render_tuple(&self, tuple: &[u32]) -> String {
        tuple
            .iter()
            .map(|&c| self.cells[c as usize].name.as_str())
            .join("×")
    }
}

/// One element `∩_{f∈F} f⁻¹ U_{c_f}` of the refined cover `U^F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedElement {
    /// Cell index chosen at each `f`, in the order of `F`.
    pub tuple: Vec<u32>,
    /// Indices into the language on `SF` of the patterns it contains.
    pub covered: Vec<usize>,
}

impl RefinedElement {
    pub fn is_empty(&self) -> bool {
        self.covered.is_empty()
    }
}

/// The refined cover `U^F` restricted to the subshift.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub language: PatternSet,
    pub elements: Vec<RefinedElement>,
}

/// Largest number of tuples [`refined_cover_elements`] will list.
pub const MAX_LISTED_TUPLES: usize = 100_000;

/// Lists every tuple `(cell_f)_{f∈F}`, empty ones included, with the
/// patterns of `language(SF)` it covers.
pub fn refined_cover_elements(subshift: &Subshift, cover: &Cover, f: &Subset) -> Result<Refinement> {
    if f.is_empty() {
        return Err(Error::Support("refinement over the empty set".into()));
    }
    let total = (cover.cells.len() as f64).powi(f.len() as i32);
    if total > MAX_LISTED_TUPLES as f64 {
        return Err(Error::Resource(format!(
            "refined cover has {total} tuples, more than {MAX_LISTED_TUPLES}"
        )));
    }
    let (language, tuples) = nonempty_elements(subshift, cover, f, &Limits::default())?;
    let elements = (0..f.len())
        .map(|_| 0..cover.cells.len() as u32)
        .multi_cartesian_product()
        .map(|tuple| {
            let covered = tuples
                .get(&tuple)
                .map(|b| b.ones().collect())
                .unwrap_or_default();
            RefinedElement { tuple, covered }
        })
        .collect();
    Ok(Refinement { language, elements })
}

/// Nonempty elements of `U^F` keyed by tuple, each with the bitset of the
/// patterns of `language(SF)` it contains.
fn nonempty_elements(
    subshift: &Subshift,
    cover: &Cover,
    f: &Subset,
    limits: &Limits,
) -> Result<(PatternSet, BTreeMap<Vec<u32>, FixedBitSet>)> {
    let (sf, layout) = refinement_layout(subshift.group(), cover.support(), f)?;
    let language = subshift.language(&sf)?;
    let universe = language.len();
    if universe > limits.max_universe {
        return Err(Error::Resource(format!(
            "language on {} sites has {universe} patterns",
            sf.len()
        )));
    }
    let mut tuples: BTreeMap<Vec<u32>, FixedBitSet> = BTreeMap::new();
    let mut local = Vec::with_capacity(cover.support().len());
    for (idx, row) in language.rows().iter().enumerate() {
        let mut choices: Vec<&[u32]> = Vec::with_capacity(layout.len());
        for pos in &layout {
            local.clear();
            local.extend(pos.iter().map(|&i| row[i]));
            let owners = cover.cells_containing(&local).ok_or_else(|| {
                Error::InvalidObservable(format!(
                    "pattern {} is not covered",
                    subshift.alphabet().render(&local)
                ))
            })?;
            choices.push(owners);
        }
        for tuple in choices
            .iter()
            .map(|c| c.iter().copied())
            .multi_cartesian_product()
        {
            let entry = tuples
                .entry(tuple)
                .or_insert_with(|| FixedBitSet::with_capacity(universe));
            entry.insert(idx);
        }
        if tuples.len() > limits.max_sets {
            return Err(Error::Resource(format!(
                "refined cover has more than {} nonempty elements",
                limits.max_sets
            )));
        }
    }
    Ok((language, tuples))
}

/// Result of a minimum subcover computation.
#[derive(Clone, Debug, PartialEq)]
pub struct Subcover {
    /// `N(U^F)`.
    pub size: usize,
    /// One minimum subcover, as cell tuples in canonical order.
    pub witness: Vec<Vec<u32>>,
    /// Number of patterns of `language(SF)`.
    pub universe: usize,
    /// Number of nonempty refined-cover elements.
    pub nonempty: usize,
    /// Number of empty refined-cover elements (excluded from the instance).
    pub empty: f64,
    pub nodes: u64,
}

/// `N(U^F)`: the smallest number of elements of the refined cover whose
/// union contains every pattern of the subshift on `SF`.
pub fn min_subcover(subshift: &Subshift, cover: &Cover, f: &Subset, limits: &Limits) -> Result<Subcover> {
    if f.is_empty() {
        return Err(Error::Support("refinement over the empty set".into()));
    }
    let (language, tuples) = nonempty_elements(subshift, cover, f, limits)?;
    let (keys, sets): (Vec<Vec<u32>>, Vec<FixedBitSet>) = tuples.into_iter().unzip();
    let solution = setcover::solve(language.len(), &sets, limits)?;
    let total = (cover.cells.len() as f64).powi(f.len() as i32);
    Ok(Subcover {
        size: solution.size(),
        witness: solution.chosen.iter().map(|&i| keys[i].clone()).collect(),
        universe: language.len(),
        nonempty: keys.len(),
        empty: total - keys.len() as f64,
        nodes: solution.nodes,
    })
}
