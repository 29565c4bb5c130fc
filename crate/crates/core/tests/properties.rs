//! Randomized invariants over small systems, each against a direct oracle.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use entropylab::covers::{is_splitting, KCover};
use entropylab::entropy::{Cover, EntropyFunction};
use entropylab::group::{Element, Group, Letter, Subset, Word};
use entropylab::measure::{distribution, shannon_entropy, Measure, MeasureSpec, Partition};
use entropylab::properties::{check_property, CheckOptions, Property, Status};
use entropylab::properties::search::{search_counterexample, Family, SearchTarget};
use entropylab::symbolic::{Alphabet, Subshift, Symbol};

fn alphabet(q: usize) -> Alphabet {
    Alphabet::new((0..q).map(|i| i.to_string()).collect()).unwrap()
}

/// Nearest-neighbour SFT on `Z` given by an allowed-transition mask.
#[derive(Clone, Debug)]
struct Nn {
    q: usize,
    allowed: Vec<Vec<bool>>,
}

impl Nn {
    fn subshift(&self) -> Subshift {
        let mut forbidden = Vec::new();
        for a in 0..self.q {
            for b in 0..self.q {
                if !self.allowed[a][b] {
                    forbidden.push(vec![a as Symbol, b as Symbol]);
                }
            }
        }
        Subshift::sft(Group::integers(), alphabet(self.q), forbidden).unwrap()
    }

    /// Words on the sites of `f` that appear in some bi-infinite path: a
    /// locally admissible word padded by `q` sites on each side.
    fn language(&self, f: &[i64]) -> BTreeSet<Vec<Symbol>> {
        let mut out = BTreeSet::new();
        if f.is_empty() {
            out.insert(vec![]);
            return out;
        }
        let lo = f.iter().min().unwrap() - self.q as i64;
        let hi = f.iter().max().unwrap() + self.q as i64;
        let len = (hi - lo + 1) as usize;
        let mut word = vec![0usize; len];
        self.extend(&mut word, 0, &mut |w| {
            out.insert(f.iter().map(|&x| w[(x - lo) as usize] as Symbol).collect());
        });
        out
    }

    fn extend(&self, word: &mut Vec<usize>, i: usize, emit: &mut dyn FnMut(&[usize])) {
        if i == word.len() {
            emit(word);
            return;
        }
        for s in 0..self.q {
            if i == 0 || self.allowed[word[i - 1]][s] {
                word[i] = s;
                self.extend(word, i + 1, emit);
            }
        }
    }
}

fn nn_strategy() -> impl Strategy<Value = Nn> {
    (2usize..=3)
        .prop_flat_map(|q| (Just(q), proptest::collection::vec(proptest::bool::weighted(0.7), q * q)))
        .prop_map(|(q, bits)| Nn {
            q,
            allowed: bits.chunks(q).map(|c| c.to_vec()).collect(),
        })
        .prop_filter("empty subshift", |nn| !nn.language(&[0]).is_empty())
}

/// Random row-stochastic matrix with strictly positive entries.
fn stochastic(q: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(0.05f64..1.0, q), q).prop_map(|rows| {
        rows.into_iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.into_iter().map(|x| x / s).collect()
            })
            .collect()
    })
}

fn int_set(xs: &[i64]) -> Subset {
    Subset::ints(xs.iter().copied())
}

fn small_z_set(max: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::btree_set(-3i64..4, 1..=max).prop_map(|s| s.into_iter().collect())
}

fn word_strategy() -> impl Strategy<Value = Element> {
    proptest::collection::vec((0u8..2, any::<bool>()), 0..6)
        .prop_map(|ls| Element::Word(Word::from_letters(ls.into_iter().map(|(g, inv)| Letter::new(g, inv)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_group_axioms(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
        let g = Group::free(2).unwrap();
        let e = g.identity();
        prop_assert_eq!(g.op(&g.op(&a, &b).unwrap(), &c).unwrap(), g.op(&a, &g.op(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(g.op(&a, &e).unwrap(), a.clone());
        prop_assert_eq!(g.op(&e, &a).unwrap(), a.clone());
        prop_assert_eq!(g.op(&a, &g.inverse(&a).unwrap()).unwrap(), e);
        if let Element::Word(w) = g.op(&a, &b).unwrap() {
            prop_assert!(w.is_reduced());
        }
    }

    #[test]
    fn lattice_and_cyclic_axioms(
        v in proptest::collection::vec(-5i64..6, 6),
        r in proptest::collection::vec(0u64..7, 3),
    ) {
        let z2 = Group::z_power(2).unwrap();
        let (a, b, c) = (Element::Lattice(v[0..2].to_vec()), Element::Lattice(v[2..4].to_vec()), Element::Lattice(v[4..6].to_vec()));
        prop_assert_eq!(z2.op(&z2.op(&a, &b).unwrap(), &c).unwrap(), z2.op(&a, &z2.op(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(z2.op(&a, &b).unwrap(), Element::Lattice(vec![v[0] + v[2], v[1] + v[3]]));
        prop_assert_eq!(z2.op(&a, &z2.inverse(&a).unwrap()).unwrap(), z2.identity());
        let c7 = Group::cyclic(7).unwrap();
        let (x, y) = (Element::Residue(r[0]), Element::Residue(r[1]));
        prop_assert_eq!(c7.op(&x, &y).unwrap(), Element::Residue((r[0] + r[1]) % 7));
        prop_assert_eq!(c7.op(&x, &c7.inverse(&x).unwrap()).unwrap(), c7.identity());
    }

    #[test]
    fn language_matches_path_oracle(nn in nn_strategy(), f in small_z_set(4)) {
        let x = nn.subshift();
        let lang: BTreeSet<Vec<Symbol>> = x.language(&int_set(&f)).unwrap().rows().iter().cloned().collect();
        prop_assert_eq!(lang, nn.language(&f));
    }

    #[test]
    fn projection_is_consistent(nn in nn_strategy(), f in small_z_set(4), mask in 1u64..16) {
        let x = nn.subshift();
        let big = int_set(&f);
        let k = big.select(mask % (1 << f.len())).union(&Subset::empty());
        prop_assume!(!k.is_empty());
        let projected: BTreeSet<Vec<Symbol>> = x.language(&big).unwrap().project(&k).unwrap().rows().iter().cloned().collect();
        let direct: BTreeSet<Vec<Symbol>> = x.language(&k).unwrap().rows().iter().cloned().collect();
        prop_assert_eq!(projected, direct);
    }

    #[test]
    fn topological_translation_invariance(nn in nn_strategy(), f in small_z_set(3), shift in -5i64..6, cells in proptest::collection::vec(1u8..8, 1..=3)) {
        let x = Arc::new(nn.subshift());
        let cover = match time_zero_cover(&x, nn.q, &cells) { Some(c) => c, None => return Ok(()) };
        let h = EntropyFunction::topological(x, cover);
        let moved: Vec<i64> = f.iter().map(|v| v + shift).collect();
        prop_assert_eq!(h.value(&int_set(&f)).unwrap().to_bits(), h.value(&int_set(&moved)).unwrap().to_bits());
    }

    #[test]
    fn shannon_translation_invariance(m in stochastic(2), f in small_z_set(4), shift in -5i64..6) {
        let x = Subshift::full_shift(Group::integers(), alphabet(2));
        let mu = Measure::markov(&x, m, None).unwrap();
        let p = Partition::block(&x, int_set(&[0, 1])).unwrap();
        let moved: Vec<i64> = f.iter().map(|v| v + shift).collect();
        let a = shannon_entropy(&x, &mu, &p, &int_set(&f)).unwrap();
        let b = shannon_entropy(&x, &mu, &p, &int_set(&moved)).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn distributions_are_normalized(m in stochastic(3), f in small_z_set(4)) {
        let x = Subshift::full_shift(Group::integers(), alphabet(3));
        let mu = Measure::markov(&x, m, None).unwrap();
        let total: f64 = distribution(&x, &mu, &int_set(&f)).unwrap().iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn markov_marginal_matches_fill_in(m in stochastic(2), f in small_z_set(4)) {
        let x = Subshift::full_shift(Group::integers(), alphabet(2));
        let mu = Measure::markov(&x, m.clone(), None).unwrap();
        let pi = stationary_oracle(&m);
        let lo = f[0];
        let len = (f[f.len() - 1] - lo + 1) as u32;
        for (row, p) in distribution(&x, &mu, &int_set(&f)).unwrap() {
            let mut want = 0.0;
            for w in 0u32..1 << len {
                let sym = |i: usize| (w >> i & 1) as usize;
                if f.iter().zip(&row).any(|(&s, &r)| sym((s - lo) as usize) != r as usize) {
                    continue;
                }
                let mut prob = pi[sym(0)];
                for i in 1..len as usize {
                    prob *= m[sym(i - 1)][sym(i)];
                }
                want += prob;
            }
            prop_assert!((p - want).abs() < 1e-12, "{:?}: {} vs {}", row, p, want);
        }
    }

    #[test]
    fn shannon_is_strongly_subadditive_and_monotone(m in stochastic(2), a in small_z_set(3), b in small_z_set(3)) {
        let x = Subshift::full_shift(Group::integers(), alphabet(2));
        let mu = Measure::markov(&x, m, None).unwrap();
        let p = Partition::time_zero(&x).unwrap();
        let h = |s: &Subset| shannon_entropy(&x, &mu, &p, s).unwrap();
        let (a, b) = (int_set(&a), int_set(&b));
        let (u, i) = (a.union(&b), a.intersection(&b));
        prop_assert!(h(&u) + h(&i) <= h(&a) + h(&b) + 1e-9);
        prop_assert!(h(&a) <= h(&u) + 1e-9);
    }

    #[test]
    fn min_subcover_matches_exhaustive(nn in nn_strategy(), f in small_z_set(2), cells in proptest::collection::vec(1u8..8, 1..=3)) {
        let x = Arc::new(nn.subshift());
        let cover = match time_zero_cover(&x, nn.q, &cells) { Some(c) => c, None => return Ok(()) };
        let masks: Vec<u8> = cells.iter().map(|c| c & ((1 << nn.q) - 1)).collect();
        let h = EntropyFunction::topological(x, cover);
        let got = h.min_subcover(&int_set(&f)).unwrap();
        let want = exhaustive_subcover(&nn.language(&f), &masks);
        prop_assert_eq!(got.size, want);
        // the witness covers every word
        let witness = got.witness.clone();
        for word in nn.language(&f) {
            prop_assert!(witness.iter().any(|t| t.iter().zip(&word).all(|(&c, &s)| masks[c as usize] >> s & 1 == 1)));
        }
    }

    #[test]
    fn disjoint_cover_counts_language(nn in nn_strategy(), f in small_z_set(4)) {
        let x = Arc::new(nn.subshift());
        let want = nn.language(&f).len();
        prop_assume!(want > 0);
        let p = Partition::time_zero(&x).unwrap();
        let cover = Cover::from_partition(&x, &p).unwrap();
        let h = EntropyFunction::topological(x, cover);
        prop_assert_eq!(h.min_subcover(&int_set(&f)).unwrap().size, want);
        prop_assert!((h.value(&int_set(&f)).unwrap() - (want as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn witnesses_are_real(nn in nn_strategy(), cells in proptest::collection::vec(1u8..8, 2..=3)) {
        let x = Arc::new(nn.subshift());
        let cover = match time_zero_cover(&x, nn.q, &cells) { Some(c) => c, None => return Ok(()) };
        let h = EntropyFunction::topological(x, cover);
        let window = Subset::interval(0, 3);
        for prop in [Property::SS, Property::Sh, Property::S] {
            let r = check_property(&h, prop, &window, &CheckOptions::with_max_size(3)).unwrap();
            prop_assert_eq!(r.status == Status::Fail, !r.witnesses.is_empty());
            for w in &r.witnesses {
                let v = |s: &Subset| h.value(s).unwrap();
                let (lhs, rhs) = match prop {
                    Property::SS => (v(&w.sets[0].union(&w.sets[1])) + v(&w.sets[0].intersection(&w.sets[1])), v(&w.sets[0]) + v(&w.sets[1])),
                    Property::S => (v(&w.sets[0].union(&w.sets[1])), v(&w.sets[0]) + v(&w.sets[1])),
                    _ => {
                        let c = w.cover.as_ref().unwrap();
                        (v(c.base()), c.parts().iter().map(v).sum::<f64>() / c.k() as f64)
                    }
                };
                prop_assert!(lhs > rhs + 1e-9);
                prop_assert!((lhs - w.lhs).abs() < 1e-12 && (rhs - w.rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn splitting_matches_brute_force(parts in proptest::collection::vec(1u8..32, 1..=6)) {
        let base: Vec<i64> = (0..5).filter(|i| parts.iter().any(|p| p >> i & 1 == 1)).collect();
        let subsets: Vec<Subset> = parts.iter().map(|p| int_set(&(0..5).filter(|i| p >> i & 1 == 1).collect::<Vec<_>>())).collect();
        let cover = KCover::new(int_set(&base), subsets).unwrap();
        let (split, groups) = is_splitting(&cover);
        prop_assert_eq!(split, brute_splitting(&cover));
        if let Some(groups) = groups {
            prop_assert_eq!(groups.len(), cover.k());
            for g in &groups {
                let union = g.iter().fold(Subset::empty(), |acc, p| acc.union(p));
                prop_assert!(cover.base().is_subset_of(&union));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn recomputation_is_deterministic(seed in any::<u64>(), nn in nn_strategy()) {
        let x = Arc::new(nn.subshift());
        let p = Partition::time_zero(&x).unwrap();
        let a = EntropyFunction::topological(x.clone(), Cover::from_partition(&x, &p).unwrap());
        let b = EntropyFunction::topological(x.clone(), Cover::from_partition(&x, &p).unwrap());
        for f in [int_set(&[0, 2]), Subset::interval(-1, 3)] {
            prop_assert_eq!(a.value(&f).unwrap().to_bits(), b.value(&f).unwrap().to_bits());
        }
        let one = search_counterexample(Family::Disjoint, SearchTarget::Sh, 40, seed, 1).unwrap();
        let three = search_counterexample(Family::Disjoint, SearchTarget::Sh, 40, seed, 3).unwrap();
        prop_assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&three).unwrap());
    }
}

/// Time-zero cover whose cells are the symbol masks in `cells`; `None` when
/// the cells miss a symbol of the language or the subshift is empty.
fn time_zero_cover(x: &Subshift, q: usize, cells: &[u8]) -> Option<Cover> {
    let named: Vec<(String, Vec<Symbol>)> = cells
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("c{i}"), (0..q as Symbol).filter(|s| m >> s & 1 == 1).collect()))
        .collect();
    if x.count_language(&int_set(&[0])).ok()? == 0 {
        return None;
    }
    Cover::time_zero(x, named).ok()
}

/// Fewest cell tuples covering `words`, over every family of tuples.
fn exhaustive_subcover(words: &BTreeSet<Vec<Symbol>>, masks: &[u8]) -> usize {
    let n = words.iter().next().map_or(0, |w| w.len());
    let c = masks.len();
    let tuples: Vec<Vec<usize>> = (0..c.pow(n as u32))
        .map(|mut t| (0..n).map(|_| { let d = t % c; t /= c; d }).collect())
        .collect();
    let covered: Vec<u64> = tuples
        .iter()
        .map(|t| {
            words.iter().enumerate().fold(0u64, |acc, (i, w)| {
                if t.iter().zip(w).all(|(&cell, &s)| masks[cell] >> s & 1 == 1) { acc | 1 << i } else { acc }
            })
        })
        .collect();
    let full = (1u64 << words.len()) - 1;
    (0u32..1 << tuples.len())
        .filter(|fam| covered.iter().enumerate().filter(|(i, _)| fam >> i & 1 == 1).fold(0, |a, (_, m)| a | m) == full)
        .map(|fam| fam.count_ones() as usize)
        .min()
        .unwrap_or(usize::MAX)
}

fn brute_splitting(cover: &KCover) -> bool {
    let k = cover.k();
    (0..k.pow(cover.len() as u32)).any(|mut code| {
        let mut groups = vec![Vec::new(); k];
        for p in cover.parts() {
            groups[code % k].push(p);
            code /= k;
        }
        groups.iter().all(|g| cover.base().iter().all(|x| g.iter().any(|p| p.contains(x))))
    })
}

/// Left eigenvector of `m` by power iteration.
fn stationary_oracle(m: &[Vec<f64>]) -> Vec<f64> {
    let q = m.len();
    let mut v = vec![1.0 / q as f64; q];
    for _ in 0..10_000 {
        v = (0..q).map(|j| (0..q).map(|i| v[i] * m[i][j]).sum()).collect();
    }
    v
}

#[test]
fn measure_spec_rejects_bad_probabilities() {
    let x = Subshift::full_shift(Group::integers(), alphabet(2));
    assert!(Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.4, 0.4] }, &x).is_err());
    assert!(Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.5, 0.5] }, &x).is_ok());
}
