//! `|X| ≤ ∏_K |X_K|^{1/k}` for sets of words and k-covers of their
//! coordinates.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covers::{KCover, TOLERANCE};
use crate::error::{Error, Result};
use crate::group::{Element, Subset};
use crate::symbolic::Symbol;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    /// `log |X|`.
    pub lhs: f64,
    /// `(1/k) Σ_K log |X_K|`.
    pub rhs: f64,
    pub holds: bool,
    pub equality: bool,
}

/// Coordinates are `0..n`, given as the integers of the cover's base.
pub fn counting_lemma_check(words: &[Vec<Symbol>], cover: &KCover) -> Result<LemmaReport> {
    let n = cover.base().len();
    if cover.base() != &Subset::interval(0, n as i64) {
        return Err(Error::InvalidCover("the cover must be a cover of the coordinates 0..n".into()));
    }
    if words.iter().any(|w| w.len() != n) {
        return Err(Error::Support(format!("words must have length {n}")));
    }
    let distinct: BTreeSet<&Vec<Symbol>> = words.iter().collect();
    if distinct.is_empty() {
        return Err(Error::Support("empty set of words".into()));
    }
    let lhs = (distinct.len() as f64).ln();
    let mut sum = 0.0;
    for part in cover.parts() {
        let coords: Vec<usize> = part
            .iter()
            .map(|e| match e {
                Element::Lattice(v) if v.len() == 1 && (0..n as i64).contains(&v[0]) => Ok(v[0] as usize),
                _ => Err(Error::InvalidCover(format!("part {part} leaves the coordinates"))),
            })
            .collect::<Result<_>>()?;
        let projected: BTreeSet<Vec<Symbol>> = distinct
            .iter()
            .map(|w| coords.iter().map(|&i| w[i]).collect())
            .collect();
        sum += (projected.len() as f64).ln();
    }
    let rhs = sum / cover.k() as f64;
    Ok(LemmaReport {
        lhs,
        rhs,
        holds: lhs <= rhs + TOLERANCE,
        equality: (lhs - rhs).abs() <= 1e-12,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzInstance {
    pub alphabet: usize,
    pub words: Vec<Vec<Symbol>>,
    pub parts: Vec<Vec<usize>>,
    pub report: LemmaReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: usize,
    pub equalities: usize,
    pub violations: Vec<FuzzInstance>,
}

/// Random words of length `n ≤ n_max` over at most `alphabet_max` symbols,
/// with random k-covers of the coordinates.
pub fn counting_lemma_fuzz(seed: u64, trials: usize, n_max: usize, alphabet_max: usize) -> Result<FuzzReport> {
    if n_max == 0 || alphabet_max == 0 {
        return Err(Error::Support("need n_max ≥ 1 and alphabet_max ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut equalities = 0;
    for _ in 0..trials {
        let n = rng.gen_range(1..=n_max);
        let q = rng.gen_range(1..=alphabet_max);
        let all = (q as u64).pow(n as u32);
        let keep = rng.gen_range(0.05..=1.0);
        let mut words: Vec<Vec<Symbol>> = (0..all)
            .filter(|_| rng.gen_bool(keep))
            .map(|code| word(code, n, q))
            .collect();
        if words.is_empty() {
            words.push(word(rng.gen_range(0..all), n, q));
        }

        let mut parts: Vec<Vec<usize>> = (0..rng.gen_range(1..=6))
            .map(|_| {
                let mut coords: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if coords.is_empty() {
                    coords.push(rng.gen_range(0..n));
                }
                coords
            })
            .collect();
        for x in 0..n {
            if !parts.iter().any(|p| p.contains(&x)) {
                let i = rng.gen_range(0..parts.len());
                parts[i].push(x);
            }
        }
        parts.shuffle(&mut rng);
        let cover = KCover::new(
            Subset::interval(0, n as i64),
            parts
                .iter()
                .map(|p| Subset::ints(p.iter().map(|&i| i as i64)))
                .collect(),
        )?;
        let report = counting_lemma_check(&words, &cover)?;
        if report.equality {
            equalities += 1;
        }
        if !report.holds {
            violations.push(FuzzInstance {
                alphabet: q,
                words,
                parts,
                report,
            });
        }
    }
    Ok(FuzzReport {
        seed,
        trials,
        equalities,
        violations,
    })
}

fn word(mut code: u64, n: usize, q: usize) -> Vec<Symbol> {
    (0..n)
        .map(|_| {
            let s = (code % q as u64) as Symbol;
            code /= q as u64;
            s
        })
        .collect()
}
