//! The table of worked examples, expected against computed.

use serde::Serialize;

use crate::covers::{is_splitting, shifted_cover, KCover};
use crate::description::{preset, SystemDescription};
use crate::entropy::Flavor;
use crate::error::Result;
use crate::group::{enumerate_subsets, Element, Group, Subset};
use crate::measure::{shannon_entropy, Measure, MeasureSpec, Partition};
use crate::properties::{
    check_property, counting_lemma_check, counting_lemma_fuzz, folner_profile, infimum_rule_report, CheckOptions,
    Property, Status,
};
use crate::report::round12;
use crate::symbolic::{Alphabet, Subshift};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

fn row(id: &str, expected: impl ToString, computed: impl ToString, pass: bool) -> Row {
    Row {
        id: id.to_string(),
        expected: expected.to_string(),
        computed: computed.to_string(),
        pass,
    }
}

fn close(id: &str, expected: f64, computed: f64, tol: f64) -> Row {
    row(id, round12(expected), round12(computed), (expected - computed).abs() <= tol)
}

fn residues(xs: &[u64]) -> Subset {
    Subset::new(xs.iter().map(|&r| Element::Residue(r)))
}

/// Runs every row. `load` supplies the description for a preset name, so a
/// caller can substitute modified systems.
pub fn reproduce(load: &dyn Fn(&str) -> Result<SystemDescription>) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    z3_rows(&load("z3_example")?, &mut rows)?;
    golden_rows(&load("golden_mean")?, &mut rows)?;
    shannon_rows(load, &mut rows)?;
    lemma_rows(&mut rows)?;
    splitting_rows(&mut rows)?;
    free_group_rows(&load("f2_bernoulli")?, &mut rows)?;
    Ok(rows)
}

pub fn reproduce_presets() -> Result<Vec<Row>> {
    reproduce(&preset)
}

fn z3_rows(desc: &SystemDescription, rows: &mut Vec<Row>) -> Result<()> {
    let sys = desc.load()?;
    let h = sys.entropy(Flavor::Topological)?;
    let all = residues(&[0, 1, 2]);
    let pair = residues(&[0, 1]);
    let n_all = h.min_subcover(&all)?.size;
    let n_pair = h.min_subcover(&pair)?.size;
    rows.push(row("z3 N(V^Z3)", 3, n_all, n_all == 3));
    rows.push(row("z3 N(V^{0,1})", 2, n_pair, n_pair == 2));
    rows.push(close("z3 Htop(Z3)", 3f64.ln(), h.value(&all)?, 1e-12));
    rows.push(close("z3 Htop({0,1})", 2f64.ln(), h.value(&pair)?, 1e-12));
    let inf = infimum_rule_report(&h, &all, 3, 3)?;
    let gap = 3f64.ln() / 3.0 - 2f64.ln() / 2.0;
    rows.push(row(
        "z3 infimum rule gap",
        round12(gap),
        round12(inf.gap),
        inf.violated && (inf.gap - gap).abs() <= 1e-9,
    ));
    let tri = KCover::new(all.clone(), vec![residues(&[0, 1]), residues(&[1, 2]), residues(&[0, 2])])?;
    let sh = crate::covers::shearer_check(&h, &tri)?;
    let excess = 3f64.ln() - 1.5 * 2f64.ln();
    rows.push(row(
        "z3 Shearer excess",
        round12(excess),
        round12(sh.lhs - sh.rhs),
        sh.violated && (sh.lhs - sh.rhs - excess).abs() <= 1e-9,
    ));
    let check = check_property(&h, Property::Sh, &all, &CheckOptions::with_max_size(3))?;
    let found = check.witnesses.iter().any(|w| w.cover.as_ref() == Some(&tri));
    rows.push(row("z3 Sh check", "fail with the 2-cover", format!("{} ({} violations)", check.status, check.violations), check.status == Status::Fail && found));
    Ok(())
}

fn golden_rows(desc: &SystemDescription, rows: &mut Vec<Row>) -> Result<()> {
    let sys = desc.load()?;
    let h = sys.entropy(Flavor::Topological)?;
    rows.push(close("golden Htop({-1,0,1})", 5f64.ln(), h.value(&Subset::interval(-1, 2))?, 1e-12));
    rows.push(close("golden Htop({-1,0})", 3f64.ln(), h.value(&Subset::ints([-1, 0]))?, 1e-12));
    rows.push(close("golden Htop({0,1})", 3f64.ln(), h.value(&Subset::ints([0, 1]))?, 1e-12));
    rows.push(close("golden Htop({0})", 2f64.ln(), h.value(&Subset::ints([0]))?, 1e-12));

    let window = Subset::interval(-1, 2);
    let ss = check_property(&h, Property::SS, &window, &CheckOptions::with_max_size(3))?;
    let witness = vec![Subset::ints([-1, 0]), Subset::ints([0, 1])];
    let only = ss.violations == 1 && ss.witnesses[0].sets == witness;
    rows.push(row(
        "golden SS check",
        "fail, witness {-1,0},{0,1}",
        format!(
            "{} ({} violations{})",
            ss.status,
            ss.violations,
            ss.witnesses.first().map(|w| format!(", first {},{}", w.sets[0], w.sets[1])).unwrap_or_default()
        ),
        ss.status == Status::Fail && only,
    ));
    let sh = check_property(&h, Property::Sh, &window, &CheckOptions::with_max_size(3))?;
    rows.push(row(
        "golden Sh check",
        "pass",
        format!("{} ({} covers)", sh.status, sh.checked),
        sh.status == Status::Pass,
    ));

    let profile = folner_profile(&h, 16)?;
    let exact = fibonacci(18) as f64;
    let last = profile.last().expect("n_max = 16").1;
    rows.push(close("golden Htop profile n=16", exact.ln() / 16.0, last, 1e-12));
    Ok(())
}

fn shannon_rows(load: &dyn Fn(&str) -> Result<SystemDescription>, rows: &mut Vec<Row>) -> Result<()> {
    for (name, window) in [
        ("bernoulli_z", Subset::interval(0, 4)),
        ("golden_mean", Subset::interval(0, 4)),
        ("z3_example", residues(&[0, 1, 2])),
    ] {
        let sys = load(name)?.load()?;
        let h = sys.entropy(Flavor::Shannon)?;
        let options = CheckOptions::with_max_size(window.len());
        let mut failed = Vec::new();
        for p in Property::ALL {
            let r = check_property(&h, p, &window, &options)?;
            if r.status != Status::Pass {
                failed.push(format!("{p}={}", r.status));
            }
        }
        rows.push(row(
            &format!("{name} Shannon M,S,Sh,SS,MC,CS"),
            "all pass",
            if failed.is_empty() { "all pass".to_string() } else { failed.join(" ") },
            failed.is_empty(),
        ));
    }
    Ok(())
}

fn lemma_rows(rows: &mut Vec<Row>) -> Result<()> {
    let fuzz = counting_lemma_fuzz(0, 1000, 6, 3)?;
    rows.push(row("counting lemma fuzz", "0 violations", format!("{} violations", fuzz.violations.len()), fuzz.violations.is_empty()));
    let cube: Vec<Vec<u16>> = (0..8u16).map(|c| vec![c & 1, c >> 1 & 1, c >> 2 & 1]).collect();
    let cover = KCover::new(
        Subset::interval(0, 3),
        vec![Subset::ints([0, 1]), Subset::ints([1, 2]), Subset::ints([0, 2])],
    )?;
    let r = counting_lemma_check(&cube, &cover)?;
    rows.push(close("counting lemma cube", r.lhs, r.rhs, 1e-12));
    Ok(())
}

fn splitting_rows(rows: &mut Vec<Row>) -> Result<()> {
    let tri = KCover::new(
        Subset::ints([0, 1, 2]),
        vec![Subset::ints([0, 1]), Subset::ints([1, 2]), Subset::ints([0, 2])],
    )?;
    let split = is_splitting(&tri).0;
    rows.push(row("split {01,12,02}", false, split, !split));
    let z = Group::integers();
    let pairs: Vec<bool> = (1..=8)
        .map(|n| Ok(is_splitting(&shifted_cover(&z, &Subset::ints([0, 1]), &Subset::interval(0, n))?).0))
        .collect::<Result<_>>()?;
    rows.push(row("split shifted {0,1}, n<=8", "all splitting", format!("{pairs:?}"), pairs.iter().all(|&b| b)));
    let triples: Vec<bool> = (4..=8)
        .map(|n| Ok(is_splitting(&shifted_cover(&z, &Subset::ints([0, 1, 3]), &Subset::interval(0, n))?).0))
        .collect::<Result<_>>()?;
    rows.push(row("split shifted {0,1,3}, 4<=n<=8", "none splitting", format!("{triples:?}"), triples.iter().all(|&b| !b)));
    Ok(())
}

fn free_group_rows(desc: &SystemDescription, rows: &mut Vec<Row>) -> Result<()> {
    let sys = desc.load()?;
    let h = sys.entropy(Flavor::Shannon)?;
    let group = sys.group().clone();
    let ball = group.ball(3)?;
    let mut worst: f64 = 0.0;
    for f in enumerate_subsets(&ball, 3) {
        worst = worst.max((h.value(&f)? - f.len() as f64 * 2f64.ln()).abs());
    }
    rows.push(row("F2 H(P^F) = |F| log 2", 0, round12(worst), worst <= 1e-12));

    let e = Subset::new([group.identity(), group.generator(0)?, group.generator(1)?]);
    let mut ratio = f64::INFINITY;
    for f in enumerate_subsets(&group.ball(2)?, 4) {
        ratio = ratio.min(group.product_set(&e, &f)?.len() as f64 / f.len() as f64);
    }
    rows.push(row("F2 min |EF|/|F|", ">= 2", round12(ratio), ratio >= 2.0));

    let x = &sys.subshift;
    let r = r_partition(x, &e)?;
    let measure = Measure::new(&MeasureSpec::Bernoulli { probs: vec![0.5, 0.5] }, x)?;
    let mut worst: f64 = 0.0;
    for f in enumerate_subsets(&group.ball(1)?, 2) {
        let v = shannon_entropy(x, &measure, &r, &f)?;
        worst = worst.max((v - f.len() as f64 * 4f64.ln()).abs());
    }
    rows.push(row("F2 H(R^F) = |F| log 4", 0, round12(worst), worst <= 1e-9));
    Ok(())
}

/// The four-cell partition by `(x_e x_a, x_e x_b)` on `{e, a, b}`, symbols
/// read as `±1`.
pub fn r_partition(x: &Subshift, e: &Subset) -> Result<Partition> {
    let alphabet: Alphabet = x.alphabet().clone();
    let group = x.group().clone();
    let pos = |g: Element| e.position(&g).expect("e, a, b");
    let (ie, ia, ib) = (pos(group.identity()), pos(group.generator(0)?), pos(group.generator(1)?));
    let sign = move |s: u16| if alphabet.name(s) == "-1" { -1 } else { 1 };
    Partition::from_fn(x, e.clone(), move |row| {
        format!("{},{}", sign(row[ie]) * sign(row[ia]), sign(row[ie]) * sign(row[ib]))
    })
}

fn fibonacci(n: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(18), 2584);
    }

    #[test]
    fn tampered_golden_mean_flips_rows() {
        let rows = reproduce(&|name| {
            let mut d = preset(name)?;
            if name == "golden_mean" {
                d.subshift = crate::symbolic::SubshiftSpec::ZSft {
                    alphabet: vec!["0".into(), "1".into()],
                    forbidden: vec![],
                };
            }
            Ok(d)
        })
        .unwrap();
        let ss = rows.iter().find(|r| r.id == "golden SS check").unwrap();
        assert!(!ss.pass);
    }
}
