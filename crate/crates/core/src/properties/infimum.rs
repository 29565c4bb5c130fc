//! Infimum of normalized values versus the Følner profile.

use serde_json::{json, Value};

use crate::covers::TOLERANCE;
use crate::entropy::EntropyFunction;
use crate::error::{Error, Result};
use crate::group::{enumerate_subsets, Group, Subset};

/// Smallest `H(F)/|F|` over the nonempty subsets of `window` with at most
/// `max_size` elements; the first minimizer in canonical order.
pub fn infimum_estimate(h: &EntropyFunction, window: &Subset, max_size: usize) -> Result<(f64, Subset)> {
    h.group().check_subset(window)?;
    let mut best: Option<(f64, Subset)> = None;
    for f in enumerate_subsets(window, max_size) {
        let v = h.normalized(&f)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, f));
        }
    }
    best.ok_or_else(|| Error::Support("no nonempty subset to minimize over".into()))
}

/// `(n, H(Fₙ)/|Fₙ|)` along the canonical Følner sequence for `n = 1..=n_max`.
pub fn folner_profile(h: &EntropyFunction, n_max: usize) -> Result<Vec<(usize, f64)>> {
    (1..=n_max)
        .map(|n| {
            let f = h.group().folner(n)?;
            Ok((n, h.normalized(&f)?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfimumReport {
    /// Minimum over the window subsets and the Følner sets.
    pub inf_value: f64,
    pub argmin: Subset,
    /// Minimum over the window subsets alone.
    pub window_inf: f64,
    pub window_argmin: Subset,
    pub folner_values: Vec<(usize, f64)>,
    /// The last Følner value.
    pub limsup_estimate: f64,
    pub gap: f64,
    /// The last two Følner values agree within tolerance.
    pub stabilized: bool,
    pub violated: bool,
    pub tolerance: f64,
}

impl InfimumReport {
    pub fn to_json(&self, group: &Group) -> Value {
        json!({
            "inf_value": self.inf_value,
            "argmin": group.encode_subset(&self.argmin),
            "window_inf": self.window_inf,
            "window_argmin": group.encode_subset(&self.window_argmin),
            "folner_values": self.folner_values.iter().map(|(n, v)| json!([n, v])).collect::<Vec<_>>(),
            "limsup_estimate": self.limsup_estimate,
            "gap": self.gap,
            "stabilized": self.stabilized,
            "violated": self.violated,
            "tolerance": self.tolerance,
        })
    }
}

pub fn infimum_rule_report(h: &EntropyFunction, window: &Subset, max_size: usize, n_max: usize) -> Result<InfimumReport> {
    if n_max == 0 {
        return Err(Error::Support("the Følner profile needs n_max ≥ 1".into()));
    }
    let (window_inf, window_argmin) = infimum_estimate(h, window, max_size)?;
    let folner_values = folner_profile(h, n_max)?;
    let (mut inf_value, mut argmin) = (window_inf, window_argmin.clone());
    for &(n, v) in &folner_values {
        if v < inf_value {
            inf_value = v;
            argmin = h.group().folner(n)?;
        }
    }
    let limsup_estimate = folner_values.last().expect("n_max ≥ 1").1;
    let stabilized = match folner_values.as_slice() {
        [.., (_, a), (_, b)] => (a - b).abs() <= TOLERANCE,
        _ => false,
    };
    let gap = limsup_estimate - inf_value;
    Ok(InfimumReport {
        inf_value,
        argmin,
        window_inf,
        window_argmin,
        folner_values,
        limsup_estimate,
        gap,
        stabilized,
        violated: stabilized && gap > TOLERANCE,
        tolerance: TOLERANCE,
    })
}
