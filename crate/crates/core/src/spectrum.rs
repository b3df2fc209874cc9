//! The order-d action spectrum of the autonomous twist.
//!
//! Periodic orbit classes of period q sit where `h'(z) = p/q`; their
//! base action values coincide with the unit edge actions (plus the two
//! pole values). A degree-d collection of orbits is exactly a path
//! shape, so the base spectrum is the set of shape actions at height
//! zero, and the full spectrum adds the integer capping shifts.

use crate::action::SlopeCache;
use crate::profile::{ProfileError, TwistProfile};
use crate::shapes::{enumerate_shapes, slope_menu};
use crate::spectral::{Method, SpectralTable};
use crate::value::Value;

/// The spectrum restricted to an interval, closed under the integer
/// shift ambiguity inside it.
#[derive(Clone, Debug)]
pub struct SpectrumWindow {
    pub d: i64,
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<Value>,
    /// Smallest gap between consecutive values in the window, if at
    /// least two values landed inside.
    pub min_gap: Option<f64>,
    base: Vec<Value>,
}

impl SpectrumWindow {
    /// Membership up to tolerance (exact when both sides are exact):
    /// true when `x - base` is an integer for some base value.
    pub fn contains(&self, x: &Value, tol: f64) -> bool {
        for b in &self.base {
            let diff = x - b;
            if let Some(q) = diff.as_exact() {
                if q.is_integer() {
                    return true;
                }
            } else {
                let f = diff.to_f64();
                if (f - f.round()).abs() <= tol {
                    return true;
                }
            }
        }
        false
    }
}

/// Compute the order-d spectrum inside `[lo, hi]`.
pub fn spec_d(
    profile: &TwistProfile,
    d: i64,
    lo: f64,
    hi: f64,
) -> Result<SpectrumWindow, ProfileError> {
    assert!(lo <= hi);
    let top = profile.hprime1_int()?;
    let cache = SlopeCache::build(slope_menu(d, top).iter(), profile)?;
    let mut base: Vec<Value> = Vec::new();
    for shape in enumerate_shapes(d, top) {
        let action = shape
            .parts
            .iter()
            .fold(Value::zero(), |acc, &(s, m)| &acc + &cache.edge(s, m));
        base.push(action);
    }
    dedup_values(&mut base);
    let mut values: Vec<Value> = Vec::new();
    for b in &base {
        let bf = b.to_f64();
        let n_lo = (lo - bf).ceil() as i64;
        let n_hi = (hi - bf).floor() as i64;
        for n in n_lo..=n_hi {
            let v = b + &Value::from_int(n);
            let vf = v.to_f64();
            if vf >= lo - 1e-12 && vf <= hi + 1e-12 {
                values.push(v);
            }
        }
    }
    dedup_values(&mut values);
    let min_gap = values
        .windows(2)
        .map(|w| (w[1].to_f64() - w[0].to_f64()).abs())
        .fold(None, |acc: Option<f64>, g| {
            Some(acc.map_or(g, |a| a.min(g)))
        });
    Ok(SpectrumWindow {
        d,
        lo,
        hi,
        values,
        min_gap,
        base,
    })
}

fn dedup_values(values: &mut Vec<Value>) {
    values.sort_by(|a, b| a.total_cmp(b));
    values.dedup_by(|a, b| match (a.as_exact(), b.as_exact()) {
        (Some(x), Some(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= 1e-12,
    });
}

#[derive(Clone, Debug)]
pub struct SpectralityViolation {
    pub d: i64,
    pub k: i64,
    pub value: String,
}

/// Every exact or brute table value must lie in the order-d spectrum.
pub fn spectrality_check(
    table: &SpectralTable,
    profile: &TwistProfile,
) -> Result<Vec<SpectralityViolation>, ProfileError> {
    let mut violations = Vec::new();
    let mut windows: std::collections::HashMap<i64, SpectrumWindow> = Default::default();
    for row in &table.rows {
        let value = match (&row.value, row.method) {
            (Some(v), Method::Brute) | (Some(v), Method::MinMax) => v,
            _ => continue,
        };
        let window = match windows.entry(row.d) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(spec_d(profile, row.d, 0.0, 1.0)?)
            }
        };
        if !window.contains(value, 1e-8) {
            violations.push(SpectralityViolation {
                d: row.d,
                k: row.k,
                value: value.to_string(),
            });
        }
    }
    Ok(violations)
}
