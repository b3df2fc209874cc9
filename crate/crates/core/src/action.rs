//! Path actions.
//!
//! Slope-zero edges contribute nothing, the top-slope edge contributes
//! `m h(1)/2`, and an interior edge of slope `p/q` contributes
//! `(m/2)(p(1 - z) + q h(z))` where `h'(z) = p/q`. A path's action is its
//! start height plus the edge contributions; for exact profiles every
//! value is an exact rational, which removes all tie-breaking ambiguity
//! from the spectral maximization.

use crate::path::{Edge, LatticePath, Slope};
use crate::profile::{ProfileError, TwistProfile};
use crate::value::Value;
use std::cmp::Ordering;
use std::collections::HashMap;

/// Comparison tolerance for actions of numeric profiles.
pub const ACTION_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ActionBreakdown {
    pub start_y: i64,
    pub per_edge: Vec<(Slope, i64, Value)>,
}

/// An action together with how it decomposes over the path.
#[derive(Clone, Debug)]
pub struct ActionValue {
    pub value: Value,
    pub breakdown: ActionBreakdown,
}

fn is_top_slope(slope: Slope, profile: &TwistProfile) -> bool {
    let s = Value::from_ratio(slope.p, slope.q);
    s.cmp_tol(&profile.hprime1(), 1e-9) == Ordering::Equal
}

/// Action of the unit edge at `slope`, before multiplying by the edge
/// multiplicity.
pub fn unit_action(slope: Slope, profile: &TwistProfile) -> Result<Value, ProfileError> {
    if slope.is_zero() {
        return Ok(Value::zero());
    }
    if is_top_slope(slope, profile) {
        return Ok(profile.h1().scale_ratio(1, 2));
    }
    let s = Value::from_ratio(slope.p, slope.q);
    if s.cmp_tol(&profile.hprime1(), 1e-9) == Ordering::Greater {
        return Err(ProfileError::SlopeOutOfRange(slope));
    }
    let z = profile.z_of_slope(slope)?;
    let h = profile.h_at(&z);
    // (1/2)(p(1 - z) + q h(z))
    let one_minus_z = &Value::from_int(1) - &z;
    let term = &one_minus_z.scale_int(slope.p) + &h.scale_int(slope.q);
    Ok(term.scale_ratio(1, 2))
}

/// Action of an edge `m (q, p)`.
pub fn edge_action(edge: &Edge, profile: &TwistProfile) -> Result<Value, ProfileError> {
    Ok(unit_action(edge.slope, profile)?.scale_int(edge.multiplicity))
}

/// Per-slope memo of unit actions; built once, then read-only, so the
/// enumeration loops can share it across threads.
#[derive(Clone, Debug, Default)]
pub struct SlopeCache {
    map: HashMap<Slope, Value>,
}

impl SlopeCache {
    pub fn build<'a, I: IntoIterator<Item = &'a Slope>>(
        slopes: I,
        profile: &TwistProfile,
    ) -> Result<Self, ProfileError> {
        let mut map = HashMap::new();
        for &s in slopes {
            map.insert(s, unit_action(s, profile)?);
        }
        Ok(SlopeCache { map })
    }

    pub fn unit(&self, slope: Slope) -> &Value {
        self.map
            .get(&slope)
            .expect("slope missing from action cache")
    }

    pub fn edge(&self, slope: Slope, multiplicity: i64) -> Value {
        self.unit(slope).scale_int(multiplicity)
    }
}

/// Total action `y + Σ edge actions`.
pub fn path_action(path: &LatticePath, profile: &TwistProfile) -> Result<Value, ProfileError> {
    let mut total = Value::from_int(path.start_y);
    for e in &path.edges {
        total = &total + &edge_action(e, profile)?;
    }
    Ok(total)
}

pub fn path_action_breakdown(
    path: &LatticePath,
    profile: &TwistProfile,
) -> Result<ActionValue, ProfileError> {
    let mut per_edge = Vec::with_capacity(path.edges.len());
    let mut total = Value::from_int(path.start_y);
    for e in &path.edges {
        let a = edge_action(e, profile)?;
        total = &total + &a;
        per_edge.push((e.slope, e.multiplicity, a));
    }
    Ok(ActionValue {
        value: total,
        breakdown: ActionBreakdown {
            start_y: path.start_y,
            per_edge,
        },
    })
}
