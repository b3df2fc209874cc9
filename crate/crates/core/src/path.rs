//! Labeled concave lattice paths.
//!
//! A path starts at `(0, y)` and walks a sequence of edges `m·(q, p)`
//! with strictly increasing slopes `p/q` confined to `[0, h'(1)]`. Each
//! edge carries an `E` or `H` label; the `H` label marks the presence of
//! the hyperbolic orbit at that slope (always with multiplicity one), so
//! a labeled path encodes a generator: an orbit set together with a
//! relative class, the class shift being the start height.
//!
//! Text form used by the CLI and golden files, bit-exact:
//! `y; (q,p)xm:L; ...` with slopes in lowest terms.

use crate::profile::TwistProfile;
use crate::value::Q64;
use num::integer::gcd;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("invalid orbit set: {0}")]
    InvalidOrbitSet(String),
    #[error("cannot parse path: {0}")]
    Parse(String),
}

/// A slope `p/q` in lowest terms, `q >= 1`, `p >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q > 0 && p >= 0, "slope must be nonnegative with q > 0");
        let g = gcd(p, q).max(1);
        Slope { p: p / g, q: q / g }
    }

    pub fn zero() -> Self {
        Slope { p: 0, q: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn as_q64(self) -> Q64 {
        Q64::new(self.p, self.q)
    }

    pub fn is_zero(self) -> bool {
        self.p == 0
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    E,
    H,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::E => write!(f, "E"),
            Label::H => write!(f, "H"),
        }
    }
}

/// One merged edge: all orbit multiplicity at a single slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub slope: Slope,
    pub multiplicity: i64,
    pub label: Label,
}

impl Edge {
    pub fn new(slope: Slope, multiplicity: i64, label: Label) -> Self {
        Edge {
            slope,
            multiplicity,
            label,
        }
    }

    /// Horizontal extent `m q`.
    pub fn run(&self) -> i64 {
        self.multiplicity * self.slope.q
    }

    /// Vertical extent `m p`.
    pub fn rise(&self) -> i64 {
        self.multiplicity * self.slope.p
    }
}

/// A labeled concave lattice path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    pub start_y: i64,
    pub edges: Vec<Edge>,
    degree: i64,
    rise: i64,
}

impl LatticePath {
    pub fn new(start_y: i64, edges: Vec<Edge>) -> Self {
        let degree = edges.iter().map(Edge::run).sum();
        let rise = edges.iter().map(Edge::rise).sum();
        LatticePath {
            start_y,
            edges,
            degree,
            rise,
        }
    }

    /// Horizontal displacement, the degree d.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Total vertical displacement V.
    pub fn vertical_rise(&self) -> i64 {
        self.rise
    }

    /// End height w = y + V.
    pub fn end_y(&self) -> i64 {
        self.start_y + self.rise
    }

    /// Total orbit multiplicity M = Σ m.
    pub fn total_multiplicity(&self) -> i64 {
        self.edges.iter().map(|e| e.multiplicity).sum()
    }

    pub fn h_count(&self) -> i64 {
        self.edges.iter().filter(|e| e.label == Label::H).count() as i64
    }

    pub fn is_all_e(&self) -> bool {
        self.h_count() == 0
    }

    /// Vertices (x, y) along the path, start first. Only meaningful for
    /// structurally valid paths.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        let mut x = 0;
        let mut y = self.start_y;
        out.push((x, y));
        for e in &self.edges {
            x += e.run();
            y += e.rise();
            out.push((x, y));
        }
        out
    }

    /// Height of the path over integer column x (path as a function graph).
    pub fn height_at(&self, x: i64) -> Q64 {
        debug_assert!(x >= 0 && x <= self.degree);
        let mut cx = 0;
        let mut cy = self.start_y;
        for e in &self.edges {
            let next = cx + e.run();
            if x <= next {
                return Q64::new(cy * e.slope.q + e.slope.p * (x - cx), e.slope.q);
            }
            cx = next;
            cy += e.rise();
        }
        Q64::from_integer(cy)
    }

    /// Vertical shift: start height moves, edges unchanged.
    pub fn shift(&self, k: i64) -> LatticePath {
        let mut p = self.clone();
        p.start_y += k;
        p
    }

    /// Twice the area between the path and the horizontal line through
    /// its start point (exact; trapezoid sums over edges).
    pub fn two_a(&self) -> i64 {
        let mut total = 0i64;
        let mut rel_y = 0i64;
        for e in &self.edges {
            let run = e.run();
            let rise = e.rise();
            total += run * (2 * rel_y + rise);
            rel_y += rise;
        }
        total
    }

    /// Structural problems: unsorted slopes, nonpositive multiplicity,
    /// zero degree.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.edges.is_empty() || self.degree <= 0 {
            v.push("degree must be positive".to_string());
        }
        for e in &self.edges {
            if e.multiplicity <= 0 {
                v.push(format!("edge ({},{}) has multiplicity {}", e.slope.q, e.slope.p, e.multiplicity));
            }
        }
        for w in self.edges.windows(2) {
            if w[0].slope >= w[1].slope {
                v.push(format!(
                    "slopes not strictly increasing: {} then {}",
                    w[0].slope, w[1].slope
                ));
            }
        }
        v
    }

    /// Canonical text form `y; (q,p)xm:L; ...`.
    pub fn serialize(&self) -> String {
        let mut s = format!("{}", self.start_y);
        for e in &self.edges {
            s.push_str(&format!(
                "; ({},{})x{}:{}",
                e.slope.q, e.slope.p, e.multiplicity, e.label
            ));
        }
        s
    }

    pub fn parse(text: &str) -> Result<LatticePath, PathError> {
        let mut parts = text.split(';').map(str::trim);
        let y: i64 = parts
            .next()
            .ok_or_else(|| PathError::Parse("empty".into()))?
            .parse()
            .map_err(|e| PathError::Parse(format!("start height: {}", e)))?;
        let mut edges = Vec::new();
        for part in parts {
            if part.is_empty() {
                continue;
            }
            let inner = part
                .strip_prefix('(')
                .ok_or_else(|| PathError::Parse(format!("expected '(' in {:?}", part)))?;
            let (qp, rest) = inner
                .split_once(')')
                .ok_or_else(|| PathError::Parse(format!("expected ')' in {:?}", part)))?;
            let (qs, ps) = qp
                .split_once(',')
                .ok_or_else(|| PathError::Parse(format!("expected 'q,p' in {:?}", part)))?;
            let q: i64 = qs.trim().parse().map_err(|e| PathError::Parse(format!("{}", e)))?;
            let p: i64 = ps.trim().parse().map_err(|e| PathError::Parse(format!("{}", e)))?;
            let rest = rest
                .strip_prefix('x')
                .ok_or_else(|| PathError::Parse(format!("expected 'x' in {:?}", part)))?;
            let (ms, ls) = rest
                .split_once(':')
                .ok_or_else(|| PathError::Parse(format!("expected ':' in {:?}", part)))?;
            let m: i64 = ms.trim().parse().map_err(|e| PathError::Parse(format!("{}", e)))?;
            let label = match ls.trim() {
                "E" => Label::E,
                "H" => Label::H,
                other => return Err(PathError::Parse(format!("bad label {:?}", other))),
            };
            if q <= 0 || p < 0 || gcd(p, q) != 1 {
                return Err(PathError::Parse(format!(
                    "edge vector ({},{}) must have q>0, p>=0, gcd 1",
                    q, p
                )));
            }
            edges.push(Edge::new(Slope { p, q }, m, label));
        }
        Ok(LatticePath::new(y, edges))
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

// ---------------------------------------------------------------------------
// Orbit sets
// ---------------------------------------------------------------------------

/// Orbit identifiers for the degree-bounded simple orbits: the pole
/// orbits and the elliptic/hyperbolic pair at each rational slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitId {
    GammaMinus,
    GammaPlus,
    Elliptic(Slope),
    Hyperbolic(Slope),
}

/// Build the labeled path from an orbit set with multiplicities plus a
/// class shift. Multiplicities at one slope merge into a single edge,
/// labeled `H` exactly when the hyperbolic orbit is present.
pub fn from_orbit_set(
    orbits: &[(OrbitId, i64)],
    shift: i64,
    profile: &TwistProfile,
) -> Result<LatticePath, PathError> {
    let top = ceil_hprime1(profile);
    let mut per_slope: Vec<(Slope, i64, bool)> = Vec::new();
    let mut add = |slope: Slope, m: i64, hyp: bool| -> Result<(), PathError> {
        if hyp && m != 1 {
            return Err(PathError::InvalidOrbitSet(format!(
                "hyperbolic orbit at {} has multiplicity {}",
                slope, m
            )));
        }
        if m <= 0 {
            return Err(PathError::InvalidOrbitSet("nonpositive multiplicity".into()));
        }
        match per_slope.iter_mut().find(|(s, _, _)| *s == slope) {
            Some((_, mm, hh)) => {
                if hyp && *hh {
                    return Err(PathError::InvalidOrbitSet(format!(
                        "two hyperbolic orbits at slope {}",
                        slope
                    )));
                }
                *mm += m;
                *hh |= hyp;
            }
            None => per_slope.push((slope, m, hyp)),
        }
        Ok(())
    };
    for &(orbit, m) in orbits {
        match orbit {
            OrbitId::GammaMinus => add(Slope::zero(), m, false)?,
            OrbitId::GammaPlus => add(Slope::new(top, 1), m, false)?,
            OrbitId::Elliptic(s) => add(s, m, false)?,
            OrbitId::Hyperbolic(s) => add(s, m, true)?,
        }
    }
    per_slope.sort_by(|a, b| a.0.cmp(&b.0));
    let edges = per_slope
        .into_iter()
        .map(|(s, m, hyp)| Edge::new(s, m, if hyp { Label::H } else { Label::E }))
        .collect();
    Ok(LatticePath::new(shift, edges))
}

/// Invert `from_orbit_set`: recover the orbit multiset and the shift.
pub fn to_orbit_set(path: &LatticePath, profile: &TwistProfile) -> (Vec<(OrbitId, i64)>, i64) {
    let top = ceil_hprime1(profile);
    let mut orbits = Vec::new();
    for e in &path.edges {
        if e.slope.is_zero() {
            orbits.push((OrbitId::GammaMinus, e.multiplicity));
        } else if e.slope == Slope::new(top, 1) {
            orbits.push((OrbitId::GammaPlus, e.multiplicity));
        } else {
            match e.label {
                Label::E => orbits.push((OrbitId::Elliptic(e.slope), e.multiplicity)),
                Label::H => {
                    orbits.push((OrbitId::Hyperbolic(e.slope), 1));
                    if e.multiplicity > 1 {
                        orbits.push((OrbitId::Elliptic(e.slope), e.multiplicity - 1));
                    }
                }
            }
        }
    }
    (orbits, path.start_y)
}

fn ceil_hprime1(profile: &TwistProfile) -> i64 {
    use num::ToPrimitive;
    let v = profile.hprime1();
    match v.as_exact() {
        Some(q) => num::Integer::div_ceil(q.numer(), q.denom())
            .to_i64()
            .unwrap_or(0),
        None => v.to_f64().ceil() as i64,
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

/// Check every path invariant against a profile, returning the list of
/// violations (empty means valid).
pub fn validate(path: &LatticePath, profile: &TwistProfile) -> Vec<Violation> {
    let mut out: Vec<Violation> = path
        .structural_violations()
        .into_iter()
        .map(|m| Violation {
            code: "structure",
            message: m,
        })
        .collect();
    let top = profile.hprime1();
    for e in &path.edges {
        let s = crate::value::Value::from_ratio(e.slope.p, e.slope.q);
        if s.cmp_tol(&top, 1e-9) == std::cmp::Ordering::Greater {
            out.push(Violation {
                code: "slope-bound",
                message: format!("slope {} exceeds h'(1) = {}", e.slope, top),
            });
        }
        if e.label == Label::H {
            let interior = !e.slope.is_zero()
                && s.cmp_tol(&top, 1e-9) == std::cmp::Ordering::Less;
            if !interior {
                out.push(Violation {
                    code: "label",
                    message: format!(
                        "H label on boundary slope {} (pole orbits are elliptic)",
                        e.slope
                    ),
                });
            }
        }
    }
    out
}
