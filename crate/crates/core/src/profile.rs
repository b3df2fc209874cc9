//! Autonomous twist profiles on the sphere.
//!
//! A profile is the function `h(z)` on `[-1, 1]` generating the twist as
//! the time-1 map of `H = h(z)/2`. Two kinds are supported:
//!
//! * **exact polynomial** — rational coefficients; slope inversion,
//!   actions, and the integral `I = ∫ h` are all exact rationals, which
//!   makes every downstream chain-complex identity bit-exact;
//! * **numeric** — a boxed function (built from a sample table or from a
//!   disc twist); slope inversion falls back to monotone bisection and
//!   `I` to adaptive quadrature.
//!
//! The disc side is represented by [`DiscTwist`]: a radial angle profile
//! `f(r)` that converts to a sphere profile supported in the northern
//! hemisphere via `h(z) = 2 F(√(1-z))`, `F(r) = ∫_r^1 s f(s) ds`.

use crate::path::Slope;
use crate::value::{parse_rational, q_from, q_int, q_to_f64, Q, Value};
use num::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Residual tolerance for monotone bisection root solves.
pub const ROOT_TOL: f64 = 1e-12;
/// Relative tolerance for adaptive quadrature.
pub const QUAD_REL_TOL: f64 = 1e-10;
/// Tolerance for cross-route comparisons (two independent quadratures).
pub const CROSS_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("slope {0} outside the open range (0, h'(1))")]
    SlopeOutOfRange(Slope),
    #[error("h'(z) = {0} has no rational root in [-1, 1]; exact profile is not rationally invertible at this slope")]
    NotRationallyInvertible(String),
    #[error("h'(1) = {0} is not a positive integer; spectral operations need h'(1) in N")]
    NonIntegerTopSlope(f64),
    #[error("disc twist Calabi integral diverges (partial integrals exceeded {0:.3e})")]
    DivergentCalabi(f64),
    #[error("invalid profile: {0}")]
    Invalid(String),
}

// ---------------------------------------------------------------------------
// Exact polynomials
// ---------------------------------------------------------------------------

/// Polynomial with rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(coeffs: Vec<Q>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Q::zero());
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[(i64, i64)]) -> Self {
        Poly::new(coeffs.iter().map(|&(p, q)| q_from(p, q)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + q_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![Q::zero()]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q_int(i as i64))
                .collect(),
        )
    }

    /// Definite integral over [-1, 1], exact.
    pub fn integral_sym(&self) -> Q {
        let mut total = Q::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            // ∫_{-1}^{1} z^i dz = 2/(i+1) for even i, 0 for odd i.
            if i % 2 == 0 {
                total += c * q_from(2, (i + 1) as i64);
            }
        }
        total
    }

    /// Rational roots of `self = target` inside [-1, 1].
    ///
    /// Degree-one polynomials solve directly; higher degrees go through
    /// the rational root theorem on the denominator-cleared polynomial,
    /// which is enough for the profile classes used here.
    fn solve_rational(&self, target: &Q) -> Option<Q> {
        let mut shifted = self.clone();
        shifted.coeffs[0] = &shifted.coeffs[0] - target;
        let shifted = Poly::new(shifted.coeffs);
        match shifted.degree() {
            0 => None,
            1 => {
                let z = -&shifted.coeffs[0] / &shifted.coeffs[1];
                in_unit(&z).then_some(z)
            }
            _ => shifted.rational_root_in_unit(),
        }
    }

    fn rational_root_in_unit(&self) -> Option<Q> {
        // Clear denominators to an integer polynomial.
        let mut lcm: num::BigInt = One::one();
        for c in &self.coeffs {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<num::BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let lead = ints.last()?.to_i64()?;
        let constant = ints.first()?.to_i64()?;
        if constant == 0 {
            return Some(Q::zero());
        }
        let eval_int = |z: &Q| -> Q {
            let mut acc = Q::zero();
            for c in ints.iter().rev() {
                acc = acc * z + Q::from_integer(c.clone());
            }
            acc
        };
        for p in divisors(constant.unsigned_abs()) {
            for q in divisors(lead.unsigned_abs()) {
                for sign in [1i64, -1] {
                    let cand = q_from(sign * p as i64, q as i64);
                    if in_unit(&cand) && eval_int(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

fn in_unit(z: &Q) -> bool {
    let one = Q::one();
    z >= &(-one.clone()) && z <= &one
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k != n / k {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Adaptive Simpson on [a, b] with relative tolerance `rel`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let scale = whole.abs().max(1e-3);
    adaptive(f, a, b, fa, fm, fb, whole, rel * scale, 52)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Bisection for a monotone nondecreasing `g` with `g(lo) <= 0 <= g(hi)`.
fn bisect_monotone<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// TwistProfile
// ---------------------------------------------------------------------------

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct NumericProfile {
    pub h: RealFn,
    pub hprime: RealFn,
    pub hprime1: f64,
    pub h1: f64,
    /// ∫_{-1}^{1} h, by adaptive quadrature at construction.
    pub integral: f64,
    /// Interior points where h is only piecewise smooth (quadrature splits here).
    pub kinks: Vec<f64>,
}

#[derive(Clone)]
pub enum ProfileKind {
    ExactPoly(Poly),
    Numeric(NumericProfile),
}

/// The twist Hamiltonian profile `h(z)`, with its derivative and the
/// integral `I = ∫_{-1}^1 h(z) dz`. Immutable after construction.
#[derive(Clone)]
pub struct TwistProfile {
    kind: ProfileKind,
    name: String,
    deriv: Option<Poly>,
}

impl fmt::Debug for TwistProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistProfile({})", self.name)
    }
}

impl TwistProfile {
    pub fn from_poly(name: &str, poly: Poly) -> Self {
        let deriv = poly.derivative();
        TwistProfile {
            kind: ProfileKind::ExactPoly(poly),
            name: name.to_string(),
            deriv: Some(deriv),
        }
    }

    pub fn from_numeric(name: &str, numeric: NumericProfile) -> Self {
        TwistProfile {
            kind: ProfileKind::Numeric(numeric),
            name: name.to_string(),
            deriv: None,
        }
    }

    /// The canonical exact test profile `h(z) = (z+1)^2 / 2`.
    pub fn quadratic() -> Self {
        TwistProfile::from_poly("quadratic", Poly::from_i64(&[(1, 2), (1, 1), (1, 2)]))
    }

    /// `h(z) = (z+1)^3 / 6`, with `h'(1) = 2`.
    pub fn cubic() -> Self {
        TwistProfile::from_poly("cubic", Poly::from_i64(&[(1, 6), (1, 2), (1, 2), (1, 6)]))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, ProfileKind::ExactPoly(_))
    }

    pub fn h_f64(&self, z: f64) -> f64 {
        match &self.kind {
            ProfileKind::ExactPoly(p) => p.eval_f64(z),
            ProfileKind::Numeric(n) => (n.h)(z),
        }
    }

    pub fn hprime_f64(&self, z: f64) -> f64 {
        match &self.kind {
            ProfileKind::ExactPoly(_) => self.deriv.as_ref().unwrap().eval_f64(z),
            ProfileKind::Numeric(n) => (n.hprime)(z),
        }
    }

    pub fn h_exact(&self, z: &Q) -> Option<Q> {
        match &self.kind {
            ProfileKind::ExactPoly(p) => Some(p.eval(z)),
            ProfileKind::Numeric(_) => None,
        }
    }

    /// h(1).
    pub fn h1(&self) -> Value {
        match &self.kind {
            ProfileKind::ExactPoly(p) => Value::exact(p.eval(&Q::one())),
            ProfileKind::Numeric(n) => Value::approx(n.h1),
        }
    }

    /// h'(1), the top slope.
    pub fn hprime1(&self) -> Value {
        match &self.kind {
            ProfileKind::ExactPoly(_) => {
                Value::exact(self.deriv.as_ref().unwrap().eval(&Q::one()))
            }
            ProfileKind::Numeric(n) => Value::approx(n.hprime1),
        }
    }

    /// h'(1) as a positive integer, required by all spectral-side operations.
    pub fn hprime1_int(&self) -> Result<i64, ProfileError> {
        let v = self.hprime1();
        if let Some(q) = v.as_exact() {
            if q.is_integer() && q.is_positive() {
                return Ok(q.to_integer().to_i64().unwrap());
            }
            return Err(ProfileError::NonIntegerTopSlope(v.to_f64()));
        }
        let x = v.to_f64();
        let n = x.round();
        if n >= 1.0 && (x - n).abs() <= 1e-9 {
            Ok(n as i64)
        } else {
            Err(ProfileError::NonIntegerTopSlope(x))
        }
    }

    /// I = ∫_{-1}^{1} h(z) dz.
    pub fn integral(&self) -> Value {
        match &self.kind {
            ProfileKind::ExactPoly(p) => Value::exact(p.integral_sym()),
            ProfileKind::Numeric(n) => Value::approx(n.integral),
        }
    }

    /// The Calabi invariant, I/4.
    pub fn calabi(&self) -> Value {
        self.integral().scale_ratio(1, 4)
    }

    /// Solve `h'(z) = slope` on [-1, 1]. Exact for polynomial profiles,
    /// bisection to `ROOT_TOL` residual for numeric ones.
    pub fn z_of_slope(&self, slope: Slope) -> Result<Value, ProfileError> {
        let s_f = slope.to_f64();
        let top = self.hprime1().to_f64();
        if !(s_f > 0.0 && s_f < top + 1e-12) || slope.p <= 0 {
            return Err(ProfileError::SlopeOutOfRange(slope));
        }
        match &self.kind {
            ProfileKind::ExactPoly(_) => {
                let target = q_from(slope.p, slope.q);
                let top_q = self.deriv.as_ref().unwrap().eval(&Q::one());
                if target > top_q {
                    return Err(ProfileError::SlopeOutOfRange(slope));
                }
                self.deriv
                    .as_ref()
                    .unwrap()
                    .solve_rational(&target)
                    .map(Value::exact)
                    .ok_or_else(|| {
                        ProfileError::NotRationallyInvertible(format!("{}", slope))
                    })
            }
            ProfileKind::Numeric(n) => {
                if s_f >= n.hprime1 {
                    if (s_f - n.hprime1).abs() <= 1e-9 {
                        return Ok(Value::approx(1.0));
                    }
                    return Err(ProfileError::SlopeOutOfRange(slope));
                }
                let g = |z: f64| (n.hprime)(z) - s_f;
                let z = bisect_monotone(&g, -1.0, 1.0);
                Ok(Value::approx(z))
            }
        }
    }

    /// Solve `h'(z) = s` for a float slope in `(0, h'(1))`, by the exact
    /// linear solve when available and monotone bisection otherwise.
    pub fn z_of_slope_f64(&self, s: f64) -> f64 {
        if let ProfileKind::ExactPoly(_) = &self.kind {
            let deriv = self.deriv.as_ref().unwrap();
            if deriv.degree() == 1 {
                let a0 = q_to_f64(&deriv.eval(&Q::zero()));
                let a1 = q_to_f64(&(&deriv.eval(&Q::one()) - &deriv.eval(&Q::zero())));
                return ((s - a0) / a1).clamp(-1.0, 1.0);
            }
        }
        let g = |z: f64| self.hprime_f64(z) - s;
        bisect_monotone(&g, -1.0, 1.0)
    }

    /// h evaluated at a previously solved z value, staying exact when possible.
    pub fn h_at(&self, z: &Value) -> Value {
        match (&self.kind, z.as_exact()) {
            (ProfileKind::ExactPoly(p), Some(q)) => Value::exact(p.eval(q)),
            _ => Value::approx(self.h_f64(z.to_f64())),
        }
    }

    /// Validate the profile invariants, reporting rather than failing.
    pub fn check(&self) -> ProfileReport {
        let mut report = ProfileReport::default();
        let h_m1 = self.h_f64(-1.0);
        let hp_m1 = self.hprime_f64(-1.0);
        report.h_at_minus_one_zero = h_m1.abs() <= 1e-9;
        report.hprime_at_minus_one_zero = hp_m1.abs() <= 1e-9;
        // Sampled strict monotonicity/convexity on the interior. Numeric
        // profiles built from disc twists are flat on the southern half,
        // so strictness is recorded separately from weak monotonicity.
        let samples = 2001;
        let mut weak_ok = true;
        let mut strict_from = f64::NAN;
        let mut prev_hp = self.hprime_f64(-1.0 + 1e-9);
        let mut strict_everywhere = true;
        for i in 1..samples {
            let z = -1.0 + 2.0 * (i as f64) / (samples as f64);
            let hp = self.hprime_f64(z);
            if hp < -1e-9 || hp < prev_hp - 1e-9 {
                weak_ok = false;
            }
            if hp <= 1e-12 {
                strict_everywhere = false;
            } else if strict_from.is_nan() {
                strict_from = z;
            }
            prev_hp = hp;
        }
        report.weakly_monotone_convex = weak_ok;
        report.strictly_increasing_interior = strict_everywhere;
        report.strict_from = strict_from;
        if let ProfileKind::ExactPoly(_) = &self.kind {
            // Spot-check rational invertibility on a few interior slopes.
            if let Ok(n) = self.hprime1_int() {
                let probes = [(1, 2), (1, 3), (2, 3)];
                report.rationally_invertible = probes.iter().all(|&(p, q)| {
                    let s = Slope::new(p, q);
                    if s.to_f64() >= n as f64 {
                        return true;
                    }
                    self.z_of_slope(s).is_ok()
                });
            }
        } else {
            report.rationally_invertible = true;
        }
        report
    }
}

#[derive(Debug, Default, Clone)]
pub struct ProfileReport {
    pub h_at_minus_one_zero: bool,
    pub hprime_at_minus_one_zero: bool,
    pub weakly_monotone_convex: bool,
    pub strictly_increasing_interior: bool,
    /// First sampled z where h' becomes strictly positive (NaN if never).
    pub strict_from: f64,
    pub rationally_invertible: bool,
}

impl ProfileReport {
    pub fn core_ok(&self) -> bool {
        self.h_at_minus_one_zero
            && self.hprime_at_minus_one_zero
            && self.weakly_monotone_convex
            && self.rationally_invertible
    }
}

// ---------------------------------------------------------------------------
// Disc twists
// ---------------------------------------------------------------------------

/// A radial disc twist `(r, θ) -> (r, θ + 2π f(r))` with `f` non-increasing.
#[derive(Clone)]
pub struct DiscTwist {
    f: RealFn,
    pub truncation: Option<u32>,
    descr: String,
}

impl fmt::Debug for DiscTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiscTwist({})", self.descr)
    }
}

impl DiscTwist {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(descr: &str, f: F) -> Self {
        DiscTwist {
            f: Arc::new(f),
            truncation: None,
            descr: descr.to_string(),
        }
    }

    /// `f(r) = r^{-k}`; unbounded at the origin for k > 0.
    pub fn inverse_power(k: u32) -> Self {
        DiscTwist::new(&format!("r^-{}", k), move |r: f64| r.powi(-(k as i32)))
    }

    /// `f(r) = c (1 - r)`, a bounded twist.
    pub fn linear(c: f64) -> Self {
        DiscTwist::new(&format!("{}(1-r)", c), move |r: f64| c * (1.0 - r))
    }

    pub fn descr(&self) -> &str {
        &self.descr
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    /// Truncated twist `f_i(r) = f(max(r, 1/i))`: agrees with `f` on
    /// [1/i, 1], constant below, pointwise non-decreasing in `i`.
    pub fn truncate(&self, i: u32) -> DiscTwist {
        assert!(i >= 1);
        let f = self.f.clone();
        DiscTwist {
            f: Arc::new(move |r: f64| f(r.max(1.0 / i as f64))),
            truncation: Some(i),
            descr: format!("{}|i={}", self.descr, i),
        }
    }

    fn kink(&self) -> Option<f64> {
        self.truncation.map(|i| 1.0 / i as f64)
    }

    /// Calabi invariant of the disc twist, `∫_0^1 s^3 f(s)/2 ds`
    /// (the double integral collapsed by Fubini).
    pub fn calabi_disc(&self) -> Result<f64, ProfileError> {
        let g = |s: f64| 0.5 * s * s * s * self.eval(s);
        let split = self.kink().unwrap_or(0.0).clamp(0.0, 1.0);
        // Probe for divergence near the origin before integrating.
        let mut probe = 1e-3;
        let mut last = 0.0;
        for _ in 0..6 {
            let part = integrate(&g, probe, 1.0, QUAD_REL_TOL);
            if part.abs() > 1e12 {
                return Err(ProfileError::DivergentCalabi(part));
            }
            if (part - last).abs() <= 1e-12 * part.abs().max(1.0) {
                break;
            }
            last = part;
            probe /= 32.0;
        }
        let lo = 1e-300_f64.max(0.0);
        let total = if split > 0.0 {
            integrate(&g, lo, split, QUAD_REL_TOL) + integrate(&g, split, 1.0, QUAD_REL_TOL)
        } else {
            integrate(&g, lo, 1.0, QUAD_REL_TOL)
        };
        if !total.is_finite() || total.abs() > 1e12 {
            return Err(ProfileError::DivergentCalabi(total));
        }
        Ok(total)
    }

    /// Convert to a sphere profile: `h(z) = 2 F(√(1-z))` for z in [0,1],
    /// zero on [-1,0], where `F(r) = ∫_r^1 s f(s) ds`.
    pub fn to_sphere(&self) -> Result<TwistProfile, ProfileError> {
        let f = self.f.clone();
        let kink_r = self.kink();
        let cap_f = move |r: f64| if r <= 0.0 { 0.0 } else { r * f(r) };
        let big_f = move |r: f64| {
            if r >= 1.0 {
                return 0.0;
            }
            match kink_r {
                Some(k) if r < k => {
                    integrate(&cap_f, r, k, QUAD_REL_TOL) + integrate(&cap_f, k, 1.0, QUAD_REL_TOL)
                }
                _ => integrate(&cap_f, r, 1.0, QUAD_REL_TOL),
            }
        };
        let hprime1 = (self.f)(0.0);
        if !hprime1.is_finite() {
            return Err(ProfileError::DivergentCalabi(hprime1));
        }
        let h1 = big_f(0.0) * 2.0;
        if !h1.is_finite() || h1.abs() > 1e12 {
            return Err(ProfileError::DivergentCalabi(h1));
        }
        let fh = self.f.clone();
        let h = move |z: f64| {
            if z <= 0.0 {
                0.0
            } else {
                2.0 * big_f((1.0 - z).max(0.0).sqrt())
            }
        };
        let hprime = move |z: f64| {
            if z <= 0.0 {
                0.0
            } else {
                fh((1.0 - z).max(0.0).sqrt())
            }
        };
        let mut kinks = vec![0.0];
        if let Some(k) = kink_r {
            kinks.push(1.0 - k * k);
        }
        let h_arc: RealFn = Arc::new(h);
        let h_for_int = h_arc.clone();
        let integral = integrate(&move |z: f64| h_for_int(z), 0.0, 1.0, QUAD_REL_TOL);
        Ok(TwistProfile::from_numeric(
            &format!("sphere({})", self.descr),
            NumericProfile {
                h: h_arc,
                hprime: Arc::new(hprime),
                hprime1,
                h1,
                integral,
                kinks,
            },
        ))
    }
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct ProfileConfig {
    kind: String,
    #[serde(default)]
    coefficients: Vec<String>,
    #[serde(default)]
    z: Vec<f64>,
    #[serde(default)]
    h: Vec<f64>,
    #[serde(default)]
    hprime1: Option<String>,
}

/// Load a profile from a TOML config or a builtin name
/// (`quadratic`, `cubic`).
pub fn load_profile(spec: &str) -> Result<TwistProfile, ProfileError> {
    match spec {
        "quadratic" => return Ok(TwistProfile::quadratic()),
        "cubic" => return Ok(TwistProfile::cubic()),
        _ => {}
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| ProfileError::Invalid(format!("cannot read {}: {}", spec, e)))?;
    parse_profile_toml(&text)
}

pub fn parse_profile_toml(text: &str) -> Result<TwistProfile, ProfileError> {
    let cfg: ProfileConfig =
        toml::from_str(text).map_err(|e| ProfileError::Invalid(e.to_string()))?;
    match cfg.kind.as_str() {
        "polynomial" => {
            let coeffs: Option<Vec<Q>> =
                cfg.coefficients.iter().map(|s| parse_rational(s)).collect();
            let coeffs =
                coeffs.ok_or_else(|| ProfileError::Invalid("bad coefficient".into()))?;
            Ok(TwistProfile::from_poly("config-poly", Poly::new(coeffs)))
        }
        "samples" => {
            if cfg.z.len() != cfg.h.len() || cfg.z.len() < 4 {
                return Err(ProfileError::Invalid(
                    "sample table needs matching z/h arrays with at least 4 points".into(),
                ));
            }
            let hp1 = cfg
                .hprime1
                .as_deref()
                .and_then(parse_rational)
                .map(|q| q_to_f64(&q))
                .ok_or_else(|| ProfileError::Invalid("samples kind needs hprime1".into()))?;
            build_spline_profile(&cfg.z, &cfg.h, hp1)
        }
        other => Err(ProfileError::Invalid(format!("unknown kind {}", other))),
    }
}

/// Monotone cubic Hermite interpolant (Fritsch-Carlson) through the table.
fn build_spline_profile(z: &[f64], h: &[f64], hprime1: f64) -> Result<TwistProfile, ProfileError> {
    let n = z.len();
    for w in z.windows(2) {
        if w[1] <= w[0] {
            return Err(ProfileError::Invalid("z samples must be increasing".into()));
        }
    }
    let mut slopes = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        slopes.push((h[i + 1] - h[i]) / (z[i + 1] - z[i]));
    }
    let mut deriv = vec![0.0; n];
    deriv[0] = slopes[0];
    deriv[n - 1] = slopes[n - 2];
    for i in 1..n - 1 {
        if slopes[i - 1] * slopes[i] <= 0.0 {
            deriv[i] = 0.0;
        } else {
            let w1 = 2.0 * (z[i + 1] - z[i]) + (z[i] - z[i - 1]);
            let w2 = (z[i + 1] - z[i]) + 2.0 * (z[i] - z[i - 1]);
            deriv[i] = (w1 + w2) / (w1 / slopes[i - 1] + w2 / slopes[i]);
        }
    }
    let zs = z.to_vec();
    let hs = h.to_vec();
    let ds = deriv.clone();
    let locate = move |zz: f64, zs: &[f64]| -> usize {
        match zs.binary_search_by(|a| a.partial_cmp(&zz).unwrap()) {
            Ok(i) => i.min(zs.len() - 2),
            Err(i) => i.saturating_sub(1).min(zs.len() - 2),
        }
    };
    let zs2 = zs.clone();
    let hs2 = hs.clone();
    let ds2 = ds.clone();
    let locate2 = locate.clone();
    let h_fn = move |zz: f64| -> f64 {
        let zz = zz.clamp(zs[0], zs[zs.len() - 1]);
        let i = locate(zz, &zs);
        let dx = zs[i + 1] - zs[i];
        let t = (zz - zs[i]) / dx;
        let (h00, h10, h01, h11) = hermite_basis(t);
        h00 * hs[i] + h10 * dx * ds[i] + h01 * hs[i + 1] + h11 * dx * ds[i + 1]
    };
    let hp_fn = move |zz: f64| -> f64 {
        let zz = zz.clamp(zs2[0], zs2[zs2.len() - 1]);
        let i = locate2(zz, &zs2);
        let dx = zs2[i + 1] - zs2[i];
        let t = (zz - zs2[i]) / dx;
        let (d00, d10, d01, d11) = hermite_basis_deriv(t);
        (d00 * hs2[i] + d01 * hs2[i + 1]) / dx + d10 * ds2[i] + d11 * ds2[i + 1]
    };
    let h1 = h_fn(1.0);
    let h_arc: RealFn = Arc::new(h_fn);
    let h_for_int = h_arc.clone();
    let integral = integrate(&move |x: f64| h_for_int(x), -1.0, 1.0, QUAD_REL_TOL);
    Ok(TwistProfile::from_numeric(
        "config-samples",
        NumericProfile {
            h: h_arc,
            hprime: Arc::new(hp_fn),
            hprime1,
            h1,
            integral,
            kinks: vec![],
        },
    ))
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    (
        2.0 * t * t * t - 3.0 * t * t + 1.0,
        t * t * t - 2.0 * t * t + t,
        -2.0 * t * t * t + 3.0 * t * t,
        t * t * t - t * t,
    )
}

fn hermite_basis_deriv(t: f64) -> (f64, f64, f64, f64) {
    (
        6.0 * t * t - 6.0 * t,
        3.0 * t * t - 4.0 * t + 1.0,
        -6.0 * t * t + 6.0 * t,
        3.0 * t * t - 2.0 * t,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::q_from;

    #[test]
    fn quadratic_z_of_slope_closed_forms() {
        let p = TwistProfile::quadratic();
        // h'(z) = z + 1, so z(s) = s - 1.
        let z = p.z_of_slope(Slope::new(1, 2)).unwrap();
        assert_eq!(z.as_exact().unwrap(), &q_from(-1, 2));
        let z = p.z_of_slope(Slope::new(1, 1)).unwrap();
        assert_eq!(z.as_exact().unwrap(), &q_from(0, 1));
    }

    #[test]
    fn slope_out_of_range_rejected() {
        let p = TwistProfile::quadratic();
        assert!(matches!(
            p.z_of_slope(Slope::new(3, 1)),
            Err(ProfileError::SlopeOutOfRange(_))
        ));
        assert!(p.z_of_slope(Slope::new(0, 1)).is_err());
    }

    #[test]
    fn numeric_bisection_matches_closed_form() {
        // The same quadratic, evaluated through the numeric path.
        let numeric = NumericProfile {
            h: Arc::new(|z: f64| (z + 1.0) * (z + 1.0) / 2.0),
            hprime: Arc::new(|z: f64| z + 1.0),
            hprime1: 2.0,
            h1: 2.0,
            integral: 4.0 / 3.0,
            kinks: vec![],
        };
        let p = TwistProfile::from_numeric("quad-numeric", numeric);
        let z = p.z_of_slope(Slope::new(1, 3)).unwrap();
        assert!((z.to_f64() - (-2.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn calabi_quadratic_is_one_third() {
        let p = TwistProfile::quadratic();
        assert_eq!(p.calabi().as_exact().unwrap(), &q_from(1, 3));
    }

    #[test]
    fn calabi_cubic_is_one_sixth() {
        let p = TwistProfile::cubic();
        assert_eq!(p.calabi().as_exact().unwrap(), &q_from(1, 6));
        assert_eq!(p.hprime1_int().unwrap(), 2);
        // Quadrature agrees with the exact integral.
        let numeric = integrate(&|z: f64| p.h_f64(z), -1.0, 1.0, QUAD_REL_TOL);
        assert!((numeric - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn zero_profile_calabi_zero() {
        let p = TwistProfile::from_poly("zero", Poly::from_i64(&[(0, 1)]));
        assert!(p.calabi().as_exact().unwrap().is_zero());
    }

    #[test]
    fn disc_linear_two_route_calabi() {
        let tw = DiscTwist::linear(2.0);
        let cal_disc = tw.calabi_disc().unwrap();
        assert!((cal_disc - 0.05).abs() < 1e-9);
        let sphere = tw.to_sphere().unwrap();
        let cal_sphere = sphere.calabi().to_f64();
        assert!(
            (cal_disc - cal_sphere).abs() < CROSS_TOL,
            "disc {} vs sphere {}",
            cal_disc,
            cal_sphere
        );
        assert_eq!(sphere.hprime1_int().unwrap(), 2);
    }

    #[test]
    fn truncated_inverse_quartic_calabi_grows() {
        let tw = DiscTwist::inverse_power(4);
        let mut last = 0.0;
        for i in [2u32, 4, 8, 16] {
            let cal = tw.truncate(i).calabi_disc().unwrap();
            // Closed form: 1/8 + ln(i)/2.
            let expect = 0.125 + (i as f64).ln() / 2.0;
            assert!((cal - expect).abs() < 1e-7, "i={} got {}", i, cal);
            assert!(cal > last);
            last = cal;
        }
    }

    #[test]
    fn untruncated_infinite_twist_diverges() {
        let tw = DiscTwist::inverse_power(4);
        assert!(tw.to_sphere().is_err());
    }

    #[test]
    fn profile_check_quadratic() {
        let rep = TwistProfile::quadratic().check();
        assert!(rep.core_ok());
        assert!(rep.strictly_increasing_interior);
    }

    #[test]
    fn sample_table_profile_roundtrip() {
        let n = 400;
        let z: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
        let h: Vec<f64> = z.iter().map(|&z| (z + 1.0) * (z + 1.0) / 2.0).collect();
        let prof = build_spline_profile(&z, &h, 2.0).unwrap();
        let zv = prof.z_of_slope(Slope::new(1, 3)).unwrap().to_f64();
        assert!((zv - (-2.0 / 3.0)).abs() < 1e-4);
        assert!((prof.integral().to_f64() - 4.0 / 3.0).abs() < 1e-6);
    }
}
