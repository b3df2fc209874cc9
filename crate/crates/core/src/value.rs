//! Exact-or-approximate scalar values.
//!
//! Quantities derived from a polynomial profile with rational data stay
//! exact rationals end to end; quantities derived from a tabulated or
//! functional profile are `f64`. `Value` carries both representations:
//! the `exact` part when available, and a float mirror that is always
//! kept in sync so mixed pipelines degrade gracefully.

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Shorthand for arbitrary-precision rationals.
pub type Q = BigRational;
/// Machine-word rationals, used for lattice geometry where magnitudes are small.
pub type Q64 = Ratio<i64>;

pub fn q_from(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug)]
pub struct Value {
    exact: Option<Q>,
    approx: f64,
}

impl Value {
    pub fn exact(q: Q) -> Self {
        let approx = q.to_f64().unwrap_or(f64::NAN);
        Value {
            exact: Some(q),
            approx,
        }
    }

    pub fn approx(x: f64) -> Self {
        Value {
            exact: None,
            approx: x,
        }
    }

    pub fn zero() -> Self {
        Value::exact(Q::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Value::exact(q_int(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Value::exact(q_from(p, q))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn as_exact(&self) -> Option<&Q> {
        self.exact.as_ref()
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    /// Total order: exact comparison when both sides are exact, `f64`
    /// total order otherwise.
    pub fn total_cmp(&self, other: &Value) -> Ordering {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => self.approx.total_cmp(&other.approx),
        }
    }

    /// Compare with a tolerance that only applies to the approximate path.
    /// Exact values at distance zero compare equal; approximate values
    /// within `tol` compare equal.
    pub fn cmp_tol(&self, other: &Value, tol: f64) -> Ordering {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => {
                let diff = self.approx - other.approx;
                if diff.abs() <= tol {
                    Ordering::Equal
                } else if diff < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn eq_tol(&self, other: &Value, tol: f64) -> bool {
        self.cmp_tol(other, tol) == Ordering::Equal
    }

    pub fn abs(&self) -> Value {
        Value {
            exact: self.exact.as_ref().map(|q| q.abs()),
            approx: self.approx.abs(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Value {
        self * &Value::from_int(n)
    }

    pub fn scale_ratio(&self, p: i64, q: i64) -> Value {
        self * &Value::from_ratio(p, q)
    }
}

impl Add for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        Value {
            exact: match (&self.exact, &rhs.exact) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            approx: self.approx + rhs.approx,
        }
    }
}

impl Sub for &Value {
    type Output = Value;
    fn sub(self, rhs: &Value) -> Value {
        Value {
            exact: match (&self.exact, &rhs.exact) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            },
            approx: self.approx - rhs.approx,
        }
    }
}

impl Mul for &Value {
    type Output = Value;
    fn mul(self, rhs: &Value) -> Value {
        Value {
            exact: match (&self.exact, &rhs.exact) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
            approx: self.approx * rhs.approx,
        }
    }
}

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value {
            exact: self.exact.as_ref().map(|q| -q),
            approx: -self.approx,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{}", q),
            None => write!(f, "{:.11e}", self.approx),
        }
    }
}

/// Parse a rational literal: `p/q`, an integer, or a plain decimal.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    // Decimal such as 0.625 -> 625/1000.
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let i: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let digits = frac.len() as u32;
        let f: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(digits);
        let whole = &i * &scale + BigInt::from(sign) * f;
        return Some(Q::new(whole, scale));
    }
    None
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn q64_to_big(r: Q64) -> Q {
    q_from(*r.numer(), *r.denom())
}

pub fn big_from_f64(x: f64) -> Option<Q> {
    Q::from_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_survives_addition() {
        let a = Value::from_ratio(3, 4);
        let b = Value::from_ratio(1, 4);
        let c = &a + &b;
        assert_eq!(c.as_exact().unwrap(), &q_int(1));
        assert_eq!(c.to_f64(), 1.0);
    }

    #[test]
    fn mixing_exact_and_float_downgrades() {
        let a = Value::from_ratio(1, 2);
        let b = Value::approx(0.25);
        let c = &a + &b;
        assert!(c.as_exact().is_none());
        assert!((c.to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), q_from(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), q_int(-2));
        assert_eq!(parse_rational("0.625").unwrap(), q_from(5, 8));
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn display_prints_lowest_terms() {
        assert_eq!(Value::from_ratio(6, 8).to_string(), "3/4");
        assert_eq!(Value::from_int(5).to_string(), "5");
    }
}
