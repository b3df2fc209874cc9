//! Growth dichotomy demo: bounded-energy maps have linearly growing
//! spectral invariants, while truncated infinite twists push the slope
//! `c_d / d` past every bound as the truncation loosens.

use crate::asymptotics::normalized_estimate;
use crate::profile::{DiscTwist, ProfileError};
use crate::spectral::{c_dk_bracket, c_dk_exact};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("growth cell failed at i={i}, d={d}: {message}")]
    Cell { i: u32, d: i64, message: String },
}

#[derive(Clone, Debug)]
pub struct GrowthCell {
    pub d: i64,
    /// Certified slope bounds for c_d/d after normalization.
    pub slope_lo: f64,
    pub slope_hi: f64,
    /// Exhaustive value when the slope menu is small enough.
    pub brute_slope: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub i: u32,
    pub cal_disc: f64,
    pub cal_sphere: f64,
    pub hprime1: f64,
    pub cells: Vec<GrowthCell>,
}

/// Per truncation index: the Calabi invariant (two independent routes)
/// and per-degree slope estimates for `c_d/d`. Truncation index 0 means
/// the untruncated twist.
pub fn growth_report(
    f: &DiscTwist,
    i_list: &[u32],
    d_list: &[i64],
    brute_cap: i64,
) -> Result<Vec<GrowthReport>, DemoError> {
    let mut out = Vec::new();
    for &i in i_list {
        let tw = if i == 0 { f.clone() } else { f.truncate(i) };
        let cal_disc = tw.calabi_disc()?;
        let sphere = tw.to_sphere()?;
        let cal_sphere = sphere.calabi().to_f64();
        let hprime1 = sphere.hprime1().to_f64();
        let mut cells = Vec::new();
        // Spectral cells need an integral top slope.
        if sphere.hprime1_int().is_ok() {
            let top = sphere.hprime1_int().unwrap();
            for &d in d_list {
                let k = -d;
                let bracket = c_dk_bracket(d, k, &sphere).map_err(|e| DemoError::Cell {
                    i,
                    d,
                    message: e.to_string(),
                })?;
                let slope_lo = normalized_estimate(&bracket.lo, d, k).to_f64();
                let slope_hi = normalized_estimate(&bracket.hi, d, k).to_f64();
                let brute_slope = if d <= brute_cap && top * d <= 64 {
                    let c = c_dk_exact(d, k, &sphere).map_err(|e| DemoError::Cell {
                        i,
                        d,
                        message: e.to_string(),
                    })?;
                    Some(normalized_estimate(&c, d, k).to_f64())
                } else {
                    None
                };
                cells.push(GrowthCell {
                    d,
                    slope_lo,
                    slope_hi,
                    brute_slope,
                });
            }
        }
        out.push(GrowthReport {
            i,
            cal_disc,
            cal_sphere,
            hprime1,
            cells,
        });
    }
    Ok(out)
}
