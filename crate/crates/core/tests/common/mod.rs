//! Shared test support: independent oracles and seeded path sampling.

use pfh_core::path::{Label, LatticePath};
use pfh_core::shapes::{enumerate_shapes, Shape};
use pfh_core::value::Q64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Brute-force lattice scan for (j+, j-): classify every point of the
/// bounding box against the region definitions, independent of the
/// column-sum implementation.
pub fn count_j_brute(path: &LatticePath) -> (i64, i64) {
    let d = path.degree();
    let ys: Vec<i64> = path.vertices().iter().map(|&(_, y)| y).collect();
    let lo = *ys.iter().min().unwrap();
    let hi = *ys.iter().max().unwrap();
    let (lo, hi) = (lo.min(0), hi.max(0));
    let mut jp = 0;
    let mut jm = 0;
    for x in 0..=d {
        let h = path.height_at(x);
        for t in lo..=hi {
            let tq = Q64::from_integer(t);
            if t >= 0 && tq <= h && tq != h {
                jp += 1;
            }
            if t < 0 && tq >= h {
                jm += 1;
            }
        }
    }
    (jp, jm)
}

/// Global-hull oracle for corner rounding: rebuild the whole lower
/// boundary of the region above the path (rays attached) minus the
/// corner, with no locality shortcut.
pub fn round_corner_global(path: &LatticePath, corner_vertex: usize) -> LatticePath {
    let d = path.degree();
    let verts = path.vertices();
    let corner = verts[corner_vertex];
    let cap = verts.iter().map(|&(_, y)| y).max().unwrap() + 3;
    let mut lowest: Vec<(i64, i64)> = Vec::new();
    for x in 0..=d {
        let floor_b = path.height_at(x).ceil().to_integer();
        let mut t = floor_b;
        let low = loop {
            if (x, t) != corner {
                break t;
            }
            t += 1;
        };
        assert!(low <= cap);
        lowest.push((x, low));
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in lowest {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            if (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut edges = Vec::new();
    for w in hull.windows(2) {
        let dx = w[1].0 - w[0].0;
        let dy = w[1].1 - w[0].1;
        let g = num::integer::gcd(dx, dy).max(1);
        edges.push(pfh_core::path::Edge::new(
            pfh_core::path::Slope::new(dy / g, dx / g),
            g,
            Label::E,
        ));
    }
    LatticePath::new(hull[0].1, edges)
}

pub struct PathSampler {
    rng: ChaCha8Rng,
    shapes: Vec<Vec<Shape>>,
    top: i64,
    max_d: i64,
}

impl PathSampler {
    pub fn new(seed: u64, max_d: i64, top: i64) -> Self {
        let shapes = (1..=max_d).map(|d| enumerate_shapes(d, top)).collect();
        PathSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            shapes,
            top,
            max_d,
        }
    }

    pub fn sample(&mut self) -> LatticePath {
        let d = self.rng.gen_range(1..=self.max_d);
        let pool = &self.shapes[(d - 1) as usize];
        let shape = &pool[self.rng.gen_range(0..pool.len())];
        let interior = shape.interior_positions(self.top);
        let labels: Vec<usize> = interior
            .into_iter()
            .filter(|_| self.rng.gen_bool(0.3))
            .collect();
        let y = self.rng.gen_range(-10..=10);
        shape.to_path(y, &labels)
    }

    pub fn sample_all_e(&mut self, y_range: std::ops::RangeInclusive<i64>) -> LatticePath {
        let d = self.rng.gen_range(1..=self.max_d);
        let pool = &self.shapes[(d - 1) as usize];
        let shape = &pool[self.rng.gen_range(0..pool.len())];
        let y = self.rng.gen_range(y_range);
        shape.all_e_path(y)
    }
}
