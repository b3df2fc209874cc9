//! Shape enumeration.
//!
//! A *shape* is the unlabeled edge data of a concave path: slopes in
//! strictly increasing order with multiplicities, horizontal extents
//! summing to the degree. Shapes are shared by the chain complex, the
//! spectral maximization, and the order-d spectrum, so they live here.

use crate::path::{Edge, Label, LatticePath, Slope};
use num::integer::gcd;

/// All admissible slopes for degree-d paths under top slope `top`:
/// `p/q` in lowest terms with `q <= d` and `0 <= p/q <= top`, ascending.
pub fn slope_menu(d: i64, top: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in 1..=d {
        for p in 0..=top * q {
            if gcd(p, q) == 1 || (p == 0 && q == 1) {
                out.push(Slope { p, q });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Unlabeled edge data: ascending slopes with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub parts: Vec<(Slope, i64)>,
}

impl Shape {
    pub fn degree(&self) -> i64 {
        self.parts.iter().map(|&(s, m)| s.q * m).sum()
    }

    /// Positions whose slope is strictly between 0 and `top`, the only
    /// edges that may carry an H label.
    pub fn interior_positions(&self, top: i64) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .filter(|(_, &(s, _))| !s.is_zero() && s < Slope::new(top, 1))
            .map(|(i, _)| i)
            .collect()
    }

    /// Materialize as a path at height `y` with H labels at `h_at`.
    pub fn to_path(&self, y: i64, h_at: &[usize]) -> LatticePath {
        let edges = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &(s, m))| {
                Edge::new(
                    s,
                    m,
                    if h_at.contains(&i) {
                        Label::H
                    } else {
                        Label::E
                    },
                )
            })
            .collect();
        LatticePath::new(y, edges)
    }

    pub fn all_e_path(&self, y: i64) -> LatticePath {
        self.to_path(y, &[])
    }
}

/// Every shape of the given degree: recursion over the ascending slope
/// menu, choosing a multiplicity for each slope used. Deterministic
/// lexicographic order.
pub fn enumerate_shapes(d: i64, top: i64) -> Vec<Shape> {
    let menu = slope_menu(d, top);
    let mut out = Vec::new();
    let mut current: Vec<(Slope, i64)> = Vec::new();
    fn recurse(
        menu: &[Slope],
        from: usize,
        remaining: i64,
        current: &mut Vec<(Slope, i64)>,
        out: &mut Vec<Shape>,
    ) {
        if remaining == 0 {
            out.push(Shape {
                parts: current.clone(),
            });
            return;
        }
        for i in from..menu.len() {
            let q = menu[i].q;
            if q > remaining {
                continue;
            }
            let max_m = remaining / q;
            for m in 1..=max_m {
                current.push((menu[i], m));
                recurse(menu, i + 1, remaining - m * q, current, out);
                current.pop();
            }
        }
    }
    recurse(&menu, 0, d, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_shapes_for_quadratic_top() {
        let shapes = enumerate_shapes(1, 2);
        let mut sigs: Vec<String> = shapes
            .iter()
            .map(|s| format!("{:?}", s.parts.iter().map(|&(sl, m)| (sl.q, sl.p, m)).collect::<Vec<_>>()))
            .collect();
        sigs.sort();
        assert_eq!(shapes.len(), 3); // slopes 0, 1, 2 with q = 1
        assert!(sigs.iter().any(|s| s.contains("(1, 0, 1)")));
        assert!(sigs.iter().any(|s| s.contains("(1, 1, 1)")));
        assert!(sigs.iter().any(|s| s.contains("(1, 2, 1)")));
    }

    #[test]
    fn all_shapes_have_right_degree_and_order() {
        for d in 1..=6 {
            for shape in enumerate_shapes(d, 2) {
                assert_eq!(shape.degree(), d);
                for w in shape.parts.windows(2) {
                    assert!(w[0].0 < w[1].0);
                }
            }
        }
    }

    #[test]
    fn menu_is_sorted_and_reduced() {
        let menu = slope_menu(4, 2);
        for w in menu.windows(2) {
            assert!(w[0] < w[1]);
        }
        for s in menu {
            assert!(gcd(s.p, s.q) == 1 || (s.p == 0 && s.q == 1));
            assert!(s.q <= 4 && s.p <= 2 * s.q);
        }
    }
}
