//! Reference shapes built from collapsed coordinates.
//!
//! Every shape is the image of `[-1,1]^d` under a composition of Duffy maps.
//! `expand` takes tensor coordinates η to reference coordinates ξ and
//! `collapse` goes back. Each pair `(a, b)` collapses dimension `a` along
//! dimension `b`, so the polynomial degree in `a` accumulates onto `b`; the
//! ancestor sets record that accumulation and define the space of
//! ξ-polynomials that the tensor grid reproduces exactly.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A point in up to three reference coordinates. Unused trailing entries
/// are zero.
pub type Point = [f64; 3];

/// Magnitude below which a collapse denominator counts as zero.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Region tolerance applied when collapsing points.
pub const REGION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Segment,
    Quadrilateral,
    Triangle,
    Hexahedron,
    Prism,
    Pyramid,
    Tetrahedron,
}

/// Half-space `coeffs . xi <= bound` bounding a reference region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub coeffs: [f64; 3],
    pub bound: f64,
}

const fn le(coeffs: [f64; 3], bound: f64) -> Constraint {
    Constraint { coeffs, bound }
}

const SEGMENT: &[Constraint] = &[le([-1.0, 0.0, 0.0], 1.0), le([1.0, 0.0, 0.0], 1.0)];
const QUAD: &[Constraint] = &[
    le([-1.0, 0.0, 0.0], 1.0),
    le([1.0, 0.0, 0.0], 1.0),
    le([0.0, -1.0, 0.0], 1.0),
    le([0.0, 1.0, 0.0], 1.0),
];
const TRI: &[Constraint] = &[
    le([-1.0, 0.0, 0.0], 1.0),
    le([0.0, -1.0, 0.0], 1.0),
    le([1.0, 1.0, 0.0], 0.0),
];
const HEX: &[Constraint] = &[
    le([-1.0, 0.0, 0.0], 1.0),
    le([1.0, 0.0, 0.0], 1.0),
    le([0.0, -1.0, 0.0], 1.0),
    le([0.0, 1.0, 0.0], 1.0),
    le([0.0, 0.0, -1.0], 1.0),
    le([0.0, 0.0, 1.0], 1.0),
];
const PRISM: &[Constraint] = &[
    le([-1.0, 0.0, 0.0], 1.0),
    le([0.0, -1.0, 0.0], 1.0),
    le([1.0, 1.0, 0.0], 0.0),
    le([0.0, 0.0, -1.0], 1.0),
    le([0.0, 0.0, 1.0], 1.0),
];
const PYRAMID: &[Constraint] = &[
    le([-1.0, 0.0, 0.0], 1.0),
    le([0.0, -1.0, 0.0], 1.0),
    le([1.0, 0.0, 1.0], 0.0),
    le([0.0, 1.0, 1.0], 0.0),
    le([0.0, 0.0, -1.0], 1.0),
    le([0.0, 0.0, 1.0], 1.0),
];
const TET: &[Constraint] = &[
    le([-1.0, 0.0, 0.0], 1.0),
    le([0.0, -1.0, 0.0], 1.0),
    le([0.0, 0.0, -1.0], 1.0),
    le([1.0, 1.0, 1.0], -1.0),
];

impl Shape {
    pub const ALL: [Shape; 7] = [
        Shape::Segment,
        Shape::Quadrilateral,
        Shape::Triangle,
        Shape::Hexahedron,
        Shape::Prism,
        Shape::Pyramid,
        Shape::Tetrahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Segment => "segment",
            Shape::Quadrilateral => "quad",
            Shape::Triangle => "tri",
            Shape::Hexahedron => "hex",
            Shape::Prism => "prism",
            Shape::Pyramid => "pyr",
            Shape::Tetrahedron => "tet",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Shape::Segment => 1,
            Shape::Quadrilateral | Shape::Triangle => 2,
            _ => 3,
        }
    }

    /// Duffy pairs `(a, b)` (1-based): dimension `a` collapses along `b`.
    pub fn duffy_pairs(self) -> &'static [(usize, usize)] {
        match self {
            Shape::Segment | Shape::Quadrilateral | Shape::Hexahedron => &[],
            Shape::Triangle | Shape::Prism => &[(1, 2)],
            Shape::Tetrahedron => &[(1, 2), (2, 3)],
            Shape::Pyramid => &[(1, 3), (2, 3)],
        }
    }

    /// True if some pair collapses along axis `q` (0-based). Such axes must
    /// not carry a node at `+1`.
    pub fn is_along_axis(self, q: usize) -> bool {
        self.duffy_pairs().iter().any(|&(_, b)| b == q + 1)
    }

    pub fn constraints(self) -> &'static [Constraint] {
        match self {
            Shape::Segment => SEGMENT,
            Shape::Quadrilateral => QUAD,
            Shape::Triangle => TRI,
            Shape::Hexahedron => HEX,
            Shape::Prism => PRISM,
            Shape::Pyramid => PYRAMID,
            Shape::Tetrahedron => TET,
        }
    }

    /// Centroid of the reference region.
    pub fn centroid(self) -> Point {
        match self {
            Shape::Segment | Shape::Quadrilateral | Shape::Hexahedron => [0.0; 3],
            Shape::Triangle => [-1.0 / 3.0, -1.0 / 3.0, 0.0],
            Shape::Prism => [-1.0 / 3.0, -1.0 / 3.0, 0.0],
            Shape::Pyramid => [-0.25, -0.25, -0.5],
            Shape::Tetrahedron => [-0.5, -0.5, -0.5],
        }
    }

    pub fn spec(self) -> ShapeSpec {
        ShapeSpec::new(self)
    }

    /// Ancestor set `g(q)` (1-based dimensions), sorted ascending.
    pub fn ancestors(self, q: usize) -> Result<Vec<usize>> {
        let d = self.dim();
        if q == 0 || q > d {
            return Err(Error::InvalidInput(format!(
                "dimension {q} is out of range for {} (1..={d})",
                self.name()
            )));
        }
        Ok(ancestor_set(self.duffy_pairs(), q))
    }

    pub fn contains_point(self, xi: &[f64], tol: f64) -> bool {
        if xi.len() != self.dim() {
            return false;
        }
        let p = to_point(xi);
        self.constraints()
            .iter()
            .all(|c| dot(&c.coeffs, &p) <= c.bound + tol)
    }

    /// Collapses a reference point ξ to tensor coordinates η.
    #[inline]
    pub fn collapse(self, xi: &[f64]) -> Result<Point> {
        self.check_dim(xi)?;
        let p = to_point(xi);
        if !self
            .constraints()
            .iter()
            .all(|c| dot(&c.coeffs, &p) <= c.bound + REGION_TOL)
        {
            return Err(Error::OutOfRegion {
                shape: self.name(),
                point: xi.to_vec(),
            });
        }
        Ok(self.collapse_map(&p))
    }

    /// The collapse formulas without the region check. Points with a
    /// vanishing denominator take the singular branch: the collapsed
    /// coordinate becomes `-1` and the others are kept.
    #[inline]
    pub fn collapse_map(self, xi: &Point) -> Point {
        let [x1, x2, x3] = *xi;
        let ratio = |num: f64, den: f64| {
            if den.abs() < SINGULAR_TOL {
                -1.0
            } else {
                2.0 * (1.0 + num) / den - 1.0
            }
        };
        match self {
            Shape::Segment | Shape::Quadrilateral | Shape::Hexahedron => *xi,
            Shape::Triangle => {
                if (1.0 - x2).abs() < SINGULAR_TOL {
                    [-1.0, 1.0, 0.0]
                } else {
                    [ratio(x1, 1.0 - x2), x2, 0.0]
                }
            }
            Shape::Prism => [ratio(x1, 1.0 - x2), x2, x3],
            Shape::Pyramid => {
                if (1.0 - x3).abs() < SINGULAR_TOL {
                    [-1.0, -1.0, 1.0]
                } else {
                    [ratio(x1, 1.0 - x3), ratio(x2, 1.0 - x3), x3]
                }
            }
            Shape::Tetrahedron => {
                if (1.0 - x3).abs() < SINGULAR_TOL {
                    [-1.0, -1.0, 1.0]
                } else {
                    [ratio(x1, -x2 - x3), ratio(x2, 1.0 - x3), x3]
                }
            }
        }
    }

    /// Expands tensor coordinates η to the reference point ξ.
    pub fn expand(self, eta: &[f64]) -> Point {
        let [e1, e2, e3] = to_point(eta);
        let shrink = |e: f64, along: f64| 0.5 * (1.0 + e) * (1.0 - along) - 1.0;
        match self {
            Shape::Segment | Shape::Quadrilateral | Shape::Hexahedron => to_point(eta),
            Shape::Triangle => [shrink(e1, e2), e2, 0.0],
            Shape::Prism => [shrink(e1, e2), e2, e3],
            Shape::Pyramid => [shrink(e1, e3), shrink(e2, e3), e3],
            Shape::Tetrahedron => {
                let x2 = shrink(e2, e3);
                // -x2 - x3 = (1 - e2)(1 - e3)/2 >= 0 is the width along xi_1.
                let width = 0.5 * (1.0 - e2) * (1.0 - e3);
                [0.5 * (1.0 + e1) * width - 1.0, x2, e3]
            }
        }
    }

    /// `J[i][j] = d eta_i / d xi_j` of the collapse map, written in η.
    pub fn jacobian(self, eta: &[f64]) -> Result<[[f64; 3]; 3]> {
        let [e1, e2, e3] = to_point(eta);
        let singular = |den: f64| den.abs() < SINGULAR_TOL;
        let mut j = [[0.0; 3]; 3];
        for (q, row) in j.iter_mut().enumerate().take(self.dim()) {
            row[q] = 1.0;
        }
        match self {
            Shape::Segment | Shape::Quadrilateral | Shape::Hexahedron => {}
            Shape::Triangle | Shape::Prism => {
                let den = 1.0 - e2;
                if singular(den) {
                    return Err(Error::SingularCollapse(eta.to_vec()));
                }
                let g1 = 2.0 / den;
                j[0][0] = g1;
                j[0][1] = g1 * (e1 + 1.0) / 2.0;
            }
            Shape::Pyramid => {
                let den = 1.0 - e3;
                if singular(den) {
                    return Err(Error::SingularCollapse(eta.to_vec()));
                }
                j[0][0] = 2.0 / den;
                j[0][2] = (1.0 + e1) / den;
                j[1][1] = 2.0 / den;
                j[1][2] = (1.0 + e2) / den;
            }
            Shape::Tetrahedron => {
                let (den2, den3) = (1.0 - e2, 1.0 - e3);
                if singular(den3) || singular(0.5 * den2 * den3) {
                    return Err(Error::SingularCollapse(eta.to_vec()));
                }
                let width = 0.5 * den2 * den3;
                j[0][0] = 2.0 / width;
                j[0][1] = (1.0 + e1) / width;
                j[0][2] = (1.0 + e1) / width;
                j[1][1] = 2.0 / den3;
                j[1][2] = (1.0 + e2) / den3;
            }
        }
        Ok(j)
    }

    /// True iff `sum_{j in g(q)} alpha_j <= k_q` for every dimension `q`.
    pub fn exactness_contains(self, k: &[usize], alpha: &[usize]) -> bool {
        let d = self.dim();
        assert!(
            k.len() == d && alpha.len() == d,
            "k and alpha must have {d} entries"
        );
        let pairs = self.duffy_pairs();
        (1..=d).all(|q| {
            let sum: usize = ancestor_set(pairs, q).iter().map(|&i| alpha[i - 1]).sum();
            sum <= k[q - 1]
        })
    }

    /// Largest `t` in `[0, t_max]` keeping `xi + t * dir` inside the region.
    pub fn max_feasible_step(self, xi: &[f64], dir: &[f64], t_max: f64) -> f64 {
        let p = to_point(xi);
        let s = to_point(dir);
        let mut t = t_max;
        for c in self.constraints() {
            let rate = dot(&c.coeffs, &s);
            if rate > 0.0 {
                let slack = (c.bound - dot(&c.coeffs, &p)).max(0.0);
                t = t.min(slack / rate);
            }
        }
        t
    }

    fn check_dim(self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "{} points have {} coordinates, got {}",
                self.name(),
                self.dim(),
                x.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "segment" | "seg" => Ok(Shape::Segment),
            "quad" | "quadrilateral" => Ok(Shape::Quadrilateral),
            "tri" | "triangle" => Ok(Shape::Triangle),
            "hex" | "hexahedron" => Ok(Shape::Hexahedron),
            "prism" => Ok(Shape::Prism),
            "pyr" | "pyramid" => Ok(Shape::Pyramid),
            "tet" | "tetrahedron" => Ok(Shape::Tetrahedron),
            other => Err(Error::UnknownShape(other.to_string())),
        }
    }
}

/// Shape identity with its collapse structure spelled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeSpec {
    pub shape: Shape,
    pub dim: usize,
    pub duffy_pairs: Vec<(usize, usize)>,
    /// `ancestor_sets[q - 1] = g(q)`.
    pub ancestor_sets: Vec<Vec<usize>>,
}

impl ShapeSpec {
    pub fn new(shape: Shape) -> Self {
        let pairs = shape.duffy_pairs();
        Self {
            shape,
            dim: shape.dim(),
            duffy_pairs: pairs.to_vec(),
            ancestor_sets: (1..=shape.dim()).map(|q| ancestor_set(pairs, q)).collect(),
        }
    }
}

// g(q) = {q} plus every dimension whose degree is pushed onto q by a chain
// of pairs (a -> b).
fn ancestor_set(pairs: &[(usize, usize)], q: usize) -> Vec<usize> {
    let mut set = vec![q];
    let mut frontier = vec![q];
    while let Some(b) = frontier.pop() {
        for &(a, bb) in pairs {
            if bb == b && !set.contains(&a) {
                set.push(a);
                frontier.push(a);
            }
        }
    }
    set.sort_unstable();
    set
}

pub(crate) fn to_point(x: &[f64]) -> Point {
    let mut p = [0.0; 3];
    for (dst, &src) in p.iter_mut().zip(x) {
        *dst = src;
    }
    p
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_eta(rng: &mut ChaCha8Rng, d: usize, hi: f64) -> Vec<f64> {
        (0..d).map(|_| rng.gen_range(-1.0..=hi)).collect()
    }

    #[test]
    fn table_of_ancestors() {
        let g = |s: Shape, q| s.ancestors(q).unwrap();
        assert_eq!(g(Shape::Quadrilateral, 1), vec![1]);
        assert_eq!(g(Shape::Quadrilateral, 2), vec![2]);
        assert_eq!(g(Shape::Triangle, 1), vec![1]);
        assert_eq!(g(Shape::Triangle, 2), vec![1, 2]);
        for q in 1..=3 {
            assert_eq!(g(Shape::Hexahedron, q), vec![q]);
        }
        assert_eq!(g(Shape::Prism, 1), vec![1]);
        assert_eq!(g(Shape::Prism, 2), vec![1, 2]);
        assert_eq!(g(Shape::Prism, 3), vec![3]);
        assert_eq!(g(Shape::Tetrahedron, 1), vec![1]);
        assert_eq!(g(Shape::Tetrahedron, 2), vec![1, 2]);
        assert_eq!(g(Shape::Tetrahedron, 3), vec![1, 2, 3]);
        assert_eq!(g(Shape::Pyramid, 1), vec![1]);
        assert_eq!(g(Shape::Pyramid, 2), vec![2]);
        assert_eq!(g(Shape::Pyramid, 3), vec![1, 2, 3]);
        assert!(Shape::Triangle.ancestors(3).is_err());
        assert!(Shape::Triangle.ancestors(0).is_err());
    }

    #[test]
    fn pair_ordering_rules() {
        for shape in Shape::ALL {
            let pairs = shape.duffy_pairs();
            assert!(pairs.iter().all(|&(a, b)| a < b && b <= shape.dim()));
            assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        }
        let spec = Shape::Pyramid.spec();
        assert_eq!(spec.duffy_pairs, vec![(1, 3), (2, 3)]);
        assert_eq!(spec.ancestor_sets[2], vec![1, 2, 3]);
    }

    #[test]
    fn triangle_collapse_examples() {
        assert_eq!(
            Shape::Triangle.collapse(&[-0.5, 0.0]).unwrap(),
            [0.0, 0.0, 0.0]
        );
        assert_eq!(
            Shape::Triangle.collapse(&[-1.0, 1.0]).unwrap(),
            [-1.0, 1.0, 0.0]
        );
        let xi = Shape::Triangle.expand(&[0.0, 0.0]);
        assert_eq!(&xi[..2], &[-0.5, 0.0]);
        assert!(matches!(
            Shape::Triangle.collapse(&[0.5, 0.5]),
            Err(Error::OutOfRegion { .. })
        ));
    }

    #[test]
    fn tensor_shapes_are_identity() {
        let xi = [0.3, -0.9, 0.75];
        assert_eq!(Shape::Hexahedron.collapse(&xi).unwrap(), xi);
        assert_eq!(Shape::Hexahedron.expand(&xi), xi);
        assert_eq!(
            Shape::Quadrilateral.jacobian(&[0.2, 0.1]).unwrap()[0],
            [1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn tet_vertex_is_fixed() {
        assert_eq!(
            Shape::Tetrahedron.expand(&[-1.0, -1.0, -1.0]),
            [-1.0, -1.0, -1.0]
        );
    }

    #[test]
    fn region_membership() {
        assert!(Shape::Tetrahedron.contains_point(&[-0.5, -0.5, -0.5], 0.0));
        assert!(!Shape::Tetrahedron.contains_point(&[0.1, 0.2, -0.3], 0.0));
        assert!(Shape::Quadrilateral.contains_point(&[1.0, 1.0], 0.0));
        assert!(!Shape::Quadrilateral.contains_point(&[1.0 + 1e-9, 1.0], 0.0));
        assert!(Shape::Quadrilateral.contains_point(&[1.0 + 1e-9, 1.0], 1e-8));
        assert!(Shape::Pyramid.contains_point(&[-1.0, -1.0, 1.0], 0.0));
        assert!(!Shape::Pyramid.contains_point(&[0.0, -1.0, 0.5], 0.0));
        assert!(!Shape::Triangle.contains_point(&[0.0, 0.0, 0.0], 0.0));
    }

    fn smallest_denominator(shape: Shape, eta: &[f64]) -> f64 {
        let e = to_point(eta);
        match shape {
            Shape::Triangle | Shape::Prism => 1.0 - e[1],
            Shape::Pyramid => 1.0 - e[2],
            Shape::Tetrahedron => (0.5 * (1.0 - e[1]) * (1.0 - e[2])).min(1.0 - e[2]),
            _ => 1.0,
        }
    }

    #[test]
    fn round_trip_is_exact_away_from_singular_faces() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for shape in Shape::ALL {
            let d = shape.dim();
            for _ in 0..1000 {
                let eta = random_eta(&mut rng, d, 0.9);
                let back = shape.collapse(&shape.expand(&eta)[..d]).unwrap();
                for q in 0..d {
                    assert!(
                        (back[q] - eta[q]).abs() <= 1e-14,
                        "{shape} {eta:?} -> {back:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn round_trip_and_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for shape in Shape::ALL {
            let d = shape.dim();
            for _ in 0..1000 {
                let eta = random_eta(&mut rng, d, 1.0 - 1e-8);
                let xi = shape.expand(&eta);
                assert!(shape.contains_point(&xi[..d], 1e-12), "{shape} {eta:?}");
                let back = shape.collapse(&xi[..d]).unwrap();
                // Rounding in xi is amplified by 1/denominator on the way back.
                let tol = 1e-14 / smallest_denominator(shape, &eta).min(1.0);
                for q in 0..d {
                    assert!(
                        (back[q] - eta[q]).abs() <= tol,
                        "{shape} {eta:?} -> {back:?}"
                    );
                }
            }
            for _ in 0..200 {
                let eta = random_eta(&mut rng, d, 1.0);
                let xi = shape.expand(&eta);
                assert!(shape.contains_point(&xi[..d], 1e-12));
            }
        }
    }

    fn fd_jacobian(shape: Shape, xi: &Point, h: f64) -> [[f64; 3]; 3] {
        let d = shape.dim();
        let mut j = [[0.0; 3]; 3];
        for c in 0..d {
            let mut plus = *xi;
            let mut minus = *xi;
            plus[c] += h;
            minus[c] -= h;
            let fp = shape.collapse_map(&plus);
            let fm = shape.collapse_map(&minus);
            for r in 0..d {
                j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        j
    }

    #[test]
    fn jacobian_examples() {
        let j = Shape::Triangle.jacobian(&[0.0, 0.0]).unwrap();
        assert_eq!(j[0][..2], [2.0, 1.0]);
        assert_eq!(j[1][..2], [0.0, 1.0]);
        let j = Shape::Tetrahedron.jacobian(&[-1.0, -1.0, -1.0]).unwrap();
        let fd = fd_jacobian(Shape::Tetrahedron, &[-1.0, -1.0, -1.0], 1e-5);
        for r in 0..3 {
            for c in 0..3 {
                assert_abs_diff_eq!(j[r][c], fd[r][c], epsilon = 1e-6);
            }
        }
        assert!(matches!(
            Shape::Triangle.jacobian(&[0.0, 1.0]),
            Err(Error::SingularCollapse(_))
        ));
        assert!(Shape::Tetrahedron.jacobian(&[0.0, 1.0, 0.0]).is_err());
        assert!(Shape::Pyramid.jacobian(&[0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for shape in Shape::ALL {
            let d = shape.dim();
            for _ in 0..200 {
                // Stay 0.1 away from the singular faces eta_b = 1.
                let eta: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..0.9)).collect();
                let xi = shape.expand(&eta);
                let j = shape.jacobian(&eta).unwrap();
                let fd = fd_jacobian(shape, &xi, 1e-6);
                for r in 0..d {
                    for c in 0..d {
                        assert!(
                            (j[r][c] - fd[r][c]).abs() <= 1e-6,
                            "{shape} {eta:?} [{r}][{c}]"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exactness_examples() {
        assert!(!Shape::Triangle.exactness_contains(&[4, 4], &[2, 3]));
        assert!(Shape::Triangle.exactness_contains(&[4, 4], &[2, 2]));
        assert!(Shape::Hexahedron.exactness_contains(&[3, 3, 3], &[3, 3, 3]));
        assert!(!Shape::Hexahedron.exactness_contains(&[3, 3, 3], &[4, 0, 0]));
        assert!(Shape::Pyramid.exactness_contains(&[3, 3, 3], &[1, 1, 1]));
        assert!(!Shape::Pyramid.exactness_contains(&[3, 3, 3], &[1, 1, 2]));
    }

    #[test]
    fn exactness_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for shape in Shape::ALL {
            let d = shape.dim();
            for _ in 0..500 {
                let k: Vec<usize> = (0..d).map(|_| rng.gen_range(0..6)).collect();
                let alpha: Vec<usize> = (0..d).map(|_| rng.gen_range(0..6)).collect();
                if !shape.exactness_contains(&k, &alpha) {
                    continue;
                }
                let smaller: Vec<usize> = alpha.iter().map(|&a| rng.gen_range(0..=a)).collect();
                assert!(shape.exactness_contains(&k, &smaller));
            }
        }
    }

    #[test]
    fn feasible_step_stops_at_boundary() {
        let t = Shape::Triangle.max_feasible_step(&[-0.5, -0.5], &[1.0, 1.0], 10.0);
        assert_abs_diff_eq!(t, 0.5, epsilon = 1e-15);
        let t = Shape::Quadrilateral.max_feasible_step(&[0.0, 0.0], &[0.1, 0.0], 1.0);
        assert_eq!(t, 1.0);
    }

    #[test]
    fn centroids_are_inside() {
        for shape in Shape::ALL {
            let c = shape.centroid();
            assert!(shape.contains_point(&c[..shape.dim()], 0.0));
        }
    }

    #[test]
    fn names_round_trip() {
        for shape in Shape::ALL {
            assert_eq!(shape.name().parse::<Shape>().unwrap(), shape);
        }
        assert_eq!(
            "cube".parse::<Shape>(),
            Err(Error::UnknownShape("cube".into()))
        );
    }
}
