//! Evaluation of a sampled field at arbitrary reference points of a shape.

use crate::bary1d::{Deriv, EvalResult};
use crate::duffy::{Shape, ShapeSpec};
use crate::nodes::{NodeKind, NodeSet};
use crate::tensor::{self, FieldValues, TensorBasis};
use crate::{Error, Result};

/// Tensor basis with `n` points per axis: Gauss-Radau (without `+1`) on the
/// axes a collapse divides by, GLL elsewhere.
pub fn shape_basis(shape: Shape, n: usize) -> Result<TensorBasis> {
    let axes = (0..shape.dim())
        .map(|q| NodeSet::new(axis_kind(shape, q), n))
        .collect::<Result<Vec<_>>>()?;
    TensorBasis::new(axes)
}

/// Basis for polynomial order `order`, i.e. `order + 2` points per axis.
pub fn order_basis(shape: Shape, order: usize) -> Result<TensorBasis> {
    shape_basis(shape, order + 2)
}

/// Node family used on axis `q` (0-based) of `shape`.
pub fn axis_kind(shape: Shape, q: usize) -> NodeKind {
    if shape.is_along_axis(q) {
        NodeKind::GaussRadauMinus
    } else {
        NodeKind::GaussLobattoLegendre
    }
}

fn check_basis(shape: Shape, basis: &TensorBasis) -> Result<()> {
    if basis.dim() != shape.dim() {
        return Err(Error::InvalidInput(format!(
            "{} needs {} axes, basis has {}",
            shape.name(),
            shape.dim(),
            basis.dim()
        )));
    }
    for (q, axis) in basis.axes().iter().enumerate() {
        if shape.is_along_axis(q) && axis.contains_plus_one() {
            return Err(Error::InvalidInput(format!(
                "axis {} of a {} must not contain the node +1",
                q + 1,
                shape.name()
            )));
        }
    }
    Ok(())
}

/// A field sampled on the collapsed tensor grid of one reference shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementEvaluator {
    spec: ShapeSpec,
    basis: TensorBasis,
    field: FieldValues,
}

impl ElementEvaluator {
    pub fn new(shape: Shape, basis: TensorBasis, field: FieldValues) -> Result<Self> {
        check_basis(shape, &basis)?;
        if field.len() != basis.grid_len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the grid has {}",
                field.len(),
                basis.grid_len()
            )));
        }
        Ok(Self {
            spec: shape.spec(),
            basis,
            field,
        })
    }

    /// Samples `f(xi)` at the expanded grid points of `basis`.
    pub fn from_fn(shape: Shape, basis: TensorBasis, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        check_basis(shape, &basis)?;
        let field = sample(shape, &basis, f);
        Self::new(shape, basis, field)
    }

    /// [`from_fn`](Self::from_fn) on the default basis of order `order`.
    pub fn for_order(shape: Shape, order: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(shape, order_basis(shape, order)?, f)
    }

    pub fn shape(&self) -> Shape {
        self.spec.shape
    }

    pub fn spec(&self) -> &ShapeSpec {
        &self.spec
    }

    pub fn basis(&self) -> &TensorBasis {
        &self.basis
    }

    pub fn field(&self) -> &FieldValues {
        &self.field
    }

    /// Value, and optionally the ξ-gradient, at the reference point `xi`.
    pub fn phys_evaluate(&self, xi: &[f64], want: Deriv) -> Result<EvalResult> {
        phys_evaluate_parts(self.shape(), &self.basis, self.field.data(), xi, want)
    }

    /// Segment evaluation with up to the second derivative.
    pub fn phys_evaluate_1d(&self, xi: f64, want: Deriv) -> Result<EvalResult> {
        if self.shape() != Shape::Segment {
            return Err(Error::InvalidInput(format!(
                "1D evaluation needs a segment, not a {}",
                self.shape().name()
            )));
        }
        crate::bary_evaluate(self.basis.axis(0), self.field.data(), xi, want)
    }
}

/// Samples `f` at every grid point of `basis`, expanded into ξ space.
pub fn sample(shape: Shape, basis: &TensorBasis, f: impl Fn(&[f64]) -> f64) -> FieldValues {
    let d = shape.dim();
    let data = (0..basis.grid_len())
        .map(|i| {
            let eta = basis.grid_point(i);
            f(&shape.expand(&eta[..d])[..d])
        })
        .collect();
    FieldValues::new(basis, data).expect("grid-sized")
}

/// The evaluation pipeline on borrowed parts: region check, collapse, tensor
/// contraction and the chain rule `grad_xi = J^T grad_eta`.
pub(crate) fn phys_evaluate_parts(
    shape: Shape,
    basis: &TensorBasis,
    data: &[f64],
    xi: &[f64],
    want: Deriv,
) -> Result<EvalResult> {
    let d = shape.dim();
    if want.second() && d > 1 {
        return Err(Error::InvalidInput(
            "second derivatives are only available in 1D".into(),
        ));
    }
    if xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite point {xi:?}")));
    }
    let eta = shape.collapse(xi)?;
    let r = tensor::evaluate_unchecked(basis, data, &eta[..d], want);
    if !want.first() || d == 1 {
        return Ok(r);
    }
    let j = shape.jacobian(&eta[..d])?;
    let g_eta = r.gradient().expect("gradient requested");
    let mut g = [0.0; 3];
    for (col, gj) in g.iter_mut().enumerate().take(d) {
        *gj = (0..d).map(|row| j[row][col] * g_eta[row]).sum();
    }
    Ok(EvalResult::with_gradient(r.value, &g[..d]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfields::{
        fd_gradient, minimal_violators, monomial, saddle_field, random_exact_monomial,
        random_interior_point,
    };
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn saddle(shape: Shape, order: usize) -> ElementEvaluator {
        let f = saddle_field(shape.dim()).unwrap();
        ElementEvaluator::for_order(shape, order, |x| f.eval(x)).unwrap()
    }

    #[test]
    fn tet_saddle_field() {
        let ev = saddle(Shape::Tetrahedron, 2);
        let r = ev.phys_evaluate(&[-0.5, -0.5, -0.5], Deriv::First).unwrap();
        assert_abs_diff_eq!(r.value, 0.25, epsilon = 1e-13);
        let g = r.gradient().unwrap();
        for (a, b) in g.iter().zip([-1.0, -1.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangle_saddle_field() {
        let ev = saddle(Shape::Triangle, 3);
        let r = ev.phys_evaluate(&[-0.5, -0.5], Deriv::First).unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-13);
        let g = r.gradient().unwrap();
        assert_abs_diff_eq!(g[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn segment_second_derivative() {
        let ev = saddle(Shape::Segment, 2);
        let r = ev.phys_evaluate_1d(0.5, Deriv::Second).unwrap();
        assert_abs_diff_eq!(r.value, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(r.d1().unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.d2.unwrap(), 2.0, epsilon = 1e-11);
        assert!(saddle(Shape::Quadrilateral, 2)
            .phys_evaluate_1d(0.0, Deriv::Value)
            .is_err());
    }

    #[test]
    fn constants_everywhere_including_singular_faces() {
        for shape in Shape::ALL {
            let ev = ElementEvaluator::for_order(shape, 4, |_| 3.25).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..20 {
                let xi = random_interior_point(shape, 0.01, &mut rng);
                let r = ev.phys_evaluate(&xi, Deriv::First).unwrap();
                assert_abs_diff_eq!(r.value, 3.25, epsilon = 1e-12);
                for g in r.gradient().unwrap() {
                    assert_abs_diff_eq!(*g, 0.0, epsilon = 1e-10);
                }
            }
            let top = shape.expand(&vec![1.0; shape.dim()]);
            let r = ev.phys_evaluate(&top[..shape.dim()], Deriv::Value).unwrap();
            assert_abs_diff_eq!(r.value, 3.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn gradient_at_singular_face_is_an_error() {
        let ev = saddle(Shape::Triangle, 3);
        assert!(matches!(
            ev.phys_evaluate(&[-1.0, 1.0], Deriv::First),
            Err(Error::SingularCollapse(_))
        ));
        assert_abs_diff_eq!(
            ev.phys_evaluate(&[-1.0, 1.0], Deriv::Value).unwrap().value,
            2.0,
            epsilon = 1e-12
        );
        let ev = saddle(Shape::Pyramid, 3);
        assert!(ev.phys_evaluate(&[-1.0, -1.0, 1.0], Deriv::First).is_err());
        let ev = saddle(Shape::Tetrahedron, 3);
        assert!(ev.phys_evaluate(&[-1.0, -1.0, 1.0], Deriv::First).is_err());
    }

    #[test]
    fn out_of_region_is_rejected() {
        let ev = saddle(Shape::Triangle, 2);
        assert!(matches!(
            ev.phys_evaluate(&[0.5, 0.5], Deriv::Value),
            Err(Error::OutOfRegion { .. })
        ));
        assert!(ev.phys_evaluate(&[0.0], Deriv::Value).is_err());
        assert!(ev.phys_evaluate(&[0.0, 0.0], Deriv::Second).is_err());
    }

    #[test]
    fn invalid_bases_are_rejected() {
        let gll = TensorBasis::isotropic(NodeKind::GaussLobattoLegendre, 4, 2).unwrap();
        let field = FieldValues::from_fn(&gll, |_| 0.0);
        assert!(ElementEvaluator::new(Shape::Triangle, gll.clone(), field.clone()).is_err());
        assert!(ElementEvaluator::new(Shape::Quadrilateral, gll.clone(), field).is_ok());
        let short =
            FieldValues::new(&shape_basis(Shape::Segment, 3).unwrap(), vec![0.0; 3]).unwrap();
        assert!(ElementEvaluator::new(Shape::Quadrilateral, gll, short).is_err());
    }

    #[test]
    fn axis_kinds_follow_the_collapse() {
        use NodeKind::*;
        let kinds = |s: Shape| (0..s.dim()).map(|q| axis_kind(s, q)).collect::<Vec<_>>();
        assert_eq!(
            kinds(Shape::Triangle),
            vec![GaussLobattoLegendre, GaussRadauMinus]
        );
        assert_eq!(
            kinds(Shape::Prism),
            vec![GaussLobattoLegendre, GaussRadauMinus, GaussLobattoLegendre]
        );
        assert_eq!(
            kinds(Shape::Pyramid),
            vec![GaussLobattoLegendre, GaussLobattoLegendre, GaussRadauMinus]
        );
        assert_eq!(
            kinds(Shape::Tetrahedron),
            vec![GaussLobattoLegendre, GaussRadauMinus, GaussRadauMinus]
        );
        assert_eq!(kinds(Shape::Hexahedron), vec![GaussLobattoLegendre; 3]);
        assert_eq!(order_basis(Shape::Hexahedron, 3).unwrap().grid_len(), 125);
    }

    #[test]
    fn exact_on_the_polynomial_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for shape in Shape::ALL {
            for k in [2, 5, 8] {
                for seed in 0..5 {
                    let (alpha, f) = random_exact_monomial(shape, k, seed * 31 + k as u64);
                    let basis = shape_basis(shape, k + 1).unwrap();
                    let ev = ElementEvaluator::from_fn(shape, basis, |x| f.eval(x)).unwrap();
                    for _ in 0..10 {
                        let xi = random_interior_point(shape, 0.02, &mut rng);
                        let got = ev.phys_evaluate(&xi, Deriv::Value).unwrap().value;
                        let exact = f.eval(&xi);
                        assert!(
                            (got - exact).abs() <= 1e-10 * exact.abs().max(1.0),
                            "{shape} k={k} alpha={alpha:?}: {got} vs {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn monomials_outside_the_space_are_not_reproduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for shape in Shape::ALL {
            let k = 4;
            let basis = shape_basis(shape, k + 1).unwrap();
            for alpha in minimal_violators(shape, k) {
                let f = monomial(&alpha);
                let ev = ElementEvaluator::from_fn(shape, basis.clone(), |x| f.eval(x)).unwrap();
                let worst = (0..10)
                    .map(|_| {
                        let xi = random_interior_point(shape, 0.02, &mut rng);
                        (ev.phys_evaluate(&xi, Deriv::Value).unwrap().value - f.eval(&xi)).abs()
                    })
                    .fold(0.0, f64::max);
                assert!(worst > 1e-6, "{shape} {alpha:?}: {worst}");
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for shape in Shape::ALL {
            let (_, f) = random_exact_monomial(shape, 4, 99);
            let ev =
                ElementEvaluator::for_order(shape, 4, |x| (x[0] * 1.3).sin() + f.eval(x)).unwrap();
            for _ in 0..20 {
                let xi = random_interior_point(shape, 0.1, &mut rng);
                let r = ev.phys_evaluate(&xi, Deriv::First).unwrap();
                let fd = fd_gradient(
                    |x| ev.phys_evaluate(x, Deriv::Value).unwrap().value,
                    &xi,
                    1e-5,
                );
                for (a, b) in r.gradient().unwrap().iter().zip(&fd) {
                    assert!((a - b).abs() <= 1e-6, "{shape} at {xi:?}: {a} vs {b}");
                }
            }
        }
    }
}
