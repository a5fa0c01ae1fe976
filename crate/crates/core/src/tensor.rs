//! Dimension-by-dimension barycentric evaluation on `[-1,1]^d`, `d <= 3`.
//!
//! Field samples are stored with the first index fastest: the line along
//! η₁ for fixed `(j2, j3)` starts at `(j3 * n2 + j2) * n1`.
//!
//! With gradients requested, 2D evaluation makes `n2 + 2` kernel calls:
//! `n2` value+derivative contractions along η₁, then the value line is
//! contracted along η₂ with its derivative and the η₁-derivative line is
//! contracted value-only. 3D repeats the 2D step on each of the `n3`
//! planes and finishes along η₃, for `n2*n3 + 2*n3 + 3` calls in total
//! (`n2*n3 + n3 + 1` for values only).

use arrayvec::ArrayVec;

use crate::bary1d::{self, AxisFactors, Deriv, EvalResult};
use crate::nodes::{NodeKind, NodeSet};
use crate::{Error, Result, MAX_POINTS};

#[derive(Debug, Clone, PartialEq)]
pub struct TensorBasis {
    axes: Vec<NodeSet>,
}

impl TensorBasis {
    pub fn new(axes: Vec<NodeSet>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidInput(format!(
                "tensor bases have 1 to 3 axes, got {}",
                axes.len()
            )));
        }
        Ok(Self { axes })
    }

    /// `dim` copies of the same node family with `n` points.
    pub fn isotropic(kind: NodeKind, n: usize, dim: usize) -> Result<Self> {
        let set = NodeSet::new(kind, n)?;
        Self::new(vec![set; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[NodeSet] {
        &self.axes
    }

    pub fn axis(&self, q: usize) -> &NodeSet {
        &self.axes[q]
    }

    /// Points per axis.
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(NodeSet::len).collect()
    }

    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(NodeSet::len).product()
    }

    /// Number of barycentric weights the evaluator keeps: one per node per
    /// axis rather than one per grid point.
    pub fn weight_storage(&self) -> usize {
        self.axes.iter().map(|a| a.weights().len()).sum()
    }

    /// η coordinates of the grid point with flat index `index`.
    pub fn grid_point(&self, index: usize) -> [f64; 3] {
        let mut p = [0.0; 3];
        let mut rest = index;
        for (q, axis) in self.axes.iter().enumerate() {
            p[q] = axis.nodes()[rest % axis.len()];
            rest /= axis.len();
        }
        p
    }
}

/// Samples of a field on the tensor grid of a [`TensorBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldValues {
    data: Vec<f64>,
}

impl FieldValues {
    pub fn new(basis: &TensorBasis, data: Vec<f64>) -> Result<Self> {
        if data.len() != basis.grid_len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the grid has {}",
                data.len(),
                basis.grid_len()
            )));
        }
        Ok(Self { data })
    }

    /// Samples `f(eta)` at every grid point.
    pub fn from_fn(basis: &TensorBasis, f: impl Fn(&[f64]) -> f64) -> Self {
        let d = basis.dim();
        let data = (0..basis.grid_len())
            .map(|i| f(&basis.grid_point(i)[..d]))
            .collect();
        Self { data }
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

fn check(basis: &TensorBasis, field: &FieldValues, eta: &[f64]) -> Result<()> {
    if eta.len() != basis.dim() {
        return Err(Error::InvalidInput(format!(
            "expected a {}-dimensional point, got {}",
            basis.dim(),
            eta.len()
        )));
    }
    if field.len() != basis.grid_len() {
        return Err(Error::InvalidInput(format!(
            "field has {} values but the grid has {}",
            field.len(),
            basis.grid_len()
        )));
    }
    if eta.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite point {eta:?}")));
    }
    Ok(())
}

/// Evaluates the tensor interpolant at η with an optional η-gradient
/// (second derivatives in 1D only).
pub fn tensor_evaluate(
    basis: &TensorBasis,
    field: &FieldValues,
    eta: &[f64],
    want: Deriv,
) -> Result<EvalResult> {
    check(basis, field, eta)?;
    let d = basis.dim();
    if d > 1 && want.second() {
        return Err(Error::InvalidInput(
            "second derivatives are only available in 1D".into(),
        ));
    }
    Ok(evaluate_unchecked(basis, field.data(), eta, want))
}

#[inline]
pub(crate) fn evaluate_unchecked(
    basis: &TensorBasis,
    data: &[f64],
    eta: &[f64],
    want: Deriv,
) -> EvalResult {
    let axes = basis.axes();
    match axes.len() {
        1 => {
            let line = bary1d::kernel(&axes[0], data, eta[0], want);
            EvalResult::from_parts(
                line.value,
                1,
                want.first().then_some([line.d1, 0.0, 0.0]),
                want.second().then_some(line.d2),
            )
        }
        2 => {
            let (value, g) = eval_2d(axes, data, eta, want.first());
            EvalResult::from_parts(value, 2, want.first().then_some([g[0], g[1], 0.0]), None)
        }
        _ => {
            let (value, g) = eval_3d(axes, data, eta, want.first());
            EvalResult::from_parts(value, 3, want.first().then_some(g), None)
        }
    }
}

type Line = ArrayVec<f64, MAX_POINTS>;

fn eval_2d(axes: &[NodeSet], data: &[f64], eta: &[f64], grad: bool) -> (f64, [f64; 2]) {
    let want = if grad { Deriv::First } else { Deriv::Value };
    let n1 = axes[0].len();
    let mut f1 = AxisFactors::empty(&axes[0], want);
    f1.fill(eta[0]);
    let mut f2 = AxisFactors::empty(&axes[1], want);
    f2.fill(eta[1]);
    let mut phys = Line::new();
    let mut deriv = Line::new();
    if !grad {
        for line in data.chunks_exact(n1) {
            phys.push(f1.contract(line, want).value);
        }
        return (f2.contract(&phys, want).value, [0.0; 2]);
    }
    for line in data.chunks_exact(n1) {
        let r = f1.contract(line, want);
        phys.push(r.value);
        deriv.push(r.d1);
    }
    let r = f2.contract(&phys, want);
    let d_eta1 = f2.contract(&deriv, Deriv::Value).value;
    (r.value, [d_eta1, r.d1])
}

fn eval_3d(axes: &[NodeSet], data: &[f64], eta: &[f64], grad: bool) -> (f64, [f64; 3]) {
    let want = if grad { Deriv::First } else { Deriv::Value };
    let (n1, n2) = (axes[0].len(), axes[1].len());
    let mut f1 = AxisFactors::empty(&axes[0], want);
    f1.fill(eta[0]);
    let mut f2 = AxisFactors::empty(&axes[1], want);
    f2.fill(eta[1]);
    let mut f3 = AxisFactors::empty(&axes[2], want);
    f3.fill(eta[2]);
    let mut plane_value = Line::new();
    if !grad {
        for plane in data.chunks_exact(n1 * n2) {
            let mut phys = Line::new();
            for line in plane.chunks_exact(n1) {
                phys.push(f1.contract(line, want).value);
            }
            plane_value.push(f2.contract(&phys, want).value);
        }
        return (f3.contract(&plane_value, want).value, [0.0; 3]);
    }
    let mut plane_d1 = Line::new();
    let mut plane_d2 = Line::new();
    for plane in data.chunks_exact(n1 * n2) {
        let mut phys = Line::new();
        let mut deriv = Line::new();
        for line in plane.chunks_exact(n1) {
            let r = f1.contract(line, want);
            phys.push(r.value);
            deriv.push(r.d1);
        }
        let r = f2.contract(&phys, want);
        plane_value.push(r.value);
        plane_d2.push(r.d1);
        plane_d1.push(f2.contract(&deriv, Deriv::Value).value);
    }
    let r = f3.contract(&plane_value, want);
    let d_eta1 = f3.contract(&plane_d1, Deriv::Value).value;
    let d_eta2 = f3.contract(&plane_d2, Deriv::Value).value;
    (r.value, [d_eta1, d_eta2, r.d1])
}

/// Direct multivariate barycentric formula with product weights, summed over
/// the whole grid at once. Slow; serves as an independent check of
/// [`tensor_evaluate`].
pub fn multi_bary_direct(basis: &TensorBasis, field: &FieldValues, eta: &[f64]) -> Result<f64> {
    check(basis, field, eta)?;
    for (q, axis) in basis.axes().iter().enumerate() {
        if let Some(index) = bary1d::collocated_node(axis.nodes(), eta[q]) {
            return Err(Error::Collocated { index });
        }
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &p) in field.data().iter().enumerate() {
        let mut rest = i;
        let mut weight = 1.0;
        let mut diff = 1.0;
        for (q, axis) in basis.axes().iter().enumerate() {
            let j = rest % axis.len();
            rest /= axis.len();
            weight *= axis.weights()[j];
            diff *= eta[q] - axis.nodes()[j];
        }
        let term = weight / diff;
        num += p * term;
        den += term;
    }
    Ok(num / den)
}
