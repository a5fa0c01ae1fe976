//! The univariate barycentric kernel.
//!
//! [`bary_evaluate`] is the fused single-pass kernel: one sweep over the
//! nodes accumulates every sum needed for the value and the requested
//! derivatives. [`AxisFactors`] splits the same computation in two halves
//! so that tensor contractions can reuse the node-dependent terms
//! `w_j / (z_j - eta)^r` across all lines of one axis.

use arrayvec::ArrayVec;

use crate::instrument;
use crate::nodes::NodeSet;
use crate::{Error, Result, MAX_POINTS};

/// Which derivatives an evaluation should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Deriv {
    Value,
    First,
    /// Value, first and second derivative (1D only).
    Second,
}

impl Deriv {
    pub fn first(self) -> bool {
        self >= Deriv::First
    }

    pub fn second(self) -> bool {
        self == Deriv::Second
    }
}

/// Value at one point with the requested derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    dim: usize,
    d1: Option<[f64; 3]>,
    pub d2: Option<f64>,
}

impl EvalResult {
    pub fn value_only(value: f64, dim: usize) -> Self {
        Self {
            value,
            dim,
            d1: None,
            d2: None,
        }
    }

    pub fn with_gradient(value: f64, gradient: &[f64]) -> Self {
        let mut d1 = [0.0; 3];
        d1[..gradient.len()].copy_from_slice(gradient);
        Self {
            value,
            dim: gradient.len(),
            d1: Some(d1),
            d2: None,
        }
    }

    pub(crate) fn from_parts(
        value: f64,
        dim: usize,
        d1: Option<[f64; 3]>,
        d2: Option<f64>,
    ) -> Self {
        Self { value, dim, d1, d2 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Gradient with respect to the reference coordinates, if requested.
    pub fn gradient(&self) -> Option<&[f64]> {
        self.d1.as_ref().map(|g| &g[..self.dim])
    }

    /// Convenience for 1D results.
    pub fn d1(&self) -> Option<f64> {
        self.d1.map(|g| g[0])
    }
}

/// Scalar outputs of one kernel application.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct LineEval {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

fn collocation_tol(z: f64) -> f64 {
    4.0 * f64::EPSILON * z.abs().max(1.0)
}

/// Index of the node closest to `eta` (nodes ascending).
fn nearest_node(nodes: &[f64], eta: f64) -> usize {
    let i = nodes.partition_point(|&z| z < eta);
    if i == 0 {
        0
    } else if i == nodes.len() || eta - nodes[i - 1] <= nodes[i] - eta {
        i - 1
    } else {
        i
    }
}

/// Index of the node that `eta` coincides with, if any.
pub fn collocated_node(nodes: &[f64], eta: f64) -> Option<usize> {
    nodes
        .iter()
        .position(|&z| (eta - z).abs() <= collocation_tol(z))
}

/// `S_r(v, eta) = sum_j v_j w_j / (eta - z_j)^r` for `r` in 1..=3.
pub fn s_sum(r: u32, v: &[f64], set: &NodeSet, eta: f64) -> Result<f64> {
    if !(1..=3).contains(&r) {
        return Err(Error::InvalidInput(format!(
            "S_r is defined for r in 1..=3, got {r}"
        )));
    }
    if v.len() != set.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} values, got {}",
            set.len(),
            v.len()
        )));
    }
    if let Some(index) = collocated_node(set.nodes(), eta) {
        return Err(Error::Collocated { index });
    }
    let sum = set
        .nodes()
        .iter()
        .zip(set.weights())
        .zip(v)
        .map(|((&z, &w), &vj)| vj * w / (eta - z).powi(r as i32))
        .sum();
    Ok(sum)
}

fn collocated_line(set: &NodeSet, values: &[f64], j: usize, want: Deriv) -> LineEval {
    let dot = |row: &[f64]| row.iter().zip(values).map(|(a, b)| a * b).sum::<f64>();
    LineEval {
        value: values[j],
        d1: if want.first() {
            dot(set.d1_row(j))
        } else {
            0.0
        },
        d2: if want.second() {
            dot(set.d2_row(j))
        } else {
            0.0
        },
    }
}

// Ratio forms with A = sum t1 q, F = sum t1, B = sum t2 q, C = sum t2,
// D = sum t3 q, E = sum t3 where t_r = w_j / (z_j - eta)^r and
// q_j = p_j - p_ref, with `r = 1/F` passed in. Shifting by the value at the
// nearest node keeps the derivative ratios free of cancellation when eta is
// close to that node.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn finish(want: Deriv, p_ref: f64, a: f64, r: f64, b: f64, c: f64, d: f64, e: f64) -> LineEval {
    let v = a * r;
    if !want.first() {
        return LineEval {
            value: p_ref + v,
            d1: 0.0,
            d2: 0.0,
        };
    }
    // (B F - A C) / F^2 and 2D/F - 2EA/F^2 - 2BC/F^2 + 2C^2 A/F^3 in terms of r.
    let d1 = (b - c * v) * r;
    let d2 = if want.second() {
        2.0 * r * (d - e * v - c * d1)
    } else {
        0.0
    };
    let value = p_ref + v;
    LineEval { value, d1, d2 }
}

#[inline]
pub(crate) fn kernel(set: &NodeSet, values: &[f64], eta: f64, want: Deriv) -> LineEval {
    instrument::kernel_call();
    let nearest = nearest_node(set.nodes(), eta);
    let z_near = set.nodes()[nearest];
    if (eta - z_near).abs() <= collocation_tol(z_near) {
        return collocated_line(set, values, nearest, want);
    }
    let p_ref = values[nearest];
    let (mut a, mut b, mut c, mut d, mut e, mut f) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let terms = set.nodes().iter().zip(set.weights()).zip(values);
    instrument::divisions(set.len());
    match want {
        Deriv::Value => {
            // The plain second form is stable for values; the shift only
            // matters for the derivative ratios.
            for ((&z, &w), &p) in terms {
                let t1 = w / (z - eta);
                a += t1 * p;
                f += t1;
            }
            instrument::divisions(1);
            return LineEval {
                value: a / f,
                d1: 0.0,
                d2: 0.0,
            };
        }
        Deriv::First => {
            for ((&z, &w), &p) in terms {
                let q = p - p_ref;
                let inv = 1.0 / (z - eta);
                let t1 = w * inv;
                let t2 = t1 * inv;
                a += t1 * q;
                f += t1;
                b += t2 * q;
                c += t2;
            }
        }
        Deriv::Second => {
            for ((&z, &w), &p) in terms {
                let q = p - p_ref;
                let inv = 1.0 / (z - eta);
                let t1 = w * inv;
                let t2 = t1 * inv;
                let t3 = t2 * inv;
                a += t1 * q;
                f += t1;
                b += t2 * q;
                c += t2;
                d += t3 * q;
                e += t3;
            }
        }
    }
    instrument::divisions(1);
    finish(want, p_ref, a, 1.0 / f, b, c, d, e)
}

/// Evaluates the polynomial interpolating `values` on the nodes of `set` at
/// `eta`, together with the requested derivatives.
pub fn bary_evaluate(set: &NodeSet, values: &[f64], eta: f64, want: Deriv) -> Result<EvalResult> {
    if values.len() != set.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} values, got {}",
            set.len(),
            values.len()
        )));
    }
    if !eta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "evaluation point {eta} is not finite"
        )));
    }
    let line = kernel(set, values, eta, want);
    let d1 = want.first().then_some([line.d1, 0.0, 0.0]);
    let d2 = want.second().then_some(line.d2);
    Ok(EvalResult::from_parts(line.value, 1, d1, d2))
}

/// Dot product with four independent accumulators.
#[inline(always)]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Node terms for one axis at a fixed coordinate, shared by every line
/// contracted along that axis.
pub(crate) struct AxisFactors<'a> {
    set: &'a NodeSet,
    want: Deriv,
    collocated: Option<usize>,
    nearest: usize,
    t1: ArrayVec<f64, MAX_POINTS>,
    t2: ArrayVec<f64, MAX_POINTS>,
    t3: ArrayVec<f64, MAX_POINTS>,
    inv_f: f64,
    c: f64,
    e: f64,
}

impl<'a> AxisFactors<'a> {
    /// Unfilled factors. The struct is large, so it is built in place and
    /// then filled with [`AxisFactors::fill`].
    #[inline(always)]
    pub fn empty(set: &'a NodeSet, want: Deriv) -> Self {
        Self {
            set,
            want,
            collocated: None,
            nearest: 0,
            t1: ArrayVec::new(),
            t2: ArrayVec::new(),
            t3: ArrayVec::new(),
            inv_f: 0.0,
            c: 0.0,
            e: 0.0,
        }
    }

    pub fn fill(&mut self, eta: f64) {
        let (set, want) = (self.set, self.want);
        self.nearest = nearest_node(set.nodes(), eta);
        let z = set.nodes()[self.nearest];
        self.collocated = ((eta - z).abs() <= collocation_tol(z)).then_some(self.nearest);
        self.t1.clear();
        self.t2.clear();
        self.t3.clear();
        if self.collocated.is_some() {
            return;
        }
        instrument::divisions(set.len() + 1);
        let (mut f, mut c, mut e) = (0.0, 0.0, 0.0);
        for (&z, &w) in set.nodes().iter().zip(set.weights()) {
            if want == Deriv::Value {
                let t1 = w / (z - eta);
                self.t1.push(t1);
                f += t1;
                continue;
            }
            let inv = 1.0 / (z - eta);
            let t1 = w * inv;
            let t2 = t1 * inv;
            self.t1.push(t1);
            self.t2.push(t2);
            f += t1;
            c += t2;
            if want.second() {
                let t3 = t2 * inv;
                self.t3.push(t3);
                e += t3;
            }
        }
        self.inv_f = 1.0 / f;
        self.c = c;
        self.e = e;
    }

    /// Applies the kernel to one line of samples. `want` may be lower than
    /// the request the factors were built for.
    #[inline(always)]
    pub fn contract(&self, values: &[f64], want: Deriv) -> LineEval {
        debug_assert!(want <= self.want);
        instrument::kernel_call();
        if let Some(j) = self.collocated {
            return collocated_line(self.set, values, j, want);
        }
        let n = self.set.len();
        let values = &values[..n];
        let p_ref = values[self.nearest];
        match want {
            Deriv::Value => LineEval {
                value: dot(&self.t1, values) * self.inv_f,
                d1: 0.0,
                d2: 0.0,
            },
            Deriv::First => {
                let (mut a, mut b) = (0.0, 0.0);
                for ((&p, &t1), &t2) in values.iter().zip(&self.t1).zip(&self.t2) {
                    let q = p - p_ref;
                    a += t1 * q;
                    b += t2 * q;
                }
                finish(want, p_ref, a, self.inv_f, b, self.c, 0.0, 0.0)
            }
            Deriv::Second => {
                let (mut a, mut b, mut d) = (0.0, 0.0, 0.0);
                let terms = self.t1.iter().zip(&self.t2).zip(&self.t3);
                for (&p, ((&t1, &t2), &t3)) in values.iter().zip(terms) {
                    let q = p - p_ref;
                    a += t1 * q;
                    b += t2 * q;
                    d += t3 * q;
                }
                finish(want, p_ref, a, self.inv_f, b, self.c, d, self.e)
            }
        }
    }
}
