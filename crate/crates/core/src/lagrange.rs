//! Interpolation-matrix evaluation with tensorized cardinal Lagrange
//! functions, either built once and stored or rebuilt on every apply.
//!
//! Cardinal values use the product formula
//! `l_j(x) = prod_{i != j} (x - z_i) / (z_j - z_i)` directly, and their
//! derivatives come from differentiating that product factor by factor.

use arrayvec::ArrayVec;

use crate::bary1d::Deriv;
use crate::duffy::{Point, Shape};
use crate::element;
use crate::tensor::{FieldValues, TensorBasis};
use crate::{Error, Result, MAX_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpMode {
    /// Matrices are built once and reused.
    Cached,
    /// Matrices are rebuilt inside every [`InterpOperator::apply`].
    Recomputed,
}

/// Cardinal values `l_j(x)` and derivatives for every node of one axis.
#[derive(Debug, Clone)]
pub struct Cardinals {
    pub value: ArrayVec<f64, MAX_POINTS>,
    pub d1: ArrayVec<f64, MAX_POINTS>,
    pub d2: ArrayVec<f64, MAX_POINTS>,
}

impl Cardinals {
    fn slice(&self, order: u8) -> &[f64] {
        match order {
            0 => &self.value,
            1 => &self.d1,
            _ => &self.d2,
        }
    }
}

/// Evaluates every cardinal function of `nodes` at `x` by the product
/// formula, with one division per factor.
pub fn cardinals(nodes: &[f64], x: f64, want: Deriv) -> Cardinals {
    let mut out = Cardinals {
        value: ArrayVec::new(),
        d1: ArrayVec::new(),
        d2: ArrayVec::new(),
    };
    for (j, &zj) in nodes.iter().enumerate() {
        let (mut p, mut dp, mut ddp) = (1.0, 0.0, 0.0);
        for (i, &zi) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            if want.first() {
                let inv = 1.0 / (zj - zi);
                let f = (x - zi) * inv;
                ddp = ddp * f + 2.0 * dp * inv;
                dp = dp * f + p * inv;
                p *= f;
            } else {
                p *= (x - zi) / (zj - zi);
            }
        }
        out.value.push(p);
        out.d1.push(dp);
        out.d2.push(ddp);
    }
    out
}

/// Writes the tensor product of per-axis factors into `row` (first axis
/// fastest).
fn tensor_row(f: [&[f64]; 3], dim: usize, row: &mut [f64]) {
    match dim {
        1 => row.copy_from_slice(f[0]),
        2 => {
            let n1 = f[0].len();
            for (j2, &b) in f[1].iter().enumerate() {
                for (j1, &a) in f[0].iter().enumerate() {
                    row[j2 * n1 + j1] = a * b;
                }
            }
        }
        _ => {
            let (n1, n2) = (f[0].len(), f[1].len());
            for (j3, &c) in f[2].iter().enumerate() {
                for (j2, &b) in f[1].iter().enumerate() {
                    let bc = b * c;
                    let base = (j3 * n2 + j2) * n1;
                    for (j1, &a) in f[0].iter().enumerate() {
                        row[base + j1] = a * bc;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Matrices {
    values: Vec<f64>,
    /// One M×N matrix per ξ direction.
    derivs: Vec<Vec<f64>>,
    second: Option<Vec<f64>>,
}

impl Matrices {
    fn stored_reals(&self) -> usize {
        self.values.len()
            + self.derivs.iter().map(Vec::len).sum::<usize>()
            + self.second.as_ref().map_or(0, Vec::len)
    }
}

fn build_matrices(
    shape: Shape,
    basis: &TensorBasis,
    points: &[Point],
    want: Deriv,
) -> Result<Matrices> {
    let d = shape.dim();
    let big_n = basis.grid_len();
    let m = points.len();
    let mut values = vec![0.0; m * big_n];
    let n_derivs = if want.first() { d } else { 0 };
    let mut derivs = vec![vec![0.0; m * big_n]; n_derivs];
    let mut second = want.second().then(|| vec![0.0; m * big_n]);
    let mut eta_rows = vec![vec![0.0; big_n]; n_derivs];

    for (row, xi) in points.iter().enumerate() {
        let eta = shape.collapse(&xi[..d])?;
        let card: Vec<Cardinals> = (0..d)
            .map(|q| cardinals(basis.axis(q).nodes(), eta[q], want))
            .collect();
        let factors = |deriv_axis: Option<usize>, order: u8| -> [&[f64]; 3] {
            let mut f: [&[f64]; 3] = [&[], &[], &[]];
            for q in 0..d {
                f[q] = card[q].slice(if Some(q) == deriv_axis { order } else { 0 });
            }
            f
        };
        let range = row * big_n..(row + 1) * big_n;

        let f = factors(None, 0);
        tensor_row(f, d, &mut values[range.clone()]);
        if !want.first() {
            continue;
        }
        for (r, eta_row) in eta_rows.iter_mut().enumerate() {
            let f = factors(Some(r), 1);
            tensor_row(f, d, eta_row);
        }
        let jac = shape.jacobian(&eta[..d])?;
        for (c, out) in derivs.iter_mut().enumerate() {
            let out = &mut out[range.clone()];
            out.fill(0.0);
            for (r, eta_row) in eta_rows.iter().enumerate() {
                let coeff = jac[r][c];
                if coeff != 0.0 {
                    for (o, e) in out.iter_mut().zip(eta_row) {
                        *o += coeff * e;
                    }
                }
            }
        }
        if let Some(second) = second.as_mut() {
            let f = factors(Some(0), 2);
            second[range].copy_from_slice(f[0]);
        }
    }
    Ok(Matrices {
        values,
        derivs,
        second,
    })
}

/// Interpolation operator from grid samples to values (and ξ-derivatives) at
/// a fixed set of reference points.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpOperator {
    shape: Shape,
    basis: TensorBasis,
    points: Vec<Point>,
    want: Deriv,
    mode: InterpMode,
    cached: Option<Matrices>,
}

/// Output of [`InterpOperator::apply`].
#[derive(Debug, Clone, PartialEq)]
pub struct InterpOutput {
    pub values: Vec<f64>,
    /// `derivs[c][m]` is the derivative along ξ_c at point `m`.
    pub derivs: Option<Vec<Vec<f64>>>,
    /// Second derivatives, segments only.
    pub second: Option<Vec<f64>>,
}

impl InterpOutput {
    pub fn gradient(&self, m: usize) -> Option<Vec<f64>> {
        self.derivs
            .as_ref()
            .map(|d| d.iter().map(|col| col[m]).collect())
    }
}

/// Builds the operator for `points` on `basis`. `want` selects the
/// derivative matrices; `Deriv::Second` is accepted for segments only.
pub fn build_operator(
    shape: Shape,
    basis: &TensorBasis,
    points: &[Vec<f64>],
    want: Deriv,
    mode: InterpMode,
) -> Result<InterpOperator> {
    let d = shape.dim();
    if basis.dim() != d {
        return Err(Error::InvalidInput(format!(
            "{} needs {} axes, basis has {}",
            shape.name(),
            d,
            basis.dim()
        )));
    }
    if want.second() && d > 1 {
        return Err(Error::InvalidInput(
            "second derivatives are only available in 1D".into(),
        ));
    }
    let mut stored = Vec::with_capacity(points.len());
    for p in points {
        let eta = shape.collapse(p)?;
        if want.first() {
            shape.jacobian(&eta[..d])?;
        }
        stored.push(crate::duffy::to_point(p));
    }
    let cached = match mode {
        InterpMode::Cached => Some(build_matrices(shape, basis, &stored, want)?),
        InterpMode::Recomputed => None,
    };
    Ok(InterpOperator {
        shape,
        basis: basis.clone(),
        points: stored,
        want,
        mode,
        cached,
    })
}

impl InterpOperator {
    /// Operator for the default basis of an element.
    pub fn for_element(
        ev: &element::ElementEvaluator,
        points: &[Vec<f64>],
        want: Deriv,
        mode: InterpMode,
    ) -> Result<Self> {
        build_operator(ev.shape(), ev.basis(), points, want, mode)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn mode(&self) -> InterpMode {
        self.mode
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_columns(&self) -> usize {
        self.basis.grid_len()
    }

    /// Reals held between calls: `M*N` for the value matrix plus `M*N` per
    /// derivative matrix when cached, nothing when recomputed.
    pub fn stored_reals(&self) -> usize {
        self.cached.as_ref().map_or(0, Matrices::stored_reals)
    }

    /// The value matrix row for point `m` (cached operators only).
    pub fn value_row(&self, m: usize) -> Option<&[f64]> {
        let n = self.num_columns();
        self.cached.as_ref().map(|c| &c.values[m * n..(m + 1) * n])
    }

    pub fn apply(&self, field: &FieldValues) -> Result<InterpOutput> {
        let n = self.num_columns();
        if field.len() != n {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the operator has {} columns",
                field.len(),
                n
            )));
        }
        let rebuilt;
        let mats = match &self.cached {
            Some(c) => c,
            None => {
                rebuilt = build_matrices(self.shape, &self.basis, &self.points, self.want)?;
                &rebuilt
            }
        };
        let p = field.data();
        let matvec = |a: &[f64]| -> Vec<f64> {
            a.chunks_exact(n)
                .map(|row| row.iter().zip(p).map(|(x, y)| x * y).sum())
                .collect()
        };
        Ok(InterpOutput {
            values: matvec(&mats.values),
            derivs: self
                .want
                .first()
                .then(|| mats.derivs.iter().map(|d| matvec(d)).collect()),
            second: mats.second.as_deref().map(matvec),
        })
    }
}
