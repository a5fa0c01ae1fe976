//! Analytic polynomial fields with closed-form derivatives, used by the
//! verification sweeps and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::duffy::Shape;
use crate::{Error, Result};

type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

pub struct AnalyticField {
    pub description: String,
    pub dim: usize,
    eval: ScalarFn,
    grad: GradFn,
    hess_1d: Option<ScalarFn>,
}

impl AnalyticField {
    pub fn eval(&self, xi: &[f64]) -> f64 {
        (self.eval)(xi)
    }

    pub fn grad(&self, xi: &[f64]) -> Vec<f64> {
        (self.grad)(xi)
    }

    /// Second derivative of a 1D field.
    pub fn hess_1d(&self, xi: f64) -> Option<f64> {
        self.hess_1d.as_ref().map(|h| h(&[xi]))
    }
}

impl std::fmt::Debug for AnalyticField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticField")
            .field("description", &self.description)
            .field("dim", &self.dim)
            .finish()
    }
}

/// `xi_1^2` in 1D, `xi_1^2 + xi_2^2` in 2D and `xi_1^2 + xi_2^2 - xi_3^2` in 3D.
pub fn saddle_field(dim: usize) -> Result<AnalyticField> {
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidInput(format!(
            "field dimension must be 1..=3, got {dim}"
        )));
    }
    let sign = |q: usize| if q == 2 { -1.0 } else { 1.0 };
    let description = ["xi1^2", "xi1^2 + xi2^2", "xi1^2 + xi2^2 - xi3^2"][dim - 1].to_string();
    Ok(AnalyticField {
        description,
        dim,
        eval: Box::new(move |x| (0..dim).map(|q| sign(q) * x[q] * x[q]).sum()),
        grad: Box::new(move |x| (0..dim).map(|q| 2.0 * sign(q) * x[q]).collect()),
        hess_1d: (dim == 1).then(|| Box::new(|_: &[f64]| 2.0) as ScalarFn),
    })
}

fn powi(x: f64, n: usize) -> f64 {
    x.powi(n as i32)
}

/// The monomial `xi^alpha`.
pub fn monomial(alpha: &[usize]) -> AnalyticField {
    let dim = alpha.len();
    let a = alpha.to_vec();
    let description = a
        .iter()
        .enumerate()
        .map(|(q, e)| format!("xi{}^{}", q + 1, e))
        .collect::<Vec<_>>()
        .join(" ");
    let ag = a.clone();
    let ah = a.clone();
    AnalyticField {
        description,
        dim,
        eval: Box::new(move |x| a.iter().enumerate().map(|(q, &e)| powi(x[q], e)).product()),
        grad: Box::new(move |x| {
            (0..ag.len())
                .map(|q| {
                    if ag[q] == 0 {
                        return 0.0;
                    }
                    ag.iter()
                        .enumerate()
                        .map(|(r, &e)| {
                            if r == q {
                                e as f64 * powi(x[r], e - 1)
                            } else {
                                powi(x[r], e)
                            }
                        })
                        .product()
                })
                .collect()
        }),
        hess_1d: (dim == 1).then(|| {
            Box::new(move |x: &[f64]| {
                let e = ah[0];
                if e < 2 {
                    0.0
                } else {
                    (e * (e - 1)) as f64 * powi(x[0], e - 2)
                }
            }) as ScalarFn
        }),
    }
}

fn multi_indices(dim: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=max).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Every multi-index in the exactness set for isotropic degree `k`.
pub fn exactness_set(shape: Shape, k: usize) -> Vec<Vec<usize>> {
    let d = shape.dim();
    let kv = vec![k; d];
    multi_indices(d, k)
        .into_iter()
        .filter(|a| shape.exactness_contains(&kv, a))
        .collect()
}

/// Multi-indices just outside the exactness set: not members, but every
/// single-degree decrement is.
pub fn minimal_violators(shape: Shape, k: usize) -> Vec<Vec<usize>> {
    let d = shape.dim();
    let kv = vec![k; d];
    multi_indices(d, k + 1)
        .into_iter()
        .filter(|a| {
            !shape.exactness_contains(&kv, a)
                && (0..d).filter(|&q| a[q] > 0).all(|q| {
                    let mut b = a.clone();
                    b[q] -= 1;
                    shape.exactness_contains(&kv, &b)
                })
        })
        .collect()
}

/// Samples a multi-index uniformly from the exactness set and returns it
/// with its monomial.
pub fn random_exact_monomial(shape: Shape, k: usize, seed: u64) -> (Vec<usize>, AnalyticField) {
    let set = exactness_set(shape, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = set[rng.gen_range(0..set.len())].clone();
    let field = monomial(&alpha);
    (alpha, field)
}

/// Nested evaluation of `sum_i coeffs[i] * x^i`.
pub fn horner_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Central finite-difference gradient.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|q| {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[q] += h;
            minus[q] -= h;
            (f(&plus) - f(&minus)) / (2.0 * h)
        })
        .collect()
}

/// Random interior reference point: η drawn in `[-1+margin, 1-margin]^d`
/// and expanded.
pub fn random_interior_point(shape: Shape, margin: f64, rng: &mut impl Rng) -> Vec<f64> {
    let d = shape.dim();
    let eta: Vec<f64> = (0..d)
        .map(|_| rng.gen_range(-1.0 + margin..1.0 - margin))
        .collect();
    shape.expand(&eta)[..d].to_vec()
}
