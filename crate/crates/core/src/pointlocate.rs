//! Inverse mapping: the reference point whose image under sampled coordinate
//! fields matches a target, found by BFGS with Armijo backtracking on
//! `f(xi) = |X(xi) - target|^2 / 2`.
//!
//! Steps are truncated at the region boundary. When the boundary blocks the
//! search direction completely, the method restarts from steepest descent
//! projected onto the blocking faces.

use crate::bary1d::Deriv;
use crate::duffy::Shape;
use crate::element::{phys_evaluate_parts, sample};
use crate::tensor::{FieldValues, TensorBasis};
use crate::{Error, Result};

const ACTIVE_TOL: f64 = 1e-12;
const MIN_STEP: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq)]
pub struct LocateConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// Starting point; the region centroid when `None`.
    pub init: Option<Vec<f64>>,
}

impl Default for LocateConfig {
    fn default() -> Self {
        Self {
            max_iters: 100,
            grad_tol: 1e-10,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            init: None,
        }
    }
}

impl LocateConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return bad("grad_tol must be positive");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return bad("backtrack_factor must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocateProblem {
    pub shape: Shape,
    pub basis: TensorBasis,
    pub coord_fields: Vec<FieldValues>,
    pub target: Vec<f64>,
    pub config: LocateConfig,
}

impl LocateProblem {
    pub fn new(
        shape: Shape,
        basis: TensorBasis,
        coord_fields: Vec<FieldValues>,
        target: Vec<f64>,
        config: LocateConfig,
    ) -> Result<Self> {
        let d = shape.dim();
        if basis.dim() != d {
            return Err(Error::InvalidInput(format!(
                "{} needs {} axes, basis has {}",
                shape.name(),
                d,
                basis.dim()
            )));
        }
        if coord_fields.len() != d || target.len() != d {
            return Err(Error::InvalidInput(format!(
                "expected {d} coordinate fields and a {d}-dimensional target"
            )));
        }
        if let Some(f) = coord_fields.iter().find(|f| f.len() != basis.grid_len()) {
            return Err(Error::InvalidInput(format!(
                "coordinate field has {} values but the grid has {}",
                f.len(),
                basis.grid_len()
            )));
        }
        if let Some(init) = &config.init {
            if init.len() != d {
                return Err(Error::InvalidConfig(format!(
                    "init must have {d} coordinates"
                )));
            }
        }
        Ok(Self {
            shape,
            basis,
            coord_fields,
            target,
            config,
        })
    }

    /// Samples the coordinate map `map(xi)` on the grid of `basis`.
    pub fn from_map(
        shape: Shape,
        basis: TensorBasis,
        map: impl Fn(&[f64]) -> Vec<f64>,
        target: Vec<f64>,
        config: LocateConfig,
    ) -> Result<Self> {
        let fields = (0..shape.dim())
            .map(|i| sample(shape, &basis, |xi| map(xi)[i]))
            .collect();
        Self::new(shape, basis, fields, target, config)
    }

    /// The interpolated coordinate map at `xi`.
    pub fn map(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.coord_fields
            .iter()
            .map(|f| {
                Ok(phys_evaluate_parts(self.shape, &self.basis, f.data(), xi, Deriv::Value)?.value)
            })
            .collect()
    }

    /// Objective value and gradient `J^T (X - target)`.
    fn objective(&self, xi: &[f64]) -> Result<(f64, Vec<f64>)> {
        let d = xi.len();
        let mut f = 0.0;
        let mut g = vec![0.0; d];
        for (field, t) in self.coord_fields.iter().zip(&self.target) {
            let r = phys_evaluate_parts(self.shape, &self.basis, field.data(), xi, Deriv::First)?;
            let res = r.value - t;
            f += 0.5 * res * res;
            for (gj, dj) in g.iter_mut().zip(r.gradient().expect("gradient requested")) {
                *gj += res * dj;
            }
        }
        Ok((f, g))
    }
}

/// One accepted line-search step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub f_before: f64,
    pub f_after: f64,
    pub alpha: f64,
    /// Directional derivative `grad f . s` at the start of the step.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocateResult {
    pub xi: Vec<f64>,
    /// `|X(xi) - target|`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub steps: Vec<StepRecord>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Removes from `dir` the components pushing through faces that are active
/// at `x`, until no active face is crossed.
fn project_onto_active(shape: Shape, x: &[f64], dir: &mut [f64]) {
    let d = x.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for _ in 0..=d {
        let blocking = shape.constraints().iter().find(|c| {
            let a = &c.coeffs[..d];
            c.bound - dot(a, x) <= ACTIVE_TOL && dot(a, dir) > ACTIVE_TOL * norm(a)
        });
        let Some(c) = blocking else { return };
        let mut n = c.coeffs[..d].to_vec();
        for b in &basis {
            let p = dot(&n, b);
            n.iter_mut().zip(b).for_each(|(ni, bi)| *ni -= p * bi);
        }
        let len = norm(&n);
        if len < 1e-12 {
            dir.fill(0.0);
            return;
        }
        n.iter_mut().for_each(|v| *v /= len);
        let p = dot(dir, &n);
        dir.iter_mut().zip(&n).for_each(|(s, ni)| *s -= p * ni);
        basis.push(n);
    }
    dir.fill(0.0);
}

/// Solves for the reference point mapped onto `problem.target`.
pub fn locate(problem: &LocateProblem) -> Result<LocateResult> {
    let cfg = &problem.config;
    cfg.validate()?;
    let shape = problem.shape;
    let d = shape.dim();
    let scale = norm(&problem.target).max(1.0);
    let tol = cfg.grad_tol * scale;

    let mut x = cfg
        .init
        .clone()
        .unwrap_or_else(|| shape.centroid()[..d].to_vec());
    if !shape.contains_point(&x, 0.0) {
        return Err(Error::InvalidConfig(format!(
            "init {x:?} lies outside the region"
        )));
    }
    let (mut f, mut g) = problem.objective(&x)?;
    let mut h = identity(d);
    let mut scaled = false;
    let mut steps = Vec::new();
    let mut converged = norm(&g) <= tol;
    let mut iterations = 0;

    while !converged && iterations < cfg.max_iters {
        iterations += 1;
        let mut s: Vec<f64> = h.iter().map(|row| -dot(row, &g)).collect();
        if dot(&g, &s) >= 0.0 {
            h = identity(d);
            s = g.iter().map(|v| -v).collect();
        }
        let mut t_max = shape.max_feasible_step(&x, &s, 1.0);
        if t_max <= ACTIVE_TOL {
            h = identity(d);
            s = g.iter().map(|v| -v).collect();
            project_onto_active(shape, &x, &mut s);
            t_max = shape.max_feasible_step(&x, &s, 1.0);
            if norm(&s) <= tol || t_max <= ACTIVE_TOL {
                break;
            }
        }
        let slope = dot(&g, &s);
        let mut alpha = t_max;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&s).map(|(xi, si)| xi + alpha * si).collect();
            let eval = if shape.contains_point(&trial, 0.0) {
                problem.objective(&trial).ok()
            } else {
                None
            };
            if let Some((f_new, g_new)) = eval {
                if f_new <= f + cfg.armijo_c * alpha * slope {
                    break Some((trial, f_new, g_new));
                }
            }
            alpha *= cfg.backtrack_factor;
            if alpha < MIN_STEP {
                break None;
            }
        };
        let Some((x_new, f_new, g_new)) = accepted else {
            break;
        };
        steps.push(StepRecord {
            f_before: f,
            f_after: f_new,
            alpha,
            slope,
        });

        let step: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ys = dot(&y, &step);
        if ys > 1e-14 * norm(&y) * norm(&step) && ys > 0.0 {
            if !scaled {
                let gamma = ys / dot(&y, &y);
                h.iter_mut().flatten().for_each(|v| *v *= gamma);
                scaled = true;
            }
            bfgs_update(&mut h, &step, &y, ys);
        }
        x = x_new;
        f = f_new;
        g = g_new;
        converged = norm(&g) <= tol;
    }

    let residual = (2.0 * f).sqrt();
    Ok(LocateResult {
        xi: x,
        residual,
        iterations,
        converged,
        steps,
    })
}

/// `H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T` with `rho = 1 / y.s`.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], ys: f64) {
    let d = s.len();
    let rho = 1.0 / ys;
    let hy: Vec<f64> = h.iter().map(|row| dot(row, y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..d {
        for j in 0..d {
            h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::order_basis;
    use crate::testfields::random_interior_point;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(
        shape: Shape,
        order: usize,
        map: impl Fn(&[f64]) -> Vec<f64>,
        target: Vec<f64>,
    ) -> LocateProblem {
        LocateProblem::from_map(
            shape,
            order_basis(shape, order).unwrap(),
            map,
            target,
            LocateConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn identity_map() {
        let p = problem(Shape::Quadrilateral, 2, |x| x.to_vec(), vec![0.25, -0.5]);
        let r = locate(&p).unwrap();
        assert!(r.converged);
        assert!(r.residual <= 1e-10);
        assert_abs_diff_eq!(r.xi[0], 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(r.xi[1], -0.5, epsilon = 1e-10);
    }

    #[test]
    fn affine_map() {
        let p = problem(
            Shape::Quadrilateral,
            2,
            |x| vec![2.0 * x[0] + 1.0, x[1]],
            vec![1.5, -0.5],
        );
        let r = locate(&p).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.xi[0], 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(r.xi[1], -0.5, epsilon = 1e-10);
    }

    #[test]
    fn curved_map() {
        let map = |x: &[f64]| vec![x[0] + 0.1 * x[1] * x[1], x[1]];
        let target = map(&[0.3, 0.4]);
        let r = locate(&problem(Shape::Quadrilateral, 3, map, target)).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.xi[0], 0.3, epsilon = 1e-8);
        assert_abs_diff_eq!(r.xi[1], 0.4, epsilon = 1e-8);
    }

    #[test]
    fn near_identity_maps_on_every_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for shape in Shape::ALL {
            let d = shape.dim();
            for _ in 0..15 {
                let amp: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.1..0.1)).collect();
                let map = move |x: &[f64]| -> Vec<f64> {
                    (0..d)
                        .map(|i| x[i] + amp[i] * (x[(i + 1) % d] * 1.3).sin())
                        .collect()
                };
                let mut p = problem(shape, 6, map, vec![0.0; d]);
                let star = random_interior_point(shape, 0.05, &mut rng);
                p.target = p.map(&star).unwrap();
                let r = locate(&p).unwrap();
                assert!(r.converged, "{shape} {star:?}");
                assert!(r.iterations <= 50);
                assert!(r.residual <= (2.0 * 1e-10 * norm(&p.target).max(1.0)).sqrt());
                for (a, b) in r.xi.iter().zip(&star) {
                    assert!((a - b).abs() <= 1e-8, "{shape}: {:?} vs {star:?}", r.xi);
                }
                for s in &r.steps {
                    assert!(s.f_after <= s.f_before + 1e-4 * s.alpha * s.slope);
                }
            }
        }
    }

    #[test]
    fn target_outside_stays_in_region() {
        let p = problem(Shape::Triangle, 2, |x| x.to_vec(), vec![1.0, 1.0]);
        let r = locate(&p).unwrap();
        assert!(Shape::Triangle.contains_point(&r.xi, 1e-12));
        assert!(!r.converged || r.residual > 0.0);
        assert_abs_diff_eq!(r.xi[0], 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.xi[1], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn invalid_configs() {
        let mut p = problem(Shape::Segment, 2, |x| x.to_vec(), vec![0.1]);
        for cfg in [
            LocateConfig {
                grad_tol: 0.0,
                ..Default::default()
            },
            LocateConfig {
                armijo_c: -1.0,
                ..Default::default()
            },
            LocateConfig {
                backtrack_factor: 1.0,
                ..Default::default()
            },
            LocateConfig {
                max_iters: 0,
                ..Default::default()
            },
        ] {
            p.config = cfg;
            assert!(matches!(locate(&p), Err(Error::InvalidConfig(_))));
        }
        p.config = LocateConfig {
            init: Some(vec![0.3]),
            ..Default::default()
        };
        let r = locate(&p).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.xi[0], 0.1, epsilon = 1e-10);
        let basis = order_basis(Shape::Segment, 2).unwrap();
        assert!(LocateProblem::new(
            Shape::Segment,
            basis,
            vec![],
            vec![0.0],
            LocateConfig::default()
        )
        .is_err());
    }
}
