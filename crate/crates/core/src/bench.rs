//! Verification sweeps, timing sweeps and their CSV reports.
//!
//! Timings cover one sweep over a fixed 64-point sampling grid (64 points in
//! 1D, 8x8 in 2D, 4x4x4 in 3D). Loops are single-threaded; pinning to a core
//! is left to the caller (`taskset` or similar).

use std::collections::HashMap;
use std::fmt;
use std::hint::black_box;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bary1d::Deriv;
use crate::duffy::Shape;
use crate::element::{axis_kind, shape_basis, ElementEvaluator};
use crate::lagrange::{InterpMode, InterpOperator, InterpOutput};
use crate::nodes::generate_nodes;
use crate::testfields::{fd_gradient, saddle_field, random_exact_monomial, random_interior_point};
use crate::{Error, Result};

pub const SAMPLE_POINTS: usize = 64;
pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 20;
/// Pairwise agreement required between methods before timing.
pub const AGREEMENT_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "bary")]
    Bary,
    #[serde(rename = "matrix_cached")]
    MatrixCached,
    #[serde(rename = "matrix_recomputed")]
    MatrixRecomputed,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bary, Method::MatrixCached, Method::MatrixRecomputed];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bary => "bary",
            Method::MatrixCached => "matrix_cached",
            Method::MatrixRecomputed => "matrix_recomputed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidInput(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "value")]
    Value,
    #[serde(rename = "value_d1")]
    ValueD1,
    #[serde(rename = "value_d1_d2")]
    ValueD1D2,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Value => "value",
            Quantity::ValueD1 => "value_d1",
            Quantity::ValueD1D2 => "value_d1_d2",
        }
    }

    pub fn deriv(self) -> Deriv {
        match self {
            Quantity::Value => Deriv::Value,
            Quantity::ValueD1 => Deriv::First,
            Quantity::ValueD1D2 => Deriv::Second,
        }
    }

    /// Quantities measured for a shape: second derivatives in 1D only.
    pub fn for_shape(shape: Shape) -> &'static [Quantity] {
        if shape.dim() == 1 {
            &[Quantity::Value, Quantity::ValueD1, Quantity::ValueD1D2]
        } else {
            &[Quantity::Value, Quantity::ValueD1]
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Quantity::Value, Quantity::ValueD1, Quantity::ValueD1D2]
            .into_iter()
            .find(|q| q.name() == s.trim())
            .ok_or_else(|| Error::InvalidInput(format!("unknown quantity `{s}`")))
    }
}

/// One timed cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub shape: String,
    pub order: usize,
    pub method: Method,
    pub quantity: Quantity,
    pub sample_points: usize,
    pub reps: usize,
    pub mean_ns: f64,
    pub stddev_ns: f64,
}

/// Parses `all` or a comma-separated list of shape names.
pub fn parse_shapes(s: &str) -> Result<Vec<Shape>> {
    if s.trim() == "all" {
        return Ok(Shape::ALL.to_vec());
    }
    let shapes = s
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Shape>>>()?;
    if shapes.is_empty() {
        return Err(Error::InvalidInput("no shapes given".into()));
    }
    Ok(shapes)
}

/// Parses `a..b` (inclusive), `a..=b`, a single order or a comma-separated
/// list. Orders must lie in `2..=20`.
pub fn parse_orders(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad order `{t}`")))
    };
    let orders: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(Error::InvalidInput(format!("empty order range `{s}`")));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if let Some(bad) = orders
        .iter()
        .find(|&&p| !(MIN_ORDER..=MAX_ORDER).contains(&p))
    {
        return Err(Error::InvalidInput(format!(
            "order {bad} is outside {MIN_ORDER}..={MAX_ORDER}"
        )));
    }
    Ok(orders)
}

/// The 64-point sampling grid of a shape: per-axis GLL or Gauss-Radau
/// points (following the element's axis kinds) expanded into ξ space.
pub fn sampling_grid(shape: Shape) -> Vec<Vec<f64>> {
    let d = shape.dim();
    let m = [64, 8, 4][d - 1];
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|q| generate_nodes(axis_kind(shape, q), m).expect("valid sampling size"))
        .collect();
    (0..SAMPLE_POINTS)
        .map(|i| {
            let mut eta = [0.0; 3];
            let mut rest = i;
            for (q, axis) in axes.iter().enumerate() {
                eta[q] = axis[rest % m];
                rest /= m;
            }
            shape.expand(&eta[..d])[..d].to_vec()
        })
        .collect()
}

/// Element of order `order` sampling the test polynomial.
pub fn bench_element(shape: Shape, order: usize) -> Result<ElementEvaluator> {
    let f = saddle_field(shape.dim())?;
    ElementEvaluator::for_order(shape, order, |x| f.eval(x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.worst <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyCell {
    pub shape: Shape,
    pub order: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyCell {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

impl fmt::Display for VerifyCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<5} P={:<2} {}",
            self.shape.name(),
            self.order,
            if self.passed() { "ok  " } else { "FAIL" }
        )?;
        for c in &self.checks {
            write!(
                f,
                "  {}={:.1e}{}",
                c.name,
                c.worst,
                if c.passed() { "" } else { "!" }
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub cells: Vec<VerifyCell>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(VerifyCell::passed)
    }
}

fn rel_err(got: f64, exact: f64) -> f64 {
    (got - exact).abs() / exact.abs().max(1.0)
}

fn check_oracle(ev: &ElementEvaluator, grid: &[Vec<f64>]) -> Result<CheckOutcome> {
    let op = InterpOperator::for_element(ev, grid, Deriv::Value, InterpMode::Cached)?;
    let out = op.apply(ev.field())?;
    let mut worst: f64 = 0.0;
    for (xi, m) in grid.iter().zip(&out.values) {
        worst = worst.max(rel_err(ev.phys_evaluate(xi, Deriv::Value)?.value, *m));
    }
    Ok(CheckOutcome {
        name: "oracle",
        worst,
        tol: 1e-11,
    })
}

fn check_exactness(shape: Shape, k: usize, seed: u64) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = shape_basis(shape, k + 1)?;
    let mut worst: f64 = 0.0;
    for m in 0..20 {
        let (_, f) = random_exact_monomial(shape, k, seed.wrapping_add(m));
        let ev = ElementEvaluator::from_fn(shape, basis.clone(), |x| f.eval(x))?;
        for _ in 0..20 {
            let xi = random_interior_point(shape, 0.0, &mut rng);
            worst = worst.max(rel_err(
                ev.phys_evaluate(&xi, Deriv::Value)?.value,
                f.eval(&xi),
            ));
        }
    }
    Ok(CheckOutcome {
        name: "exactness",
        worst,
        tol: 1e-10,
    })
}

fn check_gradients(ev: &ElementEvaluator, seed: u64) -> Result<Vec<CheckOutcome>> {
    let shape = ev.shape();
    let f = saddle_field(shape.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut analytic, mut fd): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let xi = random_interior_point(shape, 0.1, &mut rng);
        let r = ev.phys_evaluate(&xi, Deriv::First)?;
        let g = r.gradient().expect("gradient requested");
        for (a, b) in g.iter().zip(f.grad(&xi)) {
            analytic = analytic.max(rel_err(*a, b));
        }
        let num = fd_gradient(
            |x| {
                ev.phys_evaluate(x, Deriv::Value)
                    .map_or(f64::NAN, |r| r.value)
            },
            &xi,
            1e-5,
        );
        for (a, b) in g.iter().zip(num) {
            fd = fd.max((a - b).abs());
        }
        if shape == Shape::Segment {
            let d2 = ev
                .phys_evaluate_1d(xi[0], Deriv::Second)?
                .d2
                .expect("requested");
            analytic = analytic.max(rel_err(d2, 2.0));
        }
    }
    Ok(vec![
        CheckOutcome {
            name: "gradient",
            worst: analytic,
            tol: 1e-10,
        },
        CheckOutcome {
            name: "fd",
            worst: fd,
            tol: 1e-6,
        },
    ])
}

fn check_nodes(ev: &ElementEvaluator) -> Result<CheckOutcome> {
    let d = ev.shape().dim();
    let basis = ev.basis();
    let mut worst: f64 = 0.0;
    for (i, &stored) in ev.field().data().iter().enumerate() {
        let xi = ev.shape().expand(&basis.grid_point(i)[..d]);
        let v = ev.phys_evaluate(&xi[..d], Deriv::Value)?.value;
        worst = worst.max(rel_err(v, stored));
    }
    Ok(CheckOutcome {
        name: "nodes",
        worst,
        tol: 1e-14,
    })
}

fn cell_seed(shape: Shape, order: usize) -> u64 {
    let s = Shape::ALL.iter().position(|&x| x == shape).unwrap_or(0) as u64;
    1000 * s + order as u64
}

/// Runs the oracle-equivalence, exactness, gradient and grid-node checks
/// for every (shape, order) cell.
pub fn run_verify(shapes: &[Shape], orders: &[usize]) -> Result<VerifyReport> {
    if let Some(bad) = orders
        .iter()
        .find(|&&p| !(MIN_ORDER..=MAX_ORDER).contains(&p))
    {
        return Err(Error::InvalidInput(format!(
            "order {bad} is outside {MIN_ORDER}..={MAX_ORDER}"
        )));
    }
    let mut report = VerifyReport::default();
    for &shape in shapes {
        let grid = sampling_grid(shape);
        for &order in orders {
            let seed = cell_seed(shape, order);
            let ev = bench_element(shape, order)?;
            let mut checks = vec![
                check_oracle(&ev, &grid)?,
                check_exactness(shape, order, seed)?,
            ];
            checks.extend(check_gradients(&ev, seed)?);
            checks.push(check_nodes(&ev)?);
            report.cells.push(VerifyCell {
                shape,
                order,
                checks,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub shapes: Vec<Shape>,
    pub orders: Vec<usize>,
    /// Sweeps per cell; 1000 in 1D and 100 otherwise when `None`.
    pub reps: Option<usize>,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Every quantity the shape supports when `None`.
    pub quantities: Option<Vec<Quantity>>,
}

impl BenchConfig {
    pub fn new(shapes: Vec<Shape>, orders: Vec<usize>, reps: Option<usize>, seed: u64) -> Self {
        Self {
            shapes,
            orders,
            reps,
            seed,
            methods: Method::ALL.to_vec(),
            quantities: None,
        }
    }

    fn reps_for(&self, shape: Shape) -> usize {
        self.reps
            .unwrap_or(if shape.dim() == 1 { 1000 } else { 100 })
    }
}

/// Mean and sample standard deviation of the wall time of `sweep`, in ns.
pub fn time_sweeps(reps: usize, mut sweep: impl FnMut()) -> (f64, f64) {
    for _ in 0..reps.clamp(1, 3) {
        sweep();
    }
    let samples: Vec<f64> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            sweep();
            (t.elapsed().as_nanos() as f64).max(1.0)
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Everything needed to run one method over the sampling grid.
struct Runner<'a> {
    ev: &'a ElementEvaluator,
    grid: &'a [Vec<f64>],
    want: Deriv,
    cached: InterpOperator,
    recomputed: InterpOperator,
}

impl<'a> Runner<'a> {
    fn new(ev: &'a ElementEvaluator, grid: &'a [Vec<f64>], want: Deriv) -> Result<Self> {
        Ok(Self {
            ev,
            grid,
            want,
            cached: InterpOperator::for_element(ev, grid, want, InterpMode::Cached)?,
            recomputed: InterpOperator::for_element(ev, grid, want, InterpMode::Recomputed)?,
        })
    }

    fn sweep(&self, method: Method) {
        match method {
            Method::Bary => {
                for xi in self.grid {
                    let _ = black_box(self.ev.phys_evaluate(black_box(xi), self.want));
                }
            }
            Method::MatrixCached => {
                let _ = black_box(self.cached.apply(black_box(self.ev.field())));
            }
            Method::MatrixRecomputed => {
                let _ = black_box(self.recomputed.apply(black_box(self.ev.field())));
            }
        }
    }

    /// Output rows (value, then derivatives) for cross-checking.
    fn outputs(&self, method: Method) -> Result<Vec<Vec<f64>>> {
        let from_matrix = |out: InterpOutput| -> Vec<Vec<f64>> {
            (0..self.grid.len())
                .map(|m| {
                    let mut row = vec![out.values[m]];
                    row.extend(out.gradient(m).unwrap_or_default());
                    row.extend(out.second.as_ref().map(|s| s[m]));
                    row
                })
                .collect()
        };
        Ok(match method {
            Method::Bary => self
                .grid
                .iter()
                .map(|xi| {
                    let r = self.ev.phys_evaluate(xi, self.want)?;
                    let mut row = vec![r.value];
                    row.extend(r.gradient().unwrap_or_default());
                    row.extend(r.d2);
                    Ok(row)
                })
                .collect::<Result<_>>()?,
            Method::MatrixCached => from_matrix(self.cached.apply(self.ev.field())?),
            Method::MatrixRecomputed => from_matrix(self.recomputed.apply(self.ev.field())?),
        })
    }
}

/// Largest scaled disagreement between two output tables. Column `c` is
/// scaled by its largest magnitude; derivative columns are further scaled
/// per row by `amplification[m]`, the size of the collapse Jacobian there,
/// since both methods push their η-gradient error through the same map.
fn disagreement(a: &[Vec<f64>], b: &[Vec<f64>], amplification: &[f64]) -> f64 {
    let cols = a.first().map_or(0, Vec::len);
    let scale: Vec<f64> = (0..cols)
        .map(|c| a.iter().map(|r| r[c].abs()).fold(1.0, f64::max))
        .collect();
    let mut worst = 0.0;
    for ((ra, rb), amp) in a.iter().zip(b).zip(amplification) {
        for (c, ((x, y), s)) in ra.iter().zip(rb).zip(&scale).enumerate() {
            let s = if c == 0 { *s } else { s * amp };
            worst = f64::max(worst, (x - y).abs() / s);
        }
    }
    worst
}

/// `max(1, ||J||_inf)` of the collapse map at `xi`.
fn jacobian_size(shape: Shape, xi: &[f64]) -> f64 {
    let d = shape.dim();
    shape
        .collapse(xi)
        .and_then(|eta| shape.jacobian(&eta[..d]))
        .map(|j| {
            j[..d]
                .iter()
                .map(|row| row[..d].iter().map(|v| v.abs()).sum())
                .fold(1.0, f64::max)
        })
        .unwrap_or(1.0)
}

/// Times every requested (shape, order, method, quantity) cell. Methods are
/// cross-checked against each other before any timing.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if config.reps == Some(0) {
        return Err(Error::InvalidInput("reps must be at least 1".into()));
    }
    if config.methods.is_empty() {
        return Err(Error::InvalidInput("no methods selected".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();
    for &shape in &config.shapes {
        let grid = sampling_grid(shape);
        let amplification: Vec<f64> = grid.iter().map(|xi| jacobian_size(shape, xi)).collect();
        let reps = config.reps_for(shape);
        let quantities: Vec<Quantity> = match &config.quantities {
            Some(q) => q
                .iter()
                .copied()
                .filter(|q| Quantity::for_shape(shape).contains(q))
                .collect(),
            None => Quantity::for_shape(shape).to_vec(),
        };
        for &order in &config.orders {
            let ev = bench_element(shape, order)?;
            for &quantity in &quantities {
                let runner = Runner::new(&ev, &grid, quantity.deriv())?;
                let reference = runner.outputs(Method::Bary)?;
                for &method in &config.methods {
                    let err = disagreement(&reference, &runner.outputs(method)?, &amplification);
                    if err.is_nan() || err > AGREEMENT_TOL {
                        return Err(Error::Report(format!(
                            "{method} disagrees with bary by {err:.2e} on {shape} order {order} {quantity}"
                        )));
                    }
                }
                let mut order_of_methods = config.methods.clone();
                order_of_methods.shuffle(&mut rng);
                let mut cell: Vec<BenchRecord> = order_of_methods
                    .into_iter()
                    .map(|method| {
                        let (mean_ns, stddev_ns) = time_sweeps(reps, || runner.sweep(method));
                        BenchRecord {
                            shape: shape.name().to_string(),
                            order,
                            method,
                            quantity,
                            sample_points: grid.len(),
                            reps,
                            mean_ns,
                            stddev_ns,
                        }
                    })
                    .collect();
                cell.sort_by_key(|r| r.method);
                records.extend(cell);
            }
        }
    }
    Ok(records)
}

/// Ratios of 1D timings at `n = 41` over `n = 11` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSanity {
    pub bary_ratio: f64,
    pub recomputed_ratio: f64,
}

impl ScalingSanity {
    pub const BARY_MAX: f64 = 8.0;
    pub const RECOMPUTED_MIN: f64 = 8.0;

    pub fn passed(&self) -> bool {
        self.bary_ratio <= Self::BARY_MAX && self.recomputed_ratio >= Self::RECOMPUTED_MIN
    }
}

/// Times 1D value evaluation at 11 and 41 points.
pub fn scaling_sanity(reps: usize) -> Result<ScalingSanity> {
    let grid = sampling_grid(Shape::Segment);
    let time = |n: usize| -> Result<(f64, f64)> {
        let ev = bench_element(Shape::Segment, n - 2)?;
        let runner = Runner::new(&ev, &grid, Deriv::Value)?;
        let bary = time_sweeps(reps, || runner.sweep(Method::Bary)).0;
        let recomputed = time_sweeps(reps, || runner.sweep(Method::MatrixRecomputed)).0;
        Ok((bary, recomputed))
    };
    let (b11, r11) = time(11)?;
    let (b41, r41) = time(41)?;
    Ok(ScalingSanity {
        bary_ratio: b41 / b11,
        recomputed_ratio: r41 / r11,
    })
}

pub const CSV_HEADER: &str = "shape,order,method,quantity,sample_points,reps,mean_ns,stddev_ns";

fn csv_err(e: csv::Error) -> Error {
    Error::Report(e.to_string())
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Report(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Report(format!(
            "unexpected CSV header `{}`",
            header.join(",")
        )));
    }
    r.deserialize().map(|rec| rec.map_err(csv_err)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupRow {
    pub shape: String,
    pub order: usize,
    pub quantity: Quantity,
    pub bary_mean_ns: f64,
    pub matrix_recomputed_mean_ns: f64,
    pub speedup: f64,
}

/// Pairs every bary cell with its matrix_recomputed counterpart and reports
/// `recomputed / bary`.
pub fn speedup_report(records: &[BenchRecord]) -> Result<Vec<SpeedupRow>> {
    if records.is_empty() {
        return Err(Error::Report("no benchmark records".into()));
    }
    type Key = (String, usize, Quantity);
    let key = |r: &BenchRecord| -> Key { (r.shape.clone(), r.order, r.quantity) };
    let mut bary: Vec<(Key, f64)> = Vec::new();
    let mut recomputed: HashMap<Key, f64> = HashMap::new();
    for r in records {
        match r.method {
            Method::Bary => bary.push((key(r), r.mean_ns)),
            Method::MatrixRecomputed => {
                recomputed.insert(key(r), r.mean_ns);
            }
            Method::MatrixCached => {}
        }
    }
    let name = |k: &Key| format!("{} order {} {}", k.0, k.1, k.2);
    let mut rows = Vec::new();
    for (k, b) in &bary {
        let m = recomputed
            .remove(k)
            .ok_or_else(|| Error::Report(format!("no matrix_recomputed cell for {}", name(k))))?;
        rows.push(SpeedupRow {
            shape: k.0.clone(),
            order: k.1,
            quantity: k.2,
            bary_mean_ns: *b,
            matrix_recomputed_mean_ns: m,
            speedup: m / b,
        });
    }
    if let Some(k) = recomputed.keys().min() {
        return Err(Error::Report(format!("no bary cell for {}", name(k))));
    }
    if rows.is_empty() {
        return Err(Error::Report(
            "no bary/matrix_recomputed cells to compare".into(),
        ));
    }
    Ok(rows)
}

pub fn write_speedup_csv<W: Write>(rows: &[SpeedupRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Report(e.to_string()))
}
