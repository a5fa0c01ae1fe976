//! One-dimensional interpolation nodes on `[-1, 1]`.
//!
//! A [`NodeSet`] bundles the nodes with their barycentric weights and the
//! first and second spectral differentiation matrices. Everything is fixed at
//! construction.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, MAX_POINTS};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Legendre-Gauss-Lobatto: both endpoints plus the roots of `P'_{n-1}`.
    GaussLobattoLegendre,
    /// Legendre-Gauss-Radau anchored at `-1`; never contains `+1`.
    GaussRadauMinus,
    ChebyshevGaussLobatto,
    Equispaced,
    /// User-supplied nodes.
    Custom,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::GaussLobattoLegendre => "gll",
            NodeKind::GaussRadauMinus => "radau",
            NodeKind::ChebyshevGaussLobatto => "chebyshev",
            NodeKind::Equispaced => "equispaced",
            NodeKind::Custom => "custom",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gll" | "gauss-lobatto-legendre" => Ok(NodeKind::GaussLobattoLegendre),
            "radau" | "gauss-radau" => Ok(NodeKind::GaussRadauMinus),
            "chebyshev" | "cgl" => Ok(NodeKind::ChebyshevGaussLobatto),
            "equispaced" | "uniform" => Ok(NodeKind::Equispaced),
            other => Err(Error::InvalidInput(format!("unknown node kind `{other}`"))),
        }
    }
}

/// Legendre polynomial `P_n(x)` with its first two derivatives, from the
/// three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64, f64) {
    let (mut p0, mut dp0, mut ddp0) = (1.0, 0.0, 0.0);
    if n == 0 {
        return (p0, dp0, ddp0);
    }
    let (mut p1, mut dp1, mut ddp1) = (x, 1.0, 0.0);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k, differentiated once more for P''.
        let dp2 = dp0 + (2.0 * kf + 1.0) * p1;
        let ddp2 = ddp0 + (2.0 * kf + 1.0) * dp1;
        (p0, dp0, ddp0) = (p1, dp1, ddp1);
        (p1, dp1, ddp1) = (p2, dp2, ddp2);
    }
    (p1, dp1, ddp1)
}

fn newton<F>(mut x: f64, f: F, what: &str) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    for _ in 0..NEWTON_MAX_ITERS {
        let (value, slope) = f(x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let step = value / slope;
        x -= step;
        if step.abs() <= NEWTON_TOL {
            return Ok(x);
        }
    }
    Err(Error::Numerical(format!(
        "Newton iteration for {what} did not converge near {x}"
    )))
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    if n > MAX_POINTS {
        return Err(Error::InvalidSize(format!(
            "at most {MAX_POINTS} nodes are supported, got {n}"
        )));
    }
    Ok(())
}

/// Generates `n` ascending nodes of the given family on `[-1, 1]`.
pub fn generate_nodes(kind: NodeKind, n: usize) -> Result<Vec<f64>> {
    check_count(n)?;
    let last = (n - 1) as f64;
    let nodes = match kind {
        NodeKind::Equispaced => (0..n).map(|j| -1.0 + 2.0 * j as f64 / last).collect(),
        NodeKind::ChebyshevGaussLobatto => (0..n)
            .map(|j| {
                // Mirror the ascending half so the set is exactly symmetric.
                if 2 * j + 1 == n {
                    0.0
                } else {
                    -(PI * j as f64 / last).cos()
                }
            })
            .collect(),
        NodeKind::GaussLobattoLegendre => {
            let degree = n - 1;
            let mut nodes = vec![0.0; n];
            nodes[0] = -1.0;
            nodes[n - 1] = 1.0;
            for j in 1..n - 1 {
                let guess = -(PI * j as f64 / last).cos();
                nodes[j] = newton(
                    guess,
                    |x| {
                        let (_, dp, ddp) = legendre(degree, x);
                        (dp, ddp)
                    },
                    "a Gauss-Lobatto-Legendre node",
                )?;
            }
            symmetrize(&mut nodes);
            nodes
        }
        NodeKind::GaussRadauMinus => {
            // Interior roots of (P_{n-1} + P_n) / (1 + x); -1 is the fixed node.
            let mut nodes = vec![-1.0; n];
            let denom = (2 * n - 1) as f64;
            for j in 1..n {
                let guess = -(2.0 * PI * j as f64 / denom).cos();
                nodes[j] = newton(
                    guess,
                    |x| {
                        let (pa, dpa, _) = legendre(n - 1, x);
                        let (pb, dpb, _) = legendre(n, x);
                        let f = pa + pb;
                        let df = dpa + dpb;
                        // Newton on f/(1+x) without forming the quotient.
                        let onep = 1.0 + x;
                        (f * onep, df * onep - f)
                    },
                    "a Gauss-Radau node",
                )?;
            }
            nodes
        }
        NodeKind::Custom => {
            return Err(Error::InvalidInput(
                "custom nodes must be supplied explicitly".into(),
            ))
        }
    };
    check_ascending(&nodes)?;
    Ok(nodes)
}

fn symmetrize(nodes: &mut [f64]) {
    let n = nodes.len();
    for j in 0..n / 2 {
        let r = 0.5 * (nodes[n - 1 - j] - nodes[j]);
        nodes[j] = -r;
        nodes[n - 1 - j] = r;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

fn check_ascending(nodes: &[f64]) -> Result<()> {
    check_count(nodes.len())?;
    if nodes.iter().any(|z| !z.is_finite() || z.abs() > 1.0) {
        return Err(Error::InvalidInput(format!(
            "nodes must lie in [-1, 1]: {nodes:?}"
        )));
    }
    for pair in nodes.windows(2) {
        if pair[1] == pair[0] {
            return Err(Error::DegenerateNodes(format!("repeated node {}", pair[0])));
        }
        if pair[1] < pair[0] {
            return Err(Error::InvalidInput(format!(
                "nodes not ascending: {nodes:?}"
            )));
        }
    }
    Ok(())
}

/// Barycentric weights `w_j = 1 / prod_{i != j} (z_i - z_j)`.
pub fn bary_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let mut weights = Vec::with_capacity(nodes.len());
    for (j, &zj) in nodes.iter().enumerate() {
        let mut prod = 1.0;
        for (i, &zi) in nodes.iter().enumerate() {
            if i != j {
                prod *= zi - zj;
            }
        }
        if prod == 0.0 {
            return Err(Error::DegenerateNodes(format!(
                "node {zj} appears more than once"
            )));
        }
        weights.push(1.0 / prod);
    }
    Ok(weights)
}

/// First differentiation matrix (row-major, `n * n`).
pub fn diff_matrix(nodes: &[f64], weights: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (weights[j] / weights[i]) / (nodes[i] - nodes[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    kind: NodeKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl NodeSet {
    pub fn new(kind: NodeKind, n: usize) -> Result<Self> {
        let nodes = generate_nodes(kind, n)?;
        Self::build(kind, nodes)
    }

    /// Builds a node set from explicit ascending nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        check_ascending(&nodes)?;
        Self::build(NodeKind::Custom, nodes)
    }

    fn build(kind: NodeKind, nodes: Vec<f64>) -> Result<Self> {
        let weights = bary_weights(&nodes)?;
        let d1 = diff_matrix(&nodes, &weights);
        let d2 = mat_mul(&d1, &d1, nodes.len());
        Ok(Self {
            kind,
            nodes,
            weights,
            d1,
            d2,
        })
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major first differentiation matrix.
    pub fn d1(&self) -> &[f64] {
        &self.d1
    }

    /// Row-major second differentiation matrix, `d1 * d1`.
    pub fn d2(&self) -> &[f64] {
        &self.d2
    }

    pub fn d1_row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.d1[i * n..(i + 1) * n]
    }

    pub fn d2_row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.d2[i * n..(i + 1) * n]
    }

    /// Same nodes with every weight multiplied by `c`. Evaluation results do
    /// not change since the kernel only forms weight ratios.
    pub fn with_scaled_weights(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= c);
        out
    }

    pub fn contains_plus_one(&self) -> bool {
        self.nodes.last() == Some(&1.0)
    }
}
