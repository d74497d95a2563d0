//! Kac–Rice densities for scalar Gaussian processes on a line or curve.
//!
//! A process `f(t) = Σ ξ_k σ_k φ_k(t)` is given by its variances `σ_k²` and a
//! basis evaluator returning `φ_k(t)` and `φ_k'(t)`; every kernel derivative
//! is assembled from those exact values.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};

/// Writes `φ_k(t)` into the first slice and `φ_k'(t)` into the second.
pub type BasisFn = dyn Fn(f64, &mut [f64], &mut [f64]) + Send + Sync;

/// Density values below this multiple of `K(t,t)` mark a degenerate point.
pub const DEGENERATE_TOLERANCE: f64 = 1e-300;
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
const MAX_INTERVALS: usize = 20_000;

#[derive(Clone)]
pub struct CovarianceKernel {
    variances: Vec<f64>,
    basis: Arc<BasisFn>,
}

impl std::fmt::Debug for CovarianceKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CovarianceKernel").field("variances", &self.variances).finish()
    }
}

/// `K(s,t)` with its partials `∂_s K`, `∂_t K`, `∂_s∂_t K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub k: f64,
    pub ds: f64,
    pub dt: f64,
    pub dsdt: f64,
}

impl CovarianceKernel {
    pub fn new(variances: Vec<f64>, basis: Arc<BasisFn>) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::Degenerate("empty expansion".into()));
        }
        if let Some(v) = variances.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Degenerate(format!("variance {v} is not admissible")));
        }
        Ok(CovarianceKernel { variances, basis })
    }

    /// `f = Σ ξ_k σ_k t^k`. Basis values are divided by `max(1,|t|)^d`, which
    /// leaves zeros and density unchanged and avoids overflow.
    pub fn monomials(variances: Vec<f64>) -> Result<Self> {
        let d = variances.len() - 1;
        let basis = move |t: f64, v: &mut [f64], dv: &mut [f64]| {
            if t.abs() <= 1.0 {
                let mut p = 1.0;
                for k in 0..=d {
                    v[k] = p;
                    p *= t;
                }
                dv[0] = 0.0;
                for k in 1..=d {
                    dv[k] = k as f64 * v[k - 1];
                }
            } else {
                // t^{k-d} = s^{d-k}, derivative -(d-k) s^{d-k+1}
                let s = 1.0 / t;
                let mut p = 1.0;
                for k in (0..=d).rev() {
                    v[k] = p;
                    dv[k] = -((d - k) as f64) * p * s;
                    p *= s;
                }
            }
        };
        Self::new(variances, Arc::new(basis))
    }

    /// `f = ξ₀ + ξ₁ t`.
    pub fn linear_pencil() -> Self {
        Self::monomials(vec![1.0, 1.0]).expect("valid")
    }

    /// `f(θ) = Σ_k σ_k (ξ_k cos kθ + η_k sin kθ)`; `blocks` holds `(k, σ_k²)`.
    pub fn trigonometric(blocks: &[(usize, f64)]) -> Result<Self> {
        let ks: Vec<usize> = blocks.iter().map(|b| b.0).collect();
        let mut variances = Vec::new();
        for &(k, v) in blocks {
            variances.push(v);
            if k > 0 {
                variances.push(v);
            }
        }
        let basis = move |t: f64, v: &mut [f64], dv: &mut [f64]| {
            let mut i = 0;
            for &k in &ks {
                let kf = k as f64;
                let (s, c) = (kf * t).sin_cos();
                v[i] = c;
                dv[i] = -kf * s;
                i += 1;
                if k > 0 {
                    v[i] = s;
                    dv[i] = kf * c;
                    i += 1;
                }
            }
        };
        Self::new(variances, Arc::new(basis))
    }

    /// Kostlan binary forms on the unit circle: `K(θ,φ) = cos^d(θ−φ)`.
    pub fn kostlan_circle(d: usize) -> Self {
        kernel_from_ensemble(&EnsembleSpec::bombieri_weyl(1, d), &CurvePath::unit_circle()).expect("valid spec")
    }

    pub fn len(&self) -> usize {
        self.variances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variances.is_empty()
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    fn basis_at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let mut v = vec![0.0; self.len()];
        let mut dv = vec![0.0; self.len()];
        (self.basis)(t, &mut v, &mut dv);
        (v, dv)
    }

    pub fn eval(&self, s: f64, t: f64) -> KernelValue {
        let (vs, dvs) = self.basis_at(s);
        let (vt, dvt) = self.basis_at(t);
        let mut out = KernelValue {
            k: 0.0,
            ds: 0.0,
            dt: 0.0,
            dsdt: 0.0,
        };
        for i in 0..self.len() {
            let w = self.variances[i];
            out.k += w * vs[i] * vt[i];
            out.ds += w * dvs[i] * vt[i];
            out.dt += w * vs[i] * dvt[i];
            out.dsdt += w * dvs[i] * dvt[i];
        }
        out
    }

    /// Zero density `ρ(t)`.
    pub fn density_at(&self, t: f64) -> Result<f64> {
        let (v, dv) = self.basis_at(t);
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for i in 0..self.len() {
            let w = self.variances[i];
            a += w * v[i] * v[i];
            b += w * v[i] * dv[i];
            c += w * dv[i] * dv[i];
        }
        if !(a > DEGENERATE_TOLERANCE) {
            return Err(Error::Degenerate(format!("K(t,t) = {a:e} at t = {t}")));
        }
        let mut det = a * c - b * b;
        if det < 1e-8 * a * c {
            // Lagrange identity, free of cancellation
            det = 0.0;
            for i in 0..self.len() {
                for j in i + 1..self.len() {
                    let m = v[i] * dv[j] - v[j] * dv[i];
                    det += self.variances[i] * self.variances[j] * m * m;
                }
            }
        }
        Ok(det.max(0.0).sqrt() / (PI * a))
    }

    /// Expected number of zeros on `[a, b]`; infinite endpoints allowed.
    pub fn expected_zeros(&self, a: f64, b: f64) -> Result<f64> {
        expected_zeros(self, a, b)
    }
}

pub fn density_at(k: &CovarianceKernel, t: f64) -> Result<f64> {
    k.density_at(t)
}

pub fn expected_zeros(k: &CovarianceKernel, a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::param("interval", format!("[{a}, {b}] is empty")));
    }
    if a.is_finite() && b.is_finite() {
        integrate(|t| k.density_at(t), a, b, QUADRATURE_TOLERANCE)
    } else {
        // t = tan u
        let ua = if a.is_finite() { a.atan() } else { -PI / 2.0 };
        let ub = if b.is_finite() { b.atan() } else { PI / 2.0 };
        integrate(
            |u| {
                let t = u.tan();
                Ok(k.density_at(t)? * (1.0 + t * t))
            },
            ua,
            ub,
            QUADRATURE_TOLERANCE,
        )
    }
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gauss_kronrod<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k15 = K15_WEIGHTS[7] * fc;
    let mut g7 = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x)? + f(c + x)?;
        k15 += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g7 += G7_WEIGHTS[i / 2] * s;
        }
    }
    Ok((k15 * h, ((k15 - g7) * h).abs()))
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance.
pub fn integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    // a few initial pieces so narrow peaks are not missed entirely
    let init = 16;
    for i in 0..init {
        let x0 = a + (b - a) * i as f64 / init as f64;
        let x1 = a + (b - a) * (i + 1) as f64 / init as f64;
        let (value, err) = gauss_kronrod(&f, x0, x1)?;
        heap.push(Piece { a: x0, b: x1, value, err });
    }
    loop {
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        if total_err <= tol {
            break;
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Precision(format!("quadrature stalled at error {total_err:e}")));
        }
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        for (x0, x1) in [(worst.a, m), (m, worst.b)] {
            let (value, err) = gauss_kronrod(&f, x0, x1)?;
            heap.push(Piece { a: x0, b: x1, value, err });
        }
    }
    let mut values: Vec<f64> = heap.into_iter().map(|p| p.value).collect();
    values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    Ok(crate::stats::compensated_sum(values))
}

/// Smooth plane path `t ↦ (x₀(t), x₁(t))` with its velocity.
#[derive(Clone)]
pub struct CurvePath {
    f: Arc<dyn Fn(f64) -> ([f64; 2], [f64; 2]) + Send + Sync>,
}

impl CurvePath {
    pub fn new(f: impl Fn(f64) -> ([f64; 2], [f64; 2]) + Send + Sync + 'static) -> Self {
        CurvePath { f: Arc::new(f) }
    }

    /// `θ ↦ (cos θ, sin θ)`.
    pub fn unit_circle() -> Self {
        Self::new(|t| {
            let (s, c) = t.sin_cos();
            ([c, s], [-s, c])
        })
    }

    /// The affine chart `t ↦ (1, t)`.
    pub fn affine_line() -> Self {
        Self::new(|t| ([1.0, t], [0.0, 1.0]))
    }

    pub fn at(&self, t: f64) -> ([f64; 2], [f64; 2]) {
        (self.f)(t)
    }
}

/// Kernel of a binary invariant ensemble restricted to a path.
///
/// On `H_k` (`k ≥ 1`) the standard Gaussian for `β(k)⟨·,·⟩_{L²}` has
/// orthonormal basis `√(2/β) Re zᵏ, √(2/β) Im zᵏ` with `z = x₀ + i x₁`; block
/// `k = 0` contributes `1/β(0)`.
pub fn kernel_from_ensemble(spec: &EnsembleSpec, path: &CurvePath) -> Result<CovarianceKernel> {
    spec.validate()?;
    if spec.n != 1 {
        return Err(Error::Dimension(format!("binary forms expected, got n = {}", spec.n)));
    }
    let d = spec.d;
    let ks: Vec<usize> = spec.weights.keys().copied().collect();
    let mut variances = Vec::new();
    for (&k, &beta) in &spec.weights {
        if k == 0 {
            variances.push(1.0 / beta);
        } else {
            variances.push(2.0 / beta);
            variances.push(2.0 / beta);
        }
    }
    let path = path.clone();
    let basis = move |t: f64, v: &mut [f64], dv: &mut [f64]| {
        let ([x0, x1], [y0, y1]) = path.at(t);
        let r2 = x0 * x0 + x1 * x1;
        let dr2 = 2.0 * (x0 * y0 + x1 * y1);
        let mut i = 0;
        for &k in &ks {
            // g = (r²)^{(d-k)/2}, w = z^k
            let e = (d - k) / 2;
            let g = r2.powi(e as i32);
            let dg = if e == 0 { 0.0 } else { e as f64 * r2.powi(e as i32 - 1) * dr2 };
            let (mut wr, mut wi) = (1.0, 0.0);
            let (mut pr, mut pi) = (1.0, 0.0); // z^{k-1}
            for j in 0..k {
                if j + 1 == k {
                    pr = wr;
                    pi = wi;
                }
                let nr = wr * x0 - wi * x1;
                wi = wr * x1 + wi * x0;
                wr = nr;
            }
            // d/dt z^k = k z^{k-1} z'
            let (dwr, dwi) = if k == 0 {
                (0.0, 0.0)
            } else {
                (k as f64 * (pr * y0 - pi * y1), k as f64 * (pr * y1 + pi * y0))
            };
            v[i] = g * wr;
            dv[i] = dg * wr + g * dwr;
            i += 1;
            if k > 0 {
                v[i] = g * wi;
                dv[i] = dg * wi + g * dwi;
                i += 1;
            }
        }
    };
    CovarianceKernel::new(variances, Arc::new(basis))
}
