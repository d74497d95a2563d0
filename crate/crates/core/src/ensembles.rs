//! Seeded samplers for every random object in the laboratory.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic;
use crate::polycore::{basis, ln_factorial, HomogeneousPoly};

/// Environment variable that overrides the master seed.
pub const SEED_ENV: &str = "RAGLAB_SEED";

/// Master seed from `RAGLAB_SEED` if set and parseable, otherwise `default`.
pub fn master_seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

/// A deterministic random stream identified by `(master_seed, stream_index)`.
///
/// Streams are ChaCha8 keyed by the master seed with the replicate index as
/// the stream id, so replicate `i` never depends on how many draws other
/// replicates made.
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

/// Stream for replicate `index` of the run seeded by `master`.
pub fn seed_derive(master: u64, index: u64) -> RngStream {
    RngStream::new(master, index)
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        RngStream {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard Gaussian by inversion, one uniform per draw.
    pub fn gaussian(&mut self) -> f64 {
        let u = self.uniform();
        -std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * u)
    }

    pub fn gaussians(&mut self, k: usize) -> Vec<f64> {
        (0..k).map(|_| self.gaussian()).collect()
    }

    /// Uniform point of the unit sphere in `R^m`.
    pub fn unit_vector(&mut self, m: usize) -> Vec<f64> {
        loop {
            let v = self.gaussians(m);
            let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return v.into_iter().map(|t| t / norm).collect();
            }
        }
    }
}

/// Kostlan (Bombieri–Weyl) polynomial: coefficient of `x^α` is `ξ_α (d!/α!)^{1/2}`.
pub fn sample_kostlan(n: usize, d: usize, rng: &mut RngStream) -> HomogeneousPoly {
    let b = basis(n, d);
    let coeffs = (0..b.len())
        .map(|r| rng.gaussian() * b.bw_weight_sq(r).sqrt())
        .collect();
    HomogeneousPoly::from_coeffs(n, d, coeffs).expect("basis length")
}

/// Invariant Gaussian ensemble on degree-`d` forms: the scalar product is
/// `Σ_k β(k) ⟨·,·⟩_{L²}` on the harmonic blocks. A block missing from
/// `weights` is not sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub d: usize,
    pub weights: BTreeMap<usize, f64>,
}

impl EnsembleSpec {
    pub fn new(n: usize, d: usize, weights: BTreeMap<usize, f64>) -> Result<Self> {
        let spec = EnsembleSpec { n, d, weights };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::Degenerate("ensemble has no weights".into()));
        }
        for (&k, &w) in &self.weights {
            if k > self.d || (self.d - k) % 2 != 0 {
                return Err(Error::Degenerate(format!(
                    "weight given for inadmissible block k={k} at d={}",
                    self.d
                )));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Degenerate(format!("weight β({k}) = {w} is not positive")));
            }
        }
        Ok(())
    }

    /// Weights that reproduce the Kostlan ensemble.
    pub fn bombieri_weyl(n: usize, d: usize) -> Self {
        let weights = admissible(d).map(|k| (k, harmonic::bw_block_weight(n, d, k))).collect();
        EnsembleSpec { n, d, weights }
    }

    /// The ensemble induced by `L²(Sⁿ)`: all weights 1.
    pub fn l2(n: usize, d: usize) -> Self {
        let weights = admissible(d).map(|k| (k, 1.0)).collect();
        EnsembleSpec { n, d, weights }
    }

    /// Random spherical harmonics of degree `d`.
    pub fn pure_harmonic(n: usize, d: usize) -> Self {
        EnsembleSpec {
            n,
            d,
            weights: BTreeMap::from([(d, 1.0)]),
        }
    }

    /// Spec whose block `k` has per-dimension variance `v(k)`, i.e. `β(k) = 1/v(k)`.
    pub fn from_block_variances(n: usize, d: usize, variances: &BTreeMap<usize, f64>) -> Result<Self> {
        let weights = variances.iter().map(|(&k, &v)| (k, 1.0 / v)).collect();
        Self::new(n, d, weights)
    }
}

/// Harmonic degrees `k ≤ d` with `d − k` even, in increasing order.
pub fn admissible(d: usize) -> impl Iterator<Item = usize> {
    (d % 2..=d).step_by(2)
}

/// Sample from an invariant ensemble, block by block.
///
/// A Kostlan form of degree `k` projected on the harmonics is a standard
/// Gaussian for the BW structure on `V_k`; rescaling by the L²/BW constant
/// makes it L²-standard, and `β(k)^{-1/2}` sets the block variance.
pub fn sample_invariant(spec: &EnsembleSpec, rng: &mut RngStream) -> Result<HomogeneousPoly> {
    spec.validate()?;
    let mut out = HomogeneousPoly::zero(spec.n, spec.d);
    for (&k, &beta) in &spec.weights {
        let q = sample_kostlan(spec.n, k, rng);
        let h = harmonic::harmonic_projection(&q);
        let c = harmonic::l2_bw_ratio(spec.n, k);
        let block = h.scale(1.0 / (c * beta).sqrt()).mul_norm_sq_pow((spec.d - k) / 2);
        out = out.add(&block)?;
    }
    Ok(out)
}

/// A GOE matrix: symmetric, diagonal variance 1, off-diagonal variance 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct GoeMatrix(pub DMatrix<f64>);

impl GoeMatrix {
    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    /// The quadric `⟨x, Qx⟩`, whose Kostlan law is exactly this ensemble.
    pub fn to_quadric(&self) -> HomogeneousPoly {
        let m = self.size();
        let mut p = HomogeneousPoly::zero(m - 1, 2);
        for i in 0..m {
            for j in i..m {
                let mut a = vec![0u32; m];
                a[i] += 1;
                a[j] += 1;
                let c = if i == j { self.0[(i, i)] } else { 2.0 * self.0[(i, j)] };
                p.set_coeff(&a, c);
            }
        }
        p
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

pub fn sample_goe(m: usize, rng: &mut RngStream) -> GoeMatrix {
    assert!(m >= 1, "GOE size must be positive");
    let mut q = DMatrix::zeros(m, m);
    for i in 0..m {
        q[(i, i)] = rng.gaussian();
        for j in (i + 1)..m {
            let v = rng.gaussian() * std::f64::consts::FRAC_1_SQRT_2;
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    GoeMatrix(q)
}

/// Symmetric matrix of a quadric `p(x) = ⟨x, Qx⟩`.
pub fn quadric_matrix(p: &HomogeneousPoly) -> Result<DMatrix<f64>> {
    if p.d() != 2 {
        return Err(Error::Dimension(format!("quadric expected, got degree {}", p.d())));
    }
    let m = p.num_vars();
    let mut q = DMatrix::zeros(m, m);
    for (a, c) in p.terms() {
        let idx: Vec<usize> = (0..m).flat_map(|i| std::iter::repeat(i).take(a[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            q[(i, i)] = c;
        } else {
            q[(i, j)] = c / 2.0;
            q[(j, i)] = c / 2.0;
        }
    }
    Ok(q)
}

/// Haar-distributed orthogonal matrix of size `m` (row-major).
pub fn sample_rotation(m: usize, rng: &mut RngStream) -> Vec<f64> {
    loop {
        let g = DMatrix::from_fn(m, m, |_, _| rng.gaussian());
        let qr = g.qr();
        let r = qr.r();
        if (0..m).any(|i| r[(i, i)].abs() < 1e-12) {
            continue;
        }
        let mut q = qr.q();
        for j in 0..m {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                out.push(q[(i, j)]);
            }
        }
        return out;
    }
}

/// Orthonormal frame of a uniformly random `(k+1)`-dimensional subspace of `R^{n+1}`.
#[derive(Clone, Debug)]
pub struct RandomFlat {
    /// Column vectors of the frame.
    pub basis: Vec<Vec<f64>>,
    /// Number of rank-deficient draws that were rejected.
    pub resamples: usize,
}

pub fn sample_random_flat(k: usize, n: usize, rng: &mut RngStream) -> Result<RandomFlat> {
    if k > n {
        return Err(Error::param("k", format!("flat dimension {k} exceeds n = {n}")));
    }
    let m = n + 1;
    let mut resamples = 0;
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
        let mut ok = true;
        for _ in 0..=k {
            let mut v = rng.gaussians(m);
            let raw = norm(&v);
            // two passes of Gram–Schmidt
            for _ in 0..2 {
                for c in &cols {
                    let t = dot(&v, c);
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= t * b);
                }
            }
            let nv = norm(&v);
            if nv <= 1e-10 * raw.max(1e-300) {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|a| *a /= nv);
            cols.push(v);
        }
        if ok {
            return Ok(RandomFlat { basis: cols, resamples });
        }
        resamples += 1;
    }
}

/// Local Taylor coefficients of `f_d(y) = p(1, y/√d)` for a Kostlan `p`.
#[derive(Clone, Debug)]
pub struct LocalCoefficients {
    pub d: usize,
    /// Multi-indices `β` in the `n` affine variables, by increasing degree.
    pub indices: Vec<Vec<u32>>,
    /// Sampled coefficients of `y^β`.
    pub values: Vec<f64>,
    /// `(d!/((d−k)! d^k))^{1/2}` for `k = |β|`.
    pub scale: Vec<f64>,
    /// Limiting standard deviation `(β!)^{-1/2}`.
    pub limit_sd: Vec<f64>,
}

/// `(d!/((d−k)! d^k))^{1/2}`, the finite-`d` correction to the limiting scale.
pub fn rescale_factor(d: usize, k: usize) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    // the product form is exact to rounding and stable for huge d
    let mut acc = 1.0f64;
    for i in 0..k {
        acc *= (d - i) as f64 / d as f64;
    }
    acc.sqrt()
}

pub fn rescaled_local(n: usize, d: usize, k_max: usize, rng: &mut RngStream) -> Result<LocalCoefficients> {
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("rescaled local fields need n ∈ {{1,2}}, got {n}")));
    }
    if k_max > d {
        return Err(Error::param("k_max", format!("{k_max} exceeds d = {d}")));
    }
    let mut indices = Vec::new();
    for k in 0..=k_max as u32 {
        if n == 1 {
            indices.push(vec![k]);
        } else {
            for a in (0..=k).rev() {
                indices.push(vec![a, k - a]);
            }
        }
    }
    let mut values = Vec::with_capacity(indices.len());
    let mut scale = Vec::with_capacity(indices.len());
    let mut limit_sd = Vec::with_capacity(indices.len());
    for beta in &indices {
        let k: usize = beta.iter().map(|&b| b as usize).sum();
        let s = rescale_factor(d, k);
        let ln_beta_fact: f64 = beta.iter().map(|&b| ln_factorial(b as usize)).sum();
        let sd = (-0.5 * ln_beta_fact).exp();
        scale.push(s);
        limit_sd.push(sd);
        values.push(rng.gaussian() * s * sd);
    }
    Ok(LocalCoefficients {
        d,
        indices,
        values,
        scale,
        limit_sd,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_one_sample, ks_two_sample};

    fn mat_vec(g: &[f64], x: &[f64]) -> Vec<f64> {
        let m = x.len();
        (0..m).map(|i| dot(&g[i * m..(i + 1) * m], x)).collect()
    }

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    fn within_3se(xs: &[f64], target: f64) -> bool {
        let (m, se) = mean_se(xs);
        (m - target).abs() <= 3.0 * se
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        let mut c = RngStream::new(7, 4);
        let xa: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..16).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn uniform_is_open_unit_interval_and_gaussian_is_symmetric() {
        let mut r = RngStream::new(1, 0);
        let us: Vec<f64> = (0..20000).map(|_| r.uniform()).collect();
        assert!(us.iter().all(|&u| u > 0.0 && u < 1.0));
        assert!(within_3se(&us, 0.5));
        let gs: Vec<f64> = (0..20000).map(|_| r.gaussian()).collect();
        assert!(within_3se(&gs, 0.0));
        let sq: Vec<f64> = gs.iter().map(|g| g * g).collect();
        assert!(within_3se(&sq, 1.0));
    }

    #[test]
    fn kostlan_coefficient_variance() {
        let mut r = RngStream::new(2, 0);
        let xs: Vec<f64> = (0..40000)
            .map(|_| sample_kostlan(1, 2, &mut r).coeff(&[1, 1]).powi(2))
            .collect();
        assert!(within_3se(&xs, 2.0));
        let p = sample_kostlan(2, 0, &mut r);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn kostlan_kernel_matches_inner_power() {
        let x = [0.6, 0.8, 0.0];
        let y = [0.0, 0.6, 0.8];
        let d = 5;
        let expect = dot(&x, &y).powi(d as i32);
        let mut r = RngStream::new(3, 0);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| {
                let p = sample_kostlan(2, d, &mut r);
                p.eval(&x) * p.eval(&y)
            })
            .collect();
        assert!(within_3se(&xs, expect), "{:?} vs {expect}", mean_se(&xs));
    }

    #[test]
    fn kostlan_rotation_invariance() {
        let mut r = RngStream::new(4, 0);
        let g = sample_rotation(3, &mut r);
        let pts = [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.48, 0.6, 0.64]];
        let (mut a, mut b) = (vec![Vec::new(); 3], vec![Vec::new(); 3]);
        for _ in 0..10_000 {
            let p = sample_kostlan(2, 4, &mut r);
            let q = p.compose_linear(&g).unwrap();
            let p2 = sample_kostlan(2, 4, &mut r);
            for (i, x) in pts.iter().enumerate() {
                a[i].push(q.eval(x).powi(2));
                b[i].push(p2.eval(x).powi(2));
            }
        }
        for i in 0..3 {
            let (ma, sa) = mean_se(&a[i]);
            let (mb, sb) = mean_se(&b[i]);
            assert!((ma - mb).abs() <= 3.0 * (sa * sa + sb * sb).sqrt());
            assert!((ma - 1.0).abs() <= 3.0 * sa);
        }
    }

    #[test]
    fn pure_harmonic_spec_gives_harmonic_samples() {
        let spec = EnsembleSpec::pure_harmonic(2, 6);
        let mut r = RngStream::new(5, 0);
        let p = sample_invariant(&spec, &mut r).unwrap();
        let lap = p.laplacian();
        let worst = lap.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
        assert!(worst <= 1e-9 * p.bw_norm() * 36.0);
    }

    #[test]
    fn equal_weights_on_the_circle_are_isotropic() {
        let spec = EnsembleSpec::l2(1, 6);
        let mut r = RngStream::new(6, 0);
        let thetas = [0.0f64, 0.7, 1.9];
        let mut vals = vec![Vec::new(); 3];
        for _ in 0..20000 {
            let p = sample_invariant(&spec, &mut r).unwrap();
            for (i, t) in thetas.iter().enumerate() {
                vals[i].push(p.eval(&[t.cos(), t.sin()]).powi(2));
            }
        }
        let (m0, s0) = mean_se(&vals[0]);
        for v in &vals[1..] {
            let (m, s) = mean_se(v);
            assert!((m - m0).abs() <= 3.0 * (s * s + s0 * s0).sqrt());
        }
        // normalized L²: Σ_k dim V_k = 1 + 2·3 for d = 6 on the circle
        assert!((m0 - 7.0).abs() <= 3.0 * s0);
    }

    #[test]
    fn bw_spec_reproduces_kostlan_covariances() {
        let n = 2;
        let d = 4;
        let spec = EnsembleSpec::bombieri_weyl(n, d);
        let mut r = RngStream::new(7, 0);
        let pairs: Vec<([f64; 3], [f64; 3])> = (0..10)
            .map(|i| {
                let t = i as f64 * 0.31;
                ([t.cos(), t.sin(), 0.0], [0.0, (2.0 * t).cos(), (2.0 * t).sin()])
            })
            .collect();
        let mut a = vec![Vec::new(); 10];
        let mut b = vec![Vec::new(); 10];
        for _ in 0..20000 {
            let p = sample_invariant(&spec, &mut r).unwrap();
            let q = sample_kostlan(n, d, &mut r);
            for (i, (x, y)) in pairs.iter().enumerate() {
                a[i].push(p.eval(x) * p.eval(y));
                b[i].push(q.eval(x) * q.eval(y));
            }
        }
        for i in 0..10 {
            let (ma, sa) = mean_se(&a[i]);
            let (mb, sb) = mean_se(&b[i]);
            assert!((ma - mb).abs() <= 3.5 * (sa * sa + sb * sb).sqrt(), "pair {i}: {ma} vs {mb}");
        }
    }

    #[test]
    fn goe_moments() {
        let mut r = RngStream::new(8, 0);
        let dets1: Vec<f64> = (0..100_000).map(|_| sample_goe(1, &mut r).0[(0, 0)].abs()).collect();
        assert!(within_3se(&dets1, (2.0 / std::f64::consts::PI).sqrt()));
        let dets2: Vec<f64> = (0..100_000).map(|_| sample_goe(2, &mut r).0.determinant()).collect();
        assert!(within_3se(&dets2, -0.5));
        let off: Vec<f64> = (0..20000).map(|_| sample_goe(3, &mut r).0[(0, 2)].powi(2)).collect();
        assert!(within_3se(&off, 0.5));
        let q = sample_goe(4, &mut r);
        assert_eq!(q.0, q.0.transpose());
    }

    #[test]
    fn goe_quadric_round_trip() {
        let mut r = RngStream::new(9, 0);
        let q = sample_goe(3, &mut r);
        let back = quadric_matrix(&q.to_quadric()).unwrap();
        assert!((back - &q.0).abs().max() < 1e-15);
        assert!((q.to_quadric().bw_norm() - q.0.norm()).abs() < 1e-12);
    }

    #[test]
    fn goe_congruence_invariance() {
        let mut r = RngStream::new(10, 0);
        let g = DMatrix::from_row_slice(3, 3, &sample_rotation(3, &mut r));
        let a: Vec<f64> = (0..5000)
            .map(|_| {
                let q = sample_goe(3, &mut r).0;
                *GoeMatrix(&g * q * g.transpose()).eigenvalues().last().unwrap()
            })
            .collect();
        let b: Vec<f64> = (0..5000)
            .map(|_| *sample_goe(3, &mut r).eigenvalues().last().unwrap())
            .collect();
        assert!(ks_two_sample(&a, &b) < 1.63 * (2.0 / 5000.0f64).sqrt());
    }

    #[test]
    fn goe_semicircle() {
        let m = 50;
        let mut r = RngStream::new(11, 0);
        let mut ev = Vec::new();
        for _ in 0..200 {
            ev.extend(sample_goe(m, &mut r).eigenvalues());
        }
        let rad = (2.0 * m as f64).sqrt();
        let cdf = |x: f64| {
            let x = x.clamp(-rad, rad);
            0.5 + x * (rad * rad - x * x).sqrt() / (std::f64::consts::PI * rad * rad)
                + (x / rad).asin() / std::f64::consts::PI
        };
        assert!(ks_one_sample(&mut ev, cdf) < 0.05);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let mut r = RngStream::new(12, 0);
        let g = DMatrix::from_row_slice(4, 4, &sample_rotation(4, &mut r));
        assert!((&g * g.transpose() - DMatrix::identity(4, 4)).abs().max() < 1e-12);
    }

    #[test]
    fn whole_space_flat_is_orthonormal() {
        let mut r = RngStream::new(13, 0);
        let f = sample_random_flat(2, 2, &mut r).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&f.basis[i], &f.basis[j]) - e).abs() < 1e-12);
            }
        }
        assert!(sample_random_flat(3, 2, &mut r).is_err());
    }

    #[test]
    fn random_points_of_rp2_are_uniform() {
        let mut r = RngStream::new(14, 0);
        let mut z: Vec<f64> = (0..10_000)
            .map(|_| sample_random_flat(0, 2, &mut r).unwrap().basis[0][2])
            .collect();
        assert!(ks_one_sample(&mut z, |t| ((t + 1.0) / 2.0).clamp(0.0, 1.0)) < 1.63 / 100.0);
    }

    #[test]
    fn flat_principal_angle_is_rotation_invariant() {
        let mut r = RngStream::new(15, 0);
        let g = sample_rotation(4, &mut r);
        // first principal angle of a random 2-plane to span{e0, e1}
        let angle = |cols: &[Vec<f64>]| {
            let m = DMatrix::from_fn(2, 2, |i, j| cols[j][i]);
            m.singular_values()[0].min(1.0).acos()
        };
        let a: Vec<f64> = (0..4000)
            .map(|_| angle(&sample_random_flat(1, 3, &mut r).unwrap().basis))
            .collect();
        let b: Vec<f64> = (0..4000)
            .map(|_| {
                let f = sample_random_flat(1, 3, &mut r).unwrap();
                let rotated: Vec<Vec<f64>> = f.basis.iter().map(|c| mat_vec(&g, c)).collect();
                angle(&rotated)
            })
            .collect();
        assert!(ks_two_sample(&a, &b) < 1.63 * (2.0 / 4000.0f64).sqrt());
    }

    #[test]
    fn random_line_meets_an_arc_with_probability_length_over_pi() {
        let mut r = RngStream::new(16, 0);
        let len = 1.1f64;
        let hits: Vec<f64> = (0..20000)
            .map(|_| {
                let f = sample_random_flat(1, 2, &mut r).unwrap();
                let (u, v) = (&f.basis[0], &f.basis[1]);
                // the plane meets the xy great circle along ±(normal × e_z)
                let nrm = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2]];
                let w = [nrm[1], -nrm[0]];
                let mut th = w[1].atan2(w[0]);
                if th < 0.0 {
                    th += std::f64::consts::PI;
                }
                if th < len {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        assert!(within_3se(&hits, len / std::f64::consts::PI));
    }

    #[test]
    fn rescale_factors() {
        for d in [10usize, 100, 1000, 10_000] {
            assert_eq!(rescale_factor(d, 0), 1.0);
            assert_eq!(rescale_factor(d, 1), 1.0);
        }
        assert!((rescale_factor(100, 2) - 0.99f64.sqrt()).abs() < 1e-15);
        for k in 2..5 {
            let s: Vec<f64> = [10usize, 100, 1000, 10_000].iter().map(|&d| rescale_factor(d, k)).collect();
            assert!(s.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
        }
        // oracle: direct factorial ratio through log-gamma
        let d = 10_000;
        let k = 3;
        let direct = (0.5 * (ln_factorial(d) - ln_factorial(d - k) - k as f64 * (d as f64).ln())).exp();
        assert!((rescale_factor(d, k) - direct).abs() < 1e-9);
    }

    #[test]
    fn rescaled_local_shapes() {
        let mut r = RngStream::new(17, 0);
        let c = rescaled_local(2, 100, 2, &mut r).unwrap();
        assert_eq!(c.indices.len(), 6);
        assert_eq!(c.indices[3], vec![2, 0]);
        assert!((c.limit_sd[3] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((c.limit_sd[4] - 1.0).abs() < 1e-15);
        assert!(rescaled_local(3, 10, 2, &mut r).is_err());
    }

    #[test]
    fn bad_specs_are_rejected() {
        let spec = EnsembleSpec {
            n: 1,
            d: 4,
            weights: BTreeMap::from([(4, 1.0), (2, 0.0)]),
        };
        let mut r = RngStream::new(0, 0);
        assert!(matches!(sample_invariant(&spec, &mut r), Err(Error::Degenerate(_))));
        assert!(EnsembleSpec::new(1, 4, BTreeMap::from([(3, 1.0)])).is_err());
    }
}
