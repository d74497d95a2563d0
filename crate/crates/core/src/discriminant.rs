//! Bombieri–Weyl distance to the discriminant.
//!
//! `dist(p, Σ) = min_{x ∈ Sⁿ} F(x)`, `F = (p² + ‖∇_T p‖²/d)^{1/2}`. On the
//! sphere `‖∇_T p‖² = ‖∇p‖² − d²p²`, so `F² = ‖∇p‖²/d − (d−1)p²`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::curvetop::{arc, normalize3, SphericalMesh, Vec3};
use crate::ensembles::{quadric_matrix, sample_kostlan, RngStream};
use crate::error::{Error, Result};
use crate::harmonic::truncate;
use crate::lab::{replicate, ExperimentReport, Table};
use crate::polycore::{monomial_count, HomogeneousPoly};
use crate::stats::compensated_sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    Empirical,
    Certified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    pub minimizer: Vec<f64>,
    pub mode: DistanceMode,
    /// Certified mode only.
    pub certified_lower_bound: Option<f64>,
    /// Lipschitz constant of `F` used for certification.
    pub lipschitz: Option<f64>,
    /// Grid cells examined by the certifier.
    pub cells: usize,
    pub starts_converged: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    pub starts: usize,
    pub seed: u64,
    /// Certified cells are pruned once their bound reaches this fraction of
    /// the best value.
    pub prune_fraction: f64,
    pub max_cells: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            starts: 200,
            seed: 0x5241_4646,
            prune_fraction: 0.9,
            max_cells: 4_000_000,
        }
    }
}

/// `F(x)` at a unit vector.
pub fn raffalli_objective(p: &HomogeneousPoly, x: &[f64]) -> f64 {
    g_value(p, x).max(0.0).sqrt()
}

/// Cheap upper bound on the distance: the smallest `F` over a fixed point set
/// (a circle grid for `n = 1`, icosphere vertices of the given level for `n = 2`).
pub fn distance_upper_bound(p: &HomogeneousPoly, level: usize) -> Result<f64> {
    let best = match p.n() {
        1 => {
            let m = (16 * p.d().max(1)) << level.min(8);
            (0..m)
                .map(|i| {
                    let t = PI * i as f64 / m as f64;
                    raffalli_objective(p, &[t.cos(), t.sin()])
                })
                .fold(f64::INFINITY, f64::min)
        }
        2 => crate::curvetop::mesh(level, 0)
            .vertices
            .iter()
            .map(|v| raffalli_objective(p, v))
            .fold(f64::INFINITY, f64::min),
        n => return Err(Error::Unsupported(format!("distance upper bound for n = {n}"))),
    };
    Ok(best)
}

fn g_value(p: &HomogeneousPoly, x: &[f64]) -> f64 {
    let d = p.d() as f64;
    let (v, g) = p.eval_grad(x);
    let gn: f64 = g.iter().map(|a| a * a).sum();
    let radial: f64 = g.iter().zip(x).map(|(a, b)| a * b).sum();
    let tangential = (gn - radial * radial).max(0.0);
    v * v + if d > 0.0 { tangential / d } else { 0.0 }
}

/// `G` and its Riemannian gradient at a unit vector.
fn g_and_grad(p: &HomogeneousPoly, x: &[f64]) -> (f64, Vec<f64>) {
    let m = x.len();
    let d = p.d() as f64;
    let (v, g, h) = p.eval_hessian(x);
    let gv = g_value(p, x);
    // ∇G̃ = (2/d) H∇p − 2(d−1) p ∇p
    let mut grad = vec![0.0; m];
    for i in 0..m {
        let hg: f64 = (0..m).map(|j| h[i * m + j] * g[j]).sum();
        grad[i] = 2.0 / d * hg - 2.0 * (d - 1.0) * v * g[i];
    }
    let r: f64 = grad.iter().zip(x).map(|(a, b)| a * b).sum();
    grad.iter_mut().zip(x).for_each(|(a, b)| *a -= r * b);
    (gv, grad)
}

/// Lipschitz constant of `F` along geodesics of `Sⁿ`, from the
/// reproducing-kernel norms of the first and second derivatives of `p`.
pub fn lipschitz_bound(p: &HomogeneousPoly) -> f64 {
    let (n, d) = (p.n() as f64, p.d() as f64);
    (2.0 * d + 1.0 + (n + 1.0) * (d - 1.0)).sqrt() * p.bw_norm()
}

fn normalize(x: &mut [f64]) {
    let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    x.iter_mut().for_each(|a| *a /= nx);
}

/// Orthonormal basis of `x^⊥`.
fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let m = x.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    let mut frame = vec![x.to_vec()];
    for k in 0..m {
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        for _ in 0..2 {
            for f in &frame {
                let t: f64 = v.iter().zip(f).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(f).for_each(|(a, b)| *a -= t * b);
            }
        }
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nv > 0.5 {
            v.iter_mut().for_each(|a| *a /= nv);
            frame.push(v.clone());
            out.push(v);
        }
        if out.len() == m - 1 {
            break;
        }
    }
    out
}

fn retract(x: &[f64], basis: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let mut z = x.to_vec();
    for (b, &c) in basis.iter().zip(y) {
        z.iter_mut().zip(b).for_each(|(a, bb)| *a += c * bb);
    }
    normalize(&mut z);
    z
}

/// Gradient of `y ↦ G(R_x(y))` in tangent coordinates.
fn coord_grad(p: &HomogeneousPoly, x: &[f64], basis: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let z = retract(x, basis, y);
    let (_, g) = g_and_grad(p, &z);
    let mut raw = x.to_vec();
    for (b, &c) in basis.iter().zip(y) {
        raw.iter_mut().zip(b).for_each(|(a, bb)| *a += c * bb);
    }
    let scale = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    // g is tangent at z, so (I − z zᵀ) drops out
    basis.iter().map(|b| b.iter().zip(&g).map(|(u, v)| u * v).sum::<f64>() / scale).collect()
}

/// Saddle-free Newton descent of `G` from `x0`; returns `(x, G, converged)`.
fn local_minimize(p: &HomogeneousPoly, x0: &[f64]) -> (Vec<f64>, f64, bool) {
    let mut x = x0.to_vec();
    normalize(&mut x);
    let mut gx = g_value(p, &x);
    let k = x.len() - 1;
    let eta = 1e-5;
    for _ in 0..200 {
        let basis = tangent_basis(&x);
        let zero = vec![0.0; k];
        let g0 = coord_grad(p, &x, &basis, &zero);
        let mut hess = DMatrix::zeros(k, k);
        for j in 0..k {
            let mut yp = zero.clone();
            yp[j] = eta;
            let mut ym = zero.clone();
            ym[j] = -eta;
            let gp = coord_grad(p, &x, &basis, &yp);
            let gm = coord_grad(p, &x, &basis, &ym);
            for i in 0..k {
                hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * eta);
            }
        }
        let hess = (&hess + hess.transpose()) * 0.5;
        let eig = SymmetricEigen::new(hess);
        let floor = 1e-10 * eig.eigenvalues.amax().max(1e-300);
        let gvec = DVector::from_vec(g0.clone());
        let mut step = DVector::zeros(k);
        for i in 0..k {
            let q = eig.eigenvectors.column(i);
            let c = q.dot(&gvec) / eig.eigenvalues[i].abs().max(floor);
            step -= q * c;
        }
        // cap the step at a quarter turn
        let sn = step.norm();
        if sn > 0.5 {
            step *= 0.5 / sn;
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-12 {
            let y: Vec<f64> = step.iter().map(|s| s * t).collect();
            let z = retract(&x, &basis, &y);
            let gz = g_value(p, &z);
            if gz <= gx {
                let moved = t * step.norm();
                x = z;
                gx = gz;
                accepted = true;
                if moved < 1e-12 {
                    return (x, gx, true);
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // no descent left at working precision
            return (x, gx, true);
        }
    }
    (x, gx, false)
}

pub fn raffalli_distance(p: &HomogeneousPoly, mode: DistanceMode) -> Result<DistanceResult> {
    raffalli_distance_with(p, mode, DistanceOptions::default())
}

pub fn raffalli_distance_with(p: &HomogeneousPoly, mode: DistanceMode, opts: DistanceOptions) -> Result<DistanceResult> {
    if p.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    if p.d() == 0 {
        return Err(Error::Degenerate("constants have no zero set".into()));
    }
    match mode {
        DistanceMode::Empirical => empirical(p, opts),
        DistanceMode::Certified => certified(p, opts),
    }
}

fn empirical(p: &HomogeneousPoly, opts: DistanceOptions) -> Result<DistanceResult> {
    let mut rng = RngStream::new(opts.seed, 0);
    let m = p.num_vars();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut converged = 0;
    for _ in 0..opts.starts {
        let x0 = rng.unit_vector(m);
        let (x, g, ok) = local_minimize(p, &x0);
        if !ok {
            continue;
        }
        converged += 1;
        if best.as_ref().is_none_or(|b| g < b.1) {
            best = Some((x, g));
        }
    }
    let (x, g) = best.ok_or_else(|| Error::Optimization(format!("none of {} starts converged", opts.starts)))?;
    Ok(DistanceResult {
        value: g.max(0.0).sqrt(),
        minimizer: x,
        mode: DistanceMode::Empirical,
        certified_lower_bound: None,
        lipschitz: None,
        cells: 0,
        starts_converged: converged,
    })
}

/// Branch and bound over a cover of the sphere by geodesic cells; a cell
/// whose vertices have values `F(v_i)` and which lies within `r_i` of `v_i`
/// satisfies `F ≥ F(v_i) − L r_i` on it.
fn certified(p: &HomogeneousPoly, opts: DistanceOptions) -> Result<DistanceResult> {
    let lip = lipschitz_bound(p);
    let (mut best_x, mut best_f, lower, cells) = match p.n() {
        1 => certify_circle(p, lip, opts)?,
        2 => certify_sphere(p, lip, opts)?,
        n => {
            return Err(Error::Unsupported(format!(
                "certified distance is implemented for n ≤ 2, got n = {n}"
            )))
        }
    };
    let (x, g, _) = local_minimize(p, &best_x);
    if g.sqrt() < best_f {
        best_f = g.max(0.0).sqrt();
        best_x = x;
    }
    Ok(DistanceResult {
        value: best_f,
        minimizer: best_x,
        mode: DistanceMode::Certified,
        certified_lower_bound: Some(lower.min(best_f).max(0.0)),
        lipschitz: Some(lip),
        cells,
        starts_converged: 0,
    })
}

type Certified = (Vec<f64>, f64, f64, usize);

fn certify_circle(p: &HomogeneousPoly, lip: f64, opts: DistanceOptions) -> Result<Certified> {
    let f = |t: f64| raffalli_objective(p, &[t.cos(), t.sin()]);
    let floor = 1e-15 * p.bw_norm();
    // F(−x) = F(x): half a turn suffices
    let init = 64;
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut best = (0.0, f(0.0));
    for i in 0..init {
        let a = PI * i as f64 / init as f64;
        let b = PI * (i + 1) as f64 / init as f64;
        let (fa, fb) = (f(a), f(b));
        for (t, v) in [(a, fa), (b, fb)] {
            if v < best.1 {
                best = (t, v);
            }
        }
        stack.push((a, b, fa, fb));
    }
    let mut lower = f64::INFINITY;
    let mut cells = 0;
    while let Some((a, b, fa, fb)) = stack.pop() {
        cells += 1;
        if best.1 <= floor {
            lower = 0.0;
            break;
        }
        if cells > opts.max_cells {
            return Err(Error::Precision(format!("certification exceeded {} cells", opts.max_cells)));
        }
        let lb = 0.5 * (fa + fb - lip * (b - a));
        if lb >= opts.prune_fraction * best.1 {
            lower = lower.min(lb);
            continue;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm < best.1 {
            best = (m, fm);
        }
        stack.push((a, m, fa, fm));
        stack.push((m, b, fm, fb));
    }
    Ok((vec![best.0.cos(), best.0.sin()], best.1, lower, cells))
}

fn certify_sphere(p: &HomogeneousPoly, lip: f64, opts: DistanceOptions) -> Result<Certified> {
    let f = |x: &Vec3| raffalli_objective(p, x);
    let floor = 1e-15 * p.bw_norm();
    let base = SphericalMesh::build(1, 0);
    type Cell = ([Vec3; 3], [f64; 3]);
    let vals: Vec<f64> = base.vertices.iter().map(f).collect();
    let mut best = (base.vertices[0], vals[0]);
    for (v, &fv) in base.vertices.iter().zip(&vals) {
        if fv < best.1 {
            best = (*v, fv);
        }
    }
    let mut stack: Vec<Cell> = base
        .triangles
        .iter()
        .map(|t| {
            (
                [0, 1, 2].map(|k| base.vertices[t[k] as usize]),
                [0, 1, 2].map(|k| vals[t[k] as usize]),
            )
        })
        .collect();
    let mut lower = f64::INFINITY;
    let mut cells = 0;
    while let Some((v, fv)) = stack.pop() {
        cells += 1;
        if best.1 <= floor {
            lower = 0.0;
            break;
        }
        if cells > opts.max_cells {
            return Err(Error::Precision(format!("certification exceeded {} cells", opts.max_cells)));
        }
        let e = [arc(&v[0], &v[1]), arc(&v[1], &v[2]), arc(&v[2], &v[0])];
        let radius = [e[0].max(e[2]), e[0].max(e[1]), e[1].max(e[2])];
        let lb = (0..3).map(|i| fv[i] - lip * radius[i]).fold(f64::NEG_INFINITY, f64::max);
        if lb >= opts.prune_fraction * best.1 {
            lower = lower.min(lb);
            continue;
        }
        let mid = |a: &Vec3, b: &Vec3| normalize3([a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
        let (m01, m12, m20) = (mid(&v[0], &v[1]), mid(&v[1], &v[2]), mid(&v[2], &v[0]));
        let (f01, f12, f20) = (f(&m01), f(&m12), f(&m20));
        for (x, fx) in [(m01, f01), (m12, f12), (m20, f20)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
        stack.push(([v[0], m01, m20], [fv[0], f01, f20]));
        stack.push(([v[1], m12, m01], [fv[1], f12, f01]));
        stack.push(([v[2], m20, m12], [fv[2], f20, f12]));
        stack.push(([m01, m12, m20], [f01, f12, f20]));
    }
    Ok((best.0.to_vec(), best.1, lower, cells))
}

/// `min |λ(Q)|` for `p(x) = ⟨x, Qx⟩`.
pub fn quadric_distance_oracle(p: &HomogeneousPoly) -> Result<f64> {
    let q = quadric_matrix(p)?;
    Ok(q.symmetric_eigenvalues().iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationCertificate {
    pub holds: bool,
    /// `√2 ‖p − τ_ℓ p‖_BW`.
    pub lhs: f64,
    /// Certified lower bound on `dist(p, Σ)`.
    pub rhs: f64,
}

/// `√2‖p − τ_ℓ p‖_BW < dist(p, Σ)` keeps the segment from `p` to `τ_ℓ p` off
/// the discriminant, so both zero sets are isotopic.
pub fn truncation_certificate(p: &HomogeneousPoly, ell: usize) -> Result<TruncationCertificate> {
    let lower = raffalli_distance(p, DistanceMode::Certified)?
        .certified_lower_bound
        .expect("certified mode");
    truncation_certificate_with_bound(p, ell, lower)
}

/// As [`truncation_certificate`], reusing a certified lower bound.
pub fn truncation_certificate_with_bound(p: &HomogeneousPoly, ell: usize, lower: f64) -> Result<TruncationCertificate> {
    let t = truncate(p, ell)?;
    let lhs = 2f64.sqrt() * p.sub(&t)?.bw_norm();
    Ok(TruncationCertificate {
        holds: lhs < lower,
        lhs,
        rhs: lower,
    })
}

/// `D = (n+1)(d−1)ⁿ`, the degree bound used for the complex discriminant.
pub fn discriminant_degree_bound(n: usize, d: usize) -> f64 {
    (n + 1) as f64 * (d as f64 - 1.0).powi(n as i32)
}

/// Largest admissible `t`: `1/((2D+1)N)`, `N = dim P_{n,d}`.
pub fn neighborhood_t_max(n: usize, d: usize) -> f64 {
    let big_d = discriminant_degree_bound(n, d);
    1.0 / ((2.0 * big_d + 1.0) * monomial_count(n, d) as f64)
}

/// Empirical `P{dist(p, Σ) ≤ t‖p‖}` for Kostlan `p` against `4eDNt`.
pub fn neighborhood_probability(
    n: usize,
    d: usize,
    t_grid: &[f64],
    samples: usize,
    rng: &mut RngStream,
) -> Result<ExperimentReport> {
    let t_max = neighborhood_t_max(n, d);
    if let Some(t) = t_grid.iter().find(|&&t| !(0.0..=t_max * (1.0 + 1e-12)).contains(&t)) {
        return Err(Error::param("t", format!("{t} outside [0, {t_max:e}]")));
    }
    let seed = rng.next_u64();
    let mode = if n <= 2 { DistanceMode::Certified } else { DistanceMode::Empirical };
    let ratios = replicate(seed, samples, |r, _| {
        let p = sample_kostlan(n, d, r);
        raffalli_distance(&p, mode).map(|res| res.value / p.bw_norm())
    });
    let discarded = ratios.iter().filter(|r| r.is_err()).count();
    let ratios: Vec<f64> = ratios.into_iter().filter_map(|r| r.ok()).collect();
    let big_d = discriminant_degree_bound(n, d);
    let big_n = monomial_count(n, d) as f64;
    let mut table = Table::new(&["t", "empirical", "se", "bound"]);
    let mut ok = true;
    let count = ratios.len() as f64;
    for &t in t_grid {
        let hits = compensated_sum(ratios.iter().map(|&r| if r <= t { 1.0 } else { 0.0 }));
        let prob = hits / count;
        let se = (prob * (1.0 - prob) / count).sqrt();
        let bound = 4.0 * std::f64::consts::E * big_d * big_n * t;
        ok &= prob <= bound + 3.0 * se;
        table.push(vec![t, prob, se, bound]);
    }
    Ok(ExperimentReport::new("neighborhood", seed)
        .param("n", n)
        .param("d", d)
        .param("samples", samples)
        .param("D", big_d)
        .param("N", big_n)
        .with_values(ratios, discarded)
        .result("t_max", t_max)
        .result("discriminant_degree_note", "D = (n+1)(d-1)^n")
        .check("bound_holds", ok)
        .table("probability", table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvetop::trace_curve;
    use crate::ensembles::{sample_goe, sample_rotation};
    use crate::stats::ks_two_sample;

    fn binary(c: &[(u32, f64)], d: u32) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(1, d as usize, &c.iter().map(|&(a, v)| (vec![d - a, a], v)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let p = binary(&[(0, 1.0), (2, -1.0)], 2);
        for &t in &[0.0f64, 0.3, 1.1] {
            let f = raffalli_objective(&p, &[t.cos(), t.sin()]);
            assert!((f - (1.0 + (2.0 * t).sin().powi(2)).sqrt()).abs() < 1e-14);
        }
        for mode in [DistanceMode::Empirical, DistanceMode::Certified] {
            let r = raffalli_distance(&p, mode).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "{mode:?}");
            assert!(r.minimizer[1].abs() < 1e-6 || r.minimizer[0].abs() < 1e-6);
            let sq = binary(&[(0, 1.0)], 2);
            let z = raffalli_distance(&sq, mode).unwrap();
            assert!(z.value < 1e-12);
        }
        let c = raffalli_distance(&p, DistanceMode::Certified).unwrap();
        let lb = c.certified_lower_bound.unwrap();
        assert!(lb <= c.value && lb >= 0.9 * c.value - 1e-12);
    }

    #[test]
    fn quadric_oracle_examples() {
        let diag = |v: &[f64]| {
            let n = v.len() - 1;
            let terms: Vec<(Vec<u32>, f64)> = (0..=n)
                .map(|i| {
                    let mut a = vec![0u32; n + 1];
                    a[i] = 2;
                    (a, v[i])
                })
                .collect();
            HomogeneousPoly::from_terms(n, 2, &terms).unwrap()
        };
        assert!((quadric_distance_oracle(&diag(&[1.0, -1.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((quadric_distance_oracle(&diag(&[3.0, 2.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!(quadric_distance_oracle(&diag(&[3.0, 0.0, 1.0])).unwrap().abs() < 1e-15);
    }

    #[test]
    fn quadrics_match_eigenvalues() {
        let mut r = RngStream::new(61, 0);
        for i in 0..60 {
            let n = 1 + i % 5;
            let p = sample_goe(n + 1, &mut r).to_quadric();
            let exact = quadric_distance_oracle(&p).unwrap();
            let opts = DistanceOptions {
                starts: 60,
                ..Default::default()
            };
            let e = raffalli_distance_with(&p, DistanceMode::Empirical, opts).unwrap();
            assert!((e.value - exact).abs() <= 1e-8, "n={n}: {} vs {exact}", e.value);
            if n <= 2 {
                let c = raffalli_distance(&p, DistanceMode::Certified).unwrap();
                assert!((c.value - exact).abs() <= 1e-8);
                assert!(c.certified_lower_bound.unwrap() <= exact + 1e-12);
            }
        }
    }

    #[test]
    fn scaling_and_rotation_invariance() {
        let mut r = RngStream::new(62, 0);
        for d in [3usize, 5] {
            let p = sample_kostlan(2, d, &mut r);
            let base = raffalli_distance(&p, DistanceMode::Certified).unwrap().value;
            let c = -2.7;
            let scaled = raffalli_distance(&p.scale(c), DistanceMode::Certified).unwrap().value;
            assert!((scaled - c.abs() * base).abs() <= 1e-10 * scaled);
            let g = sample_rotation(3, &mut r);
            let rot = raffalli_distance(&p.compose_linear(&g).unwrap(), DistanceMode::Certified).unwrap().value;
            assert!((rot - base).abs() < 1e-8);
            let emp = raffalli_distance(&p, DistanceMode::Empirical).unwrap().value;
            assert!((emp - base).abs() < 1e-8);
        }
    }

    #[test]
    fn lipschitz_bound_holds_on_random_pairs() {
        let mut r = RngStream::new(63, 0);
        for n in 1..=3 {
            for d in [1usize, 2, 4, 9] {
                let p = sample_kostlan(n, d, &mut r);
                let lip = lipschitz_bound(&p);
                for _ in 0..200 {
                    let x = r.unit_vector(n + 1);
                    let mut y: Vec<f64> = x.iter().map(|a| a + 0.05 * r.gaussian()).collect();
                    normalize(&mut y);
                    let dist = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0).acos();
                    let df = (raffalli_objective(&p, &x) - raffalli_objective(&p, &y)).abs();
                    assert!(df <= lip * dist * (1.0 + 1e-9) + 1e-14);
                }
            }
        }
    }

    #[test]
    fn certified_bound_is_below_dense_sampling() {
        let mut r = RngStream::new(64, 0);
        for d in [4usize, 8] {
            let p = sample_kostlan(2, d, &mut r);
            let c = raffalli_distance(&p, DistanceMode::Certified).unwrap();
            let lb = c.certified_lower_bound.unwrap();
            let mut dense = f64::INFINITY;
            for _ in 0..20_000 {
                dense = dense.min(raffalli_objective(&p, &r.unit_vector(3)));
            }
            assert!(lb <= dense && c.value <= dense + 1e-12);
            assert!(lb >= 0.9 * c.value - 1e-12);
        }
        assert!(matches!(
            raffalli_distance(&sample_kostlan(3, 2, &mut r), DistanceMode::Certified),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn truncation_trivial_cases() {
        let mut r = RngStream::new(65, 0);
        let q = sample_kostlan(2, 4, &mut r);
        let lifted = crate::harmonic::harmonic_projection(&q).mul_norm_sq_pow(2);
        let c = truncation_certificate(&lifted, 4).unwrap();
        assert!(c.lhs < 1e-12 * lifted.bw_norm());
        let p = sample_kostlan(2, 6, &mut r);
        let c = truncation_certificate(&p, 6).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(c.holds);
        assert!(matches!(truncation_certificate(&p, 3), Err(Error::Parity { .. })));
    }

    #[test]
    fn certified_truncations_preserve_topology() {
        let mut r = RngStream::new(66, 0);
        let d = 12;
        let mut certified = 0;
        let mut last_rate = 0;
        let samples: Vec<HomogeneousPoly> = (0..20).map(|_| sample_kostlan(2, d, &mut r)).collect();
        let lbs: Vec<f64> = samples
            .iter()
            .map(|p| raffalli_distance(p, DistanceMode::Certified).unwrap().certified_lower_bound.unwrap())
            .collect();
        for ell in [4usize, 8, 10, 12] {
            let mut rate = 0;
            for (p, &lb) in samples.iter().zip(&lbs) {
                let c = truncation_certificate_with_bound(p, ell, lb).unwrap();
                if c.holds {
                    rate += 1;
                    let t = truncate(p, ell).unwrap();
                    let a = trace_curve(p, 6).unwrap().b0_rp2();
                    let b = trace_curve(&t, 6).unwrap().b0_rp2();
                    assert_eq!(a, b);
                    certified += 1;
                }
            }
            assert!(rate >= last_rate);
            last_rate = rate;
        }
        assert!(certified > 0);
    }

    #[test]
    fn certificate_holds_near_truncated_forms() {
        // p = ‖x‖^{d−ℓ} q + ε h, so p − τ_ℓ p = ε (h − τ_ℓ h)
        let mut r = RngStream::new(68, 0);
        let (d, ell) = (8, 4);
        let mut held = 0;
        let mut b0s = Vec::new();
        for _ in 0..8 {
            let base = sample_kostlan(2, ell, &mut r).mul_norm_sq_pow((d - ell) / 2);
            let h = sample_kostlan(2, d, &mut r);
            let tail = h.sub(&truncate(&h, ell).unwrap()).unwrap();
            let lb = raffalli_distance(&base, DistanceMode::Certified).unwrap().certified_lower_bound.unwrap();
            let eps = 0.3 * lb / (2f64.sqrt() * tail.bw_norm());
            let p = base.add(&h.scale(eps)).unwrap();
            let c = truncation_certificate(&p, ell).unwrap();
            assert!((c.lhs - 2f64.sqrt() * eps * tail.bw_norm()).abs() < 1e-9 * c.lhs);
            assert!(c.rhs <= distance_upper_bound(&p, 4).unwrap());
            if c.holds {
                held += 1;
                let a = trace_curve(&p, 6).unwrap().b0_rp2();
                let b = trace_curve(&truncate(&p, ell).unwrap(), 6).unwrap().b0_rp2();
                assert_eq!(a, b);
                b0s.push(a);
            }
        }
        assert!(held >= 6, "{held}");
        b0s.dedup();
        assert!(b0s.len() > 1, "all certified samples had the same b0");
    }

    #[test]
    fn upper_bound_brackets_distance() {
        let mut r = RngStream::new(69, 0);
        for n in 1..=2 {
            for d in [3, 6] {
                let p = sample_kostlan(n, d, &mut r);
                let c = raffalli_distance(&p, DistanceMode::Certified).unwrap();
                let u = distance_upper_bound(&p, 4).unwrap();
                assert!(c.certified_lower_bound.unwrap() <= u);
                assert!(c.value <= u * (1.0 + 1e-12));
            }
        }
        assert!(distance_upper_bound(&sample_kostlan(3, 2, &mut r), 2).is_err());
    }

    #[test]
    fn neighborhood_matches_goe_law() {
        // n = 1, d = 2: dist/‖p‖ = min|λ(Q)| / ‖Q‖_F for a 2×2 GOE matrix
        let mut r = RngStream::new(67, 0);
        let t_max = neighborhood_t_max(1, 2);
        assert!((t_max - 1.0 / 15.0).abs() < 1e-15);
        let grid: Vec<f64> = (0..=10).map(|k| t_max * k as f64 / 10.0).collect();
        let rep = neighborhood_probability(1, 2, &grid, 3000, &mut r).unwrap();
        assert!(rep.checks_pass());
        let t = &rep.tables["probability"];
        assert_eq!(t.rows[0][1], 0.0);
        let oracle: Vec<f64> = (0..3000)
            .map(|_| {
                let g = sample_goe(2, &mut r);
                let e = g.eigenvalues();
                e[0].abs().min(e[1].abs()) / g.0.norm()
            })
            .collect();
        assert!(ks_two_sample(&rep.values, &oracle) < 0.05);
        assert!(neighborhood_probability(1, 2, &[1.0], 10, &mut r).is_err());
        assert_eq!(discriminant_degree_bound(2, 4), 27.0);
    }
}
