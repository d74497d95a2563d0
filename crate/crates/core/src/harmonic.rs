//! Spherical-harmonic blocks of homogeneous polynomials, the truncation
//! `τ_ℓ`, and invariant (Sobolev, coherent) scalar products.
//!
//! `L²(Sⁿ)` is always the normalized (probability) measure, so `⟨1,1⟩ = 1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::ensembles::admissible;
use crate::error::{Error, Result};
use crate::polycore::HomogeneousPoly;

/// Degrees above which the block recursion loses too many digits to trust.
pub const PRECISION_DEGREE: usize = 60;

/// `p = Σ_k ‖x‖^{d−k} h_k` with each `h_k` harmonic of degree `k`.
#[derive(Clone, Debug)]
pub struct HarmonicDecomposition {
    pub n: usize,
    pub d: usize,
    pub components: BTreeMap<usize, HomogeneousPoly>,
    /// Set when `d` is past [`PRECISION_DEGREE`].
    pub precision_warning: bool,
}

impl HarmonicDecomposition {
    pub fn reconstruct(&self) -> HomogeneousPoly {
        self.partial_sum(self.d)
    }

    /// `Σ_{k ≤ ℓ} ‖x‖^{d−k} h_k`.
    fn partial_sum(&self, ell: usize) -> HomogeneousPoly {
        let mut out = HomogeneousPoly::zero(self.n, self.d);
        for (&k, h) in self.components.range(..=ell) {
            let lifted = h.mul_norm_sq_pow((self.d - k) / 2);
            out = out.add(&lifted).expect("same space");
        }
        out
    }
}

/// Projection of `p` onto the harmonic forms of the same degree (the top block).
pub fn harmonic_projection(p: &HomogeneousPoly) -> HomogeneousPoly {
    let e = p.d();
    let m = p.num_vars() as f64;
    let mut out = p.clone();
    let mut lap = p.clone();
    let mut c = 1.0;
    for i in 1..=e / 2 {
        lap = lap.laplacian();
        c *= -1.0 / (2.0 * i as f64 * (2.0 * e as f64 + m - 2.0 - 2.0 * i as f64));
        let term = lap.mul_norm_sq_pow(i).scale(c);
        out = out.add(&term).expect("same space");
    }
    out
}

pub fn harmonic_decompose(p: &HomogeneousPoly) -> HarmonicDecomposition {
    let d = p.d();
    let m = p.num_vars() as f64;
    let mut components = BTreeMap::new();
    let mut lap = p.clone();
    for j in 0..=d / 2 {
        if j > 0 {
            lap = lap.laplacian();
        }
        let k = d - 2 * j;
        // Δ^j (‖x‖^{2j} h_k) = Π_s 2s(2s + 2k + m − 2) h_k
        let denom: f64 = (1..=j)
            .map(|s| 2.0 * s as f64 * (2.0 * s as f64 + 2.0 * k as f64 + m - 2.0))
            .product();
        components.insert(k, harmonic_projection(&lap).scale(1.0 / denom));
    }
    HarmonicDecomposition {
        n: p.n(),
        d,
        components,
        precision_warning: d > PRECISION_DEGREE,
    }
}

fn check_parity(d: usize, ell: usize) -> Result<()> {
    if ell > d || (d - ell) % 2 != 0 {
        return Err(Error::Parity { d, ell });
    }
    Ok(())
}

/// `τ_ℓ p`: BW-orthogonal projection onto `‖x‖^{d−ℓ}·P_{n,ℓ}`.
pub fn truncate(p: &HomogeneousPoly, ell: usize) -> Result<HomogeneousPoly> {
    check_parity(p.d(), ell)?;
    if ell == p.d() {
        return Ok(p.clone());
    }
    Ok(harmonic_decompose(p).partial_sum(ell))
}

/// Truncations at several levels sharing one decomposition.
pub fn truncate_many(p: &HomogeneousPoly, ells: &[usize]) -> Result<Vec<HomogeneousPoly>> {
    for &ell in ells {
        check_parity(p.d(), ell)?;
    }
    let dec = harmonic_decompose(p);
    Ok(ells.iter().map(|&ell| dec.partial_sum(ell)).collect())
}

/// Normalized integral of `x^α` over `Sⁿ` (zero unless every exponent is even):
/// `Π (αᵢ − 1)!! / (m (m + 2) ⋯ (m + |α| − 2))` with `m = n + 1`.
pub fn sphere_moment(alpha: &[u32]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let m = alpha.len() as f64;
    let mut num = 1.0;
    for &a in alpha {
        let mut t = 1.0;
        while t < a as f64 {
            num *= t;
            t += 2.0;
        }
    }
    let half: u32 = alpha.iter().sum::<u32>() / 2;
    let den: f64 = (0..half).map(|t| m + 2.0 * t as f64).product();
    num / den
}

fn sphere_moment_exact(alpha: &[u32]) -> BigRational {
    if alpha.iter().any(|a| a % 2 == 1) {
        return BigRational::zero();
    }
    let m = alpha.len() as i64;
    let mut num = BigInt::one();
    for &a in alpha {
        let mut t = 1i64;
        while t < a as i64 {
            num *= t;
            t += 2;
        }
    }
    let half = alpha.iter().sum::<u32>() as i64 / 2;
    let mut den = BigInt::one();
    for t in 0..half {
        den *= m + 2 * t;
    }
    BigRational::new(num, den)
}

/// `⟨p, q⟩_{L²(Sⁿ)}` by exact integration of monomials.
pub fn l2_inner(p: &HomogeneousPoly, q: &HomogeneousPoly) -> Result<f64> {
    if p.n() != q.n() {
        return Err(Error::Dimension("different variable counts".into()));
    }
    let mut s = 0.0;
    let mut sum = vec![0u32; p.num_vars()];
    for (a, ca) in p.terms() {
        if ca == 0.0 {
            continue;
        }
        for (b, cb) in q.terms() {
            if cb == 0.0 {
                continue;
            }
            for i in 0..sum.len() {
                sum[i] = a[i] + b[i];
            }
            s += ca * cb * sphere_moment(&sum);
        }
    }
    Ok(s)
}

/// `Re (x₀ + i x₁)^k`, a harmonic form in any number of variables.
fn reference_harmonic(n: usize, k: usize) -> HomogeneousPoly {
    let mut p = HomogeneousPoly::zero(n, k);
    for j in (0..=k).step_by(2) {
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let mut a = vec![0u32; n + 1];
        a[0] = (k - j) as u32;
        a[1] = j as u32;
        p.set_coeff(&a, sign * crate::polycore::binomial(k as u64, j as u64) as f64);
    }
    p
}

type Cache = Mutex<HashMap<(usize, usize, usize), f64>>;

fn cached(cache: &'static OnceLock<Cache>, key: (usize, usize, usize), f: impl FnOnce() -> f64) -> f64 {
    let map = cache.get_or_init(Default::default);
    let mut guard = map.lock().expect("harmonic cache poisoned");
    *guard.entry(key).or_insert_with(f)
}

/// `‖h‖²_{L²} / ‖h‖²_BW` on the harmonic block `V_{n,k}`: `k! / (2^k (m/2)_k)`
/// with `m = n + 1`.
pub fn l2_bw_ratio(n: usize, k: usize) -> f64 {
    let half_m = (n + 1) as f64 / 2.0;
    (0..k).map(|i| (i + 1) as f64 / (2.0 * (half_m + i as f64))).product()
}

/// [`l2_bw_ratio`] by exact integration of an integer-coefficient harmonic.
/// Exact only while the binomial coefficients stay below `2^53` (`k ≲ 50`).
pub fn l2_bw_ratio_exact(n: usize, k: usize) -> f64 {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, (n, k, 0), || {
        let h = reference_harmonic(n, k);
        let coeff = |c: f64| BigRational::from_integer(BigInt::from(c as i64));
        let terms: Vec<(&[u32], BigRational)> =
            h.terms().filter(|(_, c)| *c != 0.0).map(|(a, c)| (a, coeff(c))).collect();
        let mut l2 = BigRational::zero();
        let mut sum = vec![0u32; n + 1];
        for (a, ca) in &terms {
            for (b, cb) in &terms {
                for i in 0..=n {
                    sum[i] = a[i] + b[i];
                }
                l2 += ca * cb * sphere_moment_exact(&sum);
            }
        }
        let mut bw = BigRational::zero();
        for (a, c) in &terms {
            // ‖x^α‖²_BW = α!/k!
            let mut w = BigRational::one();
            let mut top = k as i64;
            for &ai in a.iter() {
                for j in 1..=ai as i64 {
                    w *= BigRational::new(BigInt::from(j), BigInt::from(top));
                    top -= 1;
                }
            }
            bw += c * c * w;
        }
        (l2 / bw).to_f64().expect("finite ratio")
    })
}

/// `‖‖x‖^{d−k} h‖²_BW / ‖h‖²_BW` for harmonic `h` of degree `k`:
/// `(k!/d!) Π_{i=1}^{j} 2i(2i + 2k + m − 2)`, `d = k + 2j`.
pub fn bw_lift_ratio(n: usize, d: usize, k: usize) -> f64 {
    let m = (n + 1) as f64;
    let kf = k as f64;
    (1..=(d - k) / 2)
        .map(|i| {
            let i = i as f64;
            2.0 * i * (2.0 * i + 2.0 * kf + m - 2.0) / ((kf + 2.0 * i - 1.0) * (kf + 2.0 * i))
        })
        .product()
}

/// [`bw_lift_ratio`] by multiplying out a reference harmonic; small `d` only.
pub fn bw_lift_ratio_direct(n: usize, d: usize, k: usize) -> f64 {
    let h = reference_harmonic(n, k);
    let lifted = h.mul_norm_sq_pow((d - k) / 2);
    (lifted.bw_norm() / h.bw_norm()).powi(2)
}

/// Weight `β_BW(k)` for which the invariant product equals the BW product.
pub fn bw_block_weight(n: usize, d: usize, k: usize) -> f64 {
    bw_lift_ratio(n, d, k) / l2_bw_ratio(n, k)
}

/// `Σ_k β(k) ⟨h_k(p), h_k(q)⟩_{L²}`.
pub fn invariant_inner(p: &HomogeneousPoly, q: &HomogeneousPoly, weights: &BTreeMap<usize, f64>) -> Result<f64> {
    if p.n() != q.n() || p.d() != q.d() {
        return Err(Error::Dimension("invariant product of different spaces".into()));
    }
    for k in admissible(p.d()) {
        match weights.get(&k) {
            Some(w) if *w > 0.0 && w.is_finite() => {}
            Some(w) => return Err(Error::Degenerate(format!("weight β({k}) = {w} is not positive"))),
            None => return Err(Error::Degenerate(format!("missing weight β({k})"))),
        }
    }
    let hp = harmonic_decompose(p);
    let hq = harmonic_decompose(q);
    let mut s = 0.0;
    for (k, a) in &hp.components {
        let b = &hq.components[k];
        s += weights[k] * l2_bw_ratio(p.n(), *k) * a.bw_inner(b)?;
    }
    Ok(s)
}

/// Sobolev weights `β(k) = k^{2q}`, with `β(0) = 1`.
pub fn sobolev_weights(d: usize, q: f64) -> BTreeMap<usize, f64> {
    admissible(d)
        .map(|k| (k, if k == 0 { 1.0 } else { (k as f64).powf(2.0 * q) }))
        .collect()
}

/// A tabulated profile `ψ` together with the scaling exponent `λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentProfile {
    pub lambda: f64,
    /// `(x, ψ(x))` pairs with increasing `x`; linear in between, zero outside.
    pub psi: Vec<(f64, f64)>,
}

impl CoherentProfile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = &self.psi;
        if t.is_empty() || x < t[0].0 || x > t[t.len() - 1].0 {
            return 0.0;
        }
        let i = t.partition_point(|(xi, _)| *xi <= x);
        if i == 0 {
            return t[0].1;
        }
        if i == t.len() {
            return t[t.len() - 1].1;
        }
        let (x0, y0) = t[i - 1];
        let (x1, y1) = t[i];
        if x1 == x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Floor applied to coherent weights, relative to their maximum.
pub const COHERENT_FLOOR: f64 = 1e-12;

/// `β_d(k) = ψ(k/d^λ)/d^λ` for admissible `k`, floored at a small positive value.
///
/// These numbers follow the coherent-family convention, where they scale the
/// variance of each block; [`crate::ensembles::EnsembleSpec::from_block_variances`]
/// turns them into a sampling spec.
pub fn coherent_weights(d: usize, profile: &CoherentProfile) -> Result<BTreeMap<usize, f64>> {
    let lam = profile.lambda;
    if !(lam > 0.0 && lam <= 1.0) {
        return Err(Error::param("lambda", format!("{lam} is not in (0, 1]")));
    }
    if profile.psi.iter().any(|(_, v)| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Degenerate("profile has negative or non-finite values".into()));
    }
    let scale = (d.max(1) as f64).powf(lam);
    let raw: Vec<(usize, f64)> = admissible(d).map(|k| (k, profile.eval(k as f64 / scale) / scale)).collect();
    let max = raw.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::Degenerate("profile vanishes on every admissible degree".into()));
    }
    let floor = max * COHERENT_FLOOR;
    Ok(raw.into_iter().map(|(k, v)| (k, v.max(floor))).collect())
}
