//! Dense real homogeneous polynomials in `n + 1` variables.
//!
//! Coefficients live in the plain monomial basis `x^α`; Bombieri–Weyl weights
//! `d!/α!` are applied on demand. Monomials of degree `d` are stored in
//! colexicographic order (most significant exponent is the last variable),
//! see [`MonomialBasis::rank`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Below this degree factorial ratios are computed with exact integers.
const EXACT_FACTORIAL_MAX: usize = 20;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of monomials of degree `d` in `n + 1` variables, `C(n + d, d)`.
pub fn monomial_count(n: usize, d: usize) -> usize {
    binomial((n + d) as u64, d as u64) as usize
}

pub fn ln_factorial(k: usize) -> f64 {
    statrs::function::gamma::ln_gamma(k as f64 + 1.0)
}

/// Multinomial coefficient `d!/(α₀!⋯αₙ!)` as a float.
pub fn multinomial(alpha: &[u32]) -> f64 {
    let d: usize = alpha.iter().map(|&a| a as usize).sum();
    if d <= EXACT_FACTORIAL_MAX {
        let fact = |k: usize| (1..=k as u64).product::<u64>();
        let denom: u64 = alpha.iter().map(|&a| fact(a as usize)).product();
        (fact(d) / denom) as f64
    } else {
        let ln = ln_factorial(d) - alpha.iter().map(|&a| ln_factorial(a as usize)).sum::<f64>();
        ln.exp()
    }
}

/// Enumeration of the exponent vectors of degree `d` in `n + 1` variables.
#[derive(Debug)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    exps: Vec<u32>,
    bw: Vec<f64>,
}

impl MonomialBasis {
    fn build(n: usize, d: usize) -> Self {
        let m = n + 1;
        let len = monomial_count(n, d);
        let mut exps = vec![0u32; len * m];
        let mut alpha = vec![0u32; m];
        let mut filled = 0usize;
        fill(&mut alpha, 1, d as u32, &mut |a: &[u32]| {
            let r = rank_of(n, d, a);
            exps[r * m..(r + 1) * m].copy_from_slice(a);
            filled += 1;
        });
        debug_assert_eq!(filled, len);
        let bw = exps.chunks(m).map(multinomial).collect();
        MonomialBasis { n, d, exps, bw }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.bw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bw.is_empty()
    }

    /// Exponent vector of the monomial with the given rank.
    pub fn exponents(&self, rank: usize) -> &[u32] {
        let m = self.n + 1;
        &self.exps[rank * m..(rank + 1) * m]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.chunks(self.n + 1)
    }

    /// Colexicographic rank of `alpha` (which must have `|α| = d`).
    pub fn rank(&self, alpha: &[u32]) -> usize {
        rank_of(self.n, self.d, alpha)
    }

    /// Squared Bombieri–Weyl weight `d!/α!` of the monomial at `rank`.
    pub fn bw_weight_sq(&self, rank: usize) -> f64 {
        self.bw[rank]
    }
}

fn fill(alpha: &mut [u32], idx: usize, remaining: u32, f: &mut dyn FnMut(&[u32])) {
    if idx == alpha.len() {
        alpha[0] = remaining;
        f(alpha);
        return;
    }
    for a in 0..=remaining {
        alpha[idx] = a;
        fill(alpha, idx + 1, remaining - a, f);
    }
    alpha[idx] = 0;
}

fn rank_of(n: usize, d: usize, alpha: &[u32]) -> usize {
    let mut r = d as u64;
    let mut rank = 0u64;
    for j in (1..=n).rev() {
        let a = alpha[j] as u64;
        let j64 = j as u64;
        rank += binomial(r + j64, j64) - binomial(r - a + j64, j64);
        r -= a;
    }
    rank as usize
}

/// Shared, cached monomial basis for `(n, d)`.
pub fn basis(n: usize, d: usize) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Arc<MonomialBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().expect("basis cache poisoned").get(&(n, d)) {
        return b.clone();
    }
    let built = Arc::new(MonomialBasis::build(n, d));
    cache
        .write()
        .expect("basis cache poisoned")
        .entry((n, d))
        .or_insert(built)
        .clone()
}

/// A real homogeneous polynomial of degree `d` in the variables `x₀, …, xₙ`.
#[derive(Clone)]
pub struct HomogeneousPoly {
    basis: Arc<MonomialBasis>,
    coeffs: Vec<f64>,
}

impl PartialEq for HomogeneousPoly {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.d() == other.d() && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPoly(n={}, d={}) ", self.n(), self.d())?;
        f.debug_list()
            .entries(self.terms().filter(|(_, c)| *c != 0.0))
            .finish()
    }
}

impl HomogeneousPoly {
    pub fn zero(n: usize, d: usize) -> Self {
        let basis = basis(n, d);
        let coeffs = vec![0.0; basis.len()];
        HomogeneousPoly { basis, coeffs }
    }

    /// Builds a polynomial from coefficients in rank order.
    pub fn from_coeffs(n: usize, d: usize, coeffs: Vec<f64>) -> Result<Self> {
        let basis = basis(n, d);
        if coeffs.len() != basis.len() {
            return Err(Error::Dimension(format!(
                "expected {} coefficients for (n={n}, d={d}), got {}",
                basis.len(),
                coeffs.len()
            )));
        }
        Ok(HomogeneousPoly { basis, coeffs })
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms(n: usize, d: usize, terms: &[(Vec<u32>, f64)]) -> Result<Self> {
        let mut p = Self::zero(n, d);
        for (alpha, c) in terms {
            check_exponents(n, d, alpha)?;
            let r = p.basis.rank(alpha);
            p.coeffs[r] += c;
        }
        Ok(p)
    }

    pub fn monomial(alpha: &[u32]) -> Self {
        let n = alpha.len() - 1;
        let d = alpha.iter().sum::<u32>() as usize;
        let mut p = Self::zero(n, d);
        let r = p.basis.rank(alpha);
        p.coeffs[r] = 1.0;
        p
    }

    /// The linear form `Σ aᵢ xᵢ`.
    pub fn linear(a: &[f64]) -> Self {
        let n = a.len() - 1;
        let mut p = Self::zero(n, 1);
        for (i, &ai) in a.iter().enumerate() {
            let mut alpha = vec![0u32; n + 1];
            alpha[i] = 1;
            let r = p.basis.rank(&alpha);
            p.coeffs[r] = ai;
        }
        p
    }

    /// `‖x‖² = x₀² + ⋯ + xₙ²`.
    pub fn norm_sq(n: usize) -> Self {
        let mut p = Self::zero(n, 2);
        for i in 0..=n {
            let mut alpha = vec![0u32; n + 1];
            alpha[i] = 2;
            let r = p.basis.rank(&alpha);
            p.coeffs[r] = 1.0;
        }
        p
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn d(&self) -> usize {
        self.basis.d
    }

    pub fn num_vars(&self) -> usize {
        self.basis.n + 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, alpha: &[u32]) -> f64 {
        self.coeffs[self.basis.rank(alpha)]
    }

    pub fn set_coeff(&mut self, alpha: &[u32], c: f64) {
        let r = self.basis.rank(alpha);
        self.coeffs[r] = c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.basis.iter().zip(self.coeffs.iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.d() != other.d() {
            return Err(Error::Dimension(format!(
                "(n={}, d={}) vs (n={}, d={})",
                self.n(),
                self.d(),
                other.n(),
                other.d()
            )));
        }
        Ok(())
    }

    /// Bombieri–Weyl inner product `Σ p_α q_α α!/d!`.
    pub fn bw_inner(&self, other: &Self) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(&self.basis.bw)
            .map(|((a, b), w)| a * b / w)
            .sum())
    }

    pub fn bw_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.basis.bw)
            .map(|(a, w)| a * a / w)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = a * *c + b * o;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpby(1.0, other, -1.0)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "cannot multiply polynomials in {} and {} variables",
                self.num_vars(),
                other.num_vars()
            )));
        }
        let m = self.num_vars();
        let mut out = Self::zero(self.n(), self.d() + other.d());
        let mut sum = vec![0u32; m];
        for (a, ca) in self.terms() {
            if ca == 0.0 {
                continue;
            }
            for (b, cb) in other.terms() {
                if cb == 0.0 {
                    continue;
                }
                for i in 0..m {
                    sum[i] = a[i] + b[i];
                }
                let r = out.basis.rank(&sum);
                out.coeffs[r] += ca * cb;
            }
        }
        Ok(out)
    }

    /// `‖x‖^{2s} · self`.
    pub fn mul_norm_sq_pow(&self, s: usize) -> Self {
        let r2 = Self::norm_sq(self.n());
        let mut out = self.clone();
        for _ in 0..s {
            out = out.mul(&r2).expect("same variable count");
        }
        out
    }

    fn powers(&self, x: &[f64], extra: usize) -> Vec<Vec<f64>> {
        let d = self.d();
        x.iter()
            .map(|&xi| {
                let mut pw = Vec::with_capacity(d + 1 + extra);
                let mut acc = 1.0;
                for _ in 0..=d {
                    pw.push(acc);
                    acc *= xi;
                }
                pw
            })
            .collect()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.num_vars());
        let pw = self.powers(x, 0);
        self.terms()
            .map(|(a, c)| {
                if c == 0.0 {
                    return 0.0;
                }
                a.iter()
                    .enumerate()
                    .fold(c, |acc, (i, &ai)| acc * pw[i][ai as usize])
            })
            .sum()
    }

    /// Value and gradient at `x`.
    pub fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let m = self.num_vars();
        debug_assert_eq!(x.len(), m);
        let pw = self.powers(x, 0);
        let mut val = 0.0;
        let mut grad = vec![0.0; m];
        let mut f = vec![0.0; m];
        let mut df = vec![0.0; m];
        for (a, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            for i in 0..m {
                let ai = a[i] as usize;
                f[i] = pw[i][ai];
                df[i] = if ai == 0 { 0.0 } else { ai as f64 * pw[i][ai - 1] };
            }
            val += c * f.iter().product::<f64>();
            for i in 0..m {
                if df[i] == 0.0 {
                    continue;
                }
                let mut t = c * df[i];
                for (j, fj) in f.iter().enumerate() {
                    if j != i {
                        t *= fj;
                    }
                }
                grad[i] += t;
            }
        }
        (val, grad)
    }

    /// Value, gradient and Hessian (row-major `m × m`) at `x`.
    pub fn eval_hessian(&self, x: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let m = self.num_vars();
        let pw = self.powers(x, 0);
        let mut val = 0.0;
        let mut grad = vec![0.0; m];
        let mut hess = vec![0.0; m * m];
        let mut f = vec![0.0; m];
        let mut df = vec![0.0; m];
        let mut ddf = vec![0.0; m];
        for (a, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            for i in 0..m {
                let ai = a[i] as usize;
                f[i] = pw[i][ai];
                df[i] = if ai >= 1 { ai as f64 * pw[i][ai - 1] } else { 0.0 };
                ddf[i] = if ai >= 2 {
                    (ai * (ai - 1)) as f64 * pw[i][ai - 2]
                } else {
                    0.0
                };
            }
            let prod_except = |skip1: usize, skip2: usize| -> f64 {
                f.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip1 && *k != skip2)
                    .map(|(_, v)| *v)
                    .product()
            };
            val += c * f.iter().product::<f64>();
            for i in 0..m {
                if df[i] != 0.0 {
                    grad[i] += c * df[i] * prod_except(i, i);
                }
                if ddf[i] != 0.0 {
                    hess[i * m + i] += c * ddf[i] * prod_except(i, i);
                }
                for j in (i + 1)..m {
                    if df[i] != 0.0 && df[j] != 0.0 {
                        let t = c * df[i] * df[j] * prod_except(i, j);
                        hess[i * m + j] += t;
                        hess[j * m + i] += t;
                    }
                }
            }
        }
        (val, grad, hess)
    }

    /// Partial derivative with respect to `x_var`, a polynomial of degree `d − 1`.
    pub fn partial(&self, var: usize) -> Self {
        let d = self.d();
        assert!(d >= 1, "derivative of a constant form");
        let mut out = Self::zero(self.n(), d - 1);
        let mut b = vec![0u32; self.num_vars()];
        for (a, c) in self.terms() {
            if c == 0.0 || a[var] == 0 {
                continue;
            }
            b.copy_from_slice(a);
            b[var] -= 1;
            let r = out.basis.rank(&b);
            out.coeffs[r] += c * a[var] as f64;
        }
        out
    }

    /// Euclidean Laplacian, a polynomial of degree `d − 2` (zero form when `d < 2`).
    pub fn laplacian(&self) -> Self {
        let n = self.n();
        let d = self.d();
        if d < 2 {
            return Self::zero(n, 0);
        }
        let mut out = Self::zero(n, d - 2);
        let mut b = vec![0u32; n + 1];
        for (a, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            for i in 0..=n {
                if a[i] >= 2 {
                    b.copy_from_slice(a);
                    b[i] -= 2;
                    let r = out.basis.rank(&b);
                    out.coeffs[r] += c * (a[i] * (a[i] - 1)) as f64;
                }
            }
        }
        out
    }

    /// `x ↦ p(g x)` for a square matrix `g` (row-major), by exact expansion
    /// into products of linear forms.
    pub fn compose_linear(&self, g: &[f64]) -> Result<Self> {
        let m = self.num_vars();
        if g.len() != m * m {
            return Err(Error::Dimension(format!(
                "matrix has {} entries, expected {}",
                g.len(),
                m * m
            )));
        }
        let d = self.d();
        let n = self.n();
        // powers[i][k] = (row_i · x)^k
        let mut powers: Vec<Vec<HomogeneousPoly>> = Vec::with_capacity(m);
        for i in 0..m {
            let lin = Self::linear(&g[i * m..(i + 1) * m]);
            let mut pw = vec![Self::monomial(&vec![0u32; m])];
            for k in 1..=d {
                let next = pw[k - 1].mul(&lin)?;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Self::zero(n, d);
        for (a, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            let mut term = powers[0][a[0] as usize].scale(c);
            for i in 1..m {
                term = term.mul(&powers[i][a[i] as usize])?;
            }
            for (o, t) in out.coeffs.iter_mut().zip(term.coeffs) {
                *o += t;
            }
        }
        Ok(out)
    }

    /// Restriction to the affine chart `x_chart = 1`.
    pub fn dehomogenize(&self, chart: usize) -> Result<AffinePoly> {
        let m = self.num_vars();
        if chart >= m {
            return Err(Error::InvalidChart { chart, vars: m });
        }
        let terms = self
            .terms()
            .filter(|(_, c)| *c != 0.0)
            .map(|(a, c)| {
                let e: Vec<u32> = a
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != chart)
                    .map(|(_, &v)| v)
                    .collect();
                (e, c)
            })
            .collect();
        Ok(AffinePoly {
            nvars: self.n(),
            terms,
        })
    }
}

fn check_exponents(n: usize, d: usize, alpha: &[u32]) -> Result<()> {
    if alpha.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "multi-index has {} entries, expected {}",
            alpha.len(),
            n + 1
        )));
    }
    let s: u32 = alpha.iter().sum();
    if s as usize != d {
        return Err(Error::Dimension(format!(
            "multi-index {alpha:?} has degree {s}, expected {d}"
        )));
    }
    Ok(())
}

/// An affine polynomial in `nvars` variables, as produced by
/// [`HomogeneousPoly::dehomogenize`].
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePoly {
    pub nvars: usize,
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl AffinePoly {
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(e, _)| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(y)
                    .fold(*c, |acc, (&k, &yi)| acc * yi.powi(k as i32))
            })
            .sum()
    }

    /// Coefficients `c₀ + c₁y + ⋯` of a polynomial in one variable.
    pub fn univariate(&self) -> Result<Vec<f64>> {
        if self.nvars != 1 {
            return Err(Error::Dimension(format!(
                "univariate view needs one variable, have {}",
                self.nvars
            )));
        }
        let deg = self.degree();
        let mut out = vec![0.0; deg + 1];
        for (e, c) in &self.terms {
            if *c != 0.0 {
                out[e[0] as usize] += c;
            }
        }
        Ok(out)
    }

    /// Inverse of [`HomogeneousPoly::dehomogenize`] at degree `d`.
    pub fn homogenize(&self, d: usize, chart: usize) -> Result<HomogeneousPoly> {
        let n = self.nvars;
        if chart > n {
            return Err(Error::InvalidChart { chart, vars: n + 1 });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let k: u32 = e.iter().sum();
            if k as usize > d {
                return Err(Error::Dimension(format!(
                    "affine term of degree {k} exceeds d = {d}"
                )));
            }
            let mut alpha = Vec::with_capacity(n + 1);
            alpha.extend_from_slice(&e[..chart]);
            alpha.push(d as u32 - k);
            alpha.extend_from_slice(&e[chart..]);
            terms.push((alpha, *c));
        }
        HomogeneousPoly::from_terms(n, d, &terms)
    }
}

/// The Kostlan–Veronese map `x ↦ (σ_α(x))_{|α|=d}`, `σ_α(x) = (d!/α!)^{1/2} x^α`.
pub fn veronese_map(n: usize, d: usize, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            n + 1
        )));
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Normalization { norm });
    }
    Ok(veronese_unchecked(n, d, x))
}

pub(crate) fn veronese_unchecked(n: usize, d: usize, x: &[f64]) -> Vec<f64> {
    let b = basis(n, d);
    (0..b.len())
        .map(|r| {
            let a = b.exponents(r);
            let mono: f64 = a.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
            b.bw_weight_sq(r).sqrt() * mono
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    d: usize,
    coeffs: Vec<Vec<f64>>,
}

impl Serialize for HomogeneousPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .terms()
            .filter(|(_, c)| *c != 0.0)
            .map(|(a, c)| {
                let mut row: Vec<f64> = a.iter().map(|&k| k as f64).collect();
                row.push(c);
                row
            })
            .collect();
        PolyJson {
            n: self.n(),
            d: self.d(),
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(de)?;
        let mut terms = Vec::with_capacity(raw.coeffs.len());
        for row in &raw.coeffs {
            if row.len() != raw.n + 2 {
                return Err(D::Error::custom(format!(
                    "coefficient row {row:?} must have n + 2 = {} entries",
                    raw.n + 2
                )));
            }
            let (exps, c) = row.split_at(raw.n + 1);
            let mut alpha = Vec::with_capacity(exps.len());
            for &e in exps {
                if e < 0.0 || e.fract() != 0.0 || e > u32::MAX as f64 {
                    return Err(D::Error::custom(format!("bad exponent {e}")));
                }
                alpha.push(e as u32);
            }
            terms.push((alpha, c[0]));
        }
        HomogeneousPoly::from_terms(raw.n, raw.d, &terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rand_poly(n: usize, d: usize, seed: u64) -> HomogeneousPoly {
        let mut s = seed;
        let coeffs = (0..monomial_count(n, d))
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect();
        HomogeneousPoly::from_coeffs(n, d, coeffs).unwrap()
    }

    #[test]
    fn rank_is_a_bijection() {
        for n in 1..=3 {
            for d in 0..=9 {
                let b = basis(n, d);
                for r in 0..b.len() {
                    assert_eq!(b.rank(b.exponents(r)), r);
                    assert_eq!(b.exponents(r).iter().sum::<u32>() as usize, d);
                }
            }
        }
    }

    #[test]
    fn bw_weights_sum_to_multinomial_total() {
        for (n, d) in [(1, 5), (2, 7), (3, 4), (2, 25)] {
            let b = basis(n, d);
            let s: f64 = (0..b.len()).map(|r| b.bw_weight_sq(r)).sum();
            let expect = ((n + 1) as f64).powi(d as i32);
            assert!((s - expect).abs() <= 1e-9 * expect, "{n} {d}: {s} vs {expect}");
        }
    }

    #[test]
    fn bw_inner_examples() {
        let x0sq = HomogeneousPoly::monomial(&[2, 0]);
        let x0x1 = HomogeneousPoly::monomial(&[1, 1]);
        assert_eq!(x0sq.bw_inner(&x0sq).unwrap(), 1.0);
        assert_eq!(x0x1.bw_inner(&x0x1).unwrap(), 0.5);
        assert_eq!(x0sq.bw_inner(&x0x1).unwrap(), 0.0);
        let x0d = HomogeneousPoly::monomial(&[7, 0, 0]);
        assert_eq!(x0d.bw_inner(&x0d).unwrap(), 1.0);
        let other = HomogeneousPoly::monomial(&[1, 0]);
        assert!(matches!(x0sq.bw_inner(&other), Err(Error::Dimension(_))));
    }

    #[test]
    fn eval_grad_examples() {
        let p = HomogeneousPoly::from_terms(1, 2, &[(vec![2, 0], 1.0), (vec![0, 2], -1.0)]).unwrap();
        let (v, g) = p.eval_grad(&[1.0, 1.0]);
        assert_eq!(v, 0.0);
        assert_eq!(g, vec![2.0, -2.0]);
        let q = HomogeneousPoly::monomial(&[1, 1]);
        let (v, g) = q.eval_grad(&[3.0, 2.0]);
        assert_eq!(v, 6.0);
        assert_eq!(g, vec![2.0, 3.0]);
    }

    #[test]
    fn gradient_matches_central_differences() {
        for t in 0..100u64 {
            let n = 1 + (t % 3) as usize;
            let d = 1 + (t % 7) as usize;
            let p = rand_poly(n, d, t + 11);
            let x: Vec<f64> = rand_poly(n, 1, t + 1000).coeffs().to_vec();
            let (_, g) = p.eval_grad(&x);
            let h = 1e-5;
            let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3);
            for i in 0..=n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (p.eval(&xp) - p.eval(&xm)) / (2.0 * h);
                assert!((fd - g[i]).abs() <= 1e-6 * scale, "case {t}: {fd} vs {}", g[i]);
            }
        }
    }

    #[test]
    fn hessian_matches_gradient_differences() {
        let p = rand_poly(2, 6, 5);
        let x = [0.3, -0.7, 0.4];
        let (_, _, h) = p.eval_hessian(&x);
        let eps = 1e-6;
        for j in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += eps;
            xm[j] -= eps;
            let (_, gp) = p.eval_grad(&xp);
            let (_, gm) = p.eval_grad(&xm);
            for i in 0..3 {
                let fd = (gp[i] - gm[i]) / (2.0 * eps);
                assert!((fd - h[i * 3 + j]).abs() < 1e-6 * (1.0 + fd.abs()));
            }
        }
    }

    #[test]
    fn dehomogenize_examples() {
        let p = HomogeneousPoly::from_terms(1, 2, &[(vec![2, 0], 1.0), (vec![0, 2], -1.0)]).unwrap();
        assert_eq!(p.dehomogenize(0).unwrap().univariate().unwrap(), vec![1.0, 0.0, -1.0]);
        let q = HomogeneousPoly::monomial(&[0, 5]);
        assert_eq!(
            q.dehomogenize(0).unwrap().univariate().unwrap(),
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
        );
        assert!(matches!(p.dehomogenize(2), Err(Error::InvalidChart { .. })));
    }

    #[test]
    fn dehomogenize_round_trip() {
        for t in 0..100u64 {
            let n = 1 + (t % 2) as usize;
            let d = (t % 6) as usize;
            let mut p = rand_poly(n, d, t);
            if t % 3 == 0 {
                // kill the pure x_n^d term so the affine degree drops
                let mut a = vec![0u32; n + 1];
                a[n] = d as u32;
                p.set_coeff(&a, 0.0);
            }
            let aff = p.dehomogenize(0).unwrap();
            let mut top = vec![0u32; n + 1];
            top[n] = d as u32;
            let has_top_degree = p
                .terms()
                .any(|(a, c)| a[0] == 0 && c != 0.0);
            assert_eq!(aff.degree() == d, has_top_degree || d == 0, "case {t}");
            assert_eq!(aff.homogenize(d, 0).unwrap(), p);
        }
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese_map(1, 2, &[1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let (c, s) = (0.6f64, 0.8f64);
        let v = veronese_map(1, 2, &[c, s]).unwrap();
        let expect = [c * c, 2f64.sqrt() * c * s, s * s];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(
            veronese_map(1, 2, &[1.0, 1.0]),
            Err(Error::Normalization { .. })
        ));
    }

    #[test]
    fn veronese_is_a_dilation_by_sqrt_d() {
        for d in [1usize, 3, 10, 25] {
            let x = [0.48, 0.6, 0.64];
            let v = [0.8, 0.0, -0.6];
            let h = 1e-5f64;
            let plus: Vec<f64> = (0..3).map(|i| x[i] * h.cos() + v[i] * h.sin()).collect();
            let minus: Vec<f64> = (0..3).map(|i| x[i] * h.cos() - v[i] * h.sin()).collect();
            let a = veronese_map(2, d, &plus).unwrap();
            let b = veronese_map(2, d, &minus).unwrap();
            let speed = a.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt() / (2.0 * h);
            assert!((speed - (d as f64).sqrt()).abs() < 1e-6, "d={d}: {speed}");
        }
    }

    #[test]
    fn compose_with_rotation_preserves_bw_norm() {
        let c = 0.6f64;
        let s = 0.8f64;
        #[rustfmt::skip]
        let g = [
            c, -s, 0.0, 0.0,
            s, c, 0.0, 0.0,
            0.0, 0.0, c, s,
            0.0, 0.0, -s, c,
        ];
        for d in [1usize, 4, 10] {
            let p = rand_poly(3, d, d as u64);
            let q = p.compose_linear(&g).unwrap();
            let (a, b) = (p.bw_norm(), q.bw_norm());
            assert!((a - b).abs() <= 1e-8 * a);
            let x = [0.1, 0.2, -0.3, 0.5];
            let gx: Vec<f64> = (0..4).map(|i| (0..4).map(|j| g[i * 4 + j] * x[j]).sum()).collect();
            assert!((q.eval(&x) - p.eval(&gx)).abs() < 1e-10 * (1.0 + p.eval(&gx).abs()));
        }
    }

    #[test]
    fn json_round_trip() {
        let p = rand_poly(2, 3, 9);
        let s = serde_json::to_string(&p).unwrap();
        let q: HomogeneousPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let bad = r#"{"n":1,"d":2,"coeffs":[[1,0,3.0]]}"#;
        assert!(serde_json::from_str::<HomogeneousPoly>(bad).is_err());
    }

    proptest! {
        #[test]
        fn bw_inner_is_bilinear_symmetric_positive(
            seed in 0u64..10_000, a in -3.0f64..3.0, b in -3.0f64..3.0, n in 1usize..4, d in 0usize..7
        ) {
            let p = rand_poly(n, d, seed);
            let q = rand_poly(n, d, seed + 1);
            let r = rand_poly(n, d, seed + 2);
            let lhs = p.axpby(a, &q, b).unwrap().bw_inner(&r).unwrap();
            let rhs = a * p.bw_inner(&r).unwrap() + b * q.bw_inner(&r).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
            prop_assert!((p.bw_inner(&q).unwrap() - q.bw_inner(&p).unwrap()).abs() <= 1e-14);
            prop_assert!(p.bw_inner(&p).unwrap() > 0.0);
        }

        #[test]
        fn euler_identity_and_homogeneity(seed in 0u64..10_000, lam in 0.2f64..3.0, n in 1usize..4, d in 1usize..9) {
            let p = rand_poly(n, d, seed);
            let x: Vec<f64> = rand_poly(n, 1, seed + 7).coeffs().to_vec();
            let (v, g) = p.eval_grad(&x);
            let euler: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
            let scale = 1.0 + v.abs() * d as f64 + g.iter().zip(&x).map(|(a, b)| (a * b).abs()).sum::<f64>();
            prop_assert!((euler - d as f64 * v).abs() <= 1e-9 * scale);
            let lx: Vec<f64> = x.iter().map(|t| t * lam).collect();
            let lv = p.eval(&lx);
            prop_assert!((lv - lam.powi(d as i32) * v).abs() <= 1e-9 * (1.0 + lv.abs()));
        }

        #[test]
        fn veronese_has_unit_norm(seed in 0u64..10_000, d in 0usize..30) {
            let raw: Vec<f64> = rand_poly(2, 1, seed).coeffs().to_vec();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let x: Vec<f64> = raw.iter().map(|v| v / norm).collect();
            let v = veronese_unchecked(2, d, &x);
            let s = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }
    }
}
