//! Real-root counting: exact Sturm sequences over the rationals, a certified
//! floating-point counter for binary forms, and a resultant oracle for
//! pairs of ternary forms.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polycore::{AffinePoly, HomogeneousPoly};

/// Univariate polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Degenerate(format!("non-finite coefficient {x}")))
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    /// Promotes float coefficients exactly.
    pub fn from_f64(coeffs: &[f64]) -> Result<Self> {
        Ok(Self::new(coeffs.iter().map(|&c| rational(c)).collect::<Result<_>>()?))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplicity of the root at zero.
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    fn to_int(&self) -> IntPoly {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }
}

/// Integer polynomial used inside Sturm chains (positive rescaling keeps signs).
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("non-zero polynomial")
    }

    fn primitive(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let g = self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_one() {
            return self;
        }
        IntPoly(self.0.into_iter().map(|c| c / &g).collect())
    }

    fn derivative(&self) -> Self {
        IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Pseudo-remainder `lc(b)^{δ+1} a mod b`.
    fn prem(&self, b: &Self) -> Self {
        let mut r = self.0.clone();
        let db = b.degree();
        let lb = b.lead().clone();
        if r.len() < b.0.len() {
            return IntPoly::new(r);
        }
        let steps = r.len() - b.0.len() + 1;
        for s in 0..steps {
            let top = r.len() - 1 - s;
            let lr = r[top].clone();
            for c in r.iter_mut().take(top + 1) {
                *c *= &lb;
            }
            if !lr.is_zero() {
                let shift = top - db;
                for (j, bc) in b.0.iter().enumerate() {
                    r[shift + j] -= &lr * bc;
                }
            }
        }
        r.truncate(db);
        IntPoly::new(r)
    }

    /// Sign of `p(u/v)` for `v > 0`.
    fn sign_at(&self, u: &BigInt, v: &BigInt) -> Sign {
        if self.is_zero() {
            return Sign::NoSign;
        }
        let mut acc = self.lead().clone();
        let mut vp = BigInt::one();
        for c in self.0.iter().rev().skip(1) {
            vp *= v;
            acc = acc * u + c * &vp;
        }
        acc.sign()
    }

    /// Sign of `p` just to the right of `u/v`.
    fn sign_right_of(&self, u: &BigInt, v: &BigInt) -> Sign {
        let mut q = self.clone();
        while !q.is_zero() {
            let s = q.sign_at(u, v);
            if s != Sign::NoSign {
                return s;
            }
            q = q.derivative();
        }
        Sign::NoSign
    }

    fn sign_at_pos_inf(&self) -> Sign {
        if self.is_zero() {
            Sign::NoSign
        } else {
            self.lead().sign()
        }
    }

    fn sign_at_neg_inf(&self) -> Sign {
        let s = self.sign_at_pos_inf();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }
}

fn variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::NoSign;
    let mut v = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Signed remainder sequence `p, p′, −rem, …`, each term scaled by a
/// positive factor to stay integral and primitive.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &RationalPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Degenerate("Sturm chain of the zero polynomial".into()));
        }
        let p0 = p.to_int();
        let p1 = p0.derivative().primitive();
        let mut polys = vec![p0];
        if !p1.is_zero() {
            polys.push(p1);
        }
        while polys.len() >= 2 {
            let a = &polys[polys.len() - 2];
            let b = &polys[polys.len() - 1];
            let r = a.prem(b);
            if r.is_zero() {
                break;
            }
            // prem carries lc(b)^{δ+1}; undo its sign, then negate
            let delta = a.degree() - b.degree();
            let flip = b.lead().is_negative() && delta % 2 == 0;
            let r = if flip { r } else { IntPoly(r.0.into_iter().map(|c| -c).collect()) };
            polys.push(r.primitive());
        }
        Ok(SturmChain { polys })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Degree of the last element, i.e. of `gcd(p, p′)`.
    pub fn gcd_degree(&self) -> usize {
        self.polys.last().map(IntPoly::degree).unwrap_or(0)
    }

    fn var_right_of(&self, x: &BigRational) -> usize {
        let (u, v) = (x.numer().clone(), x.denom().clone());
        variations(self.polys.iter().map(|p| p.sign_right_of(&u, &v)))
    }

    fn var_neg_inf(&self) -> usize {
        variations(self.polys.iter().map(IntPoly::sign_at_neg_inf))
    }

    fn var_pos_inf(&self) -> usize {
        variations(self.polys.iter().map(IntPoly::sign_at_pos_inf))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b {
            return 0;
        }
        self.var_right_of(a).saturating_sub(self.var_right_of(b))
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.var_neg_inf().saturating_sub(self.var_pos_inf())
    }
}

/// Number of distinct real roots of `p` in `(a, b]`, exactly.
pub fn sturm_count(p: &RationalPoly, a: &BigRational, b: &BigRational) -> Result<usize> {
    Ok(SturmChain::new(p)?.count(a, b))
}

/// Number of distinct real roots of `p`, exactly.
pub fn sturm_count_all(p: &RationalPoly) -> Result<usize> {
    Ok(SturmChain::new(p)?.count_all())
}

fn cauchy_bound(p: &RationalPoly) -> BigRational {
    let lead = p.coeffs.last().expect("non-zero").abs();
    let max = p.coeffs.iter().fold(BigRational::zero(), |m, c| {
        let q = c.abs() / &lead;
        if q > m {
            q
        } else {
            m
        }
    });
    BigRational::from_integer((max.ceil().to_integer()) + 1)
}

/// Disjoint intervals `(a, b]`, each holding exactly one distinct real root,
/// refined until `b − a ≤ max_width`.
pub fn isolate_real_roots(p: &RationalPoly, max_width: f64) -> Result<Vec<(BigRational, BigRational)>> {
    let chain = SturmChain::new(p)?;
    let bound = cauchy_bound(p);
    let width = rational(max_width)?;
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let c = chain.count(&a, &b);
        if c == 0 {
            continue;
        }
        if c == 1 && &b - &a <= width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / &two;
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort();
    Ok(out)
}

fn check_binary(b: &HomogeneousPoly) -> Result<()> {
    if b.n() != 1 {
        return Err(Error::Dimension(format!("binary form expected, got n = {}", b.n())));
    }
    if b.is_zero() {
        return Err(Error::Degenerate("zero form has every point as a root".into()));
    }
    Ok(())
}

/// Coefficients `a_j` of `x₀^{d−j} x₁^j`.
fn binary_coeffs(b: &HomogeneousPoly) -> Vec<f64> {
    let d = b.d() as u32;
    (0..=d).map(|j| b.coeff(&[d - j, j])).collect()
}

/// Number of distinct zeros of a binary form in `RP¹`.
///
/// Tries the certified floating-point counter first and falls back to exact
/// Sturm sequences when certification fails (multiple or clustered roots).
pub fn count_projective_roots(b: &HomogeneousPoly) -> Result<usize> {
    check_binary(b)?;
    match certified_count(b) {
        Some(c) => Ok(c),
        None => count_projective_roots_exact(b),
    }
}

/// Exact count: real roots of `b(1, y)` plus the point `[0:1]` when `x₀ | b`.
pub fn count_projective_roots_exact(b: &HomogeneousPoly) -> Result<usize> {
    check_binary(b)?;
    let a = binary_coeffs(b);
    let at_infinity = usize::from(a[a.len() - 1] == 0.0);
    let p = RationalPoly::from_f64(&a)?;
    Ok(sturm_count_all(&p)? + at_infinity)
}

/// Certified count of the zeros of `f(θ) = b(cos θ, sin θ)` on `[0, π)`,
/// or `None` when the interval bounds cannot separate the roots.
///
/// Uses the reproducing-kernel bounds `|f′| ≤ √d ‖b‖_BW` and
/// `|f″| ≤ (d(3d−2))^{1/2} ‖b‖_BW` together with a forward error bound
/// for every evaluation.
pub fn certified_count(b: &HomogeneousPoly) -> Option<usize> {
    let d = b.d();
    if d == 0 {
        return Some(0);
    }
    let a = binary_coeffs(b);
    let norm = b.bw_norm() * (1.0 + 1e-12);
    let df = d as f64;
    let m1 = df.sqrt() * norm;
    let m2 = (df * (3.0 * df - 2.0)).sqrt() * norm;
    let u = f64::EPSILON;
    let gamma = (3.0 * df + 30.0) * u;
    let mut cp = vec![0.0; d + 2];
    let mut sp = vec![0.0; d + 2];
    let mut eval = |theta: f64| -> Sample {
        let (s, c) = theta.sin_cos();
        cp[0] = 1.0;
        sp[0] = 1.0;
        for k in 1..=d + 1 {
            cp[k] = cp[k - 1] * c;
            sp[k] = sp[k - 1] * s;
        }
        let (mut f, mut sf, mut g, mut sg) = (0.0, 0.0, 0.0, 0.0);
        for (j, &aj) in a.iter().enumerate() {
            let t = aj * cp[d - j] * sp[j];
            f += t;
            sf += t.abs();
            // d/dθ of c^{d−j} s^j
            let mut dt = 0.0;
            let mut adt = 0.0;
            if j < d {
                let v = (d - j) as f64 * cp[d - j - 1] * sp[j + 1];
                dt -= v;
                adt += v.abs();
            }
            if j > 0 {
                let v = j as f64 * cp[d - j + 1] * sp[j - 1];
                dt += v;
                adt += v.abs();
            }
            g += aj * dt;
            sg += aj.abs() * adt;
        }
        Sample {
            f,
            ef: gamma * sf + 4.0 * u * m1,
            g,
            eg: gamma * sg + 4.0 * u * m2,
        }
    };
    let n0 = (4 * d).max(8);
    let pi = std::f64::consts::PI;
    let start = eval(0.0);
    // a root at [1:0] (or within rounding of θ = π) is not certifiable
    if start.f.abs() <= start.ef + 1e-15 * m1 {
        return None;
    }
    let grid: Vec<f64> = (0..=n0).map(|i| pi * i as f64 / n0 as f64).collect();
    let mut samples: Vec<Sample> = grid.iter().map(|&t| eval(t)).collect();
    samples[0] = start;
    let mut stack: Vec<(f64, f64, Sample, Sample)> = (0..n0)
        .rev()
        .map(|i| (grid[i], grid[i + 1], samples[i], samples[i + 1]))
        .collect();
    let mut roots = 0usize;
    let mut work = 0usize;
    while let Some((ta, tb, sa, sb)) = stack.pop() {
        work += 1;
        if work > 200_000 {
            return None;
        }
        let h = tb - ta;
        let ha = sa.f.abs() - sa.ef;
        let hb = sb.f.abs() - sb.ef;
        if ha > 0.0 && hb > 0.0 {
            if ha + hb > m1 * h {
                continue;
            }
            // f monotone on the cell: one root iff the signs differ
            let ga = sa.g.abs() - sa.eg;
            let gb = sb.g.abs() - sb.eg;
            if ga > 0.0 && gb > 0.0 && (sa.g > 0.0) == (sb.g > 0.0) && ga + gb > m2 * h {
                if (sa.f > 0.0) != (sb.f > 0.0) {
                    roots += 1;
                }
                continue;
            }
        }
        if h < 1e-9 {
            return None;
        }
        let tm = 0.5 * (ta + tb);
        let sm = eval(tm);
        stack.push((tm, tb, sm, sb));
        stack.push((ta, tm, sa, sm));
    }
    Some(roots)
}

#[derive(Clone, Copy, Debug)]
struct Sample {
    f: f64,
    ef: f64,
    g: f64,
    eg: f64,
}

// ----- resultants -----

/// Affine polynomial in `(y₁, y₂)` with exact coefficients, stored as
/// `coef[i][j]` for `y₁^i y₂^j`.
#[derive(Clone, Debug)]
struct Bivariate {
    coef: Vec<Vec<BigRational>>,
}

impl Bivariate {
    fn from_affine(f: &AffinePoly) -> Result<Self> {
        if f.nvars != 2 {
            return Err(Error::Dimension(format!("bivariate polynomial expected, got {} variables", f.nvars)));
        }
        let d1 = f.terms.iter().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
        let d2 = f.terms.iter().map(|(e, _)| e[1] as usize).max().unwrap_or(0);
        let mut coef = vec![vec![BigRational::zero(); d2 + 1]; d1 + 1];
        for (e, c) in &f.terms {
            coef[e[0] as usize][e[1] as usize] += rational(*c)?;
        }
        Ok(Bivariate { coef })
    }

    /// Drops common powers of `y₁` and `y₂`.
    fn shift_to_torus(&mut self) {
        while self.coef.len() > 1 && self.coef[0].iter().all(Zero::is_zero) {
            self.coef.remove(0);
        }
        loop {
            let col_zero = self.coef.iter().all(|row| row.first().map_or(true, Zero::is_zero));
            let width = self.coef.iter().map(Vec::len).max().unwrap_or(0);
            if !col_zero || width <= 1 {
                break;
            }
            for row in &mut self.coef {
                if !row.is_empty() {
                    row.remove(0);
                }
            }
        }
    }

    /// Formal degree in `y₂`.
    fn deg_y2(&self) -> usize {
        let mut best = 0;
        for row in &self.coef {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    best = best.max(j);
                }
            }
        }
        best
    }

    fn deg_y1(&self) -> usize {
        self.coef
            .iter()
            .enumerate()
            .filter(|(_, row)| row.iter().any(|c| !c.is_zero()))
            .map(|(i, _)| i)
            .max()
            .unwrap_or(0)
    }

    /// Coefficients in `y₂` at `y₁ = t`.
    fn slice_y1(&self, t: &BigRational) -> Vec<BigRational> {
        let m = self.deg_y2();
        (0..=m)
            .map(|j| {
                self.coef
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, row| acc * t + row.get(j).cloned().unwrap_or_else(BigRational::zero))
            })
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.coef.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let v = &factor * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Sylvester resultant of two univariate polynomials with formal degrees
/// `a.len() − 1`, `b.len() − 1` (coefficients lowest first).
fn sylvester(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut rows = vec![vec![BigRational::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    determinant(rows)
}

/// Newton interpolation through `(0, v₀), (1, v₁), …`, returned in the monomial basis.
fn interpolate(values: &[BigRational]) -> RationalPoly {
    let n = values.len();
    let mut dd = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(k));
        }
    }
    // Horner on the Newton form Σ dd[k] Π_{i<k} (t − i)
    let mut poly = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // poly ← poly·(t − k) + dd[k]
        let kk = BigRational::from_integer(BigInt::from(k));
        let mut next = vec![BigRational::zero(); n];
        for i in 0..n {
            if poly[i].is_zero() {
                continue;
            }
            if i + 1 < n {
                next[i + 1] += &poly[i];
            }
            next[i] -= &poly[i] * &kk;
        }
        next[0] += &dd[k];
        poly = next;
    }
    RationalPoly::new(poly)
}

fn resultant_y2(f1: &Bivariate, f2: &Bivariate) -> Result<RationalPoly> {
    if f1.is_zero() || f2.is_zero() {
        return Err(Error::Degenerate("zero polynomial in a system".into()));
    }
    let (m1, m2) = (f1.deg_y2(), f2.deg_y2());
    let bound = m2 * f1.deg_y1() + m1 * f2.deg_y1();
    let values: Vec<BigRational> = (0..=bound)
        .map(|t| {
            let t = BigRational::from_integer(BigInt::from(t));
            sylvester(&f1.slice_y1(&t), &f2.slice_y1(&t))
        })
        .collect();
    let r = interpolate(&values);
    if r.is_zero() {
        return Err(Error::CommonComponent);
    }
    Ok(r)
}

/// Resultant in `y₂` of the affine restrictions of two ternary forms to the
/// chart `x₀ = 1`, as a polynomial in `y₁ = x₁/x₀`.
pub fn resultant_chart0(p1: &HomogeneousPoly, p2: &HomogeneousPoly) -> Result<RationalPoly> {
    check_ternary(p1)?;
    check_ternary(p2)?;
    let f1 = Bivariate::from_affine(&p1.dehomogenize(0)?)?;
    let f2 = Bivariate::from_affine(&p2.dehomogenize(0)?)?;
    resultant_y2(&f1, &f2)
}

fn check_ternary(p: &HomogeneousPoly) -> Result<()> {
    if p.n() != 2 {
        return Err(Error::Dimension(format!("ternary form expected, got n = {}", p.n())));
    }
    Ok(())
}

/// Relative residual below which a lifted root is accepted.
pub const LIFT_TOLERANCE: f64 = 1e-6;
/// Width of the isolating intervals used for back-substitution.
pub const ISOLATION_WIDTH: f64 = 1e-12;

/// `(complex_count, real_count)` for the system `p₁ = p₂ = 0` in `P²`.
pub fn resultant_system(p1: &HomogeneousPoly, p2: &HomogeneousPoly) -> Result<(usize, usize)> {
    check_ternary(p1)?;
    check_ternary(p2)?;
    let a1 = p1.dehomogenize(0)?;
    let a2 = p2.dehomogenize(0)?;
    let f1 = Bivariate::from_affine(&a1)?;
    let f2 = Bivariate::from_affine(&a2)?;
    let r = resultant_y2(&f1, &f2)?;
    let complex = r.degree().unwrap_or(0);
    let mut real = 0;
    for (lo, hi) in isolate_real_roots(&r, ISOLATION_WIDTH)? {
        let y1 = (&lo + &hi) / BigRational::from_integer(2.into());
        if lifts(&f1, &a2, &y1)? || lifts(&f2, &a1, &y1)? {
            real += 1;
        }
    }
    Ok((complex, real))
}

/// Does `y₁` extend to a real root of `f` at which `g` also vanishes?
fn lifts(f: &Bivariate, g: &AffinePoly, y1: &BigRational) -> Result<bool> {
    let slice = RationalPoly::new(f.slice_y1(y1));
    if slice.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let y1f = y1.to_f64().unwrap_or(f64::NAN);
    for (lo, hi) in isolate_real_roots(&slice, ISOLATION_WIDTH)? {
        let y2 = ((&lo + &hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
        let pt = [y1f, y2];
        let scale: f64 = g
            .terms
            .iter()
            .map(|(e, c)| (c * pt[0].powi(e[0] as i32) * pt[1].powi(e[1] as i32)).abs())
            .sum();
        if g.eval(&pt).abs() <= LIFT_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of solutions in the torus `(C*)²` of two affine polynomials in
/// `(y₁, y₂)`, counted with multiplicity, read off the resultant.
pub fn torus_root_count(f1: &AffinePoly, f2: &AffinePoly) -> Result<usize> {
    let mut b1 = Bivariate::from_affine(f1)?;
    let mut b2 = Bivariate::from_affine(f2)?;
    b1.shift_to_torus();
    b2.shift_to_torus();
    let r = resultant_y2(&b1, &b2)?;
    Ok(r.degree().unwrap_or(0) - r.order_at_zero())
}
