//! Newton polytopes, BKK counts, mixed areas and zonotope (mixed) volumes.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::ensembles::RngStream;
use crate::error::{Error, Result};

pub type Point2 = [i64; 2];

/// Convex hull of a planar lattice support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    /// Hull vertices, counterclockwise, starting from the lowest-leftmost.
    pub vertices: Vec<Point2>,
    /// Twice the area (an integer).
    pub twice_area: i64,
}

fn cross(o: Point2, a: Point2, b: Point2) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl LatticePolytope {
    pub fn area(&self) -> f64 {
        self.twice_area as f64 / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.twice_area == 0
    }

    pub fn translate(&self, t: Point2) -> Self {
        LatticePolytope {
            vertices: self.vertices.iter().map(|v| [v[0] + t[0], v[1] + t[1]]).collect(),
            twice_area: self.twice_area,
        }
    }

    /// Is `p` in the closed polygon?
    pub fn contains(&self, p: Point2) -> bool {
        let n = self.vertices.len();
        match n {
            0 => false,
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, p) == 0
                    && p[0] >= a[0].min(b[0])
                    && p[0] <= a[0].max(b[0])
                    && p[1] >= a[1].min(b[1])
                    && p[1] <= a[1].max(b[1])
            }
            _ => (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0),
        }
    }

    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let pts: Vec<Point2> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| [a[0] + b[0], a[1] + b[1]]))
            .collect();
        newton_polytope(&pts).expect("non-empty")
    }
}

/// Monotone-chain hull and shoelace area.
pub fn newton_polytope(support: &[Point2]) -> Result<LatticePolytope> {
    if support.is_empty() {
        return Err(Error::Degenerate("empty support".into()));
    }
    let mut pts = support.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return Ok(LatticePolytope {
            vertices: pts,
            twice_area: 0,
        });
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let n = lower.len();
    let twice_area: i64 = (0..n)
        .map(|i| {
            let (a, b) = (lower[i], lower[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    Ok(LatticePolytope {
        vertices: lower,
        twice_area: twice_area.abs(),
    })
}

/// `2!·area(P_E)`: the generic number of solutions in `(C*)²` of two
/// polynomials with support `E`.
pub fn bkk_count(support: &[Point2]) -> Result<u64> {
    let p = newton_polytope(support)?;
    if p.is_degenerate() {
        return Err(Error::Degenerate("support is collinear: zero volume".into()));
    }
    Ok(p.twice_area as u64)
}

/// `MV(P, Q) = area(P + Q) − area(P) − area(Q)`, so `MV(P, P) = 2 area(P)`.
pub fn mixed_area(p: &LatticePolytope, q: &LatticePolytope) -> f64 {
    let s = p.minkowski_sum(q);
    (s.twice_area - p.twice_area - q.twice_area) as f64 / 2.0
}

/// The degree-`d` support `{η ≥ 0, Σ η ≤ d}` in `Z^n`.
pub fn simplex_support(n: usize, d: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d as i64, &mut cur, &mut out);
    out
}

/// `|det(v₁ − v₀, …, v_n − v₀)| / n!` for a simplex in `R^n`.
pub fn simplex_volume(vertices: &[Vec<f64>]) -> Result<f64> {
    let n = vertices.len().saturating_sub(1);
    if n == 0 || vertices.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("simplex needs n+1 points in R^n".into()));
    }
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| vertices[j + 1][i] - vertices[0][i]);
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    Ok(m.determinant().abs() / fact)
}

/// Parses a support from a JSON list of integer tuples.
pub fn support_from_json(s: &str) -> Result<Vec<Vec<i64>>> {
    let v: Vec<Vec<i64>> = serde_json::from_str(s)?;
    if let Some(first) = v.first() {
        if v.iter().any(|p| p.len() != first.len()) {
            return Err(Error::Dimension("support points of different lengths".into()));
        }
    }
    Ok(v)
}

pub fn support_2d(points: &[Vec<i64>]) -> Result<Vec<Point2>> {
    points
        .iter()
        .map(|p| match p.as_slice() {
            [a, b] => Ok([*a, *b]),
            _ => Err(Error::Dimension("planar support expected".into())),
        })
        .collect()
}

/// `Σ [0, v_i]` in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Zonotope {
    pub n: usize,
    pub generators: Vec<Vec<f64>>,
}

impl Zonotope {
    pub fn new(n: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Dimension(format!("zonotopes supported for n ≤ 3, got {n}")));
        }
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Dimension("generator of wrong length".into()));
        }
        Ok(Zonotope { n, generators })
    }

    /// `Σ_{n-subsets} |det|`.
    pub fn volume(&self) -> f64 {
        match self.n {
            1 => self.generators.iter().map(|g| g[0].abs()).sum(),
            2 => pair_det_sum(self.generators.iter().map(|g| [g[0], g[1]]).collect()),
            _ => triple_det_sum(&self.generators),
        }
    }

    /// `h(u) = Σ max(0, ⟨u, v_i⟩)`.
    pub fn support_function(&self, u: &[f64]) -> f64 {
        self.generators
            .iter()
            .map(|g| g.iter().zip(u).map(|(a, b)| a * b).sum::<f64>().max(0.0))
            .sum()
    }

    /// Membership by checking every candidate facet normal.
    pub fn contains(&self, x: &[f64]) -> bool {
        let normals = self.facet_normals();
        normals.iter().all(|u| {
            let ux: f64 = u.iter().zip(x).map(|(a, b)| a * b).sum();
            let neg: Vec<f64> = u.iter().map(|a| -a).collect();
            ux <= self.support_function(u) && -ux <= self.support_function(&neg)
        })
    }

    fn facet_normals(&self) -> Vec<Vec<f64>> {
        let g = &self.generators;
        match self.n {
            1 => vec![vec![1.0]],
            2 => g.iter().map(|v| vec![-v[1], v[0]]).collect(),
            _ => {
                let mut out = Vec::new();
                for i in 0..g.len() {
                    for j in i + 1..g.len() {
                        let (a, b) = (&g[i], &g[j]);
                        out.push(vec![
                            a[1] * b[2] - a[2] * b[1],
                            a[2] * b[0] - a[0] * b[2],
                            a[0] * b[1] - a[1] * b[0],
                        ]);
                    }
                }
                out
            }
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![0.0; self.n];
        let mut hi = vec![0.0; self.n];
        for g in &self.generators {
            for i in 0..self.n {
                if g[i] < 0.0 {
                    lo[i] += g[i];
                } else {
                    hi[i] += g[i];
                }
            }
        }
        (lo, hi)
    }
}

/// `Σ_{i<j} |a_i × a_j|` in `O(m log m)`: fold every vector into the upper
/// half-plane, sort by angle, and use prefix sums.
fn pair_det_sum(mut v: Vec<[f64; 2]>) -> f64 {
    for a in v.iter_mut() {
        if a[1] < 0.0 || (a[1] == 0.0 && a[0] < 0.0) {
            *a = [-a[0], -a[1]];
        }
    }
    v.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    let (mut sx, mut sy) = (0.0, 0.0);
    let mut total = 0.0;
    for a in &v {
        total += sx * a[1] - sy * a[0];
        sx += a[0];
        sy += a[1];
    }
    total
}

/// `Σ_{i<j<k} |det(v_i, v_j, v_k)| = Σ_i ‖v_i‖ Σ_{i<j<k} |det₂(π v_j, π v_k)|`
/// with `π` the projection onto `v_i^⊥`.
fn triple_det_sum(g: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for i in 0..g.len() {
        let v = &g[i];
        let nv = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if nv == 0.0 {
            continue;
        }
        let e = [v[0] / nv, v[1] / nv, v[2] / nv];
        // orthonormal basis of e^⊥
        let pivot = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot_pe = pivot[0] * e[0] + pivot[1] * e[1] + pivot[2] * e[2];
        let mut a = [pivot[0] - dot_pe * e[0], pivot[1] - dot_pe * e[1], pivot[2] - dot_pe * e[2]];
        let na = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        a = [a[0] / na, a[1] / na, a[2] / na];
        let b = [e[1] * a[2] - e[2] * a[1], e[2] * a[0] - e[0] * a[2], e[0] * a[1] - e[1] * a[0]];
        let projected: Vec<[f64; 2]> = g[i + 1..]
            .iter()
            .map(|w| {
                [
                    w[0] * a[0] + w[1] * a[1] + w[2] * a[2],
                    w[0] * b[0] + w[1] * b[1] + w[2] * b[2],
                ]
            })
            .collect();
        total += nv * pair_det_sum(projected);
    }
    total
}

fn det(vs: &[&[f64]]) -> f64 {
    match vs.len() {
        1 => vs[0][0],
        2 => vs[0][0] * vs[1][1] - vs[0][1] * vs[1][0],
        _ => {
            let (a, b, c) = (vs[0], vs[1], vs[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
        }
    }
}

/// `MV(Z₁, …, Z_n) = Σ |det(v¹, …, vⁿ)|` over one generator per body, so
/// that `MV(Z, …, Z) = n! vol(Z)`.
pub fn zonotope_mixed_volume(bodies: &[Zonotope]) -> Result<f64> {
    let n = bodies.len();
    if n == 0 || n > 3 || bodies.iter().any(|z| z.n != n) {
        return Err(Error::Dimension("need n zonotopes in R^n with n ≤ 3".into()));
    }
    let mut total = 0.0;
    let mut idx = vec![0usize; n];
    if bodies.iter().any(|z| z.generators.is_empty()) {
        return Ok(0.0);
    }
    loop {
        let vs: Vec<&[f64]> = (0..n).map(|k| bodies[k].generators[idx[k]].as_slice()).collect();
        total += det(&vs).abs();
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < bodies[k].generators.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == n {
                return Ok(total);
            }
        }
    }
}

/// `E|u₁|` for `u` uniform on `S^{n−1}`.
pub fn mean_abs_coordinate(n: usize) -> f64 {
    let nf = n as f64;
    (ln_gamma(nf / 2.0) - ln_gamma((nf + 1.0) / 2.0)).exp() / PI.sqrt()
}

/// Volume of the unit ball of `R^n`.
pub fn ball_volume(n: usize) -> f64 {
    let nf = n as f64;
    (nf / 2.0 * PI.ln() - ln_gamma(nf / 2.0 + 1.0)).exp()
}

/// Volume of `RP^n`, half the volume of the unit sphere `S^n`.
pub fn rp_volume(n: usize) -> f64 {
    let m = (n + 1) as f64;
    (2f64.ln() + m / 2.0 * PI.ln() - ln_gamma(m / 2.0)).exp() / 2.0
}

/// `n! vol(B_n) / (2π)^n`.
pub fn zonoid_lhs(vol_ball: f64, n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    fact * vol_ball / (2.0 * PI).powi(n as i32)
}

/// The unit ball as a zonotope of `m` random segments `λ[−u/2, u/2]`,
/// `λ = 2/(m E|u₁|)`, whose support function tends to `‖x‖`. Generators are
/// returned as `λu` (translation does not change volumes).
pub fn ball_zonotope(n: usize, m: usize, rng: &mut RngStream) -> Result<Zonotope> {
    let lambda = 2.0 / (m as f64 * mean_abs_coordinate(n));
    let gens = (0..m)
        .map(|_| rng.unit_vector(n).into_iter().map(|x| lambda * x).collect())
        .collect();
    Zonotope::new(n, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::AffinePoly;
    use crate::roots1::torus_root_count;
    use proptest::prelude::*;

    fn sq(pts: &[(i64, i64)]) -> Vec<Point2> {
        pts.iter().map(|&(a, b)| [a, b]).collect()
    }

    #[test]
    fn newton_polytope_examples() {
        let p = newton_polytope(&sq(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(p.area(), 0.5);
        for d in 1..=6u32 {
            let s = support_2d(&simplex_support(2, d)).unwrap();
            let p = newton_polytope(&s).unwrap();
            assert_eq!(p.area(), (d * d) as f64 / 2.0);
            assert_eq!(bkk_count(&s).unwrap(), (d * d) as u64);
            let boxed: Vec<Point2> = (0..=d as i64).flat_map(|i| (0..=d as i64).map(move |j| [i, j])).collect();
            assert_eq!(bkk_count(&boxed).unwrap(), 2 * (d * d) as u64);
        }
        assert_eq!(bkk_count(&sq(&[(0, 0), (2, 0), (0, 2)])).unwrap(), 4);
        assert_eq!(bkk_count(&sq(&[(0, 0), (1, 0), (0, 1)])).unwrap(), 1);
        assert!(matches!(bkk_count(&sq(&[(0, 0), (1, 1), (3, 3)])), Err(Error::Degenerate(_))));
        // interior points are not vertices; order is counterclockwise
        let p = newton_polytope(&sq(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)])).unwrap();
        assert_eq!(p.vertices, sq(&[(0, 0), (2, 0), (2, 2), (0, 2)]));
    }

    #[test]
    fn mixed_area_examples() {
        let square = newton_polytope(&sq(&[(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap();
        assert_eq!(mixed_area(&square, &square), 2.0);
        for d1 in 1..=4u32 {
            for d2 in 1..=4u32 {
                let a = newton_polytope(&support_2d(&simplex_support(2, d1)).unwrap()).unwrap();
                let b = newton_polytope(&support_2d(&simplex_support(2, d2)).unwrap()).unwrap();
                assert_eq!(mixed_area(&a, &b), (d1 * d2) as f64);
            }
        }
    }

    #[test]
    fn simplex_volumes_in_three_dimensions() {
        for d in 1..=4 {
            let f = d as f64;
            let v = vec![vec![0.0; 3], vec![f, 0.0, 0.0], vec![0.0, f, 0.0], vec![0.0, 0.0, f]];
            assert!((simplex_volume(&v).unwrap() - f.powi(3) / 6.0).abs() < 1e-12);
            assert_eq!(simplex_support(3, d).len(), ((d + 1) * (d + 2) * (d + 3) / 6) as usize);
        }
    }

    fn random_system(support: &[Point2], r: &mut RngStream) -> (AffinePoly, AffinePoly) {
        let mk = |r: &mut RngStream| AffinePoly {
            nvars: 2,
            terms: support
                .iter()
                .map(|p| (vec![p[0] as u32, p[1] as u32], r.gaussian()))
                .collect(),
        };
        (mk(r), mk(r))
    }

    #[test]
    fn bkk_matches_resultant_on_simplices_and_boxes() {
        let mut r = RngStream::new(51, 0);
        let mut agree = 0;
        for _ in 0..200 {
            let s = support_2d(&simplex_support(2, 3)).unwrap();
            let (f, g) = random_system(&s, &mut r);
            agree += usize::from(torus_root_count(&f, &g).unwrap() == 9);
        }
        assert!(agree >= 198, "{agree}/200");
        let boxed: Vec<Point2> = (0..=2).flat_map(|i| (0..=2).map(move |j| [i, j])).collect();
        for _ in 0..20 {
            let (f, g) = random_system(&boxed, &mut r);
            assert_eq!(torus_root_count(&f, &g).unwrap(), 8);
        }
    }

    #[test]
    fn bkk_matches_resultant_on_random_sparse_supports() {
        let mut r = RngStream::new(52, 0);
        let mut agree = 0;
        let trials = 200;
        for _ in 0..trials {
            let s = loop {
                let k = 3 + (r.next_u64() % 4) as usize;
                let mut pts: Vec<Point2> = (0..k)
                    .map(|_| [(r.next_u64() % 5) as i64, (r.next_u64() % 5) as i64])
                    .collect();
                pts.sort_unstable();
                pts.dedup();
                if newton_polytope(&pts).unwrap().twice_area > 0 {
                    break pts;
                }
            };
            let (f, g) = random_system(&s, &mut r);
            agree += usize::from(torus_root_count(&f, &g).unwrap() as u64 == bkk_count(&s).unwrap());
        }
        assert!(agree * 100 >= 99 * trials, "{agree}/{trials}");
    }

    #[test]
    fn zonotope_examples() {
        let z = Zonotope::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(z.volume(), 1.0);
        assert_eq!(zonotope_mixed_volume(&[z.clone(), z.clone()]).unwrap(), 2.0);
        let square = newton_polytope(&sq(&[(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap();
        assert_eq!(zonotope_mixed_volume(&[z.clone(), z]).unwrap(), mixed_area(&square, &square));
        let z = Zonotope::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!((z.volume() - 3.0).abs() < 1e-15);
        let cube = Zonotope::new(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]).unwrap();
        assert!((cube.volume() - 6.0).abs() < 1e-12);
        assert!((zonotope_mixed_volume(&[cube.clone(), cube.clone(), cube]).unwrap() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn fast_determinant_sums_match_brute_force() {
        let mut r = RngStream::new(53, 0);
        for n in 2..=3 {
            for m in [1usize, 2, 5, 9] {
                let g: Vec<Vec<f64>> = (0..m).map(|_| r.gaussians(n)).collect();
                let z = Zonotope::new(n, g.clone()).unwrap();
                let mut brute = 0.0;
                if n == 2 {
                    for i in 0..m {
                        for j in i + 1..m {
                            brute += det(&[&g[i], &g[j]]).abs();
                        }
                    }
                } else {
                    for i in 0..m {
                        for j in i + 1..m {
                            for k in j + 1..m {
                                brute += det(&[&g[i], &g[j], &g[k]]).abs();
                            }
                        }
                    }
                }
                assert!((z.volume() - brute).abs() < 1e-12 * brute.max(1.0));
                let fact = if n == 2 { 2.0 } else { 6.0 };
                let mv = zonotope_mixed_volume(&vec![z.clone(); n]).unwrap();
                assert!((mv - fact * brute).abs() < 1e-10 * brute.max(1.0));
            }
        }
    }

    #[test]
    fn zonotope_volume_matches_hit_or_miss() {
        let mut r = RngStream::new(54, 0);
        for n in 2..=3 {
            for m in [3usize, 5, 8] {
                let g: Vec<Vec<f64>> = (0..m).map(|_| r.gaussians(n)).collect();
                let z = Zonotope::new(n, g).unwrap();
                let (lo, hi) = z.bounding_box();
                let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
                let samples = 20_000;
                let hits: Vec<f64> = (0..samples)
                    .map(|_| {
                        let x: Vec<f64> = (0..n).map(|i| lo[i] + (hi[i] - lo[i]) * r.uniform()).collect();
                        if z.contains(&x) {
                            box_vol
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let s = crate::stats::summarize(&hits);
                assert!((s.mean - z.volume()).abs() < 3.0 * s.se, "n={n} m={m}: {} ± {} vs {}", s.mean, s.se, z.volume());
            }
        }
    }

    #[test]
    fn zonoid_identity() {
        for n in 1..=3 {
            let lhs = zonoid_lhs(ball_volume(n), n);
            assert!((lhs - 1.0 / rp_volume(n)).abs() < 1e-9);
        }
        assert!((rp_volume(1) - PI).abs() < 1e-12);
        assert!((rp_volume(2) - 2.0 * PI).abs() < 1e-12);
        assert!((rp_volume(3) - PI * PI).abs() < 1e-12);
        assert!((mean_abs_coordinate(2) - 2.0 / PI).abs() < 1e-14);
        assert!((mean_abs_coordinate(3) - 0.5).abs() < 1e-14);
        let mut r = RngStream::new(55, 0);
        for n in 1..=3 {
            let z = ball_zonotope(n, 2000, &mut r).unwrap();
            let lhs = zonoid_lhs(z.volume(), n);
            let rel = (lhs * rp_volume(n) - 1.0).abs();
            assert!(rel < 0.05, "n={n}: {rel}");
        }
    }

    #[test]
    fn support_json() {
        let s = support_from_json("[[0,0],[1,0],[0,1]]").unwrap();
        assert_eq!(bkk_count(&support_2d(&s).unwrap()).unwrap(), 1);
        assert!(support_from_json("[[0,0],[1]]").is_err());
        assert!(support_2d(&[vec![1, 2, 3]]).is_err());
    }

    fn arb_polytope() -> impl Strategy<Value = LatticePolytope> {
        prop::collection::vec((0i64..6, 0i64..6), 1..8)
            .prop_map(|v| newton_polytope(&v.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()).unwrap())
    }

    proptest! {
        #[test]
        fn mixed_area_laws(p in arb_polytope(), q in arb_polytope(), t in (-5i64..5, -5i64..5), extra in (0i64..6, 0i64..6)) {
            prop_assert_eq!(mixed_area(&p, &q), mixed_area(&q, &p));
            prop_assert_eq!(mixed_area(&p.translate([t.0, t.1]), &q), mixed_area(&p, &q));
            prop_assert_eq!(mixed_area(&p, &p), 2.0 * p.area());
            // monotone under inclusion
            let mut bigger = p.vertices.clone();
            bigger.push([extra.0, extra.1]);
            let big = newton_polytope(&bigger).unwrap();
            prop_assert!(mixed_area(&big, &q) >= mixed_area(&p, &q));
            prop_assert!(p.vertices.iter().all(|v| big.contains(*v)));
        }
    }
}
