//! Topology of real plane curves `Z(p) ⊂ RP²`, traced on an icosahedral
//! mesh of the double cover `S²`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::HomogeneousPoly;

pub type Vec3 = [f64; 3];

/// Finest mesh level tried before a sample is declared singular.
pub const MAX_LEVEL: usize = 10;
/// Mesh values below this multiple of `‖p‖_BW` count as degenerate.
pub const VERTEX_TOLERANCE: f64 = 1e-12;

pub(crate) fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn normalize3(a: Vec3) -> Vec3 {
    let n = dot3(&a, &a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Geodesic distance between unit vectors.
pub fn arc(a: &Vec3, b: &Vec3) -> f64 {
    let c = cross3(a, b);
    dot3(&c, &c).sqrt().atan2(dot3(a, b))
}

/// Subdivided icosahedron on the unit sphere.
#[derive(Debug)]
pub struct SphericalMesh {
    pub level: usize,
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    /// Vertex pairs, lower index first.
    pub edges: Vec<[u32; 2]>,
    /// Edge ids of each triangle: `(v0 v1), (v1 v2), (v2 v0)`.
    pub triangle_edges: Vec<[u32; 3]>,
    pub vertex_antipode: Vec<u32>,
    pub edge_antipode: Vec<u32>,
}

/// Fixed rotation of the base icosahedron; `variant` selects among several so
/// that a retry sees a mesh in general position with respect to the last one.
fn variant_rotation(variant: usize) -> [[f64; 3]; 3] {
    let axis = normalize3([0.31 + 0.17 * variant as f64, 0.52, 0.79 - 0.11 * variant as f64]);
    let angle = 0.413 + 0.737 * variant as f64;
    let (s, c) = angle.sin_cos();
    let [x, y, z] = axis;
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

impl SphericalMesh {
    pub fn build(level: usize, variant: usize) -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let base: [Vec3; 12] = [
            [-1.0, phi, 0.0],
            [1.0, phi, 0.0],
            [-1.0, -phi, 0.0],
            [1.0, -phi, 0.0],
            [0.0, -1.0, phi],
            [0.0, 1.0, phi],
            [0.0, -1.0, -phi],
            [0.0, 1.0, -phi],
            [phi, 0.0, -1.0],
            [phi, 0.0, 1.0],
            [-phi, 0.0, -1.0],
            [-phi, 0.0, 1.0],
        ];
        let rot = variant_rotation(variant);
        let mut vertices: Vec<Vec3> = base
            .iter()
            .map(|v| {
                let u = normalize3(*v);
                normalize3([dot3(&rot[0], &u), dot3(&rot[1], &u), dot3(&rot[2], &u)])
            })
            .collect();
        let mut triangles: Vec<[u32; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..level {
            let mut mid: HashMap<(u32, u32), u32> = HashMap::with_capacity(triangles.len() * 2);
            let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<Vec3>| -> u32 {
                let key = (a.min(b), a.max(b));
                *mid.entry(key).or_insert_with(|| {
                    let (p, q) = (vertices[a as usize], vertices[b as usize]);
                    vertices.push(normalize3([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                    (vertices.len() - 1) as u32
                })
            };
            let mut next = Vec::with_capacity(triangles.len() * 4);
            for &[a, b, c] in &triangles {
                let ab = midpoint(a, b, &mut vertices);
                let bc = midpoint(b, c, &mut vertices);
                let ca = midpoint(c, a, &mut vertices);
                next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            triangles = next;
        }
        let mut edge_index: HashMap<(u32, u32), u32> = HashMap::with_capacity(triangles.len() * 3 / 2);
        let mut edges = Vec::with_capacity(triangles.len() * 3 / 2);
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for t in &triangles {
            let mut te = [0u32; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                te[k] = *edge_index.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    (edges.len() - 1) as u32
                });
            }
            triangle_edges.push(te);
        }
        let quant = |v: &Vec3| -> (i64, i64, i64) {
            let s = 1e9;
            ((v[0] * s).round() as i64, (v[1] * s).round() as i64, (v[2] * s).round() as i64)
        };
        let lookup: HashMap<(i64, i64, i64), u32> =
            vertices.iter().enumerate().map(|(i, v)| (quant(v), i as u32)).collect();
        let vertex_antipode: Vec<u32> = vertices
            .iter()
            .map(|v| {
                let w = [-v[0], -v[1], -v[2]];
                let key = quant(&w);
                // rounding may straddle a grid line; probe the neighbours
                if let Some(&i) = lookup.get(&key) {
                    return i;
                }
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            if let Some(&i) = lookup.get(&(key.0 + dx, key.1 + dy, key.2 + dz)) {
                                return i;
                            }
                        }
                    }
                }
                panic!("mesh is not antipodally symmetric")
            })
            .collect();
        let edge_antipode = edges
            .iter()
            .map(|&[a, b]| {
                let (x, y) = (vertex_antipode[a as usize], vertex_antipode[b as usize]);
                edge_index[&(x.min(y), x.max(y))]
            })
            .collect();
        SphericalMesh {
            level,
            vertices,
            triangles,
            edges,
            triangle_edges,
            vertex_antipode,
            edge_antipode,
        }
    }

    /// Typical edge length (geodesic).
    pub fn edge_length(&self) -> f64 {
        let [a, b] = self.edges[0];
        arc(&self.vertices[a as usize], &self.vertices[b as usize])
    }
}

/// Shared immutable mesh for `(level, variant)`.
pub fn mesh(level: usize, variant: usize) -> Arc<SphericalMesh> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<SphericalMesh>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("mesh cache poisoned");
    guard
        .entry((level, variant))
        .or_insert_with(|| Arc::new(SphericalMesh::build(level, variant)))
        .clone()
}

/// Fast evaluation of a ternary form at many points.
pub(crate) struct Evaluator {
    d: usize,
    terms: Vec<(u16, u16, u16, f64)>,
}

impl Evaluator {
    pub(crate) fn new(p: &HomogeneousPoly) -> Self {
        assert_eq!(p.n(), 2);
        let terms = p
            .terms()
            .filter(|(_, c)| *c != 0.0)
            .map(|(a, c)| (a[0] as u16, a[1] as u16, a[2] as u16, c))
            .collect();
        Evaluator { d: p.d(), terms }
    }

    pub(crate) fn eval(&self, x: &Vec3, buf: &mut Vec<f64>) -> f64 {
        let d1 = self.d + 1;
        buf.resize(3 * d1, 0.0);
        for k in 0..3 {
            buf[k * d1] = 1.0;
            for j in 1..d1 {
                buf[k * d1 + j] = buf[k * d1 + j - 1] * x[k];
            }
        }
        let mut s = 0.0;
        for &(a, b, c, coef) in &self.terms {
            s += coef * buf[a as usize] * buf[d1 + b as usize] * buf[2 * d1 + c as usize];
        }
        s
    }
}

/// One closed polygonal component of `Z(p) ⊂ S²`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveLoop {
    pub points: Vec<Vec3>,
    /// Index of the antipodal loop, or `None` when the loop is its own antipode.
    pub antipode: Option<usize>,
    pub length: f64,
}

impl CurveLoop {
    pub fn is_one_sided(&self) -> bool {
        self.antipode.is_none()
    }
}

/// `Z(p)` on the sphere, with antipodal bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct TracedCurve {
    pub level: usize,
    pub variant: usize,
    pub degree: usize,
    pub loops: Vec<CurveLoop>,
}

#[derive(Clone, Copy, Debug)]
pub struct TraceOptions {
    pub max_level: usize,
    /// Newton-project polyline vertices onto the curve.
    pub project: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            max_level: MAX_LEVEL,
            project: true,
        }
    }
}

pub fn trace_curve(p: &HomogeneousPoly, level: usize) -> Result<TracedCurve> {
    trace_curve_with(p, level, TraceOptions::default())
}

pub fn trace_curve_with(p: &HomogeneousPoly, level: usize, opts: TraceOptions) -> Result<TracedCurve> {
    if p.n() != 2 {
        return Err(Error::Dimension(format!("plane curve expected, got n = {}", p.n())));
    }
    if p.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    if level < 3 {
        return Err(Error::param("level", format!("{level} is below the minimum 3")));
    }
    let tol = VERTEX_TOLERANCE * p.bw_norm();
    let ev = Evaluator::new(p);
    let mut lvl = level;
    let mut variant = 0;
    loop {
        let m = mesh(lvl, variant);
        let mut buf = Vec::new();
        let values: Vec<f64> = m.vertices.iter().map(|v| ev.eval(v, &mut buf)).collect();
        if values.iter().all(|v| v.abs() >= tol) {
            return Ok(extract(p, &m, &values, variant, opts.project));
        }
        if lvl >= opts.max_level {
            return Err(Error::Singular(format!(
                "vertex values below {tol:e} persist up to level {lvl}"
            )));
        }
        lvl += 1;
        variant += 1;
    }
}

fn extract(p: &HomogeneousPoly, m: &SphericalMesh, values: &[f64], variant: usize, project: bool) -> TracedCurve {
    const NONE: u32 = u32::MAX;
    let mut node_of_edge = vec![NONE; m.edges.len()];
    let mut node_edges: Vec<u32> = Vec::new();
    let mut adj: Vec<[u32; 2]> = Vec::new();
    let mut node = |e: u32, node_edges: &mut Vec<u32>, adj: &mut Vec<[u32; 2]>| -> u32 {
        let slot = &mut node_of_edge[e as usize];
        if *slot == NONE {
            *slot = node_edges.len() as u32;
            node_edges.push(e);
            adj.push([NONE, NONE]);
        }
        *slot
    };
    for (t, te) in m.triangles.iter().zip(&m.triangle_edges) {
        let s: [bool; 3] = [0, 1, 2].map(|k| values[t[k] as usize] > 0.0);
        if s[0] == s[1] && s[1] == s[2] {
            continue;
        }
        let crossing: Vec<u32> = (0..3).filter(|&k| s[k] != s[(k + 1) % 3]).map(|k| te[k]).collect();
        let a = node(crossing[0], &mut node_edges, &mut adj);
        let b = node(crossing[1], &mut node_edges, &mut adj);
        for (x, y) in [(a, b), (b, a)] {
            let slot = &mut adj[x as usize];
            if slot[0] == NONE {
                slot[0] = y;
            } else {
                slot[1] = y;
            }
        }
    }
    let pos: Vec<Vec3> = node_edges
        .iter()
        .map(|&e| {
            let [a, b] = m.edges[e as usize];
            let (fa, fb) = (values[a as usize], values[b as usize]);
            let t = fa / (fa - fb);
            let (u, v) = (m.vertices[a as usize], m.vertices[b as usize]);
            normalize3([u[0] + t * (v[0] - u[0]), u[1] + t * (v[1] - u[1]), u[2] + t * (v[2] - u[2])])
        })
        .collect();
    let mut comp = vec![usize::MAX; node_edges.len()];
    let mut loops_nodes: Vec<Vec<u32>> = Vec::new();
    for start in 0..node_edges.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = loops_nodes.len();
        let mut seq = vec![start as u32];
        comp[start] = id;
        let mut prev = start as u32;
        let mut cur = adj[start][0];
        while cur != start as u32 {
            comp[cur as usize] = id;
            seq.push(cur);
            let [x, y] = adj[cur as usize];
            let next = if x != prev { x } else { y };
            prev = cur;
            cur = next;
        }
        loops_nodes.push(seq);
    }
    let h = m.edge_length();
    let loops = loops_nodes
        .iter()
        .map(|seq| {
            let e = node_edges[seq[0] as usize];
            let anti_node = node_of_edge[m.edge_antipode[e as usize] as usize];
            let other = comp[anti_node as usize];
            let mut points: Vec<Vec3> = seq.iter().map(|&i| pos[i as usize]).collect();
            if project {
                for pt in &mut points {
                    *pt = newton_project(p, *pt, h);
                }
            }
            let length = polyline_length(&points);
            CurveLoop {
                antipode: if other == comp[seq[0] as usize] { None } else { Some(other) },
                points,
                length,
            }
        })
        .collect();
    TracedCurve {
        level: m.level,
        variant,
        degree: p.d(),
        loops,
    }
}

fn polyline_length(points: &[Vec3]) -> f64 {
    let n = points.len();
    (0..n).map(|i| arc(&points[i], &points[(i + 1) % n])).sum()
}

/// Moves `x` onto `{p = 0}` along the tangential gradient; gives up (returning
/// `x`) if the correction exceeds `max_step`.
fn newton_project(p: &HomogeneousPoly, x: Vec3, max_step: f64) -> Vec3 {
    let mut y = x;
    for _ in 0..3 {
        let (f, g) = p.eval_grad(&y);
        let gn = dot3(&[g[0], g[1], g[2]], &y);
        let gt = [g[0] - gn * y[0], g[1] - gn * y[1], g[2] - gn * y[2]];
        let gg = dot3(&gt, &gt);
        if gg == 0.0 {
            return x;
        }
        let s = f / gg;
        y = normalize3([y[0] - s * gt[0], y[1] - s * gt[1], y[2] - s * gt[2]]);
    }
    if arc(&x, &y) > max_step {
        x
    } else {
        y
    }
}

/// `(b₀ in RP², nesting depths of the ovals, length in RP²)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveReport {
    pub b0_rp2: usize,
    pub one_sided: usize,
    /// Sorted depths of the ovals; an outermost oval has depth 1.
    pub nesting_depths: Vec<usize>,
    pub total_length_rp2: f64,
}

impl TracedCurve {
    pub fn sphere_components(&self) -> usize {
        self.loops.len()
    }

    pub fn one_sided_count(&self) -> usize {
        self.loops.iter().filter(|l| l.is_one_sided()).count()
    }

    pub fn paired_count(&self) -> usize {
        self.loops.len() - self.one_sided_count()
    }

    pub fn b0_rp2(&self) -> usize {
        self.paired_count() / 2 + self.one_sided_count()
    }

    pub fn total_length_rp2(&self) -> f64 {
        self.loops.iter().map(|l| l.length).sum::<f64>() / 2.0
    }

    /// Representatives of the ovals: one loop per antipodal pair.
    fn oval_representatives(&self) -> Vec<usize> {
        (0..self.loops.len())
            .filter(|&i| matches!(self.loops[i].antipode, Some(j) if i < j))
            .collect()
    }

    /// Is `y` inside the disk bounded by loop `i` that avoids its antipode?
    fn inside(&self, i: usize, y: &Vec3) -> bool {
        let l = &self.loops[i].points;
        let z = {
            let q = l[0];
            [-q[0], -q[1], -q[2]]
        };
        let mut crossings = 0;
        for k in 0..l.len() {
            if arcs_cross(y, &z, &l[k], &l[(k + 1) % l.len()]) {
                crossings += 1;
            }
        }
        crossings % 2 == 1
    }

    pub fn report(&self) -> CurveReport {
        let ovals = self.oval_representatives();
        let mut depths = Vec::with_capacity(ovals.len());
        for &a in &ovals {
            let y = self.loops[a].points[0];
            let mut depth = 1;
            for &b in &ovals {
                if a == b {
                    continue;
                }
                let bb = self.loops[b].antipode.expect("oval");
                if self.inside(b, &y) || self.inside(bb, &y) {
                    depth += 1;
                }
            }
            depths.push(depth);
        }
        depths.sort_unstable();
        CurveReport {
            b0_rp2: self.b0_rp2(),
            one_sided: self.one_sided_count(),
            nesting_depths: depths,
            total_length_rp2: self.total_length_rp2(),
        }
    }

    /// Sign changes of `f` around every loop; errors if `|f|` drops below `tol`
    /// at a polyline vertex.
    pub fn sign_changes(&self, f: impl Fn(&Vec3) -> f64, tol: f64) -> Result<usize> {
        let mut total = 0;
        for l in &self.loops {
            let vals: Vec<f64> = l.points.iter().map(&f).collect();
            if let Some(v) = vals.iter().find(|v| v.abs() < tol) {
                return Err(Error::NearTangency(format!("|value| = {v:e} below {tol:e} on the curve")));
            }
            let n = vals.len();
            total += (0..n).filter(|&i| (vals[i] > 0.0) != (vals[(i + 1) % n] > 0.0)).count();
        }
        Ok(total)
    }
}

pub fn curve_report(c: &TracedCurve) -> CurveReport {
    c.report()
}

/// Does the short great-circle arc `ab` cross the short arc `cd`?
fn arcs_cross(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> bool {
    let n1 = cross3(a, b);
    let n2 = cross3(c, d);
    let sc = dot3(&n1, c);
    let sd = dot3(&n1, d);
    if (sc > 0.0) == (sd > 0.0) {
        return false;
    }
    let sa = dot3(&n2, a);
    let sb = dot3(&n2, b);
    if (sa > 0.0) == (sb > 0.0) {
        return false;
    }
    // both great circles separate the other pair; pick the hemisphere
    let x = cross3(&n1, &n2);
    let mid_ab = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let mid_cd = [c[0] + d[0], c[1] + d[1], c[2] + d[2]];
    (dot3(&x, &mid_ab) > 0.0) == (dot3(&x, &mid_cd) > 0.0)
}

/// Points of `Z(p) ∩ Z(q)` in `RP²`, from sign changes of `q` along the curve.
pub fn count_zeros_along_curve(c: &TracedCurve, q: &HomogeneousPoly) -> Result<usize> {
    if q.n() != 2 || q.is_zero() {
        return Err(Error::Degenerate("q must be a non-zero ternary form".into()));
    }
    let tol = VERTEX_TOLERANCE * q.bw_norm();
    let ev = Evaluator::new(q);
    let buf = std::cell::RefCell::new(Vec::new());
    Ok(c.sign_changes(|x| ev.eval(x, &mut buf.borrow_mut()), tol)? / 2)
}

/// [`count_zeros_along_curve`] with re-tracing on a finer, rotated mesh when a
/// polyline vertex lands too close to `Z(q)`.
pub fn intersection_count(p: &HomogeneousPoly, q: &HomogeneousPoly, level: usize) -> Result<usize> {
    let mut lvl = level;
    loop {
        let c = trace_curve(p, lvl)?;
        match count_zeros_along_curve(&c, q) {
            Err(Error::NearTangency(_)) if lvl < MAX_LEVEL.min(level + 2) => lvl += 1,
            other => return other,
        }
    }
}

/// Critical points on `Z(p) ⊂ RP²` of `g = ⟨x, u⟩²`, which is well defined on
/// the quotient.
///
/// On each sphere loop these are the extrema of `⟨x, u⟩` (sign changes of
/// `det(u, x, ∇p)`) plus the zeros of `⟨x, u⟩`; the sphere total is halved.
pub fn count_critical_points(c: &TracedCurve, p: &HomogeneousPoly, direction: &Vec3) -> Result<usize> {
    let u = normalize3(*direction);
    let tol = 1e-12 * p.bw_norm();
    let tangent = |x: &Vec3| {
        let (_, g) = p.eval_grad(x);
        dot3(&u, &cross3(x, &[g[0], g[1], g[2]]))
    };
    let extrema = c.sign_changes(tangent, tol).map_err(non_generic)?;
    let zeros = c.sign_changes(|x| dot3(x, &u), 1e-12).map_err(non_generic)?;
    Ok((extrema + zeros) / 2)
}

fn non_generic(e: Error) -> Error {
    match e {
        Error::NearTangency(msg) => Error::NonGenericDirection(msg),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_kostlan, RngStream};

    #[test]
    fn mesh_invariants() {
        for level in 0..=4 {
            let m = SphericalMesh::build(level, 0);
            assert_eq!(m.vertices.len(), 10 * 4usize.pow(level as u32) + 2);
            assert_eq!(m.triangles.len(), 20 * 4usize.pow(level as u32));
            assert_eq!(m.vertices.len() + m.triangles.len(), m.edges.len() + 2);
            for (i, v) in m.vertices.iter().enumerate() {
                assert!((dot3(v, v).sqrt() - 1.0).abs() < 1e-12);
                let w = m.vertices[m.vertex_antipode[i] as usize];
                assert!((v[0] + w[0]).abs() + (v[1] + w[1]).abs() + (v[2] + w[2]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projective_line() {
        let p = HomogeneousPoly::linear(&[0.0, 1.0, 0.0]);
        let c = trace_curve(&p, 7).unwrap();
        assert_eq!(c.sphere_components(), 1);
        assert_eq!(c.one_sided_count(), 1);
        let r = c.report();
        assert_eq!(r.b0_rp2, 1);
        assert!(r.nesting_depths.is_empty());
        assert!((r.total_length_rp2 - std::f64::consts::PI).abs() < 1e-3);
        assert!((c.loops[0].length - 2.0 * std::f64::consts::PI).abs() < 1e-3);
        assert_eq!(count_critical_points(&c, &p, &[0.3, 0.2, 0.9]).unwrap(), 2);
    }

    #[test]
    fn small_circle() {
        let p = HomogeneousPoly::from_terms(2, 2, &[(vec![0, 2, 0], 1.0), (vec![0, 0, 2], 1.0), (vec![2, 0, 0], -0.1)])
            .unwrap();
        let c = trace_curve(&p, 7).unwrap();
        assert_eq!(c.sphere_components(), 2);
        let r = c.report();
        assert_eq!(r.b0_rp2, 1);
        assert_eq!(r.nesting_depths, vec![1]);
        let radius = 0.1f64.sqrt().atan();
        let expect = 2.0 * std::f64::consts::PI * radius.sin();
        assert!((r.total_length_rp2 - expect).abs() < 0.01 * expect);
        assert_eq!(count_critical_points(&c, &p, &[0.9, 0.3, 0.2]).unwrap(), 2);
    }

    #[test]
    fn nested_ovals() {
        let a = HomogeneousPoly::from_terms(2, 2, &[(vec![0, 2, 0], 1.0), (vec![0, 0, 2], 1.0), (vec![2, 0, 0], -0.09)])
            .unwrap();
        let b = HomogeneousPoly::from_terms(2, 2, &[(vec![0, 2, 0], 1.0), (vec![0, 0, 2], 1.0), (vec![2, 0, 0], -0.25)])
            .unwrap();
        let p = a.mul(&b).unwrap();
        let r = trace_curve(&p, 6).unwrap().report();
        assert_eq!(r.b0_rp2, 2);
        assert_eq!(r.nesting_depths, vec![1, 2]);
    }

    #[test]
    fn disjoint_ovals() {
        // two small circles around e0 and e1
        let c1 = HomogeneousPoly::from_terms(2, 2, &[(vec![0, 2, 0], 1.0), (vec![0, 0, 2], 1.0), (vec![2, 0, 0], -0.05)])
            .unwrap();
        let c2 = HomogeneousPoly::from_terms(2, 2, &[(vec![2, 0, 0], 1.0), (vec![0, 0, 2], 1.0), (vec![0, 2, 0], -0.05)])
            .unwrap();
        let c = trace_curve(&c1.mul(&c2).unwrap(), 6).unwrap();
        let r = c.report();
        assert_eq!(r.b0_rp2, 2);
        assert_eq!(r.nesting_depths, vec![1, 1]);
    }

    #[test]
    fn conic_meets_line_twice() {
        let conic = HomogeneousPoly::from_terms(2, 2, &[(vec![0, 2, 0], 1.0), (vec![0, 0, 2], 1.0), (vec![2, 0, 0], -1.0)])
            .unwrap();
        let line = HomogeneousPoly::linear(&[0.0, 0.0, 1.0]);
        let c = trace_curve(&conic, 6).unwrap();
        assert_eq!(count_zeros_along_curve(&c, &line).unwrap(), 2);
    }

    #[test]
    fn intersections_match_resultant() {
        let mut r = RngStream::new(41, 0);
        for i in 0..200 {
            let d1 = 1 + i % 4;
            let d2 = 1 + (i / 4) % 4;
            let p = sample_kostlan(2, d1, &mut r);
            let q = sample_kostlan(2, d2, &mut r);
            let along = intersection_count(&p, &q, 6).unwrap();
            let (_, real) = crate::roots1::resultant_system(&p, &q).unwrap();
            assert_eq!(along, real, "case {i}: d=({d1},{d2})");
        }
    }

    #[test]
    fn antipodal_consistency_and_morse_bound() {
        let mut r = RngStream::new(42, 0);
        for i in 0..30 {
            let d = 2 + i % 10;
            let p = sample_kostlan(2, d, &mut r);
            let c = trace_curve(&p, 6).unwrap();
            for (k, l) in c.loops.iter().enumerate() {
                if let Some(j) = l.antipode {
                    assert_eq!(c.loops[j].antipode, Some(k));
                }
            }
            assert_eq!(c.sphere_components(), 2 * (c.paired_count() / 2) + c.one_sided_count());
            assert_eq!(c.one_sided_count(), d % 2, "odd degree curves carry one pseudo-line");
            let crit = count_critical_points(&c, &p, &[0.36, 0.48, 0.8]).unwrap();
            assert!(2 * c.b0_rp2() <= crit);
            assert_eq!(c.sign_changes(|x| x[0] - 0.1234, 0.0).unwrap() % 2, 0);
        }
    }

    #[test]
    fn refinement_stability() {
        let mut r = RngStream::new(43, 0);
        let mut same = 0;
        let total = 100;
        for i in 0..total {
            let d = 4 + i % 12;
            let p = sample_kostlan(2, d, &mut r);
            let a = trace_curve(&p, 5).unwrap().b0_rp2();
            let b = trace_curve(&p, 6).unwrap().b0_rp2();
            same += usize::from(a == b);
        }
        assert!(same >= 99, "{same}/{total}");
    }

    #[test]
    fn singular_vertex_is_reported() {
        // vanishes at a mesh vertex, so every variant sees a zero only if we
        // forbid retries
        let m = mesh(3, 0);
        let v = m.vertices[0];
        let a = normalize3(cross3(&v, &[0.0, 0.0, 1.0]));
        let b = normalize3(cross3(&v, &a));
        let p = HomogeneousPoly::linear(&a).mul(&HomogeneousPoly::linear(&b)).unwrap();
        let opts = TraceOptions {
            max_level: 3,
            project: true,
        };
        assert!(matches!(trace_curve_with(&p, 3, opts), Err(Error::Singular(_))));
        assert!(trace_curve(&p, 3).is_ok());
        assert!(matches!(trace_curve(&p, 2), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn json_export() {
        let p = HomogeneousPoly::linear(&[0.0, 1.0, 0.0]);
        let c = trace_curve(&p, 3).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"loops\""));
    }
}
