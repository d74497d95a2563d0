//! Integral geometry checks: kinematic formula, Veronese metric facts, the
//! moment map of `CP¹`, and lines meeting four lines in `RP³`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};

use crate::curvetop::{TracedCurve, VERTEX_TOLERANCE};
use crate::ensembles::{dot, norm, sample_random_flat, RngStream};
use crate::error::{Error, Result};
use crate::kacrice::integrate;
use crate::lab::{replicate, ExperimentReport};
use crate::polycore::{basis, veronese_map};
use crate::stats::{ks_critical_1pct, ks_one_sample};

/// Expected number of intersections of `A` with a uniformly random line of
/// `RP²`, estimated by sign changes of a random linear form along `A`.
pub fn kinematic_expectation(a: &TracedCurve, samples: usize, rng: &mut RngStream) -> Result<ExperimentReport> {
    if samples < 100 {
        return Err(Error::param("samples", format!("{samples} is below 100")));
    }
    let seed = rng.next_u64();
    let outcomes = replicate(seed, samples, |r, _| {
        let n = r.unit_vector(3);
        a.sign_changes(|x| n[0] * x[0] + n[1] * x[1] + n[2] * x[2], VERTEX_TOLERANCE)
            .map(|c| c as f64 / 2.0)
    });
    let discarded = outcomes.iter().filter(|o| o.is_err()).count();
    let values: Vec<f64> = outcomes.into_iter().filter_map(|o| o.ok()).collect();
    let length = a.total_length_rp2();
    Ok(ExperimentReport::new("kinematic", seed)
        .param("samples", samples)
        .param("level", a.level)
        .with_values(values, discarded)
        .theory(length / PI)
        .result("length_rp2", length))
}

/// Metric facts about Veronese embeddings.
#[derive(Clone, Debug, PartialEq)]
pub struct VeroneseCheck {
    /// Mean stretch of unit tangent vectors, by central differences.
    pub dilation: f64,
    /// Largest deviation of a single stretch from the mean.
    pub dilation_spread: f64,
    /// Length of the Kostlan–Veronese curve `ν(RP¹)` (`n = 1` only).
    pub curve_length: Option<f64>,
    /// Length of the unweighted rational normal curve (`n = 1` only).
    pub unweighted_length: Option<f64>,
}

pub fn veronese_checks(n: usize, d: usize, rng: &mut RngStream) -> Result<VeroneseCheck> {
    if !(1..=2).contains(&n) {
        return Err(Error::Dimension(format!("veronese checks need n ∈ {{1,2}}, got {n}")));
    }
    if d == 0 {
        return Err(Error::param("d", "degree must be positive"));
    }
    let h = 1e-5;
    let mut stretches = Vec::with_capacity(100);
    for _ in 0..100 {
        let x = rng.unit_vector(n + 1);
        // unit tangent at x
        let mut v = rng.gaussians(n + 1);
        let t = dot(&v, &x);
        v.iter_mut().zip(&x).for_each(|(a, b)| *a -= t * b);
        let nv = norm(&v);
        v.iter_mut().for_each(|a| *a /= nv);
        let at = |s: f64| -> Result<Vec<f64>> {
            let (sn, cs) = s.sin_cos();
            let y: Vec<f64> = x.iter().zip(&v).map(|(a, b)| cs * a + sn * b).collect();
            let ny = norm(&y);
            veronese_map(n, d, &y.iter().map(|c| c / ny).collect::<Vec<_>>())
        };
        let (p, m) = (at(h)?, at(-h)?);
        let diff: Vec<f64> = p.iter().zip(&m).map(|(a, b)| a - b).collect();
        // chord of a curve of speed √d and curvature ~√d, to O(h²)
        stretches.push(norm(&diff) / (2.0 * h));
    }
    let dilation = stretches.iter().sum::<f64>() / stretches.len() as f64;
    let dilation_spread = stretches.iter().map(|s| (s - dilation).abs()).fold(0.0, f64::max);
    let (curve_length, unweighted_length) = if n == 1 {
        (Some(kostlan_curve_length(d)?), Some(unweighted_curve_length(d)?))
    } else {
        (None, None)
    };
    Ok(VeroneseCheck {
        dilation,
        dilation_spread,
        curve_length,
        unweighted_length,
    })
}

/// Speed of `v/‖v‖` given `v` and `v'`.
fn projective_speed(v: &[f64], dv: &[f64]) -> f64 {
    let a = dot(v, v);
    let b = dot(v, dv);
    let c = dot(dv, dv);
    let mut det = a * c - b * b;
    if det < 1e-8 * a * c {
        det = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let m = v[i] * dv[j] - v[j] * dv[i];
                det += m * m;
            }
        }
    }
    det.max(0.0).sqrt() / a
}

/// Arc length of `θ ↦ ν_{1,d}(cos θ, sin θ)` over `[0, π]`.
pub fn kostlan_curve_length(d: usize) -> Result<f64> {
    let b = basis(1, d);
    let w: Vec<f64> = (0..b.len()).map(|r| b.bw_weight_sq(r).sqrt()).collect();
    let exps: Vec<(i32, i32)> = (0..b.len())
        .map(|r| {
            let a = b.exponents(r);
            (a[0] as i32, a[1] as i32)
        })
        .collect();
    integrate(
        |t| {
            let (s, c) = t.sin_cos();
            let mut v = vec![0.0; exps.len()];
            let mut dv = vec![0.0; exps.len()];
            for (i, &(p, q)) in exps.iter().enumerate() {
                v[i] = w[i] * c.powi(p) * s.powi(q);
                let mut der = 0.0;
                if p > 0 {
                    der -= p as f64 * c.powi(p - 1) * s.powi(q + 1);
                }
                if q > 0 {
                    der += q as f64 * c.powi(p + 1) * s.powi(q - 1);
                }
                dv[i] = w[i] * der;
            }
            Ok(projective_speed(&v, &dv))
        },
        0.0,
        PI,
        1e-10,
    )
}

/// Projective length of `t ↦ [1 : t : … : t^d]`.
pub fn unweighted_curve_length(d: usize) -> Result<f64> {
    integrate(
        |u| {
            let t = u.tan();
            let mut v = vec![0.0; d + 1];
            let mut dv = vec![0.0; d + 1];
            // rescaled by t^{-d} off [-1, 1], which leaves the projective curve alone
            if t.abs() <= 1.0 {
                let mut p = 1.0;
                for k in 0..=d {
                    v[k] = p;
                    if k > 0 {
                        dv[k] = k as f64 * v[k - 1];
                    }
                    p *= t;
                }
            } else {
                let s = 1.0 / t;
                let mut p = 1.0;
                for k in (0..=d).rev() {
                    v[k] = p;
                    dv[k] = -((d - k) as f64) * p * s;
                    p *= s;
                }
            }
            Ok(projective_speed(&v, &dv) * (1.0 + t * t))
        },
        -PI / 2.0,
        PI / 2.0,
        1e-9,
    )
}

/// `μ([w₀, w₁]) = |w₁|² / (|w₀|² + |w₁|²)`, complex numbers as `(re, im)`.
pub fn moment_map(w0: (f64, f64), w1: (f64, f64)) -> f64 {
    let a = w0.0 * w0.0 + w0.1 * w0.1;
    let b = w1.0 * w1.0 + w1.1 * w1.1;
    b / (a + b)
}

/// Pushes uniform points of `CP¹` through the moment map and tests the
/// result against `Uniform[0, 1]`.
pub fn moment_pushforward(samples: usize, rng: &mut RngStream) -> Result<ExperimentReport> {
    if samples < 1000 {
        return Err(Error::param("samples", format!("{samples} is below 1000")));
    }
    let seed = rng.next_u64();
    let mut values = replicate(seed, samples, |r, _| {
        let g = r.gaussians(4);
        moment_map((g[0], g[1]), (g[2], g[3]))
    });
    let mut sorted = values.clone();
    let ks = ks_one_sample(&mut sorted, |x| x.clamp(0.0, 1.0));
    let crit = ks_critical_1pct(samples);
    values.shrink_to_fit();
    Ok(ExperimentReport::new("moment", seed)
        .param("samples", samples)
        .with_values(values, 0)
        .theory(0.5)
        .result("ks", ks)
        .result("ks_critical_1pct", crit)
        .check("ks_below_critical", ks < crit))
}

/// A line of `RP³`: an orthonormal frame of a 2-plane in `R⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveLine3 {
    pub frame: [[f64; 4]; 2],
}

impl ProjectiveLine3 {
    /// The line through `[a]` and `[b]`.
    pub fn through(a: [f64; 4], b: [f64; 4]) -> Result<Self> {
        let na = norm(&a);
        if na == 0.0 {
            return Err(Error::Degenerate("zero vector".into()));
        }
        let e0 = a.map(|x| x / na);
        let t = dot(&b, &e0);
        let mut e1 = [0.0; 4];
        for i in 0..4 {
            e1[i] = b[i] - t * e0[i];
        }
        let n1 = norm(&e1);
        if n1 <= 1e-12 * norm(&b) {
            return Err(Error::Degenerate("points span no line".into()));
        }
        Ok(ProjectiveLine3 {
            frame: [e0, e1.map(|x| x / n1)],
        })
    }

    pub fn random(rng: &mut RngStream) -> Self {
        let f = sample_random_flat(1, 3, rng).expect("valid dimensions");
        let col = |i: usize| [f.basis[i][0], f.basis[i][1], f.basis[i][2], f.basis[i][3]];
        ProjectiveLine3 { frame: [col(0), col(1)] }
    }
}

/// Smallest singular value below this marks a rank-deficient quadric system.
pub const QUADRIC_RANK_THRESHOLD: f64 = 1e-8;
/// Discriminants of the restricted quadratic below this count as tangency.
pub const TANGENCY_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum FourLinesOutcome {
    /// Number of real lines meeting all four.
    Count(usize),
    Degenerate(String),
}

fn quadric_value(q: &Matrix4<f64>, a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += a[i] * q[(i, j)] * b[j];
        }
    }
    s
}

/// The quadric through three lines (unit Frobenius norm), or why there is
/// no unique one.
pub fn quadric_through(lines: &[ProjectiveLine3]) -> std::result::Result<Matrix4<f64>, String> {
    let idx: Vec<(usize, usize)> = (0..4).flat_map(|i| (i..4).map(move |j| (i, j))).collect();
    let mut m = DMatrix::zeros(10, 10);
    let mut row = 0;
    for l in lines.iter().take(3) {
        let [a, b] = l.frame;
        let mut c = [0.0; 4];
        for i in 0..4 {
            c[i] = a[i] + b[i];
        }
        for x in [a, b, c] {
            let mut r: Vec<f64> = idx
                .iter()
                .map(|&(i, j)| if i == j { x[i] * x[i] } else { 2.0 * x[i] * x[j] })
                .collect();
            let nr = norm(&r);
            r.iter_mut().for_each(|v| *v /= nr);
            for (k, v) in r.into_iter().enumerate() {
                m[(row, k)] = v;
            }
            row += 1;
        }
    }
    // row 9 stays zero so the SVD is square
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..10).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let second = svd.singular_values[order[1]];
    if second < QUADRIC_RANK_THRESHOLD {
        return Err(format!("quadric system rank deficient (σ = {second:e})"));
    }
    let v = vt.row(order[0]);
    let mut q = Matrix4::zeros();
    for (k, &(i, j)) in idx.iter().enumerate() {
        q[(i, j)] = v[k];
        q[(j, i)] = v[k];
    }
    Ok(q / q.norm())
}

/// Real lines meeting four given lines of `RP³`.
pub fn count_lines_meeting(lines: &[ProjectiveLine3; 4]) -> FourLinesOutcome {
    let q = match quadric_through(&lines[..3]) {
        Ok(q) => q,
        Err(msg) => return FourLinesOutcome::Degenerate(msg),
    };
    let [a, b] = lines[3].frame;
    let qa = quadric_value(&q, &a, &a);
    let qb = quadric_value(&q, &b, &b);
    let qab = quadric_value(&q, &a, &b);
    let disc = qab * qab - qa * qb;
    if disc.abs() < TANGENCY_THRESHOLD {
        return FourLinesOutcome::Degenerate(format!("fourth line tangent to the quadric (disc = {disc:e})"));
    }
    FourLinesOutcome::Count(if disc > 0.0 { 2 } else { 0 })
}

/// Four independent uniform lines of `RP³`.
pub fn lines_meeting_four(rng: &mut RngStream) -> FourLinesOutcome {
    let lines = [
        ProjectiveLine3::random(rng),
        ProjectiveLine3::random(rng),
        ProjectiveLine3::random(rng),
        ProjectiveLine3::random(rng),
    ];
    count_lines_meeting(&lines)
}

/// Large-`n` value `8/(3π^{5/2}√n)·(π²/4)ⁿ` for lines meeting `2n−2` random
/// codimension-2 subspaces of `RPⁿ`; only a reference at `n = 3`.
pub fn schubert_asymptotic(n: usize) -> f64 {
    let nf = n as f64;
    8.0 / (3.0 * PI.powf(2.5) * nf.sqrt()) * (PI * PI / 4.0).powi(n as i32)
}

pub fn four_lines_experiment(replicates: usize, seed: u64) -> ExperimentReport {
    let outcomes = replicate(seed, replicates, |r, _| lines_meeting_four(r));
    let mut values = Vec::with_capacity(replicates);
    let mut discarded = 0;
    let mut odd = 0;
    for o in outcomes {
        match o {
            FourLinesOutcome::Count(c) => {
                odd += usize::from(c != 0 && c != 2);
                values.push(c as f64);
            }
            FourLinesOutcome::Degenerate(_) => discarded += 1,
        }
    }
    let rate = discarded as f64 / replicates.max(1) as f64;
    ExperimentReport::new("fourlines", seed)
        .param("replicates", replicates)
        .param("rank_threshold", QUADRIC_RANK_THRESHOLD)
        .param("tangency_threshold", TANGENCY_THRESHOLD)
        .with_values(values, discarded)
        .result("degenerate_rate", rate)
        .result("asymptotic_reference_n3", schubert_asymptotic(3))
        .result(
            "asymptotic_reference_note",
            "asymptotic, n→∞, not an acceptance target",
        )
        .check("outcomes_in_0_2", odd == 0)
        .check("degenerate_rate_below_0.001", rate < 1e-3)
}
