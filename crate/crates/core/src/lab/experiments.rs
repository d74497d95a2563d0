//! The named experiments behind `run_experiment`.

use std::f64::consts::PI;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::config::Config;
use super::{replicate, ExperimentReport, Table};
use crate::curvetop::{count_critical_points, intersection_count, trace_curve};
use crate::discriminant::{
    neighborhood_t_max, quadric_distance_oracle, raffalli_distance, raffalli_distance_with,
    distance_upper_bound, DistanceMode, DistanceOptions,
};
use crate::ensembles::{rescaled_local, sample_goe, sample_kostlan, sample_rotation, RngStream};
use crate::error::{Error, Result};
use crate::harmonic::truncate;
use crate::intgeom::{
    four_lines_experiment, kinematic_expectation, moment_pushforward, unweighted_curve_length,
    veronese_checks,
};
use crate::kacrice::CovarianceKernel;
use crate::polycore::AffinePoly;
use crate::polytopes::{
    ball_volume, ball_zonotope, bkk_count, newton_polytope, rp_volume, simplex_support, support_2d,
    zonoid_lhs, Point2,
};
use crate::roots1::{count_projective_roots, resultant_system, torus_root_count};
use crate::stats::{linear_fit, summarize, variance_with_se};
use crate::CODE_VERSION;

pub const EXPERIMENTS: [&str; 15] = [
    "ekss1",
    "ekss2",
    "betti-scaling",
    "kacrice",
    "kinematic",
    "veronese",
    "moment",
    "bkk",
    "zonoid",
    "fourlines",
    "raffalli-oracle",
    "truncate",
    "neighborhood",
    "rescale-covariance",
    "variance-trend",
];

/// Runs a named experiment. Parameters missing from `config` take their
/// defaults; the resolved set is recorded in the report.
pub fn run_experiment(name: &str, config: &Config) -> Result<ExperimentReport> {
    let start = Instant::now();
    let run = match name {
        "ekss1" => ekss1,
        "ekss2" => ekss2,
        "betti-scaling" => betti_scaling,
        "kacrice" => kacrice,
        "kinematic" => kinematic,
        "veronese" => veronese,
        "moment" => moment,
        "bkk" => bkk,
        "zonoid" => zonoid,
        "fourlines" => fourlines,
        "raffalli-oracle" => raffalli_oracle,
        "truncate" => truncate_experiment,
        "neighborhood" => neighborhood,
        "rescale-covariance" => rescale_covariance,
        "variance-trend" => variance_trend,
        _ => return Err(Error::UnknownExperiment(name.to_string())),
    };
    let seed = config.seed()?;
    let mut rep = run(config, seed)?;
    rep.experiment = name.to_string();
    rep.seed = seed;
    rep.code_version = CODE_VERSION.to_string();
    rep.parameters.extend(config.resolved());
    rep.wall_time = start.elapsed().as_secs_f64();
    Ok(rep)
}

/// An independent master seed for sub-experiment `tag`.
fn sub_seed(seed: u64, tag: u64) -> u64 {
    RngStream::new(seed, u64::MAX - tag).next_u64()
}

fn split<T>(out: Vec<Result<T>>) -> (Vec<T>, usize) {
    let discarded = out.iter().filter(|o| o.is_err()).count();
    (out.into_iter().filter_map(|o| o.ok()).collect(), discarded)
}

fn at_least(key: &str, v: usize, lo: usize) -> Result<()> {
    if v < lo {
        return Err(Error::param(key, format!("{v} is below {lo}")));
    }
    Ok(())
}

fn ekss1(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let d = c.usize_in("d", 25, 1, 2000)?;
    let reps = c.usize("replicates", 20_000)?;
    at_least("replicates", reps, 2)?;
    c.finish("ekss1")?;
    let out = replicate(seed, reps, |r, _| {
        count_projective_roots(&sample_kostlan(1, d, r)).map(|k| k as f64)
    });
    let (values, discarded) = split(out);
    let rep = ExperimentReport::new("ekss1", seed).with_values(values, discarded).theory((d as f64).sqrt());
    let ok = rep.within_se(3.0);
    Ok(rep.check("mean_within_3se", ok))
}

fn ekss2(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let d1 = c.usize_in("d", 2, 1, 12)?;
    let d2 = c.usize_in("d2", 3, 1, 12)?;
    let reps = c.usize("replicates", 2000)?;
    let level = c.usize_in("level", 6, 3, 9)?;
    let cross = c.usize("crosscheck", 200)?;
    at_least("replicates", reps, 2)?;
    c.finish("ekss2")?;
    let out = replicate(seed, reps, |r, i| {
        let p = sample_kostlan(2, d1, r);
        let q = sample_kostlan(2, d2, r);
        let k = intersection_count(&p, &q, level)?;
        let oracle = if i < cross { Some(resultant_system(&p, &q)?.1) } else { None };
        Ok((k, oracle))
    });
    let (pairs, discarded) = split(out);
    let checked: Vec<(usize, usize)> = pairs.iter().filter_map(|&(k, o)| o.map(|o| (k, o))).collect();
    let agree = checked.iter().filter(|(k, o)| k == o).count();
    let values = pairs.iter().map(|&(k, _)| k as f64).collect();
    let rep = ExperimentReport::new("ekss2", seed)
        .with_values(values, discarded)
        .theory(((d1 * d2) as f64).sqrt())
        .result("crosscheck_total", checked.len())
        .result("crosscheck_agree", agree);
    let ok = rep.within_se(3.0);
    Ok(rep
        .check("mean_within_3se", ok)
        .check("resultant_agreement", agree == checked.len()))
}

fn betti_scaling(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let degrees = c.usize_list("d", &[8, 16, 32])?;
    let reps = c.usize("replicates", 500)?;
    let level = c.usize_in("level", 6, 3, 9)?;
    let (lo, hi) = (c.f64("ratio_low", 1.6)?, c.f64("ratio_high", 2.4)?);
    at_least("replicates", reps, 2)?;
    c.finish("betti-scaling")?;
    let mut table = Table::new(&["d", "mean_b0", "se_b0", "mean_critical", "ratio"]);
    let mut morse = true;
    let mut ratios_ok = true;
    let mut prev: Option<f64> = None;
    let mut last = (Vec::new(), 0);
    for (di, &d) in degrees.iter().enumerate() {
        let out = replicate(sub_seed(seed, di as u64), reps, |r, _| {
            let p = sample_kostlan(2, d, r);
            let curve = trace_curve(&p, level)?;
            let b0 = curve.b0_rp2();
            let mut tries = 0;
            let crit = loop {
                let u = r.unit_vector(3);
                match count_critical_points(&curve, &p, &[u[0], u[1], u[2]]) {
                    Err(Error::NonGenericDirection(_)) if tries < 3 => tries += 1,
                    other => break other?,
                }
            };
            Ok((b0, crit))
        });
        let (pairs, discarded) = split(out);
        morse &= pairs.iter().all(|&(b, k)| 2 * b <= k);
        let b0: Vec<f64> = pairs.iter().map(|&(b, _)| b as f64).collect();
        let crit: Vec<f64> = pairs.iter().map(|&(_, k)| k as f64).collect();
        let s = summarize(&b0);
        let ratio = prev.map_or(f64::NAN, |p| s.mean / p);
        if prev.is_some() {
            ratios_ok &= (lo..=hi).contains(&ratio);
        }
        prev = Some(s.mean);
        table.push(vec![d as f64, s.mean, s.se, summarize(&crit).mean, ratio]);
        last = (b0, discarded);
    }
    let mut rep = ExperimentReport::new("betti-scaling", seed)
        .with_values(last.0, last.1)
        .check("morse_bound", morse)
        .table("b0", table);
    if degrees.len() > 1 {
        rep = rep.check("ratios_in_band", ratios_ok);
    }
    Ok(rep)
}

fn kacrice(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let degrees = c.usize_list("d", &[100])?;
    let tol = c.f64("tolerance", 1e-6)?;
    c.finish("kacrice")?;
    if degrees.iter().any(|&d| d == 0) {
        return Err(Error::param("d", "degrees must be positive"));
    }
    let mut table = Table::new(&["d", "expected_zeros", "error"]);
    let mut ok = true;
    let mut last = 0.0;
    for &d in &degrees {
        let v = CovarianceKernel::kostlan_circle(d).expected_zeros(0.0, PI)?;
        let err = (v - (d as f64).sqrt()).abs();
        ok &= err <= tol;
        table.push(vec![d as f64, v, err]);
        last = v;
    }
    let pencil = CovarianceKernel::linear_pencil().expected_zeros(f64::NEG_INFINITY, f64::INFINITY)?;
    let d = *degrees.last().unwrap();
    Ok(ExperimentReport::new("kacrice", seed)
        .with_exact(last)
        .theory((d as f64).sqrt())
        .result("linear_pencil", pencil)
        .check("kostlan_within_tolerance", ok)
        .check("pencil_within_1e-8", (pencil - 1.0).abs() <= 1e-8)
        .table("kostlan_circle", table))
}

fn kinematic(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let d = c.usize_in("d", 3, 1, 40)?;
    let level = c.usize_in("level", 6, 3, 9)?;
    let reps = c.usize("replicates", 10_000)?;
    c.finish("kinematic")?;
    let mut rng = RngStream::new(seed, 0);
    let curve = trace_curve(&sample_kostlan(2, d, &mut rng), level)?;
    let rep = kinematic_expectation(&curve, reps, &mut rng)?;
    let ok = rep.within_se(3.0);
    Ok(rep.check("mean_within_3se", ok))
}

fn veronese(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let n = c.usize_in("n", 1, 1, 2)?;
    let degrees = c.usize_list("d", &(1..=50).collect::<Vec<_>>())?;
    let sweep = c.usize_list("sweep", &[5, 10, 20, 30, 40, 50])?;
    c.finish("veronese")?;
    let mut rng = RngStream::new(seed, 0);
    let mut table = Table::new(&["d", "dilation", "dilation_error", "curve_length", "length_error"]);
    let (mut dil_ok, mut len_ok) = (true, true);
    let mut last = 0.0;
    for &d in &degrees {
        let v = veronese_checks(n, d, &mut rng)?;
        let sd = (d as f64).sqrt();
        let de = (v.dilation - sd).abs().max(v.dilation_spread);
        dil_ok &= de <= 1e-6;
        let (len, le) = match v.curve_length {
            Some(l) => (l, (l - PI * sd).abs()),
            None => (f64::NAN, 0.0),
        };
        len_ok &= le <= 1e-4;
        table.push(vec![d as f64, v.dilation, de, len, le]);
        last = v.dilation;
    }
    let mut growth = Table::new(&["d", "ln_d", "unweighted_length"]);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &d in &sweep {
        let l = unweighted_curve_length(d)?;
        xs.push((d as f64).ln());
        ys.push(l);
        growth.push(vec![d as f64, (d as f64).ln(), l]);
    }
    let (_, slope, r2) = if sweep.len() >= 3 { linear_fit(&xs, &ys) } else { (f64::NAN, f64::NAN, f64::NAN) };
    let d = *degrees.last().unwrap();
    let mut rep = ExperimentReport::new("veronese", seed)
        .with_exact(last)
        .theory((d as f64).sqrt())
        .result("log_slope", slope)
        .result("log_r2", r2)
        .check("dilation_within_1e-6", dil_ok)
        .table("dilation", table)
        .table("unweighted_growth", growth);
    if n == 1 {
        rep = rep.check("length_within_1e-4", len_ok);
    }
    if sweep.len() >= 3 {
        rep = rep.check("log_growth_r2", r2 >= 0.95 && slope > 0.0);
    }
    Ok(rep)
}

fn moment(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let reps = c.usize("replicates", 10_000)?;
    c.finish("moment")?;
    if reps < 1000 {
        return Err(Error::param("replicates", format!("{reps} is below 1000")));
    }
    moment_pushforward(reps, &mut RngStream::new(seed, 0))
}

fn random_sparse_system(support: &[Point2], r: &mut RngStream) -> (AffinePoly, AffinePoly) {
    let mk = |r: &mut RngStream| AffinePoly {
        nvars: 2,
        terms: support.iter().map(|p| (vec![p[0] as u32, p[1] as u32], r.gaussian())).collect(),
    };
    (mk(r), mk(r))
}

fn random_support(r: &mut RngStream, max_points: usize, max_entry: u64) -> Result<Vec<Point2>> {
    loop {
        let k = 3 + (r.next_u64() % (max_points as u64 - 2)) as usize;
        let mut pts: Vec<Point2> = (0..k)
            .map(|_| [(r.next_u64() % (max_entry + 1)) as i64, (r.next_u64() % (max_entry + 1)) as i64])
            .collect();
        pts.sort_unstable();
        pts.dedup();
        if !newton_polytope(&pts)?.is_degenerate() {
            return Ok(pts);
        }
    }
}

fn bkk(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let reps = c.usize("replicates", 200)?;
    let max_points = c.usize_in("max_points", 6, 3, 12)?;
    let max_entry = c.usize_in("max_entry", 4, 1, 8)? as u64;
    let simplex_max = c.usize_in("simplex_max", 4, 1, 6)?;
    at_least("replicates", reps, 1)?;
    c.finish("bkk")?;
    let out = replicate(seed, reps, |r, _| {
        let s = random_support(r, max_points, max_entry)?;
        let predicted = bkk_count(&s)?;
        let mut count = 0;
        // a mismatch is resampled once as probable non-genericity
        for _ in 0..2 {
            let (f, g) = random_sparse_system(&s, r);
            count = torus_root_count(&f, &g)?;
            if count as u64 == predicted {
                break;
            }
        }
        Ok(f64::from(u8::from(count as u64 == predicted)))
    });
    let (values, discarded) = split(out);
    let agree = values.iter().filter(|&&v| v == 1.0).count();
    let mut rng = RngStream::new(seed, u64::MAX);
    let mut simplex = Table::new(&["d", "bkk_count", "root_count"]);
    let mut simplex_ok = true;
    for d in 1..=simplex_max {
        let s = support_2d(&simplex_support(2, d as u32))?;
        let b = bkk_count(&s)?;
        let (f, g) = random_sparse_system(&s, &mut rng);
        let k = torus_root_count(&f, &g)?;
        simplex_ok &= b == (d * d) as u64 && k == d * d;
        simplex.push(vec![d as f64, b as f64, k as f64]);
    }
    let total = values.len();
    Ok(ExperimentReport::new("bkk", seed)
        .with_values(values, discarded)
        .result("agreement", agree)
        .check("agreement_at_least_99pct", total > 0 && agree * 100 >= 99 * total)
        .check("simplex_d_squared", simplex_ok)
        .table("simplex", simplex))
}

fn zonoid(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let dims = c.usize_list("n", &[1, 2, 3])?;
    let m = c.usize("m", 10_000)?;
    at_least("m", m, 1)?;
    c.finish("zonoid")?;
    if let Some(&n) = dims.iter().find(|&&n| !(1..=3).contains(&n)) {
        return Err(Error::param("n", format!("{n} outside [1, 3]")));
    }
    let mut table = Table::new(&["n", "lhs", "rhs", "closed_form_error", "segment_lhs", "segment_error"]);
    let (mut closed_ok, mut approx_ok) = (true, true);
    let mut last = 0.0;
    for &n in &dims {
        let rhs = 1.0 / rp_volume(n);
        let lhs = zonoid_lhs(ball_volume(n), n);
        let closed = (lhs - rhs).abs();
        let z = ball_zonotope(n, m, &mut RngStream::new(seed, n as u64))?;
        let seg = zonoid_lhs(z.volume(), n);
        let rel = (seg - rhs).abs() / rhs;
        closed_ok &= closed <= 1e-9;
        approx_ok &= rel <= 0.02;
        table.push(vec![n as f64, lhs, rhs, closed, seg, rel]);
        last = seg;
    }
    Ok(ExperimentReport::new("zonoid", seed)
        .with_exact(last)
        .theory(1.0 / rp_volume(*dims.last().unwrap()))
        .check("closed_form_within_1e-9", closed_ok)
        .check("segments_within_2pct", approx_ok)
        .table("identity", table))
}

fn fourlines(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let reps = c.usize("replicates", 10_000)?;
    at_least("replicates", reps, 2)?;
    c.finish("fourlines")?;
    let rep = four_lines_experiment(reps, seed);
    let ok = rep.mean > 0.0 && rep.mean < 2.0;
    Ok(rep.check("mean_in_open_0_2", ok))
}

fn raffalli_oracle(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let reps = c.usize("replicates", 1000)?;
    let n_max = c.usize_in("n_max", 5, 1, 8)?;
    let starts = c.usize_in("starts", 200, 1, 10_000)?;
    let tol = c.f64("tolerance", 1e-8)?;
    c.finish("raffalli-oracle")?;
    let opts = DistanceOptions {
        starts,
        ..Default::default()
    };
    let out = replicate(seed, reps, |r, i| {
        let n = 1 + i % n_max;
        let p = sample_goe(n + 1, r).to_quadric();
        let exact = quadric_distance_oracle(&p)?;
        let dist = raffalli_distance_with(&p, DistanceMode::Empirical, opts)?.value;
        let s = (0.1 + 9.9 * r.uniform()) * if r.uniform() < 0.5 { -1.0 } else { 1.0 };
        let scaled = raffalli_distance_with(&p.scale(s), DistanceMode::Empirical, opts)?.value;
        let g = sample_rotation(n + 1, r);
        let rotated = raffalli_distance_with(&p.compose_linear(&g)?, DistanceMode::Empirical, opts)?.value;
        Ok([(dist - exact).abs(), (scaled - s.abs() * dist).abs(), (rotated - dist).abs()])
    });
    let (errs, discarded) = split(out);
    let max = |k: usize| errs.iter().map(|e| e[k]).fold(0.0, f64::max);
    let (e0, e1, e2) = (max(0), max(1), max(2));
    Ok(ExperimentReport::new("raffalli-oracle", seed)
        .with_values(errs.iter().map(|e| e[0]).collect(), discarded)
        .theory(0.0)
        .result("max_oracle_error", e0)
        .result("max_scaling_error", e1)
        .result("max_rotation_error", e2)
        .check("oracle_agreement", e0 <= tol)
        .check("scaling_invariance", e1 <= tol)
        .check("rotation_invariance", e2 <= tol))
}

fn truncate_experiment(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let d = c.usize_in("d", 20, 2, 30)?;
    let ells = c.usize_list("ell", &[6, 10, 14, 18])?;
    let reps = c.usize("replicates", 500)?;
    let level = c.usize_in("level", 6, 3, 9)?;
    at_least("replicates", reps, 1)?;
    c.finish("truncate")?;
    if let Some(&l) = ells.iter().find(|&&l| l > d || (d - l) % 2 == 1) {
        return Err(Error::param("ell", format!("d − ℓ = {d} − {l} must be a non-negative even integer")));
    }
    // (certified, topology agrees) per ℓ, on one shared sample per replicate
    let out = replicate(seed, reps, |r, _| -> Result<Vec<(bool, bool, f64)>> {
        let p = sample_kostlan(2, d, r);
        let truncs = ells.iter().map(|&l| truncate(&p, l)).collect::<Result<Vec<_>>>()?;
        let lhs = truncs
            .iter()
            .map(|t| Ok(2f64.sqrt() * p.sub(t)?.bw_norm()))
            .collect::<Result<Vec<f64>>>()?;
        // no certified bound can beat F at a sampled point
        let upper = distance_upper_bound(&p, 4)?;
        let lower = if lhs.iter().any(|&v| v < upper) {
            raffalli_distance(&p, DistanceMode::Certified)?
                .certified_lower_bound
                .unwrap_or(0.0)
        } else {
            0.0
        };
        let mut b0: Option<usize> = None;
        let mut row = Vec::with_capacity(ells.len());
        for (k, t) in truncs.iter().enumerate() {
            // lhs over an upper bound on the distance, a lower bound on the gap
            let gap = lhs[k] / upper;
            if lhs[k] >= lower {
                row.push((false, true, gap));
                continue;
            }
            let base = match b0 {
                Some(b) => b,
                None => *b0.insert(trace_curve(&p, level)?.b0_rp2()),
            };
            row.push((true, trace_curve(t, level)?.b0_rp2() == base, gap));
        }
        Ok(row)
    });
    let (rows, discarded) = split(out);
    let count = rows.len() as f64;
    let mut table = Table::new(&["ell", "certificate_rate", "se", "certified", "topology_agree", "median_lhs_over_dist"]);
    let mut monotone = true;
    let mut agree_all = true;
    let mut prev = -1.0;
    for (k, &l) in ells.iter().enumerate() {
        let cert = rows.iter().filter(|r| r[k].0).count();
        let agree = rows.iter().filter(|r| r[k].0 && r[k].1).count();
        let rate = cert as f64 / count;
        monotone &= rate >= prev;
        agree_all &= agree == cert;
        prev = rate;
        let mut gaps: Vec<f64> = rows.iter().map(|r| r[k].2).collect();
        gaps.sort_by(f64::total_cmp);
        let median = gaps.get(gaps.len() / 2).copied().unwrap_or(f64::NAN);
        table.push(vec![l as f64, rate, (rate * (1.0 - rate) / count).sqrt(), cert as f64, agree as f64, median]);
    }
    let values = rows.iter().map(|r| f64::from(u8::from(r[ells.len() - 1].0))).collect();
    Ok(ExperimentReport::new("truncate", seed)
        .with_values(values, discarded)
        .result("certificate", "sqrt(2)*||p - tau_ell p||_BW < certified dist(p, discriminant)")
        .check("rate_non_decreasing", monotone)
        .check("topology_agreement", agree_all)
        .table("certificate_rate", table))
}

fn neighborhood(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let n = c.usize_in("n", 1, 1, 2)?;
    let degrees = c.usize_list("d", &(2..=10).collect::<Vec<_>>())?;
    let reps = c.usize("replicates", 10_000)?;
    let points = c.usize_in("t_points", 10, 1, 1000)?;
    at_least("replicates", reps, 2)?;
    c.finish("neighborhood")?;
    if let Some(&d) = degrees.iter().find(|&&d| d < 2) {
        return Err(Error::param("d", format!("{d} is below 2")));
    }
    let mut table = Table::new(&["d", "t", "empirical", "se", "bound"]);
    let mut ok = true;
    let mut last = (Vec::new(), 0);
    for &d in &degrees {
        let t_max = neighborhood_t_max(n, d);
        let grid: Vec<f64> = (1..=points).map(|k| t_max * k as f64 / points as f64).collect();
        let rep = crate::discriminant::neighborhood_probability(n, d, &grid, reps, &mut RngStream::new(seed, d as u64))?;
        ok &= rep.checks_pass();
        for row in &rep.tables["probability"].rows {
            table.push(vec![d as f64, row[0], row[1], row[2], row[3]]);
        }
        last = (rep.values, rep.discarded);
    }
    Ok(ExperimentReport::new("neighborhood", seed)
        .with_values(last.0, last.1)
        .result("degree_bound", "D = (n+1)(d-1)^n")
        .check("bound_holds", ok)
        .table("probability", table))
}

/// `d!/((d−k)! dᵏ)` as an exact rational.
fn exact_scale_sq(d: usize, k: usize) -> f64 {
    let mut acc = BigRational::from_integer(1.into());
    for i in 0..k {
        acc *= BigRational::new((d - i).into(), d.into());
    }
    acc.to_f64().unwrap_or(f64::NAN)
}

fn rescale_covariance(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let n = c.usize_in("n", 1, 1, 2)?;
    let d = c.usize("d", 10_000)?;
    let reps = c.usize("replicates", 10_000)?;
    let k_max = c.usize_in("k_max", 2, 0, 4)?;
    at_least("replicates", reps, 2)?;
    at_least("d", d, k_max.max(1))?;
    c.finish("rescale-covariance")?;
    let out = replicate(seed, reps, |r, _| rescaled_local(n, d, k_max, r));
    let (samples, discarded) = split(out);
    let first = samples.first().ok_or_else(|| Error::param("replicates", "no usable samples"))?;
    let m = first.values.len();
    let mut table = Table::new(&["i", "j", "empirical", "se", "limit"]);
    let mut cov_ok = true;
    for i in 0..m {
        for j in i..m {
            let prods: Vec<f64> = samples.iter().map(|s| s.values[i] * s.values[j]).collect();
            let s = summarize(&prods);
            let limit = if i == j { first.limit_sd[i].powi(2) } else { 0.0 };
            cov_ok &= (s.mean - limit).abs() <= 3.0 * s.se;
            table.push(vec![i as f64, j as f64, s.mean, s.se, limit]);
        }
    }
    let mut scale_ok = true;
    let mut scales = Table::new(&["k", "scale", "exact"]);
    for k in 0..=k_max {
        let f = crate::ensembles::rescale_factor(d, k);
        let exact = exact_scale_sq(d, k).sqrt();
        scale_ok &= (f - exact).abs() <= 4.0 * f64::EPSILON * exact;
        scales.push(vec![k as f64, f, exact]);
    }
    let values: Vec<f64> = samples.iter().map(|s| s.values.iter().map(|v| v * v).sum()).collect();
    let total_limit: f64 = first.limit_sd.iter().map(|s| s * s).sum();
    Ok(ExperimentReport::new("rescale-covariance", seed)
        .with_values(values, discarded)
        .theory(total_limit)
        .check("covariance_within_3se", cov_ok)
        .check("scale_factors_exact", scale_ok)
        .table("covariance", table)
        .table("scale_factors", scales))
}

fn variance_trend(c: &Config, seed: u64) -> Result<ExperimentReport> {
    let degrees = c.usize_list("d", &[25, 100, 400])?;
    let reps = c.usize("replicates", 4000)?;
    let band = c.f64("band", 0.25)?;
    at_least("replicates", reps, 4)?;
    c.finish("variance-trend")?;
    let mut table = Table::new(&["d", "mean", "variance", "variance_se", "variance_over_sqrt_d"]);
    let mut ok = true;
    let mut prev: Option<f64> = None;
    let mut last = (Vec::new(), 0);
    for (di, &d) in degrees.iter().enumerate() {
        let out = replicate(sub_seed(seed, di as u64), reps, |r, _| {
            count_projective_roots(&sample_kostlan(1, d, r)).map(|k| k as f64)
        });
        let (values, discarded) = split(out);
        let (var, var_se) = variance_with_se(&values);
        let ratio = var / (d as f64).sqrt();
        if let Some(p) = prev {
            ok &= (ratio / p - 1.0).abs() <= band;
        }
        prev = Some(ratio);
        table.push(vec![d as f64, summarize(&values).mean, var, var_se, ratio]);
        last = (values, discarded);
    }
    Ok(ExperimentReport::new("variance-trend", seed)
        .with_values(last.0, last.1)
        .check("successive_within_band", ok)
        .table("variance", table))
}
