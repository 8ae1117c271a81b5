//! Quadrature correlations of surface-code states, the Demko–Moss–Smith
//! exponential bound on `⟨q_i q_j⟩`, double-exponential correlation-length
//! fits and the entropy area-law regression.
//!
//! Distances between edge-modes use rotated coordinates in which the modes
//! form a square grid: `u = (r + c)/2`, `v = (r − c)/2` in cluster
//! coordinates. The graph distance is the Chebyshev distance in `(u, v)`,
//! which equals `(|Δr| + |Δc|)/2`.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use serde::Serialize;

use crate::gaussian::CovMatrix;
use crate::lattice::{LatticeSpec, Site, SurfaceGraph};
use crate::topo::region_entropy;
use crate::{Error, Result};

fn check_pair(c: &CovMatrix, i: usize, j: usize) -> Result<()> {
    let n = c.n_modes();
    for k in [i, j] {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n_modes: n });
        }
    }
    if !c.is_block_diagonal() {
        return Err(Error::UnsupportedState("correlations need a q/p block-diagonal state".into()));
    }
    Ok(())
}

/// `⟨q_i q_j⟩` (symmetrised), i.e. `Γ_qq[i, j]`.
pub fn qq_correlation(c: &CovMatrix, i: usize, j: usize) -> Result<f64> {
    check_pair(c, i, j)?;
    Ok(c.gamma()[(i, j)])
}

/// `⟨p_i p_j⟩`, i.e. `Γ_pp[i, j]`.
pub fn pp_correlation(c: &CovMatrix, i: usize, j: usize) -> Result<f64> {
    check_pair(c, i, j)?;
    let n = c.n_modes();
    Ok(c.gamma()[(n + i, n + j)])
}

/// `⟨{q_i, p_j}⟩/2`, i.e. `Γ_qp[i, j]`.
pub fn qp_correlation(c: &CovMatrix, i: usize, j: usize) -> Result<f64> {
    check_pair(c, i, j)?;
    Ok(c.gamma()[(i, c.n_modes() + j)])
}

/// Rotated coordinates `(u, v)` of a cluster site.
pub fn rotated_coordinates(site: Site) -> (i64, i64) {
    let (r, c) = (site.row as i64 - 1, site.col as i64 - 1);
    ((r + c).div_euclid(2), (r - c).div_euclid(2))
}

pub fn chebyshev(a: (i64, i64), b: (i64, i64)) -> u64 {
    (a.0 - b.0).unsigned_abs().max((a.1 - b.1).unsigned_abs())
}

pub fn euclidean(a: (i64, i64), b: (i64, i64)) -> f64 {
    ((a.0 - b.0) as f64).hypot((a.1 - b.1) as f64)
}

fn cluster_displacement(spec: &LatticeSpec, a: Site, b: Site) -> (f64, f64) {
    let (dr, dc) = spec.displacement(a, b);
    (dr.abs(), dc.abs())
}

/// Graph distance `max(|Δu|, |Δv|) = (|Δr| + |Δc|)/2` between edge-modes,
/// with the minimum image on a torus.
pub fn graph_distance(sg: &SurfaceGraph, i: usize, j: usize) -> usize {
    let (dr, dc) = cluster_displacement(sg.spec(), sg.edges()[i], sg.edges()[j]);
    ((dr + dc) / 2.0).round() as usize
}

/// Euclidean distance in rotated coordinates, `√((Δr² + Δc²)/2)`.
pub fn euclidean_distance(sg: &SurfaceGraph, i: usize, j: usize) -> f64 {
    let (dr, dc) = cluster_displacement(sg.spec(), sg.edges()[i], sg.edges()[j]);
    ((dr * dr + dc * dc) / 2.0).sqrt()
}

/// Closed-form constants of the exponential decay bound for the
/// surface-code `U`, whose spectrum lies in `[a_spec, b_spec]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationBound {
    pub c_const: f64,
    pub xi: f64,
    pub a_spec: f64,
    pub b_spec: f64,
    pub q: f64,
}

impl CorrelationBound {
    /// `C e^{−(d+1)/ξ}`.
    pub fn value(&self, d: usize) -> f64 {
        self.c_const * (-((d + 1) as f64) / self.xi).exp()
    }
}

pub fn dms_bound(s: f64) -> CorrelationBound {
    let s2 = s * s;
    let root = (8.0 * s2 * s2 + 1.0).sqrt();
    let a_spec = 1.0 / s2;
    let b_spec = s2 * (8.0 + 1.0 / (s2 * s2));
    let ratio = (b_spec / a_spec).sqrt();
    CorrelationBound {
        c_const: (1.0 + root).powi(2) / (4.0 * (8.0 * s2 + 1.0 / s2)),
        xi: 2.0 / ((root + 1.0) / (root - 1.0)).ln(),
        a_spec,
        b_spec,
        q: (ratio - 1.0) / (ratio + 1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundViolation {
    pub i: usize,
    pub j: usize,
    pub distance: usize,
    pub correlation: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub pairs_checked: usize,
    pub violations: Vec<BoundViolation>,
    /// Largest `|⟨q_i q_j⟩| − κ·bound` over checked pairs (negative when
    /// every pair has slack).
    pub max_excess: f64,
    /// Largest `|⟨q_i q_j⟩| / (κ·bound)`.
    pub max_ratio: f64,
}

/// Checks `|⟨q_i q_j⟩| ≤ κ C e^{−(d+1)/ξ}` for every pair with `d > 2`.
pub fn verify_bound(c: &CovMatrix, sg: &SurfaceGraph, bound: &CorrelationBound) -> Result<BoundReport> {
    let n = sg.n_modes();
    if c.n_modes() != n {
        return Err(Error::DimensionMismatch(format!("state has {} modes, graph {}", c.n_modes(), n)));
    }
    if !c.is_block_diagonal() {
        return Err(Error::UnsupportedState("correlations need a q/p block-diagonal state".into()));
    }
    let kappa = c.kappa();
    let mut report = BoundReport { pairs_checked: 0, violations: Vec::new(), max_excess: f64::NEG_INFINITY, max_ratio: 0.0 };
    for i in 0..n {
        for j in (i + 1)..n {
            let d = graph_distance(sg, i, j);
            if d <= 2 {
                continue;
            }
            let corr = c.gamma()[(i, j)].abs();
            let limit = kappa * bound.value(d);
            report.pairs_checked += 1;
            report.max_excess = report.max_excess.max(corr - limit);
            report.max_ratio = report.max_ratio.max(corr / limit);
            if corr > limit {
                report.violations.push(BoundViolation { i, j, distance: d, correlation: corr, bound: limit });
            }
        }
    }
    Ok(report)
}

/// `(separation, |⟨q q⟩|)` pairs along the row of edge-modes through the
/// lattice centre (cluster row `rows/2`, 1-based). Separations count mode
/// steps from the middle mode of the row; both directions are averaged.
pub fn axis_samples(c: &CovMatrix, sg: &SurfaceGraph) -> Result<Vec<(f64, f64)>> {
    let row = (sg.spec().rows / 2).max(1);
    let line: Vec<usize> = (0..sg.n_modes()).filter(|&e| sg.edges()[e].row == row).collect();
    if line.is_empty() {
        return Err(Error::Domain("no edge-modes on the central row".into()));
    }
    let mid = line.len() / 2;
    let reach = mid.min(line.len() - 1 - mid);
    let mut out = Vec::with_capacity(reach + 1);
    for k in 0..=reach {
        let left = qq_correlation(c, line[mid], line[mid - k])?.abs();
        let right = qq_correlation(c, line[mid], line[mid + k])?.abs();
        out.push((k as f64, 0.5 * (left + right)));
    }
    Ok(out)
}

/// Result of fitting `a e^{−d/ξ_a} + b e^{−d/ξ_b}` (with `ξ_a ≤ ξ_b`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub a: f64,
    pub xi_a: f64,
    pub b: f64,
    pub xi_b: f64,
    /// Root-mean-square residual of the logarithms.
    pub residual: f64,
    pub iterations: usize,
}

pub const FIT_MAX_ITERATIONS: usize = 500;
const FIT_XI_A0: f64 = 0.5;
const FIT_XI_B0: f64 = 3.0;

fn model(theta: &Vector4<f64>, d: f64) -> (f64, Vector4<f64>) {
    let (a, xa, b, xb) = (theta[0].exp(), theta[1].exp(), theta[2].exp(), theta[3].exp());
    let ea = a * (-d / xa).exp();
    let eb = b * (-d / xb).exp();
    (ea + eb, Vector4::new(ea, ea * d / xa, eb, eb * d / xb))
}

fn log_residuals(theta: &Vector4<f64>, samples: &[(f64, f64)]) -> (DVector<f64>, DMatrix<f64>) {
    let m = samples.len();
    let mut r = DVector::zeros(m);
    let mut jac = DMatrix::zeros(m, 4);
    for (k, &(d, y)) in samples.iter().enumerate() {
        let (f, grad) = model(theta, d);
        r[k] = f.ln() - y.ln();
        for p in 0..4 {
            jac[(k, p)] = grad[p] / f;
        }
    }
    (r, jac)
}

/// Amplitudes for fixed decay lengths from a relative linear least-squares
/// solve; falls back to `(y₀, y₀/10)` when that gives a non-positive value.
fn initial_amplitudes(samples: &[(f64, f64)], xa: f64, xb: f64) -> (f64, f64) {
    let m = samples.len();
    let design = DMatrix::from_fn(m, 2, |k, p| {
        let (d, y) = samples[k];
        (-d / if p == 0 { xa } else { xb }).exp() / y
    });
    let rhs = DVector::from_element(m, 1.0);
    let y0 = samples[0].1;
    match (design.transpose() * &design).lu().solve(&(design.transpose() * rhs)) {
        Some(sol) if sol[0] > 0.0 && sol[1] > 0.0 => (sol[0], sol[1]),
        _ => (y0, y0 / 10.0),
    }
}

/// Levenberg–Marquardt fit of the double exponential to positive samples,
/// minimising squared differences of logarithms. Deterministic: the start
/// is `ξ_a = 0.5`, `ξ_b = 3` with matching amplitudes.
pub fn fit_double_exponential(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 8 {
        return Err(Error::Domain(format!("need at least 8 samples, got {}", samples.len())));
    }
    if samples.iter().any(|&(d, y)| !(y > 0.0) || !d.is_finite()) {
        return Err(Error::Domain("samples must be finite with positive values".into()));
    }
    let (a0, b0) = initial_amplitudes(samples, FIT_XI_A0, FIT_XI_B0);
    let mut theta = Vector4::new(a0.ln(), FIT_XI_A0.ln(), b0.ln(), FIT_XI_B0.ln());
    let (mut r, mut jac) = log_residuals(&theta, samples);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut trace = vec![cost];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < FIT_MAX_ITERATIONS {
        iterations += 1;
        let jt = jac.transpose();
        let jtj: Matrix4<f64> = (&jt * &jac).fixed_view::<4, 4>(0, 0).into_owned();
        let grad: Vector4<f64> = (&jt * &r).fixed_rows::<4>(0).into_owned();
        if grad.amax() < 1e-14 {
            converged = true;
            break;
        }
        let mut damped = jtj;
        for p in 0..4 {
            damped[(p, p)] += lambda * jtj[(p, p)].max(1e-12);
        }
        let Some(step) = damped.lu().solve(&(-grad)) else {
            lambda *= 10.0;
            continue;
        };
        let trial = theta + step;
        let (r_new, jac_new) = log_residuals(&trial, samples);
        let cost_new = r_new.norm_squared();
        if cost_new.is_finite() && cost_new <= cost {
            let improvement = cost - cost_new;
            theta = trial;
            r = r_new;
            jac = jac_new;
            cost = cost_new;
            trace.push(cost);
            lambda = (lambda / 10.0).max(1e-15);
            if improvement <= 1e-15 * cost.max(1e-300) || step.amax() < 1e-13 || cost < 1e-28 {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e16 {
                converged = true;
                break;
            }
        }
    }
    let residual = (cost / samples.len() as f64).sqrt();
    if !converged {
        return Err(Error::FitFailed { residual, iterations, trace });
    }
    let (mut a, mut xa, mut b, mut xb) = (theta[0].exp(), theta[1].exp(), theta[2].exp(), theta[3].exp());
    if xa > xb {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut xa, &mut xb);
    }
    Ok(DecayFit { a, xi_a: xa, b, xi_b: xb, residual, iterations })
}

/// Samples along the central row and fits the double exponential.
pub fn fit_correlation_length(c: &CovMatrix, sg: &SurfaceGraph) -> Result<DecayFit> {
    fit_double_exponential(&axis_samples(c, sg)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaLawFit {
    /// Entropy per unit perimeter (bits per cluster step).
    pub alpha: f64,
    /// Intercept `γ` in `S = α|∂A| − γ`.
    pub gamma: f64,
    /// `(perimeter, entropy)` per square.
    pub points: Vec<(f64, f64)>,
}

/// Entropies of nested `ℓ × ℓ` cluster squares with top-left corner at
/// `(rows/2 − ℓ/2, cols/2 − ℓ/2)` (0-based), regressed linearly on the
/// perimeter `4ℓ`.
pub fn area_law_fit(c: &CovMatrix, sg: &SurfaceGraph, sides: std::ops::RangeInclusive<usize>) -> Result<AreaLawFit> {
    let spec = sg.spec();
    let mut points = Vec::new();
    for side in sides {
        let r0 = (spec.rows / 2).checked_sub(side / 2);
        let c0 = (spec.cols / 2).checked_sub(side / 2);
        let (Some(r0), Some(c0)) = (r0, c0) else {
            return Err(Error::DoesNotFit(format!("square of side {side} does not fit")));
        };
        if r0 + side > spec.rows || c0 + side > spec.cols {
            return Err(Error::DoesNotFit(format!("square of side {side} does not fit")));
        }
        let region: Vec<usize> = (0..sg.n_modes())
            .filter(|&e| {
                let s = sg.edges()[e];
                (r0..r0 + side).contains(&(s.row - 1)) && (c0..c0 + side).contains(&(s.col - 1))
            })
            .collect();
        points.push(((4 * side) as f64, region_entropy(c, &region)?));
    }
    if points.len() < 2 {
        return Err(Error::Domain("area-law fit needs at least two squares".into()));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let alpha = sxy / sxx;
    Ok(AreaLawFit { alpha, gamma: alpha * mx - my, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_constants_at_unit_squeezing() {
        let b = dms_bound(1.0);
        assert_eq!(b.a_spec, 1.0);
        assert_eq!(b.b_spec, 9.0);
        assert!((b.q - 0.5).abs() < 1e-15);
        assert!((b.xi - 2.0 / 2f64.ln()).abs() < 1e-14);
        assert!((b.c_const - 4.0 / 9.0).abs() < 1e-15);
        // ξ = 2/ln(1/q) ties the two parametrisations together.
        for s in [0.5, 1.0, 3.0] {
            let b = dms_bound(s);
            assert!((b.xi - 2.0 / (1.0 / b.q).ln()).abs() < 1e-9 * b.xi);
        }
        assert!(dms_bound(100.0).xi > dms_bound(10.0).xi);
    }

    #[test]
    fn distances() {
        assert_eq!(chebyshev((0, 0), (0, 0)), 0);
        assert_eq!(chebyshev((0, 0), (2, 1)), 2);
        let sg = SurfaceGraph::new(&LatticeSpec::planar(9, 9, 0.0).unwrap()).unwrap();
        for i in 0..sg.n_modes() {
            for j in 0..sg.n_modes() {
                let (a, b) = (rotated_coordinates(sg.edges()[i]), rotated_coordinates(sg.edges()[j]));
                assert_eq!(graph_distance(&sg, i, j) as u64, chebyshev(a, b));
                assert!((euclidean_distance(&sg, i, j) - euclidean(a, b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn synthetic_fit_round_trip() {
        let (a, xa, b, xb) = (1.3, 0.7, 0.08, 2.6);
        let samples: Vec<(f64, f64)> =
            (0..16).map(|d| (d as f64, a * (-d as f64 / xa).exp() + b * (-d as f64 / xb).exp())).collect();
        let fit = fit_double_exponential(&samples).unwrap();
        assert!((fit.a - a).abs() < 1e-6, "{fit:?}");
        assert!((fit.xi_a - xa).abs() < 1e-6);
        assert!((fit.b - b).abs() < 1e-6);
        assert!((fit.xi_b - xb).abs() < 1e-6);
        assert_eq!(fit_double_exponential(&samples).unwrap(), fit);
        assert!(fit_double_exponential(&samples[..7]).is_err());
    }
}
