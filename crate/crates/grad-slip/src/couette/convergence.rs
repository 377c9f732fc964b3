//! ε-sweeps and fitted convergence rates.

use std::thread;

use super::asymptotic::{build_asymptotic_couette, ViscousGrid};
use super::build_couette;
use super::solvers::{
    solve_moment_staggered, solve_ns_couette, NsRun, NsWallBc, StaggeredRun, TimeScheme, WallSignal,
};
use crate::{Error, Result};

/// Reference BGK velocity-slip coefficients used by the Couette studies.
pub const REFERENCE_K0: f64 = 1.01619;
pub const REFERENCE_K2: f64 = -0.76632;

/// ε = 2^{-p} for p in `lo..=hi`.
pub fn dyadic_eps(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|p| 2f64.powi(-(p as i32))).collect()
}

pub fn l2_trapezoid(x: &[f64], e: &[f64]) -> f64 {
    let s: f64 = x
        .windows(2)
        .zip(e.windows(2))
        .map(|(xw, ew)| 0.5 * (xw[1] - xw[0]) * (ew[0] * ew[0] + ew[1] * ew[1]))
        .sum();
    s.sqrt()
}

/// Least-squares slope of log₂(error) against −log₂(ε), sign-flipped so a
/// decaying error reports a positive rate. `None` for fewer than 3 points.
pub fn fitted_slope(eps: &[f64], err: &[f64]) -> Option<f64> {
    if eps.len() < 3 || eps.len() != err.len() {
        return None;
    }
    let xs: Vec<f64> = eps.iter().map(|e| -e.log2()).collect();
    let ys: Vec<f64> = err.iter().map(|e| e.log2()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(-sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub error: f64,
}

impl ConvergenceRow {
    pub fn neg_log2_eps(&self) -> f64 {
        -self.eps.log2()
    }
    pub fn log2_error(&self) -> f64 {
        self.error.log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
    pub slope: Option<f64>,
}

/// Two profiles on one grid for one ε.
#[derive(Debug, Clone)]
pub struct ProfilePair {
    pub eps: f64,
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// L² errors per ε and the fitted rate; every pair must share the grid of
/// the first one.
pub fn error_report(label: &str, pairs: &[ProfilePair]) -> Result<ErrorReport> {
    let first = pairs
        .first()
        .ok_or_else(|| Error::Config("no runs to compare".into()))?;
    let mut rows = Vec::with_capacity(pairs.len());
    for p in pairs {
        if p.x.len() != first.x.len() || p.a.len() != p.x.len() || p.b.len() != p.x.len() {
            return Err(Error::SizeMismatch {
                expected: first.x.len(),
                got: p.x.len(),
            });
        }
        let diff: Vec<f64> = p.a.iter().zip(&p.b).map(|(u, v)| u - v).collect();
        rows.push(ConvergenceRow {
            eps: p.eps,
            error: l2_trapezoid(&p.x, &diff),
        });
    }
    Ok(report_from_rows(label, rows))
}

fn report_from_rows(label: &str, rows: Vec<ConvergenceRow>) -> ErrorReport {
    let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let err: Vec<f64> = rows.iter().map(|r| r.error).collect();
    ErrorReport {
        label: label.to_string(),
        slope: fitted_slope(&eps, &err),
        rows,
    }
}

/// Runs `f` for every ε on its own thread, keeping input order.
fn sweep<R: Send>(eps: &[f64], f: impl Fn(f64) -> Result<R> + Sync) -> Result<Vec<R>> {
    thread::scope(|s| {
        let handles: Vec<_> = eps
            .iter()
            .map(|&e| {
                let f = &f;
                s.spawn(move || f(e))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

/// NS slip-variant comparison on [0, 1].
#[derive(Debug, Clone)]
pub struct SlipVariantConfig {
    pub eps: Vec<f64>,
    pub n_grid: usize,
    pub dt: f64,
    pub t_final: f64,
    pub k0: f64,
    pub k2: f64,
    pub wall: WallSignal,
}

impl Default for SlipVariantConfig {
    fn default() -> Self {
        Self {
            eps: dyadic_eps(4, 10),
            n_grid: 2000,
            dt: 1e-4,
            t_final: 0.25,
            k0: REFERENCE_K0,
            k2: REFERENCE_K2,
            wall: WallSignal::Cosine,
        }
    }
}

/// (‖no-slip − slip1‖, ‖slip1 − slip2‖) reports.
pub fn slip_variant_study(cfg: &SlipVariantConfig) -> Result<(ErrorReport, ErrorReport)> {
    let run = |eps: f64, bc: NsWallBc| {
        solve_ns_couette(&NsRun {
            eps,
            viscosity: 1.0,
            n_grid: cfg.n_grid,
            length: 1.0,
            dt: cfg.dt,
            t_final: cfg.t_final,
            wall: cfg.wall.clone(),
            bc,
            scheme: TimeScheme::ImplicitEuler,
        })
    };
    let profiles = sweep(&cfg.eps, |eps| {
        let u0 = run(eps, NsWallBc::no_slip())?;
        let u1 = run(eps, NsWallBc::first_order(cfg.k0))?;
        let u2 = run(eps, NsWallBc::second_order(cfg.k0, cfg.k2))?;
        Ok((eps, u0, u1, u2))
    })?;
    let (mut first, mut second) = (Vec::new(), Vec::new());
    for (eps, u0, u1, u2) in profiles {
        first.push(ProfilePair {
            eps,
            x: u0.x.clone(),
            a: u0.u,
            b: u1.u.clone(),
        });
        second.push(ProfilePair {
            eps,
            x: u1.x,
            a: u1.u,
            b: u2.u,
        });
    }
    Ok((
        error_report("noslip-slip1", &first)?,
        error_report("slip1-slip2", &second)?,
    ))
}

/// Moment solution vs the layered asymptotics, on a truncated domain
/// [0, min(1, 10√ε)] resolved at h = ε/cells_per_eps.
#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub order: usize,
    pub chi: f64,
    pub eps: Vec<f64>,
    pub t_final: f64,
    pub cells_per_eps: f64,
    pub dt: f64,
    pub ns_grid: usize,
    pub ns_dt: f64,
    pub viscous: ViscousGrid,
    pub wall: WallSignal,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            order: 7,
            chi: 1.0,
            eps: dyadic_eps(5, 9),
            t_final: 0.25,
            cells_per_eps: 20.0,
            dt: 1e-3,
            ns_grid: 4000,
            ns_dt: 1e-3,
            viscous: ViscousGrid::default(),
            wall: WallSignal::Cosine,
        }
    }
}

fn domain(eps: f64) -> f64 {
    (10.0 * eps.sqrt()).min(1.0)
}

/// ‖W_moment − W_app‖ in the discrete staggered L² norm.
pub fn moment_vs_asymptotic_study(cfg: &ScalingConfig) -> Result<ErrorReport> {
    let asy = build_asymptotic_couette(cfg.order, cfg.chi, &cfg.wall, cfg.t_final, cfg.viscous)?;
    let sys = build_couette::<f64>(cfg.order, cfg.chi)?;
    let rows = sweep(&cfg.eps, |eps| {
        let length = domain(eps);
        let n_cells = (length * cfg.cells_per_eps / eps).ceil() as usize;
        let run = StaggeredRun {
            eps,
            length,
            n_cells,
            dt: cfg.dt,
            t_final: cfg.t_final,
            wall: cfg.wall.clone(),
        };
        let prof = solve_moment_staggered(&sys, &run)?;
        let (ae, ao) = asy.staggered(eps, &prof.xe, &prof.xo)?;
        let mut s = 0.0;
        for (j, (w, a)) in prof.we.iter().zip(&ae).enumerate() {
            let wt = if j == 0 { 0.5 } else { 1.0 };
            s += wt * (w - a).norm_squared();
        }
        for (w, a) in prof.wo.iter().zip(&ao) {
            s += (w - a).norm_squared();
        }
        Ok(ConvergenceRow {
            eps,
            error: (prof.h * s).sqrt(),
        })
    })?;
    Ok(report_from_rows("moment-asymptotic", rows))
}

/// NS with the constructed wall condition vs the composite viscous
/// approximation u0 + √ε u1 + ε u2.
pub fn ns_vs_composite_study(cfg: &ScalingConfig) -> Result<ErrorReport> {
    let asy = build_asymptotic_couette(cfg.order, cfg.chi, &cfg.wall, cfg.t_final, cfg.viscous)?;
    let bc = NsWallBc::constructed(asy.constants.k_m, asy.constants.j_m);
    let pairs = sweep(&cfg.eps, |eps| {
        let ns = solve_ns_couette(&NsRun {
            eps,
            viscosity: 1.0,
            n_grid: cfg.ns_grid,
            length: domain(eps),
            dt: cfg.ns_dt,
            t_final: cfg.t_final,
            wall: cfg.wall.clone(),
            bc,
            scheme: TimeScheme::Bdf2,
        })?;
        let comp = asy.composite_ns(eps, &ns.x);
        Ok(ProfilePair {
            eps,
            x: ns.x,
            a: ns.u,
            b: comp,
        })
    })?;
    let rows = pairs
        .iter()
        .map(|p| {
            let d: Vec<f64> = p.a.iter().zip(&p.b).map(|(u, v)| u - v).collect();
            ConvergenceRow {
                eps: p.eps,
                error: l2_trapezoid(&p.x, &d),
            }
        })
        .collect();
    Ok(report_from_rows("ns-composite", rows))
}
