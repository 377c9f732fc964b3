//! Command implementations. Each writes CSV (or text) files and returns their paths.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use grad_slip::boundary_ops::{
    build_bc, check_maximal_positive, check_strict_dissipativity, BcKind,
};
use grad_slip::couette::{
    build_couette, couette_constants, moment_vs_asymptotic_study, ns_vs_composite_study,
    slip_variant_study, solve_moment_couette, solve_ns_couette, ErrorReport, MomentRun, NsRun,
    NsWallBc, ScalingConfig, SlipVariantConfig, TimeScheme, REFERENCE_K0, REFERENCE_K2,
};
use grad_slip::general_slip_bc::slip_bc_records as records;
use grad_slip::half_space::{generalized_eigen, slip_coefficients, ModeClass};
use grad_slip::MomentSystemF64;

use crate::config::{self, FileConfig};
use crate::Params;

/// Reference BGK values (k0, t0, t1, k1, k2, t2) at χ = 1.
const REFERENCE: [f64; 6] = [1.01619, 0.38316, 1.30272, 0.44046, -0.76632, -1.42758];

struct Resolved {
    orders: Vec<usize>,
    chis: Vec<f64>,
    eps: Vec<f64>,
    grid: Option<usize>,
    dt: Option<f64>,
    times: Vec<f64>,
    out: PathBuf,
    wall: grad_slip::couette::WallSignal,
}

fn resolve(p: &Params, f: &FileConfig, defaults: [&str; 4]) -> Result<Resolved> {
    let [m, eps, t, chi] = defaults;
    let grid = f
        .pick(&p.grid, "grid")
        .map(|g| {
            g.trim()
                .parse::<usize>()
                .with_context(|| format!("bad grid {g:?}"))
        })
        .transpose()?;
    let dt = f
        .pick(&p.dt, "dt")
        .map(|d| config::parse_num(&d))
        .transpose()?;
    let chis = config::parse_list(&f.pick(&p.chi, "chi").unwrap_or_else(|| chi.into()))?;
    if let Some(c) = chis.iter().find(|c| !(**c >= 0.0 && **c <= 1.0)) {
        bail!("chi must lie in [0, 1], got {c}");
    }
    let times = config::parse_list(&f.pick(&p.t, "T").unwrap_or_else(|| t.into()))?;
    if let Some(t) = times.iter().find(|t| **t <= 0.0) {
        bail!("times must be positive, got {t}");
    }
    Ok(Resolved {
        orders: config::parse_orders(&f.pick(&p.m, "M").unwrap_or_else(|| m.into()))?,
        chis,
        eps: config::eps_list(&f.pick(&p.eps, "eps").unwrap_or_else(|| eps.into()))?,
        grid,
        dt,
        times,
        out: config::out_dir(f.pick(&p.out, "out"))?,
        wall: config::wall_signal(&f.pick(&p.wall, "wall").unwrap_or_else(|| "cosine".into()))?,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

fn num(x: f64) -> String {
    format!("{x:.10e}")
}

fn require_odd(m: usize) -> Result<()> {
    if m.is_multiple_of(2) {
        bail!("the Couette chain needs odd M, got {m}");
    }
    Ok(())
}

pub fn assemble(p: &Params, f: &FileConfig, couette: bool) -> Result<Vec<PathBuf>> {
    let r = resolve(p, f, ["5", "0.1", "0.1", "1.0"])?;
    let mut report = String::new();
    for &m in &r.orders {
        for &chi in &r.chis {
            if couette {
                require_odd(m)?;
                let c = build_couette::<f64>(m, chi)?;
                let cert = check_strict_dissipativity(&c.bc, &c.ac)?;
                let k = couette_constants(m, chi)?;
                writeln!(report, "couette M = {m}, chi = {chi}")?;
                writeln!(report, "  state size = {}", c.ac.nrows())?;
                writeln!(report, "  dissipativity c = {cert:.6}")?;
                writeln!(report, "  K_M = {:.10}, J_M = {:.10}", k.k_m, k.j_m)?;
                continue;
            }
            let sys = MomentSystemF64::bgk(m)?;
            let (big_n, mm, n) = (sys.basis.len(), sys.basis.m(), sys.basis.n());
            let eig = nalgebra::SymmetricEigen::new(sys.a2().clone()).eigenvalues;
            let count = |pred: &dyn Fn(f64) -> bool| eig.iter().filter(|x| pred(**x)).count();
            let pos = count(&|x| x > 1e-10);
            let neg = count(&|x| x < -1e-10);
            let spec = generalized_eigen(&sys)?;
            writeln!(report, "M = {m}, chi = {chi}")?;
            writeln!(report, "  N = {big_n}, m = {mm}, n = {n}")?;
            writeln!(
                report,
                "  A2 eigenvalues: {pos} positive, {neg} negative, {} zero (expected {n}, {n}, {})",
                big_n - pos - neg,
                mm - n
            )?;
            writeln!(
                report,
                "  pencil (A2, Q): {} decaying modes, {} growing, {} zero, {} infinite",
                spec.count(ModeClass::Positive),
                spec.count(ModeClass::Negative),
                spec.count(ModeClass::Zero),
                spec.infinite
            )?;
            if chi > 0.0 {
                let op = build_bc(&sys, chi, BcKind::Modified)?;
                let cert = check_maximal_positive(&op, &sys)?;
                writeln!(
                    report,
                    "  maximal-positive BC: dim = {} (m = {mm}), min quadratic = {:.3e}",
                    cert.dim_n, cert.min_quadratic
                )?;
            }
        }
    }
    let path = r.out.join(if couette {
        "assemble_couette.txt"
    } else {
        "assemble.txt"
    });
    fs::write(&path, report).with_context(|| format!("writing {}", path.display()))?;
    Ok(vec![path])
}

pub fn slip_coeffs(p: &Params, f: &FileConfig) -> Result<Vec<PathBuf>> {
    let r = resolve(p, f, ["4,6,8,10,12", "0.1", "0.1", "1.0"])?;
    let path = r.out.join("slip_coeffs.csv");
    let mut w = csv_writer(&path)?;
    w.write_record([
        "M", "chi", "k0", "t0", "t1", "k1", "k2", "t2", "gamma1", "gamma2", "gamma3", "ref_k0",
        "ref_t0", "ref_t1", "ref_k1", "ref_k2", "ref_t2", "status",
    ])?;
    for &m in &r.orders {
        for &chi in &r.chis {
            let mut row = vec![m.to_string(), chi.to_string()];
            let status = match slip_coefficients::<f64>(m, chi) {
                Ok(c) => {
                    row.extend(
                        [
                            c.k0, c.t0, c.t1, c.k1, c.k2, c.t2, c.gamma1, c.gamma2, c.gamma3,
                        ]
                        .map(num),
                    );
                    "ok".to_string()
                }
                Err(e) => {
                    row.extend(std::iter::repeat_n(String::new(), 9));
                    e.to_string()
                }
            };
            if chi == 1.0 {
                row.extend(REFERENCE.map(|x| x.to_string()));
            } else {
                row.extend(std::iter::repeat_n(String::new(), 6));
            }
            row.push(status);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(vec![path])
}

pub fn couette(p: &Params, f: &FileConfig, slip: Option<String>) -> Result<Vec<PathBuf>> {
    let r = resolve(p, f, ["7", "0.1", "0.1,0.25", "1.0"])?;
    let n_grid = r.grid.unwrap_or(2000);
    let slip = f.pick(&slip, "slip").unwrap_or_else(|| "reference".into());
    let mut written = Vec::new();
    for &m in &r.orders {
        require_odd(m)?;
        for &chi in &r.chis {
            let (k0, k2) = match slip.as_str() {
                "reference" => (REFERENCE_K0, REFERENCE_K2),
                "computed" => {
                    let c = slip_coefficients::<f64>(m + 1, chi)?;
                    (c.k0, c.k2)
                }
                other => bail!("slip must be `reference` or `computed`, got {other:?}"),
            };
            let sys = build_couette::<f64>(m, chi)?;
            for &eps in &r.eps {
                for &t in &r.times {
                    let mom = solve_moment_couette(
                        &sys,
                        &MomentRun {
                            eps,
                            n_grid,
                            t_final: t,
                            dt: r.dt,
                            wall: r.wall.clone(),
                        },
                    )?;
                    let ns = |bc| {
                        solve_ns_couette(&NsRun {
                            eps,
                            viscosity: 1.0,
                            n_grid,
                            length: 1.0,
                            dt: r.dt.unwrap_or(1e-4),
                            t_final: t,
                            wall: r.wall.clone(),
                            bc,
                            scheme: TimeScheme::ImplicitEuler,
                        })
                    };
                    let v0 = ns(NsWallBc::no_slip())?;
                    let v1 = ns(NsWallBc::first_order(k0))?;
                    let v2 = ns(NsWallBc::second_order(k0, k2))?;
                    if [v0.u.len(), v1.u.len(), v2.u.len()]
                        .iter()
                        .any(|&n| n != mom.x.len())
                    {
                        bail!("moment and NS grids differ");
                    }
                    let path = r
                        .out
                        .join(format!("couette_M{m}_chi{chi}_eps{eps}_t{t}.csv"));
                    let mut w = csv_writer(&path)?;
                    w.write_record([
                        "x2",
                        "x2_over_sqrt_eps",
                        "moment",
                        "noslip",
                        "slip1",
                        "slip2",
                    ])?;
                    let se = eps.sqrt();
                    for i in 0..mom.x.len() {
                        let x = mom.x[i];
                        w.write_record(
                            [x, x / se, mom.w[i][0], v0.u[i], v1.u[i], v2.u[i]].map(num),
                        )?;
                    }
                    w.flush()?;
                    written.push(path);
                }
            }
        }
    }
    Ok(written)
}

fn write_report(
    data: &mut csv::Writer<fs::File>,
    slopes: &mut csv::Writer<fs::File>,
    rep: &ErrorReport,
    t: f64,
) -> Result<()> {
    for row in &rep.rows {
        data.write_record([
            rep.label.clone(),
            t.to_string(),
            num(row.neg_log2_eps()),
            num(row.log2_error()),
        ])?;
    }
    let slope = rep.slope.map(num).unwrap_or_default();
    slopes.write_record([rep.label.clone(), t.to_string(), slope])?;
    Ok(())
}

pub fn convergence(p: &Params, f: &FileConfig, composite: bool) -> Result<Vec<PathBuf>> {
    let r = resolve(p, f, ["7", "2^-4..2^-10", "0.1,0.25", "1.0"])?;
    let data_path = r.out.join("convergence.csv");
    let slope_path = r.out.join("slopes.csv");
    let mut data = csv_writer(&data_path)?;
    let mut slopes = csv_writer(&slope_path)?;
    data.write_record(["family", "T", "neg_log2_eps", "log2_error"])?;
    slopes.write_record(["family", "T", "slope"])?;
    for &t in &r.times {
        let cfg = SlipVariantConfig {
            eps: r.eps.clone(),
            n_grid: r.grid.unwrap_or(2000),
            dt: r.dt.unwrap_or(1e-4),
            t_final: t,
            wall: r.wall.clone(),
            ..SlipVariantConfig::default()
        };
        let (a, b) = slip_variant_study(&cfg)?;
        write_report(&mut data, &mut slopes, &a, t)?;
        write_report(&mut data, &mut slopes, &b, t)?;
        if composite {
            for &m in &r.orders {
                require_odd(m)?;
                let cfg = ScalingConfig {
                    order: m,
                    t_final: t,
                    wall: r.wall.clone(),
                    ..Default::default()
                };
                write_report(
                    &mut data,
                    &mut slopes,
                    &moment_vs_asymptotic_study(&cfg)?,
                    t,
                )?;
                write_report(&mut data, &mut slopes, &ns_vs_composite_study(&cfg)?, t)?;
            }
        }
    }
    data.flush()?;
    slopes.flush()?;
    Ok(vec![data_path, slope_path])
}

pub fn slip_bc_records(p: &Params, f: &FileConfig) -> Result<Vec<PathBuf>> {
    let r = resolve(p, f, ["8", "0.1", "0.1", "1.0"])?;
    let path = r.out.join("slip_bc_records.csv");
    let mut w = csv_writer(&path)?;
    w.write_record([
        "M",
        "chi",
        "order",
        "unknown",
        "wall_value",
        "weight",
        "derivative",
    ])?;
    for &m in &r.orders {
        for &chi in &r.chis {
            let c = slip_coefficients::<f64>(m, chi)?;
            for rec in records(&c) {
                for rel in &rec.relations {
                    let wall = rel.wall_value.clone().unwrap_or_else(|| "0".into());
                    let base = [
                        m.to_string(),
                        chi.to_string(),
                        rec.order.label().to_string(),
                    ];
                    if rel.terms.is_empty() {
                        w.write_record(base.iter().cloned().chain([
                            rel.unknown.clone(),
                            wall.clone(),
                            String::new(),
                            String::new(),
                        ]))?;
                    }
                    for t in &rel.terms {
                        w.write_record(base.iter().cloned().chain([
                            rel.unknown.clone(),
                            wall.clone(),
                            num(t.weight),
                            t.derivative.clone(),
                        ]))?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(vec![path])
}
