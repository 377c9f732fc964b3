use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::blocktri::BlockTri;
use super::CouetteSystem;
use crate::{Error, Result};

/// Tangential wall velocity u^w(t), with u^w(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum WallSignal {
    /// 1 − cos(2πt).
    Cosine,
    /// Piecewise-linear samples (t_k, u_k) starting at (0, 0).
    Table { t: Vec<f64>, u: Vec<f64> },
}

impl WallSignal {
    pub fn table(t: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if t.len() < 2 || t.len() != u.len() {
            return Err(Error::Config(
                "wall table needs at least two (t, u) samples".into(),
            ));
        }
        if t[0] != 0.0 || u[0] != 0.0 {
            return Err(Error::Config(
                "wall table must start at t=0 with u=0".into(),
            ));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("wall table times must increase".into()));
        }
        Ok(WallSignal::Table { t, u })
    }

    fn segment(t: &[f64], s: f64) -> usize {
        match t.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(t.len() - 2),
            Err(i) => i.saturating_sub(1).min(t.len() - 2),
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            WallSignal::Cosine => 1.0 - (2.0 * PI * s).cos(),
            WallSignal::Table { t, u } => {
                let i = Self::segment(t, s);
                let w = (s - t[i]) / (t[i + 1] - t[i]);
                u[i] + w * (u[i + 1] - u[i])
            }
        }
    }

    /// du^w/dt.
    pub fn rate(&self, s: f64) -> f64 {
        match self {
            WallSignal::Cosine => 2.0 * PI * (2.0 * PI * s).sin(),
            WallSignal::Table { t, u } => {
                let i = Self::segment(t, s);
                (u[i + 1] - u[i]) / (t[i + 1] - t[i])
            }
        }
    }
}

/// Moment run on [0, 1]: upwind flux, implicit relaxation.
#[derive(Debug, Clone)]
pub struct MomentRun {
    pub eps: f64,
    pub n_grid: usize,
    pub t_final: f64,
    /// Time step; `None` picks 0.9 of the CFL limit.
    pub dt: Option<f64>,
    pub wall: WallSignal,
}

#[derive(Debug, Clone)]
pub struct MomentProfile {
    pub x: Vec<f64>,
    /// Node states, (W_e; W_o) ordering.
    pub w: Vec<DVector<f64>>,
}

impl MomentProfile {
    pub fn u(&self) -> Vec<f64> {
        self.w.iter().map(|s| s[0]).collect()
    }
}

fn split_flux(ac: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(ac.clone());
    let r = e.eigenvectors;
    let lp = DMatrix::from_diagonal(&e.eigenvalues.map(|l| l.max(0.0)));
    let lm = DMatrix::from_diagonal(&e.eigenvalues.map(|l| l.min(0.0)));
    let ap = &r * lp * r.transpose();
    let am = &r * lm * r.transpose();
    (ap, am, e.eigenvalues, r)
}

/// A_c⁺ and A_c⁻ of the upwind splitting.
pub fn upwind_split(ac: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (ap, am, _, _) = split_flux(ac);
    (ap, am)
}

pub fn solve_moment_couette(sys: &CouetteSystem<f64>, run: &MomentRun) -> Result<MomentProfile> {
    check_run(run.eps, run.n_grid, run.t_final)?;
    let nv = sys.ac.nrows();
    let (ap, am, lam, r) = split_flux(&sys.ac);
    let lmax = lam.amax();
    let h = 1.0 / run.n_grid as f64;
    let limit = h / lmax;
    let dt_max = match run.dt {
        Some(dt) if dt > limit => return Err(Error::Cfl { dt, limit }),
        Some(dt) => dt,
        None => 0.9 * limit,
    };
    let steps = (run.t_final / dt_max).ceil() as usize;
    let dt = run.t_final / steps as f64;

    let pos: Vec<usize> = (0..nv).filter(|&i| lam[i] > 0.0).collect();
    let neg: Vec<usize> = (0..nv).filter(|&i| lam[i] < 0.0).collect();
    let rp = r.select_columns(&pos);
    let rm = r.select_columns(&neg);
    let brp_inv = (&sys.bc * &rp)
        .try_inverse()
        .ok_or_else(|| Error::Singular("B_c on incoming characteristics".into()))?;
    let closure_out = &rp * &brp_inv; // maps (b − B R₋ w₋) to the incoming part
    let b_rm = &sys.bc * &rm;

    let n = run.n_grid;
    let mut w = vec![DVector::<f64>::zeros(nv); n + 1];
    let boundary = |w1: &DVector<f64>, t: f64| {
        let wm = rm.transpose() * w1;
        let b = sys.wall_rhs(run.wall.value(t));
        &closure_out * (b - &b_rm * &wm) + &rm * wm
    };
    let relax: Vec<f64> = sys
        .qc
        .iter()
        .map(|q| 1.0 / (1.0 + dt * q / run.eps))
        .collect();
    let ratio = dt / h;
    let mut flux = vec![DVector::<f64>::zeros(nv); n];
    for k in 0..steps {
        w[0] = boundary(&w[1], k as f64 * dt);
        for i in 0..n {
            flux[i] = &ap * &w[i] + &am * &w[i + 1];
        }
        for i in 1..n {
            let upd = &w[i] - (&flux[i] - &flux[i - 1]) * ratio;
            w[i] = upd.component_mul(&DVector::from_column_slice(&relax));
        }
        w[n].fill(0.0);
    }
    w[0] = boundary(&w[1], run.t_final);
    let x = (0..=n).map(|i| i as f64 * h).collect();
    Ok(MomentProfile { x, w })
}

fn check_run(eps: f64, n_grid: usize, t_final: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::Config(format!("eps must be positive, got {eps}")));
    }
    if n_grid < 4 {
        return Err(Error::Config(format!("grid too coarse: {n_grid}")));
    }
    if !(t_final > 0.0) {
        return Err(Error::Config(format!(
            "final time must be positive, got {t_final}"
        )));
    }
    Ok(())
}

/// Second-order staggered discretization on [0, L] with BDF2 in time, used
/// where discretization error must stay below the asymptotic remainder.
///
/// Even moments sit on nodes x_j = jh, odd moments on x_{j+½}; the odd
/// state at the wall is eliminated through B_cW = b_c, which keeps the
/// semi-discrete energy dissipative.
#[derive(Debug, Clone)]
pub struct StaggeredRun {
    pub eps: f64,
    pub length: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_final: f64,
    pub wall: WallSignal,
}

#[derive(Debug, Clone)]
pub struct StaggeredProfile {
    pub h: f64,
    /// Nodes x_j = jh, j = 0..N−1 (W_e vanishes at x = L).
    pub xe: Vec<f64>,
    pub we: Vec<DVector<f64>>,
    /// Midpoints x_{j+½}.
    pub xo: Vec<f64>,
    pub wo: Vec<DVector<f64>>,
}

pub fn solve_moment_staggered(
    sys: &CouetteSystem<f64>,
    run: &StaggeredRun,
) -> Result<StaggeredProfile> {
    check_run(run.eps, run.n_cells, run.t_final)?;
    let hb = sys.half();
    let nb = 2 * hb;
    let n = run.n_cells;
    let h = run.length / n as f64;
    let steps = (run.t_final / run.dt).round().max(1.0) as usize;
    let dt = run.t_final / steps as f64;
    let mc = &sys.mc;
    let sch = &sys.sc * sys.chi_hat;
    let mass: Vec<f64> = (0..n)
        .flat_map(|j| {
            let we = if j == 0 { 0.5 * h } else { h };
            std::iter::repeat_n(we, hb).chain(std::iter::repeat_n(h, hb))
        })
        .collect();

    // Semi-discrete operator L split into blocks.
    let mut lower = vec![DMatrix::zeros(nb, nb); n];
    let mut diag = vec![DMatrix::zeros(nb, nb); n];
    let mut upper = vec![DMatrix::zeros(nb, nb); n];
    for j in 0..n {
        let we = if j == 0 { 0.5 * h } else { h };
        let d = &mut diag[j];
        for i in 0..hb {
            d[(i, i)] -= we * sys.qc[i] / run.eps;
            d[(hb + i, hb + i)] -= h * sys.qc[hb + i] / run.eps;
        }
        d.view_mut((0, hb), (hb, hb)).copy_from(&(-mc));
        d.view_mut((hb, 0), (hb, hb)).copy_from(&mc.transpose());
        if j == 0 {
            let mut blk = d.view_mut((0, 0), (hb, hb));
            blk -= &sch;
        } else {
            lower[j].view_mut((0, hb), (hb, hb)).copy_from(mc);
        }
        if j + 1 < n {
            upper[j]
                .view_mut((hb, 0), (hb, hb))
                .copy_from(&(-mc.transpose()));
        }
    }
    let build = |a: f64| -> Result<BlockTri> {
        let scale = |m: &DMatrix<f64>| m * (-dt);
        let lo: Vec<_> = lower.iter().map(scale).collect();
        let up: Vec<_> = upper.iter().map(scale).collect();
        let di: Vec<_> = diag
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let mut out = m * (-dt);
                for i in 0..nb {
                    out[(i, i)] += a * mass[j * nb + i];
                }
                out
            })
            .collect();
        BlockTri::factor(&lo, &di, &up)
    };
    let euler = build(1.0)?;
    let bdf2 = build(1.5)?;
    let s0: Vec<f64> = sch.column(0).iter().copied().collect();

    let mut w = vec![0.0; n * nb];
    let mut w_old = w.clone();
    for k in 0..steps {
        let t = (k + 1) as f64 * dt;
        let uw = run.wall.value(t);
        let mut rhs: Vec<f64> = if k == 0 {
            w.iter().zip(&mass).map(|(a, m)| a * m).collect()
        } else {
            w.iter()
                .zip(&w_old)
                .zip(&mass)
                .map(|((a, b), m)| m * (2.0 * a - 0.5 * b))
                .collect()
        };
        for i in 0..hb {
            rhs[i] += dt * s0[i] * uw;
        }
        if k == 0 {
            euler.solve(&mut rhs);
        } else {
            bdf2.solve(&mut rhs);
        }
        w_old = std::mem::replace(&mut w, rhs);
    }
    let we = (0..n)
        .map(|j| DVector::from_column_slice(&w[j * nb..j * nb + hb]))
        .collect();
    let wo = (0..n)
        .map(|j| DVector::from_column_slice(&w[j * nb + hb..(j + 1) * nb]))
        .collect();
    Ok(StaggeredProfile {
        h,
        xe: (0..n).map(|j| j as f64 * h).collect(),
        we,
        xo: (0..n).map(|j| (j as f64 + 0.5) * h).collect(),
        wo,
    })
}

/// u − u^w = slip·ε u_x + curvature·ε² u_xx + wall_rate·ε ∂_t u^w at x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NsWallBc {
    pub slip: f64,
    pub curvature: f64,
    pub wall_rate: f64,
}

impl NsWallBc {
    pub fn no_slip() -> Self {
        Self::default()
    }
    /// First-order slip with velocity-slip coefficient k0.
    pub fn first_order(k0: f64) -> Self {
        Self {
            slip: 2f64.sqrt() * k0,
            ..Self::default()
        }
    }
    /// Second-order slip with coefficients k0, k2.
    pub fn second_order(k0: f64, k2: f64) -> Self {
        Self {
            slip: 2f64.sqrt() * k0,
            curvature: 2.0 * k2,
            wall_rate: 0.0,
        }
    }
    /// Condition built from the Couette constants K_M, J_M.
    pub fn constructed(k_m: f64, j_m: f64) -> Self {
        Self {
            slip: k_m,
            curvature: 0.0,
            wall_rate: j_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScheme {
    ImplicitEuler,
    Bdf2,
}

/// u_t = ε μ u_xx on [0, L], u(t, L) = 0, slip condition at x = 0.
#[derive(Debug, Clone)]
pub struct NsRun {
    pub eps: f64,
    pub viscosity: f64,
    pub n_grid: usize,
    pub length: f64,
    pub dt: f64,
    pub t_final: f64,
    pub wall: WallSignal,
    pub bc: NsWallBc,
    pub scheme: TimeScheme,
}

#[derive(Debug, Clone)]
pub struct NsProfile {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn solve_ns_couette(run: &NsRun) -> Result<NsProfile> {
    check_run(run.eps, run.n_grid, run.t_final)?;
    if !(run.dt > 0.0) {
        return Err(Error::Config(format!(
            "dt must be positive, got {}",
            run.dt
        )));
    }
    let n = run.n_grid;
    let h = run.length / n as f64;
    let steps = (run.t_final / run.dt).round().max(1.0) as usize;
    let dt = run.t_final / steps as f64;
    let (eps, bc) = (run.eps, run.bc);
    // one-sided second-order stencils for u_x and u_xx at the wall
    let ux = [-1.5 / h, 2.0 / h, -0.5 / h, 0.0];
    let uxx = [2.0 / (h * h), -5.0 / (h * h), 4.0 / (h * h), -1.0 / (h * h)];
    let mut row0 = [0.0; 4];
    for k in 0..4 {
        row0[k] = -bc.slip * eps * ux[k] - bc.curvature * eps * eps * uxx[k];
    }
    row0[0] += 1.0;

    let mut u = vec![0.0; n + 1];
    let mut u_old = u.clone();
    let mut sub = vec![0.0; n + 1];
    let mut dia = vec![0.0; n + 1];
    let mut sup = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];
    for k in 0..steps {
        let t = (k + 1) as f64 * dt;
        let bdf = run.scheme == TimeScheme::Bdf2 && k > 0;
        let (a0, tau) = if bdf { (1.5, dt) } else { (1.0, dt) };
        let r = tau * eps * run.viscosity / (h * h);
        for i in 1..n {
            sub[i] = -r;
            dia[i] = a0 + 2.0 * r;
            sup[i] = -r;
            rhs[i] = if bdf {
                2.0 * u[i] - 0.5 * u_old[i]
            } else {
                u[i]
            };
        }
        dia[n] = 1.0;
        sub[n] = 0.0;
        rhs[n] = 0.0;
        // Fold the 4-point wall row into tridiagonal form using rows 2 and 1.
        let mut c = row0;
        let mut r0 = run.wall.value(t) + bc.wall_rate * eps * run.wall.rate(t);
        if n >= 3 && c[3] != 0.0 {
            let f = c[3] / sup[2];
            c[1] -= f * sub[2];
            c[2] -= f * dia[2];
            r0 -= f * rhs[2];
            c[3] = 0.0;
        }
        if c[2] != 0.0 {
            let f = c[2] / sup[1];
            c[0] -= f * sub[1];
            c[1] -= f * dia[1];
            r0 -= f * rhs[1];
        }
        dia[0] = c[0];
        sup[0] = c[1];
        rhs[0] = r0;
        thomas(&sub, &mut dia, &sup, &mut rhs);
        u_old = std::mem::replace(&mut u, rhs.clone());
    }
    let x = (0..=n).map(|i| i as f64 * h).collect();
    Ok(NsProfile { x, u })
}

pub(super) fn thomas(sub: &[f64], dia: &mut [f64], sup: &[f64], rhs: &mut [f64]) {
    let n = dia.len();
    for i in 1..n {
        let m = sub[i] / dia[i - 1];
        dia[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= dia[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / dia[i];
    }
}
