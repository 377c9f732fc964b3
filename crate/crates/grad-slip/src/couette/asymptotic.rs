//! Layered asymptotic solution of the Couette chain: a viscous layer of
//! width √ε plus a Knudsen layer of width ε, up to order ε^{3/2}.

use nalgebra::{DMatrix, DVector};

use super::solvers::{thomas, WallSignal};
use super::{
    build_couette, couette_knudsen_basis, couette_slip_constants, one_g, zero_g, CouetteSystem,
    KnudsenBasis, SlipConstants,
};
use crate::{Error, Result};

/// Discretization of the viscous-layer heat problems on y = x/√ε ∈ [0, depth].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousGrid {
    pub depth: f64,
    pub dy: f64,
    pub dt: f64,
}

impl Default for ViscousGrid {
    fn default() -> Self {
        Self {
            depth: 10.0,
            dy: 1e-3,
            dt: 1e-4,
        }
    }
}

/// Viscous-layer fields at the final time.
#[derive(Debug, Clone)]
pub struct ViscousLayer {
    pub y: Vec<f64>,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    /// ∂_t u0, solved as its own heat problem with data ∂_t u^w.
    pub p: Vec<f64>,
    pub u0y: Vec<f64>,
    pub u1y: Vec<f64>,
    pub u2y: Vec<f64>,
    pub py: Vec<f64>,
    pub u1yy: Vec<f64>,
    pub u0y0: f64,
    pub u1y0: f64,
    pub u2y0: f64,
    pub py0: f64,
}

/// np.gradient-style derivative: central inside, one-sided second order at the ends.
fn gradient(u: &[f64], dy: f64) -> Vec<f64> {
    let n = u.len();
    let mut g = vec![0.0; n];
    for i in 1..n - 1 {
        g[i] = (u[i + 1] - u[i - 1]) / (2.0 * dy);
    }
    g[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy);
    g[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dy);
    g
}

fn wall_slope(u: &[f64], dy: f64) -> f64 {
    (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy)
}

/// Crank–Nicolson for u_t = u_yy with Dirichlet data at y = 0 and zero at the far end.
struct HeatCn {
    r: f64,
    n: usize,
    sub: Vec<f64>,
    dia: Vec<f64>,
    sup: Vec<f64>,
}

impl HeatCn {
    fn new(n: usize, r: f64) -> Self {
        let m = n - 1;
        Self {
            r,
            n,
            sub: vec![-r / 2.0; m],
            dia: vec![1.0 + r; m],
            sup: vec![-r / 2.0; m],
        }
    }

    fn step(&self, u: &mut [f64], g_new: f64) {
        let r = self.r;
        let mut rhs: Vec<f64> = (1..self.n)
            .map(|i| u[i] * (1.0 - r) + r / 2.0 * (u[i - 1] + u[i + 1]))
            .collect();
        rhs[0] += r / 2.0 * g_new;
        let mut dia = self.dia.clone();
        thomas(&self.sub, &mut dia, &self.sup, &mut rhs);
        u[0] = g_new;
        u[1..self.n].copy_from_slice(&rhs);
        u[self.n] = 0.0;
    }
}

impl ViscousLayer {
    /// Solves the viscous hierarchy with slip constants K, J up to time `t`.
    pub fn compute(k: f64, j: f64, wall: &WallSignal, t: f64, grid: ViscousGrid) -> Result<Self> {
        if !(grid.dy > 0.0 && grid.dt > 0.0 && grid.depth > 4.0 * grid.dy) {
            return Err(Error::Config("invalid viscous-layer grid".into()));
        }
        let ny = (grid.depth / grid.dy).round() as usize;
        let dy = grid.depth / ny as f64;
        let steps = (t / grid.dt).round().max(1.0) as usize;
        let dt = t / steps as f64;
        let cn = HeatCn::new(ny, dt / (dy * dy));
        let z = vec![0.0; ny + 1];
        let (mut u0, mut u1, mut p, mut v) = (z.clone(), z.clone(), z.clone(), z);
        for s in 0..steps {
            let tn = (s + 1) as f64 * dt;
            cn.step(&mut u0, wall.value(tn));
            cn.step(&mut p, wall.rate(tn));
            let g1 = k * wall_slope(&u0, dy);
            cn.step(&mut u1, g1);
            let gv = k * wall_slope(&u1, dy) + j * wall.rate(tn);
            cn.step(&mut v, gv);
        }
        let y: Vec<f64> = (0..=ny).map(|i| i as f64 * dy).collect();
        let py = gradient(&p, dy);
        let u2: Vec<f64> = (0..=ny).map(|i| -0.5 * y[i] * py[i] + v[i]).collect();
        let u1y = gradient(&u1, dy);
        Ok(Self {
            u0y: gradient(&u0, dy),
            u1yy: gradient(&u1y, dy),
            u2y: gradient(&u2, dy),
            u0y0: wall_slope(&u0, dy),
            u1y0: wall_slope(&u1, dy),
            u2y0: wall_slope(&u2, dy),
            py0: wall_slope(&p, dy),
            y,
            u0,
            u1,
            u2,
            p,
            u1y,
            py,
        })
    }

    /// Linear interpolation at y, zero beyond the layer depth.
    pub fn at(&self, field: &[f64], y: f64) -> f64 {
        let dy = self.y[1];
        let n = self.y.len() - 1;
        if y >= self.y[n] {
            return 0.0;
        }
        let s = (y / dy).max(0.0);
        let i = (s.floor() as usize).min(n - 1);
        let w = s - i as f64;
        field[i] * (1.0 - w) + field[i + 1] * w
    }
}

/// Even-moment states at the nodes and odd-moment states at the half nodes.
pub type StaggeredState = (Vec<DVector<f64>>, Vec<DVector<f64>>);

/// Asymptotic Couette solution for a fixed order, wall signal and time.
#[derive(Debug, Clone)]
pub struct AsymptoticCouette {
    pub sys: CouetteSystem<f64>,
    pub kb: KnudsenBasis<f64>,
    pub constants: SlipConstants<f64>,
    pub layer: ViscousLayer,
    pub t: f64,
    pub wall: WallSignal,
}

pub fn build_asymptotic_couette(
    order: usize,
    chi: f64,
    wall: &WallSignal,
    t: f64,
    grid: ViscousGrid,
) -> Result<AsymptoticCouette> {
    let sys = build_couette::<f64>(order, chi)?;
    let kb = couette_knudsen_basis(&sys)?;
    let constants = couette_slip_constants(&sys, &kb)?;
    let layer = ViscousLayer::compute(constants.k_m, constants.j_m, wall, t, grid)?;
    Ok(AsymptoticCouette {
        sys,
        kb,
        constants,
        layer,
        t,
        wall: wall.clone(),
    })
}

/// Knudsen-layer amplitudes and the order-3 particular solution data.
struct KnudsenData {
    a1: DVector<f64>,
    a2: DVector<f64>,
    a3: DVector<f64>,
    d: DVector<f64>,
    /// Rᵀ(I + 2e₁e₁ᵀ)[R_e; R_o].
    c: DMatrix<f64>,
    g_re: DVector<f64>,
}

impl AsymptoticCouette {
    /// Composite Navier–Stokes profile u0 + √ε u1 + ε u2 at points x.
    pub fn composite_ns(&self, eps: f64, x: &[f64]) -> Vec<f64> {
        let l = &self.layer;
        let se = eps.sqrt();
        x.iter()
            .map(|&xi| {
                let y = xi / se;
                l.at(&l.u0, y) + se * l.at(&l.u1, y) + eps * l.at(&l.u2, y)
            })
            .collect()
    }

    fn hp(&self) -> usize {
        self.sys.half() - 1
    }

    fn stacked(&self) -> DMatrix<f64> {
        let hp = self.hp();
        let mut v = DMatrix::zeros(2 * hp, hp);
        v.view_mut((0, 0), (hp, hp)).copy_from(&self.kb.re);
        v.view_mut((hp, 0), (hp, hp)).copy_from(&self.kb.ro);
        v
    }

    /// Order-3 Knudsen solution (in R-coordinates mapped back) at z for amplitudes a3.
    fn kn3(&self, kd: &KnudsenData, z: f64, a3: &DVector<f64>) -> DVector<f64> {
        let hp = self.hp();
        let lam = &self.kb.lambda;
        let e: Vec<f64> = lam.iter().map(|l| (-z / l).exp()).collect();
        let mut v = DVector::zeros(2 * hp);
        for i in 0..hp {
            for k in 0..hp {
                if k == i {
                    v[i] -= kd.c[(i, i)] * kd.d[i] / lam[i] * z * e[i];
                } else {
                    v[i] -= kd.c[(i, k)] * kd.d[k] * lam[k] / (lam[k] - lam[i]) * e[k];
                }
                v[hp + i] -= kd.c[(hp + i, k)] * kd.d[k] * lam[k] / (lam[k] + lam[i]) * e[k];
            }
            v[i] += a3[i] * e[i];
        }
        self.kb.full() * v
    }

    fn knudsen_data(&self) -> Result<KnudsenData> {
        let h = self.sys.half();
        let hp = h - 1;
        let l = &self.layer;
        let lam = &self.kb.lambda;
        let hm = self.constants.h_m.clone().lu();
        let sing = || Error::Singular("H_M is singular".into());
        let sch = &self.sys.sc * self.sys.chi_hat;
        let og = one_g::<f64>(h);
        let g: DVector<f64> = og.rows(1, hp).into_owned();
        let s1 = hm.solve(&og).ok_or_else(sing)?;
        let s1t = s1.rows(1, hp).into_owned();
        let a1 = &s1t * l.u0y0;
        let rhs2 = &og * l.u1y0 - &sch * zero_g::<f64>(h) * self.wall.rate(self.t);
        let a2 = hm.solve(&rhs2).ok_or_else(sing)?.rows(1, hp).into_owned();
        let d = &s1t * l.py0;
        let mut p = DMatrix::identity(2 * hp, 2 * hp);
        p[(0, 0)] = 3.0;
        let c = self.kb.full().transpose() * p * self.stacked();
        let g_re = self.kb.re.transpose() * &g;
        let mut kd = KnudsenData {
            a1,
            a2,
            a3: DVector::zeros(hp),
            d,
            c,
            g_re,
        };

        // a3 from the order-ε^{3/2} wall condition; the viscous unknown is discarded.
        let p3 = self.kn3(&kd, 0.0, &kd.a3);
        let lam_d = lam.component_mul(&kd.d);
        let lam2_d = lam.component_mul(&lam_d);
        let k_m = self.constants.k_m;
        let cu = -g.dot(&p3.rows(0, hp)) - lam2_d.dot(&kd.g_re);
        let mut ce = p3.rows(0, hp).into_owned();
        ce[0] += 2f64.sqrt() * k_m * l.py0;
        let cs = -l.py0 - l.u2y0 - lam_d.dot(&kd.g_re);
        let mut co = p3.rows(hp, hp).into_owned();
        co[0] -= 6f64.sqrt() * l.py0;
        let mut even = DVector::zeros(h);
        even[0] = cu;
        even.rows_mut(1, hp).copy_from(&ce);
        let mut odd = DVector::zeros(h);
        odd[0] = cs;
        odd.rows_mut(1, hp).copy_from(&(&g * cs + co));
        let rhs3 = -(&sch * even + odd);
        kd.a3 = hm.solve(&rhs3).ok_or_else(sing)?.rows(1, hp).into_owned();
        Ok(kd)
    }

    /// Knudsen contributions at x: (u, W_e tail, σ, W_o tail).
    fn knudsen_at(
        &self,
        kd: &KnudsenData,
        eps: f64,
        x: f64,
    ) -> (f64, DVector<f64>, f64, DVector<f64>) {
        let hp = self.hp();
        let se = eps.sqrt();
        let z = x / eps;
        let lam = &self.kb.lambda;
        let e = lam.map(|l| (-z / l).exp());
        let st = self.stacked();
        let w1 = &st * e.component_mul(&kd.a1);
        let w2 = &st * e.component_mul(&kd.a2);
        let w3 = self.kn3(kd, z, &kd.a3);
        let ed = e.component_mul(&kd.d);
        let sig3 = -lam.component_mul(&ed).dot(&kd.g_re);
        let u3 = -2f64.sqrt() * w3[0] - lam.component_mul(lam).component_mul(&ed).dot(&kd.g_re);
        let u = se * (-2f64.sqrt() * w1[0]) + eps * (-2f64.sqrt() * w2[0]) + eps * se * u3;
        let w = &w1 * se + &w2 * eps + &w3 * (eps * se);
        (
            u,
            w.rows(0, hp).into_owned(),
            eps * se * sig3,
            w.rows(hp, hp).into_owned(),
        )
    }

    /// W_app on a staggered grid: even moments at `xe`, odd moments at `xo`.
    pub fn staggered(&self, eps: f64, xe: &[f64], xo: &[f64]) -> Result<StaggeredState> {
        if !(eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {eps}")));
        }
        let h = self.sys.half();
        let l = &self.layer;
        let se = eps.sqrt();
        let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
        let kd = self.knudsen_data()?;
        let we = xe
            .iter()
            .map(|&x| {
                let y = x / se;
                let mut w = DVector::zeros(h);
                w[0] = l.at(&l.u0, y) + se * l.at(&l.u1, y) + eps * l.at(&l.u2, y);
                w[1] = eps * s2 * l.at(&l.p, y) + eps * se * s2 * l.at(&l.u1yy, y);
                let (u, tail, _, _) = self.knudsen_at(&kd, eps, x);
                w[0] += u;
                let mut rest = w.rows_mut(1, h - 1);
                rest += tail;
                w
            })
            .collect();
        let wo = xo
            .iter()
            .map(|&x| {
                let y = x / se;
                let mut w = DVector::zeros(h);
                w[0] = -se * l.at(&l.u0y, y)
                    - eps * l.at(&l.u1y, y)
                    - eps * se * (l.at(&l.py, y) + l.at(&l.u2y, y));
                w[1] = -eps * se * s6 * l.at(&l.py, y);
                let (_, _, sig, tail) = self.knudsen_at(&kd, eps, x);
                w[0] += sig;
                let mut rest = w.rows_mut(1, h - 1);
                rest += tail;
                w
            })
            .collect();
        Ok((we, wo))
    }
}
