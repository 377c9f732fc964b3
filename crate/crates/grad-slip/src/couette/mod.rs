//! Unsteady Couette flow: the decoupled moment chain w_k = w_{e₁+k·e₂},
//! its layered asymptotic solution, and the moment / Navier–Stokes solvers.

use nalgebra::{DMatrix, DVector};

use crate::boundary_ops::{assemble_s, chi_hat};
use crate::moment_core::MomentBasis;
use crate::scalar::{lit, Scalar};
use crate::{Error, Result};

mod asymptotic;
mod blocktri;
mod convergence;
mod solvers;

pub use asymptotic::{
    build_asymptotic_couette, AsymptoticCouette, StaggeredState, ViscousGrid, ViscousLayer,
};
pub use convergence::{
    dyadic_eps, error_report, fitted_slope, l2_trapezoid, moment_vs_asymptotic_study,
    ns_vs_composite_study, slip_variant_study, ConvergenceRow, ErrorReport, ProfilePair,
    ScalingConfig, SlipVariantConfig, REFERENCE_K0, REFERENCE_K2,
};
pub use solvers::{
    solve_moment_couette, solve_moment_staggered, solve_ns_couette, upwind_split, MomentProfile,
    MomentRun, NsProfile, NsRun, NsWallBc, StaggeredProfile, StaggeredRun, TimeScheme, WallSignal,
};

/// Matrices of the Couette chain. State order is (W_e; W_o) with
/// W_e = (w₀, w₂, …, w_{M−1}) and W_o = (w₁, w₃, …, w_M).
#[derive(Debug, Clone)]
pub struct CouetteSystem<T: Scalar> {
    pub order: usize,
    pub chi: f64,
    pub chi_hat: f64,
    pub mc: DMatrix<T>,
    pub ac: DMatrix<T>,
    pub qc: DVector<T>,
    pub sc: DMatrix<T>,
    pub bc: DMatrix<T>,
}

impl<T: Scalar> CouetteSystem<T> {
    /// Size of each parity block, (M+1)/2.
    pub fn half(&self) -> usize {
        self.order.div_ceil(2)
    }
    /// Right-hand side b_c = χ̂S_c(u_w, 0, …)ᵀ.
    pub fn wall_rhs(&self, u_w: T) -> DVector<T> {
        self.sc.column(0) * (lit::<T>(self.chi_hat) * u_w)
    }
}

pub fn build_couette<T: Scalar>(order: usize, chi: f64) -> Result<CouetteSystem<T>> {
    if order < 3 {
        return Err(Error::OrderTooSmall(order));
    }
    if order.is_multiple_of(2) {
        return Err(Error::EvenCouetteOrder(order));
    }
    if !(chi > 0.0 && chi <= 1.0) {
        return Err(Error::BadAccommodation(chi));
    }
    let h = order.div_ceil(2);
    let mc = DMatrix::from_fn(h, h, |i, j| {
        if i == j {
            lit::<T>(((2 * i + 1) as f64).sqrt())
        } else if j + 1 == i {
            lit::<T>(((2 * i) as f64).sqrt())
        } else {
            T::zero()
        }
    });
    let mut ac = DMatrix::zeros(2 * h, 2 * h);
    ac.view_mut((0, h), (h, h)).copy_from(&mc);
    ac.view_mut((h, 0), (h, h)).copy_from(&mc.transpose());
    let mut qc = DVector::from_element(2 * h, T::one());
    qc[0] = T::zero();

    // S_c: the wall-integral matrix restricted to e₁ + k·e₂, k even. The
    // chain reaches degree M+1, so it lives in the basis of that order.
    let basis = MomentBasis::new(order + 1)?;
    let s = assemble_s::<T>(&basis);
    let pos: Vec<usize> = (0..h).map(|i| basis.pos([1, 2 * i, 0])).collect();
    let sc = DMatrix::from_fn(h, h, |i, j| s[(pos[i], pos[j])]);

    let ch = chi_hat(chi);
    let mut bc = DMatrix::zeros(h, 2 * h);
    bc.view_mut((0, 0), (h, h)).copy_from(&(&sc * lit::<T>(ch)));
    bc.view_mut((0, h), (h, h)).copy_from(&mc);
    Ok(CouetteSystem {
        order,
        chi,
        chi_hat: ch,
        mc,
        ac,
        qc,
        sc,
        bc,
    })
}

/// Decaying Knudsen modes of the chain without (u, σ):
/// Ǎ_c [R_e; R_o] = [R_e; R_o] Λ₊.
#[derive(Debug, Clone)]
pub struct KnudsenBasis<T: Scalar> {
    pub re: DMatrix<T>,
    pub ro: DMatrix<T>,
    /// Λ₊, descending.
    pub lambda: DVector<T>,
}

impl<T: Scalar> KnudsenBasis<T> {
    /// Full orthogonal R = [[R_e, R_e], [R_o, −R_o]].
    pub fn full(&self) -> DMatrix<T> {
        let k = self.re.nrows();
        let mut r = DMatrix::zeros(2 * k, 2 * k);
        r.view_mut((0, 0), (k, k)).copy_from(&self.re);
        r.view_mut((0, k), (k, k)).copy_from(&self.re);
        r.view_mut((k, 0), (k, k)).copy_from(&self.ro);
        r.view_mut((k, k), (k, k)).copy_from(&(-&self.ro));
        r
    }
}

/// M̌_c = M_c without its first row and column.
pub fn reduced_mc<T: Scalar>(sys: &CouetteSystem<T>) -> DMatrix<T> {
    let h = sys.half();
    sys.mc.view((1, 1), (h - 1, h - 1)).into_owned()
}

pub fn couette_knudsen_basis<T: Scalar>(sys: &CouetteSystem<T>) -> Result<KnudsenBasis<T>> {
    let mch = reduced_mc(sys);
    let k = mch.nrows();
    let svd = mch.clone().svd(true, false);
    let u = svd
        .u
        .ok_or_else(|| Error::Singular("SVD of reduced M_c".into()))?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let lambda = DVector::from_iterator(k, order.iter().map(|&i| svd.singular_values[i]));
    if lambda.iter().any(|l| *l <= T::zero()) {
        return Err(Error::Singular("reduced M_c is rank deficient".into()));
    }
    let half = lit::<T>(0.5f64.sqrt());
    let mut re = u.select_columns(&order) * half;
    for c in 0..k {
        let lead = re.column(c).iter().copied().find(|x| x.abs() > lit(1e-12));
        if lead.is_some_and(|x| x < T::zero()) {
            re.column_mut(c).neg_mut();
        }
    }
    let lam_inv = DMatrix::from_diagonal(&lambda.map(|l| T::one() / l));
    let ro = mch.transpose() * &re * lam_inv;
    Ok(KnudsenBasis { re, ro, lambda })
}

/// Slip constants of the Couette chain and the matrix H_M behind them.
#[derive(Debug, Clone)]
pub struct SlipConstants<T: Scalar> {
    pub k_m: T,
    pub j_m: T,
    pub h_m: DMatrix<T>,
}

/// (1; ǧ) with ǧ = (√2, 0, …).
pub(crate) fn one_g<T: Scalar>(h: usize) -> DVector<T> {
    let mut v = DVector::zeros(h);
    v[0] = T::one();
    v[1] = lit(2f64.sqrt());
    v
}

/// (0; ǧ).
pub(crate) fn zero_g<T: Scalar>(h: usize) -> DVector<T> {
    let mut v = DVector::zeros(h);
    v[1] = lit(2f64.sqrt());
    v
}

pub fn couette_slip_constants<T: Scalar>(
    sys: &CouetteSystem<T>,
    kb: &KnudsenBasis<T>,
) -> Result<SlipConstants<T>> {
    let h = sys.half();
    let mch = reduced_mc(sys);
    let g_re = kb.re.row(0) * lit::<T>(2f64.sqrt());
    let mut top = DMatrix::zeros(h, h);
    top[(0, 0)] = T::one();
    top.view_mut((0, 1), (1, h - 1)).copy_from(&(-g_re));
    top.view_mut((1, 1), (h - 1, h - 1)).copy_from(&kb.re);
    let sch = &sys.sc * lit::<T>(sys.chi_hat);
    let mut h_m = &sch * top;
    let add = mch * &kb.ro;
    let mut blk = h_m.view_mut((1, 1), (h - 1, h - 1));
    blk += add;
    let lu = h_m.clone().lu();
    let sing = || Error::Singular("H_M is singular".into());
    let k_m = lu.solve(&one_g::<T>(h)).ok_or_else(sing)?[0];
    let j_m = -lu.solve(&(&sch * zero_g::<T>(h))).ok_or_else(sing)?[0];
    Ok(SlipConstants { k_m, j_m, h_m })
}

/// Builds the system and its constants in one go.
pub fn couette_constants(order: usize, chi: f64) -> Result<SlipConstants<f64>> {
    let sys = build_couette::<f64>(order, chi)?;
    let kb = couette_knudsen_basis(&sys)?;
    couette_slip_constants(&sys, &kb)
}
