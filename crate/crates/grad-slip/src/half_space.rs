//! Knudsen-layer half-space problems: A₂ W' = −Q W on z ≥ 0, W(∞) = 0,
//! with the modified wall condition at z = 0.
//!
//! The pencil (A₂, Q) is singular because Q vanishes on the equilibrium
//! space span G. We deflate that space analytically and solve a
//! symmetric-definite problem on the complement.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::boundary_ops::{build_bc, BcKind, BoundaryOperator};
use crate::moment_core::{MomentSystem, MultiIndex};
use crate::scalar::{lit, to_f64, tol, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModeClass {
    Negative,
    Zero,
    Positive,
}

/// Finite eigenpairs of A₂x = λQx, Q-orthonormal, sorted by λ.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Scalar> {
    pub lambda: Vec<T>,
    pub class: Vec<ModeClass>,
    /// N × (#finite) eigenvectors.
    pub vectors: DMatrix<T>,
    /// Multiplicity of the infinite eigenvalue (N − #finite).
    pub infinite: usize,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn count(&self, c: ModeClass) -> usize {
        self.class.iter().filter(|k| **k == c).count()
    }
    pub fn positive(&self) -> Vec<usize> {
        (0..self.lambda.len())
            .filter(|&i| self.class[i] == ModeClass::Positive)
            .collect()
    }
}

fn inv_sym<T: Scalar>(m: DMatrix<T>, what: &str) -> Result<DMatrix<T>> {
    m.try_inverse().ok_or_else(|| Error::Singular(what.into()))
}

fn fix_sign<T: Scalar>(v: &mut DMatrix<T>, col: usize) {
    let small = tol::<T>(1e-10);
    let first = v.column(col).iter().copied().find(|x| x.abs() > small);
    if let Some(x) = first {
        if x < T::zero() {
            v.column_mut(col).neg_mut();
        }
    }
}

/// Generalized eigen-decomposition of (A₂, Q) with Null(Q) = span G.
pub fn generalized_eigen<T: Scalar>(sys: &MomentSystem<T>) -> Result<SpectralDecomposition<T>> {
    let (a2, g, h, q) = (sys.a2(), &sys.g, &sys.h, &sys.q);
    let eig_tol = tol::<T>(1e-12);

    let gag = g.transpose() * a2 * g;
    let eg = SymmetricEigen::new(gag.clone());
    let range: Vec<usize> = (0..5)
        .filter(|&i| eg.eigenvalues[i].abs() > eig_tol)
        .collect();
    let kern: Vec<usize> = (0..5)
        .filter(|&i| eg.eigenvalues[i].abs() <= eig_tol)
        .collect();
    let r = eg.eigenvectors.select_columns(&range);
    let k = eg.eigenvectors.select_columns(&kern);

    let hah = h.transpose() * a2 * h;
    let hag = h.transpose() * a2 * g;
    let rgr_inv = inv_sym(r.transpose() * &gag * &r, "GᵀA₂G on its range")?;
    let cross = &hag * &r; // HᵀA₂GR
    let t = &hah - &cross * &rgr_inv * cross.transpose();
    let qh = h.transpose() * q * h;

    // Equilibrium components in ker(GᵀA₂G) constrain β: KᵀGᵀA₂Hβ = 0.
    let hagk = &hag * &k;
    let z = if k.ncols() == 0 {
        DMatrix::identity(h.ncols(), h.ncols())
    } else {
        null_space(&hagk.transpose())
    };
    let zqz = z.transpose() * &qh * &z;
    let l = zqz
        .cholesky()
        .ok_or_else(|| Error::Singular("ZᵀHᵀQHZ is not positive definite".into()))?
        .l();
    let l_inv = l
        .try_inverse()
        .ok_or_else(|| Error::Singular("Cholesky factor".into()))?;
    let red = &l_inv * z.transpose() * &t * &z * l_inv.transpose();
    let red = (&red + red.transpose()) * lit::<T>(0.5);
    let es = SymmetricEigen::new(red);

    let mut order: Vec<usize> = (0..es.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| es.eigenvalues[i].partial_cmp(&es.eigenvalues[j]).unwrap());
    let lambda: Vec<T> = order.iter().map(|&i| es.eigenvalues[i]).collect();
    let y = l_inv.transpose() * es.eigenvectors.select_columns(&order);
    let beta = &z * y;

    // Reattach the equilibrium part x = G(Rα_r + Kα_k) + Hβ.
    let alpha_r = -(&rgr_inv * cross.transpose() * &beta);
    let mut x = g * (&r * alpha_r) + h * &beta;
    if k.ncols() > 0 {
        let lam_diag = DMatrix::from_diagonal(&DVector::from_vec(lambda.clone()));
        let resid = &qh * &beta * lam_diag - &t * &beta;
        let alpha_k = hagk
            .svd(true, true)
            .solve(&resid, tol(1e-12))
            .map_err(|e| Error::Singular(e.into()))?;
        x += g * (&k * alpha_k);
    }
    for c in 0..x.ncols() {
        fix_sign(&mut x, c);
    }

    let scale = lambda.iter().fold(T::zero(), |a, l| a.max(l.abs()));
    let zero_tol = scale * tol(1e-9);
    let class = lambda
        .iter()
        .map(|l| {
            if l.abs() <= zero_tol {
                ModeClass::Zero
            } else if *l > T::zero() {
                ModeClass::Positive
            } else {
                ModeClass::Negative
            }
        })
        .collect();
    let infinite = sys.basis.len() - lambda.len();
    Ok(SpectralDecomposition {
        lambda,
        class,
        vectors: x,
        infinite,
    })
}

/// Orthonormal basis of the null space of a full-row-rank `c` (columns).
///
/// Completes an orthonormal basis of the row space with unit vectors by
/// twice-applied Gram–Schmidt; the added vectors span the kernel.
fn null_space<T: Scalar>(c: &DMatrix<T>) -> DMatrix<T> {
    let n = c.ncols();
    let mut basis: Vec<DVector<T>> = Vec::with_capacity(n);
    let project = |v: &mut DVector<T>, basis: &[DVector<T>]| {
        for _ in 0..2 {
            for b in basis {
                let d = b.dot(v);
                v.axpy(-d, b, T::one());
            }
        }
    };
    for r in 0..c.nrows() {
        let mut v = c.row(r).transpose();
        project(&mut v, &basis);
        let nv = v.norm();
        if nv > tol(1e-12) {
            basis.push(v / nv);
        }
    }
    let rows = basis.len();
    for i in 0..n {
        let mut v = DVector::zeros(n);
        v[i] = T::one();
        project(&mut v, &basis);
        let nv = v.norm();
        if nv > lit(0.5) {
            basis.push(v / nv);
        }
    }
    let mut z = DMatrix::from_columns(&basis[rows..]);
    for c in 0..z.ncols() {
        fix_sign(&mut z, c);
    }
    z
}

/// Decaying half-space solution and the induced equilibrium jump.
#[derive(Debug, Clone)]
pub struct HalfSpaceSolution<T: Scalar> {
    pub coeffs: DVector<T>,
    pub rates: Vec<T>,
    pub modes: DMatrix<T>,
    /// G_eᵀh = (φ0, φ1, φ3, φ4)ᵀh.
    pub ge_h: [T; 4],
}

impl<T: Scalar> HalfSpaceSolution<T> {
    /// Knudsen-layer state at distance z from the wall.
    pub fn eval(&self, z: T) -> DVector<T> {
        let mut w = DVector::zeros(self.modes.nrows());
        for (i, (&c, &l)) in self.coeffs.iter().zip(&self.rates).enumerate() {
            w += self.modes.column(i) * (c * (-z / l).exp());
        }
        w
    }
}

/// Solves B(G_eG_eᵀh + W̌(0)) = BH(HᵀQH)⁻¹𝒜 for the decaying modes of W̌
/// and the equilibrium jump G_eᵀh.
pub fn solve_half_space<T: Scalar>(
    sys: &MomentSystem<T>,
    bc: &BoundaryOperator<T>,
    spec: &SpectralDecomposition<T>,
    driver: &DVector<T>,
) -> Result<HalfSpaceSolution<T>> {
    if driver.len() != sys.h.ncols() {
        return Err(Error::SizeMismatch {
            expected: sys.h.ncols(),
            got: driver.len(),
        });
    }
    let pos = spec.positive();
    let xp = spec.vectors.select_columns(&pos);
    let np = pos.len();
    let n = bc.b.nrows();
    if np + 4 != n {
        return Err(Error::Singular(format!(
            "{np} decaying modes + 4 equilibrium unknowns do not match {n} boundary rows"
        )));
    }
    let mut mat = DMatrix::zeros(n, n);
    mat.view_mut((0, 0), (n, np)).copy_from(&(&bc.b * &xp));
    mat.view_mut((0, np), (n, 4)).copy_from(&(&bc.b * &sys.ge));
    let qh = sys.h.transpose() * &sys.q * &sys.h;
    let hq = qh
        .cholesky()
        .ok_or_else(|| Error::Singular("HᵀQH".into()))?
        .solve(driver);
    let rhs = &bc.b * (&sys.h * hq);
    let sol = mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("half-space boundary system".into()))?;
    Ok(HalfSpaceSolution {
        coeffs: sol.rows(0, np).into_owned(),
        rates: pos.iter().map(|&i| spec.lambda[i]).collect(),
        modes: xp,
        ge_h: [sol[np], sol[np + 1], sol[np + 2], sol[np + 3]],
    })
}

/// Driving terms of the six elemental problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    /// r₁₂: shear, gives k0.
    R12,
    /// s₁: tangential heat flux, gives t0.
    S1,
    /// s₂: normal heat flux, gives t1.
    S2,
    /// √2·Hᵀe_{2e₂}: normal stress, gives k1.
    Sqrt2Hr22,
    /// −HᵀA₂H(HᵀQH)⁻¹r₁₂, gives k2.
    A2R12,
    /// −HᵀA₂H(HᵀQH)⁻¹s₂, gives t2.
    A2S2,
}

impl Driver {
    pub fn name(self) -> &'static str {
        match self {
            Driver::R12 => "r12",
            Driver::S1 => "s1",
            Driver::S2 => "s2",
            Driver::Sqrt2Hr22 => "sqrt2_Hr22",
            Driver::A2R12 => "A2_r12",
            Driver::A2S2 => "A2_s2",
        }
    }
}

fn s_vec<T: Scalar>(sys: &MomentSystem<T>, d: usize) -> DVector<T> {
    let mut v = DVector::<T>::zeros(sys.basis.len());
    let mut a: MultiIndex = [0; 3];
    a[d] = 3;
    v[sys.basis.pos(a)] = lit(1.5f64.sqrt());
    for i in (0..3).filter(|&i| i != d) {
        let mut a: MultiIndex = [0; 3];
        a[d] = 1;
        a[i] = 2;
        v[sys.basis.pos(a)] = lit(0.5f64.sqrt());
    }
    sys.h.transpose() * v
}

/// Precomputed reduced operators shared by drivers and γ coefficients.
struct Reduced<T: Scalar> {
    qh_inv: DMatrix<T>,
    hah: DMatrix<T>,
    r12: DVector<T>,
    s1: DVector<T>,
    s2: DVector<T>,
}

impl<T: Scalar> Reduced<T> {
    fn new(sys: &MomentSystem<T>) -> Result<Self> {
        let qh = sys.h.transpose() * &sys.q * &sys.h;
        let qh_inv = qh
            .cholesky()
            .ok_or_else(|| Error::Singular("HᵀQH is not positive definite".into()))?
            .inverse();
        Ok(Self {
            qh_inv,
            hah: sys.h.transpose() * sys.a2() * &sys.h,
            r12: sys.h_row([1, 1, 0]),
            s1: s_vec(sys, 0),
            s2: s_vec(sys, 1),
        })
    }

    fn driver(&self, sys: &MomentSystem<T>, d: Driver) -> DVector<T> {
        match d {
            Driver::R12 => self.r12.clone(),
            Driver::S1 => self.s1.clone(),
            Driver::S2 => self.s2.clone(),
            Driver::Sqrt2Hr22 => sys.h_row([0, 2, 0]) * lit::<T>(2f64.sqrt()),
            Driver::A2R12 => -(&self.hah * (&self.qh_inv * &self.r12)),
            Driver::A2S2 => -(&self.hah * (&self.qh_inv * &self.s2)),
        }
    }
}

pub fn driver_vector<T: Scalar>(sys: &MomentSystem<T>, d: Driver) -> Result<DVector<T>> {
    Ok(Reduced::new(sys)?.driver(sys, d))
}

/// Viscosity, conductivity and cross-coupling coefficients.
///
/// The conductivity carries the factor 2/5 that makes the heat flux read
/// q = −(5/2)γ₂∇θ with the θ normalization used here; BGK then gives 1.
pub fn gamma_coefficients<T: Scalar>(sys: &MomentSystem<T>) -> Result<(T, T, T)> {
    let r = Reduced::new(sys)?;
    let qr = &r.qh_inv * &r.r12;
    let qs = &r.qh_inv * &r.s1;
    let g1 = r.r12.dot(&qr);
    let g2 = r.s1.dot(&qs) * lit(0.4);
    let g3 = qr.dot(&(&r.hah * &qs));
    Ok((g1, g2, g3))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlipCoefficientSet<T: Scalar> {
    pub order: usize,
    pub chi: f64,
    pub k0: T,
    pub t0: T,
    pub t1: T,
    pub k1: T,
    pub k2: T,
    pub t2: T,
    pub gamma1: T,
    pub gamma2: T,
    pub gamma3: T,
}

/// Runs the six elemental problems for BGK at order `M` and accommodation χ.
pub fn slip_coefficients<T: Scalar>(order: usize, chi: f64) -> Result<SlipCoefficientSet<T>> {
    let sys = MomentSystem::<T>::bgk(order)?;
    slip_coefficients_for(&sys, chi)
}

pub fn slip_coefficients_for<T: Scalar>(
    sys: &MomentSystem<T>,
    chi: f64,
) -> Result<SlipCoefficientSet<T>> {
    let bc = build_bc(sys, chi, BcKind::Modified)?;
    let spec = generalized_eigen(sys)?;
    let red = Reduced::new(sys)?;
    let solve = |d: Driver| -> Result<[T; 4]> {
        solve_half_space(sys, &bc, &spec, &red.driver(sys, d))
            .map(|s| s.ge_h)
            .map_err(|e| Error::Singular(format!("{} problem: {e}", d.name())))
    };
    let s2 = 2f64.sqrt();
    let (s3, s6) = (3f64.sqrt(), 6f64.sqrt());
    let k0 = solve(Driver::R12)?[1] * lit(s2 / 2.0);
    let t1 = solve(Driver::S2)?[3] * lit(s3 / 3.0);
    let t0 = solve(Driver::S1)?[1] * lit(0.5);
    let k1 = solve(Driver::Sqrt2Hr22)?[3] * lit(s6 / 3.0);
    let k2 = solve(Driver::A2R12)?[1] * lit(0.5);
    let t2 = solve(Driver::A2S2)?[3] * lit(s6 / 6.0);
    let (gamma1, gamma2, gamma3) = gamma_coefficients(sys)?;
    Ok(SlipCoefficientSet {
        order: sys.basis.order(),
        chi,
        k0,
        t0,
        t1,
        k1,
        k2,
        t2,
        gamma1,
        gamma2,
        gamma3,
    })
}

/// Coefficients of the second-order slip and jump conditions at Knudsen number ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsSlipBc {
    /// Weight of ∂u_i/∂x₂ + ∂u₂/∂x_i.
    pub velocity_slip: f64,
    /// Weight of ∂θ/∂x_i in the velocity condition.
    pub thermal_creep: f64,
    /// Weight of ∂²u_i/∂x₂².
    pub velocity_curvature: f64,
    /// Weight of ∂θ/∂x₂.
    pub temperature_jump: f64,
    /// Weight of ∂²θ/∂x₂².
    pub temperature_curvature: f64,
    /// Weight of ∂u₂/∂x₂ in the temperature condition.
    pub normal_strain: f64,
}

pub fn ns_slip_bc<T: Scalar>(c: &SlipCoefficientSet<T>, eps: f64) -> NsSlipBc {
    let s2 = 2f64.sqrt();
    NsSlipBc {
        velocity_slip: s2 * to_f64(c.k0) * eps,
        thermal_creep: 2.0 * to_f64(c.t0) * eps,
        velocity_curvature: 2.0 * to_f64(c.k2) * eps * eps,
        temperature_jump: s2 * to_f64(c.t1) * eps,
        temperature_curvature: 2.0 * to_f64(c.t2) * eps * eps,
        normal_strain: to_f64(c.k1) * eps,
    }
}
