//! Wall boundary matrices built from half-space Hermite integrals, and the
//! well-posedness certificates for them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::moment_core::{MomentBasis, MomentSystem, E2};
use crate::scalar::{lit, to_f64, Scalar};
use crate::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Orthonormal Hermite polynomial h_n at the origin.
pub fn hermite_at_zero(n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    // h_n(0) = (-1)^{n/2} (n-1)!! / sqrt(n!), built up as a running ratio
    let mut v = 1.0;
    let mut k = 0;
    while k < n {
        v *= -((k + 1) as f64).sqrt() / ((k + 2) as f64).sqrt();
        k += 2;
    }
    v
}

/// ∫₀^∞ g(x) h_a(x) h_b(x) dx with g the standard Gaussian density.
pub fn half_line_overlap(a: usize, b: usize) -> f64 {
    if a == b {
        return 0.5;
    }
    if (a + b).is_multiple_of(2) {
        return 0.0;
    }
    // Wronskian identity from the Hermite equation (h_a' = sqrt(a) h_{a-1}).
    let d = |n: usize| {
        if n == 0 {
            0.0
        } else {
            (n as f64).sqrt() * hermite_at_zero(n - 1)
        }
    };
    let g0 = 1.0 / SQRT_2PI;
    g0 * (d(a) * hermite_at_zero(b) - d(b) * hermite_at_zero(a)) / (a as f64 - b as f64)
}

/// ∫₀^∞ x g(x) h_i(x) h_j(x) dx.
pub fn half_line_first_moment(i: usize, j: usize) -> f64 {
    let lo = if i > 0 {
        (i as f64).sqrt() * half_line_overlap(i - 1, j)
    } else {
        0.0
    };
    lo + ((i + 1) as f64).sqrt() * half_line_overlap(i + 1, j)
}

/// ∫ |x| g(x) h_i(x) h_j(x) dx over the whole line.
pub fn half_space_hermite_integral(i: usize, j: usize) -> f64 {
    if (i + j) % 2 == 1 {
        0.0
    } else {
        2.0 * half_line_first_moment(i, j)
    }
}

/// ∫ x g(x) h_i(x) h_j(x) dx over the whole line, via the half-line pieces.
pub fn full_line_first_moment(i: usize, j: usize) -> f64 {
    if (i + j).is_multiple_of(2) {
        0.0
    } else {
        2.0 * half_line_first_moment(i, j)
    }
}

pub fn chi_hat(chi: f64) -> f64 {
    2.0 * chi / ((2.0 - chi) * SQRT_2PI)
}

/// S over the even-α₂ moments.
pub fn assemble_s<T: Scalar>(basis: &MomentBasis) -> DMatrix<T> {
    let m = basis.m();
    let idx = &basis.indices()[..m];
    DMatrix::from_fn(m, m, |i, j| {
        let (a, b) = (idx[i], idx[j]);
        if a[0] == b[0] && a[2] == b[2] {
            lit(SQRT_2PI / 2.0 * half_space_hermite_integral(a[1], b[1]))
        } else {
            T::zero()
        }
    })
}

/// M_o from the first-moment integrals (independent of the transport
/// recursion; must agree with the upper-right block of A₂).
pub fn assemble_mo<T: Scalar>(basis: &MomentBasis) -> DMatrix<T> {
    let (m, n) = (basis.m(), basis.n());
    let idx = basis.indices();
    DMatrix::from_fn(m, n, |i, j| {
        let (a, b) = (idx[i], idx[m + j]);
        if a[0] == b[0] && a[2] == b[2] {
            lit(full_line_first_moment(a[1], b[1]))
        } else {
            T::zero()
        }
    })
}

/// Shift-by-e₂ selector E[𝒩₂(α), 𝒩₁(β)] = δ_{α, β+e₂}.
pub fn assemble_e<T: Scalar>(basis: &MomentBasis) -> DMatrix<T> {
    let (m, n) = (basis.m(), basis.n());
    let mut e = DMatrix::zeros(n, m);
    for (j, b) in basis.indices()[..m].iter().enumerate() {
        let up = [b[0], b[1] + 1, b[2]];
        if let Some(p) = basis.position(&up) {
            e[(p - m, j)] = T::one();
        }
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Grad,
    Modified,
}

/// Wall density, tangential velocity and temperature perturbations.
#[derive(Debug, Clone, Copy, Default)]
pub struct WallData {
    pub rho_w: f64,
    pub u_w: [f64; 3],
    pub theta_w: f64,
}

/// Inhomogeneity b of the wall condition.
pub fn wall_vector<T: Scalar>(basis: &MomentBasis, wall: &WallData) -> Result<DVector<T>> {
    if wall.u_w[1] != 0.0 {
        return Err(Error::Config(
            "wall velocity must be tangential (u_w[1] = 0)".into(),
        ));
    }
    let mut b = DVector::zeros(basis.len());
    b[basis.pos([0, 0, 0])] = lit(wall.rho_w);
    for d in 0..3 {
        let mut e = [0; 3];
        e[d] = 1;
        b[basis.pos(e)] = lit(wall.u_w[d]);
        e[d] = 2;
        b[basis.pos(e)] = lit(wall.theta_w / 2f64.sqrt());
    }
    Ok(b)
}

#[derive(Debug, Clone)]
pub struct BoundaryOperator<T: Scalar> {
    pub kind: BcKind,
    pub chi: f64,
    pub chi_hat: f64,
    pub s: DMatrix<T>,
    pub mo: DMatrix<T>,
    pub e: DMatrix<T>,
    /// n × N assembled condition matrix.
    pub b: DMatrix<T>,
}

pub fn build_bc<T: Scalar>(
    system: &MomentSystem<T>,
    chi: f64,
    kind: BcKind,
) -> Result<BoundaryOperator<T>> {
    let ok = match kind {
        BcKind::Grad => (0.0..=1.0).contains(&chi),
        BcKind::Modified => chi > 0.0 && chi <= 1.0,
    };
    if !ok {
        return Err(Error::BadAccommodation(chi));
    }
    let basis = &system.basis;
    let ch = chi_hat(chi);
    let s = assemble_s::<T>(basis);
    let mo = system.mo();
    let e = assemble_e::<T>(basis);
    let b = match kind {
        BcKind::Grad => {
            let mut left = DMatrix::zeros(basis.m(), basis.len());
            left.view_mut((0, 0), (basis.m(), basis.m()))
                .copy_from(&(&s * lit::<T>(ch)));
            left.view_mut((0, basis.m()), (basis.m(), basis.n()))
                .copy_from(&mo);
            &e * left
        }
        BcKind::Modified => {
            let s_inv = s
                .clone()
                .cholesky()
                .ok_or_else(|| Error::Singular("S is not positive definite".into()))?
                .inverse();
            let mut b = DMatrix::zeros(basis.n(), basis.len());
            b.view_mut((0, 0), (basis.n(), basis.m()))
                .copy_from(&(mo.transpose() * lit::<T>(ch)));
            b.view_mut((0, basis.m()), (basis.n(), basis.n()))
                .copy_from(&(mo.transpose() * s_inv * &mo));
            b
        }
    };
    Ok(BoundaryOperator {
        kind,
        chi,
        chi_hat: ch,
        s,
        mo,
        e,
        b,
    })
}

/// Outcome of the maximal-positivity check.
#[derive(Debug, Clone)]
pub struct MaxPositiveCertificate {
    /// Dimension of the admissible boundary subspace.
    pub dim_n: usize,
    /// min of −vᵀA₂v over unit vectors of the subspace.
    pub min_quadratic: f64,
}

/// Builds the admissible subspace {v : B(v − ρ_w e₀) = 0, u₂ = 0} for
/// homogeneous wall data and checks −vᵀA₂v ≥ 0 on it.
pub fn check_maximal_positive<T: Scalar>(
    op: &BoundaryOperator<T>,
    system: &MomentSystem<T>,
) -> Result<MaxPositiveCertificate> {
    if op.kind != BcKind::Modified {
        return Err(Error::Config(
            "maximal positivity is checked for the modified condition".into(),
        ));
    }
    let basis = &system.basis;
    let (m, n, big_n) = (basis.m(), basis.n(), basis.len());
    let k = basis.pos(E2) - m;
    // v_o = P (v_e − ρ_w e₀),  P = −χ̂ (M_oᵀS⁻¹M_o)⁻¹ M_oᵀ
    let p = if op.chi_hat == 0.0 {
        DMatrix::<T>::zeros(n, m)
    } else {
        let kmat = op.b.view((0, m), (n, n)).into_owned();
        let chol = kmat
            .cholesky()
            .ok_or_else(|| Error::Singular("M_oᵀS⁻¹M_o is not positive definite".into()))?;
        chol.solve(&(op.mo.transpose() * lit::<T>(-op.chi_hat)))
    };
    let e0 = basis.pos([0, 0, 0]);
    let a11 = if op.chi_hat == 0.0 {
        T::one()
    } else {
        p[(k, e0)]
    };
    if op.chi_hat != 0.0 && a11.abs() < lit(1e-12) {
        return Err(Error::Singular("density coefficient a11 vanishes".into()));
    }
    let mut v = DMatrix::<T>::zeros(big_n, m);
    for c in 0..m {
        v[(c, c)] = T::one();
        if op.chi_hat != 0.0 {
            let pv = p.column(c).into_owned();
            let rho = pv[k] / a11;
            let vo = pv - p.column(e0) * rho;
            v.view_mut((m, c), (n, 1)).copy_from(&vo);
        }
    }
    let rank = v.clone().svd(false, false).rank(lit(1e-10));
    let q = v.qr().q();
    let form = -(q.transpose() * system.a2() * &q);
    let eig = SymmetricEigen::new(form).eigenvalues;
    let min = eig.iter().map(|x| to_f64(*x)).fold(f64::INFINITY, f64::min);
    Ok(MaxPositiveCertificate {
        dim_n: rank,
        min_quadratic: min,
    })
}

fn min_eig(mat: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest-found c ∈ (0, 1] (to 1e−6) with BᵀB − cA − c²I positive definite.
pub fn check_strict_dissipativity(bc: &DMatrix<f64>, ac: &DMatrix<f64>) -> Result<f64> {
    let btb = bc.transpose() * bc;
    let n = ac.nrows();
    let ok = |c: f64| min_eig(&btb - ac * c - DMatrix::identity(n, n) * (c * c)) > 0.0;
    if ok(1.0) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo > 0.0 && ok(lo) {
        Ok(lo)
    } else {
        Err(Error::Certificate(
            "no c in (0,1] makes BᵀB − cA − c²I positive definite".into(),
        ))
    }
}

/// Smallest eigenvalue of BᵀB − cA − c²I (diagnostic for a given c).
pub fn dissipativity_margin(bc: &DMatrix<f64>, ac: &DMatrix<f64>, c: f64) -> f64 {
    let n = ac.nrows();
    min_eig(bc.transpose() * bc - ac * c - DMatrix::identity(n, n) * (c * c))
}
