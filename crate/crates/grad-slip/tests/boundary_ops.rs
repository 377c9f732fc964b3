use grad_slip::boundary_ops::*;
use grad_slip::couette::build_couette;
use grad_slip::{Error, MomentSystemF64};
use nalgebra::SymmetricEigen;

/// Probabilists' Hermite polynomials, normalized, by the three-term recurrence.
fn hermite(n: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = (x * b - (k as f64).sqrt() * a) / ((k + 1) as f64).sqrt();
        a = b;
        b = c;
    }
    b
}

/// Independent quadrature oracle for ∫₀^∞ x^p g h_i h_j.
fn quad(p: i32, i: usize, j: usize) -> f64 {
    let (n, top) = (200_000, 14.0);
    let h = top / n as f64;
    let f = |x: f64| {
        x.powi(p) * (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
            * hermite(i, x)
            * hermite(j, x)
    };
    let mut s = 0.5 * (f(0.0) + f(top));
    for k in 1..n {
        s += f(k as f64 * h);
    }
    s * h
}

#[test]
fn hermite_at_zero_matches_recurrence() {
    for n in 0..12 {
        assert!((hermite_at_zero(n) - hermite(n, 0.0)).abs() < 1e-14);
    }
}

#[test]
fn half_line_integrals_match_quadrature() {
    for i in 0..8 {
        for j in 0..8 {
            assert!(
                (half_line_overlap(i, j) - quad(0, i, j)).abs() < 1e-8,
                "K({i},{j})"
            );
            assert!((half_line_first_moment(i, j) - quad(1, i, j)).abs() < 1e-8);
        }
    }
}

#[test]
fn mo_from_integrals_equals_transport_block() {
    for m in 3..=7 {
        let sys = MomentSystemF64::bgk(m).unwrap();
        let mo = assemble_mo::<f64>(&sys.basis);
        assert!((mo - sys.mo()).amax() < 1e-12, "M = {m}");
    }
}

#[test]
fn s_is_symmetric_positive_definite() {
    let sys = MomentSystemF64::bgk(6).unwrap();
    let s = assemble_s::<f64>(&sys.basis);
    assert!((&s - s.transpose()).amax() < 1e-14);
    let min = SymmetricEigen::new(s).eigenvalues.min();
    assert!(min > 0.0);
}

#[test]
fn chi_hat_values() {
    assert_eq!(chi_hat(0.0), 0.0);
    assert!((chi_hat(1.0) - 2.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
}

#[test]
fn accommodation_range_is_enforced() {
    let sys = MomentSystemF64::bgk(3).unwrap();
    assert!(matches!(
        build_bc(&sys, 1.5, BcKind::Grad),
        Err(Error::BadAccommodation(_))
    ));
    assert!(matches!(
        build_bc(&sys, 0.0, BcKind::Modified),
        Err(Error::BadAccommodation(_))
    ));
    assert!(build_bc(&sys, 0.0, BcKind::Grad).is_ok());
}

#[test]
fn bc_row_counts() {
    let sys = MomentSystemF64::bgk(5).unwrap();
    for kind in [BcKind::Grad, BcKind::Modified] {
        let op = build_bc(&sys, 0.7, kind).unwrap();
        assert_eq!(op.b.nrows(), sys.basis.n());
        assert_eq!(op.b.ncols(), sys.basis.len());
    }
}

#[test]
fn modified_bc_is_maximal_positive() {
    for m in 3..=8 {
        let sys = MomentSystemF64::bgk(m).unwrap();
        for chi in [0.3, 1.0] {
            let op = build_bc(&sys, chi, BcKind::Modified).unwrap();
            let cert = check_maximal_positive(&op, &sys).unwrap();
            assert_eq!(cert.dim_n, sys.basis.m(), "M = {m}");
            assert!(
                cert.min_quadratic >= -1e-10,
                "M = {m}: {}",
                cert.min_quadratic
            );
        }
    }
}

#[test]
fn wall_vector_rejects_normal_velocity() {
    let sys = MomentSystemF64::bgk(3).unwrap();
    let wall = WallData {
        u_w: [0.0, 1.0, 0.0],
        ..Default::default()
    };
    assert!(wall_vector::<f64>(&sys.basis, &wall).is_err());
    let wall = WallData {
        u_w: [1.0, 0.0, 0.0],
        ..Default::default()
    };
    let b = wall_vector::<f64>(&sys.basis, &wall).unwrap();
    assert_eq!(b[sys.basis.position(&[1, 0, 0]).unwrap()], 1.0);
}

#[test]
fn couette_bc_is_strictly_dissipative() {
    for m in [3, 5, 7, 9] {
        let c = build_couette::<f64>(m, 1.0).unwrap();
        let cert = check_strict_dissipativity(&c.bc, &c.ac).unwrap();
        assert!(cert > 0.0);
        assert!(dissipativity_margin(&c.bc, &c.ac, cert) > 0.0);
    }
}
