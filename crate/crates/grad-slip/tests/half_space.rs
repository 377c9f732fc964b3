use grad_slip::general_slip_bc::assemble_ns_system_coeffs;
use grad_slip::half_space::*;
use grad_slip::MomentSystemF64;

const TOL: f64 = 2e-4;

#[test]
fn velocity_slip_table_even_orders() {
    let rows = [
        (4, 0.99247, 0.36988, -0.73976),
        (6, 1.00360, 0.37617, -0.75233),
        (8, 1.00772, 0.37848, -0.75697),
        (10, 1.00984, 0.37967, -0.75934),
        (12, 1.01112, 0.38039, -0.76077),
    ];
    for (m, k0, t0, k2) in rows {
        let c = slip_coefficients::<f64>(m, 1.0).unwrap();
        assert!((c.k0 - k0).abs() <= TOL, "k0 at M={m}: {}", c.k0);
        assert!((c.t0 - t0).abs() <= TOL, "t0 at M={m}: {}", c.t0);
        assert!((c.k2 - k2).abs() <= TOL, "k2 at M={m}: {}", c.k2);
    }
}

#[test]
fn temperature_jump_table_odd_orders() {
    let rows = [
        (3, 0.42763, 1.12868, None),
        (5, 0.43922, 1.27183, Some(-1.38715)),
        (7, 0.44019, 1.28673, Some(-1.40694)),
        (9, 0.44040, 1.29213, Some(-1.41403)),
        (11, 0.44046, 1.29488, Some(-1.41760)),
    ];
    for (m, k1, t1, t2) in rows {
        let c = slip_coefficients::<f64>(m, 1.0).unwrap();
        assert!((c.k1 - k1).abs() <= TOL, "k1 at M={m}: {}", c.k1);
        assert!((c.t1 - t1).abs() <= TOL, "t1 at M={m}: {}", c.t1);
        if let Some(t2) = t2 {
            assert!((c.t2 - t2).abs() <= TOL, "t2 at M={m}: {}", c.t2);
        }
    }
}

#[test]
fn bgk_transport_coefficients_are_one() {
    for m in 3..=9 {
        let sys = MomentSystemF64::bgk(m).unwrap();
        let (g1, g2, g3) = gamma_coefficients(&sys).unwrap();
        for g in [g1, g2, g3] {
            assert!((g - 1.0).abs() < 1e-10, "M = {m}: {g}");
        }
        let ns = assemble_ns_system_coeffs((g1, g2, g3));
        assert!((ns.viscosity - 1.0).abs() < 1e-10);
    }
}

#[test]
fn viscosity_scales_inversely_with_collision_rate() {
    let mut sys = MomentSystemF64::bgk(5).unwrap();
    sys.q *= 2.0;
    let (g1, _, _) = gamma_coefficients(&sys).unwrap();
    assert!((g1 - 0.5).abs() < 1e-12);
}

#[test]
fn spectrum_signature() {
    for m in 3..=8 {
        let sys = MomentSystemF64::bgk(m).unwrap();
        let spec = generalized_eigen(&sys).unwrap();
        let n = sys.basis.n();
        assert_eq!(spec.count(ModeClass::Positive), n - 4, "M = {m}");
        assert_eq!(spec.count(ModeClass::Negative), n - 4, "M = {m}");
        // Q-orthonormality on the finite modes
        let x = &spec.vectors;
        let gram = x.transpose() * &sys.q * x;
        let k = gram.nrows();
        assert!((gram - nalgebra::DMatrix::identity(k, k)).amax() < 1e-9);
        // A₂x = λQx
        for (i, l) in spec.lambda.iter().enumerate() {
            let r = sys.a2() * x.column(i) - &sys.q * x.column(i) * *l;
            assert!(r.amax() < 1e-9);
        }
    }
}

#[test]
fn half_space_solution_decays_and_satisfies_bc() {
    let sys = MomentSystemF64::bgk(5).unwrap();
    let bc =
        grad_slip::boundary_ops::build_bc(&sys, 1.0, grad_slip::boundary_ops::BcKind::Modified)
            .unwrap();
    let spec = generalized_eigen(&sys).unwrap();
    let d = driver_vector(&sys, Driver::R12).unwrap();
    let sol = solve_half_space(&sys, &bc, &spec, &d).unwrap();
    assert!(sol.eval(60.0).amax() < 1e-10);
    assert!(sol.rates.iter().all(|r| *r > 0.0));
}

#[test]
fn reference_slip_lengths() {
    let eps = (2.0 / std::f64::consts::PI).sqrt();
    let c = SlipCoefficientSet::<f64> {
        order: 0,
        chi: 1.0,
        k0: 1.01619,
        t0: 0.0,
        t1: 0.0,
        k1: 0.0,
        k2: -0.76632,
        t2: 0.0,
        gamma1: 1.0,
        gamma2: 1.0,
        gamma3: 1.0,
    };
    let bc = ns_slip_bc(&c, eps);
    assert!((bc.velocity_slip - 1.146).abs() <= 0.002);
    assert!((bc.velocity_curvature + 0.976).abs() <= 0.002);
}

#[test]
fn slip_coefficients_in_f32() {
    let c = slip_coefficients::<f32>(4, 1.0).unwrap();
    assert!((c.k0 as f64 - 0.99247).abs() < 1e-3);
}
