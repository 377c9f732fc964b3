use grad_slip::general_slip_bc::*;
use grad_slip::half_space::{slip_coefficients, SlipCoefficientSet};

#[test]
fn order_zero_is_no_slip() {
    let c = slip_coefficients::<f64>(4, 1.0).unwrap();
    let r = slip_bc_records(&c);
    assert_eq!(r[0].order, Order::Zero);
    assert!(r[0].is_no_slip());
    assert!(!r[1].is_no_slip());
    assert!(!r[2].is_no_slip());
}

#[test]
fn zero_coefficients_collapse_to_no_slip() {
    let c = SlipCoefficientSet::<f64> {
        order: 0,
        chi: 1.0,
        k0: 0.0,
        t0: 0.0,
        t1: 0.0,
        k1: 0.0,
        k2: 0.0,
        t2: 0.0,
        gamma1: 1.0,
        gamma2: 1.0,
        gamma3: 1.0,
    };
    assert!(slip_bc_records(&c).iter().all(SlipBcRecord::is_no_slip));
}

#[test]
fn half_order_uses_only_first_normal_derivatives() {
    let c = slip_coefficients::<f64>(5, 1.0).unwrap();
    let r = slip_bc_records(&c);
    let normal = r[1]
        .relations
        .iter()
        .find(|x| x.unknown == "u2^(1)")
        .unwrap();
    assert!(normal.terms.is_empty());
    for rel in &r[1].relations {
        for t in &rel.terms {
            assert!(t.derivative.ends_with("/dy") && !t.derivative.starts_with("d2"));
            let expected = if rel.unknown.starts_with("theta") {
                c.t1
            } else {
                c.k0
            };
            assert!((t.weight - 2f64.sqrt() * expected).abs() < 1e-15);
        }
    }
}

#[test]
fn second_derivatives_are_normal_only() {
    let c = slip_coefficients::<f64>(6, 1.0).unwrap();
    for rec in slip_bc_records(&c) {
        for rel in rec.relations {
            for t in rel.terms.iter().filter(|t| t.derivative.starts_with("d2")) {
                assert!(t.derivative.ends_with("/dy2"), "{}", t.derivative);
            }
        }
    }
}

#[test]
fn couette_specialization_matches_ns_condition() {
    let c = slip_coefficients::<f64>(8, 1.0).unwrap();
    let (a, b) = couette_velocity_weights(&slip_bc_records(&c));
    assert!((a - 2f64.sqrt() * c.k0).abs() < 1e-15);
    assert!((b - 2.0 * c.k2).abs() < 1e-15);
    let bc = grad_slip::couette::NsWallBc::second_order(c.k0, c.k2);
    assert_eq!((bc.slip, bc.curvature), (a, b));
}

#[test]
fn order_labels() {
    assert_eq!(Order::Half.label(), "1/2");
    let ns = assemble_ns_system_coeffs((1.270042, 1.0, 1.0));
    assert_eq!(ns.viscosity, 1.270042);
}
