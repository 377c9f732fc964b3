//! Order-by-order wall conditions for the outer and viscous-layer fields,
//! kept as data so they can be specialized (Couette) or printed.

use crate::half_space::SlipCoefficientSet;
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Zero,
    Half,
    One,
}

impl Order {
    pub fn label(self) -> &'static str {
        match self {
            Order::Zero => "0",
            Order::Half => "1/2",
            Order::One => "1",
        }
    }
}

/// One weighted derivative on the right-hand side of a record.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: f64,
    /// Human-readable derivative, e.g. `d u0_i / d y`.
    pub derivative: String,
}

/// `unknown − wall_value = Σ terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub unknown: String,
    pub wall_value: Option<String>,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlipBcRecord {
    pub order: Order,
    pub relations: Vec<Relation>,
}

impl SlipBcRecord {
    pub fn is_no_slip(&self) -> bool {
        self.relations
            .iter()
            .all(|r| r.terms.iter().all(|t| t.weight == 0.0))
    }
}

fn term(weight: f64, d: &str) -> Term {
    Term {
        weight,
        derivative: d.to_string(),
    }
}

fn rel(unknown: &str, wall: Option<&str>, terms: Vec<Term>) -> Relation {
    Relation {
        unknown: unknown.into(),
        wall_value: wall.map(Into::into),
        terms,
    }
}

/// Records for orders 0, 1/2 and 1. Superscripts (j) in the labels are the
/// expansion orders; `y` is the viscous-layer variable.
pub fn slip_bc_records<T: Scalar>(c: &SlipCoefficientSet<T>) -> [SlipBcRecord; 3] {
    let s2 = 2f64.sqrt();
    let (k0, t0, t1, k1, k2, t2) = (
        to_f64(c.k0),
        to_f64(c.t0),
        to_f64(c.t1),
        to_f64(c.k1),
        to_f64(c.k2),
        to_f64(c.t2),
    );
    let mut zero = vec![rel("u2^(0)", None, vec![])];
    let mut half = vec![rel("u2^(1)", None, vec![])];
    let mut one = vec![rel("u2^(2)", None, vec![])];
    for i in [1, 3] {
        zero.push(rel(
            &format!("u{i}^(0)"),
            Some(&format!("u{i}^w,(0)")),
            vec![],
        ));
        half.push(rel(
            &format!("u{i}^(1)"),
            Some(&format!("u{i}^w,(1)")),
            vec![term(s2 * k0, &format!("d v_u{i}^(0)/dy"))],
        ));
        one.push(rel(
            &format!("u{i}^(2)"),
            Some(&format!("u{i}^w,(2)")),
            vec![
                term(s2 * k0, &format!("d o_u{i}^(0)/dx2")),
                term(s2 * k0, &format!("d o_u2^(0)/dx{i}")),
                term(s2 * k0, &format!("d v_u{i}^(1)/dy")),
                term(2.0 * t0, &format!("d o_theta^(0)/dx{i}")),
                term(2.0 * k2, &format!("d2 v_u{i}^(0)/dy2")),
            ],
        ));
    }
    zero.push(rel("theta^(0)", Some("theta^w,(0)"), vec![]));
    half.push(rel(
        "theta^(1)",
        Some("theta^w,(1)"),
        vec![term(s2 * t1, "d v_theta^(0)/dy")],
    ));
    one.push(rel(
        "theta^(2)",
        Some("theta^w,(2)"),
        vec![
            term(s2 * t1, "d v_theta^(1)/dy"),
            term(s2 * t1, "d o_theta^(0)/dx2"),
            term(2.0 * t2, "d2 v_theta^(0)/dy2"),
            term(k1, "d v_u2^(1)/dy"),
            term(k1, "d o_u2^(0)/dx2"),
        ],
    ));
    [
        SlipBcRecord {
            order: Order::Zero,
            relations: zero,
        },
        SlipBcRecord {
            order: Order::Half,
            relations: half,
        },
        SlipBcRecord {
            order: Order::One,
            relations: one,
        },
    ]
}

/// Viscosity and heat conductivity feeding the Navier–Stokes solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsCoefficients {
    pub viscosity: f64,
    pub conductivity: f64,
    pub cross: f64,
}

pub fn assemble_ns_system_coeffs<T: Scalar>(gammas: (T, T, T)) -> NsCoefficients {
    NsCoefficients {
        viscosity: to_f64(gammas.0),
        conductivity: to_f64(gammas.1),
        cross: to_f64(gammas.2),
    }
}

/// Couette specialization of the order-1 velocity record: only ∂/∂x₂ of u₁
/// survives. Returns (weight of ε ∂u/∂x, weight of ε² ∂²u/∂x²) for the
/// full-variable condition u − u^w = a ε u_x + b ε² u_xx.
pub fn couette_velocity_weights(records: &[SlipBcRecord; 3]) -> (f64, f64) {
    let one = &records[2];
    let r = one
        .relations
        .iter()
        .find(|r| r.unknown == "u1^(2)")
        .expect("u1 record");
    let slip = r
        .terms
        .iter()
        .find(|t| t.derivative == "d v_u1^(1)/dy")
        .map_or(0.0, |t| t.weight);
    let curv = r
        .terms
        .iter()
        .find(|t| t.derivative == "d2 v_u1^(0)/dy2")
        .map_or(0.0, |t| t.weight);
    (slip, curv)
}
