//! Multi-index bookkeeping and assembly of the moment-system matrices.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::scalar::{lit, Scalar};
use crate::{Error, Result};

/// Hermite multi-index (α₁, α₂, α₃).
pub type MultiIndex = [usize; 3];

pub const E1: MultiIndex = [1, 0, 0];
pub const E2: MultiIndex = [0, 1, 0];
pub const E3: MultiIndex = [0, 0, 1];

#[inline]
pub fn norm(a: &MultiIndex) -> usize {
    a[0] + a[1] + a[2]
}

/// All multi-indices with |α| ≤ M in moment order: even α₂ first, then by
/// |α|, then anti-lexicographically. No lower bound on `M`; used directly by
/// the ordering tests.
pub fn ordered_indices(order: usize) -> Vec<MultiIndex> {
    let mut idx = Vec::new();
    for a1 in 0..=order {
        for a2 in 0..=order - a1 {
            for a3 in 0..=order - a1 - a2 {
                idx.push([a1, a2, a3]);
            }
        }
    }
    idx.sort_by_key(|a| {
        (
            a[1] % 2,
            norm(a),
            std::cmp::Reverse(a[0]),
            std::cmp::Reverse(a[1]),
            std::cmp::Reverse(a[2]),
        )
    });
    idx
}

/// Ordered basis of Hermite moments up to degree `M`.
#[derive(Debug, Clone)]
pub struct MomentBasis {
    order: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    m: usize,
}

impl MomentBasis {
    pub fn new(order: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::OrderTooSmall(order));
        }
        let indices = ordered_indices(order);
        let lookup = indices.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let m = indices.iter().filter(|a| a[1] % 2 == 0).count();
        Ok(Self {
            order,
            indices,
            lookup,
            m,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }
    /// Total number of moments, C(M+3, 3).
    pub fn len(&self) -> usize {
        self.indices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
    /// Number of moments with even α₂.
    pub fn m(&self) -> usize {
        self.m
    }
    /// Number of moments with odd α₂.
    pub fn n(&self) -> usize {
        self.len() - self.m
    }
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }
    /// Zero-based position of `alpha`, if it belongs to the basis.
    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }
    pub(crate) fn pos(&self, alpha: MultiIndex) -> usize {
        self.lookup[&alpha]
    }
}

pub fn build_basis(order: usize) -> Result<MomentBasis> {
    MomentBasis::new(order)
}

fn unit(d: usize) -> MultiIndex {
    let mut e = [0; 3];
    e[d] = 1;
    e
}

/// Transport matrix A_d (axis `d` ∈ {0,1,2} for x₁, x₂, x₃).
pub fn assemble_transport<T: Scalar>(basis: &MomentBasis, d: usize) -> DMatrix<T> {
    let n = basis.len();
    let mut a = DMatrix::zeros(n, n);
    for (i, alpha) in basis.indices().iter().enumerate() {
        let mut up = *alpha;
        up[d] += 1;
        if let Some(j) = basis.position(&up) {
            let v = lit::<T>(((alpha[d] + 1) as f64).sqrt());
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Null-space basis G = [φ0..φ4] of the linearized collision operator.
pub fn equilibrium_basis<T: Scalar>(basis: &MomentBasis) -> DMatrix<T> {
    let mut g = DMatrix::zeros(basis.len(), 5);
    g[(basis.pos([0, 0, 0]), 0)] = T::one();
    g[(basis.pos(E1), 1)] = T::one();
    g[(basis.pos(E2), 2)] = T::one();
    g[(basis.pos(E3), 3)] = T::one();
    let r3 = lit::<T>(1.0 / 3f64.sqrt());
    for e in [[2, 0, 0], [0, 2, 0], [0, 0, 2]] {
        g[(basis.pos(e), 4)] = r3;
    }
    g
}

/// Orthonormal complement H of the equilibrium basis.
///
/// Unit vectors for every |α| > 1 except 2e₁; the slots of 2e₂ and 2e₃ carry
/// the two traceless combinations of the diagonal second moments.
pub fn complement_basis<T: Scalar>(basis: &MomentBasis) -> DMatrix<T> {
    let s3 = 3f64.sqrt();
    let a = s3 / 3.0;
    let big = (-3.0 - s3) / 6.0;
    let small = (3.0 - s3) / 6.0;
    let (p1, p2, p3) = (
        basis.pos([2, 0, 0]),
        basis.pos([0, 2, 0]),
        basis.pos([0, 0, 2]),
    );
    let cols: Vec<MultiIndex> = basis
        .indices()
        .iter()
        .filter(|al| norm(al) > 1 && **al != [2, 0, 0])
        .copied()
        .collect();
    let mut h = DMatrix::zeros(basis.len(), cols.len());
    for (c, al) in cols.iter().enumerate() {
        match *al {
            [0, 2, 0] => {
                h[(p1, c)] = lit(a);
                h[(p2, c)] = lit(big);
                h[(p3, c)] = lit(small);
            }
            [0, 0, 2] => {
                h[(p1, c)] = lit(a);
                h[(p2, c)] = lit(small);
                h[(p3, c)] = lit(big);
            }
            _ => h[(basis.pos(*al), c)] = T::one(),
        }
    }
    h
}

/// Source of the linearized collision matrix Q.
pub trait CollisionModel<T: Scalar> {
    fn collision_matrix(&self, basis: &MomentBasis, g: &DMatrix<T>) -> DMatrix<T>;
}

/// BGK relaxation: Q = I − GGᵀ.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bgk;

impl<T: Scalar> CollisionModel<T> for Bgk {
    fn collision_matrix(&self, basis: &MomentBasis, g: &DMatrix<T>) -> DMatrix<T> {
        DMatrix::identity(basis.len(), basis.len()) - g * g.transpose()
    }
}

/// Externally tabulated collision matrix (e.g. hard-sphere data).
#[derive(Debug, Clone)]
pub struct Tabulated<T: Scalar>(pub DMatrix<T>);

impl<T: Scalar> CollisionModel<T> for Tabulated<T> {
    fn collision_matrix(&self, _basis: &MomentBasis, _g: &DMatrix<T>) -> DMatrix<T> {
        self.0.clone()
    }
}

/// BGK collision data: (Q, G, H, Ge).
pub fn assemble_collision_bgk<T: Scalar>(
    basis: &MomentBasis,
) -> (DMatrix<T>, DMatrix<T>, DMatrix<T>, DMatrix<T>) {
    let g = equilibrium_basis::<T>(basis);
    let q = Bgk.collision_matrix(basis, &g);
    let h = complement_basis(basis);
    let ge = select_ge(&g);
    (q, g, h, ge)
}

fn select_ge<T: Scalar>(g: &DMatrix<T>) -> DMatrix<T> {
    g.select_columns(&[0, 1, 3, 4])
}

/// Transport and collision matrices for one moment order.
#[derive(Debug, Clone)]
pub struct MomentSystem<T: Scalar> {
    pub basis: MomentBasis,
    pub a: [DMatrix<T>; 3],
    pub q: DMatrix<T>,
    pub g: DMatrix<T>,
    pub h: DMatrix<T>,
    pub ge: DMatrix<T>,
}

impl<T: Scalar> MomentSystem<T> {
    pub fn bgk(order: usize) -> Result<Self> {
        Self::with_collision(order, &Bgk)
    }

    pub fn with_collision(order: usize, model: &dyn CollisionModel<T>) -> Result<Self> {
        let basis = MomentBasis::new(order)?;
        let a = [0, 1, 2].map(|d| assemble_transport(&basis, d));
        let g = equilibrium_basis(&basis);
        let q = model.collision_matrix(&basis, &g);
        if q.nrows() != basis.len() || q.ncols() != basis.len() {
            return Err(Error::SizeMismatch {
                expected: basis.len(),
                got: q.nrows(),
            });
        }
        let h = complement_basis(&basis);
        let ge = select_ge(&g);
        Ok(Self {
            basis,
            a,
            q,
            g,
            h,
            ge,
        })
    }

    pub fn a2(&self) -> &DMatrix<T> {
        &self.a[1]
    }

    /// Upper-right block of A₂ (even rows, odd columns).
    pub fn mo(&self) -> DMatrix<T> {
        let m = self.basis.m();
        self.a2().view((0, m), (m, self.basis.n())).into_owned()
    }

    /// Hᵀ e_α as a length-(N−5) vector.
    pub fn h_row(&self, alpha: MultiIndex) -> DVector<T> {
        self.h.row(self.basis.pos(alpha)).transpose()
    }
}

/// Low-order macroscopic quantities of a moment vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroState {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub sigma: [[f64; 3]; 3],
    pub q: [f64; 3],
}

pub fn moments_to_macro<T: Scalar>(w: &DVector<T>, basis: &MomentBasis) -> Result<MacroState> {
    if w.len() != basis.len() {
        return Err(Error::SizeMismatch {
            expected: basis.len(),
            got: w.len(),
        });
    }
    let at = |a: MultiIndex| crate::scalar::to_f64(w[basis.pos(a)]);
    let two = |i: usize| {
        let mut a = [0; 3];
        a[i] = 2;
        a
    };
    let theta = 2f64.sqrt() / 3.0 * (0..3).map(|i| at(two(i))).sum::<f64>();
    let mut sigma = [[0.0; 3]; 3];
    for (i, row) in sigma.iter_mut().enumerate() {
        for (j, s) in row.iter_mut().enumerate() {
            let mut a = unit(i);
            a[j] += 1;
            let diag: f64 = if i == j { 1.0 } else { 0.0 };
            *s = (1.0 + diag).sqrt() * at(a) - theta * diag;
        }
    }
    let mut q = [0.0; 3];
    for (i, qi) in q.iter_mut().enumerate() {
        for j in 0..3 {
            let mut a = unit(i);
            a[j] += 2;
            let fact: f64 = a
                .iter()
                .map(|&k| (1..=k).product::<usize>() as f64)
                .product();
            *qi += 0.5 * fact.sqrt() * at(a);
        }
    }
    Ok(MacroState {
        rho: at([0, 0, 0]),
        u: [at(E1), at(E2), at(E3)],
        theta,
        sigma,
        q,
    })
}
