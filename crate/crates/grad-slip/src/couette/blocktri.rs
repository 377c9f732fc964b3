//! Block-tridiagonal solver factored once and reused every time step.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Row j reads  lower[j]·x_{j−1} + diag[j]·x_j + upper[j]·x_{j+1} = r_j.
pub(crate) struct BlockTri {
    nb: usize,
    nblocks: usize,
    /// (D'_j)⁻¹, row-major nb×nb each.
    dinv: Vec<f64>,
    /// E_j = (D'_j)⁻¹ upper[j].
    e: Vec<f64>,
    lower: Vec<f64>,
}

fn flat(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            v.push(m[(i, j)]);
        }
    }
    v
}

#[inline]
fn matvec_sub(a: &[f64], x: &[f64], y: &mut [f64]) {
    let n = x.len();
    for (i, yi) in y.iter_mut().enumerate() {
        let row = &a[i * n..(i + 1) * n];
        *yi -= row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
    }
}

impl BlockTri {
    pub(crate) fn factor(
        lower: &[DMatrix<f64>],
        diag: &[DMatrix<f64>],
        upper: &[DMatrix<f64>],
    ) -> Result<Self> {
        let nblocks = diag.len();
        let nb = diag[0].nrows();
        let mut dinv = Vec::with_capacity(nblocks * nb * nb);
        let mut e = Vec::with_capacity(nblocks * nb * nb);
        let mut prev_e: Option<DMatrix<f64>> = None;
        for j in 0..nblocks {
            let mut d = diag[j].clone();
            if let Some(pe) = &prev_e {
                d -= &lower[j] * pe;
            }
            let di = d
                .try_inverse()
                .ok_or_else(|| Error::Singular(format!("block {j} of the implicit system")))?;
            let ej = &di * &upper[j];
            dinv.extend(flat(&di));
            e.extend(flat(&ej));
            prev_e = Some(ej);
        }
        let lower = lower.iter().flat_map(flat).collect();
        Ok(Self {
            nb,
            nblocks,
            dinv,
            e,
            lower,
        })
    }

    /// Solves in place; `r` holds nblocks·nb entries.
    pub(crate) fn solve(&self, r: &mut [f64]) {
        let nb = self.nb;
        let sq = nb * nb;
        let mut tmp = vec![0.0; nb];
        for j in 0..self.nblocks {
            if j > 0 {
                let (done, rest) = r.split_at_mut(j * nb);
                let prev = &done[(j - 1) * nb..];
                matvec_sub(&self.lower[j * sq..(j + 1) * sq], prev, &mut rest[..nb]);
            }
            let rj = &mut r[j * nb..(j + 1) * nb];
            tmp.iter_mut().for_each(|t| *t = 0.0);
            let di = &self.dinv[j * sq..(j + 1) * sq];
            for (i, t) in tmp.iter_mut().enumerate() {
                *t = di[i * nb..(i + 1) * nb]
                    .iter()
                    .zip(rj.iter())
                    .map(|(p, q)| p * q)
                    .sum();
            }
            rj.copy_from_slice(&tmp);
        }
        for j in (0..self.nblocks.saturating_sub(1)).rev() {
            let (head, tail) = r.split_at_mut((j + 1) * nb);
            matvec_sub(
                &self.e[j * sq..(j + 1) * sq],
                &tail[..nb],
                &mut head[j * nb..],
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_solve() {
        let nb = 2;
        let n = 4;
        let mk = |s: f64| DMatrix::from_fn(nb, nb, |i, j| s + (i * 3 + j) as f64 * 0.1);
        let diag: Vec<_> = (0..n)
            .map(|k| mk(4.0 + k as f64) + DMatrix::identity(nb, nb) * 3.0)
            .collect();
        let lower: Vec<_> = (0..n).map(|_| mk(0.3)).collect();
        let upper: Vec<_> = (0..n).map(|_| mk(-0.2)).collect();
        let mut dense = DMatrix::zeros(n * nb, n * nb);
        for j in 0..n {
            dense
                .view_mut((j * nb, j * nb), (nb, nb))
                .copy_from(&diag[j]);
            if j > 0 {
                dense
                    .view_mut((j * nb, (j - 1) * nb), (nb, nb))
                    .copy_from(&lower[j]);
            }
            if j + 1 < n {
                dense
                    .view_mut((j * nb, (j + 1) * nb), (nb, nb))
                    .copy_from(&upper[j]);
            }
        }
        let rhs: Vec<f64> = (0..n * nb).map(|i| (i as f64).sin()).collect();
        let want = dense
            .lu()
            .solve(&nalgebra::DVector::from_vec(rhs.clone()))
            .unwrap();
        let bt = BlockTri::factor(&lower, &diag, &upper).unwrap();
        let mut got = rhs;
        bt.solve(&mut got);
        for i in 0..n * nb {
            assert!((got[i] - want[i]).abs() < 1e-12);
        }
    }
}
