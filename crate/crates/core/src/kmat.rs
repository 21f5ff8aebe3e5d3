//! Linear algebra over the coefficient field K: dense matrices, reduced
//! echelon forms, and canonically represented subspaces of K^n.

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense row-major matrix over K.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KMat<F: Field> {
    rows: usize,
    cols: usize,
    ctx: F::Ctx,
    data: Vec<F>,
}

impl<F: Field> KMat<F> {
    pub fn zeros(ctx: F::Ctx, rows: usize, cols: usize) -> Self {
        KMat {
            rows,
            cols,
            ctx,
            data: vec![F::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, F::one(ctx));
        }
        m
    }

    /// Build from a list of columns.
    pub fn from_cols(ctx: F::Ctx, rows: usize, cols: Vec<Vec<F>>) -> Result<Self> {
        let ncols = cols.len();
        let mut m = Self::zeros(ctx, rows, ncols);
        for (j, col) in cols.into_iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> F::Ctx {
        self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).add(&a.mul(rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero(self.ctx);
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.ctx, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product (for tensor products of spaces and filtrations).
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.ctx, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a.mul(rhs.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("pivot nonzero");
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right kernel, one column per free variable, in free
    /// variable order.
    pub fn kernel_basis(&self) -> Self {
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.ctx, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, F::one(self.ctx));
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, work.get(r, fc).neg());
            }
        }
        out
    }

    /// Solve self * x = b; Err if inconsistent. self must have full column
    /// rank for the solution to be unique, which callers ensure.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Self::zeros(self.ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return Err(Error::Singular("inconsistent linear system".into()));
        }
        let mut x = vec![F::zero(self.ctx); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Ok(x)
    }
}

/// A subspace of K^n held in a canonical basis: the unique reduced
/// column-echelon basis of the column span. Equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: KMat<F>,
}

impl<F: Field> Subspace<F> {
    pub fn from_span(m: &KMat<F>) -> Self {
        // canonical column basis = transpose of the rref of the transpose
        let mut rows = m.transpose();
        let pivots = rows.rref_in_place();
        let rank = pivots.len();
        let mut basis = KMat::zeros(m.ctx(), m.rows(), rank);
        for r in 0..rank {
            for j in 0..m.rows() {
                basis.set(j, r, rows.get(r, j).clone());
            }
        }
        Subspace {
            ambient: m.rows(),
            basis,
        }
    }

    pub fn full(ctx: F::Ctx, n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: KMat::identity(ctx, n),
        }
    }

    pub fn zero_space(ctx: F::Ctx, n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: KMat::zeros(ctx, n, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &KMat<F> {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vec(&self, v: &[F]) -> bool {
        let m = self.basis.hstack(
            &KMat::from_cols(self.basis.ctx(), self.ambient, vec![v.to_vec()]).unwrap(),
        );
        m.rank() == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace<F>) -> bool {
        if other.dim() > self.dim() {
            return false;
        }
        self.basis.hstack(&other.basis).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_span(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        let ctx = self.basis.ctx();
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero_space(ctx, self.ambient);
        }
        // x = A u = B w; solve [A | -B] (u, w)^T = 0 and take the A u part.
        let mut neg_b = other.basis.clone();
        for i in 0..neg_b.rows() {
            for j in 0..neg_b.cols() {
                let v = neg_b.get(i, j).neg();
                neg_b.set(i, j, v);
            }
        }
        let ker = self.basis.hstack(&neg_b).kernel_basis();
        let mut gens = KMat::zeros(ctx, self.ambient, ker.cols());
        for k in 0..ker.cols() {
            let u: Vec<F> = (0..self.dim()).map(|i| ker.get(i, k).clone()).collect();
            let x = self.basis.mul_vec(&u);
            for i in 0..self.ambient {
                gens.set(i, k, x[i].clone());
            }
        }
        Subspace::from_span(&gens)
    }

    /// Image under a linear map given by its matrix.
    pub fn apply(&self, map: &KMat<F>) -> Subspace<F> {
        assert_eq!(map.cols(), self.ambient);
        Subspace::from_span(&map.mul(&self.basis))
    }

    /// Annihilator in the dual space: { f : f(W) = 0 }, coordinates in the
    /// dual basis.
    pub fn annihilator(&self) -> Subspace<F> {
        Subspace::from_span(&self.basis.transpose().kernel_basis())
    }

    /// Tensor product of subspaces inside the Kronecker ambient space.
    pub fn tensor(&self, other: &Subspace<F>) -> Subspace<F> {
        Subspace::from_span(&self.basis.kron(&other.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn m(rows: usize, cols: Vec<Vec<i64>>) -> KMat<Rat> {
        KMat::from_cols(
            (),
            rows,
            cols.into_iter()
                .map(|c| c.into_iter().map(|v| Rat::from_ratio(v, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn subspace_canonical_equality() {
        let a = Subspace::from_span(&m(2, vec![vec![1, 1]]));
        let b = Subspace::from_span(&m(2, vec![vec![2, 2], vec![3, 3]]));
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
        assert!(Subspace::full((), 2).contains_space(&a));
    }

    #[test]
    fn intersect_and_sum() {
        let a = Subspace::from_span(&m(3, vec![vec![1, 0, 0], vec![0, 1, 0]]));
        let b = Subspace::from_span(&m(3, vec![vec![0, 1, 0], vec![0, 0, 1]]));
        let cap = a.intersect(&b);
        assert_eq!(cap.dim(), 1);
        assert!(cap.contains_vec(&[
            Rat::from_ratio(0, 1),
            Rat::from_ratio(5, 1),
            Rat::from_ratio(0, 1)
        ]));
        assert!(a.sum(&b).is_full());
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        let x = a
            .solve(&[Rat::from_ratio(3, 1), Rat::from_ratio(4, 1)])
            .unwrap();
        assert_eq!(a.mul_vec(&x)[0].to_string(), "3");
    }
}
