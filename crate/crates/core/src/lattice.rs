//! Free rank-n modules over the valuation ring R = K[[t]] ∩ K(t) inside
//! K((t))^n: membership, relative position (Cartan type), meet/join/dual,
//! scaling, and reduction mod t.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::kmat::Subspace;
use crate::matrix::{column_reduce_over_r, Mat};

/// A weakly decreasing integer vector naming a Schubert cell or a
/// filtration type.
#[derive(Clone, PartialEq, Eq, Debug, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct CocharType(Vec<i64>);

impl CocharType {
    pub fn new(mut entries: Vec<i64>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        CocharType(entries)
    }

    /// Require the entries to already be weakly decreasing.
    pub fn from_sorted(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotWeaklyDecreasing(format!("{entries:?}")));
        }
        Ok(CocharType(entries))
    }

    pub fn zero(n: usize) -> Self {
        CocharType(vec![0; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn leading(&self) -> i64 {
        self.0[0]
    }

    pub fn partial_sums(&self) -> Vec<i64> {
        self.0
            .iter()
            .scan(0i64, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    /// Type of the dual object: negated and reversed.
    pub fn neg_reversed(&self) -> Self {
        CocharType(self.0.iter().rev().map(|v| -v).collect())
    }

    /// Merge two types into the sorted type of a direct sum.
    pub fn concat_sorted(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CocharType::new(v)
    }

    /// Largest spread mu_1 - mu_n at most one.
    pub fn is_minuscule(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => a - b <= 1,
            _ => true,
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        CocharType(self.0.iter().map(|v| v + k).collect())
    }
}

impl std::fmt::Display for CocharType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Column basis of a lattice: an invertible n-by-n matrix whose columns
/// generate the lattice over R. Bases are not unique; equality of lattices
/// is semantic (mutual containment), never representational.
#[derive(Clone, Debug)]
pub struct LatticeBasis<F: Field> {
    dim: usize,
    cols: Mat<F>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CombineMode {
    Meet,
    Join,
}

impl<F: Field> LatticeBasis<F> {
    pub fn new(cols: Mat<F>) -> Result<Self> {
        if cols.rows() != cols.cols() {
            return Err(Error::DimensionMismatch(format!(
                "lattice basis must be square, got {}x{}",
                cols.rows(),
                cols.cols()
            )));
        }
        if cols.det().is_zero() {
            return Err(Error::Singular("lattice basis has zero determinant".into()));
        }
        Ok(LatticeBasis {
            dim: cols.rows(),
            cols,
        })
    }

    /// The standard lattice R^n.
    pub fn standard(ctx: F::Ctx, n: usize) -> Self {
        LatticeBasis {
            dim: n,
            cols: Mat::identity(ctx, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_matrix(&self) -> &Mat<F> {
        &self.cols
    }

    pub fn ctx(&self) -> F::Ctx {
        self.cols.ctx()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "lattice dims {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// The Cartan invariant of the pair (self, other): the unique weakly
    /// decreasing mu with other = g self for g in GL_n(R) t^mu GL_n(R).
    ///
    /// Computed from determinantal divisors: scale g = self^-1 other by t^m
    /// into a matrix over R, take e_k = minimal valuation over k-by-k
    /// minors, and read off the slot differences. An independent
    /// diagonalization oracle lives in the harness.
    pub fn relative_type(&self, other: &Self) -> Result<CocharType> {
        self.check_dim(other)?;
        // work with denominator-free matrices: for A = t^-sa Da^-1 Ã and
        // B = t^-sb Db^-1 B̃ the minor minima of A^-1 B at level k shift by
        // k * (sa - sb) relative to those of Ã^-1 B̃, and the unit factors
        // Da, Db drop out
        let a_cleared = self.cols.cleared();
        let b_cleared = other.cols.cleared();
        let (minima, det_a) =
            crate::matrix::pair_minor_valuations(&a_cleared.matrix, &b_cleared.matrix);
        let singular = || Error::Singular("relative type of a singular basis".into());
        let correction = a_cleared.shift - b_cleared.shift;
        let mut slots = Vec::with_capacity(self.dim);
        let mut prev = det_a.finite().ok_or_else(singular)?;
        for v in minima {
            let cur = v.finite().ok_or_else(singular)?;
            slots.push(cur - prev + correction);
            prev = cur;
        }
        Ok(CocharType::new(slots))
    }

    /// Does the lattice contain the vector?
    pub fn contains(&self, v: &[crate::scalar::LaurentScalar<F>]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs dim {}",
                v.len(),
                self.dim
            )));
        }
        let rhs = Mat::from_cols(self.ctx(), self.dim, vec![v.to_vec()])?;
        Ok(self.cols.solve_min_valuation(&rhs)?.is_nonnegative())
    }

    pub fn contains_lattice(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.cols.solve_min_valuation(&other.cols)?.is_nonnegative())
    }

    /// Semantic equality: mutual containment.
    pub fn eq_lattice(&self, other: &Self) -> Result<bool> {
        Ok(self.contains_lattice(other)? && other.contains_lattice(self)?)
    }

    /// Smallest lattice containing both.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let reduced = column_reduce_over_r(&self.cols.hstack(&other.cols));
        debug_assert_eq!(reduced.cols(), self.dim);
        LatticeBasis::new(reduced)
    }

    /// Largest lattice contained in both. With self^-1 other = U D V up to
    /// units and D = diag(t^{a_i}), the intersection is
    /// self * U * diag(t^{max(a_i, 0)}).
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let (p, c) = self.cols.solve_scaled(&other.cols)?;
        let gamma = c
            .valuation()
            .finite()
            .ok_or_else(|| Error::Singular("meet against a singular basis".into()))?;
        let snf = crate::matrix::smith_form(&p);
        if snf.rank != n {
            return Err(Error::Singular("meet against a singular basis".into()));
        }
        let mut cols = snf.left_transform;
        for (slot, &e) in snf.exponents.iter().enumerate() {
            let power = (e + gamma).max(0);
            if power != 0 {
                for i in 0..n {
                    let v = cols.get(i, slot).mul_t_power(power);
                    cols.set(i, slot, v);
                }
            }
        }
        LatticeBasis::new(self.cols.mul(&cols))
    }

    pub fn combine(&self, other: &Self, mode: CombineMode) -> Result<Self> {
        match mode {
            CombineMode::Join => self.join(other),
            CombineMode::Meet => self.meet(other),
        }
    }

    /// The dual lattice, realized by the transpose inverse basis.
    pub fn dual(&self) -> Result<Self> {
        LatticeBasis::new(self.cols.inverse()?.transpose())
    }

    /// t^k times the lattice.
    pub fn scale(&self, k: i64) -> Self {
        LatticeBasis {
            dim: self.dim,
            cols: self.cols.scale_t_power(k),
        }
    }

    /// Left multiplication by an invertible matrix.
    pub fn apply(&self, g: &Mat<F>) -> Result<Self> {
        LatticeBasis::new(g.mul(&self.cols))
    }
}

/// The K-span in M/tM of the image of the sublattice N; requires N inside M.
pub fn image_mod_t<F: Field>(
    sub: &LatticeBasis<F>,
    ambient: &LatticeBasis<F>,
) -> Result<Subspace<F>> {
    if sub.dim() != ambient.dim() {
        return Err(Error::DimensionMismatch(format!(
            "lattice dims {} and {}",
            sub.dim(),
            ambient.dim()
        )));
    }
    let n = sub.dim();
    let (p, c) = ambient.basis_matrix().solve_scaled(sub.basis_matrix())?;
    let Some(gamma) = c.valuation().finite() else {
        return Err(Error::Singular("ambient basis is singular".into()));
    };
    // residue of c * p_ij at t = 0: zero unless the valuations cancel
    // exactly, in which case it is the product of leading coefficients
    let c_lead = c.leading_coefficient();
    let mut residue = crate::kmat::KMat::zeros(sub.ctx(), n, n);
    for i in 0..n {
        for j in 0..n {
            let entry = p.get(i, j);
            match entry.valuation().finite() {
                None => {}
                Some(v) if v + gamma > 0 => {}
                Some(v) if v + gamma == 0 => {
                    residue.set(i, j, c_lead.mul(&entry.leading_coefficient()));
                }
                Some(_) => return Err(Error::NotContained),
            }
        }
    }
    Ok(Subspace::from_span(&residue))
}
