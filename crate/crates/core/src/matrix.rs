//! Matrices over K((t))-scalars: exact inverses, determinantal-divisor
//! valuations, compound (exterior power) matrices, and the valuation-pivoted
//! reductions over the valuation ring R used for lattice arithmetic.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::kmat::KMat;
use crate::poly::Poly;
use crate::scalar::{LaurentScalar, Valuation};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<F: Field> {
    rows: usize,
    cols: usize,
    ctx: F::Ctx,
    data: Vec<LaurentScalar<F>>,
}

/// Largest dimension routed through the cofactor tables (2^n work) before
/// falling back to elimination.
const ADJUGATE_LIMIT: usize = 8;

/// A matrix with denominators and negative powers multiplied out:
/// matrix = t^shift * denominator * original, entries polynomial.
pub struct Cleared<F: Field> {
    pub matrix: Mat<F>,
    pub shift: i64,
    pub denominator: Poly<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(ctx: F::Ctx, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            ctx,
            data: vec![LaurentScalar::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, LaurentScalar::one(ctx));
        }
        m
    }

    /// Diagonal matrix of t-powers.
    pub fn t_diag(ctx: F::Ctx, exponents: &[i64]) -> Self {
        let n = exponents.len();
        let mut m = Self::zeros(ctx, n, n);
        for (i, &e) in exponents.iter().enumerate() {
            m.set(i, i, LaurentScalar::t_power(ctx, e));
        }
        m
    }

    pub fn from_cols(ctx: F::Ctx, rows: usize, cols: Vec<Vec<LaurentScalar<F>>>) -> Result<Self> {
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

    /// Lift a coefficient matrix to constant scalars.
    pub fn from_kmat(m: &KMat<F>) -> Self {
        let mut out = Self::zeros(m.ctx(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, LaurentScalar::from_coefficient(m.get(i, j).clone()));
            }
        }
        out
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

    pub fn get(&self, i: usize, j: usize) -> &LaurentScalar<F> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentScalar<F>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<LaurentScalar<F>> {
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

    pub fn mul_vec(&self, v: &[LaurentScalar<F>]) -> Vec<LaurentScalar<F>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = LaurentScalar::zero(self.ctx);
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

    /// Multiply every entry by t^k.
    pub fn scale_t_power(&self, k: i64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.mul_t_power(k);
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut out = Self::zeros(self.ctx, h, w);
        for i in 0..h {
            for j in 0..w {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn min_valuation(&self) -> Valuation {
        self.data
            .iter()
            .map(|v| v.valuation())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integral())
    }

    /// Entry-wise value at t = 0; all entries must be integral.
    pub fn residue_at_zero(&self) -> Result<KMat<F>> {
        let mut out = KMat::zeros(self.ctx, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).residue_at_zero()?);
            }
        }
        Ok(out)
    }

    /// Exact inverse. Small matrices go through the cleared adjugate, which
    /// keeps all heavy arithmetic on polynomial entries; larger ones fall
    /// back to Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        if self.rows >= 1 && self.rows <= ADJUGATE_LIMIT {
            let cleared = self.cleared();
            let (adj, det) = cleared.matrix.adjugate_and_det();
            if det.is_zero() {
                return Err(Error::Singular("matrix has zero determinant".into()));
            }
            // self^-1 = adj(cleared) * t^shift * D / det(cleared)
            let factor = LaurentScalar::from_parts(
                cleared.shift,
                cleared.denominator.clone(),
                Poly::one(self.ctx),
            )
            .div(&det)?;
            let mut out = adj;
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let v = out.get(i, j).mul(&factor);
                    out.set(i, j, v);
                }
            }
            return Ok(out);
        }
        self.inverse_gauss_jordan()
    }

    /// Gauss-Jordan inverse over the fraction field, pivoting on the entry of
    /// minimal valuation for determinism.
    fn inverse_gauss_jordan(&self) -> Result<Self> {
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Self::identity(self.ctx, n);
        for c in 0..n {
            let pivot = (c..n)
                .filter(|&i| !work.get(i, c).is_zero())
                .min_by_key(|&i| (work.get(i, c).valuation(), i));
            let Some(p) = pivot else {
                return Err(Error::Singular(format!("no pivot in column {c}")));
            };
            work.swap_rows(c, p);
            inv.swap_rows(c, p);
            let piv_inv = work.get(c, c).inv()?;
            for j in 0..n {
                let wv = work.get(c, j).mul(&piv_inv);
                work.set(c, j, wv);
                let iv = inv.get(c, j).mul(&piv_inv);
                inv.set(c, j, iv);
            }
            for i in 0..n {
                if i == c || work.get(i, c).is_zero() {
                    continue;
                }
                let f = work.get(i, c).clone();
                for j in 0..n {
                    let wv = work.get(i, j).sub(&f.mul(work.get(c, j)));
                    work.set(i, j, wv);
                    let iv = inv.get(i, j).sub(&f.mul(inv.get(c, j)));
                    inv.set(i, j, iv);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// self^-1 * rhs presented as (P, c) with the quotient equal to c * P,
    /// P a polynomial-entry matrix and c a single scalar. Avoids per-entry
    /// canonicalization entirely.
    pub fn solve_scaled(&self, rhs: &Mat<F>) -> Result<(Mat<F>, LaurentScalar<F>)> {
        assert_eq!(self.rows, self.cols, "solve needs a square left side");
        assert_eq!(self.cols, rhs.rows, "solve shape mismatch");
        if self.rows > ADJUGATE_LIMIT {
            return Ok((self.inverse()?.mul(rhs), LaurentScalar::one(self.ctx)));
        }
        let a = self.cleared();
        let r = rhs.cleared();
        let (adj, det) = a.matrix.adjugate_and_det();
        if det.is_zero() {
            return Err(Error::Singular("solve against a singular matrix".into()));
        }
        let p = adj.mul(&r.matrix);
        // self^-1 rhs = adj(Ã) R̃ * t^{sa - sr} Da / (Dr det(Ã))
        let (det_shift, det_num, det_den) = det.parts();
        debug_assert!(det_den.is_one());
        let c = LaurentScalar::from_parts(
            a.shift - r.shift - det_shift,
            a.denominator.clone(),
            r.denominator.mul(det_num),
        );
        Ok((p, c))
    }

    /// Least valuation among the entries of self^-1 * rhs.
    pub fn solve_min_valuation(&self, rhs: &Mat<F>) -> Result<Valuation> {
        let (p, c) = self.solve_scaled(rhs)?;
        Ok(match (p.min_valuation(), c.valuation()) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        })
    }

    pub fn det(&self) -> LaurentScalar<F> {
        assert_eq!(self.rows, self.cols);
        if self.rows >= 1 && self.rows <= ADJUGATE_LIMIT {
            let cleared = self.cleared();
            let levels = cleared.matrix.minor_tables();
            let full: u32 = (1 << self.rows) - 1;
            let det_cleared = levels[self.rows][&(full, full)].clone();
            // det(self) = det(cleared) / (t^shift D)^n
            let mut factor = LaurentScalar::from_parts(
                cleared.shift,
                cleared.denominator.clone(),
                Poly::one(self.ctx),
            );
            for _ in 1..self.rows {
                factor = factor.mul(&LaurentScalar::from_parts(
                    cleared.shift,
                    cleared.denominator.clone(),
                    Poly::one(self.ctx),
                ));
            }
            return det_cleared.div(&factor).expect("denominator is nonzero");
        }
        self.det_gauss()
    }

    fn det_gauss(&self) -> LaurentScalar<F> {
        let n = self.rows;
        let mut work = self.clone();
        let mut det = LaurentScalar::one(self.ctx);
        for c in 0..n {
            let pivot = (c..n)
                .filter(|&i| !work.get(i, c).is_zero())
                .min_by_key(|&i| (work.get(i, c).valuation(), i));
            let Some(p) = pivot else {
                return LaurentScalar::zero(self.ctx);
            };
            if p != c {
                work.swap_rows(c, p);
                det = det.neg();
            }
            det = det.mul(work.get(c, c));
            let piv_inv = work.get(c, c).inv().expect("pivot nonzero");
            for i in c + 1..n {
                if work.get(i, c).is_zero() {
                    continue;
                }
                let f = work.get(i, c).mul(&piv_inv);
                for j in c..n {
                    let v = work.get(i, j).sub(&f.mul(work.get(c, j)));
                    work.set(i, j, v);
                }
            }
        }
        det
    }

    /// All k-by-k minors for every k, as maps from (row set, column set)
    /// bitmasks, computed by Laplace expansion with memoization.
    fn minor_tables(&self) -> Vec<std::collections::HashMap<(u32, u32), LaurentScalar<F>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        assert!(n <= 16, "minor table limited to n <= 16");
        let mut levels: Vec<std::collections::HashMap<(u32, u32), LaurentScalar<F>>> =
            vec![Default::default(); n + 1];
        levels[0].insert((0, 0), LaurentScalar::one(self.ctx));
        let subsets_of_size = |k: usize| -> Vec<u32> {
            let mut out = Vec::new();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == k {
                    out.push(mask);
                }
            }
            out
        };
        for k in 1..=n {
            let sets = subsets_of_size(k);
            let mut table = std::collections::HashMap::new();
            for &rs in &sets {
                let first_row = rs.trailing_zeros() as usize;
                let rs_rest = rs & !(1 << first_row);
                for &cs in &sets {
                    let mut acc = LaurentScalar::zero(self.ctx);
                    let mut sign_neg = false;
                    for c in 0..n {
                        if cs & (1 << c) == 0 {
                            continue;
                        }
                        let entry = self.get(first_row, c);
                        if !entry.is_zero() {
                            let sub = &levels[k - 1][&(rs_rest, cs & !(1 << c))];
                            let term = entry.mul(sub);
                            acc = if sign_neg { acc.sub(&term) } else { acc.add(&term) };
                        }
                        sign_neg = !sign_neg;
                    }
                    table.insert((rs, cs), acc);
                }
            }
            levels[k] = table;
        }
        levels
    }

    /// e_k = minimal valuation over all k-by-k minors, for k = 1..n.
    /// Infinite entries never occur for invertible input.
    pub fn minor_valuations(&self) -> Vec<Valuation> {
        let levels = self.minor_tables();
        (1..=self.rows)
            .map(|k| {
                levels[k]
                    .values()
                    .map(|v| v.valuation())
                    .min()
                    .unwrap_or(Valuation::Infinite)
            })
            .collect()
    }

    /// Multiply out denominators and negative shifts: the result satisfies
    /// cleared = t^shift * denominator * self with polynomial entries, and
    /// the denominator is a unit at t = 0.
    pub fn cleared(&self) -> Cleared<F> {
        let ctx = self.ctx;
        let mut lcm = Poly::one(ctx);
        let mut min_shift = 0i64;
        for v in &self.data {
            if v.is_zero() {
                continue;
            }
            let (shift, _, den) = v.parts();
            min_shift = min_shift.min(shift);
            if !den.is_one() {
                let g = lcm.gcd(den);
                lcm = lcm.mul(&den.div_rem(&g).0);
            }
        }
        let s = -min_shift;
        let mut out = Self::zeros(ctx, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let (shift, num, den) = v.parts();
                let cofactor = lcm.div_rem(den).0;
                out.set(
                    i,
                    j,
                    LaurentScalar::from_parts(shift + s, num.mul(&cofactor), Poly::one(ctx)),
                );
            }
        }
        Cleared {
            matrix: out,
            shift: s,
            denominator: lcm,
        }
    }

    /// (adjugate, determinant) read off the cofactor table.
    pub fn adjugate_and_det(&self) -> (Self, LaurentScalar<F>) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let levels = self.minor_tables();
        let full: u32 = (1 << n) - 1;
        let det = levels[n][&(full, full)].clone();
        let mut adj = Self::zeros(self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                let m = levels[n - 1][&(full & !(1 << i), full & !(1 << j))].clone();
                let signed = if (i + j) % 2 == 1 { m.neg() } else { m };
                adj.set(j, i, signed);
            }
        }
        (adj, det)
    }

    /// k-th compound matrix: minors indexed by k-subsets in lexicographic
    /// order of the index sets.
    pub fn compound(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.rows && self.rows == self.cols);
        let n = self.rows;
        let levels = self.minor_tables();
        let sets = lex_subsets(n, k);
        let m = sets.len();
        let mut out = Self::zeros(self.ctx, m, m);
        for (a, rs) in sets.iter().enumerate() {
            for (b, cs) in sets.iter().enumerate() {
                out.set(a, b, levels[k][&(mask_of(rs), mask_of(cs))].clone());
            }
        }
        out
    }
}

/// Minimal valuations e_k over the k-by-k minors of a^-1 b, computed without
/// ever forming a^-1 b: by the compound-matrix product rule and the
/// complementary-minor identity for inverses,
///
///   det(a) * (k-minor of a^-1 b at (I,J)) =
///       sum over S of (-1)^{sum I + sum S} a[S^c, I^c] * b[S, J],
///
/// so each entry is a short signed sum of products of pre-tabulated minors
/// of the two polynomial matrices. Returns the per-level minima of
/// v(det(a) * minor) for k = 1..n, i.e. e_k(a^-1 b) = minima[k-1] - v(det a),
/// together with v(det a).
pub fn pair_minor_valuations<F: Field>(
    a: &Mat<F>,
    b: &Mat<F>,
) -> (Vec<Valuation>, Valuation) {
    assert_eq!(a.rows(), a.cols());
    assert_eq!(b.rows(), b.cols());
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    let ctx = a.ctx();
    let a_tables = a.minor_tables();
    let b_tables = b.minor_tables();
    let full: u32 = (1 << n) - 1;
    let det_a_val = a_tables[n][&(full, full)].valuation();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let masks: Vec<u32> = (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .collect();
        let mut best = Valuation::Infinite;
        for &mi in &masks {
            for &mj in &masks {
                let mut acc = LaurentScalar::zero(ctx);
                for &ms in &masks {
                    let a_minor = &a_tables[n - k][&(full & !ms, full & !mi)];
                    if a_minor.is_zero() {
                        continue;
                    }
                    let b_minor = &b_tables[k][&(ms, mj)];
                    if b_minor.is_zero() {
                        continue;
                    }
                    let term = a_minor.mul(b_minor);
                    // sign (-1)^{sum S}; the constant (-1)^{sum I} factor
                    // cannot change the valuation and is dropped
                    if mask_index_sum(ms) % 2 == 1 {
                        acc = acc.sub(&term);
                    } else {
                        acc = acc.add(&term);
                    }
                }
                let v = acc.valuation();
                if v < best {
                    best = v;
                }
            }
        }
        out.push(best);
    }
    (out, det_a_val)
}

fn mask_index_sum(mask: u32) -> u32 {
    let mut acc = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros();
        acc += i;
        m &= !(1 << i);
    }
    acc
}

pub fn lex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &i| m | (1 << i))
}

/// Column reduction over the valuation ring R: right-multiplication by
/// GL(R) transformations only, pivoting on the entry of minimal valuation
/// (ties: lowest row, then lowest column). Returns the nonzero columns,
/// which form an R-basis of the column span.
pub fn column_reduce_over_r<F: Field>(m: &Mat<F>) -> Mat<F> {
    let mut w = m.clone();
    let rows = w.rows();
    let cols = w.cols();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut step = 0usize;
    while step < cols.min(rows) {
        // select pivot among entries in unused rows and columns >= step
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in 0..rows {
            if pivot_rows.contains(&i) {
                continue;
            }
            for j in step..cols {
                let v = w.get(i, j).valuation();
                if v == Valuation::Infinite {
                    continue;
                }
                let key = (v, i, j);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            break; // remaining block is zero
        };
        w.swap_cols(step, pj);
        let piv = w.get(pi, step).clone();
        let piv_inv = piv.inv().expect("pivot nonzero");
        // clear the pivot row in the remaining columns only; fixed columns
        // are final and quotients against them need not be integral
        for j in step + 1..cols {
            if w.get(pi, j).is_zero() {
                continue;
            }
            // integral because the pivot has minimal valuation among the
            // candidate entries, which include (pi, j)
            let q = w.get(pi, j).mul(&piv_inv);
            debug_assert!(q.is_integral());
            for i in 0..rows {
                let v = w.get(i, j).sub(&q.mul(w.get(i, step)));
                w.set(i, j, v);
            }
        }
        pivot_rows.push(pi);
        step += 1;
    }
    let mut out = Mat::zeros(m.ctx(), rows, step);
    for j in 0..step {
        for i in 0..rows {
            out.set(i, j, w.get(i, j).clone());
        }
    }
    out
}

impl<F: Field> Mat<F> {
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Valuation-pivoted diagonalization over R: M = U D V^-1-style data with
/// U = left_transform and Q = right_transform in GL(R), D diagonal with
/// entries of ascending valuation (so M = U D right_transform^-1... more
/// precisely M * right_transform = U * D up to diagonal units).
pub struct SmithForm<F: Field> {
    /// t-exponents of the diagonal, ascending; length = rank.
    pub exponents: Vec<i64>,
    pub rank: usize,
    /// The accumulated right transform Q: M Q = U D up to units.
    pub right_transform: Mat<F>,
    /// The left transform U in GL(R), rows-by-rows square.
    pub left_transform: Mat<F>,
}

/// Reduce to diagonal form. Denominators are multiplied out first; the unit
/// factor leaves the exponents shifted by the cleared power of t and the
/// right transform unchanged.
pub fn smith_form<F: Field>(m: &Mat<F>) -> SmithForm<F> {
    let cleared = m.cleared();
    let mut form = smith_form_raw(&cleared.matrix);
    for e in &mut form.exponents {
        *e -= cleared.shift;
    }
    form
}

fn smith_form_raw<F: Field>(m: &Mat<F>) -> SmithForm<F> {
    let mut w = m.clone();
    let rows = w.rows();
    let cols = w.cols();
    let mut q = Mat::identity(m.ctx(), cols);
    // u accumulates P^-1 for the row transforms P: each row operation E
    // applied to w updates u by the inverse operation on columns
    let mut u = Mat::identity(m.ctx(), rows);
    let mut exponents = Vec::new();
    let mut k = 0usize;
    while k < rows.min(cols) {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = w.get(i, j).valuation();
                if v == Valuation::Infinite {
                    continue;
                }
                let key = (v, i, j);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            break;
        };
        w.swap_rows(k, pi);
        u.swap_cols(k, pi);
        w.swap_cols(k, pj);
        q.swap_cols(k, pj);
        let piv_inv = w.get(k, k).inv().expect("pivot nonzero");
        // clear row k with column operations (tracked in Q)
        for j in k + 1..cols {
            if w.get(k, j).is_zero() {
                continue;
            }
            let f = w.get(k, j).mul(&piv_inv);
            debug_assert!(f.is_integral());
            for i in 0..rows {
                let val = w.get(i, j).sub(&f.mul(w.get(i, k)));
                w.set(i, j, val);
            }
            for i in 0..cols {
                let val = q.get(i, j).sub(&f.mul(q.get(i, k)));
                q.set(i, j, val);
            }
        }
        // clear column k with row operations; w <- (I - f e_ik) w, so
        // u <- u (I + f e_ik), a column update on u
        for i in k + 1..rows {
            if w.get(i, k).is_zero() {
                continue;
            }
            let f = w.get(i, k).mul(&piv_inv);
            debug_assert!(f.is_integral());
            for j in 0..cols {
                let val = w.get(i, j).sub(&f.mul(w.get(k, j)));
                w.set(i, j, val);
            }
            for r in 0..rows {
                let val = u.get(r, k).add(&f.mul(u.get(r, i)));
                u.set(r, k, val);
            }
        }
        exponents.push(v.finite().expect("finite pivot valuation"));
        k += 1;
    }
    SmithForm {
        rank: exponents.len(),
        exponents,
        right_transform: q,
        left_transform: u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    pub fn mat(rows: usize, entries: Vec<Vec<&str>>) -> Mat<Rat> {
        // entries given row-major for readability
        let cols = entries[0].len();
        let mut m = Mat::zeros((), rows, cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, LaurentScalar::parse((), s).unwrap());
            }
        }
        m
    }

    #[test]
    fn inverse_round_trip() {
        let g = mat(2, vec![vec!["1", "t^-1"], vec!["0", "1"]]);
        let inv = g.inverse().unwrap();
        assert_eq!(g.mul(&inv), Mat::identity((), 2));
        assert!(mat(2, vec![vec!["1", "1"], vec!["1", "1"]])
            .inverse()
            .is_err());
    }

    #[test]
    fn det_and_minors() {
        let g = mat(2, vec![vec!["1", "t^-1"], vec!["0", "1"]]);
        assert!(g.det().is_one());
        let e = g.minor_valuations();
        assert_eq!(e, vec![Valuation::Finite(-1), Valuation::Finite(0)]);
    }

    #[test]
    fn compound_identity() {
        let g = mat(
            3,
            vec![
                vec!["t", "1", "0"],
                vec!["0", "t^-1", "2"],
                vec!["0", "0", "1"],
            ],
        );
        let c1 = g.compound(1);
        assert_eq!(c1, g);
        let c3 = g.compound(3);
        assert_eq!(c3.get(0, 0), &g.det());
    }

    #[test]
    fn smith_of_unipotent() {
        let g = mat(2, vec![vec!["1", "t^-1"], vec!["0", "1"]]);
        let s = smith_form(&g);
        assert_eq!(s.exponents, vec![-1, 1]);
    }

    #[test]
    fn column_reduce_join_shape() {
        // [I | g] for g = [[1, t^-1], [0, 1]] spans the lattice t^-1 e1, e2
        let stack = mat(
            2,
            vec![vec!["1", "0", "1", "t^-1"], vec!["0", "1", "0", "1"]],
        );
        let r = column_reduce_over_r(&stack);
        assert_eq!(r.cols(), 2);
        // span must contain t^-1 e1
        let inv = r.inverse().unwrap();
        let v = inv.mul_vec(&[
            LaurentScalar::parse((), "t^-1").unwrap(),
            LaurentScalar::parse((), "0").unwrap(),
        ]);
        assert!(v.iter().all(|x| x.is_integral()));
    }
}
