//! Decreasing flags on K^n with integer jump indices, the dominance order,
//! the canonical (Rees) lattice, the Bialynicki-Birula filtration of a
//! lattice pair, and strictness of filtered maps.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::kmat::{KMat, Subspace};
use crate::lattice::{CocharType, LatticeBasis};
use crate::matrix::Mat;
use crate::scalar::LaurentScalar;

/// A separated, exhaustive decreasing filtration of K^n. Each step records
/// (jump index j, the subspace F^j); the filtration is constant between
/// jumps, full below the first jump, and zero above the last. The first
/// recorded subspace is therefore always the full space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Flag<F: Field> {
    ambient: usize,
    steps: Vec<(i64, Subspace<F>)>,
}

impl<F: Field> Flag<F> {
    pub fn new(ambient: usize, steps: Vec<(i64, Subspace<F>)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidFlag("a flag needs at least one step".into()));
        }
        for w in steps.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidFlag("jump indices must strictly increase".into()));
            }
            if !(w[0].1.contains_space(&w[1].1) && w[0].1.dim() > w[1].1.dim()) {
                return Err(Error::InvalidFlag(
                    "subspaces must be strictly nested downward".into(),
                ));
            }
        }
        if steps[0].1.dim() != ambient {
            return Err(Error::InvalidFlag(
                "the subspace at the first jump must be the full space".into(),
            ));
        }
        if steps.iter().any(|(_, w)| w.ambient_dim() != ambient) {
            return Err(Error::InvalidFlag("ambient dimension mismatch".into()));
        }
        Ok(Flag { ambient, steps })
    }

    /// The trivial flag: one jump at 0 with the full space.
    pub fn trivial(ctx: F::Ctx, n: usize) -> Self {
        Flag {
            ambient: n,
            steps: vec![(0, Subspace::full(ctx, n))],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &[(i64, Subspace<F>)] {
        &self.steps
    }

    pub fn ctx(&self) -> F::Ctx {
        self.steps[0].1.basis().ctx()
    }

    /// F^k: the subspace at the smallest recorded jump >= k.
    pub fn at(&self, k: i64) -> Subspace<F> {
        for (j, w) in &self.steps {
            if *j >= k {
                return w.clone();
            }
        }
        Subspace::zero_space(self.ctx(), self.ambient)
    }

    pub fn min_jump(&self) -> i64 {
        self.steps[0].0
    }

    pub fn max_jump(&self) -> i64 {
        self.steps[self.steps.len() - 1].0
    }

    /// dim gr^k = dim F^k - dim F^{k+1}.
    pub fn graded_dim(&self, k: i64) -> usize {
        self.at(k).dim() - self.at(k + 1).dim()
    }

    /// Multiset of jump indices with multiplicity dim gr^j, sorted
    /// decreasing.
    pub fn flag_type(&self) -> CocharType {
        let mut entries = Vec::with_capacity(self.ambient);
        for (idx, (j, w)) in self.steps.iter().enumerate() {
            let next_dim = self
                .steps
                .get(idx + 1)
                .map_or(0, |(_, w2)| w2.dim());
            for _ in 0..w.dim() - next_dim {
                entries.push(*j);
            }
        }
        CocharType::new(entries)
    }

    /// Dual flag on the dual space: F^k of the dual is the annihilator of
    /// F^{1-k}, so the type negates and reverses.
    pub fn dual(&self) -> Self {
        let r = self.steps.len();
        let mut steps: Vec<(i64, Subspace<F>)> = Vec::with_capacity(r);
        for idx in (0..r).rev() {
            let w = if idx + 1 < r {
                self.steps[idx + 1].1.annihilator()
            } else {
                Subspace::full(self.ctx(), self.ambient)
            };
            steps.push((-self.steps[idx].0, w));
        }
        Flag {
            ambient: self.ambient,
            steps,
        }
    }

    /// Tensor product flag: (F ⊗ G)^k = sum over i+j=k of F^i ⊗ G^j, on
    /// the Kronecker product space.
    pub fn tensor(&self, other: &Flag<F>) -> Flag<F> {
        let ctx = self.ctx();
        let n = self.ambient * other.ambient;
        let lo = self.min_jump() + other.min_jump();
        let hi = self.max_jump() + other.max_jump();
        let mut levels: Vec<(i64, Subspace<F>)> = Vec::new();
        for k in lo..=hi + 1 {
            let mut acc = Subspace::zero_space(ctx, n);
            // terms with i below the first jump are dominated by i = min_jump
            for i in self.min_jump()..=self.max_jump() {
                let wg = other.at(k - i);
                if wg.dim() == 0 {
                    continue;
                }
                acc = acc.sum(&self.at(i).tensor(&wg));
            }
            levels.push((k, acc));
        }
        let mut steps = Vec::new();
        for (idx, (k, w)) in levels.iter().enumerate() {
            let next_dim = levels.get(idx + 1).map_or(0, |(_, w2)| w2.dim());
            if w.dim() != next_dim {
                steps.push((*k, w.clone()));
            }
        }
        Flag::new(n, steps).expect("tensor flag is well formed")
    }
}

/// Dominance partial order: every partial sum of mu is at most the
/// corresponding partial sum of nu.
pub fn dominance_leq(mu: &CocharType, nu: &CocharType) -> Result<bool> {
    if mu.len() != nu.len() {
        return Err(Error::DimensionMismatch(format!(
            "type lengths {} and {}",
            mu.len(),
            nu.len()
        )));
    }
    Ok(mu
        .partial_sums()
        .iter()
        .zip(nu.partial_sums().iter())
        .all(|(a, b)| a <= b))
}

pub fn is_minuscule(mu: &CocharType) -> bool {
    mu.is_minuscule()
}

/// The canonical lattice of a flag: choose a basis adapted to the flag by
/// greedy completion from the deepest step outward (deterministic by column
/// order of the canonical bases), and scale a vector entering at jump i by
/// t^-i.
pub fn rees_lattice<F: Field>(flag: &Flag<F>) -> LatticeBasis<F> {
    let ctx = flag.ctx();
    let n = flag.ambient_dim();
    let mut chosen: Vec<Vec<F>> = Vec::with_capacity(n);
    let mut chosen_jumps: Vec<i64> = Vec::with_capacity(n);
    let mut span = Subspace::zero_space(ctx, n);
    for (j, w) in flag.steps().iter().rev() {
        for c in 0..w.dim() {
            let v = w.basis().col(c);
            if !span.contains_vec(&v) {
                span = span.sum(&Subspace::from_span(
                    &KMat::from_cols(ctx, n, vec![v.clone()]).unwrap(),
                ));
                chosen.push(v);
                chosen_jumps.push(*j);
            }
        }
    }
    debug_assert_eq!(chosen.len(), n);
    let cols: Vec<Vec<LaurentScalar<F>>> = chosen
        .into_iter()
        .zip(chosen_jumps)
        .map(|(v, j)| {
            v.into_iter()
                .map(|c| LaurentScalar::from_coefficient(c).mul_t_power(-j))
                .collect()
        })
        .collect();
    LatticeBasis::new(Mat::from_cols(ctx, n, cols).unwrap()).expect("adapted basis is invertible")
}

/// The filtration induced on M/tM by the t-power rescalings of L:
/// F^k = image of (t^k L meet M) in M/tM.
///
/// Computed from one diagonalization: writing M^-1 L = U D V up to units
/// with D = diag(t^{a_i}), the intersection t^k L meet M has M-coordinates
/// U diag(t^{max(a_i + k, 0)}) R^n, so F^k is spanned by the residues of
/// the columns of U with a_i <= -k. The unit-group transforms keep every
/// jump within the range carved out by the relative type.
pub fn bb_filtration<F: Field>(
    lattice: &LatticeBasis<F>,
    ambient: &LatticeBasis<F>,
) -> Result<Flag<F>> {
    let n = ambient.dim();
    if lattice.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "lattice dims {} and {}",
            lattice.dim(),
            n
        )));
    }
    let (p, c) = ambient
        .basis_matrix()
        .solve_scaled(lattice.basis_matrix())?;
    let gamma = c
        .valuation()
        .finite()
        .ok_or_else(|| Error::Singular("ambient basis is singular".into()))?;
    let snf = crate::matrix::smith_form(&p);
    if snf.rank != n {
        return Err(Error::Singular("lattice basis is singular".into()));
    }
    let residue = snf.left_transform.residue_at_zero()?;
    let exps: Vec<i64> = snf.exponents.iter().map(|e| e + gamma).collect();
    // exponents ascend; a jump sits at k = -v for each distinct value v,
    // with F^{-v} spanned by the residue columns of exponent <= v
    let mut steps: Vec<(i64, Subspace<F>)> = Vec::new();
    let mut idx = exps.len();
    while idx > 0 {
        let v = exps[idx - 1];
        let mut lead = idx;
        while lead > 0 && exps[lead - 1] == v {
            lead -= 1;
        }
        let cols: Vec<Vec<F>> = (0..idx).map(|j| residue.col(j)).collect();
        let span = Subspace::from_span(&KMat::from_cols(lattice.ctx(), n, cols)?);
        steps.push((-v, span));
        idx = lead;
    }
    Flag::new(n, steps)
}

/// Strictness of a filtration-compatible map: f(F^k) = f(V) ∩ G^k for all k.
/// Errors if f does not respect the filtrations.
pub fn is_strict_filtered_map<F: Field>(
    f: &KMat<F>,
    source: &Flag<F>,
    target: &Flag<F>,
) -> Result<bool> {
    if f.cols() != source.ambient_dim() || f.rows() != target.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, flags have ambient {} -> {}",
            f.rows(),
            f.cols(),
            source.ambient_dim(),
            target.ambient_dim()
        )));
    }
    let image = Subspace::from_span(f);
    let mut jumps: Vec<i64> = source
        .steps()
        .iter()
        .chain(target.steps())
        .map(|(j, _)| *j)
        .collect();
    jumps.sort_unstable();
    jumps.dedup();
    for &k in &jumps {
        let pushed = source.at(k).apply(f);
        let restricted = target.at(k);
        if !restricted.contains_space(&pushed) {
            return Err(Error::NotFiltered(format!(
                "f(F^{k}) is not inside G^{k}"
            )));
        }
    }
    for &k in &jumps {
        let pushed = source.at(k).apply(f);
        let restricted = image.intersect(&target.at(k));
        if pushed != restricted {
            return Ok(false);
        }
    }
    Ok(true)
}
