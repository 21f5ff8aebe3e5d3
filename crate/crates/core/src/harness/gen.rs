//! Deterministic sample generators. Exponents are drawn uniformly from
//! [-window, window] and coefficients from a small exact set; singular draws
//! are rejected with a bounded retry budget. Strict extensions are built
//! constructively from a sub pair, a quotient pair, and integral gluing
//! blocks, never by rejection on strictness.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bilattice::{BilatticedSpace, GroupShape};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::Flag;
use crate::kmat::{KMat, Subspace};
use crate::lattice::{CocharType, LatticeBasis};
use crate::matrix::Mat;
use crate::scalar::LaurentScalar;

use super::{trial_seed, TrialConfig};

const MAX_RETRIES: u32 = 200;

pub struct Generator<F: Field> {
    rng: ChaCha8Rng,
    ctx: F::Ctx,
    window: i64,
    dim_max: usize,
}

/// The sample kinds exposed through the generic `gen` entry point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenKind {
    Lattice,
    Flag,
    BorelElement,
    ParabolicElement,
    StrictExtension,
}

/// A generated value, tagged by kind.
pub enum GenValue<F: Field> {
    Lattice(LatticeBasis<F>),
    Flag(Flag<F>),
    /// (u, mu, the assembled element u t^mu sandwiched by integral units)
    BorelElement {
        unipotent: Mat<F>,
        mu: CocharType,
        element: Mat<F>,
    },
    ParabolicElement {
        shape: GroupShape,
        element: Mat<F>,
    },
    StrictExtension {
        sub: BilatticedSpace<F>,
        total: BilatticedSpace<F>,
        quotient: BilatticedSpace<F>,
        incl: Mat<F>,
        proj: Mat<F>,
    },
}

/// Deterministic stream of samples of one kind.
pub fn gen<F: Field>(
    kind: GenKind,
    cfg: &TrialConfig,
    ctx: F::Ctx,
) -> impl Iterator<Item = Result<GenValue<F>>> + '_ {
    let cfg = *cfg;
    (0..cfg.trials).map(move |trial| {
        let mut g = Generator::<F>::new(ctx, &cfg, trial);
        let n = g.dim().max(if kind == GenKind::StrictExtension { 2 } else { 1 });
        Ok(match kind {
            GenKind::Lattice => GenValue::Lattice(g.lattice(n)?),
            GenKind::Flag => GenValue::Flag(g.flag(n)),
            GenKind::BorelElement => {
                let (unipotent, mu, element) = g.borel_element(n)?;
                GenValue::BorelElement {
                    unipotent,
                    mu,
                    element,
                }
            }
            GenKind::ParabolicElement => {
                let shape = g.shape(n);
                let element = g.parabolic_element(&shape)?;
                GenValue::ParabolicElement { shape, element }
            }
            GenKind::StrictExtension => {
                let (sub, total, quotient, incl, proj) = g.strict_extension(n)?;
                GenValue::StrictExtension {
                    sub,
                    total,
                    quotient,
                    incl,
                    proj,
                }
            }
        })
    })
}

impl<F: Field> Generator<F> {
    pub fn new(ctx: F::Ctx, cfg: &TrialConfig, trial: u32) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, trial)),
            ctx,
            window: cfg.valuation_window,
            dim_max: cfg.dim_max,
        }
    }

    pub fn ctx(&self) -> F::Ctx {
        self.ctx
    }

    /// Dimension for this trial, 1..=dim_max.
    pub fn dim(&mut self) -> usize {
        self.rng.random_range(1..=self.dim_max)
    }

    pub fn dim_at_least(&mut self, lo: usize) -> usize {
        self.rng.random_range(lo..=self.dim_max.max(lo))
    }

    fn coefficient_raw(&mut self) -> F {
        // small exact set, biased away from zero
        let v: i64 = self.rng.random_range(-2..=2);
        F::from_i64(self.ctx, v)
    }

    pub fn coefficient_nonzero(&mut self) -> F {
        loop {
            let c = self.coefficient_raw();
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn exponent(&mut self) -> i64 {
        self.rng.random_range(-self.window..=self.window)
    }

    fn exponent_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    /// Sparse Laurent polynomial scalar with exponents in the window.
    pub fn scalar(&mut self) -> LaurentScalar<F> {
        let terms = self.rng.random_range(0..=2);
        let mut acc = LaurentScalar::zero(self.ctx);
        for _ in 0..terms {
            let c = self.coefficient_raw();
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&LaurentScalar::monomial(c, self.exponent()));
        }
        acc
    }

    pub fn scalar_nonzero(&mut self) -> LaurentScalar<F> {
        let mut s = self.scalar();
        if s.is_zero() {
            s = LaurentScalar::monomial(self.coefficient_nonzero(), self.exponent());
        }
        s
    }

    fn integral_scalar(&mut self) -> LaurentScalar<F> {
        let terms = self.rng.random_range(0..=2);
        let mut acc = LaurentScalar::zero(self.ctx);
        for _ in 0..terms {
            let c = self.coefficient_raw();
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&LaurentScalar::monomial(c, self.exponent_in(0, self.window)));
        }
        acc
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Mat<F> {
        let mut m = Mat::zeros(self.ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.scalar());
            }
        }
        m
    }

    pub fn invertible_matrix(&mut self, n: usize) -> Result<Mat<F>> {
        for _ in 0..MAX_RETRIES {
            let m = self.matrix(n, n);
            if !m.det().is_zero() {
                return Ok(m);
            }
        }
        Err(Error::GenerationFailed(MAX_RETRIES))
    }

    pub fn lattice(&mut self, n: usize) -> Result<LatticeBasis<F>> {
        LatticeBasis::new(self.invertible_matrix(n)?)
    }

    /// A unit of the valuation ring: nonzero constant term plus noise.
    fn unit_scalar(&mut self) -> LaurentScalar<F> {
        LaurentScalar::from_coefficient(self.coefficient_nonzero()).add(
            &LaurentScalar::monomial(self.coefficient_raw(), self.exponent_in(1, self.window)),
        )
    }

    /// A matrix in GL_n(R), built constructively as P L D U so no rejection
    /// is needed.
    pub fn integral_unit(&mut self, n: usize) -> Result<Mat<F>> {
        let mut lower = Mat::identity(self.ctx, n);
        let mut upper = Mat::identity(self.ctx, n);
        let mut diag = Mat::zeros(self.ctx, n, n);
        for i in 0..n {
            diag.set(i, i, self.unit_scalar());
            for j in 0..i {
                lower.set(i, j, self.integral_scalar());
                upper.set(j, i, self.integral_scalar());
            }
        }
        // random row permutation widens the coverage beyond the open cell
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let mut p = Mat::zeros(self.ctx, n, n);
        for (i, &pi) in perm.iter().enumerate() {
            p.set(pi, i, LaurentScalar::one(self.ctx));
        }
        Ok(p.mul(&lower).mul(&diag).mul(&upper))
    }

    /// Upper-triangular matrix in GL_n(R) with unit diagonal valuations.
    pub fn integral_upper_unit(&mut self, n: usize) -> Mat<F> {
        let mut m = Mat::zeros(self.ctx, n, n);
        for i in 0..n {
            m.set(i, i, self.unit_scalar());
            for j in i + 1..n {
                m.set(i, j, self.integral_scalar());
            }
        }
        m
    }

    /// Random subspace chain for a flag: strictly decreasing dims down from n.
    pub fn flag(&mut self, n: usize) -> Flag<F> {
        let basis = loop {
            let mut k = KMat::zeros(self.ctx, n, n);
            for i in 0..n {
                for j in 0..n {
                    k.set(i, j, self.coefficient_raw());
                }
            }
            if k.rank() == n {
                break k;
            }
        };
        // choose 1..=n strictly decreasing dims starting at n
        let steps_count = self.rng.random_range(1..=n);
        let mut dims: Vec<usize> = vec![n];
        while dims.len() < steps_count {
            let last = *dims.last().unwrap();
            if last == 1 {
                break;
            }
            dims.push(self.rng.random_range(1..last));
        }
        let mut jumps: Vec<i64> = Vec::new();
        while jumps.len() < dims.len() {
            let j = self.exponent();
            if !jumps.contains(&j) {
                jumps.push(j);
            }
        }
        jumps.sort_unstable();
        let steps = jumps
            .into_iter()
            .zip(dims)
            .map(|(j, d)| {
                let cols: Vec<Vec<F>> = (0..d).map(|c| basis.col(c)).collect();
                (
                    j,
                    Subspace::from_span(&KMat::from_cols(self.ctx, n, cols).unwrap()),
                )
            })
            .collect();
        Flag::new(n, steps).expect("generated chain is a valid flag")
    }

    /// Dominant cocharacter with entries in the window.
    pub fn dominant(&mut self, n: usize) -> CocharType {
        let entries: Vec<i64> = (0..n).map(|_| self.exponent()).collect();
        CocharType::new(entries)
    }

    /// Dominant cocharacter with spread at most one.
    pub fn minuscule(&mut self, n: usize) -> CocharType {
        let base = self.exponent();
        let entries: Vec<i64> = (0..n)
            .map(|_| base + self.rng.random_range(0..=1))
            .collect();
        CocharType::new(entries)
    }

    /// A lattice of minuscule type: an integral unit applied to t^mu.
    pub fn minuscule_lattice(&mut self, n: usize) -> Result<(CocharType, LatticeBasis<F>)> {
        let mu = self.minuscule(n);
        let unit = self.integral_unit(n)?;
        let cols = unit.mul(&Mat::t_diag(self.ctx, mu.entries()));
        Ok((mu, LatticeBasis::new(cols)?))
    }

    /// Upper-triangular unipotent with field entries.
    pub fn upper_unipotent(&mut self, n: usize) -> Mat<F> {
        let mut m = Mat::identity(self.ctx, n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, self.scalar());
            }
        }
        m
    }

    /// (u, mu, k1 u t^mu k2): the unipotent-cocharacter pair plus a generic
    /// Borel element in the same double coset with Levi valuations mu.
    pub fn borel_element(&mut self, n: usize) -> Result<(Mat<F>, CocharType, Mat<F>)> {
        let u = self.upper_unipotent(n);
        let mu = self.dominant(n);
        let core = u.mul(&Mat::t_diag(self.ctx, mu.entries()));
        let k1 = self.integral_upper_unit(n);
        let k2 = self.integral_upper_unit(n);
        let element = k1.mul(&core).mul(&k2);
        Ok((u, mu, element))
    }

    /// Random block partition of n.
    pub fn shape(&mut self, n: usize) -> GroupShape {
        let mut blocks = Vec::new();
        let mut rest = n;
        while rest > 0 {
            let b = self.rng.random_range(1..=rest);
            blocks.push(b);
            rest -= b;
        }
        GroupShape::new(blocks).expect("positive blocks")
    }

    /// Invertible block-upper-triangular element for the shape, with field
    /// entries everywhere above the block diagonal.
    pub fn parabolic_element(&mut self, shape: &GroupShape) -> Result<Mat<F>> {
        let n = shape.dim();
        let offsets = shape.offsets();
        for _ in 0..MAX_RETRIES {
            let mut m = Mat::zeros(self.ctx, n, n);
            let mut ok = true;
            for (bi, &oi) in offsets.iter().enumerate() {
                let b = shape.blocks[bi];
                let block = self.matrix(b, b);
                if block.det().is_zero() {
                    ok = false;
                    break;
                }
                m.set_block(oi, oi, &block);
                for (bj, &oj) in offsets.iter().enumerate() {
                    if bj > bi {
                        let w = shape.blocks[bj];
                        m.set_block(oi, oj, &self.matrix(b, w));
                    }
                }
            }
            if ok {
                return Ok(m);
            }
        }
        Err(Error::GenerationFailed(MAX_RETRIES))
    }

    /// A strict exact sequence 0 -> S -> V -> Q -> 0 built from random sub
    /// and quotient pairs glued block-triangularly by integral blocks. Both
    /// lattices of V share the standard inclusion/projection, which makes
    /// the maps strict by construction.
    #[allow(clippy::type_complexity)]
    pub fn strict_extension(
        &mut self,
        n: usize,
    ) -> Result<(
        BilatticedSpace<F>,
        BilatticedSpace<F>,
        BilatticedSpace<F>,
        Mat<F>,
        Mat<F>,
    )> {
        assert!(n >= 2, "extensions need dimension at least 2");
        let s = self.rng.random_range(1..n);
        let q = n - s;
        let sub = BilatticedSpace::new(self.lattice(s)?, self.lattice(s)?)?;
        let quotient = BilatticedSpace::new(self.lattice(q)?, self.lattice(q)?)?;
        let mut glue1 = Mat::zeros(self.ctx, s, q);
        let mut glue2 = Mat::zeros(self.ctx, s, q);
        for i in 0..s {
            for j in 0..q {
                glue1.set(i, j, self.integral_scalar());
                glue2.set(i, j, self.integral_scalar());
            }
        }
        let mut c1 = Mat::zeros(self.ctx, n, n);
        c1.set_block(0, 0, sub.first().basis_matrix());
        c1.set_block(0, s, &glue1);
        c1.set_block(s, s, quotient.first().basis_matrix());
        let mut c2 = Mat::zeros(self.ctx, n, n);
        c2.set_block(0, 0, sub.second().basis_matrix());
        c2.set_block(0, s, &glue2);
        c2.set_block(s, s, quotient.second().basis_matrix());
        let total = BilatticedSpace::new(LatticeBasis::new(c1)?, LatticeBasis::new(c2)?)?;
        let mut incl = Mat::zeros(self.ctx, n, s);
        for i in 0..s {
            incl.set(i, i, LaurentScalar::one(self.ctx));
        }
        let mut proj = Mat::zeros(self.ctx, q, n);
        for i in 0..q {
            proj.set(i, s + i, LaurentScalar::one(self.ctx));
        }
        Ok((sub, total, quotient, incl, proj))
    }
}
