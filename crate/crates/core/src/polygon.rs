//! Combinatorial slope layer: slope multisets with their integrality
//! constraint, Newton/Hodge polygons, slope arithmetic under tensor, dual,
//! and exterior powers, the dominance test against a type, basic elements,
//! and the degree bookkeeping for modified bundles, anchored by the rank-one
//! Tate objects.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bilattice::GroupShape;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::CocharType;
use crate::matrix::Mat;

pub type Rational = BigRational;

pub fn rational_from(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A weakly decreasing rational multiset obeying the isocrystal integrality
/// constraint: each slope a/b in lowest terms occurs with multiplicity a
/// multiple of b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlopeVector(Vec<Rational>);

impl SlopeVector {
    pub fn new(raw: Vec<Rational>) -> Result<Self> {
        let mut entries = raw;
        entries.sort_by(|a, b| b.cmp(a));
        let v = SlopeVector(entries);
        v.check_integrality()?;
        Ok(v)
    }

    fn check_integrality(&self) -> Result<()> {
        let mut idx = 0;
        while idx < self.0.len() {
            let slope = &self.0[idx];
            let mut mult = 0usize;
            while idx + mult < self.0.len() && &self.0[idx + mult] == slope {
                mult += 1;
            }
            let b = slope.denom().clone();
            let b: usize = b
                .try_into()
                .map_err(|_| Error::InvalidInput("slope denominator too large".into()))?;
            if mult % b != 0 {
                return Err(Error::SlopeIntegrality {
                    slope: rational_to_string(slope),
                    multiplicity: mult,
                    required: b,
                });
            }
            idx += mult;
        }
        Ok(())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn partial_sums(&self) -> Vec<Rational> {
        self.0
            .iter()
            .scan(Rational::zero(), |acc, v| {
                *acc += v;
                Some(acc.clone())
            })
            .collect()
    }

    /// All entries equal.
    pub fn is_isoclinic(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn from_type(mu: &CocharType) -> Self {
        SlopeVector(
            mu.entries()
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    /// Negated and reversed (type of the dual object).
    pub fn dual(&self) -> Self {
        SlopeVector(self.0.iter().rev().map(|v| -v).collect())
    }

    /// All pairwise sums, sorted.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a + b);
            }
        }
        SlopeVector::new(out)
    }

    /// All k-subset sums, sorted.
    pub fn exterior(&self, k: usize) -> Result<Self> {
        if k < 1 || k > self.len() {
            return Err(Error::ExteriorRange { k, n: self.len() });
        }
        let subsets = crate::matrix::lex_subsets(self.len(), k);
        let out = subsets
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .fold(Rational::zero(), |acc, i| acc + &self.0[i])
            })
            .collect();
        SlopeVector::new(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlopeArith {
    Tensor,
    Dual,
    Exterior(usize),
}

pub fn slope_arith(
    a: &SlopeVector,
    b: Option<&SlopeVector>,
    mode: SlopeArith,
) -> Result<SlopeVector> {
    match mode {
        SlopeArith::Tensor => {
            let b = b.ok_or_else(|| Error::InvalidInput("tensor needs two operands".into()))?;
            a.tensor(b)
        }
        SlopeArith::Dual => Ok(a.dual()),
        SlopeArith::Exterior(k) => a.exterior(k),
    }
}

/// Dominance against a type with equal endpoints: total sums agree and each
/// partial sum of nu is at most that of mu. In the fixed orientation the
/// polygon of nu lies on or above the polygon of mu.
pub fn mazur_member(nu: &SlopeVector, mu: &CocharType) -> Result<bool> {
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch(format!(
            "slope length {} vs type length {}",
            nu.len(),
            mu.len()
        )));
    }
    let mu_slopes = SlopeVector::from_type(mu);
    if nu.sum() != mu_slopes.sum() {
        return Ok(false);
    }
    Ok(nu
        .partial_sums()
        .iter()
        .zip(mu_slopes.partial_sums().iter())
        .all(|(a, b)| a <= b))
}

/// The straight-line slope vector with the same endpoint as mu: the constant
/// vector (sum mu)/n. Its integrality holds automatically since the reduced
/// denominator divides n.
pub fn basic_element(mu: &CocharType) -> SlopeVector {
    let n = mu.len();
    let avg = rational_from(mu.sum(), n as i64);
    SlopeVector::new(vec![avg; n]).expect("straight line satisfies integrality")
}

/// Which center the slope homomorphism is measured against.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasicScope {
    /// The full block group; its center is the scalars, so basic means all
    /// slopes equal.
    FullGroup,
    /// The Levi quotient only: blockwise scalars, so basic means constant
    /// slopes within each block.
    LeviBlockwise,
}

pub fn is_basic_for_shape(
    nu: &SlopeVector,
    shape: &GroupShape,
    scope: BasicScope,
) -> Result<bool> {
    if nu.len() != shape.dim() {
        return Err(Error::DimensionMismatch(format!(
            "slope length {} vs shape dim {}",
            nu.len(),
            shape.dim()
        )));
    }
    match scope {
        BasicScope::FullGroup => Ok(nu.is_isoclinic()),
        BasicScope::LeviBlockwise => {
            let mut idx = 0;
            for &b in &shape.blocks {
                for k in 1..b {
                    if nu.entries()[idx + k] != nu.entries()[idx] {
                        return Ok(false);
                    }
                }
                idx += b;
            }
            Ok(true)
        }
    }
}

/// Isoclinic of slope a/n with a coprime to the rank: the automorphisms of
/// such an object are a division algebra, the compact-mod-center case.
pub fn is_compact_mod_center(nu: &SlopeVector) -> bool {
    if !nu.is_isoclinic() || nu.is_empty() {
        return false;
    }
    let total = nu.sum();
    if total.denom() != &BigInt::from(1) {
        return false;
    }
    let a: BigInt = total.numer().clone();
    let n = BigInt::from(nu.len());
    a.gcd(&n) == BigInt::from(1)
}

/// Newton-side data of a block-triangular element: per block, the straight
/// line with endpoint the valuation of the block determinant. Depends only
/// on the block-diagonal part and is invariant under integral unit
/// multiplication on either side.
pub fn newton_of_levi<F: Field>(g: &Mat<F>, shape: &GroupShape) -> Result<SlopeVector> {
    let n = shape.dim();
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "element is {}x{}, shape wants {n}",
            g.rows(),
            g.cols()
        )));
    }
    let offsets = shape.offsets();
    let mut slopes = Vec::with_capacity(n);
    for (bi, &oi) in offsets.iter().enumerate() {
        let b = shape.blocks[bi];
        let det = g.block(oi, oi, b, b).det();
        let v = det
            .valuation()
            .finite()
            .ok_or_else(|| Error::Singular(format!("diagonal block {bi} is singular")))?;
        let slope = rational_from(v, b as i64);
        for _ in 0..b {
            slopes.push(slope.clone());
        }
    }
    SlopeVector::new(slopes)
}

/// A lower-left-anchored polygon: cumulative partial-sum vertices starting
/// at (0,0). With weakly decreasing inputs the segment slopes weakly
/// decrease.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polygon {
    vertices: Vec<(Rational, Rational)>,
}

impl Polygon {
    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.vertices
    }

    /// Height of the polygon at rational abscissa x (linear interpolation);
    /// None outside the span.
    pub fn height_at(&self, x: &Rational) -> Option<Rational> {
        for w in self.vertices.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x >= x0 && x <= x1 {
                if x0 == x1 {
                    return Some(y0.clone());
                }
                let tfrac = (x - x0) / (x1 - x0);
                return Some(y0 + tfrac * (y1 - y0));
            }
        }
        None
    }
}

pub fn polygon_of_slopes(nu: &SlopeVector) -> Polygon {
    let mut vertices = vec![(Rational::zero(), Rational::zero())];
    let mut x = Rational::zero();
    let mut y = Rational::zero();
    for s in nu.entries() {
        x += BigRational::from_integer(BigInt::from(1));
        y += s;
        vertices.push((x.clone(), y.clone()));
    }
    Polygon { vertices }
}

pub fn polygon_of_type(mu: &CocharType) -> Polygon {
    polygon_of_slopes(&SlopeVector::from_type(mu))
}

/// Necessary-condition report for a slope vector paired with a lattice type.
/// `etale_type` is oriented so that the second residue filtration of the
/// pair has that type; `de_rham_type` is its inverse. Full semistability of
/// the modification is not decidable at this combinatorial layer, so the
/// verdict only aggregates the degree and dominance obstructions.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub newton: SlopeVector,
    pub etale_type: CocharType,
    pub de_rham_type: CocharType,
    /// Slopes of the unmodified bundle: the negated Newton slopes.
    pub bundle_slopes: SlopeVector,
    /// Degree of the modified bundle: -(sum nu) - (sum etale type).
    pub modified_degree: Rational,
    /// Weight normalization, emitted for downstream reports.
    pub weight: Rational,
    pub degree_zero: bool,
    pub mazur_ok: bool,
    pub verdict_necessary: bool,
}

pub fn admissibility_report(
    nu: &SlopeVector,
    etale_type: &CocharType,
) -> Result<AdmissibilityReport> {
    if nu.len() != etale_type.len() {
        return Err(Error::DimensionMismatch(format!(
            "slope length {} vs type length {}",
            nu.len(),
            etale_type.len()
        )));
    }
    let de_rham_type = etale_type.neg_reversed();
    let bundle_slopes = nu.dual(); // negation, re-sorted by reversal
    let modified_degree =
        -nu.sum() - BigRational::from_integer(BigInt::from(etale_type.sum()));
    let degree_zero = modified_degree.is_zero();
    let mazur_ok = mazur_member(nu, &de_rham_type)?;
    let n = nu.len() as i64;
    let weight = -nu.sum() * rational_from(2, n);
    Ok(AdmissibilityReport {
        newton: nu.clone(),
        etale_type: etale_type.clone(),
        de_rham_type,
        bundle_slopes,
        modified_degree,
        weight,
        degree_zero,
        mazur_ok,
        verdict_necessary: degree_zero && mazur_ok,
    })
}

/// The rank-one anchor pinning every sign convention: the twist by k has
/// Newton slope -k, Hodge degree -k, and Hodge-Tate degree +k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TateAnchor {
    pub nu: SlopeVector,
    pub etale_type: CocharType,
    pub hodge_degree: i64,
    pub hodge_tate_degree: i64,
}

impl TateAnchor {
    pub fn dual(&self) -> Self {
        TateAnchor {
            nu: self.nu.dual(),
            etale_type: self.etale_type.neg_reversed(),
            hodge_degree: -self.hodge_degree,
            hodge_tate_degree: -self.hodge_tate_degree,
        }
    }
}

pub fn tate_anchor(k: i64) -> TateAnchor {
    TateAnchor {
        nu: SlopeVector::new(vec![rational_from(-k, 1)]).unwrap(),
        etale_type: CocharType::new(vec![k]),
        hodge_degree: -k,
        hodge_tate_degree: k,
    }
}
