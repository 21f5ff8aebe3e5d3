//! Dense univariate polynomials over an exact field, used as numerators and
//! denominators of rational-function scalars.

use crate::field::Field;

/// Coefficients ascending by degree, no trailing zeros. The zero polynomial
/// has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F: Field> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(ctx: F::Ctx) -> Self {
        Poly { ctx, coeffs: vec![] }
    }

    pub fn one(ctx: F::Ctx) -> Self {
        Poly {
            ctx,
            coeffs: vec![F::one(ctx)],
        }
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.ctx();
        Poly::from_coeffs(ctx, vec![c])
    }

    pub fn from_coeffs(ctx: F::Ctx, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn ctx(&self) -> F::Ctx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| F::zero(self.ctx))
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> F {
        self.coeff(0)
    }

    /// Number of low-order zero coefficients (the t-adic valuation); zero
    /// polynomial reports 0.
    pub fn low_zeros(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divide by t^k, which must divide this polynomial.
    pub fn shift_down(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        debug_assert!(self.low_zeros() >= k);
        Poly::from_coeffs(self.ctx, self.coeffs[k..].to_vec())
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![F::zero(self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { ctx: self.ctx, coeffs }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&rhs.coeff(k)));
        }
        Poly::from_coeffs(self.ctx, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut out = vec![F::zero(self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(self.ctx, out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::from_coeffs(
            self.ctx,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coeff");
        let mut quot = vec![
            F::zero(self.ctx);
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.coeffs[rd].mul(&lead_inv);
            let shift = rd - dd;
            quot[shift] = factor.clone();
            let scaled = divisor.scale(&factor).shift_up(shift);
            rem = rem.sub(&scaled);
        }
        (Poly::from_coeffs(self.ctx, quot), rem)
    }

    /// Monic gcd via the Euclidean algorithm, with each remainder made monic
    /// to keep coefficient growth bounded.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone().into_monic();
        let mut b = rhs.clone().into_monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.into_monic();
        }
        a
    }

    fn into_monic(self) -> Self {
        match self.coeffs.last() {
            None => self,
            Some(lead) if lead.is_one() => self,
            Some(lead) => {
                let inv = lead.inv().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// First `n` coefficients of the power series self/divisor; the divisor
    /// must have a nonzero constant term.
    pub fn series_div(&self, divisor: &Self, n: usize) -> Vec<F> {
        let c0 = divisor.constant_term();
        let c0_inv = c0.inv().expect("divisor must be a unit at t=0");
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for i in 1..=k {
                let d = divisor.coeff(i);
                if d.is_zero() {
                    continue;
                }
                let q: &F = &out[k - i];
                acc = acc.sub(&d.mul(q));
            }
            out.push(acc.mul(&c0_inv));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn poly(coeffs: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs((), coeffs.iter().map(|&c| Rat::from_ratio(c, 1)).collect())
    }

    #[test]
    fn div_rem_and_gcd() {
        // (1 - t^2) / (1 - t) = 1 + t
        let num = poly(&[1, 0, -1]);
        let den = poly(&[1, -1]);
        let (q, r) = num.div_rem(&den);
        assert!(r.is_zero());
        assert_eq!(q, poly(&[1, 1]));

        let g = poly(&[1, 0, -1]).gcd(&poly(&[1, -1]));
        // monic gcd of (1-t)(1+t) and (1-t) is t-1
        assert_eq!(g, poly(&[-1, 1]));
    }

    #[test]
    fn geometric_series() {
        let one = poly(&[1]);
        let den = poly(&[1, -1]);
        let coeffs = one.series_div(&den, 4);
        assert!(coeffs.iter().all(|c| c.to_string() == "1"));
    }
}
