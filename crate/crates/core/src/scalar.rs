//! Exact elements of K((t)) represented as t^shift · num/den with num and den
//! polynomials over K, den a unit at t = 0. Everything the library touches
//! lives in this subfield K(t), so all downstream computations are exact.

use std::fmt::{self, Display};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

/// t-adic valuation: a finite integer or +infinity (for zero).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Canonical form: either zero (num = 0, shift = 0, den = 1), or
/// num(0) != 0, den(0) = 1, gcd(num, den) = 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentScalar<F: Field> {
    shift: i64,
    num: Poly<F>,
    den: Poly<F>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<F: Field> LaurentScalar<F> {
    pub fn zero(ctx: F::Ctx) -> Self {
        LaurentScalar {
            shift: 0,
            num: Poly::zero(ctx),
            den: Poly::one(ctx),
        }
    }

    pub fn one(ctx: F::Ctx) -> Self {
        LaurentScalar {
            shift: 0,
            num: Poly::one(ctx),
            den: Poly::one(ctx),
        }
    }

    pub fn from_coefficient(c: F) -> Self {
        let ctx = c.ctx();
        Self::from_parts(0, Poly::constant(c), Poly::one(ctx))
    }

    pub fn from_i64(ctx: F::Ctx, v: i64) -> Self {
        Self::from_coefficient(F::from_i64(ctx, v))
    }

    /// t^k.
    pub fn t_power(ctx: F::Ctx, k: i64) -> Self {
        LaurentScalar {
            shift: k,
            num: Poly::one(ctx),
            den: Poly::one(ctx),
        }
    }

    /// c * t^k.
    pub fn monomial(c: F, k: i64) -> Self {
        let ctx = c.ctx();
        Self::from_parts(k, Poly::constant(c), Poly::one(ctx))
    }

    /// Build t^shift * num/den and put it in canonical form. The denominator
    /// may be divisible by t but must be nonzero.
    pub fn from_parts(mut shift: i64, mut num: Poly<F>, mut den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let ctx = num.ctx();
        if num.is_zero() {
            return Self::zero(ctx);
        }
        let nz = num.low_zeros();
        shift += nz as i64;
        num = num.shift_down(nz);
        // constant denominators need no gcd pass; this is the hot path for
        // polynomial-entry matrix kernels
        if den.degree() == Some(0) {
            let c = den.constant_term();
            if !c.is_one() {
                let inv = c.inv().expect("den unit");
                num = num.scale(&inv);
                den = Poly::one(ctx);
            }
            return LaurentScalar { shift, num, den };
        }
        let dz = den.low_zeros();
        shift -= dz as i64;
        den = den.shift_down(dz);
        let g = num.gcd(&den);
        if g.degree().map_or(false, |d| d > 0) {
            num = num.div_rem(&g).0;
            den = den.div_rem(&g).0;
        }
        let c = den.constant_term();
        debug_assert!(!c.is_zero());
        if !c.is_one() {
            let inv = c.inv().expect("den unit");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        LaurentScalar { shift, num, den }
    }

    /// Is the denominator trivial (a Laurent polynomial)?
    pub fn is_polynomial_form(&self) -> bool {
        self.den.is_one()
    }

    pub fn ctx(&self) -> F::Ctx {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.shift)
        }
    }

    /// Lies in the valuation ring (v >= 0)?
    pub fn is_integral(&self) -> bool {
        self.valuation().is_nonnegative()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self
            .num
            .mul(&rhs.den)
            .shift_up((self.shift - s) as usize);
        let b = rhs
            .num
            .mul(&self.den)
            .shift_up((rhs.shift - s) as usize);
        Self::from_parts(s, a.add(&b), self.den.mul(&rhs.den))
    }

    pub fn neg(&self) -> Self {
        LaurentScalar {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.ctx());
        }
        Self::from_parts(
            self.shift + rhs.shift,
            self.num.mul(&rhs.num),
            self.den.mul(&rhs.den),
        )
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_parts(
            -self.shift,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn arith(&self, rhs: &Self, op: ArithOp) -> Result<Self> {
        Ok(match op {
            ArithOp::Add => self.add(rhs),
            ArithOp::Sub => self.sub(rhs),
            ArithOp::Mul => self.mul(rhs),
            ArithOp::Div => self.div(rhs)?,
        })
    }

    /// Multiply by t^k.
    pub fn mul_t_power(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentScalar {
            shift: self.shift + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Exact coefficients of t^lo .. t^hi in the Laurent expansion.
    pub fn expand(&self, lo: i64, hi: i64) -> Vec<F> {
        assert!(lo <= hi, "expand range must satisfy lo <= hi");
        let ctx = self.ctx();
        let width = (hi - lo + 1) as usize;
        if self.is_zero() || hi < self.shift {
            return vec![F::zero(ctx); width];
        }
        let order = (hi - self.shift + 1) as usize;
        let series = self.num.series_div(&self.den, order);
        (lo..=hi)
            .map(|e| {
                let k = e - self.shift;
                if k < 0 {
                    F::zero(ctx)
                } else {
                    series[k as usize].clone()
                }
            })
            .collect()
    }

    /// The coefficient of t^valuation, i.e. num(0)/den(0); zero for zero.
    pub fn leading_coefficient(&self) -> F {
        // canonical form keeps den(0) = 1
        self.num.constant_term()
    }

    /// Value at t = 0 for integral scalars: the coefficient of t^0.
    pub fn residue_at_zero(&self) -> Result<F> {
        if !self.is_integral() {
            return Err(Error::InvalidInput(
                "residue of a scalar with negative valuation".into(),
            ));
        }
        if self.is_zero() || self.shift > 0 {
            return Ok(F::zero(self.ctx()));
        }
        // den(0) = 1 in canonical form
        Ok(self.num.constant_term())
    }

    pub fn parts(&self) -> (i64, &Poly<F>, &Poly<F>) {
        (self.shift, &self.num, &self.den)
    }

    pub fn parse(ctx: F::Ctx, text: &str) -> Result<Self> {
        parse::parse_scalar(ctx, text)
    }
}

impl<F: Field> Display for LaurentScalar<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den.is_one() {
            write!(f, "{}", fmt_laurent_poly(&self.num, self.shift))
        } else {
            write!(
                f,
                "({})/({})",
                fmt_laurent_poly(&self.num, self.shift),
                fmt_laurent_poly(&self.den, 0)
            )
        }
    }
}

/// Render t^shift * p in descending powers of t.
fn fmt_laurent_poly<F: Field>(p: &Poly<F>, shift: i64) -> String {
    let mut out = String::new();
    let deg = p.degree().expect("nonzero polynomial") as i64;
    let mut first = true;
    for k in (0..=deg).rev() {
        let c = p.coeff(k as usize);
        if c.is_zero() {
            continue;
        }
        let e = k + shift;
        let (neg, mag) = c.sign_split();
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let coeff_str = mag.to_string();
        match e {
            0 => out.push_str(&coeff_str),
            _ => {
                if !mag.is_one() {
                    out.push_str(&coeff_str);
                    out.push('*');
                }
                if e == 1 {
                    out.push('t');
                } else {
                    out.push_str(&format!("t^{e}"));
                }
            }
        }
    }
    out
}

mod parse {
    use super::*;

    /// Grammar:
    ///   scalar := "(" sum ")" "/" "(" sum ")" | sum
    ///   sum    := ["+"|"-"] term (("+"|"-") term)*
    ///   term   := RAT ("*" tpart)? | tpart
    ///   tpart  := "t" ("^" INT)?
    ///   RAT    := INT ("/" INT)?
    /// Whitespace is insignificant.
    struct Cursor<'a> {
        text: &'a [u8],
        pos: usize,
    }

    impl<'a> Cursor<'a> {
        fn skip_ws(&mut self) {
            while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.text.get(self.pos).copied()
        }

        fn bump(&mut self) -> Option<u8> {
            let c = self.peek()?;
            self.pos += 1;
            Some(c)
        }

        fn eat(&mut self, c: u8) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expect(&mut self, c: u8) -> Result<()> {
            if self.eat(c) {
                Ok(())
            } else {
                Err(self.error(&format!("expected {:?}", c as char)))
            }
        }

        fn error(&self, message: &str) -> Error {
            Error::Parse {
                position: self.pos,
                message: message.to_string(),
            }
        }

        fn integer(&mut self) -> Result<i64> {
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
                self.pos += 1;
            }
            let digits_start = self.pos;
            while self
                .text
                .get(self.pos)
                .map_or(false, |c| c.is_ascii_digit())
            {
                self.pos += 1;
            }
            if self.pos == digits_start {
                return Err(self.error("expected an integer"));
            }
            std::str::from_utf8(&self.text[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.error("integer out of range"))
        }
    }

    pub fn parse_scalar<F: Field>(ctx: F::Ctx, text: &str) -> Result<LaurentScalar<F>> {
        let mut cur = Cursor {
            text: text.as_bytes(),
            pos: 0,
        };
        let value = if looks_like_fraction_form(text) {
            cur.expect(b'(')?;
            let num = sum(ctx, &mut cur)?;
            cur.expect(b')')?;
            cur.expect(b'/')?;
            cur.expect(b'(')?;
            let den = sum(ctx, &mut cur)?;
            cur.expect(b')')?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            num.div(&den)?
        } else {
            sum(ctx, &mut cur)?
        };
        cur.skip_ws();
        if cur.pos != cur.text.len() {
            return Err(cur.error("trailing input"));
        }
        Ok(value)
    }

    /// The fraction form "( ... )/( ... )" is recognized by a top-level
    /// ")/(" delimiter on a string that starts with '('.
    fn looks_like_fraction_form(text: &str) -> bool {
        let trimmed = text.trim_start();
        trimmed.starts_with('(')
            && text
                .replace(char::is_whitespace, "")
                .contains(")/(")
    }

    fn sum<F: Field>(ctx: F::Ctx, cur: &mut Cursor) -> Result<LaurentScalar<F>> {
        let mut acc = LaurentScalar::zero(ctx);
        let mut negate = false;
        if cur.eat(b'-') {
            negate = true;
        } else {
            cur.eat(b'+');
        }
        loop {
            let t = term(ctx, cur)?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match cur.peek() {
                Some(b'+') => {
                    cur.bump();
                    negate = false;
                }
                Some(b'-') => {
                    cur.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term<F: Field>(ctx: F::Ctx, cur: &mut Cursor) -> Result<LaurentScalar<F>> {
        match cur.peek() {
            Some(b't') => {
                let e = tpart(cur)?;
                Ok(LaurentScalar::t_power(ctx, e))
            }
            Some(c) if c.is_ascii_digit() => {
                let coeff = rational(ctx, cur)?;
                if cur.eat(b'*') {
                    let e = tpart(cur)?;
                    Ok(LaurentScalar::monomial(coeff, e))
                } else {
                    Ok(LaurentScalar::from_coefficient(coeff))
                }
            }
            _ => Err(cur.error("expected a term")),
        }
    }

    fn tpart(cur: &mut Cursor) -> Result<i64> {
        cur.expect(b't')?;
        if cur.eat(b'^') {
            let e = cur.integer()?;
            // reject "t^^2" and friends before they become valid integers
            if cur.peek() == Some(b'^') {
                return Err(cur.error("repeated exponent"));
            }
            Ok(e)
        } else {
            Ok(1)
        }
    }

    fn rational<F: Field>(ctx: F::Ctx, cur: &mut Cursor) -> Result<F> {
        let n = cur.integer()?;
        // a "/" introduces a coefficient denominator only when followed by a
        // digit; "1/(1-t)" is not in the grammar (parenthesized form covers it)
        let save = cur.pos;
        if cur.eat(b'/') {
            if cur.peek().map_or(false, |c| c.is_ascii_digit()) {
                let d = cur.integer()?;
                let num = F::from_i64(ctx, n);
                let den = F::from_i64(ctx, d);
                let inv = den.inv().ok_or(Error::DivisionByZero)?;
                return Ok(num.mul(&inv));
            }
            cur.pos = save;
        }
        Ok(F::from_i64(ctx, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Prime, Rat};

    fn s(text: &str) -> LaurentScalar<Rat> {
        LaurentScalar::parse((), text).unwrap()
    }

    #[test]
    fn parse_examples() {
        let x = s("t^-1 + 1");
        let (shift, num, den) = x.parts();
        assert_eq!(shift, -1);
        assert_eq!(num.coeffs().len(), 2); // 1 + t
        assert!(den.is_one());

        let z = s("0");
        assert!(z.is_zero());
        assert_eq!(z.valuation(), Valuation::Infinite);

        let g = s("(1)/(1-t)");
        let (shift, num, den) = g.parts();
        assert_eq!(shift, 0);
        assert!(num.is_one());
        assert_eq!(den.coeffs().len(), 2);
    }

    #[test]
    fn parse_errors_report_position() {
        match LaurentScalar::<Rat>::parse((), "t^^2") {
            Err(Error::Parse { position, .. }) => assert!(position >= 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            LaurentScalar::<Rat>::parse((), "(1)/(0)"),
            Err(Error::DivisionByZero)
        ));
        // denominator divisible by t is fine: (t)/(t^2) = t^-1
        let x = s("(t)/(t^2)");
        assert_eq!(x.valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(
            s("(t^2)/(1+t)").valuation(),
            Valuation::Finite(2)
        );
        assert_eq!(s("t^-1+1").valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn arithmetic_examples() {
        let t = s("t");
        let tinv = s("t^-1");
        assert!(t.mul(&tinv).is_one());
        assert!(tinv.add(&tinv.neg()).is_zero());
        let one = s("1");
        let omt = s("1 - t");
        assert_eq!(one.div(&omt).unwrap(), s("(1)/(1-t)"));
        assert!(matches!(one.div(&s("0")), Err(Error::DivisionByZero)));
    }

    #[test]
    fn expansion_examples() {
        let g = s("(1)/(1-t)");
        let coeffs = g.expand(0, 3);
        assert!(coeffs.iter().all(|c| c.is_one()));

        let x = s("t^-1 + 1");
        let coeffs = x.expand(-1, 1);
        assert_eq!(
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            ["1", "1", "0"]
        );
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "t^-1 + 1",
            "0",
            "(1)/(1-t)",
            "3/2*t^5 - t + 7",
            "(t^-2 + 1)/(1 + 2*t + t^3)",
            "-t",
            "5",
        ] {
            let x = s(text);
            let y = s(&x.to_string());
            assert_eq!(x, y, "round trip failed for {text}");
        }
    }

    #[test]
    fn prime_field_scalars() {
        let p = Prime::new(5).unwrap();
        let x = LaurentScalar::<Fp>::parse(p, "3*t^2 + 4").unwrap();
        let y = LaurentScalar::<Fp>::parse(p, "2*t^2 + 1").unwrap();
        let sum = x.add(&y);
        assert!(sum.is_zero()); // 5t^2 + 5 = 0 mod 5
        let z = LaurentScalar::<Fp>::parse(p, "1/2*t").unwrap();
        assert_eq!(z.to_string(), "3*t");
    }
}
