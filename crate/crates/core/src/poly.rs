//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fp_poly::FpPoly;
use crate::linalg;
use crate::padic::{
    format_rational, int_valuation, is_p_integral, parse_rational, rat, residue, Prime, Rational,
    Valuation,
};

/// Coefficient `i` multiplies `X^i`. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `c * X^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `X^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(X))` by Horner's rule.
    pub fn compose(&self, inner: &RationalPoly) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }

    pub fn div_rem(&self, divisor: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if sd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &RationalPoly) -> Result<RationalPoly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Returns `(g, s)` with `g = gcd(self, modulus)` monic and `s * self ≡ g (mod modulus)`.
    pub fn gcd_inverse_part(&self, modulus: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus)?);
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let lc = r0.leading().ok_or(Error::ZeroPolynomial)?.recip();
        Ok((r0.scale(&lc), s0.scale(&lc)))
    }

    /// Resultant. Denominators are cleared and the integer resultant is
    /// computed multimodularly.
    pub fn resultant(&self, other: &RationalPoly) -> Result<Rational> {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Err(Error::ZeroPolynomial);
        };
        let (a, ca) = self.primitive_integer_form();
        let (b, cb) = other.primitive_integer_form();
        // res(A, B) = res(ca A', cb B') = ca^db cb^da res(A', B')
        let scale =
            crate::padic::rational_pow(&ca, db as u32) * crate::padic::rational_pow(&cb, da as u32);
        Ok(Rational::from_integer(crate::modular::integer_resultant(&a, &b)) * scale)
    }

    /// `(A', c)` with `self = c * A'` and `A'` integral.
    pub fn primitive_integer_form(&self) -> (Vec<BigInt>, Rational) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| &den / c.denom() * c.numer())
            .collect();
        (ints, Rational::new(BigInt::one(), den))
    }

    /// `v_p(res(self, other))`, without forming the rational resultant.
    pub fn resultant_valuation(&self, other: &RationalPoly, p: Prime) -> Result<Valuation> {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Err(Error::ZeroPolynomial);
        };
        let (a, ca) = self.primitive_integer_form();
        let (b, cb) = other.primitive_integer_form();
        let r = crate::modular::integer_resultant(&a, &b);
        if r.is_zero() {
            return Ok(Valuation::Infinity);
        }
        let v = int_valuation(&r, p) as i64
            - db as i64 * int_valuation(ca.denom(), p) as i64
            - da as i64 * int_valuation(cb.denom(), p) as i64;
        Ok(Valuation::int(v))
    }

    /// Resultant by the Euclidean remainder sequence over Q.
    pub fn resultant_euclid(&self, other: &RationalPoly) -> Result<Rational> {
        let (Some(_), Some(_)) = (self.degree(), other.degree()) else {
            return Err(Error::ZeroPolynomial);
        };
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = Rational::one();
        loop {
            let da = a.degree().expect("nonzero");
            let db = b.degree().expect("nonzero");
            if db == 0 {
                return Ok(acc * crate::padic::rational_pow(&b.coeffs[0], da as u32));
            }
            if da == 0 {
                return Ok(acc * crate::padic::rational_pow(&a.coeffs[0], db as u32));
            }
            let r = a.rem(&b)?;
            let Some(dr) = r.degree() else {
                return Ok(Rational::zero());
            };
            // res(a, b) = (-1)^(da*db) lc(b)^(da - dr) res(b, r)
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= crate::padic::rational_pow(b.leading().expect("nonzero"), (da - dr) as u32);
            a = b;
            b = r;
        }
    }

    /// The `(da + db) x (da + db)` Sylvester matrix.
    pub fn sylvester_matrix(&self, other: &RationalPoly) -> Result<Vec<Vec<Rational>>> {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Err(Error::ZeroPolynomial);
        };
        let size = da + db;
        let mut m = vec![vec![Rational::zero(); size]; size];
        for row in 0..db {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                m[row][row + k] = c.clone();
            }
        }
        for row in 0..da {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                m[db + row][row + k] = c.clone();
            }
        }
        Ok(m)
    }

    /// Resultant as the Sylvester determinant, by fraction-free elimination.
    pub fn sylvester_resultant(&self, other: &RationalPoly) -> Result<Rational> {
        let m = self.sylvester_matrix(other)?;
        if m.is_empty() {
            return Ok(Rational::one());
        }
        Ok(linalg::determinant(&m))
    }

    pub fn reduce_mod_p(&self, p: Prime) -> Result<FpPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| residue(c, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpPoly::new(p, coeffs))
    }

    pub fn is_p_integral(&self, p: Prime) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Comma-separated coefficients, constant term first.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

/// Monic, every lower coefficient divisible by `p`, constant term not divisible by `p^2`.
pub fn eisenstein_check(g: &RationalPoly, p: Prime) -> Result<bool> {
    let deg = g.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if let Some(c) = g.coeffs().iter().find(|c| !c.is_integer()) {
        return Err(Error::NonIntegerCoefficient(format_rational(c)));
    }
    if !g.is_monic() {
        return Ok(false);
    }
    let pb = p.to_bigint();
    let divisible = |c: &Rational| (c.numer() % &pb).is_zero();
    if !g.coeffs()[..deg].iter().all(divisible) {
        return Ok(false);
    }
    Ok(!(g.coeffs()[0].numer() % (&pb * &pb)).is_zero())
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Integer coefficients of a polynomial known to lie in Z[X].
pub fn integer_coeffs(p: &RationalPoly) -> Option<Vec<BigInt>> {
    p.coeffs()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}
