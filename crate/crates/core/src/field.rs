//! Arithmetic in `K = Q_p[X]/(F)` with elements on the power basis `1, ζ, ..., ζ^(n-1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modular::integer_resultant;
use crate::padic::{format_rational, int_valuation, rat, Prime, Rational, Valuation};
use crate::poly::RationalPoly;

/// Ramification index `e` and residue degree `f`, known for built fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ramification {
    pub e: usize,
    pub f: usize,
}

/// The field `K = Q_p(ζ)` given by the monic minimal polynomial `F` of `ζ`.
///
/// `F` must be irreducible over `Q_p`; element valuations are computed from
/// norms and are only meaningful when it is.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    p: Prime,
    modulus: RationalPoly,
    ramification: Option<Ramification>,
    /// `F = F_int / d` with `F_int` integral; `v_p(d)` kept alongside.
    modulus_int: Vec<BigInt>,
    modulus_den_valuation: i64,
}

impl FieldDescriptor {
    pub fn new(
        p: Prime,
        modulus: RationalPoly,
        ramification: Option<Ramification>,
    ) -> Result<Self> {
        let n = modulus.degree().ok_or(Error::ZeroPolynomial)?;
        if n == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !modulus.is_monic() {
            return Err(Error::Construction(format!(
                "defining polynomial {modulus} is not monic"
            )));
        }
        if let Some(r) = ramification {
            if r.e * r.f != n {
                return Err(Error::Construction(format!(
                    "e*f = {}*{} != n = {n}",
                    r.e, r.f
                )));
            }
        }
        let (modulus_int, c) = modulus.primitive_integer_form();
        let modulus_den_valuation = int_valuation(c.denom(), p) as i64;
        Ok(FieldDescriptor {
            p,
            modulus,
            ramification,
            modulus_int,
            modulus_den_valuation,
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn modulus(&self) -> &RationalPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    pub fn ramification(&self) -> Option<Ramification> {
        self.ramification
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    /// `(R, s)` with `c mod F = R / s`, by integer elimination against
    /// `F_int = d F`: each step scales by `d` and cancels the top term.
    fn reduce_integer(&self, mut c: Vec<BigInt>) -> (Vec<BigInt>, BigInt) {
        let n = self.degree();
        let f = &self.modulus_int;
        let d = &f[n];
        let mut scale = BigInt::one();
        while c.len() > n {
            let top = c.pop().expect("len > n");
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - n;
            if !d.is_one() {
                for x in c.iter_mut() {
                    *x *= d;
                }
                scale *= d;
            }
            for (x, fi) in c[shift..].iter_mut().zip(f) {
                *x -= &top * fi;
            }
        }
        c.resize(n, BigInt::zero());
        (c, scale)
    }

    /// `v_p(N(g))` for the element with integer coordinates `g`; `None` for zero.
    pub fn norm_valuation_of_integer_coords(&self, g: &[BigInt]) -> Option<i64> {
        let len = g.iter().rposition(|c| !c.is_zero())? + 1;
        let r = integer_resultant(&self.modulus_int, &g[..len]);
        if r.is_zero() {
            return None;
        }
        // res(F_int / d, G) = d^(-deg G) res(F_int, G)
        Some(int_valuation(&r, self.p) as i64 - (len as i64 - 1) * self.modulus_den_valuation)
    }
}

/// Element of `K` as `n` rational coordinates over the power basis of `ζ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Arc<FieldDescriptor>,
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn new(field: &Arc<FieldDescriptor>, coords: Vec<Rational>) -> Result<Self> {
        let n = field.degree();
        if coords.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                got: coords.len(),
            });
        }
        Ok(FieldElement {
            field: Arc::clone(field),
            coords,
        })
    }

    /// Reduces an arbitrary polynomial in `ζ` modulo `F`.
    pub fn from_poly(field: &Arc<FieldDescriptor>, poly: &RationalPoly) -> Self {
        let r = poly.rem(field.modulus()).expect("modulus is nonzero");
        let mut coords = r.into_coeffs();
        coords.resize(field.degree(), Rational::zero());
        FieldElement {
            field: Arc::clone(field),
            coords,
        }
    }

    pub fn zero(field: &Arc<FieldDescriptor>) -> Self {
        FieldElement {
            field: Arc::clone(field),
            coords: vec![Rational::zero(); field.degree()],
        }
    }

    pub fn scalar(field: &Arc<FieldDescriptor>, c: Rational) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = c;
        e
    }

    pub fn one(field: &Arc<FieldDescriptor>) -> Self {
        Self::scalar(field, Rational::one())
    }

    /// The generator `ζ` (or `1` when `n = 1`, where `ζ` reduces to a scalar).
    pub fn generator(field: &Arc<FieldDescriptor>) -> Self {
        Self::from_poly(field, &RationalPoly::x())
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn to_poly(&self) -> RationalPoly {
        RationalPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn same_field(&self, other: &FieldElement) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    fn check_field(&self, other: &FieldElement) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let (a, ca) = self.to_poly().primitive_integer_form();
        let (b, cb) = other.to_poly().primitive_integer_form();
        if a.is_empty() || b.is_empty() {
            return Ok(Self::zero(&self.field));
        }
        let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (y, z) in b.iter().zip(&mut c[i..]) {
                *z += x * y;
            }
        }
        let (r, s) = self.field.reduce_integer(c);
        let den = s * ca.denom() * cb.denom();
        let coords = r
            .into_iter()
            .map(|x| Rational::new(x, den.clone()))
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn scale(&self, c: &Rational) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> FieldElement {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm against `F`.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let (g, s) = self.to_poly().gcd_inverse_part(self.field.modulus())?;
        if g.degree() != Some(0) {
            return Err(Error::Construction(format!(
                "element shares factor {g} with the defining polynomial"
            )));
        }
        Ok(Self::from_poly(&self.field, &s))
    }

    /// Evaluates a rational polynomial at this element.
    pub fn eval_poly(&self, poly: &RationalPoly) -> FieldElement {
        poly.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(&self.field), |acc, c| {
                let mut next = &acc * self;
                next.coords[0] += c;
                next
            })
    }

    /// `N_{K/Q_p}(a) = Res(F, g)` where `g` is the coordinate polynomial of `a`.
    pub fn norm(&self) -> Rational {
        let g = self.to_poly();
        if g.is_zero() {
            return Rational::zero();
        }
        self.field
            .modulus()
            .resultant(&g)
            .expect("both operands nonzero")
    }

    /// `v_p(N(a)) / n`; infinity for zero.
    pub fn valuation(&self) -> Valuation {
        let (g, c) = self.to_poly().primitive_integer_form();
        // N(G / D) = N(G) / D^n
        let shift = self.field.degree() as i64 * int_valuation(c.denom(), self.field.p()) as i64;
        match self.field.norm_valuation_of_integer_coords(&g) {
            None => Valuation::Infinity,
            Some(v) => Valuation::frac(v - shift, self.field.degree() as i64),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(rat(0))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.scale(&rat(-1))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ratio;
    use proptest::prelude::*;

    fn field(p: u64, f: &[i64]) -> Arc<FieldDescriptor> {
        FieldDescriptor::new(Prime::new(p).unwrap(), RationalPoly::from_ints(f), None)
            .unwrap()
            .into_arc()
    }

    /// F from the roots-of-unity example with p = 2, q = 5, e = 3.
    fn golden_field() -> Arc<FieldDescriptor> {
        field(2, &[11, 51, 60, -14, 123, 156, 55, 0, -3, 2, 6, 3, 1])
    }

    fn elem(k: &Arc<FieldDescriptor>, c: &[i64]) -> FieldElement {
        let mut coords: Vec<Rational> = c.iter().map(|&x| rat(x)).collect();
        coords.resize(k.degree(), rat(0));
        FieldElement::new(k, coords).unwrap()
    }

    #[test]
    fn descriptor_checks() {
        let p = Prime::new(2).unwrap();
        assert!(FieldDescriptor::new(p, RationalPoly::from_ints(&[1, 2]), None).is_err());
        assert!(FieldDescriptor::new(p, RationalPoly::from_ints(&[1]), None).is_err());
        let bad = Some(Ramification { e: 2, f: 2 });
        assert!(FieldDescriptor::new(p, RationalPoly::from_ints(&[1, 0, 1]), bad).is_err());
    }

    #[test]
    fn add_mul_examples() {
        let k = golden_field();
        let a = elem(&k, &[1, 2, 3]);
        assert_eq!(&a + &FieldElement::zero(&k), a);
        assert_eq!(&FieldElement::one(&k) * &a, a);
        let zeta = FieldElement::generator(&k);
        let top = zeta.pow(11);
        // ζ^12 = -(F - X^12)(ζ)
        let expected: Vec<Rational> = k.modulus().coeffs()[..12].iter().map(|c| -c).collect();
        assert_eq!((&zeta * &top).coords(), &expected[..]);
        let other = field(3, &[1, 0, 1]);
        assert_eq!(
            a.try_add(&FieldElement::one(&other)),
            Err(Error::DescriptorMismatch)
        );
        assert!(FieldElement::new(&k, vec![rat(1)]).is_err());
    }

    #[test]
    fn inverse_examples() {
        let k = golden_field();
        assert_eq!(
            FieldElement::one(&k).inverse().unwrap(),
            FieldElement::one(&k)
        );
        let zeta = FieldElement::generator(&k);
        assert_eq!(&zeta * &zeta.inverse().unwrap(), FieldElement::one(&k));
        let c = FieldElement::scalar(&k, ratio(3, 7));
        assert_eq!(c.inverse().unwrap(), FieldElement::scalar(&k, ratio(7, 3)));
        assert_eq!(FieldElement::zero(&k).inverse(), Err(Error::ZeroInverse));
    }

    #[test]
    fn norm_examples() {
        let k = golden_field();
        assert_eq!(
            FieldElement::scalar(&k, rat(3)).norm(),
            crate::padic::rational_pow(&rat(3), 12)
        );
        assert_eq!(FieldElement::generator(&k).norm(), rat(11));
        assert_eq!(FieldElement::zero(&k).norm(), rat(0));
    }

    #[test]
    fn valuation_examples() {
        let k = golden_field();
        assert_eq!(
            FieldElement::scalar(&k, rat(12)).valuation(),
            Valuation::int(2)
        );
        assert_eq!(FieldElement::zero(&k).valuation(), Valuation::Infinity);
        assert!(FieldElement::generator(&k).is_unit());
    }

    fn small_elem(n: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-6i64..=6, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn valuation_multiplicative_in_unramified_field(a in small_elem(4), b in small_elem(4)) {
            // Φ_5 is irreducible mod 2, so this is the unramified quartic extension of Q_2.
            let k = field(2, &[1, 1, 1, 1, 1]);
            let (x, y) = (elem(&k, &a), elem(&k, &b));
            prop_assume!(!x.is_zero() && !y.is_zero());
            prop_assert_eq!((&x * &y).valuation(), x.valuation().add(&y.valuation()));
            let vs = (&x + &y).valuation();
            let (vx, vy) = (x.valuation(), y.valuation());
            prop_assert!(vs >= vx.clone().min(vy.clone()));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn inverse_is_inverse(a in small_elem(3)) {
            let k = field(3, &[-3, 0, 0, 1]);
            let x = elem(&k, &a);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inverse().unwrap(), FieldElement::one(&k));
        }
    }
}
