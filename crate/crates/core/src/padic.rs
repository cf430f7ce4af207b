//! Exact rationals and the p-adic valuation on Q.
//!
//! Absolute values are never evaluated to reals. `|x|_p = p^(-v)` is carried
//! as the exponent `v`, and comparisons are exponent comparisons.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            s.parse()
                .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?,
        ),
    };
    Ok(parsed)
}

/// Formats as `"num/den"`, omitting the denominator when it is 1.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime number, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Valuation exponent: an exact rational, or infinity for zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(rat(v))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Valuation::Finite(ratio(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Symbolic absolute value `p^(-v)`.
    pub fn abs_value(&self, p: Prime) -> AbsValue {
        AbsValue {
            p,
            valuation: self.clone(),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by exponent, so infinity is the largest valuation.
impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// `p^(-valuation)`, kept symbolic. The absolute value of zero is `p^(-inf) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsValue {
    pub p: Prime,
    pub valuation: Valuation,
}

impl AbsValue {
    pub fn is_one(&self) -> bool {
        self.valuation == Valuation::int(0)
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.valuation {
            Valuation::Infinity => write!(f, "0"),
            Valuation::Finite(v) if v.is_zero() => write!(f, "1"),
            Valuation::Finite(v) => write!(f, "{}^({})", self.p, -v),
        }
    }
}

/// Largest `k` with `p^k | n`; `n` must be nonzero.
pub fn int_valuation(n: &BigInt, p: Prime) -> u64 {
    debug_assert!(!n.is_zero());
    let p = p.to_bigint();
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

pub fn valuation(x: &Rational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let num = int_valuation(x.numer(), p) as i64;
    let den = int_valuation(x.denom(), p) as i64;
    Valuation::int(num - den)
}

/// Integer valuation of a nonzero rational.
pub fn valuation_i64(x: &Rational, p: Prime) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
    }
}

pub fn abs_value(x: &Rational, p: Prime) -> AbsValue {
    valuation(x, p).abs_value(p)
}

pub fn is_p_integral(x: &Rational, p: Prime) -> bool {
    x.is_zero() || !(x.denom() % p.to_bigint()).is_zero()
}

pub fn is_p_unit(x: &Rational, p: Prime) -> bool {
    valuation(x, p) == Valuation::int(0)
}

/// Orders by absolute value: `Greater` means `a` is the larger absolute value,
/// i.e. the smaller valuation.
pub fn compare_abs(a: &Valuation, b: &Valuation) -> Ordering {
    b.cmp(a)
}

/// Reduces a p-integral rational into `[0, p)`.
pub fn residue(x: &Rational, p: Prime) -> Result<u64> {
    if !is_p_integral(x, p) {
        return Err(Error::NotPIntegral(format_rational(x), p.get()));
    }
    let pb = p.to_bigint();
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let den_inv = den.modpow(&(&pb - BigInt::from(2)), &pb);
    let r = (num * den_inv).mod_floor(&pb);
    Ok(r.try_into().expect("residue fits in u64"))
}

pub fn rational_pow(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&rat(12), p(2)), Valuation::int(2));
        assert_eq!(valuation(&ratio(3, 4), p(2)), Valuation::int(-2));
        assert_eq!(valuation(&rat(0), p(5)), Valuation::Infinity);
    }

    #[test]
    fn abs_value_examples() {
        assert_eq!(abs_value(&rat(12), p(2)).to_string(), "2^(-2)");
        assert!(abs_value(&rat(1), p(7)).is_one());
        assert_eq!(abs_value(&ratio(1, 2), p(2)).to_string(), "2^(1)");
        assert_eq!(abs_value(&rat(0), p(3)).to_string(), "0");
    }

    #[test]
    fn integrality_examples() {
        assert!(!is_p_integral(&ratio(3, 4), p(2)));
        assert!(is_p_integral(&ratio(3, 4), p(3)));
        assert!(is_p_integral(&rat(0), p(7)));
    }

    #[test]
    fn compare_abs_examples() {
        assert_eq!(
            compare_abs(&Valuation::frac(1, 3), &Valuation::frac(2, 3)),
            Ordering::Greater
        );
        assert_eq!(
            compare_abs(&Valuation::Infinity, &Valuation::int(5)),
            Ordering::Less
        );
        assert_eq!(
            compare_abs(&Valuation::int(0), &Valuation::int(0)),
            Ordering::Equal
        );
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(Prime::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert!(Prime::new(2).is_ok());
    }

    #[test]
    fn rational_text_format() {
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(5)), "5");
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), rat(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn residue_of_rational() {
        assert_eq!(residue(&ratio(1, 2), p(3)).unwrap(), 2);
        assert_eq!(residue(&rat(-1), p(5)).unwrap(), 4);
        assert!(residue(&ratio(1, 3), p(3)).is_err());
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-2000i64..2000, 1i64..2000)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative(x in nonzero_rational(), y in nonzero_rational(), pi in 0usize..4) {
            let pr = p([2, 3, 5, 7][pi]);
            prop_assert_eq!(valuation(&(&x * &y), pr), valuation(&x, pr).add(&valuation(&y, pr)));
        }

        #[test]
        fn valuation_is_ultrametric(x in nonzero_rational(), y in nonzero_rational(), pi in 0usize..4) {
            let pr = p([2, 3, 5, 7][pi]);
            let (vx, vy) = (valuation(&x, pr), valuation(&y, pr));
            let vs = valuation(&(&x + &y), pr);
            prop_assert!(vs >= vx.clone().min(vy.clone()));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn abs_value_matches_valuation(x in nonzero_rational()) {
            let pr = p(3);
            prop_assert_eq!(abs_value(&x, pr).valuation, valuation(&x, pr));
        }
    }
}
