//! Dense polynomials over a prime field F_p.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: Prime,
    coeffs: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FpPoly {
    /// Coefficients are reduced mod `p`; trailing zeros dropped.
    pub fn new(p: Prime, coeffs: Vec<u64>) -> Self {
        let pv = p.get();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % pv).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: Prime) -> Self {
        FpPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: Prime) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p.get());
                Self::new(
                    self.p,
                    self.coeffs
                        .iter()
                        .map(|&c| mul_mod(c, inv, self.p.get()))
                        .collect(),
                )
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let pv = self.p.get();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + get(&rhs.coeffs, i)) % pv)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let pv = self.p.get();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + pv - get(&rhs.coeffs, i)) % pv)
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let pv = self.p.get();
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, pv)) % pv;
            }
        }
        Self::new(self.p, out)
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let pv = self.p.get();
        let Some(sd) = self.degree() else {
            return Ok((Self::zero(self.p), Self::zero(self.p)));
        };
        if sd < dd {
            return Ok((Self::zero(self.p), self.clone()));
        }
        let inv = inv_mod(divisor.coeffs[dd], pv);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = mul_mod(rem[k + dd], inv, pv);
            if c == 0 {
                continue;
            }
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = (rem[k + i] + pv - mul_mod(c, d, pv)) % pv;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(self.p, quot), Self::new(self.p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Result<Self> {
        let mut acc = Self::one(self.p).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `X^(p^k) mod self`, by `k` successive p-th powers.
    fn frobenius_power_of_x(&self, k: usize) -> Result<Self> {
        let mut h = Self::x(self.p).rem(self)?;
        for _ in 0..k {
            h = h.pow_mod(self.p.get() as u128, self)?;
        }
        Ok(h)
    }

    /// Deterministic Rabin test: `f` of degree `d` is irreducible iff
    /// `X^(p^d) ≡ X (mod f)` and `gcd(X^(p^(d/r)) - X, f) = 1` for each prime `r | d`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if d == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let x = Self::x(self.p);
        if f.frobenius_power_of_x(d)?.sub(&x).rem(&f)? != Self::zero(self.p) {
            return Ok(false);
        }
        for r in prime_divisors(d) {
            let h = f.frobenius_power_of_x(d / r)?.sub(&x);
            if f.gcd(&h).degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Factorization into monic irreducibles with multiplicity, by trial division
    /// over monic candidates in increasing degree. `None` when that search would
    /// exceed `budget` candidates.
    pub fn factor_by_trial_division(&self, budget: u64) -> Option<Vec<(FpPoly, usize)>> {
        let mut rest = self.monic();
        let mut factors: Vec<(FpPoly, usize)> = Vec::new();
        let pv = self.p.get();
        let mut deg = 1usize;
        let mut spent = 0u64;
        while rest.degree().is_some_and(|d| d >= 2 * deg) {
            let count = pv.checked_pow(deg as u32)?;
            spent = spent.checked_add(count)?;
            if spent > budget {
                return None;
            }
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(deg + 1);
                let mut t = idx;
                for _ in 0..deg {
                    coeffs.push(t % pv);
                    t /= pv;
                }
                coeffs.push(1);
                let cand = FpPoly::new(self.p, coeffs);
                let mut mult = 0;
                loop {
                    let (q, r) = rest.div_rem(&cand).ok()?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    factors.push((cand, mult));
                }
            }
            deg += 1;
        }
        if rest.degree().is_some_and(|d| d >= 1) {
            factors.push((rest, 1));
        }
        Some(factors)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "X".to_string(),
                (1, c) => format!("{c}X"),
                (i, 1) => format!("X^{i}"),
                (i, c) => format!("{c}X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
