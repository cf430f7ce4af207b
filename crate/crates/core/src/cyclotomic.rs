//! Cyclotomic polynomials, cyclotomic cosets and multiplicative orders.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::padic::{is_prime, Prime};
use crate::poly::RationalPoly;

/// `Φ_q(X) = X^(q-1) + ... + X + 1` for prime `q`.
pub fn cyclotomic_poly(q: u64) -> Result<RationalPoly> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(RationalPoly::from_ints(&vec![1; q as usize]))
}

/// Orbit of `s` under multiplication by `p` modulo `n`, in generation order.
pub fn cyclotomic_coset(s: u64, n: u64, p: Prime) -> Result<Vec<u64>> {
    if n.gcd(&p.get()) != 1 {
        return Err(Error::NotCoprime(n, p.get()));
    }
    let start = s % n;
    let mut coset = vec![start];
    let mut cur = (start as u128 * p.get() as u128 % n as u128) as u64;
    while cur != start {
        coset.push(cur);
        cur = (cur as u128 * p.get() as u128 % n as u128) as u64;
    }
    Ok(coset)
}

/// Sizes of all cyclotomic cosets mod `n` over F_p, which are the degrees of
/// the irreducible factors of `X^n - 1` over F_p. Sorted ascending.
pub fn factor_degree_pattern(n: u64, p: Prime) -> Result<Vec<usize>> {
    if n.gcd(&p.get()) != 1 {
        return Err(Error::NotCoprime(n, p.get()));
    }
    let mut seen = BTreeSet::new();
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen.contains(&s) {
            continue;
        }
        let coset = cyclotomic_coset(s, n, p)?;
        sizes.push(coset.len());
        seen.extend(coset);
    }
    sizes.sort_unstable();
    Ok(sizes)
}

/// Least `k >= 1` with `a^k ≡ 1 (mod q)`.
pub fn multiplicative_order(a: u64, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if a.is_multiple_of(q) {
        return Err(Error::NotCoprime(a, q));
    }
    let base = a % q;
    let mut cur = base;
    let mut k = 1;
    while cur != 1 {
        cur = (cur as u128 * base as u128 % q as u128) as u64;
        k += 1;
    }
    Ok(k)
}

/// `a^e mod m`.
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = a as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(
            cyclotomic_poly(5).unwrap(),
            RationalPoly::from_ints(&[1, 1, 1, 1, 1])
        );
        assert_eq!(
            cyclotomic_poly(3).unwrap(),
            RationalPoly::from_ints(&[1, 1, 1])
        );
        assert_eq!(
            cyclotomic_poly(2).unwrap(),
            RationalPoly::from_ints(&[1, 1])
        );
        assert_eq!(cyclotomic_poly(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn coset_examples() {
        assert_eq!(cyclotomic_coset(1, 5, p(2)).unwrap(), vec![1, 2, 4, 3]);
        assert_eq!(cyclotomic_coset(0, 9, p(2)).unwrap(), vec![0]);
        assert_eq!(cyclotomic_coset(1, 7, p(2)).unwrap(), vec![1, 2, 4]);
        assert_eq!(cyclotomic_coset(1, 6, p(2)), Err(Error::NotCoprime(6, 2)));
    }

    #[test]
    fn degree_pattern_examples() {
        assert_eq!(factor_degree_pattern(5, p(2)).unwrap(), vec![1, 4]);
        assert_eq!(factor_degree_pattern(7, p(2)).unwrap(), vec![1, 3, 3]);
        assert_eq!(factor_degree_pattern(3, p(2)).unwrap(), vec![1, 2]);
        assert!(factor_degree_pattern(10, p(5)).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 5).unwrap(), 4);
        assert_eq!(multiplicative_order(1, 13).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(10, 5), Err(Error::NotCoprime(10, 5)));
    }

    #[test]
    fn pattern_sums_and_divides_unit_coset() {
        for n in [3u64, 5, 7, 9, 11, 13, 15, 21] {
            for pr in [2u64, 3, 5, 7] {
                let pr = p(pr);
                if n.gcd(&pr.get()) != 1 {
                    continue;
                }
                let sizes = factor_degree_pattern(n, pr).unwrap();
                assert_eq!(sizes.iter().sum::<usize>() as u64, n);
                let unit = cyclotomic_coset(1, n, pr).unwrap().len();
                for s in 1..n {
                    if s.gcd(&n) == 1 {
                        assert_eq!(unit % cyclotomic_coset(s, n, pr).unwrap().len(), 0);
                    }
                }
            }
        }
    }
}
