//! Deterministic hashing of `(message, r)` onto units of `K` outside a lattice.
//!
//! seed   = SHA3-256(0x01 || message || r)
//! stream = SHAKE256(0x02 || seed)
//!
//! A candidate is `Σ c_i β_i + p^s Σ d_k ζ^k` with `m + n` coefficients
//! `c_0 .. c_(m-1), d_0 .. d_(n-1)` in that order, each built from `N` base-p
//! digits, least significant first. `s` is the least integer with
//! `s + k v(ζ) > 0` for all `k < n`, so the tail lies in the maximal ideal and
//! the residue of a candidate is that of its lattice part, which is uniform
//! over the residue field. A candidate is accepted when it is a unit outside
//! the lattice.
//!
//! A digit comes from one byte when `p < 256` and from eight little-endian
//! bytes otherwise, rejecting values at or above the largest multiple of `p`
//! that fits.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Digest, Sha3_256, Shake256};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::lattice::PadicLattice;
use crate::padic::{Prime, Rational, Valuation};

pub const XOF_ID: &str = "shake256";
pub const DEFAULT_DIGITS: usize = 32;
pub const CANDIDATE_BUDGET: usize = 256;

const SEED_DOMAIN: u8 = 0x01;
const STREAM_DOMAIN: u8 = 0x02;

pub fn message_seed(message: &[u8], r: &[u8]) -> [u8; 32] {
    let mut h = Sha3_256::new();
    Digest::update(&mut h, [SEED_DOMAIN]);
    Digest::update(&mut h, message);
    Digest::update(&mut h, r);
    h.finalize().into()
}

/// Uniform base-p digits read from an XOF stream.
pub struct DigitStream {
    reader: <Shake256 as ExtendableOutput>::Reader,
    p: u64,
}

impl DigitStream {
    pub fn new(seed: &[u8; 32], p: Prime) -> Self {
        let mut xof = Shake256::default();
        xof.update(&[STREAM_DOMAIN]);
        xof.update(seed);
        DigitStream {
            reader: xof.finalize_xof(),
            p: p.get(),
        }
    }

    pub fn next_digit(&mut self) -> u64 {
        if self.p < 256 {
            let limit = 256 - 256 % self.p;
            loop {
                let mut b = [0u8; 1];
                self.reader.read(&mut b);
                if (b[0] as u64) < limit {
                    return b[0] as u64 % self.p;
                }
            }
        }
        let limit = (1u128 << 64) / self.p as u128 * self.p as u128;
        loop {
            let mut b = [0u8; 8];
            self.reader.read(&mut b);
            let x = u64::from_le_bytes(b);
            if (x as u128) < limit {
                return x % self.p;
            }
        }
    }

    /// An integer in `[0, p^digits)`.
    pub fn next_coefficient(&mut self, digits: usize) -> BigInt {
        let ds: Vec<u64> = (0..digits).map(|_| self.next_digit()).collect();
        ds.iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * self.p + d)
    }
}

/// Least `s >= 1` with `s + k v(ζ) > 0` for every `k < n`.
pub fn tail_shift(zeta_valuation: &Valuation, n: usize) -> u32 {
    match zeta_valuation.finite() {
        Some(v) if v.is_negative() => {
            let bound = -v * Rational::from_integer(BigInt::from(n as u64 - 1));
            (bound.floor().to_integer() + 1u32)
                .try_into()
                .expect("shift fits in u32")
        }
        _ => 1,
    }
}

/// `H(message || r)`: a unit of `K` outside `lattice`, recomputable from public data.
pub fn hash_to_w(
    message: &[u8],
    r: &[u8],
    lattice: &PadicLattice,
    digits: usize,
) -> Result<FieldElement> {
    let field = lattice.field();
    let n = field.degree();
    let zeta = FieldElement::generator(field);
    let shift = Rational::from_integer(num_traits::pow(
        field.p().to_bigint(),
        tail_shift(&zeta.valuation(), n) as usize,
    ));
    let mut stream = DigitStream::new(&message_seed(message, r), field.p());
    for _ in 0..CANDIDATE_BUDGET {
        let mut t = FieldElement::zero(field);
        for beta in lattice.generators() {
            t = &t + &beta.scale(&Rational::from_integer(stream.next_coefficient(digits)));
        }
        let tail: Vec<Rational> = (0..n)
            .map(|_| Rational::from_integer(stream.next_coefficient(digits)) * &shift)
            .collect();
        let t = &t + &FieldElement::new(field, tail)?;
        if t.valuation() == Valuation::int(0) && !lattice.contains(&t) {
            return Ok(t);
        }
    }
    Err(Error::HashBudgetExhausted(CANDIDATE_BUDGET))
}
