//! Multimodular resultants of integer polynomials: resultants modulo many
//! word-sized primes, recombined by the Chinese remainder theorem under the
//! Hadamard bound.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

const PRIME_BITS: u64 = 62;

/// Montgomery arithmetic modulo an odd `m < 2^62`, with `R = 2^64`.
#[derive(Debug, Clone, Copy)]
struct Mont {
    m: u64,
    /// `-m^(-1) mod 2^64`
    neg_inv: u64,
    /// `R^2 mod m`
    r2: u64,
}

impl Mont {
    fn new(m: u64) -> Self {
        let mut inv = m;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((r as u128 * r as u128) % m as u128) as u64;
        Mont {
            m,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let k = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + k as u128 * self.m as u128) >> 64) as u64;
        if u >= self.m {
            u - self.m
        } else {
            u
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        self.sub(a, self.m - b)
    }

    /// `a^e` for `a` in Montgomery form; result in Montgomery form.
    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.m - 2)
    }
}

/// Primes below `2^62` in descending order with the data Garner's algorithm
/// needs for them.
struct PrimeTable {
    mont: Vec<Mont>,
    /// `cross[i][j] = m_j * R mod m_i` for `j < i`.
    cross: Vec<Vec<u64>>,
}

impl PrimeTable {
    fn extended(&self, count: usize) -> PrimeTable {
        let mut mont = self.mont.clone();
        let mut cross = self.cross.clone();
        let mut candidate = mont.last().map_or((1u64 << PRIME_BITS) - 1, |q| q.m - 2);
        while mont.len() < count {
            if is_prime_u64(candidate) {
                let ctx = Mont::new(candidate);
                let row: Vec<u64> = mont.iter().map(|q| ctx.to_mont(q.m % candidate)).collect();
                cross.push(row);
                mont.push(ctx);
            }
            candidate -= 2;
        }
        PrimeTable { mont, cross }
    }
}

fn prime_table(count: usize) -> Arc<PrimeTable> {
    static TABLE: OnceLock<Mutex<Arc<PrimeTable>>> = OnceLock::new();
    let lock = TABLE.get_or_init(|| {
        Mutex::new(Arc::new(PrimeTable {
            mont: Vec::new(),
            cross: Vec::new(),
        }))
    });
    let mut guard = lock.lock().expect("prime table");
    if guard.mont.len() < count {
        let next = guard.extended(count.max(2 * guard.mont.len()));
        *guard = Arc::new(next);
    }
    Arc::clone(&guard)
}

/// `x mod m` in `[0, m)`, folding the magnitude limb by limb.
fn reduce(x: &BigInt, m: u64) -> u64 {
    let r = x.magnitude().iter_u64_digits().rev().fold(0u64, |acc, d| {
        ((((acc as u128) << 64) | d as u128) % m as u128) as u64
    });
    if x.sign() == Sign::Minus && r != 0 {
        m - r
    } else {
        r
    }
}

/// Resultant of `a` and `b` over F_m in Montgomery form, or `None` when a
/// leading coefficient vanishes mod `m` (the degree would drop).
fn resultant_mod(a: &[BigInt], b: &[BigInt], ctx: &Mont) -> Option<u64> {
    let m = ctx.m;
    let mut a: Vec<u64> = a.iter().map(|x| ctx.to_mont(reduce(x, m))).collect();
    let mut b: Vec<u64> = b.iter().map(|x| ctx.to_mont(reduce(x, m))).collect();
    if *a.last()? == 0 || *b.last()? == 0 {
        return None;
    }
    let mut acc = ctx.to_mont(1);
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return Some(ctx.mul(acc, ctx.pow(b[0], da as u64)));
        }
        if da == 0 {
            return Some(ctx.mul(acc, ctx.pow(a[0], db as u64)));
        }
        // r = a mod b
        let lb_inv = ctx.inv(b[db]);
        let mut r = a;
        if da >= db {
            for k in (0..=da - db).rev() {
                let c = ctx.mul(r[k + db], lb_inv);
                if c == 0 {
                    continue;
                }
                for (i, &bi) in b.iter().enumerate() {
                    r[k + i] = ctx.sub(r[k + i], ctx.mul(c, bi));
                }
            }
            r.truncate(db);
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            return Some(0);
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            acc = ctx.sub(0, acc);
        }
        acc = ctx.mul(acc, ctx.pow(b[db], (da - dr) as u64));
        a = b;
        b = r;
    }
}

fn norm_bits(p: &[BigInt]) -> u64 {
    let max = p.iter().map(|c| c.bits()).max().unwrap_or(0);
    let len_bits = 64 - (p.len() as u64).leading_zeros() as u64;
    max + len_bits / 2 + 1
}

/// Exact resultant of two nonzero integer polynomials (coefficients constant
/// term first).
pub fn integer_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert!(!a.is_empty() && !b.is_empty(), "nonzero polynomials");
    let da = (a.len() - 1) as u64;
    let db = (b.len() - 1) as u64;
    if da == 0 && db == 0 {
        return BigInt::one();
    }
    // |res| <= ||a||^db ||b||^da
    let bound_bits = db * norm_bits(a) + da * norm_bits(b) + 2;
    let mut needed = (bound_bits / (PRIME_BITS - 1) + 2) as usize;
    loop {
        let table = prime_table(needed);
        // Mixed-radix digits over the primes where the degrees survive.
        let mut used: Vec<usize> = Vec::new();
        let mut digits: Vec<u64> = Vec::new();
        let mut covered_bits = 0u64;
        for (i, ctx) in table.mont.iter().enumerate().take(needed) {
            if covered_bits > bound_bits {
                break;
            }
            let Some(r) = resultant_mod(a, b, ctx) else {
                continue;
            };
            // value mod m_i of the digits so far (mixed-radix Horner), and the
            // product of the primes used so far
            let mut partial = 0u64;
            for (&d, &j) in digits.iter().zip(&used).rev() {
                let d = if d >= ctx.m { d - ctx.m } else { d };
                partial = ctx.add(ctx.mul(partial, table.cross[i][j]), d);
            }
            let prefix = used
                .iter()
                .fold(ctx.to_mont(1), |acc, &j| ctx.mul(acc, table.cross[i][j]));
            let diff = ctx.sub(r, ctx.to_mont(partial));
            digits.push(ctx.from_mont(ctx.mul(diff, ctx.inv(prefix))));
            used.push(i);
            covered_bits += PRIME_BITS - 1;
        }
        if covered_bits > bound_bits {
            return recombine(&table, &used, &digits);
        }
        needed *= 2;
    }
}

/// `sum d_k * prod_{j<k} m_j`, lifted to the symmetric range.
fn recombine(table: &PrimeTable, used: &[usize], digits: &[u64]) -> BigInt {
    let mut value = BigInt::zero();
    for (&d, &i) in digits.iter().zip(used).rev() {
        value = value * table.mont[i].m + d;
    }
    let modulus: BigInt = used
        .iter()
        .fold(BigInt::one(), |acc, &i| acc * table.mont[i].m);
    if &value * 2u32 > modulus {
        value - modulus
    } else {
        value
    }
}
