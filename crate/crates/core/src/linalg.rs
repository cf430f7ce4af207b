//! Exact linear algebra over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::Rational;

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Determinant of a square matrix. Rows are scaled to integers, then Bareiss
/// fraction-free elimination runs over Z.
pub fn determinant(m: &Matrix) -> Rational {
    let (mut a, scales) = integer_rows(m);
    let det = bareiss_determinant(&mut a);
    Rational::new(det, scales.iter().product())
}

/// Bareiss elimination in place; returns the determinant.
pub fn bareiss_determinant(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][c].recip();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..cols {
                let d = &f * &a[r][j];
                a[i][j] -= d;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inverse by fraction-free Gauss-Jordan over Z. With `A_int = diag(l) A`
/// integral, elimination on `[A_int | I]` ends at `[d I | d A_int^(-1)]`, and
/// `A^(-1) = A_int^(-1) diag(l)`.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let (mut a, scales) = integer_rows(m);
    for (i, row) in a.iter_mut().enumerate() {
        row.extend((0..n).map(|j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }));
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let piv = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(k, piv);
        let pivot_row = std::mem::take(&mut a[k]);
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = std::mem::take(&mut row[k]);
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = &pivot_row[k] * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot_row[k].clone();
        a[k] = pivot_row;
    }
    Ok(a.iter()
        .map(|row| {
            (0..n)
                .map(|j| Rational::new(&row[n + j] * &scales[j], prev.clone()))
                .collect()
        })
        .collect())
}

/// Rows scaled by the lcm of their denominators: `(diag(l) m, l)`.
fn integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints = row.iter().map(|x| &l / x.denom() * x.numer()).collect();
            (ints, l)
        })
        .unzip()
}

/// Solver for `B x = v` with `B` of shape `rows x cols` and full column rank.
/// Elimination runs once; each solve is a matrix-vector product plus a
/// consistency check on the leftover rows.
#[derive(Debug, Clone)]
pub struct ColumnSolver {
    cols: usize,
    /// `transform * B` has the identity in its first `cols` rows and zeros below.
    transform: Matrix,
}

impl ColumnSolver {
    pub fn new(b: &Matrix) -> Result<Self> {
        let rows = b.len();
        let cols = b.first().map_or(0, Vec::len);
        if cols > rows {
            return Err(Error::LinearlyDependent);
        }
        let mut a = b.clone();
        let mut t = identity(rows);
        for c in 0..cols {
            let piv = (c..rows)
                .find(|&i| !a[i][c].is_zero())
                .ok_or(Error::LinearlyDependent)?;
            a.swap(c, piv);
            t.swap(c, piv);
            let s = a[c][c].recip();
            for j in 0..cols {
                a[c][j] *= &s;
            }
            for j in 0..rows {
                t[c][j] *= &s;
            }
            for i in 0..rows {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
                for j in 0..rows {
                    let d = &f * &t[c][j];
                    t[i][j] -= d;
                }
            }
        }
        Ok(ColumnSolver { cols, transform: t })
    }

    /// The unique solution, or `None` if `v` is outside the column span.
    pub fn solve(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut w = mat_vec(&self.transform, v);
        if w[self.cols..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        w.truncate(self.cols);
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 3]])), rat(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), rat(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), rat(0));
        let half = vec![vec![ratio(1, 2), rat(0)], vec![rat(0), ratio(1, 3)]];
        assert_eq!(determinant(&half), ratio(1, 6));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn cofactor(a: &Matrix) -> Rational {
            if a.len() == 1 {
                return a[0][0].clone();
            }
            (0..a.len())
                .map(|j| {
                    let minor: Matrix = a[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|(k, _)| *k != j)
                                .map(|(_, x)| x.clone())
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { rat(1) } else { rat(-1) };
                    s * &a[0][j] * cofactor(&minor)
                })
                .fold(rat(0), |x, y| x + y)
        }
        let a = m(&[&[3, -1, 4, 1], &[0, 0, 2, 7], &[5, 9, -2, 6], &[0, 3, 0, 1]]);
        assert_eq!(determinant(&a), cofactor(&a));
    }

    fn inverse_rational(m: &Matrix) -> Result<Matrix> {
        let n = m.len();
        let mut a = m.clone();
        let mut inv = identity(n);
        for c in 0..n {
            let piv = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(c, piv);
            inv.swap(c, piv);
            let s = a[c][c].recip();
            for j in 0..n {
                a[c][j] *= &s;
                inv[c][j] *= &s;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                    let d = &f * &inv[c][j];
                    inv[i][j] -= d;
                }
            }
        }
        Ok(inv)
    }

    #[test]
    fn inverse_matches_rational_gauss_jordan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
        for n in 1..7 {
            for _ in 0..10 {
                let a: Matrix = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| ratio(rng.gen_range(-20..20), rng.gen_range(1..9)))
                            .collect()
                    })
                    .collect();
                match inverse_rational(&a) {
                    Ok(inv) => {
                        assert_eq!(inverse(&a).unwrap(), inv);
                        assert_eq!(mat_mul(&a, &inv), identity(n));
                    }
                    Err(e) => assert_eq!(inverse(&a), Err(e)),
                }
            }
        }
        let singular = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(inverse(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert_eq!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn column_solver() {
        let b = m(&[&[1, 0], &[1, 1], &[0, 2]]);
        let s = ColumnSolver::new(&b).unwrap();
        assert_eq!(
            s.solve(&[rat(2), rat(5), rat(6)]),
            Some(vec![rat(2), rat(3)])
        );
        assert_eq!(s.solve(&[rat(2), rat(5), rat(7)]), None);
        assert_eq!(rank(&b), 2);
        assert!(ColumnSolver::new(&m(&[&[1, 2], &[2, 4]])).is_err());
    }
}
