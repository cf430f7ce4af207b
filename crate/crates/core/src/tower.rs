//! The ring `Q[θ, π] / (Φ(θ), G(π))` with coordinates on the monomials
//! `θ^i π^j`, stored at index `j * f + i`.

use num_traits::Zero;

use crate::padic::Rational;
use crate::poly::RationalPoly;

#[derive(Debug, Clone)]
pub struct TowerRing {
    theta_modulus: RationalPoly,
    pi_modulus: RationalPoly,
    f: usize,
    e: usize,
}

impl TowerRing {
    /// Both moduli must be monic of positive degree.
    pub fn new(theta_modulus: RationalPoly, pi_modulus: RationalPoly) -> Self {
        let f = theta_modulus.degree().expect("nonzero");
        let e = pi_modulus.degree().expect("nonzero");
        TowerRing {
            theta_modulus,
            pi_modulus,
            f,
            e,
        }
    }

    pub fn dim(&self) -> usize {
        self.f * self.e
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.f + i
    }

    pub fn unit(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[self.index(i, j)] = num_traits::One::one();
        v
    }

    fn split(&self, a: &[Rational]) -> Vec<RationalPoly> {
        a.chunks(self.f)
            .map(|c| RationalPoly::new(c.to_vec()))
            .collect()
    }

    fn join(&self, parts: &[RationalPoly]) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.dim());
        for part in parts.iter().take(self.e) {
            for i in 0..self.f {
                out.push(part.coeff(i));
            }
        }
        out
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let (a, b) = (self.split(a), self.split(b));
        let mut prod = vec![RationalPoly::zero(); 2 * self.e - 1];
        for (j1, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j2, y) in b.iter().enumerate() {
                prod[j1 + j2] = &prod[j1 + j2] + &(x * y);
            }
        }
        // π^k = -Σ_{i<e} g_i π^(k-e+i) for k >= e
        for k in (self.e..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            for (i, g) in self.pi_modulus.coeffs()[..self.e].iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                prod[k - self.e + i] = &prod[k - self.e + i] - &top.scale(g);
            }
        }
        let reduced: Vec<RationalPoly> = prod[..self.e]
            .iter()
            .map(|x| x.rem(&self.theta_modulus).expect("nonzero modulus"))
            .collect();
        self.join(&reduced)
    }

    pub fn add(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
}
