//! p-adic lattices, closest vectors for sublattices of an orthogonal basis,
//! and exact membership.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::builder::OrthogonalBasis;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::linalg::{self, ColumnSolver, Matrix};
use crate::padic::{self, Rational, Valuation};

/// Grid points `(i, j)` of an `f x e` orthogonal basis that span a sublattice.
/// Always contains every point of grades 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIndexSet {
    f: usize,
    e: usize,
    points: BTreeSet<(usize, usize)>,
}

impl LatticeIndexSet {
    pub fn new(
        f: usize,
        e: usize,
        points: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let points: BTreeSet<(usize, usize)> = points.into_iter().collect();
        if let Some(&(i, j)) = points.iter().find(|&&(i, j)| i >= f || j >= e) {
            return Err(Error::InvalidIndexSet(format!(
                "({i}, {j}) outside the {f} x {e} grid"
            )));
        }
        for j in 0..e.min(2) {
            if let Some(i) = (0..f).find(|&i| !points.contains(&(i, j))) {
                return Err(Error::InvalidIndexSet(format!(
                    "missing mandatory point ({i}, {j})"
                )));
            }
        }
        Ok(LatticeIndexSet { f, e, points })
    }

    /// Grades 0 and 1 only.
    pub fn mandatory(f: usize, e: usize) -> Self {
        let points = (0..e.min(2))
            .flat_map(|j| (0..f).map(move |i| (i, j)))
            .collect();
        LatticeIndexSet { f, e, points }
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.points.contains(&(i, j))
    }

    /// Points in basis order (`j * f + i` ascending); this is the order of the α's.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut pts: Vec<(usize, usize)> = self.points.iter().copied().collect();
        pts.sort_by_key(|&(i, j)| j * self.f + i);
        pts
    }

    /// The α's: basis elements at the points of `S`, in basis order.
    pub fn alphas(&self, basis: &OrthogonalBasis) -> Vec<FieldElement> {
        self.points()
            .into_iter()
            .map(|(i, j)| basis.element(i, j).clone())
            .collect()
    }
}

/// `Z_p`-span of `m <= n` field elements, independent over `Q`.
#[derive(Debug, Clone)]
pub struct PadicLattice {
    field: Arc<FieldDescriptor>,
    generators: Vec<FieldElement>,
    solver: ColumnSolver,
}

impl PadicLattice {
    pub fn new(generators: Vec<FieldElement>) -> Result<Self> {
        let field = generators
            .first()
            .ok_or(Error::EmptyFamily)?
            .field()
            .clone();
        if generators
            .iter()
            .any(|g| !g.field().as_ref().eq(field.as_ref()))
        {
            return Err(Error::DescriptorMismatch);
        }
        let n = field.degree();
        if generators.len() > n {
            return Err(Error::LinearlyDependent);
        }
        let columns: Matrix = (0..n)
            .map(|row| generators.iter().map(|g| g.coords()[row].clone()).collect())
            .collect();
        let solver = ColumnSolver::new(&columns)?;
        Ok(PadicLattice {
            field,
            generators,
            solver,
        })
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Rational coordinates of `v` on the generators, if `v` lies in their `Q`-span.
    pub fn coefficients(&self, v: &FieldElement) -> Option<Vec<Rational>> {
        if v.coords().len() != self.field.degree() {
            return None;
        }
        self.solver.solve(v.coords())
    }

    /// `v` is in the lattice iff its coordinates on the generators exist and are p-integral.
    pub fn contains(&self, v: &FieldElement) -> bool {
        let p = self.field.p();
        self.coefficients(v)
            .is_some_and(|x| x.iter().all(|c| padic::is_p_integral(c, p)))
    }
}

pub fn membership(v: &FieldElement, lattice: &PadicLattice) -> bool {
    lattice.contains(v)
}

pub fn to_orthogonal_coords(t: &FieldElement, basis: &OrthogonalBasis) -> Vec<Rational> {
    basis.to_orthogonal_coords(t)
}

/// Closest vector to `t` in the lattice spanned by the basis points in `s`:
/// the projection onto those coordinates, together with
/// `v_p(t - v) = min over nonzero off-S c_ij of v_p(c_ij) + j/e`.
pub fn cvp_orthogonal(
    t: &FieldElement,
    basis: &OrthogonalBasis,
    s: &LatticeIndexSet,
) -> Result<(FieldElement, Valuation)> {
    let p = basis.field().p();
    let coords = basis.to_orthogonal_coords(t);
    let mut projected = vec![Rational::zero(); coords.len()];
    let mut distance = Valuation::Infinity;
    for (idx, c) in coords.iter().enumerate() {
        let (i, j) = basis.grid_point(idx);
        if !padic::is_p_integral(c, p) {
            return Err(Error::NonIntegralTarget(i, j));
        }
        if s.contains(i, j) {
            projected[idx] = c.clone();
        } else if !c.is_zero() {
            distance = distance.min(padic::valuation(c, p).add(&basis.grade_valuation(j)));
        }
    }
    Ok((basis.from_orthogonal_coords(&projected), distance))
}

/// Checks `A` against the basis points of `s`: square of size `|S|`, p-unit
/// determinant, and every row holding a p-unit in a grade-0 column. The
/// latter makes every mixed vector a unit.
pub fn check_mixing_matrix(
    s: &LatticeIndexSet,
    a: &[Vec<BigInt>],
    p: crate::padic::Prime,
) -> Result<()> {
    let m = s.len();
    if a.len() != m || a.iter().any(|row| row.len() != m) {
        return Err(Error::InvalidMixingMatrix(format!("expected {m} x {m}")));
    }
    let pb = p.to_bigint();
    let mut work = a.to_vec();
    let det = linalg::bareiss_determinant(&mut work);
    if (&det % &pb).is_zero() {
        return Err(Error::InvalidMixingMatrix(format!(
            "determinant {det} is divisible by {p}"
        )));
    }
    let grade0: Vec<bool> = s.points().iter().map(|&(_, j)| j == 0).collect();
    for (r, row) in a.iter().enumerate() {
        if !row
            .iter()
            .zip(&grade0)
            .any(|(x, &g0)| g0 && !(x % &pb).is_zero())
        {
            return Err(Error::InvalidMixingMatrix(format!(
                "row {r} has no unit entry in a grade-0 column"
            )));
        }
    }
    Ok(())
}

/// `β_r = Σ_k A_rk α_k`.
pub fn mix_basis(
    basis: &OrthogonalBasis,
    s: &LatticeIndexSet,
    a: &[Vec<BigInt>],
) -> Result<Vec<FieldElement>> {
    check_mixing_matrix(s, a, basis.field().p())?;
    let alphas = s.alphas(basis);
    Ok(a.iter()
        .map(|row| {
            row.iter()
                .zip(&alphas)
                .filter(|(x, _)| !x.is_zero())
                .fold(FieldElement::zero(basis.field()), |acc, (x, alpha)| {
                    &acc + &alpha.scale(&Rational::from_integer(x.clone()))
                })
        })
        .collect())
}

const MIXING_RETRIES: usize = 64;

/// `A = L U` with `L` unit lower and `U` unit upper triangular, off-diagonal
/// entries in `[0, bound)`; resampled until the grade-0 row condition holds.
pub fn sample_mixing_matrix<R: Rng>(
    s: &LatticeIndexSet,
    p: crate::padic::Prime,
    bound: u64,
    rng: &mut R,
) -> Result<Vec<Vec<BigInt>>> {
    let m = s.len();
    let bound = bound.max(1);
    for _ in 0..MIXING_RETRIES {
        let mut tri = |lower: bool| -> Vec<Vec<BigInt>> {
            (0..m)
                .map(|r| {
                    (0..m)
                        .map(|c| match (r == c, if lower { c < r } else { c > r }) {
                            (true, _) => BigInt::one(),
                            (false, true) => BigInt::from(rng.gen_range(0..bound)),
                            _ => BigInt::zero(),
                        })
                        .collect()
                })
                .collect()
        };
        let l = tri(true);
        let u = tri(false);
        let a: Vec<Vec<BigInt>> = (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| (0..m).map(|k| &l[r][k] * &u[k][c]).sum())
                    .collect()
            })
            .collect();
        if check_mixing_matrix(s, &a, p).is_ok() {
            return Ok(a);
        }
    }
    Err(Error::InvalidMixingMatrix(format!(
        "no valid sample in {MIXING_RETRIES} attempts"
    )))
}
