//! Orthogonality certification for families of field elements.
//!
//! For a family of equal norm `λ`, orthogonality is equivalent to every
//! nonzero digit vector `a ∈ {0, ..., p-1}^m` giving `|Σ a_i α_i| = λ`. A
//! violation with some unit coefficient reduces to its digit vector, because
//! subtracting `p * (tail)` cannot lift the value back to `λ`. So the finite
//! enumeration below is exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::fp_poly::FpPoly;
use crate::linalg;
use crate::padic::{rat, Prime, Rational, Valuation};
use crate::poly::RationalPoly;

/// A nonempty family of elements of one field, optionally labelled with grades.
#[derive(Debug, Clone)]
pub struct VectorFamily {
    elements: Vec<FieldElement>,
    grades: Option<Vec<usize>>,
}

impl VectorFamily {
    pub fn new(elements: Vec<FieldElement>) -> Result<Self> {
        Self::check_members(&elements)?;
        Ok(VectorFamily {
            elements,
            grades: None,
        })
    }

    pub fn graded(elements: Vec<FieldElement>, grades: Vec<usize>) -> Result<Self> {
        Self::check_members(&elements)?;
        if grades.len() != elements.len() {
            return Err(Error::WrongLength {
                expected: elements.len(),
                got: grades.len(),
            });
        }
        Ok(VectorFamily {
            elements,
            grades: Some(grades),
        })
    }

    fn check_members(elements: &[FieldElement]) -> Result<()> {
        let first = elements.first().ok_or(Error::EmptyFamily)?;
        if elements.iter().any(|e| !e.same_field(first)) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn grades(&self) -> Option<&[usize]> {
        self.grades.as_deref()
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        self.elements[0].field()
    }

    pub fn is_independent(&self) -> bool {
        let rows: linalg::Matrix = self.elements.iter().map(|e| e.coords().to_vec()).collect();
        linalg::rank(&rows) == self.elements.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Orthogonal,
    /// A nonzero digit vector whose combination is shorter than the common norm.
    Violation {
        digits: Vec<u64>,
    },
}

impl Verdict {
    pub fn is_orthogonal(&self) -> bool {
        matches!(self, Verdict::Orthogonal)
    }
}

/// Digits of `index` in base `p`, most significant first, `len` of them.
pub fn digit_vector(mut index: u64, p: u64, len: usize) -> Vec<u64> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = index % p;
        index /= p;
    }
    digits
}

pub fn combine(elements: &[FieldElement], digits: &[u64]) -> FieldElement {
    let mut acc = FieldElement::zero(elements[0].field());
    for (e, &d) in elements.iter().zip(digits) {
        if d != 0 {
            acc = &acc + &e.scale(&rat(d as i64));
        }
    }
    acc
}

/// Family members over one common denominator, so that digit combinations
/// need only integer arithmetic.
struct IntegerCombiner<'a> {
    field: &'a FieldDescriptor,
    numerators: Vec<Vec<BigInt>>,
    /// `n * v_p(common denominator)`
    shift: i64,
}

impl<'a> IntegerCombiner<'a> {
    fn new(elements: &'a [FieldElement]) -> Self {
        let field = elements[0].field().as_ref();
        let den = elements
            .iter()
            .flat_map(|e| e.coords())
            .fold(BigInt::one(), |acc, c| {
                num_integer::Integer::lcm(&acc, c.denom())
            });
        let numerators = elements
            .iter()
            .map(|e| {
                e.coords()
                    .iter()
                    .map(|c| &den / c.denom() * c.numer())
                    .collect()
            })
            .collect();
        let shift = field.degree() as i64 * crate::padic::int_valuation(&den, field.p()) as i64;
        IntegerCombiner {
            field,
            numerators,
            shift,
        }
    }

    fn valuation(&self, digits: &[u64]) -> Valuation {
        let n = self.field.degree();
        let mut acc = vec![BigInt::zero(); n];
        for (num, &d) in self.numerators.iter().zip(digits) {
            if d != 0 {
                for (a, x) in acc.iter_mut().zip(num) {
                    *a += x * d;
                }
            }
        }
        match self.field.norm_valuation_of_integer_coords(&acc) {
            None => Valuation::Infinity,
            Some(v) => Valuation::frac(v - self.shift, n as i64),
        }
    }
}

/// Digit-vector certificate for a family of equal norm. On failure returns the
/// lexicographically first violating digit vector.
///
/// Only vectors whose first nonzero digit is 1 are evaluated: if `d` violates
/// then so does `c d mod p` for every unit `c`, and normalizing the leading
/// digit never moves a vector later in lexicographic order.
///
/// A Q-dependent family is never orthogonal, and it always has a digit-vector
/// violation, so dependence is reported through the verdict rather than as an
/// error.
pub fn check_orthogonal_equal_norm(family: &VectorFamily) -> Result<Verdict> {
    let elements = family.elements();
    let lambda = elements[0].valuation();
    for e in &elements[1..] {
        if e.valuation() != lambda {
            return Err(Error::UnequalNorms);
        }
    }
    let p = family.field().p().get();
    let m = elements.len();
    let total = p.checked_pow(m as u32).ok_or_else(|| {
        Error::Construction(format!("{p}^{m} digit vectors is too many to enumerate"))
    })?;
    let combiner = IntegerCombiner::new(elements);
    let violation = (1..total).into_par_iter().find_first(|&idx| {
        let digits = digit_vector(idx, p, m);
        digits.iter().find(|&&d| d != 0) == Some(&1) && combiner.valuation(&digits) != lambda
    });
    Ok(match violation {
        None => Verdict::Orthogonal,
        Some(idx) => Verdict::Violation {
            digits: digit_vector(idx, p, m),
        },
    })
}

/// Result of the graded check: the per-grade verdicts in grade order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedReport {
    pub grades: Vec<GradeReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeReport {
    pub grade: usize,
    pub valuation: Valuation,
    pub size: usize,
    pub verdict: Verdict,
}

impl GradedReport {
    pub fn is_orthogonal(&self) -> bool {
        self.grades.iter().all(|g| g.verdict.is_orthogonal())
    }
}

fn fractional_part(v: &Rational) -> Rational {
    v - v.floor()
}

/// Orthogonality of a graded family: each grade is checked on its own, and
/// distinct grades must have valuations that differ mod 1, so their value
/// sets are disjoint and the direct sum is orthogonal.
pub fn check_orthogonal_graded(family: &VectorFamily) -> Result<GradedReport> {
    let grades = family
        .grades()
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| vec![0; family.elements().len()]);
    let mut groups: BTreeMap<usize, Vec<FieldElement>> = BTreeMap::new();
    for (e, g) in family.elements().iter().zip(&grades) {
        groups.entry(*g).or_default().push(e.clone());
    }
    let mut residues: Vec<(usize, Rational)> = Vec::new();
    let mut reports = Vec::new();
    for (grade, members) in groups {
        let sub = VectorFamily::new(members)?;
        let verdict = match check_orthogonal_equal_norm(&sub) {
            Err(Error::UnequalNorms) => return Err(Error::InconsistentGrade(grade)),
            other => other?,
        };
        let valuation = sub.elements()[0].valuation();
        let v = valuation
            .finite()
            .cloned()
            .ok_or(Error::LinearlyDependent)?;
        let frac = fractional_part(&v);
        if let Some((other, _)) = residues.iter().find(|(_, r)| *r == frac) {
            return Err(Error::OverlappingGrades(*other, grade));
        }
        residues.push((grade, frac));
        reports.push(GradeReport {
            grade,
            valuation,
            size: sub.elements().len(),
            verdict,
        });
    }
    Ok(GradedReport { grades: reports })
}

/// Whether `1, θ, ..., θ^(n-1)` is orthogonal for the unramified extension
/// generated by a root `θ` of `F`: exactly when `F` is irreducible mod `p`.
pub fn power_basis_orthogonality(f: &RationalPoly, p: Prime) -> Result<bool> {
    f.reduce_mod_p(p)?.is_irreducible()
}

/// `F mod p` and, when the search is small enough, its factorization.
pub fn residue_factorization(
    f: &RationalPoly,
    p: Prime,
) -> Result<(FpPoly, Option<Vec<(FpPoly, usize)>>)> {
    let reduced = f.reduce_mod_p(p)?;
    let factors = reduced.factor_by_trial_division(200_000);
    Ok((reduced, factors))
}

/// Sufficient conditions for `F` to be irreducible over `Q_p`: irreducible
/// mod `p`, or Eisenstein after a shift `X -> X + c` with `0 <= c < p`.
pub fn certifies_local_irreducibility(f: &RationalPoly, p: Prime) -> bool {
    if !f.is_monic() || !f.is_p_integral(p) {
        return false;
    }
    if power_basis_orthogonality(f, p).unwrap_or(false) {
        return true;
    }
    if !f.has_integer_coeffs() {
        return false;
    }
    (0..p.get()).any(|c| {
        let shifted = f.compose(&RationalPoly::new(vec![rat(c as i64), Rational::one()]));
        crate::poly::eisenstein_check(&shifted, p).unwrap_or(false)
    })
}

/// The power basis `1, ζ, ..., ζ^(n-1)` of a field.
pub fn power_basis(field: &Arc<FieldDescriptor>) -> Vec<FieldElement> {
    let n = field.degree();
    (0..n)
        .map(|k| {
            let mut c = vec![Rational::zero(); n];
            c[k] = Rational::one();
            FieldElement::new(field, c).expect("length n")
        })
        .collect()
}
