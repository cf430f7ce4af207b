//! Construction of `K = Q_p(ζ)`, `ζ = π + Σ a_i θ^i`, with `θ` a primitive
//! q-th root of unity and `π` a root of an Eisenstein polynomial `G`, together
//! with the orthogonal basis `θ^i π^j`.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::cyclotomic::{cyclotomic_poly, multiplicative_order, pow_mod};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, Ramification};
use crate::linalg::{self, Matrix};
use crate::ortho::{check_orthogonal_graded, GradedReport, VectorFamily};
use crate::padic::{is_p_integral, is_p_unit, is_prime, rat, Prime, Rational, Valuation};
use crate::poly::{eisenstein_check, RationalPoly};
use crate::tower::TowerRing;

/// Checks the conditions on `(p, q, e)` and reports every violated one.
pub fn validate_params(p: u64, q: u64, e: usize) -> Result<()> {
    let mut problems = Vec::new();
    if !is_prime(p) {
        problems.push(format!("p = {p} is not prime"));
    }
    if !is_prime(q) {
        problems.push(format!("q = {q} is not prime"));
    } else if q == 2 || !is_prime((q - 1) / 2) {
        problems.push(format!("q0 = (q - 1)/2 = {} is not prime", (q - 1) / 2));
    }
    if e < 2 {
        problems.push(format!("e = {e} must be at least 2"));
    }
    if q >= 2 {
        if p.is_multiple_of(q) {
            problems.push(format!("q = {q} divides p = {p}"));
        } else {
            if p % q == q - 1 {
                problems.push(format!("p = {p} ≡ -1 (mod {q})"));
            }
            if q > 2 && pow_mod(p, (q - 1) / 2, q) != q - 1 {
                problems.push(format!("p = {p} is a quadratic residue mod {q}"));
            }
            if is_prime(q) {
                let ord = multiplicative_order(p, q)?;
                if ord != q - 1 {
                    problems.push(format!("order of {p} mod {q} is {ord}, not {}", q - 1));
                }
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParams(problems))
    }
}

/// Input to the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub p: Prime,
    pub q: u64,
    pub e: usize,
    /// `a_0, ..., a_(f-1)` with `ζ = π + Σ a_i θ^i`.
    pub a: Vec<Rational>,
    /// Eisenstein polynomial of degree `e` whose root is `π`.
    pub g: RationalPoly,
    /// Accept any `a` for which `ζ` turns out to generate `K`, not only the
    /// shape with `a_(f-1)` non-integral.
    pub allow_custom_a: bool,
}

impl ConstructionParams {
    pub fn f(&self) -> usize {
        (self.q - 1) as usize
    }

    pub fn n(&self) -> usize {
        self.f() * self.e
    }

    /// The roots-of-unity example: `p = 2`, `q = 5`, `e = 3`, `G = X^3 - 2`, `ζ = θ + π`.
    pub fn worked_example() -> Self {
        ConstructionParams {
            p: Prime::new(2).expect("prime"),
            q: 5,
            e: 3,
            a: vec![rat(0), rat(1), rat(0), rat(0)],
            g: RationalPoly::from_ints(&[-2, 0, 0, 1]),
            allow_custom_a: true,
        }
    }

    /// Draws `a` and `G` with the default generator: `a_(f-1) = 1/p`, the other
    /// `a_i` uniform in `[0, p*bound)` with at least one unit, and
    /// `G = X^e - p*u` with `u` a unit in `[1, bound)`. With `full_eisenstein`
    /// the middle coefficients of `G` are `p*c_i`, `c_i` uniform in `[0, bound)`.
    pub fn sample<R: Rng>(
        p: u64,
        q: u64,
        e: usize,
        bound: u64,
        full_eisenstein: bool,
        rng: &mut R,
    ) -> Result<Self> {
        validate_params(p, q, e)?;
        let prime = Prime::new(p)?;
        let bound = bound.max(2);
        let f = (q - 1) as usize;
        let a = loop {
            let mut a: Vec<Rational> = (0..f - 1)
                .map(|_| rat(rng.gen_range(0..p * bound) as i64))
                .collect();
            if a.iter().any(|x| is_p_unit(x, prime)) {
                a.push(Rational::new(1.into(), (p as i64).into()));
                break a;
            }
        };
        let u = loop {
            let u = rng.gen_range(1..bound.max(p + 1));
            if u % p != 0 {
                break u as i64;
            }
        };
        let mut g = vec![rat(-(p as i64) * u)];
        for _ in 1..e {
            let c = if full_eisenstein {
                rng.gen_range(0..bound) as i64
            } else {
                0
            };
            g.push(rat(p as i64 * c));
        }
        g.push(rat(1));
        Ok(ConstructionParams {
            p: prime,
            q,
            e,
            a,
            g: RationalPoly::new(g),
            allow_custom_a: false,
        })
    }

    /// Validates `(p, q, e)`, `G` and the shape of `a`.
    pub fn validate(&self) -> Result<()> {
        validate_params(self.p.get(), self.q, self.e)?;
        let f = self.f();
        let mut problems = Vec::new();
        if self.a.len() != f {
            problems.push(format!("a has {} entries, expected f = {f}", self.a.len()));
        }
        if self.g.degree() != Some(self.e) {
            problems.push(format!(
                "G has degree {:?}, expected e = {}",
                self.g.degree(),
                self.e
            ));
        }
        match eisenstein_check(&self.g, self.p) {
            Ok(true) => {}
            Ok(false) => problems.push(format!("G = {} is not Eisenstein at {}", self.g, self.p)),
            Err(err) => problems.push(format!("G: {err}")),
        }
        if !self.allow_custom_a && self.a.len() == f {
            let (head, last) = self.a.split_at(f - 1);
            if head.iter().any(|x| !is_p_integral(x, self.p)) {
                problems.push("a_0 .. a_(f-2) must be p-integral".to_string());
            }
            if !head.iter().any(|x| is_p_unit(x, self.p)) {
                problems.push("one of a_0 .. a_(f-2) must be a p-adic unit".to_string());
            }
            if is_p_integral(&last[0], self.p) {
                problems.push("a_(f-1) must not be p-integral".to_string());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(problems))
        }
    }
}

/// Minimal polynomial over Q of `θ' = Σ a_i θ^i`, `θ` a primitive q-th root of
/// unity, from the monic linear dependence among `1, θ', ..., θ'^f` in `Q[θ]/Φ_q`.
pub fn minimal_poly_combination(a: &[Rational], q: u64) -> Result<RationalPoly> {
    let phi = cyclotomic_poly(q)?;
    let f = phi.degree().expect("nonzero");
    if a.len() != f {
        return Err(Error::WrongLength {
            expected: f,
            got: a.len(),
        });
    }
    let theta_prime = RationalPoly::new(a.to_vec());
    let mut powers = vec![RationalPoly::one()];
    for k in 1..=f {
        let next = (&powers[k - 1] * &theta_prime).rem(&phi)?;
        powers.push(next);
    }
    // columns: θ'^0 .. θ'^(f-1)
    let system: Matrix = (0..f)
        .map(|row| (0..f).map(|k| powers[k].coeff(row)).collect())
        .collect();
    let rhs: Vec<Rational> = (0..f).map(|row| -powers[f].coeff(row)).collect();
    let inv = linalg::inverse(&system).map_err(|_| {
        Error::Construction("combination of θ is not a primitive element of Q(θ)".into())
    })?;
    let mut h = linalg::mat_vec(&inv, &rhs);
    h.push(Rational::one());
    Ok(RationalPoly::new(h))
}

/// `F(X) = Res_Y(G(Y), H(X - Y)) = ∏ H(X - π^(i))`, computed by evaluating the
/// resultant at `deg G * deg H + 1` integer points and interpolating.
pub fn compose_minimal_poly(g: &RationalPoly, h: &RationalPoly) -> Result<RationalPoly> {
    let e = g.degree().ok_or(Error::ZeroPolynomial)?;
    let f = h.degree().ok_or(Error::ZeroPolynomial)?;
    let n = e * f;
    let points: Vec<Rational> = (0..=n as i64).map(rat).collect();
    let values = points
        .iter()
        .map(|x0| {
            let shifted = h.compose(&RationalPoly::new(vec![x0.clone(), rat(-1)]));
            g.resultant(&shifted)
        })
        .collect::<Result<Vec<_>>>()?;
    let lc = g.leading().expect("nonzero").clone();
    // Res_Y(G, H(x0 - Y)) = lc(G)^f ∏ H(x0 - π^(i))
    let scale = crate::padic::rational_pow(&lc, f as u32).recip();
    let values: Vec<Rational> = values.into_iter().map(|v| v * &scale).collect();
    let result = interpolate(&points, &values);
    if result.degree() != Some(n) || !result.is_monic() {
        return Err(Error::Construction(format!(
            "composed polynomial {result} is not monic of degree {n}"
        )));
    }
    Ok(result)
}

/// Newton interpolation through `(x_k, y_k)`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> RationalPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            coef[k] = (&coef[k] - &coef[k - 1]) / (&xs[k] - &xs[k - level]);
        }
    }
    let mut result = RationalPoly::zero();
    for k in (0..n).rev() {
        let factor = RationalPoly::new(vec![-&xs[k], Rational::one()]);
        result = &(&result * &factor) + &RationalPoly::constant(coef[k].clone());
    }
    result
}

/// The basis `θ^i π^j`, `0 <= i < f`, `0 <= j < e`, of `K` over `Q_p`, with the
/// change of basis to and from the power basis of `ζ`. Grid point `(i, j)` sits
/// at index `j * f + i`.
#[derive(Debug, Clone)]
pub struct OrthogonalBasis {
    f: usize,
    e: usize,
    elements: Vec<FieldElement>,
    /// Column `k` holds `ζ^k` on the `θ^i π^j` basis.
    to_orth: Matrix,
}

impl OrthogonalBasis {
    /// Rebuilds the grid from `θ` and `π` given on the power basis.
    pub fn from_generators(
        theta: &FieldElement,
        pi: &FieldElement,
        f: usize,
        e: usize,
    ) -> Result<Self> {
        let field = theta.field();
        if !pi.same_field(theta) {
            return Err(Error::DescriptorMismatch);
        }
        if f * e != field.degree() {
            return Err(Error::Construction(format!(
                "f*e = {} but n = {}",
                f * e,
                field.degree()
            )));
        }
        let theta_powers: Vec<FieldElement> = (0..f as u32).map(|i| theta.pow(i)).collect();
        let mut elements = Vec::with_capacity(f * e);
        let mut pi_power = FieldElement::one(field);
        for _ in 0..e {
            for tp in &theta_powers {
                elements.push(tp * &pi_power);
            }
            pi_power = &pi_power * pi;
        }
        Self::from_elements(elements, f, e)
    }

    fn from_elements(elements: Vec<FieldElement>, f: usize, e: usize) -> Result<Self> {
        let n = elements.len();
        let from_orth: Matrix = (0..n)
            .map(|row| elements.iter().map(|el| el.coords()[row].clone()).collect())
            .collect();
        let to_orth = linalg::inverse(&from_orth)?;
        Ok(OrthogonalBasis {
            f,
            e,
            elements,
            to_orth,
        })
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.f + i
    }

    pub fn grid_point(&self, index: usize) -> (usize, usize) {
        (index % self.f, index / self.f)
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        self.elements[0].field()
    }

    pub fn element(&self, i: usize, j: usize) -> &FieldElement {
        &self.elements[self.index(i, j)]
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    /// Valuation `j/e` of grid point `(i, j)`.
    pub fn grade_valuation(&self, j: usize) -> Valuation {
        Valuation::frac(j as i64, self.e as i64)
    }

    /// Coordinates of `t` on the `θ^i π^j` basis, indexed `j * f + i`.
    pub fn to_orthogonal_coords(&self, t: &FieldElement) -> Vec<Rational> {
        linalg::mat_vec(&self.to_orth, t.coords())
    }

    pub fn from_orthogonal_coords(&self, coords: &[Rational]) -> FieldElement {
        let mut acc = FieldElement::zero(self.field());
        for (c, el) in coords.iter().zip(&self.elements) {
            if !c.is_zero() {
                acc = &acc + &el.scale(c);
            }
        }
        acc
    }

    /// `min over nonzero c_ij of v_p(c_ij) + j/e`, the valuation read off the
    /// orthogonal coordinates.
    pub fn coordinate_valuation(&self, t: &FieldElement) -> Valuation {
        let p = self.field().p();
        self.to_orthogonal_coords(t)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| crate::padic::valuation(c, p).add(&self.grade_valuation(idx / self.f)))
            .min()
            .unwrap_or(Valuation::Infinity)
    }

    pub fn family(&self) -> Result<VectorFamily> {
        let grades = (0..self.elements.len()).map(|idx| idx / self.f).collect();
        VectorFamily::graded(self.elements.clone(), grades)
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub params: ConstructionParams,
    pub h: RationalPoly,
    pub field: Arc<FieldDescriptor>,
    pub theta: FieldElement,
    pub pi: FieldElement,
    pub basis: OrthogonalBasis,
    pub certificate: GradedReport,
}

/// Expresses `θ` and `π` on the power basis of `ζ` by expanding
/// `ζ^k = (π + Σ a_i θ^i)^k` in the tower ring and inverting that change of basis.
pub fn express_generators(
    params: &ConstructionParams,
    field: &Arc<FieldDescriptor>,
) -> Result<(FieldElement, FieldElement)> {
    let (theta, pi, _) = generator_expansions(params, field)?;
    Ok((theta, pi))
}

fn generator_expansions(
    params: &ConstructionParams,
    field: &Arc<FieldDescriptor>,
) -> Result<(FieldElement, FieldElement, Matrix)> {
    let ring = TowerRing::new(cyclotomic_poly(params.q)?, params.g.clone());
    let n = ring.dim();
    if field.degree() != n {
        return Err(Error::Construction(format!(
            "field degree {} != (q-1)e = {n}",
            field.degree()
        )));
    }
    let mut zeta = ring.unit(0, 1);
    for (i, a) in params.a.iter().enumerate() {
        zeta[ring.index(i, 0)] += a;
    }
    let mut columns = vec![ring.unit(0, 0)];
    for k in 1..n {
        let next = ring.mul(&columns[k - 1], &zeta);
        columns.push(next);
    }
    let to_orth: Matrix = (0..n)
        .map(|row| columns.iter().map(|c| c[row].clone()).collect())
        .collect();
    let from_orth = linalg::inverse(&to_orth)
        .map_err(|_| Error::Construction("ζ does not generate the compositum".into()))?;
    let column = |idx: usize| -> Result<FieldElement> {
        FieldElement::new(
            field,
            from_orth.iter().map(|row| row[idx].clone()).collect(),
        )
    };
    let theta = column(ring.index(1, 0))?;
    let pi = column(ring.index(0, 1))?;
    Ok((theta, pi, to_orth))
}

/// Runs the whole construction and certifies the result.
pub fn build(params: &ConstructionParams) -> Result<ConstructionResult> {
    params.validate()?;
    let f = params.f();
    let e = params.e;
    let h = minimal_poly_combination(&params.a, params.q)?;
    let big_f = compose_minimal_poly(&params.g, &h)?;
    let field = FieldDescriptor::new(params.p, big_f, Some(Ramification { e, f }))?.into_arc();
    let (theta, pi, to_orth) = generator_expansions(params, &field)?;

    let zeta = FieldElement::generator(&field);
    let mut combo = pi.clone();
    for (i, a) in params.a.iter().enumerate() {
        combo = &combo + &theta.pow(i as u32).scale(a);
    }
    if combo != zeta {
        return Err(Error::Construction(
            "π + Σ a_i θ^i does not reproduce ζ".into(),
        ));
    }
    if !theta.eval_poly(&cyclotomic_poly(params.q)?).is_zero() {
        return Err(Error::Construction("Φ_q(θ) != 0".into()));
    }
    if !pi.eval_poly(&params.g).is_zero() {
        return Err(Error::Construction("G(π) != 0".into()));
    }

    let basis = OrthogonalBasis::from_generators(&theta, &pi, f, e)?;
    if basis.to_orth != to_orth {
        return Err(Error::Construction("basis change matrices disagree".into()));
    }
    if theta.valuation() != Valuation::int(0) {
        return Err(Error::Construction(format!(
            "v(θ) = {} != 0",
            theta.valuation()
        )));
    }
    if pi.valuation() != Valuation::frac(1, e as i64) {
        return Err(Error::Construction(format!(
            "v(π) = {} != 1/{e}",
            pi.valuation()
        )));
    }
    let certificate = check_orthogonal_graded(&basis.family()?)?;
    if !certificate.is_orthogonal() {
        return Err(Error::Construction(format!(
            "basis failed certification: {certificate:?}"
        )));
    }
    for g in &certificate.grades {
        if g.valuation != basis.grade_valuation(g.grade) {
            return Err(Error::Construction(format!(
                "grade {} has valuation {}",
                g.grade, g.valuation
            )));
        }
    }
    Ok(ConstructionResult {
        params: params.clone(),
        h,
        field,
        theta,
        pi,
        basis,
        certificate,
    })
}
