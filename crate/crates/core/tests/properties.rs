//! Cross-module properties, each against an independent oracle where one exists.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use padic_ortho::builder::{
    build, compose_minimal_poly, interpolate, minimal_poly_combination, validate_params,
    ConstructionParams, ConstructionResult,
};
use padic_ortho::cyclotomic::{cyclotomic_poly, multiplicative_order};
use padic_ortho::field::FieldElement;
use padic_ortho::fp_poly::FpPoly;
use padic_ortho::lattice::{cvp_orthogonal, LatticeIndexSet, PadicLattice};
use padic_ortho::linalg::{determinant, Matrix};
use padic_ortho::ortho::power_basis_orthogonality;
use padic_ortho::padic::{is_prime, rat, Prime, Rational, Valuation};
use padic_ortho::poly::RationalPoly;
use padic_ortho::signature::{
    hash_to_w, keygen_from_construction, sample_params, PrivateKey, PublicKey,
};
use padic_ortho::tower::TowerRing;
use proptest::prelude::*;

fn worked() -> &'static ConstructionResult {
    static R: OnceLock<ConstructionResult> = OnceLock::new();
    R.get_or_init(|| build(&ConstructionParams::worked_example()).unwrap())
}

fn worked_keys() -> &'static (PublicKey, PrivateKey) {
    static K: OnceLock<(PublicKey, PrivateKey)> = OnceLock::new();
    K.get_or_init(|| keygen_from_construction(worked(), 9, b"properties", 32).unwrap())
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

// ---- residue-field polynomials ----

/// Remainder of `a` by monic `b` over F_p, written independently of `FpPoly`.
fn rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let top = r.pop().unwrap();
        let shift = r.len() - db;
        for (i, &bi) in b[..db].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - top) * bi) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn monic_polys(deg: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(deg as u32)).map(move |mut idx| {
        let mut c: Vec<u64> = (0..deg)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d
            })
            .collect();
        c.push(1);
        c
    })
}

#[test]
fn irreducibility_agrees_with_exhaustive_trial_division() {
    for p in [2u64, 3, 5] {
        for deg in 1..=4 {
            for f in monic_polys(deg, p) {
                let has_factor = (1..=deg / 2)
                    .any(|d| monic_polys(d, p).any(|g| rem_mod_p(&f, &g, p).is_empty()));
                let fast = FpPoly::new(prime(p), f.clone()).is_irreducible().unwrap();
                assert_eq!(fast, !has_factor, "p = {p}, f = {f:?}");
            }
        }
    }
}

#[test]
fn cyclotomic_irreducible_iff_full_order() {
    for q in (3..40).filter(|&q| is_prime(q)) {
        for p in (2..60).filter(|&p| is_prime(p) && p != q) {
            let phi = cyclotomic_poly(q).unwrap().reduce_mod_p(prime(p)).unwrap();
            let full = multiplicative_order(p, q).unwrap() == q - 1;
            assert_eq!(phi.is_irreducible().unwrap(), full, "p = {p}, q = {q}");
        }
    }
}

// ---- builder ----

/// Characteristic polynomial of a square matrix, by evaluating
/// `det(xI - M)` at `n + 1` points and interpolating.
fn char_poly(m: &Matrix) -> RationalPoly {
    let n = m.len();
    let xs: Vec<Rational> = (0..=n as i64).map(rat).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let shifted: Matrix = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                x - &m[i][j]
                            } else {
                                -m[i][j].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            determinant(&shifted)
        })
        .collect();
    interpolate(&xs, &ys)
}

#[test]
fn composed_polynomial_matches_characteristic_polynomial() {
    for (q, g, a) in [
        (5u64, vec![-2i64, 0, 0, 1], vec![0i64, 1, 0, 0]),
        (3, vec![-2, 0, 1], vec![0, 1]),
        (3, vec![-3, 0, 1], vec![1, 2]),
        (5, vec![-6, 3, 1], vec![2, 0, 1, 0]),
    ] {
        let g = RationalPoly::from_ints(&g);
        let ring = TowerRing::new(cyclotomic_poly(q).unwrap(), g.clone());
        let (n, f) = (ring.dim(), q as usize - 1);
        let mut zeta = ring.unit(0, 1);
        for (i, &ai) in a.iter().enumerate() {
            zeta[ring.index(i, 0)] += rat(ai);
        }
        // column k of the multiplication matrix is ζ times the k-th monomial
        let columns: Vec<Vec<Rational>> = (0..n)
            .map(|k| ring.mul(&zeta, &ring.unit(k % f, k / f)))
            .collect();
        let m: Matrix = (0..n)
            .map(|r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        let h =
            minimal_poly_combination(&a.iter().map(|&x| rat(x)).collect::<Vec<_>>(), q).unwrap();
        assert_eq!(
            compose_minimal_poly(&g, &h).unwrap(),
            char_poly(&m),
            "q = {q}"
        );
    }
}

#[test]
fn small_composition_by_hand() {
    // ((X - ω)^2 - 2)((X - ω^2)^2 - 2)
    let g = RationalPoly::from_ints(&[-2, 0, 1]);
    let h = cyclotomic_poly(3).unwrap();
    assert_eq!(
        compose_minimal_poly(&g, &h).unwrap(),
        RationalPoly::from_ints(&[7, -2, -1, 2, 1])
    );
}

#[test]
fn builds_are_deterministic() {
    let a = sample_params(3, 5, 3, b"determinism").unwrap();
    let b = sample_params(3, 5, 3, b"determinism").unwrap();
    assert_eq!(a, b);
    let (ra, rb) = (build(&a).unwrap(), build(&b).unwrap());
    assert_eq!(ra.field, rb.field);
    assert_eq!(ra.theta, rb.theta);
    assert_eq!(ra.pi, rb.pi);
    assert_eq!(ra.certificate, rb.certificate);
}

#[test]
fn short_order_is_rejected_and_power_basis_fails() {
    // ord_7(2) = 3 and ord_13(3) = 3
    for (p, q) in [(2u64, 7u64), (3, 13), (2, 17)] {
        assert!(multiplicative_order(p, q).unwrap() < q - 1);
        assert!(validate_params(p, q, 3).is_err());
        assert!(!power_basis_orthogonality(&cyclotomic_poly(q).unwrap(), prime(p)).unwrap());
    }
}

#[test]
fn built_generators_have_expected_valuations() {
    let r = worked();
    assert_eq!(r.theta.valuation(), Valuation::int(0));
    assert_eq!(r.pi.valuation(), Valuation::frac(1, 3));
    let ram = r.field.ramification().unwrap();
    assert_eq!(ram.e * ram.f, r.field.degree());
}

// ---- field valuations ----

fn worked_element(coords: &[i64]) -> FieldElement {
    FieldElement::new(&worked().field, coords.iter().map(|&c| rat(c)).collect()).unwrap()
}

fn orthogonal_element(coords: &[(i64, u32)]) -> FieldElement {
    let c: Vec<Rational> = coords
        .iter()
        .map(|&(x, k)| Rational::new(x.into(), BigInt::from(2).pow(k)))
        .collect();
    worked().basis.from_orthogonal_coords(&c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_valuation_is_multiplicative(
        a in proptest::collection::vec(-9i64..9, 12),
        b in proptest::collection::vec(-9i64..9, 12),
    ) {
        let (x, y) = (worked_element(&a), worked_element(&b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        prop_assert_eq!((&x * &y).valuation(), x.valuation().add(&y.valuation()));
    }

    #[test]
    fn element_valuation_is_ultrametric(
        a in proptest::collection::vec((-9i64..9, 0u32..3), 12),
        b in proptest::collection::vec((-9i64..9, 0u32..3), 12),
    ) {
        let (x, y) = (orthogonal_element(&a), orthogonal_element(&b));
        let (vx, vy, vs) = (x.valuation(), y.valuation(), (&x + &y).valuation());
        prop_assert!(vs >= vx.clone().min(vy.clone()));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn coordinate_and_norm_valuations_agree(a in proptest::collection::vec((-20i64..20, 0u32..4), 12)) {
        let x = orthogonal_element(&a);
        prop_assert_eq!(worked().basis.coordinate_valuation(&x), x.valuation());
    }
}

// ---- lattices ----

fn lattice_combination(gens: &[FieldElement], xs: &[i64]) -> FieldElement {
    gens.iter()
        .zip(xs)
        .fold(FieldElement::zero(gens[0].field()), |acc, (g, &x)| {
            &acc + &g.scale(&rat(x))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_is_a_closest_vector(
        t in proptest::collection::vec((-9i64..9, 0u32..1), 12),
        w in proptest::collection::vec(-9i64..9, 8),
    ) {
        let r = worked();
        let s = LatticeIndexSet::mandatory(4, 3);
        let target = orthogonal_element(&t);
        let (_, best) = cvp_orthogonal(&target, &r.basis, &s).unwrap();
        let lattice_vector = lattice_combination(&s.alphas(&r.basis), &w);
        prop_assert!((&target - &lattice_vector).valuation() <= best);
    }

    #[test]
    fn membership_is_invariant_under_lattice_translation(
        v in proptest::collection::vec(-5i64..5, 12),
        w in proptest::collection::vec(-5i64..5, 9),
    ) {
        let (pk, _) = worked_keys();
        let lattice: &PadicLattice = pk.lattice();
        let v = worked_element(&v);
        let shifted = &v + &lattice_combination(pk.betas(), &w);
        prop_assert_eq!(lattice.contains(&shifted), lattice.contains(&v));
    }
}

#[test]
fn key_lattices_agree_and_betas_are_units() {
    let (pk, sk) = worked_keys();
    let alphas = PadicLattice::new(sk.index_set().alphas(sk.basis())).unwrap();
    assert!(pk
        .betas()
        .iter()
        .all(|b| b.valuation() == Valuation::int(0)));
    assert!(pk.betas().iter().all(|b| alphas.contains(b)));
    assert!(sk
        .index_set()
        .alphas(sk.basis())
        .iter()
        .all(|a| pk.lattice().contains(a)));
}

#[test]
fn hash_targets_sit_strictly_inside_the_unit_ball_after_projection() {
    let (pk, sk) = worked_keys();
    for k in 0u8..20 {
        let t = hash_to_w(b"distance", &[k; 32], pk).unwrap();
        let (_, d) = cvp_orthogonal(&t, sk.basis(), sk.index_set()).unwrap();
        assert!(d.finite().is_some(), "t outside L must leave a residual");
        assert!(d >= Valuation::frac(1, 3) && d > Valuation::int(0));
    }
}

#[test]
fn zero_and_identity_edge_cases() {
    let r = worked();
    let zero = FieldElement::zero(&r.field);
    assert_eq!(zero.valuation(), Valuation::Infinity);
    assert!(r
        .basis
        .to_orthogonal_coords(&zero)
        .iter()
        .all(Zero::is_zero));
    assert_eq!(FieldElement::one(&r.field).valuation(), Valuation::int(0));
    assert_eq!(FieldElement::one(&r.field).norm(), Rational::one());
    let field: &Arc<_> = &r.field;
    assert_eq!(
        FieldElement::scalar(field, rat(4)).valuation(),
        Valuation::int(2)
    );
}

#[test]
fn hash_residues_cover_the_residue_field() {
    let (pk, sk) = worked_keys();
    let p = pk.p();
    let mut seen = std::collections::BTreeSet::new();
    for k in 0u16..240 {
        let t = hash_to_w(b"residues", &k.to_le_bytes(), pk).unwrap();
        let c = sk.basis().to_orthogonal_coords(&t);
        let residue: Vec<u64> = (0..4)
            .map(|i| padic_ortho::padic::residue(&c[i], p).unwrap())
            .collect();
        assert!(residue.iter().any(|&d| d != 0), "hash targets are units");
        seen.insert(residue);
    }
    // all 15 nonzero classes of F_16 appear; a skewed sampler would hit few
    assert_eq!(seen.len(), 15);
}
