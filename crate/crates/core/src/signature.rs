//! Hash-and-sign over a p-adic lattice whose secret orthogonal basis turns
//! closest-vector search into coordinate projection.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha3::{Digest, Sha3_256};

use crate::builder::{build, ConstructionParams, ConstructionResult, OrthogonalBasis};
use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::hash::{self, DEFAULT_DIGITS, XOF_ID};
use crate::lattice::{
    cvp_orthogonal, mix_basis, sample_mixing_matrix, LatticeIndexSet, PadicLattice,
};
use crate::padic::{Prime, Valuation};

const RNG_DOMAIN: u8 = 0x03;

/// Deterministic generator keyed by `label || seed`.
pub fn seeded_rng(seed: &[u8], label: &[u8]) -> ChaCha20Rng {
    let mut h = Sha3_256::new();
    h.update([RNG_DOMAIN]);
    h.update((label.len() as u64).to_le_bytes());
    h.update(label);
    h.update(seed);
    ChaCha20Rng::from_seed(h.finalize().into())
}

#[derive(Debug, Clone)]
pub struct PublicKey {
    q: u64,
    e: usize,
    digits: usize,
    xof_id: String,
    lattice: PadicLattice,
}

impl PublicKey {
    /// Checks: known XOF, `n = (q-1) e`, `2f <= m < n`, unit generators
    /// independent over `Q`.
    pub fn new(
        q: u64,
        e: usize,
        digits: usize,
        xof_id: &str,
        betas: Vec<FieldElement>,
    ) -> Result<Self> {
        if xof_id != XOF_ID {
            return Err(Error::InvalidKey(format!("unsupported xof_id {xof_id:?}")));
        }
        if digits == 0 {
            return Err(Error::InvalidKey("N must be positive".into()));
        }
        let field = betas.first().ok_or(Error::EmptyFamily)?.field().clone();
        let n = field.degree();
        let f = q
            .checked_sub(1)
            .filter(|&f| f > 0)
            .ok_or_else(|| Error::InvalidKey(format!("q = {q}")))? as usize;
        if f * e != n {
            return Err(Error::InvalidKey(format!(
                "(q-1) e = {} but deg F = {n}",
                f * e
            )));
        }
        check_rank(betas.len(), f, n)?;
        if let Some(k) = betas
            .iter()
            .position(|b| b.valuation() != Valuation::int(0))
        {
            return Err(Error::InvalidKey(format!("beta {k} is not a unit")));
        }
        let lattice = PadicLattice::new(betas)?;
        Ok(PublicKey {
            q,
            e,
            digits,
            xof_id: xof_id.to_string(),
            lattice,
        })
    }

    pub fn p(&self) -> Prime {
        self.field().p()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.q as usize - 1
    }

    pub fn m(&self) -> usize {
        self.lattice.rank()
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn xof_id(&self) -> &str {
        &self.xof_id
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        self.lattice.field()
    }

    pub fn betas(&self) -> &[FieldElement] {
        self.lattice.generators()
    }

    pub fn lattice(&self) -> &PadicLattice {
        &self.lattice
    }
}

impl PartialEq for PublicKey {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
            && self.e == other.e
            && self.digits == other.digits
            && self.xof_id == other.xof_id
            && self.field() == other.field()
            && self.betas() == other.betas()
    }
}

#[derive(Debug, Clone)]
pub struct PrivateKey {
    theta: FieldElement,
    pi: FieldElement,
    basis: OrthogonalBasis,
    s: LatticeIndexSet,
    a: Vec<Vec<BigInt>>,
}

impl PrivateKey {
    /// Rebuilds the basis from `θ` and `π` and checks it against `pk`:
    /// `Φ_q(θ) = 0`, `v(θ) = 0`, `v(π) = 1/e`, and `A` applied to the basis
    /// points of `S` reproduces the public generators.
    pub fn from_parts(
        pk: &PublicKey,
        theta: FieldElement,
        pi: FieldElement,
        s: LatticeIndexSet,
        a: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        let (f, e) = (pk.f(), pk.e());
        if !theta.same_field(&pk.betas()[0]) || !pi.same_field(&theta) {
            return Err(Error::InvalidKey(
                "private key field differs from the public key".into(),
            ));
        }
        if (s.f(), s.e()) != (f, e) || s.len() != pk.m() {
            return Err(Error::InvalidKey(
                "index set does not match the public key".into(),
            ));
        }
        if !theta.eval_poly(&cyclotomic_poly(pk.q())?).is_zero() {
            return Err(Error::InvalidKey(
                "θ is not a root of unity of order q".into(),
            ));
        }
        if theta.valuation() != Valuation::int(0) || pi.valuation() != Valuation::frac(1, e as i64)
        {
            return Err(Error::InvalidKey("θ or π has the wrong valuation".into()));
        }
        let basis = OrthogonalBasis::from_generators(&theta, &pi, f, e)?;
        if mix_basis(&basis, &s, &a)? != pk.betas() {
            return Err(Error::InvalidKey(
                "A applied to the private basis does not give the public generators".into(),
            ));
        }
        Ok(PrivateKey {
            theta,
            pi,
            basis,
            s,
            a,
        })
    }

    pub fn theta(&self) -> &FieldElement {
        &self.theta
    }

    pub fn pi(&self) -> &FieldElement {
        &self.pi
    }

    pub fn basis(&self) -> &OrthogonalBasis {
        &self.basis
    }

    pub fn index_set(&self) -> &LatticeIndexSet {
        &self.s
    }

    pub fn mixing_matrix(&self) -> &[Vec<BigInt>] {
        &self.a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureValue {
    pub r: [u8; 32],
    pub v: FieldElement,
}

fn check_rank(m: usize, f: usize, n: usize) -> Result<()> {
    if m < 2 * f || m > n {
        return Err(Error::InvalidParams(vec![format!(
            "need 2f <= m <= n, got m = {m}, f = {f}, n = {n}"
        )]));
    }
    if m == n {
        return Err(Error::InvalidParams(vec![format!(
            "m = n = {n}: the lattice holds every unit, so no hash target exists"
        )]));
    }
    Ok(())
}

/// Keys from an already built field, a chosen index set and mixing matrix.
pub fn keys_from_construction(
    construction: &ConstructionResult,
    s: LatticeIndexSet,
    a: Vec<Vec<BigInt>>,
    digits: usize,
) -> Result<(PublicKey, PrivateKey)> {
    let params = &construction.params;
    let betas = mix_basis(&construction.basis, &s, &a)?;
    let pk = PublicKey::new(params.q, params.e, digits, XOF_ID, betas)?;
    let sk = PrivateKey {
        theta: construction.theta.clone(),
        pi: construction.pi.clone(),
        basis: construction.basis.clone(),
        s,
        a,
    };
    Ok((pk, sk))
}

/// Builds and certifies the field, takes grades 0 and 1 plus `m - 2f` further
/// grid points, and mixes with a sampled unimodular `A`. Deterministic in `seed`.
pub fn keygen(
    params: &ConstructionParams,
    m: usize,
    seed: &[u8],
) -> Result<(PublicKey, PrivateKey)> {
    check_rank(m, params.f(), params.n())?;
    let construction = build(params)?;
    keygen_from_construction(&construction, m, seed, DEFAULT_DIGITS)
}

pub fn keygen_from_construction(
    construction: &ConstructionResult,
    m: usize,
    seed: &[u8],
    digits: usize,
) -> Result<(PublicKey, PrivateKey)> {
    let params = &construction.params;
    let (f, e, n) = (params.f(), params.e, params.n());
    check_rank(m, f, n)?;
    let mut rng = seeded_rng(seed, b"keygen");
    let mut extra: Vec<(usize, usize)> = (2..e).flat_map(|j| (0..f).map(move |i| (i, j))).collect();
    extra.shuffle(&mut rng);
    let mut points = LatticeIndexSet::mandatory(f, e).points();
    points.extend(extra.into_iter().take(m - 2 * f));
    let s = LatticeIndexSet::new(f, e, points)?;
    let a = sample_mixing_matrix(&s, params.p, params.p.get(), &mut rng)?;
    keys_from_construction(construction, s, a, digits)
}

/// Default-shape construction parameters drawn deterministically from `seed`.
pub fn sample_params(p: u64, q: u64, e: usize, seed: &[u8]) -> Result<ConstructionParams> {
    ConstructionParams::sample(p, q, e, 1, false, &mut seeded_rng(seed, b"params"))
}

/// [`sample_params`] followed by [`keygen`].
pub fn keygen_sampled(
    p: u64,
    q: u64,
    e: usize,
    m: usize,
    seed: &[u8],
) -> Result<(PublicKey, PrivateKey)> {
    keygen(&sample_params(p, q, e, seed)?, m, seed)
}

pub fn hash_to_w(message: &[u8], r: &[u8], pk: &PublicKey) -> Result<FieldElement> {
    hash::hash_to_w(message, r, pk.lattice(), pk.digits())
}

/// Signs with a given `r`: `v` is the projection of `H(message || r)` onto the
/// secret sublattice.
pub fn sign_with_r(
    sk: &PrivateKey,
    pk: &PublicKey,
    message: &[u8],
    r: [u8; 32],
) -> Result<SignatureValue> {
    let t = hash_to_w(message, &r, pk)?;
    let (v, _) = cvp_orthogonal(&t, &sk.basis, &sk.s)?;
    let v = FieldElement::new(pk.field(), v.into_coords())?;
    Ok(SignatureValue { r, v })
}

pub fn sign<R: RngCore>(
    sk: &PrivateKey,
    pk: &PublicKey,
    message: &[u8],
    rng: &mut R,
) -> Result<SignatureValue> {
    let mut r = [0u8; 32];
    rng.fill_bytes(&mut r);
    sign_with_r(sk, pk, message, r)
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyOutcome {
    Valid { distance: Valuation },
    HashFailure(Error),
    Malformed(String),
    NotInLattice,
    TooFar { distance: Valuation },
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid { .. })
    }
}

/// Recomputes `t`, then checks `v ∈ L` and `v_p(t - v) > 0`.
pub fn verify_detailed(pk: &PublicKey, message: &[u8], sig: &SignatureValue) -> VerifyOutcome {
    let t = match hash_to_w(message, &sig.r, pk) {
        Ok(t) => t,
        Err(e) => return VerifyOutcome::HashFailure(e),
    };
    let diff = match t.try_sub(&sig.v) {
        Ok(d) => d,
        Err(e) => return VerifyOutcome::Malformed(e.to_string()),
    };
    if !pk.lattice().contains(&sig.v) {
        return VerifyOutcome::NotInLattice;
    }
    let distance = diff.valuation();
    if distance > Valuation::int(0) {
        VerifyOutcome::Valid { distance }
    } else {
        VerifyOutcome::TooFar { distance }
    }
}

pub fn verify(pk: &PublicKey, message: &[u8], sig: &SignatureValue) -> bool {
    verify_detailed(pk, message, sig).is_valid()
}
