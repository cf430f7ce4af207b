//! JSON encodings of keys and signatures.
//!
//! Rationals are strings in `"num/den"` form (denominator omitted when 1);
//! polynomials and field elements are coefficient lists, constant term first.
//! Objects are written with sorted keys.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, Ramification};
use crate::lattice::LatticeIndexSet;
use crate::padic::{format_rational, parse_rational, Prime, Rational};
use crate::poly::RationalPoly;
use crate::signature::{PrivateKey, PublicKey, SignatureValue};

pub const FORMAT_VERSION: u64 = 1;
pub const PRIVATE_KEY_WARNING: &str = "PRIVATE KEY: keep secret; anyone holding this file can sign";

pub fn rationals_to_json(xs: &[Rational]) -> Value {
    Value::Array(
        xs.iter()
            .map(|x| Value::String(format_rational(x)))
            .collect(),
    )
}

pub fn element_to_json(x: &FieldElement) -> Value {
    rationals_to_json(x.coords())
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Field lookups that report the JSON path on failure.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

fn err(path: &str, what: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {what}"))
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str) -> Result<Self> {
        let map = v
            .as_object()
            .ok_or_else(|| err(path, "expected an object"))?;
        Ok(Obj {
            map,
            path: path.to_string(),
        })
    }

    fn get(&self, key: &str) -> Result<&'a Value> {
        self.map
            .get(key)
            .ok_or_else(|| err(&self.path, format!("missing field `{key}`")))
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn u64(&self, key: &str) -> Result<u64> {
        self.get(key)?
            .as_u64()
            .ok_or_else(|| err(&self.path(key), "expected a nonnegative integer"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| err(&self.path(key), "expected a string"))
    }

    fn rationals(&self, key: &str) -> Result<Vec<Rational>> {
        parse_rationals(self.get(key)?, &self.path(key))
    }

    fn array(&self, key: &str) -> Result<&'a Vec<Value>> {
        self.get(key)?
            .as_array()
            .ok_or_else(|| err(&self.path(key), "expected an array"))
    }

    fn check_version(&self) -> Result<()> {
        match self.u64("version")? {
            FORMAT_VERSION => Ok(()),
            v => Err(err(
                &self.path("version"),
                format!("unsupported version {v}"),
            )),
        }
    }
}

pub fn parse_rationals(v: &Value, path: &str) -> Result<Vec<Rational>> {
    let items = v.as_array().ok_or_else(|| err(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let s = item
                .as_str()
                .ok_or_else(|| err(&format!("{path}[{k}]"), "expected a rational string"))?;
            parse_rational(s).map_err(|e| err(&format!("{path}[{k}]"), e))
        })
        .collect()
}

pub fn element_from_json(
    v: &Value,
    field: &Arc<FieldDescriptor>,
    path: &str,
) -> Result<FieldElement> {
    let coords = parse_rationals(v, path)?;
    FieldElement::new(field, coords).map_err(|e| err(path, e))
}

fn public_fields(pk: &PublicKey) -> Map<String, Value> {
    let value = json!({
        "version": FORMAT_VERSION,
        "p": pk.p().get(),
        "q": pk.q(),
        "e": pk.e(),
        "m": pk.m(),
        "N": pk.digits(),
        "xof_id": pk.xof_id(),
        "F": rationals_to_json(pk.field().modulus().coeffs()),
        "betas": pk.betas().iter().map(element_to_json).collect::<Vec<_>>(),
    });
    match value {
        Value::Object(map) => map,
        _ => unreachable!(),
    }
}

pub fn public_key_to_json(pk: &PublicKey) -> Value {
    Value::Object(public_fields(pk))
}

fn public_key_from_obj(obj: &Obj) -> Result<PublicKey> {
    obj.check_version()?;
    let p = Prime::new(obj.u64("p")?).map_err(|e| err(&obj.path("p"), e))?;
    let q = obj.u64("q")?;
    let e = obj.u64("e")? as usize;
    let m = obj.u64("m")? as usize;
    let digits = obj.u64("N")? as usize;
    let xof_id = obj.str("xof_id")?;
    let modulus = RationalPoly::new(obj.rationals("F")?);
    let f = (q as usize)
        .checked_sub(1)
        .ok_or_else(|| err(&obj.path("q"), "q must be at least 2"))?;
    let field = FieldDescriptor::new(p, modulus, Some(Ramification { e, f }))
        .map_err(|x| err(&obj.path("F"), x))?
        .into_arc();
    let betas_json = obj.array("betas")?;
    if betas_json.len() != m {
        return Err(err(
            &obj.path("betas"),
            format!("expected {m} generators, found {}", betas_json.len()),
        ));
    }
    let betas = betas_json
        .iter()
        .enumerate()
        .map(|(k, b)| element_from_json(b, &field, &format!("{}[{k}]", obj.path("betas"))))
        .collect::<Result<Vec<_>>>()?;
    PublicKey::new(q, e, digits, xof_id, betas)
}

pub fn public_key_from_str(text: &str) -> Result<PublicKey> {
    let v = parse_json(text)?;
    public_key_from_obj(&Obj::new(&v, "$")?)
}

pub fn private_key_to_json(pk: &PublicKey, sk: &PrivateKey) -> Value {
    let mut map = public_fields(pk);
    map.insert("warning".into(), Value::String(PRIVATE_KEY_WARNING.into()));
    map.insert("theta".into(), element_to_json(sk.theta()));
    map.insert("pi".into(), element_to_json(sk.pi()));
    map.insert(
        "S".into(),
        json!(sk
            .index_set()
            .points()
            .iter()
            .map(|&(i, j)| [i, j])
            .collect::<Vec<_>>()),
    );
    map.insert(
        "A".into(),
        json!(sk
            .mixing_matrix()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    Value::Object(map)
}

/// Parses a private key file; the public key fields it carries are returned too.
pub fn private_key_from_str(text: &str) -> Result<(PublicKey, PrivateKey)> {
    let v = parse_json(text)?;
    let obj = Obj::new(&v, "$")?;
    let pk = public_key_from_obj(&obj)?;
    let field = pk.field().clone();
    let theta = element_from_json(obj.get("theta")?, &field, &obj.path("theta"))?;
    let pi = element_from_json(obj.get("pi")?, &field, &obj.path("pi"))?;
    let points = obj
        .array("S")?
        .iter()
        .enumerate()
        .map(|(k, pt)| {
            let path = format!("{}[{k}]", obj.path("S"));
            match pt
                .as_array()
                .map(|a| a.iter().map(Value::as_u64).collect::<Vec<_>>())
                .as_deref()
            {
                Some([Some(i), Some(j)]) => Ok((*i as usize, *j as usize)),
                _ => Err(err(&path, "expected [i, j]")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let s = LatticeIndexSet::new(pk.f(), pk.e(), points).map_err(|e| err(&obj.path("S"), e))?;
    let a = obj
        .array("A")?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let path = format!("{}[{r}]", obj.path("A"));
            row.as_array()
                .ok_or_else(|| err(&path, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(c, x)| {
                    x.as_str()
                        .and_then(|s| s.parse::<BigInt>().ok())
                        .ok_or_else(|| err(&format!("{path}[{c}]"), "expected an integer string"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sk = PrivateKey::from_parts(&pk, theta, pi, s, a)?;
    Ok((pk, sk))
}

pub fn signature_to_json(sig: &SignatureValue) -> Value {
    json!({
        "version": FORMAT_VERSION,
        "r": hex::encode(sig.r),
        "v": element_to_json(&sig.v),
    })
}

/// Parses a signature whose `v` lives in the field of `pk`.
pub fn signature_from_str(text: &str, pk: &PublicKey) -> Result<SignatureValue> {
    let v = parse_json(text)?;
    let obj = Obj::new(&v, "$")?;
    obj.check_version()?;
    let r_bytes = hex::decode(obj.str("r")?).map_err(|e| err(&obj.path("r"), e))?;
    let r: [u8; 32] = r_bytes.try_into().map_err(|b: Vec<u8>| {
        err(
            &obj.path("r"),
            format!("expected 32 bytes, found {}", b.len()),
        )
    })?;
    let v = element_from_json(obj.get("v")?, pk.field(), &obj.path("v"))?;
    Ok(SignatureValue { r, v })
}
