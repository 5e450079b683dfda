//! Space-spec documents:
//!
//! ```json
//! { "factor1": {"family": "su", "n": 2},
//!   "factor2": {"family": "su", "n": 3},
//!   "subgroup": {"constructor": "su2xsu3_s1"},
//!   "z1": ["1/2", 1, 2] }
//! ```
//!
//! `subgroup` is either `{"constructor": id, ...params}` naming a built-in
//! embedding, or `{"basis": [[..], ..], "center_dim": m}` listing vectors of
//! `g₁⊕g₂`; in the explicit form the first `m` vectors span the center and
//! the rest must span a simple ideal.

use super::{builtin_embedding, s1_pq, Embedding};
use crate::error::{BrfError, Result};
use crate::liealg::{build_classical, build_g2, ClassicalFamily, LieAlgebra};
use crate::scalar::{parse_rational, Scalar, Q};
use serde_json::Value;

#[derive(Clone, Debug)]
pub struct SpaceSpec {
    pub embedding: Embedding<Q>,
    pub z1: Vec<Q>,
}

fn malformed(m: impl Into<String>) -> BrfError {
    BrfError::Malformed(m.into())
}

fn factor(v: &Value) -> Result<LieAlgebra<Q>> {
    let fam = v["family"].as_str().ok_or_else(|| malformed("factor needs a family"))?;
    if fam.eq_ignore_ascii_case("g2") {
        return build_g2();
    }
    let n = v["n"].as_u64().ok_or_else(|| malformed("factor needs n"))? as usize;
    build_classical(fam.parse::<ClassicalFamily>()?, n)
}

fn rational(v: &Value) -> Result<Q> {
    Q::from_json(v).or_else(|| v.as_str().and_then(parse_rational)).ok_or_else(|| malformed(format!("not a rational: {v}")))
}

pub fn parse_space_spec(doc: &Value) -> Result<SpaceSpec> {
    let sub = doc.get("subgroup").ok_or_else(|| malformed("missing subgroup"))?;
    let embedding = if let Some(name) = sub.get("constructor").and_then(|c| c.as_str()) {
        let emb = if name == "s1_pq" {
            let p = sub["p"].as_i64().ok_or_else(|| malformed("s1_pq needs p"))?;
            let q = sub["q"].as_i64().ok_or_else(|| malformed("s1_pq needs q"))?;
            s1_pq::<Q>(p, q)?
        } else {
            builtin_embedding::<Q>(name)?
        };
        for (key, g) in [("factor1", &emb.g1), ("factor2", &emb.g2)] {
            if let Some(f) = doc.get(key) {
                let d = factor(f)?.dim;
                if d != g.dim {
                    return Err(malformed(format!("{key} has dimension {d}, constructor expects {}", g.dim)));
                }
            }
        }
        emb
    } else if let Some(basis) = sub.get("basis").and_then(|b| b.as_array()) {
        let g1 = factor(doc.get("factor1").ok_or_else(|| malformed("missing factor1"))?)?;
        let g2 = factor(doc.get("factor2").ok_or_else(|| malformed("missing factor2"))?)?;
        let n = g1.dim + g2.dim;
        let vecs: Vec<Vec<Q>> = basis
            .iter()
            .map(|row| {
                let r = row.as_array().ok_or_else(|| malformed("basis rows must be arrays"))?;
                if r.len() != n {
                    return Err(malformed(format!("basis vector has length {}, expected {n}", r.len())));
                }
                r.iter().map(rational).collect()
            })
            .collect::<Result<_>>()?;
        if vecs.is_empty() {
            return Err(malformed("empty subgroup basis"));
        }
        let total = crate::liealg::direct_sum(&g1, &g2);
        let (k, _) = total
            .subalgebra("k", &vecs, 0.0)
            .map_err(|e| malformed(format!("subgroup basis: {e}")))?;
        let m = sub.get("center_dim").and_then(|c| c.as_u64()).unwrap_or(0) as usize;
        if m > vecs.len() {
            return Err(malformed("center_dim exceeds basis size"));
        }
        let im1 = vecs.iter().map(|v| v[..g1.dim].to_vec()).collect();
        let im2 = vecs.iter().map(|v| v[g1.dim..].to_vec()).collect();
        let simple = if m < vecs.len() { vec![m..vecs.len()] } else { vec![] };
        let name = doc.get("name").and_then(|s| s.as_str()).unwrap_or("custom").to_string();
        Embedding::new(name, g1, g2, k, im1, im2, 0..m, simple, 0.0)?
    } else {
        return Err(malformed("subgroup needs `constructor` or `basis`"));
    };
    let z1 = match doc.get("z1") {
        None => vec![Q::from_i64(1)],
        Some(Value::Array(a)) => a.iter().map(rational).collect::<Result<_>>()?,
        Some(v) => vec![rational(v)?],
    };
    if z1.iter().any(|z| !z.is_positive()) {
        return Err(BrfError::Parameter("z1 must be positive".into()));
    }
    Ok(SpaceSpec { embedding, z1 })
}
