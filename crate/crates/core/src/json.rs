//! Wire formats. Matrices serialize as arrays of columns of scalar-grammar
//! strings with an explicit "dim" field (the ambient row count); flags carry
//! their steps with coefficient columns as rational strings; slope vectors
//! and shapes mirror their fields. All emitters go through
//! `serde_json::Value`, whose object maps iterate in sorted key order, so
//! output bytes are stable.

use serde_json::{json, Map, Value};

use crate::bilattice::{BilatticedSpace, GroupShape};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::Flag;
use crate::kmat::{KMat, Subspace};
use crate::lattice::{CocharType, LatticeBasis};
use crate::matrix::Mat;
use crate::polygon::{rational_to_string, Polygon, Rational, SlopeVector};
use crate::scalar::LaurentScalar;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn matrix_to_value<F: Field>(m: &Mat<F>) -> Value {
    let cols: Vec<Value> = (0..m.cols())
        .map(|j| {
            Value::Array(
                (0..m.rows())
                    .map(|i| Value::String(m.get(i, j).to_string()))
                    .collect(),
            )
        })
        .collect();
    json!({ "dim": m.rows(), "cols": cols })
}

pub fn matrix_from_value<F: Field>(ctx: F::Ctx, v: &Value) -> Result<Mat<F>> {
    let obj = v.as_object().ok_or_else(|| bad("matrix must be an object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("matrix needs an integer \"dim\""))? as usize;
    let cols = obj
        .get("cols")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("matrix needs a \"cols\" array"))?;
    let mut parsed = Vec::with_capacity(cols.len());
    for col in cols {
        let col = col.as_array().ok_or_else(|| bad("column must be an array"))?;
        let mut entries = Vec::with_capacity(col.len());
        for e in col {
            let s = e.as_str().ok_or_else(|| bad("entry must be a string"))?;
            entries.push(LaurentScalar::parse(ctx, s)?);
        }
        parsed.push(entries);
    }
    Mat::from_cols(ctx, dim, parsed)
}

pub fn lattice_to_value<F: Field>(l: &LatticeBasis<F>) -> Value {
    matrix_to_value(l.basis_matrix())
}

pub fn lattice_from_value<F: Field>(ctx: F::Ctx, v: &Value) -> Result<LatticeBasis<F>> {
    LatticeBasis::new(matrix_from_value(ctx, v)?)
}

/// A bilatticed pair: {"dim": n, "l1": [cols], "l2": [cols]}.
pub fn pair_to_value<F: Field>(bs: &BilatticedSpace<F>) -> Value {
    let l1 = matrix_to_value(bs.first().basis_matrix());
    let l2 = matrix_to_value(bs.second().basis_matrix());
    json!({
        "dim": bs.dim(),
        "l1": l1.get("cols").cloned().unwrap_or(Value::Null),
        "l2": l2.get("cols").cloned().unwrap_or(Value::Null),
    })
}

pub fn pair_from_value<F: Field>(ctx: F::Ctx, v: &Value) -> Result<BilatticedSpace<F>> {
    let obj = v.as_object().ok_or_else(|| bad("pair must be an object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("pair needs an integer \"dim\""))?;
    let grab = |key: &str| -> Result<Value> {
        Ok(json!({
            "dim": dim,
            "cols": obj.get(key).cloned().ok_or_else(|| bad(format!("pair needs \"{key}\"")))?
        }))
    };
    let l1 = lattice_from_value(ctx, &grab("l1")?)?;
    let l2 = lattice_from_value(ctx, &grab("l2")?)?;
    BilatticedSpace::new(l1, l2)
}

pub fn kmat_to_cols<F: Field>(m: &KMat<F>) -> Value {
    Value::Array(
        (0..m.cols())
            .map(|j| {
                Value::Array(
                    (0..m.rows())
                        .map(|i| Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn kmat_from_cols<F: Field>(ctx: F::Ctx, rows: usize, v: &Value) -> Result<KMat<F>> {
    let cols = v.as_array().ok_or_else(|| bad("basis must be an array"))?;
    let mut parsed = Vec::with_capacity(cols.len());
    for col in cols {
        let col = col.as_array().ok_or_else(|| bad("basis column must be an array"))?;
        let mut entries = Vec::with_capacity(col.len());
        for e in col {
            let s = e.as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            entries.push(F::parse(ctx, s)?);
        }
        parsed.push(entries);
    }
    KMat::from_cols(ctx, rows, parsed)
}

pub fn flag_to_value<F: Field>(f: &Flag<F>) -> Value {
    let steps: Vec<Value> = f
        .steps()
        .iter()
        .map(|(j, w)| json!({ "jump": j, "basis": kmat_to_cols(w.basis()) }))
        .collect();
    json!({ "dim": f.ambient_dim(), "steps": steps })
}

pub fn flag_from_value<F: Field>(ctx: F::Ctx, v: &Value) -> Result<Flag<F>> {
    let obj = v.as_object().ok_or_else(|| bad("flag must be an object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("flag needs an integer \"dim\""))? as usize;
    let steps_v = obj
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("flag needs a \"steps\" array"))?;
    let mut steps = Vec::with_capacity(steps_v.len());
    for s in steps_v {
        let jump = s
            .get("jump")
            .and_then(Value::as_i64)
            .ok_or_else(|| bad("step needs an integer \"jump\""))?;
        let basis = s
            .get("basis")
            .ok_or_else(|| bad("step needs a \"basis\""))?;
        let kmat = kmat_from_cols(ctx, dim, basis)?;
        steps.push((jump, Subspace::from_span(&kmat)));
    }
    Flag::new(dim, steps)
}

pub fn cochar_to_value(mu: &CocharType) -> Value {
    Value::Array(
        mu.entries()
            .iter()
            .map(|&v| Value::Number(v.into()))
            .collect(),
    )
}

pub fn cochar_from_value(v: &Value) -> Result<CocharType> {
    let arr = v.as_array().ok_or_else(|| bad("type must be an array"))?;
    let mut entries = Vec::with_capacity(arr.len());
    for e in arr {
        entries.push(
            e.as_i64()
                .ok_or_else(|| bad("type entries must be integers"))?,
        );
    }
    CocharType::from_sorted(entries)
}

pub fn slopes_to_value(nu: &SlopeVector) -> Value {
    json!({
        "slopes": nu
            .entries()
            .iter()
            .map(|r| Value::String(rational_to_string(r)))
            .collect::<Vec<_>>()
    })
}

pub fn slopes_from_value(v: &Value) -> Result<SlopeVector> {
    let arr = match v {
        Value::Object(obj) => obj
            .get("slopes")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("slope object needs a \"slopes\" array"))?,
        Value::Array(a) => a,
        _ => return Err(bad("slopes must be an array or {\"slopes\": [...]} object")),
    };
    let mut entries = Vec::with_capacity(arr.len());
    for e in arr {
        let s = e.as_str().ok_or_else(|| bad("slopes must be strings"))?;
        entries.push(crate::field::parse_big_rational(s)?);
    }
    SlopeVector::new(entries)
}

pub fn shape_to_value(shape: &GroupShape) -> Value {
    json!({ "blocks": shape.blocks })
}

pub fn shape_from_value(v: &Value) -> Result<GroupShape> {
    let arr = match v {
        Value::Object(obj) => obj
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("shape object needs a \"blocks\" array"))?,
        Value::Array(a) => a,
        _ => return Err(bad("shape must be an array or {\"blocks\": [...]} object")),
    };
    let mut blocks = Vec::with_capacity(arr.len());
    for e in arr {
        blocks.push(
            e.as_u64()
                .ok_or_else(|| bad("block sizes must be positive integers"))? as usize,
        );
    }
    GroupShape::new(blocks)
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(rational_to_string(r))
}

pub fn polygon_to_value(p: &Polygon) -> Value {
    json!({
        "vertices": p
            .vertices()
            .iter()
            .map(|(x, y)| Value::Array(vec![rational_value(x), rational_value(y)]))
            .collect::<Vec<_>>()
    })
}

/// Canonical compact rendering with sorted keys.
pub fn to_canonical_string(v: &Value) -> String {
    sort_value(v).to_string()
}

fn sort_value(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut sorted = Map::new();
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                sorted.insert(k.clone(), sort_value(&map[k]));
            }
            Value::Object(sorted)
        }
        Value::Array(items) => Value::Array(items.iter().map(sort_value).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    #[test]
    fn matrix_round_trip() {
        let v = json!({
            "dim": 2,
            "cols": [["1", "0"], ["t^-1", "1"]]
        });
        let m = matrix_from_value::<Rat>((), &v).unwrap();
        let back = matrix_to_value(&m);
        let m2 = matrix_from_value::<Rat>((), &back).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn pair_and_flag_round_trip() {
        let v = json!({
            "dim": 2,
            "l1": [["1", "0"], ["0", "1"]],
            "l2": [["1", "0"], ["t^-1", "1"]]
        });
        let pair = pair_from_value::<Rat>((), &v).unwrap();
        assert_eq!(pair.bl_type().unwrap().entries(), &[1, -1]);
        let back = pair_to_value(&pair);
        let pair2 = pair_from_value::<Rat>((), &back).unwrap();
        assert_eq!(pair2.bl_type().unwrap().entries(), &[1, -1]);

        let flag = pair.bb_side(2).unwrap();
        let fv = flag_to_value(&flag);
        let flag2 = flag_from_value::<Rat>((), &fv).unwrap();
        assert_eq!(flag, flag2);
    }

    #[test]
    fn sorted_keys_are_stable() {
        let v = json!({"zeta": 1, "alpha": {"b": 2, "a": 1}});
        assert_eq!(
            to_canonical_string(&v),
            "{\"alpha\":{\"a\":1,\"b\":2},\"zeta\":1}"
        );
    }
}
