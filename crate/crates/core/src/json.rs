//! Stable JSON encodings. Rationals are strings `"p/q"` (or `"p"` when the
//! denominator is 1) with unbounded integers; tensor and pencil round trips
//! are bit-exact.

use crate::classify::{ClassificationReport, EigenSplitWitness, Verdict, Witness};
use crate::error::Error;
use crate::form::BinaryForm;
use crate::matrix::{QMatrix, QVector};
use crate::pencil::{Block, KroneckerInvariants, NormalForm, Pencil};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::tensor::{ConcisionResult, MultilinearRank, Tensor};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Serialize, Deserialize)]
struct TensorDto {
    shape: Vec<usize>,
    entries: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PencilDto {
    rows: usize,
    cols: usize,
    #[serde(rename = "A0")]
    a0: Vec<String>,
    #[serde(rename = "A1")]
    a1: Vec<String>,
}

fn rationals_to_strings(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(format_rational).collect()
}

fn strings_to_rationals(ss: &[String]) -> Result<Vec<Rational>, String> {
    ss.iter().map(|s| parse_rational(s)).collect()
}

pub fn tensor_to_json(t: &Tensor) -> Value {
    json!({
        "shape": t.shape(),
        "entries": rationals_to_strings(t.entries()),
    })
}

pub fn tensor_from_json(text: &str) -> Result<Tensor, String> {
    let dto: TensorDto = serde_json::from_str(text).map_err(|e| format!("invalid tensor JSON: {e}"))?;
    let entries = strings_to_rationals(&dto.entries)?;
    Tensor::new(dto.shape, entries).map_err(|e| e.to_string())
}

pub fn pencil_to_json(p: &Pencil) -> Value {
    json!({
        "rows": p.rows(),
        "cols": p.cols(),
        "A0": rationals_to_strings(p.a0.entries()),
        "A1": rationals_to_strings(p.a1.entries()),
    })
}

pub fn pencil_from_json(text: &str) -> Result<Pencil, String> {
    let dto: PencilDto = serde_json::from_str(text).map_err(|e| format!("invalid pencil JSON: {e}"))?;
    let expect = dto.rows * dto.cols;
    if dto.a0.len() != expect || dto.a1.len() != expect {
        return Err(format!(
            "pencil slices must each have rows*cols = {} entries, got {} and {}",
            expect,
            dto.a0.len(),
            dto.a1.len()
        ));
    }
    let a0 = QMatrix::new(dto.rows, dto.cols, strings_to_rationals(&dto.a0)?);
    let a1 = QMatrix::new(dto.rows, dto.cols, strings_to_rationals(&dto.a1)?);
    Pencil::new(a0, a1).map_err(|e| e.to_string())
}

fn matrix_to_json(m: &QMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": rationals_to_strings(m.entries()),
    })
}

fn vector_to_json(v: &QVector) -> Value {
    Value::Array(v.iter().map(|r| Value::String(format_rational(r))).collect())
}

fn form_to_json(f: &BinaryForm) -> Value {
    json!({
        "coeffs": rationals_to_strings(f.coeffs()),
        "display": f.to_string(),
    })
}

pub fn invariants_to_json(inv: &KroneckerInvariants) -> Value {
    json!({
        "col_indices": inv.col_indices,
        "row_indices": inv.row_indices,
        "divisors": inv.divisors.iter().map(|(base, e)| json!({
            "base": form_to_json(base),
            "exponent": e,
            "infinite": *base == BinaryForm::y(),
        })).collect::<Vec<_>>(),
        "regular_size": inv.regular_size,
        "pencil_rank": inv.pencil_rank,
    })
}

fn block_to_json(b: &Block) -> Value {
    match b {
        Block::Zero { rows, cols } => json!({"type": "zero", "rows": rows, "cols": cols}),
        Block::ColIndex(eps) => json!({"type": "col_index", "index": eps}),
        Block::RowIndex(eta) => json!({"type": "row_index", "index": eta}),
        Block::Infinite(u) => json!({"type": "infinite", "exponent": u}),
        Block::Finite { base, exponent } => {
            json!({"type": "finite", "base": form_to_json(base), "exponent": exponent})
        }
    }
}

pub fn normal_form_to_json(nf: &NormalForm) -> Value {
    json!({
        "invariants": invariants_to_json(&nf.invariants),
        "blocks": nf.blocks.iter().map(block_to_json).collect::<Vec<_>>(),
        "pencil": pencil_to_json(&nf.pencil),
    })
}

pub fn multilinear_rank_to_json(mr: &MultilinearRank) -> Value {
    json!({ "ranks": mr.0 })
}

pub fn concision_to_json(c: &ConcisionResult) -> Value {
    json!({
        "core": tensor_to_json(&c.core),
        "injections": c.injections.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "dropped_factors": c.dropped_factors,
        "factor_map": c.factor_map,
    })
}

fn eigen_witness_to_json(w: &EigenSplitWitness) -> Value {
    json!({
        "type": "eigen_split",
        "pair": [w.pair.0, w.pair.1],
        "x": vector_to_json(&w.x),
        "y": vector_to_json(&w.y),
        "x_full": vector_to_json(&w.x_full),
        "y_full": vector_to_json(&w.y_full),
        "rank_x": w.rank_x,
        "rank_y": w.rank_y,
        "x_matrix": matrix_to_json(&w.x_matrix),
        "y_matrix": matrix_to_json(&w.y_matrix),
    })
}

fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::PencilInvariants(inv) => json!({
            "type": "pencil_invariants",
            "invariants": invariants_to_json(inv),
        }),
        Witness::Hyperdeterminant(h) => json!({
            "type": "hyperdeterminant",
            "value": format_rational(h),
        }),
        Witness::EigenSplit(e) => eigen_witness_to_json(e),
    }
}

pub fn report_to_json(r: &ClassificationReport) -> Value {
    let (verdict, reason) = match &r.verdict {
        Verdict::Family(f) => (f.letter().to_string(), Value::Null),
        Verdict::NotOnList(reason) => ("not_on_list".to_string(), Value::String(reason.code().into())),
    };
    json!({
        "verdict": verdict,
        "reason": reason,
        "input_shape": r.input_shape,
        "multilinear_rank": r.multilinear_rank,
        "concise_shape": r.concise_shape,
        "factor_map": r.factor_map,
        "rank": r.rank,
        "witness": r.witness.as_ref().map(witness_to_json).unwrap_or(Value::Null),
    })
}

/// Formats a crate error the way the CLI reports bad input.
pub fn error_to_json(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::rational::{rat, ratio};

    #[test]
    fn tensor_round_trip_is_bit_exact() {
        let t = Tensor::new(
            vec![2, 3],
            vec![rat(1), ratio(-7, 3), rat(0), ratio(22, 7), rat(5), ratio(1, 9)],
        )
        .unwrap();
        let text = tensor_to_json(&t).to_string();
        let back = tensor_from_json(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tensor_json_rejects_bad_input() {
        assert!(tensor_from_json("{\"shape\":[2,2],\"entries\":[\"1\"]}").is_err());
        assert!(tensor_from_json("{\"shape\":[2],\"entries\":[\"1\",\"x\"]}").is_err());
        assert!(tensor_from_json("not json").is_err());
    }

    #[test]
    fn pencil_round_trip() {
        let p = Pencil::new(
            QMatrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]),
            QMatrix::from_rows(vec![vec![ratio(1, 2), rat(3)], vec![rat(0), rat(-2)]]),
        )
        .unwrap();
        let text = pencil_to_json(&p).to_string();
        let back = pencil_from_json(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn report_json_has_stable_fields() {
        let t = Tensor::rank1(&[vec![rat(1), rat(0)], vec![rat(1), rat(0)], vec![rat(1), rat(0)]]);
        let v = report_to_json(&classify(&t));
        assert_eq!(v["verdict"], "not_on_list");
        assert_eq!(v["reason"], "rank_one");
        assert_eq!(v["multilinear_rank"][0], 1);
        assert!(v["witness"].is_null());
    }
}
