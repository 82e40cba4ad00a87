//! Stable JSON wire forms for polynomials, operators, and certificates.
//!
//! Serialization goes through `serde_json::Value` with plain data shapes:
//! polynomials are arrays of `[degx, degy, "coeff"]` triples in graded
//! order, operators are arrays of `{i, j, coeff}` objects, and coefficients
//! travel as exact `"numer/denom"` strings. serde_json orders object keys
//! alphabetically, so equal values always serialize to equal bytes.
//!
//! Readers are strict about shape (wrong types and missing fields are
//! [`Error::Malformed`]) but lenient about content: duplicate monomials are
//! summed and zero coefficients are dropped, so a hand-edited certificate
//! still parses and is judged on replay, not on formatting.

use std::str::FromStr;

use serde_json::{json, Value};

use crate::eliminate::{EliminationResult, VIndex};
use crate::error::{Error, Result};
use crate::reduce::{GapCertificate, GapReport, ReducedForm};
use crate::verify::Report;
use crate::weyl::WeylOperator;
use crate::{Operator, Poly, Rational, System};

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Malformed(format!("missing field `{key}`")))
}

fn as_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| Error::Malformed(format!("{what} must be a small nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed(format!("{what} must be an array")))
}

fn as_rational(v: &Value, what: &str) -> Result<Rational> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::Malformed(format!("{what} must be a string")))?;
    Rational::from_str(s)
        .map_err(|e| Error::Malformed(format!("{what}: `{s}` is not a rational ({e})")))
}

/// `[[degx, degy, "coeff"], ...]` in graded order.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!([m.degx, m.degy, c.to_string()]))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    let mut out = Poly::zero();
    for entry in as_array(v, "polynomial")? {
        let triple = as_array(entry, "polynomial term")?;
        if triple.len() != 3 {
            return Err(Error::Malformed(
                "polynomial term must be [degx, degy, coeff]".into(),
            ));
        }
        let degx = as_u32(&triple[0], "degx")?;
        let degy = as_u32(&triple[1], "degy")?;
        let c = as_rational(&triple[2], "coefficient")?;
        out = &out + &Poly::monomial(degx, degy, c);
    }
    Ok(out)
}

/// `[{"coeff": poly, "i": i, "j": j}, ...]` ordered by total order, then j.
pub fn op_to_json(op: &Operator) -> Value {
    Value::Array(
        op.terms()
            .map(|(m, c)| json!({"i": m.i, "j": m.j, "coeff": poly_to_json(c)}))
            .collect(),
    )
}

pub fn op_from_json(v: &Value) -> Result<Operator> {
    let mut out = Operator::zero();
    for entry in as_array(v, "operator")? {
        let i = as_u32(field(entry, "i")?, "i")?;
        let j = as_u32(field(entry, "j")?, "j")?;
        let c = poly_from_json(field(entry, "coeff")?)?;
        out = &out + &WeylOperator::term(i, j, c);
    }
    Ok(out)
}

/// `{"A", "B", "L", "d", "m", "n"}`.
pub fn system_to_json(sys: &System) -> Value {
    json!({
        "A": op_to_json(sys.a()),
        "B": op_to_json(sys.b()),
        "L": poly_to_json(sys.l()),
        "m": sys.m(),
        "n": sys.n(),
        "d": sys.d(),
    })
}

/// `{"alpha", "beta", "k", "lPower", "remainder", "cofactorA", "cofactorB"}`.
pub fn reduced_to_json(rf: &ReducedForm<Rational>) -> Value {
    json!({
        "alpha": rf.alpha,
        "beta": rf.beta,
        "k": rf.k,
        "lPower": rf.l_power(),
        "remainder": op_to_json(&rf.remainder),
        "cofactorA": op_to_json(&rf.cofactor_a),
        "cofactorB": op_to_json(&rf.cofactor_b),
    })
}

/// Read a reduction certificate; `lPower` is derived, so only `k` counts.
pub fn reduced_from_json(v: &Value) -> Result<ReducedForm<Rational>> {
    Ok(ReducedForm {
        alpha: as_u32(field(v, "alpha")?, "alpha")?,
        beta: as_u32(field(v, "beta")?, "beta")?,
        k: as_u32(field(v, "k")?, "k")?,
        remainder: op_from_json(field(v, "remainder")?)?,
        cofactor_a: op_from_json(field(v, "cofactorA")?)?,
        cofactor_b: op_from_json(field(v, "cofactorB")?)?,
    })
}

/// `{"N", "S", "kernel": [{"gamma","alpha","beta","coeff"}], "cofactorA",
/// "cofactorB"}`.
pub fn elim_to_json(res: &EliminationResult) -> Value {
    json!({
        "N": res.level,
        "S": op_to_json(&res.s),
        "kernel": res
            .kernel
            .iter()
            .map(|(vi, c)| {
                json!({
                    "gamma": vi.gamma,
                    "alpha": vi.alpha,
                    "beta": vi.beta,
                    "coeff": c.to_string(),
                })
            })
            .collect::<Vec<_>>(),
        "cofactorA": op_to_json(&res.cofactor_a),
        "cofactorB": op_to_json(&res.cofactor_b),
    })
}

pub fn elim_from_json(v: &Value) -> Result<EliminationResult> {
    let mut kernel = Vec::new();
    for entry in as_array(field(v, "kernel")?, "kernel")? {
        let vi = VIndex {
            gamma: as_u32(field(entry, "gamma")?, "gamma")?,
            alpha: as_u32(field(entry, "alpha")?, "alpha")?,
            beta: as_u32(field(entry, "beta")?, "beta")?,
        };
        kernel.push((vi, as_rational(field(entry, "coeff")?, "kernel coefficient")?));
    }
    Ok(EliminationResult {
        level: as_u32(field(v, "N")?, "N")?,
        s: op_from_json(field(v, "S")?)?,
        kernel,
        cofactor_a: op_from_json(field(v, "cofactorA")?)?,
        cofactor_b: op_from_json(field(v, "cofactorB")?)?,
    })
}

fn gap_cert_to_json(cert: &GapCertificate<Rational>) -> Value {
    json!({
        "lPower": cert.l_power,
        "remainder": op_to_json(&cert.remainder),
        "cofactorA": op_to_json(&cert.cofactor_a),
    })
}

/// `{"m", "lY", "obstructionPresent", "singleL", "doubleL"}`.
pub fn gap_to_json(gap: &GapReport<Rational>) -> Value {
    json!({
        "m": gap.m,
        "lY": poly_to_json(&gap.l_y),
        "obstructionPresent": gap.obstruction_present,
        "singleL": gap_cert_to_json(&gap.single_l),
        "doubleL": gap_cert_to_json(&gap.double_l),
    })
}

/// `[{"check", "pass", "detail"}, ...]` in check order.
pub fn report_to_json(rep: &Report) -> Value {
    Value::Array(
        rep.lines
            .iter()
            .map(|l| json!({"check": l.name, "pass": l.pass, "detail": l.detail}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminate::{eliminate, Mode};
    use crate::reduce::{claim_gap_demo, reduce_full};
    use crate::verify::{sample_system, SampleSystem};

    fn geometric() -> System {
        sample_system(SampleSystem::Geometric)
    }

    #[test]
    fn poly_bytes_are_stable() {
        let sys = geometric();
        let v = poly_to_json(sys.l());
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"[[0,0,"1"],[1,0,"-1"],[0,1,"-1"]]"#
        );
        assert_eq!(poly_from_json(&v).unwrap(), *sys.l());
    }

    #[test]
    fn operator_bytes_are_stable() {
        let sys = geometric();
        let v = op_to_json(sys.a());
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"[{"coeff":[[0,0,"-1"]],"i":0,"j":0},{"coeff":[[0,0,"1"],[1,0,"-1"],[0,1,"-1"]],"i":1,"j":0}]"#
        );
        assert_eq!(op_from_json(&v).unwrap(), *sys.a());
    }

    #[test]
    fn fractional_coefficients_round_trip() {
        let p = Poly::monomial(2, 1, Rational::new(7.into(), 3.into()));
        let v = poly_to_json(&p);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[[2,1,"7/3"]]"#);
        assert_eq!(poly_from_json(&v).unwrap(), p);
    }

    #[test]
    fn duplicate_terms_are_summed_and_zeros_dropped() {
        let v: Value = serde_json::from_str(r#"[[0,0,"2"],[0,0,"-2"],[1,0,"0"]]"#).unwrap();
        assert!(poly_from_json(&v).unwrap().is_zero());
    }

    #[test]
    fn reduction_certificates_round_trip() {
        let sys = geometric();
        let rf = reduce_full(&sys, 2, 1);
        let v = reduced_to_json(&rf);
        assert_eq!(reduced_from_json(&v).unwrap(), rf);
        assert_eq!(v["lPower"], json!(rf.l_power()));
    }

    #[test]
    fn elimination_results_round_trip() {
        let sys = geometric();
        let res = eliminate(&sys, Mode::Search, None).unwrap();
        let v = elim_to_json(&res);
        assert_eq!(elim_from_json(&v).unwrap(), res);
        assert_eq!(v["N"], json!(1));
    }

    #[test]
    fn gap_reports_serialize_with_flag() {
        let sys = geometric();
        let v = gap_to_json(&claim_gap_demo(&sys));
        assert_eq!(v["obstructionPresent"], json!(true));
        assert_eq!(v["singleL"]["lPower"], json!(1));
        assert_eq!(v["doubleL"]["lPower"], json!(2));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for bad in [
            r#"{"alpha":1}"#,
            r#"[[0,0,1]]"#,
            r#"[[0,0,"1/0"]]"#,
            r#"[[0,"1"]]"#,
            r#"[{"i":0,"j":0}]"#,
        ] {
            let v: Value = serde_json::from_str(bad).unwrap();
            let poly = poly_from_json(&v);
            let op = op_from_json(&v);
            let rf = reduced_from_json(&v);
            assert!(
                poly.is_err() && op.is_err() && rf.is_err(),
                "accepted malformed input {bad}"
            );
        }
    }

    #[test]
    fn system_json_carries_the_shape() {
        let v = system_to_json(&geometric());
        assert_eq!(v["m"], json!(1));
        assert_eq!(v["n"], json!(1));
        assert_eq!(v["d"], json!(1));
    }
}
