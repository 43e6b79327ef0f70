//! JSON documents: operator specs, invariant reports and certificates.
//!
//! Operator nodes:
//!
//! ```json
//! {"type": "matrix", "entries": [["1", "-1/2"], [0, 3]]}
//! {"type": "forward_shift", "power": 2}
//! {"type": "backward_shift", "power": 1}
//! {"type": "zero_inf"}
//! {"type": "identity_inf"}
//! {"type": "direct_sum", "summands": [ ... ]}
//! {"type": "power", "base": { ... }, "exponent": 3}
//! {"type": "nilpotent_jordan", "size": 4}
//! ```
//!
//! Matrix entries are rational strings `"p"` or `"p/q"`; plain JSON integers
//! are accepted too. Errors carry a JSON path such as `$.summands[1].base`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::atoms::{AtomTree, StructuralKato};
use crate::error::{Error, Result};
use crate::invariants::InvariantReport;
use crate::kato::{KatoCertificate, PeelRecord};
use crate::qlinalg::{Rat, RatMatrix, RatSubspace, RatVector};

pub const CERTIFICATE_KIND: &str = "kato_certificate";
pub const STRUCTURAL_KIND: &str = "structural_report";

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn semantic_err(path: &str, message: impl Into<String>) -> Error {
    Error::Semantic {
        path: path.to_string(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err("$", e.to_string())
}

pub fn parse_operator(text: &str) -> Result<AtomTree> {
    let value: Value = serde_json::from_str(text).map_err(json_err)?;
    parse_operator_value(&value)
}

pub fn parse_operator_value(value: &Value) -> Result<AtomTree> {
    parse_node(value, "$")
}

pub fn emit_operator(tree: &AtomTree) -> String {
    serde_json::to_string_pretty(&tree.to_json()).expect("values always serialize")
}

fn expect_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| k.as_str() != "type" && !allowed.contains(&k.as_str())) {
        Some(k) => Err(parse_err(path, format!("unexpected field {k:?}"))),
        None => Ok(()),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(path, format!("missing field {key:?}")))
}

fn count(obj: &Map<String, Value>, path: &str, key: &str) -> Result<usize> {
    let sub = format!("{path}.{key}");
    let n = field(obj, path, key)?
        .as_u64()
        .ok_or_else(|| parse_err(&sub, "expected a non-negative integer"))?;
    let n = usize::try_from(n).map_err(|_| parse_err(&sub, "integer too large"))?;
    if n == 0 {
        return Err(semantic_err(&sub, "must be at least 1"));
    }
    Ok(n)
}

fn parse_entry(value: &Value, path: &str) -> Result<Rat> {
    match value {
        Value::String(s) => Rat::from_str(s).map_err(|e| parse_err(path, e.to_string())),
        Value::Number(n) => n.as_i64().map(Rat::from_int).ok_or_else(|| {
            parse_err(
                path,
                format!("{n} is not an integer; write fractions as \"p/q\" strings"),
            )
        }),
        _ => Err(parse_err(path, "expected a rational string or integer")),
    }
}

fn parse_rows(value: &Value, path: &str) -> Result<Vec<RatVector>> {
    let rows = value
        .as_array()
        .ok_or_else(|| parse_err(path, "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let rp = format!("{path}[{i}]");
            row.as_array()
                .ok_or_else(|| parse_err(&rp, "expected an array of entries"))?
                .iter()
                .enumerate()
                .map(|(j, x)| parse_entry(x, &format!("{rp}[{j}]")))
                .collect()
        })
        .collect()
}

fn parse_node(value: &Value, path: &str) -> Result<AtomTree> {
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err(path, "expected an object"))?;
    let kind = field(obj, path, "type")?
        .as_str()
        .ok_or_else(|| parse_err(&format!("{path}.type"), "expected a string"))?;
    match kind {
        "matrix" => {
            expect_keys(obj, path, &["entries"])?;
            let ep = format!("{path}.entries");
            let rows = parse_rows(field(obj, path, "entries")?, &ep)?;
            if rows.is_empty() {
                return Err(semantic_err(&ep, "matrix has no rows"));
            }
            let m = RatMatrix::from_rows(rows).map_err(|e| parse_err(&ep, e.to_string()))?;
            if !m.is_square() {
                return Err(semantic_err(&ep, format!("matrix is not square ({}x{})", m.rows(), m.cols())));
            }
            Ok(AtomTree::Finite(m))
        }
        "forward_shift" | "backward_shift" => {
            expect_keys(obj, path, &["power"])?;
            let k = count(obj, path, "power")?;
            Ok(if kind == "forward_shift" {
                AtomTree::ForwardShift(k)
            } else {
                AtomTree::BackwardShift(k)
            })
        }
        "zero_inf" => {
            expect_keys(obj, path, &[])?;
            Ok(AtomTree::ZeroInf)
        }
        "identity_inf" => {
            expect_keys(obj, path, &[])?;
            Ok(AtomTree::IdentityInf)
        }
        "direct_sum" => {
            expect_keys(obj, path, &["summands"])?;
            let sp = format!("{path}.summands");
            let items = field(obj, path, "summands")?
                .as_array()
                .ok_or_else(|| parse_err(&sp, "expected an array"))?;
            if items.is_empty() {
                return Err(semantic_err(&sp, "direct sum has no summands"));
            }
            let children = items
                .iter()
                .enumerate()
                .map(|(i, c)| parse_node(c, &format!("{sp}[{i}]")))
                .collect::<Result<_>>()?;
            Ok(AtomTree::DirectSum(children))
        }
        "power" => {
            expect_keys(obj, path, &["base", "exponent"])?;
            let base = parse_node(field(obj, path, "base")?, &format!("{path}.base"))?;
            let e = count(obj, path, "exponent")?;
            Ok(base.power(e))
        }
        "nilpotent_jordan" => {
            expect_keys(obj, path, &["size"])?;
            Ok(AtomTree::Finite(RatMatrix::jordan_block(count(obj, path, "size")?)))
        }
        other => Err(parse_err(
            &format!("{path}.type"),
            format!("unknown node type {other:?}"),
        )),
    }
}

/// A parsed operator, split by which engine handles it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    /// Finite-only trees, assembled into one block-diagonal matrix.
    Finite(RatMatrix),
    Symbolic(AtomTree),
}

impl Operator {
    pub fn from_tree(tree: AtomTree) -> Result<Operator> {
        tree.normalize()?;
        Ok(match tree.assemble_finite() {
            Some(m) => Operator::Finite(m),
            None => Operator::Symbolic(tree),
        })
    }

    pub fn parse(text: &str) -> Result<Operator> {
        Operator::from_tree(parse_operator(text)?)
    }

    pub fn model(&self) -> &'static str {
        match self {
            Operator::Finite(_) => "finite",
            Operator::Symbolic(_) => "symbolic",
        }
    }

    pub fn report(&self) -> Result<InvariantReport> {
        match self {
            Operator::Finite(m) => crate::invariants::analyze_matrix(m),
            Operator::Symbolic(t) => crate::atoms::symbolic_invariants(t),
        }
    }
}

/// Analysis output document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub model: String,
    pub report: InvariantReport,
}

pub fn emit_report(op: &Operator, report: &InvariantReport) -> String {
    let file = ReportFile {
        model: op.model().to_string(),
        report: report.clone(),
    };
    serde_json::to_string_pretty(&file).expect("reports always serialize")
}

pub fn parse_report(text: &str) -> Result<ReportFile> {
    serde_json::from_str(text).map_err(json_err)
}

/// On-disk certificate. Holds only the claim; the verifier recomputes
/// everything else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub kind: String,
    pub ambient_dim: usize,
    pub m_basis: Vec<RatVector>,
    pub n_basis: Vec<RatVector>,
    pub degree: usize,
    pub iterations: usize,
    pub trace: Vec<PeelRecord>,
}

impl From<&KatoCertificate> for CertificateFile {
    fn from(c: &KatoCertificate) -> Self {
        CertificateFile {
            kind: CERTIFICATE_KIND.to_string(),
            ambient_dim: c.ambient_dim,
            m_basis: c.m_basis.basis().to_vec(),
            n_basis: c.n_basis.basis().to_vec(),
            degree: c.degree,
            iterations: c.iterations,
            trace: c.trace.clone(),
        }
    }
}

fn subspace(n: usize, rows: Vec<RatVector>, path: &str) -> Result<RatSubspace> {
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(parse_err(
            &format!("{path}[{i}]"),
            format!("vector has length {}, ambient_dim is {n}", rows[i].len()),
        ));
    }
    RatSubspace::span(n, rows)
}

impl CertificateFile {
    /// Canonicalizes the bases (RREF) on the way in.
    pub fn into_certificate(self) -> Result<KatoCertificate> {
        if self.kind != CERTIFICATE_KIND {
            return Err(parse_err(
                "$.kind",
                format!("expected {CERTIFICATE_KIND:?}, found {:?}", self.kind),
            ));
        }
        let n = self.ambient_dim;
        Ok(KatoCertificate {
            ambient_dim: n,
            m_basis: subspace(n, self.m_basis, "$.m_basis")?,
            n_basis: subspace(n, self.n_basis, "$.n_basis")?,
            degree: self.degree,
            iterations: self.iterations,
            trace: self.trace,
        })
    }
}

pub fn emit_certificate(cert: &KatoCertificate) -> String {
    serde_json::to_string_pretty(&CertificateFile::from(cert)).expect("certificates serialize")
}

pub fn parse_certificate(text: &str) -> Result<KatoCertificate> {
    let value: Value = serde_json::from_str(text).map_err(json_err)?;
    if value.get("kind").and_then(Value::as_str) == Some(STRUCTURAL_KIND) {
        return Err(semantic_err(
            "$.kind",
            "structural reports for atom trees cannot be verified as certificates",
        ));
    }
    let file: CertificateFile = serde_json::from_value(value).map_err(json_err)?;
    file.into_certificate()
}

#[derive(Serialize)]
struct StructuralFile<'a> {
    kind: &'static str,
    note: &'static str,
    #[serde(flatten)]
    body: &'a StructuralKato,
}

/// Decomposition summary for a symbolic operator, labeled as such.
pub fn emit_structural(k: &StructuralKato) -> String {
    let file = StructuralFile {
        kind: STRUCTURAL_KIND,
        note: "structural split of an atom tree; not a verifiable matrix certificate",
        body: k,
    };
    serde_json::to_string_pretty(&file).expect("structural reports serialize")
}
