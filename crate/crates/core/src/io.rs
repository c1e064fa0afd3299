//! JSON documents for maps and reports.
//!
//! Fields are written as `"GF(p)"` or `"GF(p^k)"`; `"GF(q)"` is also accepted
//! on input. Vectors and matrix rows are arrays of element encodings.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commutation::{GlMappingReport, PglMappingReport, SearchReport, StrongEmbeddingVerdict};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldHom};
use crate::linalg::{Matrix, VectorSpace};
use crate::maps::{MappingTable, PointMap};
use crate::projective::ProjectiveSpace;
use crate::reconstruct::ReconstructFailure;
use crate::semilinear::SemilinearMap;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingTableDoc {
    domain_field: String,
    domain_dim: usize,
    codomain_field: String,
    codomain_dim: usize,
    table: Vec<Vec<u8>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointMapDoc {
    domain_field: String,
    domain_dim: usize,
    codomain_field: String,
    codomain_dim: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldHomDoc {
    source: String,
    target: String,
    generator_image: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SemilinearDoc {
    sigma: FieldHomDoc,
    matrix: Vec<Vec<u8>>,
}

fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("{what}: line {}, column {}: {e}", e.line(), e.column())))
}

fn field(spec: &str, key: &str) -> Result<Field> {
    spec.parse().map_err(|e: Error| Error::Parse(format!("{key}: {e}")))
}

fn with_context<T>(r: Result<T>, key: &str) -> Result<T> {
    r.map_err(|e| Error::Parse(format!("{key}: {e}")))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>())
}

pub fn mapping_table_to_json(g: &MappingTable) -> Value {
    serde_json::to_value(MappingTableDoc {
        domain_field: g.domain().field().to_string(),
        domain_dim: g.domain().dim(),
        codomain_field: g.codomain().field().to_string(),
        codomain_dim: g.codomain().dim(),
        table: g.images().map(<[u8]>::to_vec).collect(),
    })
    .expect("plain data serializes")
}

pub fn mapping_table_from_str(text: &str) -> Result<MappingTable> {
    let doc: MappingTableDoc = parse_doc(text, "mapping table")?;
    let domain = VectorSpace::new(&field(&doc.domain_field, "domain_field")?, doc.domain_dim);
    let codomain = VectorSpace::new(&field(&doc.codomain_field, "codomain_field")?, doc.codomain_dim);
    if let Some((i, row)) = doc.table.iter().enumerate().find(|(_, r)| r.len() != doc.codomain_dim) {
        return Err(Error::Parse(format!(
            "table[{i}]: expected {} coordinates, found {}",
            doc.codomain_dim,
            row.len()
        )));
    }
    with_context(MappingTable::from_raw(&domain, &codomain, doc.table.concat()), "table")
}

pub fn point_map_to_json(f: &PointMap) -> Value {
    serde_json::to_value(PointMapDoc {
        domain_field: f.domain().field().to_string(),
        domain_dim: f.domain().dim(),
        codomain_field: f.codomain().field().to_string(),
        codomain_dim: f.codomain().dim(),
        table: f.table().to_vec(),
    })
    .expect("plain data serializes")
}

pub fn point_map_from_str(text: &str) -> Result<PointMap> {
    let doc: PointMapDoc = parse_doc(text, "point map")?;
    let domain = ProjectiveSpace::new(&field(&doc.domain_field, "domain_field")?, doc.domain_dim);
    let codomain = ProjectiveSpace::new(&field(&doc.codomain_field, "codomain_field")?, doc.codomain_dim);
    with_context(PointMap::new(&domain, &codomain, doc.table), "table")
}

pub fn field_hom_to_json(sigma: &FieldHom) -> Value {
    json!({
        "source": sigma.source().to_string(),
        "target": sigma.target().to_string(),
        "generator_image": sigma.generator_image(),
    })
}

pub fn semilinear_to_json(l: &SemilinearMap) -> Value {
    json!({ "sigma": field_hom_to_json(l.sigma()), "matrix": matrix_to_json(l.matrix()) })
}

pub fn semilinear_from_str(text: &str) -> Result<SemilinearMap> {
    let doc: SemilinearDoc = parse_doc(text, "semilinear map")?;
    let source = field(&doc.sigma.source, "sigma.source")?;
    let target = field(&doc.sigma.target, "sigma.target")?;
    let sigma = with_context(FieldHom::new(&source, &target, doc.sigma.generator_image), "sigma")?;
    let matrix = with_context(Matrix::from_rows(&target, &doc.matrix), "matrix")?;
    with_context(SemilinearMap::new(sigma, matrix), "matrix")
}

fn verdict_to_json(v: &StrongEmbeddingVerdict) -> Value {
    json!({
        "holds": v.holds,
        "method": v.method,
        "scalar": v.scalar.as_ref().map(|a| a.value()),
        "map": v.map.as_ref().map(semilinear_to_json),
        "failure": v.failure,
    })
}

pub fn gl_report_to_json(r: &GlMappingReport) -> Value {
    json!({
        "is_gl_mapping": r.is_gl_mapping,
        "trivial": r.trivial,
        "dim_vg": r.dim_vg,
        "domain_dim": r.domain_dim,
        "mode": r.mode.as_str(),
        "group_elements_checked": r.checked,
        "witness_failure": r.witness_failure.as_ref().map(matrix_to_json),
        "strong_embedding": r.strong_embedding.as_ref().map(verdict_to_json),
    })
}

pub fn reconstruction_to_json(r: &std::result::Result<SemilinearMap, ReconstructFailure>) -> Value {
    match r {
        Ok(l) => json!({
            "sigma": field_hom_to_json(l.sigma()),
            "matrix": matrix_to_json(l.matrix()),
            "certificate": "ok",
        }),
        Err(e) => json!({
            "sigma": null,
            "matrix": null,
            "certificate": serde_json::to_value(e).expect("plain data serializes"),
        }),
    }
}

pub fn pgl_report_to_json(r: &PglMappingReport) -> Value {
    json!({
        "is_pgl_mapping": r.is_pgl_mapping,
        "constant": r.constant,
        "dim_vf": r.dim_vf,
        "domain_dim": r.domain_dim,
        "mode": r.mode.as_str(),
        "group_elements_checked": r.checked,
        "witness_failure": r.witness_failure.as_ref().map(matrix_to_json),
        "induced_by_embedding": r.induced.as_ref().map(reconstruction_to_json),
    })
}

pub fn search_report_to_json(r: &SearchReport) -> Value {
    json!({
        "domain": r.domain.to_string(),
        "codomain": r.codomain.to_string(),
        "mode": if r.sampled { "sampled" } else { "exhaustive" },
        "seed": r.seed,
        "tables_examined": r.tables_examined,
        "trivial_gl": r.trivial_gl,
        "nontrivial_gl_dim_le_n": r.nontrivial_gl_dim_le_n,
        "strong_embeddings": r.strong_embeddings,
        "all_strong": r.strong_embeddings == r.nontrivial_gl_dim_le_n,
        "exploratory": r.exploratory(),
        "found_table_indices": r.found,
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_mapping(path: &Path) -> Result<MappingTable> {
    mapping_table_from_str(&read_text(path)?).map_err(|e| prefix(path, e))
}

pub fn load_point_map(path: &Path) -> Result<PointMap> {
    point_map_from_str(&read_text(path)?).map_err(|e| prefix(path, e))
}

pub fn load_semilinear(path: &Path) -> Result<SemilinearMap> {
    semilinear_from_str(&read_text(path)?).map_err(|e| prefix(path, e))
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn save_json(path: &Path, value: &Value) -> Result<()> {
    std::fs::write(path, to_pretty(value)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_field_is_a_parse_error() {
        let text =
            r#"{"domain_field":"GF(6)","domain_dim":1,"codomain_field":"GF(2)","codomain_dim":1,"table":[[0],[1]]}"#;
        let err = mapping_table_from_str(text).unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.starts_with("domain_field")), "{err:?}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = mapping_table_from_str("{\n  \"domain_field\": ,\n}").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("line 2")), "{err:?}");
    }

    #[test]
    fn semilinear_round_trip() {
        let f4 = Field::new(2, 2).unwrap();
        let m = Matrix::from_rows(&f4, &[vec![1, 2], vec![3, 0]]).unwrap();
        let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), m).unwrap();
        let text = to_pretty(&semilinear_to_json(&l));
        assert_eq!(semilinear_from_str(&text).unwrap(), l);
    }

    #[test]
    fn field_order_spelling_is_accepted() {
        let text = r#"{"domain_field":"GF(4)","domain_dim":1,"codomain_field":"GF(2^2)","codomain_dim":1,"table":[[0],[1],[2],[3]]}"#;
        let g = mapping_table_from_str(text).unwrap();
        assert_eq!(g.domain().field(), g.codomain().field());
    }
}
