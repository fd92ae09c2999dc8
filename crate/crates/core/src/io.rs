//! JSON documents in the `d2kit/1` schema: algebras, extensions, Hopf and
//! module algebras, modules, coalgebras and their maps, ideal generator sets,
//! and quasibase witnesses. Rationals are strings `"p/q"` (integers are
//! also accepted on input).

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{AlgebraDesc, LeftModuleDesc};
use crate::coalgebra::{CoQuasibase, CoQuasibasePair, CoalgebraDesc, CoalgebraMapDesc};
use crate::depth_two::{Quasibase, QuasibasePair, Side};
use crate::error::{check_dim, Error, Result};
use crate::hopf::{HopfAlgebraDesc, ModuleAlgebraDesc};
use crate::linalg::{format_rational, parse_rational, Matrix, Rational, Vector};

pub const SCHEMA: &str = "d2kit/1";

/// A rational in its file form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct QVisitor;
        impl Visitor<'_> for QVisitor {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(QVisitor)
    }
}

pub type VecJson = Vec<Q>;
/// Row-major list of rows.
pub type MatrixJson = Vec<Vec<Q>>;

pub fn vec_to_json(v: &[Rational]) -> VecJson {
    v.iter().cloned().map(Q).collect()
}

pub fn vec_from_json(v: &[Q]) -> Vector {
    v.iter().map(|q| q.0.clone()).collect()
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows()).map(|i| vec_to_json(m.row(i))).collect()
}

pub fn matrix_from_json(field: &str, rows: &[Vec<Q>], expect: Option<(usize, usize)>) -> Result<Matrix> {
    let cols = rows.first().map_or(expect.map_or(0, |e| e.1), Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::InvalidInput(format!("{field}: row {i} has {} entries, expected {cols}", rows[i].len())));
    }
    if let Some((r, c)) = expect {
        check_dim(&format!("{field} rows"), r, rows.len())?;
        if r > 0 {
            check_dim(&format!("{field} columns"), c, cols)?;
        }
    }
    let data = rows.iter().flatten().map(|q| q.0.clone()).collect();
    Matrix::from_vec(rows.len(), cols, data)
}

fn nested_from_json(t: &[Vec<Vec<Q>>]) -> Vec<Vec<Vec<Rational>>> {
    t.iter().map(|m| m.iter().map(|r| vec_from_json(r)).collect()).collect()
}

fn nested_to_json(t: &[Vec<Vec<Rational>>]) -> Vec<MatrixJson> {
    t.iter().map(|m| m.iter().map(|r| vec_to_json(r)).collect()).collect()
}

fn check_schema(schema: &str) -> Result<()> {
    if schema == SCHEMA {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("schema: expected \"{SCHEMA}\", found \"{schema}\"")))
    }
}

fn context<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{field}: {m}")),
        other => Error::InvalidInput(format!("{field}: {other}")),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// `structure[i][j][k]` is the coefficient of `e_k` in `e_i e_j`.
    pub structure: Vec<MatrixJson>,
    pub unit: VecJson,
}

impl AlgebraJson {
    pub fn from_desc(a: &AlgebraDesc) -> Self {
        AlgebraJson {
            dim: a.dim(),
            basis_names: a.basis_names().to_vec(),
            structure: nested_to_json(&a.nested_structure()),
            unit: vec_to_json(a.unit()),
        }
    }

    pub fn to_desc(&self, field: &str) -> Result<AlgebraDesc> {
        context(field, check_dim("basis_names", self.dim, self.basis_names.len()))?;
        context(
            field,
            AlgebraDesc::from_nested(self.basis_names.clone(), &nested_from_json(&self.structure), vec_from_json(&self.unit)),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraJson {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// `coproduct[i][j][k]` is the coefficient of `c_j ⊗ c_k` in `Δ(c_i)`.
    pub coproduct: Vec<MatrixJson>,
    pub counit: VecJson,
}

impl CoalgebraJson {
    pub fn from_desc(c: &CoalgebraDesc) -> Self {
        CoalgebraJson {
            dim: c.dim(),
            basis_names: c.basis_names.clone(),
            coproduct: nested_to_json(&c.nested_coproduct()),
            counit: vec_to_json(&c.counit),
        }
    }

    pub fn to_desc(&self, field: &str) -> Result<CoalgebraDesc> {
        context(field, check_dim("basis_names", self.dim, self.basis_names.len()))?;
        context(
            field,
            CoalgebraDesc::from_nested(self.basis_names.clone(), &nested_from_json(&self.coproduct), vec_from_json(&self.counit)),
        )
    }
}

/// An algebra extension as the homomorphism `ι: B → A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub schema: String,
    pub source: AlgebraJson,
    pub target: AlgebraJson,
    /// `dim A × dim B`.
    pub matrix: MatrixJson,
}

impl ExtensionDoc {
    pub fn new(a: &AlgebraDesc, b: &AlgebraDesc, iota: &Matrix) -> Self {
        ExtensionDoc {
            schema: SCHEMA.into(),
            source: AlgebraJson::from_desc(b),
            target: AlgebraJson::from_desc(a),
            matrix: matrix_to_json(iota),
        }
    }

    /// `(A, B, ι)` after shape checks.
    pub fn parts(&self) -> Result<(AlgebraDesc, AlgebraDesc, Matrix)> {
        check_schema(&self.schema)?;
        let b = self.source.to_desc("source")?;
        let a = self.target.to_desc("target")?;
        let iota = matrix_from_json("matrix", &self.matrix, Some((a.dim(), b.dim())))?;
        Ok((a, b, iota))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraMapDoc {
    pub schema: String,
    pub source: CoalgebraJson,
    pub target: CoalgebraJson,
    /// `dim D × dim C`.
    pub matrix: MatrixJson,
}

impl CoalgebraMapDoc {
    pub fn new(g: &CoalgebraMapDesc) -> Self {
        CoalgebraMapDoc {
            schema: SCHEMA.into(),
            source: CoalgebraJson::from_desc(&g.source),
            target: CoalgebraJson::from_desc(&g.target),
            matrix: matrix_to_json(&g.matrix),
        }
    }

    pub fn to_desc(&self) -> Result<CoalgebraMapDesc> {
        check_schema(&self.schema)?;
        let c = self.source.to_desc("source")?;
        let d = self.target.to_desc("target")?;
        let m = matrix_from_json("matrix", &self.matrix, Some((d.dim(), c.dim())))?;
        CoalgebraMapDesc::new(c, d, m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfJson {
    pub algebra: AlgebraJson,
    pub coproduct: Vec<MatrixJson>,
    pub counit: VecJson,
    pub antipode: MatrixJson,
}

impl HopfJson {
    pub fn from_desc(h: &HopfAlgebraDesc) -> Self {
        let c = CoalgebraJson::from_desc(&CoalgebraDesc::of_hopf(h));
        HopfJson {
            algebra: AlgebraJson::from_desc(&h.algebra),
            coproduct: c.coproduct,
            counit: c.counit,
            antipode: matrix_to_json(&h.antipode),
        }
    }

    pub fn to_desc(&self, field: &str) -> Result<HopfAlgebraDesc> {
        let a = self.algebra.to_desc(&format!("{field}.algebra"))?;
        let c = CoalgebraJson {
            dim: a.dim(),
            basis_names: a.basis_names().to_vec(),
            coproduct: self.coproduct.clone(),
            counit: self.counit.clone(),
        }
        .to_desc(field)?;
        let s = matrix_from_json(&format!("{field}.antipode"), &self.antipode, Some((a.dim(), a.dim())))?;
        context(field, HopfAlgebraDesc::new(a, c.coproduct, c.counit, s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleAlgebraDoc {
    pub schema: String,
    pub hopf: HopfJson,
    pub algebra: AlgebraJson,
    /// One matrix per basis element of the Hopf algebra.
    pub action: Vec<MatrixJson>,
}

impl ModuleAlgebraDoc {
    pub fn new(m: &ModuleAlgebraDesc) -> Self {
        ModuleAlgebraDoc {
            schema: SCHEMA.into(),
            hopf: HopfJson::from_desc(&m.hopf),
            algebra: AlgebraJson::from_desc(&m.algebra),
            action: m.action.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_desc(&self) -> Result<ModuleAlgebraDesc> {
        check_schema(&self.schema)?;
        let h = self.hopf.to_desc("hopf")?;
        let a = self.algebra.to_desc("algebra")?;
        let d = a.dim();
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_json(&format!("action[{i}]"), m, Some((d, d))))
            .collect::<Result<_>>()?;
        ModuleAlgebraDesc::new(h, a, action)
    }
}

/// A left module over the `A` of an extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub schema: String,
    pub dim: usize,
    pub action: Vec<MatrixJson>,
}

impl ModuleDoc {
    pub fn new(m: &LeftModuleDesc) -> Self {
        ModuleDoc {
            schema: SCHEMA.into(),
            dim: m.dim,
            action: m.action.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_desc(&self, a: &AlgebraDesc) -> Result<LeftModuleDesc> {
        check_schema(&self.schema)?;
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_json(&format!("action[{i}]"), m, Some((self.dim, self.dim))))
            .collect::<Result<_>>()?;
        LeftModuleDesc::new(a, self.dim, action)
    }
}

/// Generator sets for extra two-sided ideals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealsDoc {
    pub schema: String,
    pub ideals: Vec<Vec<VecJson>>,
}

impl IdealsDoc {
    pub fn to_generators(&self, dim_a: usize) -> Result<Vec<Vec<Vector>>> {
        check_schema(&self.schema)?;
        self.ideals
            .iter()
            .enumerate()
            .map(|(i, gens)| {
                gens.iter()
                    .enumerate()
                    .map(|(j, g)| {
                        check_dim(&format!("ideals[{i}][{j}]"), dim_a, g.len())?;
                        Ok(vec_from_json(g))
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasibasePairJson {
    /// Coordinates in `A ⊗_B A`.
    pub tensor: VecJson,
    pub map: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasibaseJson {
    pub side: String,
    pub pairs: Vec<QuasibasePairJson>,
}

fn side_from_str(s: &str) -> Result<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(Error::InvalidInput(format!("side: expected \"left\" or \"right\", found \"{s}\""))),
    }
}

impl QuasibaseJson {
    pub fn from_desc(qb: &Quasibase) -> Self {
        QuasibaseJson {
            side: qb.side.as_str().into(),
            pairs: qb
                .pairs
                .iter()
                .map(|p| QuasibasePairJson {
                    tensor: vec_to_json(&p.tensor),
                    map: matrix_to_json(&p.map),
                })
                .collect(),
        }
    }

    pub fn to_desc(&self, n: usize, w_dim: usize) -> Result<Quasibase> {
        let side = side_from_str(&self.side)?;
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                check_dim(&format!("pairs[{i}].tensor"), w_dim, p.tensor.len())?;
                Ok(QuasibasePair {
                    tensor: vec_from_json(&p.tensor),
                    map: matrix_from_json(&format!("pairs[{i}].map"), &p.map, Some((n, n)))?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Quasibase { side, pairs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoQuasibasePairJson {
    /// Values on the cotensor basis.
    pub functional: VecJson,
    pub map: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoQuasibaseJson {
    pub side: String,
    pub pairs: Vec<CoQuasibasePairJson>,
}

impl CoQuasibaseJson {
    pub fn from_desc(qb: &CoQuasibase) -> Self {
        CoQuasibaseJson {
            side: qb.side.as_str().into(),
            pairs: qb
                .pairs
                .iter()
                .map(|p| CoQuasibasePairJson {
                    functional: vec_to_json(&p.functional),
                    map: matrix_to_json(&p.map),
                })
                .collect(),
        }
    }

    pub fn to_desc(&self, n: usize, cot_dim: usize) -> Result<CoQuasibase> {
        let side = side_from_str(&self.side)?;
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                check_dim(&format!("pairs[{i}].functional"), cot_dim, p.functional.len())?;
                Ok(CoQuasibasePair {
                    functional: vec_from_json(&p.functional),
                    map: matrix_from_json(&format!("pairs[{i}].map"), &p.map, Some((n, n)))?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CoQuasibase { side, pairs })
    }
}

/// Parses a document; syntax and schema errors carry line, column and field.
pub fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn load_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    at_path(path, parse_doc(&text))
}

/// Prefixes input errors with the file they came from.
pub fn at_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// The document kind, read from the top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Extension,
    CoalgebraMap,
    ModuleAlgebra,
    Module,
    Ideals,
}

pub fn sniff_kind(text: &str) -> Result<DocKind> {
    let v: serde_json::Value = parse_doc(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("top level: expected an object".into()))?;
    let has = |k: &str| obj.contains_key(k);
    if has("ideals") {
        Ok(DocKind::Ideals)
    } else if has("hopf") {
        Ok(DocKind::ModuleAlgebra)
    } else if has("action") {
        Ok(DocKind::Module)
    } else if obj
        .get("source")
        .and_then(|s| s.as_object())
        .is_some_and(|s| s.contains_key("coproduct"))
    {
        Ok(DocKind::CoalgebraMap)
    } else if has("source") {
        Ok(DocKind::Extension)
    } else {
        Err(Error::InvalidInput("top level: unrecognized document kind".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{coalgebra_fixture, extension_fixture, h4_dual_numbers_module_algebra, s3_standard_module};
    use crate::linalg::qr;

    #[test]
    fn rationals_round_trip() {
        let v = vec![qr(-3, 4), qr(5, 1), qr(0, 1)];
        let s = serde_json::to_string(&vec_to_json(&v)).unwrap();
        assert_eq!(s, r#"["-3/4","5","0"]"#);
        let back: VecJson = serde_json::from_str(&s).unwrap();
        assert_eq!(vec_from_json(&back), v);
        let ints: VecJson = serde_json::from_str("[1, -2]").unwrap();
        assert_eq!(vec_from_json(&ints), vec![qr(1, 1), qr(-2, 1)]);
    }

    #[test]
    fn extension_round_trip() {
        let f = extension_fixture("s3_a3").unwrap();
        let doc = ExtensionDoc::new(&f.a, &f.b, &f.iota);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        assert_eq!(sniff_kind(&text).unwrap(), DocKind::Extension);
        let back: ExtensionDoc = parse_doc(&text).unwrap();
        let (a, b, iota) = back.parts().unwrap();
        assert_eq!((a, b, iota), (f.a, f.b, f.iota));
    }

    #[test]
    fn other_documents_round_trip() {
        let g = coalgebra_fixture("h4_quotient").unwrap();
        let text = serde_json::to_string(&CoalgebraMapDoc::new(&g)).unwrap();
        assert_eq!(sniff_kind(&text).unwrap(), DocKind::CoalgebraMap);
        assert_eq!(parse_doc::<CoalgebraMapDoc>(&text).unwrap().to_desc().unwrap(), g);
        let ma = h4_dual_numbers_module_algebra();
        let text = serde_json::to_string(&ModuleAlgebraDoc::new(&ma)).unwrap();
        assert_eq!(sniff_kind(&text).unwrap(), DocKind::ModuleAlgebra);
        let back = parse_doc::<ModuleAlgebraDoc>(&text).unwrap().to_desc().unwrap();
        assert_eq!((back.algebra, back.action), (ma.algebra, ma.action));
        let m = s3_standard_module();
        let text = serde_json::to_string(&ModuleDoc::new(&m)).unwrap();
        assert_eq!(sniff_kind(&text).unwrap(), DocKind::Module);
        let a = crate::fixtures::s3_algebra();
        assert_eq!(parse_doc::<ModuleDoc>(&text).unwrap().to_desc(&a).unwrap(), m);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let err = parse_doc::<ExtensionDoc>("{\n  \"schema\": \"d2kit/1\",\n  \"source\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let f = extension_fixture("q_m2").unwrap();
        let mut doc = ExtensionDoc::new(&f.a, &f.b, &f.iota);
        doc.matrix.pop();
        let err = doc.parts().unwrap_err();
        assert!(err.to_string().contains("matrix rows"), "{err}");
        doc = ExtensionDoc::new(&f.a, &f.b, &f.iota);
        doc.schema = "d2kit/0".into();
        assert!(doc.parts().unwrap_err().to_string().contains("schema"));
        let err = parse_doc::<VecJson>("[\"1/0\"]").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let err = parse_doc::<ExtensionDoc>("{\"schema\": \"d2kit/1\", \"bogus\": 1}").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }
}
