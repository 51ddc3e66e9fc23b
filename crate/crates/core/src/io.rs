//! File formats: algebras, posets and variety specs as JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::catalog::{self, Poset};
use crate::error::{Error, Result};
use crate::finalg::{Algebra, Elem, FiniteAlgebra, OpSymbol, Signature};
use crate::variety::{Caps, Mode, VarietySpec};

/// On-disk form of an algebra: operation tables as nested row-major arrays,
/// constants as plain numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub size: usize,
    pub signature: Vec<OpSymbol>,
    pub tables: Map<String, Value>,
    /// Designated generators, present for free algebras.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Elem>>,
}

fn nest(flat: &[Elem], size: usize, arity: usize) -> Value {
    if arity == 0 {
        return Value::from(flat[0]);
    }
    let stride = flat.len() / size;
    Value::Array(
        (0..size)
            .map(|i| nest(&flat[i * stride..(i + 1) * stride], size, arity - 1))
            .collect(),
    )
}

fn flatten(v: &Value, size: usize, arity: usize, op: &str, out: &mut Vec<Elem>) -> Result<()> {
    if arity == 0 {
        let x = v
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("table `{op}`: expected an element, found {v}")))?;
        if x >= size as u64 {
            return Err(Error::ElementOutOfRange { elem: x, size });
        }
        out.push(x as Elem);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("table `{op}`: expected an array, found {v}")))?;
    if arr.len() != size {
        return Err(Error::Parse(format!(
            "table `{op}`: row has {} entries, expected {size}",
            arr.len()
        )));
    }
    for x in arr {
        flatten(x, size, arity - 1, op, out)?;
    }
    Ok(())
}

impl AlgebraFile {
    pub fn from_algebra(alg: &FiniteAlgebra) -> Self {
        let mut tables = Map::new();
        for (i, s) in alg.signature().symbols().iter().enumerate() {
            tables.insert(s.name.clone(), nest(alg.table(i), alg.size(), s.arity));
        }
        AlgebraFile {
            name: alg.name().map(str::to_string),
            size: alg.size(),
            signature: alg.signature().symbols().to_vec(),
            tables,
            generators: None,
        }
    }

    pub fn with_generators(mut self, gens: Vec<Elem>) -> Self {
        self.generators = Some(gens);
        self
    }

    pub fn to_algebra(&self) -> Result<FiniteAlgebra> {
        let sig = Signature::new(self.signature.clone())?;
        let mut tables = Vec::with_capacity(sig.len());
        for s in sig.symbols() {
            let v = self
                .tables
                .get(&s.name)
                .ok_or_else(|| Error::Parse(format!("missing table for `{}`", s.name)))?;
            let mut flat = Vec::new();
            flatten(v, self.size, s.arity, &s.name, &mut flat)?;
            tables.push(flat);
        }
        if let Some(extra) = self.tables.keys().find(|k| sig.lookup(k).is_none()) {
            return Err(Error::Parse(format!(
                "table `{extra}` is not in the signature"
            )));
        }
        if let Some(gens) = &self.generators {
            if let Some(&g) = gens.iter().find(|&&g| g as usize >= self.size) {
                return Err(Error::ElementOutOfRange {
                    elem: g as u64,
                    size: self.size,
                });
            }
        }
        FiniteAlgebra::new(self.name.clone(), sig, self.size, tables)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(src: &str, what: &str) -> Result<T> {
    serde_json::from_str(src).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_algebra(src: &str) -> Result<FiniteAlgebra> {
    parse_json::<AlgebraFile>(src, "algebra file")?.to_algebra()
}

pub fn read_algebra(path: &Path) -> Result<FiniteAlgebra> {
    parse_algebra(&read(path)?)
}

/// Pretty JSON in the algebra file format.
pub fn algebra_to_json(alg: &FiniteAlgebra) -> String {
    to_json(&AlgebraFile::from_algebra(alg))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

pub fn parse_poset(src: &str) -> Result<Poset> {
    parse_json(src, "poset file")
}

pub fn read_poset(path: &Path) -> Result<Poset> {
    parse_poset(&read(path)?)
}

/// On-disk form of a variety spec. Generator entries are paths relative to the
/// spec file, or `catalog:<name>` for a built-in algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub caps: Caps,
    /// Overrides the automatic congruence-distributivity flag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub congruence_distributive: Option<bool>,
}

impl SpecFile {
    pub fn resolve(&self, base: &Path) -> Result<VarietySpec> {
        self.caps.validate()?;
        let gens = self
            .generators
            .iter()
            .map(|g| load_generator(g, base))
            .collect::<Result<Vec<_>>>()?;
        let mut spec = VarietySpec::new(gens, self.mode)?.with_caps(self.caps);
        if let Some(cd) = self.congruence_distributive {
            spec = spec.assert_congruence_distributive(cd);
        }
        Ok(spec)
    }
}

fn load_generator(entry: &str, base: &Path) -> Result<FiniteAlgebra> {
    if let Some(name) = entry.strip_prefix("catalog:") {
        return catalog::by_name(name)
            .ok_or_else(|| Error::InvalidData(format!("unknown catalog algebra `{name}`")));
    }
    let p = PathBuf::from(entry);
    let full = if p.is_absolute() { p } else { base.join(p) };
    read_algebra(&full)
}

pub fn parse_spec(src: &str, base: &Path) -> Result<VarietySpec> {
    parse_json::<SpecFile>(src, "spec file")?.resolve(base)
}

pub fn read_spec(path: &Path) -> Result<VarietySpec> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_spec(&read(path)?, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_roundtrip() {
        for alg in catalog::corpus() {
            let json = algebra_to_json(&alg);
            assert_eq!(parse_algebra(&json).unwrap(), alg);
        }
    }

    #[test]
    fn nested_layout() {
        let two = catalog::two();
        let f = AlgebraFile::from_algebra(&two);
        assert_eq!(f.tables["meet"], serde_json::json!([[0, 0], [0, 1]]));
        assert_eq!(f.tables["one"], serde_json::json!(1));
        assert_eq!(f.tables["dia"], serde_json::json!([0, 1]));
    }

    #[test]
    fn malformed_tables() {
        let bad = r#"{"size":2,"signature":[{"op":"f","arity":1}],"tables":{"f":[0,2]}}"#;
        assert!(matches!(
            parse_algebra(bad),
            Err(Error::ElementOutOfRange { .. })
        ));
        let short = r#"{"size":2,"signature":[{"op":"f","arity":1}],"tables":{"f":[0]}}"#;
        assert!(matches!(parse_algebra(short), Err(Error::Parse(_))));
        let missing = r#"{"size":2,"signature":[{"op":"f","arity":1}],"tables":{}}"#;
        assert!(parse_algebra(missing).is_err());
        assert!(parse_algebra("not json").is_err());
    }

    #[test]
    fn spec_with_catalog_entries() {
        let s = parse_spec(
            r#"{"generators":["catalog:s2"],"caps":{"rank_max":1}}"#,
            Path::new("."),
        )
        .unwrap();
        assert_eq!(s.caps.rank_max, 1);
        assert_eq!(s.mode, Mode::Variety);
        assert!(parse_spec(r#"{"generators":["catalog:nope"]}"#, Path::new(".")).is_err());
    }

    #[test]
    fn poset_file() {
        let p = parse_poset(r#"{"size":2,"lt":[[false,true],[false,false]]}"#).unwrap();
        assert!(p.lt(0, 1));
    }
}
