use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use asc_core::decision::Verdict;
use asc_core::finalg::FiniteAlgebra;
use asc_core::io::{self, AlgebraFile};

use crate::{Failure, Global};

/// A command result: exit status plus the same report in text and JSON form.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub human: Vec<String>,
    pub json: Value,
    pub citations: Vec<String>,
}

impl Outcome {
    pub fn new(code: i32, human: Vec<String>, json: impl Serialize) -> Self {
        Outcome {
            code,
            human,
            json: serde_json::to_value(json).expect("serializable report"),
            citations: Vec::new(),
        }
    }

    pub fn verdict(v: &Verdict) -> Self {
        let mut human = vec![v.headline()];
        if let Some(c) = v.classification {
            human.push(
                format!(
                    "  classification: {}",
                    serde_json::to_value(c).expect("enum")
                )
                .replace('"', ""),
            );
        }
        for (k, val) in &v.facts {
            human.push(format!("  {k}: {}", compact(val)));
        }
        for c in &v.certificates {
            human.push(format!("  certificate {}: {}", c.kind(), c.describe()));
        }
        let sizes: Vec<String> = v
            .explored
            .free_sizes
            .iter()
            .enumerate()
            .filter_map(|(k, s)| s.map(|s| format!("|F({k})| = {s}")))
            .collect();
        if !sizes.is_empty() {
            human.push(format!("  explored: {}", sizes.join(", ")));
        }
        Outcome {
            code: v.status.exit_code(),
            human,
            json: serde_json::to_value(v).expect("serializable verdict"),
            citations: v.citations.clone(),
        }
    }

    /// An algebra result: written to `out` when given, printed otherwise.
    pub fn algebra(alg: &FiniteAlgebra, out: Option<&Path>) -> Result<Self, Failure> {
        Self::algebra_file(AlgebraFile::from_algebra(alg), out)
    }

    pub fn algebra_file(file: AlgebraFile, out: Option<&Path>) -> Result<Self, Failure> {
        let text = io::to_json(&file);
        match out {
            Some(p) => {
                std::fs::write(p, format!("{text}\n")).map_err(|e| {
                    Failure::Core(asc_core::Error::Io(format!("{}: {e}", p.display())))
                })?;
                Ok(Outcome::new(
                    0,
                    vec![format!("wrote {} ({} elements)", p.display(), file.size)],
                    serde_json::json!({ "written": p.display().to_string(), "size": file.size }),
                ))
            }
            None => Ok(Outcome {
                code: 0,
                human: vec![text],
                json: serde_json::to_value(&file).expect("serializable algebra"),
                citations: Vec::new(),
            }),
        }
    }

    pub fn write(&self, w: &mut dyn Write, g: &Global) -> std::io::Result<()> {
        if g.json {
            writeln!(
                w,
                "{}",
                serde_json::to_string_pretty(&self.json).expect("serializable")
            )?;
            return Ok(());
        }
        for line in &self.human {
            writeln!(w, "{line}")?;
        }
        if g.cite && !self.citations.is_empty() {
            writeln!(w, "citations:")?;
            for c in &self.citations {
                writeln!(w, "  - {c}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
