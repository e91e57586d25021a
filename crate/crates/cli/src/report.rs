use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Format, GlobalOpts};
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Aggregate {
    pub cases: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub no_solution: usize,
    pub divergence: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub cases: Vec<Value>,
    pub aggregate: Aggregate,
}

#[derive(Serialize)]
struct ConfigEcho<'a, T: Serialize> {
    #[serde(flatten)]
    global: &'a GlobalOpts,
    #[serde(flatten)]
    command: &'a T,
}

impl RunReport {
    pub fn new<T: Serialize>(command: &'static str, global: &GlobalOpts, args: &T) -> Result<Self> {
        Ok(Self {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command,
            config: serde_json::to_value(ConfigEcho { global, command: args })?,
            cases: Vec::new(),
            aggregate: Aggregate::default(),
        })
    }

    pub fn push<T: Serialize>(&mut self, case: &T) -> Result<()> {
        self.cases.push(serde_json::to_value(case)?);
        self.aggregate.cases = self.cases.len();
        Ok(())
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, self)?;
                writeln!(w)?;
            }
            Format::Csv => write_csv(&self.cases, w)?,
        }
        Ok(())
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined = items.iter().map(cell).collect::<Vec<_>>().join(";");
            out.insert(prefix.to_string(), Value::String(joined));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        // Absent and null both render as an empty cell; skipping nulls keeps
        // `check` from appearing next to `check.*` columns.
        Value::Null => {}
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One row per case with dotted column names; columns are the union over all
/// cases in first-seen order.
pub fn write_csv(cases: &[Value], w: &mut dyn Write) -> Result<()> {
    let rows: Vec<Map<String, Value>> = cases
        .iter()
        .map(|c| {
            let mut m = Map::new();
            flatten("", c, &mut m);
            m
        })
        .collect();
    let mut columns: Vec<String> = Vec::new();
    for r in &rows {
        for k in r.keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    writeln!(w, "{}", columns.join(","))?;
    for r in &rows {
        let line: Vec<String> = columns.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Profile CSV with full double precision.
pub fn write_profile_csv(t: &[f64], y: &[f64], dy: &[f64], w: &mut dyn Write) -> Result<()> {
    writeln!(w, "t,y,dy")?;
    for i in 0..t.len() {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", t[i], y[i], dy[i])?;
    }
    Ok(())
}
