use serde_json::{json, Value};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Outcome of one subcommand: the verdict decides the exit code.
pub struct Report {
    pub command: String,
    pub holds: bool,
    pub body: Value,
    /// Tabular form for `--format csv`; defaults to the flattened body.
    pub csv: Option<String>,
}

impl Report {
    pub fn new(command: &str, holds: bool, body: impl serde::Serialize) -> Result<Self, UsageError> {
        let body = serde_json::to_value(body).map_err(|e| UsageError(format!("cannot serialize report: {e}")))?;
        Ok(Self {
            command: command.into(),
            holds,
            body,
            csv: None,
        })
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn verdict(&self) -> &'static str {
        if self.holds {
            "holds"
        } else {
            "negative"
        }
    }

    pub fn render(&self, format: Format) -> Result<String, UsageError> {
        match format {
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "verdict": self.verdict(),
                    "report": self.body,
                });
                serde_json::to_string_pretty(&doc)
                    .map(|s| s + "\n")
                    .map_err(|e| UsageError(e.to_string()))
            }
            Format::Csv => match &self.csv {
                Some(s) => Ok(s.clone()),
                None => {
                    let mut rows = vec![("verdict".to_string(), self.verdict().to_string())];
                    flatten("", &self.body, &mut rows);
                    key_value_csv(&rows)
                }
            },
        }
    }
}

/// Scalar leaves of `v` under dotted paths, keys sorted.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn key_value_csv(rows: &[(String, String)]) -> Result<String, UsageError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| UsageError(e.to_string());
    w.write_record(["key", "value"]).map_err(err)?;
    for (k, v) in rows {
        w.write_record([k, v]).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| UsageError(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| UsageError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_orders_keys_and_indexes_arrays() {
        let r = Report::new("x", false, json!({"a": [1, 2], "b": {"c": null, "d": "s"}})).unwrap();
        let csv = r.render(Format::Csv).unwrap();
        assert_eq!(csv, "key,value\nverdict,negative\na.0,1\na.1,2\nb.c,\nb.d,s\n");
    }
}
