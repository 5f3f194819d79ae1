//! JSON schemas.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays
//! of rows. A superoperator is `{"dim": n, "matrix": [[[re, im], …], …]}`
//! with the `n²×n²` matrix acting on column-stacked matrices.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::superop::SuperOperator;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, field: &str) -> Result<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != m) {
        return Err(Error::Invalid(format!(
            "{field}: row {bad} has {} entries, expected {m}",
            rows[bad].len()
        )));
    }
    let out = ComplexMatrix::from_fn(n, m, |i, j| c(rows[i][j][0], rows[i][j][1]));
    crate::linalg::ensure_finite(&out).map_err(|e| Error::Invalid(format!("{field}: {e}")))?;
    Ok(out)
}

pub fn ser_matrix<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_to_json(m).serialize(s)
}

pub fn ser_opt_matrix<S: Serializer>(
    m: &Option<ComplexMatrix>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref().map(matrix_to_json).serialize(s)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuperOperatorJson {
    pub dim: usize,
    pub matrix: JsonMatrix,
}

impl SuperOperatorJson {
    pub fn from_superop(t: &SuperOperator) -> Self {
        Self {
            dim: t.dim(),
            matrix: matrix_to_json(t.matrix()),
        }
    }

    pub fn to_superop(&self) -> Result<SuperOperator> {
        let m = matrix_from_json(&self.matrix, "matrix")?;
        SuperOperator::from_matrix(self.dim, m).map_err(|e| Error::Invalid(format!("matrix: {e}")))
    }
}

/// `{"n": n, "map": [s_0, …, s_{n-1}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointMapJson {
    pub n: usize,
    pub map: Vec<usize>,
}

/// `{"mu": [μ_0, …]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeasureSpaceJson {
    pub mu: Vec<f64>,
}

/// One line of a CSV defect report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DefectRow {
    pub experiment: String,
    pub defect_name: String,
    pub value: f64,
    /// Fraction of basis elements the check quantified over.
    pub domain_fraction: f64,
}

impl DefectRow {
    pub fn new(experiment: impl Into<String>, defect_name: impl Into<String>, value: f64, domain_fraction: f64) -> Self {
        Self {
            experiment: experiment.into(),
            defect_name: defect_name.into(),
            value,
            domain_fraction,
        }
    }
}

/// CSV with header `experiment,defect_name,value,domain_fraction`.
pub fn defect_csv(rows: &[DefectRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    }
    if rows.is_empty() {
        w.write_record(["experiment", "defect_name", "value", "domain_fraction"])
            .map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, seeded};
    use proptest::prelude::*;

    #[test]
    fn superop_json_layout_is_row_major() {
        let t = SuperOperator::transpose(2);
        let js = serde_json::to_value(SuperOperatorJson::from_superop(&t)).unwrap();
        assert_eq!(js["dim"], 2);
        // vec index 1 = E_10, index 2 = E_01; transpose swaps them
        assert_eq!(js["matrix"][1][2], serde_json::json!([1.0, 0.0]));
        assert_eq!(js["matrix"][0][0], serde_json::json!([1.0, 0.0]));
        assert_eq!(js["matrix"][0][1], serde_json::json!([0.0, 0.0]));
    }

    #[test]
    fn ragged_rows_are_rejected_with_field_name() {
        let rows: JsonMatrix = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[1.0, 0.0]]];
        let err = matrix_from_json(&rows, "rho").unwrap_err();
        assert!(err.to_string().contains("rho"));
    }

    #[test]
    fn wrong_superop_size_is_rejected() {
        let js = SuperOperatorJson {
            dim: 2,
            matrix: matrix_to_json(&gaussian_matrix(3, &mut seeded(1))),
        };
        assert!(js.to_superop().is_err());
    }

    #[test]
    fn defect_csv_has_header_and_rows() {
        let rows = vec![
            DefectRow::new("mpc", "commutation", 0.0, 0.75),
            DefectRow::new("mpc", "a_defect", 1.5e-17, 0.5),
        ];
        let text = defect_csv(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment,defect_name,value,domain_fraction");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("mpc,commutation,0"));
        assert_eq!(defect_csv(&[]).unwrap().trim(), lines[0]);
    }

    proptest! {
        #[test]
        fn matrix_json_round_trip(seed in 0u64..1000, n in 1usize..6) {
            let m = gaussian_matrix(n, &mut seeded(seed));
            let text = serde_json::to_string(&matrix_to_json(&m)).unwrap();
            let back: JsonMatrix = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(matrix_from_json(&back, "m").unwrap(), m);
        }
    }
}
