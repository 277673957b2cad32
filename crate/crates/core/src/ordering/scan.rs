//! Measure values along a one-parameter family.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::relation::csv_field;
use crate::error::{Error, Result};
use crate::measures::{evaluate, MeasureId, MeasureValue, OptimizerConfig};
use crate::states::FamilySpec;

/// Parses `start:stop:step` into an inclusive grid.
///
/// Points are `start + k·step` rounded to 12 decimals; the last point is
/// `stop` when it lands on the grid within `1e−9·step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("grid '{s}': '{x}' is not a number")));
    let (start, stop, step) = match parts.as_slice() {
        [a] => {
            let v = num(a)?;
            (v, v, 1.0)
        }
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(Error::Parse(format!("grid '{s}' should be start:stop:step"))),
    };
    if ![start, stop, step].iter().all(|x| x.is_finite()) {
        return Err(Error::Domain(format!("grid '{s}' has non-finite bounds")));
    }
    if stop < start {
        return Err(Error::Domain(format!("grid '{s}' is reversed: stop {stop} < start {start}")));
    }
    if !(step > 0.0) {
        return Err(Error::Domain(format!("grid '{s}' needs a positive step")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    if count > 100_000 {
        return Err(Error::Domain(format!("grid '{s}' has more than 100000 points")));
    }
    Ok((0..=count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
}

/// One grid point: a value (or the error) per requested measure, or a
/// row-level error when the state itself could not be built.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub values: Vec<std::result::Result<MeasureValue, String>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanTable {
    pub family: &'static str,
    pub parameter: &'static str,
    pub measures: Vec<MeasureId>,
    pub rows: Vec<ScanRow>,
}

/// Evaluates `measures` on `family` at every grid point. Errors are kept
/// per row (bad parameter) or per cell (measure not applicable).
pub fn scan_family(family: &FamilySpec, grid: &[f64], measures: &[MeasureId], cfg: &OptimizerConfig) -> Result<ScanTable> {
    family.with_parameter(0.0)?;
    cfg.check()?;
    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(k, &x)| {
            let state = family.with_parameter(x).and_then(|f| f.build());
            match state {
                Err(e) => ScanRow { x, values: Vec::new(), error: Some(e.to_string()) },
                Ok(state) => {
                    let c = cfg.with_seed(cfg.seed.child(k as u64));
                    let values = measures.iter().map(|&id| evaluate(id, &state, &c).map_err(|e| e.to_string())).collect();
                    ScanRow { x, values, error: None }
                }
            }
        })
        .collect();
    Ok(ScanTable { family: family.name(), parameter: family.parameter_name(), measures: measures.to_vec(), rows })
}

impl ScanTable {
    /// Header `<param>,<m>,<m>_status,...,error`.
    pub fn to_csv(&self) -> String {
        let mut out = self.parameter.to_string();
        for m in &self.measures {
            out.push_str(&format!(",{m},{m}_status"));
        }
        out.push_str(",error\n");
        for row in &self.rows {
            out.push_str(&format!("{:?}", row.x));
            let mut errors: Vec<String> = row.error.iter().cloned().collect();
            for k in 0..self.measures.len() {
                match row.values.get(k) {
                    Some(Ok(v)) => out.push_str(&format!(",{:?},{}", v.value, status_name(v))),
                    Some(Err(e)) => {
                        out.push_str(",,error");
                        errors.push(e.clone());
                    }
                    None => out.push_str(",,error"),
                }
            }
            out.push(',');
            out.push_str(&csv_field(&errors.join("; ")));
            out.push('\n');
        }
        out
    }

    /// `{"family", "parameter", "measures", "rows": [{<param>: x, <m>: MeasureValue | {"error"}, "error"}]}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                obj.insert(self.parameter.to_string(), json!(row.x));
                for (k, m) in self.measures.iter().enumerate() {
                    let cell = match row.values.get(k) {
                        Some(Ok(v)) => serde_json::to_value(v).expect("measure values serialize"),
                        Some(Err(e)) => json!({ "error": e }),
                        None => Value::Null,
                    };
                    obj.insert(m.to_string(), cell);
                }
                obj.insert("error".into(), json!(row.error));
                Value::Object(obj)
            })
            .collect();
        json!({
            "family": self.family,
            "parameter": self.parameter,
            "measures": self.measures,
            "rows": rows,
        })
    }
}

fn status_name(v: &MeasureValue) -> &'static str {
    match v.status {
        crate::measures::Status::Exact => "exact",
        crate::measures::Status::UpperBound => "upper_bound",
    }
}
