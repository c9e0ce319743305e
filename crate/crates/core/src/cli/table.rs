use std::fmt::Write as _;

use super::CliError;

/// A set of curves sampled on a common, strictly increasing x grid.
///
/// CSV layout: `# title: …`, `# x_label: …`, then one `# key: value` line per
/// parameter, a header row `x_label,series…`, and one row per x value.
/// Numbers are written in the shortest form that parses back to the same
/// double.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub title: String,
    pub x_label: String,
    pub series_labels: Vec<String>,
    pub params: Vec<(String, String)>,
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl CurveTable {
    pub fn new(title: &str, x_label: &str, series_labels: Vec<String>) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            series_labels,
            params: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn push_row(&mut self, x: f64, values: Vec<f64>) -> Result<(), CliError> {
        if values.len() != self.series_labels.len() {
            return Err(CliError::Internal(format!(
                "row at x = {x} has {} values for {} series",
                values.len(),
                self.series_labels.len()
            )));
        }
        if let Some((last, _)) = self.rows.last() {
            if !(x > *last) {
                return Err(CliError::Internal(format!(
                    "x values must increase strictly ({x} after {last})"
                )));
            }
        }
        self.rows.push((x, values));
        Ok(())
    }

    /// Values of one series, by label.
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let k = self.series_labels.iter().position(|l| l == label)?;
        Some(self.rows.iter().map(|(_, v)| v[k]).collect())
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|(x, _)| *x).collect()
    }

    /// Appends a series, one value per existing row.
    pub fn add_series(&mut self, label: &str, values: Vec<f64>) -> Result<(), CliError> {
        if values.len() != self.rows.len() {
            return Err(CliError::Internal(format!(
                "series {label} has {} values for {} rows",
                values.len(),
                self.rows.len()
            )));
        }
        self.series_labels.push(label.to_string());
        for ((_, row), v) in self.rows.iter_mut().zip(values) {
            row.push(v);
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# title: {}", self.title);
        let _ = writeln!(s, "# x_label: {}", self.x_label);
        for (k, v) in &self.params {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let mut header = vec![self.x_label.clone()];
        header.extend(self.series_labels.iter().cloned());
        let _ = writeln!(s, "{}", header.join(","));
        for (x, vals) in &self.rows {
            let mut fields = vec![format_number(*x)];
            fields.extend(vals.iter().map(|v| format_number(*v)));
            let _ = writeln!(s, "{}", fields.join(","));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut title = None;
        let mut x_label = None;
        let mut params = Vec::new();
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let lineno = lineno + 1;
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once(": ").ok_or_else(|| CliError::Parse {
                    line: lineno,
                    field: "metadata".into(),
                    message: "expected `# key: value`".into(),
                })?;
                match k {
                    "title" => title = Some(v.to_string()),
                    "x_label" => x_label = Some(v.to_string()),
                    _ => params.push((k.to_string(), v.to_string())),
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            match &header {
                None => header = Some(fields.iter().map(|f| f.to_string()).collect()),
                Some(h) => {
                    if fields.len() != h.len() {
                        return Err(CliError::Parse {
                            line: lineno,
                            field: "row".into(),
                            message: format!("expected {} fields, found {}", h.len(), fields.len()),
                        });
                    }
                    let mut nums = Vec::with_capacity(fields.len());
                    for (f, name) in fields.iter().zip(h) {
                        nums.push(f.parse::<f64>().map_err(|_| CliError::Parse {
                            line: lineno,
                            field: name.clone(),
                            message: format!("`{f}` is not a number"),
                        })?);
                    }
                    let x = nums.remove(0);
                    rows.push((x, nums));
                }
            }
        }
        let header = header.ok_or_else(|| CliError::Parse {
            line: 0,
            field: "header".into(),
            message: "missing header row".into(),
        })?;
        let mut table = CurveTable {
            title: title.unwrap_or_default(),
            x_label: x_label.unwrap_or_else(|| header[0].clone()),
            series_labels: header[1..].to_vec(),
            params,
            rows: Vec::new(),
        };
        for (x, v) in rows {
            table.push_row(x, v)?;
        }
        Ok(table)
    }
}

/// Shortest decimal form that reads back to the same double.
pub fn format_number(v: f64) -> String {
    format!("{v:?}")
}
