//! Named JSON reports and CSV tables, and how they reach disk or stdout.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// Floats carry 17 significant digits so the table round-trips.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: "<csv>".into(),
            source: e.into_error(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Everything one run produces, in production order.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub experiment: String,
    pub seed: Option<u64>,
    pub reports: Vec<(String, Value)>,
    pub tables: Vec<(String, Table)>,
    /// Names of guaranteed checks that failed.
    pub failed_checks: Vec<String>,
}

impl Artifacts {
    pub fn new(experiment: &str, seed: Option<u64>) -> Self {
        Artifacts {
            experiment: experiment.to_owned(),
            seed,
            ..Default::default()
        }
    }

    /// Stores `report` under `name`, stamped with the experiment name and seed.
    pub fn report(&mut self, name: &str, report: &impl Serialize) {
        let mut v = serde_json::to_value(report).expect("reports serialize to JSON");
        if let Value::Object(map) = &mut v {
            map.insert("experiment".into(), Value::from(self.experiment.as_str()));
            map.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        }
        self.reports.push((name.to_owned(), v));
    }

    pub fn table(&mut self, name: &str, table: Table) {
        self.tables.push((name.to_owned(), table));
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed_checks.push(name.to_owned());
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.reports
            .iter()
            .map(|(n, _)| n.as_str())
            .chain(self.tables.iter().map(|(n, _)| n.as_str()))
    }

    /// Keeps only the requested outputs; every requested name must exist.
    pub fn select(&mut self, wanted: &[String], command: &str) -> Result<(), CliError> {
        if wanted.is_empty() {
            return Ok(());
        }
        if let Some(missing) = wanted
            .iter()
            .find(|w| !self.names().any(|n| n == w.as_str()))
        {
            return Err(CliError::MissingOutput {
                experiment: self.experiment.clone(),
                command: command.to_owned(),
                name: missing.clone(),
            });
        }
        self.reports.retain(|(n, _)| wanted.contains(n));
        self.tables.retain(|(n, _)| wanted.contains(n));
        Ok(())
    }

    /// Writes `<name>.json` and `<name>.csv` files into `dir`.
    pub fn write_dir(&self, dir: &Path, json: bool, csv: bool) -> Result<Vec<String>, CliError> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        if json {
            for (name, v) in &self.reports {
                let path = dir.join(format!("{name}.json"));
                std::fs::write(&path, render_json(v)).map_err(io(&path))?;
                written.push(path.display().to_string());
            }
        }
        if csv {
            for (name, t) in &self.tables {
                let path = dir.join(format!("{name}.csv"));
                std::fs::write(&path, t.to_csv()?).map_err(io(&path))?;
                written.push(path.display().to_string());
            }
        }
        Ok(written)
    }

    /// Reports as one JSON object keyed by name; tables follow as `# name` blocks.
    pub fn print(&self, out: &mut impl Write, json: bool, csv: bool) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: "<stdout>".into(),
            source,
        };
        if json {
            let obj: serde_json::Map<String, Value> = self.reports.iter().cloned().collect();
            out.write_all(render_json(&Value::Object(obj)).as_bytes())
                .map_err(io)?;
        }
        if csv {
            for (name, t) in &self.tables {
                writeln!(out, "# {name}").map_err(io)?;
                out.write_all(t.to_csv()?.as_bytes()).map_err(io)?;
            }
        }
        Ok(())
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values render");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let x = 0.1f64 + 0.2;
        let s = Cell::from(x).render();
        assert_eq!(s, "3.0000000000000004e-1");
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new(&["iteration", "residual", "ratio"]);
        t.push(vec![0usize.into(), 1.0.into(), f64::NAN.into()]);
        assert_eq!(
            t.to_csv().unwrap(),
            "iteration,residual,ratio\n0,1.0000000000000000e0,NaN\n"
        );
    }

    #[test]
    fn reports_are_stamped_and_selected() {
        let mut a = Artifacts::new("demo", Some(7));
        a.report("one", &serde_json::json!({"x": 1}));
        a.table("two", Table::new(&["a"]));
        assert_eq!(a.reports[0].1["seed"], 7);
        assert_eq!(a.reports[0].1["experiment"], "demo");
        assert!(a.clone().select(&["three".into()], "synth").is_err());
        a.select(&["two".into()], "synth").unwrap();
        assert!(a.reports.is_empty() && a.tables.len() == 1);
    }
}
