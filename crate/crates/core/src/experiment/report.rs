//! Experiment reports and their on-disk forms.
//!
//! `csv` writes `<kind>.csv` (the table, fixed column order) and
//! `<kind>_summary.csv` (`key,value,relation,bound,pass`). `text` writes
//! `<kind>.json` with the config echo, scalars and table. Timings are kept
//! out of every file so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

/// One named number, with its declared bound when it is checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarResult {
    pub key: String,
    pub value: f64,
    pub relation: Option<Relation>,
    pub bound: Option<f64>,
    pub pass: bool,
}

impl ScalarResult {
    pub fn info(key: &str, value: f64) -> Self {
        Self {
            key: key.into(),
            value,
            relation: None,
            bound: None,
            pass: true,
        }
    }

    pub fn at_most(key: &str, value: f64, bound: f64) -> Self {
        Self {
            key: key.into(),
            value,
            relation: Some(Relation::AtMost),
            bound: Some(bound),
            pass: value <= bound,
        }
    }

    pub fn at_least(key: &str, value: f64, bound: f64) -> Self {
        Self {
            key: key.into(),
            value,
            relation: Some(Relation::AtLeast),
            bound: Some(bound),
            pass: value >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: String,
    pub seed: u64,
    /// Resolved configuration, keys sorted.
    pub config: serde_json::Value,
    pub scalars: Vec<ScalarResult>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Wall-clock seconds per stage; reported on stderr only.
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.scalars.iter().all(|s| s.pass)
    }

    pub fn scalar(&self, key: &str) -> Option<&ScalarResult> {
        self.scalars.iter().find(|s| s.key == key)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Text,
}

fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        "nan".into()
    }
}

pub fn table_csv(report: &ExperimentReport) -> String {
    let mut out = report.columns.join(",");
    out.push('\n');
    for row in &report.rows {
        let cells: Vec<String> = row.iter().map(|v| number(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("key,value,relation,bound,pass\n");
    for s in &report.scalars {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.key,
            number(s.value),
            s.relation.map(|r| r.symbol()).unwrap_or(""),
            s.bound.map(number).unwrap_or_default(),
            s.pass
        );
    }
    out
}

pub fn summary_json(report: &ExperimentReport) -> Result<String> {
    let mut text =
        serde_json::to_string_pretty(report).map_err(|e| LabError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Writes `contents` beside `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| LabError::Io(format!("{} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Writes the report into `dir`; returns the paths written.
pub fn emit_report(report: &ExperimentReport, format: OutputFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files: Vec<(PathBuf, String)> = match format {
        OutputFormat::Csv => vec![
            (dir.join(format!("{}.csv", report.kind)), table_csv(report)),
            (dir.join(format!("{}_summary.csv", report.kind)), summary_csv(report)),
        ],
        OutputFormat::Text => vec![(dir.join(format!("{}.json", report.kind)), summary_json(report)?)],
    };
    for (path, text) in &files {
        write_atomic(path, text)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> ExperimentReport {
        ExperimentReport {
            kind: "classify".into(),
            seed: 0,
            config: serde_json::json!({"b": 1, "a": 2}),
            scalars: vec![ScalarResult::at_most("x", 1.0, 2.0), ScalarResult::info("y", 0.5)],
            columns: vec!["lambda".into(), "ratio".into()],
            rows: vec![],
            timings: vec![("run".into(), 1.0)],
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(table_csv(&empty()), "lambda,ratio\n");
    }

    #[test]
    fn json_is_sorted_and_has_no_timings() {
        let text = summary_json(&empty()).unwrap();
        assert!(!text.contains("timings"));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }

    #[test]
    fn checks_set_pass_flags() {
        assert!(ScalarResult::at_least("m", 0.5, 0.48).pass);
        assert!(!ScalarResult::at_most("m", 0.5, 0.48).pass);
        let r = empty();
        assert!(r.all_pass());
        assert_eq!(summary_csv(&r).lines().nth(1).unwrap(), "x,1.0,<=,2.0,true");
    }
}
