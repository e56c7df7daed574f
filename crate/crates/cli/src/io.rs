use std::fs;
use std::io::Write;
use std::path::Path;

use kcontract::{Matrix, Trajectory};

use crate::CliError;

/// Reads a matrix from JSON (nested arrays) or headerless CSV.
pub fn read_matrix(path: &Path) -> Result<Matrix<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<Matrix<f64>, String> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(|e| e.to_string());
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| format!("line {}: {f:?} is not a number", i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("no matrix rows".into());
    }
    Matrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// JSON nested arrays, one row per line.
pub fn matrix_json(m: &Matrix<f64>) -> String {
    let rows: Vec<String> = m.to_rows().iter().map(|r| serde_json::to_string(r).expect("finite entries")).collect();
    format!("[\n  {}\n]\n", rows.join(",\n  "))
}

pub fn matrix_csv(m: &Matrix<f64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in m.to_rows() {
        w.write_record(r.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii")
}

/// `t,x1,...,xn[,logvol]`, volumes as natural logarithms.
pub fn trajectory_csv(traj: &Trajectory<f64>) -> String {
    let n = traj.states.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    if traj.volumes.is_some() {
        header.push("logvol".into());
    }
    w.write_record(&header).expect("in-memory write");
    for (i, (t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut rec = vec![t.to_string()];
        rec.extend(x.iter().map(|v| v.to_string()));
        if let Some(v) = &traj.volumes {
            rec.push(v[i].ln().to_string());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii")
}

/// Writes via a temporary file in the target directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let err = |e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
