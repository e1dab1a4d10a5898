use std::path::Path;

use hv_core::GridFunction;

use crate::error::{CliError, CliResult};

/// Reads a sampled function from CSV with header `t,value`.
pub fn read_grid_function(path: &Path) -> CliResult<GridFunction> {
    let shown = path.display().to_string();
    let bad = |message: String| CliError::Input { path: shown.clone(), message };
    let file = std::fs::File::open(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "value" {
        return Err(bad(format!("expected header `t,value`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let (mut nodes, mut values) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let parse = |i: usize| -> CliResult<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|e| bad(format!("row {}: `{}`: {e}", line + 2, &record[i])))
        };
        nodes.push(parse(0)?);
        values.push(parse(1)?);
    }
    if nodes.len() < 2 {
        return Err(bad("need at least two samples".into()));
    }
    GridFunction::from_samples(nodes, values).map_err(|e| bad(e.to_string()))
}
