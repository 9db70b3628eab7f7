//! Grid fields on disk: raw little-endian `f64` values in row-major order,
//! described by a JSON sidecar.

use std::path::{Path, PathBuf};

use leastgrad_core::solver::GridField;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{read_bytes, read_text, write_bytes};
use crate::number::F17;

pub const FIELD_FORMAT: &str = "leastgrad-field/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub format: String,
    pub provenance: String,
    pub depth: usize,
    /// Cells along each side; the file holds `side * side` values.
    pub side: usize,
    /// Cell width in disk units.
    pub h: F17,
    /// Centre of cell `(0, 0)`; both coordinates are equal.
    pub origin: F17,
    pub dtype: String,
    pub order: String,
    /// File name of the raw values, relative to the sidecar.
    pub data: String,
}

pub fn encode(field: &GridField) -> Vec<u8> {
    field.values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode(bytes: &[u8], side: usize) -> std::result::Result<Vec<f64>, String> {
    if bytes.len() != side * side * 8 {
        return Err(format!("expected {} bytes, found {}", side * side * 8, bytes.len()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes")))
        .collect())
}

/// Writes `stem.bin` and `stem.json` for `path = stem.bin`; returns the
/// sidecar path.
pub fn save(path: &Path, field: &GridField, depth: usize, provenance: &str) -> Result<PathBuf> {
    let data = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("{}: not a file path", path.display())))?
        .to_string_lossy()
        .into_owned();
    let header = FieldHeader {
        format: FIELD_FORMAT.to_string(),
        provenance: provenance.to_string(),
        depth,
        side: field.side,
        h: F17(field.h),
        origin: F17(-0.5 * (field.side as f64 - 1.0) * field.h),
        dtype: "f64-le".to_string(),
        order: "row-major, y increasing by row".to_string(),
        data,
    };
    let sidecar = path.with_extension("json");
    write_bytes(path, &encode(field))?;
    let mut text = serde_json::to_string_pretty(&header).expect("header serializes");
    text.push('\n');
    write_bytes(&sidecar, text.as_bytes())?;
    Ok(sidecar)
}

/// Reads a field back from its sidecar.
pub fn load(sidecar: &Path) -> Result<(FieldHeader, GridField)> {
    let header: FieldHeader = serde_json::from_str(&read_text(sidecar)?).map_err(|e| CliError::format(sidecar, e))?;
    if header.format != FIELD_FORMAT {
        return Err(CliError::format(sidecar, format!("unknown format {:?}", header.format)));
    }
    let data = sidecar.with_file_name(&header.data);
    let values = decode(&read_bytes(&data)?, header.side).map_err(|e| CliError::format(&data, e))?;
    let field = GridField {
        side: header.side,
        h: header.h.0,
        values,
    };
    Ok((header, field))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_values_round_trip() {
        let field = GridField {
            side: 3,
            h: 2.0 / 3.0,
            values: vec![0.0, -0.0, 1.0, 1.0 / 3.0, 5e-324, f64::MAX, 0.1, 0.2, 0.3],
        };
        let back = decode(&encode(&field), 3).unwrap();
        let same = back.iter().zip(&field.values).all(|(a, b)| a.to_bits() == b.to_bits());
        assert!(same);
        assert!(decode(&encode(&field), 4).is_err());
        assert_eq!(&encode(&field)[16..24], &1.0f64.to_le_bytes());
    }
}
