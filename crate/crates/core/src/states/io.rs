//! State file format: `{"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}`
//! row-major, written with 17 significant digits so every f64 round-trips
//! to the identical bit pattern.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::qlinalg::{BipartiteDims, C64, CMatrix};
use crate::states::DensityMatrix;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: [usize; 2],
    matrix: Vec<Vec<[f64; 2]>>,
}

/// serde_json formatter that prints every float as `{:.16e}`
/// (17 significant digits).
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_string(rho: &DensityMatrix) -> String {
    let n = rho.dim();
    let matrix: Vec<Vec<[f64; 2]>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let z = rho.mat()[(r, c)];
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    let file = StateFile {
        dims: [rho.dims().da, rho.dims().db],
        matrix,
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    file.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn from_json_str(s: &str) -> Result<DensityMatrix> {
    let file: StateFile =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("state file: {e}")))?;
    let dims = BipartiteDims::new(file.dims[0], file.dims[1])?;
    let n = dims.total();
    if file.matrix.len() != n || file.matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Parse(format!(
            "matrix must be {n}x{n} for dims [{}, {}]",
            dims.da, dims.db
        )));
    }
    let mut mat = CMatrix::zeros(n, n);
    for (r, row) in file.matrix.iter().enumerate() {
        for (c, &[re, im]) in row.iter().enumerate() {
            mat[(r, c)] = C64::new(re, im);
        }
    }
    DensityMatrix::new(mat, dims)
}

pub fn write_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, to_json_string(rho))?;
    Ok(())
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    from_json_str(&text)
}
