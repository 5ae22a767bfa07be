//! Binary dump of a [`GridWavefunction`]: the 8-byte magic `QWPLAB01`
//! followed by three little-endian `f64` columns `x[0..n]`, `Re ψ[0..n]`,
//! `Im ψ[0..n]`.

use std::io::{Read, Write};

use rustfft::num_complex::Complex;

use super::grid::{Grid, GridWavefunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 8] = b"QWPLAB01";

pub fn write_snapshot<T: Scalar, W: Write>(psi: &GridWavefunction<T>, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    let grid = psi.grid();
    let mut buf = Vec::with_capacity(24 * grid.len());
    for x in grid.points() {
        buf.extend_from_slice(&x.to_f64_lossy().to_le_bytes());
    }
    for z in psi.samples() {
        buf.extend_from_slice(&z.re.to_f64_lossy().to_le_bytes());
    }
    for z in psi.samples() {
        buf.extend_from_slice(&z.im.to_f64_lossy().to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn read_snapshot<T: Scalar, R: Read>(mut input: R) -> Result<GridWavefunction<T>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < 8 || &bytes[..8] != MAGIC {
        return Err(Error::Format("missing QWPLAB01 header".into()));
    }
    let body = &bytes[8..];
    if body.len() % 24 != 0 {
        return Err(Error::Format(format!("body of {} bytes is not three f64 columns", body.len())));
    }
    let n = body.len() / 24;
    let values: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    let (xs, rest) = values.split_at(n);
    let (re, im) = rest.split_at(n);
    if n < 2 {
        return Err(Error::Format("too few points".into()));
    }
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let grid = Grid::new(T::lit(xs[0]), T::lit(xs[0] + dx * n as f64), n)?;
    let samples = re.iter().zip(im).map(|(&r, &i)| Complex::new(T::lit(r), T::lit(i))).collect();
    GridWavefunction::new(grid, samples)
}
