//! Persistence: the `.dten` binary tensor format, raw payload ingestion,
//! model directories and CSV convergence traces.
//!
//! `.dten` layout (all integers little-endian, independent of host):
//!
//! ```text
//! bytes 0..4    magic "DTEN"
//! bytes 4..8    u32 version = 1
//! bytes 8..12   u32 order d
//! then          d x u64 dims
//! then          prod(dims) x f64 payload, IEEE-754 LE,
//!               first-index-fastest order
//! ```
//!
//! Round trips are bit-exact, including negative zero and subnormals.
//! NaN/Inf are rejected on write and on read.
//!
//! CSV traces use the header `outer,mode,inner,elapsed_s,rel_err` and render
//! floats with 17 significant digits, which is lossless for f64.

use crate::algorithms::{ConvergenceTrace, TraceRecord, TuckerModel};
use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;
use crate::tensor::DenseTensor;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const DTEN_MAGIC: [u8; 4] = *b"DTEN";
pub const DTEN_VERSION: u32 = 1;

/// Renders a float with 17 significant digits (lossless for f64).
pub fn format_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

pub fn write_dten<P: AsRef<Path>>(path: P, t: &DenseTensor) -> Result<()> {
    if !t.data().iter().all(|v| v.is_finite()) {
        return Err(TuckerError::NonFinite(
            "refusing to write NaN/Inf payload".into(),
        ));
    }
    let f = File::create(path)?;
    let mut w = BufWriter::new(f);
    w.write_all(&DTEN_MAGIC)?;
    w.write_all(&DTEN_VERSION.to_le_bytes())?;
    w.write_all(&(t.order() as u32).to_le_bytes())?;
    for &n in t.dims() {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    for &v in t.data() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_exact_or(r: &mut impl Read, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            TuckerError::Truncated(format!("file ended inside {}", what))
        } else {
            TuckerError::Io(e)
        }
    })
}

pub fn read_dten<P: AsRef<Path>>(path: P) -> Result<DenseTensor> {
    let f = File::open(path)?;
    let total_len = f.metadata()?.len();
    let mut r = BufReader::new(f);

    let mut magic = [0u8; 4];
    read_exact_or(&mut r, &mut magic, "magic")?;
    if magic != DTEN_MAGIC {
        return Err(TuckerError::BadMagic);
    }
    let mut u32buf = [0u8; 4];
    read_exact_or(&mut r, &mut u32buf, "version")?;
    let version = u32::from_le_bytes(u32buf);
    if version != DTEN_VERSION {
        return Err(TuckerError::VersionMismatch(version));
    }
    read_exact_or(&mut r, &mut u32buf, "order")?;
    let order = u32::from_le_bytes(u32buf) as usize;
    if order == 0 {
        return Err(TuckerError::Format("order must be at least 1".into()));
    }
    let mut dims = Vec::with_capacity(order);
    let mut u64buf = [0u8; 8];
    for _ in 0..order {
        read_exact_or(&mut r, &mut u64buf, "dims")?;
        let n = u64::from_le_bytes(u64buf);
        if n == 0 {
            return Err(TuckerError::Format("zero dimension in header".into()));
        }
        dims.push(n as usize);
    }
    let count: usize = dims.iter().product();
    let header_len = 12 + 8 * order as u64;
    let expected_len = header_len + 8 * count as u64;
    if total_len > expected_len {
        return Err(TuckerError::LengthMismatch(format!(
            "file has {} bytes, header announces {}",
            total_len, expected_len
        )));
    }

    let mut data = Vec::with_capacity(count);
    let mut f64buf = [0u8; 8];
    for _ in 0..count {
        read_exact_or(&mut r, &mut f64buf, "payload")?;
        let v = f64::from_le_bytes(f64buf);
        if !v.is_finite() {
            return Err(TuckerError::NonFinite("payload entry".into()));
        }
        data.push(v);
    }
    // dims validated above; construct without re-scanning finiteness
    let _ = header_len;
    Ok(DenseTensor::from_parts(dims, data))
}

/// Reads a bare payload of `8 * prod(dims)` bytes of little-endian f64 in
/// first-index-fastest order.
pub fn import_raw<P: AsRef<Path>>(path: P, dims: &[usize]) -> Result<DenseTensor> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(TuckerError::InvalidArgument(
            "dims must be nonempty and positive".into(),
        ));
    }
    let count: usize = dims.iter().product();
    let f = File::open(path)?;
    let total = f.metadata()?.len();
    if total != 8 * count as u64 {
        return Err(TuckerError::LengthMismatch(format!(
            "raw file has {} bytes, dims {:?} need {}",
            total,
            dims,
            8 * count
        )));
    }
    let mut r = BufReader::new(f);
    let mut data = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        read_exact_or(&mut r, &mut buf, "raw payload")?;
        let v = f64::from_le_bytes(buf);
        if !v.is_finite() {
            return Err(TuckerError::NonFinite("raw payload entry".into()));
        }
        data.push(v);
    }
    Ok(DenseTensor::from_parts(dims.to_vec(), data))
}

pub const TRACE_CSV_HEADER: &str = "outer,mode,inner,elapsed_s,rel_err";

pub fn write_trace_csv<P: AsRef<Path>>(path: P, trace: &ConvergenceTrace) -> Result<()> {
    let f = File::create(path)?;
    let mut w = BufWriter::new(f);
    writeln!(w, "{}", TRACE_CSV_HEADER)?;
    for rec in &trace.records {
        writeln!(
            w,
            "{},{},{},{},{}",
            rec.outer,
            rec.mode,
            rec.inner,
            format_f64(rec.elapsed_s),
            format_f64(rec.rel_err)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a trace CSV written by [`write_trace_csv`] back into records.
pub fn read_trace_csv<P: AsRef<Path>>(path: P) -> Result<Vec<TraceRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_CSV_HEADER => {}
        other => {
            return Err(TuckerError::Format(format!(
                "bad trace header: {:?}",
                other
            )))
        }
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(TuckerError::Format(format!(
                "line {}: expected 5 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| TuckerError::Format(format!("line {}: {}", lineno + 2, e)))
        };
        let parse_f64 = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| TuckerError::Format(format!("line {}: {}", lineno + 2, e)))
        };
        out.push(TraceRecord {
            outer: parse_usize(fields[0])?,
            mode: parse_usize(fields[1])?,
            inner: parse_usize(fields[2])?,
            elapsed_s: parse_f64(fields[3])?,
            rel_err: parse_f64(fields[4])?,
        });
    }
    Ok(out)
}

/// Writes a model directory: `core.dten` plus `factor_1.dten` ..
/// `factor_d.dten`, each factor stored as an order-2 tensor.
pub fn write_model<P: AsRef<Path>>(dir: P, m: &TuckerModel) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    write_dten(dir.join("core.dten"), &m.core)?;
    for (i, f) in m.factors.iter().enumerate() {
        let t = DenseTensor::new(vec![f.rows(), f.cols()], f.data().to_vec())?;
        write_dten(dir.join(format!("factor_{}.dten", i + 1)), &t)?;
    }
    Ok(())
}

/// Reads a model directory written by [`write_model`].
pub fn read_model<P: AsRef<Path>>(dir: P) -> Result<TuckerModel> {
    let dir = dir.as_ref();
    let core = read_dten(dir.join("core.dten"))?;
    let d = core.order();
    let mut factors = Vec::with_capacity(d);
    for i in 0..d {
        let t = read_dten(dir.join(format!("factor_{}.dten", i + 1)))?;
        if t.order() != 2 {
            return Err(TuckerError::Format(format!(
                "factor_{}.dten is not a matrix",
                i + 1
            )));
        }
        let rows = t.dims()[0];
        let cols = t.dims()[1];
        if cols != core.dims()[i] {
            return Err(TuckerError::Format(format!(
                "factor_{} has {} columns but core dim {} is {}",
                i + 1,
                cols,
                i + 1,
                core.dims()[i]
            )));
        }
        factors.push(Matrix::from_vec(rows, cols, t.into_data())?);
    }
    Ok(TuckerModel { core, factors })
}
