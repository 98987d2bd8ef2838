//! Field persistence: a little-endian binary format and a plain CSV form.
//!
//! Binary layout:
//!
//! ```text
//! magic    4 bytes   "WGF1" (1D real) or "WGF2" (2D complex)
//! version  u32       1
//! L        f64       x half-width
//! nx, ny   u64, u64
//! p        f64
//! data     f64 ...   1D: nx values; 2D: nx*ny (re, im) pairs, x slow
//! ```
//!
//! CSV: a `kind,x_halfwidth,nx,ny,p` header row, one metadata row, a column
//! row (`value` or `re,im`) and one row per sample in the same order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{Field1D, Field2D};
use crate::grid::{make_grid, GridSpec};

const MAGIC_1D: &[u8; 4] = b"WGF1";
const MAGIC_2D: &[u8; 4] = b"WGF2";
const VERSION: u32 = 1;

fn write_header(w: &mut impl Write, magic: &[u8; 4], g: &GridSpec) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&g.x_halfwidth.to_le_bytes())?;
    w.write_all(&(g.nx as u64).to_le_bytes())?;
    w.write_all(&(g.ny as u64).to_le_bytes())?;
    w.write_all(&g.p.to_le_bytes())?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("truncated field file".into()),
        _ => Error::Io(e),
    })?;
    Ok(b)
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array(r)?))
}

fn read_header(r: &mut impl Read, magic: &[u8; 4]) -> Result<GridSpec> {
    let m: [u8; 4] = read_array(r)?;
    if &m != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&m),
            String::from_utf8_lossy(magic)
        )));
    }
    let version = u32::from_le_bytes(read_array(r)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let l = read_f64(r)?;
    let nx = u64::from_le_bytes(read_array(r)?) as usize;
    let ny = u64::from_le_bytes(read_array(r)?) as usize;
    let p = read_f64(r)?;
    make_grid(l, nx, ny, p).map_err(|e| Error::Format(format!("invalid grid in header: {e}")))
}

pub fn write_field1d(w: &mut impl Write, f: &Field1D) -> Result<()> {
    write_header(w, MAGIC_1D, f.grid())?;
    for v in f.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field1d(r: &mut impl Read) -> Result<Field1D> {
    let g = read_header(r, MAGIC_1D)?;
    let values = (0..g.nx).map(|_| read_f64(r)).collect::<Result<Vec<_>>>()?;
    Field1D::new(g, values)
}

pub fn write_field2d(w: &mut impl Write, f: &Field2D) -> Result<()> {
    write_header(w, MAGIC_2D, f.grid())?;
    for z in f.values() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field2d(r: &mut impl Read) -> Result<Field2D> {
    let g = read_header(r, MAGIC_2D)?;
    let values = (0..g.len())
        .map(|_| Ok(C64::new(read_f64(r)?, read_f64(r)?)))
        .collect::<Result<Vec<_>>>()?;
    Field2D::new(g, values)
}

pub fn save_field2d(path: &Path, f: &Field2D) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field2d(&mut w, f)?;
    w.flush()?;
    Ok(())
}

pub fn load_field2d(path: &Path) -> Result<Field2D> {
    read_field2d(&mut BufReader::new(File::open(path)?))
}

pub fn save_field1d(path: &Path, f: &Field1D) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field1d(&mut w, f)?;
    w.flush()?;
    Ok(())
}

pub fn load_field1d(path: &Path) -> Result<Field1D> {
    read_field1d(&mut BufReader::new(File::open(path)?))
}

fn csv_meta(kind: &str, g: &GridSpec) -> String {
    format!("kind,x_halfwidth,nx,ny,p\n{kind},{},{},{},{}\n", g.x_halfwidth, g.nx, g.ny, g.p)
}

/// Shortest round-trip decimal form, so CSV output is exact and deterministic.
pub fn field2d_to_csv(f: &Field2D) -> String {
    let mut s = csv_meta("field2d", f.grid());
    s.push_str("re,im\n");
    for z in f.values() {
        s.push_str(&format!("{},{}\n", z.re, z.im));
    }
    s
}

pub fn field1d_to_csv(f: &Field1D) -> String {
    let mut s = csv_meta("field1d", f.grid());
    s.push_str("value\n");
    for v in f.values() {
        s.push_str(&format!("{v}\n"));
    }
    s
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Format(format!("line {line}: cannot parse {s:?} as a number")))
}

fn csv_grid(lines: &mut impl Iterator<Item = (usize, String)>, kind: &str) -> Result<GridSpec> {
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| Error::Format(format!("missing {what} row")))
    };
    let (_, header) = next("header")?;
    if header.trim() != "kind,x_halfwidth,nx,ny,p" {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    let (ln, meta) = next("metadata")?;
    let cols: Vec<&str> = meta.trim().split(',').collect();
    if cols.len() != 5 || cols[0] != kind {
        return Err(Error::Format(format!("line {ln}: expected {kind} metadata, got {meta:?}")));
    }
    let nx = cols[2].parse().map_err(|_| Error::Format(format!("line {ln}: bad nx")))?;
    let ny = cols[3].parse().map_err(|_| Error::Format(format!("line {ln}: bad ny")))?;
    let g = make_grid(parse_f64(cols[1], ln)?, nx, ny, parse_f64(cols[4], ln)?)
        .map_err(|e| Error::Format(format!("line {ln}: {e}")))?;
    next("column")?;
    Ok(g)
}

pub fn field2d_from_csv(r: impl BufRead) -> Result<Field2D> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l.unwrap_or_default()));
    let g = csv_grid(&mut lines, "field2d")?;
    let mut values = Vec::with_capacity(g.len());
    for (ln, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::Format(format!("line {ln}: expected re,im")))?;
        values.push(C64::new(parse_f64(re, ln)?, parse_f64(im, ln)?));
    }
    Field2D::new(g, values).map_err(|e| Error::Format(e.to_string()))
}

pub fn field1d_from_csv(r: impl BufRead) -> Result<Field1D> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l.unwrap_or_default()));
    let g = csv_grid(&mut lines, "field1d")?;
    let values = lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(ln, l)| parse_f64(&l, ln))
        .collect::<Result<Vec<_>>>()?;
    Field1D::new(g, values).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip_2d() {
        let g = make_grid(10.0, 16, 4, 3.0).unwrap();
        let f = Field2D::from_fn(g, |x, y| C64::new(x.sin(), y.cos() * 1e-300));
        let mut buf = Vec::new();
        write_field2d(&mut buf, &f).unwrap();
        assert_eq!(buf.len(), 40 + 16 * 4 * 16);
        assert_eq!(read_field2d(&mut buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn rejects_wrong_magic_and_truncation() {
        let g = make_grid(10.0, 16, 2, 3.0).unwrap();
        let mut buf = Vec::new();
        write_field1d(&mut buf, &Field1D::zeros(g)).unwrap();
        assert!(matches!(read_field2d(&mut buf.as_slice()), Err(Error::Format(_))));
        buf.truncate(buf.len() - 3);
        assert!(matches!(read_field1d(&mut buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn csv_round_trip_1d() {
        let g = make_grid(10.0, 16, 2, 2.5).unwrap();
        let f = Field1D::from_fn(g, |x| (-x * x).exp() / 3.0);
        let s = field1d_to_csv(&f);
        assert!(s.starts_with("kind,x_halfwidth,nx,ny,p\nfield1d,10,16,2,2.5\nvalue\n"));
        assert_eq!(field1d_from_csv(s.as_bytes()).unwrap(), f);
    }
}
