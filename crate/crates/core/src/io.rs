//! CSV schemas shared by the CLI and the test suite.
//!
//! Floats are written with Rust's shortest round-tripping representation, so
//! reading a file back reproduces the original values bit for bit.
//!
//! * trajectory: `t,x,y,z,u,v` (`z` empty for planar paths; `u`,`v` empty
//!   where the coordinate inversion is undefined or off-plane),
//! * events: `t,kind`,
//! * scalar grid: `x,y,value` (row-major, `x` fastest),
//! * vector grid: `x,y,bx,by`,
//! * ensemble summary: `x,y,count`.

use std::io::{self, BufRead, Write};

use crate::sim::Histogram;
use crate::trajectory::{Event, EventKind, Trajectory};

fn parse_f64(field: &str, line: usize) -> io::Result<f64> {
    field.trim().parse::<f64>().map_err(|e| {
        io::Error::new(
            io::ErrorKind::InvalidData,
            format!("line {line}: bad float {field:?}: {e}"),
        )
    })
}

fn parse_opt_f64(field: &str, line: usize) -> io::Result<Option<f64>> {
    let t = field.trim();
    if t.is_empty() {
        Ok(None)
    } else {
        parse_f64(t, line).map(Some)
    }
}

/// Writes a trajectory under the `t,x,y,z,u,v` schema.
pub fn write_trajectory<W: Write>(w: &mut W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "t,x,y,z,u,v")?;
    for (i, (&t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let z = if traj.dimension == 3 {
            format!("{}", s[2])
        } else {
            String::new()
        };
        let (u, v) = match traj.uv_trace.as_ref().and_then(|tr| tr[i]) {
            Some((u, v)) => (format!("{u}"), format!("{v}")),
            None => (String::new(), String::new()),
        };
        writeln!(w, "{},{},{},{},{},{}", t, s[0], s[1], z, u, v)?;
    }
    Ok(())
}

/// Reads a trajectory written by [`write_trajectory`]. The dimension is
/// inferred from the `z` column; events live in their own file.
pub fn read_trajectory<R: BufRead>(r: R) -> io::Result<Trajectory> {
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut uv = Vec::new();
    let mut dim = 2;
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim() != "t,x,y,z,u,v" {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("unexpected trajectory header {line:?}"),
                ));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {idx}: expected 6 fields, got {}", fields.len()),
            ));
        }
        times.push(parse_f64(fields[0], idx)?);
        let x = parse_f64(fields[1], idx)?;
        let y = parse_f64(fields[2], idx)?;
        let z = parse_opt_f64(fields[3], idx)?;
        if z.is_some() {
            dim = 3;
        }
        states.push([x, y, z.unwrap_or(0.0)]);
        let u = parse_opt_f64(fields[4], idx)?;
        let v = parse_opt_f64(fields[5], idx)?;
        uv.push(match (u, v) {
            (Some(u), Some(v)) => Some((u, v)),
            _ => None,
        });
    }
    let any_uv = uv.iter().any(|s| s.is_some());
    Ok(Trajectory {
        times,
        states,
        dimension: dim,
        events: Vec::new(),
        uv_trace: if any_uv { Some(uv) } else { None },
    })
}

/// Writes the event list under the `t,kind` schema.
pub fn write_events<W: Write>(w: &mut W, events: &[Event]) -> io::Result<()> {
    writeln!(w, "t,kind")?;
    for e in events {
        writeln!(w, "{},{}", e.t, e.kind.as_str())?;
    }
    Ok(())
}

/// Reads an event list written by [`write_events`].
pub fn read_events<R: BufRead>(r: R) -> io::Result<Vec<Event>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let (t, kind) = line.split_once(',').ok_or_else(|| {
            io::Error::new(io::ErrorKind::InvalidData, format!("line {idx}: missing comma"))
        })?;
        let kind = EventKind::parse(kind.trim()).ok_or_else(|| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {idx}: unknown event kind {kind:?}"),
            )
        })?;
        out.push(Event { t: parse_f64(t, idx)?, kind });
    }
    Ok(out)
}

/// One row of a scalar grid file.
pub type ScalarRow = [f64; 3];
/// One row of a vector grid file.
pub type VectorRow = [f64; 4];

/// Writes `x,y,value` rows (the iterator supplies them row-major).
pub fn write_scalar_grid<W: Write>(
    w: &mut W,
    rows: impl IntoIterator<Item = ScalarRow>,
) -> io::Result<()> {
    writeln!(w, "x,y,value")?;
    for r in rows {
        writeln!(w, "{},{},{}", r[0], r[1], r[2])?;
    }
    Ok(())
}

/// Reads a scalar grid file back into its rows.
pub fn read_scalar_grid<R: BufRead>(r: R) -> io::Result<Vec<ScalarRow>> {
    read_numeric_rows(r, "x,y,value")
}

/// Writes `x,y,bx,by` rows.
pub fn write_vector_grid<W: Write>(
    w: &mut W,
    rows: impl IntoIterator<Item = VectorRow>,
) -> io::Result<()> {
    writeln!(w, "x,y,bx,by")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r[0], r[1], r[2], r[3])?;
    }
    Ok(())
}

/// Reads a vector grid file back into its rows.
pub fn read_vector_grid<R: BufRead>(r: R) -> io::Result<Vec<VectorRow>> {
    read_numeric_rows(r, "x,y,bx,by")
}

fn read_numeric_rows<R: BufRead, const N: usize>(r: R, header: &str) -> io::Result<Vec<[f64; N]>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim() != header {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("expected header {header:?}, got {line:?}"),
                ));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != N {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {idx}: expected {N} fields, got {}", fields.len()),
            ));
        }
        let mut row = [0.0; N];
        for (i, f) in fields.iter().enumerate() {
            row[i] = parse_f64(f, idx)?;
        }
        out.push(row);
    }
    Ok(out)
}

/// Writes a generic numeric table under an arbitrary comma-joined header
/// (used for curve samplers and nodal-curve exports).
pub fn write_table<W: Write>(
    w: &mut W,
    header: &str,
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> io::Result<()> {
    writeln!(w, "{header}")?;
    let width = header.split(',').count();
    for row in rows {
        if row.len() != width {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("row width {} does not match header {header:?}", row.len()),
            ));
        }
        let mut first = true;
        for v in row {
            if !first {
                write!(w, ",")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads a table written by [`write_table`], checking the header.
pub fn read_table<R: BufRead>(r: R, header: &str) -> io::Result<Vec<Vec<f64>>> {
    let width = header.split(',').count();
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim() != header {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("expected header {header:?}, got {line:?}"),
                ));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {idx}: expected {width} fields, got {}", fields.len()),
            ));
        }
        let mut row = Vec::with_capacity(width);
        for f in fields {
            row.push(parse_f64(f, idx)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Writes an ensemble histogram under the `x,y,count` schema (cell centers).
pub fn write_histogram<W: Write>(w: &mut W, h: &Histogram) -> io::Result<()> {
    writeln!(w, "x,y,count")?;
    for j in 0..h.ny {
        let y = h.ymin + (h.ymax - h.ymin) * (j as f64 + 0.5) / h.ny as f64;
        for i in 0..h.nx {
            let x = h.xmin + (h.xmax - h.xmin) * (i as f64 + 0.5) / h.nx as f64;
            writeln!(w, "{},{},{}", x, y, h.counts[j * h.nx + i])?;
        }
    }
    Ok(())
}

/// Reads `x,y,count` rows back.
pub fn read_histogram_rows<R: BufRead>(r: R) -> io::Result<Vec<(f64, f64, u32)>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim() != "x,y,count" {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("unexpected histogram header {line:?}"),
                ));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {idx}: expected 3 fields"),
            ));
        }
        let count = fields[2].trim().parse::<u32>().map_err(|e| {
            io::Error::new(io::ErrorKind::InvalidData, format!("line {idx}: {e}"))
        })?;
        out.push((parse_f64(fields[0], idx)?, parse_f64(fields[1], idx)?, count));
    }
    Ok(out)
}
