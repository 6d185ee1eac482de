//! Minimal SVG rendering: polylines, grayscale heatmaps and a coarse quiver.
//! Decoration only; every figure has a CSV twin that the tests consume.

use std::io::{self, Write};

const W: f64 = 720.0;
const H: f64 = 540.0;
const PAD: f64 = 30.0;

struct Frame {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn from_points<'a>(pts: impl Iterator<Item = &'a [f64; 2]>) -> Self {
        let mut f = Frame { xmin: f64::INFINITY, xmax: f64::NEG_INFINITY, ymin: f64::INFINITY, ymax: f64::NEG_INFINITY };
        for p in pts {
            if p[0].is_finite() && p[1].is_finite() {
                f.xmin = f.xmin.min(p[0]);
                f.xmax = f.xmax.max(p[0]);
                f.ymin = f.ymin.min(p[1]);
                f.ymax = f.ymax.max(p[1]);
            }
        }
        if !(f.xmax > f.xmin) {
            f.xmin -= 1.0;
            f.xmax += 1.0;
        }
        if !(f.ymax > f.ymin) {
            f.ymin -= 1.0;
            f.ymax += 1.0;
        }
        f
    }

    fn x(&self, x: f64) -> f64 {
        PAD + (x - self.xmin) / (self.xmax - self.xmin) * (W - 2.0 * PAD)
    }

    // SVG y grows downwards.
    fn y(&self, y: f64) -> f64 {
        H - PAD - (y - self.ymin) / (self.ymax - self.ymin) * (H - 2.0 * PAD)
    }
}

fn open_svg<Wr: Write>(w: &mut Wr) -> io::Result<()> {
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )?;
    writeln!(w, r#"<rect width="{W}" height="{H}" fill="white"/>"#)
}

pub fn write_polyline<Wr: Write>(w: &mut Wr, pts: &[[f64; 2]]) -> io::Result<()> {
    write_polylines(w, std::slice::from_ref(&pts.to_vec()))
}

pub fn write_polylines<Wr: Write>(w: &mut Wr, curves: &[Vec<[f64; 2]>]) -> io::Result<()> {
    let frame = Frame::from_points(curves.iter().flatten());
    open_svg(w)?;
    for pts in curves {
        write!(w, r#"<polyline fill="none" stroke="black" stroke-width="1" points=""#)?;
        for p in pts {
            if p[0].is_finite() && p[1].is_finite() {
                write!(w, "{:.2},{:.2} ", frame.x(p[0]), frame.y(p[1]))?;
            }
        }
        writeln!(w, r#""/>"#)?;
    }
    writeln!(w, "</svg>")
}

/// Grayscale cells for `x,y,value` rows of an `nx * ny` grid (row-major).
pub fn write_heatmap<Wr: Write>(w: &mut Wr, nx: usize, ny: usize, rows: &[[f64; 3]]) -> io::Result<()> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in rows {
        if r[2].is_finite() {
            lo = lo.min(r[2]);
            hi = hi.max(r[2]);
        }
    }
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    open_svg(w)?;
    let cw = (W - 2.0 * PAD) / nx as f64;
    let ch = (H - 2.0 * PAD) / ny as f64;
    for (k, r) in rows.iter().enumerate() {
        let i = k % nx;
        let j = k / nx;
        let shade = if r[2].is_finite() {
            (255.0 * (1.0 - (r[2] - lo) / (hi - lo))) as u8
        } else {
            255
        };
        writeln!(
            w,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{shade})"/>"#,
            PAD + i as f64 * cw,
            H - PAD - (j + 1) as f64 * ch,
            cw + 0.5,
            ch + 0.5
        )?;
    }
    writeln!(w, "</svg>")
}

/// Downsampled arrows for `x,y,bx,by` rows.
pub fn write_quiver<Wr: Write>(w: &mut Wr, bbox: &[f64; 4], rows: &[[f64; 4]]) -> io::Result<()> {
    let frame = Frame { xmin: bbox[0], xmax: bbox[1], ymin: bbox[2], ymax: bbox[3] };
    let mut max_mag = 0.0f64;
    for r in rows {
        if r[2].is_finite() && r[3].is_finite() {
            max_mag = max_mag.max(r[2].hypot(r[3]));
        }
    }
    if max_mag == 0.0 {
        max_mag = 1.0;
    }
    let step = (rows.len() / 900).max(1);
    open_svg(w)?;
    for r in rows.iter().step_by(step) {
        if !(r[2].is_finite() && r[3].is_finite()) {
            continue;
        }
        let scale = 14.0 / max_mag;
        let (x0, y0) = (frame.x(r[0]), frame.y(r[1]));
        let (x1, y1) = (x0 + r[2] * scale, y0 - r[3] * scale);
        writeln!(
            w,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="black" stroke-width="0.7"/>"#
        )?;
    }
    writeln!(w, "</svg>")
}
