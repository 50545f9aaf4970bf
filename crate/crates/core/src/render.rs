//! Grayscale rasterization of fields and binary PGM output.
//!
//! Quadratic fields become solid `cell_px × cell_px` blocks. Hexagonal fields
//! are drawn as pointy-top hexagons with circumradius `cell_px` in odd-r
//! layout. Cell `(col, row)` is centered at
//!
//! ```text
//! x = cell_px·√3·(col + 0.5·(row mod 2)) + margin
//! y = cell_px·1.5·row + margin            margin = cell_px
//! ```
//!
//! Each pixel is sampled at its center `(px + 0.5, py + 0.5)` and takes the
//! state of the nearest cell center (distance ties go to the smaller row,
//! then the smaller column). Pixels outside every lattice hexagon are
//! background (255).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::field::{Field, State};
use crate::lattice::LatticeKind;

pub const BACKGROUND: u8 = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("expected a {expected:?} field, got {actual:?}")]
    WrongLatticeKind {
        expected: LatticeKind,
        actual: LatticeKind,
    },
    #[error("cell_px must be at least 1")]
    ZeroCellSize,
    #[error("palette has {len} entries but the field has {k} states")]
    PaletteTooShort { len: usize, k: usize },
}

/// Row-major 8-bit grayscale image; 0 is black, 255 white.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width_px: usize,
    height_px: usize,
    pixels: Vec<u8>,
}

impl Raster {
    /// Panics if `pixels.len() != width_px * height_px`.
    pub fn new(width_px: usize, height_px: usize, pixels: Vec<u8>) -> Self {
        assert_eq!(pixels.len(), width_px * height_px, "raster size mismatch");
        Self {
            width_px,
            height_px,
            pixels,
        }
    }

    pub fn width_px(&self) -> usize {
        self.width_px
    }

    pub fn height_px(&self) -> usize {
        self.height_px
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width_px + x]
    }

    /// Binary PGM (`P5`) encoding.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() + 20);
        self.write_pgm(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width_px, self.height_px)?;
        out.write_all(&self.pixels)?;
        out.flush()
    }
}

/// Writes `raster` as binary PGM to `path`.
pub fn write_pgm(raster: &Raster, path: &Path) -> io::Result<()> {
    raster.write_pgm(BufWriter::new(File::create(path)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderConfig {
    /// Square edge (quadratic) or hexagon circumradius (hexagonal), in pixels.
    pub cell_px: usize,
    /// Gray value per state.
    pub palette: Vec<u8>,
}

impl RenderConfig {
    /// Evenly spaced grays from white (state 0) to black (state k-1).
    pub fn new(cell_px: usize, k: usize) -> Self {
        Self {
            cell_px,
            palette: default_palette(k),
        }
    }

    fn check(&self, field: &Field) -> Result<(), RenderError> {
        if self.cell_px == 0 {
            return Err(RenderError::ZeroCellSize);
        }
        if self.palette.len() < field.k() {
            return Err(RenderError::PaletteTooShort {
                len: self.palette.len(),
                k: field.k(),
            });
        }
        Ok(())
    }
}

/// `state v → round(255·(1 − v/(k−1)))`.
pub fn default_palette(k: usize) -> Vec<u8> {
    let span = k.saturating_sub(1).max(1) as f64;
    (0..k)
        .map(|v| (255.0 * (1.0 - v as f64 / span)).round() as u8)
        .collect()
}

/// Renders with the routine matching the field's lattice kind.
pub fn render(field: &Field, cfg: &RenderConfig) -> Result<Raster, RenderError> {
    match field.lattice().kind() {
        LatticeKind::Hexagonal => render_hex(field, cfg),
        LatticeKind::Quadratic => render_quad(field, cfg),
    }
}

pub fn render_quad(field: &Field, cfg: &RenderConfig) -> Result<Raster, RenderError> {
    expect_kind(field, LatticeKind::Quadratic)?;
    cfg.check(field)?;
    let lat = field.lattice();
    let px = cfg.cell_px;
    let width_px = lat.width() * px;
    let mut pixels = Vec::with_capacity(width_px * lat.height() * px);
    for row in field.states().chunks(lat.width()) {
        let line: Vec<u8> = row
            .iter()
            .flat_map(|&s| std::iter::repeat_n(cfg.palette[s as usize], px))
            .collect();
        for _ in 0..px {
            pixels.extend_from_slice(&line);
        }
    }
    Ok(Raster::new(width_px, lat.height() * px, pixels))
}

/// Pixel-space geometry of a hexagonal rendering.
#[derive(Debug, Clone, Copy)]
pub struct HexGeometry {
    radius: f64,
    cols: usize,
    rows: usize,
}

impl HexGeometry {
    pub fn new(cell_px: usize, cols: usize, rows: usize) -> Self {
        Self {
            radius: cell_px as f64,
            cols,
            rows,
        }
    }

    fn margin(&self) -> f64 {
        self.radius
    }

    fn dx(&self) -> f64 {
        self.radius * 3f64.sqrt()
    }

    fn dy(&self) -> f64 {
        self.radius * 1.5
    }

    pub fn center(&self, col: usize, row: usize) -> (f64, f64) {
        let x = self.dx() * (col as f64 + 0.5 * (row % 2) as f64) + self.margin();
        let y = self.dy() * row as f64 + self.margin();
        (x, y)
    }

    pub fn width_px(&self) -> usize {
        (self.dx() * (self.cols as f64 + 0.5) + 2.0 * self.margin()).ceil() as usize
    }

    pub fn height_px(&self) -> usize {
        (self.radius * (1.5 * self.rows as f64 + 0.5) + 2.0 * self.margin()).ceil() as usize
    }

    /// Whether `(x, y)` lies in the closed hexagon around `center`.
    pub fn hex_contains(&self, center: (f64, f64), x: f64, y: f64) -> bool {
        let ax = (x - center.0).abs();
        let ay = (y - center.1).abs();
        ax <= self.dx() / 2.0 && ay <= self.radius - ax / 3f64.sqrt()
    }

    /// The cell whose hexagon contains `(x, y)`, if any.
    pub fn cell_at(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let t = (y - self.margin()) / self.dy();
        let r0 = t.floor() as isize;
        let mut best: Option<(f64, usize, usize)> = None;
        for row in (r0 - 1..=r0 + 2).filter(|&r| r >= 0 && (r as usize) < self.rows) {
            let row = row as usize;
            let shift = 0.5 * (row % 2) as f64;
            let c0 = ((x - self.margin()) / self.dx() - shift).round() as isize;
            for col in (c0 - 1..=c0 + 1).filter(|&c| c >= 0 && (c as usize) < self.cols) {
                let col = col as usize;
                let (cx, cy) = self.center(col, row);
                let d2 = (x - cx).powi(2) + (y - cy).powi(2);
                if best.is_none_or(|(b, _, _)| d2 < b) {
                    best = Some((d2, col, row));
                }
            }
        }
        best.map(|(_, col, row)| (col, row))
            .filter(|&(col, row)| self.hex_contains(self.center(col, row), x, y))
    }
}

pub fn render_hex(field: &Field, cfg: &RenderConfig) -> Result<Raster, RenderError> {
    expect_kind(field, LatticeKind::Hexagonal)?;
    cfg.check(field)?;
    let lat = field.lattice();
    let geo = HexGeometry::new(cfg.cell_px, lat.width(), lat.height());
    let (w, h) = (geo.width_px(), geo.height_px());
    let states: &[State] = field.states();
    let mut pixels = Vec::with_capacity(w * h);
    for py in 0..h {
        let y = py as f64 + 0.5;
        for px in 0..w {
            let x = px as f64 + 0.5;
            let gray = match geo.cell_at(x, y) {
                Some((col, row)) => cfg.palette[states[row * lat.width() + col] as usize],
                None => BACKGROUND,
            };
            pixels.push(gray);
        }
    }
    Ok(Raster::new(w, h, pixels))
}

fn expect_kind(field: &Field, expected: LatticeKind) -> Result<(), RenderError> {
    let actual = field.lattice().kind();
    if actual == expected {
        Ok(())
    } else {
        Err(RenderError::WrongLatticeKind { expected, actual })
    }
}
