//! RGB8 raster images, PPM output, and a row-parallel pixel renderer.

use crate::geometry::Complex;
use rayon::prelude::*;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    /// Row-major, three bytes per pixel, top row first.
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize) -> Self {
        RasterImage { width, height, pixels: vec![0; width * height * 3] }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        let i = 3 * (y * self.width + x);
        self.pixels[i..i + 3].copy_from_slice(&c);
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        f.write_all(&self.to_ppm())
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }
}

/// The rectangle `[x0, x1] × [y0, y1]` of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Region { x0, x1, y0, y1 }
    }

    /// Center of pixel `(i, j)` in a `w × h` raster; row 0 is the top (`y1`).
    pub fn pixel_center(&self, i: usize, j: usize, w: usize, h: usize) -> Complex {
        let x = self.x0 + (i as f64 + 0.5) * (self.x1 - self.x0) / w as f64;
        let y = self.y1 - (j as f64 + 0.5) * (self.y1 - self.y0) / h as f64;
        Complex::new(x, y)
    }

    /// Pixel containing `z`, if it is inside the region.
    pub fn pixel_of(&self, z: Complex, w: usize, h: usize) -> Option<(usize, usize)> {
        let fx = (z.re - self.x0) / (self.x1 - self.x0) * w as f64;
        let fy = (self.y1 - z.im) / (self.y1 - self.y0) * h as f64;
        if fx < 0.0 || fy < 0.0 || fx >= w as f64 || fy >= h as f64 {
            return None;
        }
        Some((fx as usize, fy as usize))
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad region component {t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if v.len() != 4 {
            return Err(format!("region needs x0,x1,y0,y1, got {} values", v.len()));
        }
        if !(v[0] < v[1] && v[2] < v[3]) || v.iter().any(|x| !x.is_finite()) {
            return Err(format!("degenerate region {s}"));
        }
        Ok(Region::new(v[0], v[1], v[2], v[3]))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.x1, self.y0, self.y1)
    }
}

/// Colors every pixel center with `paint`, rows in parallel.
pub fn render<F>(region: &Region, width: usize, height: usize, paint: F) -> RasterImage
where
    F: Fn(Complex) -> Rgb + Sync,
{
    let mut img = RasterImage::new(width, height);
    if width == 0 {
        return img;
    }
    img.pixels.par_chunks_mut(3 * width).enumerate().for_each(|(j, row)| {
        for i in 0..width {
            let c = paint(region.pixel_center(i, j, width, height));
            row[3 * i..3 * i + 3].copy_from_slice(&c);
        }
    });
    img
}

pub const LIMIT_COLOR: Rgb = [0, 0, 0];

const PALETTE: [Rgb; 6] = [
    [230, 80, 70],
    [70, 140, 230],
    [80, 190, 100],
    [240, 200, 60],
    [170, 90, 200],
    [60, 200, 200],
];

/// Color of component `k`, darkened with the escape time.
pub fn shade(k: usize, time: usize) -> Rgb {
    let base = PALETTE[k % PALETTE.len()];
    let f = 1.0 / (1.0 + 0.08 * time as f64);
    let g = 0.35 + 0.65 * f;
    base.map(|c| (c as f64 * g).round() as u8)
}
