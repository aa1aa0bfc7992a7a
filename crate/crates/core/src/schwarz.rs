//! Schwarz reflection in the deltoid `𝔇₁ = R(|z| > 1)`, `R(z) = z + 1/(2z²)`,
//! together with reflection in the inscribed circle `|w| = 1/2`. The tile is
//! the rest of the sphere: three curvilinear triangles, one at each cusp.

use crate::geometry::{Complex, SpherePoint};
use crate::poly;
use crate::raster::{self, RasterImage, Region, Rgb};

/// Root-modulus band treated as the deltoid boundary.
pub const BOUNDARY_GUARD: f64 = 1e-9;
pub const SINGULAR_TOL: f64 = 1e-9;
pub const D2_RADIUS: f64 = 0.5;
pub const ESCAPE_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SchwarzError {
    #[error("{0} is not in the closed deltoid domain")]
    NotInDomain(Complex),
    #[error("{0} is a singular point")]
    SingularPoint(Complex),
}

fn omega(k: usize) -> Complex {
    Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0)
}

pub fn eval_r(z: SpherePoint) -> SpherePoint {
    match z {
        SpherePoint::Infinity => SpherePoint::Infinity,
        SpherePoint::Finite(z) if z == Complex::new(0.0, 0.0) => SpherePoint::Infinity,
        SpherePoint::Finite(z) => SpherePoint::Finite(r(z)),
    }
}

fn r(z: Complex) -> Complex {
    z + 1.0 / (2.0 * z * z)
}

pub fn cusps() -> [Complex; 3] {
    [0, 1, 2].map(|k| 1.5 * omega(k))
}

pub fn tangency_points() -> [Complex; 3] {
    [0, 1, 2].map(|k| -0.5 * omega(k))
}

/// Cusps followed by tangency points.
pub fn singular_points() -> [Complex; 6] {
    let (c, t) = (cusps(), tangency_points());
    [c[0], c[1], c[2], t[0], t[1], t[2]]
}

/// Roots of `R(z) = w`, i.e. of `2z³ − 2wz² + 1`, largest modulus first.
pub fn r_preimages(w: Complex) -> [Complex; 3] {
    let zero = Complex::new(0.0, 0.0);
    let mut z = poly::cubic_roots(-w, zero, Complex::new(0.5, 0.0));
    z.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    z
}

/// The preimage of `w` under `R` with `|z| ≥ 1`; fails exactly off `𝔇̄₁`.
pub fn invert_r_exterior(w: Complex) -> Result<Complex, SchwarzError> {
    if w.norm() > 3.0 {
        // z = w − 1/(2z²) contracts by |z|⁻³ here; the cubic solver loses
        // the small roots' scale for huge w.
        let mut z = w;
        for _ in 0..200 {
            let next = w - 1.0 / (2.0 * z * z);
            let done = (next - z).norm() <= 1e-16 * next.norm();
            z = next;
            if done {
                break;
            }
        }
        return Ok(z);
    }
    let roots = r_preimages(w);
    let z = roots[0];
    if z.norm() < 1.0 - BOUNDARY_GUARD {
        return Err(SchwarzError::NotInDomain(w));
    }
    // At a cusp the top two roots coalesce on the circle.
    if (roots[1].norm() - 1.0).abs() < 1e-6 && (z.norm() - 1.0).abs() < 1e-6 {
        return Ok(z / z.norm());
    }
    Ok(z)
}

pub fn in_d1(w: Complex) -> bool {
    invert_r_exterior(w).is_ok()
}

pub fn in_d2(w: Complex) -> bool {
    w.norm() <= D2_RADIUS
}

pub fn sigma1(w: SpherePoint) -> Result<SpherePoint, SchwarzError> {
    match w {
        SpherePoint::Infinity => Ok(SpherePoint::Infinity),
        SpherePoint::Finite(w) => {
            let z = invert_r_exterior(w)?;
            Ok(SpherePoint::Finite(r(1.0 / z.conj())))
        }
    }
}

pub fn sigma2(w: SpherePoint) -> SpherePoint {
    match w {
        SpherePoint::Infinity => SpherePoint::new(0.0, 0.0),
        SpherePoint::Finite(w) if w == Complex::new(0.0, 0.0) => SpherePoint::Infinity,
        SpherePoint::Finite(w) => SpherePoint::Finite(1.0 / (4.0 * w.conj())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region3 {
    D1,
    D2,
    Tile(usize),
}

/// Tile component by the nearest cusp direction.
pub fn tile_component(w: Complex) -> usize {
    let t = w.arg() * 3.0 / std::f64::consts::TAU;
    (t.round() as i64).rem_euclid(3) as usize
}

pub fn region_of(w: SpherePoint) -> Result<Region3, SchwarzError> {
    let z = match w {
        SpherePoint::Infinity => return Ok(Region3::D1),
        SpherePoint::Finite(z) => z,
    };
    if singular_points().iter().any(|s| (z - s).norm() < SINGULAR_TOL) {
        return Err(SchwarzError::SingularPoint(z));
    }
    if in_d2(z) {
        Ok(Region3::D2)
    } else if in_d1(z) {
        Ok(Region3::D1)
    } else {
        Ok(Region3::Tile(tile_component(z)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchwarzStep {
    Mapped(SpherePoint),
    InTile(usize),
}

pub fn schwarz_step(w: SpherePoint) -> Result<SchwarzStep, SchwarzError> {
    Ok(match region_of(w)? {
        Region3::D2 => SchwarzStep::Mapped(sigma2(w)),
        Region3::D1 => SchwarzStep::Mapped(sigma1(w)?),
        Region3::Tile(c) => SchwarzStep::InTile(c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TileLabel {
    /// Whole orbit stayed in the sector of component `i`.
    Invariant(usize),
    Transient(usize),
}

impl TileLabel {
    pub fn component(&self) -> usize {
        match *self {
            TileLabel::Invariant(c) | TileLabel::Transient(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchwarzOutcome {
    BasinInfinity { time: usize },
    TilingSet { label: TileLabel, time: usize },
    Undecided,
}

/// Iterates `F` until the orbit lands in the tile, escapes (`|w| > escape`
/// after two consecutive modulus increases), stalls at a fixed point, or
/// hits a singular point.
pub fn classify_schwarz(w: SpherePoint, maxiter: usize, escape: f64) -> SchwarzOutcome {
    let mut w = w;
    let mut prev: Option<f64> = None;
    let mut increases = 0;
    let mut sector = None;
    let mut same_sector = true;
    for time in 0..=maxiter {
        let z = match w {
            SpherePoint::Infinity => return SchwarzOutcome::BasinInfinity { time },
            SpherePoint::Finite(z) => z,
        };
        let m = z.norm();
        if let Some(p) = prev {
            increases = if m > p { increases + 1 } else { 0 };
        }
        if m > escape && increases >= 2 {
            return SchwarzOutcome::BasinInfinity { time };
        }
        prev = Some(m);
        let s = tile_component(z);
        if *sector.get_or_insert(s) != s {
            same_sector = false;
        }
        match schwarz_step(w) {
            Err(_) => return SchwarzOutcome::Undecided,
            Ok(SchwarzStep::InTile(c)) => {
                let label = if same_sector { TileLabel::Invariant(c) } else { TileLabel::Transient(c) };
                return SchwarzOutcome::TilingSet { label, time };
            }
            Ok(SchwarzStep::Mapped(next)) => {
                if next.chordal(&w) < 1e-12 {
                    return SchwarzOutcome::Undecided;
                }
                w = next;
            }
        }
    }
    SchwarzOutcome::Undecided
}

/// All `w ∈ 𝔇̄₁` with `σ₁(w) = target`: `w = R(1/ζ̄)` over roots `ζ` of
/// `R(ζ) = target` inside the unit disk.
pub fn sigma1_preimages(target: Complex) -> Vec<Complex> {
    r_preimages(target)
        .into_iter()
        .filter(|z| z.norm() < 1.0 - BOUNDARY_GUARD)
        .map(|z| r(1.0 / z.conj()))
        .collect()
}

/// Per-pixel outcomes, row-major with row 0 at the top.
pub fn classify_grid(region: &Region, width: usize, height: usize, maxiter: usize) -> Vec<SchwarzOutcome> {
    use rayon::prelude::*;
    (0..width * height)
        .into_par_iter()
        .map(|k| {
            let z = region.pixel_center(k % width, k / width, width, height);
            classify_schwarz(SpherePoint::Finite(z), maxiter, ESCAPE_RADIUS)
        })
        .collect()
}

pub const BASIN_COLOR: Rgb = [235, 200, 50];

pub fn outcome_color(o: &SchwarzOutcome) -> Rgb {
    match *o {
        SchwarzOutcome::BasinInfinity { time } => {
            let f = 0.5 + 0.5 / (1.0 + 0.1 * time as f64);
            BASIN_COLOR.map(|c| (c as f64 * f).round() as u8)
        }
        SchwarzOutcome::TilingSet { label, time } => raster::shade(label.component() + 1, time),
        SchwarzOutcome::Undecided => raster::LIMIT_COLOR,
    }
}

pub fn render_schwarz(region: &Region, width: usize, height: usize, maxiter: usize) -> RasterImage {
    raster::render(region, width, height, |z| {
        outcome_color(&classify_schwarz(SpherePoint::Finite(z), maxiter, ESCAPE_RADIUS))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn r_values() {
        assert_eq!(eval_r(SpherePoint::new(1.0, 0.0)), SpherePoint::new(1.5, 0.0));
        assert_eq!(eval_r(SpherePoint::new(-1.0, 0.0)), SpherePoint::new(-0.5, 0.0));
        assert_eq!(eval_r(SpherePoint::new(0.0, 0.0)), SpherePoint::Infinity);
        let w = r(omega(1));
        assert!((w - 1.5 * omega(1)).norm() < 1e-15);
    }

    #[test]
    fn exterior_inverse() {
        assert!((invert_r_exterior(c(1.5, 0.0)).unwrap() - 1.0).norm() < 1e-6);
        assert_eq!(invert_r_exterior(c(0.0, 0.0)), Err(SchwarzError::NotInDomain(c(0.0, 0.0))));
        // Bisection on 2z³ − 4z² + 1 over [1.5, 2].
        let f = |z: f64| 2.0 * z * z * z - 4.0 * z * z + 1.0;
        let (mut lo, mut hi) = (1.5, 2.0);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if f(m) < 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        let z = invert_r_exterior(c(2.0, 0.0)).unwrap();
        assert!((z - lo).norm() < 1e-12);
        let s = sigma1(SpherePoint::new(2.0, 0.0)).unwrap().finite().unwrap();
        let zeta = 1.0 / lo;
        assert!((s.re - (zeta + 1.0 / (2.0 * zeta * zeta))).abs() < 1e-12 && s.im.abs() < 1e-12);
    }

    #[test]
    fn reflections_fix_boundaries() {
        let w = r(Complex::from_polar(1.0, 0.7));
        assert!((sigma1(SpherePoint::Finite(w)).unwrap().finite().unwrap() - w).norm() < 1e-10);
        assert_eq!(sigma1(SpherePoint::Infinity), Ok(SpherePoint::Infinity));
        assert_eq!(sigma2(SpherePoint::new(0.5, 0.0)), SpherePoint::new(0.5, 0.0));
        assert_eq!(sigma2(SpherePoint::new(0.25, 0.0)), SpherePoint::new(1.0, 0.0));
        assert_eq!(sigma2(SpherePoint::new(-0.5, 0.0)), SpherePoint::new(-0.5, 0.0));
    }

    #[test]
    fn steps_and_outcomes() {
        match schwarz_step(SpherePoint::new(0.01, 0.0)).unwrap() {
            SchwarzStep::Mapped(SpherePoint::Finite(z)) => assert!((z - 25.0).norm() < 1e-12),
            s => panic!("{s:?}"),
        }
        assert!(matches!(schwarz_step(SpherePoint::new(-0.5, 0.0)), Err(SchwarzError::SingularPoint(_))));
        assert!(matches!(classify_schwarz(SpherePoint::new(10.0, 0.0), 50, ESCAPE_RADIUS), SchwarzOutcome::BasinInfinity { .. }));
        assert!(matches!(classify_schwarz(SpherePoint::new(0.01, 0.0), 50, ESCAPE_RADIUS), SchwarzOutcome::BasinInfinity { .. }));
        assert_eq!(classify_schwarz(SpherePoint::new(-0.5, 0.0), 50, ESCAPE_RADIUS), SchwarzOutcome::Undecided);
        // 1 lies between the circle |w| = 1/2 and the cusp 3/2.
        assert!(matches!(schwarz_step(SpherePoint::new(1.0, 0.0)), Ok(SchwarzStep::InTile(0))));
    }

    #[test]
    fn preimage_counts() {
        assert_eq!(sigma1_preimages(c(3.0, 1.0)).len(), 2);
        assert_eq!(sigma1_preimages(c(1.0, 0.0)).len(), 3);
        for w in sigma1_preimages(c(3.0, 1.0)) {
            let s = sigma1(SpherePoint::Finite(w)).unwrap().finite().unwrap();
            assert!((s - c(3.0, 1.0)).norm() < 1e-9);
        }
    }
}
