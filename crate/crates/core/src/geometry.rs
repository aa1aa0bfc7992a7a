//! Points, generalized circles and (anti-)Möbius maps on the Riemann sphere.
//!
//! Circles are carried internally as Hermitian forms
//! `Q(z) = a|z|² + 2 Re(conj(b) z) + c`, normalized so that `|b|² - ac = 1`.
//! The open disk of a form is `{Q < 0}`; negating the form gives the
//! complementary disk. This keeps lines, circles and the point at infinity on
//! the same footing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Complex = Complex64;

/// Default tolerance for geometric comparisons in the chordal metric.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate triple: two of the points coincide")]
    DegenerateTriple,
    #[error("the two circles are identical")]
    IdenticalCircles,
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex),
    Infinity,
}

impl SpherePoint {
    pub fn new(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            SpherePoint::Finite(z) => SpherePoint::Finite(z.conj()),
            SpherePoint::Infinity => SpherePoint::Infinity,
        }
    }

    /// Stereographic image on the unit sphere, with ∞ at the north pole.
    pub fn to_sphere(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let n = z.norm_sqr();
                if !n.is_finite() || n > 1e300 {
                    return [0.0, 0.0, 1.0];
                }
                let d = 1.0 + n;
                [2.0 * z.re / d, 2.0 * z.im / d, (n - 1.0) / d]
            }
        }
    }

    pub fn from_sphere(p: [f64; 3]) -> Self {
        let den = 1.0 - p[2];
        if den.abs() < 1e-300 {
            return SpherePoint::Infinity;
        }
        SpherePoint::Finite(Complex::new(p[0] / den, p[1] / den))
    }

    /// Chordal distance; at most 2.
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        match (*self, *other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
                let (nz, nw) = (z.norm_sqr(), w.norm_sqr());
                if nz > 1e150 || nw > 1e150 {
                    let (a, b) = (self.to_sphere(), other.to_sphere());
                    let d: f64 = (0..3).map(|k| (a[k] - b[k]).powi(2)).sum();
                    return d.sqrt();
                }
                2.0 * (z - w).norm() / ((1.0 + nz) * (1.0 + nw)).sqrt()
            }
        }
    }
}

impl From<Complex> for SpherePoint {
    fn from(z: Complex) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// A circle or a line (a circle through ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GenCircle {
    Circle { center: Complex, radius: f64 },
    /// `{z : Re(conj(normal) z) = offset}` with `|normal| = 1`.
    Line { normal: Complex, offset: f64 },
}

impl GenCircle {
    pub fn circle(center: Complex, radius: f64) -> Self {
        assert!(radius > 0.0, "circle radius must be positive");
        GenCircle::Circle { center, radius }
    }

    pub fn line(normal: Complex, offset: f64) -> Self {
        let n = normal.norm();
        assert!(n > 0.0, "line normal must be nonzero");
        GenCircle::Line { normal: normal / n, offset: offset / n }
    }

    /// The horizontal line `Im z = y`.
    pub fn horizontal(y: f64) -> Self {
        GenCircle::Line { normal: Complex::i(), offset: y }
    }

    /// The vertical line `Re z = x`.
    pub fn vertical(x: f64) -> Self {
        GenCircle::Line { normal: Complex::new(1.0, 0.0), offset: x }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, GenCircle::Line { .. })
    }

    /// Euclidean distance from a finite point to the curve; a line has
    /// distance 0 from ∞ and a circle infinite distance.
    pub fn distance(&self, z: &SpherePoint) -> f64 {
        match (*self, *z) {
            (GenCircle::Line { .. }, SpherePoint::Infinity) => 0.0,
            (GenCircle::Circle { .. }, SpherePoint::Infinity) => f64::INFINITY,
            (GenCircle::Circle { center, radius }, SpherePoint::Finite(w)) => {
                ((w - center).norm() - radius).abs()
            }
            (GenCircle::Line { normal, offset }, SpherePoint::Finite(w)) => {
                ((normal.conj() * w).re - offset).abs()
            }
        }
    }

    /// `k` points spread along the curve (∞ included for lines).
    pub fn sample(&self, k: usize) -> Vec<SpherePoint> {
        match *self {
            GenCircle::Circle { center, radius } => (0..k)
                .map(|j| {
                    let t = std::f64::consts::TAU * (j as f64 + 0.25) / k as f64;
                    SpherePoint::Finite(center + Complex::from_polar(radius, t))
                })
                .collect(),
            GenCircle::Line { normal, offset } => {
                let base = normal * offset;
                let dir = normal * Complex::i();
                let mut v: Vec<SpherePoint> = (1..k)
                    .map(|j| {
                        let t = (std::f64::consts::PI * (j as f64 / k as f64 - 0.5)).tan();
                        SpherePoint::Finite(base + dir * t)
                    })
                    .collect();
                v.push(SpherePoint::Infinity);
                v
            }
        }
    }

    pub fn to_disk(&self) -> Disk {
        Disk::from_circle(self)
    }

    /// True if the two curves coincide as point sets.
    pub fn same_curve(&self, other: &GenCircle, tol: f64) -> bool {
        self.to_disk().same_curve(&other.to_disk(), tol)
    }
}

impl fmt::Display for GenCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenCircle::Circle { center, radius } => {
                write!(f, "Circle{{{}{:+}i, {}}}", center.re, center.im, radius)
            }
            GenCircle::Line { normal, offset } => {
                write!(f, "Line{{n={}{:+}i, offset={}}}", normal.re, normal.im, offset)
            }
        }
    }
}

/// An oriented open disk on the sphere, stored as a normalized Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub a: f64,
    pub b: Complex,
    pub c: f64,
}

impl Disk {
    /// Normalizes an arbitrary form with positive `|b|² - ac`.
    pub fn from_form(a: f64, b: Complex, c: f64) -> Self {
        let det = b.norm_sqr() - a * c;
        debug_assert!(det > 0.0, "form does not describe a circle");
        let s = det.sqrt();
        Disk { a: a / s, b: b / s, c: c / s }
    }

    /// The disk bounded by `circle`: the inside of a circle, or the side
    /// `Re(conj(n) z) < offset` of a line.
    pub fn from_circle(circle: &GenCircle) -> Self {
        match *circle {
            GenCircle::Circle { center, radius } => {
                Disk::from_form(1.0, -center, center.norm_sqr() - radius * radius)
            }
            GenCircle::Line { normal, offset } => Disk::from_form(0.0, normal, -2.0 * offset),
        }
    }

    pub fn complement(&self) -> Self {
        Disk { a: -self.a, b: -self.b, c: -self.c }
    }

    /// Is the disk bounded by a line (its boundary passes through ∞)?
    pub fn boundary_is_line(&self) -> bool {
        self.a.abs() < 1e-12
    }

    pub fn boundary(&self) -> GenCircle {
        if self.boundary_is_line() {
            let n = self.b.norm();
            GenCircle::Line { normal: self.b / n, offset: -self.c / (2.0 * n) }
        } else {
            GenCircle::Circle { center: -self.b / self.a, radius: 1.0 / self.a.abs() }
        }
    }

    /// Raw value of the form at `z`; at ∞ the leading coefficient.
    pub fn form_value(&self, z: &SpherePoint) -> f64 {
        match *z {
            SpherePoint::Infinity => self.a,
            SpherePoint::Finite(w) => {
                self.a * w.norm_sqr() + 2.0 * (self.b.conj() * w).re + self.c
            }
        }
    }

    /// Signed Euclidean distance (in R³) of the stereographic image of `z`
    /// from the plane cutting out this disk: negative inside, positive
    /// outside, zero on the boundary. Bounded and Möbius-robust.
    pub fn side(&self, z: &SpherePoint) -> f64 {
        let nrm = self.plane_normal_norm();
        match *z {
            SpherePoint::Infinity => self.a / nrm,
            SpherePoint::Finite(w) => {
                let n2 = w.norm_sqr();
                if n2 > 1e200 {
                    return self.a / nrm;
                }
                self.form_value(z) / ((1.0 + n2) * nrm)
            }
        }
    }

    pub fn contains(&self, z: &SpherePoint, tol: f64) -> bool {
        self.side(z) < -tol
    }

    pub fn contains_closed(&self, z: &SpherePoint, tol: f64) -> bool {
        self.side(z) <= tol
    }

    fn plane_normal_norm(&self) -> f64 {
        let h = 0.5 * (self.a - self.c);
        (self.b.norm_sqr() + h * h).sqrt()
    }

    /// Spherical cap: unit center on S² and cosine of the angular radius.
    pub fn cap(&self) -> ([f64; 3], f64) {
        let n = [self.b.re, self.b.im, 0.5 * (self.a - self.c)];
        let d = -0.5 * (self.a + self.c);
        let len = self.plane_normal_norm();
        ([-n[0] / len, -n[1] / len, -n[2] / len], -d / len)
    }

    /// Oriented inversive product: 1 for external tangency, 0 for
    /// orthogonality, -1 for internal tangency, > 1 for disjoint closures.
    pub fn inversive(&self, other: &Disk) -> f64 {
        0.5 * (self.a * other.c + other.a * self.c) - (self.b * other.b.conj()).re
    }

    /// Image of the disk under a (anti-)Möbius map; orientation preserved.
    pub fn apply(&self, m: &MobiusMap) -> Disk {
        // With v = (z, 1) the form is v^† H v, H = [[a, b], [conj b, c]].
        // For w = m(z) (or m(conj z)) the image form is P^† H P with P the
        // matrix inverse of m, H conjugated first for anti maps.
        let (p, q, r, s) = (m.d, -m.b, -m.c, m.a);
        let b = if m.anti { self.b.conj() } else { self.b };
        let (a, c) = (self.a, self.c);
        let form = |u: [Complex; 2], v: [Complex; 2]| -> Complex {
            let hv0 = a * v[0] + b * v[1];
            let hv1 = b.conj() * v[0] + c * v[1];
            u[0].conj() * hv0 + u[1].conj() * hv1
        };
        let (col0, col1) = ([p, r], [q, s]);
        Disk::from_form(form(col0, col0).re, form(col0, col1), form(col1, col1).re)
    }

    /// Equal as oriented disks.
    pub fn same_disk(&self, other: &Disk, tol: f64) -> bool {
        (self.a - other.a).abs() < tol
            && (self.b - other.b).norm() < tol
            && (self.c - other.c).abs() < tol
    }

    pub fn same_curve(&self, other: &Disk, tol: f64) -> bool {
        self.same_disk(other, tol) || self.same_disk(&other.complement(), tol)
    }

    /// A point strictly inside the disk.
    pub fn interior_point(&self) -> Complex {
        if self.boundary_is_line() {
            let t = (0.5 * self.c + 1.0) / self.b.norm_sqr();
            -self.b * t
        } else if self.a > 0.0 {
            -self.b / self.a
        } else {
            let r = 1.0 / self.a.abs();
            -self.b / self.a + Complex::new(2.0 * r, 0.0)
        }
    }

    /// Anti-Möbius reflection in the boundary circle.
    pub fn reflection(&self) -> MobiusMap {
        MobiusMap::reflection(&self.boundary())
    }
}

/// `z ↦ (a z + b)/(c z + d)`, or the same applied to `conj(z)` when `anti`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub anti: bool,
}

impl MobiusMap {
    pub fn identity() -> Self {
        let (o, z) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
        MobiusMap { a: o, b: z, c: z, d: o, anti: false }
    }

    /// Complex conjugation.
    pub fn conjugation() -> Self {
        MobiusMap { anti: true, ..Self::identity() }
    }

    /// Builds a map normalized to determinant 1.
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex, anti: bool) -> Self {
        let det = a * d - b * c;
        assert!(det.norm() > 0.0, "singular Möbius matrix");
        let s = det.sqrt();
        MobiusMap { a: a / s, b: b / s, c: c / s, d: d / s, anti }
    }

    pub fn apply(&self, z: &SpherePoint) -> SpherePoint {
        let z = if self.anti { z.conj() } else { *z };
        match z {
            SpherePoint::Infinity => {
                if self.c == Complex::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(w) => {
                let den = self.c * w + self.d;
                let num = self.a * w + self.b;
                if den == Complex::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else if !w.is_finite() {
                    SpherePoint::Finite(self.a / self.c)
                } else {
                    let v = num / den;
                    if v.is_finite() {
                        SpherePoint::Finite(v)
                    } else {
                        SpherePoint::Infinity
                    }
                }
            }
        }
    }

    pub fn apply_c(&self, z: Complex) -> SpherePoint {
        self.apply(&SpherePoint::Finite(z))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let (a2, b2, c2, d2) = if self.anti {
            (other.a.conj(), other.b.conj(), other.c.conj(), other.d.conj())
        } else {
            (other.a, other.b, other.c, other.d)
        };
        MobiusMap::new(
            self.a * a2 + self.b * c2,
            self.a * b2 + self.b * d2,
            self.c * a2 + self.d * c2,
            self.c * b2 + self.d * d2,
            self.anti ^ other.anti,
        )
    }

    pub fn inverse(&self) -> MobiusMap {
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        if self.anti {
            MobiusMap::new(a.conj(), b.conj(), c.conj(), d.conj(), true)
        } else {
            MobiusMap::new(a, b, c, d, false)
        }
    }

    /// Equal as maps (matrices agree up to sign).
    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        if self.anti != other.anti {
            return false;
        }
        let diff = |s: f64| {
            (self.a - other.a * s).norm()
                + (self.b - other.b * s).norm()
                + (self.c - other.c * s).norm()
                + (self.d - other.d * s).norm()
        };
        diff(1.0) < tol || diff(-1.0) < tol
    }

    /// Anti-Möbius reflection (inversion) in a circle or line.
    pub fn reflection(circle: &GenCircle) -> MobiusMap {
        let o = Complex::new(1.0, 0.0);
        let z = Complex::new(0.0, 0.0);
        match *circle {
            GenCircle::Circle { center, radius } => {
                // z ↦ c + r²/(conj(z) - conj(c))
                let b = Complex::new(radius * radius, 0.0) - center * center.conj();
                MobiusMap::new(center, b, o, -center.conj(), true)
            }
            GenCircle::Line { normal, offset } => {
                // z ↦ z - 2(Re(conj(n) z) - offset) n = -n² conj(z) + 2 offset n
                MobiusMap::new(-normal * normal, normal * (2.0 * offset), z, o, true)
            }
        }
    }

    /// Orientation-preserving map sending `p, q, r` to `0, 1, ∞`.
    fn to_standard(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint) -> Result<MobiusMap, GeometryError> {
        let tol = 1e-14;
        if p.chordal(q) < tol || q.chordal(r) < tol || p.chordal(r) < tol {
            return Err(GeometryError::DegenerateTriple);
        }
        let o = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        use SpherePoint::{Finite as F, Infinity as I};
        let m = match (*p, *q, *r) {
            (I, F(q), F(r)) => MobiusMap::new(zero, q - r, o, -r, false),
            (F(p), I, F(r)) => MobiusMap::new(o, -p, o, -r, false),
            (F(p), F(q), I) => MobiusMap::new(o, -p, zero, q - p, false),
            (F(p), F(q), F(r)) => MobiusMap::new(q - r, -p * (q - r), q - p, -r * (q - p), false),
            _ => return Err(GeometryError::DegenerateTriple),
        };
        Ok(m)
    }

    /// The unique map with `src[k] ↦ dst[k]`; for `anti` the map is
    /// orientation reversing.
    pub fn from_triples(src: &[SpherePoint; 3], dst: &[SpherePoint; 3], anti: bool) -> Result<MobiusMap, GeometryError> {
        let s: Vec<SpherePoint> = src.iter().map(|p| if anti { p.conj() } else { *p }).collect();
        let m1 = Self::to_standard(&s[0], &s[1], &s[2])?;
        let m2 = Self::to_standard(&dst[0], &dst[1], &dst[2])?;
        let m = m2.inverse().compose(&m1);
        Ok(if anti { m.compose(&MobiusMap::conjugation()) } else { m })
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {}; {} {}]{}",
            self.a,
            self.b,
            self.c,
            self.d,
            if self.anti { " anti" } else { "" }
        )
    }
}

pub fn reflect_in_circle(circle: &GenCircle, z: &SpherePoint) -> SpherePoint {
    match *circle {
        GenCircle::Circle { center, radius } => match *z {
            SpherePoint::Infinity => SpherePoint::Finite(center),
            SpherePoint::Finite(w) => {
                let d = w - center;
                if d == Complex::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(center + radius * radius / d.conj())
                }
            }
        },
        GenCircle::Line { normal, offset } => match *z {
            SpherePoint::Infinity => SpherePoint::Infinity,
            SpherePoint::Finite(w) => {
                let s = (normal.conj() * w).re - offset;
                SpherePoint::Finite(w - normal * (2.0 * s))
            }
        },
    }
}

/// The circle through three distinct points; a line when one is ∞ or the
/// points are collinear.
pub fn circle_through(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint) -> Result<GenCircle, GeometryError> {
    let tol = 1e-13;
    if p.chordal(q) < tol || q.chordal(r) < tol || p.chordal(r) < tol {
        return Err(GeometryError::DegenerateTriple);
    }
    // Rows (|z|², 2x, 2y, 1) annihilate the form (a, bx, by, c).
    let row = |z: &SpherePoint| -> [f64; 4] {
        let v = match *z {
            SpherePoint::Infinity => [1.0, 0.0, 0.0, 0.0],
            SpherePoint::Finite(w) => [w.norm_sqr(), 2.0 * w.re, 2.0 * w.im, 1.0],
        };
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
    };
    let m = [row(p), row(q), row(r)];
    let det3 = |c: [usize; 3]| -> f64 {
        let e = |i: usize, j: usize| m[i][c[j]];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    let v = [det3([1, 2, 3]), -det3([0, 2, 3]), det3([0, 1, 3]), -det3([0, 1, 2])];
    let (a, b, c) = (v[0], Complex::new(v[1], v[2]), v[3]);
    let det = b.norm_sqr() - a * c;
    if !(det > 0.0) {
        return Err(GeometryError::DegenerateTriple);
    }
    let s = det.sqrt();
    let (a, b, c) = (a / s, b / s, c / s);
    // Snap to a line when the radius is astronomically large.
    if a.abs() < 1e-13 {
        Ok(Disk { a: 0.0, b, c }.boundary())
    } else {
        Ok(Disk { a, b, c }.boundary())
    }
}

pub fn apply_to_circle(m: &MobiusMap, circle: &GenCircle) -> GenCircle {
    let d = Disk::from_circle(circle).apply(m);
    if d.a.abs() < 1e-13 {
        Disk { a: 0.0, ..d }.boundary()
    } else {
        d.boundary()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tangency {
    Disjoint,
    Tangent(SpherePoint),
    Intersecting,
}

/// The point where the degenerate form `h` vanishes.
fn point_of_null_form(a: f64, b: Complex, c: f64) -> SpherePoint {
    if a.abs() >= b.norm() && a != 0.0 {
        SpherePoint::Finite(-b / a)
    } else if b.norm() > 0.0 && a.abs() > 1e-15 * c.abs().max(b.norm()) {
        SpherePoint::Finite(-c / b.conj())
    } else {
        SpherePoint::Infinity
    }
}

/// Tangency point of two tangent disks (`inversive = ±1`).
pub fn tangency_point(d1: &Disk, d2: &Disk) -> SpherePoint {
    let i = d1.inversive(d2);
    let s = i.signum();
    point_of_null_form(d1.a + s * d2.a, d1.b + s * d2.b, d1.c + s * d2.c)
}

/// Classifies two curves by their (unoriented) inversive distance.
pub fn tangency(c1: &GenCircle, c2: &GenCircle, tol: f64) -> Result<Tangency, GeometryError> {
    let (d1, d2) = (c1.to_disk(), c2.to_disk());
    if d1.same_curve(&d2, 1e-12) {
        return Err(GeometryError::IdenticalCircles);
    }
    let i = d1.inversive(&d2).abs();
    if (i - 1.0).abs() <= tol {
        Ok(Tangency::Tangent(tangency_point(&d1, &d2)))
    } else if i > 1.0 {
        Ok(Tangency::Disjoint)
    } else {
        Ok(Tangency::Intersecting)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(p: SpherePoint, q: SpherePoint, tol: f64) -> bool {
        p.chordal(&q) < tol
    }

    #[test]
    fn reflection_examples() {
        let unit_at_one = GenCircle::circle(c(1.0, 0.0), 1.0);
        assert_eq!(reflect_in_circle(&unit_at_one, &SpherePoint::Infinity), SpherePoint::new(1.0, 0.0));
        let imag_axis = GenCircle::line(c(1.0, 0.0), 0.0);
        assert!(close(reflect_in_circle(&imag_axis, &SpherePoint::new(2.0, 1.0)), SpherePoint::new(-2.0, 1.0), 1e-15));
        let r = reflect_in_circle(&unit_at_one, &SpherePoint::new(1.0, 0.25));
        assert!(close(r, SpherePoint::new(1.0, 4.0), 1e-14));
    }

    #[test]
    fn reflection_map_matches_pointwise_reflection() {
        for circle in [
            GenCircle::circle(c(0.3, -1.2), 0.7),
            GenCircle::line(c(0.6, 0.8), -1.5),
            GenCircle::horizontal(2.0),
        ] {
            let m = MobiusMap::reflection(&circle);
            for z in [c(0.1, 0.2), c(-3.0, 4.0), c(10.0, -0.5)] {
                let p = SpherePoint::Finite(z);
                assert!(close(m.apply(&p), reflect_in_circle(&circle, &p), 1e-13));
            }
        }
    }

    #[test]
    fn circle_through_examples() {
        let l = circle_through(&SpherePoint::new(0.0, 0.0), &SpherePoint::new(0.0, 2.0), &SpherePoint::Infinity).unwrap();
        assert!(l.same_curve(&GenCircle::vertical(0.0), 1e-12));
        let k = circle_through(&SpherePoint::new(0.0, 0.0), &SpherePoint::new(2.0, 0.0), &SpherePoint::new(1.0, 1.0)).unwrap();
        match k {
            GenCircle::Circle { center, radius } => {
                assert!((center - c(1.0, 0.0)).norm() < 1e-12 && (radius - 1.0).abs() < 1e-12)
            }
            _ => panic!("expected a circle"),
        }
        let w = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let u = circle_through(&SpherePoint::new(1.0, 0.0), &w.into(), &(w * w).into()).unwrap();
        assert!(u.same_curve(&GenCircle::circle(c(0.0, 0.0), 1.0), 1e-12));
        assert_eq!(
            circle_through(&SpherePoint::new(1.0, 0.0), &SpherePoint::new(1.0, 0.0), &SpherePoint::Infinity),
            Err(GeometryError::DegenerateTriple)
        );
        let collinear = circle_through(&SpherePoint::new(0.0, 0.0), &SpherePoint::new(1.0, 1.0), &SpherePoint::new(2.0, 2.0)).unwrap();
        assert!(collinear.is_line());
    }

    #[test]
    fn triples_examples() {
        let std3 = [SpherePoint::new(0.0, 0.0), SpherePoint::new(1.0, 0.0), SpherePoint::Infinity];
        let id = MobiusMap::from_triples(&std3, &std3, false).unwrap();
        assert!(id.approx_eq(&MobiusMap::identity(), 1e-14));
        let rev = [SpherePoint::Infinity, SpherePoint::new(1.0, 0.0), SpherePoint::new(0.0, 0.0)];
        let inv = MobiusMap::from_triples(&std3, &rev, false).unwrap();
        let one_over_z = MobiusMap::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), false);
        assert!(inv.approx_eq(&one_over_z, 1e-14));
        let cj = MobiusMap::from_triples(&std3, &std3, true).unwrap();
        assert!(cj.approx_eq(&MobiusMap::conjugation(), 1e-14));
    }

    #[test]
    fn apply_to_circle_examples() {
        let unit = GenCircle::circle(c(0.0, 0.0), 1.0);
        let inv = MobiusMap::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), false);
        assert!(apply_to_circle(&inv, &unit).same_curve(&unit, 1e-12));
        let shift = MobiusMap::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), false);
        assert!(apply_to_circle(&shift, &GenCircle::vertical(0.0)).same_curve(&GenCircle::vertical(1.0), 1e-12));
        let refl = MobiusMap::reflection(&GenCircle::circle(c(1.0, 0.0), 1.0));
        let img = apply_to_circle(&refl, &GenCircle::horizontal(2.0));
        assert!(img.same_curve(&GenCircle::circle(c(1.0, 0.25), 0.25), 1e-12), "{img}");
    }

    #[test]
    fn tangency_examples() {
        let c1 = GenCircle::circle(c(0.0, 1.0), 1.0);
        match tangency(&c1, &GenCircle::horizontal(0.0), 1e-9).unwrap() {
            Tangency::Tangent(p) => assert!(close(p, SpherePoint::new(0.0, 0.0), 1e-12)),
            t => panic!("{t:?}"),
        }
        match tangency(&c1, &GenCircle::circle(c(2.0, 1.0), 1.0), 1e-9).unwrap() {
            Tangency::Tangent(p) => assert!(close(p, SpherePoint::new(1.0, 1.0), 1e-12)),
            t => panic!("{t:?}"),
        }
        let t = tangency(&GenCircle::circle(c(0.0, 0.0), 1.0), &GenCircle::circle(c(0.0, 0.0), 2.0), 1e-9);
        assert_eq!(t, Ok(Tangency::Disjoint));
        match tangency(&GenCircle::horizontal(0.0), &GenCircle::horizontal(2.0), 1e-9).unwrap() {
            Tangency::Tangent(p) => assert!(p.is_infinite()),
            t => panic!("{t:?}"),
        }
        assert_eq!(tangency(&c1, &c1, 1e-9), Err(GeometryError::IdenticalCircles));
    }

    #[test]
    fn disk_orientation_and_complement() {
        let d = Disk::from_circle(&GenCircle::horizontal(0.0));
        assert!(d.contains(&SpherePoint::new(0.0, -1.0), 0.0));
        assert!(d.complement().contains(&SpherePoint::new(0.0, 1.0), 0.0));
        let e = Disk::from_circle(&GenCircle::circle(c(2.0, 0.0), 0.5));
        assert!(e.contains(&SpherePoint::new(2.1, 0.0), 0.0));
        assert!(e.complement().contains(&SpherePoint::Infinity, 0.0));
        for disk in [d, d.complement(), e, e.complement()] {
            assert!(disk.contains(&disk.interior_point().into(), 1e-12));
        }
    }
}
