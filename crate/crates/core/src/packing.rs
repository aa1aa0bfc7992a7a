//! Circle packings of sphere triangulations.
//!
//! The solver removes one vertex `v∞`, whose circle becomes the unit circle
//! with its exterior as disk. The neighbors of `v∞` become horocycles
//! (circles internally tangent to the unit circle) and the remaining radii
//! are found by angle-sum relaxation in the hyperbolic metric of the unit
//! disk. Circles are then laid out face by face and the whole configuration
//! is moved into the requested normalization by a Möbius map.

use crate::geometry::{
    circle_through, tangency_point, Complex, Disk, GenCircle, GeometryError, MobiusMap, SpherePoint,
};
use crate::triangulation::Triangulation;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

/// Target residual for angle sums.
pub const ANGLE_TOL: f64 = 1e-12;
/// Allowed tangency defect while laying out circles.
pub const LAYOUT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PackingError {
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("angle-sum relaxation did not converge after {iterations} sweeps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("layout inconsistency {0:e} exceeds tolerance")]
    Layout(f64),
    #[error("normalization: {0}")]
    Normalization(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("packing file: {0}")]
    Format(String),
}

/// How the solved packing is positioned on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum Normalization {
    /// Tetrahedron only: vertices 0 and 1 become `Im z = 0` and `Im z = 2`,
    /// vertex 2 the circle of radius 1 at `i`, vertex 3 the one at `2 + i`.
    Strip,
    /// Tangency points of `face` (edges `ab`, `bc`, `ca`) sent to `points`.
    FixThreePoints { face: usize, points: [SpherePoint; 3] },
    /// Tangency points of face 0 sent to the cube roots of unity, with ∞ in
    /// that face's interstice.
    CubeRoots,
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization::CubeRoots
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::Strip => write!(f, "strip"),
            Normalization::CubeRoots => write!(f, "default"),
            Normalization::FixThreePoints { face, points } => {
                write!(f, "fix:{face}:{},{},{}", points[0], points[1], points[2])
            }
        }
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` or `inf`.
pub fn parse_sphere_point(s: &str) -> Result<SpherePoint, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s == "∞" {
        return Ok(SpherePoint::Infinity);
    }
    let bad = || format!("cannot parse complex number {s:?}");
    if let Some(body) = s.strip_suffix('i') {
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        let re = re.parse::<f64>().map_err(|_| bad())?;
        Ok(SpherePoint::new(re, im))
    } else {
        Ok(SpherePoint::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

impl std::str::FromStr for Normalization {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strip" => Ok(Normalization::Strip),
            "default" | "cube-roots" => Ok(Normalization::CubeRoots),
            _ => {
                let rest = s
                    .strip_prefix("fix:")
                    .ok_or_else(|| format!("unknown normalization {s:?} (strip, default, fix:<face>:<p>,<q>,<r>)"))?;
                let (face, pts) = rest.split_once(':').ok_or("expected fix:<face>:<p>,<q>,<r>")?;
                let face = face.parse::<usize>().map_err(|e| e.to_string())?;
                let pts: Vec<SpherePoint> = pts.split(',').map(parse_sphere_point).collect::<Result<_, _>>()?;
                if pts.len() != 3 {
                    return Err("fix normalization needs exactly three points".into());
                }
                Ok(Normalization::FixThreePoints { face, points: [pts[0], pts[1], pts[2]] })
            }
        }
    }
}

/// A tangency packing: one oriented disk per vertex and the dual disk of
/// each face, oriented to contain the face's interstice.
#[derive(Debug, Clone)]
pub struct CirclePacking {
    pub triangulation: Triangulation,
    pub disks: Vec<Disk>,
    pub dual_disks: Vec<Disk>,
    pub tangencies: BTreeMap<(usize, usize), SpherePoint>,
    pub normalization: String,
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl CirclePacking {
    /// Completes vertex disks with tangency points and dual disks.
    pub fn from_disks(triangulation: Triangulation, disks: Vec<Disk>, normalization: String) -> Result<Self, PackingError> {
        let tangencies = triangulation
            .edges()
            .iter()
            .map(|&(u, v)| ((u, v), tangency_point(&disks[u], &disks[v])))
            .collect();
        let mut p = CirclePacking { triangulation, disks, dual_disks: Vec::new(), tangencies, normalization };
        p.dual_disks = dual_disks(&p)?;
        Ok(p)
    }

    pub fn circle(&self, v: usize) -> GenCircle {
        self.disks[v].boundary()
    }

    pub fn circles(&self) -> Vec<GenCircle> {
        (0..self.disks.len()).map(|v| self.circle(v)).collect()
    }

    pub fn dual(&self, f: usize) -> GenCircle {
        self.dual_disks[f].boundary()
    }

    pub fn tangency(&self, u: usize, v: usize) -> SpherePoint {
        self.tangencies[&edge_key(u, v)]
    }

    /// Tangency points of face `f = (a, b, c)` on edges `ab`, `bc`, `ca`.
    pub fn face_tangencies(&self, f: usize) -> [SpherePoint; 3] {
        let [a, b, c] = self.triangulation.faces()[f];
        [self.tangency(a, b), self.tangency(b, c), self.tangency(c, a)]
    }

    /// Image under a (anti-)Möbius map.
    pub fn transform(&self, m: &MobiusMap) -> CirclePacking {
        CirclePacking {
            triangulation: self.triangulation.clone(),
            disks: self.disks.iter().map(|d| d.apply(m)).collect(),
            dual_disks: self.dual_disks.iter().map(|d| d.apply(m)).collect(),
            tangencies: self.tangencies.iter().map(|(&k, p)| (k, m.apply(p))).collect(),
            normalization: format!("{} (transformed)", self.normalization),
        }
    }

    pub fn to_json(&self) -> Value {
        let disk_json = |d: &Disk| -> Value {
            let mut v = serde_json::to_value(d.boundary()).expect("serializable circle");
            let exterior = match d.boundary() {
                GenCircle::Circle { .. } => d.a < 0.0,
                GenCircle::Line { .. } => false,
            };
            if exterior {
                v["exterior"] = Value::Bool(true);
            }
            v
        };
        let point_json = |p: &SpherePoint| match p {
            SpherePoint::Infinity => json!("inf"),
            SpherePoint::Finite(z) => json!([z.re, z.im]),
        };
        let circles: Map<String, Value> =
            self.disks.iter().enumerate().map(|(v, d)| (v.to_string(), disk_json(d))).collect();
        let duals: Map<String, Value> =
            self.dual_disks.iter().enumerate().map(|(f, d)| (f.to_string(), disk_json(d))).collect();
        let tangencies: Map<String, Value> =
            self.tangencies.iter().map(|(&(u, v), p)| (format!("{u}-{v}"), point_json(p))).collect();
        json!({
            "triangulation": self.triangulation,
            "normalization": self.normalization,
            "circles": circles,
            "duals": duals,
            "tangencies": tangencies,
        })
    }

    /// Reads the packing file format. Tangencies and duals are recomputed
    /// from the circles; duals in the file are checked against them.
    pub fn from_json(v: &Value) -> Result<Self, PackingError> {
        let err = |m: &str| PackingError::Format(m.to_string());
        let t: Triangulation = serde_json::from_value(v.get("triangulation").cloned().ok_or_else(|| err("missing triangulation"))?)
            .map_err(|e| PackingError::Format(e.to_string()))?;
        let report = t.validate();
        if !report.is_valid() {
            return Err(PackingError::InvalidTriangulation(report.to_string()));
        }
        let read_disk = |val: &Value| -> Result<Disk, PackingError> {
            let c: GenCircle = serde_json::from_value(val.clone()).map_err(|e| PackingError::Format(e.to_string()))?;
            let c = match c {
                GenCircle::Circle { center, radius } if radius > 0.0 => GenCircle::circle(center, radius),
                GenCircle::Line { normal, offset } if normal.norm() > 0.0 => GenCircle::line(normal, offset * normal.norm()),
                _ => return Err(err("degenerate circle")),
            };
            let d = Disk::from_circle(&c);
            Ok(if val.get("exterior").and_then(Value::as_bool).unwrap_or(false) { d.complement() } else { d })
        };
        let circles = v.get("circles").and_then(Value::as_object).ok_or_else(|| err("missing circles"))?;
        let mut disks = Vec::with_capacity(t.vertex_count());
        for i in 0..t.vertex_count() {
            disks.push(read_disk(circles.get(&i.to_string()).ok_or_else(|| err(&format!("missing circle {i}")))?)?);
        }
        let tag = v.get("normalization").and_then(Value::as_str).unwrap_or("file").to_string();
        let p = CirclePacking::from_disks(t, disks, tag)?;
        if let Some(duals) = v.get("duals").and_then(Value::as_object) {
            for (k, val) in duals {
                let f: usize = k.parse().map_err(|_| err("bad dual key"))?;
                if f >= p.dual_disks.len() || !read_disk(val)?.same_curve(&p.dual_disks[f], 1e-6) {
                    return Err(err(&format!("dual {k} disagrees with the circles")));
                }
            }
        }
        Ok(p)
    }
}

/// Dual disks: the disk bounded by the circle through a face's three
/// tangency points, on the side away from the other vertex disks.
pub fn dual_disks(p: &CirclePacking) -> Result<Vec<Disk>, GeometryError> {
    let t = &p.triangulation;
    let mut out = Vec::with_capacity(t.faces().len());
    for (fi, f) in t.faces().iter().enumerate() {
        let [x, y, z] = p.face_tangencies(fi);
        let d = Disk::from_circle(&circle_through(&x, &y, &z)?);
        let outsider = (0..t.vertex_count()).find(|v| !f.contains(v)).expect("at least four vertices");
        let probe = SpherePoint::Finite(p.disks[outsider].interior_point());
        out.push(if d.side(&probe) < 0.0 { d.complement() } else { d });
    }
    Ok(out)
}

pub fn dual_circles(p: &CirclePacking) -> Result<Vec<GenCircle>, GeometryError> {
    Ok(dual_disks(p)?.iter().map(Disk::boundary).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum PackingViolation {
    NotTangent { edge: (usize, usize), inversive: f64 },
    TangencyPointOff { edge: (usize, usize), distance: f64 },
    Overlap { pair: (usize, usize), inversive: f64 },
    DualMissesPoint { face: usize, edge: (usize, usize), distance: f64 },
    DualNotOrthogonal { face: usize, vertex: usize, cosine: f64 },
}

impl fmt::Display for PackingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PackingViolation::NotTangent { edge, inversive } => {
                write!(f, "edge {}-{}: not tangent (inversive product {inversive})", edge.0, edge.1)
            }
            PackingViolation::TangencyPointOff { edge, distance } => {
                write!(f, "edge {}-{}: recorded tangency point off by {distance:e}", edge.0, edge.1)
            }
            PackingViolation::Overlap { pair, inversive } => {
                write!(f, "vertices {} and {}: closed disks meet (inversive product {inversive})", pair.0, pair.1)
            }
            PackingViolation::DualMissesPoint { face, edge, distance } => write!(
                f,
                "face {face}: dual circle misses tangency point of {}-{} by {distance:e}",
                edge.0, edge.1
            ),
            PackingViolation::DualNotOrthogonal { face, vertex, cosine } => {
                write!(f, "face {face}: dual not orthogonal to circle {vertex} (cosine {cosine:e})")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PackingReport {
    pub violations: Vec<PackingViolation>,
    /// Largest defect seen by each check, for reporting.
    pub max_tangency_defect: f64,
    pub max_orthogonality_defect: f64,
}

impl PackingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_packing(p: &CirclePacking, tol: f64) -> PackingReport {
    let t = &p.triangulation;
    let mut r = PackingReport::default();
    for &(u, v) in t.edges() {
        let i = p.disks[u].inversive(&p.disks[v]);
        r.max_tangency_defect = r.max_tangency_defect.max((i - 1.0).abs());
        if (i - 1.0).abs() > tol {
            r.violations.push(PackingViolation::NotTangent { edge: (u, v), inversive: i });
            continue;
        }
        if let Some(q) = p.tangencies.get(&(u, v)) {
            let d = q.chordal(&tangency_point(&p.disks[u], &p.disks[v]));
            if d > tol.sqrt().max(1e3 * tol) {
                r.violations.push(PackingViolation::TangencyPointOff { edge: (u, v), distance: d });
            }
        }
    }
    for u in 0..t.vertex_count() {
        for v in u + 1..t.vertex_count() {
            if !t.is_edge(u, v) {
                let i = p.disks[u].inversive(&p.disks[v]);
                if i <= 1.0 + tol {
                    r.violations.push(PackingViolation::Overlap { pair: (u, v), inversive: i });
                }
            }
        }
    }
    for (fi, f) in t.faces().iter().enumerate() {
        let Some(dual) = p.dual_disks.get(fi) else { continue };
        for k in 0..3 {
            let e = edge_key(f[k], f[(k + 1) % 3]);
            if let Some(q) = p.tangencies.get(&e) {
                let d = dual.side(q).abs();
                if d > tol {
                    r.violations.push(PackingViolation::DualMissesPoint { face: fi, edge: e, distance: d });
                }
            }
            let cosine = dual.inversive(&p.disks[f[k]]);
            r.max_orthogonality_defect = r.max_orthogonality_defect.max(cosine.abs());
            if cosine.abs() > tol {
                r.violations.push(PackingViolation::DualNotOrthogonal { face: fi, vertex: f[k], cosine });
            }
        }
    }
    r
}

/// Angle at `v` of the hyperbolic triangle of centers with `s = e^{-h}`
/// radii; `s = 0` is a horocycle.
fn face_angle(sv: f64, su: f64, sw: f64) -> f64 {
    let v2 = sv * sv;
    let x = v2 * (1.0 - su * su) * (1.0 - sw * sw) / ((1.0 - v2 * su * su) * (1.0 - v2 * sw * sw));
    2.0 * x.clamp(0.0, 1.0).sqrt().asin()
}

struct Relaxation<'a> {
    /// For each interior vertex, the pairs of link neighbors of its faces.
    petals: Vec<(usize, Vec<(usize, usize)>)>,
    s: &'a mut Vec<f64>,
}

impl Relaxation<'_> {
    fn angle_sum(&self, idx: usize, sv: f64) -> f64 {
        self.petals[idx].1.iter().map(|&(u, w)| face_angle(sv, self.s[u], self.s[w])).sum()
    }

    /// Solves the angle sum at one vertex for its radius; increasing in `s`.
    fn solve_vertex(&mut self, idx: usize) {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut x = self.s[self.petals[idx].0];
        for _ in 0..200 {
            let f = self.angle_sum(idx, x) - TAU;
            if f.abs() < 1e-15 {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let h = 1e-7 * x.min(1.0 - x).max(1e-12);
            let df = (self.angle_sum(idx, x + h) - self.angle_sum(idx, x - h)) / (2.0 * h);
            let newton = x - f / df;
            x = if df > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-17 {
                break;
            }
        }
        let v = self.petals[idx].0;
        self.s[v] = x;
    }

    fn residual(&self) -> f64 {
        (0..self.petals.len())
            .map(|i| (self.angle_sum(i, self.s[self.petals[i].0]) - TAU).abs())
            .fold(0.0, f64::max)
    }
}

/// `s`-radii of the maximal packing of `T − v∞`; zero on horocycles.
fn relax(t: &Triangulation, v_inf: usize) -> Result<Vec<f64>, PackingError> {
    let n = t.vertex_count();
    let mut s = vec![0.0; n];
    let interior: Vec<usize> = (0..n).filter(|&v| v != v_inf && !t.is_edge(v, v_inf)).collect();
    for &v in &interior {
        s[v] = 0.5;
    }
    let petals = interior
        .iter()
        .map(|&v| {
            let pairs = t
                .faces()
                .iter()
                .filter_map(|f| {
                    let k = f.iter().position(|&x| x == v)?;
                    Some((f[(k + 1) % 3], f[(k + 2) % 3]))
                })
                .collect();
            (v, pairs)
        })
        .collect();
    let mut r = Relaxation { petals, s: &mut s };
    let max_sweeps = 100_000;
    let mut residual = r.residual();
    let mut sweeps = 0;
    while residual > ANGLE_TOL && sweeps < max_sweeps {
        for i in 0..r.petals.len() {
            r.solve_vertex(i);
        }
        sweeps += 1;
        residual = r.residual();
    }
    if residual > ANGLE_TOL {
        return Err(PackingError::NoConvergence { iterations: sweeps, residual });
    }
    Ok(s)
}

fn signed_area(a: Complex, b: Complex, c: Complex) -> f64 {
    ((b - a).conj() * (c - a)).im
}

fn center(d: &Disk) -> Complex {
    -d.b / d.a
}

/// The circle tangent to the tangent pair `a`, `b` with hyperbolic `s`-radius
/// `sc` in the unit disk, on the side making `(a, b, c)` counterclockwise.
fn place_third(a: &Disk, b: &Disk, sc: f64) -> Disk {
    let t = tangency_point(a, b).finite().expect("tangency inside the unit disk");
    let one = Complex::new(1.0, 0.0);
    // P(z) = 1/(z - t) sends the tangency point to ∞: a and b become
    // parallel lines bounding a strip.
    let p = MobiusMap::new(Complex::new(0.0, 0.0), one, one, -t, false);
    let pinv = p.inverse();
    let unit = Disk { a: 1.0, b: Complex::new(0.0, 0.0), c: -1.0 };
    let (la, lb, u) = (a.apply(&p), b.apply(&p), unit.apply(&p));
    let na = la.b / la.b.norm();
    let oa = -la.c / (2.0 * la.b.norm());
    let ob = -lb.c / (2.0 * lb.b.norm());
    let width = -ob - oa;
    let radius = 0.5 * width;
    let p0 = na * (0.5 * (oa - ob));
    let e = na * Complex::i();
    let target = -(1.0 + sc * sc) / (1.0 - sc * sc);
    // inversive(C(x), U) = target, quadratic in the position x along the strip
    let qa = 0.5 * u.a;
    let qb = (e * u.b.conj()).re;
    let qc = 0.5 * u.c + 0.5 * u.a * (p0.norm_sqr() - radius * radius) + (p0 * u.b.conj()).re - target * radius;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let roots = if qa.abs() > 1e-300 {
        [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
    } else {
        [-qc / qb, -qc / qb]
    };
    let (ca, cb) = (center(a), center(b));
    let mut best: Option<(f64, Disk)> = None;
    for x in roots {
        let c = Disk::from_circle(&GenCircle::circle(p0 + e * x, radius)).apply(&pinv);
        let area = signed_area(ca, cb, center(&c));
        if best.map_or(true, |(b, _)| area > b) {
            best = Some((area, c));
        }
    }
    best.unwrap().1
}

/// Lays out the maximal packing; returns disks with `disks[v_inf]` the
/// exterior of the unit circle.
fn layout(t: &Triangulation, v_inf: usize, s: &[f64]) -> Result<Vec<Disk>, PackingError> {
    let n = t.vertex_count();
    let faces: Vec<[usize; 3]> = t.faces().iter().copied().filter(|f| !f.contains(&v_inf)).collect();
    let mut placed: Vec<Option<Disk>> = vec![None; n];
    let interior = |v: usize| s[v] > 0.0;
    let start = faces.iter().position(|f| f.iter().any(|&v| interior(v))).unwrap_or(0);
    let mut f0 = faces[start];
    if let Some(k) = f0.iter().position(|&v| interior(v)) {
        f0 = [f0[k], f0[(k + 1) % 3], f0[(k + 2) % 3]];
        let (sa, sb) = (s[f0[0]], s[f0[1]]);
        let rho = (1.0 - sa) / (1.0 + sa);
        let x2 = (1.0 - sa * sb * sb) / (1.0 + sa * sb * sb);
        placed[f0[0]] = Some(Disk::from_circle(&GenCircle::circle(Complex::new(0.0, 0.0), rho)));
        placed[f0[1]] = Some(Disk::from_circle(&GenCircle::circle(Complex::new(0.5 * (rho + x2), 0.0), 0.5 * (x2 - rho))));
    } else {
        let rho = 3f64.sqrt() / (2.0 + 3f64.sqrt());
        for k in 0..2 {
            let dir = Complex::from_polar(1.0 - rho, TAU * k as f64 / 3.0);
            placed[f0[k]] = Some(Disk::from_circle(&GenCircle::circle(dir, rho)));
        }
    }
    loop {
        let mut progress = false;
        for f in &faces {
            let missing: Vec<usize> = (0..3).filter(|&k| placed[f[k]].is_none()).collect();
            if missing.len() != 1 {
                continue;
            }
            let k = missing[0];
            let (a, b, c) = (f[(k + 1) % 3], f[(k + 2) % 3], f[k]);
            placed[c] = Some(place_third(&placed[a].unwrap(), &placed[b].unwrap(), s[c]));
            progress = true;
        }
        if !progress {
            break;
        }
    }
    placed[v_inf] = Some(Disk { a: -1.0, b: Complex::new(0.0, 0.0), c: 1.0 });
    if placed.iter().any(Option::is_none) {
        return Err(PackingError::Layout(f64::INFINITY));
    }
    let disks: Vec<Disk> = placed.into_iter().map(Option::unwrap).collect();
    let worst = t
        .edges()
        .iter()
        .map(|&(u, v)| (disks[u].inversive(&disks[v]) - 1.0).abs())
        .fold(0.0, f64::max);
    if worst > LAYOUT_TOL {
        return Err(PackingError::Layout(worst));
    }
    Ok(disks)
}

fn cube_roots() -> [SpherePoint; 3] {
    [0.0, 1.0, 2.0].map(|k| SpherePoint::Finite(Complex::from_polar(1.0, TAU * k / 3.0)))
}

fn normalizing_map(p: &CirclePacking, norm: &Normalization) -> Result<MobiusMap, PackingError> {
    let t = &p.triangulation;
    match norm {
        Normalization::Strip => {
            if t.vertex_count() != 4 {
                return Err(PackingError::Normalization("strip normalization needs the tetrahedron".into()));
            }
            let src = [p.tangency(0, 1), p.tangency(0, 2), p.tangency(1, 2)];
            let dst = [SpherePoint::Infinity, SpherePoint::new(0.0, 0.0), SpherePoint::new(0.0, 2.0)];
            for anti in [false, true] {
                let m = MobiusMap::from_triples(&src, &dst, anti)?;
                let d3 = p.disks[3].apply(&m);
                if d3.a > 0.0 && (center(&d3) - Complex::new(2.0, 1.0)).norm() < 1e-6 {
                    return Ok(m);
                }
            }
            Err(PackingError::Normalization("strip normalization failed to place vertex 3".into()))
        }
        Normalization::FixThreePoints { face, points } => {
            if *face >= t.faces().len() {
                return Err(PackingError::Normalization(format!("no face {face}")));
            }
            Ok(MobiusMap::from_triples(&p.face_tangencies(*face), points, false)?)
        }
        Normalization::CubeRoots => {
            let src = p.face_tangencies(0);
            let mut dst = cube_roots();
            let m = MobiusMap::from_triples(&src, &dst, false)?;
            if p.dual_disks[0].apply(&m).side(&SpherePoint::Infinity) < 0.0 {
                return Ok(m);
            }
            dst.swap(1, 2);
            Ok(MobiusMap::from_triples(&src, &dst, false)?)
        }
    }
}

/// Vertex sent to the unit circle: largest degree, lowest id on ties.
fn choose_v_inf(t: &Triangulation) -> usize {
    (0..t.vertex_count()).max_by_key(|&v| (t.degree(v), std::cmp::Reverse(v))).unwrap_or(0)
}

pub fn solve_packing(t: &Triangulation, norm: &Normalization, tol: f64) -> Result<CirclePacking, PackingError> {
    let report = t.validate();
    if !report.is_valid() {
        return Err(PackingError::InvalidTriangulation(report.to_string()));
    }
    let v_inf = choose_v_inf(t);
    let s = relax(t, v_inf)?;
    let disks = layout(t, v_inf, &s)?;
    let raw = CirclePacking::from_disks(t.clone(), disks, "disk".into())?;
    let m = normalizing_map(&raw, norm)?;
    let disks = raw.disks.iter().map(|d| d.apply(&m)).map(snap_line).collect();
    let p = CirclePacking::from_disks(t.clone(), disks, norm.to_string())?;
    let report = verify_packing(&p, tol);
    if !report.is_valid() {
        return Err(PackingError::Layout(report.max_tangency_defect.max(report.max_orthogonality_defect)));
    }
    Ok(p)
}

/// Rounds forms whose boundary is a line up to roundoff to exact lines.
fn snap_line(d: Disk) -> Disk {
    if d.a.abs() < 1e-13 {
        Disk::from_form(0.0, d.b, d.c)
    } else {
        d
    }
}

/// A symmetry of the packing with the vertex permutation it induces.
#[derive(Debug, Clone)]
pub struct Symmetry {
    pub map: MobiusMap,
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct SymmetryGroup {
    pub elements: Vec<Symmetry>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orientation_preserving(&self) -> usize {
        self.elements.iter().filter(|e| !e.map.anti).count()
    }

    pub fn find(&self, m: &MobiusMap, tol: f64) -> Option<usize> {
        self.elements.iter().position(|e| e.map.approx_eq(m, tol))
    }

    /// Every product and inverse is again an element.
    pub fn is_closed(&self, tol: f64) -> bool {
        self.elements.iter().all(|g| {
            self.find(&g.map.inverse(), tol).is_some()
                && self.elements.iter().all(|h| self.find(&g.map.compose(&h.map), tol).is_some())
        })
    }
}

/// Möbius and anti-Möbius maps permuting the circles according to a graph
/// automorphism.
pub fn mobius_symmetries(p: &CirclePacking, tol: f64) -> SymmetryGroup {
    let t = &p.triangulation;
    let [a, b, c] = t.faces()[0];
    let src = p.face_tangencies(0);
    let mut elements = Vec::new();
    for perm in t.automorphisms() {
        let dst = [p.tangency(perm[a], perm[b]), p.tangency(perm[b], perm[c]), p.tangency(perm[c], perm[a])];
        for anti in [false, true] {
            let Ok(m) = MobiusMap::from_triples(&src, &dst, anti) else { continue };
            let ok = (0..t.vertex_count()).all(|v| p.disks[v].apply(&m).same_disk(&p.disks[perm[v]], tol));
            if ok {
                elements.push(Symmetry { map: m, permutation: perm.clone() });
                break;
            }
        }
    }
    SymmetryGroup { elements }
}
