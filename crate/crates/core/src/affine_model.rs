//! A piecewise affine, orientation-reversing model map on the tetrahedron,
//! drawn on its planar net. Each interstice (middle triangle of a face) is
//! cut into three corner triangles, mapped by anti-similarities of factor 2
//! onto the three other interstices, and three barycentric triangles,
//! mapped affinely onto corner triangles (caps). Caps are absorbing.
//!
//! Net: outer triangle `D₂ = (0,0)`, `D₃ = (2,0)`, `D₁ = (1,√3)`, inner
//! face `A = (1/2,√3/2)`, `B = (3/2,√3/2)`, `C = (1,0)`. Pieces are built
//! exactly in the coordinates `(u, v) = (x, y/√3)`, where every vertex is
//! rational.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::raster::{self, RasterImage, Region};

type Q = Ratio<i64>;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;
const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AffineError {
    #[error("construction inconsistent: {0}")]
    ConstructionInconsistent(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

/// Tetrahedron vertices.
pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;
pub const VERTEX_NAMES: [&str; 4] = ["A", "B", "C", "D"];

/// Faces `ABC`, `ABD`, `ACD`, `BCD`, drawn as `ABC`, `ABD₁`, `ACD₂`, `BCD₃`.
pub const FACES: [[usize; 3]; 4] = [[A, B, C], [A, B, D], [A, C, D], [B, C, D]];

/// Net position of tetrahedron vertex `x` in face `f`, in `(u, v)`.
fn chart_q(f: usize, x: usize) -> [Q; 2] {
    let q = |n, d| Ratio::new(n, d);
    match x {
        A => [q(1, 2), q(1, 2)],
        B => [q(3, 2), q(1, 2)],
        C => [q(1, 1), q(0, 1)],
        _ => match f {
            1 => [q(1, 1), q(1, 1)],
            2 => [q(0, 1), q(0, 1)],
            3 => [q(2, 1), q(0, 1)],
            _ => panic!("face {f} does not contain D"),
        },
    }
}

fn to_xy(p: [Q; 2]) -> NetPoint {
    let f = |r: Q| *r.numer() as f64 / *r.denom() as f64;
    NetPoint { x: f(p[0]), y: f(p[1]) * SQRT3 }
}

fn mid_q(p: [Q; 2], q: [Q; 2]) -> [Q; 2] {
    let h = Ratio::new(1, 2);
    [(p[0] + q[0]) * h, (p[1] + q[1]) * h]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetPoint {
    pub x: f64,
    pub y: f64,
}

impl NetPoint {
    pub fn new(x: f64, y: f64) -> Self {
        NetPoint { x, y }
    }

    pub fn dist(&self, o: &NetPoint) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    fn lerp(&self, o: &NetPoint, t: f64) -> NetPoint {
        NetPoint::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
}

/// Net position of vertex `x` in face `f`.
pub fn chart(f: usize, x: usize) -> NetPoint {
    to_xy(chart_q(f, x))
}

pub fn face_triangle(f: usize) -> [NetPoint; 3] {
    FACES[f].map(|x| chart(f, x))
}

/// Barycentric coordinates of `p` in triangle `t`.
pub fn barycentric(t: &[NetPoint; 3], p: &NetPoint) -> [f64; 3] {
    let (a, b, c) = (t[0], t[1], t[2]);
    let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    let l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    let l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    [1.0 - l1 - l2, l1, l2]
}

fn in_triangle(t: &[NetPoint; 3], p: &NetPoint, tol: f64) -> bool {
    barycentric(t, p).iter().all(|&l| l >= -tol)
}

/// Lowest-indexed net face containing `p`.
pub fn face_of(p: &NetPoint) -> Option<usize> {
    (0..4).find(|&f| in_triangle(&face_triangle(f), p, TOL))
}

/// Face drawing each edge `{x, y}` (and each vertex) canonically.
fn owner_of_edge(x: usize, y: usize) -> usize {
    match (x.min(y), x.max(y)) {
        (A, D) | (B, D) => 1,
        (C, D) => 2,
        _ => 0,
    }
}

/// Canonical net representative of the surface point with barycentric
/// coordinates `l` in face `f`. Points on folded edges are moved to the
/// owning face, matched by distance from the shared vertex.
pub fn canonical(f: usize, l: [f64; 3]) -> NetPoint {
    let verts = FACES[f];
    let zero: Vec<usize> = (0..3).filter(|&i| l[i].abs() < 1e-11).collect();
    let owner = match zero.len() {
        0 => f,
        1 => {
            let others: Vec<usize> = (0..3).filter(|&i| i != zero[0]).collect();
            owner_of_edge(verts[others[0]], verts[others[1]])
        }
        _ => {
            let v = verts[(0..3).find(|i| !zero.contains(i)).unwrap()];
            if v == D {
                1
            } else {
                0
            }
        }
    };
    let mut x = 0.0;
    let mut y = 0.0;
    for i in 0..3 {
        if !FACES[owner].contains(&verts[i]) {
            // Weight on a vertex the owner lacks is zero here.
            continue;
        }
        let p = chart(owner, verts[i]);
        x += l[i] * p.x;
        y += l[i] * p.y;
    }
    NetPoint::new(x, y)
}

/// Canonicalizes a net point given in face `f`'s chart.
pub fn canonical_point(f: usize, p: &NetPoint) -> NetPoint {
    canonical(f, barycentric(&face_triangle(f), p))
}

/// Canonical representative of an arbitrary net point.
pub fn canonicalize(p: &NetPoint) -> Option<NetPoint> {
    face_of(p).map(|f| canonical_point(f, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    /// Corner triangle at the midpoint of an edge: an anti-similarity.
    Corner,
    /// Triangle at the barycenter: affine, not conformal.
    Barycentric,
}

#[derive(Debug, Clone)]
pub struct AffinePiece {
    pub face: usize,
    pub target_face: usize,
    pub kind: PieceKind,
    pub source: [NetPoint; 3],
    pub target: [NetPoint; 3],
    /// Exact linear part and offset in `(u, v)` coordinates.
    pub matrix_uv: [[Q; 2]; 2],
    pub offset_uv: [Q; 2],
    /// The same map in net coordinates `(x, y)`.
    pub matrix: [[f64; 2]; 2],
    pub offset: [f64; 2],
}

impl AffinePiece {
    pub fn apply(&self, p: &NetPoint) -> NetPoint {
        let m = &self.matrix;
        NetPoint::new(
            m[0][0] * p.x + m[0][1] * p.y + self.offset[0],
            m[1][0] * p.x + m[1][1] * p.y + self.offset[1],
        )
    }

    pub fn determinant(&self) -> f64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn orientation_reversing(&self) -> bool {
        let m = &self.matrix_uv;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]).is_negative()
    }

    /// Singular values of the linear part in net coordinates.
    pub fn singular_values(&self) -> (f64, f64) {
        let m = &self.matrix;
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        let s = a * a + b * b + c * c + d * d;
        let det = (a * d - b * c).abs();
        let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
        (((s + disc) / 2.0).sqrt(), ((s - disc) / 2.0).max(0.0).sqrt())
    }

    /// Scale factor if the piece is a similarity (to `tol`).
    pub fn similarity_factor(&self, tol: f64) -> Option<f64> {
        let (s1, s2) = self.singular_values();
        ((s1 - s2).abs() < tol).then_some(s1)
    }
}

fn affine_from_q(src: [[Q; 2]; 3], dst: [[Q; 2]; 3]) -> ([[Q; 2]; 2], [Q; 2]) {
    // M · [s1−s0, s2−s0] = [t1−t0, t2−t0].
    let s = [[src[1][0] - src[0][0], src[2][0] - src[0][0]], [src[1][1] - src[0][1], src[2][1] - src[0][1]]];
    let t = [[dst[1][0] - dst[0][0], dst[2][0] - dst[0][0]], [dst[1][1] - dst[0][1], dst[2][1] - dst[0][1]]];
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let inv = [[s[1][1] / det, -s[0][1] / det], [-s[1][0] / det, s[0][0] / det]];
    let mut m = [[Q::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = t[i][0] * inv[0][j] + t[i][1] * inv[1][j];
        }
    }
    let off = [
        dst[0][0] - (m[0][0] * src[0][0] + m[0][1] * src[0][1]),
        dst[0][1] - (m[1][0] * src[0][0] + m[1][1] * src[0][1]),
    ];
    (m, off)
}

fn piece(face: usize, target_face: usize, kind: PieceKind, src: [[Q; 2]; 3], dst: [[Q; 2]; 3]) -> AffinePiece {
    let (m, off) = affine_from_q(src, dst);
    let f = |r: Q| *r.numer() as f64 / *r.denom() as f64;
    // (x, y) = S (u, v) with S = diag(1, √3): M_xy = S M S⁻¹.
    let matrix = [[f(m[0][0]), f(m[0][1]) / SQRT3], [f(m[1][0]) * SQRT3, f(m[1][1])]];
    let offset = [f(off[0]), f(off[1]) * SQRT3];
    AffinePiece {
        face,
        target_face,
        kind,
        source: src.map(to_xy),
        target: dst.map(to_xy),
        matrix_uv: m,
        offset_uv: off,
        matrix,
        offset,
    }
}

fn face_with(verts: [usize; 3]) -> usize {
    let mut v = verts;
    v.sort();
    FACES.iter().position(|f| *f == v).expect("a face of the tetrahedron")
}

/// The model: per face three corner pieces (at the midpoints of its edges
/// `XY`, `XZ`, `YZ`) followed by three barycentric pieces, 24 in all.
pub fn build_model() -> Result<Model, AffineError> {
    let mut pieces = Vec::new();
    for (f, verts) in FACES.iter().enumerate() {
        let w = (0..4).find(|v| !verts.contains(v)).unwrap();
        let p = |x: usize| chart_q(f, x);
        let m = |x: usize, y: usize| mid_q(p(x), p(y));
        // Inner subdivision point toward vertex x.
        let inner = |x: usize| {
            let others: Vec<usize> = verts.iter().copied().filter(|&y| y != x).collect();
            mid_q(m(x, others[0]), m(x, others[1]))
        };
        let third = Ratio::new(1, 3);
        let n = {
            let (a, b, c) = (inner(verts[0]), inner(verts[1]), inner(verts[2]));
            [(a[0] + b[0] + c[0]) * third, (a[1] + b[1] + c[1]) * third]
        };
        let pairs = [(verts[0], verts[1]), (verts[0], verts[2]), (verts[1], verts[2])];
        for &(x, y) in &pairs {
            let g = face_with([x, y, w]);
            let q = |z: usize| chart_q(g, z);
            let mxy = m(x, y);
            let src = [mxy, mid_q(mxy, m(x, third_vertex(verts, x, y))), mid_q(mxy, m(y, third_vertex(verts, x, y)))];
            let dst = [mid_q(q(x), q(y)), mid_q(q(x), q(w)), mid_q(q(y), q(w))];
            pieces.push(piece(f, g, PieceKind::Corner, src, dst));
        }
        for &(x, y) in &pairs {
            let g = face_with([x, y, w]);
            let q = |z: usize| chart_q(g, z);
            let src = [inner(x), inner(y), n];
            let dst = [mid_q(q(x), q(w)), mid_q(q(y), q(w)), q(w)];
            pieces.push(piece(f, g, PieceKind::Barycentric, src, dst));
        }
    }
    let model = Model { pieces };
    let worst = model.seam_mismatch(64);
    if worst > 1e-12 {
        return Err(AffineError::ConstructionInconsistent(format!("shared-edge mismatch {worst:e}")));
    }
    Ok(model)
}

fn third_vertex(verts: &[usize; 3], x: usize, y: usize) -> usize {
    verts.iter().copied().find(|&z| z != x && z != y).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AffineStep {
    Mapped(NetPoint),
    EnteredCap(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AffineOutcome {
    Fatou { cap: usize, time: usize },
    JuliaCandidate,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub pieces: Vec<AffinePiece>,
}

impl Model {
    pub fn face_pieces(&self, f: usize) -> &[AffinePiece] {
        &self.pieces[6 * f..6 * f + 6]
    }

    /// Interstice of face `f`: the triangle of its edge midpoints.
    pub fn interstice(&self, f: usize) -> [NetPoint; 3] {
        let p = self.face_pieces(f);
        [p[0].source[0], p[1].source[0], p[2].source[0]]
    }

    /// Cap containing `p` in its interior, as a tetrahedron vertex.
    pub fn cap_of(&self, f: usize, p: &NetPoint) -> Option<usize> {
        let l = barycentric(&face_triangle(f), p);
        (0..3).find(|&i| l[i] > 0.5 + TOL).map(|i| FACES[f][i])
    }

    pub fn step(&self, p: &NetPoint) -> Option<AffineStep> {
        let f = face_of(p)?;
        if let Some(cap) = self.cap_of(f, p) {
            return Some(AffineStep::EnteredCap(cap));
        }
        let piece = self.face_pieces(f).iter().find(|pc| in_triangle(&pc.source, p, TOL))?;
        Some(AffineStep::Mapped(canonical_point(piece.target_face, &piece.apply(p))))
    }

    pub fn classify(&self, p: &NetPoint, maxiter: usize) -> AffineOutcome {
        let mut q = *p;
        for time in 0..=maxiter {
            match self.step(&q) {
                Some(AffineStep::EnteredCap(cap)) => return AffineOutcome::Fatou { cap, time },
                Some(AffineStep::Mapped(r)) => q = r,
                None => break,
            }
        }
        AffineOutcome::JuliaCandidate
    }

    /// Largest distance between the canonical images of seam points under
    /// the two pieces sharing the seam, over `samples` points per seam.
    pub fn seam_mismatch(&self, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for f in 0..4 {
            for (i, j, a, b) in self.seams(f) {
                let (pi, pj) = (&self.face_pieces(f)[i], &self.face_pieces(f)[j]);
                for k in 0..=samples {
                    let p = a.lerp(&b, k as f64 / samples as f64);
                    let qi = canonical_point(pi.target_face, &pi.apply(&p));
                    let qj = canonical_point(pj.target_face, &pj.apply(&p));
                    worst = worst.max(qi.dist(&qj));
                }
            }
        }
        worst
    }

    /// Pairs of pieces of face `f` sharing an edge, with that edge.
    pub fn seams(&self, f: usize) -> Vec<(usize, usize, NetPoint, NetPoint)> {
        let ps = self.face_pieces(f);
        let mut out = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                let shared: Vec<NetPoint> = ps[i]
                    .source
                    .iter()
                    .copied()
                    .filter(|p| ps[j].source.iter().any(|q| q.dist(p) < TOL))
                    .collect();
                if shared.len() == 2 {
                    out.push((i, j, shared[0], shared[1]));
                }
            }
        }
        out
    }

    /// Whether the closed polygon `poly` (in face `f`'s chart) meets the
    /// depth-`depth` approximation of the Julia set in that face.
    fn hits(&self, poly: &[NetPoint], f: usize, depth: usize) -> bool {
        let tri = self.interstice(f);
        let q = clip(poly, &tri);
        if q.is_empty() {
            return false;
        }
        // The interstice boundary lies in the Julia set.
        if q.iter().any(|p| barycentric(&tri, p).iter().any(|l| l.abs() < 1e-10)) {
            return true;
        }
        if depth == 0 {
            return true;
        }
        self.face_pieces(f)[..3].iter().any(|pc| {
            let part = clip(&q, &pc.source);
            !part.is_empty() && {
                let image: Vec<NetPoint> = part.iter().map(|p| pc.apply(p)).collect();
                self.hits(&image, pc.target_face, depth - 1)
            }
        })
    }

    /// Whether the closed square `[x, x+s] × [y, y+s]` meets the depth-`depth`
    /// Julia approximation; `faces` restricts which interstices count.
    pub fn cell_hits(&self, x: f64, y: f64, s: f64, depth: usize, faces: &[usize]) -> bool {
        let sq = [NetPoint::new(x, y), NetPoint::new(x + s, y), NetPoint::new(x + s, y + s), NetPoint::new(x, y + s)];
        faces.iter().any(|&f| {
            let part = clip(&sq, &face_triangle(f));
            !part.is_empty() && self.hits(&part, f, depth)
        })
    }

    /// Box counts on the grid of side-`2/2ᵏ` cells anchored at `origin`, for
    /// `k = 0..=max_level`, by quadtree refinement of a root square of side 4.
    pub fn box_counts_at(&self, origin: (f64, f64), depth: usize, max_level: u32, faces: &[usize]) -> Vec<usize> {
        let mut side = 4.0;
        let root = (origin.0 - 2.0, origin.1 - 2.0);
        let mut cells = vec![root];
        if !self.cell_hits(root.0, root.1, side, depth, faces) {
            return vec![0; max_level as usize + 1];
        }
        let mut counts = vec![];
        for _ in 0..=max_level {
            side /= 2.0;
            cells = cells
                .par_iter()
                .flat_map_iter(|&(x, y)| {
                    [(x, y), (x + side, y), (x, y + side), (x + side, y + side)]
                        .into_iter()
                        .filter(|&(cx, cy)| self.cell_hits(cx, cy, side, depth, faces))
                        .collect::<Vec<_>>()
                })
                .collect();
            counts.push(cells.len());
        }
        counts
    }

    pub fn box_counts(&self, depth: usize, max_level: u32, faces: &[usize]) -> Vec<usize> {
        self.box_counts_at((0.0, 0.0), depth, max_level, faces)
    }

    /// Least-squares slope of `log N` against `log(1/s)` at the given
    /// power-of-two resolutions of `[0,2]²`, with `log N` averaged over a
    /// few grid offsets to damp lattice phase effects.
    pub fn dimension_estimate(&self, maxiter: usize, resolutions: &[usize], faces: &[usize]) -> Result<f64, AffineError> {
        if resolutions.len() < 3 {
            return Err(AffineError::InsufficientData(format!("{} resolutions, need at least 3", resolutions.len())));
        }
        let levels: Vec<u32> = resolutions
            .iter()
            .map(|&r| {
                if r.is_power_of_two() {
                    Ok(r.trailing_zeros())
                } else {
                    Err(AffineError::InsufficientData(format!("resolution {r} is not a power of two")))
                }
            })
            .collect::<Result<_, _>>()?;
        let top = *levels.iter().max().unwrap();
        let counts: Vec<Vec<usize>> = GRID_SHIFTS.iter().map(|&o| self.box_counts_at(o, maxiter, top, faces)).collect();
        let pts: Vec<(f64, f64)> = levels
            .iter()
            .map(|&k| {
                let mean = counts.iter().map(|c| (c[k as usize].max(1) as f64).ln()).sum::<f64>() / counts.len() as f64;
                ((2f64.powi(k as i32) / 2.0).ln(), mean)
            })
            .collect();
        Ok(slope(&pts))
    }

    /// Distance ratios `|𝒢p − 𝒢q| / |p − q|` for nearby pairs inside corner
    /// pieces, on points sampled from the Julia approximation.
    pub fn expansion_ratios(&self, samples: usize, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix(seed);
        let mut out = Vec::new();
        while out.len() < samples {
            let pc = &self.pieces[6 * (rng.below(4)) + rng.below(3)];
            let (a, b) = (rng.unit(), rng.unit());
            let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
            let s = pc.source;
            let p = NetPoint::new(
                s[0].x + a * (s[1].x - s[0].x) + b * (s[2].x - s[0].x),
                s[0].y + a * (s[1].y - s[0].y) + b * (s[2].y - s[0].y),
            );
            let d = 1e-6 * (rng.unit() + 0.5);
            let ang = std::f64::consts::TAU * rng.unit();
            let q = NetPoint::new(p.x + d * ang.cos(), p.y + d * ang.sin());
            if !in_triangle(&s, &q, 0.0) {
                continue;
            }
            out.push(pc.apply(&p).dist(&pc.apply(&q)) / p.dist(&q));
        }
        out
    }

    /// For dense samples of interstice `f`: faces whose interstice receives
    /// an image, and whether some image lands in a cap.
    pub fn image_faces(&self, f: usize, n: usize) -> (Vec<usize>, bool) {
        let tri = self.interstice(f);
        let mut faces = vec![];
        let mut cap = false;
        for i in 0..=n {
            for j in 0..=n - i {
                let (a, b) = ((i as f64 + 0.3) / (n as f64 + 1.0), (j as f64 + 0.3) / (n as f64 + 1.0));
                let p = NetPoint::new(
                    tri[0].x + a * (tri[1].x - tri[0].x) + b * (tri[2].x - tri[0].x),
                    tri[0].y + a * (tri[1].y - tri[0].y) + b * (tri[2].y - tri[0].y),
                );
                match self.step(&p) {
                    Some(AffineStep::Mapped(q)) => {
                        let g = face_of(&q).unwrap();
                        match self.cap_of(g, &q) {
                            Some(_) => cap = true,
                            None if !faces.contains(&g) => faces.push(g),
                            None => {}
                        }
                    }
                    Some(AffineStep::EnteredCap(_)) | None => {}
                }
            }
        }
        faces.sort();
        (faces, cap)
    }

    /// Render over the net's bounding box: Julia candidates black, caps by
    /// entry time, outside the net white.
    pub fn render(&self, width: usize, height: usize, maxiter: usize) -> RasterImage {
        let region = Region::new(0.0, 2.0, 0.0, SQRT3);
        raster::render(&region, width, height, |z| {
            let p = NetPoint::new(z.re, z.im);
            if face_of(&p).is_none() {
                return [255, 255, 255];
            }
            match self.classify(&p, maxiter) {
                AffineOutcome::JuliaCandidate => raster::LIMIT_COLOR,
                AffineOutcome::Fatou { cap, time } => raster::shade(cap, time),
            }
        })
    }
}

const GRID_SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (0.37, 0.11), (0.713, 0.529), (0.191, 0.853)];

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Small deterministic generator for the sampling helpers.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// Sutherland–Hodgman clip of a polygon against a triangle, keeping the
/// boundary.
pub fn clip(poly: &[NetPoint], tri: &[NetPoint; 3]) -> Vec<NetPoint> {
    let orient = {
        let (a, b, c) = (tri[0], tri[1], tri[2]);
        ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)).signum()
    };
    let mut out = poly.to_vec();
    for e in 0..3 {
        if out.is_empty() {
            break;
        }
        let (a, b) = (tri[e], tri[(e + 1) % 3]);
        let len = a.dist(&b);
        let side = |p: &NetPoint| orient * ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / len;
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let (p, q) = (input[i], input[(i + 1) % input.len()]);
            let (sp, sq) = (side(&p), side(&q));
            let (pin, qin) = (sp >= -TOL, sq >= -TOL);
            if pin {
                out.push(p);
            }
            if pin != qin {
                let t = sp / (sp - sq);
                out.push(p.lerp(&q, t));
            }
        }
    }
    out
}
