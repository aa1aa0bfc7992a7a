//! Sphere triangulations: validation, reducedness, barycentric subdivision
//! and the built-in polyhedra.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

/// A triangulation with an explicit, consistently oriented face list.
/// Edges are derived from the faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TriangulationFile", into = "TriangulationFile")]
pub struct Triangulation {
    n: usize,
    faces: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationFile {
    vertices: usize,
    faces: Vec<[usize; 3]>,
}

impl TryFrom<TriangulationFile> for Triangulation {
    type Error = String;
    fn try_from(f: TriangulationFile) -> Result<Self, String> {
        if let Some(v) = f.faces.iter().flatten().find(|&&v| v >= f.vertices) {
            return Err(format!("face vertex {v} out of range 0..{}", f.vertices));
        }
        Ok(Triangulation::from_faces(f.vertices, f.faces))
    }
}

impl From<Triangulation> for TriangulationFile {
    fn from(t: Triangulation) -> Self {
        TriangulationFile { vertices: t.n, faces: t.faces }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices(usize),
    VertexOutOfRange { face: usize, vertex: usize },
    DegenerateFace(usize),
    DuplicateFace(usize),
    NotMaximal { vertices: usize, edges: usize },
    FaceCount { vertices: usize, faces: usize },
    EdgeFaceCount { edge: (usize, usize), faces: usize },
    InconsistentOrientation { edge: (usize, usize) },
    FacesShareTwoEdges(usize, usize),
    NonManifoldVertex(usize),
    IsolatedVertex(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::TooFewVertices(n) => write!(f, "too few vertices: {n} < 4"),
            Violation::VertexOutOfRange { face, vertex } => {
                write!(f, "face {face} references vertex {vertex} out of range")
            }
            Violation::DegenerateFace(i) => write!(f, "face {i} repeats a vertex"),
            Violation::DuplicateFace(i) => write!(f, "face {i} duplicates an earlier face"),
            Violation::NotMaximal { vertices, edges } => write!(
                f,
                "not maximal: |E| ≠ 3|V|−6 (|V|={vertices}, |E|={edges})"
            ),
            Violation::FaceCount { vertices, faces } => {
                write!(f, "|F| ≠ 2|V|−4 (|V|={vertices}, |F|={faces})")
            }
            Violation::EdgeFaceCount { edge, faces } => {
                write!(f, "edge {}-{} lies in {faces} faces, expected 2", edge.0, edge.1)
            }
            Violation::InconsistentOrientation { edge } => {
                write!(f, "directed edge {}->{} used by two faces", edge.0, edge.1)
            }
            Violation::FacesShareTwoEdges(i, j) => write!(f, "faces {i} and {j} share more than one edge"),
            Violation::NonManifoldVertex(v) => write!(f, "link of vertex {v} is not a single cycle"),
            Violation::IsolatedVertex(v) => write!(f, "vertex {v} lies in no face"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn sorted_edge(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Triangulation {
    /// Builds from an oriented face list. Out-of-range vertices are dropped
    /// from the derived graph but kept in the face list so `validate` can
    /// report them.
    pub fn from_faces(n: usize, faces: Vec<[usize; 3]>) -> Self {
        let mut edge_set = BTreeSet::new();
        let mut nb = vec![BTreeSet::new(); n];
        for f in &faces {
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                if u < n && v < n && u != v {
                    edge_set.insert(sorted_edge(u, v));
                    nb[u].insert(v);
                    nb[v].insert(u);
                }
            }
        }
        Triangulation {
            n,
            faces,
            edges: edge_set.into_iter().collect(),
            neighbors: nb.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// Faces containing `v`, as indices.
    pub fn faces_at(&self, v: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].contains(&v)).collect()
    }

    /// Maps each directed edge `(u, v)` to the face in which it appears.
    pub fn directed_edge_faces(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                m.insert((f[k], f[(k + 1) % 3]), i);
            }
        }
        m
    }

    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let n = self.n;
        if n < 4 {
            out.push(Violation::TooFewVertices(n));
        }
        let mut seen: HashSet<[usize; 3]> = HashSet::new();
        let mut sane = Vec::new();
        for (i, f) in self.faces.iter().enumerate() {
            if let Some(&v) = f.iter().find(|&&v| v >= n) {
                out.push(Violation::VertexOutOfRange { face: i, vertex: v });
                continue;
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                out.push(Violation::DegenerateFace(i));
                continue;
            }
            let mut key = *f;
            key.sort_unstable();
            if !seen.insert(key) {
                out.push(Violation::DuplicateFace(i));
                continue;
            }
            sane.push(i);
        }
        let e = self.edges.len();
        if n >= 3 && e != 3 * n - 6 {
            out.push(Violation::NotMaximal { vertices: n, edges: e });
        }
        if n >= 2 && self.faces.len() != 2 * n - 4 {
            out.push(Violation::FaceCount { vertices: n, faces: self.faces.len() });
        }
        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for &i in &sane {
            let f = self.faces[i];
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                edge_faces.entry(sorted_edge(u, v)).or_default().push(i);
                *directed.entry((u, v)).or_insert(0) += 1;
            }
        }
        for (&edge, fs) in &edge_faces {
            if fs.len() != 2 {
                out.push(Violation::EdgeFaceCount { edge, faces: fs.len() });
            }
        }
        let mut bad_dir: Vec<_> = directed.iter().filter(|(_, &c)| c > 1).map(|(&k, _)| k).collect();
        bad_dir.sort_unstable();
        for edge in bad_dir {
            out.push(Violation::InconsistentOrientation { edge });
        }
        let mut pair_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for fs in edge_faces.values() {
            for a in 0..fs.len() {
                for b in a + 1..fs.len() {
                    *pair_count.entry(sorted_edge(fs[a], fs[b])).or_insert(0) += 1;
                }
            }
        }
        for (&(i, j), &c) in &pair_count {
            if c > 1 {
                out.push(Violation::FacesShareTwoEdges(i, j));
            }
        }
        for v in 0..n {
            if self.neighbors[v].is_empty() {
                out.push(Violation::IsolatedVertex(v));
            } else if !self.link_is_cycle(v, &sane) {
                out.push(Violation::NonManifoldVertex(v));
            }
        }
        ValidationReport { violations: out }
    }

    fn link_is_cycle(&self, v: usize, faces: &[usize]) -> bool {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for &i in faces {
            let f = self.faces[i];
            if let Some(k) = f.iter().position(|&x| x == v) {
                if next.insert(f[(k + 1) % 3], f[(k + 2) % 3]).is_some() {
                    return false;
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        let start = *next.keys().min().unwrap();
        let mut cur = start;
        for _ in 0..next.len() {
            match next.get(&cur) {
                Some(&w) => cur = w,
                None => return false,
            }
        }
        cur == start && next.len() == self.neighbors[v].len()
    }

    /// The cyclic order of neighbors of `v` (following face orientation).
    pub fn link(&self, v: usize) -> Vec<usize> {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for f in &self.faces {
            if let Some(k) = f.iter().position(|&x| x == v) {
                next.insert(f[(k + 1) % 3], f[(k + 2) % 3]);
            }
        }
        let Some(&start) = self.neighbors[v].first() else { return Vec::new() };
        let mut out = vec![start];
        let mut cur = start;
        while let Some(&w) = next.get(&cur) {
            if w == start || out.len() > next.len() {
                break;
            }
            out.push(w);
            cur = w;
        }
        out
    }

    /// Every 3-cycle of the graph is a face.
    pub fn is_reduced(&self) -> bool {
        let face_set: HashSet<[usize; 3]> = self
            .faces
            .iter()
            .map(|f| {
                let mut k = *f;
                k.sort_unstable();
                k
            })
            .collect();
        for &(u, v) in &self.edges {
            let (nu, nv) = (&self.neighbors[u], &self.neighbors[v]);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = nu[i];
                        if w > v && !face_set.contains(&[u, v, w]) {
                            return false;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        true
    }

    /// Each face split into six around its barycenter. New vertices: edge
    /// midpoints get ids `|V| + edge index`, face centers
    /// `|V| + |E| + face index`.
    pub fn barycentric_subdivision(&self) -> Triangulation {
        let n = self.n;
        let e = self.edges.len();
        let edge_id: HashMap<(usize, usize), usize> =
            self.edges.iter().enumerate().map(|(i, &ed)| (ed, n + i)).collect();
        let mut faces = Vec::with_capacity(6 * self.faces.len());
        for (i, f) in self.faces.iter().enumerate() {
            let c = n + e + i;
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let m = edge_id[&sorted_edge(a, b)];
                faces.push([a, m, c]);
                faces.push([m, b, c]);
            }
        }
        Triangulation::from_faces(n + e + self.faces.len(), faces)
    }

    pub(crate) fn face_key(f: &[usize; 3]) -> [usize; 3] {
        let mut k = *f;
        k.sort_unstable();
        k
    }

    /// All graph automorphisms preserving the face set, each given as the
    /// image array of the vertices. Found by propagating the image of one
    /// oriented face across edges.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        if self.faces.is_empty() {
            return Vec::new();
        }
        let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                edge_faces.entry(sorted_edge(f[k], f[(k + 1) % 3])).or_default().push(i);
            }
        }
        let third = |face: usize, u: usize, v: usize| -> usize {
            *self.faces[face].iter().find(|&&x| x != u && x != v).unwrap()
        };
        let other_face = |face: usize, u: usize, v: usize| -> Option<usize> {
            edge_faces.get(&sorted_edge(u, v))?.iter().copied().find(|&g| g != face)
        };
        let face_set: HashSet<[usize; 3]> = self.faces.iter().map(Self::face_key).collect();
        let src = self.faces[0];
        let mut out = Vec::new();
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        for (ti, t) in self.faces.iter().enumerate() {
            for rot in 0..3 {
                for flip in [false, true] {
                    let mut img = [t[rot], t[(rot + 1) % 3], t[(rot + 2) % 3]];
                    if flip {
                        img.swap(1, 2);
                    }
                    let mut phi = vec![usize::MAX; self.n];
                    let mut face_img = vec![usize::MAX; self.faces.len()];
                    for k in 0..3 {
                        phi[src[k]] = img[k];
                    }
                    face_img[0] = ti;
                    let mut queue = vec![0usize];
                    let mut ok = true;
                    while let Some(fi) = queue.pop() {
                        let f = self.faces[fi];
                        for k in 0..3 {
                            let (u, v) = (f[k], f[(k + 1) % 3]);
                            let Some(g) = other_face(fi, u, v) else { ok = false; break };
                            let w = third(g, u, v);
                            let Some(gi) = other_face(face_img[fi], phi[u], phi[v]) else { ok = false; break };
                            let wi = third(gi, phi[u], phi[v]);
                            if phi[w] == usize::MAX {
                                phi[w] = wi;
                            } else if phi[w] != wi {
                                ok = false;
                                break;
                            }
                            if face_img[g] == usize::MAX {
                                face_img[g] = gi;
                                queue.push(g);
                            }
                        }
                        if !ok {
                            break;
                        }
                    }
                    if !ok || phi.iter().any(|&x| x == usize::MAX) {
                        continue;
                    }
                    let mut hit = vec![false; self.n];
                    if phi.iter().any(|&x| std::mem::replace(&mut hit[x], true)) {
                        continue;
                    }
                    if !self.faces.iter().all(|f| face_set.contains(&Self::face_key(&[phi[f[0]], phi[f[1]], phi[f[2]]]))) {
                        continue;
                    }
                    if found.insert(phi.clone()) {
                        out.push(phi);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Does `perm` keep the cyclic orientation of faces?
    pub fn preserves_orientation(&self, perm: &[usize]) -> bool {
        let directed = self.directed_edge_faces();
        let f = self.faces[0];
        let (p0, p1, p2) = (perm[f[0]], perm[f[1]], perm[f[2]]);
        match (directed.get(&(p0, p1)), directed.get(&(p1, p2))) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Builds the triangulation of the boundary of a convex polytope with
/// vertices in general position (triangular facets only).
fn from_convex_points(points: &[[f64; 3]]) -> Triangulation {
    let n = points.len();
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(sub(points[j], points[i]), sub(points[k], points[i]));
                let sides: Vec<f64> = (0..n)
                    .filter(|&m| m != i && m != j && m != k)
                    .map(|m| dot(nrm, sub(points[m], points[i])))
                    .collect();
                if sides.iter().all(|&s| s < -1e-9) {
                    faces.push([i, j, k]);
                } else if sides.iter().all(|&s| s > 1e-9) {
                    faces.push([i, k, j]);
                }
            }
        }
    }
    Triangulation::from_faces(n, faces)
}

/// `K₄` with faces oriented outward.
pub fn tetrahedron() -> Triangulation {
    Triangulation::from_faces(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]])
}

/// Vertices `±x, ±y, ±z` as `0..6` in that order.
pub fn octahedron() -> Triangulation {
    from_convex_points(&[
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ])
}

pub fn icosahedron() -> Triangulation {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for &s1 in &[1.0, -1.0] {
        for &s2 in &[1.0, -1.0] {
            pts.push([0.0, s1, s2 * p]);
            pts.push([s1, s2 * p, 0.0]);
            pts.push([s2 * p, 0.0, s1]);
        }
    }
    from_convex_points(&pts)
}

/// Two tetrahedra glued along the face `{0, 1, 2}`, which survives only as
/// a separating 3-cycle.
pub fn double_tetrahedron() -> Triangulation {
    Triangulation::from_faces(
        5,
        vec![[0, 1, 3], [1, 2, 3], [2, 0, 3], [1, 0, 4], [2, 1, 4], [0, 2, 4]],
    )
}

/// Looks up a built-in triangulation by name.
pub fn builtin(name: &str) -> Option<Triangulation> {
    match name {
        "tetrahedron" => Some(tetrahedron()),
        "octahedron" => Some(octahedron()),
        "icosahedron" => Some(icosahedron()),
        "double-tetrahedron" | "double_tetrahedron" => Some(double_tetrahedron()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(t: &Triangulation) -> (usize, usize, usize) {
        (t.vertex_count(), t.edges().len(), t.faces().len())
    }

    #[test]
    fn builders_are_valid() {
        for (t, c) in [
            (tetrahedron(), (4, 6, 4)),
            (octahedron(), (6, 12, 8)),
            (icosahedron(), (12, 30, 20)),
            (double_tetrahedron(), (5, 9, 6)),
        ] {
            assert!(t.validate().is_valid(), "{}", t.validate());
            assert_eq!(counts(&t), c);
        }
    }

    #[test]
    fn missing_edge_is_reported() {
        let t = Triangulation::from_faces(4, vec![[0, 2, 3], [1, 3, 2]]);
        let r = t.validate();
        assert!(!r.is_valid());
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NotMaximal { .. })));
        assert!(r.to_string().contains("not maximal: |E| ≠ 3|V|−6"));
    }

    #[test]
    fn reversed_face_is_reported() {
        let mut faces = tetrahedron().faces().to_vec();
        faces[0] = [0, 2, 1];
        let r = Triangulation::from_faces(4, faces).validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::InconsistentOrientation { .. })));
    }

    #[test]
    fn reducedness() {
        assert!(tetrahedron().is_reduced());
        assert!(octahedron().is_reduced());
        assert!(icosahedron().is_reduced());
        assert!(!double_tetrahedron().is_reduced());
    }

    #[test]
    fn subdivision_counts() {
        let s = tetrahedron().barycentric_subdivision();
        assert_eq!(counts(&s), (14, 36, 24));
        assert!(s.validate().is_valid());
        assert!(s.is_reduced());
        let s2 = s.barycentric_subdivision();
        assert_eq!(s2.vertex_count(), 74);
        assert!(s2.validate().is_valid());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(tetrahedron().automorphisms().len(), 24);
        assert_eq!(octahedron().automorphisms().len(), 48);
        assert_eq!(icosahedron().automorphisms().len(), 120);
        assert_eq!(double_tetrahedron().automorphisms().len(), 12);
        let t = tetrahedron();
        let rot = t.automorphisms().iter().filter(|p| t.preserves_orientation(p)).count();
        assert_eq!(rot, 12);
    }

    #[test]
    fn json_round_trip() {
        let t = octahedron();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"vertices\":6,\"faces\":"));
        let back: Triangulation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Triangulation>("{\"vertices\":3,\"faces\":[[0,1,5]]}").is_err());
    }

    #[test]
    fn link_is_cyclic_neighbor_order() {
        let t = octahedron();
        let l = t.link(4);
        assert_eq!(l.len(), 4);
        for k in 0..4 {
            assert!(t.is_edge(l[k], l[(k + 1) % 4]));
        }
    }
}
