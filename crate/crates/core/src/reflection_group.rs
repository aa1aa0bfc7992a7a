//! The reflection group generated by the dual circles of a packing: word
//! enumeration, disk orbits, the Nielsen map and limit-set rendering.
//!
//! `Undecided` only means no escape was seen within the iteration budget;
//! it is evidence for, not proof of, membership in the limit set.

use crate::geometry::{Complex, Disk, GenCircle, MobiusMap, SpherePoint};
use crate::packing::CirclePacking;
use crate::raster::{self, RasterImage, Region};
use std::collections::HashMap;

/// Reduced word in the face reflections; `[f₀, f₁, …]` acts as
/// `R_{f₀} ∘ R_{f₁} ∘ …`.
pub type Word = Vec<usize>;

/// Chordal radius around a tangency point treated as singular.
pub const SINGULAR_TOL: f64 = 1e-9;
/// Cap-key resolution for deduplicating disks and group elements.
pub const DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("point {0} is a tangency point of dual circles")]
    SingularPoint(SpherePoint),
}

#[derive(Debug, Clone)]
pub struct OrbitDisk {
    pub circle: GenCircle,
    pub disk: Disk,
    pub generation: usize,
    /// The packing vertex whose disk this is an image of.
    pub vertex: usize,
    pub witness: Word,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Mapped(SpherePoint, usize),
    InTile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Reached the fundamental tile after `step` maps, inside the closed
    /// disk of packing vertex `component`.
    Escaped { step: usize, component: usize },
    Undecided { maxiter: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub outcome: Outcome,
    /// Faces whose reflections were applied, in order.
    pub code: Vec<usize>,
}

/// All reduced words of length `≤ maxlen` over `faces` letters, by length
/// and then lexicographically.
pub fn enumerate_words(faces: usize, maxlen: usize) -> impl Iterator<Item = Word> {
    let mut layers: Vec<Vec<Word>> = vec![vec![vec![]]];
    for _ in 0..maxlen {
        let prev = layers.last().unwrap();
        let next: Vec<Word> = prev
            .iter()
            .flat_map(|w| {
                (0..faces).filter(move |&f| w.last() != Some(&f)).map(move |f| {
                    let mut v = w.clone();
                    v.push(f);
                    v
                })
            })
            .collect();
        layers.push(next);
    }
    layers.into_iter().flatten()
}

/// Quantized keys for approximate hashing; near-equal values can land in
/// adjacent cells, so lookups scan the neighboring cells too.
struct SpatialHash<T> {
    cell: f64,
    map: HashMap<Vec<i64>, Vec<(Vec<f64>, T)>>,
}

impl<T> SpatialHash<T> {
    fn new(cell: f64) -> Self {
        SpatialHash { cell, map: HashMap::new() }
    }

    fn key(&self, v: &[f64]) -> Vec<i64> {
        v.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    fn find(&self, v: &[f64], tol: f64) -> Option<&T> {
        let base = self.key(v);
        let n = base.len();
        for code in 0..3usize.pow(n as u32) {
            let mut k = base.clone();
            let mut c = code;
            for x in k.iter_mut() {
                *x += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(bucket) = self.map.get(&k) {
                for (w, t) in bucket {
                    if w.iter().zip(v).all(|(a, b)| (a - b).abs() < tol) {
                        return Some(t);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, v: Vec<f64>, t: T) {
        self.map.entry(self.key(&v)).or_default().push((v, t));
    }
}

fn cap_key(d: &Disk) -> Vec<f64> {
    let (c, h) = d.cap();
    vec![c[0], c[1], c[2], h]
}

/// A packing together with its dual reflections.
#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    pub packing: CirclePacking,
    pub reflections: Vec<MobiusMap>,
    pub singular: Vec<SpherePoint>,
}

impl ReflectionGroup {
    pub fn new(packing: &CirclePacking) -> Self {
        let reflections = packing.dual_disks.iter().map(|d| d.reflection()).collect();
        let singular = packing.tangencies.values().copied().collect();
        ReflectionGroup { packing: packing.clone(), reflections, singular }
    }

    pub fn faces(&self) -> usize {
        self.reflections.len()
    }

    pub fn word_map(&self, w: &[usize]) -> MobiusMap {
        w.iter().fold(MobiusMap::identity(), |m, &f| m.compose(&self.reflections[f]))
    }

    pub fn apply_word(&self, w: &[usize], z: &SpherePoint) -> SpherePoint {
        w.iter().rev().fold(*z, |p, &f| self.reflections[f].apply(&p))
    }

    /// Distinct group elements among words of length `≤ maxlen`, compared by
    /// the images of three probe points; the shortest word is kept.
    pub fn distinct_elements(&self, maxlen: usize) -> Vec<(Word, MobiusMap)> {
        let probes = [SpherePoint::new(0.31, 0.17), SpherePoint::new(-0.43, 0.59), SpherePoint::new(0.12, -0.77)];
        let mut seen = SpatialHash::new(1e-7);
        let mut out = Vec::new();
        for w in enumerate_words(self.faces(), maxlen) {
            let m = self.word_map(&w);
            let key: Vec<f64> = probes.iter().flat_map(|p| m.apply(p).to_sphere()).chain([m.anti as u8 as f64]).collect();
            if seen.find(&key, DEDUP_TOL).is_none() {
                seen.insert(key, ());
                out.push((w, m));
            }
        }
        out
    }

    /// Images of the packing disks under words of length `≤ maxgen`, each
    /// tagged with its least generation.
    pub fn orbit_disks(&self, maxgen: usize) -> Vec<OrbitDisk> {
        let mut seen = SpatialHash::new(1e-7);
        let mut out: Vec<OrbitDisk> = Vec::new();
        for (v, d) in self.packing.disks.iter().enumerate() {
            seen.insert(cap_key(d), ());
            out.push(OrbitDisk { circle: d.boundary(), disk: *d, generation: 0, vertex: v, witness: vec![] });
        }
        let mut frontier: Vec<usize> = (0..out.len()).collect();
        for g in 1..=maxgen {
            let mut next = Vec::new();
            for &i in &frontier {
                for f in 0..self.faces() {
                    if out[i].witness.first() == Some(&f) {
                        continue;
                    }
                    let d = out[i].disk.apply(&self.reflections[f]);
                    let key = cap_key(&d);
                    if seen.find(&key, DEDUP_TOL).is_some() {
                        continue;
                    }
                    seen.insert(key, ());
                    let mut witness = vec![f];
                    witness.extend_from_slice(&out[i].witness);
                    next.push(out.len());
                    out.push(OrbitDisk { circle: d.boundary(), disk: d, generation: g, vertex: out[i].vertex, witness });
                }
            }
            frontier = next;
        }
        out
    }

    fn check_singular(&self, z: &SpherePoint) -> Result<(), GroupError> {
        if self.singular.iter().any(|s| s.chordal(z) < SINGULAR_TOL) {
            return Err(GroupError::SingularPoint(*z));
        }
        Ok(())
    }

    /// One step of the Nielsen map: reflect in the lowest-indexed closed
    /// dual disk containing `z`.
    pub fn nielsen_step(&self, z: &SpherePoint) -> Result<Step, GroupError> {
        self.check_singular(z)?;
        for (f, d) in self.packing.dual_disks.iter().enumerate() {
            if d.contains_closed(z, 1e-12) {
                return Ok(Step::Mapped(self.reflections[f].apply(z), f));
            }
        }
        Ok(Step::InTile)
    }

    /// Whether `z` lies in the fundamental tile: outside every open dual disk.
    pub fn in_tile(&self, z: &SpherePoint) -> bool {
        self.packing.dual_disks.iter().all(|d| !d.contains(z, 1e-12))
    }

    /// Packing vertex whose disk most deeply contains `z`.
    pub fn component(&self, z: &SpherePoint) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (v, d) in self.packing.disks.iter().enumerate() {
            let s = d.side(z);
            if s < best.0 {
                best = (s, v);
            }
        }
        best.1
    }

    /// Iterates the Nielsen map until the orbit lands in the tile. Points
    /// on a dual circle count as already in the tile.
    pub fn classify(&self, z: &SpherePoint, maxiter: usize) -> Result<Classification, GroupError> {
        let mut p = *z;
        let mut code = Vec::new();
        for step in 0..=maxiter {
            self.check_singular(&p)?;
            if self.in_tile(&p) {
                return Ok(Classification { outcome: Outcome::Escaped { step, component: self.component(&p) }, code });
            }
            if step == maxiter {
                break;
            }
            match self.nielsen_step(&p)? {
                Step::Mapped(q, f) => {
                    code.push(f);
                    p = q;
                }
                Step::InTile => unreachable!("outside the tile means inside some dual disk"),
            }
        }
        Ok(Classification { outcome: Outcome::Undecided { maxiter }, code })
    }

    /// Like `classify`, but singular points are reported as `Undecided`.
    pub fn classify_or_undecided(&self, z: &SpherePoint, maxiter: usize) -> Classification {
        self.classify(z, maxiter)
            .unwrap_or(Classification { outcome: Outcome::Undecided { maxiter }, code: vec![] })
    }

    /// Forward orbit of `z` under the Nielsen map, stopping in the tile.
    pub fn orbit(&self, z: &SpherePoint, maxiter: usize) -> Result<Vec<SpherePoint>, GroupError> {
        let mut out = vec![*z];
        let mut p = *z;
        for _ in 0..maxiter {
            match self.nielsen_step(&p)? {
                Step::Mapped(q, _) => {
                    p = q;
                    out.push(p);
                }
                Step::InTile => break,
            }
        }
        Ok(out)
    }

    /// Whether the Nielsen orbits of `z` and `w(z)` meet within `maxiter`.
    pub fn orbit_equivalence_check(&self, z: &SpherePoint, w: &[usize], maxiter: usize) -> Result<bool, GroupError> {
        let a = self.orbit(z, maxiter)?;
        let b = self.orbit(&self.apply_word(w, z), maxiter)?;
        Ok(a.iter().any(|p| b.iter().any(|q| p.chordal(q) < 1e-8)))
    }

    /// Largest chordal diameter of the generation-`n` interstice triangles:
    /// images `h(Δ_f)` of the packing's tangency triangles under reduced
    /// words of length `n` whose innermost letter is not `f`.
    pub fn interstice_diameter(&self, n: usize) -> f64 {
        let tri: Vec<[SpherePoint; 3]> = (0..self.faces()).map(|f| self.packing.face_tangencies(f)).collect();
        let mut best: f64 = 0.0;
        for w in enumerate_words(self.faces(), n).filter(|w| w.len() == n) {
            let m = self.word_map(&w);
            for (f, t) in tri.iter().enumerate() {
                if w.last() == Some(&f) {
                    continue;
                }
                let p = t.map(|x| m.apply(&x));
                let d = p[0].chordal(&p[1]).max(p[1].chordal(&p[2])).max(p[2].chordal(&p[0]));
                best = best.max(d);
            }
        }
        best
    }

    /// Limit-set render: undecided pixels black, tile arrivals colored by
    /// the packing disk they land in and shaded by escape time.
    pub fn render_limit_set(&self, region: &Region, width: usize, height: usize, maxiter: usize) -> RasterImage {
        raster::render(region, width, height, |z| match self.classify_or_undecided(&SpherePoint::Finite(z), maxiter).outcome {
            Outcome::Undecided { .. } => raster::LIMIT_COLOR,
            Outcome::Escaped { step, component } => raster::shade(component, step),
        })
    }
}

pub fn point(re: f64, im: f64) -> SpherePoint {
    SpherePoint::Finite(Complex::new(re, im))
}
