//! The critically fixed cubic anti-rational map `g(z) = 3z̄²/(2z̄³ + 1)`:
//! evaluation, basin classification, its Julia fixed points and rendering.

use crate::geometry::{circle_through, Complex, Disk, SpherePoint};
use crate::poly;
use crate::raster::{self, RasterImage, Region};
use std::f64::consts::TAU;

/// Radius of the verified contraction balls around the critical points.
pub const CONTRACTION_EPS: f64 = 0.05;
/// Beyond this modulus, evaluate in the chart `w = 1/z`.
const SWAP_RADIUS: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AntiError {
    #[error("eps {0} exceeds the verified contraction radius {CONTRACTION_EPS}")]
    EpsTooLarge(f64),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// `z ↦ P(z̄)/Q(z̄)`, coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiRationalMap {
    pub numer: Vec<Complex>,
    pub denom: Vec<Complex>,
}

impl AntiRationalMap {
    pub fn new(numer: Vec<Complex>, denom: Vec<Complex>) -> Self {
        AntiRationalMap { numer: poly::trim(&numer), denom: poly::trim(&denom) }
    }

    /// The tetrahedral map `3z̄²/(2z̄³ + 1)`.
    pub fn tetrahedral() -> Self {
        Self::new(poly::real(&[0.0, 0.0, 3.0]), poly::real(&[1.0, 0.0, 0.0, 2.0]))
    }

    /// `z ↦ z̄ᵈ`.
    pub fn power(d: usize) -> Self {
        let mut numer = vec![Complex::new(0.0, 0.0); d + 1];
        numer[d] = Complex::new(1.0, 0.0);
        Self::new(numer, poly::real(&[1.0]))
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.numer).max(poly::degree(&self.denom))
    }

    fn ends(&self) -> (usize, usize) {
        (self.numer.len() - 1, self.denom.len() - 1)
    }

    /// Holomorphic part `P(z)/Q(z)` on the sphere.
    pub fn eval_holomorphic(&self, z: &SpherePoint) -> SpherePoint {
        let (dp, dq) = self.ends();
        match *z {
            SpherePoint::Infinity => match dp.cmp(&dq) {
                std::cmp::Ordering::Greater => SpherePoint::Infinity,
                std::cmp::Ordering::Less => SpherePoint::new(0.0, 0.0),
                std::cmp::Ordering::Equal => SpherePoint::Finite(self.numer[dp] / self.denom[dq]),
            },
            SpherePoint::Finite(w) if w.norm() > SWAP_RADIUS => {
                // P(w)/Q(w) = w^{dp−dq} · P̃(u)/Q̃(u) with u = 1/w and P̃ reversed.
                let u = 1.0 / w;
                let rp: Vec<Complex> = self.numer.iter().rev().copied().collect();
                let rq: Vec<Complex> = self.denom.iter().rev().copied().collect();
                let (a, b) = (poly::eval(&rp, u), poly::eval(&rq, u));
                let e = dp as i32 - dq as i32;
                let num = a * u.powi(-e.min(0));
                let den = b * u.powi(e.max(0));
                quotient(num, den)
            }
            SpherePoint::Finite(w) => quotient(poly::eval(&self.numer, w), poly::eval(&self.denom, w)),
        }
    }

    pub fn eval(&self, z: &SpherePoint) -> SpherePoint {
        self.eval_holomorphic(&z.conj())
    }

    pub fn eval_c(&self, z: Complex) -> SpherePoint {
        self.eval(&SpherePoint::Finite(z))
    }
}

fn quotient(num: Complex, den: Complex) -> SpherePoint {
    if den.norm() == 0.0 {
        if num.norm() == 0.0 {
            SpherePoint::new(f64::NAN, f64::NAN)
        } else {
            SpherePoint::Infinity
        }
    } else {
        SpherePoint::Finite(num / den)
    }
}

pub fn omega() -> Complex {
    Complex::from_polar(1.0, TAU / 3.0)
}

/// The fixed critical points `0, 1, ω, ω²`, indexed in that order.
pub fn critical_points() -> [Complex; 4] {
    let w = omega();
    [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), w, w * w]
}

/// `(√3 − 1)/2` and `−(√3 + 1)/2`: the real fixed points off the critical set.
pub fn julia_radii() -> (f64, f64) {
    let s3 = 3f64.sqrt();
    ((s3 - 1.0) / 2.0, -(s3 + 1.0) / 2.0)
}

/// The six repelling fixed points `r·ωᵏ`, `s·ωᵏ`.
pub fn julia_fixed_points() -> Vec<Complex> {
    let (r, s) = julia_radii();
    let w = omega();
    let mut out = Vec::new();
    for base in [r, s] {
        let mut rot = Complex::new(1.0, 0.0);
        for _ in 0..3 {
            out.push(base * rot);
            rot *= w;
        }
    }
    out
}

/// Local degree of `g` at a fixed point, from `|g(c+δ) − c|` at two scales.
fn local_degree(g: &AntiRationalMap, c: Complex) -> Result<(u32, f64), AntiError> {
    let probe = |d: f64| {
        let dir = Complex::from_polar(1.0, 0.3);
        match g.eval_c(c + dir * d) {
            SpherePoint::Finite(w) => (w - c).norm(),
            SpherePoint::Infinity => f64::INFINITY,
        }
    };
    let (a, b) = (probe(1e-3), probe(1e-4));
    let k = (a / b).log10().round();
    if !(1.0..=8.0).contains(&k) {
        return Err(AntiError::VerificationFailed(format!("no power law at {c}")));
    }
    let (ca, cb) = (a / 1e-3f64.powf(k), b / 1e-4f64.powf(k));
    if (ca - cb).abs() > 0.01 * ca.max(cb) {
        return Err(AntiError::VerificationFailed(format!("inconsistent scaling constant at {c}: {ca} vs {cb}")));
    }
    Ok((k as u32, ca))
}

/// Fixed critical points with their local degrees, each verified.
pub fn fixed_critical_data(g: &AntiRationalMap) -> Result<Vec<(Complex, u32)>, AntiError> {
    let mut out = Vec::new();
    for c in critical_points() {
        match g.eval_c(c) {
            SpherePoint::Finite(w) if (w - c).norm() <= 1e-15 => {}
            other => return Err(AntiError::VerificationFailed(format!("{c} maps to {other}"))),
        }
        out.push((c, local_degree(g, c)?.0));
    }
    Ok(out)
}

/// Checks `|g(c+δ) − c| < |δ|/2` for `|δ| ≤ eps` on a polar grid at each
/// critical point; returns the worst ratio seen.
pub fn verify_contraction(g: &AntiRationalMap, eps: f64) -> Result<f64, AntiError> {
    let mut worst: f64 = 0.0;
    for c in critical_points() {
        for i in 1..=40 {
            let r = eps * i as f64 / 40.0;
            for j in 0..64 {
                let d = Complex::from_polar(r, TAU * j as f64 / 64.0);
                let w = g.eval_c(c + d).finite().unwrap_or(Complex::new(f64::INFINITY, 0.0));
                worst = worst.max((w - c).norm() / r);
            }
        }
    }
    if worst < 0.5 {
        Ok(worst)
    } else {
        Err(AntiError::VerificationFailed(format!("contraction ratio {worst} ≥ 1/2 at eps {eps}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinOutcome {
    /// Entered the `eps`-ball of critical point `target` after `time` steps.
    Attracted { target: usize, time: usize },
    Undecided,
}

/// Iterates `g` until the orbit enters a contraction ball. An orbit that
/// hits a non-critical fixed point (to 1e-12) is `Undecided` at once,
/// since rounding would otherwise push it off a repelling point.
pub fn classify_basin(g: &AntiRationalMap, z: &SpherePoint, maxiter: usize, eps: f64) -> Result<BasinOutcome, AntiError> {
    if eps > CONTRACTION_EPS {
        return Err(AntiError::EpsTooLarge(eps));
    }
    let crit = critical_points();
    let mut p = *z;
    for time in 0..=maxiter {
        let w = match p {
            SpherePoint::Finite(w) if w.is_finite() => w,
            SpherePoint::Finite(_) => return Ok(BasinOutcome::Undecided),
            SpherePoint::Infinity => {
                p = g.eval(&p);
                continue;
            }
        };
        if let Some(k) = crit.iter().position(|c| (w - c).norm() < eps) {
            return Ok(BasinOutcome::Attracted { target: k, time });
        }
        if time == maxiter {
            break;
        }
        let next = g.eval(&p);
        if next.chordal(&p) < 1e-12 {
            return Ok(BasinOutcome::Undecided);
        }
        p = next;
    }
    Ok(BasinOutcome::Undecided)
}

/// Targets of the basins met on a circle of the given radius around `z`,
/// including non-invariant preimage components.
pub fn basins_near(g: &AntiRationalMap, z: Complex, radius: f64, samples: usize, maxiter: usize) -> Vec<usize> {
    let mut seen: Vec<usize> = circle_samples(z, radius, samples)
        .filter_map(|p| match classify_basin(g, &SpherePoint::Finite(p), maxiter, CONTRACTION_EPS) {
            Ok(BasinOutcome::Attracted { target, .. }) => Some(target),
            _ => None,
        })
        .collect();
    seen.sort();
    seen.dedup();
    seen
}

fn circle_samples(z: Complex, radius: f64, samples: usize) -> impl Iterator<Item = Complex> {
    (0..samples).map(move |j| z + Complex::from_polar(radius, TAU * (j as f64 + 0.5) / samples as f64))
}

/// Whether the segment from `p` to critical point `target` stays in that
/// point's basin: a sufficient test for lying in the invariant basin.
fn joined_to_center(g: &AntiRationalMap, p: Complex, target: usize, maxiter: usize) -> bool {
    let c = critical_points()[target];
    let steps = 4000;
    (0..=steps).all(|k| {
        let q = p + (c - p) * (k as f64 / steps as f64);
        matches!(classify_basin(g, &SpherePoint::Finite(q), maxiter, CONTRACTION_EPS),
            Ok(BasinOutcome::Attracted { target: t, .. }) if t == target)
    })
}

/// Invariant basins touching `z`: samples on a small circle whose segment
/// to their attracting point stays in the basin.
pub fn touching_basins(g: &AntiRationalMap, z: Complex, radius: f64, samples: usize, maxiter: usize) -> Vec<usize> {
    let mut seen: Vec<usize> = circle_samples(z, radius, samples)
        .filter_map(|p| match classify_basin(g, &SpherePoint::Finite(p), maxiter, CONTRACTION_EPS) {
            Ok(BasinOutcome::Attracted { target, .. }) if joined_to_center(g, p, target, maxiter) => Some(target),
            _ => None,
        })
        .collect();
    seen.sort();
    seen.dedup();
    seen
}

/// Each Julia fixed point with the invariant basins it touches.
pub fn touching_table(g: &AntiRationalMap) -> Vec<(Complex, Vec<usize>)> {
    julia_fixed_points().into_iter().map(|z| (z, touching_basins(g, z, 1e-3, 64, 500))).collect()
}

/// For each triple of mutually touching invariant basins (a face), the
/// round disk through its three touching points, oriented away from the
/// fourth critical point. Faces are listed by their omitted basin.
pub fn julia_dual_disks(table: &[(Complex, Vec<usize>)]) -> Result<Vec<Disk>, AntiError> {
    let crit = critical_points();
    let mut out = Vec::new();
    for opp in 0..4 {
        let pts: Vec<SpherePoint> = table
            .iter()
            .filter(|(_, b)| b.len() == 2 && !b.contains(&opp))
            .map(|(z, _)| SpherePoint::Finite(*z))
            .collect();
        if pts.len() != 3 {
            return Err(AntiError::VerificationFailed(format!("face opposite basin {opp} has {} touching points", pts.len())));
        }
        let circle = circle_through(&pts[0], &pts[1], &pts[2]).map_err(|e| AntiError::VerificationFailed(e.to_string()))?;
        let d = circle.to_disk();
        out.push(if d.contains(&SpherePoint::Finite(crit[opp]), 0.0) { d.complement() } else { d });
    }
    Ok(out)
}

/// Points of the Julia set: backward orbit of `(√3 − 1)/2` up to `depth`.
pub fn julia_samples(depth: usize) -> Vec<Complex> {
    let mut layer = vec![julia_fixed_points()[0]];
    let mut all = Vec::new();
    for _ in 0..depth {
        layer = layer.iter().flat_map(|&w| preimages(w)).collect();
        all.extend_from_slice(&layer);
    }
    all
}

/// Transition counts between face disks along forward orbits of Julia
/// samples; the last row and column count points in no disk. Orbits stop
/// on reaching a touching point.
pub fn transition_counts(g: &AntiRationalMap, disks: &[Disk], depth: usize, steps: usize) -> [[usize; 5]; 5] {
    let fixed = julia_fixed_points();
    let code = |q: Complex| disks.iter().position(|d| d.contains_closed(&SpherePoint::Finite(q), 0.0)).unwrap_or(4);
    let mut counts = [[0usize; 5]; 5];
    for p in julia_samples(depth) {
        let mut z = p;
        for _ in 0..steps {
            let Some(w) = g.eval_c(z).finite() else { break };
            if fixed.iter().any(|f| (f - w).norm() < 1e-6 || (f - z).norm() < 1e-6) {
                break;
            }
            counts[code(z)][code(w)] += 1;
            z = w;
        }
    }
    counts
}

/// Numerator of `f(f(z)) − z` where `f = P/Q` is the holomorphic part; its
/// roots are the fixed points of the second iterate of `g`.
pub fn second_iterate_fixed_polynomial(g: &AntiRationalMap) -> Vec<Complex> {
    // f∘f = P(f)/Q(f); multiply through by Q(z)^d with d = deg g.
    let d = g.degree();
    let homog = |c: &[Complex]| -> Vec<Complex> {
        let mut acc = vec![Complex::new(0.0, 0.0)];
        for (k, &ck) in c.iter().enumerate() {
            let term = poly::mul(&poly::pow(&g.numer, k), &poly::pow(&g.denom, d - k));
            acc = poly::add(&acc, &poly::scale(&term, ck));
        }
        acc
    };
    let (n2, d2) = (homog(&g.numer), homog(&g.denom));
    let z = poly::real(&[0.0, 1.0]);
    poly::trim(&poly::add(&n2, &poly::scale(&poly::mul(&z, &d2), Complex::new(-1.0, 0.0))))
}

/// Fixed points of `g∘g`, numerically, with multiplicity.
pub fn second_iterate_fixed_points(g: &AntiRationalMap) -> Vec<Complex> {
    poly::roots(&second_iterate_fixed_polynomial(g))
}

/// `|(g∘g)'(z)|` by a central difference of the holomorphic second iterate.
pub fn second_iterate_multiplier(g: &AntiRationalMap, z: Complex) -> f64 {
    let gg = |w: Complex| g.eval(&g.eval_c(w)).finite().expect("finite near the fixed points");
    let h = 1e-6;
    ((gg(z + h) - gg(z - h)) / (2.0 * h)).norm()
}

/// The three preimages of `w` under `g`: `u = z̄` solves `2wu³ − 3u² + w = 0`.
pub fn preimages(w: Complex) -> Vec<Complex> {
    let p = vec![w, Complex::new(0.0, 0.0), Complex::new(-3.0, 0.0), 2.0 * w];
    poly::roots(&p).into_iter().map(|u| u.conj()).collect()
}

/// Julia render: basins colored by target and shaded by time, undecided
/// pixels black.
pub fn render_julia(g: &AntiRationalMap, region: &Region, width: usize, height: usize, maxiter: usize, eps: f64) -> Result<RasterImage, AntiError> {
    if eps > CONTRACTION_EPS {
        return Err(AntiError::EpsTooLarge(eps));
    }
    Ok(raster::render(region, width, height, |z| match classify_basin(g, &SpherePoint::Finite(z), maxiter, eps) {
        Ok(BasinOutcome::Attracted { target, time }) => raster::shade(target, time),
        _ => raster::LIMIT_COLOR,
    }))
}
