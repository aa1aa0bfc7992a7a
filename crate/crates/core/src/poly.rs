//! Dense complex polynomials, lowest degree first, and simultaneous root
//! finding by the Aberth–Ehrlich iteration.

use crate::geometry::Complex;

pub fn eval(p: &[Complex], z: Complex) -> Complex {
    p.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn derivative(p: &[Complex]) -> Vec<Complex> {
    p.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

pub fn mul(p: &[Complex], q: &[Complex]) -> Vec<Complex> {
    if p.is_empty() || q.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub fn add(p: &[Complex], q: &[Complex]) -> Vec<Complex> {
    let mut out = vec![Complex::new(0.0, 0.0); p.len().max(q.len())];
    for (i, &a) in p.iter().enumerate() {
        out[i] += a;
    }
    for (i, &b) in q.iter().enumerate() {
        out[i] += b;
    }
    out
}

pub fn scale(p: &[Complex], s: Complex) -> Vec<Complex> {
    p.iter().map(|&c| c * s).collect()
}

pub fn pow(p: &[Complex], n: usize) -> Vec<Complex> {
    (0..n).fold(vec![Complex::new(1.0, 0.0)], |acc, _| mul(&acc, p))
}

/// Drops (numerically) zero leading coefficients.
pub fn trim(p: &[Complex]) -> Vec<Complex> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut v = p.to_vec();
    while v.len() > 1 && v.last().unwrap().norm() <= 1e-14 * scale {
        v.pop();
    }
    v
}

pub fn degree(p: &[Complex]) -> usize {
    trim(p).len().saturating_sub(1)
}

/// All roots with multiplicity, then one Newton polish each.
pub fn roots(p: &[Complex]) -> Vec<Complex> {
    let p = trim(p);
    let n = p.len() - 1;
    if n == 0 {
        return vec![];
    }
    let dp = derivative(&p);
    let lead = p[n];
    // Start on a circle of radius from the Cauchy-type bound, rotated off
    // the real axis to avoid symmetric stalls.
    let bound = 1.0 + p[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let r = bound.min(1e6) * 0.5;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| Complex::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let pv = eval(&p, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / eval(&dp, z[i]);
            let s: Complex = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        let d = eval(&dp, *zi);
        if d.norm() > 1e-300 {
            let step = eval(&p, *zi) / d;
            let cand = *zi - step;
            if eval(&p, cand).norm() < eval(&p, *zi).norm() {
                *zi = cand;
            }
        }
    }
    z
}

/// Roots of the monic cubic `z³ + a z² + b z + c` by Cardano's formula,
/// each polished by a guarded Newton step.
pub fn cubic_roots(a: Complex, b: Complex, c: Complex) -> [Complex; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    // Take the larger of the two cube-root arguments against cancellation.
    let (u1, u2) = (-q / 2.0 + disc, -q / 2.0 - disc);
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let mut out = [Complex::new(0.0, 0.0); 3];
    if u.norm() == 0.0 {
        out = [-shift; 3];
    } else {
        let cbrt = u.powf(1.0 / 3.0);
        for (k, r) in out.iter_mut().enumerate() {
            let ck = cbrt * Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            *r = ck - p / (3.0 * ck) - shift;
        }
    }
    let f = |z: Complex| ((z + a) * z + b) * z + c;
    let df = |z: Complex| (3.0 * z + 2.0 * a) * z + b;
    for r in out.iter_mut() {
        for _ in 0..3 {
            let d = df(*r);
            if d.norm() == 0.0 {
                break;
            }
            let cand = *r - f(*r) / d;
            if f(cand).norm() < f(*r).norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    out
}

pub fn real(coeffs: &[f64]) -> Vec<Complex> {
    coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect()
}
