//! Farey and Stern–Brocot arithmetic: Conway's box function on dyadics,
//! its inverse (Minkowski's question mark), Ford circles, interval ratio
//! statistics, scalewise distortion, and the circle homeomorphism
//! conjugating `z̄²` to the ideal-triangle reflection map.
//!
//! Farey levels keep numerators and denominators as `u32` pairs: the
//! denominators at level `n` are bounded by the Fibonacci number `F(n+2)`,
//! so every value is exact. `Fraction` (a big rational) is used at the API.

use crate::geometry::{Complex, MobiusMap, SpherePoint};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::TAU;

pub type Fraction = BigRational;

/// Largest Farey level that `farey_level` will build.
pub const MAX_LEVEL: u32 = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConjugacyError {
    #[error("Farey level {0} exceeds the supported maximum {MAX_LEVEL}")]
    LevelTooLarge(u32),
    #[error("value {0} is outside [0, 1]")]
    NotInImage(String),
    #[error("precision {0:e} not reachable within the integer budget")]
    PrecisionUnreachable(f64),
}

pub fn frac(p: i64, q: i64) -> Fraction {
    Fraction::new(BigInt::from(p), BigInt::from(q))
}

/// A point of the extended real line.
#[derive(Debug, Clone, PartialEq)]
pub enum Extended {
    Finite(Fraction),
    Infinity,
}

/// The dyadics `k/2ⁿ` and their images `F_n` under the box function.
#[derive(Debug, Clone)]
pub struct FareyLevel {
    pub level: u32,
    entries: Vec<(u32, u32)>,
}

impl FareyLevel {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Numerator and denominator of entry `k`.
    pub fn pq(&self, k: usize) -> (u64, u64) {
        let (p, q) = self.entries[k];
        (p as u64, q as u64)
    }

    pub fn fraction(&self, k: usize) -> Fraction {
        let (p, q) = self.pq(k);
        Fraction::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn fractions(&self) -> Vec<Fraction> {
        (0..self.len()).map(|k| self.fraction(k)).collect()
    }

    pub fn value(&self, k: usize) -> f64 {
        let (p, q) = self.entries[k];
        p as f64 / q as f64
    }

    /// The aligned dyadic `k/2ⁿ`.
    pub fn dyadic(&self, k: usize) -> Fraction {
        Fraction::new(BigInt::from(k), BigInt::one() << self.level)
    }

    /// Generation of entry `k`: the least level containing it.
    pub fn generation(&self, k: usize) -> u32 {
        if k == 0 || k + 1 == self.len() {
            0
        } else {
            self.level - k.trailing_zeros()
        }
    }
}

pub fn farey_level(n: u32) -> Result<FareyLevel, ConjugacyError> {
    if n > MAX_LEVEL {
        return Err(ConjugacyError::LevelTooLarge(n));
    }
    let mut cur: Vec<(u32, u32)> = vec![(0, 1), (1, 1)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * cur.len() - 1);
        for w in cur.windows(2) {
            next.push(w[0]);
            next.push((w[0].0 + w[1].0, w[0].1 + w[1].1));
        }
        next.push(*cur.last().unwrap());
        cur = next;
    }
    Ok(FareyLevel { level: n, entries: cur })
}

/// Box function at `k/2ⁿ` by Stern–Brocot descent.
pub fn box_dyadic(k: u64, n: u32) -> Fraction {
    assert!(n < 64 && k <= 1u64 << n, "dyadic out of range");
    let (p, q) = box_dyadic_pq(k, n);
    Fraction::new(BigInt::from(p), BigInt::from(q))
}

fn box_dyadic_pq(k: u64, n: u32) -> (u128, u128) {
    if k == 0 {
        return (0, 1);
    }
    if k == 1u64 << n {
        return (1, 1);
    }
    let (mut lo, mut hi) = ((0u128, 1u128), (1u128, 1u128));
    // Compare k/2ⁿ with the running dyadic midpoint num/2^depth.
    let mut a = 0u128;
    let mut depth = 0u32;
    loop {
        let mid = (lo.0 + hi.0, lo.1 + hi.1);
        depth += 1;
        let m = 2 * a + 1; // midpoint = m / 2^depth
        let lhs = (k as u128) << depth;
        let rhs = m << n;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Equal => return mid,
            std::cmp::Ordering::Less => {
                hi = mid;
                a *= 2;
            }
            std::cmp::Ordering::Greater => {
                lo = mid;
                a = m;
            }
        }
    }
}

/// Minkowski's question mark function at a rational in `[0, 1]`, via the
/// continued fraction: `?([0; a₁, a₂, …]) = 2 Σ (−1)^{k+1} 2^{−(a₁+…+a_k)}`.
pub fn questionmark(x: &Fraction) -> Result<Fraction, ConjugacyError> {
    if x.is_negative() || *x > Fraction::one() {
        return Err(ConjugacyError::NotInImage(x.to_string()));
    }
    if x.is_zero() || x.is_one() {
        return Ok(x.clone());
    }
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    let mut total = Fraction::zero();
    let mut exponent: u64 = 0;
    let mut sign = 1i32;
    // x = p/q < 1; first partial quotient is q div p.
    while !p.is_zero() {
        let (a, r) = q.div_rem(&p);
        exponent += a.to_u64().expect("partial quotient fits in u64");
        let term = Fraction::new(BigInt::from(2), BigInt::one() << exponent);
        total = if sign > 0 { total + term } else { total - term };
        sign = -sign;
        q = p;
        p = r;
    }
    Ok(total)
}

/// Box function at a real number, by nesting Stern–Brocot intervals along
/// the exact binary expansion of `x`. Dyadic inputs are exact.
pub fn box_real(x: f64, precision: f64) -> Result<f64, ConjugacyError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(ConjugacyError::NotInImage(x.to_string()));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let digits = std::iter::from_fn(move || {
        let mid = 0.5 * (a + b);
        if x == mid {
            return Some(Digit::Stop);
        }
        let d = if x < mid {
            b = mid;
            Digit::Zero
        } else {
            a = mid;
            Digit::One
        };
        Some(d)
    });
    box_digits(digits, precision)
}

enum Digit {
    Zero,
    One,
    Stop,
}

/// Box function on a binary digit stream `0.d₁d₂…`, read until the Farey
/// interval is shorter than `precision` or the stream ends.
pub fn box_real_digits(digits: impl IntoIterator<Item = bool>, precision: f64) -> Result<f64, ConjugacyError> {
    let stream = digits.into_iter().map(|d| if d { Digit::One } else { Digit::Zero });
    box_digits(stream, precision)
}

fn box_digits(digits: impl Iterator<Item = Digit>, precision: f64) -> Result<f64, ConjugacyError> {
    let (mut lo, mut hi) = ((0u128, 1u128), (1u128, 1u128));
    let value = |(p, q): (u128, u128)| p as f64 / q as f64;
    for d in digits {
        let mid = (lo.0 + hi.0, lo.1 + hi.1);
        match d {
            Digit::Stop => return Ok(value(mid)),
            Digit::Zero => {
                hi = mid;
            }
            Digit::One => {
                lo = mid;
            }
        }
        let qs = lo.1.checked_mul(hi.1).ok_or(ConjugacyError::PrecisionUnreachable(precision))?;
        if (qs as f64) * precision > 1.0 {
            return Ok(0.5 * (value(lo) + value(hi)));
        }
        if hi.1 > u64::MAX as u128 || lo.1 > u64::MAX as u128 {
            return Err(ConjugacyError::PrecisionUnreachable(precision));
        }
    }
    // A finite stream is the left endpoint of its dyadic interval.
    Ok(value(lo))
}

fn frac_part(x: Fraction) -> Fraction {
    let f = x.floor();
    x - f
}

/// Reflection map of the ideal triangle `0, 1, ∞` on the extended line.
pub fn theta(t: &Extended) -> Extended {
    match t {
        Extended::Infinity => Extended::Infinity,
        Extended::Finite(t) => {
            let one = Fraction::one();
            if *t <= Fraction::zero() {
                Extended::Finite(-t.clone())
            } else if *t <= one {
                let den = t * Fraction::from_integer(BigInt::from(2)) - &one;
                if den.is_zero() {
                    Extended::Infinity
                } else {
                    Extended::Finite(t / den)
                }
            } else {
                Extended::Finite(Fraction::from_integer(BigInt::from(2)) - t)
            }
        }
    }
}

/// The orientation-reversing double cover of `[0, 1)` built from `theta`.
pub fn tau(t: &Fraction) -> Fraction {
    let one = Fraction::one();
    let half = frac(1, 2);
    if *t < half {
        let two = Fraction::from_integer(BigInt::from(2));
        frac_part((&two * t - &one) / (t - &one))
    } else {
        frac_part((&one - t) / t)
    }
}

/// `x ↦ −2x (mod 1)`, written as in the two branches on `[0, 1)`.
pub fn m_minus2(x: &Fraction) -> Fraction {
    let two = Fraction::from_integer(BigInt::from(2));
    if *x < frac(1, 2) {
        frac_part(Fraction::one() - &two * x)
    } else {
        frac_part(&two - &two * x)
    }
}

pub fn theta_f64(t: f64) -> f64 {
    if t <= 0.0 {
        -t
    } else if t <= 1.0 {
        t / (2.0 * t - 1.0)
    } else {
        2.0 - t
    }
}

pub fn tau_f64(t: f64) -> f64 {
    let v = if t < 0.5 { (2.0 * t - 1.0) / (t - 1.0) } else { (1.0 - t) / t };
    v - v.floor()
}

pub fn m_minus2_f64(x: f64) -> f64 {
    let v = if x < 0.5 { 1.0 - 2.0 * x } else { 2.0 - 2.0 * x };
    v - v.floor()
}

/// τ on a reduced `p/q` in `[0, 1]`, exactly, as a reduced pair.
fn tau_pq(p: u64, q: u64) -> (u64, u64) {
    // t < 1/2: (2t−1)/(t−1) = (q−2p)/(q−p); t ≥ 1/2: (1−t)/t = (q−p)/p; mod 1.
    let (n, d) = if 2 * p < q { (q - 2 * p, q - p) } else { (q - p, p) };
    let n = n % d;
    let g = n.gcd(&d);
    (n / g, d / g)
}

/// Index of `m₋₂(k/2ⁿ)` on the level-`n` grid (`k = 2ⁿ` allowed).
fn m_minus2_index(k: u64, n: u32) -> u64 {
    let full = 1u64 << n;
    let v = if 2 * k < full { full - 2 * k } else { 2 * full - 2 * k };
    v % full
}

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub level: u32,
    pub checked: usize,
    /// Dyadic indices `k` (at `level`) where the identity fails.
    pub failures: Vec<u64>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `box(m₋₂(x)) = τ(box(x))` exactly for every `x = k/2ⁿ`.
pub fn check_conjugacy_identity(level: &FareyLevel) -> IdentityCheck {
    let n = level.level;
    let mut failures = Vec::new();
    for k in 0..level.len() as u64 {
        let (p, q) = level.pq(k as usize);
        let lhs = level.pq(m_minus2_index(k, n) as usize);
        if tau_pq(p, q) != lhs {
            failures.push(k);
        }
    }
    IdentityCheck { level: n, checked: level.len(), failures }
}

/// Farey unimodularity `qr − ps = 1` and the gap formula `1/(qs)`.
pub fn check_unimodular(level: &FareyLevel) -> bool {
    (0..level.len() - 1).all(|k| {
        let (p, q) = level.pq(k);
        let (r, s) = level.pq(k + 1);
        q * r == p * s + 1
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FordCircle {
    pub fraction: Fraction,
    pub center: (Fraction, Fraction),
    pub radius: Fraction,
}

pub fn ford_circle(x: &Fraction) -> FordCircle {
    let q = x.denom().clone();
    let r = Fraction::new(BigInt::one(), BigInt::from(2) * &q * &q);
    FordCircle { fraction: x.clone(), center: (x.clone(), r.clone()), radius: r }
}

/// Exact: tangent iff `|ps − qr| = 1`.
pub fn ford_tangent(c1: &FordCircle, c2: &FordCircle) -> bool {
    let (p, q) = (c1.fraction.numer(), c1.fraction.denom());
    let (r, s) = (c2.fraction.numer(), c2.fraction.denom());
    (p * s - q * r).abs().is_one()
}

/// Exact metric tangency: squared center distance equals squared radius sum.
pub fn ford_touch_metric(c1: &FordCircle, c2: &FordCircle) -> bool {
    let dx = &c1.center.0 - &c2.center.0;
    let dy = &c1.center.1 - &c2.center.1;
    let rs = &c1.radius + &c2.radius;
    &dx * &dx + &dy * &dy == &rs * &rs
}

/// Maxima of `max(|I|/|J|, |J|/|I|)` over complementary intervals of `F_n`.
#[derive(Debug, Clone)]
pub struct RatioStats {
    pub level: u32,
    pub max_adjacent: Fraction,
    /// Index of the left interval of the maximizing adjacent pair.
    pub adjacent_argmax: usize,
    /// Pairs separated by at most two intervals.
    pub max_separated: Fraction,
    pub separated_argmax: (usize, usize),
    /// Adjacent intervals whose common endpoint has generation in `1..n`.
    pub max_common_endpoint: Fraction,
}

pub fn interval_ratio_stats(n: u32) -> Result<RatioStats, ConjugacyError> {
    if n > 20 {
        return Err(ConjugacyError::LevelTooLarge(n));
    }
    let level = farey_level(n)?;
    // Interval k has length 1/(q_k q_{k+1}); store the reciprocal.
    let inv_len: Vec<u64> = (0..level.len() - 1).map(|k| level.pq(k).1 * level.pq(k + 1).1).collect();
    let ratio = |i: usize, j: usize| -> Ratio<u64> {
        let (a, b) = (inv_len[i], inv_len[j]);
        if a >= b {
            Ratio::new(a, b)
        } else {
            Ratio::new(b, a)
        }
    };
    let mut adj = (Ratio::new(1u64, 1u64), 0usize);
    let mut sep = (Ratio::new(1u64, 1u64), (0usize, 0usize));
    let mut common = Ratio::new(1u64, 1u64);
    for i in 0..inv_len.len() {
        for j in i + 1..(i + 4).min(inv_len.len()) {
            let r = ratio(i, j);
            if j == i + 1 {
                if r > adj.0 {
                    adj = (r, i);
                }
                let g = level.generation(i + 1);
                if g >= 1 && g < n && r > common {
                    common = r;
                }
            }
            if r > sep.0 {
                sep = (r, (i, j));
            }
        }
    }
    let big = |r: Ratio<u64>| Fraction::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    Ok(RatioStats {
        level: n,
        max_adjacent: big(adj.0),
        adjacent_argmax: adj.1,
        max_separated: big(sep.0),
        separated_argmax: sep.1,
        max_common_endpoint: big(common),
    })
}

fn distortion_quotient(left: f64, mid: f64, right: f64) -> f64 {
    let (a, b) = (right - mid, mid - left);
    (a / b).max(b / a)
}

/// Scalewise distortion `ρ(2⁻ⁿ)` using a level table of at least `n`;
/// `x` runs over that table's grid, plus non-dyadic probes through
/// `box_real`. A lower bound for the true supremum.
pub fn scalewise_distortion_with(table: &FareyLevel, n: u32) -> f64 {
    assert!(n <= table.level, "table too coarse for this scale");
    let step = 1usize << (table.level - n);
    let last = table.len() - 1;
    let mut best = 1.0f64;
    for x in step..=last - step {
        best = best.max(distortion_quotient(table.value(x - step), table.value(x), table.value(x + step)));
    }
    let t = (n as f64).exp2().recip();
    for j in 0..64 {
        let x = t + (1.0 - 2.0 * t) * (j as f64 + 1.0 / 3.0) / 64.0;
        let vals = [x - t, x, x + t].map(|y| box_real(y, 1e-15).expect("probe inside [0, 1]"));
        best = best.max(distortion_quotient(vals[0], vals[1], vals[2]));
    }
    best
}

/// `ρ(2⁻ⁿ)` with the grid `density` levels finer than the scale.
pub fn scalewise_distortion(n: u32, density: u32) -> Result<f64, ConjugacyError> {
    let table = farey_level(n + density)?;
    Ok(scalewise_distortion_with(&table, n))
}

/// The chart `m` with `m(0) = 1`, `m(1) = ω`, `m(∞) = ω²`.
pub fn chart() -> MobiusMap {
    let w = Complex::from_polar(1.0, TAU / 3.0);
    MobiusMap::from_triples(
        &[SpherePoint::new(0.0, 0.0), SpherePoint::new(1.0, 0.0), SpherePoint::Infinity],
        &[SpherePoint::new(1.0, 0.0), SpherePoint::Finite(w), SpherePoint::Finite(w * w)],
        false,
    )
    .expect("distinct points")
}

/// The circle homeomorphism fixing the cube roots of unity and conjugating
/// `z̄²` to the ideal-triangle reflection map, as a point on the circle.
pub fn circle_conjugacy_point(angle: f64, precision: f64) -> Result<Complex, ConjugacyError> {
    // Scale before splitting into thirds so dyadic angles stay exact: the
    // box function is far from Lipschitz at dyadics.
    let t = 3.0 * (angle - angle.floor());
    let rot = (t.floor() as i32).clamp(0, 2);
    let x = (t - rot as f64).clamp(0.0, 1.0);
    let b = box_real(x, precision)?;
    let z = chart().apply_c(Complex::new(b, 0.0)).finite().expect("finite on [0, 1]");
    Ok(z * Complex::from_polar(1.0, TAU * rot as f64 / 3.0))
}

/// The same map on angles measured in turns, in `[0, 1)`.
pub fn circle_conjugacy_h(angle: f64, precision: f64) -> Result<f64, ConjugacyError> {
    let z = circle_conjugacy_point(angle, precision)?;
    let a = z.arg() / TAU;
    Ok(if a < 0.0 { a + 1.0 } else { a })
}

/// The ideal-triangle reflection map on the unit circle: reflection in the
/// geodesic `Circle{2e^{iπ(2k+1)/3}, √3}` on the arc between `ωᵏ` and
/// `ωᵏ⁺¹`.
pub fn rho2(z: Complex) -> Complex {
    let a = z.arg() / TAU;
    let a = if a < 0.0 { a + 1.0 } else { a };
    let k = ((3.0 * a).floor() as i32).clamp(0, 2);
    let c = Complex::from_polar(2.0, std::f64::consts::PI * (2 * k + 1) as f64 / 3.0);
    c + 3.0 / (z - c).conj()
}

/// Big-rational `k/2ⁿ`.
pub fn dyadic(k: u64, n: u32) -> Fraction {
    Fraction::new(BigInt::from(k), BigInt::from(BigUint::one() << n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_examples() {
        assert_eq!(box_dyadic(1, 1), frac(1, 2));
        assert_eq!(box_dyadic(1, 2), frac(1, 3));
        assert_eq!(box_dyadic(3, 2), frac(2, 3));
        assert_eq!(box_dyadic(3, 3), frac(2, 5));
        assert_eq!(box_dyadic(0, 5), frac(0, 1));
        assert_eq!(box_dyadic(32, 5), frac(1, 1));
    }

    #[test]
    fn questionmark_examples() {
        assert_eq!(questionmark(&frac(1, 3)).unwrap(), frac(1, 4));
        assert_eq!(questionmark(&frac(2, 5)).unwrap(), frac(3, 8));
        assert_eq!(questionmark(&frac(1, 2)).unwrap(), frac(1, 2));
        assert!(questionmark(&frac(3, 2)).is_err());
        // deep path: 1/1000 is 999 left turns past 1/2
        assert_eq!(questionmark(&frac(1, 1000)).unwrap(), Fraction::new(BigInt::from(2), BigInt::one() << 1000u32));
    }

    #[test]
    fn box_real_examples() {
        let golden = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((box_real(1.0 / 3.0, 1e-15).unwrap() - golden).abs() < 1e-12);
        assert!((box_real(2.0 / 3.0, 1e-15).unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert_eq!(box_real(0.25, 1e-15).unwrap(), 1.0 / 3.0);
        assert_eq!(box_real(0.0, 1e-15).unwrap(), 0.0);
        assert_eq!(box_real(1.0, 1e-15).unwrap(), 1.0);
        let digits = (0..80).map(|k| k % 2 == 1);
        assert!((box_real_digits(digits, 1e-15).unwrap() - golden).abs() < 1e-12);
    }

    #[test]
    fn piecewise_examples() {
        assert_eq!(theta(&Extended::Finite(frac(1, 3))), Extended::Finite(frac(-1, 1)));
        assert_eq!(theta(&Extended::Finite(frac(1, 2))), Extended::Infinity);
        assert_eq!(tau(&frac(1, 3)), frac(1, 2));
        assert_eq!(tau(&frac(2, 5)), frac(1, 3));
        assert_eq!(m_minus2(&frac(3, 8)), frac(1, 4));
        assert!((tau_f64(0.4) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m_minus2_f64(0.375), 0.25);
        assert!((theta_f64(1.0 / 3.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn farey_examples() {
        let f2 = farey_level(2).unwrap();
        assert_eq!(f2.fractions(), vec![frac(0, 1), frac(1, 3), frac(1, 2), frac(2, 3), frac(1, 1)]);
        assert_eq!(frac(1, 2) - frac(1, 3), frac(1, 6));
        let f3 = farey_level(3).unwrap();
        let k = f3.fractions().iter().position(|x| *x == frac(2, 5)).unwrap();
        assert_eq!(f3.fraction(k - 1), frac(1, 3));
        assert_eq!(f3.fraction(k + 1), frac(1, 2));
        assert!(matches!(farey_level(25), Err(ConjugacyError::LevelTooLarge(25))));
        assert_eq!(f3.generation(4), 1);
        assert_eq!(f3.generation(3), 3);
    }

    #[test]
    fn ford_examples() {
        let c = ford_circle(&frac(1, 2));
        assert_eq!(c.center, (frac(1, 2), frac(1, 8)));
        assert_eq!(c.radius, frac(1, 8));
        assert!(ford_tangent(&ford_circle(&frac(0, 1)), &c));
        assert!(!ford_tangent(&ford_circle(&frac(1, 3)), &ford_circle(&frac(2, 3))));
        assert!(ford_touch_metric(&ford_circle(&frac(1, 3)), &c));
    }

    #[test]
    fn ratio_example_level_three() {
        let s = interval_ratio_stats(3).unwrap();
        assert_eq!(s.max_adjacent, frac(3, 1));
        assert_eq!(s.adjacent_argmax, 0);
    }

    #[test]
    fn identity_small_levels() {
        for n in 0..=12 {
            let l = farey_level(n).unwrap();
            assert!(check_conjugacy_identity(&l).passed(), "level {n}");
            assert!(check_unimodular(&l));
        }
    }

    #[test]
    fn conjugacy_fixes_cube_roots() {
        assert_eq!(circle_conjugacy_h(0.0, 1e-15).unwrap(), 0.0);
        assert!((circle_conjugacy_h(1.0 / 3.0, 1e-15).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((circle_conjugacy_h(2.0 / 3.0, 1e-15).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn distortion_at_half_is_at_least_one() {
        assert!(scalewise_distortion(1, 4).unwrap() >= 1.0);
    }

    #[test]
    fn separated_and_common_endpoint_constants() {
        let (mut c, mut l) = (0.0f64, 0.0f64);
        for n in 1..=16 {
            let s = interval_ratio_stats(n).unwrap();
            c = c.max(s.max_separated.to_f64().unwrap() / n as f64);
            l = l.max(s.max_common_endpoint.to_f64().unwrap());
        }
        // Measured: both about 1.82.
        assert!(c <= 8.0, "C = {c}");
        assert!(l <= 4.0, "L = {l}");
    }

    #[test]
    fn distortion_grows_with_n() {
        let t = farey_level(20).unwrap();
        let rho: Vec<f64> = (1..=16).map(|n| scalewise_distortion_with(&t, n)).collect();
        assert!(rho.windows(2).all(|w| w[1] > w[0]), "{rho:?}");
    }
}
