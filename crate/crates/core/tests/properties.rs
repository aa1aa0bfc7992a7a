use gasketlab::affine_model::{self, AffineStep, NetPoint};
use gasketlab::boundary_conjugacy as bc;
use gasketlab::schwarz::{self, Region3};
use gasketlab::{Complex, GenCircle, MobiusMap, SpherePoint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn close(a: &SpherePoint, b: &SpherePoint) -> bool {
    a.chordal(b) < 1e-9
}

proptest! {
    #[test]
    fn questionmark_inverts_box(n in 1u32..24, k in any::<u64>()) {
        let k = k % ((1u64 << n) + 1);
        let b = bc::box_dyadic(k, n);
        prop_assert_eq!(bc::questionmark(&b).unwrap(), bc::dyadic(k, n));
    }

    #[test]
    fn box_is_monotone(n in 1u32..24, k in any::<u64>()) {
        let k = k % (1u64 << n);
        prop_assert!(bc::box_dyadic(k, n) < bc::box_dyadic(k + 1, n));
    }

    #[test]
    fn conjugacy_identity_on_random_dyadics(n in 1u32..40, k in any::<u64>()) {
        let k = k % ((1u64 << n) + 1);
        let x = bc::dyadic(k, n);
        let y = bc::m_minus2(&x);
        let j = (y * bc::dyadic(1u64 << n, 0)).to_integer().to_u64().unwrap();
        prop_assert_eq!(bc::box_dyadic(j, n), bc::tau(&bc::box_dyadic(k, n)));
    }

    #[test]
    fn mobius_inverse_round_trip(
        a in (-3.0..3.0f64, -3.0..3.0f64), b in (-3.0..3.0f64, -3.0..3.0f64),
        c in (-3.0..3.0f64, -3.0..3.0f64), anti in any::<bool>(),
        z in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let (a, b, c) = (Complex::new(a.0, a.1), Complex::new(b.0, b.1), Complex::new(c.0, c.1));
        let d = (Complex::new(1.0, 0.0) + b * c) / a;
        prop_assume!(a.norm() > 0.1);
        let m = MobiusMap::new(a, b, c, d, anti);
        let z = SpherePoint::new(z.0, z.1);
        prop_assert!(close(&m.inverse().apply(&m.apply(&z)), &z));
    }

    #[test]
    fn reflection_is_involution_fixing_circle(
        cx in -2.0..2.0f64, cy in -2.0..2.0f64, r in 0.1..3.0f64,
        t in 0.0..std::f64::consts::TAU, z in (-4.0..4.0f64, -4.0..4.0f64),
    ) {
        let circle = GenCircle::circle(Complex::new(cx, cy), r);
        let m = MobiusMap::reflection(&circle);
        let z = SpherePoint::new(z.0, z.1);
        prop_assert!(close(&m.apply(&m.apply(&z)), &z));
        let on = SpherePoint::Finite(Complex::new(cx, cy) + Complex::from_polar(r, t));
        prop_assert!(close(&m.apply(&on), &on));
    }

    #[test]
    fn affine_step_stays_on_net(f in 0usize..4, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let m = affine_model::build_model().unwrap();
        let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
        let t = affine_model::face_triangle(f);
        let p = NetPoint::new(t[0].x + a * (t[1].x - t[0].x) + b * (t[2].x - t[0].x), t[0].y + a * (t[1].y - t[0].y) + b * (t[2].y - t[0].y));
        match m.step(&p) {
            Some(AffineStep::Mapped(q)) => prop_assert!(affine_model::face_of(&q).is_some()),
            Some(AffineStep::EnteredCap(x)) => prop_assert!(x < 4),
            None => prop_assert!(false, "net point {:?} has no step", p),
        }
    }

    #[test]
    fn sigma1_preimages_map_back(x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let t = Complex::new(x, y);
        let want = match schwarz::region_of(SpherePoint::Finite(t)) {
            Ok(Region3::D1) => 2,
            Ok(Region3::Tile(_)) => 3,
            _ => return Ok(()),
        };
        prop_assume!(schwarz::r_preimages(t).iter().all(|z| (z.norm() - 1.0).abs() > 1e-4));
        let pre = schwarz::sigma1_preimages(t);
        prop_assert_eq!(pre.len(), want);
        for w in pre {
            let s = schwarz::sigma1(SpherePoint::Finite(w)).unwrap().finite().unwrap();
            prop_assert!((s - t).norm() < 1e-7);
        }
    }
}
