//! Verification suites behind `verify`: each returns named checks with a
//! pass flag and a short measured detail.

use crate::affine_model::{self, PieceKind};
use crate::antirational::{self as anti, AntiRationalMap, BasinOutcome};
use crate::boundary_conjugacy as bc;
use crate::geometry::{Complex, GenCircle, SpherePoint};
use crate::packing::{self, solve_packing, Normalization};
use crate::reflection_group::ReflectionGroup;
use crate::schwarz;
use crate::triangulation;

#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, name: &str, passed: bool, detail: String) -> Check {
    Check { suite, name: name.to_string(), passed, detail }
}

pub fn to_csv(checks: &[Check]) -> String {
    let mut out = String::from("suite,check,result,detail\n");
    for c in checks {
        let detail = c.detail.replace('"', "'");
        out.push_str(&format!(
            "{},{},{},\"{}\"\n",
            c.suite,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            detail
        ));
    }
    out
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub fn packing_suite() -> Vec<Check> {
    const S: &str = "packing";
    let mut out = vec![];
    let c = |re, im| Complex::new(re, im);
    match solve_packing(&triangulation::tetrahedron(), &Normalization::Strip, 1e-9) {
        Ok(p) => {
            let want = [
                GenCircle::horizontal(0.0),
                GenCircle::horizontal(2.0),
                GenCircle::circle(c(0.0, 1.0), 1.0),
                GenCircle::circle(c(2.0, 1.0), 1.0),
            ];
            let ok = want.iter().enumerate().all(|(v, w)| p.circle(v).same_curve(w, 1e-10));
            out.push(check(S, "strip_circles", ok, format!("{:?}", p.circles().iter().map(|x| x.to_string()).collect::<Vec<_>>())));
            let duals = [
                GenCircle::vertical(0.0),
                GenCircle::vertical(2.0),
                GenCircle::circle(c(1.0, 0.0), 1.0),
                GenCircle::circle(c(1.0, 2.0), 1.0),
            ];
            let found: Vec<GenCircle> = (0..4).map(|f| p.dual(f)).collect();
            let ok = duals.iter().all(|d| found.iter().filter(|f| f.same_curve(d, 1e-10)).count() == 1);
            out.push(check(S, "strip_duals", ok, format!("{:?}", found.iter().map(|x| x.to_string()).collect::<Vec<_>>())));
            let r = packing::verify_packing(&p, 1e-9);
            out.push(check(S, "strip_verify", r.is_valid(), format!("orthogonality {:.2e}", r.max_orthogonality_defect)));
        }
        Err(e) => out.push(check(S, "strip_solve", false, e.to_string())),
    }
    let cases = [
        ("octahedron", triangulation::octahedron()),
        ("icosahedron", triangulation::icosahedron()),
        ("double_tetrahedron", triangulation::double_tetrahedron()),
        ("subdivided_tetrahedron", triangulation::tetrahedron().barycentric_subdivision()),
    ];
    for (name, t) in cases {
        let (ok, detail) = match solve_packing(&t, &Normalization::default(), 1e-9) {
            Ok(p) => {
                let r = packing::verify_packing(&p, 1e-9);
                (r.is_valid(), format!("tangency {:.2e} orthogonality {:.2e}", r.max_tangency_defect, r.max_orthogonality_defect))
            }
            Err(e) => (false, e.to_string()),
        };
        out.push(check(S, &format!("{name}_verify"), ok, detail));
    }
    out
}

pub fn symmetry_suite() -> Vec<Check> {
    const S: &str = "symmetries";
    let mut out = vec![];
    for (name, t, want) in [
        ("tetrahedron", triangulation::tetrahedron(), Some((24, 12))),
        ("double_tetrahedron", triangulation::double_tetrahedron(), None),
    ] {
        match solve_packing(&t, &Normalization::default(), 1e-9) {
            Ok(p) => {
                let g = packing::mobius_symmetries(&p, 1e-8);
                let ok = match want {
                    Some((n, k)) => g.order() == n && g.orientation_preserving() == k,
                    None => g.order() < 24,
                } && g.is_closed(1e-8);
                out.push(check(S, name, ok, format!("order {} orientation-preserving {}", g.order(), g.orientation_preserving())));
            }
            Err(e) => out.push(check(S, name, false, e.to_string())),
        }
    }
    out
}

pub fn group_suite() -> Vec<Check> {
    const S: &str = "group";
    let p = match solve_packing(&triangulation::tetrahedron(), &Normalization::Strip, 1e-9) {
        Ok(p) => p,
        Err(e) => return vec![check(S, "solve", false, e.to_string())],
    };
    let g = ReflectionGroup::new(&p);
    let disks = g.orbit_disks(3);
    let counts: Vec<usize> = (0..=3).map(|k| disks.iter().filter(|d| d.generation == k).count()).collect();
    let mut out = vec![check(S, "generation_counts", counts == [4, 4, 12, 36], format!("{counts:?}"))];
    let target = GenCircle::circle(Complex::new(1.0, 0.25), 0.25);
    let ok = disks.iter().any(|d| d.generation == 1 && d.circle.same_curve(&target, 1e-12));
    out.push(check(S, "generation1_disk", ok, target.to_string()));
    let diam: Vec<f64> = (1..=6).map(|n| g.interstice_diameter(n)).collect();
    let ok = diam.windows(2).all(|w| w[1] < w[0]);
    out.push(check(S, "interstice_shrinking", ok, format!("{:?}", diam.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>())));
    let z = SpherePoint::new(0.3, 0.7);
    let ok = g.orbit_equivalence_check(&z, &[1, 2], 60).unwrap_or(false);
    out.push(check(S, "orbit_equivalence", ok, "0.3+0.7i under word [1,2]".into()));
    out
}

pub fn julia_suite(eps: f64) -> Vec<Check> {
    const S: &str = "julia";
    let g = AntiRationalMap::tetrahedral();
    let mut out = vec![];
    let crit = anti::critical_points();
    let ok = crit.iter().all(|&c| g.eval_c(c).finite().is_some_and(|w| (w - c).norm() <= 1e-15));
    out.push(check(S, "critical_points_fixed", ok, "0, 1, ω, ω²".into()));
    out.push(check(S, "infinity_to_zero", g.eval(&SpherePoint::Infinity) == SpherePoint::new(0.0, 0.0), String::new()));
    let worst = anti::julia_fixed_points()
        .iter()
        .map(|&z| g.eval_c(z).finite().map_or(f64::INFINITY, |w| (w - z).norm()))
        .fold(0.0, f64::max);
    out.push(check(S, "julia_fixed_points", worst < 1e-10, format!("residual {worst:.2e}")));
    let (ok, detail) = match anti::verify_contraction(&g, eps) {
        Ok(r) => (true, format!("worst ratio {r:.3} at eps {eps}")),
        Err(e) => (false, e.to_string()),
    };
    out.push(check(S, "contraction", ok, detail));
    let table = anti::touching_table(&g);
    let ok = table.iter().all(|(_, b)| b.len() == 2);
    let detail = table.iter().map(|(z, b)| format!("{z:.4}:{b:?}")).collect::<Vec<_>>().join(" ");
    out.push(check(S, "touching_two_basins", ok, detail));
    let inv = inventory(&g);
    out.push(check(S, "second_iterate_inventory", inv.0 == 10 && inv.1, format!("{} distinct fixed points, all fixed by g: {}", inv.0, inv.1)));
    let (ok, bad) = julia_rotation_equivariance(&g, 48, eps);
    out.push(check(S, "omega_symmetry", ok, format!("{bad} mismatched samples")));
    if let Ok(disks) = anti::julia_dual_disks(&table) {
        let t = anti::transition_counts(&g, &disks, 5, 6);
        let ok = (0..4).all(|a| t[a][a] == 0 && (0..4).all(|b| a == b || t[a][b] > 0)) && (0..5).all(|a| t[a][4] + t[4][a] == 0);
        out.push(check(S, "face_transitions", ok, format!("{:?}", &t[..4])));
    } else {
        out.push(check(S, "face_transitions", false, "no face disks".into()));
    }
    out
}

/// Distinct fixed points of `g∘g` and whether each is fixed by `g`.
pub fn inventory(g: &AntiRationalMap) -> (usize, bool) {
    let mut distinct: Vec<Complex> = vec![];
    for z in anti::second_iterate_fixed_points(g) {
        if distinct.iter().all(|d| (d - z).norm() > 1e-6) {
            distinct.push(z);
        }
    }
    let fixed = distinct.iter().all(|&z| g.eval_c(z).finite().is_some_and(|w| (w - z).norm() < 1e-8));
    (distinct.len(), fixed)
}

/// Compares the basin of `z` with that of `ωz` on an `n × n` grid over
/// `[−2, 2]²`; rotation by ω permutes basins `1 → 2 → 3 → 1`.
pub fn julia_rotation_equivariance(g: &AntiRationalMap, n: usize, eps: f64) -> (bool, usize) {
    let w = anti::omega();
    let rot = [0usize, 2, 3, 1];
    let mut bad = 0;
    for i in 0..n {
        for j in 0..n {
            let z = Complex::new(-2.0 + 4.0 * (i as f64 + 0.5) / n as f64, -2.0 + 4.0 * (j as f64 + 0.5) / n as f64);
            let a = anti::classify_basin(g, &SpherePoint::Finite(z), 200, eps);
            let b = anti::classify_basin(g, &SpherePoint::Finite(w * z), 200, eps);
            match (a, b) {
                (Ok(BasinOutcome::Attracted { target: s, .. }), Ok(BasinOutcome::Attracted { target: t, .. })) if rot[s] == t => {}
                (Ok(BasinOutcome::Undecided), Ok(BasinOutcome::Undecided)) => {}
                _ => bad += 1,
            }
        }
    }
    (bad == 0, bad)
}

pub fn affine_suite() -> Vec<Check> {
    const S: &str = "affine";
    let m = match affine_model::build_model() {
        Ok(m) => m,
        Err(e) => return vec![check(S, "build", false, e.to_string())],
    };
    let mut out = vec![check(S, "piece_count", m.pieces.len() == 24, format!("{} pieces", m.pieces.len()))];
    let ok = m.pieces.iter().all(|p| p.orientation_reversing());
    out.push(check(S, "orientation_reversing", ok, String::new()));
    let worst = m
        .pieces
        .iter()
        .filter(|p| p.kind == PieceKind::Corner)
        .map(|p| {
            let (a, b) = p.singular_values();
            (a - 2.0).abs().max((b - 2.0).abs())
        })
        .fold(0.0, f64::max);
    let ratios = m.expansion_ratios(1000, 0);
    let sampled = ratios.iter().map(|r| (r - 2.0).abs()).fold(0.0, f64::max);
    out.push(check(S, "expansion_factor", worst < 1e-9 && sampled < 1e-9, format!("singular values {worst:.2e}, sampled {sampled:.2e}")));
    let seam = m.seam_mismatch(1000 / 24 + 1);
    out.push(check(S, "edge_identification", seam < 1e-12, format!("max mismatch {seam:.2e}")));
    let res: Vec<usize> = (6..=11).map(|k| 1 << k).collect();
    match m.dimension_estimate(24, &res, &[0, 1, 2, 3]) {
        Ok(d) => out.push(check(S, "box_dimension", (d - 1.585).abs() <= 0.05, format!("{d:.4} (ln3/ln2 = {:.4})", 3f64.ln() / 2f64.ln()))),
        Err(e) => out.push(check(S, "box_dimension", false, e.to_string())),
    }
    let per_face: Vec<f64> = (0..4).filter_map(|f| m.dimension_estimate(24, &res, &[f]).ok()).collect();
    let spread = per_face.iter().cloned().fold(f64::MIN, f64::max) - per_face.iter().cloned().fold(f64::MAX, f64::min);
    out.push(check(S, "dimension_per_copy", per_face.len() == 4 && spread <= 0.02, format!("{per_face:.4?}")));
    let ok = (0..4).all(|f| {
        let (faces, cap) = m.image_faces(f, 30);
        cap && faces == (0..4).filter(|&g| g != f).collect::<Vec<_>>()
    });
    out.push(check(S, "markov_images", ok, String::new()));
    out
}

pub fn schwarz_suite(seed: u64) -> Vec<Check> {
    const S: &str = "schwarz";
    let mut out = vec![];
    let worst = (0..1000)
        .map(|k| {
            let z = Complex::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / 1000.0);
            let w = z + 1.0 / (2.0 * z * z);
            schwarz::sigma1(SpherePoint::Finite(w)).map_or(f64::INFINITY, |s| s.finite().map_or(f64::INFINITY, |s| (s - w).norm()))
        })
        .fold(0.0, f64::max);
    out.push(check(S, "boundary_fixed", worst < 1e-9, format!("max residual {worst:.2e}")));
    let cusp = schwarz::cusps()
        .iter()
        .map(|&c| schwarz::sigma1(SpherePoint::Finite(c)).ok().and_then(|s| s.finite()).map_or(f64::INFINITY, |s| (s - c).norm()))
        .fold(0.0, f64::max);
    let tan = schwarz::tangency_points()
        .iter()
        .map(|&c| schwarz::sigma2(SpherePoint::Finite(c)).finite().map_or(f64::INFINITY, |s| (s - c).norm()))
        .fold(0.0, f64::max);
    out.push(check(S, "singular_points_fixed", cusp < 1e-12 && tan < 1e-12, format!("cusps {cusp:.2e} tangencies {tan:.2e}")));
    let mut rng = Lcg(seed);
    let (mut d1, mut tile) = (vec![], vec![]);
    while d1.len() < 20 || tile.len() < 20 {
        let w = Complex::new(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
        match schwarz::region_of(SpherePoint::Finite(w)) {
            Ok(schwarz::Region3::D1) if d1.len() < 20 && !near_boundary(w) => d1.push(schwarz::sigma1_preimages(w).len()),
            Ok(schwarz::Region3::Tile(_)) if tile.len() < 20 && !near_boundary(w) => tile.push(schwarz::sigma1_preimages(w).len()),
            _ => {}
        }
    }
    let ok = d1.iter().all(|&n| n == 2) && tile.iter().all(|&n| n == 3);
    out.push(check(S, "degree_counts", ok, format!("into D1 {d1:?}; into tile {tile:?}")));
    out
}

fn near_boundary(w: Complex) -> bool {
    let r = schwarz::r_preimages(w);
    r.iter().any(|z| (z.norm() - 1.0).abs() < 1e-6)
}

/// Minimal LCG for reproducible sample targets.
struct Lcg(u64);

impl Lcg {
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((self.0 >> 11) as f64 / (1u64 << 53) as f64)
    }
}

/// Pixel neighborhoods of the six singular points in a `res²` render of
/// `[−2, 2]²`: for each point, whether the `(2r+1)²` block around its pixel
/// holds basin and tiling pixels.
pub fn singular_adjacency(res: usize, maxiter: usize, r: usize) -> Vec<(Complex, bool, bool)> {
    let region = crate::raster::Region::new(-2.0, 2.0, -2.0, 2.0);
    let grid = schwarz::classify_grid(&region, res, res, maxiter);
    schwarz::singular_points()
        .iter()
        .map(|&s| {
            let (i, j) = region.pixel_of(s, res, res).expect("singular points lie in the region");
            let (mut basin, mut tiling) = (false, false);
            for y in j.saturating_sub(r)..=(j + r).min(res - 1) {
                for x in i.saturating_sub(r)..=(i + r).min(res - 1) {
                    match grid[y * res + x] {
                        schwarz::SchwarzOutcome::BasinInfinity { .. } => basin = true,
                        schwarz::SchwarzOutcome::TilingSet { .. } => tiling = true,
                        schwarz::SchwarzOutcome::Undecided => {}
                    }
                }
            }
            (s, basin, tiling)
        })
        .collect()
}

pub fn schwarz_render_suite() -> Vec<Check> {
    const S: &str = "schwarz";
    let adj = singular_adjacency(600, 200, 1);
    let n = adj.iter().filter(|(_, b, t)| *b && *t).count();
    let wide = singular_adjacency(600, 200, 3).iter().filter(|(_, b, t)| *b && *t).count();
    vec![check(S, "singular_adjacency_600", n == 6, format!("{n}/6 with basin and tiling pixels in 3x3; {wide}/6 in 7x7"))]
}

pub fn conjugacy_suite(level: u32) -> Vec<Check> {
    const S: &str = "conjugacy";
    let mut out = vec![];
    match bc::farey_level(level) {
        Ok(table) => {
            let r = bc::check_conjugacy_identity(&table);
            out.push(check(S, "exact_identities", r.passed(), format!("level {level}: {} checked, {} failures", r.checked, r.failures.len())));
        }
        Err(e) => out.push(check(S, "exact_identities", false, e.to_string())),
    }
    let ok = (0..=level.min(16)).all(|n| bc::farey_level(n).map(|t| bc::check_unimodular(&t)).unwrap_or(false));
    out.push(check(S, "unimodular", ok, format!("levels 0..={}", level.min(16))));
    let mut worst = 1.0f64;
    let mut ok = true;
    for n in 1..=level.min(16) {
        match bc::interval_ratio_stats(n) {
            Ok(s) => {
                let bound = bc::frac(n as i64, 1);
                ok &= s.max_adjacent <= bound;
                worst = worst.max(num_traits::ToPrimitive::to_f64(&s.max_adjacent).unwrap_or(f64::NAN) / n as f64);
            }
            Err(_) => ok = false,
        }
    }
    out.push(check(S, "adjacent_ratio_le_n", ok, format!("max ratio/n {worst}")));
    out
}

pub fn verify_all(level: u32, eps: f64, seed: u64) -> Vec<Check> {
    let mut v = packing_suite();
    v.extend(symmetry_suite());
    v.extend(group_suite());
    v.extend(julia_suite(eps));
    v.extend(affine_suite());
    v.extend(schwarz_suite(seed));
    v.extend(schwarz_render_suite());
    v.extend(conjugacy_suite(level));
    v
}
