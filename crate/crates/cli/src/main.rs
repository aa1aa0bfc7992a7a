use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gasketlab::affine_model;
use gasketlab::antirational::{self as anti, AntiRationalMap, CONTRACTION_EPS};
use gasketlab::boundary_conjugacy as bc;
use gasketlab::packing::{self, mobius_symmetries, solve_packing, CirclePacking, Normalization};
use gasketlab::raster::{RasterImage, Region};
use gasketlab::reflection_group::ReflectionGroup;
use gasketlab::schwarz;
use gasketlab::suites::{self, Check};
use gasketlab::triangulation::{self, Triangulation};

#[derive(Parser)]
#[command(name = "gasketlab", version, about = "Circle packings, reflection groups and dynamical gaskets")]
struct Cli {
    /// Worker threads for rendering (default: GASKETLAB_THREADS, else all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a circle packing and write it as JSON.
    Pack {
        #[arg(long, default_value = "tetrahedron")]
        triangulation: String,
        #[arg(long, default_value = "default")]
        normalize: Normalization,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a limit set, Julia set, model map or Schwarz reflection to PPM.
    Render {
        #[arg(value_enum)]
        kind: RenderKind,
        #[command(flatten)]
        opts: RenderOpts,
    },
    /// Write the generations of limit-set disks as JSON.
    OrbitDisks {
        #[arg(long, default_value_t = 3)]
        maxgen: usize,
        #[command(flatten)]
        source: PackingSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary conjugacy: exact identities and distortion tables.
    Conjugacy {
        #[command(subcommand)]
        action: ConjugacyAction,
    },
    /// Run verification suites; prints CSV and exits 1 on any failure.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=bc::MAX_LEVEL as i64))]
        level: u32,
        #[arg(long, default_value_t = CONTRACTION_EPS, value_parser = parse_eps)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Möbius symmetry group of a packed triangulation.
    Symmetries {
        #[command(flatten)]
        source: PackingSource,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderKind {
    Gasket,
    Julia,
    Affine,
    Schwarz,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    All,
    Packing,
    Group,
    Julia,
    #[value(name = "julia-structure")]
    JuliaStructure,
    Affine,
    Schwarz,
    Conjugacy,
}

#[derive(Subcommand)]
enum ConjugacyAction {
    /// Check the exact conjugacy identities on all dyadics of a level.
    Check {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=bc::MAX_LEVEL as i64))]
        level: u32,
    },
    /// Tabulate the scalewise distortion and adjacent interval ratios.
    Distortion {
        #[arg(long = "max-level", alias = "level", default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..=16))]
        max_level: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PackingSource {
    /// Packing JSON written by `pack`; overrides --triangulation.
    #[arg(long)]
    packing: Option<PathBuf>,
    /// Built-in name or triangulation JSON file.
    #[arg(long, default_value = "tetrahedron")]
    triangulation: String,
    #[arg(long, default_value = "strip")]
    normalize: Normalization,
}

#[derive(Args)]
struct RenderOpts {
    /// x0,x1,y0,y1
    #[arg(long, allow_hyphen_values = true)]
    region: Option<Region>,
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(1..=16384))]
    res: u32,
    #[arg(long, default_value_t = 200)]
    maxiter: usize,
    #[arg(long, default_value_t = CONTRACTION_EPS, value_parser = parse_eps)]
    eps: f64,
    #[command(flatten)]
    source: PackingSource,
    #[arg(long)]
    out: PathBuf,
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let e: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if e > 0.0 && e <= CONTRACTION_EPS {
        Ok(e)
    } else {
        Err(format!("eps must be in (0, {CONTRACTION_EPS}]"))
    }
}

/// Failure after argument parsing: exit 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.map(|t| t as usize).or_else(|| std::env::var("GASKETLAB_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads.filter(|&n| n > 0) {
        // Only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_triangulation(source: &str) -> Result<Triangulation, Failure> {
    if let Some(t) = triangulation::builtin(source) {
        return Ok(t);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure(format!("{source}: not a built-in triangulation and unreadable: {e}")))?;
    let t: Triangulation = serde_json::from_str(&text).map_err(|e| Failure(format!("{source}: {e}")))?;
    let report = t.validate();
    if !report.is_valid() {
        return Err(Failure(format!("{source}: {report}")));
    }
    Ok(t)
}

fn load_packing(src: &PackingSource) -> Result<CirclePacking, Failure> {
    if let Some(path) = &src.packing {
        let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        return Ok(CirclePacking::from_json(&v)?);
    }
    let t = load_triangulation(&src.triangulation)?;
    Ok(solve_packing(&t, &src.normalize, 1e-9)?)
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_image(img: &RasterImage, path: &Path) -> Result<(), Failure> {
    img.write_ppm(path)?;
    eprintln!("wrote {}x{} image to {}", img.width, img.height, path.display());
    Ok(())
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Pack { triangulation, normalize, tol, out } => {
            let t = load_triangulation(&triangulation)?;
            let p = solve_packing(&t, &normalize, tol)?;
            let report = packing::verify_packing(&p, tol.max(1e-9));
            let text = serde_json::to_string_pretty(&p.to_json())? + "\n";
            write_text(&out, &text)?;
            if !report.is_valid() {
                for v in &report.violations {
                    eprintln!("violation: {v}");
                }
            }
            Ok(report.is_valid())
        }
        Command::Render { kind, opts } => render(kind, opts).map(|_| true),
        Command::OrbitDisks { maxgen, source, out } => {
            let p = load_packing(&source)?;
            let g = ReflectionGroup::new(&p);
            let disks: Vec<serde_json::Value> = g
                .orbit_disks(maxgen)
                .iter()
                .map(|d| {
                    json!({
                        "generation": d.generation,
                        "vertex": d.vertex,
                        "word": d.witness,
                        "circle": d.circle,
                        "exterior": matches!(d.circle, gasketlab::GenCircle::Circle { .. }) && d.disk.a < 0.0,
                    })
                })
                .collect();
            write_text(&out, &(serde_json::to_string_pretty(&disks)? + "\n"))?;
            Ok(true)
        }
        Command::Conjugacy { action } => match action {
            ConjugacyAction::Check { level } => {
                let table = bc::farey_level(level)?;
                let r = bc::check_conjugacy_identity(&table);
                println!("level {level}: {} dyadics checked, {} failures", r.checked, r.failures.len());
                for f in r.failures.iter().take(10) {
                    println!("failure at {f:?}");
                }
                println!("exact identities: {}", if r.passed() { "PASS" } else { "FAIL" });
                Ok(r.passed())
            }
            ConjugacyAction::Distortion { max_level, out } => {
                let table = bc::farey_level(20)?;
                let mut csv = String::from("n,t,rho,rho/n,adjacent_max_ratio\n");
                for n in 1..=max_level {
                    let rho = bc::scalewise_distortion_with(&table, n);
                    let adj = bc::interval_ratio_stats(n)?.max_adjacent;
                    csv.push_str(&format!("{n},{},{rho},{},{adj}\n", (n as f64).exp2().recip(), rho / n as f64));
                }
                write_text(&out, &csv)?;
                Ok(true)
            }
        },
        Command::Verify { suite, level, eps, seed } => verify(suite, level, eps, seed),
        Command::Symmetries { source } => {
            let p = load_packing(&source)?;
            let g = mobius_symmetries(&p, 1e-8);
            println!("order,orientation_preserving,closed");
            println!("{},{},{}", g.order(), g.orientation_preserving(), g.is_closed(1e-8));
            println!("permutation,anti");
            for e in &g.elements {
                let perm: Vec<String> = e.permutation.iter().map(|v| v.to_string()).collect();
                println!("{},{}", perm.join(" "), e.map.anti);
            }
            Ok(true)
        }
    }
}

fn render(kind: RenderKind, o: RenderOpts) -> Result<(), Failure> {
    let res = o.res as usize;
    let square = Region::new(-2.0, 2.0, -2.0, 2.0);
    let img = match kind {
        RenderKind::Gasket => {
            let p = load_packing(&o.source)?;
            let region = o.region.unwrap_or(Region::new(-1.0, 3.0, -1.0, 3.0));
            ReflectionGroup::new(&p).render_limit_set(&region, res, res, o.maxiter)
        }
        RenderKind::Julia => {
            anti::render_julia(&AntiRationalMap::tetrahedral(), &o.region.unwrap_or(square), res, res, o.maxiter, o.eps)?
        }
        RenderKind::Affine => {
            // The net is twice as wide as it is tall, times 2/√3.
            let height = ((res as f64) * affine_model::SQRT3 / 2.0).round().max(1.0) as usize;
            affine_model::build_model()?.render(res, height, o.maxiter)
        }
        RenderKind::Schwarz => schwarz::render_schwarz(&o.region.unwrap_or(square), res, res, o.maxiter),
    };
    write_image(&img, &o.out)
}

fn print_checks(checks: &[Check]) -> bool {
    print!("{}", suites::to_csv(checks));
    let ok = suites::all_passed(checks);
    eprintln!("{} of {} checks passed", checks.iter().filter(|c| c.passed).count(), checks.len());
    ok
}

fn verify(suite: Suite, level: u32, eps: f64, seed: u64) -> Result<bool, Failure> {
    let checks = match suite {
        Suite::All => suites::verify_all(level, eps, seed),
        Suite::Packing => {
            let mut v = suites::packing_suite();
            v.extend(suites::symmetry_suite());
            v
        }
        Suite::Group => suites::group_suite(),
        Suite::Julia => suites::julia_suite(eps),
        Suite::JuliaStructure => {
            julia_tables();
            suites::julia_suite(eps)
        }
        Suite::Affine => {
            affine_tables()?;
            suites::affine_suite()
        }
        Suite::Schwarz => {
            schwarz_tables();
            let mut v = suites::schwarz_suite(seed);
            v.extend(suites::schwarz_render_suite());
            v
        }
        Suite::Conjugacy => {
            let v = suites::conjugacy_suite(level);
            let exact = v.iter().find(|c| c.name == "exact_identities").is_some_and(|c| c.passed);
            println!("exact identities: {}", if exact { "PASS" } else { "FAIL" });
            v
        }
    };
    Ok(print_checks(&checks))
}

fn julia_tables() {
    let g = AntiRationalMap::tetrahedral();
    println!("re,im,fixed_by_g,second_iterate_multiplier");
    let mut seen: Vec<gasketlab::Complex> = vec![];
    for z in anti::second_iterate_fixed_points(&g) {
        if seen.iter().any(|s| (s - z).norm() < 1e-6) {
            continue;
        }
        seen.push(z);
        let fixed = g.eval_c(z).finite().is_some_and(|w| (w - z).norm() < 1e-8);
        println!("{:.12},{:.12},{fixed},{:.6}", z.re, z.im, anti::second_iterate_multiplier(&g, z));
    }
    println!();
    println!("re,im,basins");
    for (z, b) in anti::touching_table(&g) {
        let names: Vec<String> = b.iter().map(|k| k.to_string()).collect();
        println!("{:.12},{:.12},{}", z.re, z.im, names.join(" "));
    }
    println!();
}

fn affine_tables() -> Result<(), Failure> {
    let m = affine_model::build_model()?;
    println!("piece,face,target_face,kind,sigma_max,sigma_min,det");
    for (i, p) in m.pieces.iter().enumerate() {
        let (a, b) = p.singular_values();
        println!("{i},{},{},{:?},{a:.12},{b:.12},{:.12}", p.face, p.target_face, p.kind, p.determinant());
    }
    println!();
    println!("resolution,boxes");
    let counts = m.box_counts(24, 11, &[0, 1, 2, 3]);
    for (k, c) in counts.iter().enumerate() {
        println!("{},{c}", 1usize << k);
    }
    println!();
    Ok(())
}

fn schwarz_tables() {
    println!("point,re,im,residual");
    for (k, c) in schwarz::cusps().iter().enumerate() {
        let r = schwarz::sigma1(gasketlab::SpherePoint::Finite(*c)).ok().and_then(|s| s.finite()).map_or(f64::INFINITY, |s| (s - c).norm());
        println!("cusp{k},{:.15},{:.15},{r:e}", c.re, c.im);
    }
    for (k, c) in schwarz::tangency_points().iter().enumerate() {
        let r = schwarz::sigma2(gasketlab::SpherePoint::Finite(*c)).finite().map_or(f64::INFINITY, |s| (s - c).norm());
        println!("tangency{k},{:.15},{:.15},{r:e}", c.re, c.im);
    }
    println!();
}
