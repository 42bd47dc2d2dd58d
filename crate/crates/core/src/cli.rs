//! Command-line interface. Exit status 0 means every check passed, 1 means
//! a check failed, 2 means bad usage or input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::SceneConfig;
use crate::dynamics::{
    e_set_saturation, random_backward_orbit, rasterize, repelling_fixed_points, Resolution, SemigroupSpec,
    SpherePoint, Window,
};
use crate::error::{Error, Result};
use crate::exact::{find_commutation_moebius, phi, try_conjugate, MoebiusMap, Parity, RationalMap};
use crate::experiments::{self, ExperimentOptions, ExperimentReport, DEFAULT_SATURATION_ROUNDS, DEFAULT_Z0};
use crate::expr::parse_rational_map;
use crate::lift::{lift, verify_semiconjugacy};
use crate::output;

#[derive(Debug, Parser)]
#[command(name = "semidyn", version, about = "Exact algebra and Julia-set numerics for rational semigroups")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for images, clouds and reports.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed of the chaos game; overrides the scene config.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Number of chaos-game walkers and worker threads.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lift an odd map through φ(z) = (z²-1)/(z²+1).
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        /// Claimed lift to compare against.
        #[arg(long, allow_hyphen_values = true)]
        against: Option<String>,
    },
    /// Check link ∘ lower = upper ∘ link exactly (link defaults to φ).
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        lower: String,
        #[arg(long, allow_hyphen_values = true)]
        upper: String,
        #[arg(long, allow_hyphen_values = true)]
        link: Option<String>,
    },
    /// Classify a map as even, odd or neither.
    Parity {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Conjugate a map by a Möbius map: m ∘ f ∘ m⁻¹.
    Conjugate {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Search for a Möbius map m with f ∘ g = m ∘ g ∘ f.
    Commute {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Approximate the Julia set of a semigroup by a chaos game.
    Julia {
        #[command(flatten)]
        scene: SceneArgs,
        /// Also compute repelling fixed points of short words.
        #[arg(long)]
        repelling: bool,
    },
    /// Saturate a generator's Julia cloud under complete invariance.
    Eset {
        #[command(flatten)]
        scene: SceneArgs,
        /// Index of the generator whose Julia cloud seeds the saturation.
        #[arg(long, default_value_t = 0)]
        seed_from: usize,
        /// Maximum number of saturation rounds.
        #[arg(long, default_value_t = DEFAULT_SATURATION_ROUNDS)]
        rounds: usize,
    },
    /// Run the scripted example experiments.
    Examples {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long)]
        orbit_length: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        /// Record wall-clock durations in the reports.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    All,
}

#[derive(Debug, Args)]
struct SceneArgs {
    /// Scene config file (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generator expression; repeat for several.
    #[arg(long = "gen", value_name = "EXPR", allow_hyphen_values = true)]
    generators: Vec<String>,
    #[arg(long)]
    orbit_length: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    word_length: Option<usize>,
    /// Window as `cx,cy,width,height`.
    #[arg(long, value_parser = parse_window)]
    window: Option<Window>,
    /// Resolution as `WxH`.
    #[arg(long, value_parser = parse_resolution)]
    resolution: Option<Resolution>,
    /// Starting point of the chaos game, e.g. `0.37+0.19i` or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    /// Record wall-clock duration in the report.
    #[arg(long)]
    timings: bool,
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| e.to_string())?;
    match v[..] {
        [cx, cy, w, h] => Ok(Window::new(cx, cy, w, h)),
        _ => Err("expected cx,cy,width,height".into()),
    }
}

fn parse_resolution(s: &str) -> std::result::Result<Resolution, String> {
    let (w, h) = s.split_once(['x', ',']).ok_or("expected WxH")?;
    Ok(Resolution::new(
        w.trim().parse().map_err(|e| format!("{e}"))?,
        h.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

/// A point given as a constant expression, or `inf`.
pub fn parse_point(s: &str) -> Result<SpherePoint> {
    if matches!(s.trim(), "inf" | "∞") {
        return Ok(SpherePoint::Infinity);
    }
    let c = parse_rational_map(s)?;
    if c.degree() != 0 {
        return Err(Error::InvalidSpec(format!("{s:?} is not a constant")));
    }
    let value = c.num().coeff(0).to_complex() / c.den().coeff(0).to_complex();
    Ok(SpherePoint::Finite(value))
}

fn status_of(e: &Error) -> u8 {
    match e {
        Error::RootSolver { .. } | Error::PreimageResidual { .. } | Error::LiftVerification(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.execute() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(status_of(&e))
        }
    }
}

fn map(s: &str) -> Result<RationalMap> {
    parse_rational_map(s)
}

#[derive(Serialize)]
struct JuliaReport {
    command: &'static str,
    seed: u64,
    workers: usize,
    generators: Vec<String>,
    z0: String,
    points: usize,
    overflow: u64,
    occupied_pixels: usize,
    repelling_points: Option<usize>,
    artifacts: Vec<String>,
    duration_ms: Option<u64>,
}

#[derive(Serialize)]
struct EsetReport {
    command: &'static str,
    seed: u64,
    workers: usize,
    generators: Vec<String>,
    seed_from: usize,
    rounds: usize,
    converged: bool,
    history: Vec<usize>,
    occupied_pixels: usize,
    outside_cells: usize,
    artifacts: Vec<String>,
    duration_ms: Option<u64>,
}

impl Cli {
    fn workers(&self) -> usize {
        self.workers.unwrap_or(1) as usize
    }

    fn out_dir(&self, fallback: &Path) -> PathBuf {
        self.out.clone().unwrap_or_else(|| fallback.to_path_buf())
    }

    fn scene(&self, args: &SceneArgs) -> Result<(SceneConfig, SemigroupSpec, SpherePoint)> {
        let mut config = match &args.config {
            Some(path) => SceneConfig::load(path)?,
            None => SceneConfig::new(Vec::new()),
        };
        if !args.generators.is_empty() {
            config.generators = args.generators.clone();
        }
        if config.generators.is_empty() {
            return Err(Error::InvalidSpec("give generators with --gen or --config".into()));
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(n) = args.orbit_length {
            config.orbit_length = n;
        }
        if let Some(n) = args.burn_in {
            config.burn_in = n;
        }
        if let Some(n) = args.word_length {
            config.word_length_max = n;
        }
        if let Some(w) = args.window {
            config.window = w;
        }
        if let Some(r) = args.resolution {
            config.resolution = r;
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        let spec = config.to_spec(self.workers())?;
        let z0 = match &args.z0 {
            Some(s) => parse_point(s)?,
            None => SpherePoint::new(DEFAULT_Z0.0, DEFAULT_Z0.1),
        };
        Ok((config, spec, z0))
    }

    fn execute(&self) -> Result<bool> {
        match &self.command {
            Command::Lift { map: f, against } => {
                let f = map(f)?;
                let up = lift(&f)?;
                println!("{up}");
                println!("verified: {}", verify_semiconjugacy(&f, &up, &phi()));
                match against {
                    Some(claim) => {
                        let same = up.equals(&map(claim)?);
                        println!("matches claim: {same}");
                        Ok(same)
                    }
                    None => Ok(true),
                }
            }
            Command::Verify { lower, upper, link } => {
                let link = match link {
                    Some(k) => map(k)?,
                    None => phi(),
                };
                let ok = verify_semiconjugacy(&map(lower)?, &map(upper)?, &link);
                println!("verified: {ok}");
                Ok(ok)
            }
            Command::Parity { map: f } => {
                let f = map(f)?;
                let p = f.parity();
                println!("{p}");
                if p == Parity::Even {
                    println!("f(z) = h(z^2) with h(z) = {}", f.even_decompose()?);
                }
                Ok(true)
            }
            Command::Conjugate { map: f, by } => {
                let m = MoebiusMap::from_map(&map(by)?)?;
                println!("{}", try_conjugate(&map(f)?, &m)?);
                Ok(true)
            }
            Command::Commute { f, g } => {
                match find_commutation_moebius(&map(f)?, &map(g)?) {
                    Some(m) => println!("{}", m.to_map()),
                    None => println!("absent"),
                }
                Ok(true)
            }
            Command::Julia { scene, repelling } => self.julia(scene, *repelling),
            Command::Eset { scene, seed_from, rounds } => self.eset(scene, *seed_from, *rounds),
            Command::Examples { which, orbit_length, resolution, timings } => {
                let mut opts = ExperimentOptions {
                    workers: self.workers(),
                    out_dir: Some(self.out_dir(Path::new("out"))),
                    timings: *timings,
                    ..Default::default()
                };
                if let Some(seed) = self.seed {
                    opts.seed = seed;
                }
                if let Some(n) = orbit_length {
                    opts.orbit_length = *n;
                }
                if let Some(n) = resolution {
                    opts.resolution = *n;
                }
                let selected: Vec<u8> = match which {
                    Which::One => vec![1],
                    Which::Two => vec![2],
                    Which::Three => vec![3],
                    Which::All => vec![1, 2, 3],
                };
                let mut all_pass = true;
                for k in selected {
                    let report = experiments::run(k, &opts)?;
                    print_report(&report);
                    if !report.pass {
                        eprintln!("{} failed: {}", report.experiment, report.failing().join("; "));
                        all_pass = false;
                    }
                }
                Ok(all_pass)
            }
        }
    }

    fn julia(&self, args: &SceneArgs, with_repelling: bool) -> Result<bool> {
        let started = Instant::now();
        let (config, spec, z0) = self.scene(args)?;
        let dir = config.output_dir.clone();
        std::fs::create_dir_all(&dir)?;
        let cloud = random_backward_orbit(&spec, z0)?;
        let grid = rasterize(&cloud, spec.window, spec.resolution);
        let mut artifacts = Vec::new();
        let csv = dir.join("cloud.csv");
        output::write_cloud_csv(&cloud, &csv)?;
        artifacts.push(csv);
        let pgm = dir.join("julia.pgm");
        output::write_pgm(&grid, &pgm)?;
        artifacts.push(pgm);
        let repelling_points = if with_repelling {
            let rep = repelling_fixed_points(&spec)?;
            let path = dir.join("repelling.csv");
            output::write_cloud_csv(&rep, &path)?;
            artifacts.push(path);
            Some(rep.len())
        } else {
            None
        };
        let report_path = dir.join("report.json");
        artifacts.push(report_path.clone());
        let report = JuliaReport {
            command: "julia",
            seed: spec.seed,
            workers: spec.workers,
            generators: spec.generators.iter().map(ToString::to_string).collect(),
            z0: z0.to_string(),
            points: cloud.len(),
            overflow: grid.overflow,
            occupied_pixels: grid.occupied(),
            repelling_points,
            artifacts: artifacts.iter().map(|p| p.display().to_string()).collect(),
            duration_ms: args.timings.then(|| started.elapsed().as_millis() as u64),
        };
        output::write_report(&report, &report_path)?;
        println!("points: {}", report.points);
        println!("occupied pixels: {}", report.occupied_pixels);
        println!("overflow: {}", report.overflow);
        if let Some(n) = repelling_points {
            println!("repelling points: {n}");
        }
        println!("report: {}", report_path.display());
        Ok(true)
    }

    fn eset(&self, args: &SceneArgs, seed_from: usize, rounds: usize) -> Result<bool> {
        let started = Instant::now();
        let (config, spec, z0) = self.scene(args)?;
        let Some(generator) = spec.generators.get(seed_from) else {
            return Err(Error::InvalidSpec(format!(
                "--seed-from {seed_from} but there are only {} generators",
                spec.generators.len()
            )));
        };
        let single = SemigroupSpec { generators: vec![generator.clone()], ..spec.clone() };
        let seed_cloud = random_backward_orbit(&single, z0)?;
        let sat = e_set_saturation(&spec, &seed_cloud, rounds)?;
        let dir = config.output_dir.clone();
        std::fs::create_dir_all(&dir)?;
        let pgm = dir.join("eset.pgm");
        output::write_pgm(&sat.grid, &pgm)?;
        let report_path = dir.join("report.json");
        let report = EsetReport {
            command: "eset",
            seed: spec.seed,
            workers: spec.workers,
            generators: spec.generators.iter().map(ToString::to_string).collect(),
            seed_from,
            rounds: sat.rounds,
            converged: sat.converged,
            history: sat.history.clone(),
            occupied_pixels: sat.grid.occupied(),
            outside_cells: sat.outside_cells,
            artifacts: vec![pgm.display().to_string(), report_path.display().to_string()],
            duration_ms: args.timings.then(|| started.elapsed().as_millis() as u64),
        };
        output::write_report(&report, &report_path)?;
        println!("rounds: {}", report.rounds);
        println!("converged: {}", report.converged);
        println!("occupied pixels: {}", report.occupied_pixels);
        println!("report: {}", report_path.display());
        Ok(true)
    }
}

fn print_report(r: &ExperimentReport) {
    let passed = r.checks.iter().filter(|c| c.pass).count();
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    println!("{}: {verdict} ({passed}/{} checks)", r.experiment, r.checks.len());
    for c in &r.checks {
        let mark = if c.pass { "pass" } else { "FAIL" };
        let bound = match (c.relation, c.tolerance) {
            (Some(rel), Some(t)) => format!(" ({} {t})", serde_json::to_value(rel).unwrap_or_default().as_str().unwrap_or("")),
            _ => String::new(),
        };
        let value = match &c.value {
            serde_json::Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        println!("  [{mark}] {}: {value}{bound}", c.name);
        if let Some(d) = &c.detail {
            println!("         {d}");
        }
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}
