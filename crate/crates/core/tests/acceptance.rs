//! Acceptance run: one PASS/FAIL line per criterion, with its measured value
//! and wall-clock time against the runtime bound.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semidyn_core::dynamics::{
    hausdorff, pushforward, random_backward_orbit, rasterize, repelling_fixed_points, repelling_points_of,
    spherical_dist, PointCloud, SemigroupSpec, SpherePoint,
};
use semidyn_core::exact::{find_commutation_moebius, phi, ExactPoint, Parity, RationalMap};
use semidyn_core::experiments::{box_excess, distance_to_segment, run, ExperimentOptions, ExperimentReport};
use semidyn_core::expr::{format_map, parse_map, parse_rational_map};
use semidyn_core::lift::{build_from_params, lift, verify_semiconjugacy, HalfPlaneParams, Ratio};
use semidyn_core::output::{pgm_bytes, write_cloud_csv};

type Outcome = Result<(bool, String), String>;

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn map(s: &str) -> RationalMap {
    parse_rational_map(s).expect("built-in expression parses")
}

fn spec(gens: &[&str]) -> SemigroupSpec {
    SemigroupSpec::new(gens.iter().map(|g| map(g)).collect()).expect("valid generators")
}

fn cloud(gens: &[&str], z0: f64) -> Result<PointCloud, String> {
    random_backward_orbit(&spec(gens), SpherePoint::real(z0)).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let f = lift(&map("(2*z^2-1)/z")).map_err(|e| e.to_string())?;
    let g = lift(&map("(z^2-1)/(2*z)")).map_err(|e| e.to_string())?;
    let ok = f == map("(3*z+5*z^2)/(1+3*z+4*z^2)") && g == map("2*z^2-1");
    Ok((ok, format!("lifts {f} and {g}")))
}

fn random_halfplane(rng: &mut ChaCha8Rng) -> RationalMap {
    let ratio = |rng: &mut ChaCha8Rng, lo: i64| (rng.random_range(lo..=7), rng.random_range(1..=5));
    loop {
        let (a, b) = (ratio(rng, 1), ratio(rng, 0));
        let k = rng.random_range(0..=3);
        let mut pairs: Vec<(Ratio, Ratio)> = Vec::new();
        let mut top = 0.0;
        for _ in 0..k {
            let (n, d) = ratio(rng, 1);
            let pole = n as f64 / d as f64;
            if pole > top {
                top = pole;
                pairs.push(((n, d), ratio(rng, 1)));
            }
        }
        if let Ok(f) = HalfPlaneParams::from_ratios(a, b, &pairs).and_then(|p| build_from_params(&p)) {
            return f;
        }
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut max_degree = 0;
    for _ in 0..100 {
        let f = random_halfplane(&mut rng);
        max_degree = max_degree.max(f.degree());
        let up = lift(&f).map_err(|e| format!("{f}: {e}"))?;
        if !verify_semiconjugacy(&f, &up, &phi()) {
            return Ok((false, format!("semi-conjugacy fails for {f}")));
        }
    }
    Ok((max_degree <= 8, format!("100 maps verified, max degree {max_degree}")))
}

fn random_map(rng: &mut ChaCha8Rng) -> RationalMap {
    loop {
        let coeffs = |rng: &mut ChaCha8Rng| -> Vec<i64> {
            let n = rng.random_range(1..=4);
            let c: Vec<i64> = (0..n).map(|_| rng.random_range(-4..=4)).collect();
            match rng.random_range(0..3) {
                // Spread coefficients onto even powers, optionally shifted to odd ones.
                0 => c.iter().flat_map(|&x| [x, 0]).collect(),
                1 => std::iter::once(0).chain(c.iter().flat_map(|&x| [x, 0])).collect(),
                _ => c,
            }
        };
        let (n, d) = (coeffs(rng), coeffs(rng));
        if let Ok(f) = RationalMap::from_ints(&n, &d) {
            if f.degree() >= 1 {
                return f;
            }
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut even, mut odd, mut neither) = (0, 0, 0);
    for _ in 0..200 {
        let f = random_map(&mut rng);
        let p = f.parity();
        match p {
            Parity::Even => even += 1,
            Parity::Odd => odd += 1,
            Parity::Neither => neither += 1,
        }
        let square_even = f.square().parity() == Parity::Even;
        if square_even != matches!(p, Parity::Even | Parity::Odd) {
            return Ok((false, format!("square parity wrong for {f}")));
        }
        if (phi().compose(&f).parity() == Parity::Even) != square_even {
            return Ok((false, format!("phi o f parity wrong for {f}")));
        }
    }
    Ok((true, format!("200 maps ({even} even, {odd} odd, {neither} neither)")))
}

fn criterion_4() -> Outcome {
    let g = map("(2*z^2-4)/z");
    let printed = map("(5*z^2+40*z-29)/(3*z^2+40*z-27)");
    let built = map("(37*z^2-24*z+3)/(35*z^2-24*z+5)");
    let constructed = lift(&g).map_err(|e| e.to_string())?;
    let at_zero = constructed.eval(&ExactPoint::int(0));
    let three_fifths = map("3/5").eval(&ExactPoint::int(0));
    let ok = !verify_semiconjugacy(&g, &printed, &phi())
        && verify_semiconjugacy(&g, &built, &phi())
        && constructed == built
        && at_zero == three_fifths;
    Ok((ok, format!("printed lift rejected, constructed {constructed}, value at 0 is {at_zero}")))
}

fn criterion_5() -> Outcome {
    let cases: [(&[&str], f64, f64); 3] =
        [(&["z^2-2"], 0.0, 2.0), (&["2*z^2-1"], 0.3, 1.0), (&["z^2-2", "4*z^2-2"], 0.0, 2.0)];
    let mut parts = Vec::new();
    let mut ok = true;
    for (gens, z0, r) in cases {
        let started = Instant::now();
        let d = distance_to_segment(&cloud(gens, z0)?, -r, r);
        let secs = started.elapsed().as_secs_f64();
        ok &= d <= 0.02 && secs < 10.0;
        parts.push(format!("{} {d:.4} in {secs:.1}s", gens.join(",")));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_6() -> Outcome {
    let j_f = cloud(&["z^2-2"], 0.0)?;
    let j_g = cloud(&["4*z^2-2"], 0.0)?;
    let excess = box_excess(&j_g, 1.01, 0.01);
    let sep = hausdorff(&j_f, &j_g);
    let commuting = find_commutation_moebius(&map("z^2-2"), &map("4*z^2-2"));
    let ok = excess == 0.0 && sep >= 0.5 && commuting.is_none();
    Ok((ok, format!("band excess {excess}, Hausdorff {sep:.4}, commuting map {commuting:?}")))
}

fn report_checks(report: &ExperimentReport, names: &[&str]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in names {
        let c = report.check(name).ok_or_else(|| format!("missing check {name}"))?;
        ok &= c.pass;
        parts.push(format!("{name} = {}", c.value));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let cases: [(u8, &[&str]); 2] = [
        (1, &["E-saturation of <f,g> covers the real axis"]),
        (
            2,
            &["E-saturation of <f,g> covers the real axis", "J(<f,g>) is bounded", "f^n(2) increases past 1e6"],
        ),
    ];
    for (which, names) in cases {
        let started = Instant::now();
        let report = run(which, &ExperimentOptions::default()).map_err(|e| e.to_string())?;
        let secs = started.elapsed().as_secs_f64();
        let (pass, detail) = report_checks(&report, names)?;
        ok &= pass && secs < 60.0;
        parts.push(format!("example{which} ({secs:.1}s): {detail}"));
    }
    Ok((ok, parts.join(" | ")))
}

fn criterion_8() -> Outcome {
    let down = cloud(&["(2*z^2-1)/z", "(z^2-1)/(2*z)"], 0.37)?;
    let up = cloud(&["(3*z+5*z^2)/(1+3*z+4*z^2)", "2*z^2-1"], 0.37)?;
    let d = hausdorff(&pushforward(&down, &phi()), &up);
    Ok((d <= 0.03, format!("Hausdorff {d:.4}")))
}

fn criterion_9() -> Outcome {
    let semigroups: [&[&str]; 4] = [
        &["(2*z^2-1)/z", "(z^2-1)/(2*z)"],
        &["(3*z+5*z^2)/(1+3*z+4*z^2)", "2*z^2-1"],
        &["(2*z^2-1)/z", "(2*z^2-4)/z"],
        &["z^2-2", "4*z^2-2"],
    ];
    let mut worst: f64 = 0.0;
    for gens in semigroups {
        let s = spec(gens);
        let rep = repelling_fixed_points(&s).map_err(|e| e.to_string())?;
        let c = random_backward_orbit(&s, SpherePoint::new(0.37, 0.19)).map_err(|e| e.to_string())?;
        let probe = semidyn_core::dynamics::directed_hausdorff(&rep.points, &c.points);
        worst = worst.max(probe);
    }
    let hand = |f: &str, expected: &[f64]| -> Result<bool, String> {
        let got = repelling_points_of(&map(f)).map_err(|e| e.to_string())?;
        Ok(got.len() == expected.len()
            && expected.iter().all(|&x| got.iter().any(|(p, _)| spherical_dist(*p, SpherePoint::real(x)) <= 1e-9)))
    };
    let hand_ok = hand("z^2-2", &[2.0, -1.0])? && hand("2*z-1/z", &[1.0, -1.0])?;
    Ok((worst <= 0.02 && hand_ok, format!("max distance {worst:.4}, hand values match: {hand_ok}")))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .map(|it| {
            it.flatten()
                .map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default();
    out.sort();
    out
}

fn criterion_10() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let opts = ExperimentOptions {
        orbit_length: 20_000,
        resolution: 200,
        out_dir: Some(tmp.path().to_path_buf()),
        ..ExperimentOptions::default()
    };
    let mut snapshots = Vec::new();
    for _ in 0..2 {
        run(2, &opts).map_err(|e| e.to_string())?;
        let s = spec(&["z^2-2", "4*z^2-2"]);
        let c = random_backward_orbit(&s, SpherePoint::real(0.0)).map_err(|e| e.to_string())?;
        let csv = tmp.path().join("cloud.csv");
        write_cloud_csv(&c, &csv).map_err(|e| e.to_string())?;
        let pgm = pgm_bytes(&rasterize(&c, s.window, s.resolution));
        snapshots.push((read_dir_bytes(&tmp.path().join("example2")), fs::read(&csv).map_err(|e| e.to_string())?, pgm));
    }
    let files = snapshots[0].0.len();
    let identical = snapshots[0] == snapshots[1] && files >= 3;

    let corpus: Vec<&str> = include_str!("data/parser_corpus.txt").lines().collect();
    let mut round_trips = 0;
    for s in &corpus {
        let Ok(first) = parse_map(s) else { continue };
        let Ok(again) = parse_map(&first.ast.to_string()) else { continue };
        let Ok(lowered) = first.lower() else { continue };
        if first.ast == again.ast && parse_rational_map(&format_map(&lowered)).ok() == Some(lowered) {
            round_trips += 1;
        }
    }
    let ok = identical && round_trips == corpus.len();
    Ok((ok, format!("{files} report files and cloud artifacts identical: {identical}; corpus {round_trips}/{}", corpus.len())))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact lift of the first example", criterion_1, Duration::from_secs(1)),
        ("semi-conjugacy of 100 random half-plane maps", criterion_2, Duration::from_secs(30)),
        ("parity statements on 200 random maps", criterion_3, Duration::from_secs(30)),
        ("printed lift discrepancy detected", criterion_4, Duration::from_secs(1)),
        ("Julia clouds near their segments", criterion_5, Duration::from_secs(30)),
        ("separation of J_f and J_g", criterion_6, Duration::from_secs(10)),
        ("E-set saturation behaviour", criterion_7, Duration::from_secs(120)),
        ("pushforward of the Julia cloud", criterion_8, Duration::from_secs(30)),
        ("repelling fixed points on the clouds", criterion_9, Duration::from_secs(60)),
        ("determinism and parser round trip", criterion_10, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (i, (name, check, bound)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let took = started.elapsed();
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && took < *bound, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {name} [{:.2}s, bound {}s] {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            bound.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
