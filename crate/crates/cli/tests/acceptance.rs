//! Acceptance run: one PASS or FAIL line per criterion.
//!
//! `cargo test --test acceptance` runs all ten; numeric arguments select a subset, e.g.
//! `cargo test --test acceptance -- 2 9`.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use cliquesep::geodesic::{geodisk_separator, intersection_components, GeodesicPolygon};
use cliquesep::geom::{orient, Point};
use cliquesep::gen::{disks_to_rings, random_disks, random_geodisks, random_simple_polygon, random_vis_instance, voronoi_map};
use cliquesep::io::{separate, Instance, SepOptions};
use cliquesep::map_sep::{audit_gadget, MapInstance};
use cliquesep::solvers::{brute_coloring, brute_mif, brute_mis, solve_mif, solve_mis, solve_qcoloring};
use cliquesep::verify::{brute_graph, verify};
use cliquesep::vis::{centerpoint_violation_exhaustive, gen_comb_lower_bound, vis_separator, VisInstance};
use cliquesep_cli::bench::{bench, BenchClass, BenchOptions};
use cliquesep_cli::solve::{check_certificate, oracle_for, Problem};

/// Base sizes for the solver equivalence run, small enough that the separator recursion is
/// exercised on every instance size.
const MIS_BASE: usize = 6;
const MIF_BASE: usize = 5;
const COLORING_BASE: usize = 6;

/// Bound on `log2(time_ms) / sqrt(n)` for MIS on map graphs.
const MIS_SCALING_CONSTANT: f64 = 1.5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn pseudo(n: usize, sides: usize, seed: u64) -> Instance {
    Instance::PseudoDisk(disks_to_rings(&random_disks(n, 3.0, seed), sides))
}

fn geodesic(vertices: usize, disks: usize, lo: i64, hi: i64, seed: u64) -> Instance {
    let polygon = GeodesicPolygon::new(random_simple_polygon(vertices, seed)).unwrap();
    let disks = random_geodisks(&polygon, disks, lo, hi, seed);
    Instance::Geodesic { polygon, disks }
}

fn map(n: usize, seed: u64) -> Instance {
    Instance::Map(MapInstance::new(voronoi_map(n, seed)).unwrap())
}

fn separate_and_verify(inst: &Instance) -> Result<(), String> {
    let (s, _) = separate(inst, &SepOptions::default()).map_err(|e| e.to_string())?;
    let r = verify(inst, &s).map_err(|e| e.to_string())?;
    match r.violations.first() {
        None => Ok(()),
        Some(v) => Err(v.to_string()),
    }
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut max_n = 0;
    for i in 0..200u64 {
        let k = i as usize;
        let cases = [
            ("map", map(10 + k * 37 % 491, i)),
            ("pseudodisk", pseudo(10 + k * 13 % 191, 16, i)),
            ("geodesic", geodesic(12 + k % 29, 10 + k * 7 % 111, 1, 4, i)),
            ("visibility", Instance::Visibility(random_vis_instance(10 + k * 29 % 491, k % 3, i))),
        ];
        for (class, inst) in cases {
            count += 1;
            max_n = max_n.max(inst.n());
            if let Err(e) = separate_and_verify(&inst) {
                failures.push(format!("{} seed {}: {}", class, i, e));
            }
        }
    }
    outcome(failures.is_empty(), format!("{} instances (200 per class, n <= {}), {} failing {:?}", count, max_n, failures.len(), failures.iter().take(3).collect::<Vec<_>>()))
}

fn criterion_2() -> Outcome {
    let sizes = [64, 128, 256, 512, 1024, 2048, 4096];
    let r = bench(BenchClass::Map, &sizes, &[0, 1, 2, 3, 4], &BenchOptions { verify: true, timing: false, threads: None }).unwrap();
    let w4096 = r.sizes.last().unwrap().max_weight;
    let valid = r.records.iter().all(|x| x.verified == Some(true));
    let pass = r.slope <= 0.65 && w4096 <= 10.0 * 64.0 && valid;
    outcome(pass, format!("slope {:.3} (<= 0.65), max weight at n=4096 {:.1} (<= 640), all verified {}", r.slope, w4096, valid))
}

fn criterion_3() -> Outcome {
    let sizes = [32, 64, 128, 256, 512, 1024];
    let r = bench(BenchClass::PseudoDisk, &sizes, &[0, 1, 2], &BenchOptions { verify: true, timing: false, threads: None }).unwrap();
    let valid = r.records.iter().all(|x| x.verified == Some(true));
    let ply_bad: Vec<(usize, u64, usize)> = r
        .records
        .iter()
        .filter(|x| x.residual_ply.unwrap() > (x.n as f64).cbrt().ceil() as usize)
        .map(|x| (x.n, x.seed, x.residual_ply.unwrap()))
        .collect();
    let worst = r.records.iter().max_by_key(|x| (x.residual_ply.unwrap(), x.n)).unwrap();
    let pass = r.slope <= 0.85 && ply_bad.is_empty() && valid;
    outcome(
        pass,
        format!(
            "slope {:.3} (<= 0.85), {} of {} runs with ply after peeling above ceil(n^(1/3)), largest residual ply {} (n={}, bound {}), all verified {}",
            r.slope,
            ply_bad.len(),
            r.records.len(),
            worst.residual_ply.unwrap(),
            worst.n,
            (worst.n as f64).cbrt().ceil(),
            valid
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut sep_fail = Vec::new();
    let mut disconnected = 0;
    let mut pairs_checked = 0;
    let mut path_mismatch = 0;
    let mut paths = 0;
    for i in 0..50u64 {
        let vertices = 20 + (i as usize) % 21;
        let Instance::Geodesic { polygon, disks } = geodesic(vertices, 20 + (i as usize * 13) % 61, 2, 6, 100 + i) else { unreachable!() };
        let inst = Instance::Geodesic { polygon: polygon.clone(), disks: disks.clone() };
        let res = geodisk_separator(&disks, &polygon).unwrap();
        let report = verify(&inst, &res.separator).unwrap();
        if !report.ok() {
            sep_fail.push((i, report.violations[0].to_string()));
        }
        let g = brute_graph(&inst).unwrap();
        for (u, v) in g.edges() {
            pairs_checked += 1;
            if !matches!(intersection_components(&res.regions[u].boundary_approx, &res.regions[v].boundary_approx), Ok(1)) {
                disconnected += 1;
            }
        }
        let pts: Vec<Point> = random_geodisks(&polygon, 40, 1, 1, 500 + i).into_iter().map(|d| d.0).collect();
        for k in 0..20 {
            let (p, q) = (&pts[2 * k], &pts[2 * k + 1]);
            let a = polygon.path(p, q).unwrap();
            let b = polygon.path_dijkstra(p, q).unwrap();
            paths += 1;
            if a.length_fixed() != b.length_fixed() {
                path_mismatch += 1;
            }
        }
    }
    let pass = sep_fail.is_empty() && disconnected == 0 && path_mismatch == 0 && paths == 1000;
    outcome(
        pass,
        format!(
            "50 instances, {} separator failures, funnel vs Dijkstra mismatches {}/{}, disconnected approximations {}/{} intersecting pairs",
            sep_fail.len(),
            path_mismatch,
            paths,
            disconnected,
            pairs_checked
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut fails = 0;
    let mut worst_outside = 0;
    for i in 0..100u64 {
        let v = random_vis_instance(20 + (i as usize * 17) % 381, (i % 4) as usize, 700 + i);
        let res = vis_separator(&v).unwrap();
        if let Some(f) = &res.family {
            worst_outside = worst_outside.max(f.outside_line_count(&v.points));
        }
        let inst = Instance::Visibility(v);
        if !verify(&inst, &res.separator).unwrap().ok() {
            fails += 1;
        }
    }
    pass &= fails == 0 && worst_outside <= 2;
    notes.push(format!("(a) 100 instances, {} failing; (b) max lines within 1/2 of an outside point {} (<= 2)", fails, worst_outside));
    let mut worst_ratio: f64 = 0.0;
    for (k, n) in [100usize, 256, 512, 1024, 2048, 4096].into_iter().enumerate() {
        let v = cliquesep::gen::uniform_square_instance(n, k as u64);
        let res = vis_separator(&v).unwrap();
        let sum = res.family.as_ref().map_or(0.0, |f| f.total_weight());
        worst_ratio = worst_ratio.max(sum / n as f64);
    }
    pass &= worst_ratio <= 40.0;
    notes.push(format!("(c) max sum of line weights / n {:.2} (<= 40)", worst_ratio));
    let mut comb_bad = Vec::new();
    let mut comb_w = Vec::new();
    for n in [8usize, 16, 32, 64, 128] {
        let v = gen_comb_lower_bound(n, n).unwrap();
        let res = vis_separator(&v).unwrap();
        let w = res.separator.weight;
        comb_w.push(format!("{}:{:.1}", n, w));
        let ok = verify(&Instance::Visibility(v), &res.separator).unwrap().ok();
        if !(w >= n as f64 / 2.0 && w <= 4.0 * n as f64 && ok) {
            comb_bad.push(n);
        }
    }
    pass &= comb_bad.is_empty();
    notes.push(format!("(d) comb r=n weights {} within [n/2, 4n], failing {:?}", comb_w.join(" "), comb_bad));
    outcome(pass, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let bad: Vec<String> = (2..=256).filter_map(|d| audit_gadget(d).err().map(|e| format!("{}: {}", d, e))).collect();
    outcome(bad.is_empty(), format!("degrees 2..=256, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn side_counts(c: &Point, g: &Point, pts: &[&Point]) -> (usize, usize) {
    let left = pts.iter().filter(|p| orient(c, g, p) > 0).count();
    let right = pts.iter().filter(|p| orient(c, g, p) < 0).count();
    (left, right)
}

fn criterion_7() -> Outcome {
    let mut unbalanced = 0;
    let mut lines = 0;
    let mut exact_checked = 0;
    let mut exact_bad = 0;
    let mut instances = 0;
    for i in 0..100u64 {
        let n = if i % 4 == 0 { 10 + (i as usize) % 51 } else { 20 + (i as usize * 31) % 281 };
        let v: VisInstance = random_vis_instance(n, 0, 900 + i);
        let res = vis_separator(&v).unwrap();
        let (Some(fam), Some(center)) = (&res.family, &res.center) else { continue };
        instances += 1;
        let q2: Vec<&Point> = res.reflex.q2.iter().map(|&k| &v.points[k]).collect();
        let m = q2.len();
        for l in &fam.lines {
            lines += 1;
            let (a, b) = side_counts(&fam.grid.c, &l.g, &q2);
            if 3 * a > 2 * m || 3 * b > 2 * m {
                unbalanced += 1;
            }
        }
        if n <= 60 {
            exact_checked += 1;
            let owned: Vec<Point> = q2.iter().map(|p| (*p).clone()).collect();
            if !center.exact || centerpoint_violation_exhaustive(&center.point, &owned).is_some() {
                exact_bad += 1;
            }
        }
    }
    let pass = unbalanced == 0 && exact_bad == 0 && instances >= 90;
    outcome(
        pass,
        format!(
            "{} point sets with a line family, {} of {} lines leave more than 2/3 on a side; exact centerpoints checked against all pair directions: {} bad of {}",
            instances, unbalanced, lines, exact_bad, exact_checked
        ),
    )
}

fn small_instance(class: usize, n: usize, seed: u64) -> Instance {
    match class {
        0 => map(n, seed),
        1 => pseudo(n, 16, seed),
        2 => geodesic(16, n, 6, 18, seed),
        _ => Instance::Visibility(random_vis_instance(n, (seed % 2) as usize, seed)),
    }
}

fn criterion_8() -> Outcome {
    let names = ["map", "pseudodisk", "geodesic", "visibility"];
    let mut wrong = Vec::new();
    let mut runs = 0;
    let mut recursive = 0;
    let start = Instant::now();
    for (c, name) in names.iter().enumerate() {
        for i in 0..100u64 {
            let seed = 1000 * c as u64 + i;
            let k = i as usize;
            let inst = small_instance(c, 8 + k % 13, seed);
            let oracle = oracle_for(&inst).unwrap();
            let g = brute_graph(&inst).unwrap();
            let s = solve_mis(oracle.graph(), oracle.as_ref(), MIS_BASE).unwrap();
            let cert = serde_json::json!(s.nodes);
            recursive += usize::from(s.stats.oracle_calls > 0);
            if s.nodes.len() != brute_mis(&g).unwrap().len() || !check_certificate(&g, Problem::Mis, &cert) {
                wrong.push(format!("{} mis seed {}", name, seed));
            }

            let inst = small_instance(c, 6 + k % 9, seed);
            let oracle = oracle_for(&inst).unwrap();
            let g = brute_graph(&inst).unwrap();
            let s = solve_mif(oracle.graph(), oracle.as_ref(), MIF_BASE).unwrap();
            let fvs: Vec<usize> = (0..g.n()).filter(|v| s.nodes.binary_search(v).is_err()).collect();
            recursive += usize::from(s.stats.oracle_calls > 0);
            if s.nodes.len() != brute_mif(&g).unwrap().len() || !check_certificate(&g, Problem::Fvs, &serde_json::json!(fvs)) {
                wrong.push(format!("{} mif seed {}", name, seed));
            }

            let inst = small_instance(c, 8 + k % 11, seed);
            let oracle = oracle_for(&inst).unwrap();
            let g = brute_graph(&inst).unwrap();
            let q = 2 + k % 3;
            let s = solve_qcoloring(oracle.graph(), oracle.as_ref(), q, COLORING_BASE).unwrap();
            recursive += usize::from(s.stats.oracle_calls > 0);
            let cert = serde_json::json!(s.coloring);
            if s.coloring.is_some() != brute_coloring(&g, q).unwrap().is_some() || !check_certificate(&g, Problem::Coloring(q), &cert) {
                wrong.push(format!("{} coloring q={} seed {}", name, q, seed));
            }
            runs += 3;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = wrong.is_empty() && secs < 1800.0;
    outcome(
        pass,
        format!(
            "{} runs (base sizes {}/{}/{}), {} with separator recursion, {} disagreements {:?}, {:.0} s (< 1800)",
            runs,
            MIS_BASE,
            MIF_BASE,
            COLORING_BASE,
            recursive,
            wrong.len(),
            wrong.iter().take(3).collect::<Vec<_>>(),
            secs
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut ratios = Vec::new();
    for n in [40usize, 80, 160, 320] {
        let inst = map(n, 0);
        let oracle = oracle_for(&inst).unwrap();
        let start = Instant::now();
        let s = solve_mis(oracle.graph(), oracle.as_ref(), Problem::Mis.default_base_n()).unwrap();
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        assert!(oracle.graph().is_independent(&s.nodes));
        ratios.push((n, ms, ms.max(1.0).log2() / (n as f64).sqrt()));
    }
    let worst = ratios.iter().map(|r| r.2).fold(0.0, f64::max);
    let text: Vec<String> = ratios.iter().map(|(n, ms, r)| format!("n={} {:.0} ms ratio {:.2}", n, ms, r)).collect();
    outcome(worst <= MIS_SCALING_CONSTANT, format!("{}; max log2(ms)/sqrt(n) {:.2} (<= {})", text.join(", "), worst, MIS_SCALING_CONSTANT))
}

fn run_pipeline(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let bin = env!("CARGO_BIN_EXE_cliquesep");
    std::fs::create_dir_all(dir).unwrap();
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).current_dir(dir).env_remove("CLIQUESEP_THREADS").output().unwrap();
        assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    };
    let gens: [(&str, &[&str]); 5] = [
        ("map", &["gen", "map", "--voronoi", "120"]),
        ("pseudodisk", &["gen", "pseudodisk", "--disks", "60"]),
        ("geodesic", &["gen", "geodesic", "--disks", "40"]),
        ("visibility", &["gen", "visibility", "--points", "150", "--holes", "2"]),
        ("comb", &["gen", "visibility", "--comb", "8", "64"]),
    ];
    for (name, args) in gens {
        let inst = format!("{}.json", name);
        let sep = format!("{}.sep.json", name);
        let mut a = args.to_vec();
        a.extend(["--seed", "11", "--out", &inst]);
        run(&a);
        run(&["sep", &inst, "--out", &sep]);
        run(&["verify", &inst, &sep, "--out", &format!("{}.verify.json", name)]);
    }
    let small: [(&str, &[&str]); 2] = [("smallmap", &["gen", "map", "--voronoi", "18"]), ("smallvis", &["gen", "visibility", "--points", "16"])];
    for (name, args) in small {
        let inst = format!("{}.json", name);
        let mut a = args.to_vec();
        a.extend(["--seed", "5", "--out", &inst]);
        run(&a);
        for (p, extra) in [("mis", vec![]), ("fvs", vec![]), ("coloring", vec!["--q", "3"])] {
            let mut a = vec!["solve", inst.as_str(), "--problem", p, "--base-n", "5", "--no-timing"];
            a.extend(extra);
            let out = format!("{}.{}.json", name, p);
            a.extend(["--out", &out]);
            run(&a);
        }
    }
    run(&["bench", "map", "--sizes", "16,32,48,64,96", "--seeds", "2", "--no-timing", "--threads", "2", "--out", "bench.json", "--csv", "bench.csv"]);
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_10() -> Outcome {
    let base = std::env::temp_dir().join(format!("cliquesep-acceptance-{}", std::process::id()));
    let first = run_pipeline(&base.join("a"));
    let second = run_pipeline(&base.join("b"));
    let _ = std::fs::remove_dir_all(&base);
    let differing: Vec<&String> = first.iter().zip(&second).filter(|(a, b)| a != b).map(|(a, _)| &a.0).collect();
    let pass = first.len() == second.len() && differing.is_empty() && first.len() >= 20;
    outcome(pass, format!("{} output files from gen, sep, verify, solve and bench; {} differ {:?}", first.len(), differing.len(), differing))
}

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(usize, &str, fn() -> Outcome); 10] = [
        (1, "separator validity", criterion_1),
        (2, "map weight scaling", criterion_2),
        (3, "pseudo-disk weight scaling", criterion_3),
        (4, "geodesic-disk separator", criterion_4),
        (5, "visibility separator", criterion_5),
        (6, "gadget correctness", criterion_6),
        (7, "centerpoint", criterion_7),
        (8, "solver oracle equivalence", criterion_8),
        (9, "solver scaling", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, name, f) in criteria {
        if !selected.is_empty() && !selected.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        failed += usize::from(!o.pass);
        println!("criterion {} ({}): {} [{:.1} s] {}", k, name, if o.pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64(), o.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
