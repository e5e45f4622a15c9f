use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unital_iso::arc::{find_arc, is_arc, is_complete_arc, max_arc, CollinearityIndex, SearchMode};
use unital_iso::bounds::{
    audit_lowerbound_machinery, construct_extremal_set, floor_c_g, floor_c_sqrt, theorem1_bounds, theorem2_value,
    verify_certificate, AuditMode, AuditOptions,
};
use unital_iso::design::{admissible_bm_pairs, construct_bm, construct_hermitian, construct_order2_unital, Design};
use unital_iso::field::FieldCtx;
use unital_iso::iso::{
    brute_force_iso, build_graph, check_theorem3, heuristic_iso, iso_ratio, BruteOptions, Flavor, HeuristicOptions,
};
use unital_iso::rational::ratio;
use unital_iso::Rational;

const NODES: u64 = 1 << 32;

/// Runs one criterion and prints a single PASS/FAIL line; returns whether it passed.
fn criterion(n: u32, title: &str, limit: Duration, body: impl FnOnce() -> Result<String, String>) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|detail| {
        if elapsed <= limit {
            Ok(detail)
        } else {
            Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
        }
    });
    match &outcome {
        Ok(detail) => println!("criterion {n:>2} PASS [{elapsed:.2?}] {title}: {detail}"),
        Err(why) => println!("criterion {n:>2} FAIL [{elapsed:.2?}] {title}: {why}"),
    }
    outcome.is_ok()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `2(n³+1−f) / (n²(n²+1))`, evaluated independently of the library.
fn pinched_value(n: i64, f: i64) -> Rational {
    ratio(2 * (n * n * n + 1 - f), n * n * (n * n + 1))
}

fn params_of(d: &Design) -> (usize, usize, usize) {
    let p = d.params();
    (p.v, p.k, p.lambda)
}

fn bm_with_subfield_beta(q: u64) -> Design {
    let f = FieldCtx::quadratic(q).unwrap();
    let (a, b) = admissible_bm_pairs(q)
        .unwrap()
        .into_iter()
        .find(|&(_, b)| f.in_subfield(b).unwrap())
        .expect("pair with beta in the subfield");
    construct_bm(q, a, b).unwrap()
}

fn certify(d: &Design, q: u64, arc_size: usize) -> Result<String, String> {
    let arc = find_arc(d, arc_size, SearchMode::Exact, 0, NODES).map_err(|e| e.to_string())?;
    check(arc.len() == arc_size && is_arc(d, &arc).unwrap(), || format!("bad arc {arc:?}"))?;
    let fc = floor_c_sqrt(q).unwrap() as usize;
    let cert = construct_extremal_set(d, &arc[..arc_size.min(fc)]).map_err(|e| e.to_string())?;
    verify_certificate(&cert, d).map_err(|e| e.to_string())?;
    let g = build_graph(d, Flavor::Incidence).unwrap();
    let s = g.subset(&cert.witness.points, &cert.witness.blocks).unwrap();
    let measured = iso_ratio(&g, &s).unwrap();
    let expected = pinched_value(q as i64, fc as i64);
    let half = (q * q * (q * q + 1) / 2) as usize;
    check(s.len() == half, || format!("|S| = {}, expected {half}", s.len()))?;
    check(measured == expected, || format!("certified {measured}, expected {expected}"))?;
    Ok(format!(
        "{arc_size}-arc {arc:?}; |S| = {}, |N(S)| = {}, value {measured}",
        cert.checks.subset_size, cert.checks.boundary_size
    ))
}

fn criterion_01_order2_incidence_pinch() -> bool {
    criterion(1, "order-2 brute force equals the pinched interval", Duration::from_secs(10), || {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        pool.install(|| {
            let d = construct_order2_unital();
            check(params_of(&d) == (9, 3, 1), || format!("params {:?}", params_of(&d)))?;
            let g = build_graph(&d, Flavor::Incidence).unwrap();
            let r = brute_force_iso(&g, &BruteOptions::default()).map_err(|e| e.to_string())?;
            let m = max_arc(&d, NODES).unwrap();
            check(m.size == 4 && m.proven_optimal, || format!("max arc {} proven {}", m.size, m.proven_optimal))?;
            let b = theorem1_bounds(2, m.size as u64).unwrap();
            let expected = pinched_value(2, 2);
            check(b.floor_c == 2 && b.pinch, || format!("floor_c {} pinch {}", b.floor_c, b.pinch))?;
            check(b.lower == expected && b.upper == expected, || format!("interval [{}, {}]", b.lower, b.upper))?;
            check(r.ratio == expected, || format!("brute force {} vs {expected}", r.ratio))?;
            Ok(format!("i = {}, m(U) = 4 proven, interval [{}, {}]", r.ratio, b.lower, b.upper))
        })
    })
}

fn criterion_02_order2_nonincidence() -> bool {
    criterion(2, "order-2 non-incidence brute force", Duration::from_secs(30), || {
        let g = build_graph(&construct_order2_unital(), Flavor::NonIncidence).unwrap();
        let r = brute_force_iso(&g, &BruteOptions::default()).map_err(|e| e.to_string())?;
        let expected = ratio(4, 5);
        check(r.ratio == expected && theorem2_value(2).unwrap() == expected, || format!("got {}", r.ratio))?;
        Ok(format!("i = {}", r.ratio))
    })
}

fn criterion_03_hermitian_q3_certificate() -> bool {
    criterion(3, "H(3) certificate", Duration::from_secs(60), || {
        let d = construct_hermitian(3).unwrap();
        check(params_of(&d) == (28, 4, 1), || format!("params {:?}", params_of(&d)))?;
        certify(&d, 3, 6)
    })
}

fn criterion_04_hermitian_q4_certificate() -> bool {
    criterion(4, "H(4) certificate", Duration::from_secs(600), || {
        let d = construct_hermitian(4).unwrap();
        check(params_of(&d) == (65, 5, 1), || format!("params {:?}", params_of(&d)))?;
        check(floor_c_g(4).unwrap() == 11, || "floor c(4) != 11".into())?;
        certify(&d, 4, 11)
    })
}

fn criterion_05_bm_q3() -> bool {
    criterion(5, "BM q=3 scan, complete arc and certificate", Duration::from_secs(600), || {
        let f = FieldCtx::quadratic(3).unwrap();
        let pairs = admissible_bm_pairs(3).unwrap();
        let in_sub = pairs.iter().filter(|(_, b)| f.in_subfield(*b).unwrap()).count();
        check(!pairs.is_empty() && in_sub > 0, || format!("{} pairs, {in_sub} with beta in GF(3)", pairs.len()))?;
        let d = bm_with_subfield_beta(3);
        check(params_of(&d) == (28, 4, 1), || format!("params {:?}", params_of(&d)))?;
        let arc = find_arc(&d, 10, SearchMode::Exact, 0, NODES).map_err(|e| e.to_string())?;
        check(is_complete_arc(&d, &arc).unwrap(), || format!("{arc:?} is not a complete arc"))?;
        let detail = certify(&d, 3, 10)?;
        Ok(format!("{} admissible pairs ({in_sub} with beta in GF(3)); {detail}", pairs.len()))
    })
}

/// Random arc grown point by point in a random order, stopping at a random size.
fn random_arc(index: &CollinearityIndex, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut order: Vec<usize> = (0..index.points()).collect();
    order.shuffle(rng);
    let stop = rng.gen_range(1..=index.points());
    let mut arc: Vec<usize> = Vec::new();
    for p in order {
        if arc.len() == stop {
            break;
        }
        let collinear = arc
            .iter()
            .enumerate()
            .any(|(i, &a)| arc[i + 1..].iter().any(|&b| index.block(index.line(a, b)).contains(p)));
        if !collinear {
            arc.push(p);
        }
    }
    arc.into_iter().map(|p| p as u32).collect()
}

fn criterion_06_neighborhood_bounds() -> bool {
    criterion(6, "neighborhood bounds on random subsets", Duration::from_secs(300), || {
        let designs = [
            ("Fano", Design::fano()),
            ("2-(9,3,1)", construct_order2_unital()),
            ("H(3)", construct_hermitian(3).unwrap()),
            ("BM(3)", bm_with_subfield_beta(3)),
        ];
        let mut summary = Vec::new();
        for (name, d) in &designs {
            let g = build_graph(d, Flavor::Incidence).unwrap();
            let p = d.params();
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let mut random_arcs = 0;
            for _ in 0..100_000 {
                let (px, py) = (rng.gen::<f64>(), rng.gen::<f64>());
                let mut xs = FixedBitSet::with_capacity(p.v);
                let mut ys = FixedBitSet::with_capacity(p.b);
                (0..p.v).for_each(|i| xs.set(i, rng.gen_bool(px)));
                (0..p.b).for_each(|j| ys.set(j, rng.gen_bool(py)));
                let rep = check_theorem3(&g, &xs, &ys, 1..=3).unwrap();
                let v = rep.violations();
                check(v.is_empty(), || format!("{name}: {v:?} for X = {xs:?}"))?;
                random_arcs += usize::from(rep.main1[0].equality_condition);
            }
            // arcs: |N(X)| counted directly against x(2r − (x−1))/2
            let index = CollinearityIndex::new(d).unwrap();
            for _ in 0..10_000 {
                let arc = random_arc(&index, &mut rng);
                let meeting = d.blocks().iter().filter(|b| b.iter().any(|p| arc.contains(p))).count() as i64;
                let x = arc.len() as i64;
                let formula = x * (2 * p.r as i64 - (x - 1)) / 2;
                check(meeting == formula, || format!("{name}: arc {arc:?} has |N(X)| = {meeting} != {formula}"))?;
                let mut xs = FixedBitSet::with_capacity(p.v);
                arc.iter().for_each(|&a| xs.insert(a as usize));
                let rep = check_theorem3(&g, &xs, &FixedBitSet::with_capacity(p.b), 1..=1).unwrap();
                let m1 = &rep.main1[0];
                check(m1.equality_condition && m1.equality_holds, || format!("{name}: arc {arc:?} misses equality"))?;
            }
            summary.push(format!("{name} ok ({random_arcs} random arcs)"));
        }
        Ok(format!("4 x 10^5 random pairs and 4 x 10^4 random arcs, no violations; {}", summary.join(", ")))
    })
}

fn criterion_07_floor_c_agreement() -> bool {
    criterion(7, "floor c(n) by bisection and by integer square root", Duration::from_secs(60), || {
        for n in 2..=1_000_000u64 {
            let (a, b) = (floor_c_g(n).unwrap(), floor_c_sqrt(n).unwrap());
            check(a == b, || format!("n = {n}: {a} vs {b}"))?;
        }
        Ok("agree for 2 <= n <= 10^6".into())
    })
}

fn criterion_08_audit() -> bool {
    criterion(8, "lower-bound machinery audit", Duration::from_secs(600), || {
        let mut points = 0;
        for n in 3..=12 {
            let rep = audit_lowerbound_machinery(n, &AuditOptions::default()).unwrap();
            check(rep.mode == AuditMode::Exhaustive, || format!("n = {n} not exhaustive"))?;
            check(rep.checks.len() == 5, || format!("n = {n}: {} checks", rep.checks.len()))?;
            check(rep.passed(), || format!("n = {n}: {:?}", rep.failures()))?;
            points += rep.checks.iter().map(|c| c.points_checked).sum::<u64>();
        }
        Ok(format!("n = 3..12 exhaustive, 5 checks each, {points} evaluations"))
    })
}

fn criterion_09_heuristic_above_lower_bound() -> bool {
    criterion(9, "heuristic never below the lower bound", Duration::from_secs(600), || {
        let mut detail = Vec::new();
        for q in [3u64, 4] {
            let g = build_graph(&construct_hermitian(q).unwrap(), Flavor::Incidence).unwrap();
            let lower = pinched_value(q as i64, floor_c_sqrt(q).unwrap() as i64);
            check(lower == theorem1_bounds(q, 3).unwrap().lower, || "lower bound mismatch".into())?;
            let mut best: Option<Rational> = None;
            for seed in 0..100 {
                let r = heuristic_iso(&g, &HeuristicOptions::with_budget(64, seed)).unwrap();
                check(r.ratio >= lower, || format!("H({q}) seed {seed}: {} < {lower}", r.ratio))?;
                check(iso_ratio(&g, &r.witness).unwrap() == r.ratio, || format!("H({q}) seed {seed}: witness"))?;
                best = Some(best.map_or(r.ratio.clone(), |b| b.min(r.ratio)));
            }
            detail.push(format!("H({q}) lower {lower}, best {}", best.unwrap()));
        }
        Ok(detail.join("; "))
    })
}

fn run_pipeline(dir: &Path, threads: &str) -> Result<(), String> {
    let run = |args: &[&str]| -> Result<(), String> {
        let mut full = vec!["--threads", threads];
        full.extend_from_slice(args);
        let out = Command::new(env!("CARGO_BIN_EXE_unital-iso"))
            .current_dir(dir)
            .args(&full)
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    };
    run(&["construct", "order2", "-o", "u2.json"])?;
    run(&["iso", "u2.json", "--brute", "-o", "c1.json", "--manifest", "c1.m.json"])?;
    run(&["bounds", "u2.json", "--exact-arc", "--out", "c1", "--manifest", "c1b.m.json"])?;
    run(&["iso", "u2.json", "--flavor", "nonincidence", "--brute", "-o", "c2.json", "--manifest", "c2.m.json"])?;
    run(&["construct", "hermitian", "--q", "3", "-o", "h3.json"])?;
    run(&["bounds", "h3.json", "--exact-arc", "--out", "c3", "--manifest", "c3.m.json"])?;
    run(&["construct", "hermitian", "--q", "4", "-o", "h4.json"])?;
    run(&["bounds", "h4.json", "--exact-arc", "--out", "c4", "--manifest", "c4.m.json"])?;
    run(&["bm-scan", "--q", "3", "-o", "scan.json"])?;
    let scan: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("scan.json")).unwrap()).unwrap();
    let pair = scan["admissible"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["beta_in_subfield"] == true)
        .ok_or("no admissible pair with beta in the subfield")?;
    let (a, b) = (pair["alpha"].to_string(), pair["beta"].to_string());
    run(&["construct", "bm", "--q", "3", "--alpha", &a, "--beta", &b, "-o", "bm.json"])?;
    run(&["bounds", "bm.json", "--exact-arc", "--out", "c5", "--manifest", "c5.m.json"])?;
    Ok(())
}

fn files(dir: &Path) -> Vec<String> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(files(&p));
        } else {
            out.push(p.display().to_string());
        }
    }
    out
}

fn criterion_10_determinism() -> bool {
    criterion(10, "thread-independent certificates and manifests", Duration::from_secs(1200), || {
        let root = tempfile::tempdir().unwrap();
        let (d1, d4) = (root.path().join("t1"), root.path().join("t4"));
        for (d, t) in [(&d1, "1"), (&d4, "4")] {
            std::fs::create_dir(d).unwrap();
            run_pipeline(d, t)?;
        }
        let mut names: Vec<String> =
            files(&d1).iter().map(|p| Path::new(p).strip_prefix(&d1).unwrap().display().to_string()).collect();
        names.sort();
        let mut other: Vec<String> =
            files(&d4).iter().map(|p| Path::new(p).strip_prefix(&d4).unwrap().display().to_string()).collect();
        other.sort();
        check(names == other, || format!("file sets differ: {names:?} vs {other:?}"))?;
        for n in &names {
            let (a, b) = (std::fs::read(d1.join(n)).unwrap(), std::fs::read(d4.join(n)).unwrap());
            check(a == b, || format!("{n} differs between 1 and 4 threads"))?;
        }
        Ok(format!("{} files byte-identical across 1 and 4 threads", names.len()))
    })
}

fn main() -> std::process::ExitCode {
    let results = [
        criterion_01_order2_incidence_pinch(),
        criterion_02_order2_nonincidence(),
        criterion_03_hermitian_q3_certificate(),
        criterion_04_hermitian_q4_certificate(),
        criterion_05_bm_q3(),
        criterion_06_neighborhood_bounds(),
        criterion_07_floor_c_agreement(),
        criterion_08_audit(),
        criterion_09_heuristic_above_lower_bound(),
        criterion_10_determinism(),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
