//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starnav::starshape::polar_samples;
use starnav::*;
use starnav_bench::*;
use starnav_sim::{gen_forest, raycast_scan, ForestParams, LidarModel, Rect, World};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn circle(c: Point2d, r: f64) -> Regiond {
    Regiond::circle(RegionId(0), c, r)
}

fn fit_accuracy() -> Check {
    let clock = Instant::now();
    let lidar = LidarModel::default();

    // circle of radius 3 seen from an off-centre point
    let centre = Point2d::new(0.0, 0.0);
    let radius = 3.0;
    let origin = Point2d::new(0.7, -0.4);
    let ranges: Vec<f64> = (0..lidar.n_beams)
        .map(|k| {
            let d = Point2d::from_angle(lidar.beam_angle(k));
            let o = origin - centre;
            let b = o.dot(d);
            -b + (b * b - o.norm_squared() + radius * radius).sqrt()
        })
        .collect();
    let scan = Scand::from_ranges(origin, &ranges, lidar.max_range).map_err(|e| e.to_string())?;
    let region = fit_region(origin, &scan, &FitConfigd::default()).map_err(|e| e.to_string())?;
    let circle_err = (0..3600)
        .map(|k| {
            let t = -PI + k as f64 * 2.0 * PI / 3600.0;
            (region.boundary_point(t).distance(centre) - radius).abs()
        })
        .fold(0.0, f64::max);
    ensure(circle_err < 0.01, format!("circle max error {circle_err:.4}"))?;

    // 6 m square room, scanned by the simulator from near the centre
    let room = World::empty(Rect::new(0.0, 0.0, 6.0, 6.0));
    let mut worst = 0.0f64;
    let mut margin = f64::INFINITY;
    for p in [Point2d::new(3.0, 3.0), Point2d::new(2.2, 3.5)] {
        let scan = raycast_scan(&room, &Pose2d::new(p, 0.0), &LidarModel { max_range: 10.0, ..lidar }, 0)
            .map_err(|e| e.to_string())?;
        let samples = polar_samples(p, &scan);
        let adaptive = rms_error(&fit_region(p, &scan, &FitConfigd::default()).map_err(|e| e.to_string())?, &samples);
        let uniform = rms_error(&fit_region_uniform(p, &scan, 3, 4).map_err(|e| e.to_string())?, &samples);
        ensure(adaptive < 0.05, format!("square rms {adaptive:.4}"))?;
        ensure(adaptive <= uniform, format!("adaptive {adaptive:.4} > uniform {uniform:.4}"))?;
        worst = worst.max(adaptive);
        margin = margin.min(uniform);
    }
    let secs = clock.elapsed().as_secs_f64();
    ensure(secs < 1.0, format!("took {secs:.2}s"))?;
    Ok(format!("circle max err {circle_err:.2e} m, square rms {worst:.4} m (uniform >= {margin:.4}), {secs:.3}s"))
}

fn fit_latency() -> Check {
    let (world, start, _) = gen_forest(0, &ForestParams::default()).map_err(|e| e.to_string())?;
    let scan = raycast_scan(&world, &Pose2d::new(start, 0.0), &LidarModel::default(), 0).map_err(|e| e.to_string())?;
    let cfg = FitConfigd::default();
    let times: Vec<f64> = (0..100)
        .map(|_| {
            let t = Instant::now();
            let r = fit_region(start, &scan, &cfg);
            let ms = t.elapsed().as_secs_f64() * 1e3;
            std::hint::black_box(r).expect("fit");
            ms
        })
        .collect();
    let m = median(times);
    ensure(m < 50.0, format!("median {m:.3} ms"))?;
    Ok(format!("median {m:.3} ms over 100 fits"))
}

fn control_latency() -> Check {
    let (world, start, _) = gen_forest(1, &ForestParams::default()).map_err(|e| e.to_string())?;
    let lidar = LidarModel::default();
    let offsets = [(0.0, 0.0), (0.3, 0.1), (-0.2, 0.25), (0.15, -0.3), (-0.25, -0.1)];
    let mut regions = Vec::new();
    for (i, (dx, dy)) in offsets.iter().enumerate() {
        let p = start + Point2d::new(*dx, *dy);
        let scan = raycast_scan(&world, &Pose2d::new(p, 0.0), &lidar, i as u64).map_err(|e| e.to_string())?;
        regions.push(fit_region(p, &scan, &FitConfigd::default()).map_err(|e| e.to_string())?);
    }
    let probe = start + Point2d::new(0.05, 0.05);
    let refs: Vec<&Regiond> = regions.iter().collect();
    ensure(refs.iter().all(|r| r.contains(probe, 0.0)), "probe not inside all 5 regions")?;
    let pose = Pose2d::new(probe, 0.3);
    let scan = raycast_scan(&world, &pose, &lidar, 9).map_err(|e| e.to_string())?;
    let cfg = benchmark_controller();
    let goal = Point2d::new(18.0, 18.0);
    let times: Vec<f64> = (0..10_000)
        .map(|_| {
            let t = Instant::now();
            let out = control_step(&refs, &pose, goal, &scan, &cfg);
            let ms = t.elapsed().as_secs_f64() * 1e3;
            std::hint::black_box(out);
            ms
        })
        .collect();
    let m = median(times);
    ensure(m < 5.0, format!("median {m:.4} ms"))?;
    Ok(format!("median {:.1} us over 10000 calls", m * 1e3))
}

fn modulation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let c = Point2d::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let r = rng.random_range(0.5..5.0);
        let region = circle(c, r);
        let theta = rng.random_range(-PI..PI);
        let dist = rng.random_range(0.05..1.0) * r;
        let p = c + Point2d::from_angle(theta) * dist;
        let v = Vector2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let got = modulate_in_region(&region, p, v, 1.0);
        let g = r / dist;
        // radial and tangential components scale independently on a circle
        let n = Point2d::from_angle(theta);
        let expect = n * ((1.0 - 1.0 / g) * v.dot(n)) + n.perp() * ((1.0 + 1.0 / g) * v.dot(n.perp()));
        worst = worst.max((got - expect).norm());
    }
    ensure(worst <= 1e-12, format!("closed form error {worst:.2e}"))?;

    for eps in [1e-2, 1e-3] {
        for k in 0..360 {
            let region = circle(Point2d::zero(), 2.0);
            let theta = -PI + k as f64 * PI / 180.0;
            let n = Point2d::from_angle(theta);
            let p = n * (2.0 / (1.0 + eps));
            let v = Vector2::from_angle(theta * 3.0 + 0.4) * 1.3;
            let mv = modulate_in_region(&region, p, v, 1.0);
            ensure(mv.dot(n).abs() <= 2.0 * eps * v.norm(), format!("tangency eps {eps} theta {theta:.3}"))?;
        }
    }

    for k in 0..360 {
        let region = circle(Point2d::zero(), 5.0);
        let theta = -PI + k as f64 * PI / 180.0;
        let p = Point2d::from_angle(theta) * 0.05;
        let v = Vector2::from_angle(theta * 2.0 - 1.0);
        let mv = modulate_in_region(&region, p, v, 1.0);
        ensure((mv - v).norm() <= 0.02 * v.norm(), "far field deviates by more than 2%")?;
    }
    Ok(format!("closed form err {worst:.1e}, tangency and far field hold"))
}

fn weights_and_blend() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..8);
        let gammas: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..50.0)).collect();
        let sum: f64 = overlap_weights(&gammas).iter().sum();
        worst = worst.max((sum - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("weight sum error {worst:.2e}"))?;
    let a: f64 = blend_weight(1.5, 0.5, 0.5);
    ensure((a - 0.5).abs() < 1e-12, format!("alpha {a}"))?;
    ensure(blend_weight(0.5f64, 0.5, 0.5) == 1.0, "alpha at contact")?;
    ensure(blend_weight(0.3f64, 0.5, 0.5) == 1.0, "alpha at overlap")?;
    ensure(blend_weight(0.6f64, 0.5, 0.5) == 1.0, "alpha saturates near")?;
    ensure(blend_weight(1e6f64, 0.5, 0.5) < 1e-6, "alpha vanishes far")?;
    Ok(format!("weight sum err {worst:.1e}, alpha(0.5, 1.5, 0.5) = {a}"))
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

// Core points joined over the eps-graph; border points take the component with the
// lowest core index.
fn brute_force_clusters(points: &[Point2d], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let close = |i: usize, j: usize| points[i].distance(points[j]) <= eps;
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| close(i, j)).count() >= min_pts).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if core[i] && core[j] && close(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let root: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let min_core = |r: usize| (0..n).filter(|&k| core[k] && root[k] == r).min().unwrap_or(usize::MAX);
    (0..n)
        .map(|i| {
            if core[i] {
                return Some(root[i]);
            }
            (0..n).filter(|&j| core[j] && close(i, j)).map(|j| root[j]).min_by_key(|&r| min_core(r))
        })
        .collect()
}

fn canonical(labels: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            l.map(|c| {
                let next = map.len();
                *map.entry(c).or_insert(next)
            })
        })
        .collect()
}

fn enumerate(rm: &Roadmapd, at: NodeId, to: NodeId, seen: &mut Vec<NodeId>, cost: f64, best: &mut f64) {
    if at == to {
        *best = best.min(cost);
        return;
    }
    for &nb in rm.neighbours(at) {
        if seen.contains(&nb) || rm.node(nb).map_or(true, |n| n.status == NodeStatus::Stuck) {
            continue;
        }
        seen.push(nb);
        let step = rm.node(at).unwrap().position.distance(rm.node(nb).unwrap().position);
        enumerate(rm, nb, to, seen, cost + step, best);
        seen.pop();
    }
}

fn oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for set in 0..200 {
        let n = rng.random_range(0..=50);
        let spread = rng.random_range(0.5..3.0);
        let points: Vec<Point2d> =
            (0..n).map(|_| Point2d::new(rng.random_range(0.0..spread), rng.random_range(0.0..spread))).collect();
        let eps = rng.random_range(0.1..0.6);
        let min_pts = rng.random_range(1..6);
        ensure(
            canonical(&dbscan(&points, eps, min_pts)) == canonical(&brute_force_clusters(&points, eps, min_pts)),
            format!("partition mismatch on set {set}"),
        )?;
    }
    let mut pairs = 0;
    for map in 0..100 {
        let n = rng.random_range(2..=8);
        let root = Point2d::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
        let mut rm = Roadmapd::new(root, circle(root, 0.5)).map_err(|e| e.to_string())?;
        for i in 1..n {
            let id = rm.add_node(Point2d::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)));
            rm.add_edge(NodeId(rng.random_range(0..i) as u32), id).map_err(|e| e.to_string())?;
        }
        for _ in 0..rng.random_range(0..n) {
            let (a, b) = (NodeId(rng.random_range(0..n) as u32), NodeId(rng.random_range(0..n) as u32));
            if a != b {
                rm.add_edge(a, b).map_err(|e| e.to_string())?;
            }
        }
        for to in 0..n {
            let to = NodeId(to as u32);
            let mut best = f64::INFINITY;
            enumerate(&rm, rm.root(), to, &mut vec![rm.root()], 0.0, &mut best);
            let got = rm.shortest_path(rm.root(), to).map_or(f64::INFINITY, |(c, _)| c);
            let same = (got.is_infinite() && best.is_infinite()) || (got - best).abs() < 1e-9;
            ensure(same, format!("roadmap {map}: cost {got} vs oracle {best}"))?;
            pairs += 1;
        }
    }
    Ok(format!("200 clustering sets and {pairs} shortest paths agree"))
}

fn no_timing(mut spec: ScenarioSpec) -> ScenarioSpec {
    spec.timing = false;
    spec
}

fn forest_end_to_end() -> Check {
    let clock = Instant::now();
    let spec = no_timing(ScenarioSpec::forest());
    let seeds: Vec<u64> = (0..30).collect();
    let records = run_records(&spec, &seeds).map_err(|e| e.to_string())?;
    let secs = clock.elapsed().as_secs_f64();
    let s = BatchSummary::from_records(&records);
    let detail = format!("SR {:.1}% ({}/30), {} collisions, {secs:.1}s wall", s.success_rate * 100.0, s.successes, s.collisions);
    ensure(s.success_rate >= 0.9, detail.clone())?;
    for r in records.iter().filter(|r| r.outcome == Outcome::Success) {
        ensure(r.count_events(|k| matches!(k, EventKind::Collision)) == 0, format!("seed {} collided", r.seed))?;
        ensure(r.travel_time < 120.0, format!("seed {} took {:.1}s", r.seed, r.travel_time))?;
    }
    ensure(secs < 300.0, detail.clone())?;
    Ok(detail)
}

fn maze_recovery() -> Check {
    let spec = no_timing(ScenarioSpec::maze("utrap"));
    let seeds: Vec<u64> = (0..12).collect();
    let records = run_records(&spec, &seeds).map_err(|e| e.to_string())?;
    let s = BatchSummary::from_records(&records);
    let trapped: Vec<&RunRecord> = records.iter().filter(|r| r.outcome == Outcome::Success && r.entered_trap).collect();
    let detail = format!("SR {:.1}% ({}/12), {} successes entered the trap", s.success_rate * 100.0, s.successes, trapped.len());
    ensure(s.success_rate >= 0.8, detail.clone())?;
    for r in &trapped {
        ensure(r.has_stuck_then_replan(), format!("seed {} escaped without mark_stuck then replan", r.seed))?;
    }
    Ok(detail)
}

// Smooth random room profile with occasional steps, sampled on 360 beams.
fn fuzzed_scan(rng: &mut ChaCha8Rng) -> Scand {
    let base = rng.random_range(1.0..4.0);
    let harmonics: Vec<(f64, f64, f64)> =
        (0..4).map(|k| (k as f64 + 1.0, rng.random_range(0.0..0.3), rng.random_range(0.0..6.3))).collect();
    let steps: Vec<(f64, f64, f64)> = (0..rng.random_range(0..3))
        .map(|_| {
            let a = rng.random_range(-PI..PI);
            (a, a + rng.random_range(0.2..1.0), rng.random_range(-0.8..1.5))
        })
        .collect();
    let origin = Point2d::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let ranges: Vec<f64> = (0..360)
        .map(|k| {
            let t = -PI + k as f64 * PI / 180.0;
            let mut r = base + harmonics.iter().map(|(f, a, ph)| a * (f * t + ph).sin()).sum::<f64>();
            for (lo, hi, h) in &steps {
                if ccw_distance(*lo, t) < ccw_distance(*lo, *hi) {
                    r += h;
                }
            }
            r.clamp(0.3, 5.0)
        })
        .collect();
    Scand::from_ranges(origin, &ranges, 5.0).expect("valid scan")
}

fn region_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100 {
        let scan = fuzzed_scan(&mut rng);
        let region = fit_region(scan.origin(), &scan, &FitConfigd::default()).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let theta = rng.random_range(-PI..PI);
            let phi = region.eval_radius(theta);
            ensure(phi > 0.0, format!("region {i}: non-positive radius"))?;
            let dir = Point2d::from_angle(theta);
            let l = rng.random_range(0.0..=1.0) * phi;
            ensure(region.contains(region.p_ref + dir * l, -1e-9), format!("region {i}: not starshaped"))?;
            let sigma = rng.random_range(0.2..4.0);
            let (a, b) = (rng.random_range(0.01..3.0), rng.random_range(0.01..3.0));
            let (near, far) = if a < b { (a, b) } else { (b, a) };
            if far - near > 1e-6 {
                let g1 = region.gamma(region.p_ref + dir * near, sigma);
                let g2 = region.gamma(region.p_ref + dir * far, sigma);
                ensure(g1 > g2, format!("region {i}: gamma not decreasing"))?;
            }
        }
    }
    Ok("100 fuzzed regions starshaped with gamma strictly decreasing along rays".into())
}

fn determinism() -> Check {
    let spec = no_timing(ScenarioSpec::maze("utrap"));
    let dir = std::env::temp_dir().join(format!("starnav-acceptance-{}", std::process::id()));
    let mut files = Vec::new();
    for run in 0..2 {
        let record = run_episode(&spec, 3).map_err(|e| e.to_string())?;
        let out = dir.join(run.to_string());
        let paths = export_artifacts(Artifact::Record(&record), &out).map_err(|e| e.to_string())?;
        files.push(paths.iter().map(std::fs::read).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(files[0] == files[1], "exports differ between runs")?;
    Ok(format!("{} artifacts byte-identical across two runs", files[0].len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fit accuracy", fit_accuracy),
        ("fit latency", fit_latency),
        ("control-step latency", control_latency),
        ("modulation closed form", modulation),
        ("weight and blend algebra", weights_and_blend),
        ("oracle equivalence", oracles),
        ("forest end to end", forest_end_to_end),
        ("maze dead-end recovery", maze_recovery),
        ("region invariants", region_invariants),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
