//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
//! criterion fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use invlearn::formats::{instance_json, observations_csv};
use invlearn::service::{router, AppState};
use invlearn::synthetic::{observation_cloud, random_instance, random_observations, rng, synthetic_diet};
use invlearn_core::diet::{build_diet_instance, evaluate_diet, BoundSide, DietConfig};
use invlearn_core::fixtures::{toy_instance, toy_observations, sample_bounds, sample_foods};
use invlearn_core::linalg::{dot, norm2};
use invlearn_core::lp::{min_over_vertices, solve_lp, vertex_enumeration_oracle, Cmp, LpProblem, LpStatus};
use invlearn_core::model::Sense;
use invlearn_core::{
    build_cone, certify, check_learning_point, infer_cost, DistanceSpec, ForwardInstance, FrontierStatus, InverseError,
    InverseLearner, InverseSolution, MilWeights, ObservationSet, SolverConfig, SweepMode,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tower::ServiceExt;

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
    total: usize,
}

impl Suite {
    fn run(&mut self, name: &str, tolerance: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| String::from("panicked"))));
        let secs = start.elapsed().as_secs_f64();
        self.total += 1;
        match res {
            Ok(detail) => println!("PASS  {name:<34} tol {tolerance:<10} {secs:>7.2}s  {detail}"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL  {name:<34} tol {tolerance:<10} {secs:>7.2}s  {why}");
            }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn learner<'a>(inst: &'a ForwardInstance, obs: &'a ObservationSet) -> InverseLearner<'a> {
    InverseLearner::new(inst, obs, DistanceSpec::L1_SUM, SolverConfig::default()).expect("valid learner")
}

/// The seeded instances shared by the random-instance criteria.
fn random_cases() -> Vec<(ForwardInstance, ObservationSet)> {
    let mut r = rng(20_240_601);
    (0..200)
        .map(|_| {
            let n = r.random_range(2..=3);
            let m1 = r.random_range(3..=8);
            let k = r.random_range(1..=10);
            let inst = random_instance(&mut r, n, m1);
            let obs = random_observations(&mut r, n, k);
            (inst, obs)
        })
        .collect()
}

fn single_binding(cases: &[(ForwardInstance, ObservationSet)]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (i, (inst, obs)) in cases.iter().enumerate() {
        let l = learner(inst, obs);
        match (l.algorithm1(), l.solve_il(1)) {
            (Ok((a, _)), Ok(il)) => {
                let d = (a.distance - il.distance).abs();
                worst = worst.max(d);
                ensure(d <= 1e-6, || format!("instance {i}: {} vs {}", a.distance, il.distance))?;
            }
            (Err(a), Err(b)) => ensure(a == b || matches!(b, InverseError::InfeasibleAtP { .. }), || {
                format!("instance {i}: {a} vs {b}")
            })?,
            (a, b) => return Err(format!("instance {i}: algorithm1 {:?} but IL {:?}", a.err(), b.err())),
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("200 instances, max gap {worst:.1e}, {:.2}s", t.as_secs_f64()))
}

/// Smallest distance over the facet `a·x = b` of a 2-D instance: dense grid
/// along the feasible segment plus ternary refinement around the best sample.
fn facet_grid_min(inst: &ForwardInstance, obs: &ObservationSet, j: usize, step: f64) -> Option<f64> {
    let c = inst.relevant(j);
    let (a, b) = (&c.coeffs, c.rhs);
    let nn = a[0] * a[0] + a[1] * a[1];
    let p0 = [a[0] * b / nn, a[1] * b / nn];
    let dir = [-a[1] / nn.sqrt(), a[0] / nn.sqrt()];
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for row in inst.constraints() {
        let n = row.outward_normal();
        let s0 = row.outward_bound() - (n[0] * p0[0] + n[1] * p0[1]);
        let ds = -(n[0] * dir[0] + n[1] * dir[1]);
        if ds.abs() < 1e-12 {
            if s0 < -1e-9 {
                return None;
            }
        } else if ds > 0.0 {
            lo = lo.max(-s0 / ds);
        } else {
            hi = hi.min(-s0 / ds);
        }
    }
    if lo > hi + 1e-9 {
        return None;
    }
    let eval = |t: f64| DistanceSpec::L1_SUM.evaluate(obs, &[p0[0] + t * dir[0], p0[1] + t * dir[1]]);
    let steps = ((hi - lo) / step).ceil().max(1.0) as usize;
    let (mut best_t, mut best) = (lo, eval(lo));
    for i in 0..=steps {
        let t = (lo + i as f64 * step).min(hi);
        let v = eval(t);
        if v < best {
            (best, best_t) = (v, t);
        }
    }
    let (mut x, mut y) = ((best_t - step).max(lo), (best_t + step).min(hi));
    for _ in 0..100 {
        let (m1, m2) = (x + (y - x) / 3.0, y - (y - x) / 3.0);
        if eval(m1) <= eval(m2) {
            y = m2;
        } else {
            x = m1;
        }
    }
    Some(best.min(eval(0.5 * (x + y))))
}

fn facet_grid() -> Outcome {
    let mut r = rng(77);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let m1 = r.random_range(3..=8);
        let inst = random_instance(&mut r, 2, m1);
        let k = r.random_range(1..=10);
        let obs = random_observations(&mut r, 2, k);
        let (s, _) = learner(&inst, &obs).algorithm1().map_err(|e| format!("instance {i}: {e}"))?;
        let grid = (0..inst.m1()).filter_map(|j| facet_grid_min(&inst, &obs, j, 1e-3)).fold(f64::INFINITY, f64::min);
        let d = (s.distance - grid).abs();
        worst = worst.max(d);
        ensure(d <= 1e-3, || format!("instance {i}: {} vs grid {grid}", s.distance))?;
    }
    Ok(format!("50 instances, max gap {worst:.1e}"))
}

fn il_or_skip(l: &InverseLearner, p: usize) -> Result<Option<InverseSolution>, String> {
    match l.solve_il(p) {
        Ok(s) => Ok(Some(s)),
        Err(InverseError::InfeasibleAtP { .. }) => Ok(None),
        Err(e) => Err(format!("p={p}: {e}")),
    }
}

fn monotonicity(cases: &[(ForwardInstance, ObservationSet)]) -> Outcome {
    for (i, (inst, obs)) in cases.iter().enumerate() {
        let l = learner(inst, obs);
        let mut prev = f64::NEG_INFINITY;
        for p in 1..=inst.m1() {
            if let Some(s) = il_or_skip(&l, p)? {
                ensure(s.distance >= prev - 1e-7, || format!("instance {i} p={p}: {} < {prev}", s.distance))?;
                prev = s.distance;
            }
        }
    }
    Ok(format!("{} instances", cases.len()))
}

fn mil_dominates(cases: &[(ForwardInstance, ObservationSet)]) -> Outcome {
    let mut r = rng(5150);
    let mut checks = 0;
    for (i, (inst, obs)) in cases.iter().enumerate() {
        let m1 = inst.m1();
        let mut pref: Vec<String> = (0..m1).filter(|_| r.random_bool(0.4)).map(|j| format!("r{j}")).collect();
        if pref.is_empty() {
            pref.push(String::from("r0"));
        }
        let inst = inst.with_preferred(&pref).map_err(|e| e.to_string())?;
        let l = learner(&inst, obs);
        let weights: Vec<MilWeights> = (0..5)
            .map(|_| MilWeights { omega1: r.random_range(0.1..2.0), omega2: r.random_range(0.1..5.0) })
            .collect();
        for p in 1..=m1 {
            let Some(il) = il_or_skip(&l, p)? else { continue };
            for w in &weights {
                let mil = l.solve_mil(p, *w).map_err(|e| format!("instance {i} p={p}: {e}"))?;
                ensure(mil.distance >= il.distance - 1e-7, || {
                    format!("instance {i} p={p}: MIL {} < IL {}", mil.distance, il.distance)
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (p, weights) pairs"))
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm2(v);
    v.iter().map(|x| x / n).collect()
}

fn same_rays(gens: &[Vec<f64>], expected: &[[f64; 2]]) -> bool {
    gens.len() == expected.len()
        && expected.iter().all(|w| {
            let w = unit(w);
            gens.iter().any(|g| unit(g).iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-9))
        })
}

fn toy_checks() -> Outcome {
    let cfg = SolverConfig::default();
    let (inst, obs) = (toy_instance(), toy_observations());
    let l = learner(&inst, &obs);
    let (a, j) = l.algorithm1().map_err(|e| e.to_string())?;
    ensure(a.z == [10.0, 9.0] && (a.distance - 3.0).abs() < 1e-9 && inst.relevant(j).name == "G5", || {
        format!("algorithm1 gave z={:?} D={} on {}", a.z, a.distance, inst.relevant(j).name)
    })?;
    let il = l.solve_il(2).map_err(|e| e.to_string())?;
    let names = il.selected_names(&inst);
    ensure(il.z == [10.0, 10.0] && (il.distance - 6.0).abs() < 1e-9 && names == ["G4", "G5"], || {
        format!("IL p=2 gave z={:?} D={} binding {names:?}", il.z, il.distance)
    })?;
    let mil = l.solve_mil(2, MilWeights { omega1: 1.0, omega2: 5.0 }).map_err(|e| e.to_string())?;
    ensure(mil.z == [8.0, 12.0], || format!("MIL gave z={:?}", mil.z))?;
    let c1 = build_cone(&inst, &il.z, &cfg).map_err(|e| e.to_string())?;
    ensure(same_rays(&c1.generators, &[[1.0, 0.0], [1.0, 1.0]]), || format!("cone at (10,10): {:?}", c1.generators))?;
    let c2 = build_cone(&inst, &mil.z, &cfg).map_err(|e| e.to_string())?;
    ensure(same_rays(&c2.generators, &[[1.0, 1.0], [0.5, 1.0]]), || format!("cone at (8,12): {:?}", c2.generators))?;
    Ok(format!("D(alg1)={} D(IL2)={} MIL z={:?}", a.distance, il.distance, mil.z))
}

fn toy_ordering() -> Outcome {
    let inst = toy_instance();
    let mut r = rng(31337);
    for c in 0..25 {
        let k = r.random_range(5..=20);
        let centre = [r.random_range(4.0..12.0), r.random_range(4.0..14.0)];
        let obs = observation_cloud(&mut r, &centre, 3.0, k);
        let l = learner(&inst, &obs);
        let d1 = l.solve_il(1).map_err(|e| e.to_string())?.distance;
        let d2 = l.solve_il(2).map_err(|e| e.to_string())?.distance;
        let dm = l.solve_mil(2, MilWeights { omega1: 1.0, omega2: 5.0 }).map_err(|e| e.to_string())?.distance;
        ensure(d1 <= d2 + 1e-9 && d2 <= dm + 1e-9, || format!("cloud {c}: {d1} / {d2} / {dm}"))?;
    }
    Ok(String::from("25 seeded clouds"))
}

fn cone_fixture(inst: &ForwardInstance, obs: &ObservationSet, z: &[f64], r: &mut ChaCha8Rng) -> Result<(), String> {
    let cfg = SolverConfig::default();
    let cone = build_cone(inst, z, &cfg).map_err(|e| e.to_string())?;
    let n = inst.dim();
    let mut done = 0;
    while done < 100 {
        let lam: Vec<f64> = cone.generators.iter().map(|_| r.random_range(0.0..3.0)).collect();
        let mut c = vec![0.0; n];
        for (g, l) in cone.generators.iter().zip(&lam) {
            for i in 0..n {
                c[i] += l * g[i];
            }
        }
        if norm2(&c) < 1e-9 {
            continue;
        }
        let ok = check_learning_point(inst, z, &c, &cfg).map_err(|e| e.to_string())?.is_some();
        ensure(ok, || format!("cone member {c:?} rejected at {z:?}"))?;
        done += 1;
    }
    let inferred = infer_cost(&cone, obs, &cfg).map_err(|e| e.to_string())?;
    let d = obs.sum();
    let got = dot(&d, &inferred.c);
    for g in &cone.generators {
        let ray = dot(&d, g) / norm2(g);
        ensure(got >= ray - 1e-8, || format!("ray {g:?} scores {ray} > {got}"))?;
    }
    let cert = certify(inst, z, &inferred.c, &cfg).map_err(|e| format!("certify: {e}"))?;
    ensure(cert.dual_residual(inst) <= 1e-8, || format!("dual residual {}", cert.dual_residual(inst)))
}

fn cone_inference() -> Outcome {
    let mut r = rng(4242);
    let (inst, obs) = (toy_instance(), toy_observations());
    let mut fixtures = 0;
    for z in [[10.0, 10.0], [8.0, 12.0], [10.0, 9.0]] {
        cone_fixture(&inst, &obs, &z, &mut r)?;
        fixtures += 1;
    }
    for _ in 0..20 {
        let n = r.random_range(2..=3);
        let m1 = r.random_range(3..=8);
        let inst = random_instance(&mut r, n, m1);
        let obs = random_observations(&mut r, n, 5);
        let p = r.random_range(1..=n);
        let Ok(s) = learner(&inst, &obs).solve_il(p) else { continue };
        cone_fixture(&inst, &obs, &s.z, &mut r)?;
        fixtures += 1;
    }
    Ok(format!("{fixtures} fixtures x 100 cone samples"))
}

fn diet_rows() -> Outcome {
    let b = sample_bounds();
    let inst = build_diet_instance(&sample_foods(), &b, &DietConfig::default()).map_err(|e| e.to_string())?;
    let nutrient_rows = inst.constraints().iter().filter(|c| c.name.ends_with(" lower") || c.name.ends_with(" upper")).count();
    let box_rows = inst.constraints().len() - nutrient_rows;
    ensure(nutrient_rows == 22 && box_rows == 6, || format!("{nutrient_rows} nutrient rows, {box_rows} box rows"))?;
    for nb in b.as_slice() {
        for (suffix, flag) in [("lower", nb.lower_relevant), ("upper", nb.upper_relevant)] {
            let name = format!("{} {suffix}", nb.nutrient);
            let row = inst.constraints().iter().find(|c| c.name == name).ok_or_else(|| format!("missing {name}"))?;
            ensure(row.is_relevant() == flag, || format!("{name} relevance {}", row.is_relevant()))?;
        }
    }
    Ok(format!("22 + 6 rows, {} relevant", inst.m1()))
}

fn diet_evaluate() -> Outcome {
    let e = evaluate_diet(&sample_foods(), &sample_bounds(), &[1.0, 1.0, 1.0]).map_err(|e| e.to_string())?;
    for (name, want) in [("Energy (kcal)", 671.8), ("Sodium (mg)", 1053.8)] {
        let total = e.totals.iter().find(|t| t.0 == name).map(|t| t.1).ok_or_else(|| format!("no total for {name}"))?;
        ensure((total - want).abs() <= 1e-9, || format!("{name} total {total}"))?;
        let below = e.violations.iter().any(|v| v.nutrient == name && v.side == BoundSide::Lower);
        ensure(below, || format!("{name} not reported below its lower bound"))?;
    }
    Ok(String::from("Energy 671.8, Sodium 1053.8 below lower bounds"))
}

fn diet_sample_sweep() -> Outcome {
    let inst = build_diet_instance(&sample_foods(), &sample_bounds(), &DietConfig::default()).map_err(|e| e.to_string())?;
    let obs = ObservationSet::new(3, vec![vec![1.0, 1.0, 1.0], vec![2.0, 1.0, 3.0], vec![1.5, 2.0, 2.0]]).expect("obs");
    let l = learner(&inst, &obs);
    let f = l.sweep(1, 2, SweepMode::Dependent, None).map_err(|e| format!("sweep failed: {e}"))?;
    let mut prev = f64::NEG_INFINITY;
    for pt in &f.points {
        let s = pt.solution.as_ref().ok_or_else(|| format!("p={} status {}", pt.p, pt.status.as_str()))?;
        ensure(inst.is_feasible(&s.z, 1e-7), || format!("p={} infeasible z", pt.p))?;
        ensure(s.distance >= prev - 1e-7, || format!("p={} distance fell", pt.p))?;
        prev = s.distance;
    }
    Ok(String::from("p=1,2 feasible, distance non-decreasing"))
}

fn diet_synthetic() -> Outcome {
    let start = Instant::now();
    let d = synthetic_diet(38, 38, 25);
    let l = learner(&d.instance, &d.observations);
    let w = MilWeights { omega1: 1.0, omega2: 1.0 };
    let p_max = 4;
    let il = l.sweep(1, p_max, SweepMode::Independent, None).map_err(|e| e.to_string())?;
    let mil = l.sweep(1, p_max, SweepMode::Independent, Some(w)).map_err(|e| e.to_string())?;
    let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (a, b) in il.points.iter().zip(&mil.points) {
        let (Some(a), Some(b)) = (&a.solution, &b.solution) else {
            return Err(format!("p={} IL {} MIL {}", a.p, a.status.as_str(), b.status.as_str()));
        };
        ensure(a.distance >= prev.0 - 1e-7 && b.distance >= prev.1 - 1e-7, || format!("p={} distance fell", a.p))?;
        ensure(b.distance >= a.distance - 1e-7, || format!("p={} MIL {} < IL {}", a.p, b.distance, a.distance))?;
        ensure(b.preferred_bound_count >= a.preferred_bound_count, || {
            format!("p={} MIL binds {} preferred, IL {}", a.p, b.preferred_bound_count, a.preferred_bound_count)
        })?;
        ensure(d.instance.is_feasible(&a.z, 1e-6) && d.instance.is_feasible(&b.z, 1e-6), || format!("p={} infeasible z", a.p))?;
        prev = (a.distance, b.distance);
    }
    for weights in [None, Some(w)] {
        let dep = l.sweep(1, p_max, SweepMode::Dependent, weights).map_err(|e| e.to_string())?;
        let ok: Vec<f64> = dep
            .points
            .iter()
            .filter(|p| p.status == FrontierStatus::Ok)
            .filter_map(|p| p.solution.as_ref())
            .map(|s| s.distance)
            .collect();
        ensure(ok.windows(2).all(|w| w[0] <= w[1] + 1e-7), || format!("dependent distances fell: {ok:?}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!("38 foods, p=1..{p_max}, {:.2}s", t.as_secs_f64()))
}

fn lp_oracle() -> Outcome {
    let mut r = rng(11);
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = r.random_range(2..=4);
        let m1 = r.random_range(2..=8);
        let inst = random_instance(&mut r, n, m1);
        let c: Vec<f64> = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let mut lp = LpProblem::new();
        let z: Vec<usize> = c.iter().map(|&ci| lp.add_var(ci, f64::NEG_INFINITY, f64::INFINITY)).collect();
        for row in inst.constraints() {
            let cmp = if row.sense == Sense::Le { Cmp::Le } else { Cmp::Ge };
            lp.add_dense_row(&z, &row.coeffs, cmp, row.rhs);
        }
        let res = solve_lp(&lp).map_err(|e| format!("lp {i}: {e}"))?;
        ensure(res.status == LpStatus::Optimal, || format!("lp {i}: {:?}", res.status))?;
        let verts = vertex_enumeration_oracle(&inst).map_err(|e| e.to_string())?;
        let (best, _) = min_over_vertices(&verts, &c).ok_or_else(|| format!("lp {i}: no vertices"))?;
        let err = (res.objective - best).abs();
        let gap = (res.objective - res.dual_objective(&lp)).abs() / (1.0 + res.objective.abs());
        worst = (worst.0.max(err), worst.1.max(gap));
        ensure(err <= 1e-6, || format!("lp {i}: {} vs oracle {best}", res.objective))?;
        ensure(gap <= 1e-6, || format!("lp {i}: duality gap {gap}"))?;
    }
    Ok(format!("100 LPs, max error {:.1e}, max gap {:.1e}", worst.0, worst.1))
}

fn interface_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inst_path = dir.path().join("instance.json");
    let obs_path = dir.path().join("obs.csv");
    let names = vec![String::from("x1"), String::from("x2")];
    let obs_csv = observations_csv(&names, &toy_observations());
    std::fs::write(&inst_path, instance_json(&toy_instance())).map_err(|e| e.to_string())?;
    std::fs::write(&obs_path, &obs_csv).map_err(|e| e.to_string())?;
    let cli = Command::new(env!("CARGO_BIN_EXE_invlearn"))
        .args(["solve", "--instance"])
        .arg(&inst_path)
        .arg("--observations")
        .arg(&obs_path)
        .args(["--method", "il", "--p", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(cli.status.success(), || String::from_utf8_lossy(&cli.stderr).into_owned())?;

    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().map_err(|e| e.to_string())?;
    let http = rt.block_on(async {
        let app = router(Arc::new(AppState::new(SolverConfig::default())));
        let send = |method: &str, uri: String, body: String| {
            let app = app.clone();
            let req = Request::builder().method(method).uri(uri).body(Body::from(body)).expect("request");
            async move {
                let resp = app.oneshot(req).await.expect("infallible");
                resp.into_body().collect().await.expect("body").to_bytes().to_vec()
            }
        };
        let id = |b: Vec<u8>| serde_json::from_slice::<serde_json::Value>(&b).expect("json")["id"].as_str().expect("id").to_string();
        let inst = id(send("POST", String::from("/instances"), instance_json(&toy_instance())).await);
        let obs = id(send("POST", format!("/observations?instance_id={inst}"), obs_csv.clone()).await);
        let req = json!({"instance_id": inst, "observations_id": obs, "method": "il", "p": 2});
        send("POST", String::from("/solve"), req.to_string()).await
    });
    ensure(cli.stdout == http, || String::from("CLI and HTTP bodies differ"))?;
    Ok(format!("{} identical bytes", http.len()))
}

fn main() {
    let mut suite = Suite { failed: 0, total: 0 };
    let cases = random_cases();
    suite.run("alg1_equals_il_at_p1", "1e-6", || single_binding(&cases));
    suite.run("facet_grid_oracle", "1e-3", facet_grid);
    suite.run("il_distance_monotone_in_p", "1e-7", || monotonicity(&cases));
    suite.run("mil_distance_at_least_il", "1e-7", || mil_dominates(&cases));
    suite.run("toy_solutions_and_cones", "1e-9", toy_checks);
    suite.run("toy_ordering_on_clouds", "1e-9", toy_ordering);
    suite.run("cone_members_and_inferred_cost", "1e-8", cone_inference);
    suite.run("diet_sample_rows", "exact", diet_rows);
    suite.run("diet_sample_evaluate", "1e-9", diet_evaluate);
    suite.run("diet_sample_sweep_p1_to_p2", "1e-7", diet_sample_sweep);
    suite.run("diet_synthetic_38_foods", "1e-7", diet_synthetic);
    suite.run("lp_vertex_oracle_and_duality", "1e-6", lp_oracle);
    suite.run("cli_http_byte_identical", "exact", interface_determinism);
    println!("{} of {} criteria passed", suite.total - suite.failed, suite.total);
    if suite.failed > 0 {
        std::process::exit(1);
    }
}
