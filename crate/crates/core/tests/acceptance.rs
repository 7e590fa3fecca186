//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use alphapack::algorithms::{self, Procedure, SolveConfig};
use alphapack::bipartite::{max_center_left_p2, BipartiteGraph};
use alphapack::calc::{
    self, emit_table, tabulated_alphas, Branch, ExactScheme, TableKind, TradeoffRow,
};
use alphapack::exact::{exact_3d_match, exact_3set_pack, rand_3d_match, rand_3set_pack};
use alphapack::model::{required_size, Graph, Problem, ThreeSetFamily, TripartiteFamily};
use alphapack::oracles::{
    brute_center_left_p2, brute_opt_3dm, brute_opt_3set, brute_represents, plant_instance,
    verify_solution, Kind,
};
use alphapack::rep::{compute_representative, level_size, param_match, param_pack};
use alphapack::subset::{Combinations, Subset};
use alphapack::universal::{
    build_perfect_family, build_universal, compose_by_partition, construct_base, lift_by_hashing,
    verify_universal, Strategy, UniversalParams,
};
use alphapack::Budget;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

const FIXTURE: &str = include_str!("data/reference_tables.csv");

/// Published row: dispatcher, procedure 1, optional (procedure 2, c), exact reference.
struct PublishedRow {
    dispatcher: f64,
    proc1: f64,
    proc2: Option<(f64, f64)>,
    exact: f64,
}

fn published_tables() -> HashMap<(TableKind, u32), PublishedRow> {
    let mut out = HashMap::new();
    for line in FIXTURE.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let table: TableKind = f[0].parse().unwrap();
        let alpha: f64 = f[1].parse().unwrap();
        let num = |s: &str| s.parse::<f64>().unwrap();
        let proc2 = (!f[4].is_empty()).then(|| (num(f[4]), num(f[5])));
        out.insert(
            (table, (alpha * 100.0).round() as u32),
            PublishedRow {
                dispatcher: num(f[2]),
                proc1: num(f[3]),
                proc2,
                exact: num(f[6]),
            },
        );
    }
    out
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn row(table: TableKind, alpha: f64) -> TradeoffRow {
    emit_table(table, &[alpha], 0.0).unwrap().remove(0)
}

fn criterion_1() -> Verdict {
    type Check = (&'static str, Box<dyn Fn() -> f64>, f64);
    let checks: Vec<Check> = vec![
        (
            "T1 0.99",
            Box::new(|| calc::base_pack1(0.99).unwrap()),
            6.338,
        ),
        (
            "T1 0.90",
            Box::new(|| calc::base_pack1(0.9).unwrap()),
            4.516,
        ),
        (
            "T1 0.80 c=1.9",
            Box::new(|| calc::base_pack2(0.8, 0.0, 1.9).unwrap().base),
            4.098,
        ),
        (
            "T1 0.78 c=1.9",
            Box::new(|| calc::base_pack2(0.78, 0.0, 1.9).unwrap().base),
            2.684,
        ),
        (
            "T1 0.76 c=2.0",
            Box::new(|| calc::base_pack2(0.76, 0.0, 2.0).unwrap().base),
            1.527,
        ),
        (
            "T2 0.85",
            Box::new(|| calc::base_exact_scaled(0.85, ExactScheme::SetPackDet).unwrap()),
            5.058,
        ),
        (
            "T2 0.80 dispatcher",
            Box::new(|| row(TableKind::SetPackDet, 0.8).dispatcher),
            4.098,
        ),
        (
            "T3 0.90",
            Box::new(|| calc::base_exact_scaled(0.9, ExactScheme::SetPackRand).unwrap()),
            2.7896,
        ),
        (
            "T3 0.77 dispatcher",
            Box::new(|| row(TableKind::SetPackRand, 0.77).dispatcher),
            2.0728,
        ),
        (
            "T4 0.88",
            Box::new(|| row(TableKind::MatchDet, 0.88).dispatcher),
            4.7807,
        ),
        (
            "T4 0.80 c=1.8",
            Box::new(|| calc::base_match2(0.8, 0.0, 1.8).unwrap().base),
            3.5107,
        ),
        (
            "T5 0.85",
            Box::new(|| row(TableKind::MatchRand, 0.85).dispatcher),
            1.7112,
        ),
        (
            "T5 0.76 dispatcher",
            Box::new(|| row(TableKind::MatchRand, 0.76).dispatcher),
            1.4778,
        ),
    ];
    let mut failures = Vec::new();
    for (name, f, want) in &checks {
        let (got, dt) = timed(f);
        if (got - want).abs() > 0.002 || dt >= Duration::from_secs(1) {
            failures.push(format!("{name}: got {got:.4} want {want} in {dt:?}"));
        }
    }

    let published = published_tables();
    let (tables, sweep_time) = timed(|| {
        TableKind::ALL
            .par_iter()
            .map(|&t| (t, emit_table(t, &tabulated_alphas(), 0.0).unwrap()))
            .collect::<Vec<_>>()
    });
    let mut compared = 0;
    let mut typos = Vec::new();
    for (t, rows) in &tables {
        for (i, r) in rows.iter().enumerate() {
            let key = |r: &TradeoffRow| (*t, (r.alpha * 100.0).round() as u32);
            let p = &published[&key(r)];
            let mut cols = vec![
                ("dispatcher", r.dispatcher, p.dispatcher),
                ("proc1", r.proc1, p.proc1),
                ("exact", r.exact_reference, p.exact),
            ];
            if let (Some((v, _)), Some(ours)) = (p.proc2, r.proc2) {
                cols.push(("proc2", ours, v));
            }
            for (col, ours, theirs) in cols {
                compared += 1;
                if (ours - theirs).abs() <= 0.005 {
                    continue;
                }
                // exact-reference entries form a geometric sequence in alpha; a
                // value that breaks it while ours fits is a misprint
                let neighbours = (i > 0 && i + 1 < rows.len()).then(|| {
                    let prev = published[&key(&rows[i - 1])].exact;
                    let next = published[&key(&rows[i + 1])].exact;
                    (prev * next).sqrt()
                });
                let misprint = col == "exact"
                    && neighbours
                        .is_some_and(|g| (theirs - g).abs() > 0.005 && (ours - g).abs() <= 0.002);
                let msg = format!(
                    "{} alpha={:.2} {col}: recomputed {ours:.4} vs published {theirs} (c_hat={:?}, beta_hat={:?})",
                    t.as_str(),
                    r.alpha,
                    r.c_hat.map(|c| (c * 1000.0).round() / 1000.0),
                    r.beta_hat.map(|b| (b * 1e4).round() / 1e4)
                );
                if misprint {
                    typos.push(msg);
                } else {
                    failures.push(msg);
                }
            }
        }
    }
    if sweep_time >= Duration::from_secs(30) {
        failures.push(format!("full sweep took {sweep_time:?}"));
    }
    for t in &typos {
        println!("    note: inconsistent published entry, {t}");
    }
    for f in &failures {
        println!("    mismatch: {f}");
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} spot values within 0.002; sweep of {compared} entries in {sweep_time:.2?}; {} published misprints; {} mismatches",
            checks.len(),
            typos.len(),
            failures.len()
        ),
    )
}

fn criterion_2() -> Verdict {
    let budget = Budget::default();
    let mut cases = Vec::new();
    for n in 1..=12 {
        for k in 0..=5usize.min(n) {
            for p in 0..=k {
                for alpha in [0.5, 2.0 / 3.0, 1.0] {
                    cases.push((n, k, p, alpha));
                }
            }
        }
    }
    let (failures, dt): (Vec<String>, _) = timed(|| {
        cases
            .par_iter()
            .filter_map(|&(n, k, p, alpha)| {
                let params = UniversalParams::new(n, k, p, alpha).unwrap();
                let ok = build_universal(params, Strategy::Pipeline, 7, &budget)
                    .and_then(|f| verify_universal(&f, &budget))
                    .map(|c| c.is_none());
                match ok {
                    Ok(true) => None,
                    Ok(false) => Some(format!("({n},{k},{p},{alpha:.3}) not universal")),
                    Err(e) => Some(format!("({n},{k},{p},{alpha:.3}) {e}")),
                }
            })
            .collect()
    });
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    verdict(
        failures.is_empty() && dt < Duration::from_secs(300),
        format!(
            "{} pipeline families verified exhaustively in {dt:.2?}, {} failed",
            cases.len(),
            failures.len()
        ),
    )
}

fn criterion_3() -> Verdict {
    let budget = Budget::default();
    let mut lifts = Vec::new();
    for (n, k) in [
        (6, 2),
        (9, 2),
        (10, 3),
        (12, 3),
        (14, 3),
        (11, 4),
        (16, 2),
        (13, 4),
    ] {
        for p in [1, k / 2 + 1, k] {
            for alpha in [0.5, 1.0] {
                if p <= k {
                    lifts.push((n, k, p, alpha));
                }
            }
        }
    }
    let mut composes = Vec::new();
    for (n, k, s) in [
        (7, 3, 1),
        (8, 4, 2),
        (9, 4, 3),
        (10, 3, 2),
        (8, 5, 2),
        (10, 4, 4),
    ] {
        for p in [1, k - 1, k] {
            for alpha in [0.5, 2.0 / 3.0, 1.0] {
                composes.push((n, k, p, alpha, s));
            }
        }
    }
    let lift_fail: Vec<String> = lifts
        .par_iter()
        .filter_map(|&(n, k, p, alpha)| {
            let inner = construct_base(
                UniversalParams::new(k * k, k, p, alpha).unwrap(),
                11,
                &budget,
            )
            .unwrap();
            let perfect = build_perfect_family(n, k, 12, &budget).unwrap();
            let fam = lift_by_hashing(&inner, &perfect, n).unwrap();
            match verify_universal(&fam, &budget) {
                Ok(None) => None,
                other => Some(format!("lift ({n},{k},{p},{alpha}): {other:?}")),
            }
        })
        .collect();
    let compose_fail: Vec<String> = composes
        .par_iter()
        .filter_map(|&(n, k, p, alpha, s)| {
            let params = UniversalParams::new(n, k, p, alpha).unwrap();
            let mut builder = |ph: usize| {
                construct_base(
                    UniversalParams::new(n, s, ph, alpha)?,
                    100 + ph as u64,
                    &budget,
                )
            };
            let fam = compose_by_partition(&mut builder, params, Some(s), &budget).unwrap();
            match verify_universal(&fam, &budget) {
                Ok(None) => None,
                other => Some(format!("compose ({n},{k},{p},{alpha:.3}) s={s}: {other:?}")),
            }
        })
        .collect();
    for f in lift_fail.iter().chain(&compose_fail).take(10) {
        println!("    {f}");
    }
    verdict(
        lift_fail.is_empty() && compose_fail.is_empty(),
        format!(
            "{} lifted and {} composed families verified, {} failed",
            lifts.len(),
            composes.len(),
            lift_fail.len() + compose_fail.len()
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    for _ in 0..1000 {
        let nl = rng.gen_range(0..=5);
        let nr = rng.gen_range(0..=7);
        let density = rng.gen_range(0.1..0.9);
        let left: Vec<usize> = (0..nl).collect();
        let right: Vec<usize> = (nl..nl + nr).collect();
        let edges = left
            .iter()
            .flat_map(|&l| right.iter().map(move |&r| (l, r)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let b = BipartiteGraph::new(left, right, edges).unwrap();
        if max_center_left_p2(&b).len() != brute_center_left_p2(&b) {
            bad += 1;
        }
    }
    verdict(
        bad == 0,
        format!("1000 random graphs, {bad} disagreements with brute force"),
    )
}

fn random_family(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<[usize; 3]> {
    let mut all: Vec<[usize; 3]> = Combinations::new(Subset::full(n), 3)
        .map(|s| {
            let v = s.to_vec();
            [v[0], v[1], v[2]]
        })
        .collect();
    all.shuffle(rng);
    all.truncate(m);
    all
}

fn random_tripartite(rng: &mut ChaCha8Rng, blocks: [usize; 3], m: usize) -> TripartiteFamily {
    let mut sets = Vec::new();
    for _ in 0..m {
        let a = rng.gen_range(0..blocks[0]);
        let b = blocks[0] + rng.gen_range(0..blocks[1]);
        let c = blocks[0] + blocks[1] + rng.gen_range(0..blocks[2]);
        if !sets.contains(&[a, b, c]) {
            sets.push([a, b, c]);
        }
    }
    TripartiteFamily::new(blocks, sets).unwrap()
}

/// Unions of all `m`-packings of sets whose minimum is at most `pivot`.
fn all_partial_unions(masks: &[Subset], m: usize, pivot: usize) -> Vec<Subset> {
    let eligible: Vec<Subset> = masks
        .iter()
        .copied()
        .filter(|&s| s.min().unwrap() <= pivot)
        .collect();
    let mut out = Vec::new();
    fn rec(e: &[Subset], start: usize, left: usize, u: Subset, out: &mut Vec<Subset>) {
        if left == 0 {
            out.push(u);
            return;
        }
        for i in start..e.len() {
            if e[i].is_disjoint(u) {
                rec(e, i + 1, left - 1, u | e[i], out);
            }
        }
    }
    rec(&eligible, 0, m, Subset::EMPTY, &mut out);
    out
}

fn criterion_5() -> Verdict {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0;
    let mut reduced = 0;
    let mut failures = Vec::new();
    for trial in 0..60 {
        let n = rng.gen_range(4..=12);
        let fam: Vec<Subset> = (0..rng.gen_range(1..=14))
            .map(|_| (0..n).filter(|_| rng.gen_bool(0.35)).collect())
            .collect();
        let sub: Subset = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        let slack = rng.gen_range(0..=3);
        let rep = compute_representative(&fam, sub, slack, &budget).unwrap();
        checks += 1;
        reduced += (rep.chosen.len() < fam.len()) as usize;
        if !brute_represents(&fam, &rep.members(), sub, slack) {
            failures.push(format!("rep family trial {trial}"));
        }
    }
    for trial in 0..40 {
        let n = rng.gen_range(6..=12);
        let count = rng.gen_range(3..=14);
        let f = ThreeSetFamily::new(n, random_family(&mut rng, n, count)).unwrap();
        let masks = f.masks();
        let k = rng.gen_range(1..=3);
        for beta in [0.0, 0.5, 1.0] {
            let m = level_size(k, beta);
            for pivot in 0..n {
                let coll = param_pack(&f, k, beta, 1.5, pivot, &budget).unwrap();
                let target = all_partial_unions(&masks, m, pivot);
                checks += 1;
                reduced += (coll.unions.len() < target.len()) as usize;
                if !brute_represents(
                    &target,
                    &coll.unions,
                    Subset::range(pivot + 1, n),
                    3 * (k - m),
                ) {
                    failures.push(format!(
                        "param_pack trial {trial} k={k} beta={beta} pivot={pivot}"
                    ));
                }
            }
        }
    }
    for trial in 0..40 {
        let blocks = [
            rng.gen_range(2..=4),
            rng.gen_range(2..=4),
            rng.gen_range(2..=4),
        ];
        let count = rng.gen_range(3..=14);
        let f = random_tripartite(&mut rng, blocks, count);
        let masks = f.masks();
        let k = rng.gen_range(1..=3);
        for beta in [0.0, 0.5, 1.0] {
            let m = level_size(k, beta);
            for pivot in 0..blocks[0] {
                let coll = param_match(&f, k, beta, 1.5, pivot, &budget).unwrap();
                let target = all_partial_unions(&masks, m, pivot);
                checks += 1;
                reduced += (coll.unions.len() < target.len()) as usize;
                if !brute_represents(&target, &coll.unions, f.tail(), 2 * (k - m)) {
                    failures.push(format!(
                        "param_match trial {trial} k={k} beta={beta} pivot={pivot}"
                    ));
                }
            }
        }
    }
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    verdict(
        failures.is_empty(),
        format!(
            "{checks} representation checks ({reduced} with a proper subfamily), {} failed",
            failures.len()
        ),
    )
}

fn criterion_6() -> Verdict {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    for i in 0..500 {
        let k = rng.gen_range(1..=4);
        if i % 2 == 0 {
            let n = rng.gen_range(3..=15);
            let count = rng.gen_range(0..=25);
            let f = ThreeSetFamily::new(n, random_family(&mut rng, n, count)).unwrap();
            let opt = brute_opt_3set(&f).0;
            let got = exact_3set_pack(&f, k, &budget).unwrap();
            let ok = match &got {
                Some(p) => p.len() == k && p.violations(&f.sets).is_empty(),
                None => opt < k,
            };
            if !ok {
                bad.push(format!("3sp instance {i}: opt={opt} k={k} got={got:?}"));
            }
        } else {
            let blocks = [
                rng.gen_range(1..=5),
                rng.gen_range(1..=5),
                rng.gen_range(1..=5),
            ];
            let count = rng.gen_range(0..=25);
            let f = random_tripartite(&mut rng, blocks, count);
            let opt = brute_opt_3dm(&f).0;
            let got = exact_3d_match(&f, k, &budget).unwrap();
            let ok = match &got {
                Some(p) => p.len() == k && p.violations(&f.sets).is_empty(),
                None => opt < k,
            };
            if !ok {
                bad.push(format!("3dm instance {i}: opt={opt} k={k} got={got:?}"));
            }
        }
    }
    let (mut hits_sp, mut hits_dm) = (0, 0);
    for seed in 0..100 {
        let inst = plant_instance(Kind::ThreeSet, 3, 10, seed).unwrap();
        if let Problem::ThreeSet(f) = &inst.problem {
            if let Some(p) = rand_3set_pack(f, 3, seed, None, &budget).unwrap() {
                hits_sp += (p.len() == 3 && p.violations(&f.sets).is_empty()) as usize;
            }
        }
        let inst = plant_instance(Kind::Matching, 3, 10, seed).unwrap();
        if let Problem::Matching(f) = &inst.problem {
            if let Some(p) = rand_3d_match(f, 3, seed, None, &budget).unwrap() {
                hits_dm += (p.len() == 3 && p.violations(&f.sets).is_empty()) as usize;
            }
        }
    }
    for b in bad.iter().take(10) {
        println!("    {b}");
    }
    verdict(
        bad.is_empty() && hits_sp >= 99 && hits_dm >= 99,
        format!(
            "500 instances, {} disagreements; randomized hits {hits_sp}/100 (3-set), {hits_dm}/100 (3D)",
            bad.len()
        ),
    )
}

fn criterion_7() -> Verdict {
    let procs: [(&str, Kind, bool, usize); 7] = [
        ("pack1", Kind::P2, false, 5),
        ("pack2", Kind::ThreeSet, false, 5),
        ("setpack1", Kind::ThreeSet, false, 5),
        ("sprand1", Kind::ThreeSet, true, 4),
        ("match1", Kind::Matching, false, 5),
        ("matchrand1", Kind::Matching, true, 5),
        ("match2", Kind::Matching, false, 5),
    ];
    let alphas = [0.75, 0.8, 0.9, 1.0];
    let mut all_ok = true;
    let mut summary = Vec::new();
    for (name, kind, randomized, kmax) in procs {
        let alg = name.parse().unwrap();
        let (results, dt): (Vec<(bool, bool)>, _) = timed(|| {
            let jobs: Vec<(f64, u64)> = alphas
                .iter()
                .flat_map(|&a| (0..50u64).map(move |s| (a, s)))
                .collect();
            jobs.par_iter()
                .map(|&(alpha, seed)| {
                    let k = 1 + (seed as usize) % kmax;
                    let noise = (seed as usize * 7) % 16;
                    let inst = plant_instance(kind, k, noise, 1000 + seed).unwrap();
                    let cfg = SolveConfig {
                        seed,
                        ..SolveConfig::default()
                    };
                    let out = algorithms::solve(&inst.problem, alg, k, alpha, &cfg).unwrap();
                    let valid = verify_solution(&inst, &out.solution);
                    (valid, out.solution.len() >= required_size(k, alpha))
                })
                .collect()
        });
        let invalid = results.iter().filter(|r| !r.0).count();
        let met = results.iter().filter(|r| r.1).count();
        let rate = met as f64 / results.len() as f64;
        let ok = invalid == 0
            && if randomized {
                rate >= 0.99
            } else {
                met == results.len()
            };
        all_ok &= ok;
        summary.push(format!("{name} {met}/{}", results.len()));
        if !ok {
            println!("    {name}: {invalid} invalid, {met}/{} met", results.len());
        }
        println!("    {name}: {met}/{} met in {dt:.2?}", results.len());
    }
    verdict(all_ok, summary.join(", "))
}

fn criterion_8() -> Verdict {
    let published = published_tables();
    let mut bad = Vec::new();
    for t in TableKind::ALL {
        for r in emit_table(t, &tabulated_alphas(), 0.0).unwrap() {
            let argmin = match r.proc2 {
                Some(p2) if p2 < r.proc1 => Branch::Second,
                _ => Branch::First,
            };
            let p = &published[&(t, (r.alpha * 100.0).round() as u32)];
            let published_branch = match p.proc2 {
                Some((v, _)) if (v - p.dispatcher).abs() < 1e-9 && v < p.proc1 => Branch::Second,
                _ => Branch::First,
            };
            if r.branch != argmin || r.branch != published_branch {
                bad.push(format!("{} alpha={:.2}", t.as_str(), r.alpha));
            }
        }
    }
    // the solvers follow the same branch
    let cfg = SolveConfig::default();
    let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let f = ThreeSetFamily::new(3, [[0, 1, 2]]).unwrap();
    let m = TripartiteFamily::new([1, 1, 1], [[0, 1, 2]]).unwrap();
    let mut runs = 0;
    for alpha in tabulated_alphas() {
        let checks = [
            (
                TableKind::P2,
                algorithms::pack(&g, 1, alpha, &cfg).unwrap().procedure,
                Procedure::Pack1,
                Procedure::Pack2,
            ),
            (
                TableKind::SetPackDet,
                algorithms::setpack(&f, 1, alpha, &cfg).unwrap().procedure,
                Procedure::SetPack1,
                Procedure::Pack2,
            ),
            (
                TableKind::SetPackRand,
                algorithms::sprand(&f, 1, alpha, &cfg).unwrap().procedure,
                Procedure::SpRand1,
                Procedure::Pack2,
            ),
            (
                TableKind::MatchDet,
                algorithms::match_det(&m, 1, alpha, &cfg).unwrap().procedure,
                Procedure::Match1,
                Procedure::Match2,
            ),
            (
                TableKind::MatchRand,
                algorithms::match_rand(&m, 1, alpha, &cfg)
                    .unwrap()
                    .procedure,
                Procedure::MatchRand1,
                Procedure::Match2,
            ),
        ];
        for (t, got, first, second) in checks {
            runs += 1;
            let want = match row(t, alpha).branch {
                Branch::First => first,
                Branch::Second => second,
            };
            if got != want {
                bad.push(format!(
                    "{} solver alpha={alpha:.2} ran {got:?}",
                    t.as_str()
                ));
            }
        }
    }
    for b in bad.iter().take(10) {
        println!("    {b}");
    }
    verdict(
        bad.is_empty(),
        format!(
            "120 table rows and {runs} dispatcher runs, {} inconsistent",
            bad.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("table reproduction", criterion_1),
        ("universal-set soundness", criterion_2),
        ("lift/composition correctness", criterion_3),
        ("bipartite P2 optimality", criterion_4),
        ("representation property", criterion_5),
        ("exact-solver equivalence", criterion_6),
        ("end-to-end guarantee", criterion_7),
        ("dispatcher consistency", criterion_8),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let (v, dt) = timed(run);
        println!(
            "criterion {} ({name}): {} [{dt:.1?}] {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += !v.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
