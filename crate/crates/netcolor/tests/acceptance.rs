//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line with its measured runtime.

use netcolor::config::{GeneratorSpec, RunConfig};
use netcolor::constants::{build_schedule, solve_r_hat0, Mode};
use netcolor::equivalence::realized_cluster_pattern;
use netcolor::gen::{
    cayley_ball, complete, complete_bipartite, cycle, distinguishing_index,
    distinguishing_number, grid, path, random_bounded, torus, tree, CayleyPreset,
};
use netcolor::graph::{Graph, Vertex};
use netcolor::hierarchy::{build_hierarchy, SplitPolicy};
use netcolor::iso::{
    brute_force_pointed_isomorphism, enumerate_pointed_isomorphisms, find_pointed_isomorphism,
    Coloring, PointedPattern,
};
use netcolor::palette::build_family_level0;
use netcolor::pipeline;
use netcolor::verify::{check_aperiodic_finite, check_level_invariants, Status};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn report(criterion: u32, ok: bool, limit: Duration, t0: Instant, detail: &str) {
    let elapsed = t0.elapsed();
    let verdict = if ok && elapsed <= limit { "PASS" } else { "FAIL" };
    println!(
        "[criterion {criterion}] {verdict} — {detail} ({:.2?} of {:.0?} allowed)",
        elapsed, limit
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
    assert!(
        elapsed <= limit,
        "criterion {criterion} exceeded its time budget: {elapsed:.2?} > {limit:.0?}"
    );
}

fn petersen() -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((i, i + 5)); // spokes
        edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
    }
    Graph::from_edges(10, &edges, 0).unwrap()
}

#[test]
fn criterion_01_distinguishing_numbers() {
    let t0 = Instant::now();
    let cases: Vec<(&str, Graph, u64)> = vec![
        ("C5", cycle(5).unwrap(), 3),
        ("K4", complete(4).unwrap(), 4),
        ("K33", complete_bipartite(3, 3).unwrap(), 4),
        ("P4", path(4).unwrap(), 2),
        ("Petersen", petersen(), 3),
    ];
    let mut got = Vec::new();
    let mut ok = true;
    for (name, g, want) in &cases {
        let d = distinguishing_number(g, 4096).unwrap();
        got.push(format!("D({name})={d}"));
        ok &= d == *want;
    }
    report(1, ok, Duration::from_secs(10), t0, &got.join(", "));
}

#[test]
fn criterion_02_separated_set_properties() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    let mut count = 0;
    let mut seed = 0u64;
    while count < 200 {
        seed += 1;
        let delta = 2 + (seed % 4) as u32; // 2..=5
        let v = 20 + (seed * 13 % 181) as u32; // 20..=200
        let g = match random_bounded(delta, v, seed) {
            Ok(g) => g,
            Err(_) => continue,
        };
        count += 1;
        let view = g.view();
        let priority = view.priority_order(g.basepoint());
        for k in [2u32, 3, 4] {
            let a = view.maximal_separated_set(k, &priority);
            let separated = view.is_separated(&a, k);
            let dense = view
                .relative_density_constant(&a)
                .map_or(false, |c| c <= k - 1);
            // cardinality: |A| * Delta^k > V, exactly
            let d = g.degree_bound() as u64;
            let big_enough = (a.len() as u64) * d.pow(k) > v as u64;
            if !(separated && dense && big_enough) {
                ok = false;
                detail = format!(
                    "seed {seed} k={k}: separated={separated} dense={dense} |A|={} V={v} Δ={d}",
                    a.len()
                );
            }
        }
    }
    if ok {
        detail = "200 graphs × K∈{2,3,4}: K-separated, (K−1)-dense, |A|·Δ^K > V".into();
    }
    report(2, ok, Duration::from_secs(30), t0, &detail);
}

fn corpus() -> Vec<(&'static str, Graph)> {
    vec![
        ("cycle30", cycle(30).unwrap()),
        ("path20", path(20).unwrap()),
        ("grid8x8", grid(8, 8).unwrap()),
        ("torus6x6", torus(6, 6).unwrap()),
        ("tree3x4", tree(3, 4).unwrap()),
        ("cayleyF2r3", cayley_ball(CayleyPreset::F2, 3).unwrap()),
        ("cayleyZ2r3", cayley_ball(CayleyPreset::Z2, 3).unwrap()),
        ("K6", complete(6).unwrap()),
        ("K33", complete_bipartite(3, 3).unwrap()),
        ("random4", random_bounded(4, 60, 1).unwrap()),
        ("random5", random_bounded(5, 100, 2).unwrap()),
    ]
}

#[test]
fn criterion_03_growth_bounds() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for (name, g) in corpus() {
        let view = g.view();
        let d = g.degree_bound() as u64;
        for x in 0..g.vertex_count() {
            for r in 1..=6u32 {
                let sphere = view.sphere(x, r).len() as u64;
                let disk = view.disk(x, r).len() as u64;
                let sphere_bound = d * (d - 1).pow(r - 1);
                let disk_bound = match d {
                    2 => 1 + 2 * r as u64,
                    3 => 3 * 2u64.pow(r),
                    _ => 4 * (d - 1).pow(r),
                };
                if sphere > sphere_bound || disk > disk_bound {
                    ok = false;
                    detail = format!(
                        "{name} x={x} r={r}: |S|={sphere} (≤{sphere_bound}), |D|={disk} (≤{disk_bound})"
                    );
                }
            }
        }
    }
    if ok {
        detail = "11 corpus graphs, every vertex, r ≤ 6: sphere and disk bounds hold".into();
    }
    report(3, ok, Duration::from_secs(10), t0, &detail);
}

#[test]
fn criterion_04_constants_recursions() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    let b = BigInt::from;

    // exact-mode base values
    let s0 = BigInt::from(28); // 27 + eps_0 with eps_0 = 1
    let rhat0 = solve_r_hat0(2, &s0).unwrap();
    ok &= rhat0 > b(1u64 << 11);
    notes.push(format!("r̂_0(Δ=2) = {rhat0} > 2^11"));
    let exact = build_schedule(Mode::Exact, 2, &[1], None, None).unwrap();
    ok &= exact.level(0).s == s0;
    ok &= exact.level(0).r_bar == Some(&rhat0 * (3 * &s0 + 1));
    notes.push("s_0 = 27+ε_0, r̄_0 = r̂_0·(3s_0+1)".into());

    // working-scale recursions vs straight-line re-evaluation, n ≤ 2
    for delta in [2u32, 3] {
        let (r, s) = ([12u64, 4, 5], [3u64, 3, 4]);
        let sch = build_schedule(Mode::Desk, delta, &[1, 2, 3], Some(&r), Some(&s)).unwrap();
        // independent straight-line evaluation
        let mut big_l = BigInt::from(1u32);
        let mut gamma_plus = BigInt::from(0u32);
        let mut exp_rp = Vec::new();
        let mut exp_l = Vec::new();
        let mut exp_big_l = Vec::new();
        let mut exp_gm = Vec::new();
        let mut exp_gp: Vec<BigInt> = Vec::new();
        for n in 0..3usize {
            let (rn, sn) = (b(r[n]), b(s[n]));
            let rm_big = 4 * &rn - 1;
            let rp_big = &rn * (2 * &sn + 3);
            let l = 2 * &rp_big + 1;
            exp_gm.push(&rm_big * &big_l + &gamma_plus);
            exp_gp.push(&rp_big * &big_l + &gamma_plus);
            big_l = &big_l * &l;
            gamma_plus = exp_gp[n].clone();
            exp_rp.push(rp_big);
            exp_l.push(l);
            exp_big_l.push(big_l.clone());
        }
        // K-bar / K chain: K̄_n = K_{n-1} + L_n(r_n s_n² + r_n(2s_n+1)),
        // K_n = K̄_n + L_n(s_{n+1} R⁺_{n+1} + Γ⁺_n + 2R⁺_n)
        let mut exp_kbar = Vec::new();
        let mut exp_k: Vec<Option<BigInt>> = Vec::new();
        let mut prev_k = BigInt::from(0u32);
        for n in 0..3usize {
            let (rn, sn) = (b(r[n]), b(s[n]));
            let kbar = &prev_k + &exp_big_l[n] * (&rn * &sn * &sn + &rn * (2 * &sn + 1));
            let k = if n + 1 < 3 {
                let kn: BigInt = &kbar
                    + &exp_big_l[n] * (b(s[n + 1]) * &exp_rp[n + 1] + &exp_gp[n] + 2 * &exp_rp[n]);
                prev_k = kn.clone();
                Some(kn)
            } else {
                None
            };
            exp_kbar.push(kbar);
            exp_k.push(k);
        }
        for n in 0..3usize {
            let lv = sch.level(n);
            let here = lv.r_minus == b(r[n])
                && lv.r_plus == b(r[n]) * b(s[n])
                && lv.big_r_minus == 4 * b(r[n]) - 1
                && lv.big_r_plus == exp_rp[n]
                && lv.l == exp_l[n]
                && lv.big_l == exp_big_l[n]
                && lv.gamma_minus == exp_gm[n]
                && lv.gamma_plus == exp_gp[n]
                && lv.k_bar == exp_kbar[n]
                && lv.k == exp_k[n];
            if !here {
                notes.push(format!("mismatch at Δ={delta} level {n}"));
            }
            ok &= here;
        }
    }
    notes.push("R/l/L/Γ/K̄/K recursions re-evaluated for n ≤ 2, Δ ∈ {2,3}".into());
    report(4, ok, Duration::from_secs(5), t0, &notes.join("; "));
}

#[test]
fn criterion_05_hierarchy_invariants() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut skipped = Vec::new();
    let mut detail = String::new();
    for (name, g) in [
        ("grid60x60", grid(60, 60).unwrap()),
        ("tree3x6", tree(3, 6).unwrap()),
    ] {
        let h = build_hierarchy(&g, &[12, 4], &[3, 3], SplitPolicy::Formula).unwrap();
        let rep = check_level_invariants(&g, &h, None);
        for line in &rep.lines {
            match line.status {
                Status::Pass => {}
                Status::BoundarySkipped => skipped.push(format!("{name}: {}", line.id)),
                Status::Fail => {
                    ok = false;
                    detail = format!("{name}: {} failed: {:?}", line.id, line.witnesses);
                }
            }
        }
    }
    println!("boundary-skipped lines:");
    for s in &skipped {
        println!("  {s}");
    }
    if ok {
        detail = format!(
            "grid 60×60 and depth-6 3-ary tree, r=(12,4), s=(3,3): all lines pass; {} boundary-skips enumerated above",
            skipped.len()
        );
    }
    report(5, ok, Duration::from_secs(120), t0, &detail);
}

#[test]
fn criterion_06_cluster_rigidity() {
    let t0 = Instant::now();
    let g = cycle(60).unwrap();
    let h = build_hierarchy(&g, &[12], &[3], SplitPolicy::AllMinus).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    let mut clusters = 0;
    let mut indices_total = 0u64;
    for &x in &h.levels[0].centers.clone() {
        // |N| <= 4 satellites give at most 16 indices
        let fam = build_family_level0(&g, &h, x, 15).unwrap();
        let n_sat = fam.satellites.len();
        if fam.domain.len() > 64 || n_sat > 4 {
            ok = false;
            detail = format!(
                "cluster at {x} out of scope: {} vertices, {n_sat} satellites",
                fam.domain.len()
            );
            continue;
        }
        clusters += 1;
        let max_index = (1u64 << n_sat) - 1;
        indices_total += max_index + 1;
        let patterns: Vec<PointedPattern> = (0..=max_index)
            .map(|i| realized_cluster_pattern(&g, &h, &fam, i))
            .collect();
        for (i, p) in patterns.iter().enumerate() {
            let autos = enumerate_pointed_isomorphisms(p, p, usize::MAX);
            if autos.len() != 1 {
                ok = false;
                detail = format!("center {x} index {i}: {} self-equivalences", autos.len());
            }
        }
        for i in 0..patterns.len() {
            for j in 0..patterns.len() {
                let found = !enumerate_pointed_isomorphisms(&patterns[i], &patterns[j], 1)
                    .is_empty();
                if found != (i == j) {
                    ok = false;
                    detail = format!(
                        "center {x}: indices {i} and {j} {} equivalent",
                        if found { "wrongly" } else { "not" }
                    );
                }
            }
        }
    }
    if ok {
        detail = format!(
            "{clusters} realized clusters, {indices_total} indices: identity-only self-equivalence, cross-index equivalence ⇒ index equality"
        );
    }
    report(6, ok, Duration::from_secs(120), t0, &detail);
}

#[test]
fn criterion_07_finitary_separation_pipelines() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();

    let grid_cfg = RunConfig {
        generator: GeneratorSpec::Grid(60, 60),
        delta: 4,
        levels: 1,
        r: vec![12],
        s: vec![3],
        split: SplitPolicy::Formula,
        canonical_template: false,
        bulk_margin: Some(12),
        eps: 4,
        seed: 0,
    };
    let art = pipeline::run(&grid_cfg, None).unwrap();
    let grid_ok = art.phi.coloring.palette_bound == 4
        && art.min_delta.is_some()
        && art.finitary_report.as_ref().map_or(false, |r| r.passed());
    notes.push(format!(
        "grid 60×60 Δ=4: min separating δ = {:?} at ε=4",
        art.min_delta
    ));
    ok &= grid_ok;

    let cycle_cfg = RunConfig {
        generator: GeneratorSpec::Cycle(200),
        delta: 2,
        levels: 2,
        r: vec![16, 3],
        s: vec![3, 3],
        split: SplitPolicy::AllMinus,
        canonical_template: false,
        bulk_margin: Some(0),
        eps: 4,
        seed: 0,
    };
    let art = pipeline::run(&cycle_cfg, None).unwrap();
    let cycle_ok = art.phi.coloring.palette_bound == 2
        && art.min_delta.is_some()
        && art.finitary_report.as_ref().map_or(false, |r| r.passed());
    notes.push(format!(
        "C200 Δ=2 two levels: min separating δ = {:?} at ε=4",
        art.min_delta
    ));
    ok &= cycle_ok;

    report(7, ok, Duration::from_secs(300), t0, &notes.join("; "));
}

fn random_colored_pattern(rng: &mut ChaCha8Rng) -> PointedPattern {
    let n = rng.gen_range(2..=8u32);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for u in 1..n {
        edges.push((rng.gen_range(0..u), u)); // spanning tree keeps it connected
    }
    for _ in 0..rng.gen_range(0..=n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    let g = Graph::from_edges(n, &edges, rng.gen_range(0..n)).unwrap();
    let colors: Vec<u64> = (0..n).map(|_| rng.gen_range(0..3u64)).collect();
    let verts: Vec<Vertex> = (0..n).collect();
    let f = move |v: Vertex| colors[v as usize];
    PointedPattern::from_induced(&g, &verts, g.basepoint(), Some(&f))
}

#[test]
fn criterion_08_backtracking_vs_brute_force() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260823);
    let mut ok = true;
    let mut detail = String::new();
    let mut agreements = 0;
    let mut positives = 0;
    for trial in 0..500 {
        let a = random_colored_pattern(&mut rng);
        let b = if trial % 2 == 0 {
            // a relabeled copy of a, found by shuffling local names
            let n = a.adj.len() as u32;
            let mut perm: Vec<u32> = (0..n).collect();
            for i in (1..n as usize).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
            for (u, nb) in a.adj.iter().enumerate() {
                for &v in nb.iter().filter(|&&v| (u as u32) < v) {
                    edges.push((perm[u], perm[v as usize]));
                }
            }
            let g = Graph::from_edges(n, &edges, perm[a.basepoint as usize]).unwrap();
            let colors = a.colors.clone().unwrap();
            let inv: Vec<u32> = {
                let mut inv = vec![0; n as usize];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p as usize] = i as u32;
                }
                inv
            };
            let f = move |v: Vertex| colors[inv[v as usize] as usize];
            let verts: Vec<Vertex> = (0..n).collect();
            PointedPattern::from_induced(&g, &verts, g.basepoint(), Some(&f))
        } else {
            random_colored_pattern(&mut rng)
        };
        let fast = find_pointed_isomorphism(&a, &b).is_some();
        let slow = brute_force_pointed_isomorphism(&a, &b).is_some();
        if fast != slow {
            ok = false;
            detail = format!("trial {trial}: backtracking {fast} vs brute force {slow}");
        } else {
            agreements += 1;
            positives += fast as u32;
        }
    }
    if ok {
        detail = format!("{agreements}/500 agreements ({positives} isomorphic pairs)");
    }
    report(8, ok, Duration::from_secs(30), t0, &detail);
}

#[test]
fn criterion_09_distinguishing_index() {
    let t0 = Instant::now();
    let cases: Vec<(&str, Graph, u64)> = vec![
        ("C5", cycle(5).unwrap(), 3),
        ("K13", complete_bipartite(1, 3).unwrap(), 3),
        ("P3", path(3).unwrap(), 2),
    ];
    let mut got = Vec::new();
    let mut ok = true;
    for (name, g, want) in &cases {
        let di = distinguishing_index(g, 4096).unwrap();
        got.push(format!("DI({name})={di}"));
        ok &= di == *want;
    }
    report(9, ok, Duration::from_secs(5), t0, &got.join(", "));
}

#[test]
fn criterion_10_fault_injection() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();

    // corrupt one cluster assignment: the check fails and names a witness
    let g = cycle(60).unwrap();
    let mut h = build_hierarchy(&g, &[12], &[3], SplitPolicy::AllMinus).unwrap();
    let clean = check_level_invariants(&g, &h, None);
    let victim: Vertex = 20;
    let donor = h.levels[0].assigned[&victim];
    h.levels[0].cluster.get_mut(&donor).unwrap().retain(|&v| v != victim);
    h.levels[0].cluster.get_mut(&0).unwrap().push(victim);
    h.levels[0].assigned.insert(victim, 0);
    let rep = check_level_invariants(&g, &h, None);
    let flipped: Vec<&str> = rep
        .lines
        .iter()
        .filter(|l| {
            l.status == Status::Fail
                && clean.line(&l.id).map_or(true, |c| c.status != Status::Fail)
        })
        .map(|l| l.id.as_str())
        .collect();
    let with_witness = rep
        .lines
        .iter()
        .any(|l| l.status == Status::Fail && !l.witnesses.is_empty());
    ok &= clean.passed() && !flipped.is_empty() && with_witness;
    notes.push(format!(
        "cluster corruption flips {:?} with concrete witnesses",
        flipped
    ));

    // corrupt one color: aperiodicity flips from pass to fail with a witness
    let g5 = cycle(5).unwrap();
    let good = Coloring::new(vec![0, 1, 2, 0, 0], 3);
    let clean = check_aperiodic_finite(&g5, &good, 64).unwrap();
    // recoloring vertex 2 alone makes the reflection through vertex 1 color-preserving
    let bad = Coloring::new(vec![0, 1, 0, 0, 0], 3);
    let rep = check_aperiodic_finite(&g5, &bad, 64).unwrap();
    let flipped_color = clean.passed()
        && !rep.passed()
        && rep
            .lines
            .iter()
            .any(|l| l.status == Status::Fail && !l.witnesses.is_empty());
    ok &= flipped_color;
    notes.push("single-color corruption flips the aperiodicity line with a witness".into());

    report(10, ok, Duration::from_secs(60), t0, &notes.join("; "));
}
