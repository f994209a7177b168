//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero when any
//! criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use homcover::orbits::orbit_partition;
use homcover::verify::{
    check_abelian_formula, check_cover_invariants, check_hall_independence, check_pq_structure, check_tower,
    parse_corpus, CheckReport, SMALL_CORPUS,
};
use homcover::{
    aut_order, build, build_cover, construct_group, count_gamma, find_isomorphism, h_n, hall_phi, is_generating,
    lift_gaschutz, quotient_group, rank, subgroup_lattice, Element, FiniteGroup, Limits,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: homcover::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", e.name()))
}

fn passed(r: &CheckReport) -> Result<(), String> {
    ensure(r.passed, || format!("{} on {}@{} failed: {:?}", r.check, r.group, r.n, r.witness))
}

fn detail<'a>(r: &'a CheckReport, key: &str) -> Result<&'a str, String> {
    r.get(key).ok_or_else(|| format!("{} report has no {key}", r.check))
}

/// Subgroup generated by `gens`, by breadth-first products.
fn span(g: &FiniteGroup, gens: &[Element]) -> usize {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = vec![Element(0)];
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        i += 1;
        for &s in gens {
            let b = g.multiply(a, s);
            if !seen[b.index()] {
                seen[b.index()] = true;
                queue.push(b);
            }
        }
    }
    queue.len()
}

/// The map `s_i -> t_i` extended along words, if well defined.
fn word_map(g: &FiniteGroup, s: &[Element], t: &[Element]) -> bool {
    let mut map: Vec<Option<Element>> = vec![None; g.order()];
    map[0] = Some(Element(0));
    let mut queue = vec![Element(0)];
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        i += 1;
        let fa = map[a.index()].expect("queued elements are mapped");
        for (&x, &y) in s.iter().zip(t) {
            let b = g.multiply(a, x);
            let fb = g.multiply(fa, y);
            match map[b.index()] {
                None => {
                    map[b.index()] = Some(fb);
                    queue.push(b);
                }
                Some(old) if old != fb => return false,
                Some(_) => {}
            }
        }
    }
    true
}

/// Generating pairs and the number of classes under "the map between
/// them extends to an automorphism", by exhaustive search.
fn brute_force_pairs(g: &FiniteGroup) -> (usize, usize) {
    let n = g.order();
    let mut gamma = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let s = [Element(a), Element(b)];
            if span(g, &s) == n {
                gamma.push(s);
            }
        }
    }
    let mut class_of = vec![usize::MAX; gamma.len()];
    let mut classes = 0;
    for i in 0..gamma.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        class_of[i] = classes;
        for j in i + 1..gamma.len() {
            if class_of[j] == usize::MAX && word_map(g, &gamma[i], &gamma[j]) {
                class_of[j] = classes;
            }
        }
        classes += 1;
    }
    (gamma.len(), classes)
}

fn criterion_1() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_homcover"))
        .args(["hn", "--group", "C2xC3", "--n", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0) && stdout == "12\n", || {
        format!("exit {:?}, stdout {stdout:?}", out.status.code())
    })?;
    Ok("h_2(C2xC3) = 12 from the binary".into())
}

fn criterion_2() -> Outcome {
    let g = lib(build("C2^2xC3^2"))?;
    let (gamma, classes) = brute_force_pairs(&g);
    let h = lib(h_n(&g, 2))?;
    ensure(classes == 1 && h == 1, || format!("brute force {classes} classes, library h_2 = {h}"))?;
    let count = lib(count_gamma(&g, 2))?;
    ensure(count == gamma as u128, || format!("brute force |Gamma_2| = {gamma}, library {count}"))?;
    Ok(format!("h_2(C2^2xC3^2) = 1 over {} pairs, |Gamma_2| = {gamma}", g.order().pow(2)))
}

fn cover_isomorphic_to(spec: &str, n: usize, target: &str, limits: &Limits) -> Result<usize, String> {
    let g = lib(build(spec))?;
    let c = lib(build_cover(&g, n, limits))?;
    let cover = lib(c.cover.to_table_backend(limits))?;
    let t = lib(build(target))?;
    ensure(find_isomorphism(&cover, &t).is_some(), || {
        format!("H({n}, {spec}) of order {} is not {target}", cover.order())
    })?;
    Ok(cover.order())
}

fn criterion_3() -> Outcome {
    let limits = Limits::default();
    let a = cover_isomorphic_to("C2", 2, "C2^2", &limits)?;
    let b = cover_isomorphic_to("C2xC2", 2, "C2^2", &limits)?;
    ensure(a == 4 && b == 4, || format!("orders {a}, {b}"))?;
    Ok("H(2,C2) = H(2,C2xC2) = C2^2".into())
}

const ABELIAN_CASES: [(&str, usize); 4] = [("C6", 3), ("C2xC4", 2), ("C2xC3", 2), ("C12", 2)];

fn criterion_4() -> Outcome {
    let limits = Limits::default();
    let mut done = Vec::new();
    for (spec, n) in ABELIAN_CASES {
        let g = lib(build(spec))?;
        let k = g.exponent();
        passed(&lib(check_abelian_formula(&g, n, &limits))?)?;
        let order = cover_isomorphic_to(spec, n, &format!("C{k}^{n}"), &limits)?;
        ensure(order == (k as usize).pow(n as u32), || format!("{spec}: order {order}"))?;
        done.push(format!("H({n},{spec}) = C{k}^{n}"));
    }
    Ok(done.join(", "))
}

/// Criteria 5 and 6 share one pass over the small corpus.
fn criteria_5_6() -> (Outcome, Outcome) {
    let limits = Limits {
        max_candidates: 1 << 31,
        ..Limits::default()
    };
    let entries = match parse_corpus(SMALL_CORPUS) {
        Ok(e) => e,
        Err(e) => return (Err(e.to_string()), Err(e.to_string())),
    };
    let (mut hall_ok, mut free_ok) = (Ok(()), Ok(()));
    let mut cases = 0;
    for entry in &entries {
        let g = match construct_group(&entry.spec, &limits) {
            Ok(g) => g,
            Err(e) => return (Err(e.to_string()), Err(e.to_string())),
        };
        // Sequence lengths start at 1, so the trivial group (rank 0) is checked at 1 and 2.
        let r = rank(&g).max(1);
        for n in [r, r + 1] {
            cases += 1;
            let hall = lib(hall_phi(&g, n as u32, &limits));
            let count = lib(count_gamma(&g, n));
            let part = lib(orbit_partition(&g, n, &limits));
            let case = format!("{}@{n}", entry.spec);
            if hall_ok.is_ok() {
                hall_ok = match (&hall, &count, &part) {
                    (Ok(a), Ok(b), Ok(p)) if a == b && *b == p.gamma_count => Ok(()),
                    _ => Err(format!("{case}: hall {hall:?}, count {count:?}")),
                };
            }
            if free_ok.is_ok() {
                free_ok = match &part {
                    Ok(p) if p.is_free() && p.orbit_sizes.iter().sum::<u128>() == p.gamma_count => Ok(()),
                    Ok(p) => Err(format!("{case}: orbit sizes {:?}, |Aut| {}", p.orbit_sizes, p.aut_order)),
                    Err(e) => Err(format!("{case}: {e}")),
                };
            }
        }
    }
    let summary = format!("{} groups, {cases} cases", entries.len());
    (
        hall_ok.map(|_| format!("hall_phi = count_gamma on {summary}")),
        free_ok.map(|_| format!("every orbit has size |Aut(G)| on {summary}")),
    )
}

fn criterion_7() -> Outcome {
    let limits = Limits::default();
    let a5 = lib(build("A5"))?;
    let gamma = lib(count_gamma(&a5, 2))?;
    let aut = aut_order(&a5);
    let h = lib(h_n(&a5, 2))?;
    ensure((gamma, aut, h) == (2280, 120, 19), || format!("|Gamma_2| {gamma}, |Aut| {aut}, h_2 {h}"))?;
    let brute = brute_force_count(&a5);
    ensure(brute == 2280, || format!("brute force |Gamma_2| = {brute}"))?;
    for (k, want) in [(2, "3600"), (3, "216000")] {
        let r = lib(check_hall_independence(&a5, 2, k, &limits))?;
        passed(&r)?;
        let got = detail(&r, "closure_order")?;
        ensure(got == want, || format!("k = {k}: closure order {got}"))?;
    }
    Ok("A5: 2280 / 120 = 19, closures 3600 and 216000".into())
}

fn brute_force_count(g: &FiniteGroup) -> usize {
    let n = g.order() as u32;
    (0..n)
        .flat_map(|a| (0..n).map(move |b| [Element(a), Element(b)]))
        .filter(|s| span(g, s) == g.order())
        .count()
}

fn criterion_8() -> Outcome {
    let r = lib(check_pq_structure(2, 3, 2, &Limits::default()))?;
    passed(&r)?;
    let expect = [
        ("cover_order", "108"),
        ("v_order", "27"),
        ("v_rank", "3"),
        ("quotient_order", "4"),
        ("center_order", "1"),
        ("eigenspace_0-0", "1"),
        ("eigenspace_0-1", "3"),
        ("eigenspace_1-0", "3"),
        ("eigenspace_1-1", "3"),
    ];
    for (k, v) in expect {
        let got = detail(&r, k)?;
        ensure(got == v, || format!("{k} = {got}, expected {v}"))?;
    }
    Ok("H(2,S3): order 108, V = C3^3, quotient C2^2, trivial center, eigenspaces 3,3,3".into())
}

fn criterion_9() -> Outcome {
    let limits = Limits::default();
    let mut cases: Vec<(&str, usize)> = vec![("C2", 2), ("C2xC2", 2)];
    cases.extend(ABELIAN_CASES);
    cases.push(("pq(2,3)", 2));
    for (spec, n) in &cases {
        let g = lib(build(spec))?;
        let r = lib(check_cover_invariants(&g, *n, &limits))?;
        passed(&r)?;
        let (h, rk) = (detail(&r, "h_cover")?, detail(&r, "rank_cover")?);
        ensure(h == "1" && rk == n.to_string(), || format!("{spec}@{n}: h {h}, rank {rk}"))?;
    }
    Ok(format!("{} covers homogeneous of rank n with preserved invariants", cases.len()))
}

fn criterion_10() -> Outcome {
    let limits = Limits::default();
    for spec in ["C2", "C6"] {
        let g = lib(build(spec))?;
        let r = lib(check_tower(&g, 3, 2, &limits))?;
        passed(&r)?;
        let split = detail(&r, "split")?;
        ensure(split == "true", || format!("{spec}: split = {split}"))?;
    }
    Ok("H(3,G) -> H(2,G) surjective and split for C2, C6".into())
}

fn criterion_11() -> Outcome {
    let limits = Limits::default();
    let entries = lib(parse_corpus(SMALL_CORPUS))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lattices = HashMap::new();
    for trial in 0..100 {
        let entry = &entries[rng.gen_range(0..entries.len())];
        let key = entry.spec.to_string();
        if !lattices.contains_key(&key) {
            let g = lib(construct_group(&entry.spec, &limits))?;
            let normals: Vec<_> = lib(subgroup_lattice(&g, &limits))?
                .normal_subgroups()
                .into_iter()
                .cloned()
                .collect();
            lattices.insert(key.clone(), (g, normals));
        }
        let (g, normals) = &lattices[&key];
        let normal = &normals[rng.gen_range(0..normals.len())];
        let (q, f) = lib(quotient_group(g, normal))?;
        let n = rank(g).max(1) + rng.gen_range(0..2);
        let s = (0..100_000)
            .map(|_| -> Vec<Element> { (0..n).map(|_| Element(rng.gen_range(0..q.order() as u32))).collect() })
            .find(|s| is_generating(&q, s))
            .ok_or_else(|| format!("trial {trial}: no generating sequence of {key}/N found"))?;
        let t = lib(lift_gaschutz(&f, &s))?;
        ensure(span(g, &t) == g.order(), || format!("trial {trial}: lift of {s:?} in {key} does not generate"))?;
        for (a, b) in t.iter().zip(&s) {
            ensure(f.apply(*a) == *b, || format!("trial {trial}: lift of {s:?} in {key} maps to the wrong image"))?;
        }
    }
    Ok(format!("100 lifts over {} groups", lattices.len()))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |id: u32, outcome: Outcome, secs: f64| {
        match &outcome {
            Ok(msg) => println!("PASS criterion {id}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {id}: {msg} ({secs:.1}s)");
            }
        }
    };
    let singles: [(u32, fn() -> Outcome); 4] = [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4)];
    for (id, f) in singles {
        let start = Instant::now();
        report(id, guarded(f), start.elapsed().as_secs_f64());
    }
    let start = Instant::now();
    let (c5, c6) = catch_unwind(criteria_5_6).unwrap_or_else(|_| (Err("panicked".into()), Err("panicked".into())));
    let secs = start.elapsed().as_secs_f64();
    report(5, c5, secs);
    report(6, c6, secs);
    let rest: [(u32, fn() -> Outcome); 5] = [
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    for (id, f) in rest {
        let start = Instant::now();
        report(id, guarded(f), start.elapsed().as_secs_f64());
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
