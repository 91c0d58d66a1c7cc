mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{fixture, opts};
use foidx::analysis::require;
use foidx::{analyze, report, verify, Analysis, Automorphism, Direction, PointKey, Pss, SymbolicPoint, Word};

struct Outcome {
    lines: Vec<String>,
    failed: usize,
}

impl Outcome {
    fn record(&mut self, n: u32, ok: bool, elapsed: Duration, detail: String) {
        let status = if ok { "PASS" } else { "FAIL" };
        let line = format!("{status} criterion {n}: {detail} [{:.3} s]", elapsed.as_secs_f64());
        println!("{line}");
        self.lines.push(line);
        self.failed += usize::from(!ok);
    }
}

fn loops1(phi: &Automorphism) -> BTreeSet<String> {
    let pss = Pss::new(phi);
    pss.loops(1, 1 << 20).unwrap().iter().map(|t| t.display(phi.names())).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn checks_pass(a: &Analysis) -> bool {
    require(&verify(a)).is_ok()
}

fn criterion_1(out: &mut Outcome) {
    let phi = fixture("three_letter");
    let t = Instant::now();
    let a = analyze(&phi, &opts(None, true, 10_000_000)).unwrap();
    let l1 = loops1(&phi);
    let elapsed = t.elapsed();
    let s = a.singularities();
    let counts: Vec<usize> = s.iter().map(|s| s.points.len()).collect();
    let classes: Vec<usize> = s
        .iter()
        .map(|s| if s.label.w.is_empty() { s.h_classes() } else { s.approx_classes() })
        .collect();
    let ok = a.index_times_2 == 4
        && counts == [3, 2, 3]
        && classes == [4, 2, 2]
        && a.components.len() == 2
        && l1 == set(&["(b, a, e)", "(e, b, abac)", "(ba, b, ac)"])
        && checks_pass(&a)
        && elapsed < Duration::from_secs(1);
    let detail = format!(
        "three letters: index {}, points {counts:?}, classes {classes:?}, components {}, L1 {l1:?}",
        a.index_text(),
        a.components.len()
    );
    out.record(1, ok, elapsed, detail);
}

fn criterion_2(out: &mut Outcome) {
    let phi = fixture("four_letter");
    let t = Instant::now();
    let a = analyze(&phi, &opts(None, true, 10_000_000)).unwrap();
    let l1 = loops1(&phi);
    let elapsed = t.elapsed();
    let want = set(&[
        "(e, a, bdacd)",
        "(abd, a, cd)",
        "(a, b, dbd)",
        "(abd, b, d)",
        "(a, c, cd)",
        "(ac, c, d)",
        "(ac, d, e)",
    ]);
    let s = a.singularities();
    let mut fixed = false;
    let mut shown = String::new();
    if let [c] = a.components.as_slice() {
        if let [u] = c.basis.as_slice() {
            let img = phi.apply(u, c.phi_power as u32, Direction::Forward, 1 << 20).unwrap();
            fixed = c.conjugator.inverse().concat(&img).concat(&c.conjugator) == *u
                && !u.is_pure_positive()
                && !u.is_pure_negative();
            shown = format!("u = {}, conjugator {}", phi.fmt_word(u), phi.fmt_word(&c.conjugator));
        }
    }
    let ok = a.index_times_2 == 6
        && s.len() == 6
        && s.iter().all(|s| s.points.len() == 2)
        && a.components.len() == 1
        && a.components[0].rank == 1
        && l1 == want
        && fixed
        && checks_pass(&a)
        && elapsed < Duration::from_secs(5);
    let detail = format!(
        "four letters: index {}, {} singularities, {} components, rank {}, L1 matches {}, {shown} fixed {fixed}",
        a.index_text(),
        s.len(),
        a.components.len(),
        a.components.first().map_or(0, |c| c.rank),
        l1 == want
    );
    out.record(2, ok, elapsed, detail);
}

fn criterion_3(out: &mut Outcome) {
    let phi = fixture("six_letter");
    let t = Instant::now();
    let a = analyze(&phi, &opts(Some(5), false, 10_000_000)).unwrap();
    let pss = Pss::new(&phi);
    let key = PointKey::Periodic { c: 0, b: 0, offset: 0 };
    let minimal = (1..=60u64).find(|&m| pss.is_fixed(&key, &Word::empty(), 1, m).unwrap());
    let found = a
        .singularities()
        .iter()
        .find_map(|s| s.points.iter().position(|p| *p == key).map(|i| (s, s.label.k as u64 * s.point_powers[i])));
    let elapsed = t.elapsed();
    let (u, v) = pss.expand_key(&key, 8).unwrap();
    let a_letter = phi.word("a").unwrap();
    let u_lim = phi.apply(&a_letter.inverse(), 12, Direction::Forward, 1 << 22).unwrap();
    let v_lim = phi.apply(&a_letter, 10, Direction::Forward, 1 << 22).unwrap();
    let is_point = u == u_lim.slice(0, 8) && v == v_lim.slice(0, 8);
    let power = found.map(|(_, p)| p);
    let ok = is_point
        && minimal == Some(30)
        && power == Some(30)
        && checks_pass(&a)
        && elapsed < Duration::from_secs(5);
    let detail = format!(
        "six letters, max-k 5: point a^-1.a has minimal phi power {minimal:?}, in singularity with point power {power:?}, label k {:?}",
        found.map(|(s, _)| s.label.k)
    );
    out.record(3, ok, elapsed, detail);
}

fn criterion_4(out: &mut Outcome) {
    let phi = fixture("fourteen_letter");
    let t = Instant::now();
    let a = analyze(&phi, &opts(Some(10), false, 300_000_000)).unwrap();
    let elapsed = t.elapsed();
    let eps: Vec<_> = a.singularities().iter().filter(|s| s.label.w.is_empty()).collect();
    let merged = eps.iter().find(|s| s.points.len() == 14);
    let pss = Pss::new(&phi);
    let powers: BTreeSet<u64> = merged
        .map(|s| {
            s.points
                .iter()
                .filter_map(|p| (1..=70u64).find(|&m| pss.is_fixed(p, &Word::empty(), 1, m).unwrap()))
                .collect()
        })
        .unwrap_or_default();
    let ok = merged.is_some_and(|s| s.phi_power == 70)
        && powers == [2, 5, 7].into_iter().collect()
        && checks_pass(&a)
        && elapsed < Duration::from_secs(60);
    let detail = format!(
        "fourteen letters, max-k 10: merged singularity {:?} points, phi power {:?}, minimal point powers {powers:?}, k reached {}, complete {}",
        merged.map(|s| s.points.len()),
        merged.map(|s| s.phi_power),
        a.sweep.k_reached,
        a.complete()
    );
    out.record(4, ok, elapsed, detail);
}

fn criterion_5(out: &mut Outcome) {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=4usize {
        let phi = fixture(&format!("family_{n}"));
        let a = analyze(&phi, &opts(None, false, 10_000_000)).unwrap();
        let f2 = foidx::sgraph::formula_two(a.singularities()).ok();
        let f1: i64 = a.singularities().iter().map(|s| s.h_classes() as i64 - 2).sum();
        ok &= a.complete()
            && a.sweep.k_reached as usize == 4 * n - 4
            && a.index_times_2 <= 2 * (n as i64 - 1)
            && f2 == Some(f1)
            && checks_pass(&a);
        parts.push(format!(
            "N={n}: index {}, complete {}, max rho power {} (2N-2 = {})",
            a.index_text(),
            a.complete(),
            a.max_rho_power,
            2 * n - 2
        ));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    out.record(5, ok, elapsed, format!("family: {}", parts.join("; ")));
}

fn loop_points(pss: &Pss, k: u32) -> Vec<SymbolicPoint> {
    let mut out = Vec::new();
    for t in pss.loops(k, 1 << 20).unwrap() {
        if !t.p.is_empty() && !t.s.is_empty() {
            out.push(SymbolicPoint { anchor: t.clone(), shift: 0, seed: None });
        }
        for seed in pss.seeds_for(&t) {
            out.push(SymbolicPoint { anchor: t.clone(), shift: 0, seed: Some(seed) });
        }
    }
    out
}

fn criterion_6(out: &mut Outcome) {
    let t = Instant::now();
    let names = ["three_letter", "four_letter", "fibonacci", "family_2", "family_3", "family_4"];
    let mut ok = true;
    let mut failures = Vec::new();
    let (mut round_trips, mut shifts, mut pairs) = (0usize, 0usize, 0usize);
    for name in names {
        let phi = fixture(name);
        let a = analyze(&phi, &opts(None, false, 10_000_000)).unwrap();
        for c in verify(&a).iter().filter(|c| !c.ok) {
            failures.push(format!("{name}: {}", c.name));
        }
        let pss = Pss::new(&phi);
        for k in 1..=4u32 {
            let loops = pss.loops(k, 1 << 22).unwrap();
            let imgs = phi.power_images(k, Direction::Forward, 1 << 22).unwrap();
            let occ: usize =
                imgs.iter().enumerate().map(|(x, w)| w.letters().iter().filter(|l| l.idx() == x).count()).sum();
            if loops.len() != occ {
                failures.push(format!("{name}: loop count at k={k}"));
            }
            for l in &loops {
                round_trips += 1;
                if pss.recompose(&pss.desubstitute(l), 1 << 22).ok().as_ref() != Some(l) {
                    failures.push(format!("{name}: round trip"));
                }
            }
        }
        let pts = loop_points(&pss, 2);
        for (i, p) in pts.iter().enumerate() {
            let key = pss.key_of(p).unwrap();
            for m in [-17i128, -3, 1, 9, 41] {
                if let Ok(moved) = pss.shift_key(&key, m) {
                    shifts += 1;
                    if pss.shift_key(&moved, -m).ok().as_ref() != Some(&key) {
                        failures.push(format!("{name}: shift {m}"));
                    }
                }
            }
            let q = &pts[(i * 7 + 3) % pts.len()];
            for d in [-1i128, 0, 1] {
                let mut y = q.clone();
                y.shift += d;
                let mut z = p.clone();
                z.shift += d;
                for other in [y, z] {
                    pairs += 1;
                    let want = pss.expand_point(p, 200, 1 << 24).unwrap() == pss.expand_point(&other, 200, 1 << 24).unwrap();
                    if pss.points_equal(p, &other).ok() != Some(want) {
                        failures.push(format!("{name}: points_equal"));
                    }
                }
            }
        }
    }
    ok &= failures.is_empty() && round_trips >= 200 && pairs >= 100;
    let elapsed = t.elapsed();
    let detail = format!(
        "invariant suite on {} inputs, {round_trips} round trips, {shifts} shift pairs, {pairs} equality pairs, failures {failures:?}",
        names.len()
    );
    out.record(6, ok, elapsed, detail);
}

fn criterion_7(out: &mut Outcome) {
    let t = Instant::now();
    let runs: [(&str, Option<u32>, usize); 7] = [
        ("three_letter", None, 10_000_000),
        ("four_letter", None, 10_000_000),
        ("fibonacci", None, 10_000_000),
        ("family_3", None, 10_000_000),
        ("family_4", None, 10_000_000),
        ("six_letter", Some(5), 10_000_000),
        ("fourteen_letter", Some(7), 250_000_000),
    ];
    let mut differing = Vec::new();
    for (name, max_k, budget) in runs {
        let phi = fixture(name);
        let render = || {
            let a = analyze(&phi, &opts(max_k, false, budget)).unwrap();
            (report::json(&a).unwrap(), report::dot(&a))
        };
        if render() != render() {
            differing.push(name);
        }
    }
    let elapsed = t.elapsed();
    let detail = format!("two runs per example, {} examples, differing {differing:?}", runs.len());
    out.record(7, differing.is_empty(), elapsed, detail);
}

fn main() {
    let mut out = Outcome { lines: Vec::new(), failed: 0 };
    criterion_1(&mut out);
    criterion_2(&mut out);
    criterion_3(&mut out);
    criterion_4(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);
    println!("acceptance: {} of {} criteria pass", out.lines.len() - out.failed, out.lines.len());
    if out.failed > 0 {
        std::process::exit(1);
    }
}
