//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use quivermod_core::affine::{enumerate_affine, is_simple_dimvector};
use quivermod_core::bounds::{lemma_checks, theorem_bounds, verify_bounds};
use quivermod_core::enumerate::{distinct_pairs_prefiltered, enumerate_fundamental, is_fundamental_candidate, matrix_prefilter, EnumerationLimits};
use quivermod_core::forms::cartan_with_unit;
use quivermod_core::oracle::brute_force_embeds;
use quivermod_core::reductions::{admissible_moves, apply_move, apply_sigma, apply_tau, is_large, is_small_sink, is_small_source, Move};
use quivermod_core::search::{is_tau_sigma_minimal, is_tau_sigma_minimal_default, reachable_pairs, replay, ClassPredicate};
use quivermod_core::stability::{moduli_dimension, stability_verdict, EmbeddingOracle, VerdictTag};
use quivermod_core::{analyze_fundamental, canonical_key, in_fundamental_set, QuiverError, QuiverPair, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn criterion_1() -> Outcome {
    let f = fixture("fig1");
    let (p, theta) = (&f.pair, f.theta.as_ref().ok_or("fixture has no theta")?);
    let v3 = p.quiver().index_of("v3").map_err(e)?;
    ensure(!in_fundamental_set(p) && cartan_with_unit(p, v3) == 1, "(a) fundamental-set test")?;
    ensure(stability_verdict(p, theta).map_err(e)?.tag == VerdictTag::Stable, "(b) not Stable")?;
    let v1 = p.quiver().index_of("v1").map_err(e)?;
    let v2 = p.quiver().index_of("v2").map_err(e)?;
    ensure((0..3).all(|v| !is_large(p, v)), "(c) a large vertex exists")?;
    ensure(is_small_source(p, v1) && is_small_sink(p, v2), "(c) v1/v2 not small source/sink")?;
    let report = is_tau_sigma_minimal(p, &ClassPredicate::AllSincere, 6, 60).map_err(e)?;
    ensure(report.is_minimal(), "(d) search found a witness")?;
    let reached = reachable_pairs(p, 6, 60).map_err(e)?;
    let bad = reached.iter().find(|r| r.pair.alpha().total() < 6 || r.pair.quiver().vertex_count() != 3);
    ensure(bad.is_none(), "(d) divergence property violated")?;
    let dim = moduli_dimension(p, theta).map_err(e)?;
    ensure(dim == 4, format!("(e) moduli dimension {dim}"))?;
    Ok(format!("explored {} classes, all |alpha| >= 6 on 3 vertices; dim = 4", reached.len()))
}

fn criterion_2() -> Outcome {
    let p = fixture("defn23").pair;
    let u = p.quiver().index_of("u").map_err(e)?;
    let second = apply_sigma(&p, u, None).map_err(e)?.pair;
    ensure(p.alpha().0[u] == 2 && second.alpha().0[u] == 3, "sigma_u does not map 2 -> 3")?;
    let w = second.quiver().index_of("w").map_err(e)?;
    ensure(is_large(&second, w), "w is not large after sigma_u")?;
    let third = apply_tau(&second, w, None).map_err(e)?.pair;
    ensure(third.quiver().vertex_count() == 3, "tau_w does not leave 3 vertices")?;
    let report = is_tau_sigma_minimal_default(&p, &ClassPredicate::AllSincere).map_err(e)?;
    let witness = report.witness().ok_or("reported minimal")?;
    let names: Vec<String> = witness.iter().map(ToString::to_string).collect();
    ensure(witness.len() == 2, format!("witness {names:?}"))?;
    ensure(replay(&p, witness).map_err(e)?.quiver().vertex_count() == 3, "witness does not replay")?;
    Ok(format!("witness [{}]", names.join(", ")))
}

fn criterion_3() -> Outcome {
    let quivers = [("K2", kronecker(2)), ("A2", kronecker(1)), ("K3", kronecker(3)), ("Fig1", fig1_quiver())];
    let mut total = 0usize;
    for (name, q) in &quivers {
        let oracle = EmbeddingOracle::new(q);
        for alpha in vectors_up_to_total(q.vertex_count(), 5) {
            for beta in below(&alpha) {
                let fast = oracle.embeds(&beta, &alpha).map_err(e)?;
                let slow = brute_force_embeds(q, &beta, &alpha).map_err(e)?;
                ensure(fast == slow, format!("{name}: beta={beta} alpha={alpha}: recursion {fast}, brute force {slow}"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} (beta, alpha) pairs agree"))
}

fn criterion_4() -> Outcome {
    let theta = Weight(vec![-1, 1]);
    let one = QuiverPair::new(kronecker(2), dv(&[1, 1])).map_err(e)?;
    ensure(stability_verdict(&one, &theta).map_err(e)?.tag == VerdictTag::Stable, "(1,1) not Stable")?;
    for n in 2..=4 {
        let p = QuiverPair::new(kronecker(2), dv(&[n, n])).map_err(e)?;
        let v = stability_verdict(&p, &theta).map_err(e)?;
        ensure(
            v.tag == VerdictTag::SemistableNotStable && v.witness == Some(dv(&[1, 1])),
            format!("({n},{n}): {v:?}"),
        )?;
    }
    Ok("(1,1) Stable; (n,n) SemistableNotStable with witness (1,1) for n = 2..4".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut instances, mut sigmas) = (0, 0);
    let mut attempts = 0;
    while instances < 500 {
        attempts += 1;
        ensure(attempts < 200_000, "could not generate enough instances")?;
        let p = random_pair(&mut rng, 4, 6, 4, true);
        let theta = balanced_weight(&mut rng, p.alpha());
        for mv in admissible_moves(&p) {
            let r = match apply_move(&p, mv, Some(&theta)) {
                Ok(r) => r,
                Err(QuiverError::WeightIncompatible { .. }) => continue,
                Err(err) => return Err(err.to_string()),
            };
            instances += 1;
            let t2 = r.weight.as_ref().ok_or("weight not transported")?;
            ensure(t2.pair(r.pair.alpha()).map_err(e)? == 0, format!("conservation fails for {mv:?}"))?;
            if let Move::Sigma(u) = mv {
                sigmas += 1;
                let back = apply_sigma(&r.pair, u, Some(t2)).map_err(e)?;
                ensure(back.pair == p && back.weight.as_ref() == Some(&theta), "sigma is not an involution")?;
            }
        }
    }
    Ok(format!("{instances} instances ({sigmas} reflections), zero failures"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut instances = 0;
    let mut attempts = 0;
    while instances < 200 {
        attempts += 1;
        ensure(attempts < 200_000, "could not generate enough instances")?;
        let p = random_pair(&mut rng, 4, 5, 3, false);
        let moves = admissible_moves(&p);
        if moves.is_empty() {
            continue;
        }
        let theta = balanced_weight(&mut rng, p.alpha());
        if stability_verdict(&p, &theta).map_err(e)?.tag != VerdictTag::Stable {
            continue;
        }
        for mv in moves {
            let r = apply_move(&p, mv, Some(&theta)).map_err(|err| format!("{mv:?} on a stable pair: {err}"))?;
            let t2 = r.weight.as_ref().ok_or("weight not transported")?;
            let v = stability_verdict(&r.pair, t2).map_err(e)?;
            ensure(v.tag == VerdictTag::Stable, format!("{mv:?} loses stability: {v:?}"))?;
            instances += 1;
        }
    }
    Ok(format!("{instances} stable instances preserved"))
}

fn window_7() -> EnumerationLimits {
    EnumerationLimits { max_vertices: 4, max_arrows: 6, max_entry: 3 }
}

fn criterion_7() -> Outcome {
    let mut rows = 0;
    for d in 2..=3 {
        let pairs = distinct_pairs_prefiltered(&window_7(), false, |m, a| matrix_prefilter(m, a, d), |p| is_fundamental_candidate(p, d))
            .map_err(e)?;
        for (_, p) in pairs {
            let a = analyze_fundamental(&p).map_err(e)?;
            ensure(a.q_plus_components.iter().all(|(_, c)| c.is_dynkin()), format!("non-Dynkin component in {p:?}"))?;
            let failed: Vec<_> = lemma_checks(&p).map_err(e)?.into_iter().filter(|c| !c.holds).collect();
            ensure(failed.is_empty(), format!("{failed:?}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} pairs (d = 2, 3), all checks hold"))
}

fn criterion_8() -> Outcome {
    ensure(theorem_bounds(2).vertices == 470, "d = 2 vertex bound is not 470")?;
    let mut summary = Vec::new();
    for d in 2..=3 {
        let rows = enumerate_fundamental(d, &window_7()).map_err(e)?;
        let report = verify_bounds(&rows);
        ensure(report.passed(), format!("d = {d}: {:?}", report.violations))?;
        summary.push(format!("d={d}: {} rows, {} minimal", report.rows, report.minimal_rows));
    }
    Ok(summary.join("; "))
}

fn criterion_9() -> Outcome {
    let rows = enumerate_affine(2, None, false).map_err(e)?;
    ensure(rows.len() == 1, format!("{} rows", rows.len()))?;
    let p = &rows[0].pair;
    ensure(
        p.quiver().vertex_count() == 1 && p.quiver().loops_at(0) == 2 && p.alpha().0 == [1],
        "row is not the two-loop quiver with alpha = (1)",
    )?;
    let two_loops = |n| QuiverPair::new(quiver(1, &[(0, 0), (0, 0)]), dv(&[n])).unwrap();
    ensure((1..=6).all(|n| is_simple_dimvector(&two_loops(n))), "two-loop quiver")?;
    let cycle = quiver(3, &[(0, 1), (1, 2), (2, 0)]);
    ensure(is_simple_dimvector(&QuiverPair::new(cycle.clone(), dv(&[1, 1, 1])).unwrap()), "3-cycle, alpha = 1")?;
    ensure(!is_simple_dimvector(&QuiverPair::new(cycle, dv(&[2, 2, 2])).unwrap()), "3-cycle, alpha = 2")?;
    let acyclic = QuiverPair::new(kronecker(2), dv(&[1, 2])).unwrap();
    ensure(!is_simple_dimvector(&acyclic), "acyclic")?;
    Ok("d = 2 gives exactly the two-loop quiver with alpha = (1); simple-vector examples match".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut keys = Vec::new();
    for name in FIXTURES {
        let p = fixture(name).pair;
        let key = canonical_key(&p);
        for _ in 0..100 {
            ensure(canonical_key(&random_relabel(&mut rng, &p)) == key, format!("{name}: key changed under relabeling"))?;
        }
        keys.push(key);
    }
    let mut distinct = keys.clone();
    distinct.sort();
    distinct.dedup();
    ensure(distinct.len() == keys.len(), "two fixtures share a key")?;
    Ok(format!("{} fixtures x 100 relabelings stable, keys distinct", keys.len()))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "worked example of the stable non-fundamental pair", 1, criterion_1),
        (2, "three-picture reduction example", 1, criterion_2),
        (3, "stability oracle cross-validation", 60, criterion_3),
        (4, "Kronecker ladder", 1, criterion_4),
        (5, "reduction conservation and involution", 10, criterion_5),
        (6, "stability transport", 120, criterion_6),
        (7, "fundamental-set structure suite", 60, criterion_7),
        (8, "theorem bound check", 60, criterion_8),
        (9, "affine suite", 10, criterion_9),
        (10, "canonicalization", 10, criterion_10),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("over the {limit}s limit")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {n:>2} {tag} [{:.2}s / {limit}s] {name}: {detail}", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
