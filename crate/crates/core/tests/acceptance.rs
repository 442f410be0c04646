//! One line per acceptance criterion. Exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bsgroupoid::bs::{classify_isomorphism, is_identity, normalize, BSParams, GroupWord};
use bsgroupoid::cocycle::{witness_values_at, BSLevelModel};
use bsgroupoid::suite::{cocycle_laws, dynamics_laws, groupoid_laws, rng, Tally};
use bsgroupoid::tree::{stabilizer_index, TreeVertex, DEFAULT_RADIUS};
use common::profinite::{check_limit_lemmas, PARAMS};
use common::tree::{ball, smallest_power};
use common::words::{oracle_is_identity, random_trivial_word, random_word};
use num_bigint::BigInt;

const SEED: u64 = 20_240_917;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_tally(t: &Tally) -> Outcome {
    let checks: u64 = t.results().iter().map(|r| r.checks).sum();
    let failed: Vec<String> = t
        .results()
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}: {}", r.name, r.first_failure.as_deref().unwrap_or("no checks ran")))
        .collect();
    Outcome {
        passed: failed.is_empty() && checks > 0,
        detail: if failed.is_empty() { format!("{checks} checks") } else { failed.join("; ") },
    }
}

fn repeat(seed: u64, n: usize, f: impl Fn(&mut Tally, &mut rand_chacha::ChaCha8Rng)) -> Tally {
    let mut t = Tally::new();
    let mut r = rng(seed);
    for _ in 0..n {
        f(&mut t, &mut r);
    }
    t
}

fn c1_level_models() -> Outcome {
    let mut t = Tally::new();
    for (p, q) in [(2, 3), (2, 5), (4, 6), (6, 9), (2, -3)] {
        let params = BSParams::new(p, q).expect("valid");
        for k in 1..=2 {
            for l in 0..=2 {
                let m = BSLevelModel::new(params, k, l).expect("valid level");
                let w = witness_values_at(&m.groupoid, &m.s, &m.t_map);
                let Ok(w) = w else {
                    t.check("witness values", false, || format!("BS({p},{q}) level ({k},{l}): {w:?}"));
                    continue;
                };
                for (x, a) in m.t_map.pairs() {
                    let ok = &w.d[&x] * &w.i[&x] == params.modulus_ratio();
                    t.check("D·I = |q/p| on t-arrows", ok, || format!("BS({p},{q}) level ({k},{l}) arrow {a}"));
                }
            }
        }
    }
    from_tally(&t)
}

fn c2_index() -> Outcome {
    from_tally(&repeat(SEED, 500, groupoid_laws::index_laws))
}

fn c3_local_index() -> Outcome {
    let mut t = repeat(SEED ^ 1, 200, groupoid_laws::local_index_laws);
    t.merge(repeat(SEED ^ 2, 50, groupoid_laws::local_index_group_law));
    from_tally(&t)
}

fn c4_quotient() -> Outcome {
    from_tally(&repeat(SEED ^ 3, 100, groupoid_laws::quotient_laws))
}

fn c5_cohomology() -> Outcome {
    from_tally(&repeat(SEED ^ 4, 100, cocycle_laws::cohomology_laws))
}

fn c6_mackey_flow() -> Outcome {
    let mut t = repeat(SEED ^ 5, 50, cocycle_laws::mackey_laws);
    cocycle_laws::flow_product_laws(&mut t);
    from_tally(&t)
}

fn c7_types() -> Outcome {
    let mut t = Tally::new();
    cocycle_laws::type_laws(&mut t);
    from_tally(&t)
}

fn c8_stabilizers() -> Outcome {
    let mut t = Tally::new();
    let v0 = TreeVertex::base();
    for (p, q) in [(2, 3), (4, 6)] {
        let params = BSParams::new(p, q).expect("valid");
        for (v, _) in ball(&params, 4) {
            let got = stabilizer_index(&v0, &v, &params, DEFAULT_RADIUS).ok();
            let want = smallest_power(&GroupWord::identity(), &v.word(), &params).map(BigInt::from);
            t.check("stabilizer index", got.is_some() && got == want, || {
                format!("BS({p},{q}) vertex {v}: {got:?} vs {want:?}")
            });
        }
    }
    from_tally(&t)
}

fn c9_profinite() -> Outcome {
    let mut t = Tally::new();
    for (p, q) in PARAMS {
        let c = check_limit_lemmas(p, q, 10_000, 10_000);
        t.check("limit lemmas", c.failures.is_empty() && c.levels > 0, || {
            format!("BS({p},{q}): {:?}", c.failures.first())
        });
    }
    from_tally(&t)
}

fn c10_dynamics() -> Outcome {
    from_tally(&dynamics_laws::run(SEED))
}

fn c11_words() -> Outcome {
    let mut t = Tally::new();
    let mut r = rng(SEED ^ 11);
    let params: Vec<BSParams> = [(2, 3), (2, 5), (4, 6), (6, 9), (2, -3)]
        .iter()
        .map(|&(p, q)| BSParams::new(p, q).expect("valid"))
        .collect();
    for i in 0..100_000usize {
        let bp = &params[i % params.len()];
        let w = if i % 2 == 0 { random_word(&mut r, 10) } else { random_trivial_word(&mut r, bp) };
        let nf = normalize(&w, bp);
        let back = nf.to_word();
        let ok = is_identity(&w, bp) == oracle_is_identity(&w, bp)
            && oracle_is_identity(&w.mul(&back.inverse()), bp)
            && normalize(&back, bp) == nf;
        t.check("Britton round trip", ok, || format!("BS({},{}) word {w}", bp.p, bp.q));
    }
    let range: Vec<i64> = (-6..=6).filter(|&x| x != 0).collect();
    for &p in &range {
        for &q in &range {
            for &r in &range {
                for &s in &range {
                    let (mut a, mut b) = ([p.abs(), q.abs()], [r.abs(), s.abs()]);
                    a.sort_unstable();
                    b.sort_unstable();
                    let want = a == b && (p - q).abs() == (r - s).abs();
                    t.check("isomorphism classifier", classify_isomorphism(p, q, r, s) == want, || {
                        format!("({p},{q}) vs ({r},{s})")
                    });
                }
            }
        }
    }
    from_tally(&t)
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 11] = [
        ("level-model cocycle identity", Some(Duration::from_secs(5)), c1_level_models),
        ("index laws", Some(Duration::from_secs(30)), c2_index),
        ("local index", None, c3_local_index),
        ("quotient contract", None, c4_quotient),
        ("cocycle cohomology", None, c5_cohomology),
        ("Mackey range and flows", None, c6_mackey_flow),
        ("type classification", None, c7_types),
        ("stabilizer index", Some(Duration::from_secs(60)), c8_stabilizers),
        ("profinite lemmas", None, c9_profinite),
        ("dynamics", None, c10_dynamics),
        ("word algebra", None, c11_words),
    ];
    let mut all = true;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = out.passed && in_time;
        all &= passed;
        let budget = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
        println!(
            "{} {:>2} {:<30} {:>8.2}s{budget}  {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
