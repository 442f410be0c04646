use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::*;
use crate::bs::{
    classify_isomorphism, conjugation_exponents, elliptic_center, is_amenable, modular_hom, normalize, words_equal,
    BSParams, GroupWord,
};
use crate::cocycle::{
    classify_type, flow_type, mackey_range, modular_cocycles, witness_values_at, BSLevelModel, CocycleGraph, FlowType,
    GroupoidCocycle,
};
use crate::dynamics::{
    beta_step, cesaro_mixing_test, component_counts, coupling_action, l_theta, n_elements, odometer, periodicity_check,
    rotation_model_orbit, BernoulliShift, CesaroSets, CouplingPoint, Surd, ThetaValue,
};
use crate::groupoid::{
    ergodic_decomposition, index, is_quasinormal, local_index, quotient, uniform_masses, verify_quotient,
    FiniteMeasuredGroupoid, GroupoidDoc, Subgroupoid,
};
use crate::profinite::{check_unit_fixes_level, generalized_valuation, modulus, u0_membership, TruncatedProfiniteInt};
use crate::suite::{cocycle_laws::product_model, run_dynamics, run_lemmas, LemmaCounts};
use crate::tree::{canonical_vertex, distance, geodesic, neighbors, stabilizer_index, TreeVertex};

type Res = Result<Report, CliError>;

fn params(a: &ParamArgs) -> Result<BSParams, CliError> {
    Ok(BSParams::new(a.p, a.q)?)
}

fn word(s: &str) -> Result<GroupWord, CliError> {
    Ok(s.parse()?)
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("expected a rational such as 3/7, got {s:?}")))
}

fn theta(s: &str) -> Result<ThetaValue, CliError> {
    Ok(s.parse()?)
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("expected comma-separated integers, got {s:?}"))))
        .collect()
}

/// Malformed JSON is a usage error; a table that parses but breaks an
/// axiom is reported by the caller.
fn read_doc(path: &Path) -> Result<GroupoidDoc, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_groupoid(path: &Path) -> Result<FiniteMeasuredGroupoid, CliError> {
    let g = read_doc(path)?.to_groupoid()?;
    g.validate()?;
    Ok(g)
}

fn sub(g: &FiniteMeasuredGroupoid, arrows: &Option<String>) -> Result<Subgroupoid, CliError> {
    let seeds = match arrows {
        Some(s) => list(s)?,
        None => Vec::new(),
    };
    if let Some(&bad) = seeds.iter().find(|&&a| a >= g.n_arrows()) {
        return Err(CliError::Usage(format!("arrow {bad} out of range (n = {})", g.n_arrows())));
    }
    Ok(Subgroupoid::generated(g, &seeds))
}

pub fn dispatch(cli: &Cli) -> Res {
    match &cli.command {
        Command::Bs(c) => bs(c),
        Command::Tree(c) => tree(c),
        Command::Groupoid(c) => groupoid(c),
        Command::Cocycle(c) => cocycle(c),
        Command::Profinite(c) => profinite(c),
        Command::Dynamics(c) => dynamics(c, cli.seed),
        Command::Suite(a) => suite(a, cli.seed),
    }
}

fn bs(c: &BsCmd) -> Res {
    Ok(match c {
        BsCmd::Modular { params: p, word: w } => {
            let m = modular_hom(&word(w)?, &params(p)?);
            Report::new(json!({ "value": m.value.to_string() }))
        }
        BsCmd::NormalForm { params: p, word: w } => {
            let nf = normalize(&word(w)?, &params(p)?);
            Report::new(json!({ "normal_form": nf.to_string(), "t_length": nf.t_length() }))
        }
        BsCmd::Equal { params: p, word: w, other } => {
            Report::new(json!({ "equal": words_equal(&word(w)?, &word(other)?, &params(p)?) }))
        }
        BsCmd::Elliptic { params: p, word: w } => match elliptic_center(&word(w)?, &params(p)?) {
            Some((h, c)) => Report::new(json!({ "elliptic": true, "conjugator": h.to_string(), "power": c.to_string() })),
            None => Report::new(json!({ "elliptic": false })),
        },
        BsCmd::Conjugation { params: p, g, x, bound } => {
            let (n, m) = conjugation_exponents(&word(g)?, &word(x)?, &params(p)?, *bound)?;
            Report::new(json!({ "n": n.to_string(), "m": m.to_string() }))
        }
        BsCmd::Isomorphic { p, q, r, s } => {
            if [p, q, r, s].iter().any(|v| **v == 0) {
                return Err(CliError::Usage("parameters must be nonzero".into()));
            }
            Report::new(json!({ "isomorphic": classify_isomorphism(*p, *q, *r, *s) }))
        }
        BsCmd::Amenable { p, q } => {
            if *p == 0 || *q == 0 {
                return Err(CliError::Usage("parameters must be nonzero".into()));
            }
            Report::new(json!({ "amenable": is_amenable(*p, *q) }))
        }
    })
}

fn vertex(s: &str, p: &BSParams) -> Result<TreeVertex, CliError> {
    Ok(canonical_vertex(&word(s)?, p))
}

fn tree(c: &TreeCmd) -> Res {
    Ok(match c {
        TreeCmd::Neighbors { params: p, vertex: v } => {
            let p = params(p)?;
            let v = vertex(v, &p)?;
            let ns: Vec<Value> = neighbors(&v, &p)
                .into_iter()
                .map(|(e, w)| json!({ "vertex": w.to_string(), "sign": e.sign }))
                .collect();
            Report::new(json!({ "vertex": v.to_string(), "neighbors": ns }))
        }
        TreeCmd::Distance { params: p, from, to } => {
            let p = params(p)?;
            Report::new(json!({ "distance": distance(&vertex(from, &p)?, &vertex(to, &p)?, &p) }))
        }
        TreeCmd::Geodesic { params: p, from, to } => {
            let p = params(p)?;
            let path = geodesic(&vertex(from, &p)?, &vertex(to, &p)?, &p, usize::MAX)?;
            let edges: Vec<Value> = path
                .iter()
                .map(|e| json!({ "from": e.from_vertex().to_string(), "to": e.to_vertex().to_string(), "sign": e.sign }))
                .collect();
            Report::new(json!({ "length": path.len(), "edges": edges }))
        }
        TreeCmd::StabilizerIndex { params: p, from, to, radius, verify } => {
            let p = params(p)?;
            let (u, v) = (vertex(from, &p)?, vertex(to, &p)?);
            let got = stabilizer_index(&u, &v, &p, *radius)?;
            if !*verify {
                return Ok(Report::new(json!({ "index": got.to_string() })));
            }
            // smallest n with u aⁿ u⁻¹ fixing v
            let uw = u.word();
            let bound = 1_000_000i64;
            let brute = (1..=bound).find(|&n| {
                let g = uw.mul(&GroupWord::a_pow(n)).mul(&uw.inverse());
                v.is_fixed_by(&g, &p)
            });
            let ok = brute.map(BigInt::from) == Some(got.clone());
            Report::verified(
                json!({ "index": got.to_string(), "smallest_power": brute, "agree": ok }),
                ok,
                || format!("formula gives {got}, smallest fixing power is {brute:?}"),
            )
        }
    })
}

fn groupoid(c: &GroupoidCmd) -> Res {
    Ok(match c {
        GroupoidCmd::Validate { input } => {
            let doc = read_doc(input)?;
            let res = doc.to_groupoid().and_then(|g| g.validate().map(|_| g));
            match res {
                Ok(g) => Report::new(json!({
                    "valid": true,
                    "units": g.n_units(),
                    "arrows": g.n_arrows(),
                    "measure_preserving": g.is_measure_preserving(),
                })),
                Err(e) => {
                    let msg = e.to_string();
                    Report::verified(json!({ "valid": false, "error": msg }), false, || msg.clone())
                }
            }
        }
        GroupoidCmd::FromAction { gens, masses } => {
            let perms: Vec<(String, Vec<u32>)> = gens
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((format!("g{i}"), list(s)?.into_iter().map(|x| x as u32).collect())))
                .collect::<Result<_, CliError>>()?;
            let n = perms.first().map_or(0, |p| p.1.len());
            let masses = match masses {
                Some(m) => m.split(',').map(rational).collect::<Result<Vec<_>, _>>()?,
                None => uniform_masses(n),
            };
            let g = FiniteMeasuredGroupoid::from_group_action(masses, &perms, crate::groupoid::DEFAULT_GROUP_BOUND)?;
            Report::new(serde_json::to_value(GroupoidDoc::from_groupoid(&g))?)
        }
        GroupoidCmd::Decompose { input, sub: s } => {
            let g = read_groupoid(input)?;
            let s = sub(&g, s)?;
            let d = ergodic_decomposition(&g, &s);
            Report::new(json!({ "components": d.components, "masses": strings(&d.masses) }))
        }
        GroupoidCmd::Index { input, sub: s, big } => {
            let g = read_groupoid(input)?;
            let small = sub(&g, s)?;
            let big = match big {
                Some(_) => sub(&g, big)?,
                None => Subgroupoid::full(&g),
            };
            if !small.is_subset_of(&big) {
                return Err(CliError::Usage("--sub must generate a subgroupoid of --big".into()));
            }
            let rows: Vec<Value> = (0..g.n_units())
                .map(|x| json!({ "unit": x, "index": index(&g, &big, &small, x), "local_index": local_index(&g, &big, &small, x) }))
                .collect();
            Report::new(json!({ "units": rows }))
        }
        GroupoidCmd::Quotient { input, sub: s } => {
            let g = read_groupoid(input)?;
            let s = sub(&g, s)?;
            let q = quotient(&g, &s)?;
            let check = verify_quotient(&g, &s, &q);
            let ok = check.is_ok();
            Report::verified(
                json!({
                    "quotient": serde_json::to_value(GroupoidDoc::from_groupoid(&q.groupoid))?,
                    "theta": q.theta,
                    "pi": q.pi,
                    "verified": ok,
                }),
                ok,
                || check.err().unwrap_or_default(),
            )
        }
        GroupoidCmd::Quasinormal { input, sub: s } => {
            let g = read_groupoid(input)?;
            let s = sub(&g, s)?;
            let (qn, witnesses) = is_quasinormal(&g, &s);
            Report::new(json!({ "quasinormal": qn, "witnesses": witnesses.len() }))
        }
    })
}

fn cocycle(c: &CocycleCmd) -> Res {
    Ok(match c {
        CocycleCmd::LevelModel { params: p, k, l, verify_corollary } => {
            let p = params(p)?;
            let m = BSLevelModel::new(p, *k, *l)?;
            let w = witness_values_at(&m.groupoid, &m.s, &m.t_map)?;
            let expected = p.modulus_ratio();
            let products: Vec<BigRational> = m.t_map.pairs().map(|(x, _)| &w.d[&x] * &w.i[&x]).collect();
            let ok = !products.is_empty() && products.iter().all(|v| *v == expected);
            let first = |map: &std::collections::BTreeMap<usize, BigRational>| {
                map.values().next().map(ToString::to_string).unwrap_or_default()
            };
            let value = json!({
                "units": m.groupoid.n_units(),
                "t_arrows": products.len(),
                "D": first(&w.d),
                "I": first(&w.i),
                "product": products.first().map(ToString::to_string),
                "expected": expected.to_string(),
                "verified": ok,
            });
            if *verify_corollary {
                Report::verified(value, ok, || format!("D·I differs from {expected} on some t-arrow"))
            } else {
                Report::new(value)
            }
        }
        CocycleCmd::Modular { input, sub: s } => {
            let g = read_groupoid(input)?;
            let s = sub(&g, s)?;
            let c = modular_cocycles(&g, &s, None)?;
            let ok = c.d.check(&g).is_ok() && c.i.check(&g).is_ok();
            Report::verified(
                json!({ "D": strings(&c.d.values), "I": strings(&c.i.values) }),
                ok,
                || "a cocycle is not multiplicative".into(),
            )
        }
        CocycleCmd::Classify { input } => Report::new(classify_type(&read_groupoid(input)?).to_json()),
        CocycleCmd::Mackey { input } => {
            let g = read_groupoid(input)?;
            let tau = GroupoidCocycle::from_cyclic_labels(&g)
                .ok_or_else(|| CliError::Usage("labels do not form a cyclic group".into()))?;
            let r = mackey_range(&CocycleGraph::from_cocycle(&g, &tau))?;
            Report::new(json!({
                "target": tau.target.to_string(),
                "components": r.n_components(),
                "orbit_sizes": r.orbit_sizes(),
            }))
        }
        CocycleCmd::Flow { params: p, modulus: m, n } => {
            let p = params(p)?;
            let graph = product_model(&p, *m, *n)
                .ok_or_else(|| CliError::Usage(format!("BS({},{}) does not act on Z/{m} this way", p.p, p.q)))?;
            match flow_type(&graph, &p)? {
                FlowType::Cycle { n, label } => Report::new(json!({ "flow": "cycle", "n": n, "label": label.to_string() })),
                FlowType::Orbits { pieces } => Report::new(json!({ "flow": "orbits", "pieces": pieces })),
            }
        }
    })
}

fn element(p: &BSParams, s: &str) -> Result<TruncatedProfiniteInt, CliError> {
    Ok(TruncatedProfiniteInt::parse(*p, s)?)
}

fn profinite(c: &ProfiniteCmd) -> Res {
    Ok(match c {
        ProfiniteCmd::Modulus { params: p, k, l } => Report::new(json!({ "modulus": modulus(&params(p)?, *k, *l)? })),
        ProfiniteCmd::Reduce { params: p, x, k, l } => {
            let p = params(p)?;
            Report::new(json!({ "value": element(&p, x)?.reduce_to(*k, *l)?.to_string() }))
        }
        ProfiniteCmd::Sigma { params: p, x, k, l } => {
            let p = params(p)?;
            let x = element(&p, x)?;
            let s = x.sigma_map(*k, *l)?;
            let back = s.sigma_inverse(*k, *l)?;
            Report::new(json!({ "sigma": s.to_string(), "inverse": back.to_string() }))
        }
        ProfiniteCmd::Arith { params: p, x, y } => {
            let p = params(p)?;
            let (x, y) = (element(&p, x)?, element(&p, y)?);
            Report::new(json!({
                "sum": x.add(&y)?.to_string(),
                "difference": x.sub(&y)?.to_string(),
                "product": x.mul(&y)?.to_string(),
            }))
        }
        ProfiniteCmd::Unit { params: p, x } => {
            let p = params(p)?;
            let r = element(&p, x)?;
            if !r.is_unit() {
                return Ok(Report::new(json!({ "unit": false })));
            }
            let (kk, ll) = r.level();
            let mut fixes = Vec::new();
            for k in 0..=kk {
                for l in 0..=ll {
                    fixes.push(json!({ "k": k, "l": l, "fixes": check_unit_fixes_level(&r, k, l)? }));
                }
            }
            Report::new(json!({ "unit": true, "u0": u0_membership(&r)?, "levels": fixes }))
        }
        ProfiniteCmd::Valuation { p0, m } => {
            if p0.abs() < 2 || *m == 0 {
                return Err(CliError::Usage("need |p0| >= 2 and m != 0".into()));
            }
            Report::new(json!({ "valuation": generalized_valuation(*p0, *m) }))
        }
    })
}

fn dynamics(c: &DynamicsCmd, seed: u64) -> Res {
    Ok(match c {
        DynamicsCmd::Beta { theta: t, n, x } => {
            let (m, y) = beta_step(*n, &Surd::rational(rational(x)?), &theta(t)?)?;
            Report::new(json!({ "beta": m.to_string(), "image": y.to_string() }))
        }
        DynamicsCmd::Act { params: p, theta: t, word: w, x, kappa } => {
            let p = params(p)?;
            let pt = CouplingPoint::new(Surd::rational(rational(x)?), element(&p, kappa)?)?;
            let out = coupling_action(&word(w)?, &pt, &theta(t)?, &p)?;
            Report::new(json!({ "x": out.x.to_string(), "kappa": out.kappa.to_string() }))
        }
        DynamicsCmd::LTheta { params: p, word: w } => Report::new(l_theta(&word(w)?, &params(p)?).to_json()),
        DynamicsCmd::NElements { params: p, count } => {
            Report::new(json!({ "words": strings(n_elements(&params(p)?, *count)) }))
        }
        DynamicsCmd::Rotation { theta: t, level, steps } => {
            Report::new(rotation_model_orbit(&theta(t)?, *level, *steps)?.to_json())
        }
        DynamicsCmd::Cesaro { theta: t, horizon, width, trivial_beta } => {
            let t = theta(t)?.to_f64();
            let sets = CesaroSets::random(seed, t.abs());
            let r = cesaro_mixing_test(&BernoulliShift { width: *width }, &sets, t, *horizon, *trivial_beta)?;
            Report { csv: Some(r.to_csv()), ..Report::new(r.to_json()) }
        }
        DynamicsCmd::Components { c, n, r, s, kmax, lmax } => {
            let t = component_counts(*c, *n, *r, *s, *kmax, *lmax)?;
            Report::verified(t.to_json(), t.divisibility_holds(), || "consecutive ratios do not divide".into())
        }
        DynamicsCmd::Odometer { params: p, k, l } => {
            let p = params(p)?;
            let size = modulus(&p, *k, *l)?;
            let (d, m, n) = (p.d0 as u64, p.p0.unsigned_abs(), p.q0.unsigned_abs());
            let perm = odometer(size as usize);
            let ok = periodicity_check(&perm, d, m, n, *k, *l);
            Report::verified(
                json!({ "size": size, "periodic": ok, "periodic_one_level_up": periodicity_check(&perm, d, m, n, k + 1, *l) }),
                ok,
                || "the odometer is not periodic at its own level".into(),
            )
        }
    })
}

fn suite(a: &SuiteArgs, seed: u64) -> Res {
    let counts = LemmaCounts {
        index: a.index,
        towers: a.towers,
        group_actions: a.group_actions,
        quotients: a.quotients,
        cohomology: a.cohomology,
        mackey: a.mackey,
    };
    let tally = match a.name {
        SuiteName::Lemmas => run_lemmas(seed, &counts),
        SuiteName::Dynamics => run_dynamics(seed),
        SuiteName::All => {
            let mut t = run_lemmas(seed, &counts);
            t.merge(run_dynamics(seed));
            t
        }
    };
    let ok = tally.all_passed();
    Ok(Report {
        value: json!({ "suite": format!("{:?}", a.name).to_lowercase(), "seed": seed, "summary": tally.to_json() }),
        ok,
        failure: (!ok).then(|| "some laws failed".into()),
        tally: Some(tally),
        csv: None,
    })
}
