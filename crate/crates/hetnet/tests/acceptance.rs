//! End-to-end acceptance checks, one line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::{same_value, scaled, weaker_cycles, Draws, TYPE_A};
use hetnet::basin::{compare, default_delta, estimate, FateClassifier, Trend, Verdict};
use hetnet::dynamics::{certify_connection, connection_point};
use hetnet::fields::{
    default_field, evaluate, equivariance_residual, max_off_diagonal, network_equilibria, norm, numeric_jacobian,
};
use hetnet::geometry::{catalogue, network, validate_simple_network, Connection, NetworkId, Node, Plane};
use hetnet::stability::{
    cycle_eigen_data, h_eval, lemma_ainfinity_check, network_indices, oracle_for, ExtReal, NetworkIndices, RatioData,
    GENERIC_TOL,
};
use hetnet::Error;
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

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn plane(i: usize, j: usize) -> Plane {
    Plane::new(i, j).unwrap()
}

fn catalogue_completeness() -> Outcome {
    let t0 = Instant::now();
    let all = catalogue();
    let mut ids: Vec<NetworkId> = all.iter().map(|n| n.id).collect();
    ids.sort();
    ids.dedup();
    ensure(all.len() == 8 && ids.len() == 8, || format!("{} entries, {} distinct", all.len(), ids.len()))?;
    for n in &all {
        let r = validate_simple_network(n);
        ensure(r.all_passed(), || format!("{}: {:?}", n.id, r.failures().collect::<Vec<_>>()))?;
    }

    let mut mutants = Vec::new();
    let mut extra_node = network(NetworkId::A3A3A4);
    extra_node.nodes.push(Node::new("xi5", 1, -1));
    mutants.push(("fifth node", extra_node, "max_nodes"));

    let mut seventh = network(NetworkId::A3A3A4);
    seventh.connections.push(Connection::new("xi4", "xi3", plane(3, 4)));
    mutants.push(("seventh connection", seventh, "max_connections"));

    let mut crowded = network(NetworkId::A3A3);
    crowded.connections.push(Connection::new("xi4", "xi2", plane(2, 4)));
    mutants.push(("fourth connection at xi2", crowded, "max_connections_per_node"));

    // X4 gets its own connection from xi1 to xi2, so the cycles no longer
    // share one
    let mut unshared = network(NetworkId::A2A2);
    let own = Connection::new("xi1", "xi2", plane(1, 4));
    unshared.connections.push(own.clone());
    let x4 = unshared.cycles.iter_mut().find(|c| c.label == "X4").unwrap();
    let k = x4.connections.iter().position(|c| c.from == "xi1").unwrap();
    x4.connections[k] = own;
    mutants.push(("shared connection removed", unshared, "cycle_pairs_share_connection"));

    for (what, spec, check) in &mutants {
        let r = validate_simple_network(spec);
        ensure(!r.passed(check), || format!("{what}: {check} still passes"))?;
    }
    within(t0.elapsed(), 1.0)?;
    Ok(format!("8 networks valid, {} mutants rejected", mutants.len()))
}

/// Generic draws of indices for a network, skipping draws the engine
/// refuses as non-generic.
fn generic_draws(id: NetworkId, count: usize, seed: u64, mut each: impl FnMut(&hetnet::stability::Spectra, &NetworkIndices) -> Result<(), String>) -> Result<usize, String> {
    let net = network(id);
    let mut draws = Draws::new(seed);
    let (mut done, mut skipped) = (0, 0);
    while done < count {
        let s = draws.spectra(id);
        match network_indices(&net, &s) {
            Ok(res) => {
                each(&s, &res)?;
                done += 1;
            }
            Err(Error::NonGeneric(_)) => skipped += 1,
            Err(e) => return Err(format!("{id}: {e}")),
        }
        if skipped > count {
            return Err(format!("{id}: too many non-generic draws"));
        }
    }
    Ok(skipped)
}

fn engine_oracle_equivalence() -> Outcome {
    let t0 = Instant::now();
    let mut mismatches = 0usize;
    let mut first: Option<String> = None;
    for (n, id) in TYPE_A.into_iter().enumerate() {
        let net = network(id);
        generic_draws(id, 1000, 100 + n as u64, |s, res| {
            let oracle = oracle_for(id, s).map_err(|e| format!("{id}: oracle refused a generic draw: {e}"))?;
            for (cycle, expected) in net.cycles.iter().zip(&oracle) {
                let got = res.cycle(&cycle.label).unwrap();
                let lemma = lemma_ainfinity_check(&cycle_eigen_data(s, cycle).unwrap());
                for ((g, e), c) in got.indices.iter().zip(&expected.indices).zip(&lemma) {
                    let ok = g.class == e.class && same_value(g.value, e.value, 1e-12) && c.satisfied_by(g.value);
                    if !ok {
                        mismatches += 1;
                        first.get_or_insert_with(|| {
                            format!("{id} {} {}->{}: engine {} oracle {} lemma {c:?}", cycle.label, g.from, g.to, g.value, e.value)
                        });
                    }
                }
            }
            Ok(())
        })?;
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches, first: {}", first.unwrap_or_default()))?;
    within(t0.elapsed(), 10.0)?;
    Ok("4 networks x 1000 generic draws, 0 mismatches".into())
}

fn minus_infinity_invariant() -> Outcome {
    let mut violations = Vec::new();
    for (n, id) in TYPE_A.into_iter().enumerate() {
        let net = network(id);
        generic_draws(id, 1000, 200 + n as u64, |s, res| {
            let losers = weaker_cycles(&net, s);
            if net.cycles.len() > 1 && losers.is_empty() {
                violations.push(format!("{id}: no weaker cycle"));
            }
            for l in &losers {
                if !res.cycle(l).unwrap().all_minus_infinity() {
                    violations.push(format!("{id}: {l} is not all -inf"));
                }
            }
            if id == NetworkId::A3A3A4 {
                let survivor = net.cycles.iter().find(|c| !losers.contains(&c.label));
                let minus = res.cycles.iter().filter(|c| c.all_minus_infinity()).count();
                if losers.len() != 2 {
                    violations.push(format!("{} weaker cycles", losers.len()));
                } else if survivor.is_some_and(|c| res.cycle(&c.label).unwrap().rho > 1.0) && minus != 2 {
                    violations.push(format!("{minus} cycles all -inf"));
                }
            }
            Ok(())
        })?;
    }
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    Ok("4 networks x 1000 draws, 0 violations".into())
}

fn exclusivity() -> Outcome {
    let net = network(NetworkId::A3A3A4);
    let mut draws = Draws::new(300);
    let (mut kept, mut tried) = (0, 0);
    let mut violations = Vec::new();
    while kept < 1000 {
        tried += 1;
        if tried > 2_000_000 {
            return Err(format!("only {kept} qualifying draws"));
        }
        let s = draws.spectra(NetworkId::A3A3A4);
        let Ok(res) = network_indices(&net, &s) else { continue };
        // rho > 1 for every cycle whose b_j all exceed -1
        let qualifies = res
            .cycles
            .iter()
            .filter(|c| c.ratios.b.iter().all(|&b| b > -1.0))
            .all(|c| c.rho > 1.0);
        if !qualifies {
            continue;
        }
        kept += 1;
        let eas = res.eas_cycles().len();
        if eas != 1 {
            violations.push(format!("{eas} e.a.s. cycles for {s:?}"));
        }
    }
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    Ok(format!("1000 qualifying draws ({tried} tried), exactly one e.a.s. cycle in each"))
}

fn field_correctness() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    let (mut eqv, mut res, mut off, mut jac) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for id in TYPE_A {
        let net = network(id);
        let field = default_field(id).map_err(|e| e.to_string())?;
        eqv = eqv.max(equivariance_residual(&field, &net.group, 1000, 401));
        for eq in network_equilibria(&field, &net).map_err(|e| e.to_string())? {
            res = res.max(norm(&evaluate(&field, &eq.position)));
            off = off.max(max_off_diagonal(&field.jacobian(&eq.position)));
        }
        for _ in 0..100 {
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
            let a = field.jacobian(&x);
            let n = numeric_jacobian(&field, &x, 1e-6);
            for (ra, rn) in a.iter().zip(&n) {
                for (va, vn) in ra.iter().zip(rn) {
                    jac = jac.max((va - vn).abs());
                }
            }
        }
    }
    ensure(eqv < 1e-12, || format!("equivariance residual {eqv:e}"))?;
    ensure(res < 1e-12, || format!("equilibrium residual {res:e}"))?;
    ensure(off < 1e-10, || format!("Jacobian off-diagonal {off:e}"))?;
    ensure(jac < 1e-6, || format!("finite-difference Jacobian gap {jac:e}"))?;
    within(t0.elapsed(), 5.0)?;
    Ok(format!(
        "equivariance {eqv:.1e}, equilibria {res:.1e}, off-diagonal {off:.1e}, Jacobian gap {jac:.1e}"
    ))
}

fn connection_certification() -> Outcome {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for id in TYPE_A {
        let net = network(id);
        let field = default_field(id).map_err(|e| e.to_string())?;
        for c in &net.connections {
            let trace = certify_connection(&field, &net, c).map_err(|e| format!("{id} {c}: {e}"))?;
            ensure(trace.arrival_distance < 1e-4, || format!("{id} {c}: arrived within {:e}", trace.arrival_distance))?;
            worst = worst.max(trace.arrival_distance);
            count += 1;
        }
    }
    within(t0.elapsed(), 30.0)?;
    Ok(format!("{count} connections realized, worst arrival distance {worst:.1e}"))
}

const LADDER: [f64; 3] = [1e-1, 1e-2, 1e-3];
const SAMPLES: usize = 2000;
const SEED: u64 = 2024;
const T_MAX: f64 = 2000.0;

fn monte_carlo_agreement() -> Outcome {
    let t0 = Instant::now();
    let jobs: [(NetworkId, &[(&str, &str, &str, Option<Plane>, Trend)]); 2] = [
        (
            NetworkId::A3A3,
            &[
                ("xi3-cycle", "xi1", "xi2", None, Trend::AttractingTrend),
                ("xi3-cycle", "xi2", "xi3", None, Trend::AttractingTrend),
                ("xi3-cycle", "xi3", "xi1", None, Trend::AttractingTrend),
                ("xi4-cycle", "xi2", "xi4", None, Trend::RepellingTrend),
                ("xi4-cycle", "xi4", "xi1", None, Trend::RepellingTrend),
            ],
        ),
        (
            NetworkId::A2A2,
            &[
                ("X3", "xi1", "xi2", None, Trend::AttractingTrend),
                ("X3", "xi2", "xi1", Some(Plane::new(1, 3).unwrap()), Trend::AttractingTrend),
                ("X4", "xi2", "xi1", Some(Plane::new(1, 4).unwrap()), Trend::RepellingTrend),
            ],
        ),
    ];
    let mut lines = Vec::new();
    for (id, list) in jobs {
        let net = network(id);
        let field = default_field(id).map_err(|e| e.to_string())?;
        let indices = network_indices(&net, &hetnet::fields::node_spectra(&field, &net).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let delta = default_delta(&field, &net).map_err(|e| e.to_string())?;
        let classifier = FateClassifier::new(&field, &net, delta, T_MAX).map_err(|e| e.to_string())?;
        for (cycle, from, to, pl, want) in list {
            let conn = net.find_connection(from, to, *pl).map_err(|e| e.to_string())?.clone();
            let section = connection_point(&field, &net, &conn).map_err(|e| e.to_string())?;
            let est = estimate(&classifier, &section, cycle, &LADDER, SAMPLES, SEED).map_err(|e| e.to_string())?;
            let fractions: Vec<String> = est.rungs.iter().map(|r| format!("{:.3}", r.fraction)).collect();
            let last = est.rungs.last().unwrap().fraction;
            let analytic = indices.cycle(cycle).unwrap().index(from, to).unwrap();
            let verdict = compare(&est, analytic).map_err(|e| e.to_string())?;
            ensure(est.classification == *want, || {
                format!("{id} {cycle} {conn}: {:?}, fractions {fractions:?}", est.classification)
            })?;
            let final_ok = match want {
                Trend::AttractingTrend => last >= 0.9,
                _ => last <= 0.1,
            };
            ensure(final_ok, || format!("{id} {cycle} {conn}: final fraction {last}"))?;
            ensure(verdict == Verdict::Pass, || format!("{id} {cycle} {conn}: verdict {verdict:?} against {}", analytic.value))?;
            lines.push(format!("{id} {conn} {fractions:?}"));
        }
        // same seed, same counts
        let conn = net.connections[0].clone();
        let section = connection_point(&field, &net, &conn).map_err(|e| e.to_string())?;
        let target = &net.cycles[0].label;
        let a = estimate(&classifier, &section, target, &LADDER, 100, SEED).map_err(|e| e.to_string())?;
        let b = estimate(&classifier, &section, target, &LADDER, 100, SEED).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{id}: repeated estimate differs"))?;
    }
    within(t0.elapsed(), 300.0)?;
    Ok(format!("{} connections agree in {:.0}s: {}", lines.len(), t0.elapsed().as_secs_f64(), lines.join("; ")))
}

fn h_properties() -> Outcome {
    let t0 = Instant::now();
    let mut draws = Draws::new(800);
    let mut checked = 0;
    for _ in 0..10_000 {
        let m = 2 + (draws.unit() * 3.0) as usize;
        let (a, b) = draws.ratios(m);
        let r = RatioData::new(a, b).unwrap();
        let l = 1 + (draws.unit() * m as f64) as i64;
        let y = -3.0 + 6.0 * draws.unit();
        ensure(h_eval(l, l, ExtReal::Finite(y), &r).ok() == Some(ExtReal::Finite(y)), || format!("h_(l,l)({y}) != {y}"))?;

        let idx = (l - 1) as usize % m;
        let d = r.a[idx] - r.b[idx];
        if d.abs() > GENERIC_TOL && (d - 1.0).abs() > GENERIC_TOL {
            let v = h_eval(l, l + 1, ExtReal::Finite(y), &r).unwrap();
            ensure(v.is_pos_inf() == (d < 0.0), || format!("a - b = {d} gave {v}"))?;
        }

        let len = (draws.unit() * 5.0) as i64;
        let dy = 3.0 * draws.unit();
        match (
            h_eval(l, l + len, ExtReal::Finite(y), &r),
            h_eval(l, l + len, ExtReal::Finite(y + dy), &r),
        ) {
            (Ok(lo), Ok(hi)) => ensure(lo.total_cmp(&hi).is_le(), || format!("h not monotone: {lo} > {hi}"))?,
            (Err(Error::NonGeneric(_)), Err(Error::NonGeneric(_))) => {}
            other => return Err(format!("inconsistent guard results {other:?}")),
        }

        let near = (draws.unit() * 2.0) as usize as f64 + (draws.unit() - 0.5) * 1.8e-9;
        let mut b = r.b.clone();
        b[idx] = r.a[idx] - near;
        let edge = RatioData::new(r.a.clone(), b).unwrap();
        ensure(
            matches!(h_eval(l, l + 1, ExtReal::Finite(y), &edge), Err(Error::NonGeneric(_))),
            || format!("a - b = {near} not refused"),
        )?;
        checked += 1;
    }
    within(t0.elapsed(), 5.0)?;
    Ok(format!("{checked} ratio sets"))
}

fn scale_invariance() -> Outcome {
    let mut draws = Draws::new(900);
    let factors = [0.01, 0.37, 2.5, 13.0, 1000.0];
    let mut done = 0;
    for (n, id) in TYPE_A.into_iter().cycle().enumerate() {
        if done == 100 {
            break;
        }
        if n > 10_000 {
            return Err("too few generic draws".into());
        }
        let net = network(id);
        let s = draws.spectra(id);
        let Ok(base) = network_indices(&net, &s) else { continue };
        for f in factors {
            let other = network_indices(&net, &scaled(&s, f)).map_err(|e| format!("{id} x{f}: {e}"))?;
            for (cx, cy) in base.cycles.iter().zip(&other.cycles) {
                for (ix, iy) in cx.indices.iter().zip(&cy.indices) {
                    ensure(ix.class == iy.class && same_value(ix.value, iy.value, 1e-12), || {
                        format!("{id} {} x{f}: {} became {}", cx.cycle, ix.value, iy.value)
                    })?;
                }
            }
        }
        done += 1;
    }
    Ok("100 draws x 5 scales unchanged".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("catalogue completeness", catalogue_completeness),
        ("engine-oracle equivalence", engine_oracle_equivalence),
        ("weaker branch cycles all -inf", minus_infinity_invariant),
        ("exclusivity and non-total-instability", exclusivity),
        ("field correctness", field_correctness),
        ("connection certification", connection_certification),
        ("Monte Carlo agrees with indices", monte_carlo_agreement),
        ("h recursion properties", h_properties),
        ("scale invariance", scale_invariance),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.2}s) {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.2}s) {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
