use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use hetnet::basin::{compare, run_experiment, BasinEstimate, ExperimentConfig, Verdict};
use hetnet::dynamics::{integrate, itinerary, labelled_equilibria, min_separation, IntegrateOptions, Termination, Visit};
use hetnet::fields::{build_field, default_field, node_spectra, FieldParams, VectorField};
use hetnet::geometry::{
    catalogue, from_json, network, validate_simple_network, Check, NetworkDoc, NetworkId, NetworkSpec,
    ValidationReport,
};
use hetnet::stability::{network_indices, oracle_for, CycleIndices, ExtReal, Spectra, StabilityIndex};

use crate::output::{csv_table, json, Format, Sink};
use crate::{CliError, EXIT_BAD_INPUT, EXIT_FAILURE, EXIT_VERDICT_FAIL};

pub struct Context {
    pub format: Option<Format>,
    pub sink: Sink,
    pub seed: Option<u64>,
    pub params: Option<PathBuf>,
}

fn parse_id(text: &str) -> Result<NetworkId, CliError> {
    text.parse::<NetworkId>().map_err(CliError::from)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))
}

fn load_params(path: &Path) -> Result<FieldParams, CliError> {
    FieldParams::from_json(&read_input(path)?)
        .map_err(|e| CliError::new(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))
}

/// The field for `id`: from --params if given, else the shipped defaults.
fn load_field(ctx: &Context, id: NetworkId) -> Result<VectorField, CliError> {
    match &ctx.params {
        Some(path) => Ok(build_field(id, &load_params(path)?)?),
        None => Ok(default_field(id)?),
    }
}

fn params_label(ctx: &Context) -> String {
    ctx.params
        .as_ref()
        .map_or_else(|| "default".to_string(), |p| p.display().to_string())
}

fn fmt_ext(v: ExtReal) -> String {
    v.to_string()
}

#[derive(Serialize)]
struct ListRow {
    id: NetworkId,
    name: &'static str,
    cycle_types: Vec<String>,
    nodes: usize,
    connections: usize,
    type_a: bool,
}

pub fn list(ctx: &Context) -> Result<(), CliError> {
    let rows: Vec<ListRow> = catalogue()
        .iter()
        .map(|n| ListRow {
            id: n.id,
            name: n.id.long_name(),
            cycle_types: n.cycles.iter().map(|c| c.type_label.to_string()).collect(),
            nodes: n.nodes.len(),
            connections: n.connections.len(),
            type_a: n.is_type_a(),
        })
        .collect();
    let format = ctx.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Json => json(&rows),
        Format::Csv => csv_table(
            &["id", "name", "cycle_types", "nodes", "connections", "type_a"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.name.to_string(),
                        r.cycle_types.join(" "),
                        r.nodes.to_string(),
                        r.connections.to_string(),
                        r.type_a.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    ctx.sink.emit("list", format, &text)
}

#[derive(Serialize)]
struct Description {
    #[serde(flatten)]
    network: NetworkDoc,
    validation: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn checks_csv(report: &ValidationReport) -> String {
    csv_table(
        &["check", "passed", "detail"],
        &report
            .checks
            .iter()
            .map(|c| vec![c.name.to_string(), c.passed.to_string(), c.detail.clone()])
            .collect::<Vec<_>>(),
    )
}

pub fn describe(ctx: &Context, text: &str) -> Result<(), CliError> {
    let spec = network(parse_id(text)?);
    let validation = validate_simple_network(&spec);
    let note = (!spec.is_type_a()).then(|| "indices unsupported for B/C networks".to_string());
    if let Some(n) = &note {
        eprintln!("note: {n}");
    }
    let format = ctx.format.unwrap_or(Format::Json);
    let out = match format {
        Format::Json => json(&Description {
            network: NetworkDoc::from(&spec),
            validation,
            note,
        }),
        Format::Csv => checks_csv(&validation),
    };
    ctx.sink.emit("describe", format, &out)
}

/// A catalogue id, or a path to a network JSON document.
fn resolve_network(text: &str) -> Result<NetworkSpec, CliError> {
    let path = Path::new(text);
    if path.is_file() {
        return from_json(&read_input(path)?)
            .map_err(|e| CliError::new(EXIT_BAD_INPUT, format!("{}: {e}", path.display())));
    }
    Ok(network(parse_id(text)?))
}

pub fn validate(ctx: &Context, text: &str) -> Result<(), CliError> {
    let spec = resolve_network(text)?;
    let mut report = validate_simple_network(&spec);
    if let Some(path) = &ctx.params {
        let params = load_params(path)?;
        let check = match build_field(spec.id, &params).and_then(|f| node_spectra(&f, &spec)) {
            Ok(_) => Check {
                name: "field_constraints",
                passed: true,
                detail: format!("{} realizes every cycle at linear level", path.display()),
            },
            Err(e) => Check {
                name: "field_constraints",
                passed: false,
                detail: e.to_string(),
            },
        };
        report.checks.push(check);
    }
    let format = ctx.format.unwrap_or(Format::Json);
    let out = match format {
        Format::Json => json(&report),
        Format::Csv => checks_csv(&report),
    };
    ctx.sink.emit("validate", format, &out)?;
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(CliError::new(EXIT_FAILURE, format!("failed checks: {}", names.join(", "))))
    }
}

#[derive(Serialize)]
struct IndexReport<'a> {
    network: NetworkId,
    params: String,
    spectra: &'a Spectra,
    cycles: &'a [CycleIndices],
    eas_cycles: Vec<&'a str>,
    forced_unstable: &'a [String],
    violations: &'a [String],
    oracle_agrees: bool,
    mismatches: &'a [String],
}

fn agrees(x: ExtReal, y: ExtReal) -> bool {
    match (x.finite(), y.finite()) {
        (Some(a), Some(b)) => (a - b).abs() <= 1e-12 * a.abs().max(1.0),
        _ => x == y,
    }
}

pub fn indices(ctx: &Context, text: &str) -> Result<(), CliError> {
    let id = parse_id(text)?;
    let spec = network(id);
    if !spec.is_type_a() {
        return Err(CliError::from(hetnet::Error::UnsupportedNetwork(format!(
            "{id} has no type-A cycles; indices are only computed for type A"
        ))));
    }
    let field = load_field(ctx, id)?;
    let spectra = node_spectra(&field, &spec)?;
    let res = network_indices(&spec, &spectra)?;
    let oracle = oracle_for(id, &spectra)?;
    let mut mismatches = Vec::new();
    for (got, want) in res.cycles.iter().zip(&oracle) {
        for (g, w) in got.indices.iter().zip(&want.indices) {
            if !agrees(g.value, w.value) {
                mismatches.push(format!(
                    "{} {}->{}: engine {} closed form {}",
                    got.cycle, g.from, g.to, g.value, w.value
                ));
            }
        }
    }
    let format = ctx.format.unwrap_or(Format::Csv);
    let out = match format {
        Format::Json => json(&IndexReport {
            network: id,
            params: params_label(ctx),
            spectra: &spectra,
            cycles: &res.cycles,
            eas_cycles: res.eas_cycles(),
            forced_unstable: &res.forced_unstable,
            violations: &res.violations,
            oracle_agrees: mismatches.is_empty(),
            mismatches: &mismatches,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for (c, o) in res.cycles.iter().zip(&oracle) {
                for (i, w) in c.indices.iter().zip(&o.indices) {
                    rows.push(vec![
                        c.cycle.clone(),
                        c.type_label.clone(),
                        i.from.clone(),
                        i.to.clone(),
                        fmt_ext(i.value),
                        i.class.to_string(),
                        fmt_ext(w.value),
                        format!("{}", c.rho),
                        c.eas.to_string(),
                    ]);
                }
            }
            csv_table(
                &["cycle", "type", "from", "to", "index", "class", "closed_form", "rho", "eas"],
                &rows,
            )
        }
    };
    ctx.sink.emit("indices", format, &out)?;
    if !mismatches.is_empty() || !res.violations.is_empty() {
        let all: Vec<String> = mismatches.iter().chain(&res.violations).cloned().collect();
        return Err(CliError::new(EXIT_FAILURE, format!("index cross-check failed: {}", all.join("; "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    network: NetworkId,
    params: String,
    x0: [f64; 4],
    options: IntegrateOptions,
    termination: Termination,
    capture_radius: f64,
    itinerary: &'a [Visit],
    times: &'a [f64],
    states: &'a [[f64; 4]],
}

pub fn simulate(
    ctx: &Context,
    text: &str,
    x0: &[f64],
    t_max: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(), CliError> {
    let id = parse_id(text)?;
    let spec = network(id);
    let field = load_field(ctx, id)?;
    let x0: [f64; 4] = x0
        .try_into()
        .map_err(|_| CliError::new(EXIT_BAD_INPUT, "--x0 needs exactly four numbers"))?;
    let options = IntegrateOptions {
        rel_tol,
        abs_tol,
        t_max,
        ..IntegrateOptions::default()
    };
    let traj = integrate(&field, &x0, options)?;
    let equilibria = labelled_equilibria(&field, &spec)?;
    let radius = 0.05 * min_separation(&equilibria);
    let visits = itinerary(&traj, &equilibria, radius)?;
    let format = ctx.format.unwrap_or(Format::Csv);
    match format {
        Format::Json => ctx.sink.emit(
            "simulate",
            format,
            &json(&SimulationReport {
                network: id,
                params: params_label(ctx),
                x0,
                options,
                termination: traj.termination,
                capture_radius: radius,
                itinerary: &visits,
                times: &traj.times,
                states: &traj.states,
            }),
        ),
        Format::Csv => {
            let rows: Vec<Vec<String>> = traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, x)| std::iter::once(t).chain(x).map(|v| v.to_string()).collect())
                .collect();
            ctx.sink
                .emit("trajectory", format, &csv_table(&["t", "x1", "x2", "x3", "x4"], &rows))?;
            let visit_rows: Vec<Vec<String>> = visits
                .iter()
                .map(|v| vec![v.node.clone(), v.t_in.to_string(), v.t_out.to_string()])
                .collect();
            let table = csv_table(&["node", "t_in", "t_out"], &visit_rows);
            if ctx.sink.dir.is_some() {
                ctx.sink.emit("itinerary", format, &table)
            } else {
                eprintln!("termination: {:?}", traj.termination);
                eprint!("{table}");
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct BasinReport<'a> {
    config: &'a ExperimentConfig,
    estimate: &'a BasinEstimate,
    /// Cycle whose index the estimate is compared with.
    index_cycle: &'a str,
    analytic_index: &'a StabilityIndex,
    verdict: Verdict,
    wall_time_s: f64,
}

fn bad_config(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::new(EXIT_BAD_INPUT, format!("{}: {e}", path.display()))
}

pub fn basin(ctx: &Context, path: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let mut config: ExperimentConfig = serde_json::from_str(&read_input(path)?).map_err(|e| bad_config(path, e))?;
    if let Some(seed) = ctx.seed {
        config.seed = seed;
    }
    let spec = network(config.network);
    let field = match (&ctx.params, config.params_ref.as_str()) {
        (Some(p), _) => build_field(config.network, &load_params(p)?)?,
        (None, "default") => default_field(config.network)?,
        (None, other) => {
            let base = path.parent().unwrap_or(Path::new("."));
            build_field(config.network, &load_params(&base.join(other))?)?
        }
    };
    let connection = config.connection.resolve(&spec).map_err(|e| bad_config(path, e))?.clone();
    if spec.cycle(&config.target_cycle).is_none() {
        return Err(bad_config(path, format!("unknown target cycle {}", config.target_cycle)));
    }
    let estimate = run_experiment(&config, &field, &spec).map_err(|e| match e {
        hetnet::Error::InvalidArgument(m) => bad_config(path, m),
        other => CliError::from(other),
    })?;

    let res = network_indices(&spec, &node_spectra(&field, &spec)?)?;
    // the index of the connection inside the target cycle; if the target
    // does not contain it, the cycle that does
    let holder = spec
        .cycles
        .iter()
        .filter(|c| c.contains_connection(&connection))
        .find(|c| c.label == config.target_cycle)
        .or_else(|| spec.cycles.iter().find(|c| c.contains_connection(&connection)))
        .ok_or_else(|| bad_config(path, format!("no cycle contains {connection}")))?;
    if holder.label != config.target_cycle {
        eprintln!(
            "warning: {} does not contain {connection}; comparing with its index in {}",
            config.target_cycle, holder.label
        );
    }
    let analytic = res
        .cycle(&holder.label)
        .and_then(|c| c.index(&connection.from, &connection.to))
        .expect("every cycle connection has an index");
    let verdict = compare(&estimate, analytic)?;
    let report = BasinReport {
        config: &config,
        estimate: &estimate,
        index_cycle: &holder.label,
        analytic_index: analytic,
        verdict,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    let format = ctx.format.unwrap_or(Format::Json);
    let out = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let labels: Vec<String> = estimate.rungs.first().map_or_else(Vec::new, |r| r.cycles.keys().cloned().collect());
            let mut header: Vec<&str> = vec!["epsilon", "samples"];
            header.extend(labels.iter().map(String::as_str));
            header.extend(["escaped", "undecided", "fraction", "unreliable"]);
            let rows: Vec<Vec<String>> = estimate
                .rungs
                .iter()
                .map(|r| {
                    let mut row = vec![r.epsilon.to_string(), r.samples.to_string()];
                    row.extend(labels.iter().map(|l| r.cycles[l].to_string()));
                    row.extend([
                        r.escaped.to_string(),
                        r.undecided.to_string(),
                        r.fraction.to_string(),
                        r.unreliable.to_string(),
                    ]);
                    row
                })
                .collect();
            csv_table(&header, &rows)
        }
    };
    ctx.sink.emit("basin", format, &out)?;
    eprintln!(
        "{:?}: {:?} against index {} ({:.1}s)",
        verdict,
        estimate.classification,
        analytic.value,
        started.elapsed().as_secs_f64()
    );
    if verdict == Verdict::Fail {
        return Err(CliError::new(EXIT_VERDICT_FAIL, "estimate contradicts the analytic index"));
    }
    Ok(())
}
