// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use aef::centrality::{CentralityReport, MEASURE_COLUMNS};
use aef::episim::{
    build_world, parse_populations, run_ensemble, simulate as simulate_run, DiseaseModel, RegionTable, World,
    REGION_COUNT,
};
use aef::exf::{all_aef, all_raw_aef};
use aef::experiments::{
    branching_figure, invasion_threshold_sweep, robustness_study, select_decile_seeds, select_range_covering_seeds,
    time_to_pandemic_study, CorrelationCell, RobustnessConfig, SchemeKind, StudyMeasures, STUDY_MEASURES,
};
use aef::rng::stream;
use aef::synthetic::{scaled_populations, synthetic_network, SyntheticParams};
use aef::wan::{build_network_report, parse_airports, parse_routes, read_bundle, write_bundle, write_edge_list, SeatTable};
use aef::{NodeId, WanGraph};
use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_grid, parse_percentages, resolve_seed, Effective, FileConfig};
use crate::output::{opt, OutputDir};
use crate::{
    BranchingArgs, BuildGraphArgs, CommonArgs, RobustnessArgs, Scheme, ScoreFormat, ScoresArgs, SimulateArgs,
    SweepArgs, TimeToPandemicArgs, WorldArgs,
};

fn load_graph(out: &mut OutputDir, path: &std::path::Path) -> Result<WanGraph> {
    let text = out.read_input(path)?;
    let (graph, _) = read_bundle(text.as_bytes()).with_context(|| format!("loading graph bundle {}", path.display()))?;
    Ok(graph)
}

fn load_world(out: &mut OutputDir, args: &WorldArgs, rho: f64) -> Result<(WanGraph, World)> {
    let graph = load_graph(out, &args.graph)?;
    let populations: HashMap<String, u64> = match (&args.populations, args.people_per_seat) {
        (Some(path), _) => parse_populations(&out.read_input(path)?).with_context(|| format!("in {}", path.display()))?,
        (None, Some(pps)) => {
            if !(pps > 0.0 && pps.is_finite()) {
                bail!("--people-per-seat must be positive, got {pps}");
            }
            scaled_populations(&graph, pps)
        }
        (None, None) => HashMap::new(),
    };
    let mut regions = RegionTable::bundled();
    if let Some(path) = &args.regions {
        regions.merge(&out.read_input(path)?).with_context(|| format!("in {}", path.display()))?;
    }
    let world = build_world(&graph, &populations, &regions, rho)?;
    Ok((graph, world))
}

fn node_ids(graph: &WanGraph, codes: &[String]) -> Result<Vec<NodeId>> {
    let mut ids = Vec::with_capacity(codes.len());
    let mut unknown = Vec::new();
    for code in codes {
        match graph.node_id(code.trim()) {
            Some(id) => ids.push(id),
            None => unknown.push(code.trim().to_string()),
        }
    }
    if !unknown.is_empty() {
        bail!("airports not in the graph: {}", unknown.join(", "));
    }
    Ok(ids)
}

fn settings(common: &CommonArgs) -> Result<(FileConfig, u64)> {
    let file = FileConfig::load(common.config.as_deref())?;
    let seed = resolve_seed(&file, common.rng_seed);
    Ok((file, seed))
}

pub fn build_graph(a: BuildGraphArgs) -> Result<()> {
    let (_, seed) = settings(&a.common)?;
    let mut out = OutputDir::create(&a.common.out)?;
    let (graph, summary, config) = if let Some(nodes) = a.synthetic {
        let params = SyntheticParams { nodes, ..SyntheticParams::desk() };
        let graph = synthetic_network(&params, &mut stream(seed, "graph", &[]))?;
        let summary = json!({
            "source": "synthetic",
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
            "total_seats": graph.edges().map(|(_, _, w)| w).sum::<f64>(),
        });
        (graph, summary, json!({ "synthetic": params, "rng_seed": seed }))
    } else {
        let (Some(airports_path), Some(routes_path)) = (&a.airports, &a.routes) else {
            bail!("--airports and --routes are required unless --synthetic is given");
        };
        let airports = parse_airports(&out.read_input(airports_path)?)
            .with_context(|| format!("in {}", airports_path.display()))?;
        let routes = parse_routes(&out.read_input(routes_path)?, &airports)
            .with_context(|| format!("in {}", routes_path.display()))?;
        let mut seats = SeatTable::bundled();
        if let Some(path) = &a.seats {
            seats.merge(&out.read_input(path)?).with_context(|| format!("in {}", path.display()))?;
        }
        if let Some(default) = a.default_seats {
            if default == 0 {
                bail!("--default-seats must be positive");
            }
            seats = seats.with_default_capacity(default);
        }
        let (graph, build) = build_network_report(&airports, &routes.routes, &seats)?;
        let diagnostics = airports
            .diagnostics
            .iter()
            .map(|d| ("airports", d))
            .chain(routes.diagnostics.iter().map(|d| ("routes", d)))
            .map(|(file, d)| vec![file.to_string(), d.line.to_string(), d.message.clone()]);
        out.write_csv("diagnostics.csv", &["file", "line", "message"], diagnostics)?;
        let summary = json!({
            "source": "openflights",
            "airports_parsed": airports.len(),
            "airports_placeholder_skipped": airports.skipped_placeholder,
            "airport_diagnostics": airports.diagnostics.len(),
            "routes_parsed": routes.routes.len(),
            "routes_dropped_unresolved": routes.dropped_unresolved,
            "routes_dropped_self_loop": routes.dropped_self,
            "route_diagnostics": routes.diagnostics.len(),
            "nodes": build.nodes,
            "edges": build.edges,
            "isolated_airports_dropped": build.isolated_airports,
            "routes_without_equipment": build.routes_without_equipment,
            "unknown_aircraft": build.unknown_aircraft,
            "total_seats": build.total_seats,
            "default_seat_capacity": seats.default_capacity(),
        });
        (graph, summary, json!({ "default_seats": seats.default_capacity(), "rng_seed": seed }))
    };
    let metadata = [("summary".to_string(), summary.clone())].into_iter().collect();
    let mut bundle = Vec::new();
    write_bundle(&graph, metadata, &mut bundle)?;
    out.write_bytes("graph.json", &bundle)?;
    let mut edges = Vec::new();
    write_edge_list(&graph, &mut edges)?;
    out.write_bytes("edges.csv", &edges)?;
    out.write_json("summary.json", &summary)?;
    eprintln!("graph: {} airports, {} edges", graph.node_count(), graph.edge_count());
    out.finish("build-graph", &config, seed)
}

#[derive(Serialize)]
struct ScoreRow<'a> {
    iata: &'a str,
    name: &'a str,
    city: &'a str,
    country: &'a str,
    aef: f64,
    aef_raw: f64,
    degenerate: bool,
    #[serde(flatten)]
    measures: serde_json::Map<String, serde_json::Value>,
}

pub fn scores(a: ScoresArgs) -> Result<()> {
    let (_, seed) = settings(&a.common)?;
    let mut out = OutputDir::create(&a.common.out)?;
    let graph = load_graph(&mut out, &a.graph)?;
    let nodes: Vec<NodeId> = if a.iata.is_empty() { (0..graph.node_count()).collect() } else { node_ids(&graph, &a.iata)? };
    let aef = all_aef(&graph);
    let centrality = CentralityReport::compute(&graph)?;
    let rows: Vec<ScoreRow> = nodes
        .iter()
        .map(|&v| {
            let airport = graph.airport(v);
            let measures = MEASURE_COLUMNS
                .iter()
                .zip(centrality.row(v))
                .map(|(name, x)| (name.to_string(), json!(x)))
                .collect();
            ScoreRow {
                iata: &airport.iata,
                name: &airport.name,
                city: &airport.city,
                country: &airport.country,
                aef: aef[v].normalized,
                aef_raw: aef[v].raw_entropy,
                degenerate: aef[v].degenerate,
                measures,
            }
        })
        .collect();
    if matches!(a.format, ScoreFormat::Csv | ScoreFormat::Both) {
        let mut header = vec!["iata", "name", "city", "country", "aef", "aef_raw", "degenerate"];
        header.extend(MEASURE_COLUMNS);
        let lines = nodes.iter().zip(&rows).map(|(&v, r)| {
            let mut line = vec![
                r.iata.to_string(),
                r.name.to_string(),
                r.city.to_string(),
                r.country.to_string(),
                r.aef.to_string(),
                r.aef_raw.to_string(),
                r.degenerate.to_string(),
            ];
            line.extend(centrality.row(v).iter().map(f64::to_string));
            line
        });
        out.write_csv("scores.csv", &header, lines)?;
    }
    if matches!(a.format, ScoreFormat::Json | ScoreFormat::Both) {
        out.write_json("scores.json", &rows)?;
    }
    out.finish("scores", &json!({ "iata_filter": a.iata, "rng_seed": seed }), seed)
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let (file, seed) = settings(&a.common)?;
    let eff = Effective::resolve(DiseaseModel::full(DiseaseModel::PANDEMIC_BETA), &file, &a.disease, Some(seed))?;
    let mut out = OutputDir::create(&a.common.out)?;
    let (graph, world) = load_world(&mut out, &a.world, eff.rho)?;
    let origin = node_ids(&graph, std::slice::from_ref(&a.seed_airport))?[0];
    let disease = eff.disease();
    let config = eff.simulation();
    let ensemble = run_ensemble(&world, &disease, origin, eff.runs, &config, eff.rng_seed)?;
    // Run 0 again with the series kept; same stream as the ensemble's run 0.
    let first = simulate_run(
        &world.seed_outbreak(origin, &disease)?,
        &disease,
        &config,
        &mut stream(eff.rng_seed, "ensemble", &[origin as u64, 0]),
    );
    out.write_csv(
        "runs.csv",
        &["run", "pandemic_day", "peak_day"],
        ensemble.runs.iter().map(|r| vec![r.run.to_string(), opt(r.pandemic_day), r.peak_day.to_string()]),
    )?;
    out.write_csv(
        "series.csv",
        &["day", "region", "prevalence_per_100k"],
        first.regional_prevalence.iter().enumerate().flat_map(|(d, day)| {
            (0..REGION_COUNT).map(move |r| vec![(d + 1).to_string(), (r + 1).to_string(), day[r].to_string()])
        }),
    )?;
    out.write_csv(
        "incidence.csv",
        &["day", "new_infectious"],
        first.global_incidence.iter().enumerate().map(|(d, x)| vec![(d + 1).to_string(), x.to_string()]),
    )?;
    out.write_json("summary.json", &json!({ "config": eff, "ensemble": ensemble }))?;
    eprintln!(
        "{}: median pandemic day {}, median peak day {} ({} of {} runs pandemic)",
        ensemble.seed_iata,
        opt(ensemble.median_pandemic_day),
        ensemble.median_peak_day,
        ensemble.pandemic_runs(),
        eff.runs
    );
    out.finish("simulate", &eff, eff.rng_seed)
}

pub fn sweep_beta(a: SweepArgs) -> Result<()> {
    let (file, seed) = settings(&a.common)?;
    let grid = parse_grid(&a.betas)?;
    let base = DiseaseModel::simple_seir(*grid.first().context("empty beta grid")?);
    let eff = Effective::resolve(base, &file, &a.disease, Some(seed))?;
    let mut out = OutputDir::create(&a.common.out)?;
    let (graph, world) = load_world(&mut out, &a.world, eff.rho)?;
    let aef: Vec<f64> = all_aef(&graph).iter().map(|s| s.normalized).collect();
    let (seeds, selection) = if a.seed_airports.is_empty() {
        let sel = select_decile_seeds(&aef, &mut stream(eff.rng_seed, "deciles", &[]))?;
        (sel.seeds.clone(), Some(sel))
    } else {
        (node_ids(&graph, &a.seed_airports)?, None)
    };
    let report = invasion_threshold_sweep(&world, &seeds, &aef, &grid, &eff.disease(), eff.runs, &eff.simulation(), eff.rng_seed)?;
    out.write_csv(
        "sweep.csv",
        &["iata", "aef", "beta", "pandemic", "pandemic_runs", "median_pandemic_day"],
        report.rows.iter().flat_map(|row| {
            row.cells.iter().map(move |c| {
                vec![
                    row.iata.clone(),
                    row.aef.to_string(),
                    c.beta.to_string(),
                    c.pandemic.to_string(),
                    c.pandemic_runs.to_string(),
                    opt(c.median_pandemic_day),
                ]
            })
        }),
    )?;
    out.write_csv(
        "minimal_beta.csv",
        &["iata", "aef", "minimal_beta"],
        report.rows.iter().map(|r| vec![r.iata.clone(), r.aef.to_string(), opt(r.minimal_beta)]),
    )?;
    out.write_json("report.json", &json!({ "config": eff, "seed_selection": selection, "report": report }))?;
    eprintln!(
        "r(AEF, minimal beta) = {} over {} seeds; never pandemic: {}",
        opt(report.aef_vs_minimal_beta.r),
        report.rows.len(),
        report.never_pandemic.len()
    );
    out.finish("sweep-beta", &json!({ "config": eff, "betas": grid }), eff.rng_seed)
}

fn correlation_line(measure: &str, outcome: &str, c: &CorrelationCell) -> Vec<String> {
    vec![
        measure.to_string(),
        outcome.to_string(),
        c.n.to_string(),
        opt(c.r),
        opt(c.ci_low),
        opt(c.ci_high),
        opt(c.ci_half_width),
        c.undefined.clone().unwrap_or_default(),
    ]
}

pub fn time_to_pandemic(a: TimeToPandemicArgs) -> Result<()> {
    let (file, seed) = settings(&a.common)?;
    let eff = Effective::resolve(DiseaseModel::full(DiseaseModel::PANDEMIC_BETA), &file, &a.disease, Some(seed))?;
    let mut out = OutputDir::create(&a.common.out)?;
    let (graph, world) = load_world(&mut out, &a.world, eff.rho)?;
    let aef: Vec<f64> = all_aef(&graph).iter().map(|s| s.normalized).collect();
    let seeds = if a.seed_airports.is_empty() {
        select_range_covering_seeds(&aef, a.seeds)?
    } else {
        node_ids(&graph, &a.seed_airports)?
    };
    let centrality = CentralityReport::compute(&graph)?;
    let report = time_to_pandemic_study(
        &world,
        &seeds,
        StudyMeasures { aef: &aef, centrality: &centrality },
        &eff.disease(),
        eff.runs,
        &eff.simulation(),
        eff.rng_seed,
    )?;
    let mut header = vec!["iata"];
    header.extend(STUDY_MEASURES);
    header.extend(["median_pandemic_day", "median_peak_day"]);
    out.write_csv(
        "outcomes.csv",
        &header,
        report.rows.iter().map(|r| {
            let mut line = vec![r.iata.clone()];
            line.extend(r.measures.iter().map(f64::to_string));
            line.extend([opt(r.median_pandemic_day), r.median_peak_day.to_string()]);
            line
        }),
    )?;
    out.write_csv(
        "correlations.csv",
        &["measure", "outcome", "n", "r", "ci_low", "ci_high", "ci_half_width", "undefined"],
        report.correlations.iter().flat_map(|c| {
            [correlation_line(c.measure, "pandemic_day", &c.pandemic_day), correlation_line(c.measure, "peak_day", &c.peak_day)]
        }),
    )?;
    out.write_json("report.json", &json!({ "config": eff, "report": report }))?;
    if let Some(c) = report.correlation("aef") {
        eprintln!("r(AEF, pandemic day) = {}, r(AEF, peak day) = {}", opt(c.pandemic_day.r), opt(c.peak_day.r));
    }
    out.finish("time-to-pandemic", &json!({ "config": eff, "seeds": a.seeds, "seed_airports": a.seed_airports }), eff.rng_seed)
}

fn scheme_kind(s: Scheme) -> SchemeKind {
    match s {
        Scheme::Uniform => SchemeKind::Uniform,
        Scheme::DegreeWeighted => SchemeKind::DegreeWeighted,
        Scheme::AefWeighted => SchemeKind::AefWeighted,
    }
}

fn scheme_name(s: SchemeKind) -> &'static str {
    match s {
        SchemeKind::Uniform => "uniform",
        SchemeKind::DegreeWeighted => "degree_weighted",
        SchemeKind::AefWeighted => "aef_weighted",
    }
}

pub fn robustness(a: RobustnessArgs) -> Result<()> {
    let (_, seed) = settings(&a.common)?;
    let fractions = parse_percentages(&a.fractions)?;
    let mut out = OutputDir::create(&a.common.out)?;
    let graph = load_graph(&mut out, &a.graph)?;
    if graph.nodes_in_country(&a.country).is_empty() {
        bail!("no airports in country {:?}", a.country);
    }
    let config = RobustnessConfig {
        fractions,
        schemes: a.schemes.iter().copied().map(scheme_kind).collect(),
        repeats: a.repeats,
        country: a.country.clone(),
        rng_seed: seed,
    };
    let raw: Vec<f64> = all_raw_aef(&graph).iter().map(|v| v.raw).collect();
    let report = robustness_study(&graph, &raw, &config)?;
    out.write_csv(
        "robustness.csv",
        &["fraction", "scheme", "removed", "group", "compared", "share_over_1pct", "share_over_5pct"],
        report.rows.iter().flat_map(|r| {
            [("inside", &r.inside), ("outside", &r.outside)].map(|(group, g)| {
                vec![
                    r.fraction.to_string(),
                    scheme_name(r.scheme).to_string(),
                    r.removed.to_string(),
                    group.to_string(),
                    g.compared.to_string(),
                    g.share_over_1pct().to_string(),
                    g.share_over_5pct().to_string(),
                ]
            })
        }),
    )?;
    out.write_json("report.json", &report)?;
    out.finish("robustness", &config, seed)
}

pub fn branching(a: BranchingArgs) -> Result<()> {
    let (_, seed) = settings(&a.common)?;
    let grid = parse_grid(&a.r0)?;
    if grid.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
        bail!("reproduction numbers must be non-negative");
    }
    if a.population < 100 {
        bail!("--population must be at least 100");
    }
    if a.dots == 0 || a.trials == 0 {
        bail!("--dots and --trials must be at least 1");
    }
    let mut out = OutputDir::create(&a.common.out)?;
    let points = branching_figure(&grid, a.population, a.dots, a.trials, seed);
    out.write_csv(
        "branching.csv",
        &["r0", "analytic", "dot", "fraction"],
        points.iter().flat_map(|p| {
            p.dots
                .iter()
                .enumerate()
                .map(move |(i, f)| vec![p.r0.to_string(), p.analytic.to_string(), i.to_string(), f.to_string()])
        }),
    )?;
    let config = json!({
        "r0": grid,
        "population": a.population,
        "dots": a.dots,
        "trials": a.trials,
        "rng_seed": seed,
    });
    out.write_json("report.json", &json!({ "experiment": "branching", "config": config, "points": points }))?;
    out.finish("branching", &config, seed)
}
