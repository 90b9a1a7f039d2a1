mod render;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use aztec_dimers::error::Error;
use aztec_dimers::fluctlab::{
    discrete_component, exact_grid_means, facet_grid, predicted_moments, run_experiment, Centering, FacetSpec, GridHeights,
    DEFAULT_MESH_EXPONENT,
};
use aztec_dimers::lattice::{AztecGraph, HeightPlan, WeightScheme};
use aztec_dimers::sampler::Sampler;
use aztec_dimers::spectral::{
    amoeba_raster, characteristic_polynomial, period_genus1, predicted_z_distribution, AmoebaWindow,
};
use aztec_dimers::verify::{run_suites, Mutation, Suite, VerifyOptions};
use aztec_dimers::VERSION;

/// Largest order for which `sample --csv` centres a single tiling with exact means.
const EXACT_CENTRING_MAX_ORDER: usize = 40;

#[derive(Parser, Debug)]
#[command(name = "aztec", version, about = "Periodically weighted Aztec diamond dimers")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw random tilings.
    Sample(SampleArgs),
    /// Run the oracle suites.
    Verify(VerifyArgs),
    /// Characteristic polynomial, amoeba and genus-1 data.
    Spectral(SpectralArgs),
    /// Discrete-component experiment against the predicted law.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// Weight scheme: a JSON file, inline JSON, `symmetric:A` or `uniform:K,L`.
    #[arg(long)]
    weights: String,
}

#[derive(Args, Debug)]
struct FacetArgs {
    /// Facet rectangle "xi0,eta0,xi1,eta1"; repeatable.
    #[arg(long)]
    facet: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MESH_EXPONENT)]
    mesh_exponent: f64,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    weights: WeightArgs,
    /// Number of fundamental domains N; the diamond has order k l N.
    #[arg(long)]
    order_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Matchings and heights as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG rendering of the first sample.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Discrete components per sample as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    facets: FacetArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite to run; repeatable (default: all).
    #[arg(long)]
    suite: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Inject a fault to exercise the suites.
    #[arg(long, hide = true)]
    mutation: Option<String>,
}

#[derive(Args, Debug)]
struct SpectralArgs {
    #[command(flatten)]
    weights: WeightArgs,
    /// Curve data as JSON (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Amoeba raster as PNG.
    #[arg(long)]
    png: Option<PathBuf>,
    /// Amoeba point cloud as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Half-width of the amoeba window in log coordinates.
    #[arg(long, default_value_t = 4.0)]
    radius: f64,
    #[arg(long, default_value_t = 200)]
    pixels: usize,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long)]
    order_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    count: usize,
    /// Report JSON (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Discrete components as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    facets: FacetArgs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidWeights(_) | Error::InvalidArgument(_) | Error::Json(_) | Error::EmptyGrid(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure { code: 3, message: format!("{}: {e}", path.display()) }
}

fn load_weights(spec: &str) -> Result<WeightScheme, Failure> {
    let spec = spec.trim();
    if let Some(a) = spec.strip_prefix("symmetric:") {
        let a: f64 = a.parse().map_err(|_| usage(format!("bad parameter in {spec:?}")))?;
        return Ok(WeightScheme::symmetric_two_by_two(a)?);
    }
    if let Some(kl) = spec.strip_prefix("uniform:") {
        let v: Vec<usize> = kl.split(',').map(str::parse).collect::<Result<_, _>>().map_err(|_| usage(format!("bad periods in {spec:?}")))?;
        return match v[..] {
            [k, l] if k > 0 && l > 0 => Ok(WeightScheme::uniform(k, l)),
            _ => Err(usage(format!("expected uniform:K,L, got {spec:?}"))),
        };
    }
    let text = if spec.starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| usage(format!("cannot read weights {spec:?}: {e}")))?
    };
    Ok(WeightScheme::from_json(&text)?)
}

fn facets(args: &FacetArgs) -> Result<Vec<FacetSpec>, Failure> {
    if args.facet.is_empty() {
        let c = FacetSpec::central();
        return Ok(vec![FacetSpec::new(c.xi0, c.eta0, c.xi1, c.eta1, args.mesh_exponent)?]);
    }
    Ok(args.facet.iter().map(|f| FacetSpec::parse(f, args.mesh_exponent)).collect::<Result<_, _>>()?)
}

fn provenance(command: &str, config: Value) -> Value {
    json!({ "tool": "aztec", "version": VERSION, "command": command, "config": config })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| io_failure(path, e))
}

fn write_json(path: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serialisable") + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_with_provenance(path: &Path, prov: &Value, body: impl FnOnce(&mut BufWriter<File>) -> aztec_dimers::error::Result<()>) -> Result<(), Failure> {
    let mut f = create(path)?;
    writeln!(f, "# {}", serde_json::to_string(prov).expect("serialisable")).map_err(|e| io_failure(path, e))?;
    body(&mut f)?;
    f.flush().map_err(|e| io_failure(path, e))
}

fn cmd_sample(args: &SampleArgs) -> Result<(), Failure> {
    let weights = load_weights(&args.weights.weights)?;
    if args.count == 0 {
        return Err(usage("--count must be positive"));
    }
    let facet_specs = facets(&args.facets)?;
    let prov = provenance(
        "sample",
        json!({ "weights": weights, "order_n": args.order_n, "seed": args.seed, "count": args.count, "facets": facet_specs }),
    );
    let graph = AztecGraph::new(args.order_n, weights)?;
    let plan = HeightPlan::new(&graph, graph.default_base_face());
    let grids = if args.csv.is_some() {
        facet_specs.iter().map(|f| facet_grid(&graph, f)).collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let sampler = Sampler::new(graph.clone())?;
    let keep_all = args.out.is_some();
    let batch = sampler.sample_batch(args.seed, args.count, |i, m| {
        let h = plan.heights(&m)?;
        let grid: GridHeights = grids.iter().map(|g| g.faces.iter().map(|&f| h.get(f) as f64).collect()).collect();
        let kept = (keep_all || i == 0).then_some((m, h));
        Ok::<_, Error>((kept, grid))
    });
    let items = batch.items.into_iter().collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &args.svg {
        let (m, _) = items[0].0.as_ref().expect("first sample kept");
        std::fs::write(path, render::tiling_svg(&graph, m)).map_err(|e| io_failure(path, e))?;
    }
    if let Some(path) = &args.out {
        let samples: Vec<Value> = items
            .iter()
            .enumerate()
            .map(|(i, (kept, _))| {
                let (m, h) = kept.as_ref().expect("all samples kept");
                let edges: Vec<[i64; 4]> = m
                    .edges(&graph)
                    .map(|e| {
                        let e = graph.edge(e);
                        let (w, b) = (graph.white_position(e.white), graph.black_position(e.black));
                        [w.x, w.y, b.x, b.y]
                    })
                    .collect();
                json!({ "index": i, "edges": edges, "heights": h.values() })
            })
            .collect();
        let faces: Vec<[i64; 2]> = graph.faces().iter().map(|p| [p.x, p.y]).collect();
        let doc = json!({
            "provenance": prov,
            "order": graph.order(),
            "base_face": faces[graph.default_base_face().0 as usize],
            "faces": faces,
            "samples": samples,
        });
        let mut f = create(path)?;
        serde_json::to_writer(&mut f, &doc).map_err(|e| io_failure(path, e))?;
        f.flush().map_err(|e| io_failure(path, e))?;
    }
    if let Some(path) = &args.csv {
        let heights: Vec<GridHeights> = items.into_iter().map(|(_, g)| g).collect();
        let centering = if heights.len() >= 2 {
            Centering::Pooled
        } else if graph.order() <= EXACT_CENTRING_MAX_ORDER {
            Centering::Exact(exact_grid_means(&graph, &grids)?)
        } else {
            return Err(Error::InvalidArgument(format!(
                "a single sample above order {EXACT_CENTRING_MAX_ORDER} cannot be centred; use --count 2 or more"
            ))
            .into());
        };
        let z = discrete_component(&heights, &grids, &centering)?;
        csv_with_provenance(path, &prov, |f| z.write_csv(f))?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let suites = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite.iter().map(|s| s.parse::<Suite>()).collect::<Result<Vec<_>, _>>()?
    };
    let mutation = match args.mutation.as_deref() {
        None => None,
        Some("kasteleyn-sign") => Some(Mutation::KasteleynSign),
        Some(other) => return Err(usage(format!("unknown mutation {other:?}"))),
    };
    let reports = run_suites(&suites, VerifyOptions { seed: args.seed, mutation });
    for r in &reports {
        eprintln!("{:<10} {}", r.suite.name(), if r.passed { "PASS" } else { "FAIL" });
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("  failed: {} ({})", c.name, c.detail);
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let doc = json!({
        "provenance": provenance("verify", json!({ "suites": suites, "seed": args.seed, "mutation": mutation })),
        "passed": passed,
        "suites": reports,
    });
    write_json(args.out.as_deref(), &doc)?;
    Ok(passed)
}

fn cmd_spectral(args: &SpectralArgs) -> Result<(), Failure> {
    let weights = load_weights(&args.weights.weights)?;
    let p = characteristic_polynomial(&weights)?;
    let window = AmoebaWindow::square(args.radius, args.pixels);
    let raster = amoeba_raster(&p, window)?;
    let expected = (weights.k() - 1) * (weights.l() - 1);
    let holes = raster.bounded_components();
    if let Some(path) = &args.png {
        raster.write_png(path)?;
    }
    let prov = provenance("spectral", json!({ "weights": weights, "radius": args.radius, "pixels": args.pixels }));
    if let Some(path) = &args.csv {
        csv_with_provenance(path, &prov, |f| raster.write_csv(f))?;
    }
    let mut doc = json!({
        "provenance": prov,
        "polynomial": p,
        "amoeba": { "window": window, "bounded_components": holes, "bounded_sizes": raster.bounded_sizes(), "expected_genus": expected },
    });
    if holes < expected {
        write_json(args.out.as_deref(), &doc)?;
        return Err(Failure {
            code: 3,
            message: format!("genus check failed: {holes} bounded amoeba components, expected {expected}"),
        });
    }
    if let Some(a) = weights.symmetric_parameter() {
        let curve = period_genus1(a)?;
        let law = predicted_z_distribution(a)?;
        doc["genus1"] = json!({
            "curve": curve,
            "tau": law.tau()[(0, 0)],
            "shift": law.shift()[0],
            "predicted_z": predicted_moments(&law)?,
        });
    }
    write_json(args.out.as_deref(), &doc)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<bool, Failure> {
    let weights = load_weights(&args.weights.weights)?;
    let facet_specs = facets(&args.facets)?;
    let report = run_experiment(&weights, args.order_n, &facet_specs, args.count, args.seed)?;
    let prov = provenance(
        "experiment",
        json!({ "weights": weights, "order_n": args.order_n, "seed": args.seed, "count": args.count, "facets": facet_specs }),
    );
    if let Some(path) = &args.csv {
        let z = report.z.as_ref().expect("readings kept");
        csv_with_provenance(path, &prov, |f| z.write_csv(f))?;
    }
    let doc = json!({ "provenance": prov, "report": report });
    write_json(args.out.as_deref(), &doc)?;
    Ok(report.passed)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("cannot set thread count: {e}")))?;
    }
    match &cli.command {
        Command::Sample(a) => cmd_sample(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Spectral(a) => cmd_spectral(a).map(|_| true),
        Command::Experiment(a) => cmd_experiment(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("aztec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
