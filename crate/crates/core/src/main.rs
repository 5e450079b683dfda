use brf::aligned::{analyze, parse_space_spec, AlgebraicConstants, AlignedSpace, Embedding};
use brf::brf_solver::{
    brf_report, corrigendum_json, equations, corrigendum_report, legacy_point, multistart, solve_corrected, with_bruteforce, LegacyParams,
    SpaceParams,
};
use brf::catalog::{catalog_test, from_q, check_entry, constants_json, lookup};
use brf::curvature::{brf_residual_parts, hq_form, DiagonalMetric, H2Mode};
use brf::group_brf::{parse_algebra, verify_rigidity, GroupFrame};
use brf::grflow::{integrate, FlowSystem, StepControl};
use brf::report::{default_tol, error_json, to_json_string, write_report};
use brf::scalar::{round_f64, Scalar, Q};
use brf::{BrfError, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "brf", version, about = "Bismut-Ricci-flat metrics on aligned homogeneous spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Catalog id, e.g. su3xsu3_so3 or su2xsu2_s1_3_2.
    #[arg(long)]
    space: Option<String>,
    /// Space-spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Tolerance (default from BRF_TOL, else 1e-10).
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for JSON and markdown reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Algebraic constants of a space.
    Analyze(Common),
    /// Corrected BRF solutions over a z₁ grid.
    Solve {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_delimiter = ',')]
        z1_grid: Vec<String>,
        /// Also run a seeded multistart search with this many starts.
        #[arg(long, default_value_t = 0)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the direct-summation residual.
        #[arg(long)]
        closed_only: bool,
    },
    /// Residuals of a user-supplied diagonal metric.
    Verify {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        at: String,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long, default_value = "corrected")]
        mode: H2Mode,
    },
    /// Legacy curve data with derivatives.
    Legacy {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_delimiter = ',')]
        at: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        z1_grid: Vec<String>,
    },
    /// Legacy versus corrected comparison table.
    Corrigendum {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_delimiter = ',')]
        z1_grid: Vec<String>,
    },
    /// Generalized Ricci flow on the diagonal family.
    Flow {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value = "1")]
        at: String,
        #[arg(long, value_delimiter = ',')]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1.0)]
        h_scale: f64,
        /// Track the codifferential of H along the trajectory.
        #[arg(long)]
        monitor: bool,
    },
    /// Rigidity search on a compact Lie group.
    Group {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validates every catalog entry.
    CatalogTest {
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Output {
    stem: &'static str,
    title: String,
    body: Value,
    extra: Vec<(&'static str, String)>,
    failed: Option<BrfError>,
}

impl Output {
    fn new(stem: &'static str, title: impl Into<String>, body: Value) -> Self {
        Output { stem, title: title.into(), body, extra: vec![], failed: None }
    }
}

fn parse_value<S: Scalar>(s: &str) -> Result<S> {
    S::from_json(&Value::String(s.trim().into())).ok_or_else(|| BrfError::Parameter(format!("cannot parse `{s}` as a number")))
}

struct Loaded<S> {
    id: String,
    emb: Embedding<S>,
    consts: AlgebraicConstants<S>,
    spec_z1: Vec<Q>,
    catalog: Option<brf::catalog::SpaceCatalogEntry>,
}

fn load<S: Scalar>(c: &Common, tol: f64) -> Result<Loaded<S>> {
    match (&c.space, &c.spec) {
        (Some(id), None) => {
            let entry = lookup(id)?;
            let (emb, consts) = analyze(entry.embedding::<S>()?, tol)?;
            Ok(Loaded { id: id.clone(), emb, consts, spec_z1: vec![], catalog: Some(entry) })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| BrfError::Io(format!("{}: {e}", path.display())))?;
            let doc: Value = serde_json::from_str(&text).map_err(|e| BrfError::Malformed(e.to_string()))?;
            let spec = parse_space_spec(&doc)?;
            let emb = spec.embedding.map_scalar(from_q::<S>);
            let id = emb.name.clone();
            let (emb, consts) = analyze(emb, tol)?;
            Ok(Loaded { id, emb, consts, spec_z1: spec.z1, catalog: None })
        }
        _ => Err(BrfError::Parameter("give exactly one of --space and --spec".into())),
    }
}

fn grid<S: Scalar>(given: &[String], spec: &[Q], default: &[&str]) -> Result<Vec<S>> {
    if !given.is_empty() {
        given.iter().map(|s| parse_value(s)).collect()
    } else if !spec.is_empty() {
        Ok(spec.iter().map(from_q::<S>).collect())
    } else {
        default.iter().map(|s| parse_value(s)).collect()
    }
}

fn analyze_cmd<S: Scalar>(c: &Common, tol: f64) -> Result<Output> {
    let l = load::<S>(c, tol)?;
    let mut body = constants_json(&l.id, &l.consts);
    if let Some(e) = &l.catalog {
        let r = check_entry::<S>(e, tol);
        body["catalog_check"] = serde_json::to_value(&r).unwrap_or(Value::Null);
    }
    Ok(Output::new("analyze", format!("Constants of {}", l.id), body))
}

fn solve_cmd<S: Scalar>(c: &Common, tol: f64, z1_grid: &[String], starts: usize, seed: u64, closed_only: bool) -> Result<Output> {
    let l = load::<S>(c, tol)?;
    let p = SpaceParams::from_constants(&l.consts)?;
    let zs: Vec<S> = grid(z1_grid, &l.spec_z1, &["0.5", "1", "2"])?;
    let mut sols = Vec::new();
    let mut searches = Vec::new();
    for z in &zs {
        for s in solve_corrected(&p, z)? {
            let s = if closed_only {
                s
            } else {
                let space = AlignedSpace::build(&l.emb, &l.consts, z.to_f64())?;
                with_bruteforce(&space, s)?
            };
            sols.push(s);
        }
        if starts > 0 {
            let r = multistart(&p.to_f64(), z.to_f64(), starts, seed)?;
            searches.push(json!({
                "z1": z.to_json(),
                "starts": r.starts,
                "converged": r.converged,
                "distinct_solutions": r.solutions.len(),
                "other_solutions": r.other_solutions,
                "max_distance_to_canonical": round_f64(r.max_distance_to_canonical),
            }));
        }
    }
    let mut body = brf_report(&l.id, &zs, &sols);
    if starts > 0 {
        body["multistart"] = Value::Array(searches);
    }
    Ok(Output::new("solve", format!("BRF solutions on {}", l.id), body))
}

fn verify_cmd<S: Scalar>(c: &Common, tol: f64, at: &str, x: &[String], mode: H2Mode) -> Result<Output> {
    let l = load::<S>(c, tol)?;
    let p = SpaceParams::from_constants(&l.consts)?;
    let z1: S = parse_value(at)?;
    let xs: Vec<S> = x.iter().map(|v| parse_value(v)).collect::<Result<_>>()?;
    if xs.len() != 3 {
        return Err(BrfError::Parameter("--x takes three comma-separated values".into()));
    }
    let m = DiagonalMetric::new(z1.clone(), [xs[0].clone(), xs[1].clone(), xs[2].clone()])?;
    let eq = equations(&p, &m, mode)?.iter().fold(0.0f64, |a, v| a.max(v.to_f64().abs()));
    let space = AlignedSpace::build(&l.emb, &l.consts, z1.to_f64())?;
    let parts = brf_residual_parts(&space, &m.to_f64(), &hq_form(&space))?;
    let body = json!({
        "space_id": l.id,
        "mode": mode,
        "exact": S::EXACT,
        "z1": z1.to_json(),
        "x": m.x.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "equation_residual": round_f64(eq),
        "residual": {
            "ricci": round_f64(parts.ricci),
            "harmonic": round_f64(parts.harmonic),
            "closed": round_f64(parts.closed),
            "max": round_f64(parts.max()),
        },
        "tol": round_f64(tol),
        "is_brf": parts.max() < tol,
    });
    Ok(Output::new("verify", format!("Residuals on {}", l.id), body))
}

fn legacy_cmd<S: Scalar>(c: &Common, tol: f64, at: &[String], z1_grid: &[String]) -> Result<Output> {
    let l = load::<S>(c, tol)?;
    let p = SpaceParams::from_constants(&l.consts)?;
    let lp = LegacyParams::from_space(&p)?;
    let mut pts: Vec<String> = at.to_vec();
    pts.extend(z1_grid.iter().cloned());
    let zs: Vec<S> = grid(&pts, &l.spec_z1, &["1"])?;
    let points = zs.iter().map(|z| legacy_point(&lp, z).map(|pt| pt.to_json())).collect::<Result<Vec<_>>>()?;
    let body = json!({
        "space_id": l.id,
        "mode": H2Mode::Legacy,
        "exact": S::EXACT,
        "c1": lp.c1.to_json(),
        "lambda": lp.lambda.to_json(),
        "kappa1": lp.kappa1.to_json(),
        "kappa2": lp.kappa2.to_json(),
        "points": points,
    });
    Ok(Output::new("legacy", format!("Legacy curve on {}", l.id), body))
}

fn corrigendum_cmd<S: Scalar>(c: &Common, tol: f64, z1_grid: &[String]) -> Result<Output> {
    let l = load::<S>(c, tol)?;
    let zs: Vec<f64> = grid::<f64>(z1_grid, &l.spec_z1, &["0.5", "1", "2"])?;
    let rows = corrigendum_report(&l.emb, &l.consts, &zs)?;
    Ok(Output::new("corrigendum", format!("Legacy versus corrected on {}", l.id), corrigendum_json(&l.id, &rows)))
}

fn flow_cmd(c: &Common, tol: f64, at: &str, x0: &[f64], t_end: f64, h_scale: f64, monitor: bool) -> Result<Output> {
    let l = load::<f64>(c, tol)?;
    let p = SpaceParams::from_constants(&l.consts)?;
    let z1: f64 = parse_value(at)?;
    let sys = FlowSystem::new(&p, z1, h_scale)?;
    let x0 = if x0.len() == 3 {
        [x0[0], x0[1], x0[2]]
    } else if !x0.is_empty() {
        return Err(BrfError::Parameter("--x0 takes three comma-separated values".into()));
    } else {
        let g = sys.canonical();
        [g[0] * 1.1, g[1] * 0.9, g[2] * 1.05]
    };
    let ctl = StepControl { tol: c.tol.unwrap_or(StepControl::default().tol), ..StepControl::default() };
    let space = if monitor { Some(AlignedSpace::build(&l.emb, &l.consts, z1)?) } else { None };
    let traj = integrate(&sys, x0, t_end, &ctl, space.as_ref())?;
    let mut body = traj.to_json();
    body["space_id"] = json!(l.id);
    body["z1"] = round_f64(z1);
    body["canonical"] = json!(sys.canonical().map(round_f64));
    let mut out = Output::new("flow", format!("Flow on {}", l.id), body);
    out.extra.push(("flow.csv", traj.to_csv()));
    Ok(out)
}

fn group_cmd(algebra: &str, trials: usize, seed: u64) -> Result<Output> {
    let gf = GroupFrame::new(parse_algebra(algebra)?, None)?;
    let r = verify_rigidity(&gf, trials, seed)?;
    let mut body = r.to_json();
    body["seed"] = json!(seed);
    Ok(Output::new("group", format!("Rigidity on {algebra}"), body))
}

fn catalog_cmd(exact: bool, tol: f64) -> Output {
    let r = catalog_test(exact, tol);
    let failed = (!r.passed).then(|| {
        let bad: Vec<String> = r.entries.iter().filter(|e| !e.passed).map(|e| e.id.clone()).collect();
        BrfError::Verification(format!("catalog entries failed: {}", bad.join(", ")))
    });
    let rows: Vec<Value> = r
        .entries
        .iter()
        .flat_map(|e| e.checks.iter().map(move |c| json!({"id": e.id, "check": c.name, "passed": c.passed, "detail": c.detail})))
        .collect();
    let body = json!({"exact": r.exact, "passed": r.passed, "checks": rows});
    let mut out = Output::new("catalog_test", "Catalog self-test", body);
    out.failed = failed;
    out
}

fn dispatch(cmd: &Cmd) -> Result<(Output, Option<PathBuf>)> {
    macro_rules! generic {
        ($c:expr, $f:ident $(, $a:expr)*) => {{
            let tol = $c.tol.unwrap_or_else(default_tol);
            let o = if $c.exact { $f::<Q>($c, tol $(, $a)*)? } else { $f::<f64>($c, tol $(, $a)*)? };
            (o, $c.out.clone())
        }};
    }
    Ok(match cmd {
        Cmd::Analyze(c) => generic!(c, analyze_cmd),
        Cmd::Solve { c, z1_grid, starts, seed, closed_only } => generic!(c, solve_cmd, z1_grid, *starts, *seed, *closed_only),
        Cmd::Verify { c, at, x, mode } => generic!(c, verify_cmd, at, x, *mode),
        Cmd::Legacy { c, at, z1_grid } => generic!(c, legacy_cmd, at, z1_grid),
        Cmd::Corrigendum { c, z1_grid } => generic!(c, corrigendum_cmd, z1_grid),
        Cmd::Flow { c, at, x0, t_end, h_scale, monitor } => {
            let tol = c.tol.unwrap_or_else(default_tol);
            (flow_cmd(c, tol, at, x0, *t_end, *h_scale, *monitor)?, c.out.clone())
        }
        Cmd::Group { algebra, trials, seed, out } => (group_cmd(algebra, *trials, *seed)?, out.clone()),
        Cmd::CatalogTest { exact, tol, out } => (catalog_cmd(*exact, tol.unwrap_or_else(default_tol)), out.clone()),
    })
}

fn fail(e: &BrfError) -> ! {
    eprint!("{}", to_json_string(&error_json(e)));
    std::process::exit(e.exit_code());
}

fn main() {
    let cli = Cli::parse();
    let (out, dir) = match dispatch(&cli.cmd) {
        Ok(x) => x,
        Err(e) => fail(&e),
    };
    print!("{}", to_json_string(&out.body));
    if let Some(dir) = dir {
        if let Err(e) = write_report(&dir, out.stem, &out.title, &out.body, &out.extra) {
            fail(&e);
        }
    }
    if let Some(e) = out.failed {
        fail(&e);
    }
}
