use std::io::Read;
use std::path::Path;

use cayminor::graph::{is_connected, Graph, VertexId, VertexSet};
use cayminor::groups::{
    babai_collapse, crossing_audit, virtually_free_bound, CayleyBall, CrossingAudit, Element, GroupSpec, Side,
    VirtuallyFree, VirtuallyFreeBound,
};
use cayminor::io::{host_hash, DecompositionFile, Document, GraphFile, Header, HostRef};
use cayminor::kpr::{nagata_witness, KprOptions};
use cayminor::minors::{
    construct_z2_s2_minor, construct_z2xc_minor, find_clique_minor, project_free_product_minor, verify_minor,
    z2_s2_spec, ConstructedMinor, SearchOptions, SearchOutcome, Verdict,
};
use cayminor::rays::{build_minor_from_rays, parse_ray_file, BuildLog, RaySource};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, EXIT_BUDGET, EXIT_CHECK_FAILED};
use crate::output::{Report, Table};
use crate::{
    BallArgs, Cli, CollapseArgs, Command, ConstructZ2S2Args, ConstructZ2xcArgs, FindArgs, Format, HostArgs, KprArgs,
    MinorCommand, ProjectArgs, RaysArgs, VerifyArgs, VfreeArgs,
};

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let tabular = matches!(cli.command, Command::Ball(_) | Command::Kpr(_));
    if cli.format == Format::Csv && !tabular {
        return Err(CliError::Usage(
            "--format csv is available for `ball` and `kpr` only".into(),
        ));
    }
    let seed = cli.seed;
    match &cli.command {
        Command::Ball(a) => ball(a, seed),
        Command::Minor(MinorCommand::Find(a)) => find(a, seed),
        Command::Minor(MinorCommand::Verify(a)) => verify(a, seed),
        Command::Minor(MinorCommand::ConstructZ2S2(a)) => construct_z2s2(a, seed),
        Command::Minor(MinorCommand::ConstructZ2xc(a)) => construct_z2xc(a, seed),
        Command::Minor(MinorCommand::Project(a)) => project(a, seed),
        Command::Collapse(a) => collapse(a, seed),
        Command::Kpr(a) => kpr(a, seed),
        Command::Rays(a) => rays(a, seed),
        Command::VfreeBound(a) => vfree_bound(a, seed),
    }
}

fn header(command: &str, seed: u64, args: &impl Serialize) -> Header {
    Header::new(command, seed, serde_json::to_value(args).unwrap_or_default())
}

fn read_text(path: &str) -> Result<String, CliError> {
    let file_err = |source| CliError::File {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(file_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(file_err)
    }
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let doc: Document<GraphFile> = read_json(&path.to_string_lossy())?;
    Ok(doc.body.to_graph()?)
}

fn parse_spec(text: &str) -> Result<GroupSpec, CliError> {
    Ok(text.parse()?)
}

struct Host {
    graph: Graph,
    host_ref: Option<HostRef>,
    spec: Option<GroupSpec>,
}

fn load_host(a: &HostArgs) -> Result<Host, CliError> {
    match (&a.host, &a.spec, a.radius) {
        (Some(path), _, _) => Ok(Host {
            graph: read_graph(path)?,
            host_ref: None,
            spec: None,
        }),
        (None, Some(text), Some(radius)) => {
            let spec = parse_spec(text)?;
            let ball = CayleyBall::new(&spec, radius)?;
            Ok(Host {
                graph: ball.graph().clone(),
                host_ref: Some(HostRef {
                    spec: spec.to_string(),
                    radius,
                    enlarged: false,
                }),
                spec: Some(spec),
            })
        }
        _ => Err(CliError::Usage("give --host FILE, or --spec with --radius".into())),
    }
}

fn with_spec(h: Header, spec: Option<&GroupSpec>) -> Header {
    match spec {
        Some(s) => h.with_spec(s),
        None => h,
    }
}

#[derive(Serialize)]
struct BallBody {
    radius: usize,
    num_vertices: usize,
    num_edges: usize,
    host_hash: String,
    #[serde(flatten)]
    graph: GraphFile,
}

fn ball(a: &BallArgs, seed: u64) -> Result<Report, CliError> {
    let spec = parse_spec(&a.spec)?;
    let ball = if a.enlarged {
        CayleyBall::with_edge_gens(&spec, a.radius, spec.enlarged().gens(), a.cap)?
    } else {
        CayleyBall::with_cap(&spec, a.radius, a.cap)?
    };
    let g = ball.graph();
    let table = Table {
        columns: vec!["u", "v"],
        rows: g
            .edges()
            .iter()
            .map(|(u, v)| vec![u.to_string(), v.to_string()])
            .collect(),
    };
    let body = BallBody {
        radius: a.radius,
        num_vertices: g.num_vertices(),
        num_edges: g.num_edges(),
        host_hash: host_hash(g),
        graph: GraphFile::from_graph(g),
    };
    Ok(Report::new(header("ball", seed, a).with_spec(&spec), body)?.with_table(table))
}

#[derive(Serialize)]
struct FindBody {
    status: &'static str,
    m: usize,
    expansions: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(flatten)]
    decomposition: Option<DecompositionFile>,
}

fn find(a: &FindArgs, seed: u64) -> Result<Report, CliError> {
    if a.m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let host = load_host(&a.host)?;
    let h = with_spec(header("minor find", seed, a), host.spec.as_ref());
    let opts = SearchOptions { budget: a.budget, seed };
    match find_clique_minor(&host.graph, a.m, opts)? {
        SearchOutcome::Found {
            decomposition,
            expansions,
        } => {
            let body = FindBody {
                status: "found",
                m: a.m,
                expansions,
                exhaustive: None,
                reason: None,
                decomposition: Some(DecompositionFile::new(&decomposition, &host.graph, host.host_ref)),
            };
            Report::new(h, body)
        }
        SearchOutcome::NotFound {
            expansions,
            exhaustive,
            reason,
        } => {
            let message = format!("no K_{} found: {reason}", a.m);
            let body = FindBody {
                status: "not_found",
                m: a.m,
                expansions,
                exhaustive: Some(exhaustive),
                reason: Some(reason),
                decomposition: None,
            };
            Ok(Report::new(h, body)?.with_code(EXIT_BUDGET, message))
        }
    }
}

#[derive(Serialize)]
struct VerifyBody {
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    host_hash: String,
    verdict: Verdict,
}

fn verify(a: &VerifyArgs, seed: u64) -> Result<Report, CliError> {
    let doc: Document<DecompositionFile> = read_json(&a.input)?;
    let file = doc.body;
    let graph = match &a.host {
        Some(path) => {
            let g = read_graph(path)?;
            file.check_host(&g)?;
            g
        }
        None => file.rebuild_host()?.graph().clone(),
    };
    let verdict = verify_minor(&graph, &file.decomposition());
    let spec = file.host.as_ref().map(|h| parse_spec(&h.spec)).transpose()?;
    let h = with_spec(header("minor verify", seed, a), spec.as_ref());
    let failure = verdict.failure();
    let body = VerifyBody {
        pass: verdict.pass,
        failure: failure.clone(),
        host_hash: file.host_hash.clone(),
        verdict,
    };
    let report = Report::new(h, body)?;
    Ok(match failure {
        Some(f) => report.with_code(EXIT_CHECK_FAILED, format!("verification failed: {f}")),
        None => report,
    })
}

fn constructed(c: &ConstructedMinor, spec: &GroupSpec, h: Header) -> Result<Report, CliError> {
    let verdict = verify_minor(c.ball.graph(), &c.bd);
    if let Some(f) = verdict.failure() {
        return Err(CliError::CheckFailed(format!(
            "constructed sets fail verification: {f}"
        )));
    }
    let host_ref = HostRef {
        spec: spec.to_string(),
        radius: c.ball.radius(),
        enlarged: false,
    };
    Report::new(
        h.with_spec(spec),
        DecompositionFile::new(&c.bd, c.ball.graph(), Some(host_ref)),
    )
}

fn construct_z2s2(a: &ConstructZ2S2Args, seed: u64) -> Result<Report, CliError> {
    let c = construct_z2_s2_minor(a.m)?;
    constructed(&c, &z2_s2_spec(), header("minor construct-z2s2", seed, a))
}

fn construct_z2xc(a: &ConstructZ2xcArgs, seed: u64) -> Result<Report, CliError> {
    let spec = parse_spec(&a.spec)?;
    let [s1, s2, s3] = [&a.s1, &a.s2, &a.s3].map(|s| spec.parse_element(s));
    let c = construct_z2xc_minor(a.m, &spec, &s1?, &s2?, &s3?)?;
    constructed(&c, &spec, header("minor construct-z2xc", seed, a))
}

#[derive(Serialize)]
struct ProjectBody {
    side: &'static str,
    coset: String,
    candidates_tried: usize,
    pass: bool,
    #[serde(flatten)]
    decomposition: DecompositionFile,
}

fn project(a: &ProjectArgs, seed: u64) -> Result<Report, CliError> {
    let doc: Document<DecompositionFile> = read_json(&a.input)?;
    let file = doc.body;
    let host = match (&a.spec, a.radius) {
        (Some(text), Some(radius)) => {
            let ball = CayleyBall::new(&parse_spec(text)?, radius)?;
            file.check_host(ball.graph())?;
            ball
        }
        _ => file.rebuild_host()?,
    };
    let p = project_free_product_minor(&host, &file.decomposition())?;
    let verdict = verify_minor(p.factor_ball.graph(), &p.bd);
    let factor_spec = p.factor_ball.spec();
    let host_ref = HostRef {
        spec: factor_spec.to_string(),
        radius: p.factor_ball.radius(),
        enlarged: false,
    };
    let body = ProjectBody {
        side: match p.side {
            Side::Left => "left",
            Side::Right => "right",
        },
        coset: host.spec().format(&p.coset),
        candidates_tried: p.candidates_tried,
        pass: verdict.pass,
        decomposition: DecompositionFile::new(&p.bd, p.factor_ball.graph(), Some(host_ref)),
    };
    let report = Report::new(header("minor project", seed, a).with_spec(host.spec()), body)?;
    Ok(match verdict.failure() {
        Some(f) => report.with_code(EXIT_CHECK_FAILED, format!("projected sets fail verification: {f}")),
        None => report,
    })
}

#[derive(Serialize)]
struct CollapseBody {
    connected: bool,
    classes: Vec<VertexSet>,
    class_of: Vec<VertexId>,
    #[serde(flatten)]
    graph: GraphFile,
}

fn collapse(a: &CollapseArgs, seed: u64) -> Result<Report, CliError> {
    let classes: Vec<usize> = read_json(&a.classes.to_string_lossy())?;
    let host = load_host(&a.host)?;
    let q = babai_collapse(&host.graph, &classes)?;
    let body = CollapseBody {
        connected: is_connected(&q.graph),
        graph: GraphFile::from_graph(&q.graph),
        classes: q.classes,
        class_of: q.class_of,
    };
    Report::new(with_spec(header("collapse", seed, a), host.spec.as_ref()), body)
}

fn kpr(a: &KprArgs, seed: u64) -> Result<Report, CliError> {
    if a.m == 0 || a.m > a.partition_cap {
        return Err(CliError::Usage(format!(
            "--m {} is outside 1..={} (4^m partitions are built; raise --partition-cap to allow more)",
            a.m, a.partition_cap
        )));
    }
    if a.s_list.is_empty() {
        return Err(CliError::Usage("--s needs at least one scale".into()));
    }
    let host = load_host(&a.host)?;
    let opts = KprOptions {
        partition_cap: a.partition_cap,
        j_from_one: a.j_from_one,
    };
    let report = nagata_witness(&host.graph, a.m, &a.s_list, opts)?;
    let table = Table {
        columns: vec!["s", "delta", "cluster_size", "u_size", "diameter"],
        rows: report
            .scales
            .iter()
            .flat_map(|sc| {
                sc.rows.iter().map(move |r| {
                    vec![
                        sc.s.to_string(),
                        r.delta.clone(),
                        r.cluster_size.to_string(),
                        r.u_size.to_string(),
                        r.diameter.map(|d| d.to_string()).unwrap_or_default(),
                    ]
                })
            })
            .collect(),
    };
    let failing: Vec<String> = report
        .scales
        .iter()
        .filter(|sc| !sc.pass)
        .map(|sc| sc.s.to_string())
        .collect();
    let out = Report::new(with_spec(header("kpr", seed, a), host.spec.as_ref()), &report)?.with_table(table);
    Ok(if report.pass {
        out
    } else {
        out.with_code(EXIT_CHECK_FAILED, format!("checks failed at s = {}", failing.join(",")))
    })
}

#[derive(Serialize)]
struct RaysBody {
    #[serde(flatten)]
    decomposition: DecompositionFile,
    log: BuildLog,
}

fn rays(a: &RaysArgs, seed: u64) -> Result<Report, CliError> {
    let spec = parse_spec(&a.spec)?;
    let source = match (&a.ray_file, a.menger) {
        (Some(path), _) => RaySource::Words(parse_ray_file(&spec, &read_text(&path.to_string_lossy())?)?),
        (None, Some(r_core)) => RaySource::Menger { r_core },
        (None, None) => RaySource::Standard,
    };
    let build = build_minor_from_rays(&spec, a.m, a.radius, &source)?;
    let host_ref = HostRef {
        spec: spec.to_string(),
        radius: a.radius,
        enlarged: true,
    };
    let body = RaysBody {
        decomposition: DecompositionFile::new(&build.decomposition, build.host.graph(), Some(host_ref)),
        log: build.log,
    };
    Report::new(header("rays", seed, a).with_spec(&spec), body)
}

#[derive(Serialize)]
struct EdgeAudit {
    child: Vec<i32>,
    #[serde(flatten)]
    audit: CrossingAudit,
}

#[derive(Serialize)]
struct AuditBody {
    m: usize,
    radius: usize,
    consistent: bool,
    sets: Vec<VertexSet>,
    edges: Vec<EdgeAudit>,
}

#[derive(Serialize)]
struct VfreeBody {
    bound: VirtuallyFreeBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditBody>,
}

fn vfree_bound(a: &VfreeArgs, seed: u64) -> Result<Report, CliError> {
    let spec = parse_spec(&a.spec)?;
    let parse_all = |xs: &[String]| -> Result<Vec<Element>, CliError> {
        xs.iter().map(|x| Ok(spec.parse_element(x.trim())?)).collect()
    };
    let mut vf = VirtuallyFree::new(&spec, parse_all(&a.basis)?, parse_all(&a.reps)?)?;
    let bound = virtually_free_bound(&mut vf, a.probe_radius)?;
    let h = header("vfree-bound", seed, a).with_spec(&spec);

    let (Some(m), Some(radius)) = (a.audit_m, a.audit_radius) else {
        return Report::new(h, VfreeBody { bound, audit: None });
    };
    let ball = CayleyBall::new(&spec, radius)?;
    let outcome = find_clique_minor(
        ball.graph(),
        m,
        SearchOptions {
            seed,
            ..Default::default()
        },
    )?;
    let Some(bd) = outcome.decomposition() else {
        let body = VfreeBody { bound, audit: None };
        return Ok(Report::new(h, body)?.with_code(EXIT_BUDGET, format!("no K_{m} found to audit")));
    };
    let mut edges = Vec::new();
    for e in vf.tree_edges(a.tree_radius) {
        let audit = crossing_audit(&ball, &mut vf, &e, bd.pattern.graph(), &bd.sets)?;
        edges.push(EdgeAudit {
            child: e.child().to_vec(),
            audit,
        });
    }
    let consistent = edges.iter().all(|e| e.audit.consistent);
    let body = VfreeBody {
        bound,
        audit: Some(AuditBody {
            m,
            radius,
            consistent,
            sets: bd.sets.clone(),
            edges,
        }),
    };
    let report = Report::new(h, body)?;
    Ok(if consistent {
        report
    } else {
        report.with_code(EXIT_CHECK_FAILED, "a tree edge has fewer crossing edges than required")
    })
}
