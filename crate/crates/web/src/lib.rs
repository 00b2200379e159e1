//! Browser bindings for the static demo page in `www/`. Every export
//! returns a JSON string with plane coordinates ready for drawing.

use cayminor::groups::{CayleyBall, Element, GroupSpec};
use cayminor::kpr::{build_cover, build_cuts, check_partition, clusters_of, delta_of_index, CutParams};
use cayminor::minors::{construct_z2_s2_minor, verify_minor, BranchDecomposition};
use cayminor::rays::{build_minor_from_rays, RaySource};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Demo inputs are kept small enough to stay interactive.
const MAX_RADIUS: usize = 40;

type Point = (i64, i64);

#[derive(Serialize)]
struct MinorView {
    radius: usize,
    /// Every ball vertex.
    points: Vec<Point>,
    sets: Vec<Vec<Point>>,
    /// Host edges joining two members of the same set.
    inner_edges: Vec<(Point, Point)>,
    pass: bool,
}

#[derive(Serialize)]
struct PartitionView {
    radius: usize,
    delta: Vec<usize>,
    #[serde(rename = "R")]
    r: usize,
    num_clusters: usize,
    /// `(x, y, cluster, kept in U_T)` per vertex.
    cells: Vec<(i64, i64, usize, bool)>,
    partition_ok: bool,
}

fn point(e: &Element) -> Point {
    match e {
        Element::Coords(c) if c.len() == 2 => (c[0], c[1]),
        _ => unreachable!("the demo only builds Z^2 balls"),
    }
}

fn check_radius(radius: usize) -> Result<(), JsError> {
    if radius > MAX_RADIUS {
        return Err(JsError::new(&format!("radius is limited to {MAX_RADIUS} in the demo")));
    }
    Ok(())
}

fn minor_view(ball: &CayleyBall, bd: &BranchDecomposition) -> Result<String, JsError> {
    let g = ball.graph();
    let pos = |v| point(ball.element(v));
    let mut owner = vec![usize::MAX; g.num_vertices()];
    for (i, s) in bd.sets.iter().enumerate() {
        for v in s.iter() {
            owner[v] = i;
        }
    }
    let view = MinorView {
        radius: ball.radius(),
        points: g.vertices().map(pos).collect(),
        sets: bd.sets.iter().map(|s| s.iter().map(pos).collect()).collect(),
        inner_edges: g
            .edges()
            .iter()
            .filter(|&&(u, v)| owner[u] != usize::MAX && owner[u] == owner[v])
            .map(|&(u, v)| (pos(u), pos(v)))
            .collect(),
        pass: verify_minor(g, bd).pass,
    };
    Ok(serde_json::to_string(&view)?)
}

fn z2() -> GroupSpec {
    "Z^2 | gens=(1,0),(0,1),sym".parse().expect("built-in spec is valid")
}

/// The explicit `K_m` in `Cay(Z^2, {±(1,0), ±(2,0), ±(0,1)})`.
#[wasm_bindgen]
pub fn z2s2_minor(m: usize) -> Result<String, JsError> {
    if m == 0 || m > 12 {
        return Err(JsError::new("m must be between 1 and 12"));
    }
    let c = construct_z2_s2_minor(m)?;
    minor_view(&c.ball, &c.bd)
}

/// One KPR partition of the `Z^2` ball: `delta_index` picks the offsets
/// in base 4, least significant level first.
#[wasm_bindgen]
pub fn kpr_partition(radius: usize, m: usize, s: usize, delta_index: usize) -> Result<String, JsError> {
    check_radius(radius)?;
    if m == 0 || m > 6 || delta_index >= 1 << (2 * m) {
        return Err(JsError::new("need 1 <= m <= 6 and delta_index < 4^m"));
    }
    let ball = CayleyBall::new(&z2(), radius)?;
    let g = ball.graph();
    let params = CutParams::new(s, delta_of_index(delta_index, m))?;
    let cuts = build_cuts(g, &params);
    let part = clusters_of(g, &cuts);
    let partition_ok = check_partition(g, &cuts, &part).is_none();
    let cover = build_cover(g, &[(cuts, part.clone())], s);
    let in_u = &cover.parts[0].in_u;
    let view = PartitionView {
        radius,
        delta: params.delta_values(),
        r: params.r(),
        num_clusters: part.clusters.len(),
        cells: g
            .vertices()
            .map(|v| {
                let (x, y) = point(ball.element(v));
                (x, y, part.cluster_of[v], in_u[v])
            })
            .collect(),
        partition_ok,
    };
    Ok(serde_json::to_string(&view)?)
}

/// `K_m` grown from vertical rays in `Z^2`.
#[wasm_bindgen]
pub fn ray_minor(m: usize, radius: usize) -> Result<String, JsError> {
    check_radius(radius)?;
    if m == 0 || m > 5 {
        return Err(JsError::new("m must be between 1 and 5"));
    }
    let build = build_minor_from_rays(&z2(), m, radius, &RaySource::Standard)?;
    minor_view(&build.host, &build.decomposition)
}
