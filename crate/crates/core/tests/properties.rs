use proptest::prelude::*;

use cayminor::graph::{
    bfs_distances, connected_components, is_connected, is_connected_subset, vertex_disjoint_paths, Graph, VertexId,
    VertexSet,
};
use cayminor::groups::{babai_collapse, enlarged_generating_set, CayleyBall, Element, GroupKind, GroupSpec};
use cayminor::io::GraphFile;
use cayminor::kpr::{
    all_partitions, build_cover, build_cuts, check_partition, clusters_of, index_of_delta, s_multiplicity,
    select_delta_for_vertex, separation_check, CutParams, KprOptions,
};
use cayminor::minors::{
    brute_force_minor_oracle, construct_z2_s2_minor, construct_z2xc_minor, find_clique_minor, verify_minor,
    PatternGraph, SearchOptions,
};
use cayminor::rays::{build_minor_from_rays, remove_intersection, ModifiedRay, Ray, RaySource};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=3 * n)
            .prop_map(move |pairs| Graph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap())
    })
}

/// A random tree plus extra edges, so always connected.
fn connected_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
            proptest::collection::vec((0..n, 0..n), 0..=n),
        )
            .prop_map(move |(parents, extra)| {
                let tree = parents.iter().enumerate().map(|(i, p)| (i + 1, p.index(i + 1)));
                let more = extra.into_iter().filter(|(u, v)| u != v);
                Graph::from_edges(n, tree.chain(more)).unwrap()
            })
    })
}

fn specs() -> Vec<GroupSpec> {
    [
        "Z^2 | gens=(1,0),(0,1),sym",
        "Z^2 x C3 | gens=auto",
        "F2 | gens=basis",
        "(Z^2) * C2 | gens=g[(1,0)],g[(2,0)],g[(0,1)],h[(1)],sym",
        "C3 * C2 | gens=auto",
        "F2 x Z | gens=auto",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

fn word(spec: &GroupSpec, letters: &[usize]) -> Element {
    let k = spec.kind();
    letters.iter().fold(k.identity(), |acc, &i| {
        let g = &spec.gens()[i % spec.gens().len()];
        k.multiply(&acc, g).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfs_distances_are_a_metric_on_edges(g in connected_strategy(14), picks in proptest::collection::vec(any::<prop::sample::Index>(), 3)) {
        let n = g.num_vertices();
        let [a, b, c] = [picks[0].index(n), picks[1].index(n), picks[2].index(n)];
        let da = bfs_distances(&g, a).unwrap();
        let db = bfs_distances(&g, b).unwrap();
        prop_assert!(da.get(c).unwrap() <= da.get(b).unwrap() + db.get(c).unwrap());
        for v in g.vertices() {
            prop_assert_eq!(da.get(v) == Some(1), g.has_edge(a, v));
        }
    }

    #[test]
    fn components_partition_vertices(g in graph_strategy(16)) {
        let parts = connected_components(&g);
        let mut owner = vec![usize::MAX; g.num_vertices()];
        for (i, p) in parts.iter().enumerate() {
            for v in p.iter() {
                prop_assert_eq!(owner[v], usize::MAX);
                owner[v] = i;
            }
        }
        prop_assert!(owner.iter().all(|&o| o != usize::MAX));
        for &(u, v) in g.edges() {
            prop_assert_eq!(owner[u], owner[v]);
        }
    }

    #[test]
    fn disjoint_paths_or_a_separator(g in graph_strategy(12).prop_filter("four vertices", |g| g.num_vertices() >= 4), k in 1usize..4, split in 1usize..6) {
        // both sides have two or more vertices, so no endpoint is shared
        let n = g.num_vertices();
        prop_assume!(n >= 4);
        let cut = split.clamp(2, n - 2);
        let a: VertexSet = (0..cut).collect();
        let b: VertexSet = (cut..n).collect();
        let out = vertex_disjoint_paths(&g, &a, &b, k).unwrap();
        let mut used = vec![false; n];
        for p in &out.paths {
            prop_assert!(a.contains(p[0]) && b.contains(*p.last().unwrap()));
            prop_assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
            for &v in p {
                prop_assert!(!used[v]);
                used[v] = true;
            }
        }
        prop_assert!(out.paths.len() <= k);
        match out.separator {
            None => prop_assert_eq!(out.paths.len(), k),
            Some(sep) => {
                prop_assert!(out.paths.len() < k);
                prop_assert_eq!(sep.len(), out.paths.len());
                // every a-b path meets the separator
                let keep: VertexSet = g.vertices().filter(|&v| !sep.contains(v)).collect();
                let (sub, map) = g.induced(&keep);
                let back = |v: VertexId| map.iter().position(|&x| x == v);
                for s in a.iter().filter_map(back) {
                    let d = bfs_distances(&sub, s).unwrap();
                    prop_assert!(b.iter().filter_map(back).all(|t| d.get(t).is_none()));
                }
            }
        }
    }

    #[test]
    fn graph_files_round_trip(g in graph_strategy(20)) {
        let text = serde_json::to_string(&GraphFile::from_graph(&g)).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn inverses_and_associativity(which in 0usize..6, a in proptest::collection::vec(0usize..16, 0..10), b in proptest::collection::vec(0usize..16, 0..10), c in proptest::collection::vec(0usize..16, 0..10)) {
        let spec = &specs()[which];
        let k = spec.kind();
        let (x, y, z) = (word(spec, &a), word(spec, &b), word(spec, &c));
        k.validate(&x).unwrap();
        prop_assert!(k.is_identity(&k.multiply(&x, &k.inverse(&x).unwrap()).unwrap()));
        prop_assert!(k.is_identity(&k.multiply(&k.inverse(&x).unwrap(), &x).unwrap()));
        let left = k.multiply(&k.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = k.multiply(&x, &k.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(k.parse(&k.format(&x)).unwrap(), x);
    }

    #[test]
    fn enlarged_sets_are_symmetric(coords in proptest::collection::vec((-2i64..3, -2i64..3), 1..4)) {
        let k = GroupKind::FreeAbelian(2);
        let mut gens: Vec<Element> = vec![Element::Coords(vec![1, 0]), Element::Coords(vec![0, 1])];
        gens.extend(coords.into_iter().filter(|&(x, y)| (x, y) != (0, 0)).map(|(x, y)| Element::Coords(vec![x, y])));
        let spec = GroupSpec::new(k.clone(), gens, true).unwrap();
        let big = enlarged_generating_set(&spec);
        for g in big.gens() {
            prop_assert!(!k.is_identity(g));
            prop_assert!(big.gens().contains(&k.inverse(g).unwrap()));
        }
    }

    #[test]
    fn collapse_keeps_connectivity(g in connected_strategy(14), contract in proptest::collection::vec(any::<bool>(), 40)) {
        // classes: components of a random subset of spanning-tree edges
        let n = g.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            if contract[i % contract.len()] {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
        let class_of: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let q = babai_collapse(&g, &class_of).unwrap();
        prop_assert!(is_connected(&q.graph));
        for (c, members) in q.classes.iter().enumerate() {
            prop_assert!(members.iter().all(|v| q.class_of[v] == c));
        }
    }

    #[test]
    fn search_agrees_with_oracle(g in graph_strategy(8), m in 3usize..5, seed in any::<u64>()) {
        let out = find_clique_minor(&g, m, SearchOptions { budget: 1_000_000, seed }).unwrap();
        let truth = brute_force_minor_oracle(&g, &PatternGraph::complete(m)).unwrap();
        prop_assert_eq!(out.decomposition().is_some(), truth);
        if let Some(bd) = out.decomposition() {
            prop_assert!(verify_minor(&g, bd).pass);
            // dropping any set leaves a K_{m-1}
            for i in 0..m {
                prop_assert!(verify_minor(&g, &bd.without_set(i)).pass);
            }
            let smaller = find_clique_minor(&g, m - 1, SearchOptions { budget: 1_000_000, seed }).unwrap();
            prop_assert!(smaller.decomposition().is_some());
        }
    }

    #[test]
    fn partitions_and_cover_claims(radius in 4usize..9, m in 1usize..3, s in 1usize..3, delta in proptest::collection::vec(0usize..4, 2)) {
        let spec: GroupSpec = "Z^2 | gens=(1,0),(0,1),sym".parse().unwrap();
        let ball = CayleyBall::new(&spec, radius).unwrap();
        let g = ball.graph();
        let params = CutParams::new(s, delta[..m].to_vec()).unwrap();
        let cuts = build_cuts(g, &params);
        let part = clusters_of(g, &cuts);
        prop_assert_eq!(check_partition(g, &cuts, &part), None);

        let parts = all_partitions(g, m, s, KprOptions::default()).unwrap();
        let cover = build_cover(g, &parts, s);
        for w in g.vertices() {
            let p = select_delta_for_vertex(g, w, m, s, false).unwrap();
            prop_assert!(cover.parts[index_of_delta(&p.delta)].in_u[w]);
        }
        prop_assert!(s_multiplicity(g, &cover).counted_value <= 1 << (2 * m));
        prop_assert!(separation_check(g, &cover).pass);
    }

    #[test]
    fn partitions_on_arbitrary_graphs(g in connected_strategy(30), delta in proptest::collection::vec(0usize..4, 1..4), s in 0usize..3) {
        let params = CutParams::new(s, delta).unwrap();
        let cuts = build_cuts(&g, &params);
        let part = clusters_of(&g, &cuts);
        prop_assert_eq!(check_partition(&g, &cuts, &part), None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn explicit_constructions_verify(m in 1usize..=10, c in 0usize..3, m2 in 1usize..=8) {
        let z = construct_z2_s2_minor(m).unwrap();
        prop_assert!(verify_minor(z.ball.graph(), &z.bd).pass);
        let text = ["Z^2 x C2", "Z^2 x C3", "Z^3"][c];
        let spec: GroupSpec = format!("{text} | gens=(1,0,0),(0,1,0),(0,0,1),sym").parse().unwrap();
        let e = |v: Vec<i64>| Element::Coords(v);
        let w = construct_z2xc_minor(m2, &spec, &e(vec![1, 0, 0]), &e(vec![0, 1, 0]), &e(vec![0, 0, 1])).unwrap();
        prop_assert!(verify_minor(w.ball.graph(), &w.bd).pass);
    }

    #[test]
    fn ray_builds_keep_their_invariants(m in 1usize..6, extra in 0usize..10) {
        let spec: GroupSpec = "Z^2 | gens=(1,0),(0,1),sym".parse().unwrap();
        let radius = 12 * m + extra;
        let b = build_minor_from_rays(&spec, m, radius, &RaySource::Standard).unwrap();
        prop_assert!(b.log.verdict.pass);
        prop_assert_eq!(b.log.connections, m * (m - 1) / 2);
        prop_assert!(b.log.pairs.windows(2).all(|w| w[0].r_b_after < w[1].r_b_after));
        // earlier connections lie inside every later exclusion ball
        for (i, c) in b.state.connections.iter().enumerate() {
            let rb = b.log.pairs[i].r_b_after;
            prop_assert!(c.path.iter().all(|&v| b.host.length(v) <= rb));
        }
        b.state.check_invariants(b.host.graph()).unwrap();
    }

    #[test]
    fn removals_add_no_intersections(steps in proptest::collection::vec(0usize..24, 4..16), start in 1i64..5) {
        let spec: GroupSpec = "Z^2 | gens=(1,0),(0,1),sym".parse().unwrap();
        let host = CayleyBall::with_edge_gens(&spec, 16, spec.enlarged().gens(), 1 << 20).unwrap();
        let g = host.graph();
        let at = |x: i64, y: i64| host.vertex_of(&Element::Coords(vec![x, y]));
        let sets: Vec<ModifiedRay> = (1..=4)
            .map(|x| ModifiedRay::new(Ray::new((1..=10).map(|y| at(x, y).unwrap()).collect())))
            .collect();
        // a simple random walk over the enlarged generators
        let gens = host.edge_gens().to_vec();
        let mut path = vec![at(0, start).unwrap()];
        for s in steps {
            let k = spec.kind();
            let next = host.vertex_of(&k.multiply(&gens[s], host.element(*path.last().unwrap())).unwrap());
            if let Some(v) = next.filter(|v| !path.contains(v)) {
                path.push(v);
            }
        }
        let met = |p: &[VertexId], sets: &[ModifiedRay]| -> Vec<usize> {
            (0..sets.len()).filter(|&k| p.iter().any(|&v| sets[k].contains(v))).collect()
        };
        let before = met(&path, &sets);
        if let Some(&k) = before.first() {
            if let Ok(r) = remove_intersection(g, &path, &sets[k]) {
                let mut after_sets = sets.clone();
                after_sets[k] = r.set.clone();
                let after = met(&r.path, &after_sets);
                prop_assert!(!after.contains(&k));
                prop_assert!(after.iter().all(|x| before.contains(x)));
                prop_assert!(r.path.windows(2).all(|w| g.has_edge(w[0], w[1])));
                prop_assert!(is_connected_subset(g, &r.set.members()).unwrap());
                prop_assert_eq!(r.path.first(), path.first());
                prop_assert_eq!(r.path.last(), path.last());
            }
        }
    }
}

#[test]
fn ball_counts() {
    let z2: GroupSpec = "Z^2 | gens=(1,0),(0,1),sym".parse().unwrap();
    for r in 0..=12 {
        assert_eq!(CayleyBall::new(&z2, r).unwrap().len(), 2 * r * r + 2 * r + 1);
    }
    for n in 1..=3usize {
        let spec = GroupSpec::standard(GroupKind::Free(n));
        for r in 0..=5u32 {
            let expect = if n == 1 {
                2 * r as usize + 1
            } else {
                1 + 2 * n * ((2 * n - 1).pow(r) - 1) / (2 * n - 2)
            };
            assert_eq!(CayleyBall::new(&spec, r as usize).unwrap().len(), expect);
        }
    }
}

#[test]
fn ball_lengths_are_graph_distances() {
    for spec in specs() {
        let ball = CayleyBall::new(&spec, 4).unwrap();
        let d = bfs_distances(ball.graph(), 0).unwrap();
        for v in ball.graph().vertices() {
            assert_eq!(d.get(v), Some(ball.length(v)));
            // inverse labels of a geodesic's vertices are reachable at the same length
            let inv = spec.inverse(ball.element(v)).unwrap();
            assert_eq!(ball.vertex_of(&inv).map(|u| ball.length(u)), Some(ball.length(v)));
        }
    }
}
