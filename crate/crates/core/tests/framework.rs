use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subfree::graph::{is_family_free, Graph, PatternFamily};
use subfree::layering::{bfs_layering, layering_from_embedding, solve, SolveOptions, Strategy};
use subfree::oracle::oracle_solve;
use subfree::treewidth::ProductEmbedding;

/// Clusters of vertices at random spots of `H ⊠ P_L`, with product edges
/// kept at random.
/// `scattered` favours many tiny clusters over a long path.
fn sparse_embedded(rng: &mut ChaCha8Rng, max_vertices: usize, scattered: bool) -> (Graph, ProductEmbedding) {
    let h = if rng.gen_bool(0.5) { Graph::path(2) } else { Graph::empty(1) };
    let (path_len, clusters, size) = if scattered {
        (rng.gen_range(100..=200), rng.gen_range(6..=12), 2)
    } else {
        let c = rng.gen_range(1..=7);
        (rng.gen_range(10..=160), c, 12 / c + 1)
    };
    let mut placement: Vec<(usize, usize)> = Vec::new();
    for _ in 0..clusters {
        let base = rng.gen_range(1..=path_len - 2);
        for _ in 0..rng.gen_range(1..=size) {
            if placement.len() == max_vertices {
                break;
            }
            let spot = (rng.gen_range(0..h.vertex_count()), base + rng.gen_range(0..3));
            if !placement.contains(&spot) {
                placement.push(spot);
            }
        }
    }
    let n = placement.len();
    let mut es = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let (a, la) = placement[u];
            let (b, lb) = placement[v];
            if (a == b || h.has_edge(a, b)) && la.abs_diff(lb) <= 1 && rng.gen_bool(0.7) {
                es.push((u, v));
            }
        }
    }
    let g = Graph::new(n, &es).unwrap();
    (g, ProductEmbedding::new(h, None, path_len, placement))
}

fn families() -> Vec<PatternFamily> {
    let k1 = Graph::empty(1);
    vec![
        PatternFamily::single(Graph::path(3).disjoint_union(&k1)).unwrap(),
        PatternFamily::single(Graph::path(2).disjoint_union(&k1)).unwrap(),
        PatternFamily::single(Graph::complete(3)).unwrap(),
        PatternFamily::single(Graph::path(2).repeat(2)).unwrap(),
        PatternFamily::new(vec![Graph::path(4), Graph::complete(3)]).unwrap(),
        PatternFamily::single(Graph::path(3)).unwrap(),
    ]
}

#[test]
fn framework_matches_oracle_on_embedded_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let fams = families();
    let (mut pruned, mut replaced, mut infeasible) = (0, 0, 0);
    for round in 0..300 {
        let (g, embed) = sparse_embedded(&mut rng, 14, round % 3 == 0);
        let fam = &fams[rng.gen_range(0..fams.len())];
        let k = rng.gen_range(0..=3);
        let lay = layering_from_embedding(&g, &embed).unwrap();
        let use_embed = rng.gen_bool(0.5);
        let rep = solve(&g, &lay, fam, k, use_embed.then_some(&embed), &SolveOptions::default()).unwrap();
        let want = oracle_solve(&g, fam, k);
        assert_eq!(rep.outcome.is_yes(), want.is_yes(), "round {round}: {g:?} {fam:?} k={k}");
        if let Some(w) = rep.outcome.witness_set() {
            assert!(w.len() <= k);
            assert!(is_family_free(&g, fam, &w).unwrap());
        }
        match &rep.strategy {
            Strategy::Pruned {
                replacements,
                pruned_windows,
                ..
            } => {
                pruned += usize::from(!pruned_windows.is_empty());
                replaced += usize::from(!replacements.is_empty());
            }
            Strategy::Infeasible { replacements, .. } => {
                infeasible += 1;
                replaced += usize::from(!replacements.is_empty());
            }
            Strategy::Direct => {}
        }
    }
    assert!(pruned > 50, "pruning exercised {pruned} times");
    assert!(replaced > 5, "family reduction exercised {replaced} times");
    assert!(infeasible > 5, "infeasibility exercised {infeasible} times");
}

#[test]
fn bfs_layering_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fams = families();
    for _ in 0..150 {
        let n = rng.gen_range(2..=12);
        let mut es = Vec::new();
        for v in 1..n {
            es.push((rng.gen_range(0..v), v));
        }
        for _ in 0..rng.gen_range(0..3) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                es.push((a, b));
            }
        }
        let g = Graph::new(n, &es).unwrap();
        let fam = &fams[rng.gen_range(0..fams.len())];
        let k = rng.gen_range(0..=3);
        let lay = bfs_layering(&g, None).unwrap();
        let opts = SolveOptions {
            detect_with_dp: rng.gen_bool(0.3),
            ..SolveOptions::default()
        };
        let rep = solve(&g, &lay, fam, k, None, &opts).unwrap();
        assert_eq!(rep.outcome.is_yes(), oracle_solve(&g, fam, k).is_yes());
    }
}
