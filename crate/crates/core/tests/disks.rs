use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subfree::disk::{
    arrangement_stats, blow_up, build_arrangement, disk_layering, intersection_graph, minor_model, raw_levels,
    validate_disks, Disk, DiskSet,
};
use subfree::graph::Graph;

fn milli(v: i64) -> BigRational {
    BigRational::new(BigInt::from(v), BigInt::from(1000))
}

fn random_disks(rng: &mut ChaCha8Rng, n: usize, spread: i64) -> DiskSet {
    loop {
        let ds = DiskSet::new(
            (0..n)
                .map(|_| {
                    Disk::new(
                        milli(rng.gen_range(0..spread)),
                        milli(rng.gen_range(0..spread)),
                        milli(rng.gen_range(300..2000)),
                    )
                })
                .collect(),
        );
        if validate_disks(&ds).is_empty() {
            return ds;
        }
    }
}

#[test]
fn random_arrangements_satisfy_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for round in 0..300 {
        let n = rng.gen_range(1..=30);
        let spread = rng.gen_range(2000..=12000);
        let ds = random_disks(&mut rng, n, spread);
        let arr = build_arrangement(&ds).unwrap_or_else(|e| panic!("round {round}: {e}"));
        let stats = arrangement_stats(&arr);
        let rho = stats.local_radius.expect("disk interiors are connected");
        assert!(stats.ply <= 2 * rho + 1, "round {round}: ply {} rho {rho}", stats.ply);
        assert_eq!(
            arr.vertex_count + arr.faces.len(),
            arr.arc_count + 1 + arr.components,
            "Euler relation"
        );
        assert!(arr.faces[arr.outer_face].depth.is_empty());
        for &(f, g) in &arr.adjacency {
            let (a, b) = (&arr.faces[f].depth, &arr.faces[g].depth);
            let sym = a.iter().filter(|d| !b.contains(d)).count() + b.iter().filter(|d| !a.contains(d)).count();
            assert_eq!(sym, 1);
        }
        for face in &arr.faces {
            let inside: Vec<usize> = ds
                .disks
                .iter()
                .enumerate()
                .filter(|(_, d)| {
                    let (x, y, r) = (d.x.to_f64().unwrap(), d.y.to_f64().unwrap(), d.r.to_f64().unwrap());
                    (face.sample.0 - x).hypot(face.sample.1 - y) < r
                })
                .map(|(i, _)| i)
                .collect();
            assert_eq!(inside, face.depth);
        }
        let b = blow_up(&arr);
        let total: usize = arr.faces.iter().map(|f| f.depth.len().max(1)).sum();
        assert_eq!(b.graph.vertex_count(), total);
        let model = minor_model(&ds, &arr, &b).unwrap();
        assert_eq!(model.depth, rho);

        let g = intersection_graph(&ds);
        let raw = raw_levels(&arr);
        for &(u, v) in g.edges() {
            assert!(raw[u].abs_diff(raw[v]) <= 4 * rho);
        }
        let lay = disk_layering(&ds, &arr).unwrap();
        assert_eq!(lay.layers().len(), n);
    }
}

#[test]
fn blow_up_embeds_in_strong_product_with_clique() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..50 {
        let n = rng.gen_range(1..=7);
        let t = rng.gen_range(1..=3);
        let mut es = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.4) {
                    es.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &es).unwrap();
        let blown = g.blow_up(t);
        let product = g.strong_product(&Graph::complete(t));
        // Copy i of v goes to (v, i).
        let phi = |x: usize| (x / t) * t + x % t;
        for &(a, b) in blown.edges() {
            assert!(product.has_edge(phi(a), phi(b)));
        }
    }
}
