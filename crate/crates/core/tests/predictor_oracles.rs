//! Predictors and top-C lists against dense-matrix computations.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linkbench::metrics::vcmpr_per_node;
use linkbench::{
    build_graph, score_heuristic, split_positive, top_c_recommend, vcmpr_at_c, EdgeList, Graph, Method, MethodSpec,
};

type Matrix = Vec<Vec<f64>>;

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            if rng.random::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    build_graph(&EdgeList::from(pairs), Some(n)).unwrap().0
}

fn adjacency(g: &Graph) -> Matrix {
    let n = g.num_nodes();
    let mut a = vec![vec![0.0; n]; n];
    for (i, j) in g.edges() {
        a[i as usize][j as usize] = 1.0;
        a[j as usize][i as usize] = 1.0;
    }
    a
}

fn matmul(x: &Matrix, y: &Matrix) -> Matrix {
    let n = x.len();
    let mut z = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if x[i][k] != 0.0 {
                for j in 0..n {
                    z[i][j] += x[i][k] * y[k][j];
                }
            }
        }
    }
    z
}

fn distances(a: &Matrix) -> Matrix {
    let n = a.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if a[i][j] > 0.0 {
                d[i][j] = 1.0;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every pair score of `spec`, straight from the definitions.
fn dense_scores(g: &Graph, spec: MethodSpec) -> Matrix {
    let n = g.num_nodes();
    let a = adjacency(g);
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let a2 = matmul(&a, &a);
    let mut s = vec![vec![0.0; n]; n];
    match spec.method {
        Method::Pa => {
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = k[i] * k[j];
                }
            }
        }
        Method::Cn => s = a2,
        Method::Jaccard => {
            for i in 0..n {
                for j in 0..n {
                    let union = (0..n).filter(|&z| a[i][z] > 0.0 || a[j][z] > 0.0).count();
                    s[i][j] = if union == 0 { 0.0 } else { a2[i][j] / union as f64 };
                }
            }
        }
        Method::AdamicAdar | Method::ResourceAlloc => {
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = (0..n)
                        .filter(|&z| a[i][z] > 0.0 && a[j][z] > 0.0)
                        .map(|z| match spec.method {
                            Method::AdamicAdar if k[z] > 1.0 => 1.0 / k[z].ln(),
                            Method::AdamicAdar => 0.0,
                            _ => 1.0 / k[z],
                        })
                        .sum();
                }
            }
        }
        Method::Lpi => {
            let a3 = matmul(&a2, &a);
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = a2[i][j] + spec.epsilon * a3[i][j];
                }
            }
        }
        Method::ShortestPath => {
            let d = distances(&a);
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = if d[i][j].is_finite() && d[i][j] > 0.0 { 1.0 / d[i][j] } else { 0.0 };
                }
            }
        }
        Method::Lrw => {
            let p: Matrix = (0..n)
                .map(|i| (0..n).map(|j| if k[i] > 0.0 { a[i][j] / k[i] } else { 0.0 }).collect())
                .collect();
            let mut pt = p.clone();
            for _ in 1..spec.walk_steps {
                pt = matmul(&pt, &p);
            }
            let two_m: f64 = k.iter().sum();
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = if two_m > 0.0 { (k[i] * pt[i][j] + k[j] * pt[j][i]) / two_m } else { 0.0 };
                }
            }
        }
    }
    s
}

fn all_specs() -> Vec<MethodSpec> {
    let mut specs = MethodSpec::all_default();
    specs.push(MethodSpec {
        epsilon: 0.3,
        ..MethodSpec::new(Method::Lpi)
    });
    specs.push(MethodSpec {
        walk_steps: 5,
        ..MethodSpec::new(Method::Lrw)
    });
    specs
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn pair_scores_match_dense_definitions() {
    for seed in 0..12 {
        let g = random_graph(50, 0.04 + 0.01 * seed as f64, seed);
        let pairs: EdgeList = (0..50u32).flat_map(|i| ((i + 1)..50).map(move |j| (i, j))).collect();
        for spec in all_specs() {
            let dense = dense_scores(&g, spec);
            let table = score_heuristic(&g, &pairs, spec).unwrap();
            for (&(i, j), &s) in table.pairs.pairs().iter().zip(&table.scores) {
                let want = dense[i as usize][j as usize];
                assert!(close(s, want), "{} on graph {seed}: ({i}, {j}) gave {s}, want {want}", spec.id());
            }
        }
    }
}

/// Checks that `list` is a valid top-C for `source` under `dense`: each pick
/// outscores (up to rounding) every candidate left out, and picks are in
/// non-increasing score order.
fn assert_valid_top_c(g: &Graph, dense: &Matrix, source: usize, list: &[(u32, f64)], c: usize, what: &str) {
    let candidates: Vec<usize> = (0..g.num_nodes())
        .filter(|&j| j != source && !g.adjacent(source as u32, j as u32))
        .collect();
    assert_eq!(list.len(), c.min(candidates.len()), "{what}: list length at node {source}");
    let picked: std::collections::HashSet<usize> = list.iter().map(|&(j, _)| j as usize).collect();
    assert_eq!(picked.len(), list.len(), "{what}: duplicate pick at node {source}");
    let worst_pick = list
        .iter()
        .map(|&(j, _)| dense[source][j as usize])
        .fold(f64::INFINITY, f64::min);
    for &j in &candidates {
        if !picked.contains(&j) {
            assert!(
                dense[source][j] <= worst_pick + 1e-9,
                "{what}: node {source} skipped {j} ({}) for a pick scoring {worst_pick}",
                dense[source][j]
            );
        }
    }
    for w in list.windows(2) {
        assert!(candidates.contains(&(w[0].0 as usize)));
        let (a, b) = (dense[source][w[0].0 as usize], dense[source][w[1].0 as usize]);
        assert!(a >= b - 1e-9, "{what}: node {source} order");
        if w[0].1 == w[1].1 {
            assert!(w[0].0 < w[1].0, "{what}: exact tie at node {source} not broken by id: {:?}", w);
        }
    }
}

#[test]
fn top_c_lists_match_exhaustive_scoring() {
    for seed in 0..4 {
        let full = random_graph(50, 0.08, 100 + seed);
        let (train, positives) = split_positive(&full, 0.25, seed).unwrap();
        for spec in all_specs() {
            let dense = dense_scores(&train, spec);
            for c in [1, 5, 50] {
                let recs = top_c_recommend(&train, spec, c).unwrap();
                let what = format!("{} C={c} graph {seed}", spec.id());
                for (i, list) in recs.lists.iter().enumerate() {
                    assert_valid_top_c(&train, &dense, i, list, c, &what);
                    for &(j, s) in list {
                        assert!(close(s, dense[i][j as usize]), "{what}: reported score at ({i}, {j})");
                    }
                }
                // VCMPR recomputed from the lists by its definition
                let mut partners = vec![Vec::new(); 50];
                for (a, b) in positives.iter() {
                    partners[a as usize].push(b);
                    partners[b as usize].push(a);
                }
                let mut per_node = Vec::new();
                for (i, p) in partners.iter().enumerate() {
                    if p.is_empty() {
                        continue;
                    }
                    let hits = recs.lists[i].iter().filter(|(j, _)| p.contains(j)).count() as f64;
                    per_node.push((hits / c as f64).max(hits / p.len() as f64));
                }
                let want = per_node.iter().sum::<f64>() / per_node.len() as f64;
                let got = vcmpr_at_c(&recs, &positives, c).unwrap();
                assert!((got - want).abs() < 1e-12, "{what}: vcmpr {got} vs {want}");
                assert_eq!(vcmpr_per_node(&recs, &positives, c).unwrap().len(), per_node.len());
            }
        }
    }
}

#[test]
fn exact_tie_methods_give_identical_lists_to_the_oracle_order() {
    // integer-valued scores have no rounding, so the oracle order is exact
    let train = random_graph(50, 0.1, 7);
    for method in [Method::Pa, Method::Cn, Method::ShortestPath] {
        let spec = MethodSpec::new(method);
        let dense = dense_scores(&train, spec);
        let recs = top_c_recommend(&train, spec, 10).unwrap();
        for (i, list) in recs.lists.iter().enumerate() {
            let mut cand: Vec<(usize, f64)> = (0..50)
                .filter(|&j| j != i && !train.adjacent(i as u32, j as u32))
                .map(|j| (j, dense[i][j]))
                .collect();
            cand.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let want: Vec<u32> = cand.iter().take(10).map(|&(j, _)| j as u32).collect();
            let got: Vec<u32> = list.iter().map(|&(j, _)| j).collect();
            assert_eq!(got, want, "{method} at node {i}");
        }
    }
}
