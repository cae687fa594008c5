//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use netsubsidy::model::{BroadcastGame, EdgeId, Graph, NodeId, SpanningTree, SubsidyAssignment};
use netsubsidy::rational::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Weight p/d with d ≤ `max_den` and value in [0, 2].
pub fn random_weight(rng: &mut ChaCha8Rng, max_den: i64, zero_chance: f64) -> Rational {
    if rng.gen_bool(zero_chance) {
        return Rational::zero();
    }
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(1..=2 * d), d)
}

/// Connected multigraph: a random spanning skeleton plus extra edges.
pub fn random_graph(rng: &mut ChaCha8Rng, nodes: usize, extra: usize, max_den: i64, zero_chance: f64) -> Graph {
    let mut g = Graph::new();
    g.add_node("r").unwrap();
    for i in 1..nodes {
        g.add_node(format!("v{i}")).unwrap();
    }
    let mut pending = Vec::new();
    for v in 1..nodes {
        let u = rng.gen_range(0..v);
        pending.push((u, v));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..nodes);
        let mut v = rng.gen_range(0..nodes);
        while v == u {
            v = rng.gen_range(0..nodes);
        }
        pending.push((u, v));
    }
    pending.shuffle(rng);
    for (u, v) in pending {
        let w = random_weight(rng, max_den, zero_chance);
        g.add_edge(u, v, w).unwrap();
    }
    g
}

pub fn random_broadcast(rng: &mut ChaCha8Rng, max_nodes: usize, max_den: i64) -> BroadcastGame {
    let nodes = rng.gen_range(2..=max_nodes);
    let extra = rng.gen_range(0..=nodes + 2);
    BroadcastGame::new(random_graph(rng, nodes, extra, max_den, 0.1), 0).unwrap()
}

/// Uniformly shuffled Kruskal; any spanning tree can come out.
pub fn random_tree(rng: &mut ChaCha8Rng, graph: &Graph, root: NodeId) -> SpanningTree {
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.shuffle(rng);
    let mut parent: Vec<usize> = (0..graph.node_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut chosen = Vec::new();
    for e in order {
        let edge = graph.edge(e);
        let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
        if a != b {
            parent[a] = b;
            chosen.push(e);
        }
    }
    SpanningTree::new(graph, root, chosen).unwrap()
}

/// Each edge gets b ∈ {0, w·k/12} at random.
pub fn random_subsidies(rng: &mut ChaCha8Rng, graph: &Graph) -> SubsidyAssignment {
    let values = (0..graph.edge_count()).filter_map(|e| {
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(0..=12);
            Some((e, graph.weight(e) * q(k, 12)))
        } else {
            None
        }
    });
    SubsidyAssignment::new(values.collect::<Vec<_>>(), false)
}

/// Every simple s–t path as an edge list.
pub fn simple_paths(graph: &Graph, s: NodeId, t: NodeId) -> Vec<Vec<EdgeId>> {
    fn walk(g: &Graph, at: NodeId, t: NodeId, seen: &mut Vec<bool>, path: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
        if at == t {
            out.push(path.clone());
            return;
        }
        for &e in g.incident(at) {
            let next = g.edge(e).other(at);
            if !seen[next] {
                seen[next] = true;
                path.push(e);
                walk(g, next, t, seen, path, out);
                path.pop();
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; graph.node_count()];
    seen[s] = true;
    let mut out = Vec::new();
    walk(graph, s, t, &mut seen, &mut Vec::new(), &mut out);
    out
}

fn usage(graph: &Graph, paths: &[Vec<EdgeId>]) -> Vec<i64> {
    let mut n = vec![0i64; graph.edge_count()];
    for p in paths {
        for &e in p {
            n[e] += 1;
        }
    }
    n
}

/// Σ (w−b)/n_a over the edges of `paths[player]`, from scratch.
pub fn cost_of(graph: &Graph, paths: &[Vec<EdgeId>], b: &SubsidyAssignment, player: usize) -> Rational {
    let n = usage(graph, paths);
    paths[player]
        .iter()
        .map(|&e| (graph.weight(e) - b.get(e)) / Rational::from_integer(BigInt::from(n[e])))
        .fold(Rational::zero(), |a, c| a + c)
}

/// Σ (w−b)·H_{n_a} from scratch.
pub fn potential_of(graph: &Graph, paths: &[Vec<EdgeId>], b: &SubsidyAssignment) -> Rational {
    let n = usage(graph, paths);
    let mut total = Rational::zero();
    for (e, &count) in n.iter().enumerate() {
        let mut h = Rational::zero();
        for k in 1..=count {
            h += Rational::new(BigInt::one(), BigInt::from(k));
        }
        total += (graph.weight(e) - b.get(e)) * h;
    }
    total
}

/// Exhaustive equilibrium test over all simple paths of every player.
pub fn brute_is_equilibrium(graph: &Graph, pairs: &[(NodeId, NodeId)], paths: &[Vec<EdgeId>], b: &SubsidyAssignment) -> bool {
    for (i, &(s, t)) in pairs.iter().enumerate() {
        let current = cost_of(graph, paths, b, i);
        for alt in simple_paths(graph, s, t) {
            let mut trial = paths.to_vec();
            trial[i] = alt;
            if cost_of(graph, &trial, b, i) < current {
                return false;
            }
        }
    }
    true
}

/// Spanning-tree count from an exact Kirchhoff determinant.
pub fn kirchhoff_count(graph: &Graph) -> BigInt {
    let n = graph.node_count();
    if n <= 1 {
        return BigInt::one();
    }
    let mut m = vec![vec![Rational::zero(); n]; n];
    for e in graph.edges() {
        if e.u == e.v {
            continue;
        }
        m[e.u][e.u] += Rational::one();
        m[e.v][e.v] += Rational::one();
        m[e.u][e.v] -= Rational::one();
        m[e.v][e.u] -= Rational::one();
    }
    let k = n - 1;
    let mut a: Vec<Vec<Rational>> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..k {
        let Some(pivot) = (col..k).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        let top = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            let f = &row[col] / &p;
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&top).skip(col) {
                *x -= &f * y;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}
