//! End-to-end acceptance run: one line per criterion, non-zero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;

use netsubsidy::enforce::{enforce_fractional, min_integral_subsidy_exact, virtual_cost, CompiledEnforcement, Level};
use netsubsidy::game::{
    best_response_dynamics, is_equilibrium_broadcast, is_equilibrium_broadcast_f64, is_equilibrium_general,
    player_cost, rosenthal_potential, OrderPolicy,
};
use netsubsidy::generators::dimacs::{parse_dimacs, Formula};
use netsubsidy::generators::sat::default_k;
use netsubsidy::generators::{
    classify_branches, gen_3sat4, gen_aon_path, gen_binpack, gen_cycle, gen_indepset, BranchType, CubicGraph,
};
use netsubsidy::model::{minimum_spanning_tree, SpanningTree, State, SubsidyAssignment};
use netsubsidy::oracles::{best_equilibrium, grid_min_subsidy};
use netsubsidy::rational::{int, ratio, to_f64, Rational};
use netsubsidy::sne::{min_subsidy_tree, Method};

const FLOAT_EPS: f64 = 1e-9;
const E_BOUND_REL: f64 = 1e-6;
const CYCLE_SLACK_BELOW: f64 = 3.0;
const CYCLE_SLACK_ABOVE: f64 = 1e-6;
const AON_RATIO_MIN: f64 = 0.58;
const VC_TOL: f64 = 1e-9;
const GRID_DENOMINATOR: u64 = 12;
const GRID_MAX_TREE_EDGES: usize = 4;

type Verdict = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn broadcast_equivalence() -> Verdict {
    let mut rng = rng(1);
    let mut unstable = 0;
    for i in 0..1000 {
        let game = random_broadcast(&mut rng, 10, 12);
        let tree = random_tree(&mut rng, game.graph(), 0);
        let b = random_subsidies(&mut rng, game.graph());
        b.validate(game.graph()).map_err(|e| e.to_string())?;
        let fast = is_equilibrium_broadcast(&game, &tree, &b).is_ok();
        let state = State::from_tree(game.graph(), &tree, game.players());
        let slow = is_equilibrium_general(&game.to_general(), &state, &b).is_ok();
        ensure(fast == slow, || format!("instance {i}: broadcast {fast}, general {slow}"))?;
        unstable += !fast as usize;
    }
    Ok(format!("1000 agree, {unstable} not equilibria"))
}

fn lp_cross_validation() -> Verdict {
    let mut rng = rng(2);
    let mut gridded = 0;
    for i in 0..50 {
        let nodes = rng.gen_range(3..=6);
        let extra = rng.gen_range(1..=nodes);
        let game = netsubsidy::model::BroadcastGame::new(random_graph(&mut rng, nodes, extra, 12, 0.1), 0).unwrap();
        let tree = random_tree(&mut rng, game.graph(), 0);
        let sol: Vec<Rational> = [Method::Lp3, Method::Lp2, Method::Rowgen]
            .into_iter()
            .map(|m| min_subsidy_tree(&game, &tree, m).map(|s| s.total).map_err(|e| format!("instance {i}: {e}")))
            .collect::<Result<_, _>>()?;
        ensure(sol[0] == sol[1] && sol[1] == sol[2], || format!("instance {i}: {sol:?}"))?;
        if tree.edges().len() <= GRID_MAX_TREE_EDGES {
            let grid = grid_min_subsidy(&game, &tree, GRID_DENOMINATOR, 10_000_000).map_err(|e| e.to_string())?;
            ensure(sol[0] <= grid, || format!("instance {i}: lp {} above grid {grid}", sol[0]))?;
            gridded += 1;
        }
    }
    Ok(format!("50 equal optima, {gridded} grid-bounded"))
}

fn cycle_family() -> Verdict {
    let small = gen_cycle(3).map_err(|e| e.to_string())?;
    let lp = min_subsidy_tree(&small.game, &small.tree, Method::Lp3).map_err(|e| e.to_string())?;
    ensure(lp.total == ratio(5, 6), || format!("n=3 optimum {}", lp.total))?;
    let big = gen_cycle(1000).map_err(|e| e.to_string())?;
    let f = enforce_fractional(&big.game, &big.tree).map_err(|e| e.to_string())?;
    let target = 1000.0 / std::f64::consts::E;
    ensure(
        f.total >= target - CYCLE_SLACK_BELOW && f.total <= target + CYCLE_SLACK_ABOVE,
        || format!("n=1000 total {} vs {target}", f.total),
    )?;
    Ok(format!("5/6 exact; n=1000 total {:.9} (1000/e = {target:.9})", f.total))
}

fn fractional_guarantee() -> Verdict {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let nodes = rng.gen_range(2..=12);
        let extra = rng.gen_range(0..=2 * nodes);
        let g = random_graph(&mut rng, nodes, extra, 3, 0.2);
        let game = netsubsidy::model::BroadcastGame::new(g, 0).unwrap();
        let tree = minimum_spanning_tree(game.graph(), 0).map_err(|e| e.to_string())?;
        let f = enforce_fractional(&game, &tree).map_err(|e| format!("instance {i}: {e}"))?;
        let check = is_equilibrium_broadcast_f64(&game, &tree, &f.values, FLOAT_EPS);
        ensure(check.ok, || format!("instance {i}: detour gains {}", check.worst_gain))?;
        let w = to_f64(&tree.weight(game.graph()));
        let gap = (f.total - w / std::f64::consts::E).abs();
        ensure(gap <= E_BOUND_REL * w.max(f64::MIN_POSITIVE), || {
            format!("instance {i}: total {} vs wgt/e {}", f.total, w / std::f64::consts::E)
        })?;
        if w > 0.0 {
            worst = worst.max(gap / w);
        }
    }
    Ok(format!("200 enforced, max |total − wgt/e|/wgt = {worst:.2e}"))
}

fn binpack_biconditional() -> Verdict {
    let yes = gen_binpack(&[2, 2, 4], 2, 4).map_err(|e| e.to_string())?;
    let t = yes.tree_for(&[0, 0, 1]).map_err(|e| e.to_string())?;
    ensure(t.weight(yes.game.graph()) == yes.k_weight, || "packing tree weight differs from K".into())?;
    ensure(is_equilibrium_broadcast(&yes.game, &t, &SubsidyAssignment::zero()).is_ok(), || {
        "packing tree is not an equilibrium".into()
    })?;
    let no = gen_binpack(&[4, 4, 4], 2, 6).map_err(|e| e.to_string())?;
    let mut failed = 0;
    for a in no.assignments() {
        let t = no.tree_for(&a).map_err(|e| e.to_string())?;
        ensure(t.weight(no.game.graph()) == no.k_weight, || format!("{a:?}: weight differs from K"))?;
        ensure(!is_equilibrium_broadcast(&no.game, &t, &SubsidyAssignment::zero()).is_ok(), || {
            format!("{a:?} is an equilibrium")
        })?;
        failed += 1;
    }
    ensure(failed == 8, || format!("{failed} assignments"))?;
    Ok("packing tree stable; 8/8 assignment trees unstable".into())
}

fn indepset_formulas() -> Verdict {
    let delta = ratio(1, 12);
    let inst = gen_indepset(&CubicGraph::complete4(), &delta).map_err(|e| e.to_string())?;
    let graph = inst.game.graph();
    let none = SubsidyAssignment::zero();
    for (set, want) in [(vec![], int(10)), (vec![0], ratio(109, 12))] {
        let t = inst.tree_for(&set).map_err(|e| e.to_string())?;
        ensure(t.weight(graph) == want, || format!("m={}: weight {}", set.len(), t.weight(graph)))?;
        ensure(is_equilibrium_broadcast(&inst.game, &t, &none).is_ok(), || {
            format!("m={} tree unstable", set.len())
        })?;
    }
    // Hang the first edge node under its first endpoint instead of the root.
    let base = inst.tree_for(&[]).map_err(|e| e.to_string())?;
    let v = inst.v_nodes[0];
    let mut edges: Vec<usize> = base.edges().iter().copied().filter(|&e| Some(e) != inst.root_edges[v]).collect();
    edges.push(inst.uv_edges[0][0]);
    let c_tree = SpanningTree::new(graph, inst.game.root(), edges).map_err(|e| e.to_string())?;
    let kinds: Vec<BranchType> = classify_branches(&inst, &c_tree).iter().map(|b| b.kind).collect();
    ensure(kinds.contains(&BranchType::C), || format!("branch types {kinds:?}"))?;
    ensure(!is_equilibrium_broadcast(&inst.game, &c_tree, &none).is_ok(), || "type-C tree stable".into())?;
    let (_, best) = best_equilibrium(&inst.game, 1_000_000)
        .map_err(|e| e.to_string())?
        .ok_or("no equilibrium")?;
    ensure(best == ratio(109, 12), || format!("best equilibrium {best}"))?;
    Ok("weights 10, 109/12; type C unstable; best equilibrium 109/12".into())
}

fn aon_gap() -> Verdict {
    let p = gen_aon_path(20).map_err(|e| e.to_string())?;
    let s = min_integral_subsidy_exact(&p.game, &p.tree, None, 20)
        .map_err(|e| e.to_string())?
        .ok_or("no assignment")?;
    let want = int(19) * &p.x;
    ensure(s.total == want, || format!("minimum {} vs 19x = {want}", s.total))?;
    let ratio = to_f64(&(&s.total / p.tree.weight(p.game.graph())));
    ensure(ratio >= AON_RATIO_MIN, || format!("ratio {ratio}"))?;
    Ok(format!("minimum 19x, ratio {ratio:.6}"))
}

fn sat_structure() -> Verdict {
    let single = gen_3sat4(
        &Formula {
            variables: 3,
            clauses: vec![vec![1, 2, 3]],
        },
        &default_k(),
    )
    .map_err(|e| e.to_string())?;
    single.self_check()?;
    let light = single.catalog.light_edges();
    let compiled = CompiledEnforcement::new(&single.game, &single.tree, &light);
    let subset = |c: &CompiledEnforcement, m: u64| -> BTreeSet<usize> { c.edges_of(m).into_iter().collect() };
    for mask in 0..64u64 {
        let s = subset(&compiled, mask);
        ensure(compiled.enforces(mask) == single.characterization(&s), || format!("light subset {s:?}"))?;
    }
    let nodes = single.game.graph().node_count();

    let pair = gen_3sat4(&parse_dimacs("p cnf 5 2\n1 2 3 0\n-1 4 5 0\n").unwrap(), &default_k())
        .map_err(|e| e.to_string())?;
    pair.self_check()?;
    let compiled = CompiledEnforcement::new(&pair.game, &pair.tree, &pair.catalog.light_edges());
    let cheapest = compiled.cheapest().ok_or("no enforcing light assignment")?;
    let cost = subset(&compiled, cheapest).len();
    ensure(cost == 6, || format!("cheapest light assignment costs {cost}"))?;
    let masks = compiled.enforcing_masks();
    for &m in &masks {
        ensure(pair.is_consistent(&subset(&compiled, m)), || format!("inconsistent enforcing mask {m:b}"))?;
    }
    let b = pair.subsidies(&subset(&compiled, cheapest));
    ensure(is_equilibrium_broadcast(&pair.game, &pair.tree, &b).is_ok(), || "exact check rejects".into())?;
    Ok(format!(
        "single clause {nodes} nodes, 64 subsets match; pair: {} enforcing, all consistent, cost 6",
        masks.len()
    ))
}

fn virtual_cost_bounds() -> Verdict {
    let mut rng = rng(9);
    let level = |c: f64, m: Vec<u64>| Level {
        index: 1,
        increment: netsubsidy::rational::from_f64(c).unwrap(),
        threshold: netsubsidy::rational::from_f64(c).unwrap(),
        heavy: vec![true; m.len()],
        heavy_players: m,
    };
    for _ in 0..10_000 {
        let c: f64 = rng.gen_range(0.01..5.0);
        let m: u64 = rng.gen_range(1..60);
        let n = m + rng.gen_range(0..20);
        let y: f64 = rng.gen_range(0.0..=c);
        let l = level(c, vec![m]);
        let vc = virtual_cost(&l, 0, y).map_err(|e| e.to_string())?;
        ensure(vc + VC_TOL >= (c - y) / n as f64, || format!("c={c} m={m} n={n} y={y}: vc {vc}"))?;
    }
    for _ in 0..10_000 {
        let c: f64 = rng.gen_range(0.01..5.0);
        let k: u64 = rng.gen_range(1..12);
        let t: u64 = k + rng.gen_range(0..20);
        let ms: Vec<u64> = (t - k + 1..=t).collect();
        let total: f64 = if t == k {
            rng.gen_range(1e-3..=k as f64 * c)
        } else {
            rng.gen_range(0.0..=k as f64 * c)
        };
        let l = level(c, ms.clone());
        let mut left = total;
        let mut vc = 0.0;
        for a in 0..ms.len() {
            let y = left.min(c);
            left -= y;
            vc += virtual_cost(&l, a, y).map_err(|e| e.to_string())?;
        }
        let closed = c * (t as f64 / (t as f64 - k as f64 + total / c)).ln();
        ensure((vc - closed).abs() <= VC_TOL, || format!("c={c} k={k} t={t} y={total}: {vc} vs {closed}"))?;
    }
    Ok("10^4 + 10^4 samples".into())
}

fn potential_identity() -> Verdict {
    let mut rng = rng(10);
    let mut deviations = 0;
    while deviations < 100 {
        let game = random_broadcast(&mut rng, 7, 12);
        if game.player_count() == 0 {
            continue;
        }
        let general = game.to_general();
        let graph = game.graph();
        let b = random_subsidies(&mut rng, graph);
        let tree = random_tree(&mut rng, graph, 0);
        let state = State::from_tree(graph, &tree, game.players());
        let i = rng.gen_range(0..general.player_count());
        let (s, t) = general.pairs()[i];
        let options = simple_paths(graph, s, t);
        let alt = options[rng.gen_range(0..options.len())].clone();
        let next = state.with_path(i, alt);
        let d_phi = rosenthal_potential(graph, &next, &b) - rosenthal_potential(graph, &state, &b);
        let d_cost = player_cost(&general, &next, &b, i).unwrap() - player_cost(&general, &state, &b, i).unwrap();
        ensure(d_phi == d_cost, || format!("ΔΦ {d_phi} vs Δcost {d_cost}"))?;
        let oracle = potential_of(graph, next.paths(), &b) - potential_of(graph, state.paths(), &b);
        ensure(oracle == d_phi, || "potential disagrees with recomputation".into())?;
        deviations += 1;
    }
    for seed in 0..40u64 {
        let game = random_broadcast(&mut rng, 8, 12);
        let general = game.to_general();
        let b = random_subsidies(&mut rng, game.graph());
        let start = State::from_tree(game.graph(), &random_tree(&mut rng, game.graph(), 0), game.players());
        let out = best_response_dynamics(&general, start, &b, OrderPolicy::Shuffled { seed }, 10_000)
            .map_err(|e| e.to_string())?;
        ensure(out.potential.windows(2).all(|w| w[1] < w[0]), || "potential trace not decreasing".into())?;
        ensure(is_equilibrium_general(&general, &out.state, &b).is_ok(), || "dynamics ended unstable".into())?;
    }
    Ok("100 deviations exact; 40 dynamics runs converge".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("broadcast check equals general check", 10, broadcast_equivalence),
        ("lp3 = lp2 = rowgen, below grid oracle", 60, lp_cross_validation),
        ("cycle family optimum and 1/e total", 5, cycle_family),
        ("fractional construction enforces at wgt/e", 30, fractional_guarantee),
        ("bin packing biconditional", 5, binpack_biconditional),
        ("independent set weights and branch types", 120, indepset_formulas),
        ("all-or-nothing path gap", 60, aon_gap),
        ("3SAT-4 gadget structure", 600, sat_structure),
        ("virtual cost bound and packed closed form", 5, virtual_cost_bounds),
        ("potential identity and dynamics", 10, potential_identity),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let late = elapsed > Duration::from_secs(*limit);
        let (tag, detail) = match (&result, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {limit}s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {tag} {name} [{:.2}s / {limit}s]: {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
