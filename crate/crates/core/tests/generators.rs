use netsubsidy::enforce::min_integral_subsidy_exact;
use netsubsidy::game::{harmonic, is_equilibrium_broadcast};
use netsubsidy::generators::{
    bypass_length, classify_branches, e_hat, gen_aon_path, gen_binpack, gen_bypass, gen_cycle, gen_indepset,
    BranchType, CubicGraph,
};
use netsubsidy::model::{is_mst, SubsidyAssignment};
use netsubsidy::rational::{int, ratio, to_f64};
use netsubsidy::sne::{min_subsidy_tree, Method};

#[test]
fn bypass_length_is_minimal() {
    for kappa in 1..40u64 {
        let ell = bypass_length(kappa);
        assert!(harmonic(kappa + ell) - harmonic(kappa) > int(1));
        assert!(harmonic(kappa + ell - 1) - harmonic(kappa) <= int(1));
        let inst = gen_bypass(kappa, kappa).unwrap();
        assert_eq!(inst.spec.bypass_weight, harmonic(kappa + ell) - harmonic(kappa));
        assert!(is_mst(inst.game.graph(), &inst.tree));
    }
}

#[test]
fn designated_trees_are_msts() {
    for n in 2..12 {
        let c = gen_cycle(n).unwrap();
        assert!(is_mst(c.game.graph(), &c.tree));
    }
    for n in 3..12 {
        let p = gen_aon_path(n).unwrap();
        assert!(is_mst(p.game.graph(), &p.tree));
        assert_eq!(p.tree.weight(p.game.graph()), int(1) + int(n as i64 - 1) * &p.x);
    }
    let bp = gen_binpack(&[2, 2, 4], 2, 4).unwrap();
    for a in bp.assignments() {
        let t = bp.tree_for(&a).unwrap();
        assert!(is_mst(bp.game.graph(), &t));
        assert_eq!(t.weight(bp.game.graph()), bp.k_weight);
    }
}

#[test]
fn binpack_equilibria_follow_exact_packings() {
    assert!(gen_binpack(&[2, 2, 2, 4], 2, 5).is_err());
    let bp = gen_binpack(&[2, 2, 2, 2, 4], 2, 6).unwrap();
    for a in bp.assignments() {
        let t = bp.tree_for(&a).unwrap();
        let exact = bp.loads(&a).iter().all(|&l| l == bp.capacity);
        let eq = is_equilibrium_broadcast(&bp.game, &t, &SubsidyAssignment::zero()).is_ok();
        assert_eq!(eq, exact, "{a:?}");
    }
}

#[test]
fn indepset_weights_and_types() {
    // Triangular prism: 6 nodes, 3-regular.
    let prism = CubicGraph {
        nodes: 6,
        edges: vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
    };
    let delta = ratio(1, 12);
    let inst = gen_indepset(&prism, &delta).unwrap();
    for set in [vec![], vec![0], vec![4], vec![0, 4], vec![2, 3]] {
        let t = inst.tree_for(&set).unwrap();
        assert_eq!(t.weight(inst.game.graph()), inst.expected_weight(set.len()));
        let branches = classify_branches(&inst, &t);
        assert_eq!(branches.iter().filter(|b| b.kind == BranchType::B).count(), set.len());
        assert!(branches.iter().all(|b| matches!(b.kind, BranchType::A | BranchType::B)));
        assert!(is_equilibrium_broadcast(&inst.game, &t, &SubsidyAssignment::zero()).is_ok());
    }
    assert!(gen_indepset(&CubicGraph { nodes: 4, edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)] }, &delta).is_err());
}

#[test]
fn cycle_lower_bound_family() {
    let c = gen_cycle(3).unwrap();
    assert_eq!(min_subsidy_tree(&c.game, &c.tree, Method::Lp3).unwrap().total, ratio(5, 6));
    for n in 4..9 {
        let c = gen_cycle(n).unwrap();
        let lp = min_subsidy_tree(&c.game, &c.tree, Method::Lp3).unwrap();
        assert!(to_f64(&lp.total) <= n as f64 / std::f64::consts::E + 1e-9);
    }
}

#[test]
fn aon_path_small() {
    let p = gen_aon_path(5).unwrap();
    let s = min_integral_subsidy_exact(&p.game, &p.tree, None, 24).unwrap().unwrap();
    assert_eq!(s.total, int(4) * &p.x);
    assert_eq!(s.edges, vec![0, 1, 2, 3]);
    assert!((to_f64(&e_hat()) - std::f64::consts::E).abs() < 1e-12);
}
