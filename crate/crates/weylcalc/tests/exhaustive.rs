use std::collections::HashSet;

use weylcalc::diagram::{self, cycles, is_admissible};
use weylcalc::exactla::{int, q, Rational};
use weylcalc::oracle::{self, Perm, RootTable};
use weylcalc::rewrite::{self, ChainKind, LongCycle};
use weylcalc::rootsys::{Family, Root, RootSystem, RootSystemId};

fn systems(max_rank: usize) -> Vec<RootSystemId> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for family in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
            if let Ok(id) = RootSystemId::new(family, rank) {
                out.push(id);
            }
        }
    }
    out
}

fn root_count(id: RootSystemId) -> usize {
    let n = id.rank;
    match id.family {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::E => [72, 126, 240][n - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

#[test]
fn root_counts_and_negation() {
    for id in systems(8) {
        let sys = RootSystem::build(id).unwrap();
        assert_eq!(sys.all_roots().len(), root_count(id), "{id}");
        for r in sys.all_roots() {
            assert!(sys.is_root(&r.neg()), "{id}: -{r}");
        }
    }
}

#[test]
fn reflection_closure_and_inner_products() {
    let allowed_cross = |t: &Rational| [int(0), q(1, 2), q(-1, 2), t / int(2), -(t / int(2))];
    for id in systems(6) {
        let sys = RootSystem::build(id).unwrap();
        let cross = allowed_cross(&sys.t);
        for u in sys.all_roots() {
            let nu = sys.normalized_inner(u, u);
            assert!(nu == int(1) || nu == sys.t, "{id}: |{u}|^2 = {nu}");
            for v in sys.all_roots() {
                assert!(sys.is_root(&sys.reflect(u, v).unwrap()), "{id}: s_{u}({v})");
                if !u.is_proportional(v) {
                    let x = sys.normalized_inner(u, v);
                    assert!(cross.contains(&x), "{id}: ({u}, {v}) = {x}");
                }
            }
        }
    }
}

#[test]
fn group_orders_match_the_product_formula() {
    let mut ids = systems(6);
    ids.push(RootSystemId::new(Family::D, 7).unwrap());
    for id in ids {
        if id.family == Family::E && id.rank > 6 {
            continue;
        }
        let sys = RootSystem::build(id).unwrap();
        let n = oracle::group_order(&sys, oracle::DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(n as u128, oracle::weyl_group_order(id), "{id}");
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[test]
fn chordless_cycles_of_independent_roots_have_odd_dotted_count() {
    for (family, rank) in [(Family::D, 4), (Family::A, 4)] {
        let sys = RootSystem::of(family, rank);
        let pos = sys.positive_roots();
        let mut checked = 0;
        for ix in subsets(pos.len(), 4) {
            let roots: Vec<Root> = ix.iter().map(|&i| pos[i].clone()).collect();
            if !RootSystem::independent(&roots) {
                continue;
            }
            let d = diagram::from_roots(&sys, &roots).unwrap();
            for c in diagram::chordless_cycles(&d.diagram) {
                checked += 1;
                assert_eq!(diagram::cycle_dotted_count(&d.diagram, &c) % 2, 1, "{:?}", roots);
            }
        }
        assert!(checked > 0, "{family}{rank}: no cycles met");
    }
}

#[test]
fn a_chord_can_leave_an_all_solid_outer_cycle() {
    let sys = RootSystem::of(Family::D, 4);
    let roots: Vec<Root> = ["e3-e4", "e2-e3", "e3+e4", "e1-e3"].iter().map(|s| Root::parse(s, 4).unwrap()).collect();
    assert!(RootSystem::independent(&roots));
    let d = diagram::from_roots(&sys, &roots).unwrap().diagram;
    let square = cycles(&d).into_iter().find(|c| c.len() == 4).expect("outer square");
    assert_eq!(diagram::cycle_dotted_count(&d, &square), 0);
    assert!(diagram::chordless_cycles(&d).iter().all(|c| c.len() == 3 && diagram::cycle_dotted_count(&d, c) == 1));
    assert!(diagram::dotted_parity_ok(&d));
}

/// Elements reachable with at most `len` reflections, by length.
fn short_words(table: &RootTable, len: usize) -> Vec<HashSet<Perm>> {
    let refl: Vec<Perm> = (0..table.len()).filter(|&i| table.is_positive(i)).map(|i| table.reflection_perm(i)).collect();
    let mut layers = vec![HashSet::from([table.identity()])];
    for _ in 0..len {
        let next = layers.last().unwrap().iter().flat_map(|p| refl.iter().map(move |s| oracle::compose(p, s))).collect();
        layers.push(next);
    }
    layers
}

#[test]
fn independent_words_have_no_shorter_expression() {
    for (family, rank) in [(Family::D, 4), (Family::A, 4), (Family::B, 3)] {
        let sys = RootSystem::of(family, rank);
        let table = RootTable::new(&sys);
        let layers = short_words(&table, rank - 1);
        let pos: Vec<usize> = (0..table.len()).filter(|&i| table.is_positive(i)).collect();
        for k in 1..=rank {
            for ix in subsets(pos.len(), k) {
                let roots: Vec<Root> = ix.iter().map(|&i| sys.all_roots()[pos[i]].clone()).collect();
                if !RootSystem::independent(&roots) {
                    continue;
                }
                let word: Vec<usize> = ix.iter().map(|&i| pos[i]).collect();
                let p = table.word_perm(&word);
                for (j, layer) in layers.iter().enumerate().take(k) {
                    assert!(!layer.contains(&p), "{family}{rank}: {roots:?} has a word of length {j}");
                }
            }
        }
    }
}

#[test]
fn chain_roots_follow_the_orthogonality_table() {
    for l in (6..=16).step_by(2) {
        let (kind, k) = if l % 4 == 0 { (ChainKind::Theta, l / 4) } else { (ChainKind::Mu, (l + 2) / 4) };
        let sys = RootSystem::of(Family::D, l);
        let (alpha, beta) = rewrite::labeled_cycle(l);
        let mut pairs = Vec::new();
        for big in 1..=l / 2 {
            for small in 1..=big {
                if rewrite::chain_neighbours(kind, l, big, small).is_ok() {
                    pairs.push((big, small));
                }
            }
        }
        let expected = if kind == ChainKind::Theta { 2 * k - 1 } else { 2 * k - 2 };
        assert_eq!(pairs.len(), expected, "D{l}: admissible chains {pairs:?}");
        for (big, small) in pairs {
            let r = rewrite::chain_root(kind, &sys, big, small).unwrap();
            assert!(sys.is_root(&r));
            let touch = |v: &[Root]| (1..=v.len()).filter(|&i| r.dot(&v[i - 1]) != int(0)).collect::<Vec<_>>();
            let want = rewrite::chain_neighbours(kind, l, big, small).unwrap();
            assert_eq!((touch(&alpha), touch(&beta)), want, "D{l}: chain ({big}, {small})");
        }
    }
}

#[test]
fn long_cycle_traces_end_on_squares() {
    let mut all = vec![LongCycle::D6B2, LongCycle::E7B2, LongCycle::E8B3, LongCycle::E8B5];
    all.extend([6, 8, 10, 12, 14, 16].map(LongCycle::Dl));
    for which in all {
        let trace = rewrite::transform_long_cycle(which).unwrap();
        let start = which.start();
        let sys = RootSystem::of(start.family, start.rank);
        let d = diagram::from_roots(&sys, trace.final_state().roots()).unwrap();
        assert!(is_admissible(&d), "{which}");
        let lens: Vec<usize> = diagram::chordless_cycles(&d.diagram).iter().map(|c| c.len()).collect();
        assert!(!lens.is_empty() && lens.iter().all(|&n| n == 4), "{which}: chordless cycles {lens:?}");
        let chi = trace.initial.charpoly();
        assert!(trace.steps.iter().all(|s| s.state.charpoly() == chi), "{which}");
        assert!(trace.final_state().invariants_hold(&trace.initial.element), "{which}");
    }
}
