mod common;

use std::collections::HashSet;

use sgtree::tree::{self, children, children_with, parent, ChildStrategy, Traversal};
use sgtree::Semigroup;

fn all_up_to(g: u32) -> Vec<Semigroup> {
    let mut out = Vec::new();
    Traversal::new(g).enumerate(|s, _| out.push(s.clone())).unwrap();
    out
}

#[test]
fn matches_brute_force_membership() {
    // not just the counts: the same gap sets, genus by genus
    for g in 0..=9 {
        let mut expected: Vec<Vec<u32>> = common::semigroups_of_genus(g).into_iter().map(common::gap_list).collect();
        let mut found = Vec::new();
        Traversal::new(g)
            .enumerate(|s, d| {
                if d == g {
                    found.push(s.gaps());
                }
            })
            .unwrap();
        expected.sort();
        found.sort();
        assert_eq!(found, expected, "genus {g}");
    }
}

#[test]
fn derived_fields_agree_with_oracle() {
    for g in 0..=11 {
        for mask in common::semigroups_of_genus(g) {
            let s = Semigroup::from_gap_set(common::gap_list(mask)).unwrap();
            assert_eq!(s.genus(), g);
            assert_eq!(s.frobenius() as i64, common::frobenius(mask));
            if g > 0 {
                assert_eq!(s.multiplicity(), common::multiplicity(mask));
            }
            assert_eq!(s.gcd_left(), common::gcd_left(mask), "{s:?}");
        }
    }
}

#[test]
fn round_trip_and_closure() {
    for s in all_up_to(15) {
        let again = Semigroup::from_gap_set(s.gaps()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.minimal_generators(), s.minimal_generators());
        assert_eq!(Semigroup::from_canonical_id(&s.canonical_id()).unwrap(), s);
        let f = s.frobenius();
        if f > 0 {
            let f = f as u32;
            for a in 1..=f {
                for b in a..=f - a {
                    if s.contains(a) && s.contains(b) {
                        assert!(s.contains(a + b), "{s:?}: {a}+{b}");
                    }
                }
            }
            assert!(!s.contains(f));
            assert!(f < 2 * s.genus());
        }
        assert_eq!(s.gaps().len() as u32, s.genus());
    }
}

#[test]
fn generators_generate_and_are_minimal() {
    for s in all_up_to(12) {
        let gens = s.minimal_generators();
        let limit = (s.frobenius() + s.multiplicity() as i32) as u32;
        // everything up to F + m reachable from the generators
        let mut reach = vec![false; limit as usize + 1];
        reach[0] = true;
        for n in 1..=limit as usize {
            reach[n] = gens.iter().any(|&x| x as usize <= n && reach[n - x as usize]);
        }
        for n in 0..=limit {
            assert_eq!(reach[n as usize], s.contains(n), "{s:?} at {n}");
        }
        // no generator is reachable from the others
        for &x in gens {
            let others: Vec<u32> = gens.iter().copied().filter(|&y| y != x).collect();
            let mut r = vec![false; x as usize + 1];
            r[0] = true;
            for n in 1..=x as usize {
                r[n] = others.iter().any(|&y| y as usize <= n && r[n - y as usize]);
            }
            assert!(!r[x as usize], "{x} regenerated in {s:?}");
        }
        assert!(gens.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn parent_child_structure() {
    let mut seen = HashSet::new();
    for s in all_up_to(13) {
        assert!(seen.insert(s.canonical_id()), "duplicate {s:?}");
        let kids = children(&s);
        assert!(kids.windows(2).all(|w| w[0].0 < w[1].0));
        for (x, child) in &kids {
            assert_eq!(parent(child).unwrap(), s);
            assert_eq!(child.frobenius(), *x as i32);
            assert_eq!(child.genus(), s.genus() + 1);
            assert!(s.minimal_generators().contains(x));
            assert!(*x as i32 > s.frobenius());
        }
    }
}

#[test]
fn consecutive_left_elements_exclude_infinite_chains() {
    for s in all_up_to(14) {
        if s.has_consecutive_left_elements() {
            assert!(!s.in_infinite_chain(), "{s:?}");
        }
        let left = s.nonzero_left_elements();
        let d = s.gcd_left();
        assert_eq!(d == 0, left.is_empty());
        assert!(left.iter().all(|&x| x % d == 0));
    }
}

#[test]
fn edges_satisfy_tree_invariants() {
    let edges = tree::edges(9);
    let total: u64 = tree::count_by_genus(9).iter().sum();
    assert_eq!(edges.len() as u64, total - 1);
    for e in &edges {
        let p = Semigroup::from_canonical_id(&e.parent_id).unwrap();
        let c = Semigroup::from_canonical_id(&e.child_id).unwrap();
        assert_eq!(parent(&c).unwrap(), p);
        assert_eq!(c.frobenius(), e.removed_generator as i32);
        assert_eq!(e.highlighted, c.in_infinite_chain());
        // a highlighted child forces a highlighted parent
        if e.highlighted {
            assert!(p.in_infinite_chain());
        }
    }
}

#[test]
fn strategies_agree_bit_for_bit() {
    Traversal::new(16)
        .enumerate(|s, _| {
            let a = children_with(s, ChildStrategy::Naive);
            let b = children_with(s, ChildStrategy::Incremental);
            assert_eq!(a, b);
            for ((_, x), (_, y)) in a.iter().zip(&b) {
                assert_eq!(x.minimal_generators(), y.minimal_generators());
                assert_eq!(x.multiplicity(), y.multiplicity());
            }
        })
        .unwrap();
}

#[test]
fn worker_count_does_not_change_counts() {
    let serial = tree::count_by_genus(18);
    for workers in [2, 3, 8] {
        for fan_out in [0, 3, 8, 30] {
            let par = Traversal::new(18)
                .workers(workers)
                .fan_out_depth(fan_out)
                .enumerate_parallel(|_, _| {})
                .unwrap();
            assert_eq!(par.per_genus_counts, serial, "workers {workers}, fan-out {fan_out}");
            assert_eq!(par.node_visit_count, serial.iter().sum::<u64>());
        }
    }
}

#[test]
fn serial_order_is_depth_first_ascending() {
    let mut order = Vec::new();
    Traversal::new(4).enumerate(|s, _| order.push(s.canonical_string())).unwrap();
    assert_eq!(
        order,
        vec![
            "", "1", "1,2", "1,2,3", "1,2,3,4", "1,2,3,5", "1,2,3,6", "1,2,3,7", "1,2,4", "1,2,4,5",
            "1,2,4,7", "1,2,5", "1,3", "1,3,5", "1,3,5,7",
        ]
    );
}
