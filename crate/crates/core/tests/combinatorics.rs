use std::collections::{BTreeMap, BTreeSet};

use implicit_dd::mindex::{
    box_points, compatible_tuples, enumerate_increasing_paths, enumerate_unit_paths,
};
use implicit_dd::polytree::{
    count_trees_by_outdegree, enumerate_partitions, enumerate_tprime, enumerate_trees, is_tprime,
    partition_to_tree, star_type, tree_to_partition, PlaneTree, PolygonPartition, TreeNode,
};
use implicit_dd::{little_schroeder, multinomial, LatticePath, MultiIndex};
use proptest::prelude::*;

fn line(n: usize) -> Vec<MultiIndex> {
    (0..n).map(|i| MultiIndex::new(vec![i])).collect()
}

// Diagonals (i, j) and (k, l) of a convex polygon cross when exactly one of
// k, l lies strictly between i and j.
fn crossing(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |v: usize| a.0 < v && v < a.1;
    let shared = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
    !shared && (inside(b.0) != inside(b.1))
}

/// Noncrossing diagonal subsets of a convex polygon, by exhaustive search.
fn brute_force_dissections(vertices: usize) -> BTreeSet<Vec<(usize, usize)>> {
    let diagonals: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|i| (i + 2..vertices).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == vertices - 1))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << diagonals.len()) {
        let chosen: Vec<(usize, usize)> = diagonals
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, d)| *d)
            .collect();
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(a, &d)| chosen[a + 1..].iter().all(|&e| !crossing(d, e)));
        if ok {
            out.insert(chosen);
        }
    }
    out
}

#[test]
fn partitions_match_brute_force() {
    for vertices in 3..=8 {
        let ours = enumerate_partitions(&line(vertices)).unwrap();
        let mut diag_sets: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        for p in &ours {
            let mut d = p.diagonals();
            d.sort();
            diag_sets.insert(d);
        }
        assert_eq!(
            diag_sets.len(),
            ours.len(),
            "duplicates for {vertices} vertices"
        );
        assert_eq!(
            diag_sets,
            brute_force_dissections(vertices),
            "{vertices} vertices"
        );
        assert_eq!(ours.len() as u128, little_schroeder(vertices));
    }
}

#[test]
fn bijection_round_trips() {
    for vertices in 3..=7 {
        let labels = line(vertices);
        let partitions = enumerate_partitions(&labels).unwrap();
        let mut shapes = BTreeSet::new();
        for p in &partitions {
            let tree = partition_to_tree(p).unwrap();
            assert!(tree.is_reduced());
            assert_eq!(tree.leaf_count(), vertices - 1);
            assert_eq!(tree.nonleaf_count(), p.faces().len());
            assert_eq!(&tree_to_partition(&tree).unwrap(), p);
            shapes.insert(tree.shape());
        }
        assert_eq!(shapes.len(), partitions.len());
        assert_eq!(enumerate_trees(&labels).unwrap().len(), partitions.len());
    }
}

#[test]
fn reverse_bijection_example() {
    let tree = PlaneTree::from_shape(line(6), "(L (L L L) L)").unwrap();
    let p = tree_to_partition(&tree).unwrap();
    assert_eq!(p.notation(), "(0,1,4,5) (1,2,3,4)");
    let back = PolygonPartition::parse_notation(line(6), "(0,1,4,5) (1,2,3,4)").unwrap();
    assert_eq!(back, p);
}

/// All plane trees with `vertices` vertices as preorder outdegree sequences
/// (Łukasiewicz words).
fn plane_trees(vertices: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, open: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            if open == 0 {
                out.push(word.clone());
            }
            return;
        }
        if open == 0 {
            return;
        }
        for d in 0..remaining {
            word.push(d);
            go(remaining - 1, open - 1 + d, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    go(vertices, 1, &mut Vec::new(), &mut out);
    out
}

#[test]
fn outdegree_count_formula_matches_enumeration() {
    for vertices in 1..=8 {
        let mut census: BTreeMap<BTreeMap<usize, usize>, u128> = BTreeMap::new();
        for word in plane_trees(vertices) {
            let mut profile = BTreeMap::new();
            for d in word {
                *profile.entry(d).or_insert(0) += 1;
            }
            *census.entry(profile).or_insert(0) += 1;
        }
        for (profile, count) in census {
            assert_eq!(
                count_trees_by_outdegree(&profile).unwrap(),
                count,
                "{profile:?}"
            );
        }
    }
    let mut infeasible = BTreeMap::new();
    infeasible.insert(0, 2);
    infeasible.insert(3, 1);
    assert!(count_trees_by_outdegree(&infeasible).is_err());
}

#[test]
fn tprime_trees_are_valid_and_distinct() {
    for n in [
        vec![2, 0],
        vec![1, 1],
        vec![2, 1],
        vec![1, 1, 1],
        vec![2, 2],
    ] {
        let n = MultiIndex::new(n);
        for path in enumerate_unit_paths(&MultiIndex::zeros(n.q()), &n).unwrap() {
            let trees = enumerate_tprime(path.points()).unwrap();
            let shapes: BTreeSet<String> = trees.iter().map(|t| t.to_string()).collect();
            assert_eq!(shapes.len(), trees.len());
            for t in &trees {
                assert!(is_tprime(t), "{t}");
                for star in t.stars() {
                    let ty = star_type(&star).unwrap();
                    assert!(!(ty.s.is_zero() && ty.t == 1));
                }
            }
        }
    }
}

#[test]
fn table_of_trees_for_mixed_second_order() {
    let n = MultiIndex::new(vec![1, 1]);
    let counts: Vec<usize> = enumerate_unit_paths(&MultiIndex::zeros(2), &n)
        .unwrap()
        .iter()
        .map(|p| enumerate_tprime(p.points()).unwrap().len())
        .collect();
    assert_eq!(counts, vec![3, 2]);
}

#[test]
fn non_unit_single_edge_has_no_tprime() {
    let v = vec![MultiIndex::new(vec![0, 0]), MultiIndex::new(vec![1, 1])];
    assert!(enumerate_tprime(&v).is_err());
    assert!(PlaneTree::new(
        line(3),
        TreeNode::Node(vec![TreeNode::Leaf(1), TreeNode::Leaf(0)])
    )
    .is_err());
}

fn small_index(q: usize, max: usize) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0..=max, q).prop_map(MultiIndex::new)
}

proptest! {
    #[test]
    fn unit_path_counts_are_multinomial(n in (1usize..=3).prop_flat_map(|q| small_index(q, 3))) {
        let zero = MultiIndex::zeros(n.q());
        let paths = enumerate_unit_paths(&zero, &n).unwrap();
        prop_assert_eq!(paths.len() as u128, multinomial(n.coords()));
        for p in &paths {
            prop_assert!(p.is_unit());
            prop_assert_eq!(p.steps(), n.order());
        }
    }

    #[test]
    fn increasing_paths_are_strict(n in (1usize..=2).prop_flat_map(|q| small_index(q, 2)), k in 1usize..=4) {
        prop_assume!(!n.is_zero());
        let zero = MultiIndex::zeros(n.q());
        if k > n.order() {
            prop_assert!(enumerate_increasing_paths(&zero, &n, k).is_err());
            return Ok(());
        }
        let paths = enumerate_increasing_paths(&zero, &n, k).unwrap();
        prop_assert!(!paths.is_empty());
        for p in &paths {
            prop_assert_eq!(p.steps(), k);
            for w in p.points().windows(2) {
                prop_assert!(w[0].lt(&w[1]).unwrap());
            }
        }
    }

    #[test]
    fn compatible_tuples_describe_prefixes(n in (1usize..=3).prop_flat_map(|q| small_index(q, 2)), pick in 0usize..1000) {
        prop_assume!(!n.is_zero());
        let zero = MultiIndex::zeros(n.q());
        let paths = enumerate_unit_paths(&zero, &n).unwrap();
        let path = &paths[pick % paths.len()];
        let tuples = compatible_tuples(path);
        prop_assert!(!tuples.is_empty());
        for w in tuples.windows(2) {
            prop_assert!(w[0].t >= w[1].t);
        }
        for tuple in &tuples {
            prop_assert_eq!(tuple.s.order() + tuple.t, path.steps());
            // The first |s| steps run through the axes in order, s_r steps each.
            let mut j = 1;
            for (axis, &count) in tuple.s.coords().iter().enumerate() {
                for _ in 0..count {
                    prop_assert_eq!(path.step(j), MultiIndex::unit(n.q(), axis));
                    j += 1;
                }
            }
        }
    }

    #[test]
    fn path_notation_round_trips(n in (1usize..=3).prop_flat_map(|q| small_index(q, 3)), pick in 0usize..1000) {
        prop_assume!(!n.is_zero());
        let zero = MultiIndex::zeros(n.q());
        let paths = enumerate_unit_paths(&zero, &n).unwrap();
        let path = &paths[pick % paths.len()];
        let back: LatticePath = path.to_string().parse().unwrap();
        prop_assert_eq!(&back, path);
    }

    #[test]
    fn box_points_cover_the_box(n in (1usize..=3).prop_flat_map(|q| small_index(q, 3))) {
        let zero = MultiIndex::zeros(n.q());
        let points = box_points(&zero, &n);
        let expected: usize = n.coords().iter().map(|c| c + 1).product();
        prop_assert_eq!(points.len(), expected);
        for p in &points {
            prop_assert!(p.leq(&n).unwrap());
        }
    }

    #[test]
    fn partition_notation_round_trips(vertices in 3usize..=7, pick in 0usize..1000) {
        let labels = line(vertices);
        let all = enumerate_partitions(&labels).unwrap();
        let p = &all[pick % all.len()];
        let back = PolygonPartition::parse_notation(labels, &p.notation()).unwrap();
        prop_assert_eq!(&back, p);
    }
}
