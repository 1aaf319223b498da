use std::collections::BTreeSet;

use raagsurf::graph::{graph6_decode, CANON_LIMIT};
use raagsurf::{canonical_code, enumerate_all, is_isomorphic, GraphError, SmallGraph, VertexSet};

fn vs(items: &[usize]) -> VertexSet {
    items.iter().copied().collect()
}

/// Independent oracle: minimum graph6 string over every permutation.
fn brute_code(g: &SmallGraph) -> String {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<String> = None;
    loop {
        let s = g.permute(&perm).to_graph6();
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
        // next lexicographic permutation
        let mut i = n;
        loop {
            if i < 2 {
                return best.unwrap();
            }
            i -= 1;
            if perm[i - 1] < perm[i] {
                break;
            }
        }
        let mut j = n - 1;
        while perm[j] <= perm[i - 1] {
            j -= 1;
        }
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn all_labeled(n: usize) -> impl Iterator<Item = SmallGraph> {
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        SmallGraph::from_edges(n, &edges)
    })
}

#[test]
fn encode_triangle() {
    assert_eq!(SmallGraph::complete(3).to_graph6(), "Bw");
    assert_eq!(SmallGraph::empty(0).to_graph6(), "?");
    assert_eq!(
        graph6_decode(">>graph6<<Bw\n").unwrap(),
        SmallGraph::complete(3)
    );
}

#[test]
fn decode_errors_carry_offsets() {
    match graph6_decode("B") {
        Err(GraphError::Parse { offset, .. }) => assert_eq!(offset, 1),
        other => panic!("unexpected {other:?}"),
    }
    match graph6_decode("D !") {
        Err(GraphError::Parse { offset, .. }) => assert!(offset <= 2),
        other => panic!("unexpected {other:?}"),
    }
    assert!(graph6_decode("").is_err());
}

#[test]
fn complement_examples() {
    let c5 = SmallGraph::cycle(5);
    assert!(is_isomorphic(&c5, &c5.complement()).unwrap());
    assert_eq!(SmallGraph::complete(4).complement(), SmallGraph::empty(4));
    let prism = SmallGraph::from_edges(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    );
    assert!(is_isomorphic(&SmallGraph::cycle(6).complement(), &prism).unwrap());
}

#[test]
fn induced_examples() {
    let c5 = SmallGraph::cycle(5);
    assert_eq!(c5.induced(c5.vertices()), c5);
    for drop in 0..5 {
        let h = c5.induced(c5.vertices().without(drop));
        assert!(is_isomorphic(&h, &SmallGraph::path(4)).unwrap());
    }
    // prism with triangles 123, 456 and matching 14, 25, 36 (0-based here)
    let prism = SmallGraph::from_edges(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    );
    let sq = prism.induced(vs(&[0, 1, 4, 3]));
    assert!(is_isomorphic(&sq, &SmallGraph::cycle(4)).unwrap());
}

#[test]
fn neighborhood_examples() {
    let c4 = SmallGraph::cycle(4);
    assert_eq!(c4.common_neighbors(vs(&[0, 2])), vs(&[1, 3]));
    let p4 = SmallGraph::path(4);
    assert_eq!(p4.link_of_set(vs(&[1, 2])), vs(&[0, 3]));
    assert_eq!(p4.common_neighbors(VertexSet::EMPTY), p4.vertices());
    assert_eq!(p4.antistar(0), vs(&[0, 2, 3]));
    assert_eq!(p4.link_rel(0, &[vs(&[0, 3])]), vs(&[0, 1, 3]));
    assert_eq!(p4.link_rel_set(vs(&[0, 1]), &[vs(&[0, 3])]), vs(&[2, 3]));
}

#[test]
fn partition_examples() {
    let c4 = SmallGraph::cycle(4);
    assert_eq!(
        c4.co_components(c4.vertices()),
        vec![vs(&[0, 2]), vs(&[1, 3])]
    );
    let two = SmallGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
    assert_eq!(
        two.components(two.vertices()),
        vec![vs(&[0, 1, 2]), vs(&[3, 4, 5])]
    );
    let k4 = SmallGraph::complete(4);
    assert_eq!(k4.co_components(k4.vertices()).len(), 4);
}

#[test]
fn predicate_examples() {
    let c4 = SmallGraph::cycle(4);
    assert!(c4.adjacent_sets(vs(&[0, 2]), vs(&[1, 3])));
    let p3 = SmallGraph::path(3);
    assert!(p3.separates(vs(&[1]), 0, 2).unwrap());
    assert_eq!(
        p3.separates(vs(&[1]), 1, 2),
        Err(GraphError::QueryInSeparator)
    );
    let c5 = SmallGraph::cycle(5);
    assert!((0..5).all(|v| !c5.is_separator(VertexSet::singleton(v))));
    assert!(c5.is_connected() && c5.is_coconnected());
    assert!(!c4.is_coconnected());
}

#[test]
fn canonical_examples() {
    assert_ne!(
        canonical_code(&SmallGraph::cycle(4)).unwrap(),
        canonical_code(&SmallGraph::path(4)).unwrap()
    );
    let c5 = SmallGraph::cycle(5);
    assert_eq!(
        canonical_code(&c5).unwrap(),
        canonical_code(&c5.complement()).unwrap()
    );
    assert!(matches!(
        canonical_code(&SmallGraph::empty(CANON_LIMIT + 1)),
        Err(GraphError::CanonLimit { .. })
    ));
}

#[test]
fn canonical_code_matches_permutation_oracle() {
    for n in 0..=6 {
        for g in all_labeled(n).step_by(if n == 6 { 7 } else { 1 }) {
            assert_eq!(
                canonical_code(&g).unwrap().as_str(),
                brute_code(&g),
                "{g:?}"
            );
        }
    }
}

#[test]
fn enumeration_matches_labeled_oracle() {
    for n in 1..=6 {
        let oracle: BTreeSet<String> = all_labeled(n).map(|g| brute_code(&g)).collect();
        let got: Vec<String> = enumerate_all(n).iter().map(|g| g.to_graph6()).collect();
        assert_eq!(got.len(), oracle.len(), "n={n}");
        assert_eq!(got, oracle.into_iter().collect::<Vec<_>>(), "n={n}");
    }
}

#[test]
fn enumeration_counts() {
    let want = [1, 2, 4, 11, 34, 156, 1044];
    for (i, &w) in want.iter().enumerate() {
        assert_eq!(enumerate_all(i + 1).len(), w);
    }
}
