//! Structural checks of the bundled order-20 fixtures: the two smallest
//! known 3-geodetic digraphs of minimum out-degree 2.

use std::collections::HashMap;
use std::path::Path;

use geodetic::canon::{canonical_digest, canonical_form};
use geodetic::geodecity::count_walks_upto;
use geodetic::{excess, is_k_geodetic, parse_arc_list, Digraph, Int};

fn fixture(name: &str) -> Digraph {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    parse_arc_list(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Number of unordered vertex pairs sharing an out-neighbourhood.
fn out_twin_pairs(g: &Digraph) -> usize {
    let mut groups: HashMap<Vec<usize>, usize> = HashMap::new();
    for v in 0..g.order() {
        *groups.entry(g.out_neighbors(v).to_vec()).or_default() += 1;
    }
    groups.values().map(|&c| c * (c - 1) / 2).sum()
}

#[test]
fn fixtures_have_the_documented_shape() {
    for name in ["cage_d2k3_a.arcs", "cage_d2k3_b.arcs"] {
        let g = fixture(name);
        assert_eq!(g.order(), 20, "{name}");
        assert_eq!(g.arc_count(), 40, "{name}");
        assert!(g.is_diregular(2), "{name}");
        assert!(is_k_geodetic(&g, 3).is_geodetic, "{name}");
        assert_eq!(excess(&g, 2, 3).unwrap(), Int::from(5), "{name}");
    }
}

#[test]
fn every_root_reaches_exactly_the_moore_tree() {
    // With excess 5, each vertex reaches 15 vertices within three steps
    // (itself included) and misses exactly 5, each along a unique walk.
    for name in ["cage_d2k3_a.arcs", "cage_d2k3_b.arcs"] {
        let g = fixture(name);
        let walks = count_walks_upto(&g, 3);
        assert_eq!(walks.first_saturated_pair(), None, "{name}");
        for u in 0..g.order() {
            let reached = walks.row(u).iter().filter(|&&c| c == 1).count();
            assert_eq!(reached, 15, "{name}: root {u}");
        }
    }
}

#[test]
fn the_two_fixtures_are_not_isomorphic() {
    let a = fixture("cage_d2k3_a.arcs");
    let b = fixture("cage_d2k3_b.arcs");
    assert_ne!(canonical_form(&a), canonical_form(&b));
    // Out-twin counts separate them without any canonical machinery.
    assert_eq!(out_twin_pairs(&a), 4);
    assert_eq!(out_twin_pairs(&b), 10);
}

#[test]
fn fixture_digests_are_frozen() {
    assert_eq!(
        canonical_digest(&fixture("cage_d2k3_a.arcs")),
        0xba97_f2c5_5476_baf9
    );
    assert_eq!(
        canonical_digest(&fixture("cage_d2k3_b.arcs")),
        0xbdcd_d086_e66b_f0a1
    );
}
