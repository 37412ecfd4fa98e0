//! Canonical forms for digraphs up to isomorphism, by colour refinement
//! with individualization. Intended for the small digraphs handled by the
//! exhaustive search, where the refinement tree stays tiny.

use crate::digraph::Digraph;
use crate::perm::Permutation;

/// Relabels the digraph along a permutation: arc `(u, v)` becomes
/// `(p(u), p(v))`.
pub fn relabel(g: &Digraph, p: &Permutation) -> Digraph {
    assert_eq!(g.order(), p.len(), "permutation must act on the vertex set");
    let arcs: Vec<(usize, usize)> = g.arcs().map(|(u, v)| (p.apply(u), p.apply(v))).collect();
    Digraph::from_arcs(g.order(), &arcs).expect("relabelling preserves validity")
}

/// A byte string equal for two digraphs exactly when they are isomorphic:
/// the least adjacency encoding over the canonical vertex orderings found
/// by refinement and individualization.
pub fn canonical_form(g: &Digraph) -> Vec<u8> {
    let colors = initial_colors(g);
    let mut best: Option<Vec<u8>> = None;
    search(g, colors, &mut best);
    best.expect("search always reaches a discrete colouring")
}

/// FNV-1a hash of [`canonical_form`], for compact names and dedup keys.
pub fn canonical_digest(g: &Digraph) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canonical_form(g) {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Colours vertices by their degree pair, ranked lexicographically.
fn initial_colors(g: &Digraph) -> Vec<usize> {
    let (out, inn) = g.degrees();
    let mut pairs: Vec<(usize, usize)> = out.iter().copied().zip(inn.iter().copied()).collect();
    let mut distinct = pairs.clone();
    distinct.sort_unstable();
    distinct.dedup();
    pairs
        .drain(..)
        .map(|p| distinct.binary_search(&p).expect("own degree pair"))
        .collect()
}

/// Splits colour classes by per-class out- and in-neighbour counts until
/// nothing changes. New colours are ranked by (old colour, count profile),
/// which depends only on the colouring, not on vertex labels.
fn refine(g: &Digraph, colors: &mut [usize]) {
    let n = g.order();
    loop {
        let cells = colors.iter().max().map_or(0, |&c| c + 1);
        let mut signatures: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); n];
        for v in 0..n {
            let mut profile = vec![0usize; 2 * cells];
            for &head in g.out_neighbors(v) {
                profile[colors[head]] += 1;
            }
            signatures[v] = (colors[v], profile);
        }
        for (u, &color) in colors.iter().enumerate() {
            for &head in g.out_neighbors(u) {
                signatures[head].1[cells + color] += 1;
            }
        }
        let mut distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == cells {
            return;
        }
        for v in 0..n {
            colors[v] = distinct
                .binary_search(&&signatures[v])
                .expect("own signature");
        }
    }
}

fn search(g: &Digraph, mut colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    refine(g, &mut colors);
    let cells = colors.iter().max().map_or(0, |&c| c + 1);
    if cells == g.order() {
        let encoding = encode(g, &colors);
        if best.as_ref().is_none_or(|b| encoding < *b) {
            *best = Some(encoding);
        }
        return;
    }
    let target = (0..cells)
        .find(|&c| colors.iter().filter(|&&x| x == c).count() >= 2)
        .expect("a non-discrete colouring has a repeated colour");
    for v in 0..g.order() {
        if colors[v] != target {
            continue;
        }
        // Individualize v: give it a colour just below the rest of its
        // class, then renumber to consecutive ranks.
        let mut child: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
        child[v] = 2 * target;
        let mut ranks = child.clone();
        ranks.sort_unstable();
        ranks.dedup();
        for c in &mut child {
            *c = ranks.binary_search(c).expect("own colour");
        }
        search(g, child, best);
    }
}

/// Adjacency encoding under the vertex ordering of a discrete colouring.
fn encode(g: &Digraph, colors: &[usize]) -> Vec<u8> {
    let n = g.order();
    let position = colors;
    let mut order = vec![0usize; n];
    for (v, &p) in position.iter().enumerate() {
        order[p] = v;
    }
    let push = |bytes: &mut Vec<u8>, value: usize| {
        bytes.extend_from_slice(&(value as u16).to_be_bytes());
    };
    let mut bytes = Vec::with_capacity(2 + 2 * n + 2 * g.arc_count());
    push(&mut bytes, n);
    for &v in &order {
        let mut heads: Vec<usize> = g.out_neighbors(v).iter().map(|&h| position[h]).collect();
        heads.sort_unstable();
        push(&mut bytes, heads.len());
        for head in heads {
            push(&mut bytes, head);
        }
    }
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn relabelled_cycle_has_same_canonical_form() {
        let g = Digraph::cycle(5);
        let rotated = relabel(&g, &Permutation::new(vec![0, 2, 1, 3, 4]).unwrap());
        assert_ne!(
            g.arcs().collect::<Vec<_>>(),
            rotated.arcs().collect::<Vec<_>>()
        );
        assert_eq!(canonical_form(&g), canonical_form(&rotated));
        assert_eq!(canonical_digest(&g), canonical_digest(&rotated));
    }

    #[test]
    fn cycle_and_path_differ() {
        let cycle = Digraph::cycle(5);
        let path = Digraph::from_arcs(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_ne!(canonical_form(&cycle), canonical_form(&path));
    }

    #[test]
    fn regular_but_disconnected_is_distinguished() {
        // A 6-cycle and two 3-cycles share every degree pair, so telling
        // them apart requires individualization.
        let six = Digraph::cycle(6);
        let two_threes =
            Digraph::from_arcs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_ne!(canonical_form(&six), canonical_form(&two_threes));

        let reordered =
            Digraph::from_arcs(6, &[(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1)]).unwrap();
        assert_eq!(canonical_form(&two_threes), canonical_form(&reordered));
    }

    #[test]
    fn encoding_starts_with_the_order() {
        let form = canonical_form(&Digraph::cycle(3));
        assert_eq!(&form[..2], &3u16.to_be_bytes());
    }

    proptest! {
        #[test]
        fn canonical_form_is_relabelling_invariant(
            n in 1usize..7,
            arc_bits in prop::collection::vec(any::<bool>(), 49),
            seed in prop::collection::vec(0usize..7, 7),
        ) {
            let arcs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v && arc_bits[u * 7 + v])
                .collect();
            let g = Digraph::from_arcs(n, &arcs).unwrap();
            // Build a permutation from the seed by stable-sorting indices.
            let mut keyed: Vec<(usize, usize)> = seed[..n]
                .iter()
                .copied()
                .zip(0..n)
                .collect();
            keyed.sort_unstable();
            let image: Vec<usize> = keyed.into_iter().map(|(_, v)| v).collect();
            let p = Permutation::new(image).unwrap();
            let relabelled = relabel(&g, &p);
            prop_assert_eq!(canonical_form(&g), canonical_form(&relabelled));
        }
    }
}
