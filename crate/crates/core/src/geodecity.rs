//! Geodecity verification: saturating walk counts, the directed Moore
//! bound, excess, and the outlier map of an excess-one digraph.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;
use crate::perm::Permutation;
use crate::Int;

/// Saturation value: walk counts are tracked exactly as 0 or 1, anything
/// larger collapses to `MANY`. Adding arcs never removes walks, so the
/// predicate "at most one walk" is still decided exactly.
pub const MANY: u8 = 2;

/// Error cases for the geodecity queries.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeodecityError {
    #[error("vertex {vertex} has out-degree {out_degree}, need at least {required}")]
    DegreeTooLow {
        vertex: usize,
        out_degree: usize,
        required: u32,
    },
    #[error("not {k}-geodetic: vertices {} and {} are joined by two walks of length <= {k}", witness.0, witness.1)]
    NotGeodetic { k: u32, witness: (usize, usize) },
    #[error("vertex {vertex} breaks {d}-diregularity (out-degree {out_degree}, in-degree {in_degree})")]
    NotDiregular {
        vertex: usize,
        d: u32,
        out_degree: usize,
        in_degree: usize,
    },
    #[error("excess is {excess}, not one")]
    NotExcessOne { excess: Int },
    #[error("vertex {vertex} fails to reach {count} vertices, expected exactly one")]
    NonUniqueOutlier { vertex: usize, count: usize },
}

/// Saturating counts of directed walks of length at most `k`, including the
/// length-zero walk from every vertex to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCountMatrix {
    n: usize,
    k: u32,
    counts: Vec<u8>,
}

impl WalkCountMatrix {
    /// Saturated number of walks from `u` to `v`: 0, 1 or [`MANY`].
    pub fn get(&self, u: usize, v: usize) -> u8 {
        self.counts[u * self.n + v]
    }

    /// Counts from source `u`.
    pub fn row(&self, u: usize) -> &[u8] {
        &self.counts[u * self.n..(u + 1) * self.n]
    }

    /// Matrix side length.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Walk length bound the counts were computed for.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Lexicographically least pair joined by more than one walk, if any.
    pub fn first_saturated_pair(&self) -> Option<(usize, usize)> {
        self.counts
            .iter()
            .position(|&c| c >= MANY)
            .map(|i| (i / self.n, i % self.n))
    }
}

/// Verdict of [`is_k_geodetic`] plus surrounding context, ready for both
/// key-value text output and structured serialisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodecityReport {
    pub order: usize,
    pub k: u32,
    pub is_geodetic: bool,
    /// Lexicographically least violating pair; present iff not geodetic.
    pub witness: Option<(usize, usize)>,
    pub min_out_degree: usize,
    /// Moore bound for (min_out_degree, k), decimal; absent if the minimum
    /// out-degree is zero.
    pub moore: Option<String>,
    /// order - moore, decimal; present only for geodetic digraphs with
    /// positive minimum out-degree.
    pub excess: Option<String>,
}

impl GeodecityReport {
    /// Flat `key: value` rendering, one line per field.
    pub fn to_key_value_text(&self) -> String {
        let fmt_pair = |w: &Option<(usize, usize)>| match w {
            Some((u, v)) => format!("{u} {v}"),
            None => "none".to_string(),
        };
        let fmt_opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "none".to_string());
        format!(
            "order: {}\nk: {}\nis_geodetic: {}\nwitness: {}\nmin_out_degree: {}\nmoore: {}\nexcess: {}\n",
            self.order,
            self.k,
            self.is_geodetic,
            fmt_pair(&self.witness),
            self.min_out_degree,
            fmt_opt(&self.moore),
            fmt_opt(&self.excess),
        )
    }
}

/// Directed Moore bound `1 + d + d^2 + ... + d^k`.
pub fn moore_bound(d: u32, k: u32) -> BigUint {
    assert!(d >= 1 && k >= 1, "moore_bound requires d >= 1 and k >= 1");
    let d = BigUint::from(d);
    let mut sum = BigUint::from(1u32);
    let mut power = BigUint::from(1u32);
    for _ in 0..k {
        power *= &d;
        sum += &power;
    }
    sum
}

/// Saturating counts of all walks of length at most `k`.
///
/// Runs the length-layered recurrence `W_l(u, v) = sum over out-neighbours
/// x of u of W_{l-1}(x, v)` with every addition clamped at [`MANY`].
pub fn count_walks_upto(g: &Digraph, k: u32) -> WalkCountMatrix {
    assert!(k >= 1, "count_walks_upto requires k >= 1");
    let n = g.order();
    let mut total = vec![0u8; n * n];
    let mut prev = vec![0u8; n * n];
    for u in 0..n {
        total[u * n + u] = 1;
        prev[u * n + u] = 1;
    }
    let mut next = vec![0u8; n * n];
    for _ in 0..k {
        for u in 0..n {
            let row = &mut next[u * n..(u + 1) * n];
            row.fill(0);
            for &x in g.out_neighbors(u) {
                let from_x = &prev[x * n..(x + 1) * n];
                for (acc, &c) in row.iter_mut().zip(from_x) {
                    *acc = (*acc + c).min(MANY);
                }
            }
        }
        for (acc, &c) in total.iter_mut().zip(&next) {
            *acc = (*acc + c).min(MANY);
        }
        std::mem::swap(&mut prev, &mut next);
    }
    WalkCountMatrix {
        n,
        k,
        counts: total,
    }
}

/// Checks that every ordered pair is joined by at most one walk of length
/// at most `k`, reporting the least violating pair otherwise.
pub fn is_k_geodetic(g: &Digraph, k: u32) -> GeodecityReport {
    let counts = count_walks_upto(g, k);
    let witness = counts.first_saturated_pair();
    let min_out_degree = g.out_degrees().into_iter().min().unwrap_or(0);
    let moore = (min_out_degree > 0).then(|| moore_bound(min_out_degree as u32, k));
    let excess = match (&moore, witness) {
        (Some(m), None) => Some((BigInt::from(g.order()) - BigInt::from(m.clone())).to_string()),
        _ => None,
    };
    GeodecityReport {
        order: g.order(),
        k,
        is_geodetic: witness.is_none(),
        witness,
        min_out_degree,
        moore: moore.map(|m| m.to_string()),
        excess,
    }
}

/// Excess of a k-geodetic digraph with minimum out-degree at least `d`:
/// its order minus the Moore bound for `(d, k)`.
pub fn excess(g: &Digraph, d: u32, k: u32) -> Result<Int, GeodecityError> {
    assert!(d >= 1 && k >= 1, "excess requires d >= 1 and k >= 1");
    for (vertex, heads) in (0..g.order()).map(|u| (u, g.out_neighbors(u))) {
        if heads.len() < d as usize {
            return Err(GeodecityError::DegreeTooLow {
                vertex,
                out_degree: heads.len(),
                required: d,
            });
        }
    }
    if let Some(witness) = count_walks_upto(g, k).first_saturated_pair() {
        return Err(GeodecityError::NotGeodetic { k, witness });
    }
    Ok(BigInt::from(g.order()) - BigInt::from(moore_bound(d, k)))
}

/// Outlier map of a diregular excess-one digraph: sends each vertex to the
/// unique vertex it cannot reach within `k` steps.
pub fn outlier_map(g: &Digraph, d: u32, k: u32) -> Result<Permutation, GeodecityError> {
    let (outd, ind) = g.degrees();
    for vertex in 0..g.order() {
        if outd[vertex] != d as usize || ind[vertex] != d as usize {
            return Err(GeodecityError::NotDiregular {
                vertex,
                d,
                out_degree: outd[vertex],
                in_degree: ind[vertex],
            });
        }
    }
    let eps = excess(g, d, k)?;
    if eps != Int::from(1) {
        return Err(GeodecityError::NotExcessOne { excess: eps });
    }
    let counts = count_walks_upto(g, k);
    let mut image = Vec::with_capacity(g.order());
    for u in 0..g.order() {
        let zeros: Vec<usize> = counts
            .row(u)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(v, _)| v)
            .collect();
        match zeros.as_slice() {
            [v] => image.push(*v),
            _ => {
                return Err(GeodecityError::NonUniqueOutlier {
                    vertex: u,
                    count: zeros.len(),
                })
            }
        }
    }
    Ok(Permutation::new(image).expect("outlier images are distinct in an excess-one digraph"))
}

/// Checks that `p` maps arcs to arcs; with `p` a bijection on the vertex
/// set this is exactly the automorphism condition. Returns the first arc
/// whose image is missing.
pub fn verify_automorphism(g: &Digraph, p: &Permutation) -> Result<(), (usize, usize)> {
    assert_eq!(p.len(), g.order(), "permutation degree must match order");
    for (u, v) in g.arcs() {
        if !g.has_arc(p.apply(u), p.apply(v)) {
            return Err((u, v));
        }
    }
    Ok(())
}
