//! Quotients of out-regular digraphs by vertex partitions, typically the
//! orbit partition of the outlier map of an excess-one digraph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificates::{CertificateReport, Witness};
use crate::digraph::Digraph;
use crate::geodecity::{count_walks_upto, MANY};
use crate::perm::OrbitPartition;
use crate::{Int, IntMatrix};

/// Ways a quotient can fail to build or validate.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuotientError {
    /// The digraph is not out-regular, so arc multiplicities from a single
    /// representative do not describe its classes.
    #[error("vertex {vertex} has out-degree {out_degree} but vertex 0 has {expected}")]
    NotOutRegular {
        vertex: usize,
        out_degree: usize,
        expected: usize,
    },
    /// A supplied multiplicity row has the wrong width.
    #[error("multiplicity row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    /// A supplied multiplicity row does not sum to the out-degree.
    #[error("multiplicity row {row} sums to {sum}, expected the out-degree {expected}")]
    RowSum { row: usize, sum: u64, expected: u64 },
    /// The class-size list does not match the matrix dimension.
    #[error("{got} class sizes supplied for a {expected}-class quotient")]
    SizeCount { got: usize, expected: usize },
}

/// A pseudodigraph on the classes of a partition: entry `(i, j)` counts the
/// arcs from the representative of class `i` into class `j`, so loops and
/// multiple arcs are allowed. Every row sums to the common out-degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPseudodigraph {
    w: usize,
    d: u64,
    mult: Vec<u64>,
    orbit_sizes: Vec<usize>,
    representatives: Vec<usize>,
}

impl QuotientPseudodigraph {
    /// Builds a quotient directly from a multiplicity matrix and class
    /// sizes, for synthetic inputs. Representatives are assigned as the
    /// least index of consecutive blocks of the stated sizes.
    pub fn from_parts(
        d: u64,
        rows: &[Vec<u64>],
        orbit_sizes: Vec<usize>,
    ) -> Result<Self, QuotientError> {
        let w = rows.len();
        if orbit_sizes.len() != w {
            return Err(QuotientError::SizeCount {
                got: orbit_sizes.len(),
                expected: w,
            });
        }
        let mut mult = Vec::with_capacity(w * w);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != w {
                return Err(QuotientError::RaggedRow {
                    row,
                    got: entries.len(),
                    expected: w,
                });
            }
            let sum: u64 = entries.iter().sum();
            if sum != d {
                return Err(QuotientError::RowSum {
                    row,
                    sum,
                    expected: d,
                });
            }
            mult.extend_from_slice(entries);
        }
        let mut representatives = Vec::with_capacity(w);
        let mut next = 0usize;
        for &size in &orbit_sizes {
            representatives.push(next);
            next += size;
        }
        Ok(QuotientPseudodigraph {
            w,
            d,
            mult,
            orbit_sizes,
            representatives,
        })
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.w
    }

    /// Common out-degree (row sum).
    pub fn degree(&self) -> u64 {
        self.d
    }

    /// Arc multiplicity from class `i` into class `j`.
    pub fn mult(&self, i: usize, j: usize) -> u64 {
        self.mult[i * self.w + j]
    }

    /// Sizes of the underlying classes.
    pub fn orbit_sizes(&self) -> &[usize] {
        &self.orbit_sizes
    }

    /// Representative vertex of each class.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Order of the underlying digraph (sum of class sizes).
    pub fn order(&self) -> usize {
        self.orbit_sizes.iter().sum()
    }

    /// The multiplicity matrix as an exact integer matrix.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.w, self.w, |i, j| Int::from(self.mult(i, j)))
    }

    /// Text form: a `w d` header line, then `w` rows of `w` multiplicities.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.w, self.d);
        for i in 0..self.w {
            let row: Vec<String> = (0..self.w).map(|j| self.mult(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Quotient of an out-regular digraph by a partition, using the least
/// vertex of each class as its representative.
pub fn quotient(
    g: &Digraph,
    part: &OrbitPartition,
) -> Result<QuotientPseudodigraph, QuotientError> {
    let representatives = part.representatives();
    quotient_with_reps(g, part, &representatives)
}

fn quotient_with_reps(
    g: &Digraph,
    part: &OrbitPartition,
    representatives: &[usize],
) -> Result<QuotientPseudodigraph, QuotientError> {
    let degrees = g.out_degrees();
    let expected = degrees.first().copied().unwrap_or(0);
    for (vertex, &out_degree) in degrees.iter().enumerate() {
        if out_degree != expected {
            return Err(QuotientError::NotOutRegular {
                vertex,
                out_degree,
                expected,
            });
        }
    }
    let w = part.class_count();
    let mut mult = vec![0u64; w * w];
    for (i, &rep) in representatives.iter().enumerate() {
        for &head in g.out_neighbors(rep) {
            mult[i * w + part.class_of(head)] += 1;
        }
    }
    Ok(QuotientPseudodigraph {
        w,
        d: expected as u64,
        mult,
        orbit_sizes: part.sizes(),
        representatives: representatives.to_vec(),
    })
}

/// Checks the walk pattern that makes the quotient of an excess-one digraph
/// meaningful: from each class representative there is exactly one walk of
/// length at most `k` to every vertex of every other class, and within its
/// own class exactly one walk to every member except a single unreachable
/// vertex (the representative's outlier).
pub fn check_representative_walks(g: &Digraph, k: u32, part: &OrbitPartition) -> CertificateReport {
    let inputs = vec![
        ("order".to_string(), g.order().to_string()),
        ("k".to_string(), k.to_string()),
        ("classes".to_string(), part.class_count().to_string()),
    ];
    let counts = count_walks_upto(g, k);
    let reps = part.representatives();
    for (class, &rep) in reps.iter().enumerate() {
        let mut unreachable = Vec::new();
        for target in 0..g.order() {
            let count = counts.get(rep, target);
            if part.class_of(target) != class {
                if count != 1 {
                    return CertificateReport::fail(
                        "representative_walks",
                        inputs,
                        Witness::Walk {
                            from: rep,
                            to: target,
                            count,
                            expected: "exactly one walk of length at most k into another class"
                                .to_string(),
                        },
                    );
                }
            } else if count >= MANY {
                return CertificateReport::fail(
                    "representative_walks",
                    inputs,
                    Witness::Walk {
                        from: rep,
                        to: target,
                        count,
                        expected: "at most one walk of length at most k within the class"
                            .to_string(),
                    },
                );
            } else if count == 0 {
                unreachable.push(target);
            }
        }
        if unreachable.len() != 1 {
            return CertificateReport::fail(
                "representative_walks",
                inputs,
                Witness::Text {
                    detail: format!(
                        "class {class} representative {rep} has {} unreachable members of its \
                         own class within {k} steps; expected exactly one (its outlier)",
                        unreachable.len()
                    ),
                },
            );
        }
    }
    CertificateReport::pass("representative_walks", inputs)
}

/// Checks that the quotient does not depend on the choice of class
/// representatives: rebuilds it from shifted representative choices and
/// accepts when each variant is isomorphic to the default as an
/// arc-weighted pseudodigraph (permutation search over the classes, so
/// intended for small class counts).
pub fn representative_invariance(g: &Digraph, part: &OrbitPartition, trials: usize) -> bool {
    let Ok(base) = quotient(g, part) else {
        return false;
    };
    for trial in 1..=trials {
        let reps: Vec<usize> = part
            .classes()
            .iter()
            .map(|class| {
                let mut members = class.clone();
                members.sort_unstable();
                members[trial % members.len()]
            })
            .collect();
        let Ok(alt) = quotient_with_reps(g, part, &reps) else {
            return false;
        };
        if !weighted_isomorphic(&base, &alt) {
            return false;
        }
    }
    true
}

/// Searches for a class relabelling carrying one multiplicity matrix onto
/// the other while preserving class sizes.
fn weighted_isomorphic(a: &QuotientPseudodigraph, b: &QuotientPseudodigraph) -> bool {
    if a.w != b.w || a.d != b.d {
        return false;
    }
    let w = a.w;
    let mut image = vec![usize::MAX; w];
    let mut used = vec![false; w];
    fn extend(
        a: &QuotientPseudodigraph,
        b: &QuotientPseudodigraph,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        let w = a.w;
        if next == w {
            return true;
        }
        for candidate in 0..w {
            if used[candidate] || a.orbit_sizes[next] != b.orbit_sizes[candidate] {
                continue;
            }
            let consistent = (0..=next).all(|prev| {
                let img_prev = if prev == next { candidate } else { image[prev] };
                a.mult(next, prev) == b.mult(candidate, img_prev)
                    && a.mult(prev, next) == b.mult(img_prev, candidate)
            });
            if !consistent {
                continue;
            }
            image[next] = candidate;
            used[candidate] = true;
            if extend(a, b, image, used, next + 1) {
                return true;
            }
            image[next] = usize::MAX;
            used[candidate] = false;
        }
        false
    }
    extend(a, b, &mut image, &mut used, 0)
}

/// Witness that a partition fails to be equitable: two vertices of the same
/// class with different arc counts into some target class.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error(
    "vertices {vertex_a} and {vertex_b} of class {class} send {count_a} and {count_b} \
     arcs into class {target}"
)]
pub struct EquitableViolation {
    pub class: usize,
    pub target: usize,
    pub vertex_a: usize,
    pub vertex_b: usize,
    pub count_a: usize,
    pub count_b: usize,
}

/// Checks that the partition is equitable for out-arcs: within each class,
/// every vertex sends the same number of arcs into each class.
pub fn equitable_check(g: &Digraph, part: &OrbitPartition) -> Result<(), EquitableViolation> {
    let w = part.class_count();
    let profile = |v: usize| {
        let mut counts = vec![0usize; w];
        for &head in g.out_neighbors(v) {
            counts[part.class_of(head)] += 1;
        }
        counts
    };
    for (class, members) in part.classes().iter().enumerate() {
        let first = members[0];
        let reference = profile(first);
        for &member in &members[1..] {
            let counts = profile(member);
            if let Some(target) = (0..w).find(|&j| counts[j] != reference[j]) {
                return Err(EquitableViolation {
                    class,
                    target,
                    vertex_a: first,
                    vertex_b: member,
                    count_a: reference[target],
                    count_b: counts[target],
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn rotation(n: usize, shift: usize) -> Permutation {
        Permutation::new((0..n).map(|v| (v + shift) % n).collect()).unwrap()
    }

    fn complete_digraph(n: usize) -> Digraph {
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    #[test]
    fn cycle_with_single_orbit_quotients_to_a_loop() {
        let g = Digraph::cycle(7);
        let part = rotation(7, 6).orbits();
        let q = quotient(&g, &part).unwrap();
        assert_eq!(q.class_count(), 1);
        assert_eq!(q.degree(), 1);
        assert_eq!(q.mult(0, 0), 1);
        assert_eq!(q.orbit_sizes(), &[7]);
        assert_eq!(q.representatives(), &[0]);
        assert_eq!(q.order(), 7);
        assert_eq!(q.to_text(), "1 1\n1\n");
    }

    #[test]
    fn six_cycle_parity_classes_alternate() {
        let g = Digraph::cycle(6);
        // Orbits of the square of the predecessor map: {0,2,4} and {1,3,5}.
        let part = rotation(6, 4).orbits();
        assert_eq!(part.classes(), &[vec![0, 4, 2], vec![1, 5, 3]]);
        let q = quotient(&g, &part).unwrap();
        assert_eq!(q.class_count(), 2);
        assert_eq!(
            [q.mult(0, 0), q.mult(0, 1), q.mult(1, 0), q.mult(1, 1)],
            [0, 1, 1, 0]
        );
        assert_eq!(q.to_text(), "2 1\n0 1\n1 0\n");
    }

    #[test]
    fn singleton_classes_recover_the_adjacency_matrix() {
        let g = complete_digraph(3);
        let part = Permutation::identity(3).orbits();
        let q = quotient(&g, &part).unwrap();
        assert_eq!(q.degree(), 2);
        let m = q.adjacency_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let expected = Int::from(u32::from(i != j));
                assert_eq!(m.get(i, j), &expected);
            }
        }
    }

    #[test]
    fn irregular_digraph_is_rejected() {
        let g = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let part = Permutation::identity(3).orbits();
        assert_eq!(
            quotient(&g, &part),
            Err(QuotientError::NotOutRegular {
                vertex: 2,
                out_degree: 0,
                expected: 1
            })
        );
    }

    #[test]
    fn synthetic_construction_validates_shape() {
        let q = QuotientPseudodigraph::from_parts(3, &[vec![1, 2], vec![2, 1]], vec![4, 5]);
        let q = q.unwrap();
        assert_eq!(q.representatives(), &[0, 4]);
        assert_eq!(q.order(), 9);

        assert_eq!(
            QuotientPseudodigraph::from_parts(3, &[vec![1, 1], vec![2, 1]], vec![4, 5]),
            Err(QuotientError::RowSum {
                row: 0,
                sum: 2,
                expected: 3
            })
        );
        assert_eq!(
            QuotientPseudodigraph::from_parts(3, &[vec![1, 2], vec![3]], vec![4, 5]),
            Err(QuotientError::RaggedRow {
                row: 1,
                got: 1,
                expected: 2
            })
        );
        assert_eq!(
            QuotientPseudodigraph::from_parts(3, &[vec![3]], vec![1, 1]),
            Err(QuotientError::SizeCount {
                got: 2,
                expected: 1
            })
        );
    }

    #[test]
    fn representative_walks_pass_on_an_excess_one_cycle() {
        let g = Digraph::cycle(7);
        let part = rotation(7, 6).orbits();
        let report = check_representative_walks(&g, 5, &part);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.witness, None);
    }

    #[test]
    fn representative_walks_fail_without_an_outlier() {
        let g = complete_digraph(3);
        let part = Permutation::identity(3).orbits();
        let report = check_representative_walks(&g, 1, &part);
        assert!(!report.pass);
        assert!(matches!(report.witness, Some(Witness::Text { .. })));
    }

    #[test]
    fn representative_walks_fail_on_a_non_geodetic_digraph() {
        let g = Digraph::from_arcs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let part = Permutation::identity(4).orbits();
        let report = check_representative_walks(&g, 2, &part);
        assert!(!report.pass);
        assert!(matches!(
            report.witness,
            Some(Witness::Walk { from: 0, to: 3, count: MANY, .. })
        ));
    }

    #[test]
    fn representative_choice_does_not_change_orbit_quotients() {
        let g = Digraph::cycle(7);
        assert!(representative_invariance(&g, &rotation(7, 6).orbits(), 3));

        let g6 = Digraph::cycle(6);
        assert!(representative_invariance(&g6, &rotation(6, 4).orbits(), 4));
    }

    #[test]
    fn representative_choice_matters_for_an_unrelated_partition() {
        // {0,1,4} / {2,3,5} is not closed under any rotation of the 6-cycle,
        // and shifting representatives flips the quotient between a pair of
        // loops and a 2-cycle, which no class relabelling can repair.
        let g = Digraph::cycle(6);
        let part = OrbitPartition::from_classes(6, vec![vec![0, 1, 4], vec![2, 3, 5]]).unwrap();
        assert!(!representative_invariance(&g, &part, 2));
    }

    #[test]
    fn equitable_check_accepts_rotation_orbits() {
        for n in 2..=9usize {
            for shift in 1..n {
                let g = Digraph::cycle(n);
                let part = rotation(n, shift).orbits();
                assert_eq!(equitable_check(&g, &part), Ok(()), "n={n} shift={shift}");
            }
        }
    }

    #[test]
    fn equitable_check_reports_a_vertex_pair() {
        let g = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let part = OrbitPartition::from_classes(3, vec![vec![0, 2], vec![1]]).unwrap();
        let violation = equitable_check(&g, &part).unwrap_err();
        assert_eq!(
            violation,
            EquitableViolation {
                class: 0,
                target: 1,
                vertex_a: 0,
                vertex_b: 2,
                count_a: 1,
                count_b: 0
            }
        );
    }
}
