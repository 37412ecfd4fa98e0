//! Adjacency-list digraphs: construction, arc-list parsing, degree
//! queries and all-pairs BFS distances.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Violation raised while inserting a single arc.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArcError {
    #[error("vertex {v} out of range for order {n}")]
    OutOfRange { v: usize, n: usize },
    #[error("loop at vertex {v}")]
    Loop { v: usize },
    #[error("duplicate arc {u} -> {v}")]
    Duplicate { u: usize, v: usize },
}

/// Violation raised while parsing the textual arc-list format.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArcListError {
    #[error("line {line}: expected {expected}, found {found:?}")]
    Malformed {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: {source}")]
    Arc { line: usize, source: ArcError },
}

/// Directed graph on vertices `0..n` without loops or parallel arcs.
///
/// Out-lists are kept sorted, so equality is structural and independent of
/// the order in which arcs were inserted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
}

impl Digraph {
    /// Arcless digraph of the given order.
    pub fn new(n: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); n],
        }
    }

    /// Builds a digraph from an explicit arc set.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self, ArcError> {
        let mut g = Digraph::new(n);
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Digraph::new(n);
        for u in 0..n {
            g.add_arc(u, (u + 1) % n).unwrap();
        }
        g
    }

    /// Inserts the arc `u -> v`, keeping the out-list of `u` sorted.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<(), ArcError> {
        let n = self.order();
        if u >= n {
            return Err(ArcError::OutOfRange { v: u, n });
        }
        if v >= n {
            return Err(ArcError::OutOfRange { v, n });
        }
        if u == v {
            return Err(ArcError::Loop { v });
        }
        match self.out[u].binary_search(&v) {
            Ok(_) => Err(ArcError::Duplicate { u, v }),
            Err(pos) => {
                self.out[u].insert(pos, v);
                Ok(())
            }
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.out.len()
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Sorted out-neighbourhood of `u`.
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Whether the arc `u -> v` is present.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in tail-major, head-ascending order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, heads)| heads.iter().map(move |&v| (u, v)))
    }

    /// Out-degree sequence.
    pub fn out_degrees(&self) -> Vec<usize> {
        self.out.iter().map(Vec::len).collect()
    }

    /// In-degree sequence.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.order()];
        for (_, v) in self.arcs() {
            indeg[v] += 1;
        }
        indeg
    }

    /// `(out_degrees, in_degrees)` in one pass over the arcs.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        (self.out_degrees(), self.in_degrees())
    }

    /// Whether every vertex has out-degree exactly `d`.
    pub fn is_out_regular(&self, d: u32) -> bool {
        self.out.iter().all(|heads| heads.len() == d as usize)
    }

    /// Whether every vertex has out-degree and in-degree exactly `d`.
    pub fn is_diregular(&self, d: u32) -> bool {
        self.is_out_regular(d) && self.in_degrees().iter().all(|&x| x == d as usize)
    }

    /// All-pairs shortest-path distances by BFS from every source.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.order();
        let mut dist = vec![None; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = Some(0);
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u].unwrap();
                for &v in &self.out[u] {
                    if row[v].is_none() {
                        row[v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    /// Serialises to the arc-list text format accepted by [`parse_arc_list`].
    pub fn to_arc_list(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.order()).unwrap();
        for (u, v) in self.arcs() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }
}

/// All-pairs distances; `None` marks an unreachable pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Option<u32>>,
}

impl DistanceMatrix {
    /// Distance from `u` to `v`, `None` if no directed path exists.
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.dist[u * self.n + v]
    }

    /// Matrix side length.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Distances from source `u`.
    pub fn row(&self, u: usize) -> &[Option<u32>] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }
}

/// Parses the arc-list format: lines starting with `#` and blank lines are
/// skipped, the first remaining line holds the vertex count, and every
/// following line holds one arc as `tail head`.
pub fn parse_arc_list(text: &str) -> Result<Digraph, ArcListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(ArcListError::Malformed {
        line: 1,
        expected: "vertex count",
        found: String::new(),
    })?;
    let n = parse_token(header, line, "vertex count")?;

    let mut g = Digraph::new(n);
    for (line, l) in lines {
        let mut tokens = l.split_whitespace();
        let u = parse_token(tokens.next().unwrap_or(""), line, "arc as `tail head`")?;
        let v = parse_token(tokens.next().unwrap_or(""), line, "arc as `tail head`")?;
        if tokens.next().is_some() {
            return Err(ArcListError::Malformed {
                line,
                expected: "arc as `tail head`",
                found: l.to_string(),
            });
        }
        g.add_arc(u, v)
            .map_err(|source| ArcListError::Arc { line, source })?;
    }
    Ok(g)
}

fn parse_token(token: &str, line: usize, expected: &'static str) -> Result<usize, ArcListError> {
    token.parse().map_err(|_| ArcListError::Malformed {
        line,
        expected,
        found: token.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Shortest walk length from `u` to `v` by explicit walk enumeration.
    fn brute_distance(g: &Digraph, u: usize, v: usize) -> Option<u32> {
        let mut frontier = vec![u];
        for len in 0..=g.order() as u32 {
            if frontier.contains(&v) {
                return Some(len);
            }
            frontier = frontier
                .iter()
                .flat_map(|&x| g.out_neighbors(x).iter().copied())
                .collect();
        }
        None
    }

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let mut g = Digraph::new(n);
                for u in 0..n {
                    for v in 0..n {
                        if u != v && bits[u * n + v] {
                            g.add_arc(u, v).unwrap();
                        }
                    }
                }
                g
            })
        })
    }

    #[test]
    fn parse_and_serialize_round_trip() {
        let text = "# diamond\n4\n0 1\n0 2\n1 3\n2 3\n";
        let g = parse_arc_list(text).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.arc_count(), 4);
        let again = parse_arc_list(&g.to_arc_list()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn parse_ignores_comments_blanks_and_arc_order() {
        let a = parse_arc_list("3\n0 1\n1 2\n").unwrap();
        let b = parse_arc_list("\n# c\n3\n\n1 2\n# c\n0 1\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_arc_list("2\n0 1\n0 x\n").unwrap_err();
        assert!(matches!(err, ArcListError::Malformed { line: 3, .. }));

        let err = parse_arc_list("2\n0 5\n").unwrap_err();
        assert_eq!(
            err,
            ArcListError::Arc {
                line: 2,
                source: ArcError::OutOfRange { v: 5, n: 2 }
            }
        );

        let err = parse_arc_list("2\n1 1\n").unwrap_err();
        assert_eq!(
            err,
            ArcListError::Arc {
                line: 2,
                source: ArcError::Loop { v: 1 }
            }
        );

        let err = parse_arc_list("2\n0 1\n0 1\n").unwrap_err();
        assert_eq!(
            err,
            ArcListError::Arc {
                line: 3,
                source: ArcError::Duplicate { u: 0, v: 1 }
            }
        );

        let err = parse_arc_list("2\n0 1 2\n").unwrap_err();
        assert!(matches!(err, ArcListError::Malformed { line: 2, .. }));
    }

    #[test]
    fn degrees_on_diamond() {
        let g = Digraph::from_arcs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let (outd, ind) = g.degrees();
        assert_eq!(outd, vec![2, 1, 1, 0]);
        assert_eq!(ind, vec![0, 1, 1, 2]);
        assert!(!g.is_out_regular(1));
        assert!(!g.is_diregular(1));
    }

    #[test]
    fn regularity_on_cycle() {
        let g = Digraph::cycle(5);
        assert!(g.is_out_regular(1));
        assert!(g.is_diregular(1));
        assert!(!g.is_out_regular(2));
    }

    #[test]
    fn distances_on_cycle_and_isolated_pair() {
        let g = Digraph::cycle(4);
        let d = g.distance_matrix();
        assert_eq!(d.get(0, 0), Some(0));
        assert_eq!(d.get(0, 3), Some(3));
        assert_eq!(d.get(3, 0), Some(1));

        let g = Digraph::new(2);
        let d = g.distance_matrix();
        assert_eq!(d.get(0, 1), None);
        assert_eq!(d.get(0, 0), Some(0));
    }

    proptest! {
        #[test]
        fn degree_sums_balance(g in arb_digraph(8)) {
            let (outd, ind) = g.degrees();
            prop_assert_eq!(outd.iter().sum::<usize>(), g.arc_count());
            prop_assert_eq!(ind.iter().sum::<usize>(), g.arc_count());
        }

        #[test]
        fn distance_matrix_matches_walk_enumeration(g in arb_digraph(6)) {
            let d = g.distance_matrix();
            for u in 0..g.order() {
                for v in 0..g.order() {
                    prop_assert_eq!(d.get(u, v), brute_distance(&g, u, v));
                }
            }
        }

        #[test]
        fn round_trip_preserves_arcs(g in arb_digraph(7)) {
            let again = parse_arc_list(&g.to_arc_list()).unwrap();
            prop_assert_eq!(g, again);
        }
    }
}
