//! Permutations, orbit partitions and the orbit-size census used by the
//! excess-one structure checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Violation raised while constructing a [`Permutation`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("image {image} out of range for degree {n}")]
    OutOfRange { image: usize, n: usize },
    #[error("image {image} occurs twice, not a bijection")]
    Repeated { image: usize },
}

/// Violation raised while constructing an [`OrbitPartition`] from classes.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("class {class} is empty")]
    EmptyClass { class: usize },
    #[error("vertex {vertex} out of range for order {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("vertex {vertex} occurs in more than one class")]
    Repeated { vertex: usize },
    #[error("vertex {vertex} not covered by any class")]
    Missing { vertex: usize },
}

/// Reason a permutation structure cannot belong to an excess-one digraph.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StructureViolation {
    #[error("empty permutation")]
    Empty,
    #[error("{count} fixed points; an outlier map has none")]
    FixedPoints { count: usize },
    #[error("all orbits have size at most two; some vertex must have order at least three")]
    NoLargeOrbit,
}

/// Bijection on `0..n`, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates that `image` is a bijection on `0..image.len()`.
    pub fn new(image: Vec<usize>) -> Result<Self, PermutationError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n {
                return Err(PermutationError::OutOfRange { image: v, n });
            }
            if seen[v] {
                return Err(PermutationError::Repeated { image: v });
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// Identity permutation on `0..n`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Degree of the permutation.
    pub fn len(&self) -> usize {
        self.image.len()
    }

    /// Whether the permutation acts on the empty set.
    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Image of `u`.
    pub fn apply(&self, u: usize) -> usize {
        self.image[u]
    }

    /// Image vector.
    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// Inverse permutation.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (u, &v) in self.image.iter().enumerate() {
            inv[v] = u;
        }
        Permutation { image: inv }
    }

    /// Composition `self . other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composing unequal degrees");
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    /// `e`-fold composition of the permutation with itself.
    pub fn pow(&self, e: usize) -> Self {
        let mut result = Permutation::identity(self.len());
        for _ in 0..e {
            result = self.compose(&result);
        }
        result
    }

    /// Cycle decomposition as an orbit partition: classes ordered by least
    /// member, each listed in traversal order from its least member.
    pub fn orbits(&self) -> OrbitPartition {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut class = vec![start];
            seen[start] = true;
            let mut v = self.apply(start);
            while v != start {
                seen[v] = true;
                class.push(v);
                v = self.apply(v);
            }
            classes.push(class);
        }
        OrbitPartition { n, classes }
    }
}

/// Partition of `0..n` into non-empty classes; the representative of each
/// class is its least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl OrbitPartition {
    /// Validates that `classes` are disjoint, non-empty and cover `0..n`.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut owner = vec![None; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(PartitionError::EmptyClass { class: c });
            }
            for &v in class {
                if v >= n {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
                if owner[v].is_some() {
                    return Err(PartitionError::Repeated { vertex: v });
                }
                owner[v] = Some(c);
            }
        }
        if let Some(vertex) = owner.iter().position(Option::is_none) {
            return Err(PartitionError::Missing { vertex });
        }
        Ok(OrbitPartition { n, classes })
    }

    /// Number of partitioned vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The classes, in stored order.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Members of class `i`.
    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    /// Index of the class containing `v`.
    pub fn class_of(&self, v: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&v))
            .expect("partition covers all vertices")
    }

    /// Class sizes, in class order.
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Least member of each class, in class order.
    pub fn representatives(&self) -> Vec<usize> {
        self.classes
            .iter()
            .map(|c| *c.iter().min().expect("classes are non-empty"))
            .collect()
    }

    /// Smallest class size; the index of the partition.
    pub fn min_class_size(&self) -> usize {
        self.sizes().into_iter().min().unwrap_or(0)
    }

    /// Census of class sizes.
    pub fn permutation_structure(&self) -> PermutationStructure {
        let mut counts = BTreeMap::new();
        for class in &self.classes {
            *counts.entry(class.len()).or_insert(0usize) += 1;
        }
        PermutationStructure {
            n: self.n,
            counts: counts.into_iter().collect(),
        }
    }
}

/// Orbit-size census `(m_1, ..., m_N)` stored sparsely: `counts` lists the
/// pairs `(j, m_j)` with `m_j > 0` in ascending `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationStructure {
    pub n: usize,
    pub counts: Vec<(usize, usize)>,
}

impl PermutationStructure {
    /// Builds a census directly from `(size, count)` pairs.
    pub fn from_counts(counts: &[(usize, usize)]) -> Self {
        let mut map = BTreeMap::new();
        for &(j, m) in counts {
            if m > 0 {
                *map.entry(j).or_insert(0usize) += m;
            }
        }
        let counts: Vec<(usize, usize)> = map.into_iter().collect();
        let n = counts.iter().map(|&(j, m)| j * m).sum();
        PermutationStructure { n, counts }
    }

    /// Number of orbits of size `j`.
    pub fn count(&self, j: usize) -> usize {
        self.counts
            .iter()
            .find(|&&(size, _)| size == j)
            .map_or(0, |&(_, m)| m)
    }

    /// Total orbit count.
    pub fn orbit_count(&self) -> usize {
        self.counts.iter().map(|&(_, m)| m).sum()
    }

    /// Total weight `sum of j * m_j`; equals the degree of the permutation.
    pub fn total(&self) -> usize {
        self.counts.iter().map(|&(j, m)| j * m).sum()
    }

    /// Distinct orbit sizes in ascending order.
    pub fn distinct_sizes(&self) -> Vec<usize> {
        self.counts.iter().map(|&(j, _)| j).collect()
    }

    /// Whether the census can belong to the outlier map of an excess-one
    /// digraph: no fixed points and at least one orbit of size three or
    /// more.
    pub fn validate_excess_one(&self) -> Result<(), StructureViolation> {
        if self.counts.is_empty() {
            return Err(StructureViolation::Empty);
        }
        let fixed = self.count(1);
        if fixed > 0 {
            return Err(StructureViolation::FixedPoints { count: fixed });
        }
        if !self.counts.iter().any(|&(j, _)| j >= 3) {
            return Err(StructureViolation::NoLargeOrbit);
        }
        Ok(())
    }
}
