//! Toolkit for k-geodetic digraphs near the directed Moore bound.
//!
//! A digraph is k-geodetic when every ordered pair of vertices is joined by
//! at most one directed walk of length at most k (counting the length-zero
//! walk, so in particular there are no closed walks that short). The order
//! of such a digraph with minimum out-degree d is bounded below by the
//! directed Moore bound M(d, k); the gap is called the excess.
//!
//! The crate provides exact machinery for studying digraphs whose excess is
//! small: walk-count verification, outlier maps and their orbit quotients,
//! spectral certificates over arbitrary-precision integers, parameter scans
//! that rule out excess one for almost all (d, k), structural filters for
//! the finitely many remaining pairs, and an exhaustive canonical search
//! for small geodetic cages.

pub mod canon;
pub mod certificates;
pub mod digraph;
pub mod geodecity;
pub mod linalg;
pub mod perm;
pub mod quotient;
pub mod search;

pub use digraph::{parse_arc_list, ArcListError, Digraph, DistanceMatrix};
pub use geodecity::{excess, is_k_geodetic, moore_bound, outlier_map, GeodecityReport};
pub use quotient::{quotient, QuotientPseudodigraph};

/// Exact integer scalar used by the arbitrary-precision linear algebra.
pub type Int = num_bigint::BigInt;

/// Exact rational scalar, used where normalisation forces denominators.
pub type Rat = num_rational::BigRational;

/// Dense matrix over [`Int`].
pub type IntMatrix = linalg::Matrix<Int>;

/// Dense matrix over [`Rat`].
pub type RatMatrix = linalg::Matrix<Rat>;

/// Polynomial over [`Int`], coefficients stored in ascending degree order.
pub type IntPolynomial = linalg::Polynomial<Int>;

/// Polynomial over [`Rat`].
pub type RatPolynomial = linalg::Polynomial<Rat>;
