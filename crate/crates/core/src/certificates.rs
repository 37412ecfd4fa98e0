//! Checkable certificates for excess-one digraph quotients: the walk-count
//! matrix identity, the characteristic-polynomial form, trace identities
//! and bounds, the feasibility inequalities with their exceptional-pair
//! scan, and the structural case filters that rule the survivors out.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodecity::moore_bound;
use crate::linalg::Polynomial;
use crate::perm::PermutationStructure;
use crate::quotient::QuotientPseudodigraph;
use crate::{Int, IntMatrix, IntPolynomial};

/// Structured counterexample carried by a failing certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A matrix identity fails at one entry.
    MatrixEntry {
        row: usize,
        col: usize,
        got: String,
        want: String,
    },
    /// A trace has the wrong value at one power.
    Trace { power: u32, got: String, want: String },
    /// A polynomial differs from its expected form.
    Polynomial { got: String, want: String },
    /// A walk count between two vertices is off.
    Walk {
        from: usize,
        to: usize,
        count: u8,
        expected: String,
    },
    /// An inequality fails, `lhs > rhs`.
    Bound {
        name: String,
        lhs: String,
        rhs: String,
    },
    /// A required divisibility fails.
    NotDivisible {
        name: String,
        value: String,
        modulus: String,
    },
    /// Free-form diagnostic.
    Text { detail: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::MatrixEntry { row, col, got, want } => {
                write!(f, "entry ({row}, {col}) is {got}, expected {want}")
            }
            Witness::Trace { power, got, want } => {
                write!(f, "trace of the {power}-th power is {got}, expected {want}")
            }
            Witness::Polynomial { got, want } => {
                write!(f, "polynomial is {got}, expected {want}")
            }
            Witness::Walk {
                from,
                to,
                count,
                expected,
            } => write!(f, "{count} walks from {from} to {to}; expected {expected}"),
            Witness::Bound { name, lhs, rhs } => {
                write!(f, "bound {name} fails: {lhs} > {rhs}")
            }
            Witness::NotDivisible {
                name,
                value,
                modulus,
            } => write!(f, "{name} = {value} is not divisible by {modulus}"),
            Witness::Text { detail } => write!(f, "{detail}"),
        }
    }
}

/// Outcome of a single certificate check, with the inputs echoed so the
/// report is self-contained. A failing report always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub check: String,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub inputs: Vec<(String, String)>,
}

impl CertificateReport {
    /// A passing report.
    pub fn pass(check: &str, inputs: Vec<(String, String)>) -> Self {
        CertificateReport {
            check: check.to_string(),
            pass: true,
            witness: None,
            inputs,
        }
    }

    /// A failing report with its counterexample.
    pub fn fail(check: &str, inputs: Vec<(String, String)>, witness: Witness) -> Self {
        CertificateReport {
            check: check.to_string(),
            pass: false,
            witness: Some(witness),
            inputs,
        }
    }

    /// Human-readable `key = value` rendering, one line per field.
    pub fn to_key_value_text(&self) -> String {
        let mut out = format!("check = {}\npass = {}\n", self.check, self.pass);
        for (key, value) in &self.inputs {
            out.push_str(&format!("{key} = {value}\n"));
        }
        if let Some(witness) = &self.witness {
            out.push_str(&format!("witness = {witness}\n"));
        }
        out
    }
}

/// The polynomial `2 + x + ... + x^k`, whose powers make up the non-trivial
/// spectral factor of valid quotient matrices.
pub fn spectral_factor(k: u32) -> IntPolynomial {
    Polynomial::geometric(k).add(&Polynomial::constant(Int::from(1)))
}

/// Expected traces of the first `k - 1` powers of a valid quotient matrix:
/// `d^l - a` for `l = 1..k-1`.
pub fn expected_traces(d: u32, k: u32, a: u64) -> Vec<Int> {
    let mut power = Int::from(1);
    (1..k)
        .map(|_| {
            power *= Int::from(d);
            power.clone() - Int::from(a)
        })
        .collect()
}

fn quotient_inputs(q: &QuotientPseudodigraph, k: u32) -> Vec<(String, String)> {
    let w = q.class_count() as u64;
    let mut inputs = vec![
        ("d".to_string(), q.degree().to_string()),
        ("k".to_string(), k.to_string()),
        ("w".to_string(), w.to_string()),
        ("order".to_string(), q.order().to_string()),
    ];
    if w >= 1 && (w - 1).is_multiple_of(u64::from(k)) {
        inputs.push(("a".to_string(), ((w - 1) / u64::from(k)).to_string()));
    }
    inputs
}

/// Verifies the walk-count identity of a valid quotient: the sum of the
/// first `k` powers of the multiplicity matrix (including the zeroth) must
/// equal the matrix whose `j`-th column is constantly the size of class `j`,
/// minus the identity.
pub fn check_walk_identity(q: &QuotientPseudodigraph, k: u32) -> CertificateReport {
    walk_identity_report(&q.adjacency_matrix(), q.orbit_sizes(), k, quotient_inputs(q, k))
}

/// Matrix-level form of [`check_walk_identity`] for synthetic inputs.
pub fn walk_identity_report(
    m: &IntMatrix,
    orbit_sizes: &[usize],
    k: u32,
    inputs: Vec<(String, String)>,
) -> CertificateReport {
    const CHECK: &str = "walk_identity";
    let w = m.rows();
    if orbit_sizes.len() != w {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::Text {
                detail: format!(
                    "matrix is {w} x {w} but {} class sizes were supplied",
                    orbit_sizes.len()
                ),
            },
        );
    }
    let sum = match m.geometric_sum(k) {
        Ok(sum) => sum,
        Err(e) => {
            return CertificateReport::fail(
                CHECK,
                inputs,
                Witness::Text {
                    detail: e.to_string(),
                },
            )
        }
    };
    for i in 0..w {
        for (j, &size) in orbit_sizes.iter().enumerate() {
            let want = Int::from(size) - Int::from(u32::from(i == j));
            if sum.get(i, j) != &want {
                return CertificateReport::fail(
                    CHECK,
                    inputs,
                    Witness::MatrixEntry {
                        row: i,
                        col: j,
                        got: sum.get(i, j).to_string(),
                        want: want.to_string(),
                    },
                );
            }
        }
    }
    CertificateReport::pass(CHECK, inputs)
}

/// Verifies that the characteristic polynomial of the quotient matrix is
/// `(x - d) * (2 + x + ... + x^k)^((w-1)/k)`, checking first that `k`
/// divides `w - 1`.
pub fn check_charpoly_form(q: &QuotientPseudodigraph, k: u32) -> CertificateReport {
    charpoly_form_report(
        &q.adjacency_matrix(),
        q.degree(),
        k,
        quotient_inputs(q, k),
    )
}

/// Matrix-level form of [`check_charpoly_form`] for synthetic inputs.
pub fn charpoly_form_report(
    m: &IntMatrix,
    d: u64,
    k: u32,
    inputs: Vec<(String, String)>,
) -> CertificateReport {
    const CHECK: &str = "charpoly_form";
    let w = m.rows() as u64;
    if w == 0 || !(w - 1).is_multiple_of(u64::from(k)) {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::NotDivisible {
                name: "w - 1".to_string(),
                value: w.wrapping_sub(1).to_string(),
                modulus: k.to_string(),
            },
        );
    }
    let exponent = ((w - 1) / u64::from(k)) as u32;
    let want = Polynomial::new(vec![-Int::from(d), Int::from(1)])
        .mul(&spectral_factor(k).pow(exponent));
    let got = m.char_poly().expect("adjacency matrix is square");
    if got != want {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::Polynomial {
                got: got.to_string(),
                want: want.to_string(),
            },
        );
    }
    CertificateReport::pass(CHECK, inputs)
}

/// Verifies the trace identities of a valid quotient: with `a = (w-1)/k`,
/// the trace of the `l`-th power must equal `d^l - a` for `1 <= l <= k-1`,
/// and the parameters must satisfy `a <= d` and `w <= 1 + dk`.
pub fn check_trace_identities(q: &QuotientPseudodigraph, k: u32) -> CertificateReport {
    trace_identities_report(
        &q.adjacency_matrix(),
        q.degree(),
        k,
        quotient_inputs(q, k),
    )
}

/// Matrix-level form of [`check_trace_identities`] for synthetic inputs.
pub fn trace_identities_report(
    m: &IntMatrix,
    d: u64,
    k: u32,
    inputs: Vec<(String, String)>,
) -> CertificateReport {
    const CHECK: &str = "trace_identities";
    let w = m.rows() as u64;
    if w == 0 || !(w - 1).is_multiple_of(u64::from(k)) {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::NotDivisible {
                name: "w - 1".to_string(),
                value: w.wrapping_sub(1).to_string(),
                modulus: k.to_string(),
            },
        );
    }
    let a = (w - 1) / u64::from(k);
    if a > d {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::Bound {
                name: "a <= d".to_string(),
                lhs: a.to_string(),
                rhs: d.to_string(),
            },
        );
    }
    if w > 1 + d * u64::from(k) {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::Bound {
                name: "w <= 1 + dk".to_string(),
                lhs: w.to_string(),
                rhs: (1 + d * u64::from(k)).to_string(),
            },
        );
    }
    let mut power = IntMatrix::identity(m.rows());
    let mut d_power = Int::from(1);
    for l in 1..k {
        power = power.mul(m).expect("square by construction");
        d_power *= Int::from(d);
        let got = power.trace().expect("square by construction");
        let want = d_power.clone() - Int::from(a);
        if got != want {
            return CertificateReport::fail(
                CHECK,
                inputs,
                Witness::Trace {
                    power: l,
                    got: got.to_string(),
                    want: want.to_string(),
                },
            );
        }
    }
    CertificateReport::pass(CHECK, inputs)
}

/// Verifies the trace bound: the summed traces of the first `floor(k/2)`
/// positive powers must not exceed `floor(k/2) * w`.
pub fn check_trace_bound(q: &QuotientPseudodigraph, k: u32) -> CertificateReport {
    trace_bound_report(&q.adjacency_matrix(), k, quotient_inputs(q, k))
}

/// Matrix-level form of [`check_trace_bound`] for synthetic inputs.
pub fn trace_bound_report(
    m: &IntMatrix,
    k: u32,
    inputs: Vec<(String, String)>,
) -> CertificateReport {
    const CHECK: &str = "trace_bound";
    let half = k / 2;
    let mut sum = Int::from(0);
    let mut power = IntMatrix::identity(m.rows());
    for _ in 1..=half {
        power = power.mul(m).expect("square by construction");
        sum += power.trace().expect("square by construction");
    }
    let limit = Int::from(half) * Int::from(m.rows());
    if sum > limit {
        return CertificateReport::fail(
            CHECK,
            inputs,
            Witness::Bound {
                name: "trace sum <= floor(k/2) * w".to_string(),
                lhs: sum.to_string(),
                rhs: limit.to_string(),
            },
        );
    }
    CertificateReport::pass(CHECK, inputs)
}

/// Left- and right-hand sides of the parameterised feasibility inequality:
/// `d + ... + d^floor(k/2) - floor(k/2) * a` versus `floor(k/2) * (1 + ak)`.
pub fn inequality_one_parts(d: u32, k: u32, a: u64) -> (Int, Int) {
    let half = k / 2;
    let mut lhs = Int::from(0);
    let mut power = Int::from(1);
    for _ in 1..=half {
        power *= Int::from(d);
        lhs += &power;
    }
    lhs -= Int::from(half) * Int::from(a);
    let rhs = Int::from(half) * (Int::from(1) + Int::from(a) * Int::from(k));
    (lhs, rhs)
}

/// The parameterised feasibility inequality; excess-one digraphs force it
/// to hold for the quotient parameter `a`.
pub fn inequality_one(d: u32, k: u32, a: u64) -> bool {
    let (lhs, rhs) = inequality_one_parts(d, k, a);
    lhs <= rhs
}

/// The parameterised feasibility inequality as a certificate, with both
/// sides echoed.
pub fn inequality_one_report(d: u32, k: u32, a: u64) -> CertificateReport {
    let (lhs, rhs) = inequality_one_parts(d, k, a);
    let inputs = vec![
        ("d".to_string(), d.to_string()),
        ("k".to_string(), k.to_string()),
        ("a".to_string(), a.to_string()),
        ("lhs".to_string(), lhs.to_string()),
        ("rhs".to_string(), rhs.to_string()),
    ];
    if lhs <= rhs {
        CertificateReport::pass("inequality_one", inputs)
    } else {
        CertificateReport::fail(
            "inequality_one",
            inputs,
            Witness::Bound {
                name: "inequality (1)".to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            },
        )
    }
}

/// Left- and right-hand sides of the parameter-free feasibility inequality:
/// `d + ... + d^floor(k/2)` versus `floor(k/2) * (1 + d + dk)`.
pub fn inequality_two_parts(d: u32, k: u32) -> (Int, Int) {
    let half = k / 2;
    let mut lhs = Int::from(0);
    let mut power = Int::from(1);
    for _ in 1..=half {
        power *= Int::from(d);
        lhs += &power;
    }
    let rhs = Int::from(half) * (Int::from(1) + Int::from(d) + Int::from(d) * Int::from(k));
    (lhs, rhs)
}

/// The parameter-free feasibility inequality. It holds if and only if the
/// parameterised inequality holds for some `a` between 0 and `d`: the
/// left side of that inequality falls and the right side grows as `a`
/// grows, so `a = d` is the easiest case and substituting it gives exactly
/// this inequality.
pub fn inequality_two(d: u32, k: u32) -> bool {
    let (lhs, rhs) = inequality_two_parts(d, k);
    lhs <= rhs
}

const MIN_D_MAX: u32 = 12;
const MIN_K_MAX: u32 = 10;

/// Ways the exceptional-pair scan can fail to certify its window.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScanError {
    /// The requested window cannot contain all known surviving pairs.
    #[error(
        "scan window (d_max = {d_max}, k_max = {k_max}) is too small; \
         need d_max >= {MIN_D_MAX} and k_max >= {MIN_K_MAX}"
    )]
    WindowTooSmall { d_max: u32, k_max: u32 },
    /// A pair on the window boundary still satisfies the inequality, so a
    /// larger window could contain more pairs.
    #[error(
        "pair (d = {d}, k = {k}) on the window boundary satisfies the feasibility \
         inequality; a larger window could contain further pairs"
    )]
    PossibleTruncation { d: u32, k: u32 },
    /// Feasibility stopped being monotone in `d`, so the windowed scan
    /// cannot certify completeness.
    #[error(
        "feasibility is not monotone in d at (d = {d}, k = {k}); the windowed \
         scan cannot certify completeness"
    )]
    NotMonotone { d: u32, k: u32 },
}

/// Scans `d` in `[3, d_max]` and `k` in `[5, k_max]` for the pairs where
/// the parameter-free feasibility inequality still holds — the pairs that
/// survive the general spectral argument and need individual structural
/// treatment. The result is sorted by `(k, d)`.
///
/// The scan certifies that the window saw everything: for each `k`,
/// feasibility must be monotone in `d` (once it fails it stays failing),
/// and no surviving pair may touch the window boundary. Feasibility is not
/// monotone in `k` for fixed `d` — it fails at `(3, 8)` yet holds at
/// `(3, 9)` — so no such shortcut is applied across `k`.
pub fn exceptional_pairs(d_max: u32, k_max: u32) -> Result<Vec<(u32, u32)>, ScanError> {
    if d_max < MIN_D_MAX || k_max < MIN_K_MAX {
        return Err(ScanError::WindowTooSmall { d_max, k_max });
    }
    let mut pairs = Vec::new();
    for k in 5..=k_max {
        let mut failed_at: Option<u32> = None;
        for d in 3..=d_max {
            if inequality_two(d, k) {
                if let Some(prev) = failed_at {
                    return Err(ScanError::NotMonotone { d: prev, k });
                }
                if d == d_max || k == k_max {
                    return Err(ScanError::PossibleTruncation { d, k });
                }
                pairs.push((d, k));
            } else if failed_at.is_none() {
                failed_at = Some(d);
            }
        }
    }
    pairs.sort_by_key(|&(d, k)| (k, d));
    Ok(pairs)
}

/// CSV table of the surviving pairs with the two sides of the feasibility
/// inequality, columns `d,k,lhs,rhs`, rows sorted by `(k, d)`.
pub fn exceptional_pairs_csv(d_max: u32, k_max: u32) -> Result<String, ScanError> {
    let mut out = String::from("d,k,lhs,rhs\n");
    for (d, k) in exceptional_pairs(d_max, k_max)? {
        let (lhs, rhs) = inequality_two_parts(d, k);
        out.push_str(&format!("{d},{k},{lhs},{rhs}\n"));
    }
    Ok(out)
}

/// Structural family of a hypothetical excess-one digraph, by the fixed
/// points of its non-identity automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructuralCase {
    /// Every outlier orbit has the same size.
    OutlierRegular,
    /// The minimum-order vertices induce a cycle of length `k + 2`.
    TypeA,
    /// The outlier map contains exactly one transposition.
    TypeB,
}

impl fmt::Display for StructuralCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StructuralCase::OutlierRegular => "outlier-regular",
            StructuralCase::TypeA => "type-a",
            StructuralCase::TypeB => "type-b",
        };
        write!(f, "{name}")
    }
}

/// One parameter combination examined by a structural filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub params: Vec<(String, String)>,
    pub accepted: bool,
    pub reason: String,
}

/// Full audit trail of a structural filter: every candidate examined, the
/// verdict, and the satisfying tuple when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralCaseReport {
    pub case: StructuralCase,
    pub inputs: Vec<(String, String)>,
    pub candidates: Vec<CandidateRecord>,
    pub feasible: bool,
    pub witness: Option<Vec<(String, String)>>,
}

impl StructuralCaseReport {
    fn new(case: StructuralCase, inputs: Vec<(String, String)>) -> Self {
        StructuralCaseReport {
            case,
            inputs,
            candidates: Vec::new(),
            feasible: false,
            witness: None,
        }
    }

    fn record(&mut self, params: Vec<(String, String)>, result: Result<(), String>) {
        let (accepted, reason) = match result {
            Ok(()) => (true, "all conditions hold".to_string()),
            Err(reason) => (false, reason),
        };
        if accepted && !self.feasible {
            self.feasible = true;
            self.witness = Some(params.clone());
        }
        self.candidates.push(CandidateRecord {
            params,
            accepted,
            reason,
        });
    }

    /// Human-readable `key = value` rendering with one line per candidate.
    pub fn to_key_value_text(&self) -> String {
        let mut out = format!("case = {}\nfeasible = {}\n", self.case, self.feasible);
        for (key, value) in &self.inputs {
            out.push_str(&format!("{key} = {value}\n"));
        }
        for candidate in &self.candidates {
            let params: Vec<String> = candidate
                .params
                .iter()
                .map(|(k, v)| format!("{k} = {v}"))
                .collect();
            out.push_str(&format!(
                "candidate [{}]: {} ({})\n",
                params.join(", "),
                if candidate.accepted { "accepted" } else { "rejected" },
                candidate.reason
            ));
        }
        out
    }
}

/// Ascending positive divisors of `n`.
fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Order forced by the excess-one hypothesis: the Moore bound plus one.
pub fn excess_one_order(d: u32, k: u32) -> Int {
    Int::from(moore_bound(d, k)) + Int::from(1)
}

fn filter_inputs(d: u32, k: u32, n: &Int) -> Vec<(String, String)> {
    vec![
        ("d".to_string(), d.to_string()),
        ("k".to_string(), k.to_string()),
        ("order".to_string(), n.to_string()),
    ]
}

/// Tests whether an excess-one digraph of order `M(d,k) + 1` whose outlier
/// orbits all share one size `w = N / omega` can satisfy the quotient
/// constraints: `omega` must divide `N`, `k` must divide `w - 1`, the
/// resulting `a` must be at most `d`, and the feasibility inequality must
/// hold for that `a`. Every divisor `omega >= 2` of `N` is examined.
pub fn outlier_regular_filter(d: u32, k: u32) -> StructuralCaseReport {
    let n = excess_one_order(d, k);
    let mut report = StructuralCaseReport::new(
        StructuralCase::OutlierRegular,
        filter_inputs(d, k, &n),
    );
    if let Some(n_small) = n.to_u64() {
        for omega in divisors(n_small).into_iter().filter(|&x| x >= 2) {
            let w = n_small / omega;
            let params = vec![
                ("omega".to_string(), omega.to_string()),
                ("w".to_string(), w.to_string()),
            ];
            report.record(params, outlier_regular_candidate(d, k, w));
        }
    } else {
        // Order too large for divisor enumeration; sweep the finitely many
        // admissible a instead (equivalent: w = 1 + ak must divide N).
        for a in 0..=u64::from(d) {
            let w = 1 + a * u64::from(k);
            let params = vec![
                ("a".to_string(), a.to_string()),
                ("w".to_string(), w.to_string()),
            ];
            let result = if (&n % Int::from(w)).is_zero() {
                if (&n / Int::from(w)) < Int::from(2) {
                    Err("omega = N / w is below 2".to_string())
                } else if inequality_one(d, k, a) {
                    Ok(())
                } else {
                    let (lhs, rhs) = inequality_one_parts(d, k, a);
                    Err(format!("feasibility inequality fails: {lhs} > {rhs}"))
                }
            } else {
                Err(format!("w = {w} does not divide the order"))
            };
            report.record(params, result);
        }
    }
    report
}

fn outlier_regular_candidate(d: u32, k: u32, w: u64) -> Result<(), String> {
    if w < 1 || !(w - 1).is_multiple_of(u64::from(k)) {
        return Err(format!("w - 1 = {} is not divisible by k = {k}", w - 1));
    }
    let a = (w - 1) / u64::from(k);
    if a > u64::from(d) {
        return Err(format!("a = {a} exceeds d = {d}"));
    }
    if !inequality_one(d, k, a) {
        let (lhs, rhs) = inequality_one_parts(d, k, a);
        return Err(format!(
            "feasibility inequality fails for a = {a}: {lhs} > {rhs}"
        ));
    }
    Ok(())
}

/// Tests whether an excess-one digraph whose minimum-order vertices induce
/// a `(k+2)`-cycle can exist at order `M(d,k) + 1`. The orbit sizes are
/// then `k + 2` and a single larger length `l` dividing `(k+2)(d-1)`, with
/// `a = (N - k - 2) / (kl)` a positive integer at most `d`; the report also
/// echoes the resulting global bound `N <= k + 2 + k(k+2)(d-1)d`.
pub fn type_a_filter(d: u32, k: u32) -> StructuralCaseReport {
    let n = excess_one_order(d, k);
    let base = u64::from(k + 2) * u64::from(d - 1);
    let bound = Int::from(k + 2) + Int::from(k) * Int::from(base) * Int::from(d);
    let mut inputs = filter_inputs(d, k, &n);
    inputs.push(("order_bound".to_string(), bound.to_string()));
    let mut report = StructuralCaseReport::new(StructuralCase::TypeA, inputs);
    for l in divisors(base).into_iter().filter(|&l| l > u64::from(k + 2)) {
        let params = vec![("l".to_string(), l.to_string())];
        report.record(params, type_a_candidate(d, k, &n, l));
    }
    report
}

fn type_a_candidate(d: u32, k: u32, n: &Int, l: u64) -> Result<(), String> {
    let numerator = n - Int::from(k + 2);
    let denom = Int::from(k) * Int::from(l);
    if !(&numerator % &denom).is_zero() {
        return Err(format!(
            "a = (N - k - 2) / (kl) = {numerator}/{denom} is not an integer"
        ));
    }
    let a = numerator / denom;
    if a < Int::from(1) {
        return Err(format!("a = {a} is below 1"));
    }
    if a > Int::from(d) {
        return Err(format!("a = {a} exceeds d = {d}"));
    }
    Ok(())
}

/// Default lower bound (strict) on the common orbit length in the
/// two-length branch of [`type_b_filter`].
pub const TYPE_B_ORDER_THRESHOLD: u64 = 3;

/// Tests whether an excess-one digraph whose outlier map has exactly one
/// transposition can exist at order `M(d,k) + 1`, using
/// [`TYPE_B_ORDER_THRESHOLD`] for the two-length branch.
pub fn type_b_filter(d: u32, k: u32) -> StructuralCaseReport {
    type_b_filter_with_threshold(d, k, TYPE_B_ORDER_THRESHOLD)
}

/// [`type_b_filter`] with an explicit strict lower bound on the common
/// orbit length of the two-length branch.
///
/// The transposition forces the remaining orbit lengths to divide `2t` for
/// some `t` dividing `d` with `t > 1`. With two distinct lengths `{2, l}`
/// the order gives `a = (N - 2) / (lk)`, which must be a positive integer
/// at most `d`. With three distinct lengths `{2, k+2, l3}` both `k + 2`
/// and `l3` must divide `2t`, and counting orbits of each size against the
/// order must give positive integer multiplicities. The report echoes the
/// conservative order bound `N <= 2 + 2d^2 k` implied by `l <= 2t <= 2d`.
pub fn type_b_filter_with_threshold(d: u32, k: u32, threshold: u64) -> StructuralCaseReport {
    let n = excess_one_order(d, k);
    let bound = Int::from(2) + Int::from(2) * Int::from(d) * Int::from(d) * Int::from(k);
    let mut inputs = filter_inputs(d, k, &n);
    inputs.push(("order_bound".to_string(), bound.to_string()));
    inputs.push(("order_threshold".to_string(), threshold.to_string()));
    let mut report = StructuralCaseReport::new(StructuralCase::TypeB, inputs);
    for t in divisors(u64::from(d)).into_iter().filter(|&t| t >= 2) {
        for l in divisors(2 * t).into_iter().filter(|&l| l > threshold) {
            let params = vec![
                ("lengths".to_string(), "2".to_string()),
                ("t".to_string(), t.to_string()),
                ("l".to_string(), l.to_string()),
            ];
            report.record(params, type_b_two_lengths(d, k, &n, l));
        }
        if (2 * t) % u64::from(k + 2) == 0 {
            for l3 in divisors(2 * t).into_iter().filter(|&l| l > u64::from(k + 2)) {
                let params = vec![
                    ("lengths".to_string(), "3".to_string()),
                    ("t".to_string(), t.to_string()),
                    ("l3".to_string(), l3.to_string()),
                ];
                report.record(params, type_b_three_lengths(d, k, &n, l3));
            }
        }
    }
    report
}

fn type_b_two_lengths(d: u32, k: u32, n: &Int, l: u64) -> Result<(), String> {
    let numerator = n - Int::from(2);
    let denom = Int::from(l) * Int::from(k);
    if !(&numerator % &denom).is_zero() {
        return Err(format!(
            "a = (N - 2) / (lk) = {numerator}/{denom} is not an integer"
        ));
    }
    let a = numerator / denom;
    if a < Int::from(1) {
        return Err(format!("a = {a} is below 1"));
    }
    if a > Int::from(d) {
        return Err(format!("a = {a} exceeds d = {d}"));
    }
    Ok(())
}

fn type_b_three_lengths(d: u32, k: u32, n: &Int, l3: u64) -> Result<(), String> {
    // Orbit counts: one transposition, m2 orbits of size k+2, m3 of size
    // l3, with m2 + m3 = ak and 2 + (k+2) m2 + l3 m3 = N.
    let gap = Int::from(l3) - Int::from(k + 2);
    for a in 1..=u64::from(d) {
        let numerator = n - Int::from(2) - Int::from(k + 2) * Int::from(a) * Int::from(k);
        if !(&numerator % &gap).is_zero() {
            continue;
        }
        let m3 = numerator / &gap;
        let m2 = Int::from(a) * Int::from(k) - &m3;
        if m3 >= Int::from(1) && m2 >= Int::from(1) {
            return Ok(());
        }
    }
    Err(format!(
        "no a in 1..={d} gives positive integer orbit counts for sizes (2, {}, {l3})",
        k + 2
    ))
}

/// Ways a permutation structure can violate the order-structure constraints
/// of an excess-one digraph.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OrderStructureViolation {
    /// More than three distinct orbit sizes occur.
    #[error("{distinct} distinct orbit sizes occur; at most three are possible")]
    TooManyLengths { distinct: usize },
    /// With three distinct sizes the smallest must be 2.
    #[error("smallest orbit size is {smallest}; with three distinct sizes it must be 2")]
    SmallestNotTwo { smallest: usize },
    /// With three distinct sizes the middle one must be `k + 2`.
    #[error("middle orbit size is {middle}; with three distinct sizes it must be {expected}")]
    MiddleNotKPlusTwo { middle: usize, expected: usize },
}

/// Checks the orbit-size constraints a non-trivial outlier map must obey:
/// at most three distinct sizes, and when exactly three occur the two
/// smallest are `2` and `k + 2`.
pub fn order_structure_filter(
    ps: &PermutationStructure,
    k: u32,
) -> Result<(), OrderStructureViolation> {
    let sizes = ps.distinct_sizes();
    if sizes.len() > 3 {
        return Err(OrderStructureViolation::TooManyLengths {
            distinct: sizes.len(),
        });
    }
    if sizes.len() == 3 {
        if sizes[0] != 2 {
            return Err(OrderStructureViolation::SmallestNotTwo {
                smallest: sizes[0],
            });
        }
        let expected = k as usize + 2;
        if sizes[1] != expected {
            return Err(OrderStructureViolation::MiddleNotKPlusTwo {
                middle: sizes[1],
                expected,
            });
        }
    }
    Ok(())
}
