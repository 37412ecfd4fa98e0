//! Univariate polynomials with exact ring arithmetic, Newton power sums
//! and a bounded Kronecker-style irreducibility probe.

use std::fmt;
use std::ops::Div;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{LinalgError, Matrix, Scalar};
use crate::{Int, Rat};

/// Univariate polynomial, coefficients ascending by degree with no stored
/// trailing zeros; the zero polynomial stores nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from ascending coefficients, trimming zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// Constant polynomial.
    pub fn constant(c: T) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * x^degree`.
    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Polynomial::new(coeffs)
    }

    /// `1 + x + x^2 + ... + x^k`.
    pub fn geometric(k: u32) -> Self {
        Polynomial {
            coeffs: vec![T::one(); k as usize + 1],
        }
    }

    /// Ascending coefficients without trailing zeros.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Leading coefficient, if any.
    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether the leading coefficient is one.
    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.clone() == T::one())
    }

    /// Sum of two polynomials.
    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    /// Difference of two polynomials.
    pub fn sub(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Product of two polynomials.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(coeffs)
    }

    /// Scales every coefficient by `c`.
    pub fn scale(&self, c: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `e`-th power; the zeroth power is one.
    pub fn pow(&self, e: u32) -> Self {
        let mut out = Polynomial::constant(T::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut acc = Matrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?.add(&Matrix::identity(n).scale(c))?;
        }
        Ok(acc)
    }

    /// Maps every coefficient through `f`.
    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar + Div<Output = T>> Polynomial<T> {
    /// Euclidean division over a field scalar; `None` when dividing by the
    /// zero polynomial.
    pub fn div_rem(&self, rhs: &Self) -> Option<(Self, Self)> {
        let d = rhs.degree()?;
        let lead = rhs.leading().cloned()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let factor = rem.last().cloned().unwrap_or_else(T::zero) / lead.clone();
            let shift = rem.len() - 1 - d;
            quot[shift] = factor.clone();
            for i in 0..=d {
                let sub = factor.clone() * rhs.coeffs[i].clone();
                rem[shift + i] = rem[shift + i].clone() - sub;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() == shift + d + 1 {
                // Leading entry failed to cancel; cannot happen over a field.
                return None;
            }
        }
        Some((Polynomial::new(quot), Polynomial { coeffs: rem }))
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    /// Ascending-power rendering, e.g. `2 + x + x^2` or `-1 + x^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = if i == 0 {
                format!("{c}")
            } else if c.clone() == T::one() {
                format!("x^{i}")
            } else if c.clone() == -T::one() {
                format!("-x^{i}")
            } else {
                format!("{c}*x^{i}")
            };
            if i == 1 {
                term = term.replace("x^1", "x");
            }
            if first {
                write!(f, "{term}")?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

/// Power sums `p_1..p_l` of the roots of `p` via Newton's identities,
/// normalising to a monic polynomial over the rationals first.
pub fn newton_power_sums(p: &Polynomial<Int>, l: usize) -> Result<Vec<Rat>, LinalgError> {
    let n = p.degree().ok_or(LinalgError::NotMonicNormalizable)?;
    let lead = Rat::from(p.coeff(n));
    // c[i] is the monic coefficient of x^(n-i), so p/lead = x^n + c1 x^(n-1) + ... + cn.
    let c: Vec<Rat> = (1..=n)
        .map(|i| Rat::from(p.coeff(n - i)) / lead.clone())
        .collect();
    let mut sums: Vec<Rat> = Vec::with_capacity(l);
    for i in 1..=l {
        let mut acc = if i <= n {
            -(c[i - 1].clone() * Rat::from(Int::from(i)))
        } else {
            Rat::from(Int::from(0))
        };
        for j in 1..=(i - 1).min(n) {
            acc -= c[j - 1].clone() * sums[i - j - 1].clone();
        }
        sums.push(acc);
    }
    Ok(sums)
}

const IRREDUCIBILITY_DEGREE_CAP: usize = 12;
const SAMPLE_POINTS: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];

/// Exhaustive bounded irreducibility test over the rationals: searches for
/// a factor of degree up to half the input's by interpolating through
/// divisor combinations of sampled values. Degrees above twelve are
/// rejected; sample values must fit in a machine word (desk-scale probe).
///
/// Constants and the zero polynomial report `false` (units are not
/// irreducible); degree one is always irreducible.
pub fn is_irreducible_small(p: &Polynomial<Int>) -> Result<bool, LinalgError> {
    let deg = match p.degree() {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    if deg > IRREDUCIBILITY_DEGREE_CAP {
        return Err(LinalgError::DegreeTooLarge {
            degree: deg,
            max: IRREDUCIBILITY_DEGREE_CAP,
        });
    }
    if deg == 1 {
        return Ok(true);
    }
    let p_rat = p.map(|c| Rat::from(c.clone()));
    for m in 1..=deg / 2 {
        let points = &SAMPLE_POINTS[..=m];
        let mut divisor_sets: Vec<Vec<Int>> = Vec::with_capacity(points.len());
        for (idx, &x) in points.iter().enumerate() {
            let value = p.eval(&Int::from(x));
            if value.is_zero() {
                // x is an integer root, so x - root is a proper factor.
                return Ok(false);
            }
            let mut ds = signed_divisors(&value);
            if idx == 0 {
                // Fixing the first value positive halves the search: if g
                // divides p then so does -g.
                ds.retain(|d| d.is_positive());
            }
            divisor_sets.push(ds);
        }
        let xs: Vec<Rat> = points.iter().map(|&x| Rat::from(Int::from(x))).collect();
        let mut choice = vec![0usize; points.len()];
        loop {
            let ys: Vec<Rat> = choice
                .iter()
                .zip(&divisor_sets)
                .map(|(&c, ds)| Rat::from(ds[c].clone()))
                .collect();
            if let Some(g) = interpolate(&xs, &ys) {
                if g.degree().is_some_and(|d| d >= 1) && divides(&g, &p_rat) {
                    return Ok(false);
                }
            }
            // Odometer step through the divisor combinations.
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < divisor_sets[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    Ok(true)
}

/// All divisors of `value` with both signs, ascending by magnitude.
fn signed_divisors(value: &Int) -> Vec<Int> {
    let magnitude = value
        .abs()
        .to_u64()
        .expect("sample value too large for the bounded irreducibility probe");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= magnitude {
        if magnitude.is_multiple_of(i) {
            small.push(i);
            if i != magnitude / i {
                large.push(magnitude / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
        .into_iter()
        .flat_map(|d| [Int::from(d), -Int::from(d)])
        .collect()
}

/// Lagrange interpolation; `None` when the result has a non-integer
/// coefficient (no integer factor can take those values).
fn interpolate(xs: &[Rat], ys: &[Rat]) -> Option<Polynomial<Rat>> {
    let mut acc = Polynomial::zero();
    for (i, y) in ys.iter().enumerate() {
        let mut basis = Polynomial::constant(Rat::from(Int::from(1)));
        let mut denom = Rat::from(Int::from(1));
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&Polynomial::new(vec![
                -xj.clone(),
                Rat::from(Int::from(1)),
            ]));
            denom *= xs[i].clone() - xj.clone();
        }
        acc = acc.add(&basis.scale(&(y.clone() / denom)));
    }
    if acc.coeffs().iter().all(|c| c.is_integer()) {
        Some(acc)
    } else {
        None
    }
}

fn divides(g: &Polynomial<Rat>, p: &Polynomial<Rat>) -> bool {
    p.div_rem(g).is_some_and(|(_, rem)| rem.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntPolynomial;

    fn int_poly(coeffs: &[i64]) -> IntPolynomial {
        Polynomial::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    fn rat(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    #[test]
    fn construction_trims_trailing_zeros() {
        let p = int_poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(IntPolynomial::zero().degree().is_none());
        assert_eq!(IntPolynomial::geometric(3), int_poly(&[1, 1, 1, 1]));
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = int_poly(&[2, 0, 1]);
        let q = int_poly(&[-2, 1]);
        assert_eq!(p.mul(&q), int_poly(&[-4, 2, -2, 1]));
        assert_eq!(p.add(&q), int_poly(&[0, 1, 1]));
        assert_eq!(p.sub(&p), IntPolynomial::zero());
        assert_eq!(p.eval(&Int::from(3)), Int::from(11));
        assert_eq!(q.pow(2), int_poly(&[4, -4, 1]));
    }

    #[test]
    fn display_is_ascending() {
        assert_eq!(int_poly(&[2, 1, 1]).to_string(), "2 + x + x^2");
        assert_eq!(int_poly(&[-1, 0, 1]).to_string(), "-1 + x^2");
        assert_eq!(int_poly(&[0, -3, 0, 2]).to_string(), "-3*x + 2*x^3");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn rational_division() {
        let p = int_poly(&[-1, 0, 1]).map(|c| Rat::from(c.clone()));
        let g = int_poly(&[1, 1]).map(|c| Rat::from(c.clone()));
        let (q, r) = p.div_rem(&g).unwrap();
        assert_eq!(q, int_poly(&[-1, 1]).map(|c| Rat::from(c.clone())));
        assert!(r.is_zero());

        let (_, r) = p.div_rem(&int_poly(&[1, 2]).map(|c| Rat::from(c.clone()))).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn newton_sums_of_known_roots() {
        // roots 1 and 2
        let p = int_poly(&[2, -3, 1]);
        assert_eq!(newton_power_sums(&p, 3).unwrap(), vec![rat(3), rat(5), rat(9)]);

        // non-monic: same roots after normalisation
        let p2 = p.scale(&Int::from(4));
        assert_eq!(newton_power_sums(&p2, 2).unwrap(), vec![rat(3), rat(5)]);

        let q5 = int_poly(&[2, 1, 1, 1, 1, 1]);
        assert_eq!(
            newton_power_sums(&q5, 5).unwrap(),
            vec![rat(-1), rat(-1), rat(-1), rat(-1), rat(-6)]
        );

        assert_eq!(
            newton_power_sums(&IntPolynomial::zero(), 1),
            Err(LinalgError::NotMonicNormalizable)
        );
    }

    #[test]
    fn irreducibility_probe() {
        assert!(!is_irreducible_small(&int_poly(&[-1, 0, 1])).unwrap());
        assert!(!is_irreducible_small(&int_poly(&[2, -3, 1])).unwrap());
        assert!(!is_irreducible_small(&int_poly(&[-1, 0, 0, 1])).unwrap());
        assert!(!is_irreducible_small(&int_poly(&[1, 2, 1])).unwrap());
        assert!(!is_irreducible_small(&int_poly(&[0, 1, 1])).unwrap());

        assert!(is_irreducible_small(&int_poly(&[2, 1, 1])).unwrap());
        assert!(is_irreducible_small(&int_poly(&[2, 2])).unwrap());
        assert!(is_irreducible_small(&int_poly(&[1, 1, 0, 1])).unwrap());

        assert!(!is_irreducible_small(&int_poly(&[7])).unwrap());
        assert!(matches!(
            is_irreducible_small(&IntPolynomial::geometric(13)),
            Err(LinalgError::DegreeTooLarge { degree: 13, .. })
        ));
    }
}
