//! Exact rational scalars, matrices and univariate polynomials.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals and no
//! floating point is used anywhere. The characteristic polynomial is computed
//! with the Faddeev-LeVerrier recurrence, which only needs matrix products,
//! traces and division by small integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `n / d` as an exact rational.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension error: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty interval: lo must be < hi")]
    EmptyInterval,
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinAlgError> {
        if entries.len() != rows * cols {
            return Err(LinAlgError::Dimension { expected: format!("{} entries", rows * cols), got: format!("{} entries", entries.len()) });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| int(v)));
        }
        Matrix { rows: r, cols: c, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self, LinAlgError> {
        Ok(Matrix::from_rows(cols.to_vec())?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Dimension { expected: format!("{} rows", self.cols), got: format!("{} rows", other.rows) });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn pow(&self, mut n: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Row echelon form by Gaussian elimination; returns the reduced matrix,
    /// the pivot columns and the determinant factor from row swaps and pivots.
    fn echelon(&self) -> (Matrix, Vec<usize>, Rational) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = Rational::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                det = Rational::zero();
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
                det = -det;
            }
            let pv = m.get(r, c).clone();
            det *= &pv;
            for i in r + 1..m.rows {
                let f = m.get(i, c) / &pv;
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let d = &f * m.get(r, j);
                    m.entries[i * m.cols + j] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        if r < m.rows {
            det = Rational::zero();
        }
        (m, pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn determinant(&self) -> Result<Rational, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::Shape("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        Ok(self.echelon().2)
    }

    /// Gauss-Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.entries.swap(p * n + j, c * n + j);
                    inv.entries.swap(p * n + j, c * n + j);
                }
            }
            let pv = a.get(c, c).clone();
            for j in 0..n {
                a.entries[c * n + j] /= &pv;
                inv.entries[c * n + j] /= &pv;
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let da = &f * a.get(c, j);
                    let di = &f * inv.get(c, j);
                    a.entries[i * n + j] -= da;
                    inv.entries[i * n + j] -= di;
                }
            }
        }
        Some(inv)
    }

    /// Leading principal minor of order `k`.
    pub fn leading_minor(&self, k: usize) -> Rational {
        let mut m = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m.determinant().expect("square by construction")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense univariate polynomial, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::from_i64(&[1])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Polynomial::from_i64(&[0, 1])
    }

    /// `x^n + c`.
    pub fn binomial(n: usize, c: i64) -> Self {
        let mut v = vec![0; n + 1];
        v[n] = 1;
        v[0] += c;
        Polynomial::from_i64(&v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        (0..n).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Polynomial::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Euclidean division over the rationals. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let lead = d.leading();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Polynomial::zero(), self.clone());
        };
        let mut quo = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Polynomial::new(quo), Polynomial::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The `n`-th cyclotomic polynomial.
    pub fn cyclotomic(n: usize) -> Polynomial {
        assert!(n >= 1);
        let mut p = Polynomial::binomial(n, -1);
        for d in 1..n {
            if n.is_multiple_of(d) {
                p = p.div_rem(&Polynomial::cyclotomic(d)).0;
            }
        }
        p
    }

    /// Renders in the variable `var`, e.g. `x^4 + 2x^2 + 1`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if a.is_one() && i > 0 { String::new() } else { fmt_rational(&a) };
            let coef = if !coef.is_empty() && !a.is_integer() && i > 0 { format!("({coef})") } else { coef };
            out.push_str(&coef);
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Monic characteristic polynomial `det(xI - m)` by the Faddeev-LeVerrier recurrence.
pub fn charpoly(m: &Matrix) -> Result<Polynomial, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::Dimension { expected: "square matrix".into(), got: format!("{}x{}", m.rows, m.cols) });
    }
    let n = m.rows;
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m * &mk;
        for i in 0..n {
            next.entries[i * n + i] += &c[n - k + 1];
        }
        mk = next;
        let am = m * &mk;
        c[n - k] = -am.trace() / int(k as i64);
    }
    Ok(Polynomial::new(c))
}

/// Positive definiteness of a symmetric matrix via its leading principal minors.
pub fn gram_positive_definite(g: &Matrix) -> Result<bool, LinAlgError> {
    if !g.is_symmetric() {
        return Err(LinAlgError::Shape("Gram matrix must be square and symmetric".into()));
    }
    // Pivots of elimination without row exchanges are ratios of consecutive
    // leading minors, so all minors are positive iff every pivot is.
    let n = g.rows;
    let mut a = g.clone();
    for c in 0..n {
        let pv = a.get(c, c).clone();
        if !pv.is_positive() {
            return Ok(false);
        }
        for i in c + 1..n {
            let f = a.get(i, c) / &pv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let d = &f * a.get(c, j);
                a.entries[i * n + j] -= d;
            }
        }
    }
    Ok(true)
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_variations(chain: &[Polynomial], x: &Rational) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| sign(&p.eval(x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn count_real_roots(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<usize, LinAlgError> {
    if p.is_zero() {
        return Err(LinAlgError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(LinAlgError::EmptyInterval);
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    // Square-free part keeps every root simple, so zero entries can be dropped
    // at an endpoint and the variation count equals its right-hand limit.
    let sf = p.div_rem(&p.gcd(&p.derivative())).0;
    let chain = sturm_chain(&sf);
    let v_lo = sign_variations(&chain, lo);
    let v_hi = sign_variations(&chain, hi);
    let at_hi = usize::from(sf.eval(hi).is_zero());
    Ok(v_lo - v_hi - at_hi)
}

/// True iff `p` has a real root strictly between `lo` and `hi`.
///
/// A strict sign change at the endpoints answers immediately; otherwise the
/// Sturm count decides.
pub fn real_root_in_interval(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<bool, LinAlgError> {
    if p.is_zero() {
        return Err(LinAlgError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(LinAlgError::EmptyInterval);
    }
    if sign(&p.eval(lo)) * sign(&p.eval(hi)) < 0 {
        return Ok(true);
    }
    Ok(count_real_roots(p, lo, hi)? > 0)
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

/// True iff the monic integer polynomial `p` is a product of cyclotomic polynomials.
pub fn is_product_of_cyclotomics(p: &Polynomial) -> Result<bool, LinAlgError> {
    if p.is_zero() || !p.is_monic() {
        return Err(LinAlgError::Domain("polynomial must be monic".into()));
    }
    if !p.has_integer_coeffs() {
        return Err(LinAlgError::Domain("polynomial must have integer coefficients".into()));
    }
    let mut rest = p.clone();
    let d = p.degree().unwrap_or(0);
    // phi(n) >= sqrt(n/2), so phi(n) <= d forces n <= 2 d^2.
    let bound = (2 * d * d).max(2);
    for n in 1..=bound {
        if rest.degree() == Some(0) {
            break;
        }
        if euler_phi(n) > rest.degree().unwrap_or(0) {
            continue;
        }
        let phi = Polynomial::cyclotomic(n);
        loop {
            let (quo, r) = rest.div_rem(&phi);
            if !r.is_zero() {
                break;
            }
            rest = quo;
        }
    }
    Ok(rest == Polynomial::one())
}

/// Factors a product of cyclotomics into `(n, multiplicity)` pairs, ascending in `n`.
/// Returns `None` when some factor is not cyclotomic.
pub fn cyclotomic_factorization(p: &Polynomial) -> Option<Vec<(usize, u32)>> {
    if !is_product_of_cyclotomics(p).ok()? {
        return None;
    }
    let mut rest = p.clone();
    let d = p.degree().unwrap_or(0);
    let mut out = Vec::new();
    for n in 1..=(2 * d * d).max(2) {
        if rest.degree() == Some(0) {
            break;
        }
        let phi = Polynomial::cyclotomic(n);
        let mut m = 0;
        loop {
            let (quo, r) = rest.div_rem(&phi);
            if !r.is_zero() {
                break;
            }
            rest = quo;
            m += 1;
        }
        if m > 0 {
            out.push((n, m));
        }
    }
    Some(out)
}

/// Converts an integral rational to `i64` when it fits.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}
