//! Weyl-group elements as exact matrices, optionally carrying the reflection
//! word that produced them.
//!
//! Composition convention: a word `[a_1, ..., a_k]` evaluates to the matrix
//! product `m(a_1) * m(a_2) * ... * m(a_k)` acting on column vectors, so the
//! rightmost reflection acts first.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{charpoly, is_product_of_cyclotomics, Matrix, Polynomial};
use crate::rootsys::{reflection_matrix_raw, Root, RootSysError, RootSystem, RootSystemId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error(transparent)]
    Root(#[from] RootSysError),
    #[error("system mismatch: {left} vs {right}")]
    Mismatch { left: RootSystemId, right: RootSystemId },
    #[error("roots are linearly dependent")]
    Dependent,
}

/// An ordered list of roots; the order is the `Omega` of a connection diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReflectionWord {
    pub system: RootSystemId,
    pub roots: Vec<Root>,
}

impl ReflectionWord {
    pub fn new(sys: &RootSystem, roots: Vec<Root>) -> Result<Self, WeylError> {
        for r in &roots {
            if !sys.is_root(r) {
                return Err(RootSysError::NotARoot { system: sys.id, root: r.to_string() }.into());
            }
        }
        Ok(ReflectionWord { system: sys.id, roots })
    }
}

#[derive(Debug, Clone)]
pub struct WeylElement {
    pub system: RootSystemId,
    pub matrix: Matrix,
    pub word: Option<ReflectionWord>,
}

/// Elements are equal iff their matrices are equal; words are ignored.
impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl WeylElement {
    pub fn identity(sys: &RootSystem) -> Self {
        WeylElement { system: sys.id, matrix: Matrix::identity(sys.ambient_dim), word: None }
    }

    /// Wraps a matrix that is known to lie in the group.
    pub fn from_matrix(sys: &RootSystem, matrix: Matrix) -> Self {
        WeylElement { system: sys.id, matrix, word: None }
    }

    pub fn charpoly(&self) -> Polynomial {
        charpoly(&self.matrix).expect("square")
    }

    /// Characteristic polynomial on the span of the word's roots.
    ///
    /// The element fixes the orthogonal complement of that span pointwise, so
    /// this is the ambient polynomial with the matching power of `x - 1` removed.
    pub fn span_charpoly(&self) -> Polynomial {
        let ambient = self.charpoly();
        let Some(word) = &self.word else { return ambient };
        let rank = if word.roots.is_empty() {
            0
        } else {
            Matrix::from_rows(word.roots.iter().map(|r| r.0.clone()).collect()).expect("rectangular").rank()
        };
        let extra = self.matrix.rows() - rank;
        let (quo, rem) = ambient.div_rem(&Polynomial::from_i64(&[-1, 1]).pow(extra as u32));
        debug_assert!(rem.is_zero());
        quo
    }

    pub fn inverse(&self) -> WeylElement {
        // Every element is orthogonal for the standard dot product of the model.
        WeylElement {
            system: self.system,
            matrix: self.matrix.transpose(),
            word: self.word.as_ref().map(|w| ReflectionWord { system: w.system, roots: w.roots.iter().rev().cloned().collect() }),
        }
    }

    /// Product `self * other`; words concatenate when both are present.
    pub fn compose(&self, other: &WeylElement) -> Result<WeylElement, WeylError> {
        if self.system != other.system {
            return Err(WeylError::Mismatch { left: self.system, right: other.system });
        }
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(ReflectionWord { system: a.system, roots: a.roots.iter().chain(&b.roots).cloned().collect() }),
            _ => None,
        };
        Ok(WeylElement { system: self.system, matrix: &self.matrix * &other.matrix, word })
    }

    pub fn apply(&self, v: &Root) -> Root {
        Root(self.matrix.apply(&v.0))
    }

    /// Matrix of the element in a basis of its invariant subspace: column `j`
    /// holds the coordinates of the image of `basis[j]`.
    pub fn matrix_in_basis(&self, basis: &[Root]) -> Result<Matrix, WeylError> {
        let b = Matrix::from_rows(basis.iter().map(|r| r.0.clone()).collect()).expect("rectangular");
        if b.rank() != basis.len() {
            return Err(WeylError::Dependent);
        }
        let gram = &b * &b.transpose();
        let ginv = gram.inverse().ok_or(WeylError::Dependent)?;
        let mut cols = Vec::with_capacity(basis.len());
        for v in basis {
            let img = self.apply(v);
            let rhs = b.apply(&img.0);
            let c = ginv.apply(&rhs);
            let back = b.transpose().apply(&c);
            if back != img.0 {
                return Err(WeylError::Dependent);
            }
            cols.push(c);
        }
        Ok(Matrix::from_columns(&cols).expect("rectangular"))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Reflection in a root of the system.
pub fn reflection(sys: &RootSystem, mirror: &Root) -> Result<WeylElement, WeylError> {
    let matrix = sys.reflection_matrix(mirror)?;
    Ok(WeylElement { system: sys.id, matrix, word: Some(ReflectionWord { system: sys.id, roots: vec![mirror.clone()] }) })
}

/// Product of the word's reflections, left to right.
pub fn evaluate(sys: &RootSystem, word: &ReflectionWord) -> Result<WeylElement, WeylError> {
    if word.system != sys.id {
        return Err(WeylError::Mismatch { left: sys.id, right: word.system });
    }
    let mut m = Matrix::identity(sys.ambient_dim);
    for r in &word.roots {
        m = &m * &sys.reflection_matrix(r)?;
    }
    Ok(WeylElement { system: sys.id, matrix: m, word: Some(word.clone()) })
}

/// Evaluates a bare root list.
pub fn evaluate_roots(sys: &RootSystem, roots: &[Root]) -> Result<WeylElement, WeylError> {
    evaluate(sys, &ReflectionWord::new(sys, roots.to_vec())?)
}

/// Product of reflection matrices for arbitrary nonzero vectors.
pub fn product_of_reflections(roots: &[Root]) -> Matrix {
    let dim = roots.first().map_or(0, |r| r.dim());
    roots.iter().fold(Matrix::identity(dim), |acc, r| &acc * &reflection_matrix_raw(r))
}

/// `u w u^{-1}`; a word `[a_i]` on `w` becomes `[u(a_i)]`.
pub fn conjugate(w: &WeylElement, u: &WeylElement) -> Result<WeylElement, WeylError> {
    if w.system != u.system {
        return Err(WeylError::Mismatch { left: w.system, right: u.system });
    }
    let matrix = &(&u.matrix * &w.matrix) * &u.matrix.transpose();
    let word = w.word.as_ref().map(|wd| ReflectionWord { system: wd.system, roots: wd.roots.iter().map(|r| u.apply(r)).collect() });
    Ok(WeylElement { system: w.system, matrix, word })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvolutionStatus {
    Identity,
    Involution,
    NotInvolution,
}

impl InvolutionStatus {
    /// True for the identity and for proper involutions.
    pub fn holds(self) -> bool {
        !matches!(self, InvolutionStatus::NotInvolution)
    }
}

pub fn is_involution(w: &WeylElement) -> InvolutionStatus {
    if w.matrix.is_identity() {
        InvolutionStatus::Identity
    } else if (&w.matrix * &w.matrix).is_identity() {
        InvolutionStatus::Involution
    } else {
        InvolutionStatus::NotInvolution
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BicoloredRejection {
    NonOrthogonalAlpha,
    NonOrthogonalBeta,
    Dependent,
    ProductMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BicoloredVerdict {
    Verified,
    Rejected(BicoloredRejection),
}

impl BicoloredVerdict {
    pub fn is_verified(self) -> bool {
        self == BicoloredVerdict::Verified
    }
}

fn pairwise_orthogonal(roots: &[Root]) -> bool {
    roots.iter().enumerate().all(|(i, a)| roots[i + 1..].iter().all(|b| a.dot(b).is_zero()))
}

/// Checks `target = (prod s_alpha)(prod s_beta)` with each factor a product of
/// reflections in mutually orthogonal roots and the union independent.
pub fn verify_bicolored(word_alpha: &[Root], word_beta: &[Root], target: &WeylElement) -> BicoloredVerdict {
    if !pairwise_orthogonal(word_alpha) {
        return BicoloredVerdict::Rejected(BicoloredRejection::NonOrthogonalAlpha);
    }
    if !pairwise_orthogonal(word_beta) {
        return BicoloredVerdict::Rejected(BicoloredRejection::NonOrthogonalBeta);
    }
    let all: Vec<Root> = word_alpha.iter().chain(word_beta).cloned().collect();
    if !RootSystem::independent(&all) {
        return BicoloredVerdict::Rejected(BicoloredRejection::Dependent);
    }
    let m = if all.is_empty() { Matrix::identity(target.matrix.rows()) } else { product_of_reflections(&all) };
    if m != target.matrix {
        return BicoloredVerdict::Rejected(BicoloredRejection::ProductMismatch);
    }
    BicoloredVerdict::Verified
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Finite(u64),
    Infinite,
    Unresolved(u64),
}

/// Smallest `n <= cap` with `m^n = 1`; otherwise infinite when the
/// characteristic polynomial is not a product of cyclotomics.
pub fn order_of_matrix(m: &Matrix, cap: u64) -> Order {
    assert!(cap >= 1, "cap must be positive");
    let mut p = m.clone();
    for n in 1..=cap {
        if p.is_identity() {
            return Order::Finite(n);
        }
        p = &p * m;
    }
    let chi = charpoly(m).expect("square");
    let finite_possible = chi.has_integer_coeffs() && chi.is_monic() && is_product_of_cyclotomics(&chi).unwrap_or(false);
    if finite_possible {
        Order::Unresolved(cap)
    } else {
        Order::Infinite
    }
}

pub fn order_or_infinite(w: &WeylElement, cap: u64) -> Order {
    order_of_matrix(&w.matrix, cap)
}

/// True iff `m^T m = 1`, i.e. the standard form of the model is preserved.
pub fn preserves_form(m: &Matrix) -> bool {
    (&m.transpose() * m).is_identity()
}

/// Determinant sign helper used in tests and diagnostics.
pub fn determinant_is_minus_one(w: &WeylElement) -> bool {
    w.matrix.determinant().map(|d| -d == num_rational::BigRational::one()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;

    fn d4() -> RootSystem {
        RootSystem::of(Family::D, 4)
    }

    fn r(v: &[i64]) -> Root {
        Root::from_i64(v)
    }

    #[test]
    fn reflections_are_involutions_with_det_minus_one() {
        let sys = d4();
        let s = reflection(&sys, &r(&[1, -1, 0, 0])).unwrap();
        assert!((&s.matrix * &s.matrix).is_identity());
        assert!(determinant_is_minus_one(&s));
        assert_eq!(s.apply(&r(&[3, 5, 7, 9])), r(&[5, 3, 7, 9]));
        assert!(reflection(&sys, &r(&[1, 0, 0, 0])).is_err());
        assert_eq!(is_involution(&s), InvolutionStatus::Involution);
    }

    #[test]
    fn d4_four_cycle_words() {
        let sys = d4();
        let (a1, a2, b1, b2) = (r(&[1, -1, 0, 0]), r(&[0, 0, 1, -1]), r(&[0, 1, -1, 0]), r(&[0, 1, 1, 0]));
        let w = evaluate_roots(&sys, &[a1.clone(), a2.clone(), b1.clone(), b2.clone()]).unwrap();
        assert_eq!(w.charpoly(), Polynomial::from_i64(&[1, 0, 2, 0, 1]));
        let wo = evaluate_roots(&sys, &[a1, b1, a2, b2]).unwrap();
        assert_eq!(wo.charpoly(), Polynomial::from_i64(&[1, 1, 0, 1, 1]));
        assert_eq!(order_or_infinite(&w, 100), Order::Finite(4));
        assert_eq!(is_involution(&w), InvolutionStatus::NotInvolution);
    }

    #[test]
    fn conjugation_maps_word() {
        let sys = d4();
        let w = evaluate_roots(&sys, &[r(&[1, -1, 0, 0]), r(&[0, 0, 1, -1]), r(&[0, 1, -1, 0]), r(&[0, 1, 1, 0])]).unwrap();
        let u = reflection(&sys, &r(&[1, -1, 0, 0])).unwrap();
        let c = conjugate(&w, &u).unwrap();
        assert_eq!(c.word.as_ref().unwrap().roots[2], r(&[1, 0, -1, 0]));
        assert_eq!(c.charpoly(), w.charpoly());
        assert_eq!(conjugate(&w, &WeylElement::identity(&sys)).unwrap(), w);
        let again = evaluate(&sys, c.word.as_ref().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn bicolored_reasons() {
        let sys = d4();
        let a = r(&[1, -1, 0, 0]);
        let b = r(&[1, 1, 0, 0]);
        let target = evaluate_roots(&sys, &[a.clone(), b.clone()]).unwrap();
        assert!(verify_bicolored(std::slice::from_ref(&a), std::slice::from_ref(&b), &target).is_verified());
        assert_eq!(
            verify_bicolored(&[a.clone(), r(&[0, 1, -1, 0])], &[], &target),
            BicoloredVerdict::Rejected(BicoloredRejection::NonOrthogonalAlpha)
        );
        assert_eq!(
            verify_bicolored(std::slice::from_ref(&a), std::slice::from_ref(&a), &target),
            BicoloredVerdict::Rejected(BicoloredRejection::Dependent)
        );
        assert_eq!(verify_bicolored(&[a], &[r(&[0, 0, 1, 1])], &target), BicoloredVerdict::Rejected(BicoloredRejection::ProductMismatch));
    }

    #[test]
    fn identity_order() {
        assert_eq!(order_of_matrix(&Matrix::identity(3), 5), Order::Finite(1));
    }

    #[test]
    fn span_charpoly_drops_fixed_directions() {
        let e6 = RootSystem::of(Family::E, 6);
        let w = evaluate_roots(&e6, &e6.simple_roots).unwrap();
        assert_eq!(w.charpoly().degree(), Some(8));
        // Coxeter number 12: x^6 + x^5 - x^3 + x + 1 = Phi_3 Phi_12.
        assert_eq!(w.span_charpoly(), Polynomial::from_i64(&[1, 1, 0, -1, 0, 1, 1]));
    }
}
