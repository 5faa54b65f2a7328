use proptest::prelude::*;

use weylcalc::exactla::{self, int, Matrix, Polynomial, Rational};
use weylcalc::oracle::{self, Conjugacy};
use weylcalc::rewrite::{self, Direction, RewriteState};
use weylcalc::rootsys::{Family, Root, RootSystem};
use weylcalc::weyl::{self, WeylElement};

fn matrix(n: usize, entries: &[i64]) -> Matrix {
    Matrix::new(n, n, entries.iter().map(|&x| int(x)).collect()).expect("shape")
}

fn square(max: usize, range: i64) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1..=max).prop_flat_map(move |n| (Just(n), prop::collection::vec(-range..=range, n * n)))
}

/// Fraction-free (Bareiss) determinant over the integers.
fn bareiss(n: usize, entries: &[i64]) -> Rational {
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| entries[i * n..(i + 1) * n].iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return int(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    Rational::from_integer((sign * a[n - 1][n - 1]).into())
}

/// Sign changes in the coefficient sequence, zeros skipped.
fn sign_changes(p: &Polynomial) -> usize {
    let signs: Vec<bool> = p.coeffs().iter().filter(|c| **c != int(0)).map(|c| *c > int(0)).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn system() -> impl Strategy<Value = RootSystem> {
    prop::sample::select(vec![
        (Family::A, 3),
        (Family::B, 3),
        (Family::C, 3),
        (Family::D, 4),
        (Family::G, 2),
        (Family::F, 4),
        (Family::A, 4),
    ])
    .prop_map(|(f, n)| RootSystem::of(f, n))
}

fn word(max: usize) -> impl Strategy<Value = (RootSystem, Vec<Root>)> {
    system().prop_flat_map(move |sys| {
        let n = sys.all_roots().len();
        let sys2 = sys.clone();
        prop::collection::vec(0..n, 0..=max)
            .prop_map(move |ix| (sys2.clone(), ix.iter().map(|&i| sys2.all_roots()[i].clone()).collect::<Vec<_>>()))
    })
}

fn d4_element() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..24usize, 0..7)
}

fn d4_eval(sys: &RootSystem, ix: &[usize]) -> WeylElement {
    let roots: Vec<Root> = ix.iter().map(|&i| sys.all_roots()[i].clone()).collect();
    weyl::evaluate_roots(sys, &roots).expect("word")
}

fn conj(u: &WeylElement, w: &WeylElement) -> Matrix {
    &(&u.matrix * &w.matrix) * &u.inverse().matrix
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charpoly_is_similarity_invariant((n, m) in square(5, 3), ops in prop::collection::vec((0usize..5, 0usize..5, -2i64..=2), 0..8)) {
        let a = matrix(n, &m);
        let mut p = Matrix::identity(n);
        for (i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i != j {
                let mut e = Matrix::identity(n);
                e.set(i, j, int(c));
                p = &p * &e;
            }
        }
        let p_inv = p.inverse().expect("unimodular");
        let b = &(&p * &a) * &p_inv;
        prop_assert_eq!(exactla::charpoly(&b).unwrap(), exactla::charpoly(&a).unwrap());
    }

    #[test]
    fn charpoly_constant_term_is_signed_determinant((n, m) in square(6, 4)) {
        let chi = exactla::charpoly(&matrix(n, &m)).unwrap();
        let sign = if n % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(chi.eval(&int(0)), sign * bareiss(n, &m));
    }

    #[test]
    fn positive_definite_matches_descartes((n, b) in square(6, 2), shift in 0i64..4) {
        // A = B^T B - shift I is symmetric with real eigenvalues, so the
        // sign-change count of its charpoly is exactly the number of positive ones.
        let bm = matrix(n, &b);
        let mut a = &bm.transpose() * &bm;
        for i in 0..n {
            let d = a.get(i, i) - int(shift);
            a.set(i, i, d);
        }
        let chi = exactla::charpoly(&a).unwrap();
        prop_assert_eq!(exactla::gram_positive_definite(&a).unwrap(), sign_changes(&chi) == n);
    }

    #[test]
    fn words_preserve_the_form((sys, roots) in word(8)) {
        let w = weyl::evaluate_roots(&sys, &roots).unwrap();
        prop_assert!(weyl::preserves_form(&w.matrix));
    }

    #[test]
    fn s_permutations_and_flips_keep_the_element((sys, roots) in word(7), pos in 0usize..8, left in any::<bool>()) {
        prop_assume!(roots.len() >= 2);
        let s = RewriteState::from_roots(&sys, roots.clone()).unwrap();
        let i = pos % (roots.len() - 1);
        let dir = if left { Direction::Left } else { Direction::Right };
        let permuted = rewrite::apply_s_permutation(&s, i, dir).unwrap();
        prop_assert_eq!(&permuted.element.matrix, &s.element.matrix);
        prop_assert_eq!(&weyl::evaluate_roots(&sys, permuted.roots()).unwrap().matrix, &s.element.matrix);
        let flipped = rewrite::apply_sign_flip(&s, i).unwrap();
        prop_assert_eq!(&flipped.element.matrix, &s.element.matrix);
        prop_assert_eq!(&weyl::evaluate_roots(&sys, flipped.roots()).unwrap().matrix, &s.element.matrix);
        let back = rewrite::apply_s_permutation(&permuted, i, dir.opposite()).unwrap();
        prop_assert_eq!(back.roots(), s.roots());
    }

    #[test]
    fn rotations_conjugate((sys, roots) in word(7), shift in -7isize..=7) {
        prop_assume!(!roots.is_empty() && shift.unsigned_abs() <= roots.len());
        let s = RewriteState::from_roots(&sys, roots).unwrap();
        let r = rewrite::apply_rotation(&s, shift).unwrap();
        prop_assert!(r.invariants_hold(&s.element));
        prop_assert_eq!(r.element.charpoly(), s.element.charpoly());
    }

    #[test]
    fn conjugate_elements_are_found_with_equal_charpolys(w in d4_element(), u in d4_element()) {
        let sys = RootSystem::of(Family::D, 4);
        let w = d4_eval(&sys, &w);
        let u = d4_eval(&sys, &u);
        let w2 = WeylElement::from_matrix(&sys, conj(&u, &w));
        match oracle::are_conjugate(&sys, &w, &w2, 100_000).unwrap() {
            Conjugacy::Witness(x) => {
                prop_assert_eq!(conj(&x, &w), w2.matrix.clone());
                prop_assert_eq!(w.charpoly(), w2.charpoly());
            }
            other => prop_assert!(false, "no witness: {:?}", other),
        }
    }

    #[test]
    fn conjugacy_implies_equal_charpoly_and_witnesses_compose(a in d4_element(), b in d4_element(), c in d4_element()) {
        let sys = RootSystem::of(Family::D, 4);
        let (w1, w2, w3) = (d4_eval(&sys, &a), d4_eval(&sys, &b), d4_eval(&sys, &c));
        let v12 = oracle::are_conjugate(&sys, &w1, &w2, 100_000).unwrap();
        let v23 = oracle::are_conjugate(&sys, &w2, &w3, 100_000).unwrap();
        if matches!(v12, Conjugacy::Witness(_)) {
            prop_assert_eq!(w1.charpoly(), w2.charpoly());
        }
        if let (Conjugacy::Witness(x), Conjugacy::Witness(y)) = (v12, v23) {
            let yx = y.compose(&x).unwrap();
            prop_assert_eq!(conj(&yx, &w1), w3.matrix.clone());
        }
    }
}
