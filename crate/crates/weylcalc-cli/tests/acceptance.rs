//! Acceptance checks. Each test prints one PASS/FAIL line for its criterion;
//! failing sub-checks are listed beneath it. Runtime budgets are asserted in
//! release builds only.

use std::time::{Duration, Instant};

use weylcalc::diagram::catalog::{catalog, identify};
use weylcalc::diagram::{self, tits_value, Diagram, DiagramName, EdgeStyle};
use weylcalc::exactla::{self, int, q, Matrix, Polynomial, Rational};
use weylcalc::oracle::{self, Conjugacy, FirstVertex, RootTable};
use weylcalc::rewrite::{self, ChainKind, CommutationCase, LongCycle};
use weylcalc::rootsys::{Family, NormClass, Root, RootSystem};
use weylcalc::weyl::{self, Order};

const GROUP_CAP: usize = oracle::DEFAULT_GROUP_CAP;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Duration,
    start: Instant,
    checks: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new(id: u8, title: &'static str, budget_secs: u64) -> Self {
        Criterion { id, title, budget: Duration::from_secs(budget_secs), start: Instant::now(), checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), pass, detail.into()));
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if !cfg!(debug_assertions) {
            let within = elapsed <= self.budget;
            self.check(format!("runtime within {:?}", self.budget), within, format!("{elapsed:.2?}"));
        }
        let failed: Vec<_> = self.checks.iter().filter(|c| !c.1).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {} ({} checks, {} failed, {elapsed:.2?})", self.id, self.title, self.checks.len(), failed.len());
        for (name, _, detail) in &failed {
            println!("    failed: {name}: {detail}");
        }
        assert!(failed.is_empty(), "criterion {} failed {} of {} checks", self.id, failed.len(), self.checks.len());
    }
}

fn poly(c: &[i64]) -> Polynomial {
    Polynomial::from_i64(c)
}

fn half(n: i64) -> Rational {
    q(n, 2)
}

fn show(r: &Rational) -> String {
    exactla::fmt_rational(r)
}

/// Inner product normalized so that every root has square length 1; all
/// systems used here are simply laced with roots of square length 2.
fn ip(u: &Root, v: &Root) -> Rational {
    assert_eq!(u.dot(u), int(2), "{u} is not a root of square length 2");
    assert_eq!(v.dot(v), int(2), "{v} is not a root of square length 2");
    u.dot(v) / int(2)
}

fn lin(terms: &[(i64, &Root)]) -> Root {
    Root::combination(terms)
}

/// Reflection in a root of square length 2, built from its coordinates.
fn reflection(r: &Root) -> Matrix {
    let n = r.dim();
    let c = r.coords();
    let rows = (0..n).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) } - &c[i] * &c[j]).collect()).collect();
    Matrix::from_rows(rows).expect("square")
}

fn product(roots: &[Root]) -> Matrix {
    roots.iter().fold(Matrix::identity(roots[0].dim()), |acc, r| &acc * &reflection(r))
}

#[test]
fn criterion_01_square_orders() {
    let mut c = Criterion::new(1, "4-cycle in D4: Carter order vs connection order", 1);
    let sys = RootSystem::of(Family::D, 4);
    let r = |s: &str| Root::parse(s, 4).expect("root literal");
    let (a1, a2, b1, b2) = (r("e1-e2"), r("e3-e4"), r("e2-e3"), r("e2+e3"));
    // One dotted edge a2 - b2, all other cycle edges solid.
    let pattern = [(&a1, &b1, -1), (&a1, &b2, -1), (&a2, &b1, -1), (&a2, &b2, 1), (&a1, &a2, 0), (&b1, &b2, 0)];
    let ok = pattern.iter().all(|(u, v, h)| ip(u, v) == half(*h));
    c.check("roots form the square with one dotted edge", ok, "");

    let carter = [a1.clone(), a2.clone(), b1.clone(), b2.clone()];
    let connection = [a1, b1, a2, b2];
    let w = weyl::evaluate_roots(&sys, &carter).expect("word");
    let w_omega = weyl::evaluate_roots(&sys, &connection).expect("word");
    let chi = w.charpoly();
    let chi_omega = w_omega.charpoly();
    c.check("charpoly of w is x^4+2x^2+1", chi == poly(&[1, 0, 2, 0, 1]), chi.to_string());
    c.check("charpoly of w_omega is x^4+x^3+x+1", chi_omega == poly(&[1, 1, 0, 1, 1]), chi_omega.to_string());
    let by_hand = (exactla::charpoly(&product(&carter)).ok(), exactla::charpoly(&product(&connection)).ok());
    c.check("hand-built reflection products agree", by_hand == (Some(chi.clone()), Some(chi_omega.clone())), "");

    let verdict = oracle::are_conjugate(&sys, &w, &w_omega, GROUP_CAP);
    c.check("orbit search finds no conjugator", matches!(verdict, Ok(Conjugacy::NotConjugate)), format!("{verdict:?}"));
    let table = RootTable::new(&sys);
    let class = table.perm_of(&w.matrix).and_then(|p| oracle::conjugacy_class(&table, &p, GROUP_CAP));
    let target = table.perm_of(&w_omega.matrix);
    match (class, target) {
        (Ok(class), Ok(t)) => {
            c.check("w_omega lies outside the enumerated class of w", !class.contains(&t), format!("class size {}", class.len()))
        }
        (a, b) => c.check("class enumeration", false, format!("{:?} {:?}", a.err(), b.err())),
    }
    c.finish();
}

fn tn1(n: usize) -> Polynomial {
    let mut v = vec![0; n + 1];
    v[0] = 1;
    v[n] = 1;
    poly(&v)
}

#[test]
fn criterion_02_long_cycle_rows() {
    let mut c = Criterion::new(2, "long-cycle rows keep their charpoly and land on the a-diagram", 10);
    let p12 = poly(&[1, 0, -1, 0, 1]);
    let mut rows = vec![
        (LongCycle::D6B2, tn1(3).pow(2)),
        (LongCycle::E7B2, &(&p12 * &poly(&[1, -1, 1])) * &poly(&[1, 1])),
        (LongCycle::E8B3, p12.pow(2)),
        // Listed as t^8 - t^7 + t^5 - t^4 + t^3 - t^2 + 1.
        (LongCycle::E8B5, poly(&[1, 0, -1, 1, -1, 1, 0, -1, 1])),
    ];
    for l in [6, 8, 10, 12] {
        rows.push((LongCycle::Dl(l), tn1(l / 2).pow(2)));
    }
    for (which, listed) in rows {
        let start = which.start();
        let sys = RootSystem::of(start.family, start.rank);
        let trace = match rewrite::transform_long_cycle(which) {
            Ok(t) => t,
            Err(e) => {
                c.check(format!("{which}: script runs"), false, e.to_string());
                continue;
            }
        };
        c.check(format!("{which}: trace replays"), trace.verify(), "");
        let polys: Vec<Polynomial> = std::iter::once(&trace.initial)
            .chain(trace.steps.iter().map(|s| &s.state))
            .map(|s| diagram::span_charpoly_of_word(s.roots()))
            .collect();
        let constant = polys.iter().all(|p| *p == polys[0]);
        c.check(format!("{which}: charpoly constant over {} states", polys.len()), constant, "");
        let frozen = catalog(&start).map(|e| e.charpoly);
        c.check(format!("{which}: start matches the {start} catalog polynomial"), frozen.as_ref().ok() == polys.first(), "");
        c.check(
            format!("{which}: charpoly equals the listed polynomial"),
            polys[0] == listed,
            format!("computed {}, listed {}", polys[0].display_in("t"), listed.display_in("t")),
        );
        let last = trace.final_state().roots().to_vec();
        let name = diagram::from_roots(&sys, &last).ok().and_then(|d| identify(&d).ok().flatten());
        c.check(format!("{which}: final diagram is {}", which.target()), name == Some(which.target()), format!("{name:?}"));
    }
    c.finish();
}

fn named(entry: &str, labels: &[&str]) -> Vec<(String, Root)> {
    let name: DiagramName = entry.parse().expect("name");
    let roots = catalog(&name).expect("catalog").diagram.roots;
    assert_eq!(roots.len(), labels.len());
    labels.iter().map(|l| l.to_string()).zip(roots).collect()
}

fn get<'a>(env: &'a [(String, Root)], label: &str) -> &'a Root {
    &env.iter().find(|(l, _)| l == label).unwrap_or_else(|| panic!("no root {label}")).1
}

/// Cycle of `D_l` in coordinates independent of the library:
/// `a1 = e2 - e1`, `b1 = e2 - e3`, then `e_j - e_{j+1}` around the cycle, and
/// `b_m = e1 + e_l`. Only `a1 - b1` is dotted. Returns `(alpha, beta)`.
fn own_cycle(l: usize) -> (Vec<Root>, Vec<Root>) {
    let m = l / 2;
    let unit = |i: usize| {
        let mut v = vec![0i64; l];
        v[i - 1] = 1;
        v
    };
    let diff = |i: usize, j: usize, s: i64| {
        let (a, b) = (unit(i), unit(j));
        Root::from_i64(&a.iter().zip(&b).map(|(x, y)| x + s * y).collect::<Vec<_>>())
    };
    let mut alpha = vec![diff(2, 1, -1)];
    for i in 2..=m {
        alpha.push(diff(2 * i - 1, 2 * i, -1));
    }
    let mut beta: Vec<Root> = (1..m).map(|i| diff(2 * i, 2 * i + 1, -1)).collect();
    beta.push(diff(1, l, 1));
    (alpha, beta)
}

/// Chain sum with both ends on beta roots (`beta_end`) or on alpha roots;
/// indices are 1-based, `m` is the number of roots of each colour.
fn own_chain(alpha: &[Root], beta: &[Root], beta_end: bool, big: usize, small: usize) -> Root {
    let m = alpha.len();
    let mut terms: Vec<(i64, &Root)> = vec![(1, &alpha[0])];
    let beta_minus = if beta_end { small } else { small - 1 };
    terms.extend((1..=beta_minus).map(|i| (-1, &beta[i - 1])));
    terms.extend((2..=small).map(|i| (-1, &alpha[i - 1])));
    terms.extend((big..=m).map(|i| (1, &beta[i - 1])));
    let alpha_from = if beta_end { big + 1 } else { big };
    terms.extend((alpha_from..=m).map(|i| (1, &alpha[i - 1])));
    lin(&terms)
}

fn touching(v: &Root, roots: &[Root]) -> Vec<usize> {
    (1..=roots.len()).filter(|&i| v.dot(&roots[i - 1]) != int(0)).collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

#[test]
fn criterion_03_script_values() {
    let mut c = Criterion::new(3, "printed inner products of the elimination scripts", 5);
    let expect = |c: &mut Criterion, what: &str, got: Rational, want: Rational| {
        c.check(what.to_string(), got == want, format!("computed {}, printed {}", show(&got), show(&want)));
    };

    // E8(a3) and sigma = b3 + a3 - a2 - b2 + b4.
    let env = named("E8(a3)", &["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"]);
    let r = |l: &str| get(&env, l).clone();
    let sigma = lin(&[(1, &r("b3")), (1, &r("a3")), (-1, &r("a2")), (-1, &r("b2")), (1, &r("b4"))]);
    for (x, h) in [("a3", 0), ("a2", 0), ("b1", 0), ("a1", 0), ("b4", 1), ("b2", -1), ("a4", -1)] {
        expect(&mut c, &format!("E8(a3): (sigma, {x})"), ip(&sigma, &r(x)), half(h));
    }

    // E8(b5), steps 1 to 5.
    let env = named("E8(b5)", &["b1", "b2", "b4", "g", "a1", "a2", "a3", "a4"]);
    let r = |l: &str| get(&env, l).clone();
    let mu = lin(&[(1, &r("a4")), (-1, &r("b2")), (1, &r("b4"))]);
    for (x, h) in [("a3", -1), ("b4", 1), ("a2", 1), ("b2", -1), ("a1", 1)] {
        expect(&mut c, &format!("E8(b5) step 1: (mu, {x})"), ip(&mu, &r(x)), half(h));
    }
    let b3 = lin(&[(1, &mu), (-1, &r("a2")), (1, &r("a3"))]);
    for (x, h) in [("a3", 1), ("b4", 0), ("a2", -1), ("b2", 0)] {
        expect(&mut c, &format!("E8(b5) step 1: (b3, {x})"), ip(&b3, &r(x)), half(h));
    }
    let agb = lin(&[(1, &r("a1")), (1, &r("g")), (1, &r("b2"))]);
    for (x, h, name) in [(&b3, 0, "b3"), (&r("g"), 1, "g"), (&r("a2"), -1, "a2"), (&r("b2"), 1, "b2")] {
        expect(&mut c, &format!("E8(b5) step 2: (a1+g+b2, {name})"), ip(&agb, x), half(h));
    }
    let ag = lin(&[(1, &r("a1")), (1, &r("g"))]);
    for (x, h, name) in
        [(r("a2"), 0, "a2"), (r("b1"), 0, "b1"), (b3.clone(), 0, "b3"), (r("b4"), 0, "b4"), (r("a3"), 0, "a3"), (r("g"), 1, "g")]
    {
        expect(&mut c, &format!("E8(b5) step 3: (a1+g, {name})"), ip(&ag, &x), half(h));
    }
    let d = lin(&[(1, &b3), (-1, &r("a1")), (-1, &r("b2"))]);
    c.check("E8(b5) step 4: b3-a1-b2 = g+b3-(a1+g+b2)", d == lin(&[(1, &r("g")), (1, &b3), (-1, &agb)]), "");
    for (x, h, name) in [
        (ag.clone(), 0, "a1+g"),
        (r("b1"), 0, "b1"),
        (r("b4"), 0, "b4"),
        (r("a2"), 0, "a2"),
        (b3.clone(), 1, "b3"),
        (agb.clone(), -1, "a1+g+b2"),
        (r("a3"), -1, "a3"),
    ] {
        expect(&mut c, &format!("E8(b5) step 4: (b3-a1-b2, {name})"), ip(&d, &x), half(h));
    }
    let e = lin(&[(1, &r("a3")), (-1, &b3), (1, &r("b1"))]);
    for (x, h, name) in [
        (r("a2"), 0, "a2"),
        (ag.clone(), 0, "a1+g"),
        (agb.clone(), 0, "a1+g+b2"),
        (b3.clone(), -1, "b3"),
        (r("b1"), 1, "b1"),
        (r("b4"), -1, "b4"),
    ] {
        expect(&mut c, &format!("E8(b5) step 5: (a3-b3+b1, {name})"), ip(&e, &x), half(h));
    }
    // Printed with b1 in place of a1; the expansion beside it and the final
    // word both use the step-4 root b3-a1-b2.
    expect(&mut c, "E8(b5) step 5: (a3-b3+b1, b3-a1-b2)", ip(&e, &d), int(0));

    for which in [LongCycle::E8B3, LongCycle::E8B5] {
        let ok = rewrite::transform_long_cycle(which).map(|t| t.verify());
        c.check(format!("{which}: script checks pass and trace replays"), matches!(ok, Ok(true)), format!("{ok:?}"));
    }

    // Orthogonality of theta chains against the cycle, l = 4k.
    for l in [8usize, 12, 16] {
        let k = l / 4;
        let (alpha, beta) = own_cycle(l);
        let (lib_alpha, lib_beta) = rewrite::labeled_cycle(l);
        let sys = RootSystem::of(Family::D, l);
        let mut chains: Vec<(bool, usize, usize)> = (1..=k).map(|r| (true, 2 * k + 1 - r, r)).collect();
        chains.extend((2..=k).map(|r| (false, 2 * k + 2 - r, r)));
        for (beta_end, big, small) in chains {
            let t = if beta_end { "b" } else { "a" };
            let label = format!("D{l}: theta({t}{big},{t}{small})");
            let th = own_chain(&alpha, &beta, beta_end, big, small);
            c.check(format!("{label} is a root"), sys.is_root(&th), th.to_string());
            let (want_alpha, want_beta) = if beta_end {
                let a = if small == k { vec![] } else { vec![small + 1, big] };
                (sorted(a), sorted(vec![small, big]))
            } else {
                (sorted(vec![small, big]), sorted(vec![big - 1, small]))
            };
            let got = (touching(&th, &alpha), touching(&th, &beta));
            c.check(
                format!("{label}: non-orthogonal to alpha {want_alpha:?}, beta {want_beta:?}"),
                got == (want_alpha, want_beta),
                format!("{got:?}"),
            );

            let lib = rewrite::chain_root(ChainKind::Theta, &sys, big, small);
            let gram = |v: &Root, a: &[Root], b: &[Root]| a.iter().chain(b).map(|x| v.dot(x)).collect::<Vec<_>>();
            let same = lib.as_ref().map(|v| gram(v, &lib_alpha, &lib_beta) == gram(&th, &alpha, &beta));
            c.check(format!("{label}: library chain root has the same inner products"), matches!(same, Ok(true)), format!("{same:?}"));
        }
        let th = own_chain(&alpha, &beta, true, k + 1, k);
        expect(&mut c, &format!("D{l}: (theta(b{},b{k}), a{}) ", k + 1, k + 1), ip(&th, &alpha[k]), int(0));
        expect(&mut c, &format!("D{l}: (theta(b{},b{k}), b{k})", k + 1), ip(&th, &beta[k - 1]), half(-1));
        expect(&mut c, &format!("D{l}: (theta(b{},b{k}), b{})", k + 1, k + 1), ip(&th, &beta[k]), half(1));
    }
    // mu chains, l = 4k - 2.
    for l in [6usize, 10, 14] {
        let k = (l + 2) / 4;
        let (alpha, beta) = own_cycle(l);
        let mu = own_chain(&alpha, &beta, false, k + 1, k);
        expect(&mut c, &format!("D{l}: (mu(a{},a{k}), b{k})", k + 1), ip(&mu, &beta[k - 1]), int(0));
        expect(&mut c, &format!("D{l}: (mu(a{},a{k}), a{k})", k + 1), ip(&mu, &alpha[k - 1]), half(-1));
        expect(&mut c, &format!("D{l}: (mu(a{},a{k}), a{})", k + 1, k + 1), ip(&mu, &alpha[k]), half(1));
    }
    c.finish();
}

#[test]
fn criterion_04_commutation() {
    let mut c = Criterion::new(4, "chain roots commute across the colour products", 30);
    for l in (6..=16).step_by(2) {
        let sys = RootSystem::of(Family::D, l);
        let (case, k, m) =
            if l % 4 == 0 { (CommutationCase::FourK, l / 4, l / 2) } else { (CommutationCase::FourKMinusTwo, (l + 2) / 4, l / 2) };
        c.check(format!("D{l}: library check of both relations"), rewrite::verify_commutation(&sys, case), "");

        let (alpha, beta) = own_cycle(l);
        let (pa, pb) = (product(&alpha), product(&beta));
        let first_max = if l % 4 == 0 { k } else { k - 1 };
        let mut count = 0;
        let mut ok = true;
        for r in 1..=first_max {
            let big = m + 1 - r;
            let from = own_chain(&alpha, &beta, true, big, r);
            let to = own_chain(&alpha, &beta, false, big, r + 1);
            ok &= &reflection(&from) * &pa == &pa * &reflection(&to);
            count += 1;
        }
        for r in 2..=k {
            let big = m + 2 - r;
            let from = own_chain(&alpha, &beta, false, big, r);
            let to = own_chain(&alpha, &beta, true, big - 1, r);
            ok &= &reflection(&from) * &pb == &pb * &reflection(&to);
            count += 1;
        }
        c.check(format!("D{l}: {count} identities from hand-built matrices"), ok, "");
    }
    c.finish();
}

#[test]
fn criterion_05_five_cycles() {
    let mut c = Criterion::new(5, "oriented 5-cycles in D5", 5);
    let sys = RootSystem::of(Family::D, 5);
    let coxeter = poly(&[1, 1, 0, 0, 1, 1]);
    let a1 = poly(&[1, 0, 1, 1, 0, 1]);
    let mut elems = Vec::new();
    let mut polys = Vec::new();
    for r in 1..=4u8 {
        let (want, chi_want) = if r == 1 || r == 4 { ("D5", &coxeter) } else { ("D5(a1)", &a1) };
        match rewrite::five_cycle_classify(r) {
            Ok(class) => {
                c.check(format!("R = {r} classifies as {want}"), class.name.to_string() == want, class.name.to_string());
                let w = weyl::evaluate_roots(&sys, &class.omega).expect("word");
                let chi = w.charpoly();
                c.check(format!("R = {r}: charpoly {chi_want}"), chi == *chi_want, chi.to_string());
                polys.push(chi);
                elems.push(w);
            }
            Err(e) => c.check(format!("R = {r} classifies as {want}"), false, e.to_string()),
        }
    }
    polys.sort_by_key(|p| p.to_string());
    polys.dedup();
    c.check("two distinct charpolys among the four", polys.len() == 2, format!("{}", polys.len()));
    let order = oracle::group_order(&sys, GROUP_CAP);
    c.check("|W(D5)| = 1920 by enumeration", matches!(order, Ok(1920)), format!("{order:?}"));
    let classes = oracle::count_classes(&sys, &elems, GROUP_CAP);
    c.check("four Coxeter elements fall into 2 classes", elems.len() == 4 && matches!(classes, Ok(2)), format!("{classes:?}"));
    c.finish();
}

/// `sum c_i^2 n_i + 2 sum_edges c_i c_j (r_i, r_j)` for a path, with short
/// roots of square length 1 and long ones of square length `t`.
fn own_tits_path(norms: &[NormClass], coeffs: &[i64], t: &Rational) -> Rational {
    let n = |x: NormClass| if x == NormClass::Long { t.clone() } else { int(1) };
    let mut v = int(0);
    for (x, &ci) in norms.iter().zip(coeffs) {
        v += n(*x) * int(ci * ci);
    }
    for i in 0..norms.len() - 1 {
        let bond = if norms[i] == NormClass::Short && norms[i + 1] == NormClass::Short { half(-1) } else { -(t / int(2)) };
        v += int(2 * coeffs[i] * coeffs[i + 1]) * bond;
    }
    v
}

#[test]
fn criterion_06_tits_form() {
    use NormClass::{Long as L, Short as S};
    let mut c = Criterion::new(6, "Tits form vanishes on extended diagrams", 1);
    let mut cases: Vec<(String, Vec<NormClass>, Vec<i64>, i64)> = vec![
        ("F41".into(), vec![S, S, S, L, L], vec![1, 2, 3, 2, 1], 2),
        ("F42".into(), vec![L, L, L, S, S], vec![1, 2, 3, 4, 2], 2),
        ("B2".into(), vec![S, L, S], vec![1, 1, 1], 2),
        ("C2".into(), vec![L, S, L], vec![1, 2, 1], 2),
        ("B3".into(), vec![S, L, L, S], vec![1, 1, 1, 1], 2),
        ("C3".into(), vec![L, S, S, L], vec![1, 2, 2, 1], 2),
        ("G21".into(), vec![S, S, L], vec![1, 2, 1], 3),
        ("G22".into(), vec![L, L, S], vec![1, 2, 3], 3),
    ];
    for n in [4usize, 5] {
        let mut norms = vec![S];
        norms.extend(vec![L; n - 1]);
        norms.push(S);
        cases.push((format!("B{n}"), norms, vec![1; n + 1], 2));
        let mut norms = vec![L];
        norms.extend(vec![S; n - 1]);
        norms.push(L);
        let mut co = vec![1];
        co.extend(vec![2; n - 1]);
        co.push(1);
        cases.push((format!("C{n}"), norms, co, 2));
    }
    for (name, norms, coeffs, t) in cases {
        let t = int(t);
        let d = Diagram::solid_path(&norms);
        let cq: Vec<Rational> = coeffs.iter().map(|&x| int(x)).collect();
        let lib = tits_value(&d, &cq, &t);
        let own = own_tits_path(&norms, &coeffs, &t);
        c.check(
            format!("{name}{coeffs:?}, t = {t}"),
            matches!(&lib, Ok(v) if *v == int(0)) && own == int(0),
            format!("library {lib:?}, by hand {}", show(&own)),
        );
    }
    for n in 3..=8usize {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, EdgeStyle::Solid)).collect();
        let d = Diagram::simply_laced(n, &edges);
        // n * 1 + 2 * n * (-1/2) = 0
        let lib = tits_value(&d, &vec![int(1); n], &int(1));
        c.check(format!("solid {n}-cycle"), matches!(&lib, Ok(v) if *v == int(0)), format!("{lib:?}"));
    }
    c.finish();
}

#[test]
fn criterion_07_obtuse_square() {
    let mut c = Criterion::new(7, "all-obtuse multiply-laced square has infinite order", 1);
    let m = |rows: &[&[i64]]| Matrix::from_i64_rows(rows);
    let s_a = m(&[&[-1, 1, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let s_b = m(&[&[1, 0, 0, 0], &[2, -1, 1, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let s_g = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, -1, 2], &[0, 0, 0, 1]]);
    let s_d = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 1, -1]]);
    let big_c = m(&[&[4, 0, 2, -3], &[4, 0, 1, -2], &[2, 1, 1, -2], &[1, 0, 1, -1]]);
    let involutions = [&s_a, &s_b, &s_g, &s_d].iter().all(|s| (*s * *s).is_identity());
    c.check("the four generators are involutions", involutions, "");
    let prod = &(&(&s_a * &s_b) * &s_g) * &s_d;
    c.check("C equals the product of the generators", prod == big_c, format!("{:?}", prod.entries().iter().map(show).collect::<Vec<_>>()));
    let chi = exactla::charpoly(&big_c).expect("square");
    let want = poly(&[1, -4, -1, -4, 1]);
    c.check("charpoly x^4-4x^3-x^2-4x+1", chi == want, chi.to_string());
    c.check("not a product of cyclotomics", matches!(exactla::is_product_of_cyclotomics(&chi), Ok(false)), "");
    let (lo, hi) = (q(441, 100), q(443, 100));
    c.check("real root in [4.41, 4.43]", matches!(exactla::real_root_in_interval(&chi, &lo, &hi), Ok(true)), "");
    let (plo, phi) = (want.eval(&lo), want.eval(&hi));
    c.check("sign change across [4.41, 4.43]", (plo < int(0)) != (phi < int(0)) && plo != int(0), format!("{} {}", show(&plo), show(&phi)));
    c.check("order is infinite", weyl::order_of_matrix(&big_c, 64) == Order::Infinite, "");
    c.finish();
}

fn cycle(n: usize, dotted: usize) -> Diagram {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, if i < dotted { EdgeStyle::Dotted } else { EdgeStyle::Solid })).collect();
    Diagram::simply_laced(n, &edges)
}

fn theta_graph(lengths: &[usize]) -> Diagram {
    let mut edges = Vec::new();
    let mut next = 2;
    for &len in lengths {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next, EdgeStyle::Solid));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1, EdgeStyle::Solid));
    }
    Diagram::simply_laced(next, &edges)
}

#[test]
fn criterion_08_impossible_patterns() {
    let mut c = Criterion::new(8, "forbidden patterns have no realization", 300);
    let s = EdgeStyle::Solid;
    let wheel = Diagram::simply_laced(5, &[(0, 1, s), (1, 2, s), (2, 3, s), (3, 0, s), (4, 0, s), (4, 1, s), (4, 2, s), (4, 3, s)]);
    let mut targets: Vec<(String, RootSystem, Vec<Diagram>)> = Vec::new();
    for n in [4, 5] {
        for len in 3..=n {
            targets.push((format!("(i) {len}-cycles in A{n}"), RootSystem::of(Family::A, n), oracle::sign_classes(&cycle(len, 0))));
        }
    }
    for n in [4, 5] {
        for len in 3..=n {
            targets.push((format!("(ii) all-solid {len}-cycle in D{n}"), RootSystem::of(Family::D, n), vec![cycle(len, 0)]));
            let evens = (1..=len / 2).map(|k| cycle(len, 2 * k)).collect();
            targets.push((format!("(iii) even-dotted {len}-cycles in D{n}"), RootSystem::of(Family::D, n), evens));
        }
    }
    for lens in [[2, 2, 2], [2, 2, 3]] {
        targets.push((format!("(iv) theta{lens:?} in D6"), RootSystem::of(Family::D, 6), oracle::sign_classes(&theta_graph(&lens))));
    }
    for n in [5, 6] {
        targets.push((format!("(v) K2,3 in D{n}"), RootSystem::of(Family::D, n), oracle::sign_classes(&theta_graph(&[2, 2, 2]))));
        targets.push((format!("(v) W4 in D{n}"), RootSystem::of(Family::D, n), oracle::sign_classes(&wheel)));
    }
    for (name, sys, diagrams) in targets {
        let table = RootTable::new(&sys);
        let mut certified = true;
        let mut detail = format!("{} sign classes", diagrams.len());
        for d in &diagrams {
            let found = oracle::find_subsets_in(&table, d, 1, FirstVertex::All);
            if found.certified_empty() {
                continue;
            }
            certified = false;
            if let Some(hit) = found.matches.first() {
                // Confirm the witness directly: independent roots whose
                // inner products reproduce the target's edges.
                let roots = &hit.roots;
                let genuine = RootSystem::independent(roots)
                    && (0..d.len()).all(|i| {
                        (0..d.len()).all(|j| {
                            i == j || {
                                let v = roots[i].dot(&roots[j]);
                                d.edge(i, j).is_some() != (v == int(0))
                            }
                        })
                    });
                let list = roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
                detail = format!("realized by {list} (witness independently confirmed: {genuine})");
            } else {
                detail = "search not exhausted".into();
            }
            break;
        }
        c.check(name, certified, detail);
    }
    c.finish();
}

fn roots_of(family: Family, rank: usize) -> usize {
    match family {
        Family::A => rank * (rank + 1),
        Family::D => 2 * rank * (rank - 1),
        Family::E => match rank {
            6 => 72,
            7 => 126,
            _ => 240,
        },
        _ => unreachable!("simply laced only"),
    }
}

#[test]
fn criterion_09_complements_and_orbits() {
    let mut c = Criterion::new(9, "maximal-root complements and orthogonal tuple orbits", 120);
    let d = DiagramName::dynkin;
    let mut rows: Vec<(Family, usize, Vec<DiagramName>)> = vec![
        (Family::E, 6, vec![d(Family::A, 5)]),
        (Family::A, 5, vec![d(Family::A, 3)]),
        (Family::E, 7, vec![d(Family::D, 6)]),
        (Family::D, 6, vec![d(Family::D, 4), d(Family::A, 1)]),
        (Family::E, 8, vec![d(Family::E, 7)]),
    ];
    for n in 4..=7 {
        let mut want = match n - 2 {
            2 => vec![d(Family::A, 1), d(Family::A, 1)],
            3 => vec![d(Family::A, 3)],
            k => vec![d(Family::D, k)],
        };
        want.push(d(Family::A, 1));
        rows.push((Family::D, n, want));
    }
    for (family, rank, mut want) in rows {
        let sys = RootSystem::of(family, rank);
        let mut got = oracle::max_root_complement(&sys);
        got.sort();
        want.sort();
        let label = want.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+");
        c.check(format!("complement in {} is {label}", sys.id), got == want, format!("{got:?}"));
        // The complement's root count is the number of roots orthogonal to the maximal root.
        let top = sys.max_root();
        let orth = sys.all_roots().iter().filter(|r| r.dot(&top) == int(0)).count();
        let expected: usize = want.iter().map(|x| roots_of(x.family, x.rank)).sum();
        c.check(format!("{}: {orth} roots orthogonal to the maximal root", sys.id), orth == expected, format!("{label} has {expected}"));
    }
    for (family, rank, k, want) in
        [(Family::E, 6, 2, 1), (Family::D, 5, 2, 2), (Family::D, 6, 2, 2), (Family::E, 6, 3, 1), (Family::E, 7, 3, 2)]
    {
        let sys = RootSystem::of(family, rank);
        let got = oracle::orthogonal_tuple_orbits(&sys, k);
        c.check(format!("orthogonal {k}-sets in {}: {want} orbits", sys.id), got == want, format!("got {got}"));
    }
    c.finish();
}

#[test]
fn criterion_10_unique_classes() {
    let mut c = Criterion::new(10, "each small Carter diagram determines one class", 600);
    for n in ["D4(a1)", "D5(a1)", "D6(a1)", "D6(a2)", "E6(a1)", "E6(a2)"] {
        let name: DiagramName = n.parse().expect("name");
        let sys = RootSystem::of(name.family, name.rank);
        let verdict = oracle::verify_unique_class(&sys, &name, GROUP_CAP);
        c.check(format!("{n} in W({})", sys.id), matches!(verdict, Ok(true)), format!("{verdict:?}"));
    }
    c.finish();
}
