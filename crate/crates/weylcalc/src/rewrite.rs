//! Equivalence transformations of reflection words and the scripted
//! derivations that remove long cycles from Carter diagrams.
//!
//! Three primitive moves preserve the conjugacy class of `w = s_1 ... s_n`:
//! conjugation (including cyclic rotation of the word), s-permutation of two
//! adjacent reflections, and negation of a root. Each script below is a fixed
//! list of such moves; every displayed intermediate word and every inner
//! product the derivation relies on is checked exactly as it is produced.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{self, catalog, identify, DiagramError, DiagramName};
use crate::exactla::{int, q, Matrix, Polynomial, Rational};
use crate::oracle::{self, Conjugacy, OracleError};
use crate::rootsys::{Family, Root, RootSystem, RootSystemId};
use crate::weyl::{product_of_reflections, verify_bicolored, BicoloredVerdict, ReflectionWord, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("system mismatch: {0} vs {1}")]
    Mismatch(RootSystemId, RootSystemId),
    #[error("position {index} out of range for a word of length {len}")]
    Position { index: usize, len: usize },
    #[error("word does not match the expected pattern: {0}")]
    Pattern(String),
    #[error("script {script}, step {step}: {reason}")]
    Integrity { script: String, step: String, reason: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `(a, b) -> (s_a(b), a)`
    Left,
    /// `(a, b) -> (b, s_b(a))`
    Right,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// `v - 2 (v, m) / (m, m) m`, without reference to a root system.
pub fn reflect(mirror: &Root, v: &Root) -> Root {
    let c = int(2) * v.dot(mirror) / mirror.dot(mirror);
    v.sub(&mirror.scale(&c))
}

fn element_of(system: RootSystemId, roots: &[Root], dim: usize) -> WeylElement {
    let matrix = if roots.is_empty() { Matrix::identity(dim) } else { product_of_reflections(roots) };
    WeylElement { system, matrix, word: Some(ReflectionWord { system, roots: roots.to_vec() }) }
}

/// A word together with its evaluated element and the accumulated conjugator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteState {
    pub word: ReflectionWord,
    /// Display names of the word's roots.
    pub labels: Vec<String>,
    pub element: WeylElement,
    /// `u` with `u w_0 u^{-1} = element`.
    pub conjugator: WeylElement,
}

impl RewriteState {
    pub fn new(sys: &RootSystem, roots: Vec<Root>, labels: Vec<String>) -> Result<Self, RewriteError> {
        if labels.len() != roots.len() {
            return Err(RewriteError::Pattern(format!("{} labels for {} roots", labels.len(), roots.len())));
        }
        let word = ReflectionWord::new(sys, roots).map_err(|e| RewriteError::Pattern(e.to_string()))?;
        let element = element_of(sys.id, &word.roots, sys.ambient_dim);
        Ok(RewriteState { word, labels, element, conjugator: WeylElement::identity(sys) })
    }

    pub fn from_roots(sys: &RootSystem, roots: Vec<Root>) -> Result<Self, RewriteError> {
        let labels = roots.iter().map(|r| r.to_string()).collect();
        Self::new(sys, roots, labels)
    }

    pub fn roots(&self) -> &[Root] {
        &self.word.roots
    }

    pub fn len(&self) -> usize {
        self.word.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.roots.is_empty()
    }

    fn dim(&self) -> usize {
        self.element.matrix.rows()
    }

    fn with_roots(&self, roots: Vec<Root>, labels: Vec<String>) -> RewriteState {
        RewriteState {
            word: ReflectionWord { system: self.word.system, roots },
            labels,
            element: self.element.clone(),
            conjugator: self.conjugator.clone(),
        }
    }

    /// Both state invariants, against the element the trace started from.
    pub fn invariants_hold(&self, initial: &WeylElement) -> bool {
        let evaluated = element_of(self.word.system, &self.word.roots, self.dim());
        let u = &self.conjugator.matrix;
        evaluated.matrix == self.element.matrix && &(u * &initial.matrix) * &u.transpose() == self.element.matrix
    }

    pub fn charpoly(&self) -> Polynomial {
        self.element.span_charpoly()
    }
}

fn check_pos(s: &RewriteState, i: usize) -> Result<(), RewriteError> {
    if i >= s.len() {
        return Err(RewriteError::Position { index: i, len: s.len() });
    }
    Ok(())
}

/// `w -> u w u^{-1}`: every root of the word is mapped through `u`.
pub fn apply_conjugation(s: &RewriteState, u: &WeylElement) -> Result<RewriteState, RewriteError> {
    if u.system != s.word.system {
        return Err(RewriteError::Mismatch(s.word.system, u.system));
    }
    let roots: Vec<Root> = s.word.roots.iter().map(|r| u.apply(r)).collect();
    let labels = s
        .labels
        .iter()
        .zip(s.word.roots.iter().zip(&roots))
        .map(|(l, (old, new))| if old == new { l.clone() } else { new.to_string() })
        .collect();
    let m = &u.matrix;
    let mut out = s.with_roots(roots, labels);
    out.element.matrix = &(m * &s.element.matrix) * &m.transpose();
    out.element.word = Some(out.word.clone());
    out.conjugator.matrix = m * &s.conjugator.matrix;
    Ok(out)
}

/// Cyclic rotation: `shift > 0` moves the last `shift` reflections to the
/// front, `shift < 0` moves the first `-shift` to the back. This is
/// conjugation by the moved block (or its inverse).
pub fn apply_rotation(s: &RewriteState, shift: isize) -> Result<RewriteState, RewriteError> {
    let n = s.len();
    let k = shift.unsigned_abs();
    if k > n {
        return Err(RewriteError::Position { index: k, len: n });
    }
    let split = if shift >= 0 { n - k } else { k };
    let mut roots = s.word.roots[split..].to_vec();
    roots.extend_from_slice(&s.word.roots[..split]);
    let mut labels = s.labels[split..].to_vec();
    labels.extend_from_slice(&s.labels[..split]);
    // w = X Y -> Y X = Y w Y^{-1} where Y is the tail block.
    let y = element_of(s.word.system, &s.word.roots[split..], s.dim()).matrix;
    let mut out = s.with_roots(roots, labels);
    out.element = element_of(s.word.system, &out.word.roots, s.dim());
    out.conjugator.matrix = &y * &s.conjugator.matrix;
    Ok(out)
}

/// s-permutation of positions `i, i + 1`; the element is unchanged.
pub fn apply_s_permutation(s: &RewriteState, i: usize, dir: Direction) -> Result<RewriteState, RewriteError> {
    check_pos(s, i + 1)?;
    let (a, b) = (&s.word.roots[i], &s.word.roots[i + 1]);
    let mut roots = s.word.roots.clone();
    let mut labels = s.labels.clone();
    match dir {
        Direction::Left => {
            let img = reflect(a, b);
            labels.swap(i, i + 1);
            if img != *b {
                labels[i] = img.to_string();
            }
            roots[i] = img;
            roots[i + 1] = a.clone();
        }
        Direction::Right => {
            let img = reflect(b, a);
            labels.swap(i, i + 1);
            if img != *a {
                labels[i + 1] = img.to_string();
            }
            roots[i] = b.clone();
            roots[i + 1] = img;
        }
    }
    let mut out = s.with_roots(roots, labels);
    out.element.word = Some(out.word.clone());
    Ok(out)
}

/// `alpha -> -alpha` at position `i`; the element is unchanged.
pub fn apply_sign_flip(s: &RewriteState, i: usize) -> Result<RewriteState, RewriteError> {
    check_pos(s, i)?;
    let mut roots = s.word.roots.clone();
    roots[i] = roots[i].neg();
    let mut out = s.with_roots(roots, s.labels.clone());
    out.element.word = Some(out.word.clone());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Conjugate(Matrix),
    Rotate(isize),
    Permute(usize, Direction),
    Flip(usize),
}

impl Op {
    pub fn tag(&self) -> &'static str {
        match self {
            Op::Conjugate(_) | Op::Rotate(_) => "conj",
            Op::Permute(..) => "perm",
            Op::Flip(_) => "flip",
        }
    }

    pub fn apply(&self, s: &RewriteState) -> Result<RewriteState, RewriteError> {
        match self {
            Op::Conjugate(m) => apply_conjugation(s, &WeylElement { system: s.word.system, matrix: m.clone(), word: None }),
            Op::Rotate(k) => apply_rotation(s, *k),
            Op::Permute(i, d) => apply_s_permutation(s, *i, *d),
            Op::Flip(i) => apply_sign_flip(s, *i),
        }
    }

    pub fn inverse(&self) -> Op {
        match self {
            Op::Conjugate(m) => Op::Conjugate(m.transpose()),
            Op::Rotate(k) => Op::Rotate(-k),
            Op::Permute(i, d) => Op::Permute(*i, d.opposite()),
            Op::Flip(i) => Op::Flip(*i),
        }
    }

    fn describe(&self) -> String {
        match self {
            Op::Conjugate(_) => "conjugate".into(),
            Op::Rotate(k) if *k >= 0 => format!("rotate last {k} to front"),
            Op::Rotate(k) => format!("rotate first {} to back", -k),
            Op::Permute(i, Direction::Left) => format!("s-permute {i},{} left", i + 1),
            Op::Permute(i, Direction::Right) => format!("s-permute {i},{} right", i + 1),
            Op::Flip(i) => format!("negate {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub op: Op,
    pub detail: String,
    pub state: RewriteState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTrace {
    pub name: String,
    pub initial: RewriteState,
    pub steps: Vec<TraceStep>,
}

/// One serialized trace entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub op: String,
    pub detail: String,
    pub word_roots: Vec<String>,
    pub labels: Vec<String>,
    pub charpoly: String,
}

impl RewriteTrace {
    pub fn new(name: impl Into<String>, initial: RewriteState) -> Self {
        RewriteTrace { name: name.into(), initial, steps: Vec::new() }
    }

    pub fn final_state(&self) -> &RewriteState {
        self.steps.last().map_or(&self.initial, |s| &s.state)
    }

    pub fn push(&mut self, op: Op, detail: impl Into<String>) -> Result<&RewriteState, RewriteError> {
        let next = op.apply(self.final_state())?;
        self.steps.push(TraceStep { op, detail: detail.into(), state: next });
        Ok(self.final_state())
    }

    /// Re-applies every step from the initial state.
    pub fn replay(&self) -> Result<RewriteState, RewriteError> {
        let mut s = self.initial.clone();
        for step in &self.steps {
            let mut next = step.op.apply(&s)?;
            next.labels = step.state.labels.clone();
            s = next;
        }
        Ok(s)
    }

    /// Replay reproduces every snapshot, the invariants hold throughout and
    /// the characteristic polynomial never changes.
    pub fn verify(&self) -> bool {
        let w0 = &self.initial.element;
        let chi = self.initial.charpoly();
        let mut s = self.initial.clone();
        if !s.invariants_hold(w0) {
            return false;
        }
        for step in &self.steps {
            let Ok(next) = step.op.apply(&s) else { return false };
            if next.word != step.state.word || next.element != step.state.element || next.conjugator != step.state.conjugator {
                return false;
            }
            if !next.invariants_hold(w0) || next.charpoly() != chi {
                return false;
            }
            s = step.state.clone();
        }
        true
    }

    /// The same derivation read backwards, starting from this trace's final state.
    pub fn reversed(&self, name: impl Into<String>) -> Result<RewriteTrace, RewriteError> {
        let last = self.final_state();
        let start = RewriteState {
            word: last.word.clone(),
            labels: last.labels.clone(),
            element: last.element.clone(),
            conjugator: WeylElement { system: last.word.system, matrix: Matrix::identity(last.element.matrix.rows()), word: None },
        };
        let mut out = RewriteTrace::new(name, start);
        let mut targets: Vec<&RewriteState> = vec![&self.initial];
        targets.extend(self.steps.iter().map(|s| &s.state));
        targets.pop();
        for (step, target) in self.steps.iter().rev().zip(targets.into_iter().rev()) {
            let inv = step.op.inverse();
            let stage = step.detail.split(": ").next().unwrap_or_default();
            let detail = format!("{stage}: {}", inv.describe());
            out.push(inv, detail)?;
            let cur = out.steps.last_mut().expect("just pushed");
            debug_assert_eq!(cur.state.word, target.word);
            cur.state.labels = target.labels.clone();
        }
        Ok(out)
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        let rec = |op: &str, detail: &str, s: &RewriteState| TraceRecord {
            op: op.to_string(),
            detail: detail.to_string(),
            word_roots: s.word.roots.iter().map(|r| r.to_string()).collect(),
            labels: s.labels.clone(),
            charpoly: s.charpoly().to_string(),
        };
        let mut out = vec![rec("init", "initial word", &self.initial)];
        out.extend(self.steps.iter().map(|s| rec(s.op.tag(), &s.detail, &s.state)));
        out
    }
}

/// Builder for scripted derivations. Roots are addressed by label; named
/// roots are kept in an environment so each newly produced root is compared
/// with the closed form it should equal.
struct Script {
    name: String,
    step: String,
    env: BTreeMap<String, Root>,
    trace: RewriteTrace,
}

impl Script {
    fn new(name: &str, sys: &RootSystem, labels: &[&str], roots: &[Root]) -> Result<Self, RewriteError> {
        let state = RewriteState::new(sys, roots.to_vec(), labels.iter().map(|s| s.to_string()).collect())?;
        let env = labels.iter().map(|s| s.to_string()).zip(roots.iter().cloned()).collect();
        Ok(Script { name: name.into(), step: "start".into(), env, trace: RewriteTrace::new(name, state) })
    }

    fn fail(&self, reason: impl Into<String>) -> RewriteError {
        RewriteError::Integrity { script: self.name.clone(), step: self.step.clone(), reason: reason.into() }
    }

    fn at(&mut self, step: &str) {
        self.step = step.into();
    }

    fn state(&self) -> &RewriteState {
        self.trace.final_state()
    }

    fn has(&self, label: &str) -> bool {
        self.state().labels.iter().any(|l| l == label)
    }

    fn pos(&self, label: &str) -> Result<usize, RewriteError> {
        self.state().labels.iter().position(|l| l == label).ok_or_else(|| self.fail(format!("no root labelled {label}")))
    }

    fn root(&self, label: &str) -> Result<Root, RewriteError> {
        self.env.get(label).cloned().ok_or_else(|| self.fail(format!("undefined root {label}")))
    }

    /// Binds `name` to a signed combination of named roots.
    fn define(&mut self, name: &str, terms: &[(i64, &str)]) -> Result<Root, RewriteError> {
        let mut acc: Option<Root> = None;
        for &(c, l) in terms {
            let r = self.root(l)?.scale(&int(c));
            acc = Some(match acc {
                None => r,
                Some(a) => a.add(&r),
            });
        }
        let r = acc.ok_or_else(|| self.fail("empty combination"))?;
        self.bind(name, r.clone())?;
        Ok(r)
    }

    fn bind(&mut self, name: &str, r: Root) -> Result<(), RewriteError> {
        match self.env.get(name) {
            Some(prev) if *prev != r => Err(self.fail(format!("{name} = {r} contradicts earlier value {prev}"))),
            _ => {
                self.env.insert(name.into(), r);
                Ok(())
            }
        }
    }

    fn op(&mut self, op: Op) -> Result<(), RewriteError> {
        let detail = format!("{}: {}", self.step, op.describe());
        self.trace.push(op, detail)?;
        Ok(())
    }

    fn rotate(&mut self, k: isize) -> Result<(), RewriteError> {
        self.op(Op::Rotate(k))
    }

    /// Moves `label` to sit at position `to` using only swaps of orthogonal roots.
    fn commute_to(&mut self, label: &str, to: usize) -> Result<(), RewriteError> {
        let mut p = self.pos(label)?;
        while p != to {
            let (i, j) = if to > p { (p, p + 1) } else { (p - 1, p) };
            let s = self.state();
            if !s.word.roots[i].dot(&s.word.roots[j]).is_zero() {
                return Err(self.fail(format!("{} and {} do not commute", s.labels[i], s.labels[j])));
            }
            self.op(Op::Permute(i, Direction::Left))?;
            p = if to > p { p + 1 } else { p - 1 };
        }
        Ok(())
    }

    fn commute_before(&mut self, label: &str, other: &str) -> Result<(), RewriteError> {
        let (p, o) = (self.pos(label)?, self.pos(other)?);
        self.commute_to(label, if p < o { o - 1 } else { o })
    }

    fn commute_after(&mut self, label: &str, other: &str) -> Result<(), RewriteError> {
        let (p, o) = (self.pos(label)?, self.pos(other)?);
        self.commute_to(label, if p < o { o } else { o + 1 })
    }

    /// Moves `label` to position `to` by s-permutations, letting the moving
    /// root change; the result is renamed `name` and checked against its
    /// closed form when one is bound.
    fn carry_to(&mut self, label: &str, to: usize, name: &str) -> Result<(), RewriteError> {
        let mut p = self.pos(label)?;
        while p != to {
            if to > p {
                self.op(Op::Permute(p, Direction::Right))?;
                p += 1;
            } else {
                self.op(Op::Permute(p - 1, Direction::Left))?;
                p -= 1;
            }
        }
        let r = self.state().word.roots[p].clone();
        self.bind(name, r)?;
        let last = self.trace.steps.last_mut().map_or(&mut self.trace.initial, |s| &mut s.state);
        last.labels[p] = name.to_string();
        Ok(())
    }

    fn carry_before(&mut self, label: &str, other: &str, name: &str) -> Result<(), RewriteError> {
        let (p, o) = (self.pos(label)?, self.pos(other)?);
        self.carry_to(label, if p < o { o - 1 } else { o }, name)
    }

    fn carry_after(&mut self, label: &str, other: &str, name: &str) -> Result<(), RewriteError> {
        let (p, o) = (self.pos(label)?, self.pos(other)?);
        self.carry_to(label, if p < o { o } else { o + 1 }, name)
    }

    fn flip(&mut self, label: &str, name: &str) -> Result<(), RewriteError> {
        let p = self.pos(label)?;
        self.op(Op::Flip(p))?;
        let r = self.state().word.roots[p].clone();
        self.bind(name, r)?;
        self.trace.steps.last_mut().expect("just pushed").state.labels[p] = name.to_string();
        Ok(())
    }

    /// The current word must be exactly the listed roots; labels absent from
    /// the word's system are skipped so one listing serves several ranks.
    fn line(&self, labels: &[&str]) -> Result<(), RewriteError> {
        let want: Vec<&str> = labels.iter().copied().filter(|l| self.env.contains_key(*l)).collect();
        let got: Vec<&str> = self.state().labels.iter().map(String::as_str).collect();
        if want != got {
            return Err(self.fail(format!("word is {got:?}, expected {want:?}")));
        }
        for (l, r) in want.iter().zip(self.state().roots()) {
            if self.root(l)? != *r {
                return Err(self.fail(format!("{l} drifted from its closed form")));
            }
        }
        Ok(())
    }

    /// Normalized inner product `(a, b)` must equal `num / 2`.
    fn inner(&self, a: &str, b: &str, halves: i64) -> Result<(), RewriteError> {
        if !self.env.contains_key(a) || !self.env.contains_key(b) {
            return Ok(());
        }
        let (x, y) = (self.root(a)?, self.root(b)?);
        let v = x.dot(&y) / x.dot(&x);
        if v != q(halves, 2) {
            return Err(self.fail(format!(
                "({a}, {b}) = {}, expected {}",
                crate::exactla::fmt_rational(&v),
                crate::exactla::fmt_rational(&q(halves, 2))
            )));
        }
        Ok(())
    }

    /// Matrix identity between two products of reflections.
    fn identity(&self, lhs: &[&str], rhs: &[&str]) -> Result<(), RewriteError> {
        let eval = |ls: &[&str]| -> Result<Matrix, RewriteError> {
            let roots = ls.iter().filter(|l| self.env.contains_key(**l)).map(|l| self.root(l)).collect::<Result<Vec<_>, _>>()?;
            Ok(product_of_reflections(&roots))
        };
        if eval(lhs)? != eval(rhs)? {
            return Err(self.fail(format!("product {lhs:?} differs from {rhs:?}")));
        }
        Ok(())
    }

    fn finish(self) -> Result<RewriteTrace, RewriteError> {
        if !self.trace.verify() {
            return Err(RewriteError::Integrity { script: self.name, step: "replay".into(), reason: "trace does not replay".into() });
        }
        Ok(self.trace)
    }
}

/// 4-cycle elimination for the word `a1, b1, a2, b2` whose only dotted edge
/// is `a2 - b2`: ends at `a1, a2, a1 + b1 + b2, b2`, a Dynkin D4 tree.
pub fn eliminate_4cycle(s: &RewriteState) -> Result<RewriteTrace, RewriteError> {
    if s.len() != 4 {
        return Err(RewriteError::Pattern(format!("expected 4 roots, got {}", s.len())));
    }
    let r = s.roots();
    let ip = |i: usize, j: usize| r[i].dot(&r[j]) / r[i].dot(&r[i]);
    let expect = [((0, 1), -1), ((1, 2), -1), ((2, 3), 1), ((3, 0), -1), ((0, 2), 0), ((1, 3), 0)];
    for ((i, j), h) in expect {
        if ip(i, j) != q(h, 2) {
            return Err(RewriteError::Pattern(format!(
                "inner product of positions {i},{j} is {}, need {}",
                crate::exactla::fmt_rational(&ip(i, j)),
                crate::exactla::fmt_rational(&q(h, 2))
            )));
        }
    }
    let sys = RootSystem::build(s.word.system).expect("valid id");
    let mut sc = Script::new("4-cycle", &sys, &["a1", "b1", "a2", "b2"], r)?;
    sc.define("a1+b1", &[(1, "a1"), (1, "b1")])?;
    sc.define("a1+b1+b2", &[(1, "a1"), (1, "b1"), (1, "b2")])?;
    sc.at("s-permute a1, b1");
    sc.carry_before("b1", "a1", "a1+b1")?;
    sc.line(&["a1+b1", "a1", "a2", "b2"])?;
    sc.at("conjugate by s_{a1+b1}");
    sc.rotate(-1)?;
    sc.line(&["a1", "a2", "b2", "a1+b1"])?;
    sc.at("s-permute b2, a1+b1");
    sc.carry_before("a1+b1", "b2", "a1+b1+b2")?;
    sc.line(&["a1", "a2", "a1+b1+b2", "b2"])?;
    sc.inner("a1+b1+b2", "a1", 0)?;
    sc.inner("a1+b1+b2", "a2", 0)?;
    sc.inner("a1", "a2", 0)?;
    sc.finish()
}

/// Long-cycle scripts, by the b-diagram they start from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LongCycle {
    D6B2,
    E7B2,
    E8B3,
    E8B5,
    /// Pure cycle `D_l(b_{l/2-1})`, `l` even and at least 6.
    Dl(usize),
}

impl LongCycle {
    pub fn start(self) -> DiagramName {
        match self {
            LongCycle::D6B2 => DiagramName::b(Family::D, 6, 2),
            LongCycle::E7B2 => DiagramName::b(Family::E, 7, 2),
            LongCycle::E8B3 => DiagramName::b(Family::E, 8, 3),
            LongCycle::E8B5 => DiagramName::b(Family::E, 8, 5),
            LongCycle::Dl(l) => DiagramName::b(Family::D, l, l / 2 - 1),
        }
    }

    /// The a-diagram the trace must end at.
    pub fn target(self) -> DiagramName {
        match self {
            LongCycle::D6B2 => DiagramName::a(Family::D, 6, 2),
            LongCycle::E7B2 => DiagramName::a(Family::E, 7, 2),
            LongCycle::E8B3 => DiagramName::a(Family::E, 8, 3),
            LongCycle::E8B5 => DiagramName::a(Family::E, 8, 5),
            LongCycle::Dl(l) => DiagramName::a(Family::D, l, l / 2 - 1),
        }
    }
}

impl fmt::Display for LongCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LongCycle::D6B2 => f.write_str("d6b2"),
            LongCycle::E7B2 => f.write_str("e7b2"),
            LongCycle::E8B3 => f.write_str("e8b3"),
            LongCycle::E8B5 => f.write_str("e8b5"),
            LongCycle::Dl(l) => write!(f, "dl:{l}"),
        }
    }
}

impl FromStr for LongCycle {
    type Err = RewriteError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "d6b2" => Ok(LongCycle::D6B2),
            "e7b2" => Ok(LongCycle::E7B2),
            "e8b3" => Ok(LongCycle::E8B3),
            "e8b5" => Ok(LongCycle::E8B5),
            _ => {
                let l: usize = lower
                    .strip_prefix("dl:")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| RewriteError::Parameter(format!("unknown script {s:?}")))?;
                if l < 6 || l % 2 == 1 {
                    return Err(RewriteError::Parameter(format!("pure cycles need even l >= 6, got {l}")));
                }
                Ok(LongCycle::Dl(l))
            }
        }
    }
}

/// Runs the named script: the trace starts at the catalog word of the
/// b-diagram and ends at a bicoloured word whose diagram identifies as the
/// paired a-diagram.
pub fn transform_long_cycle(name: LongCycle) -> Result<RewriteTrace, RewriteError> {
    let trace = match name {
        LongCycle::D6B2 | LongCycle::E7B2 | LongCycle::E8B3 => square_family(name)?,
        LongCycle::E8B5 => e8_b5()?,
        LongCycle::Dl(l) => pure_cycle(l)?,
    };
    let start = catalog(&name.start())?;
    let (b, a) = start.diagram.bicolored().expect("catalog entries are bipartite");
    let catalog_word: Vec<Root> = b.into_iter().chain(a).collect();
    let fail = |reason: String| RewriteError::Integrity { script: name.to_string(), step: "endpoints".into(), reason };
    if trace.initial.word.roots != catalog_word {
        return Err(fail("trace does not start at the catalog word".into()));
    }
    let last = trace.final_state();
    let sys = RootSystem::build(last.word.system).expect("valid id");
    let d = diagram::from_labeled_roots(&sys, &last.labels, last.roots())?;
    let (w1, w2) = d.bicolored().ok_or_else(|| fail("final diagram is not bipartite".into()))?;
    if verify_bicolored(&w1, &w2, &last.element) != BicoloredVerdict::Verified
        && verify_bicolored(&w2, &w1, &last.element) != BicoloredVerdict::Verified
    {
        return Err(fail("final word is not a product of two involutions".into()));
    }
    if identify(&d)? != Some(name.target()) {
        return Err(fail(format!("final diagram does not identify as {}", name.target())));
    }
    Ok(trace)
}

/// The E8(a3) -> E8(b3) derivation and its rank-7 and rank-6 restrictions,
/// built in the forward direction and returned reversed.
fn square_family(which: LongCycle) -> Result<RewriteTrace, RewriteError> {
    let (labels, roots) = match which {
        LongCycle::E8B3 => {
            let e = catalog(&DiagramName::a(Family::E, 8, 3))?;
            (vec!["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"], e.diagram.roots)
        }
        LongCycle::E7B2 => {
            let e = catalog(&DiagramName::a(Family::E, 7, 2))?;
            (vec!["a2", "a3", "a4", "b1", "b2", "b3", "b4"], e.diagram.roots)
        }
        _ => {
            // The b-side catalog word fixes the roots; the a-side is recovered
            // from sigma = b3 + a3 - a2 - b2 + b4.
            let e = catalog(&DiagramName::b(Family::D, 6, 2))?;
            let r = &e.diagram.roots;
            let (b1, b2, b4, a2, a3, sigma) = (&r[0], &r[1], &r[2], &r[3], &r[4], &r[5]);
            let b3 = sigma.sub(a3).add(a2).add(b2).sub(b4);
            (vec!["a2", "a3", "b1", "b2", "b3", "b4"], vec![a2.clone(), a3.clone(), b1.clone(), b2.clone(), b3, b4.clone()])
        }
    };
    let start = which.start();
    let sys = RootSystem::of(start.family, start.rank);
    let mut s = Script::new(&which.to_string(), &sys, &labels, &roots)?;
    let all = ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"];
    s.line(&all)?;
    // The square a2 - b1 - a3 - b3 with pendants, as inner products.
    for (a, b, h) in [
        ("a1", "b1", -1),
        ("a2", "b1", -1),
        ("a2", "b2", -1),
        ("a2", "b3", 1),
        ("a3", "b1", -1),
        ("a3", "b3", -1),
        ("a3", "b4", -1),
        ("a4", "b3", -1),
        ("a1", "b2", 0),
        ("a1", "b3", 0),
        ("a1", "b4", 0),
        ("a2", "b4", 0),
        ("a3", "b2", 0),
        ("a4", "b1", 0),
        ("a4", "b2", 0),
        ("a4", "b4", 0),
    ] {
        s.inner(a, b, h)?;
    }
    s.define("mu", &[(1, "b3"), (1, "a3"), (-1, "a2")])?;
    s.define("sigma", &[(1, "mu"), (-1, "b2"), (1, "b4")])?;

    s.at("group s_a2 s_a3 s_b3");
    if s.has("a4") {
        s.commute_before("a4", "a2")?;
    }
    s.commute_before("b3", "b1")?;
    s.line(&["a1", "a4", "a2", "a3", "b3", "b1", "b2", "b4"])?;

    s.at("mu = b3 + a3 - a2");
    s.identity(&["a2", "a3", "b3"], &["mu", "a2", "a3"])?;
    s.carry_before("b3", "a2", "mu")?;
    s.line(&["a1", "a4", "mu", "a2", "a3", "b1", "b2", "b4"])?;

    s.at("conjugate by s_b2 s_b4");
    s.rotate(2)?;
    s.commute_before("b2", "mu")?;
    s.commute_after("b4", "b2")?;
    s.line(&["a1", "a4", "b2", "b4", "mu", "a2", "a3", "b1"])?;

    s.at("sigma = mu - b2 + b4");
    s.identity(&["b2", "b4", "mu"], &["sigma", "b2", "b4"])?;
    s.carry_before("mu", "b2", "sigma")?;
    s.line(&["a1", "a4", "sigma", "b2", "b4", "a2", "a3", "b1"])?;
    for (x, h) in [("a3", 0), ("a2", 0), ("b1", 0), ("a1", 0), ("b4", 1), ("b2", -1), ("a4", -1)] {
        s.inner("sigma", x, h)?;
    }

    if s.has("a4") {
        s.at("conjugate by s_a4");
        let front = s.state().labels[0].clone();
        if front != "a4" {
            s.commute_before("a4", &front)?;
        }
        s.rotate(-1)?;
        s.commute_after("a4", "b4")?;
        s.line(&["a1", "sigma", "b2", "b4", "a4", "a2", "a3", "b1"])?;
    }

    s.at("conjugate by s_sigma");
    let front = s.state().labels[0].clone();
    if front != "sigma" {
        s.commute_before("sigma", &front)?;
    }
    s.rotate(-1)?;
    s.commute_before("sigma", "b1")?;
    s.line(&["a1", "b2", "b4", "a4", "a2", "a3", "sigma", "b1"])?;

    if s.has("a1") {
        s.at("commute s_a1");
        s.commute_before("a1", "a2")?;
        s.line(&["b2", "b4", "a4", "a1", "a2", "a3", "sigma", "b1"])?;
    }

    s.at("conjugate by s_b1");
    s.rotate(1)?;
    s.line(&["b1", "b2", "b4", "a4", "a1", "a2", "a3", "sigma"])?;

    let forward = s.finish()?;
    let back = forward.reversed(which.to_string())?;
    if !back.verify() {
        return Err(RewriteError::Integrity {
            script: which.to_string(),
            step: "reverse".into(),
            reason: "reversed trace does not replay".into(),
        });
    }
    Ok(back)
}

fn e8_b5() -> Result<RewriteTrace, RewriteError> {
    let entry = catalog(&DiagramName::b(Family::E, 8, 5))?;
    let sys = RootSystem::of(Family::E, 8);
    let labels = ["b1", "b2", "b4", "g", "a1", "a2", "a3", "a4"];
    let mut s = Script::new("e8b5", &sys, &labels, &entry.diagram.roots)?;
    s.line(&labels)?;
    for (a, b, h) in [
        ("a1", "b2", -1),
        ("a1", "g", -1),
        ("a2", "b2", -1),
        ("a2", "b1", -1),
        ("a3", "b4", -1),
        ("a3", "b1", -1),
        ("a4", "b4", -1),
        ("a4", "b2", 1),
        ("a4", "g", -1),
        ("a1", "b1", 0),
        ("a1", "b4", 0),
        ("a2", "b4", 0),
        ("a2", "g", 0),
        ("a3", "b2", 0),
        ("a3", "g", 0),
        ("a4", "b1", 0),
    ] {
        s.inner(a, b, h)?;
    }
    s.define("mu", &[(1, "a4"), (-1, "b2"), (1, "b4")])?;
    s.define("b3", &[(1, "mu"), (-1, "a2"), (1, "a3")])?;
    s.define("a1+g", &[(1, "a1"), (1, "g")])?;
    s.define("-(a1+g)", &[(-1, "a1"), (-1, "g")])?;
    s.define("a1+g+b2", &[(1, "a1"), (1, "g"), (1, "b2")])?;
    s.define("b3-a1-b2", &[(1, "b3"), (-1, "a1"), (-1, "b2")])?;
    s.define("a3-b3+b1", &[(1, "a3"), (-1, "b3"), (1, "b1")])?;

    s.at("step 1: conjugate by s_a4");
    s.rotate(1)?;
    s.commute_after("b1", "b4")?;
    s.line(&["a4", "b2", "b4", "b1", "g", "a1", "a2", "a3"])?;
    s.at("step 1: mu = a4 - b2 + b4");
    s.carry_after("a4", "b4", "mu")?;
    s.line(&["b2", "b4", "mu", "b1", "g", "a1", "a2", "a3"])?;
    for (x, h) in [("a3", -1), ("b4", 1), ("a2", 1), ("b2", -1), ("a1", 1)] {
        s.inner("mu", x, h)?;
    }

    s.at("step 1: regroup");
    s.commute_before("b1", "mu")?;
    s.commute_after("a2", "mu")?;
    s.commute_after("a3", "a2")?;
    s.line(&["b2", "b4", "b1", "mu", "a2", "a3", "g", "a1"])?;
    s.at("step 1: b3 = mu - a2 + a3");
    s.carry_after("mu", "a3", "b3")?;
    s.line(&["b2", "b4", "b1", "a2", "a3", "b3", "g", "a1"])?;
    for (x, h) in [("a3", 1), ("b4", 0), ("a2", -1), ("b2", 0)] {
        s.inner("b3", x, h)?;
    }

    s.at("step 2: conjugate by s_b2 s_b4 s_b1");
    s.rotate(-3)?;
    s.carry_before("a1", "g", "a1+g")?;
    s.line(&["a2", "a3", "b3", "a1+g", "g", "b2", "b4", "b1"])?;
    s.at("step 2: move s_g");
    s.commute_after("g", "b1")?;
    s.line(&["a2", "a3", "b3", "a1+g", "b2", "b4", "b1", "g"])?;
    s.at("step 2: a1 + g + b2");
    s.carry_after("a1+g", "b1", "a1+g+b2")?;
    s.line(&["a2", "a3", "b3", "b2", "b4", "b1", "a1+g+b2", "g"])?;
    s.at("step 2: conjugate by s_a2 s_a3");
    s.rotate(-2)?;
    s.commute_after("g", "a3")?;
    s.line(&["b3", "b2", "b4", "b1", "a1+g+b2", "a2", "a3", "g"])?;
    s.at("step 2: regroup");
    s.commute_before("b2", "b3")?;
    s.commute_after("b1", "b2")?;
    s.line(&["b2", "b1", "b3", "b4", "a1+g+b2", "a2", "a3", "g"])?;
    for (x, h) in [("b3", 0), ("g", 1), ("a2", -1), ("b2", 1)] {
        s.inner("a1+g+b2", x, h)?;
    }

    s.at("step 3: regroup");
    s.commute_before("b2", "a1+g+b2")?;
    s.line(&["b1", "b3", "b4", "b2", "a1+g+b2", "a2", "a3", "g"])?;
    s.at("step 3: s_b2 s_{a1+g+b2} = s_{a1+g+b2} s_{a1+g}");
    s.identity(&["b2", "a1+g+b2"], &["a1+g+b2", "a1+g"])?;
    s.carry_after("b2", "a1+g+b2", "-(a1+g)")?;
    s.flip("-(a1+g)", "a1+g")?;
    s.line(&["b1", "b3", "b4", "a1+g+b2", "a1+g", "a2", "a3", "g"])?;
    for (x, h) in [("a2", 0), ("b1", 0), ("b3", 0), ("b4", 0), ("a3", 0), ("g", 1)] {
        s.inner("a1+g", x, h)?;
    }

    s.at("step 4: conjugate by s_g");
    s.rotate(1)?;
    s.commute_after("b1", "b3")?;
    s.commute_after("a1+g+b2", "b3")?;
    s.line(&["g", "b3", "a1+g+b2", "b1", "b4", "a1+g", "a2", "a3"])?;
    s.at("step 4: s_g s_b3 s_{a1+g+b2} = s_b3 s_{a1+g+b2} s_{b3-a1-b2}");
    s.identity(&["g", "b3", "a1+g+b2"], &["b3", "a1+g+b2", "b3-a1-b2"])?;
    s.carry_after("g", "a1+g+b2", "b3-a1-b2")?;
    s.commute_after("a1+g", "b3-a1-b2")?;
    s.line(&["b3", "a1+g+b2", "b3-a1-b2", "a1+g", "b1", "b4", "a2", "a3"])?;
    // (b3-a1-b2, a3) reduces to (b3, a3) = 1/2.
    for (x, h) in [("a1+g", 0), ("b1", 0), ("b4", 0), ("a2", 0), ("b3", 1), ("a1+g+b2", -1), ("a3", 1)] {
        s.inner("b3-a1-b2", x, h)?;
    }

    s.at("step 5: regroup");
    s.commute_after("b1", "b3")?;
    s.line(&["b3", "b1", "a1+g+b2", "b3-a1-b2", "a1+g", "b4", "a2", "a3"])?;
    s.at("step 5: conjugate by s_a3");
    s.rotate(1)?;
    s.line(&["a3", "b3", "b1", "a1+g+b2", "b3-a1-b2", "a1+g", "b4", "a2"])?;
    s.at("step 5: conjugate by s_b4");
    s.commute_after("b4", "a2")?;
    s.rotate(1)?;
    s.at("step 5: a3 - b3 + b1");
    s.carry_after("a3", "b1", "a3-b3+b1")?;
    s.commute_after("a3-b3+b1", "a1+g+b2")?;
    s.line(&["b4", "b3", "b1", "a1+g+b2", "a3-b3+b1", "b3-a1-b2", "a1+g", "a2"])?;
    for (x, h) in [("a2", 0), ("a1+g", 0), ("a1+g+b2", 0), ("b3", -1), ("b1", 1), ("b4", -1), ("b3-a1-b2", 0)] {
        s.inner("a3-b3+b1", x, h)?;
    }
    s.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    /// `l = 4k`
    Theta,
    /// `l = 4k - 2`
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChainEnd {
    Beta,
    Alpha,
}

/// Pure `l`-cycle labelled `a1, b1, a2, b2, ..., a_m, b_m` around the cycle
/// (`m = l/2`), with `a1 - b1` the only dotted edge. Returns `(alpha, beta)`.
pub fn labeled_cycle(l: usize) -> (Vec<Root>, Vec<Root>) {
    let (_, roots) = catalog::labeled_pure_cycle(l);
    let m = l / 2;
    (roots[m..].to_vec(), roots[..m].to_vec())
}

/// Alternating sum attached to a chain with endpoints of type `end`,
/// indices 1-based; `m` is the number of alpha roots.
fn chain_vector(alpha: &[Root], beta: &[Root], end: ChainEnd, l_idx: usize, r_idx: usize) -> Root {
    let m = alpha.len();
    let sum = |v: &[Root], from: usize, to: usize| -> Root {
        let mut acc = Root(vec![Rational::zero(); alpha[0].dim()]);
        for i in from..=to.min(m) {
            if i >= 1 {
                acc = acc.add(&v[i - 1]);
            }
        }
        acc
    };
    let (beta_minus_to, alpha_plus_from) = match end {
        ChainEnd::Beta => (r_idx, l_idx + 1),
        ChainEnd::Alpha => (r_idx.saturating_sub(1), l_idx),
    };
    alpha[0].sub(&sum(beta, 1, beta_minus_to)).sub(&sum(alpha, 2, r_idx)).add(&sum(beta, l_idx, m)).add(&sum(alpha, alpha_plus_from, m))
}

fn chain_params(kind: ChainKind, l: usize) -> Result<usize, RewriteError> {
    if l < 6 || l % 2 == 1 {
        return Err(RewriteError::Parameter(format!("chains live on even cycles of length >= 6, got {l}")));
    }
    match kind {
        ChainKind::Theta if l.is_multiple_of(4) => Ok(l / 4),
        ChainKind::Mu if l % 4 == 2 => Ok((l + 2) / 4),
        _ => Err(RewriteError::Parameter(format!(
            "{kind:?} chains need l = {} (mod 4), got {l}",
            if kind == ChainKind::Theta { 0 } else { 2 }
        ))),
    }
}

/// Endpoint type and validity of `(L, R)`; the pair is unordered, the larger
/// index is taken as `L`.
fn chain_end(kind: ChainKind, k: usize, l_idx: usize, r_idx: usize) -> Result<(ChainEnd, usize, usize), RewriteError> {
    let (l_idx, r_idx) = if r_idx > l_idx { (r_idx, l_idx) } else { (l_idx, r_idx) };
    let (beta_sum, beta_max) = match kind {
        ChainKind::Theta => (2 * k + 1, k),
        ChainKind::Mu => (2 * k, k - 1),
    };
    let bad = || RewriteError::Parameter(format!("index pair ({l_idx}, {r_idx}) violates the chain constraint for {kind:?}, k = {k}"));
    if l_idx + r_idx == beta_sum {
        if (1..=beta_max).contains(&r_idx) {
            return Ok((ChainEnd::Beta, l_idx, r_idx));
        }
    } else if l_idx + r_idx == beta_sum + 1 && (2..=k).contains(&r_idx) {
        return Ok((ChainEnd::Alpha, l_idx, r_idx));
    }
    Err(bad())
}

/// The chain root `theta(L, R)` (for `l = 4k`) or `mu(L, R)` (for
/// `l = 4k - 2`) on the labelled pure cycle of `D_l`. The endpoint type is
/// fixed by `L + R`.
pub fn chain_root(kind: ChainKind, sys: &RootSystem, l_idx: usize, r_idx: usize) -> Result<Root, RewriteError> {
    if sys.id.family != Family::D {
        return Err(RewriteError::Parameter(format!("chains are defined in D_l, not {}", sys.id)));
    }
    let l = sys.rank();
    let k = chain_params(kind, l)?;
    let (end, li, ri) = chain_end(kind, k, l_idx, r_idx)?;
    let (alpha, beta) = labeled_cycle(l);
    let r = chain_vector(&alpha, &beta, end, li, ri);
    if !sys.is_root(&r) {
        return Err(RewriteError::Integrity {
            script: "chain".into(),
            step: format!("({li}, {ri})"),
            reason: format!("{r} is not a root"),
        });
    }
    Ok(r)
}

/// Orthogonality pattern of a chain root against the cycle: the indices of
/// the alpha and beta roots it is not orthogonal to.
pub fn chain_neighbours(kind: ChainKind, l: usize, l_idx: usize, r_idx: usize) -> Result<(Vec<usize>, Vec<usize>), RewriteError> {
    let k = chain_params(kind, l)?;
    let (end, li, ri) = chain_end(kind, k, l_idx, r_idx)?;
    let mut alpha = match end {
        ChainEnd::Beta if ri + 1 == li => Vec::new(),
        ChainEnd::Beta => vec![ri + 1, li],
        ChainEnd::Alpha => vec![ri, li],
    };
    let mut beta = match end {
        ChainEnd::Beta => vec![ri, li],
        ChainEnd::Alpha if li - 1 == ri => Vec::new(),
        ChainEnd::Alpha => vec![li - 1, ri],
    };
    alpha.sort_unstable();
    beta.sort_unstable();
    alpha.dedup();
    beta.dedup();
    Ok((alpha, beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CommutationCase {
    /// `l = 4k`
    FourK,
    /// `l = 4k - 2`
    FourKMinusTwo,
}

/// Both commutation relations as matrix identities for every admissible
/// `(L, R)`: a chain root moved across the product of the opposite colour
/// becomes the next chain root.
pub fn verify_commutation(sys: &RootSystem, case: CommutationCase) -> bool {
    if sys.id.family != Family::D || sys.rank() % 2 == 1 {
        return false;
    }
    let l = sys.rank();
    let kind = match case {
        CommutationCase::FourK => ChainKind::Theta,
        CommutationCase::FourKMinusTwo => ChainKind::Mu,
    };
    let Ok(k) = chain_params(kind, l) else { return false };
    let (alpha, beta) = labeled_cycle(l);
    let m = l / 2;
    let pa = product_of_reflections(&alpha);
    let pb = product_of_reflections(&beta);
    let refl = |r: &Root| crate::rootsys::reflection_matrix_raw(r);
    let beta_max = if kind == ChainKind::Theta { k } else { k - 1 };
    let lines_one = (1..=beta_max).all(|r| {
        let li = m + 1 - r;
        let from = chain_vector(&alpha, &beta, ChainEnd::Beta, li, r);
        let to = chain_vector(&alpha, &beta, ChainEnd::Alpha, li, r + 1);
        &refl(&from) * &pa == &pa * &refl(&to)
    });
    let lines_two = (2..=k).all(|r| {
        let li = m + 2 - r;
        let from = chain_vector(&alpha, &beta, ChainEnd::Alpha, li, r);
        let to = chain_vector(&alpha, &beta, ChainEnd::Beta, li - 1, r);
        &refl(&from) * &pb == &pb * &refl(&to)
    });
    lines_one && lines_two
}

fn chain_label(kind: ChainKind, end: ChainEnd, l_idx: usize, r_idx: usize) -> String {
    let f = if kind == ChainKind::Theta { "theta" } else { "mu" };
    let t = if end == ChainEnd::Beta { "b" } else { "a" };
    format!("{f}({t}{l_idx},{t}{r_idx})")
}

/// Negates and reorders a pure-cycle word `[beta class | alpha class]` into
/// `b1 .. b_m, a1 .. a_m` around the cycle with `a1 - b1` the only dotted edge.
fn prepare_cycle(s: &mut Script, m: usize) -> Result<(), RewriteError> {
    s.at("normalize cycle");
    let st = s.state().clone();
    let r = st.roots();
    let n = r.len();
    let adj = |i: usize, j: usize| !r[i].dot(&r[j]).is_zero();
    let dotted0 = (m..n)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .find(|&(a, b)| r[a].dot(&r[b]) > Rational::zero())
        .ok_or_else(|| s.fail("cycle has no dotted edge"))?;
    // Walk a1, b1, a2, b2, ... around the cycle.
    let mut order = vec![dotted0.0, dotted0.1];
    while order.len() < n {
        let cur = *order.last().expect("nonempty");
        let prev = order[order.len() - 2];
        let next = (0..n).find(|&v| v != prev && v != cur && adj(cur, v) && !order.contains(&v));
        order.push(next.ok_or_else(|| s.fail("word is not a pure cycle"))?);
    }
    if !adj(order[n - 1], order[0]) {
        return Err(s.fail("word is not a pure cycle"));
    }
    let names: Vec<String> = (0..n).map(|p| if p % 2 == 0 { format!("a{}", p / 2 + 1) } else { format!("b{}", p / 2 + 1) }).collect();
    for (p, &v) in order.iter().enumerate() {
        let last = s.trace.steps.last_mut().map_or(&mut s.trace.initial, |x| &mut x.state);
        last.labels[v] = names[p].clone();
    }
    // Fix signs along the walk from b1 onwards.
    let mut roots: Vec<Root> = r.to_vec();
    for p in 2..n {
        let (u, v) = (order[p - 1], order[p]);
        if roots[u].dot(&roots[v]) > Rational::zero() {
            s.op(Op::Flip(v))?;
            roots[v] = roots[v].neg();
        }
    }
    let cur = s.state().clone();
    for (l, r) in cur.labels.iter().zip(cur.roots()) {
        s.env.insert(l.clone(), r.clone());
    }
    for i in 1..=m {
        let target = i - 1;
        s.commute_to(&format!("b{i}"), target)?;
    }
    for i in 1..=m {
        s.commute_to(&format!("a{i}"), m + i - 1)?;
    }
    Ok(())
}

/// Pure cycle `D_l(b_{l/2-1})` to `D_l(a_{l/2-1})` through chain roots.
fn pure_cycle(l: usize) -> Result<RewriteTrace, RewriteError> {
    let m = l / 2;
    let kind = if l.is_multiple_of(4) { ChainKind::Theta } else { ChainKind::Mu };
    let k = chain_params(kind, l)?;
    let entry = catalog(&DiagramName::b(Family::D, l, m - 1))?;
    let (b, a) = entry.diagram.bicolored().expect("bipartite");
    let sys = RootSystem::of(Family::D, l);
    let start: Vec<Root> = b.into_iter().chain(a).collect();
    let labels: Vec<String> = (0..l).map(|i| format!("v{i}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let name = format!("dl:{l}");
    let mut s = Script::new(&name, &sys, &label_refs, &start)?;
    prepare_cycle(&mut s, m)?;
    let bs: Vec<String> = (1..=m).map(|i| format!("b{i}")).collect();
    let as_: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
    let alpha: Vec<Root> = as_.iter().map(|x| s.root(x)).collect::<Result<_, _>>()?;
    let beta: Vec<Root> = bs.iter().map(|x| s.root(x)).collect::<Result<_, _>>()?;
    let line_of =
        |front: &[String], mid: &[String], back: &[String]| -> Vec<String> { front.iter().chain(mid).chain(back).cloned().collect() };
    let as_tail = &as_[1..];
    let check_line = |s: &Script, v: &[String]| -> Result<(), RewriteError> {
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        s.line(&refs)
    };
    check_line(&s, &line_of(&bs, &as_, &[]))?;
    for i in 1..=m {
        s.inner(&format!("a{i}"), &format!("b{i}"), if i == 1 { 1 } else { -1 })?;
        s.inner(&format!("b{i}"), &format!("a{}", i % m + 1), -1)?;
    }

    // Bind a chain root and check its orthogonality pattern against the cycle.
    let bind_chain = |s: &mut Script, end: ChainEnd, li: usize, ri: usize| -> Result<String, RewriteError> {
        let label = chain_label(kind, end, li, ri);
        let r = chain_vector(&alpha, &beta, end, li, ri);
        if !sys.is_root(&r) {
            return Err(s.fail(format!("{label} = {r} is not a root")));
        }
        s.bind(&label, r)?;
        let (na, nb) = chain_neighbours(kind, l, li, ri)?;
        for i in 1..=m {
            let ra = s.root(&format!("a{i}"))?;
            let rb = s.root(&format!("b{i}"))?;
            let theta = s.root(&label)?;
            if ra.dot(&theta).is_zero() == na.contains(&i) || rb.dot(&theta).is_zero() == nb.contains(&i) {
                return Err(s.fail(format!("{label} has the wrong orthogonality pattern at index {i}")));
            }
        }
        Ok(label)
    };

    s.at("conjugate by s_a1");
    s.commute_to("a1", l - 1)?;
    s.rotate(1)?;
    s.commute_after(&format!("b{m}"), "b1")?;
    let mut expect = vec!["a1".to_string(), "b1".into(), format!("b{m}")];
    expect.extend(bs[1..m - 1].iter().cloned());
    expect.extend(as_tail.iter().cloned());
    check_line(&s, &expect)?;

    let (mut li, mut ri) = (m, 1);
    let mut chain = bind_chain(&mut s, ChainEnd::Beta, li, ri)?;
    s.at("first chain root");
    {
        let ra1 = s.root("a1")?;
        let img = reflect(&beta[0], &reflect(&beta[m - 1], &ra1));
        if img != s.root(&chain)? {
            return Err(s.fail("s_b1 s_bm (a1) is not the first chain root"));
        }
    }
    s.carry_after("a1", &format!("b{m}"), &chain)?;
    s.commute_after(&chain, &format!("b{}", m - 1))?;
    s.commute_after(&format!("b{m}"), &format!("b{}", m - 1))?;
    check_line(&s, &line_of(&bs, std::slice::from_ref(&chain), as_tail))?;

    loop {
        if kind == ChainKind::Theta && (li, ri) == (k + 1, k) {
            break;
        }
        s.at(&format!("cross alpha product with {chain}"));
        let next = bind_chain(&mut s, ChainEnd::Alpha, li, ri + 1)?;
        let last_a = as_.last().expect("m >= 3").clone();
        s.carry_after(&chain, &last_a, &next)?;
        check_line(&s, &line_of(&bs, as_tail, std::slice::from_ref(&next)))?;
        s.at(&format!("conjugate by s_{next}"));
        s.rotate(1)?;
        check_line(&s, &line_of(std::slice::from_ref(&next), &bs, as_tail))?;
        if kind == ChainKind::Mu && (li, ri + 1) == (k + 1, k) {
            chain = next;
            break;
        }
        s.at(&format!("cross beta product with {next}"));
        let after = bind_chain(&mut s, ChainEnd::Beta, li - 1, ri + 1)?;
        s.carry_after(&next, &bs[m - 1], &after)?;
        check_line(&s, &line_of(&bs, std::slice::from_ref(&after), as_tail))?;
        chain = after;
        li -= 1;
        ri += 1;
    }

    s.at("final orthogonality");
    match kind {
        ChainKind::Theta => {
            for i in 1..=m {
                s.inner(&chain, &format!("a{i}"), 0)?;
            }
            s.inner(&chain, &format!("b{k}"), -1)?;
            s.inner(&chain, &format!("b{}", k + 1), 1)?;
        }
        ChainKind::Mu => {
            for i in 1..=m {
                s.inner(&chain, &format!("b{i}"), 0)?;
            }
            s.inner(&chain, &format!("a{k}"), -1)?;
            s.inner(&chain, &format!("a{}", k + 1), 1)?;
        }
    }
    s.finish()
}

/// Orientation classes of the 5-cycle `phi1 .. phi5` in D5.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiveCycleClass {
    pub r_lambda: u8,
    pub name: DiagramName,
    /// The oriented cycle's Coxeter word.
    pub omega: Vec<Root>,
    /// Bicoloured word `w0 = (alpha)(beta)`.
    pub alpha: Vec<Root>,
    pub beta: Vec<Root>,
    /// `u` with `u w_omega u^{-1} = w0`.
    pub conjugator: WeylElement,
    /// Scripted derivation, for the two orientations that have one.
    pub trace: Option<RewriteTrace>,
}

/// `phi_i = e_i - e_{i+1}` for `i < 5` and `phi5 = -e1 - e5`: a 5-cycle in
/// D5 whose only dotted edge is `phi4 - phi5`.
pub fn five_cycle_roots() -> Vec<Root> {
    let mut out: Vec<Root> = (0..4)
        .map(|i| {
            let mut v = [0i64; 5];
            v[i] = 1;
            v[i + 1] = -1;
            Root::from_i64(&v)
        })
        .collect();
    out.push(Root::from_i64(&[-1, 0, 0, 0, -1]));
    out
}

fn five_cycle_script(r_lambda: u8) -> Result<RewriteTrace, RewriteError> {
    let sys = RootSystem::of(Family::D, 5);
    let phi = five_cycle_roots();
    let labels = ["p1", "p2", "p3", "p4", "p5"];
    let order: [usize; 5] = if r_lambda == 1 { [0, 4, 3, 2, 1] } else { [0, 1, 4, 3, 2] };
    let roots: Vec<Root> = order.iter().map(|&i| phi[i].clone()).collect();
    let lab: Vec<&str> = order.iter().map(|&i| labels[i]).collect();
    let mut s = Script::new(&format!("5-cycle R={r_lambda}"), &sys, &lab, &roots)?;
    s.define("p3+p4", &[(1, "p3"), (1, "p4")])?;
    s.at("s_p4 s_p3 = s_p3 s_{p3+p4}");
    s.carry_after("p4", "p3", "p3+p4")?;
    if r_lambda == 1 {
        s.define("y", &[(1, "p1"), (1, "p2"), (1, "p3"), (1, "p4")])?;
        s.line(&["p1", "p5", "p3", "p3+p4", "p2"])?;
        s.at("conjugate by s_p1");
        s.rotate(-1)?;
        s.commute_before("p3", "p5")?;
        s.line(&["p3", "p5", "p3+p4", "p2", "p1"])?;
        s.at("move s_{p3+p4} right");
        s.carry_after("p3+p4", "p1", "y")?;
        s.line(&["p3", "p5", "p2", "p1", "y"])?;
        s.at("conjugate by s_p3");
        s.rotate(-1)?;
        s.commute_after("p3", "p1")?;
        s.line(&["p5", "p2", "p1", "p3", "y"])?;
        s.at("conjugate by s_y");
        s.rotate(1)?;
        s.commute_before("p3", "p1")?;
        s.line(&["y", "p5", "p2", "p3", "p1"])?;
        s.inner("y", "p5", 0)?;
        s.inner("y", "p2", 0)?;
    } else {
        s.define("z", &[(1, "p3"), (1, "p4"), (-1, "p5"), (1, "p2")])?;
        s.line(&["p1", "p2", "p5", "p3", "p3+p4"])?;
        s.at("conjugate by s_{p3+p4}");
        s.rotate(1)?;
        s.commute_after("p3+p4", "p1")?;
        s.line(&["p1", "p3+p4", "p2", "p5", "p3"])?;
        s.at("move s_{p3+p4} right");
        s.carry_after("p3+p4", "p5", "z")?;
        s.line(&["p1", "p2", "p5", "z", "p3"])?;
        s.at("conjugate by s_p1");
        s.rotate(-1)?;
        s.commute_before("p5", "p2")?;
        s.commute_before("p1", "p3")?;
        s.line(&["p5", "p2", "z", "p1", "p3"])?;
        s.inner("z", "p1", 0)?;
        s.inner("z", "p3", 0)?;
    }
    s.finish()
}

/// Classifies the Coxeter element of the 5-cycle orientation with the given
/// clockwise-arrow count: D5 for 1 and 4, D5(a1) for 2 and 3.
pub fn five_cycle_classify(r_lambda: u8) -> Result<FiveCycleClass, RewriteError> {
    if !(1..=4).contains(&r_lambda) {
        return Err(RewriteError::Parameter(format!("R must be in 1..=4, got {r_lambda}")));
    }
    let sys = RootSystem::of(Family::D, 5);
    let phi = five_cycle_roots();
    let omega_order: [usize; 5] = match r_lambda {
        1 => [0, 4, 3, 2, 1],
        2 => [0, 1, 4, 3, 2],
        3 => [0, 2, 3, 4, 1],
        _ => [0, 1, 2, 3, 4],
    };
    let omega: Vec<Root> = omega_order.iter().map(|&i| phi[i].clone()).collect();
    let base = if r_lambda == 1 || r_lambda == 4 { 1 } else { 2 };
    let trace = five_cycle_script(base)?;
    let last = trace.final_state().clone();
    let split = if base == 1 { 3 } else { 2 };
    let alpha = last.roots()[..split].to_vec();
    let beta = last.roots()[split..].to_vec();
    let (conjugator, trace) = if r_lambda == base {
        (last.conjugator.clone(), Some(trace))
    } else {
        let w = crate::weyl::evaluate_roots(&sys, &omega).map_err(|e| RewriteError::Pattern(e.to_string()))?;
        match oracle::are_conjugate(&sys, &w, &last.element, oracle::DEFAULT_ORBIT_CAP)? {
            Conjugacy::Witness(u) => (u, None),
            _ => {
                return Err(RewriteError::Integrity {
                    script: "5-cycle".into(),
                    step: format!("R={r_lambda}"),
                    reason: "orientation not conjugate to its class representative".into(),
                })
            }
        }
    };
    let w = crate::weyl::evaluate_roots(&sys, &omega).map_err(|e| RewriteError::Pattern(e.to_string()))?;
    let target = crate::weyl::conjugate(&w, &conjugator).map_err(|e| RewriteError::Pattern(e.to_string()))?;
    if verify_bicolored(&alpha, &beta, &target) != BicoloredVerdict::Verified {
        return Err(RewriteError::Integrity {
            script: "5-cycle".into(),
            step: format!("R={r_lambda}"),
            reason: "w0 is not the conjugated Coxeter element".into(),
        });
    }
    let d = diagram::from_roots(&sys, &[alpha.clone(), beta.clone()].concat())?;
    let name = identify(&d)?.ok_or_else(|| RewriteError::Integrity {
        script: "5-cycle".into(),
        step: "identify".into(),
        reason: "w0 diagram not in catalog".into(),
    })?;
    Ok(FiveCycleClass { r_lambda, name, omega, alpha, beta, conjugator, trace })
}
