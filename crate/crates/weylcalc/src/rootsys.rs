//! Coordinate models of the irreducible root systems.
//!
//! Coordinates stay integral or half-integral. Inner products on the scale
//! where short roots have norm 1 come from [`RootSystem::normalized_inner`],
//! which divides the raw dot product by the short-root norm of the model.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{fmt_rational, int, parse_rational, q, Matrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = RootSysError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(RootSysError::InvalidId(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemId {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemId {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSysError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(RootSystemId { family, rank })
        } else {
            Err(RootSysError::InvalidId(format!("{family}{rank} is not a root system")))
        }
    }
}

impl fmt::Display for RootSystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemId {
    type Err = RootSysError;
    /// Accepts `D4`, `d4`, `E_6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam: Family = chars.next().ok_or_else(|| RootSysError::InvalidId("empty system name".into()))?.to_string().parse()?;
        let rest = chars.as_str().trim_start_matches('_');
        let rank = rest.parse().map_err(|_| RootSysError::InvalidId(format!("bad rank in {s:?}")))?;
        RootSystemId::new(fam, rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSysError {
    #[error("invalid root system: {0}")]
    InvalidId(String),
    #[error("not a root of {system}: {root}")]
    NotARoot { system: RootSystemId, root: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("cannot parse root literal {0:?}")]
    Parse(String),
}

/// Exact coordinate vector in a model's ambient space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub Vec<Rational>);

impl Root {
    pub fn from_i64(v: &[i64]) -> Self {
        Root(v.iter().map(|&c| int(c)).collect())
    }

    /// Coordinates given as numerators over 2.
    pub fn from_halves(v: &[i64]) -> Self {
        Root(v.iter().map(|&c| q(c, 2)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Root) -> Rational {
        self.0.iter().zip(&other.0).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rational) -> Root {
        Root(self.0.iter().map(|a| a * c).collect())
    }

    /// `sum c_i v_i` over an integer combination of roots.
    pub fn combination(terms: &[(i64, &Root)]) -> Root {
        let dim = terms.first().map_or(0, |(_, r)| r.dim());
        let mut acc = Root(vec![Rational::zero(); dim]);
        for (c, r) in terms {
            acc = acc.add(&r.scale(&int(*c)));
        }
        acc
    }

    /// True iff one root is a rational multiple of the other.
    pub fn is_proportional(&self, other: &Root) -> bool {
        let d = self.dot(other);
        d.clone() * d == self.dot(self) * other.dot(other)
    }

    /// The representative of `{v, -v}` whose first nonzero coordinate is positive.
    pub fn sign_canonical(&self) -> Root {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Parses literals such as `e1-e2`, `2e3`, `1/2e1+1/2e2` or `(e1-e2-e3+e4)/2`
    /// into a vector of dimension `dim`.
    pub fn parse(s: &str, dim: usize) -> Result<Root, RootSysError> {
        let err = || RootSysError::Parse(s.to_string());
        let mut body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut outer = Rational::one();
        if body.starts_with('(') {
            let close = body.rfind(')').ok_or_else(err)?;
            let tail = &body[close + 1..];
            outer = if tail.is_empty() {
                Rational::one()
            } else {
                let d = tail.strip_prefix('/').ok_or_else(err)?;
                let d: i64 = d.parse().map_err(|_| err())?;
                if d == 0 {
                    return Err(err());
                }
                q(1, d)
            };
            body = body[1..close].to_string();
        }
        if body.is_empty() {
            return Err(err());
        }
        let mut coords = vec![Rational::zero(); dim];
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in body.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('/') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (sign, t) = match t.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), t.strip_prefix('+').unwrap_or(&t)),
            };
            let epos = t.find('e').ok_or_else(err)?;
            let coef = if epos == 0 { Rational::one() } else { parse_rational(t[..epos].trim_end_matches('*')).ok_or_else(err)? };
            let idx: usize = t[epos + 1..].parse().map_err(|_| err())?;
            if idx == 0 || idx > dim {
                return Err(RootSysError::Dimension { expected: dim, got: idx });
            }
            coords[idx - 1] += sign * coef;
        }
        Ok(Root(coords.into_iter().map(|c| c * &outer).collect()))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let integral = self.0.iter().all(|c| c.is_integer());
        let two = int(2);
        let halves = !integral && self.0.iter().all(|c| (c * &two).is_integer());
        let (scale, wrap) = if halves { (two, true) } else { (Rational::one(), false) };
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate() {
            let c = c * &scale;
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&fmt_rational(&a));
            }
            out.push_str(&format!("e{}", i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        if wrap {
            write!(f, "({out})/2")
        } else {
            f.write_str(&out)
        }
    }
}

/// Short or long relative to the model's root lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormClass {
    Short,
    Long,
}

/// An irreducible root system in its standard coordinate model.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub id: RootSystemId,
    pub ambient_dim: usize,
    pub simple_roots: Vec<Root>,
    /// Squared ratio of long to short root lengths.
    pub t: Rational,
    /// Smallest squared length occurring in the model.
    pub short_norm: Rational,
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
    /// Inverse Gram matrix of the simple roots, for simple-root coordinates.
    simple_gram_inv: Matrix,
}

fn unit(dim: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = c;
    v
}

fn diff(dim: usize, i: usize, j: usize) -> Root {
    let mut v = unit(dim, i, 1);
    v[j] = -1;
    Root::from_i64(&v)
}

fn e8_simple() -> Vec<Root> {
    let mut s = vec![Root::from_halves(&[1, -1, -1, -1, -1, -1, -1, 1])];
    s.push(Root::from_i64(&[1, 1, 0, 0, 0, 0, 0, 0]));
    for i in 0..6 {
        s.push(diff(8, i + 1, i));
    }
    s
}

fn simple_roots_for(id: RootSystemId) -> (usize, Vec<Root>) {
    let n = id.rank;
    match id.family {
        Family::A => (n + 1, (0..n).map(|i| diff(n + 1, i, i + 1)).collect()),
        Family::B => {
            let mut s: Vec<Root> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(Root::from_i64(&unit(n, n - 1, 1)));
            (n, s)
        }
        Family::C => {
            let mut s: Vec<Root> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(Root::from_i64(&unit(n, n - 1, 2)));
            (n, s)
        }
        Family::D => {
            let mut s: Vec<Root> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            let mut last = unit(n, n - 2, 1);
            last[n - 1] = 1;
            s.push(Root::from_i64(&last));
            (n, s)
        }
        Family::E => (8, e8_simple().into_iter().take(n).collect()),
        Family::F => (
            4,
            vec![
                Root::from_i64(&[0, 1, -1, 0]),
                Root::from_i64(&[0, 0, 1, -1]),
                Root::from_i64(&[0, 0, 0, 1]),
                Root::from_halves(&[1, -1, -1, -1]),
            ],
        ),
        Family::G => (3, vec![Root::from_i64(&[1, -1, 0]), Root::from_i64(&[-2, 1, 1])]),
    }
}

fn reflect_raw(mirror: &Root, v: &Root) -> Root {
    let c = int(2) * v.dot(mirror) / mirror.dot(mirror);
    v.sub(&mirror.scale(&c))
}

impl RootSystem {
    /// Builds the standard model; the full root set is the closure of the
    /// simple roots under their reflections.
    pub fn build(id: RootSystemId) -> Result<RootSystem, RootSysError> {
        let id = RootSystemId::new(id.family, id.rank)?;
        let (ambient_dim, simple_roots) = simple_roots_for(id);
        let mut seen: HashSet<Root> = simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Root> = simple_roots.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for s in &simple_roots {
                let img = reflect_raw(s, &r);
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        let mut roots: Vec<Root> = seen.into_iter().collect();
        roots.sort();
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let norms: Vec<Rational> = roots.iter().map(|r| r.dot(r)).collect();
        let short_norm = norms.iter().min().cloned().expect("nonempty");
        let long_norm = norms.iter().max().cloned().expect("nonempty");
        let t = long_norm / &short_norm;
        let gram =
            Matrix::from_rows(simple_roots.iter().map(|a| simple_roots.iter().map(|b| a.dot(b)).collect()).collect()).expect("square");
        let simple_gram_inv = gram.inverse().expect("simple roots are independent");
        Ok(RootSystem { id, ambient_dim, simple_roots, t, short_norm, roots, index, simple_gram_inv })
    }

    /// Convenience: `RootSystem::of(Family::D, 4)`. Panics on an invalid id.
    pub fn of(family: Family, rank: usize) -> RootSystem {
        RootSystem::build(RootSystemId::new(family, rank).expect("valid root system id")).expect("valid root system")
    }

    pub fn rank(&self) -> usize {
        self.id.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        self.t.is_one()
    }

    /// All roots in lexicographic coordinate order.
    pub fn all_roots(&self) -> &[Root] {
        &self.roots
    }

    /// Position of `v` in [`RootSystem::all_roots`].
    pub fn root_index(&self, v: &Root) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &Root) -> bool {
        self.index.contains_key(v)
    }

    pub fn normalized_inner(&self, u: &Root, v: &Root) -> Rational {
        u.dot(v) / &self.short_norm
    }

    pub fn norm_class(&self, v: &Root) -> NormClass {
        if v.dot(v) == self.short_norm {
            NormClass::Short
        } else {
            NormClass::Long
        }
    }

    fn check_root(&self, v: &Root) -> Result<(), RootSysError> {
        if v.dim() != self.ambient_dim {
            return Err(RootSysError::Dimension { expected: self.ambient_dim, got: v.dim() });
        }
        if !self.is_root(v) {
            return Err(RootSysError::NotARoot { system: self.id, root: v.to_string() });
        }
        Ok(())
    }

    /// `s_mirror(v) = v - 2 (v, mirror)/(mirror, mirror) mirror`.
    pub fn reflect(&self, mirror: &Root, v: &Root) -> Result<Root, RootSysError> {
        self.check_root(mirror)?;
        if v.dim() != self.ambient_dim {
            return Err(RootSysError::Dimension { expected: self.ambient_dim, got: v.dim() });
        }
        Ok(reflect_raw(mirror, v))
    }

    /// Ambient reflection matrix of a root.
    pub fn reflection_matrix(&self, mirror: &Root) -> Result<Matrix, RootSysError> {
        self.check_root(mirror)?;
        Ok(reflection_matrix_raw(mirror))
    }

    /// Coordinates of `v` in the simple-root basis, `None` if outside their span.
    pub fn simple_coords(&self, v: &Root) -> Option<Vec<Rational>> {
        let rhs: Vec<Rational> = self.simple_roots.iter().map(|a| a.dot(v)).collect();
        let c = self.simple_gram_inv.apply(&rhs);
        let back =
            self.simple_roots.iter().zip(&c).fold(Root(vec![Rational::zero(); self.ambient_dim]), |acc, (a, ci)| acc.add(&a.scale(ci)));
        (back == *v).then_some(c)
    }

    pub fn is_positive(&self, v: &Root) -> bool {
        self.simple_coords(v).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.roots.iter().filter(|r| self.is_positive(r)).cloned().collect()
    }

    pub fn height(&self, v: &Root) -> Option<Rational> {
        self.simple_coords(v).map(|c| c.into_iter().fold(Rational::zero(), |a, b| a + b))
    }

    /// The highest root: every simple-root coordinate dominates that of any other root.
    pub fn max_root(&self) -> Root {
        self.roots.iter().max_by_key(|r| self.height(r).expect("roots lie in the simple span")).cloned().expect("nonempty")
    }

    /// Raw Gram matrix `(r_i, r_j)` of a root list.
    pub fn gram(&self, roots: &[Root]) -> Matrix {
        Matrix::from_rows(roots.iter().map(|a| roots.iter().map(|b| a.dot(b)).collect()).collect()).expect("square")
    }

    /// Linear independence by rank.
    pub fn independent(roots: &[Root]) -> bool {
        if roots.is_empty() {
            return true;
        }
        Matrix::from_rows(roots.iter().map(|r| r.0.clone()).collect()).expect("rectangular").rank() == roots.len()
    }
}

/// Reflection matrix for any nonzero vector.
pub fn reflection_matrix_raw(mirror: &Root) -> Matrix {
    let n = mirror.dim();
    let nn = mirror.dot(mirror);
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let d = int(2) * &mirror.0[i] * &mirror.0[j] / &nn;
            if !d.is_zero() {
                let v = m.get(i, j) - d;
                m.set(i, j, v);
            }
        }
    }
    m
}
