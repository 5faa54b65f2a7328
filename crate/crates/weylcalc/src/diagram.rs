//! Carter and connection diagrams: extraction from root lists, cycle and
//! parity checks, the Tits form of abstract diagrams, and the named catalog.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{gram_positive_definite, int, q, Matrix, Polynomial, Rational};
use crate::rootsys::{Family, NormClass, Root, RootSystem, RootSystemId};
use crate::weyl::product_of_reflections;

pub mod catalog;

pub use catalog::{catalog, catalog_names, identify, CatalogEntry};

/// Largest vertex count accepted by simple-cycle enumeration.
pub const MAX_CYCLE_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("roots {0} and {1} are proportional")]
    Degenerate(usize, usize),
    #[error("inner product {value} between vertices {i} and {j} is not allowed in this model")]
    ModelViolation { i: usize, j: usize, value: String },
    #[error("coefficient list has length {got}, diagram has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{labels} labels for {roots} roots")]
    LabelCount { labels: usize, roots: usize },
    #[error("diagram contains a cycle")]
    NotATree,
    #[error("unknown diagram name {0:?}")]
    UnknownName(String),
    #[error("catalog entry {name} failed validation: {reason}")]
    CatalogIntegrity { name: String, reason: String },
    #[error("ambiguous identification: {0:?}")]
    Ambiguous(Vec<String>),
    #[error("diagram has {0} vertices; cycle enumeration is limited to {MAX_CYCLE_VERTICES}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStyle {
    /// Obtuse pair: negative inner product.
    Solid,
    /// Acute pair: positive inner product.
    Dotted,
}

/// Magnitude of the normalized inner product along an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeWeight {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "t/2")]
    HalfT,
}

impl EdgeWeight {
    pub fn value(self, t: &Rational) -> Rational {
        match self {
            EdgeWeight::Half => q(1, 2),
            EdgeWeight::HalfT => t / int(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub label: String,
    pub norm: NormClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub style: EdgeStyle,
    pub weight: EdgeWeight,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl Diagram {
    /// Simply-laced diagram on `n` short vertices labelled `0..n`.
    pub fn simply_laced(n: usize, edges: &[(usize, usize, EdgeStyle)]) -> Diagram {
        let vertices = (0..n).map(|i| Vertex { label: i.to_string(), norm: NormClass::Short }).collect();
        let edges = edges.iter().map(|&(i, j, style)| Edge { i, j, style, weight: EdgeWeight::Half }).collect();
        Diagram { vertices, edges }
    }

    /// Path `0 - 1 - ... - (n-1)` with the given norm classes and solid edges.
    /// Edges touching a long vertex get weight `t/2`.
    pub fn solid_path(norms: &[NormClass]) -> Diagram {
        let vertices = norms.iter().enumerate().map(|(i, &norm)| Vertex { label: i.to_string(), norm }).collect();
        let edges = (1..norms.len())
            .map(|j| Edge { i: j - 1, j, style: EdgeStyle::Solid, weight: edge_weight_for(norms[j - 1], norms[j]) })
            .collect();
        Diagram { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| (e.i == i && e.j == j) || (e.i == j && e.j == i))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.len()
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                for &v in &adj[comp[k]] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-colouring with the smallest vertex of each component in colour 0.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let adj = self.adjacency();
        let mut colour = vec![u8::MAX; self.len()];
        for s in 0..self.len() {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    /// Gram matrix of the Tits form for a numeric `t`.
    pub fn gram(&self, t: &Rational) -> Matrix {
        let n = self.len();
        let mut g = Matrix::zeros(n, n);
        for (i, v) in self.vertices.iter().enumerate() {
            g.set(i, i, norm_value(v.norm, t));
        }
        for e in &self.edges {
            let w = e.weight.value(t);
            let val = if e.style == EdgeStyle::Solid { -w } else { w };
            g.set(e.i, e.j, val.clone());
            g.set(e.j, e.i, val);
        }
        g
    }
}

fn norm_value(n: NormClass, t: &Rational) -> Rational {
    match n {
        NormClass::Short => Rational::one(),
        NormClass::Long => t.clone(),
    }
}

fn edge_weight_for(a: NormClass, b: NormClass) -> EdgeWeight {
    if a == NormClass::Short && b == NormClass::Short {
        EdgeWeight::Half
    } else {
        EdgeWeight::HalfT
    }
}

/// A diagram together with the roots realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDiagram {
    pub diagram: Diagram,
    pub roots: Vec<Root>,
    pub system: RootSystemId,
    /// Linear independence of `roots`, computed by rank.
    pub independent: bool,
}

impl LabeledDiagram {
    /// Roots in bicoloured order: colour class 0 first, then class 1.
    /// `None` when the diagram is not bipartite.
    pub fn bicolored(&self) -> Option<(Vec<Root>, Vec<Root>)> {
        let colour = self.diagram.bipartition()?;
        let pick = |c: u8| self.roots.iter().zip(&colour).filter(|(_, &k)| k == c).map(|(r, _)| r.clone()).collect::<Vec<_>>();
        Some((pick(0), pick(1)))
    }

    /// Characteristic polynomial of the bicoloured element on the span of the roots.
    pub fn bicolored_charpoly(&self) -> Option<Polynomial> {
        let (a, b) = self.bicolored()?;
        let word: Vec<Root> = a.into_iter().chain(b).collect();
        Some(span_charpoly_of_word(&word))
    }
}

/// Characteristic polynomial of the product of reflections restricted to the
/// span of the word's roots.
pub fn span_charpoly_of_word(word: &[Root]) -> Polynomial {
    if word.is_empty() {
        return Polynomial::one();
    }
    let m = product_of_reflections(word);
    let chi = crate::exactla::charpoly(&m).expect("square");
    let rank = Matrix::from_rows(word.iter().map(|r| r.0.clone()).collect()).expect("rectangular").rank();
    chi.div_rem(&Polynomial::from_i64(&[-1, 1]).pow((m.rows() - rank) as u32)).0
}

/// Builds the connection diagram of an ordered root list, labelling vertices by the roots.
pub fn from_roots(sys: &RootSystem, roots: &[Root]) -> Result<LabeledDiagram, DiagramError> {
    let labels: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
    from_labeled_roots(sys, &labels, roots)
}

pub fn from_labeled_roots(sys: &RootSystem, labels: &[String], roots: &[Root]) -> Result<LabeledDiagram, DiagramError> {
    if labels.len() != roots.len() {
        return Err(DiagramError::LabelCount { labels: labels.len(), roots: roots.len() });
    }
    let half = q(1, 2);
    let half_t = &sys.t / int(2);
    let vertices = labels.iter().zip(roots).map(|(label, r)| Vertex { label: label.clone(), norm: sys.norm_class(r) }).collect::<Vec<_>>();
    let mut edges = Vec::new();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i].is_proportional(&roots[j]) {
                return Err(DiagramError::Degenerate(i, j));
            }
            let v = sys.normalized_inner(&roots[i], &roots[j]);
            if v.is_zero() {
                continue;
            }
            let weight = if sys.is_simply_laced() { EdgeWeight::Half } else { edge_weight_for(vertices[i].norm, vertices[j].norm) };
            let expected = match weight {
                EdgeWeight::Half => &half,
                EdgeWeight::HalfT => &half_t,
            };
            if v.abs() != *expected {
                return Err(DiagramError::ModelViolation { i, j, value: crate::exactla::fmt_rational(&v) });
            }
            let style = if v.is_negative() { EdgeStyle::Solid } else { EdgeStyle::Dotted };
            edges.push(Edge { i, j, style, weight });
        }
    }
    Ok(LabeledDiagram {
        diagram: Diagram { vertices, edges },
        roots: roots.to_vec(),
        system: sys.id,
        independent: RootSystem::independent(roots),
    })
}

/// All simple cycles, each listed once, starting at its smallest vertex and
/// oriented so the second vertex is smaller than the last. Sorted.
pub fn cycles(d: &Diagram) -> Vec<Vec<usize>> {
    try_cycles(d).expect("diagram too large for cycle enumeration")
}

pub fn try_cycles(d: &Diagram) -> Result<Vec<Vec<usize>>, DiagramError> {
    if d.len() > MAX_CYCLE_VERTICES {
        return Err(DiagramError::TooLarge(d.len()));
    }
    let adj = d.adjacency();
    let mut out = Vec::new();
    for s in 0..d.len() {
        let mut path = vec![s];
        let mut on_path = vec![false; d.len()];
        on_path[s] = true;
        extend_cycles(&adj, s, &mut path, &mut on_path, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn extend_cycles(adj: &[Vec<usize>], s: usize, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let u = *path.last().expect("nonempty");
    for &v in &adj[u] {
        if v == s && path.len() >= 3 && path[1] < u {
            out.push(path.clone());
        }
        if v > s && !on_path[v] {
            on_path[v] = true;
            path.push(v);
            extend_cycles(adj, s, path, on_path, out);
            path.pop();
            on_path[v] = false;
        }
    }
}

/// Simple cycles without chords, i.e. induced cycles.
pub fn chordless_cycles(d: &Diagram) -> Vec<Vec<usize>> {
    let adj = d.adjacency();
    cycles(d)
        .into_iter()
        .filter(|c| {
            let n = c.len();
            (0..n).all(|a| (a + 2..n).all(|b| (a == 0 && b == n - 1) || adj[c[a]].binary_search(&c[b]).is_err()))
        })
        .collect()
}

fn dotted_count(d: &Diagram, cycle: &[usize]) -> usize {
    let n = cycle.len();
    (0..n).filter(|&k| d.edge(cycle[k], cycle[(k + 1) % n]).is_some_and(|e| e.style == EdgeStyle::Dotted)).count()
}

/// Linear independence plus bipartiteness (every cycle has even length).
pub fn is_admissible(d: &LabeledDiagram) -> bool {
    d.independent && d.diagram.bipartition().is_some()
}

/// Every chordless cycle carries an odd number of dotted edges.
///
/// A cycle with a chord splits into two shorter cycles whose dotted counts
/// add up to its own modulo 2, so the condition is stated on chordless cycles.
pub fn dotted_parity_ok(d: &Diagram) -> bool {
    chordless_cycles(d).iter().all(|c| dotted_count(d, c) % 2 == 1)
}

/// The Tits form `sum x_i^2 n_i + 2 sum_edges x_i x_j eps_ij w_ij`.
pub fn tits_value(d: &Diagram, coeffs: &[Rational], t: &Rational) -> Result<Rational, DiagramError> {
    if coeffs.len() != d.len() {
        return Err(DiagramError::LengthMismatch { expected: d.len(), got: coeffs.len() });
    }
    let mut acc = Rational::zero();
    for (x, v) in coeffs.iter().zip(&d.vertices) {
        acc += x * x * norm_value(v.norm, t);
    }
    for e in &d.edges {
        let w = e.weight.value(t);
        let term = int(2) * &coeffs[e.i] * &coeffs[e.j] * w;
        match e.style {
            EdgeStyle::Solid => acc -= term,
            EdgeStyle::Dotted => acc += term,
        }
    }
    Ok(acc)
}

/// Positive definiteness of the Tits form, i.e. realizability by independent vectors.
pub fn is_realizable(d: &Diagram, t: &Rational) -> bool {
    gram_positive_definite(&d.gram(t)).expect("Gram matrix is symmetric")
}

/// Flips root signs so that every edge of a forest is solid.
pub fn sign_normalize_tree(sys: &RootSystem, d: &LabeledDiagram) -> Result<LabeledDiagram, DiagramError> {
    if !d.diagram.is_forest() {
        return Err(DiagramError::NotATree);
    }
    let adj = d.diagram.adjacency();
    let mut roots = d.roots.clone();
    let mut done = vec![false; roots.len()];
    for s in 0..roots.len() {
        if done[s] {
            continue;
        }
        done[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if done[v] {
                    continue;
                }
                done[v] = true;
                if roots[u].dot(&roots[v]).is_positive() {
                    roots[v] = roots[v].neg();
                }
                queue.push_back(v);
            }
        }
    }
    let labels: Vec<String> = d.diagram.vertices.iter().map(|v| v.label.clone()).collect();
    from_labeled_roots(sys, &labels, &roots)
}

/// Decoration of a diagram name: none, `a_k` or `b_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Decoration {
    None,
    A(usize),
    B(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramName {
    pub family: Family,
    pub rank: usize,
    pub decoration: Decoration,
}

impl DiagramName {
    pub fn dynkin(family: Family, rank: usize) -> Self {
        DiagramName { family, rank, decoration: Decoration::None }
    }

    pub fn a(family: Family, rank: usize, k: usize) -> Self {
        DiagramName { family, rank, decoration: Decoration::A(k) }
    }

    pub fn b(family: Family, rank: usize, k: usize) -> Self {
        DiagramName { family, rank, decoration: Decoration::B(k) }
    }
}

impl fmt::Display for DiagramName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)?;
        match self.decoration {
            Decoration::None => Ok(()),
            Decoration::A(k) => write!(f, "(a{k})"),
            Decoration::B(k) => write!(f, "(b{k})"),
        }
    }
}

impl FromStr for DiagramName {
    type Err = DiagramError;
    /// Accepts `E8(a3)`, `e8a3`, `D_6(b_2)`, `D5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DiagramError::UnknownName(s.to_string());
        let clean: String = s.chars().filter(|c| !matches!(c, '_' | '(' | ')' | ' ')).collect();
        let mut chars = clean.chars();
        let family: Family = chars.next().ok_or_else(err)?.to_string().parse().map_err(|_| err())?;
        let rest = chars.as_str();
        let split = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let rank: usize = rest[..split].parse().map_err(|_| err())?;
        let deco = &rest[split..];
        let decoration = if deco.is_empty() {
            Decoration::None
        } else {
            let k: usize = deco[1..].parse().map_err(|_| err())?;
            match deco.as_bytes()[0].to_ascii_lowercase() {
                b'a' => Decoration::A(k),
                b'b' => Decoration::B(k),
                _ => return Err(err()),
            }
        };
        Ok(DiagramName { family, rank, decoration })
    }
}

/// Invariant tuple used to match a diagram against catalog entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Invariants {
    pub vertices: usize,
    pub degrees: Vec<usize>,
    pub cycle_lengths: Vec<usize>,
    pub long_vertices: usize,
    pub charpoly: Vec<String>,
}

pub fn invariants(d: &LabeledDiagram) -> Option<Invariants> {
    let mut degrees = d.diagram.degrees();
    degrees.sort_unstable();
    let cycle_lengths = cycles(&d.diagram).iter().map(Vec::len).collect();
    let chi = d.bicolored_charpoly()?;
    Some(Invariants {
        vertices: d.diagram.len(),
        degrees,
        cycle_lengths,
        long_vertices: d.diagram.vertices.iter().filter(|v| v.norm == NormClass::Long).count(),
        charpoly: chi.coeffs().iter().map(crate::exactla::fmt_rational).collect(),
    })
}

/// Counts vertices of each norm class, short first.
pub fn norm_counts(d: &Diagram) -> (usize, usize) {
    let long = d.vertices.iter().filter(|v| v.norm == NormClass::Long).count();
    (d.len() - long, long)
}

/// Histogram of the dotted-edge count over chordless cycles.
pub fn dotted_histogram(d: &Diagram) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for c in chordless_cycles(d) {
        *h.entry(dotted_count(d, &c)).or_insert(0) += 1;
    }
    h
}

/// Number of dotted edges on a cycle.
pub fn cycle_dotted_count(d: &Diagram, cycle: &[usize]) -> usize {
    dotted_count(d, cycle)
}

/// Graphviz rendering: dotted edges dashed, long roots double-circled.
pub fn to_dot(d: &Diagram, name: &str) -> String {
    let mut out = format!("graph \"{}\" {{\n", name.replace('"', "'"));
    for (i, v) in d.vertices.iter().enumerate() {
        let shape = match v.norm {
            NormClass::Short => "circle",
            NormClass::Long => "doublecircle",
        };
        out.push_str(&format!("  v{i} [label=\"{}\", shape={shape}];\n", v.label.replace('"', "'")));
    }
    for e in &d.edges {
        let mut attrs = Vec::new();
        if e.style == EdgeStyle::Dotted {
            attrs.push("style=dashed".to_string());
        }
        if e.weight == EdgeWeight::HalfT {
            attrs.push("label=\"t/2\"".to_string());
        }
        let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
        out.push_str(&format!("  v{} -- v{}{attrs};\n", e.i, e.j));
    }
    out.push_str("}\n");
    out
}
