//! Brute-force ground truth for small Weyl groups.
//!
//! Group elements are handled as permutations of the root list: an element of
//! W is determined by its action on the roots, and a permutation of at most
//! 240 points is far cheaper to hash and compose than a rational matrix.
//! [`RootTable::to_matrix`] and [`RootTable::perm_of`] convert between the two.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;
use thiserror::Error;

use crate::diagram::{self, Diagram, DiagramName, EdgeStyle, LabeledDiagram};
use crate::exactla::{int, Matrix, Rational};
use crate::par;
use crate::rootsys::{Family, NormClass, Root, RootSystem, RootSystemId};
use crate::weyl::{WeylElement, WeylError};

/// Default bound on `|W|` for [`enumerate_group`].
pub const DEFAULT_GROUP_CAP: usize = 400_000;
/// Default bound on conjugation-orbit size for [`are_conjugate`].
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group too large: more than {cap} elements (frontier {frontier})")]
    TooLarge { cap: usize, frontier: usize },
    #[error("conjugacy unresolved within {0} orbit states")]
    Inconclusive(usize),
    #[error("system mismatch: {0} vs {1}")]
    Mismatch(RootSystemId, RootSystemId),
    #[error("matrix does not permute the roots of {0}")]
    NotInGroup(RootSystemId),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Diagram(#[from] diagram::DiagramError),
}

/// A Weyl group element as the permutation it induces on the root list.
pub type Perm = Vec<u8>;

/// Integer data for fast searches over one root system.
#[derive(Debug, Clone)]
pub struct RootTable {
    pub system: RootSystemId,
    pub roots: Vec<Root>,
    /// `dot[i * n + j]` is the raw inner product scaled by 4 (coordinates are half-integers).
    dot: Vec<i32>,
    short4: i32,
    neg: Vec<usize>,
    positive: Vec<bool>,
    simple_perms: Vec<Perm>,
    simple_index: Vec<usize>,
    /// Coordinates scaled by 2.
    coords2: Vec<Vec<i64>>,
}

fn doubled(r: &Root) -> Vec<i64> {
    r.0.iter()
        .map(|c| {
            let d = c * int(2);
            assert!(d.is_integer(), "coordinates are half-integers");
            crate::exactla::to_i64(&d).expect("small coordinate")
        })
        .collect()
}

impl RootTable {
    pub fn new(sys: &RootSystem) -> Self {
        let roots = sys.all_roots().to_vec();
        assert!(roots.len() <= 256, "permutations are stored as bytes");
        let n = roots.len();
        let coords2: Vec<Vec<i64>> = roots.iter().map(doubled).collect();
        let mut dot = vec![0i32; n * n];
        for i in 0..n {
            for j in 0..n {
                dot[i * n + j] = coords2[i].iter().zip(&coords2[j]).map(|(a, b)| a * b).sum::<i64>() as i32;
            }
        }
        let short4 = (0..n).map(|i| dot[i * n + i]).min().unwrap_or(0);
        let index: HashMap<&Root, usize> = roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let neg = roots.iter().map(|r| index[&r.neg()]).collect();
        let positive = roots.iter().map(|r| sys.is_positive(r)).collect();
        let simple_index: Vec<usize> = sys.simple_roots.iter().map(|s| index[s]).collect();
        let mut table = RootTable { system: sys.id, roots, dot, short4, neg, positive, simple_perms: Vec::new(), simple_index, coords2 };
        table.simple_perms = table.simple_index.iter().map(|&s| table.reflection_perm(s)).collect();
        table
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Raw inner product times 4.
    pub fn dot4(&self, i: usize, j: usize) -> i32 {
        self.dot[i * self.roots.len() + j]
    }

    pub fn is_long(&self, i: usize) -> bool {
        self.dot4(i, i) != self.short4
    }

    pub fn negative_of(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.positive[i]
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.roots.iter().position(|x| x == r)
    }

    /// Permutation induced by the reflection in root `m`.
    pub fn reflection_perm(&self, m: usize) -> Perm {
        let n = self.roots.len();
        let mm = self.dot4(m, m) as i64;
        let lookup: HashMap<&Vec<i64>, usize> = self.coords2.iter().enumerate().map(|(i, c)| (c, i)).collect();
        (0..n)
            .map(|j| {
                let c = 2 * self.dot4(j, m) as i64 / mm;
                let img: Vec<i64> = self.coords2[j].iter().zip(&self.coords2[m]).map(|(a, b)| a - c * b).collect();
                lookup[&img] as u8
            })
            .collect()
    }

    pub fn simple_reflections(&self) -> &[Perm] {
        &self.simple_perms
    }

    pub fn identity(&self) -> Perm {
        (0..self.roots.len()).map(|i| i as u8).collect()
    }

    /// Permutation of the product of reflections, left to right.
    pub fn word_perm(&self, word: &[usize]) -> Perm {
        word.iter().fold(self.identity(), |acc, &m| compose(&acc, &self.reflection_perm(m)))
    }

    /// Permutation induced by an element matrix.
    pub fn perm_of(&self, m: &Matrix) -> Result<Perm, OracleError> {
        let lookup: HashMap<&Root, usize> = self.roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        self.roots
            .iter()
            .map(|r| {
                let img = Root(m.apply(&r.0));
                lookup.get(&img).map(|&i| i as u8).ok_or(OracleError::NotInGroup(self.system))
            })
            .collect()
    }

    /// Matrix of the element with permutation `p`.
    pub fn to_matrix(&self, sys: &RootSystem, p: &Perm) -> Matrix {
        // Images of the simple roots and of a basis of their orthogonal
        // complement, which every element fixes, determine the matrix.
        let dim = sys.ambient_dim;
        let mut basis: Vec<Vec<Rational>> = self.simple_index.iter().map(|&i| self.roots[i].0.clone()).collect();
        let mut images: Vec<Vec<Rational>> = self.simple_index.iter().map(|&i| self.roots[p[i] as usize].0.clone()).collect();
        for k in 0..dim {
            if basis.len() == dim {
                break;
            }
            let mut e = vec![Rational::zero(); dim];
            e[k] = int(1);
            // Project e onto the complement of the current span.
            let cand = orthogonal_residual(&basis[..self.simple_index.len()], &e);
            let mut trial = basis.clone();
            trial.push(cand.clone());
            if Matrix::from_rows(trial.clone()).expect("rect").rank() == trial.len() {
                basis = trial;
                images.push(cand);
            }
        }
        let b = Matrix::from_columns(&basis).expect("rect");
        let im = Matrix::from_columns(&images).expect("rect");
        &im * &b.inverse().expect("basis")
    }
}

fn orthogonal_residual(span: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    if span.is_empty() {
        return v.to_vec();
    }
    let s = Matrix::from_rows(span.to_vec()).expect("rect");
    let g = &s * &s.transpose();
    let coef = g.inverse().expect("independent").apply(&s.apply(v));
    let proj = s.transpose().apply(&coef);
    v.iter().zip(proj).map(|(a, b)| a - b).collect()
}

/// `(p o q)(j) = p(q(j))`: apply `q` first.
pub fn compose(p: &[u8], q: &[u8]) -> Perm {
    q.iter().map(|&j| p[j as usize]).collect()
}

pub fn invert(p: &[u8]) -> Perm {
    let mut inv = vec![0u8; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j as usize] = i as u8;
    }
    inv
}

/// Conjugate `s p s` by an involution `s`.
fn conj_by_involution(s: &[u8], p: &[u8]) -> Perm {
    (0..p.len()).map(|j| s[p[s[j] as usize] as usize]).collect()
}

/// A fully enumerated finite Weyl group.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub system: RootSystemId,
    /// Elements in lexicographic order of their permutations.
    pub elements: Vec<Perm>,
    pub generators: Vec<Perm>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

/// Breadth-first closure over the simple reflections.
pub fn enumerate_group(table: &RootTable, cap: usize) -> Result<GroupTable, OracleError> {
    let gens = table.simple_reflections().to_vec();
    let mut seen: HashSet<Perm> = HashSet::new();
    let id = table.identity();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let next: Vec<Perm> = par::flat_map(&frontier, |p| gens.iter().map(|s| compose(p, s)).collect());
        let mut fresh = Vec::new();
        for p in next {
            if !seen.contains(&p) {
                seen.insert(p.clone());
                fresh.push(p);
            }
        }
        if seen.len() > cap {
            return Err(OracleError::TooLarge { cap, frontier: fresh.len() });
        }
        frontier = fresh;
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(GroupTable { system: table.system, elements, generators: gens })
}

/// Conjugacy class of `p` under conjugation by the simple reflections.
pub fn conjugacy_class(table: &RootTable, p: &Perm, cap: usize) -> Result<HashSet<Perm>, OracleError> {
    let mut seen: HashSet<Perm> = HashSet::from([p.clone()]);
    let mut frontier = vec![p.clone()];
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for x in &frontier {
            for s in table.simple_reflections() {
                let y = conj_by_involution(s, x);
                if seen.insert(y.clone()) {
                    fresh.push(y);
                }
            }
        }
        if seen.len() > cap {
            return Err(OracleError::Inconclusive(cap));
        }
        frontier = fresh;
    }
    Ok(seen)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugacy {
    /// `u` with `u w1 u^{-1} = w2`.
    Witness(WeylElement),
    NotConjugate,
    Unresolved,
}

/// Breadth-first search through the conjugation orbit of `w1`.
pub fn are_conjugate(sys: &RootSystem, w1: &WeylElement, w2: &WeylElement, cap: usize) -> Result<Conjugacy, OracleError> {
    if w1.system != sys.id || w2.system != sys.id {
        let other = if w1.system != sys.id { w1.system } else { w2.system };
        return Err(OracleError::Mismatch(sys.id, other));
    }
    let table = RootTable::new(sys);
    let p1 = table.perm_of(&w1.matrix)?;
    let p2 = table.perm_of(&w2.matrix)?;
    let mut parent: HashMap<Perm, Option<(usize, usize)>> = HashMap::new();
    let mut states = vec![p1.clone()];
    parent.insert(p1.clone(), None);
    let mut k = 0;
    while k < states.len() {
        if states[k] == p2 {
            // Walk back to the start collecting generator indices.
            let mut gens_used = Vec::new();
            let mut cur = k;
            while let Some(&Some((prev, g))) = parent.get(&states[cur]) {
                gens_used.push(g);
                cur = prev;
            }
            // states[k] = s_last ... s_first w1 s_first ... s_last
            let mut u = WeylElement::identity(sys);
            for &g in &gens_used {
                let s = crate::weyl::reflection(sys, &sys.simple_roots[g])?;
                u = u.compose(&s)?;
            }
            u.word = None;
            return Ok(Conjugacy::Witness(u));
        }
        for (g, s) in table.simple_reflections().iter().enumerate() {
            let y = conj_by_involution(s, &states[k]);
            if !parent.contains_key(&y) {
                parent.insert(y.clone(), Some((k, g)));
                states.push(y);
            }
        }
        if states.len() > cap {
            return Ok(Conjugacy::Unresolved);
        }
        k += 1;
    }
    Ok(Conjugacy::NotConjugate)
}

/// Result of a subset search.
#[derive(Debug, Clone)]
pub struct SubsetSearch {
    pub matches: Vec<LabeledDiagram>,
    /// True when the whole search space was explored; an empty match list is
    /// then a certificate of non-existence.
    pub exhausted: bool,
}

impl SubsetSearch {
    pub fn certified_empty(&self) -> bool {
        self.exhausted && self.matches.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstVertex {
    /// Try every positive root for the first vertex.
    All,
    /// Only one representative per W-orbit of lines. Sound for existence and
    /// conjugacy questions, since W permutes realizations.
    OrbitRepresentatives,
}

struct Pattern {
    order: Vec<usize>,
    /// `adj[k][m]` for search positions `m < k`: `Some(style)` when adjacent.
    adj: Vec<Vec<Option<EdgeStyle>>>,
    long: Vec<bool>,
    /// Earliest neighbour, used to fix the relative sign.
    anchor: Vec<Option<usize>>,
}

fn pattern(target: &Diagram) -> Pattern {
    // Breadth-first order so every vertex after a component's first has an
    // earlier neighbour.
    let adjl = target.adjacency();
    let mut order = Vec::new();
    let mut seen = vec![false; target.len()];
    for s in 0..target.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut k = order.len();
        order.push(s);
        while k < order.len() {
            for &v in &adjl[order[k]] {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
            k += 1;
        }
    }
    let pos: Vec<usize> = {
        let mut p = vec![0; order.len()];
        for (k, &v) in order.iter().enumerate() {
            p[v] = k;
        }
        p
    };
    let n = order.len();
    let mut adj = vec![vec![None; n]; n];
    for e in &target.edges {
        let (a, b) = (pos[e.i], pos[e.j]);
        adj[a][b] = Some(e.style);
        adj[b][a] = Some(e.style);
    }
    let anchor = (0..n).map(|k| (0..k).find(|&m| adj[k][m].is_some())).collect();
    let long = order.iter().map(|&v| target.vertices[v].norm == NormClass::Long).collect();
    Pattern { order, adj, long, anchor }
}

/// Incremental exact independence test on integer vectors.
#[derive(Clone)]
struct Echelon {
    rows: Vec<(usize, Vec<i64>)>,
}

impl Echelon {
    fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (c, row) in &self.rows {
            if v[*c] != 0 {
                let (a, b) = (row[*c], v[*c]);
                for (x, r) in v.iter_mut().zip(row) {
                    *x = a * *x - b * r;
                }
                let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        v
    }

    fn push(&mut self, v: &[i64]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|&x| x != 0) {
            Some(c) => {
                self.rows.push((c, r));
                true
            }
            None => false,
        }
    }
}

struct Search<'a> {
    table: &'a RootTable,
    pat: &'a Pattern,
    candidates: Vec<usize>,
    limit: usize,
}

impl Search<'_> {
    fn fits(&self, chosen: &[usize], signs: &[bool], r: usize) -> Option<bool> {
        let k = chosen.len();
        if self.table.is_long(r) != self.pat.long[k] {
            return None;
        }
        if chosen.contains(&r) {
            return None;
        }
        // Relative sign of the new vertex: flipped when `true`.
        let mut sign = None;
        if let Some(a) = self.pat.anchor[k] {
            let d = self.table.dot4(chosen[a], r);
            if d == 0 {
                return None;
            }
            let want_solid = self.pat.adj[k][a] == Some(EdgeStyle::Solid);
            let actual_solid = (d < 0) != signs[a];
            sign = Some(actual_solid != want_solid);
        }
        let flip = sign.unwrap_or(false);
        for m in 0..k {
            let d = self.table.dot4(chosen[m], r);
            match self.pat.adj[k][m] {
                None if d != 0 => return None,
                None => {}
                Some(style) => {
                    if d == 0 {
                        return None;
                    }
                    let solid = (d < 0) != (signs[m] != flip);
                    if solid != (style == EdgeStyle::Solid) {
                        return None;
                    }
                }
            }
        }
        Some(flip)
    }

    fn run(&self, chosen: &mut Vec<usize>, signs: &mut Vec<bool>, ech: &Echelon, out: &mut Vec<Vec<usize>>) -> bool {
        if out.len() >= self.limit {
            return false;
        }
        let k = chosen.len();
        if k == self.pat.order.len() {
            out.push(chosen.clone());
            return out.len() < self.limit;
        }
        for &r in &self.candidates {
            let Some(flip) = self.fits(chosen, signs, r) else { continue };
            let mut e2 = ech.clone();
            if !e2.push(&self.table.coords2[r]) {
                continue;
            }
            chosen.push(r);
            signs.push(flip);
            let go_on = self.run(chosen, signs, &e2, out);
            chosen.pop();
            signs.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Line representatives (positive roots) of each W-orbit, one per root length.
fn orbit_representatives(table: &RootTable) -> Vec<usize> {
    let mut reps = Vec::new();
    let mut have_short = false;
    let mut have_long = false;
    // Simple roots of both lengths exist in every irreducible system; the
    // highest simple index of each length is as good as any.
    for &s in &table.simple_index {
        if table.is_long(s) && !have_long {
            have_long = true;
            reps.push(s);
        } else if !table.is_long(s) && !have_short {
            have_short = true;
            reps.push(s);
        }
    }
    reps
}

/// All independent root subsets whose diagram matches `target` up to sign
/// changes of individual roots. Roots are drawn from the positive roots, so
/// each line appears once; vertex order follows the target.
pub fn find_subsets(sys: &RootSystem, target: &Diagram, limit: usize, first: FirstVertex) -> SubsetSearch {
    let table = RootTable::new(sys);
    find_subsets_in(&table, target, limit, first)
}

pub fn find_subsets_in(table: &RootTable, target: &Diagram, limit: usize, first: FirstVertex) -> SubsetSearch {
    let sys = RootSystem::build(table.system).expect("valid id");
    let pat = pattern(target);
    let candidates: Vec<usize> = (0..table.len()).filter(|&i| table.is_positive(i)).collect();
    if target.is_empty() {
        return SubsetSearch { matches: Vec::new(), exhausted: true };
    }
    let firsts: Vec<usize> = match first {
        FirstVertex::All => candidates.clone(),
        FirstVertex::OrbitRepresentatives => orbit_representatives(table),
    };
    let search = Search { table, pat: &pat, candidates, limit };
    let per_first: Vec<(Vec<Vec<usize>>, bool)> = par::map(&firsts, |&f| {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        let mut signs = Vec::new();
        let Some(flip) = search.fits(&chosen, &signs, f) else { return (out, true) };
        let mut ech = Echelon { rows: Vec::new() };
        ech.push(&table.coords2[f]);
        chosen.push(f);
        signs.push(flip);
        let finished = search.run(&mut chosen, &mut signs, &ech, &mut out);
        (out, finished)
    });
    let mut exhausted = true;
    let mut found = Vec::new();
    for (m, fin) in per_first {
        exhausted &= fin;
        found.extend(m);
    }
    if found.len() > limit {
        found.truncate(limit);
        exhausted = false;
    }
    let labels: Vec<String> = target.vertices.iter().map(|v| v.label.clone()).collect();
    let matches = found
        .into_iter()
        .map(|idx| {
            let mut roots = vec![Root(Vec::new()); idx.len()];
            for (k, &r) in idx.iter().enumerate() {
                roots[pat.order[k]] = table.roots[r].clone();
            }
            diagram::from_labeled_roots(&sys, &labels, &roots).expect("search only returns valid subsets")
        })
        .collect();
    SubsetSearch { matches, exhausted }
}

/// Every way to mark edges dotted, up to the sign-change equivalence: one
/// representative per class, obtained by choosing styles on non-tree edges.
pub fn sign_classes(d: &Diagram) -> Vec<Diagram> {
    let n = d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut extra = Vec::new();
    for (k, e) in d.edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, e.i), find(&mut parent, e.j));
        if a == b {
            extra.push(k);
        } else {
            parent[a] = b;
        }
    }
    (0..1u32 << extra.len())
        .map(|mask| {
            let mut out = d.clone();
            for e in &mut out.edges {
                e.style = EdgeStyle::Solid;
            }
            for (bit, &k) in extra.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    out.edges[k].style = EdgeStyle::Dotted;
                }
            }
            out
        })
        .collect()
}

/// Searches for an exact realization: roots whose normalized inner products
/// equal the given Gram matrix entry by entry, signs included.
pub fn realize(sys: &RootSystem, gram: &Matrix) -> Option<Vec<Root>> {
    let table = RootTable::new(sys);
    let n = gram.rows();
    let scale = int(4) * &sys.short_norm;
    let want: Vec<Vec<i32>> = (0..n)
        .map(|i| (0..n).map(|j| crate::exactla::to_i64(&(gram.get(i, j) * &scale)).expect("half-integral Gram") as i32).collect())
        .collect();
    fn rec(table: &RootTable, want: &[Vec<i32>], chosen: &mut Vec<usize>, ech: &Echelon) -> bool {
        let k = chosen.len();
        if k == want.len() {
            return true;
        }
        for r in 0..table.len() {
            if table.dot4(r, r) != want[k][k] || (0..k).any(|m| table.dot4(chosen[m], r) != want[k][m]) {
                continue;
            }
            let mut e2 = ech.clone();
            if !e2.push(&table.coords2[r]) {
                continue;
            }
            chosen.push(r);
            if rec(table, want, chosen, &e2) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    rec(&table, &want, &mut chosen, &Echelon { rows: Vec::new() }).then(|| chosen.iter().map(|&i| table.roots[i].clone()).collect())
}

/// Bicoloured element of a labeled diagram as a permutation.
fn bicolored_perm(table: &RootTable, d: &LabeledDiagram) -> Option<Perm> {
    let (a, b) = d.bicolored()?;
    let idx: Vec<usize> = a.iter().chain(&b).map(|r| table.index_of(r).expect("root of the system")).collect();
    Some(table.word_perm(&idx))
}

/// True iff every realization of the named diagram yields a bicoloured
/// element in one conjugacy class.
pub fn verify_unique_class(sys: &RootSystem, name: &DiagramName, cap: usize) -> Result<bool, OracleError> {
    let entry = diagram::catalog(name)?;
    if entry.diagram.system != sys.id {
        return Err(OracleError::Mismatch(sys.id, entry.diagram.system));
    }
    let table = RootTable::new(sys);
    let found = find_subsets_in(&table, &entry.diagram.diagram, usize::MAX, FirstVertex::OrbitRepresentatives);
    let elems: Vec<Perm> = found.matches.iter().filter_map(|d| bicolored_perm(&table, d)).collect();
    let Some(first) = elems.first() else { return Ok(false) };
    let class = conjugacy_class(&table, first, cap).map_err(|_| OracleError::Inconclusive(cap))?;
    Ok(par::all(&elems, |p| class.contains(p)))
}

/// Number of W-orbits on sets of `k` mutually orthogonal lines `{±r}`.
pub fn orthogonal_tuple_orbits(sys: &RootSystem, k: usize) -> usize {
    let table = RootTable::new(sys);
    let lines: Vec<usize> = (0..table.len()).filter(|&i| table.is_positive(i)).collect();
    let line_of: HashMap<usize, usize> = lines.iter().enumerate().flat_map(|(li, &r)| [(r, li), (table.negative_of(r), li)]).collect();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    fn grow(table: &RootTable, lines: &[usize], cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().map_or(0, |&l| l + 1);
        for l in start..lines.len() {
            if cur.iter().all(|&m| table.dot4(lines[m], lines[l]) == 0) {
                cur.push(l);
                grow(table, lines, cur, k, out);
                cur.pop();
            }
        }
    }
    grow(&table, &lines, &mut Vec::new(), k, &mut tuples);
    let index: HashMap<Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let mut parent: Vec<usize> = (0..tuples.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let images: Vec<Vec<(usize, usize)>> = par::map(table.simple_reflections(), |s| {
        tuples
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut img: Vec<usize> = t.iter().map(|&l| line_of[&(s[lines[l]] as usize)]).collect();
                img.sort_unstable();
                (i, index[&img])
            })
            .collect()
    });
    for (i, j) in images.into_iter().flatten() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
        }
    }
    (0..tuples.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Cartan type of an irreducible root subsystem from its size, rank and
/// number of long roots.
pub fn classify_component(rank: usize, count: usize, long: usize) -> Option<DiagramName> {
    use Family::*;
    let name = |f, r| Some(DiagramName::dynkin(f, r));
    if long == 0 || long == count {
        if count == rank * (rank + 1) {
            return name(A, rank);
        }
        if rank >= 4 && count == 2 * rank * (rank - 1) {
            return name(D, rank);
        }
        return match (rank, count) {
            (6, 72) => name(E, 6),
            (7, 126) => name(E, 7),
            (8, 240) => name(E, 8),
            _ => None,
        };
    }
    match (rank, count) {
        (4, 48) => name(F, 4),
        (2, 12) => name(G, 2),
        (r, c) if c == 2 * r * r && long == 2 * r * (r - 1) => name(B, r),
        (r, c) if c == 2 * r * r && long == 2 * r => name(C, r),
        _ => None,
    }
}

/// Irreducible components of `{eta : eta perp max_root}`, largest rank first.
pub fn max_root_complement(sys: &RootSystem) -> Vec<DiagramName> {
    let top = sys.max_root();
    let perp: Vec<&Root> = sys.all_roots().iter().filter(|r| r.dot(&top).is_zero()).collect();
    // Components: connected under non-orthogonality.
    let n = perp.len();
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let g = groups.len();
        comp[s] = g;
        let mut members = vec![s];
        let mut k = 0;
        while k < members.len() {
            let u = members[k];
            for v in 0..n {
                if comp[v] == usize::MAX && !perp[u].dot(perp[v]).is_zero() {
                    comp[v] = g;
                    members.push(v);
                }
            }
            k += 1;
        }
        groups.push(members);
    }
    let mut names: Vec<DiagramName> = groups
        .iter()
        .filter_map(|g| {
            let roots: Vec<Root> = g.iter().map(|&i| perp[i].clone()).collect();
            let rank = Matrix::from_rows(roots.iter().map(|r| r.0.clone()).collect()).expect("rect").rank();
            let long = roots.iter().filter(|r| sys.norm_class(r) == NormClass::Long).count();
            classify_component(rank, roots.len(), long)
        })
        .collect();
    names.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.family.cmp(&b.family)));
    names
}

/// `T = s_wrong s_right s_wrong`, the reflection in `s_wrong(right)`.
///
/// For an acute pair of equal length `T(right) = wrong`, and `T` fixes every
/// vector orthogonal to both. Equal, proportional, orthogonal and obtuse
/// inputs are rejected because the first property fails for them.
pub fn corrector_conjugator(sys: &RootSystem, wrong: &Root, right: &Root) -> Result<WeylElement, OracleError> {
    for r in [wrong, right] {
        if !sys.is_root(r) {
            return Err(OracleError::Weyl(WeylError::Root(crate::rootsys::RootSysError::NotARoot { system: sys.id, root: r.to_string() })));
        }
    }
    if wrong.is_proportional(right) {
        return Err(OracleError::Degenerate("roots are equal up to sign".into()));
    }
    let d = sys.normalized_inner(wrong, right);
    if d.is_zero() {
        return Err(OracleError::Degenerate("orthogonal roots cannot be exchanged".into()));
    }
    if d < Rational::zero() {
        return Err(OracleError::Degenerate("obtuse pair: negate one root first".into()));
    }
    if wrong.dot(wrong) != right.dot(right) {
        return Err(OracleError::Degenerate("roots of different lengths".into()));
    }
    let sw = crate::weyl::reflection(sys, wrong)?;
    let sr = crate::weyl::reflection(sys, right)?;
    let t = sw.compose(&sr)?.compose(&sw)?;
    debug_assert_eq!(t.apply(right), *wrong);
    Ok(t)
}

/// Distinct conjugacy classes among the given elements, by orbit enumeration.
pub fn count_classes(sys: &RootSystem, elems: &[WeylElement], cap: usize) -> Result<usize, OracleError> {
    let table = RootTable::new(sys);
    let perms: Vec<Perm> = elems.iter().map(|w| table.perm_of(&w.matrix)).collect::<Result<_, _>>()?;
    let mut classes: Vec<HashSet<Perm>> = Vec::new();
    for p in &perms {
        if classes.iter().any(|c| c.contains(p)) {
            continue;
        }
        classes.push(conjugacy_class(&table, p, cap)?);
    }
    Ok(classes.len())
}

/// Product formula `|W|` for the irreducible families.
pub fn weyl_group_order(id: RootSystemId) -> u128 {
    let n = id.rank as u128;
    let fact = |k: u128| (1..=k).product::<u128>();
    match id.family {
        Family::A => fact(n + 1),
        Family::B | Family::C => (1u128 << n) * fact(n),
        Family::D => (1u128 << (n - 1)) * fact(n),
        Family::E => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        Family::F => 1152,
        Family::G => 12,
    }
}

/// Group order by enumeration for the given system, in elements.
pub fn group_order(sys: &RootSystem, cap: usize) -> Result<usize, OracleError> {
    Ok(enumerate_group(&RootTable::new(sys), cap)?.order())
}

/// Histogram of bicoloured-element characteristic polynomials over all matches.
pub fn charpoly_histogram(found: &SubsetSearch) -> BTreeMap<String, usize> {
    let mut h = BTreeMap::new();
    for d in &found.matches {
        if let Some(p) = d.bicolored_charpoly() {
            *h.entry(p.to_string()).or_insert(0) += 1;
        }
    }
    h
}
