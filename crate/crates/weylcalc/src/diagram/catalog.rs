//! Named Carter diagrams with concrete representative roots.
//!
//! Series entries (Dynkin, `D_n(a_k)`, pure cycles `D_l(b_{l/2-1})`) are built
//! from coordinates on demand. Exceptional entries use frozen root lists in
//! half-integer coordinates. Every entry is validated when built: the roots
//! must be independent, the diagram bipartite, and the bicoloured element's
//! characteristic polynomial must equal the stored one.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{from_labeled_roots, invariants, is_admissible, Decoration, DiagramError, DiagramName, LabeledDiagram};
use crate::exactla::Polynomial;
use crate::rootsys::{Family, Root, RootSystem, RootSystemId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: DiagramName,
    pub diagram: LabeledDiagram,
    /// Expected characteristic polynomial of the bicoloured element.
    pub charpoly: Polynomial,
}

/// Product of cyclotomic polynomials `Phi_n^e`.
pub fn cyclotomic_product(factors: &[(usize, u32)]) -> Polynomial {
    factors.iter().fold(Polynomial::one(), |acc, &(n, e)| &acc * &Polynomial::cyclotomic(n).pow(e))
}

fn x_pow_plus_one(n: usize) -> Polynomial {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    c[n] = 1;
    Polynomial::from_i64(&c)
}

struct Frozen {
    name: &'static str,
    labels: &'static [&'static str],
    /// Coordinates doubled.
    roots: &'static [[i64; 8]],
    charpoly: &'static [(usize, u32)],
}

// Exceptional representatives. Roots are in the E8 model (E7 and E6 are the
// sublattices cut out by their first simple roots), listed with doubled
// coordinates. The vertex order of the b-type entries matches the bicoloured
// words the rewrite scripts start from.
const FROZEN: &[Frozen] = &[
    Frozen {
        name: "E6(a1)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 2, 0, 0, 0],
            [-1, 1, 1, -1, 1, -1, -1, 1],
            [-1, -1, -1, 1, -1, -1, -1, 1],
            [0, 0, -2, 0, 2, 0, 0, 0],
            [0, 0, 2, 2, 0, 0, 0, 0],
        ],
        charpoly: &[(9, 1)],
    },
    Frozen {
        name: "E6(a2)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 2, 0, 0, 0],
            [-1, -1, -1, 1, -1, -1, -1, 1],
            [0, 0, -2, 0, 2, 0, 0, 0],
            [0, 0, 2, 2, 0, 0, 0, 0],
            [2, 2, 0, 0, 0, 0, 0, 0],
        ],
        charpoly: &[(3, 1), (6, 2)],
    },
    Frozen {
        name: "E7(a1)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 2, 0, 0],
            [-1, -1, 1, -1, 1, 1, -1, 1],
            [-1, -1, -1, -1, 1, -1, -1, 1],
            [1, 1, 1, 1, -1, 1, -1, 1],
            [-1, 1, 1, 1, -1, -1, -1, 1],
            [0, 0, 0, 2, 2, 0, 0, 0],
        ],
        charpoly: &[(2, 1), (14, 1)],
    },
    Frozen {
        name: "E7(a2)",
        labels: &["a2", "a3", "a4", "b1", "b2", "b3", "b4"],
        roots: &[
            [-2, -2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, -2, -2, 0, 0, 0, 0],
            [2, 0, 0, 0, -2, 0, 0, 0],
            [1, 1, -1, 1, 1, 1, -1, 1],
            [0, -2, 0, 2, 0, 0, 0, 0],
            [1, -1, 1, -1, 1, -1, -1, 1],
        ],
        charpoly: &[(2, 1), (6, 1), (12, 1)],
    },
    Frozen {
        name: "E7(a3)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 2, 0, 0],
            [-1, -1, -1, 1, 1, 1, -1, 1],
            [-1, 1, 1, -1, -1, 1, -1, 1],
            [0, -2, 0, 0, 2, 0, 0, 0],
            [-1, 1, -1, 1, 1, -1, -1, 1],
            [0, -2, 2, 0, 0, 0, 0, 0],
        ],
        charpoly: &[(2, 1), (6, 1), (10, 1)],
    },
    Frozen {
        name: "E7(a4)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 2, 0, 0],
            [-1, -1, 1, 1, -1, 1, -1, 1],
            [0, -2, 0, 2, 0, 0, 0, 0],
            [0, -2, 0, 0, 2, 0, 0, 0],
            [-1, -1, -1, -1, 1, -1, -1, 1],
            [-1, 1, -1, -1, 1, 1, -1, 1],
        ],
        charpoly: &[(2, 1), (6, 3)],
    },
    Frozen {
        name: "E7(b2)",
        labels: &["b1", "b2", "b4", "a4", "a2", "a3", "sigma"],
        roots: &[
            [2, 0, 0, 0, -2, 0, 0, 0],
            [1, 1, -1, 1, 1, 1, -1, 1],
            [1, -1, 1, -1, 1, -1, -1, 1],
            [0, 0, -2, -2, 0, 0, 0, 0],
            [-2, -2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, 2, 0, 0, -2, 0, 0],
        ],
        charpoly: &[(2, 1), (6, 1), (12, 1)],
    },
    Frozen {
        name: "E8(a1)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, -1, 1, -1, 1, 1, -1, 1],
            [-1, -1, -1, 1, 1, -1, 1, 1],
            [0, -2, 2, 0, 0, 0, 0, 0],
            [-1, 1, -1, 1, -1, 1, -1, 1],
            [-1, 1, 1, -1, 1, -1, -1, 1],
        ],
        charpoly: &[(24, 1)],
    },
    Frozen {
        name: "E8(a2)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [-1, -1, -1, 1, 1, -1, 1, 1],
            [-1, -1, 1, -1, -1, 1, 1, 1],
            [0, 0, 2, 0, 0, 0, 0, 2],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, 1, -1, -1, 1, 1, -1, 1],
            [0, 0, 0, -2, 2, 0, 0, 0],
        ],
        charpoly: &[(20, 1)],
    },
    Frozen {
        name: "E8(a3)",
        labels: &["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"],
        roots: &[
            [-2, -2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, -2, -2, 0, 0, 0, 0],
            [0, 0, 0, 0, -2, -2, 0, 0],
            [2, 0, 0, 2, 0, 0, 0, 0],
            [1, -1, 1, -1, -1, 1, -1, 1],
            [-1, 1, 1, 1, 1, 1, -1, 1],
            [0, 0, 2, 0, 0, 0, 0, -2],
        ],
        charpoly: &[(12, 2)],
    },
    Frozen {
        name: "E8(a4)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [-1, -1, -1, 1, 1, -1, 1, 1],
            [-1, -1, 1, -1, -1, 1, 1, 1],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, 1, 1, 1, 1, 1, -1, 1],
            [0, 0, -2, 0, 2, 0, 0, 0],
            [-1, 1, 1, -1, 1, -1, -1, 1],
        ],
        charpoly: &[(6, 1), (18, 1)],
    },
    Frozen {
        name: "E8(a5)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [0, -2, 0, 0, 0, 0, 2, 0],
            [-1, 1, -1, -1, -1, 1, 1, 1],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, 1, 1, 1, 1, 1, -1, 1],
            [0, 0, 0, 0, 2, 0, 0, 2],
            [1, 1, -1, 1, -1, 1, 1, 1],
        ],
        charpoly: &[(15, 1)],
    },
    Frozen {
        name: "E8(a6)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, 1, 1, 1, 1, 1, -1, 1],
            [-1, 1, -1, 1, 1, -1, -1, 1],
            [0, -2, 2, 0, 0, 0, 0, 0],
            [-1, -1, 1, 1, -1, 1, -1, 1],
            [-1, -1, -1, -1, 1, 1, 1, 1],
        ],
        charpoly: &[(10, 2)],
    },
    Frozen {
        name: "E8(a7)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [-1, -1, -1, 1, 1, -1, 1, 1],
            [-1, -1, 1, -1, -1, 1, 1, 1],
            [-1, -1, 1, 1, 1, -1, -1, 1],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, 1, -1, -1, 1, 1, -1, 1],
            [0, 0, -2, 0, 2, 0, 0, 0],
        ],
        charpoly: &[(6, 2), (12, 1)],
    },
    Frozen {
        name: "E8(a8)",
        labels: &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "d"],
        roots: &[
            [1, -1, -1, -1, -1, -1, -1, 1],
            [-2, 0, 0, 0, 0, 0, 2, 0],
            [0, -2, 0, 0, 0, 0, 2, 0],
            [0, -2, 0, 0, 2, 0, 0, 0],
            [-1, -1, -1, 1, 1, 1, -1, 1],
            [-1, -1, -1, -1, -1, 1, -1, 1],
            [-1, 1, -1, -1, -1, 1, 1, 1],
            [-1, 1, 1, 1, 1, 1, -1, 1],
        ],
        charpoly: &[(6, 4)],
    },
    Frozen {
        name: "E8(b3)",
        labels: &["b1", "b2", "b4", "a4", "a1", "a2", "a3", "sigma"],
        roots: &[
            [2, 0, 0, 2, 0, 0, 0, 0],
            [1, -1, 1, -1, -1, 1, -1, 1],
            [0, 0, 2, 0, 0, 0, 0, -2],
            [0, 0, 0, 0, -2, -2, 0, 0],
            [-2, -2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, -2, -2, 0, 0, 0, 0],
            [0, 0, 0, 0, 2, 0, 0, -2],
        ],
        charpoly: &[(12, 2)],
    },
    Frozen {
        name: "E8(b5)",
        labels: &["b1", "b2", "b4", "g", "a1", "a2", "a3", "a4"],
        roots: &[
            [-2, -2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, -2, -2, 0, 0, 0, 0],
            [0, 0, 0, 0, -2, -2, 0, 0],
            [1, -1, -1, 1, 1, 1, -1, -1],
            [2, 0, 0, 0, 0, 0, 0, 2],
            [1, 1, 1, 1, -1, 1, 1, -1],
            [-1, 1, 1, 1, 1, 1, -1, 1],
        ],
        charpoly: &[(15, 1)],
    },
];

/// Six-dimensional frozen list for the D6 pair, in the D6 model.
const D6_B2: &[[i64; 6]] =
    &[[0, 2, 0, 2, 0, 0], [2, 0, 0, 0, -2, 0], [0, 0, 2, 0, 0, -2], [-2, -2, 0, 0, 0, 0], [0, 0, -2, -2, 0, 0], [0, 0, 0, 0, 2, -2]];

fn system_for(name: &DiagramName) -> Result<RootSystem, DiagramError> {
    let family = match (name.family, name.decoration) {
        (f, Decoration::None) => f,
        (Family::D, _) | (Family::E, _) => name.family,
        _ => return Err(DiagramError::UnknownName(name.to_string())),
    };
    RootSystemId::new(family, name.rank)
        .map(|id| RootSystem::build(id).expect("valid id"))
        .map_err(|_| DiagramError::UnknownName(name.to_string()))
}

fn dynkin_charpoly(family: Family, n: usize) -> Polynomial {
    match family {
        Family::A => Polynomial::from_i64(&vec![1; n + 1]),
        Family::B | Family::C => x_pow_plus_one(n),
        Family::D => &x_pow_plus_one(n - 1) * &x_pow_plus_one(1),
        Family::E => match n {
            6 => cyclotomic_product(&[(3, 1), (12, 1)]),
            7 => cyclotomic_product(&[(2, 1), (18, 1)]),
            _ => cyclotomic_product(&[(30, 1)]),
        },
        Family::F => cyclotomic_product(&[(12, 1)]),
        Family::G => cyclotomic_product(&[(6, 1)]),
    }
}

fn halves(v: &[i64]) -> Root {
    Root::from_halves(v)
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `e_i - e_j` style root in dimension `n` from 1-based `(index, sign)` pairs.
fn unit_root(n: usize, terms: &[(usize, i64)]) -> Root {
    let mut v = vec![0i64; n];
    for &(i, s) in terms {
        v[i - 1] += s;
    }
    Root::from_i64(&v)
}

/// Square on `e_k - e_{k+1}, e_{k+1} - e_{k+2}, e_{k+1} + e_{k+2}, e_{k+2} - e_{k+3}`
/// with simple-root tails on both sides.
fn d_a_roots(n: usize, k: usize) -> (Vec<String>, Vec<Root>) {
    let mut roots = Vec::new();
    let mut names = Vec::new();
    for i in 1..k {
        roots.push(unit_root(n, &[(i, 1), (i + 1, -1)]));
        names.push(format!("t{i}"));
    }
    roots.push(unit_root(n, &[(k, 1), (k + 1, -1)]));
    roots.push(unit_root(n, &[(k + 1, 1), (k + 2, -1)]));
    roots.push(unit_root(n, &[(k + 1, 1), (k + 2, 1)]));
    roots.push(unit_root(n, &[(k + 2, 1), (k + 3, -1)]));
    names.extend(["u", "v", "z", "w"].map(String::from));
    for i in k + 3..n {
        roots.push(unit_root(n, &[(i, 1), (i + 1, -1)]));
        names.push(format!("t{i}"));
    }
    (names, roots)
}

/// Pure `l`-cycle `e_1 - e_2, ..., e_{l-1} - e_l, -e_1 - e_l`; its only dotted
/// edge joins the last two roots.
pub fn pure_cycle_roots(l: usize) -> Vec<Root> {
    let mut roots: Vec<Root> = (1..l).map(|i| unit_root(l, &[(i, 1), (i + 1, -1)])).collect();
    roots.push(unit_root(l, &[(1, -1), (l, -1)]));
    roots
}

/// The same cycle as `b1 .. b_m, a1 .. a_m` (`m = l/2`), where consecutive
/// vertices around the cycle are `a1, b1, a2, b2, ..., a_m, b_m` and
/// `a1 - b1` is the dotted edge.
pub fn labeled_pure_cycle(l: usize) -> (Vec<String>, Vec<Root>) {
    let c = pure_cycle_roots(l);
    let m = l / 2;
    let beta = (1..=m).map(|i| if i == 1 { c[l - 1].clone() } else { c[2 * i - 3].clone() });
    let alpha = (1..=m).map(|i| if i == 1 { c[l - 2].clone() } else { c[2 * i - 4].clone() });
    let names = (1..=m).map(|i| format!("b{i}")).chain((1..=m).map(|i| format!("a{i}"))).collect();
    (names, beta.chain(alpha).collect())
}

/// Labels, roots and expected polynomial of a series entry.
type SeriesRep = (Vec<String>, Vec<Root>, Polynomial);

fn series_entry(name: &DiagramName) -> Result<Option<SeriesRep>, DiagramError> {
    let n = name.rank;
    let sys = system_for(name)?;
    Ok(match (name.family, name.decoration) {
        (f, Decoration::None) => Some((labels("a", n), sys.simple_roots.clone(), dynkin_charpoly(f, n))),
        (Family::D, Decoration::A(k)) if k >= 1 && 2 * k + 2 <= n => {
            let (l, r) = d_a_roots(n, k);
            Some((l, r, &x_pow_plus_one(k + 1) * &x_pow_plus_one(n - k - 1)))
        }
        (Family::D, Decoration::B(k)) if n >= 8 && n.is_multiple_of(2) && 2 * k + 2 == n => {
            let (names, roots) = labeled_pure_cycle(n);
            Some((names, roots, x_pow_plus_one(n / 2).pow(2)))
        }
        (Family::D, Decoration::B(2)) if n == 6 => {
            let names = ["b1", "b2", "b4", "a2", "a3", "sigma"].map(String::from).to_vec();
            let roots = D6_B2.iter().map(|v| halves(v)).collect();
            Some((names, roots, x_pow_plus_one(3).pow(2)))
        }
        _ => None,
    })
}

fn frozen_entry(name: &DiagramName) -> Option<(Vec<String>, Vec<Root>, Polynomial)> {
    let key = name.to_string();
    let f = FROZEN.iter().find(|f| f.name == key)?;
    let sys = RootSystem::of(name.family, name.rank);
    let roots: Vec<Root> = f.roots.iter().map(|v| halves(v)).collect();
    debug_assert!(roots.iter().all(|r| r.dim() == sys.ambient_dim));
    Some((f.labels.iter().map(|s| s.to_string()).collect(), roots, cyclotomic_product(f.charpoly)))
}

fn build(name: &DiagramName) -> Result<CatalogEntry, DiagramError> {
    let found = match name.family {
        Family::E if name.decoration != Decoration::None => frozen_entry(name),
        _ => series_entry(name)?,
    };
    let (labels, roots, charpoly) = found.ok_or_else(|| DiagramError::UnknownName(name.to_string()))?;
    let sys = system_for(name)?;
    let integrity = |reason: String| DiagramError::CatalogIntegrity { name: name.to_string(), reason };
    if let Some(bad) = roots.iter().find(|r| !sys.is_root(r)) {
        return Err(integrity(format!("{bad} is not a root of {}", sys.id)));
    }
    let diagram = from_labeled_roots(&sys, &labels, &roots).map_err(|e| integrity(e.to_string()))?;
    if !is_admissible(&diagram) {
        return Err(integrity("representative is not admissible".into()));
    }
    let chi = diagram.bicolored_charpoly().expect("admissible diagrams are bipartite");
    if chi != charpoly {
        return Err(integrity(format!("bicoloured charpoly {chi}, stored {charpoly}")));
    }
    Ok(CatalogEntry { name: *name, diagram, charpoly })
}

fn cache() -> &'static Mutex<HashMap<DiagramName, Result<CatalogEntry, DiagramError>>> {
    static CACHE: OnceLock<Mutex<HashMap<DiagramName, Result<CatalogEntry, DiagramError>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Representative of a named diagram, validated on first use.
pub fn catalog(name: &DiagramName) -> Result<CatalogEntry, DiagramError> {
    if let Some(hit) = cache().lock().expect("catalog lock").get(name) {
        return hit.clone();
    }
    let built = build(name);
    cache().lock().expect("catalog lock").insert(*name, built.clone());
    built
}

/// Every catalog name with the given number of vertices.
pub fn catalog_names(rank: usize) -> Vec<DiagramName> {
    use Family::*;
    let mut out = Vec::new();
    if rank >= 1 {
        out.push(DiagramName::dynkin(A, rank));
    }
    if rank >= 2 {
        out.push(DiagramName::dynkin(B, rank));
    }
    if rank >= 3 {
        out.push(DiagramName::dynkin(C, rank));
    }
    if rank >= 4 {
        out.push(DiagramName::dynkin(D, rank));
        for k in 1..=(rank - 2) / 2 {
            out.push(DiagramName::a(D, rank, k));
        }
    }
    if rank >= 6 && rank.is_multiple_of(2) {
        out.push(DiagramName::b(D, rank, rank / 2 - 1));
    }
    if (6..=8).contains(&rank) {
        out.push(DiagramName::dynkin(E, rank));
    }
    match rank {
        2 => out.push(DiagramName::dynkin(G, 2)),
        4 => out.push(DiagramName::dynkin(F, 4)),
        _ => {}
    }
    for f in FROZEN {
        let name: DiagramName = f.name.parse().expect("frozen names parse");
        if name.rank == rank {
            out.push(name);
        }
    }
    out
}

/// Matches an admissible diagram against the catalog entries of its size by
/// the invariant tuple (vertex count, sorted degrees, cycle lengths, long
/// vertex count, bicoloured charpoly).
pub fn identify(d: &LabeledDiagram) -> Result<Option<DiagramName>, DiagramError> {
    let Some(target) = invariants(d) else { return Ok(None) };
    let mut hits = Vec::new();
    for name in catalog_names(d.diagram.len()) {
        let entry = catalog(&name)?;
        if invariants(&entry.diagram).as_ref() == Some(&target) {
            hits.push(name);
        }
    }
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0])),
        _ => Err(DiagramError::Ambiguous(hits.iter().map(|n| n.to_string()).collect())),
    }
}

/// Checks that no two catalog entries of the given size share an invariant tuple.
pub fn check_collisions(rank: usize) -> Result<(), DiagramError> {
    let mut seen: HashMap<_, DiagramName> = HashMap::new();
    for name in catalog_names(rank) {
        let entry = catalog(&name)?;
        let inv = invariants(&entry.diagram).expect("catalog entries are bipartite");
        if let Some(prev) = seen.insert(inv, name) {
            return Err(DiagramError::Ambiguous(vec![prev.to_string(), name.to_string()]));
        }
    }
    Ok(())
}
