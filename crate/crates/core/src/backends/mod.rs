//! Computable categories: finite sets and finite preorders, with concrete
//! pullbacks and class predicates. These are not enumerated; equivalence
//! of spans over them is established by certificates.

mod cert;
mod derive;
mod prover;

pub use cert::{
    check_certificate, AWitness, BSpan, CertRelation, Certificate, Dir, SStarEvidence, Square,
    Step, Verdict,
};
pub use derive::{derive_certificate, poset_reflection, Derivation, Template, TemplateInputs};
pub use prover::{bounded_prover, ProverBounds, ProverOutcome};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    FinSet,
    Preorder,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::FinSet => "finset",
            Backend::Preorder => "preorder",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finset" => Ok(Backend::FinSet),
            "preorder" => Ok(Backend::Preorder),
            _ => Err(Error::Input(format!("unknown backend `{s}`"))),
        }
    }
}

/// A finite preorder on `0..n`. Finite sets carry the discrete order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Obj {
    pub n: usize,
    pub leq: Vec<Vec<bool>>,
}

impl Obj {
    pub fn set(n: usize) -> Obj {
        Obj {
            n,
            leq: (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect(),
        }
    }

    pub fn chaotic(n: usize) -> Obj {
        Obj {
            n,
            leq: vec![vec![true; n]; n],
        }
    }

    pub fn point() -> Obj {
        Obj::set(1)
    }

    pub fn preorder(leq: Vec<Vec<bool>>) -> Result<Obj> {
        let o = Obj { n: leq.len(), leq };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("order matrix is not {n}x{n}")));
        }
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(Error::Input(format!("order is not reflexive at {i}")));
            }
            for j in 0..n {
                for k in 0..n {
                    if self.leq[i][j] && self.leq[j][k] && !self.leq[i][k] {
                        return Err(Error::Input(format!("order is not transitive at {i} {j} {k}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.leq[i][j] == (i == j)))
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn check_in(&self, backend: Backend) -> Result<()> {
        self.validate()?;
        if backend == Backend::FinSet && !self.is_discrete() {
            return Err(Error::Input("finset objects carry the discrete order".into()));
        }
        Ok(())
    }

    /// The full subpreorder on `elems`, in the given order.
    pub fn induced(&self, elems: &[usize]) -> Obj {
        Obj {
            n: elems.len(),
            leq: elems
                .iter()
                .map(|&x| elems.iter().map(|&y| self.leq[x][y]).collect())
                .collect(),
        }
    }

    /// Disjoint union, left summand first.
    pub fn coproduct(&self, other: &Obj) -> Obj {
        let n = self.n + other.n;
        let mut leq = vec![vec![false; n]; n];
        for i in 0..self.n {
            for j in 0..self.n {
                leq[i][j] = self.leq[i][j];
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                leq[self.n + i][self.n + j] = other.leq[i][j];
            }
        }
        Obj { n, leq }
    }
}

/// A monotone map, given by its value array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mor {
    pub dom: Obj,
    pub cod: Obj,
    pub values: Vec<usize>,
}

impl Mor {
    pub fn new(dom: Obj, cod: Obj, values: Vec<usize>) -> Result<Mor> {
        let m = Mor { dom, cod, values };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.dom.n {
            return Err(Error::Input(format!(
                "map has {} values but its domain has {} elements",
                self.values.len(),
                self.dom.n
            )));
        }
        if let Some(&v) = self.values.iter().find(|&&v| v >= self.cod.n) {
            return Err(Error::Input(format!("value {v} outside a codomain of {} elements", self.cod.n)));
        }
        for i in 0..self.dom.n {
            for j in 0..self.dom.n {
                if self.dom.leq[i][j] && !self.cod.leq[self.values[i]][self.values[j]] {
                    return Err(Error::Input(format!("map is not monotone on {i} <= {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn check_in(&self, backend: Backend) -> Result<()> {
        self.dom.check_in(backend)?;
        self.cod.check_in(backend)?;
        self.validate()
    }

    pub fn identity(o: &Obj) -> Mor {
        Mor {
            dom: o.clone(),
            cod: o.clone(),
            values: (0..o.n).collect(),
        }
    }

    /// The unique map into the point.
    pub fn bang(o: &Obj) -> Mor {
        Mor {
            dom: o.clone(),
            cod: Obj::point(),
            values: vec![0; o.n],
        }
    }

    /// The unique map out of the empty object.
    pub fn from_empty(o: &Obj) -> Mor {
        Mor {
            dom: Obj::set(0),
            cod: o.clone(),
            values: Vec::new(),
        }
    }

    /// The constant map; monotone since preorders are reflexive.
    pub fn constant(dom: &Obj, cod: &Obj, value: usize) -> Mor {
        Mor {
            dom: dom.clone(),
            cod: cod.clone(),
            values: vec![value; dom.n],
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `self ∘ f`, or `None` when the codomain of `f` is not our domain.
    pub fn after(&self, f: &Mor) -> Option<Mor> {
        (f.cod == self.dom).then(|| Mor {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            values: f.values.iter().map(|&x| self.values[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.n];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.n];
        for &v in &self.values {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// `x ≤ x'` iff `m x ≤ m x'`.
    pub fn reflects_order(&self) -> bool {
        let n = self.dom.n;
        (0..n).all(|i| (0..n).all(|j| self.dom.leq[i][j] == self.cod.leq[self.values[i]][self.values[j]]))
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective() && self.reflects_order()
    }

    pub fn is_ff_surjection(&self) -> bool {
        self.is_surjective() && self.reflects_order()
    }

    /// Isomorphic over the codomain to a product projection `A×B → A`
    /// with non-empty domain, or an isomorphism between empty objects.
    pub fn is_projection(&self) -> bool {
        if self.dom.n == 0 {
            return self.cod.n == 0;
        }
        if !self.is_surjective() {
            return false;
        }
        let fibers: Vec<Vec<usize>> = (0..self.cod.n)
            .map(|a| (0..self.dom.n).filter(|&x| self.values[x] == a).collect())
            .collect();
        let k = fibers[0].len();
        if fibers.iter().any(|f| f.len() != k) {
            return false;
        }
        let b = self.dom.induced(&fibers[0]);
        let mut phi = vec![usize::MAX; self.dom.n];
        assign_fibers(self, &fibers, &b, 0, &mut phi)
    }

    /// The pairing `⟨self, g⟩` into the canonical product, when the
    /// domains agree.
    pub fn pair(&self, g: &Mor) -> Option<Mor> {
        if self.dom != g.dom {
            return None;
        }
        let prod = product(&self.cod, &g.cod);
        Some(Mor {
            dom: self.dom.clone(),
            cod: prod.p.dom.clone(),
            values: (0..self.dom.n)
                .map(|x| self.values[x] * g.cod.n + g.values[x])
                .collect(),
        })
    }
}

/// Backtracking search for order isomorphisms `fiber(a) ≅ b` that make
/// the domain the product order.
fn assign_fibers(m: &Mor, fibers: &[Vec<usize>], b: &Obj, a: usize, phi: &mut [usize]) -> bool {
    if a == fibers.len() {
        return true;
    }
    let mut used = vec![false; b.n];
    assign_one(m, fibers, b, (a, 0), &mut used, phi)
}

fn assign_one(
    m: &Mor,
    fibers: &[Vec<usize>],
    b: &Obj,
    (a, i): (usize, usize),
    used: &mut [bool],
    phi: &mut [usize],
) -> bool {
    let fiber = &fibers[a];
    if i == fiber.len() {
        return assign_fibers(m, fibers, b, a + 1, phi);
    }
    let x = fiber[i];
    for y in 0..b.n {
        if used[y] {
            continue;
        }
        phi[x] = y;
        // compare against everything assigned so far
        let ok = (0..=a).all(|a2| {
            let upto = if a2 == a { i + 1 } else { fibers[a2].len() };
            fibers[a2][..upto].iter().all(|&x2| {
                let (ax, ax2) = (m.values[x], m.values[x2]);
                let fwd = m.cod.leq[ax][ax2] && b.leq[phi[x]][phi[x2]];
                let bwd = m.cod.leq[ax2][ax] && b.leq[phi[x2]][phi[x]];
                m.dom.leq[x][x2] == fwd && m.dom.leq[x2][x] == bwd
            })
        });
        if ok {
            used[y] = true;
            if assign_one(m, fibers, b, (a, i + 1), used, phi) {
                return true;
            }
            used[y] = false;
        }
    }
    phi[x] = usize::MAX;
    false
}

/// Predicate flags of a backend morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub mono: bool,
    pub epi: bool,
    pub fully_faithful_surjection: bool,
    pub projection: bool,
}

pub fn class_predicates(m: &Mor) -> Flags {
    Flags {
        mono: m.is_injective(),
        epi: m.is_surjective(),
        fully_faithful_surjection: m.is_ff_surjection(),
        projection: m.is_projection(),
    }
}

/// A designated class on a backend, given by a predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SPred {
    All,
    Iso,
    Injective,
    Surjective,
    FfSurj,
    Proj,
}

impl SPred {
    pub fn contains(&self, m: &Mor) -> bool {
        match self {
            SPred::All => true,
            SPred::Iso => m.is_iso(),
            SPred::Injective => m.is_injective(),
            SPred::Surjective => m.is_surjective(),
            SPred::FfSurj => m.is_ff_surjection(),
            SPred::Proj => m.is_projection() || m.is_iso(),
        }
    }
}

impl fmt::Display for SPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SPred::All => "all",
            SPred::Iso => "iso",
            SPred::Injective => "injective",
            SPred::Surjective => "surjective",
            SPred::FfSurj => "ffsurj",
            SPred::Proj => "proj",
        })
    }
}

impl FromStr for SPred {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => SPred::All,
            "iso" => SPred::Iso,
            "injective" => SPred::Injective,
            "surjective" => SPred::Surjective,
            "ffsurj" => SPred::FfSurj,
            "proj" => SPred::Proj,
            _ => return Err(Error::Input(format!("unknown class predicate `{s}`"))),
        })
    }
}

/// The canonical pullback of `s` along `f`: pairs `(x, y)` with
/// `f x = s y` in lexicographic order, ordered componentwise.
pub fn pullback(f: &Mor, s: &Mor) -> Option<Square> {
    if f.cod != s.cod {
        return None;
    }
    let pairs: Vec<(usize, usize)> = (0..f.dom.n)
        .flat_map(|x| (0..s.dom.n).map(move |y| (x, y)))
        .filter(|&(x, y)| f.values[x] == s.values[y])
        .collect();
    let leq = pairs
        .iter()
        .map(|&(x, y)| {
            pairs
                .iter()
                .map(|&(x2, y2)| f.dom.leq[x][x2] && s.dom.leq[y][y2])
                .collect()
        })
        .collect();
    let apex = Obj { n: pairs.len(), leq };
    Some(Square {
        p: Mor {
            dom: apex.clone(),
            cod: f.dom.clone(),
            values: pairs.iter().map(|p| p.0).collect(),
        },
        q: Mor {
            dom: apex,
            cod: s.dom.clone(),
            values: pairs.iter().map(|p| p.1).collect(),
        },
    })
}

/// The canonical product, as the pullback over the point.
pub fn product(a: &Obj, b: &Obj) -> Square {
    pullback(&Mor::bang(a), &Mor::bang(b)).expect("same codomain")
}

/// Checks that `(p, q)` is a pullback of `s` along `f`: the square
/// commutes and the comparison map into the canonical pullback is an
/// order isomorphism.
pub fn is_pullback(f: &Mor, s: &Mor, sq: &Square) -> std::result::Result<(), String> {
    if sq.p.dom != sq.q.dom {
        return Err("not a limit cone: legs have different domains".into());
    }
    if sq.p.cod != f.dom || sq.q.cod != s.dom || f.cod != s.cod {
        return Err("not a limit cone: legs do not match the cospan".into());
    }
    let (Some(l), Some(r)) = (f.after(&sq.p), s.after(&sq.q)) else {
        return Err("not a limit cone: ill-typed square".into());
    };
    if l != r {
        return Err("not a limit cone: the square does not commute".into());
    }
    let canon = pullback(f, s).expect("checked codomains");
    let apex = &sq.p.dom;
    let mut hit = vec![false; canon.p.dom.n];
    for z in 0..apex.n {
        let key = (sq.p.values[z], sq.q.values[z]);
        let idx = (0..canon.p.dom.n)
            .find(|&i| (canon.p.values[i], canon.q.values[i]) == key)
            .expect("commuting cone lands in the canonical pullback");
        if std::mem::replace(&mut hit[idx], true) {
            return Err("not a limit cone: comparison map is not injective".into());
        }
    }
    if hit.iter().any(|h| !h) {
        return Err("not a limit cone: comparison map is not surjective".into());
    }
    for z in 0..apex.n {
        for w in 0..apex.n {
            let comp = f.dom.leq[sq.p.values[z]][sq.p.values[w]] && s.dom.leq[sq.q.values[z]][sq.q.values[w]];
            if apex.leq[z][w] != comp {
                return Err("not a limit cone: apex order is not the componentwise order".into());
            }
        }
    }
    Ok(())
}

/// All preorders on `n` labelled elements (finite sets: just the discrete one).
pub fn objects_of_size(backend: Backend, n: usize) -> Vec<Obj> {
    match backend {
        Backend::FinSet => vec![Obj::set(n)],
        Backend::Preorder => all_preorders(n),
    }
}

fn all_preorders(n: usize) -> Vec<Obj> {
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    fn rec(cells: &[(usize, usize)], k: usize, leq: &mut Vec<Vec<bool>>, out: &mut Vec<Obj>) {
        if k == cells.len() {
            let o = Obj { n: leq.len(), leq: leq.clone() };
            if o.validate().is_ok() {
                out.push(o);
            }
            return;
        }
        let (i, j) = cells[k];
        for b in [false, true] {
            leq[i][j] = b;
            rec(cells, k + 1, leq, out);
        }
        leq[i][j] = false;
    }
    rec(&cells, 0, &mut leq, &mut out);
    out
}

/// All monotone maps `dom → cod`, in lexicographic order of value arrays.
pub fn all_maps(dom: &Obj, cod: &Obj) -> Vec<Mor> {
    let mut out = Vec::new();
    let mut values = Vec::with_capacity(dom.n);
    fn rec(dom: &Obj, cod: &Obj, values: &mut Vec<usize>, out: &mut Vec<Mor>) {
        let i = values.len();
        if i == dom.n {
            out.push(Mor {
                dom: dom.clone(),
                cod: cod.clone(),
                values: values.clone(),
            });
            return;
        }
        for y in 0..cod.n {
            let ok = (0..i).all(|j| {
                (!dom.leq[j][i] || cod.leq[values[j]][y]) && (!dom.leq[i][j] || cod.leq[y][values[j]])
            });
            if ok {
                values.push(y);
                rec(dom, cod, values, out);
                values.pop();
            }
        }
    }
    rec(dom, cod, &mut values, &mut out);
    out
}
