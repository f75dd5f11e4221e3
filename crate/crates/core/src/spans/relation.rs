use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{saturate, Partition, SpanCategory, SpanId};
use crate::classes::{self, MorClass, WorklistOrder};
use crate::error::{Error, Result};
use crate::fincat::{MorId, ObjId};
use crate::limits::{self, Cospan, Ofs};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Iso,
    Z,
    A,
    ZStar,
    ZCirc,
    Az,
    ZT(String),
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::Iso => write!(f, "span"),
            RelationKind::Z => write!(f, "z"),
            RelationKind::A => write!(f, "a"),
            RelationKind::ZStar => write!(f, "zstar"),
            RelationKind::ZCirc => write!(f, "zcirc"),
            RelationKind::Az => write!(f, "az"),
            RelationKind::ZT(name) => write!(f, "zT:{name}"),
        }
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "span" | "iso" => RelationKind::Iso,
            "z" => RelationKind::Z,
            "a" => RelationKind::A,
            "zstar" => RelationKind::ZStar,
            "zcirc" => RelationKind::ZCirc,
            "az" => RelationKind::Az,
            _ => match s.strip_prefix("zT:") {
                Some(name) if !name.is_empty() => RelationKind::ZT(name.to_string()),
                _ => return Err(Error::Input(format!("unknown relation `{s}`"))),
            },
        })
    }
}

/// Extra data some relations need.
#[derive(Clone, Debug, Default)]
pub struct RelationContext {
    pub ofs: Option<Ofs>,
    pub custom: BTreeMap<String, MorClass>,
}

/// All pairs `(σ, τ)` of distinct span classes with a vertical morphism
/// `x ∈ T` from `σ` to `τ`. `T` must be closed under composition with isos.
pub fn leq_pairs(sc: &SpanCategory, t: &MorClass) -> Vec<(SpanId, SpanId)> {
    let cat = &sc.cat;
    let mut out = Vec::new();
    for a in cat.object_ids() {
        for b in cat.object_ids() {
            let hom = sc.hom(a, b);
            for &x in hom {
                let sx = sc.get(x).rep;
                for &y in hom {
                    if x == y {
                        continue;
                    }
                    let sy = sc.get(y).rep;
                    let found = cat.hom(sx.apex, sy.apex).iter().any(|&v| {
                        t.contains(v) && cat.comp(sy.s, v) == sx.s && cat.comp(sy.f, v) == sx.f
                    });
                    if found {
                        out.push((x, y));
                    }
                }
            }
        }
    }
    out
}

fn a_seeds(sc: &SpanCategory) -> Result<Vec<(SpanId, SpanId)>> {
    let cat = &sc.cat;
    let mut out = Vec::new();
    for s in sc.class.iter() {
        for &f in cat.into(cat.cod(s)) {
            let x = pb_span(sc, f, s)?;
            for &v in cat.out_of(cat.cod(s)) {
                if !sc.class.contains(v) {
                    continue;
                }
                let y = pb_span(sc, cat.comp(v, f), cat.comp(v, s))?;
                if x != y {
                    out.push((x, y));
                }
            }
        }
    }
    Ok(out)
}

/// `pb⟨f, s⟩` as a span class.
fn pb_span(sc: &SpanCategory, f: MorId, s: MorId) -> Result<SpanId> {
    let cat = &sc.cat;
    let c = limits::pullback(cat, f, s).ok_or_else(|| {
        Error::InvalidInstance(format!(
            "no pullback for cospan ⟨{}, {}⟩",
            cat.label(f),
            cat.label(s)
        ))
    })?;
    sc.class_of_pair(c.p, c.q)
        .ok_or_else(|| Error::Internal("pulled-back leg left the class".into()))
}

fn custom_class(sc: &SpanCategory, name: &str, ctx: &RelationContext) -> Result<MorClass> {
    let t = ctx
        .custom
        .get(name)
        .ok_or_else(|| Error::Input(format!("unknown class `{name}`")))?;
    if !t.is_subset(&sc.class) {
        return Err(Error::InvalidInstance(format!("class {name} is not contained in S")));
    }
    let star = classes::compute_s_star(&sc.cat, &sc.class)?;
    if !star.is_subset(t) {
        return Err(Error::InvalidInstance(format!("class {name} does not contain S★")));
    }
    let closed = classes::pullback_closure(&sc.cat, t, None, WorklistOrder::Fifo)?;
    if &closed != t {
        return Err(Error::InvalidInstance(format!(
            "class {name} is not stable under pullback"
        )));
    }
    Ok(t.clone())
}

fn checked_ofs<'c>(sc: &SpanCategory, ctx: &'c RelationContext) -> Result<&'c Ofs> {
    let ofs = ctx
        .ofs
        .as_ref()
        .ok_or_else(|| Error::InvalidInstance("relation zcirc needs a factorization system".into()))?;
    if ofs.s != sc.class {
        return Err(Error::InvalidInstance(
            "the factorization system's right class differs from S".into(),
        ));
    }
    if !limits::validate_ofs(&sc.cat, ofs).is_ok() {
        return Err(Error::InvalidInstance(
            "not a relatively stable factorization system".into(),
        ));
    }
    Ok(ofs)
}

/// Generating pairs of a relation, before saturation.
pub fn seeds(
    sc: &SpanCategory,
    kind: &RelationKind,
    ctx: &RelationContext,
) -> Result<Vec<(SpanId, SpanId)>> {
    Ok(match kind {
        RelationKind::Iso => Vec::new(),
        RelationKind::Z => leq_pairs(sc, &sc.class),
        RelationKind::A => a_seeds(sc)?,
        RelationKind::ZStar => leq_pairs(sc, &classes::compute_s_star(&sc.cat, &sc.class)?),
        RelationKind::ZCirc => {
            let ofs = checked_ofs(sc, ctx)?;
            leq_pairs(sc, &classes::compute_s_circ(&sc.cat, ofs)?)
        }
        RelationKind::Az => {
            let mut v = leq_pairs(sc, &sc.class);
            v.extend(a_seeds(sc)?);
            v
        }
        RelationKind::ZT(name) => leq_pairs(sc, &custom_class(sc, name, ctx)?),
    })
}

pub fn relation(sc: &SpanCategory, kind: &RelationKind, ctx: &RelationContext) -> Result<Partition> {
    let seed = seeds(sc, kind, ctx)?;
    Ok(saturate(sc, &seed, kind.clone()))
}

/// `⟨f, s⟩ ⪕ ⟨g, t⟩` witnessed by `v ∈ S` (the least such `v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CospanPair {
    pub from: Cospan,
    pub to: Cospan,
    pub v: MorId,
}

pub fn cospan_preorder(sc: &SpanCategory, a: ObjId, b: ObjId) -> Vec<CospanPair> {
    let cat = &sc.cat;
    let mut best: BTreeMap<(Cospan, Cospan), MorId> = BTreeMap::new();
    for s in sc.class.iter() {
        if cat.dom(s) != b {
            continue;
        }
        for &f in cat.hom(a, cat.cod(s)) {
            let from = Cospan { f, s };
            for &v in cat.out_of(cat.cod(s)) {
                if !sc.class.contains(v) {
                    continue;
                }
                let to = Cospan {
                    f: cat.comp(v, f),
                    s: cat.comp(v, s),
                };
                best.entry((from, to)).or_insert(v);
            }
        }
    }
    best.into_iter()
        .map(|((from, to), v)| CospanPair { from, to, v })
        .collect()
}

/// Walks every instance of the one-step description: `u ∈ S`, `k`, a pair
/// `⟨f̌,š⟩ ⪕ ⟨ǧ,ť⟩` and the two pullbacks. Stops when `visit` returns true.
fn walk_a_witnesses(
    sc: &SpanCategory,
    feet: Option<(ObjId, ObjId)>,
    mut visit: impl FnMut(SpanId, SpanId) -> bool,
) -> Result<bool> {
    let cat = &sc.cat;
    for s_check in sc.class.iter() {
        let p_obj = cat.cod(s_check);
        let k_obj = cat.dom(s_check);
        for &f_check in cat.into(p_obj) {
            let u_obj = cat.dom(f_check);
            let c1 = limits::pullback(cat, f_check, s_check)
                .ok_or_else(|| Error::InvalidInstance("missing pullback".into()))?;
            for &v in cat.out_of(p_obj) {
                if !sc.class.contains(v) {
                    continue;
                }
                let c2 = limits::pullback(cat, cat.comp(v, f_check), cat.comp(v, s_check))
                    .ok_or_else(|| Error::InvalidInstance("missing pullback".into()))?;
                for &u in cat.out_of(u_obj) {
                    if !sc.class.contains(u) {
                        continue;
                    }
                    if feet.is_some_and(|(a, _)| cat.cod(u) != a) {
                        continue;
                    }
                    for &k in cat.out_of(k_obj) {
                        if feet.is_some_and(|(_, b)| cat.cod(k) != b) {
                            continue;
                        }
                        let x = sc.class_of_pair(cat.comp(u, c1.p), cat.comp(k, c1.q));
                        let y = sc.class_of_pair(cat.comp(u, c2.p), cat.comp(k, c2.q));
                        let (Some(x), Some(y)) = (x, y) else {
                            return Err(Error::Internal("witness span left the class".into()));
                        };
                        if visit(x, y) {
                            return Ok(true);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

/// The one-step relation `≈a`, found by direct witness search.
pub fn oracle_a_direct(sc: &SpanCategory, sigma: SpanId, tau: SpanId) -> Result<bool> {
    let (a, b) = (sc.get(sigma).dom, sc.get(sigma).cod);
    if (a, b) != (sc.get(tau).dom, sc.get(tau).cod) {
        return Ok(false);
    }
    walk_a_witnesses(sc, Some((a, b)), |x, y| x == sigma && y == tau)
}

/// Every pair in `≈a`, sorted.
pub fn oracle_a_pairs(sc: &SpanCategory) -> Result<Vec<(SpanId, SpanId)>> {
    let mut out = BTreeSet::new();
    walk_a_witnesses(sc, None, |x, y| {
        out.insert((x, y));
        false
    })?;
    Ok(out.into_iter().collect())
}
