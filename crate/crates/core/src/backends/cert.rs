//! Certificates: chains of elementary steps between spans over a backend,
//! and the checker that re-verifies every claim from the raw arrays.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{is_pullback, Backend, Mor, SPred};
use crate::error::{Error, Result};

/// A span `A <-s- D -f-> B`; the apex is the common domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BSpan {
    pub s: Mor,
    pub f: Mor,
}

/// A cone `(p, q)` over a cospan `⟨f, s⟩`, with `p` into the domain of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub p: Mor,
    pub q: Mor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dir {
    Forward,
    Backward,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::Forward => "forward",
            Dir::Backward => "backward",
        })
    }
}

impl FromStr for Dir {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Dir::Forward),
            "backward" => Ok(Dir::Backward),
            _ => Err(Error::Input(format!("unknown direction `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertRelation {
    A,
    Z,
    Az,
    ZStar,
}

impl fmt::Display for CertRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertRelation::A => "a",
            CertRelation::Z => "z",
            CertRelation::Az => "az",
            CertRelation::ZStar => "zstar",
        })
    }
}

impl FromStr for CertRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "a" => CertRelation::A,
            "z" => CertRelation::Z,
            "az" => CertRelation::Az,
            "zstar" => CertRelation::ZStar,
            _ => return Err(Error::Input(format!("certificates cover a, z, az and zstar, not `{s}`"))),
        })
    }
}

/// One associated-relation step. The span over `small` is the pullback
/// of the cospan `⟨fc, sc⟩`, the span over `large` that of `⟨gc, tc⟩`,
/// and `v` maps the first cospan to the second.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AWitness {
    pub u: Mor,
    pub k: Mor,
    pub fc: Mor,
    pub sc: Mor,
    pub gc: Mor,
    pub tc: Mor,
    pub v: Mor,
    pub small: Square,
    pub large: Square,
}

/// Evidence that `x` lies in the pullback closure of the conjugates: a
/// conjugate `star` of `v` and a pullback square `(x, leg)` of `star`
/// along `along`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SStarEvidence {
    pub f: Mor,
    pub s: Mor,
    pub v: Mor,
    pub small: Square,
    pub large: Square,
    pub star: Mor,
    pub along: Mor,
    pub leg: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Iso {
        x: Mor,
        to: BSpan,
    },
    /// `x` is a vertical morphism from the current span to `to` (forward)
    /// or from `to` to the current span (backward).
    Leq {
        dir: Dir,
        x: Mor,
        evidence: Option<SStarEvidence>,
        to: BSpan,
    },
    /// Forward: the current span sits over `small`. Backward: over `large`.
    A {
        dir: Dir,
        w: Box<AWitness>,
        to: BSpan,
    },
}

impl Step {
    pub fn to(&self) -> &BSpan {
        match self {
            Step::Iso { to, .. } | Step::Leq { to, .. } | Step::A { to, .. } => to,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Step::Iso { .. } => "iso",
            Step::Leq { evidence: None, .. } => "leq",
            Step::Leq { .. } => "leq-star",
            Step::A { .. } => "a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub backend: Backend,
    pub class: SPred,
    pub relation: CertRelation,
    pub start: BSpan,
    pub steps: Vec<Step>,
    pub end: BSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    /// `step` is `None` for failures of the endpoints themselves.
    Invalid { step: Option<usize>, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

type Check = std::result::Result<(), String>;

fn comp(g: &Mor, f: &Mor, what: &str) -> std::result::Result<Mor, String> {
    g.after(f).ok_or_else(|| format!("ill-typed composite in {what}"))
}

fn eq(lhs: &Mor, rhs: &Mor, what: &str) -> Check {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("equation fails: {what}"))
    }
}

fn member(class: SPred, m: &Mor, what: &str) -> Check {
    if class.contains(m) {
        Ok(())
    } else {
        Err(format!("{what} is not in the class {class}"))
    }
}

fn same_feet(a: &BSpan, b: &BSpan) -> Check {
    if a.s.cod != b.s.cod || a.f.cod != b.f.cod {
        return Err("spans do not share feet".into());
    }
    Ok(())
}

fn span_ok(class: SPred, sp: &BSpan) -> Check {
    if sp.s.dom != sp.f.dom {
        return Err("span legs have different domains".into());
    }
    member(class, &sp.s, "span leg s")
}

/// `x` is a vertical morphism from `lo` to `hi`.
fn vertical(x: &Mor, lo: &BSpan, hi: &BSpan) -> Check {
    eq(&comp(&hi.s, x, "vertical morphism")?, &lo.s, "s-leg commutes with x")?;
    eq(&comp(&hi.f, x, "vertical morphism")?, &lo.f, "f-leg commutes with x")
}

fn check_sstar(class: SPred, x: &Mor, ev: &SStarEvidence) -> Check {
    member(class, &ev.s, "evidence s")?;
    member(class, &ev.v, "evidence v")?;
    let vf = comp(&ev.v, &ev.f, "evidence cospan")?;
    let vs = comp(&ev.v, &ev.s, "evidence cospan")?;
    is_pullback(&ev.f, &ev.s, &ev.small).map_err(|r| format!("evidence small square: {r}"))?;
    is_pullback(&vf, &vs, &ev.large).map_err(|r| format!("evidence large square: {r}"))?;
    eq(&comp(&ev.large.p, &ev.star, "conjugate")?, &ev.small.p, "conjugate commutes with p")?;
    eq(&comp(&ev.large.q, &ev.star, "conjugate")?, &ev.small.q, "conjugate commutes with q")?;
    let sq = Square {
        p: x.clone(),
        q: ev.leg.clone(),
    };
    is_pullback(&ev.along, &ev.star, &sq).map_err(|r| format!("evidence pullback of the conjugate: {r}"))
}

fn check_a(class: SPred, w: &AWitness, sig: &BSpan, tau: &BSpan) -> Check {
    member(class, &w.u, "u")?;
    member(class, &w.sc, "cospan leg s")?;
    member(class, &w.tc, "cospan leg t")?;
    member(class, &w.v, "v")?;
    eq(&comp(&w.v, &w.fc, "cospan morphism")?, &w.gc, "v f = g on cospans")?;
    eq(&comp(&w.v, &w.sc, "cospan morphism")?, &w.tc, "v s = t on cospans")?;
    is_pullback(&w.fc, &w.sc, &w.small).map_err(|r| format!("small square: {r}"))?;
    is_pullback(&w.gc, &w.tc, &w.large).map_err(|r| format!("large square: {r}"))?;
    eq(&comp(&w.u, &w.small.p, "span")?, &sig.s, "s = u ŝ")?;
    eq(&comp(&w.k, &w.small.q, "span")?, &sig.f, "f = k f̂")?;
    eq(&comp(&w.u, &w.large.p, "span")?, &tau.s, "t = u t̂")?;
    eq(&comp(&w.k, &w.large.q, "span")?, &tau.f, "g = k ĝ")
}

fn check_step(cert: &Certificate, cur: &BSpan, step: &Step) -> Check {
    let class = cert.class;
    let to = step.to();
    span_ok(class, to)?;
    same_feet(cur, to)?;
    match step {
        Step::Iso { x, .. } => {
            if !x.is_iso() {
                return Err("x is not an isomorphism".into());
            }
            vertical(x, cur, to)
        }
        Step::Leq { dir, x, evidence, .. } => {
            match (cert.relation, evidence) {
                (CertRelation::Z | CertRelation::Az, None) => member(class, x, "x")?,
                (CertRelation::ZStar, Some(ev)) => check_sstar(class, x, ev)?,
                (CertRelation::ZStar, None) => return Err("zstar steps need membership evidence".into()),
                (rel, _) => return Err(format!("this kind of step is not part of relation {rel}")),
            }
            match dir {
                Dir::Forward => vertical(x, cur, to),
                Dir::Backward => vertical(x, to, cur),
            }
        }
        Step::A { dir, w, .. } => {
            if !matches!(cert.relation, CertRelation::A | CertRelation::Az) {
                return Err(format!("a-steps are not part of relation {}", cert.relation));
            }
            match dir {
                Dir::Forward => check_a(class, w, cur, to),
                Dir::Backward => check_a(class, w, to, cur),
            }
        }
    }
}

fn check_data(cert: &Certificate) -> Result<()> {
    let b = cert.backend;
    let span = |sp: &BSpan| -> Result<()> {
        sp.s.check_in(b)?;
        sp.f.check_in(b)
    };
    let square = |sq: &Square| -> Result<()> {
        sq.p.check_in(b)?;
        sq.q.check_in(b)
    };
    span(&cert.start)?;
    span(&cert.end)?;
    for step in &cert.steps {
        span(step.to())?;
        match step {
            Step::Iso { x, .. } => x.check_in(b)?,
            Step::Leq { x, evidence, .. } => {
                x.check_in(b)?;
                if let Some(ev) = evidence {
                    for m in [&ev.f, &ev.s, &ev.v, &ev.star, &ev.along, &ev.leg] {
                        m.check_in(b)?;
                    }
                    square(&ev.small)?;
                    square(&ev.large)?;
                }
            }
            Step::A { w, .. } => {
                for m in [&w.u, &w.k, &w.fc, &w.sc, &w.gc, &w.tc, &w.v] {
                    m.check_in(b)?;
                }
                square(&w.small)?;
                square(&w.large)?;
            }
        }
    }
    Ok(())
}

/// Re-verifies every equation, membership and pullback claim. Malformed
/// data (non-monotone maps, out-of-range values) is an error, not a verdict.
pub fn check_certificate(cert: &Certificate) -> Result<Verdict> {
    check_data(cert)?;
    let invalid = |step, reason| Verdict::Invalid { step, reason };
    for (what, sp) in [("start", &cert.start), ("end", &cert.end)] {
        if let Err(r) = span_ok(cert.class, sp) {
            return Ok(invalid(None, format!("{what}: {r}")));
        }
    }
    if let Err(r) = same_feet(&cert.start, &cert.end) {
        return Ok(invalid(None, r));
    }
    let mut cur = &cert.start;
    for (i, step) in cert.steps.iter().enumerate() {
        if let Err(r) = check_step(cert, cur, step) {
            return Ok(invalid(Some(i), r));
        }
        cur = step.to();
    }
    if cur != &cert.end {
        return Ok(invalid(None, "the chain does not end at the claimed span".into()));
    }
    Ok(Verdict::Valid)
}
