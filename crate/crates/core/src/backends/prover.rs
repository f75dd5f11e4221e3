//! Bounded breadth-first search for certificates.
//!
//! Spans are kept up to vertical isomorphism. From a span `(s, f)` with
//! apex `D` the search tries:
//! - a-steps where the span is the pullback of `⟨f, 1_B⟩`, `⟨1_A, s⟩` or
//!   `⟨1_D, 1_D⟩` and the other cospan is reached by some `v ∈ S`, in
//!   either direction;
//! - vertical `S`-morphisms into and out of the span.
//!
//! Every object involved has at most `max_apex` elements. The search is
//! incomplete: `Unknown` says nothing about inequivalence.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::cert::{AWitness, BSpan, CertRelation, Certificate, Dir, Square, Step};
use super::{all_maps, check_certificate, objects_of_size, pullback, Backend, Mor, Obj, SPred};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverBounds {
    pub max_apex: usize,
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverOutcome {
    Found(Certificate),
    Unknown { explored: usize },
}

/// Canonical representative of a span up to vertical isomorphism, and the
/// iso from the given apex to the canonical one.
fn canonical(sp: &BSpan) -> (BSpan, Mor) {
    let d = &sp.s.dom;
    let mut order: Vec<usize> = (0..d.n).collect();
    order.sort_by_key(|&x| (sp.s.values[x], sp.f.values[x]));
    // elements with equal legs may still be told apart by the order
    let blocks: Vec<(usize, usize)> = {
        let mut out = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let key = (sp.s.values[order[i]], sp.f.values[order[i]]);
            let mut j = i;
            while j < order.len() && (sp.s.values[order[j]], sp.f.values[order[j]]) == key {
                j += 1;
            }
            out.push((i, j));
            i = j;
        }
        out
    };
    let mut best: Option<(Vec<Vec<bool>>, Vec<usize>)> = None;
    if d.is_discrete() || blocks.iter().map(|(i, j)| j - i).product::<usize>() > 5040 {
        best = Some((permuted(d, &order), order.clone()));
    } else {
        permute_blocks(d, &blocks, 0, &mut order, &mut best);
    }
    let (leq, order) = best.expect("at least one ordering");
    let apex = Obj { n: d.n, leq };
    let mut pos = vec![0; d.n];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let iso = Mor {
        dom: d.clone(),
        cod: apex.clone(),
        values: pos,
    };
    let canon = BSpan {
        s: Mor {
            dom: apex.clone(),
            cod: sp.s.cod.clone(),
            values: order.iter().map(|&x| sp.s.values[x]).collect(),
        },
        f: Mor {
            dom: apex,
            cod: sp.f.cod.clone(),
            values: order.iter().map(|&x| sp.f.values[x]).collect(),
        },
    };
    (canon, iso)
}

fn permuted(d: &Obj, order: &[usize]) -> Vec<Vec<bool>> {
    order
        .iter()
        .map(|&x| order.iter().map(|&y| d.leq[x][y]).collect())
        .collect()
}

fn permute_blocks(
    d: &Obj,
    blocks: &[(usize, usize)],
    b: usize,
    order: &mut Vec<usize>,
    best: &mut Option<(Vec<Vec<bool>>, Vec<usize>)>,
) {
    if b == blocks.len() {
        let leq = permuted(d, order);
        if best.as_ref().is_none_or(|(l, _)| leq < *l) {
            *best = Some((leq, order.clone()));
        }
        return;
    }
    let (lo, hi) = blocks[b];
    permute_range(d, blocks, b, lo, hi, order, best);
}

fn permute_range(
    d: &Obj,
    blocks: &[(usize, usize)],
    b: usize,
    i: usize,
    hi: usize,
    order: &mut Vec<usize>,
    best: &mut Option<(Vec<Vec<bool>>, Vec<usize>)>,
) {
    if i == hi {
        permute_blocks(d, blocks, b + 1, order, best);
        return;
    }
    for j in i..hi {
        order.swap(i, j);
        permute_range(d, blocks, b, i + 1, hi, order, best);
        order.swap(i, j);
    }
}

fn inverse(iso: &Mor) -> Mor {
    let mut values = vec![0; iso.values.len()];
    for (x, &y) in iso.values.iter().enumerate() {
        values[y] = x;
    }
    Mor {
        dom: iso.cod.clone(),
        cod: iso.dom.clone(),
        values,
    }
}

fn objects_up_to(backend: Backend, max: usize) -> Vec<Obj> {
    (0..=max).flat_map(|n| objects_of_size(backend, n)).collect()
}

struct Search<'a> {
    class: SPred,
    relation: CertRelation,
    bounds: ProverBounds,
    objects: &'a [Obj],
}

fn comp(g: &Mor, f: &Mor) -> Mor {
    g.after(f).expect("composable by construction")
}

impl Search<'_> {
    fn moves(&self, sp: &BSpan) -> Vec<Step> {
        let mut out = Vec::new();
        if matches!(self.relation, CertRelation::A | CertRelation::Az) {
            self.a_moves(sp, &mut out);
        }
        if matches!(self.relation, CertRelation::Z | CertRelation::Az) {
            self.z_moves(sp, &mut out);
        }
        out
    }

    fn small_enough(&self, m: &Mor) -> bool {
        m.dom.n <= self.bounds.max_apex
    }

    fn a_moves(&self, sp: &BSpan, out: &mut Vec<Step>) {
        let (s, f) = (&sp.s, &sp.f);
        let (a, b, d) = (&s.cod, &f.cod, &s.dom);
        // (u, k, fc, sc, ŝ, f̂) presenting the span as a pullback
        let decomps = [
            (s.clone(), Mor::identity(b), f.clone(), Mor::identity(b), Mor::identity(d), f.clone()),
            (Mor::identity(a), f.clone(), Mor::identity(a), s.clone(), s.clone(), Mor::identity(d)),
            (s.clone(), f.clone(), Mor::identity(d), Mor::identity(d), Mor::identity(d), Mor::identity(d)),
        ];
        for (u, k, c1, c2, sh, fh) in decomps {
            if !self.class.contains(&u) || !self.class.contains(&c2) {
                continue;
            }
            let here = Square { p: sh, q: fh };
            let p0 = &c1.cod;
            for q in self.objects {
                for v in all_maps(p0, q) {
                    if !self.class.contains(&v) {
                        continue;
                    }
                    let (gc, tc) = (comp(&v, &c1), comp(&v, &c2));
                    let large = pullback(&gc, &tc).expect("same codomain");
                    if !self.small_enough(&large.p) {
                        continue;
                    }
                    let to = BSpan {
                        s: comp(&u, &large.p),
                        f: comp(&k, &large.q),
                    };
                    let w = AWitness {
                        u: u.clone(),
                        k: k.clone(),
                        fc: c1.clone(),
                        sc: c2.clone(),
                        gc,
                        tc,
                        v,
                        small: here.clone(),
                        large,
                    };
                    out.push(Step::A {
                        dir: Dir::Forward,
                        w: Box::new(w),
                        to,
                    });
                }
            }
            for p in self.objects {
                for v in all_maps(p, p0) {
                    if !self.class.contains(&v) {
                        continue;
                    }
                    let lifts1: Vec<Mor> = all_maps(&c1.dom, p).into_iter().filter(|m| comp(&v, m) == c1).collect();
                    let lifts2: Vec<Mor> = all_maps(&c2.dom, p)
                        .into_iter()
                        .filter(|m| comp(&v, m) == c2 && self.class.contains(m))
                        .collect();
                    for fc in &lifts1 {
                        for sc in &lifts2 {
                            let small = pullback(fc, sc).expect("same codomain");
                            if !self.small_enough(&small.p) {
                                continue;
                            }
                            let to = BSpan {
                                s: comp(&u, &small.p),
                                f: comp(&k, &small.q),
                            };
                            let w = AWitness {
                                u: u.clone(),
                                k: k.clone(),
                                fc: fc.clone(),
                                sc: sc.clone(),
                                gc: c1.clone(),
                                tc: c2.clone(),
                                v: v.clone(),
                                small,
                                large: here.clone(),
                            };
                            out.push(Step::A {
                                dir: Dir::Backward,
                                w: Box::new(w),
                                to,
                            });
                        }
                    }
                }
            }
        }
    }

    fn z_moves(&self, sp: &BSpan, out: &mut Vec<Step>) {
        let (s, f) = (&sp.s, &sp.f);
        let d = &s.dom;
        for e in self.objects {
            for x in all_maps(d, e) {
                if !self.class.contains(&x) {
                    continue;
                }
                let ss: Vec<Mor> = all_maps(e, &s.cod)
                    .into_iter()
                    .filter(|m| comp(m, &x) == *s && self.class.contains(m))
                    .collect();
                let ff: Vec<Mor> = all_maps(e, &f.cod).into_iter().filter(|m| comp(m, &x) == *f).collect();
                for s2 in &ss {
                    for f2 in &ff {
                        out.push(Step::Leq {
                            dir: Dir::Forward,
                            x: x.clone(),
                            evidence: None,
                            to: BSpan {
                                s: s2.clone(),
                                f: f2.clone(),
                            },
                        });
                    }
                }
            }
            for x in all_maps(e, d) {
                if !self.class.contains(&x) {
                    continue;
                }
                let to = BSpan {
                    s: comp(s, &x),
                    f: comp(f, &x),
                };
                out.push(Step::Leq {
                    dir: Dir::Backward,
                    x,
                    evidence: None,
                    to,
                });
            }
        }
    }
}

fn iso_step(x: Mor, to: &BSpan) -> Step {
    Step::Iso { x, to: to.clone() }
}

/// Searches for a certificate that `span1` and `span2` are related. Only
/// certificates that pass the checker are returned.
pub fn bounded_prover(
    backend: Backend,
    class: SPred,
    relation: CertRelation,
    span1: &BSpan,
    span2: &BSpan,
    bounds: ProverBounds,
) -> Result<ProverOutcome> {
    if relation == CertRelation::ZStar {
        return Err(Error::Input("the prover covers a, z and az".into()));
    }
    for sp in [span1, span2] {
        sp.s.check_in(backend)?;
        sp.f.check_in(backend)?;
    }
    if span1.s.cod != span2.s.cod || span1.f.cod != span2.f.cod {
        return Err(Error::Input("the two spans do not share feet".into()));
    }
    let mut cert = Certificate {
        name: "search".into(),
        backend,
        class,
        relation,
        start: span1.clone(),
        steps: Vec::new(),
        end: span2.clone(),
    };
    if span1 == span2 {
        return Ok(ProverOutcome::Found(cert));
    }
    let objects = objects_up_to(backend, bounds.max_apex);
    let search = Search {
        class,
        relation,
        bounds,
        objects: &objects,
    };
    let (start, start_iso) = canonical(span1);
    let (goal, goal_iso) = canonical(span2);
    // canonical span -> (parent, move from the parent's canonical form)
    let mut seen: BTreeMap<BSpan, Option<(BSpan, Step)>> = BTreeMap::new();
    seen.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    let mut found = start == goal;
    while !found {
        let Some((cur, depth)) = queue.pop_front() else { break };
        if depth >= bounds.max_steps {
            continue;
        }
        for step in search.moves(&cur) {
            let (canon, _) = canonical(step.to());
            if seen.contains_key(&canon) {
                continue;
            }
            seen.insert(canon.clone(), Some((cur.clone(), step)));
            if canon == goal {
                found = true;
                break;
            }
            queue.push_back((canon, depth + 1));
        }
    }
    if !found {
        return Ok(ProverOutcome::Unknown { explored: seen.len() });
    }
    let mut path = Vec::new();
    let mut node = goal.clone();
    while let Some(Some((parent, step))) = seen.get(&node) {
        path.push(step.clone());
        node = parent.clone();
    }
    path.reverse();
    let mut steps = Vec::new();
    if start != *span1 {
        steps.push(iso_step(start_iso, &start));
    }
    for step in path {
        let raw = step.to().clone();
        steps.push(step);
        let (canon, iso) = canonical(&raw);
        if canon != raw {
            steps.push(iso_step(iso, &canon));
        }
    }
    if goal != *span2 {
        steps.push(iso_step(inverse(&goal_iso), span2));
    }
    cert.steps = steps;
    match check_certificate(&cert)? {
        super::Verdict::Valid => Ok(ProverOutcome::Found(cert)),
        super::Verdict::Invalid { step, reason } => Err(Error::Internal(format!(
            "prover produced a certificate that fails at step {step:?}: {reason}"
        ))),
    }
}
