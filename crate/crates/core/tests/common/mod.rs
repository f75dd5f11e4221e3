//! Shared fixtures and brute-force oracles. Nothing here calls the engine's
//! own search routines; every check is a direct scan over hom-sets.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use spanforge_core::corpus::{self, Instance};
use spanforge_core::backends::{Certificate, Mor, Step};
use spanforge_core::frontend::{parse_document, Document, Resolved};
use spanforge_core::structures::RestrictionCat;
use spanforge_core::{FinCat, MorClass, MorId, ObjId, Partition, SpanCategory, SpanId};

pub const SEED: u64 = 7;
pub const RANDOM_COUNT: usize = 100;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every shipped `.sf` file, parsed, in file-name order.
pub fn corpus_files() -> Vec<(String, Document)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "sf"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable corpus file");
            let doc = parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p.file_stem().unwrap().to_string_lossy().into_owned(), doc)
        })
        .collect()
}

pub fn load(name: &str) -> Document {
    let path = corpus_dir().join(format!("{name}.sf"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_document(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn resolve(name: &str) -> Resolved {
    Resolved::from_document(&load(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Instances declared by shipped files that carry a category and a class.
pub fn shipped_instances() -> Vec<Instance> {
    corpus_files()
        .into_iter()
        .filter(|(_, d)| !d.categories.is_empty() && d.designated_class().is_some())
        .map(|(name, d)| {
            let r = Resolved::from_document(&d).unwrap_or_else(|e| panic!("{name}: {e}"));
            let mut inst = Instance::new(format!("file:{name}"), r.cat, r.class);
            inst.ofs = r.ofs;
            inst
        })
        .collect()
}

/// Shipped files, built-in instances and seeded random ones.
pub fn all_instances() -> Vec<Instance> {
    let mut out = shipped_instances();
    out.extend(corpus::builtin());
    out.extend(corpus::random_instances(SEED, RANDOM_COUNT).expect("random instances"));
    out
}

pub fn mor(cat: &FinCat, label: &str) -> MorId {
    cat.find_morphism(label).unwrap_or_else(|| panic!("no morphism {label}"))
}

pub fn obj(cat: &FinCat, label: &str) -> ObjId {
    cat.find_object(label).unwrap_or_else(|| panic!("no object {label}"))
}

// ---- morphism predicates ---------------------------------------------------

pub fn mono(cat: &FinCat, m: MorId) -> bool {
    let d = cat.dom(m);
    cat.object_ids().all(|z| {
        let h = cat.hom(z, d);
        h.iter()
            .all(|&x| h.iter().all(|&y| x == y || cat.compose(m, x) != cat.compose(m, y)))
    })
}

pub fn epi(cat: &FinCat, m: MorId) -> bool {
    let c = cat.cod(m);
    cat.object_ids().all(|z| {
        let h = cat.hom(c, z);
        h.iter()
            .all(|&x| h.iter().all(|&y| x == y || cat.compose(x, m) != cat.compose(y, m)))
    })
}

pub fn iso(cat: &FinCat, m: MorId) -> bool {
    let (d, c) = (cat.dom(m), cat.cod(m));
    cat.hom(c, d).iter().any(|&r| {
        cat.compose(r, m) == Some(cat.identity(d)) && cat.compose(m, r) == Some(cat.identity(c))
    })
}

// ---- limits ----------------------------------------------------------------

/// Commuting squares `f∘x = s∘y` as `(apex, x, y)`.
pub fn commuting_cones(cat: &FinCat, f: MorId, s: MorId) -> Vec<(ObjId, MorId, MorId)> {
    let (a, b) = (cat.dom(f), cat.dom(s));
    let mut out = Vec::new();
    for z in cat.object_ids() {
        for &x in cat.hom(z, a) {
            for &y in cat.hom(z, b) {
                if cat.compose(f, x) == cat.compose(s, y) {
                    out.push((z, x, y));
                }
            }
        }
    }
    out
}

/// Cones through which every other cone factors exactly once.
pub fn limit_cones(cat: &FinCat, f: MorId, s: MorId) -> Vec<(ObjId, MorId, MorId)> {
    let cones = commuting_cones(cat, f, s);
    cones
        .iter()
        .copied()
        .filter(|&(p, x, y)| {
            cones.iter().all(|&(z, a, b)| {
                cat.hom(z, p)
                    .iter()
                    .filter(|&&u| cat.compose(x, u) == Some(a) && cat.compose(y, u) == Some(b))
                    .count()
                    == 1
            })
        })
        .collect()
}

/// Objects `P` with projections making `hom(Z,P) ≅ hom(Z,A)×hom(Z,B)`.
pub fn product_apexes(cat: &FinCat, a: ObjId, b: ObjId) -> Vec<ObjId> {
    let mut out = Vec::new();
    for p in cat.object_ids() {
        let ok = cat.hom(p, a).iter().any(|&pa| {
            cat.hom(p, b).iter().any(|&pb| {
                cat.object_ids().all(|z| {
                    let mut seen = std::collections::BTreeSet::new();
                    for &u in cat.hom(z, p) {
                        seen.insert((cat.compose(pa, u), cat.compose(pb, u)));
                    }
                    seen.len() == cat.hom(z, p).len()
                        && seen.len() == cat.hom(z, a).len() * cat.hom(z, b).len()
                })
            })
        });
        if ok {
            out.push(p);
        }
    }
    out
}

/// An object with exactly one morphism to every object.
pub fn initial_objects(cat: &FinCat) -> Vec<ObjId> {
    cat.object_ids()
        .filter(|&i| cat.object_ids().all(|x| cat.hom(i, x).len() == 1))
        .collect()
}

// ---- span classes ----------------------------------------------------------

/// Number of `S`-spans `A → B` up to vertical isomorphism, per foot pair.
pub fn span_counts(cat: &FinCat, class: &MorClass) -> BTreeMap<(ObjId, ObjId), usize> {
    let mut spans: Vec<(ObjId, ObjId, MorId, MorId)> = Vec::new();
    for s in class.iter() {
        for &f in cat.out_of(cat.dom(s)) {
            spans.push((cat.cod(s), cat.cod(f), s, f));
        }
    }
    let mut reps: Vec<(ObjId, ObjId, MorId, MorId)> = Vec::new();
    for sp in spans {
        let (a, b, s, f) = sp;
        let known = reps.iter().any(|&(a2, b2, t, g)| {
            a2 == a
                && b2 == b
                && cat.hom(cat.dom(s), cat.dom(t)).iter().any(|&phi| {
                    iso(cat, phi) && cat.compose(t, phi) == Some(s) && cat.compose(g, phi) == Some(f)
                })
        });
        if !known {
            reps.push(sp);
        }
    }
    let mut out = BTreeMap::new();
    for (a, b, _, _) in reps {
        *out.entry((a, b)).or_insert(0) += 1;
    }
    out
}

/// Pairs `(σ, τ)` of distinct classes joined by a vertical `x ∈ T`: with
/// representatives `(s, f)` and `(t, g)`, some `x` has `t∘x = s`, `g∘x = f`.
pub fn vertical_pairs(sc: &SpanCategory, t: &MorClass) -> Vec<(SpanId, SpanId)> {
    let cat = &sc.cat;
    let mut out = Vec::new();
    for sigma in sc.ids() {
        let r = sc.get(sigma).rep;
        for tau in sc.ids() {
            if sigma == tau || sc.get(tau).dom != sc.get(sigma).dom || sc.get(tau).cod != sc.get(sigma).cod {
                continue;
            }
            let q = sc.get(tau).rep;
            let hit = cat.hom(r.apex, q.apex).iter().any(|&x| {
                t.contains(x) && cat.compose(q.s, x) == Some(r.s) && cat.compose(q.f, x) == Some(r.f)
            });
            if hit {
                out.push((sigma, tau));
            }
        }
    }
    out
}

/// Least equivalence containing `seed` and closed under whiskering, by
/// naive fixpoint iteration over all related pairs. Returns block labels.
pub fn naive_closure(sc: &SpanCategory, seed: &[(SpanId, SpanId)]) -> Vec<usize> {
    let n = sc.len();
    let mut label: Vec<usize> = (0..n).collect();
    let merge = |label: &mut Vec<usize>, x: SpanId, y: SpanId| -> bool {
        let (lx, ly) = (label[x], label[y]);
        if lx == ly {
            return false;
        }
        let (keep, drop) = (lx.min(ly), lx.max(ly));
        for l in label.iter_mut() {
            if *l == drop {
                *l = keep;
            }
        }
        true
    };
    for &(x, y) in seed {
        merge(&mut label, x, y);
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in (x + 1)..n {
                if label[x] != label[y] {
                    continue;
                }
                let (a, b) = (sc.get(x).dom, sc.get(x).cod);
                for &rho in sc.out_of(b) {
                    changed |= merge(&mut label, sc.comp(rho, x), sc.comp(rho, y));
                }
                for &pi in sc.into(a) {
                    changed |= merge(&mut label, sc.comp(x, pi), sc.comp(y, pi));
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

/// Block labels of the plain equivalence closure of `pairs`.
pub fn equivalence_closure(n: usize, pairs: &[(SpanId, SpanId)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(x, y) in pairs {
            let m = label[x].min(label[y]);
            if label[x] != m || label[y] != m {
                let (lx, ly) = (label[x], label[y]);
                for l in label.iter_mut() {
                    if *l == lx || *l == ly {
                        *l = m;
                    }
                }
                changed = true;
            }
        }
    }
    label
}

pub fn agrees(labels: &[usize], part: &Partition) -> bool {
    labels.len() == part.len()
        && (0..labels.len()).all(|x| (0..labels.len()).all(|y| (labels[x] == labels[y]) == part.same(x, y)))
}

pub fn all_mono(cat: &FinCat, class: &MorClass) -> bool {
    class.iter().all(|m| mono(cat, m))
}

/// Every map of a certificate, as mutable references.
pub fn maps_mut(c: &mut Certificate) -> Vec<&mut Mor> {
    let mut out: Vec<&mut Mor> = vec![&mut c.start.s, &mut c.start.f, &mut c.end.s, &mut c.end.f];
    for step in c.steps.iter_mut() {
        match step {
            Step::Iso { x, to } => out.extend([x, &mut to.s, &mut to.f]),
            Step::Leq { x, evidence, to, .. } => {
                out.extend([x, &mut to.s, &mut to.f]);
                if let Some(e) = evidence {
                    out.extend([
                        &mut e.f, &mut e.s, &mut e.v, &mut e.star, &mut e.along, &mut e.leg, &mut e.small.p,
                        &mut e.small.q, &mut e.large.p, &mut e.large.q,
                    ]);
                }
            }
            Step::A { w, to, .. } => {
                let w = &mut **w;
                out.extend([
                    &mut w.u, &mut w.k, &mut w.fc, &mut w.sc, &mut w.gc, &mut w.tc, &mut w.v, &mut w.small.p,
                    &mut w.small.q, &mut w.large.p, &mut w.large.q, &mut to.s, &mut to.f,
                ]);
            }
        }
    }
    out
}

/// One-value mutations of map number `i`, in every position that changes it.
pub fn mutations(c: &Certificate) -> Vec<Certificate> {
    let n = maps_mut(&mut c.clone()).len();
    let mut out = Vec::new();
    for i in 0..n {
        let mut probe = c.clone();
        let m = &*maps_mut(&mut probe)[i];
        let (len, cod) = (m.values.len(), m.cod.n);
        if cod < 2 {
            continue;
        }
        for pos in 0..len {
            let mut mutated = c.clone();
            let target = &mut maps_mut(&mut mutated)[i];
            target.values[pos] = (target.values[pos] + 1) % cod;
            out.push(mutated);
        }
    }
    out
}

/// Split restriction categories written by hand or shipped as files.
pub fn hand_written() -> Vec<(String, RestrictionCat)> {
    let mut out = vec![
        ("trivial-diamond".to_string(), RestrictionCat::trivial(corpus::diamond())),
        ("trivial-z2".to_string(), RestrictionCat::trivial(corpus::cyclic_group(2))),
        ("partial-1".to_string(), corpus::partial_maps(1)),
        ("partial-2".to_string(), corpus::partial_maps(2)),
    ];
    for name in ["split-idempotent", "diamond-total", "z2", "chain2", "partial-maps"] {
        let doc = load(name);
        out.push((name.to_string(), doc.restriction_cat(0).unwrap().0));
    }
    out
}
