//! Certificate generators. Each one transcribes a fixed constructive
//! argument: the witnesses are built from the inputs, never searched for.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cert::{AWitness, BSpan, CertRelation, Certificate, Dir, Square, Step};
use super::{pullback, Backend, Mor, Obj, SPred};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// `[s,f]_a = [!^A, !^B]_a` when every map is in `S` (coproduct trick).
    Remark47,
    /// `[s,f]_a = [s p₁, p₂]_a` when `!_B ∈ S`.
    Thm48Stage1,
    /// `[s p₁, p₂]_a = [π₁, π₂]_a` through the product of the two products.
    Thm48Stage2,
    /// Both stages chained.
    Thm48,
    /// `[s,f]_az = [1_X, g]_az` for fully faithful surjections on preorders.
    ExampleOrd,
}

impl Template {
    pub const ALL: [Template; 5] = [
        Template::Remark47,
        Template::Thm48Stage1,
        Template::Thm48Stage2,
        Template::Thm48,
        Template::ExampleOrd,
    ];
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Template::Remark47 => "remark47",
            Template::Thm48Stage1 => "thm48_stage1",
            Template::Thm48Stage2 => "thm48_stage2",
            Template::Thm48 => "thm48",
            Template::ExampleOrd => "example_ord",
        })
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| Error::Input(format!("unknown template `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateInputs {
    pub backend: Backend,
    pub class: SPred,
    pub span: BSpan,
    /// A section of `s` (example_ord).
    pub section: Option<Mor>,
    /// The target map `g` (example_ord); defaults to `f ∘ section`.
    pub g: Option<Mor>,
    /// A map `A → D` (thm48 stage 2); defaults to a constant map.
    pub a: Option<Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub certificate: Certificate,
    /// Set when a degenerate branch produced a trivial certificate.
    pub note: Option<String>,
}

fn missing(what: &str) -> Error {
    Error::InvalidInstance(format!("missing hypothesis: {what}"))
}

fn c(g: &Mor, f: &Mor) -> Result<Mor> {
    g.after(f)
        .ok_or_else(|| Error::Input("ill-typed composite in template inputs".into()))
}

fn require(class: SPred, m: &Mor, what: &str) -> Result<()> {
    if class.contains(m) {
        Ok(())
    } else {
        Err(missing(&format!("{what} in {class}")))
    }
}

/// An a-step, with the target span computed from the witness.
fn a_step(dir: Dir, w: AWitness) -> Result<(Step, BSpan)> {
    let small = BSpan {
        s: c(&w.u, &w.small.p)?,
        f: c(&w.k, &w.small.q)?,
    };
    let large = BSpan {
        s: c(&w.u, &w.large.p)?,
        f: c(&w.k, &w.large.q)?,
    };
    let to = match dir {
        Dir::Forward => large,
        Dir::Backward => small,
    };
    Ok((
        Step::A {
            dir,
            w: Box::new(w),
            to: to.clone(),
        },
        to,
    ))
}

fn trivial(inputs: &TemplateInputs, name: String, relation: CertRelation, note: &str) -> Derivation {
    let sp = inputs.span.clone();
    Derivation {
        certificate: Certificate {
            name,
            backend: inputs.backend,
            class: inputs.class,
            relation,
            start: sp.clone(),
            steps: vec![Step::Iso {
                x: Mor::identity(&sp.s.dom),
                to: sp.clone(),
            }],
            end: sp,
        },
        note: Some(note.to_string()),
    }
}

fn check_inputs(inputs: &TemplateInputs) -> Result<()> {
    let sp = &inputs.span;
    sp.s.check_in(inputs.backend)?;
    sp.f.check_in(inputs.backend)?;
    for m in [&inputs.section, &inputs.g, &inputs.a].into_iter().flatten() {
        m.check_in(inputs.backend)?;
    }
    if sp.s.dom != sp.f.dom {
        return Err(Error::Input("span legs have different domains".into()));
    }
    require(inputs.class, &sp.s, "the span leg s")
}

pub fn derive_certificate(template: Template, inputs: &TemplateInputs) -> Result<Derivation> {
    check_inputs(inputs)?;
    match template {
        Template::Remark47 => remark47(inputs),
        Template::Thm48Stage1 => thm48_stage1(inputs).map(|(d, _)| d),
        Template::Thm48Stage2 => {
            let (_, mid) = thm48_stage1(inputs)?;
            thm48_stage2(inputs, mid)
        }
        Template::Thm48 => {
            let (first, mid) = thm48_stage1(inputs)?;
            let second = thm48_stage2(inputs, mid)?;
            let mut cert = first.certificate;
            cert.name = "thm48".into();
            cert.steps.extend(second.certificate.steps);
            cert.end = second.certificate.end;
            Ok(Derivation {
                certificate: cert,
                note: first.note.or(second.note),
            })
        }
        Template::ExampleOrd => example_ord(inputs),
    }
}

fn remark47(inputs: &TemplateInputs) -> Result<Derivation> {
    if inputs.class != SPred::All {
        return Err(missing("S = all maps"));
    }
    let BSpan { s, f } = &inputs.span;
    let (d, b) = (&f.dom, &f.cod);
    if b.n == 0 {
        return Ok(trivial(inputs, "remark47".into(), CertRelation::A, "f iso branch; nothing to prove"));
    }
    let db = d.coproduct(b);
    let nu1 = Mor::new(d.clone(), db.clone(), (0..d.n).collect())?;
    let nu2 = Mor::new(b.clone(), db.clone(), (d.n..d.n + b.n).collect())?;
    let v = Mor::new(db, b.clone(), f.values.iter().copied().chain(0..b.n).collect())?;
    let small = pullback(&nu1, &nu2).expect("same codomain");
    let w = AWitness {
        u: s.clone(),
        k: Mor::identity(b),
        fc: nu1,
        sc: nu2,
        gc: f.clone(),
        tc: Mor::identity(b),
        v,
        small,
        large: Square {
            p: Mor::identity(d),
            q: f.clone(),
        },
    };
    let (step, end) = a_step(Dir::Backward, w)?;
    Ok(Derivation {
        certificate: Certificate {
            name: "remark47".into(),
            backend: inputs.backend,
            class: inputs.class,
            relation: CertRelation::A,
            start: inputs.span.clone(),
            steps: vec![step],
            end,
        },
        note: None,
    })
}

fn thm48_stage1(inputs: &TemplateInputs) -> Result<(Derivation, BSpan)> {
    let BSpan { s, f } = &inputs.span;
    let (d, b) = (&f.dom, &f.cod);
    if b.n == 0 {
        let triv = trivial(inputs, "thm48_stage1".into(), CertRelation::A, "f iso branch; nothing to prove");
        return Ok((triv, inputs.span.clone()));
    }
    let bang_b = Mor::bang(b);
    require(inputs.class, &bang_b, "!_B")?;
    let w = AWitness {
        u: s.clone(),
        k: Mor::identity(b),
        fc: f.clone(),
        sc: Mor::identity(b),
        gc: Mor::bang(d),
        tc: bang_b.clone(),
        v: bang_b,
        small: Square {
            p: Mor::identity(d),
            q: f.clone(),
        },
        large: super::product(d, b),
    };
    let (step, end) = a_step(Dir::Forward, w)?;
    let cert = Certificate {
        name: "thm48_stage1".into(),
        backend: inputs.backend,
        class: inputs.class,
        relation: CertRelation::A,
        start: inputs.span.clone(),
        steps: vec![step],
        end: end.clone(),
    };
    Ok((
        Derivation {
            certificate: cert,
            note: None,
        },
        end,
    ))
}

fn thm48_stage2(inputs: &TemplateInputs, mid: BSpan) -> Result<Derivation> {
    let start = mid.clone();
    let staged = TemplateInputs {
        span: mid,
        ..inputs.clone()
    };
    let (a_obj, b) = (&inputs.span.s.cod, &inputs.span.f.cod);
    let d = &inputs.span.s.dom;
    let db_obj = &start.s.dom;
    if db_obj.n == 0 {
        return Ok(trivial(
            &staged,
            "thm48_stage2".into(),
            CertRelation::A,
            "D×B is strict initial; nothing to prove",
        ));
    }
    let s = &inputs.span.s;
    let a = match &inputs.a {
        Some(a) => {
            if a.dom != *a_obj || a.cod != *d {
                return Err(Error::Input("the map a must go from A to D".into()));
            }
            a.clone()
        }
        None => Mor::constant(a_obj, d, 0),
    };
    let ab = super::product(a_obj, b);
    let db = super::product(d, b);
    let (pi1, pi2) = (&ab.p, &ab.q);
    let (p1, p2) = (&db.p, &db.q);
    let s_x_1 = c(s, p1)?.pair(p2).expect("same domain");
    let a_x_1 = c(&a, pi1)?.pair(pi2).expect("same domain");
    let bang_ab = Mor::bang(&ab.p.dom);
    let bang_db = Mor::bang(&db.p.dom);
    require(inputs.class, &bang_ab, "!_{A×B}")?;
    require(inputs.class, &bang_db, "!_{D×B}")?;
    require(inputs.class, &s_x_1, "s×1_B")?;
    require(inputs.class, pi1, "π₁")?;
    let large = pullback(&bang_ab, &bang_db).expect("same codomain");
    let id_ab = Mor::identity(&ab.p.dom);
    let id_db = Mor::identity(&db.p.dom);
    let first = AWitness {
        u: pi1.clone(),
        k: p2.clone(),
        fc: id_ab.clone(),
        sc: s_x_1.clone(),
        gc: bang_ab.clone(),
        tc: bang_db.clone(),
        v: bang_ab.clone(),
        small: Square {
            p: s_x_1,
            q: id_db.clone(),
        },
        large: large.clone(),
    };
    let second = AWitness {
        u: pi1.clone(),
        k: p2.clone(),
        fc: a_x_1.clone(),
        sc: id_db,
        gc: bang_ab,
        tc: bang_db.clone(),
        v: bang_db,
        small: Square { p: id_ab, q: a_x_1 },
        large,
    };
    let (step1, _) = a_step(Dir::Forward, first)?;
    let (step2, end) = a_step(Dir::Backward, second)?;
    Ok(Derivation {
        certificate: Certificate {
            name: "thm48_stage2".into(),
            backend: inputs.backend,
            class: inputs.class,
            relation: CertRelation::A,
            start,
            steps: vec![step1, step2],
            end,
        },
        note: None,
    })
}

/// The quotient of a preorder by `x ≤ y ≤ x`, classes numbered in order
/// of their least element.
pub fn poset_reflection(y: &Obj) -> Mor {
    let mut class = vec![usize::MAX; y.n];
    let mut reps = Vec::new();
    for x in 0..y.n {
        if class[x] != usize::MAX {
            continue;
        }
        for z in x..y.n {
            if y.leq[x][z] && y.leq[z][x] {
                class[z] = reps.len();
            }
        }
        reps.push(x);
    }
    let cod = y.induced(&reps);
    Mor {
        dom: y.clone(),
        cod,
        values: class,
    }
}

fn example_ord(inputs: &TemplateInputs) -> Result<Derivation> {
    if inputs.backend != Backend::Preorder {
        return Err(missing("preorder backend"));
    }
    let BSpan { s, f } = &inputs.span;
    if !s.is_ff_surjection() {
        return Err(missing("s is a fully faithful surjection"));
    }
    let (x, y) = (&s.cod, &f.cod);
    let sec = inputs.section.clone().ok_or_else(|| missing("a section of s"))?;
    if c(s, &sec).ok().as_ref() != Some(&Mor::identity(x)) {
        return Err(missing("s ∘ section = 1_X"));
    }
    let f_sec = c(f, &sec)?;
    let g = inputs.g.clone().unwrap_or_else(|| f_sec.clone());
    if g.dom != *x || g.cod != *y {
        return Err(Error::Input("g must go from X to Y".into()));
    }
    let p_y = poset_reflection(y);
    require(inputs.class, &p_y, "the reflection p_Y")?;
    require(inputs.class, s, "s")?;
    if c(&p_y, &g)? != c(&p_y, &f_sec)? {
        return Err(missing("p_Y ∘ g = p_Y ∘ f ∘ section"));
    }
    let w = &s.dom;
    let id_x = Mor::identity(x);
    let id_y = Mor::identity(y);
    let back = AWitness {
        u: id_x.clone(),
        k: f.clone(),
        fc: sec.clone(),
        sc: Mor::identity(w),
        gc: id_x.clone(),
        tc: s.clone(),
        v: s.clone(),
        small: Square {
            p: id_x.clone(),
            q: sec,
        },
        large: Square {
            p: s.clone(),
            q: Mor::identity(w),
        },
    };
    let pg = c(&p_y, &f_sec)?;
    let large = pullback(&pg, &p_y).expect("same codomain");
    let up = AWitness {
        u: id_x.clone(),
        k: id_y.clone(),
        fc: f_sec.clone(),
        sc: id_y.clone(),
        gc: pg.clone(),
        tc: p_y.clone(),
        v: p_y.clone(),
        small: Square {
            p: id_x.clone(),
            q: f_sec,
        },
        large: large.clone(),
    };
    let down = AWitness {
        u: id_x.clone(),
        k: id_y.clone(),
        fc: g.clone(),
        sc: id_y,
        gc: pg,
        tc: p_y.clone(),
        v: p_y,
        small: Square { p: id_x, q: g },
        large,
    };
    let (s1, _) = a_step(Dir::Backward, back)?;
    let (s2, _) = a_step(Dir::Forward, up)?;
    let (s3, end) = a_step(Dir::Backward, down)?;
    Ok(Derivation {
        certificate: Certificate {
            name: "example_ord".into(),
            backend: inputs.backend,
            class: inputs.class,
            relation: CertRelation::Az,
            start: inputs.span.clone(),
            steps: vec![s1, s2, s3],
            end,
        },
        note: None,
    })
}
