use std::fmt::Write;

use super::document::*;
use crate::backends::{BSpan, Backend, Certificate, Mor, Obj, Square, Step};
use crate::fincat::RawCategory;

/// Names generated for the objects and maps of one block.
#[derive(Default)]
struct Names {
    objects: Vec<Obj>,
    maps: Vec<Mor>,
}

impl Names {
    fn obj(&mut self, o: &Obj) -> String {
        let i = match self.objects.iter().position(|x| x == o) {
            Some(i) => i,
            None => {
                self.objects.push(o.clone());
                self.objects.len() - 1
            }
        };
        format!("o{i}")
    }

    fn map(&mut self, m: &Mor) -> String {
        self.obj(&m.dom);
        self.obj(&m.cod);
        let i = match self.maps.iter().position(|x| x == m) {
            Some(i) => i,
            None => {
                self.maps.push(m.clone());
                self.maps.len() - 1
            }
        };
        format!("m{i}")
    }

    fn span(&mut self, s: &BSpan) -> String {
        format!("({}, {})", self.map(&s.s), self.map(&s.f))
    }

    fn square(&mut self, sq: &Square) -> String {
        format!("({}, {})", self.map(&sq.p), self.map(&sq.q))
    }

    fn header(&self, backend: Backend) -> String {
        let mut out = format!("  backend {backend}\n");
        for (i, o) in self.objects.iter().enumerate() {
            let _ = writeln!(out, "  object o{i} = {}", object_literal(o));
        }
        for (i, m) in self.maps.iter().enumerate() {
            let d = self.objects.iter().position(|x| *x == m.dom).expect("registered");
            let c = self.objects.iter().position(|x| *x == m.cod).expect("registered");
            let vals: Vec<String> = m.values.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "  map m{i} : o{d} -> o{c} = [{}]", vals.join(" "));
        }
        out
    }
}

fn object_literal(o: &Obj) -> String {
    if o.is_discrete() {
        return format!("set {}", o.n);
    }
    let rows: Vec<String> = o
        .leq
        .iter()
        .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
        .collect();
    format!("preorder {} [{}]", o.n, rows.join(" "))
}

/// Morphism indices in the order a reparse would assign them: identities by
/// object first, then everything else as declared.
fn canonical(raw: &RawCategory) -> Vec<usize> {
    let ids: Vec<usize> = raw.identities.iter().flatten().copied().collect();
    let rest = (0..raw.morphisms.len()).filter(|m| !ids.contains(m));
    ids.iter().copied().chain(rest).collect()
}

fn ranks(raw: &RawCategory) -> Vec<usize> {
    let mut r = vec![0; raw.morphisms.len()];
    for (i, m) in canonical(raw).into_iter().enumerate() {
        r[m] = i;
    }
    r
}

fn category(out: &mut String, raw: &RawCategory) {
    let _ = writeln!(out, "category {} {{", raw.name);
    let _ = writeln!(out, "  objects {}", raw.objects.join(" "));
    let is_id = |m: usize| raw.identities.contains(&Some(m));
    for (o, id) in raw.identities.iter().enumerate() {
        if let Some(id) = id {
            if raw.morphisms[*id].label != format!("1_{}", raw.objects[o]) {
                let _ = writeln!(out, "  identity {} of {}", raw.morphisms[*id].label, raw.objects[o]);
            }
        }
    }
    for (i, m) in raw.morphisms.iter().enumerate() {
        if !is_id(i) {
            let _ = writeln!(out, "  morphism {} : {} -> {}", m.label, raw.objects[m.dom], raw.objects[m.cod]);
        }
    }
    let rank = ranks(raw);
    let mut table: Vec<_> = raw.compose.iter().map(|(&k, &h)| (k, h)).collect();
    table.sort_by_key(|&((g, f), _)| (rank[g], rank[f]));
    for ((g, f), h) in table {
        if !is_id(g) && !is_id(f) {
            let l = |i: usize| raw.morphisms[i].label.as_str();
            let _ = writeln!(out, "  compose {} {} = {}", l(g), l(f), l(h));
        }
    }
    out.push_str("}\n");
}

fn certificate(out: &mut String, c: &Certificate) {
    let mut n = Names::default();
    let mut body = String::new();
    let _ = writeln!(body, "  class {}", c.class);
    let _ = writeln!(body, "  relation {}", c.relation);
    let _ = writeln!(body, "  start {}", n.span(&c.start));
    for step in &c.steps {
        match step {
            Step::Iso { x, to } => {
                let _ = writeln!(body, "  iso {} to {}", n.map(x), n.span(to));
            }
            Step::Leq { dir, x, evidence, to } => {
                let _ = write!(body, "  leq {dir} {}", n.map(x));
                if let Some(e) = evidence {
                    let _ = write!(
                        body,
                        " sstar {{ f = {}; s = {}; v = {}; small = {}; large = {}; star = {}; along = {}; leg = {} }}",
                        n.map(&e.f),
                        n.map(&e.s),
                        n.map(&e.v),
                        n.square(&e.small),
                        n.square(&e.large),
                        n.map(&e.star),
                        n.map(&e.along),
                        n.map(&e.leg)
                    );
                }
                let _ = writeln!(body, " to {}", n.span(to));
            }
            Step::A { dir, w, to } => {
                let _ = writeln!(body, "  a {dir} {{");
                for (k, m) in [("u", &w.u), ("k", &w.k), ("fc", &w.fc), ("sc", &w.sc), ("gc", &w.gc), ("tc", &w.tc), ("v", &w.v)] {
                    let _ = writeln!(body, "    {k} = {}", n.map(m));
                }
                let _ = writeln!(body, "    small = {}", n.square(&w.small));
                let _ = writeln!(body, "    large = {}", n.square(&w.large));
                let _ = writeln!(body, "  }} to {}", n.span(to));
            }
        }
    }
    let _ = writeln!(body, "  end {}", n.span(&c.end));
    let _ = writeln!(out, "certificate {} {{", c.name);
    out.push_str(&n.header(c.backend));
    out.push_str(&body);
    out.push_str("}\n");
}

fn problem(out: &mut String, p: &Problem) {
    let mut n = Names::default();
    let mut body = String::new();
    let i = &p.inputs;
    let _ = writeln!(body, "  class {}", i.class);
    if let Some(r) = p.relation {
        let _ = writeln!(body, "  relation {r}");
    }
    let _ = writeln!(body, "  span {}", n.span(&i.span));
    if let Some(t) = &p.target {
        let _ = writeln!(body, "  target {}", n.span(t));
    }
    for (k, m) in [("section", &i.section), ("g", &i.g), ("a", &i.a)] {
        if let Some(m) = m {
            let _ = writeln!(body, "  {k} {}", n.map(m));
        }
    }
    let _ = writeln!(out, "problem {} {{", p.name);
    out.push_str(&n.header(i.backend));
    out.push_str(&body);
    out.push_str("}\n");
}

/// Prints a document in the instance format. Categories are written out
/// with explicit composition tables.
pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    for c in &doc.categories {
        category(&mut out, &c.raw);
        out.push('\n');
    }
    for c in &doc.classes {
        let raw = &doc.categories[c.category].raw;
        let spec = match &c.spec {
            ClassSpec::All => "all".to_string(),
            ClassSpec::Isos => "isos".to_string(),
            ClassSpec::Monos => "monos".to_string(),
            ClassSpec::Epis => "epis".to_string(),
            ClassSpec::Explicit(ms) => {
                let rank = ranks(raw);
                let mut ms = ms.clone();
                ms.sort_by_key(|&m| rank[m]);
                let ls: Vec<&str> = ms.iter().map(|&m| raw.morphisms[m].label.as_str()).collect();
                format!("{{{}}}", ls.join(", "))
            }
        };
        let close = if c.auto_close_isos { " auto-close-isos" } else { "" };
        let _ = writeln!(out, "class {} on {} = {spec}{close}", c.name, raw.name);
    }
    for o in &doc.ofs {
        let _ = writeln!(
            out,
            "ofs {} on {} = {} {}",
            o.name, doc.categories[o.category].raw.name, doc.classes[o.p].name, doc.classes[o.s].name
        );
    }
    if !doc.classes.is_empty() || !doc.ofs.is_empty() {
        out.push('\n');
    }
    for f in &doc.functors {
        let src = &doc.categories[f.source].raw;
        let tgt = &doc.categories[f.target].raw;
        let var = match f.data.variance {
            crate::fincat::Variance::Covariant => "",
            crate::fincat::Variance::Contravariant => " contravariant",
        };
        let _ = writeln!(out, "functor {} : {} -> {}{var} {{", f.data.name, src.name, tgt.name);
        for (o, t) in f.data.omap.iter().enumerate() {
            let _ = writeln!(out, "  obj {} -> {}", src.objects[o], tgt.objects[t.idx()]);
        }
        for m in canonical(src) {
            if let Some(t) = f.data.mmap[m] {
                let _ = writeln!(out, "  mor {} -> {}", src.morphisms[m].label, tgt.morphisms[t.idx()].label);
            }
        }
        out.push_str("}\n\n");
    }
    for r in &doc.restrictions {
        let raw = &doc.categories[r.category].raw;
        let l = |i: usize| raw.morphisms[i].label.as_str();
        let _ = writeln!(out, "restriction {} on {} {{", r.name, raw.name);
        for f in canonical(raw) {
            let b = r.bar[f];
            if Some(b) != raw.identities[raw.morphisms[f].dom] {
                let _ = writeln!(out, "  bar {} = {}", l(f), l(b));
            }
        }
        if let Some(hat) = &r.hat {
            for f in canonical(raw) {
                let h = hat[f];
                let _ = writeln!(out, "  hat {} = {}", l(f), l(h));
            }
        }
        out.push_str("}\n\n");
    }
    for p in &doc.problems {
        problem(&mut out, p);
        out.push('\n');
    }
    for c in &doc.certificates {
        certificate(&mut out, c);
        out.push('\n');
    }
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

/// A single certificate as a standalone file.
pub fn print_certificate(c: &Certificate) -> String {
    let mut out = String::new();
    certificate(&mut out, c);
    out
}
