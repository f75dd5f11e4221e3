use std::collections::HashMap;

use super::document::*;
use super::lexer::{lex, Tok, Token};
use crate::backends::{
    AWitness, BSpan, Backend, CertRelation, Certificate, Dir, Mor, Obj, SPred, SStarEvidence, Square, Step,
    TemplateInputs,
};
use crate::corpus;
use crate::error::{Error, Result};
use crate::fincat::{ClosureError, FunctorData, MorId, ObjId, RawCategory, Variance};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    doc: Document,
}

type Pos = (usize, usize);

fn err<T>(at: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::parse(at.0, at.1, msg))
}

/// Objects and maps declared inside a `problem` or `certificate` block.
struct Locals {
    backend: Option<Backend>,
    objects: HashMap<String, Obj>,
    maps: HashMap<String, Mor>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn at(&self) -> Pos {
        let t = self.peek();
        (t.line, t.col)
    }

    fn eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn skip_newlines(&mut self) {
        while !self.eof() && matches!(self.peek().tok, Tok::Newline | Tok::Sym(';')) {
            self.pos += 1;
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Newline => "end of line".into(),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        if self.eof() {
            return err(self.at(), format!("expected {what}, found end of file"));
        }
        let at = self.at();
        match self.bump().tok {
            Tok::Ident(s) => Ok((s, at)),
            t => err(at, format!("expected {what}, found {}", Self::describe(&t))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let (s, at) = self.ident(&format!("`{kw}`"))?;
        if s == kw {
            Ok(())
        } else {
            err(at, format!("expected `{kw}`, found `{s}`"))
        }
    }

    fn sym(&mut self, c: char) -> Result<()> {
        if self.eof() {
            return err(self.at(), format!("expected `{c}`, found end of file"));
        }
        let at = self.at();
        let t = self.bump().tok;
        if t == Tok::Sym(c) {
            Ok(())
        } else {
            err(at, format!("expected `{c}`, found {}", Self::describe(&t)))
        }
    }

    fn arrow(&mut self) -> Result<()> {
        let at = self.at();
        let t = self.bump().tok;
        if t == Tok::Arrow {
            Ok(())
        } else {
            err(at, format!("expected `->`, found {}", Self::describe(&t)))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        !self.eof() && self.peek().tok == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        !self.eof() && self.peek().tok == Tok::Ident(s.into())
    }

    fn end_of_statement(&mut self) -> Result<()> {
        if self.eof() || matches!(self.peek().tok, Tok::Newline | Tok::Sym(';')) || self.is_sym('}') {
            Ok(())
        } else {
            let t = self.peek().tok.clone();
            err(self.at(), format!("unexpected {} at end of statement", Self::describe(&t)))
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let (s, at) = self.ident(what)?;
        s.parse().or_else(|_| err(at, format!("expected {what}, found `{s}`")))
    }

    /// Runs `stmt` for each statement up to the closing brace.
    fn block(&mut self, mut stmt: impl FnMut(&mut Self, String, Pos) -> Result<()>) -> Result<()> {
        self.sym('{')?;
        loop {
            self.skip_newlines();
            if self.eof() {
                return err(self.at(), "unclosed `{`");
            }
            if self.is_sym('}') {
                self.pos += 1;
                return Ok(());
            }
            let (kw, at) = self.ident("a statement")?;
            stmt(self, kw, at)?;
            self.end_of_statement()?;
        }
    }

    /// `on CAT`, or the most recent category when omitted.
    fn on_category(&mut self, at: Pos) -> Result<usize> {
        if self.is_ident("on") {
            self.pos += 1;
            return self.category_ref();
        }
        match self.doc.categories.len() {
            0 => err(at, "no category declared yet"),
            n => Ok(n - 1),
        }
    }

    fn category_ref(&mut self) -> Result<usize> {
        let (name, at) = self.ident("a category name")?;
        self.doc
            .category_index(&name)
            .map_or_else(|| err(at, format!("unknown category `{name}`")), Ok)
    }

    fn class_ref(&mut self, cat: usize) -> Result<usize> {
        let (name, at) = self.ident("a class name")?;
        match self.doc.class_index(&name) {
            Some(i) if self.doc.classes[i].category == cat => Ok(i),
            Some(_) => err(at, format!("class `{name}` lives on another category")),
            None => err(at, format!("unknown class `{name}`")),
        }
    }

    fn morphism_ref(&mut self, cat: usize) -> Result<(usize, Pos)> {
        let (label, at) = self.ident("a morphism name")?;
        let raw = &self.doc.categories[cat].raw;
        match raw.morphisms.iter().position(|m| m.label == label) {
            Some(i) => Ok((i, at)),
            None => err(at, format!("unknown morphism `{label}` in {}", raw.name)),
        }
    }

    fn object_ref(&mut self, raw: &RawCategory) -> Result<usize> {
        let (label, at) = self.ident("an object name")?;
        raw.objects
            .iter()
            .position(|o| *o == label)
            .map_or_else(|| err(at, format!("unknown object `{label}` in {}", raw.name)), Ok)
    }

    fn check_fresh_name(&self, name: &str, at: Pos) -> Result<()> {
        let taken = self.doc.category_index(name).is_some()
            || self.doc.class_index(name).is_some()
            || self.doc.ofs.iter().any(|o| o.name == name)
            || self.doc.functors.iter().any(|f| f.data.name == name)
            || self.doc.restrictions.iter().any(|r| r.name == name)
            || self.doc.problems.iter().any(|p| p.name == name)
            || self.doc.certificates.iter().any(|c| c.name == name);
        if taken {
            err(at, format!("`{name}` is declared twice"))
        } else {
            Ok(())
        }
    }

    fn top(&mut self) -> Result<()> {
        loop {
            self.skip_newlines();
            if self.eof() {
                return Ok(());
            }
            let (kw, at) = self.ident("a declaration")?;
            match kw.as_str() {
                "category" => self.category(at)?,
                "poset" => self.poset(at)?,
                "builtin" => self.builtin(at)?,
                "class" => self.class()?,
                "ofs" => self.ofs()?,
                "functor" => self.functor()?,
                "restriction" => self.restriction()?,
                "problem" => self.problem()?,
                "certificate" => self.certificate()?,
                _ => return err(at, format!("unknown declaration `{kw}`")),
            }
            self.end_of_statement()?;
        }
    }

    fn category(&mut self, start: Pos) -> Result<()> {
        let (name, at) = self.ident("a category name")?;
        self.check_fresh_name(&name, at)?;
        let mut raw = RawCategory::new(&name);
        let mut generated = None;
        let mut facts: Vec<((usize, usize), usize, Pos)> = Vec::new();
        self.block(|p, kw, at| {
            match kw.as_str() {
                "objects" => {
                    while !p.eof() && matches!(p.peek().tok, Tok::Ident(_)) {
                        let (o, oat) = p.ident("an object name")?;
                        if raw.objects.contains(&o) {
                            return err(oat, format!("object `{o}` declared twice"));
                        }
                        let label = format!("1_{o}");
                        if raw.morphisms.iter().any(|m| m.label == label) {
                            return err(oat, format!("`{label}` is already a morphism name"));
                        }
                        raw.add_object(o);
                    }
                }
                "identity" => {
                    let (label, lat) = p.ident("a morphism name")?;
                    p.keyword("of")?;
                    let o = p.object_ref(&raw)?;
                    if raw.morphisms.iter().any(|m| m.label == label) {
                        return err(lat, format!("morphism `{label}` declared twice"));
                    }
                    let id = raw.identities[o].expect("objects come with identities");
                    raw.morphisms[id].label = label;
                }
                "morphism" => {
                    let (label, lat) = p.ident("a morphism name")?;
                    p.sym(':')?;
                    let d = p.object_ref(&raw)?;
                    p.arrow()?;
                    let c = p.object_ref(&raw)?;
                    if raw.morphisms.iter().any(|m| m.label == label) {
                        return err(lat, format!("morphism `{label}` declared twice"));
                    }
                    raw.add_morphism(label, d, c);
                }
                "compose" => {
                    let find = |p: &mut Parser| -> Result<(usize, Pos)> {
                        let (label, lat) = p.ident("a morphism name")?;
                        raw.morphisms
                            .iter()
                            .position(|m| m.label == label)
                            .map(|i| (i, lat))
                            .map_or_else(|| err(lat, format!("unknown morphism `{label}`")), Ok)
                    };
                    let (g, _) = find(p)?;
                    let (f, _) = find(p)?;
                    p.sym('=')?;
                    let (h, _) = find(p)?;
                    let ms = &raw.morphisms;
                    if ms[f].cod != ms[g].dom {
                        return err(
                            at,
                            format!(
                                "type error: cannot compose {} after {}: {} ends at {} but {} starts at {}",
                                ms[g].label,
                                ms[f].label,
                                ms[f].label,
                                raw.objects[ms[f].cod],
                                ms[g].label,
                                raw.objects[ms[g].dom]
                            ),
                        );
                    }
                    if ms[h].dom != ms[f].dom || ms[h].cod != ms[g].cod {
                        return err(
                            at,
                            format!("type error: {} does not have the type of {} ∘ {}", ms[h].label, ms[g].label, ms[f].label),
                        );
                    }
                    if let Some(&(_, old, _)) = facts.iter().find(|(k, _, _)| *k == (g, f)) {
                        if old != h {
                            return err(at, format!("conflicting composite for {} ∘ {}", ms[g].label, ms[f].label));
                        }
                    }
                    facts.push(((g, f), h, at));
                }
                "generated" => generated = Some(at),
                _ => return err(at, format!("unknown category statement `{kw}`")),
            }
            Ok(())
        })?;
        for ((g, f), h, _) in &facts {
            raw.set_compose(*g, *f, *h);
        }
        match generated {
            Some(gat) => match raw.close_composition() {
                Ok(()) => {}
                Err(ClosureError::Ambiguous { pair, first, second }) => {
                    let l = |i: usize| raw.morphisms[i].label.clone();
                    return err(
                        gat,
                        format!(
                            "ambiguous presentation: {} ∘ {} reduces to both {} and {}",
                            l(pair.0),
                            l(pair.1),
                            l(first),
                            l(second)
                        ),
                    );
                }
                Err(ClosureError::Undetermined(pairs)) => {
                    let l = |i: usize| raw.morphisms[i].label.clone();
                    let shown: Vec<String> = pairs.iter().take(4).map(|&(g, f)| format!("{} ∘ {}", l(g), l(f))).collect();
                    return err(gat, format!("composition is not determined for {}", shown.join(", ")));
                }
            },
            None => {
                raw.fill_identity_composites();
                let missing: Vec<String> = (0..raw.morphisms.len())
                    .flat_map(|g| (0..raw.morphisms.len()).map(move |f| (g, f)))
                    .filter(|&(g, f)| raw.morphisms[f].cod == raw.morphisms[g].dom && !raw.compose.contains_key(&(g, f)))
                    .take(4)
                    .map(|(g, f)| format!("{} ∘ {}", raw.morphisms[g].label, raw.morphisms[f].label))
                    .collect();
                if !missing.is_empty() {
                    return err(
                        start,
                        format!("missing composites {} (declare `generated` to derive them)", missing.join(", ")),
                    );
                }
            }
        }
        self.doc.categories.push(CategoryDecl { raw, line: start.0 });
        Ok(())
    }

    /// `poset NAME { elements a b c; le a b; ... }`, closed under transitivity.
    fn poset(&mut self, start: Pos) -> Result<()> {
        let (name, at) = self.ident("a category name")?;
        self.check_fresh_name(&name, at)?;
        let mut elements: Vec<String> = Vec::new();
        let mut covers = Vec::new();
        self.block(|p, kw, at| {
            match kw.as_str() {
                "elements" => {
                    while !p.eof() && matches!(p.peek().tok, Tok::Ident(_)) {
                        let (e, eat) = p.ident("an element")?;
                        if elements.contains(&e) {
                            return err(eat, format!("element `{e}` declared twice"));
                        }
                        elements.push(e);
                    }
                }
                "le" => {
                    let find = |p: &mut Parser| -> Result<usize> {
                        let (e, eat) = p.ident("an element")?;
                        elements
                            .iter()
                            .position(|x| *x == e)
                            .map_or_else(|| err(eat, format!("unknown element `{e}`")), Ok)
                    };
                    let a = find(p)?;
                    let b = find(p)?;
                    covers.push((a, b));
                }
                _ => return err(at, format!("unknown poset statement `{kw}`")),
            }
            Ok(())
        })?;
        let refs: Vec<&str> = elements.iter().map(String::as_str).collect();
        let cat = corpus::poset(&name, &refs, &covers).map_err(|e| Error::parse(start.0, start.1, e.to_string()))?;
        self.doc.categories.push(CategoryDecl {
            raw: cat.to_raw(),
            line: start.0,
        });
        Ok(())
    }

    /// `builtin NAME = finset 0 1 2 | chain 3 | discrete 2 | cyclic 2 | walking_iso | idempotent`.
    fn builtin(&mut self, start: Pos) -> Result<()> {
        let (name, at) = self.ident("a category name")?;
        self.check_fresh_name(&name, at)?;
        self.sym('=')?;
        let (kind, kat) = self.ident("a builtin family")?;
        let mut args = Vec::new();
        while !self.eof() && matches!(self.peek().tok, Tok::Ident(_)) {
            args.push(self.number("a size")?);
        }
        let one = |args: &[usize]| -> Result<usize> {
            match args {
                [n] => Ok(*n),
                _ => err(kat, format!("`{kind}` takes one size")),
            }
        };
        let cat = match kind.as_str() {
            "finset" if !args.is_empty() && args.iter().all(|&k| k <= 3) => corpus::finset(&args),
            "finset" => return err(kat, "`finset` takes one to several sizes, each at most 3"),
            "chain" => corpus::chain(one(&args)?),
            "discrete" => corpus::discrete(one(&args)?),
            "cyclic" if one(&args)? >= 1 => corpus::cyclic_group(args[0]),
            "walking_iso" => corpus::walking_iso(),
            "idempotent" => corpus::idempotent_monoid(),
            _ => return err(kat, format!("unknown builtin family `{kind}`")),
        };
        let mut raw = cat.to_raw();
        raw.name = name;
        self.doc.categories.push(CategoryDecl { raw, line: start.0 });
        Ok(())
    }

    fn class(&mut self) -> Result<()> {
        let (name, at) = self.ident("a class name")?;
        self.check_fresh_name(&name, at)?;
        let category = self.on_category(at)?;
        self.sym('=')?;
        let spec = if self.is_sym('{') {
            self.pos += 1;
            let mut ms = Vec::new();
            loop {
                while matches!(self.peek().tok, Tok::Newline) {
                    self.pos += 1;
                }
                if self.is_sym('}') {
                    self.pos += 1;
                    break;
                }
                let (m, mat) = self.morphism_ref(category)?;
                if ms.contains(&m) {
                    return err(mat, "morphism listed twice");
                }
                ms.push(m);
                if self.is_sym(',') {
                    self.pos += 1;
                }
            }
            ms.sort_unstable();
            ClassSpec::Explicit(ms)
        } else {
            let (kind, kat) = self.ident("`all`, `isos`, `monos`, `epis` or `{`")?;
            match kind.as_str() {
                "all" => ClassSpec::All,
                "isos" => ClassSpec::Isos,
                "monos" => ClassSpec::Monos,
                "epis" => ClassSpec::Epis,
                _ => return err(kat, format!("unknown class form `{kind}`")),
            }
        };
        let auto_close_isos = if self.is_ident("auto-close-isos") {
            self.pos += 1;
            true
        } else {
            false
        };
        self.doc.classes.push(ClassDecl {
            name,
            category,
            spec,
            auto_close_isos,
        });
        Ok(())
    }

    /// `ofs NAME [on CAT] = P S`, or the short form `ofs P S`.
    fn ofs(&mut self) -> Result<()> {
        let save = self.pos;
        let (first, at) = self.ident("a factorization system name")?;
        let named = self.is_ident("on") || self.is_sym('=');
        let (name, category) = if named {
            self.check_fresh_name(&first, at)?;
            let category = self.on_category(at)?;
            self.sym('=')?;
            (first, category)
        } else {
            self.pos = save;
            let category = match self.doc.class_index(&first) {
                Some(i) => self.doc.classes[i].category,
                None => return err(at, format!("unknown class `{first}`")),
            };
            (format!("ofs{}", self.doc.ofs.len()), category)
        };
        let p = self.class_ref(category)?;
        let s = self.class_ref(category)?;
        self.doc.ofs.push(OfsDecl { name, category, p, s });
        Ok(())
    }

    fn functor(&mut self) -> Result<()> {
        let (name, at) = self.ident("a functor name")?;
        self.check_fresh_name(&name, at)?;
        self.sym(':')?;
        let source = self.category_ref()?;
        self.arrow()?;
        let target = self.category_ref()?;
        let variance = if self.is_ident("contravariant") {
            self.pos += 1;
            Variance::Contravariant
        } else {
            Variance::Covariant
        };
        let src = self.doc.categories[source].raw.clone();
        let tgt = self.doc.categories[target].raw.clone();
        let mut omap: Vec<Option<usize>> = vec![None; src.objects.len()];
        let mut mmap: Vec<Option<usize>> = vec![None; src.morphisms.len()];
        self.block(|p, kw, at| {
            match kw.as_str() {
                "obj" => {
                    let a = p.object_ref(&src)?;
                    p.arrow()?;
                    let b = p.object_ref(&tgt)?;
                    if omap[a].replace(b).is_some() {
                        return err(at, "object mapped twice");
                    }
                }
                "mor" => {
                    let (f, _) = p.morphism_ref(source)?;
                    p.arrow()?;
                    let (g, _) = p.morphism_ref(target)?;
                    if mmap[f].replace(g).is_some() {
                        return err(at, "morphism mapped twice");
                    }
                }
                _ => return err(at, format!("unknown functor statement `{kw}`")),
            }
            Ok(())
        })?;
        let mut omap_full = Vec::with_capacity(omap.len());
        for (o, v) in omap.iter().enumerate() {
            match v {
                Some(v) => omap_full.push(ObjId(*v as u32)),
                None => return err(at, format!("object `{}` is not mapped", src.objects[o])),
            }
        }
        // identities go to identities unless stated otherwise
        for (o, id) in src.identities.iter().enumerate() {
            if let (Some(id), Some(tid)) = (id, tgt.identities[omap_full[o].idx()]) {
                mmap[*id].get_or_insert(tid);
            }
        }
        self.doc.functors.push(FunctorDecl {
            source,
            target,
            data: FunctorData {
                name,
                omap: omap_full,
                mmap: mmap.into_iter().map(|m| m.map(|m| MorId(m as u32))).collect(),
                variance,
            },
        });
        Ok(())
    }

    fn restriction(&mut self) -> Result<()> {
        let (name, at) = self.ident("a restriction name")?;
        self.check_fresh_name(&name, at)?;
        let category = self.on_category(at)?;
        let raw = self.doc.categories[category].raw.clone();
        let id_of = |o: usize| raw.identities[o].expect("objects come with identities");
        let mut bar: Vec<usize> = raw.morphisms.iter().map(|m| id_of(m.dom)).collect();
        let mut hat: Option<Vec<usize>> = None;
        self.block(|p, kw, at| {
            let is_bar = match kw.as_str() {
                "bar" => true,
                "hat" => false,
                _ => return err(at, format!("unknown restriction statement `{kw}`")),
            };
            let (f, _) = p.morphism_ref(category)?;
            p.sym('=')?;
            let (g, gat) = p.morphism_ref(category)?;
            let obj = if is_bar { raw.morphisms[f].dom } else { raw.morphisms[f].cod };
            if raw.morphisms[g].dom != obj || raw.morphisms[g].cod != obj {
                return err(gat, format!("{} must be an endomorphism of {}", raw.morphisms[g].label, raw.objects[obj]));
            }
            if is_bar {
                bar[f] = g;
            } else {
                hat.get_or_insert_with(|| raw.morphisms.iter().map(|m| id_of(m.cod)).collect())[f] = g;
            }
            Ok(())
        })?;
        self.doc.restrictions.push(RestrictionDecl {
            name,
            category,
            bar,
            hat,
        });
        Ok(())
    }

    fn object_literal(&mut self) -> Result<Obj> {
        let (kind, at) = self.ident("`set`, `preorder`, `chaotic`, `point` or `empty`")?;
        Ok(match kind.as_str() {
            "set" => Obj::set(self.number("a size")?),
            "chaotic" => Obj::chaotic(self.number("a size")?),
            "point" => Obj::point(),
            "empty" => Obj::set(0),
            "preorder" => {
                let n = self.number("a size")?;
                self.sym('[')?;
                let mut rows = Vec::new();
                while !self.is_sym(']') {
                    let (row, rat) = self.ident("a matrix row")?;
                    let bits: Option<Vec<bool>> = row
                        .chars()
                        .map(|c| match c {
                            '0' => Some(false),
                            '1' => Some(true),
                            _ => None,
                        })
                        .collect();
                    match bits {
                        Some(b) if b.len() == n => rows.push(b),
                        _ => return err(rat, format!("expected a row of {n} digits 0/1")),
                    }
                }
                self.sym(']')?;
                if rows.len() != n {
                    return err(at, format!("expected {n} rows"));
                }
                Obj::preorder(rows).or_else(|e| err(at, e.to_string()))?
            }
            _ => return err(at, format!("unknown object form `{kind}`")),
        })
    }

    fn local_object(&mut self, loc: &Locals) -> Result<Obj> {
        let (name, at) = self.ident("an object name")?;
        loc.objects
            .get(&name)
            .cloned()
            .map_or_else(|| err(at, format!("unknown object `{name}`")), Ok)
    }

    fn local_map(&mut self, loc: &Locals) -> Result<Mor> {
        let (name, at) = self.ident("a map name")?;
        loc.maps
            .get(&name)
            .cloned()
            .map_or_else(|| err(at, format!("unknown map `{name}`")), Ok)
    }

    fn pair(&mut self, loc: &Locals) -> Result<(Mor, Mor)> {
        self.sym('(')?;
        let a = self.local_map(loc)?;
        self.sym(',')?;
        let b = self.local_map(loc)?;
        self.sym(')')?;
        Ok((a, b))
    }

    fn span(&mut self, loc: &Locals) -> Result<BSpan> {
        let at = self.at();
        let (s, f) = self.pair(loc)?;
        if s.dom != f.dom {
            return err(at, "span legs have different domains");
        }
        Ok(BSpan { s, f })
    }

    /// Shared statements of problem and certificate blocks. Returns false
    /// when the keyword is not one of them.
    fn local_statement(&mut self, loc: &mut Locals, kw: &str, at: Pos) -> Result<bool> {
        match kw {
            "backend" => {
                let (b, bat) = self.ident("a backend")?;
                if loc.backend.is_some() {
                    return err(at, "backend declared twice");
                }
                if !loc.objects.is_empty() {
                    return err(at, "declare the backend before any object");
                }
                loc.backend = Some(b.parse().or_else(|e: Error| err(bat, e.to_string()))?);
            }
            "object" => {
                let (name, nat) = self.ident("an object name")?;
                self.sym('=')?;
                let oat = self.at();
                let o = self.object_literal()?;
                let backend = loc.backend.ok_or_else(|| Error::parse(at.0, at.1, "declare the backend first"))?;
                if let Err(e) = o.check_in(backend) {
                    return err(oat, e.to_string());
                }
                if loc.objects.insert(name.clone(), o).is_some() {
                    return err(nat, format!("object `{name}` declared twice"));
                }
            }
            "map" => {
                let (name, nat) = self.ident("a map name")?;
                self.sym(':')?;
                let d = self.local_object(loc)?;
                self.arrow()?;
                let c = self.local_object(loc)?;
                self.sym('=')?;
                self.sym('[')?;
                let vat = self.at();
                let mut values = Vec::new();
                while !self.is_sym(']') {
                    values.push(self.number("a value")?);
                    if self.is_sym(',') {
                        self.pos += 1;
                    }
                }
                self.sym(']')?;
                let m = Mor::new(d, c, values).or_else(|e| err(vat, e.to_string()))?;
                if loc.maps.insert(name.clone(), m).is_some() {
                    return err(nat, format!("map `{name}` declared twice"));
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn class_pred(&mut self) -> Result<SPred> {
        let (c, at) = self.ident("a class predicate")?;
        c.parse().or_else(|e: Error| err(at, e.to_string()))
    }

    fn problem(&mut self) -> Result<()> {
        let (name, at) = self.ident("a problem name")?;
        self.check_fresh_name(&name, at)?;
        let mut loc = Locals {
            backend: None,
            objects: HashMap::new(),
            maps: HashMap::new(),
        };
        let mut class = None;
        let mut relation = None;
        let mut span = None;
        let mut target = None;
        let (mut section, mut g, mut a) = (None, None, None);
        self.block(|p, kw, kat| {
            if p.local_statement(&mut loc, &kw, kat)? {
                return Ok(());
            }
            match kw.as_str() {
                "class" => class = Some(p.class_pred()?),
                "relation" => relation = Some(p.cert_relation()?),
                "span" => span = Some(p.span(&loc)?),
                "target" => target = Some(p.span(&loc)?),
                "section" => section = Some(p.local_map(&loc)?),
                "g" => g = Some(p.local_map(&loc)?),
                "a" => a = Some(p.local_map(&loc)?),
                _ => return err(kat, format!("unknown problem statement `{kw}`")),
            }
            Ok(())
        })?;
        let need = |what: &str| Error::parse(at.0, at.1, format!("problem `{name}` lacks {what}"));
        let inputs = TemplateInputs {
            backend: loc.backend.ok_or_else(|| need("a backend"))?,
            class: class.ok_or_else(|| need("a class"))?,
            span: span.ok_or_else(|| need("a span"))?,
            section,
            g,
            a,
        };
        self.doc.problems.push(Problem {
            name,
            inputs,
            relation,
            target,
        });
        Ok(())
    }

    fn cert_relation(&mut self) -> Result<CertRelation> {
        let (r, at) = self.ident("a relation")?;
        r.parse().or_else(|e: Error| err(at, e.to_string()))
    }

    fn dir(&mut self) -> Result<Dir> {
        let (d, at) = self.ident("`forward` or `backward`")?;
        d.parse().or_else(|e: Error| err(at, e.to_string()))
    }

    fn to_span(&mut self, loc: &Locals) -> Result<BSpan> {
        self.keyword("to")?;
        self.span(loc)
    }

    /// `{ key = map; key = (p, q); ... }` with exactly the given keys.
    fn record(&mut self, loc: &Locals, maps: &[&str], squares: &[&str]) -> Result<HashMap<String, Vec<Mor>>> {
        let start = self.at();
        let mut out: HashMap<String, Vec<Mor>> = HashMap::new();
        self.block(|p, kw, at| {
            p.sym('=')?;
            let v = if maps.contains(&kw.as_str()) {
                vec![p.local_map(loc)?]
            } else if squares.contains(&kw.as_str()) {
                let (a, b) = p.pair(loc)?;
                vec![a, b]
            } else {
                return err(at, format!("unknown field `{kw}`"));
            };
            if out.insert(kw.clone(), v).is_some() {
                return err(at, format!("field `{kw}` given twice"));
            }
            Ok(())
        })?;
        for k in maps.iter().chain(squares) {
            if !out.contains_key(*k) {
                return err(start, format!("missing field `{k}`"));
            }
        }
        Ok(out)
    }

    fn certificate(&mut self) -> Result<()> {
        let (name, at) = self.ident("a certificate name")?;
        self.check_fresh_name(&name, at)?;
        let mut loc = Locals {
            backend: None,
            objects: HashMap::new(),
            maps: HashMap::new(),
        };
        let mut class = None;
        let mut relation = None;
        let mut start = None;
        let mut end = None;
        let mut steps = Vec::new();
        self.block(|p, kw, kat| {
            if p.local_statement(&mut loc, &kw, kat)? {
                return Ok(());
            }
            match kw.as_str() {
                "class" => class = Some(p.class_pred()?),
                "relation" => relation = Some(p.cert_relation()?),
                "start" => start = Some(p.span(&loc)?),
                "end" => end = Some(p.span(&loc)?),
                "iso" => {
                    let x = p.local_map(&loc)?;
                    let to = p.to_span(&loc)?;
                    steps.push(Step::Iso { x, to });
                }
                "leq" => {
                    let dir = p.dir()?;
                    let x = p.local_map(&loc)?;
                    let evidence = if p.is_ident("sstar") {
                        p.pos += 1;
                        let mut r = p.record(&loc, &["f", "s", "v", "star", "along", "leg"], &["small", "large"])?;
                        let mut take = |k: &str| r.remove(k).expect("checked");
                        let one = |v: Vec<Mor>| v.into_iter().next().expect("one map");
                        let sq = |v: Vec<Mor>| {
                            let mut it = v.into_iter();
                            Square {
                                p: it.next().expect("pair"),
                                q: it.next().expect("pair"),
                            }
                        };
                        Some(SStarEvidence {
                            f: one(take("f")),
                            s: one(take("s")),
                            v: one(take("v")),
                            small: sq(take("small")),
                            large: sq(take("large")),
                            star: one(take("star")),
                            along: one(take("along")),
                            leg: one(take("leg")),
                        })
                    } else {
                        None
                    };
                    let to = p.to_span(&loc)?;
                    steps.push(Step::Leq { dir, x, evidence, to });
                }
                "a" => {
                    let dir = p.dir()?;
                    let mut r = p.record(&loc, &["u", "k", "fc", "sc", "gc", "tc", "v"], &["small", "large"])?;
                    let mut take = |k: &str| r.remove(k).expect("checked");
                    let one = |v: Vec<Mor>| v.into_iter().next().expect("one map");
                    let sq = |v: Vec<Mor>| {
                        let mut it = v.into_iter();
                        Square {
                            p: it.next().expect("pair"),
                            q: it.next().expect("pair"),
                        }
                    };
                    let w = AWitness {
                        u: one(take("u")),
                        k: one(take("k")),
                        fc: one(take("fc")),
                        sc: one(take("sc")),
                        gc: one(take("gc")),
                        tc: one(take("tc")),
                        v: one(take("v")),
                        small: sq(take("small")),
                        large: sq(take("large")),
                    };
                    let to = p.to_span(&loc)?;
                    steps.push(Step::A {
                        dir,
                        w: Box::new(w),
                        to,
                    });
                }
                _ => return err(kat, format!("unknown certificate statement `{kw}`")),
            }
            Ok(())
        })?;
        let need = |what: &str| Error::parse(at.0, at.1, format!("certificate `{name}` lacks {what}"));
        self.doc.certificates.push(Certificate {
            backend: loc.backend.ok_or_else(|| need("a backend"))?,
            class: class.ok_or_else(|| need("a class"))?,
            relation: relation.ok_or_else(|| need("a relation"))?,
            start: start.ok_or_else(|| need("a start span"))?,
            end: end.ok_or_else(|| need("an end span"))?,
            steps,
            name,
        });
        Ok(())
    }
}

/// Parses an instance file. Errors carry the line and column.
pub fn parse_document(text: &str) -> Result<Document> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        doc: Document::default(),
    };
    if p.toks.is_empty() {
        return Ok(p.doc);
    }
    p.top()?;
    Ok(p.doc)
}
