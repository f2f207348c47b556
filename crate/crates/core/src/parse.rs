//! Reader for `.bnd` model files.
//!
//! ```text
//! binoid N { gens: x y; rel: x + y = 2y; rel: 3x = inf; }
//! ideal I of N { gen: 2x; gen: y; }
//! simplicial S { vertices: a b c; facet: a b; facet: b c; }
//! affine A { dim: 1; torsion: 2; gen: 2 | 1; gen: 3 | 0; }
//! ```

use std::collections::HashMap;

use crate::affine::AffineMonoid;
use crate::error::{Error, Result};
use crate::presentation::{IdealSpec, Presentation, Relation};
use crate::spectrum::{simplicial_binoid, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let v = text.parse::<u64>().map_err(|_| Error::Syntax {
                line: l0,
                col: c0,
                msg: format!("integer `{text}` out of range"),
            })?;
            out.push(Token {
                tok: Tok::Int(v),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "{}:;=+|-".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Syntax {
            line: l0,
            col: c0,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let toks = lex(src)?;
        let lines = src.lines().count().max(1);
        let last = src.lines().last().map_or(0, |l| l.chars().count());
        Ok(Parser {
            toks,
            pos: 0,
            eof: (lines, last + 1),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map_or(self.eof, |t| (t.line, t.col));
        Err(Error::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected integer"),
        }
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        let v = self.int()?;
        let v = i64::try_from(v).or_else(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn ident_list(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// `<lincomb>` over the given generator names.
    fn lincomb(&mut self, gens: &[String]) -> Result<Vec<u32>> {
        let mut v = vec![0u32; gens.len()];
        loop {
            let coef = match self.peek() {
                Some(Tok::Int(_)) => Some(self.int()?),
                _ => None,
            };
            match self.peek() {
                Some(Tok::Ident(name)) if name != "inf" => {
                    let name = name.clone();
                    let Some(i) = gens.iter().position(|g| *g == name) else {
                        return Err(Error::UnknownGenerator(name));
                    };
                    self.pos += 1;
                    let c = u32::try_from(coef.unwrap_or(1))
                        .or_else(|_| self.err("coefficient out of range"))?;
                    v[i] = v[i]
                        .checked_add(c)
                        .map_or_else(|| self.err("coefficient out of range"), Ok)?;
                }
                _ => match coef {
                    Some(0) => {}
                    Some(_) => return self.err("expected generator after coefficient"),
                    None => return self.err("expected term"),
                },
            }
            if !self.eat_sym('+') {
                return Ok(v);
            }
        }
    }

    fn presentation_body(&mut self, name: &str, close: bool) -> Result<Presentation> {
        let mut gens: Option<Vec<String>> = None;
        let mut relations = Vec::new();
        loop {
            if close && self.eat_sym('}') {
                break;
            }
            if !close && self.at_end() {
                break;
            }
            let field = self.ident()?;
            self.expect_sym(':')?;
            match field.as_str() {
                "gens" => {
                    if gens.is_some() {
                        return self.err("`gens` given twice");
                    }
                    let list = self.ident_list()?;
                    if list.iter().any(|g| g == "inf") {
                        return self.err("`inf` is reserved");
                    }
                    let mut seen = std::collections::HashSet::new();
                    for g in &list {
                        if !seen.insert(g) {
                            return Err(Error::DuplicateGenerator(g.clone()));
                        }
                    }
                    gens = Some(list);
                }
                "rel" => {
                    let Some(g) = gens.as_ref() else {
                        return self.err("`rel` before `gens`");
                    };
                    let lhs = self.lincomb(g)?;
                    self.expect_sym('=')?;
                    if matches!(self.peek(), Some(Tok::Ident(s)) if s == "inf") {
                        self.pos += 1;
                        relations.push(Relation::Monomial { lhs });
                    } else {
                        let rhs = self.lincomb(g)?;
                        relations.push(Relation::Binomial { lhs, rhs });
                    }
                }
                other => return self.err(format!("unknown field `{other}`")),
            }
            self.expect_sym(';')?;
        }
        Presentation::new(name, gens.unwrap_or_default(), relations)
    }
}

/// Parse a bare presentation body such as `gens: x y; rel: x+y = 2y;`.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut p = Parser::new(text)?;
    p.presentation_body("N", false)
}

#[derive(Debug, Clone)]
pub struct IdealDecl {
    pub owner: String,
    pub ideal: IdealSpec,
}

/// A named model from a `.bnd` file.
#[derive(Debug, Clone)]
pub enum Model {
    Binoid(Presentation),
    Simplicial(SimplicialComplex, Presentation),
    Affine(AffineMonoid),
}

impl Model {
    pub fn presentation(&self) -> Option<&Presentation> {
        match self {
            Model::Binoid(p) | Model::Simplicial(_, p) => Some(p),
            Model::Affine(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub models: Vec<(String, Model)>,
    pub ideals: Vec<(String, IdealDecl)>,
}

impl Document {
    pub fn model(&self, name: &str) -> Option<&Model> {
        self.models.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn ideal(&self, name: &str) -> Option<&IdealDecl> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    pub fn presentation(&self, name: &str) -> Option<&Presentation> {
        self.model(name).and_then(Model::presentation)
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut p = Parser::new(text)?;
    let mut doc = Document::default();
    let mut names: HashMap<String, ()> = HashMap::new();
    while !p.at_end() {
        let kind = p.ident()?;
        let name = p.ident()?;
        if names.insert(name.clone(), ()).is_some() {
            return p.err(format!("name `{name}` defined twice"));
        }
        match kind.as_str() {
            "binoid" => {
                p.expect_sym('{')?;
                let pres = p.presentation_body(&name, true)?;
                doc.models.push((name, Model::Binoid(pres)));
            }
            "ideal" => {
                p.keyword("of")?;
                let owner = p.ident()?;
                let Some(pres) = doc.presentation(&owner).cloned() else {
                    return p.err(format!(
                        "ideal owner `{owner}` is not a binoid declared above"
                    ));
                };
                p.expect_sym('{')?;
                let mut gens = Vec::new();
                while !p.eat_sym('}') {
                    let field = p.ident()?;
                    if field != "gen" {
                        return p.err(format!("unknown field `{field}`"));
                    }
                    p.expect_sym(':')?;
                    gens.push(p.lincomb(&pres.gens)?);
                    p.expect_sym(';')?;
                }
                let ideal = IdealSpec::new(name.clone(), pres.rank(), gens)?;
                doc.ideals.push((name, IdealDecl { owner, ideal }));
            }
            "simplicial" => {
                p.expect_sym('{')?;
                let mut vertices = None;
                let mut facets = Vec::new();
                while !p.eat_sym('}') {
                    let field = p.ident()?;
                    p.expect_sym(':')?;
                    match field.as_str() {
                        "vertices" => vertices = Some(p.ident_list()?),
                        "facet" => facets.push(p.ident_list()?),
                        other => return p.err(format!("unknown field `{other}`")),
                    }
                    p.expect_sym(';')?;
                }
                let Some(vertices) = vertices else {
                    return p.err("simplicial block without `vertices`");
                };
                let cx = SimplicialComplex::from_names(vertices, &facets)?;
                let mut pres = simplicial_binoid(&cx)?;
                pres.name = name.clone();
                doc.models.push((name, Model::Simplicial(cx, pres)));
            }
            "affine" => {
                p.expect_sym('{')?;
                let (mut dim, mut torsion, mut gens) = (None, Vec::new(), Vec::new());
                while !p.eat_sym('}') {
                    let field = p.ident()?;
                    p.expect_sym(':')?;
                    match field.as_str() {
                        "dim" => dim = Some(p.int()? as usize),
                        "torsion" => {
                            while let Some(Tok::Int(_)) = p.peek() {
                                torsion.push(p.int()? as i64);
                            }
                        }
                        "gen" => {
                            let mut free = Vec::new();
                            while matches!(p.peek(), Some(Tok::Int(_)) | Some(Tok::Sym('-'))) {
                                free.push(p.signed()?);
                            }
                            let mut tors = Vec::new();
                            if p.eat_sym('|') {
                                while let Some(Tok::Int(_)) = p.peek() {
                                    tors.push(p.int()? as i64);
                                }
                            }
                            gens.push((free, tors));
                        }
                        other => return p.err(format!("unknown field `{other}`")),
                    }
                    p.expect_sym(';')?;
                }
                let Some(dim) = dim else {
                    return p.err("affine block without `dim`");
                };
                let gens = gens
                    .into_iter()
                    .map(|(f, mut t): (Vec<i64>, Vec<i64>)| {
                        t.resize(torsion.len(), 0);
                        (f, t)
                    })
                    .collect();
                let m = AffineMonoid::new(&name, dim, torsion, gens)?;
                doc.models.push((name, Model::Affine(m)));
            }
            other => {
                p.pos -= 2;
                return p.err(format!("unknown block kind `{other}`"));
            }
        }
    }
    Ok(doc)
}
