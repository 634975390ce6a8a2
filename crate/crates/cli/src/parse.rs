//! Parser and printer for the system-description language.
//!
//! ```text
//! indep x y;
//! dep u;
//! ranking orderly;
//! eq u*u_x - y*u - y^2;
//! eq y*u_y - u;
//! ineq u;
//! option order 1;
//! ```
//!
//! Derivatives are written `u[1,0]` (multi-index aligned with the declared
//! independent variables), with the sugar `u_x`, `u_xy` and, for a single
//! independent variable, `u'`.  `D(u,x)` applies a total derivative.
//! Rational literals use `a/b`; division is only defined by nonzero
//! constants.

use std::collections::BTreeMap;
use std::fmt;

use diffreg::arith::{Context, DiffPolynomial, Rat, Ranking, RankingStyle, VariableId};
use diffreg::diffring::total_derivative;
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parsed system file.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub context: Context,
    pub ranking: Ranking,
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
    pub options: BTreeMap<String, String>,
}

impl SystemFile {
    pub fn to_differential_system(&self) -> diffreg::thomas_diff::DifferentialSystem {
        diffreg::thomas_diff::DifferentialSystem::new(
            self.equations.clone(),
            self.inequations.clone(),
            self.ranking.clone(),
            self.context.n(),
            self.context.m(),
        )
    }
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let advance = |chars: &mut std::iter::Peekable<std::str::Chars>,
                       line: &mut usize,
                       col: &mut usize| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                advance(&mut chars, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(advance(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Int(s.parse().unwrap()), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(advance(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            // trailing primes belong to the identifier (derivative sugar)
            while let Some(&'\'') = chars.peek() {
                s.push(advance(&mut chars, &mut line, &mut col));
            }
            out.push(Token { tok: Tok::Ident(s), line: tline, col: tcol });
            continue;
        }
        if "+-*/^()[],;=".contains(c) {
            advance(&mut chars, &mut line, &mut col);
            out.push(Token { tok: Tok::Punct(c), line: tline, col: tcol });
            continue;
        }
        return Err(ParseError { line, col, message: format!("unexpected character {c:?}") });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    ctx: Context,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {c:?}"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    /// Resolves a (possibly sugared) variable reference.
    fn variable(&mut self, name: &str) -> Result<VariableId, ParseError> {
        // plain independent or dependent name
        if let Some(i) = self.ctx.indep.iter().position(|s| s == name) {
            return Ok(VariableId::Indep(i));
        }
        if let Some(d) = self.ctx.dep.iter().position(|s| s == name) {
            // bracket multi-index?
            if let Some(Tok::Punct('[')) = self.peek() {
                self.pos += 1;
                let mut idx = Vec::new();
                loop {
                    match self.next() {
                        Some(Tok::Int(k)) => {
                            idx.push(u32::try_from(&k).map_err(|_| self.error("index too large"))?)
                        }
                        _ => return Err(self.error("expected a multi-index entry")),
                    }
                    match self.peek() {
                        Some(Tok::Punct(',')) => {
                            self.pos += 1;
                        }
                        Some(Tok::Punct(']')) => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ']'")),
                    }
                }
                if idx.len() != self.ctx.n() {
                    return Err(self.error(format!(
                        "multi-index arity {} does not match {} independent variables",
                        idx.len(),
                        self.ctx.n()
                    )));
                }
                return Ok(VariableId::jet(d, idx));
            }
            return Ok(VariableId::jet(d, vec![0; self.ctx.n()]));
        }
        // prime sugar u', u'' for one independent variable
        if let Some(stripped) = name.strip_suffix('\'') {
            let mut base = stripped;
            let mut order = 1u32;
            while let Some(s) = base.strip_suffix('\'') {
                base = s;
                order += 1;
            }
            if self.ctx.n() != 1 {
                return Err(self.error("prime derivatives need one independent variable"));
            }
            if let Some(d) = self.ctx.dep.iter().position(|s| s == base) {
                return Ok(VariableId::jet(d, vec![order]));
            }
        }
        // suffix sugar u_x, u_xy
        if let Some(split) = name.find('_') {
            let (base, mut suffix) = name.split_at(split);
            suffix = &suffix[1..];
            if let Some(d) = self.ctx.dep.iter().position(|s| s == base) {
                let mut idx = vec![0u32; self.ctx.n()];
                'outer: while !suffix.is_empty() {
                    // longest independent-variable name first
                    let mut names: Vec<(usize, &String)> =
                        self.ctx.indep.iter().enumerate().collect();
                    names.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));
                    for (i, s) in names {
                        if let Some(rest) = suffix.strip_prefix(s.as_str()) {
                            idx[i] += 1;
                            suffix = rest;
                            continue 'outer;
                        }
                    }
                    return Err(self.error(format!(
                        "unknown derivative suffix {suffix:?} in {name:?}"
                    )));
                }
                return Ok(VariableId::jet(d, idx));
            }
        }
        Err(self.error(format!("unknown identifier {name:?}")))
    }

    fn primary(&mut self) -> Result<DiffPolynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(DiffPolynomial::constant(Rat::from_integer(k)))
            }
            Some(Tok::Punct('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) if name == "D" => {
                self.pos += 1;
                self.expect_punct('(')?;
                let inner = self.expr()?;
                let mut out = inner;
                loop {
                    match self.peek() {
                        Some(Tok::Punct(',')) => {
                            self.pos += 1;
                            let var = self.ident()?;
                            match self.variable(&var)? {
                                VariableId::Indep(i) => out = total_derivative(&out, i),
                                _ => {
                                    return Err(
                                        self.error("D expects independent variables after the expression")
                                    )
                                }
                            }
                        }
                        Some(Tok::Punct(')')) => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')' in D(...)")),
                    }
                }
                Ok(out)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = self.variable(&name)?;
                Ok(DiffPolynomial::var(v))
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }

    fn power(&mut self) -> Result<DiffPolynomial, ParseError> {
        let base = self.primary()?;
        if let Some(Tok::Punct('^')) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(k)) => {
                    let e = u32::try_from(&k).map_err(|_| self.error("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.error("expected an integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<DiffPolynomial, ParseError> {
        match self.peek() {
            Some(Tok::Punct('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Punct('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn term(&mut self) -> Result<DiffPolynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Punct('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Punct('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if !c.is_zero() => {
                            acc = acc.scale(&(Rat::from_integer(1.into()) / c));
                        }
                        Some(_) => return Err(self.error("division by zero")),
                        None => {
                            return Err(self.error("division is only defined by constants"))
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr(&mut self) -> Result<DiffPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Punct('+')) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(Tok::Punct('-')) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Parses a complete system description.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens: &tokens, pos: 0, ctx: Context::new(vec![], vec![]) };
    let mut ranking = Ranking::orderly();
    let mut equations = Vec::new();
    let mut inequations = Vec::new();
    let mut options = BTreeMap::new();
    while p.peek().is_some() {
        let keyword = p.ident()?;
        match keyword.as_str() {
            "indep" => {
                while let Some(Tok::Ident(_)) = p.peek() {
                    let name = p.ident()?;
                    if p.ctx.indep.contains(&name) || p.ctx.dep.contains(&name) {
                        return Err(p.error(format!("duplicate declaration of {name:?}")));
                    }
                    p.ctx.indep.push(name);
                }
            }
            "dep" => {
                while let Some(Tok::Ident(_)) = p.peek() {
                    let name = p.ident()?;
                    if p.ctx.indep.contains(&name) || p.ctx.dep.contains(&name) {
                        return Err(p.error(format!("duplicate declaration of {name:?}")));
                    }
                    p.ctx.dep.push(name);
                }
            }
            "ranking" => {
                let style = p.ident()?;
                match style.as_str() {
                    "orderly" => ranking = Ranking { style: RankingStyle::Orderly },
                    "lex" => ranking = Ranking { style: RankingStyle::LexByDerivative },
                    "vars" => {
                        // explicit ascending jet-variable list
                        let mut list = Vec::new();
                        while let Some(Tok::Ident(_)) = p.peek() {
                            let name = p.ident()?;
                            list.push(p.variable(&name)?);
                        }
                        ranking = Ranking { style: RankingStyle::Custom(list) };
                    }
                    other => {
                        return Err(p.error(format!(
                            "unknown ranking {other:?} (use orderly, lex or vars)"
                        )))
                    }
                }
            }
            "eq" => equations.push(p.expr()?),
            "ineq" => inequations.push(p.expr()?),
            "option" => {
                let key = p.ident()?;
                let value = match p.next() {
                    Some(Tok::Ident(s)) => s,
                    Some(Tok::Int(k)) => k.to_string(),
                    _ => return Err(p.error("expected an option value")),
                };
                options.insert(key, value);
            }
            other => return Err(p.error(format!("unknown statement {other:?}"))),
        }
        p.expect_punct(';')?;
    }
    Ok(SystemFile { context: p.ctx, ranking, equations, inequations, options })
}

/// Prints a system file so that parsing the output reproduces a
/// structurally equal value.
pub fn print_system(s: &SystemFile) -> String {
    let mut out = String::new();
    if !s.context.indep.is_empty() {
        out.push_str(&format!("indep {};\n", s.context.indep.join(" ")));
    }
    if !s.context.dep.is_empty() {
        out.push_str(&format!("dep {};\n", s.context.dep.join(" ")));
    }
    match &s.ranking.style {
        RankingStyle::Orderly => out.push_str("ranking orderly;\n"),
        RankingStyle::LexByDerivative => out.push_str("ranking lex;\n"),
        RankingStyle::Custom(list) => {
            let names: Vec<String> = list.iter().map(|v| print_variable(&s.context, v)).collect();
            out.push_str(&format!("ranking vars {};\n", names.join(" ")));
        }
    }
    for e in &s.equations {
        out.push_str(&format!("eq {};\n", print_poly(&s.context, &s.ranking, e)));
    }
    for q in &s.inequations {
        out.push_str(&format!("ineq {};\n", print_poly(&s.context, &s.ranking, q)));
    }
    for (k, v) in &s.options {
        out.push_str(&format!("option {k} {v};\n"));
    }
    out
}

/// Canonical parseable rendering of a variable (bracket form for jets).
pub fn print_variable(ctx: &Context, v: &VariableId) -> String {
    match v {
        VariableId::Indep(i) => ctx.indep[*i].clone(),
        VariableId::Jet { dep, idx } => {
            if idx.order() == 0 {
                ctx.dep[*dep].clone()
            } else {
                let entries: Vec<String> = idx.0.iter().map(|e| e.to_string()).collect();
                format!("{}[{}]", ctx.dep[*dep], entries.join(","))
            }
        }
        other => ctx.var_name(other),
    }
}

/// Canonical parseable rendering of a polynomial.
pub fn print_poly(ctx: &Context, r: &Ranking, p: &DiffPolynomial) -> String {
    use num_traits::{One, Signed};
    if p.is_zero() {
        return "0".to_string();
    }
    let mut monomials: Vec<_> = p.terms().collect();
    monomials
        .sort_by(|a, b| diffreg::arith::cmp_monomial_degrevlex(b.0, a.0, r));
    let mut out = String::new();
    for (i, (m, c)) in monomials.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            if abs.denom().is_one() {
                parts.push(abs.numer().to_string());
            } else {
                parts.push(format!("{}/{}", abs.numer(), abs.denom()));
            }
        }
        for (v, e) in m.pairs() {
            let name = print_variable(ctx, v);
            if *e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        out.push_str(&parts.join("*"));
    }
    out
}

/// Parses a comma-separated point assignment `name=rational`.
pub fn parse_point(
    text: &str,
    ctx: &Context,
) -> Result<BTreeMap<VariableId, Rat>, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens: &tokens, pos: 0, ctx: ctx.clone() };
    let mut out = BTreeMap::new();
    while p.peek().is_some() {
        let name = p.ident()?;
        let var = p.variable(&name)?;
        p.expect_punct('=')?;
        let value = p.expr()?;
        match value.as_constant() {
            Some(c) => {
                out.insert(var, c);
            }
            None => return Err(p.error("point coordinates must be rational constants")),
        }
        if let Some(Tok::Punct(',')) = p.peek() {
            p.pos += 1;
        }
    }
    Ok(out)
}
