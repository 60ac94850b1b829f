//! Finite presentations of intersection rings: generators, monomial rewrite
//! rules and a table of top-degree values.

use crate::exactmath::{int, polynomial_eval, rat, solve, BigRational, ExactMatrix};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("division by a non-constant expression")]
    NonScalarDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression is not homogeneous of degree {0}")]
    NotTopDegree(u32),
    #[error("no value for monomial {0}")]
    NoValue(String),
    #[error("rewrite orders disagree on {0}")]
    NotConfluent(String),
    #[error("ring {0} has no evaluation")]
    NoEvaluation(String),
    #[error("unknown ring {0}")]
    UnknownRing(String),
    #[error("{0}")]
    Mismatch(String),
}

/// A polynomial with rational coefficients in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// Linear form Σ cᵢ xᵢ.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        coeffs.iter().enumerate().fold(Self::zero(n), |acc, (i, c)| acc.add(&Self::var(n, i).scale(c)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[u32]) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, mono: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&int(-1)))
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c * s);
        }
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                p.add_term(m, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Self::constant(self.nvars, BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Replaces variable i by images[i]; images live in another ring.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let n = images.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut t = Self::constant(n, c.clone());
            for (i, &e) in m.iter().enumerate() {
                t = t.mul(&images[i].pow(e));
            }
            out = out.add(&t);
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
            if mono.is_empty() || !a.is_one() {
                out.push_str(&a.to_string());
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono.join("*"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Vec<u32>,
    pub rhs: Poly,
}

/// Generators, rewrite rules, named derived classes and the values of
/// top-degree normal monomials.
#[derive(Clone, Debug)]
pub struct RingSpec {
    name: String,
    gens: Vec<String>,
    rules: Vec<Rule>,
    top: u32,
    table: BTreeMap<Vec<u32>, BigRational>,
    defs: Vec<(String, Poly)>,
}

impl RingSpec {
    pub fn new(name: &str, gens: &[&str], top: u32) -> Self {
        RingSpec {
            name: name.into(),
            gens: gens.iter().map(|s| s.to_string()).collect(),
            rules: Vec::new(),
            top,
            table: BTreeMap::new(),
            defs: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn top_degree(&self) -> u32 {
        self.top
    }

    pub fn definitions(&self) -> &[(String, Poly)] {
        &self.defs
    }

    pub fn with_rule(mut self, lhs: &str, rhs: &str) -> Self {
        let l = self.parse(lhs).expect("rule lhs");
        let (mono, _) = l.terms().next().map(|(m, c)| (m.clone(), c.clone())).expect("monomial lhs");
        let rhs = self.parse(rhs).expect("rule rhs");
        self.rules.push(Rule { lhs: mono, rhs });
        self
    }

    pub fn with_value(mut self, mono: &str, value: BigRational) -> Self {
        let p = self.parse(mono).expect("monomial");
        let m = p.terms().next().map(|(m, _)| m.clone()).expect("monomial");
        self.table.insert(m, value);
        self
    }

    pub fn with_def(mut self, name: &str, expr: &str) -> Self {
        let p = self.parse(expr).expect("definition");
        self.defs.push((name.into(), p));
        self
    }

    pub fn var(&self, name: &str) -> Poly {
        self.parse(name).expect("known generator")
    }

    pub fn def(&self, name: &str) -> Option<&Poly> {
        self.defs.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    fn reduce_in_order(&self, p: &Poly, order: &[usize]) -> Poly {
        let n = self.gens.len();
        let mut done = Poly::zero(n);
        let mut todo: Vec<(Vec<u32>, BigRational)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = todo.pop() {
            let hit = order.iter().map(|&i| &self.rules[i]).find(|r| r.lhs.iter().zip(&m).all(|(a, b)| a <= b));
            match hit {
                None => done.add_term(m, c),
                Some(r) => {
                    let q: Vec<u32> = m.iter().zip(&r.lhs).map(|(a, b)| a - b).collect();
                    for (rm, rc) in r.rhs.terms() {
                        let mm: Vec<u32> = rm.iter().zip(&q).map(|(a, b)| a + b).collect();
                        todo.push((mm, rc * &c));
                    }
                }
            }
        }
        done
    }

    /// Normal form, applying the first matching rule in declaration order.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let order: Vec<usize> = (0..self.rules.len()).collect();
        self.reduce_in_order(p, &order)
    }

    /// Checks that every monomial of the given degree has one normal form,
    /// whichever applicable rule is used first. Rewriting terminates, so this
    /// local check suffices.
    pub fn check_confluence(&self, degree: u32) -> Result<usize, ChowError> {
        let n = self.gens.len();
        let monos = monomials(n, degree);
        for m in &monos {
            let mut p = Poly::zero(n);
            p.add_term(m.clone(), BigRational::one());
            let first = self.reduce(&p);
            for (i, r) in self.rules.iter().enumerate() {
                if !r.lhs.iter().zip(m).all(|(a, b)| a <= b) {
                    continue;
                }
                let mut order: Vec<usize> = vec![i];
                order.extend((0..self.rules.len()).filter(|&j| j != i));
                if self.reduce_in_order(&p, &order) != first {
                    return Err(ChowError::NotConfluent(p.display_with(&self.gens)));
                }
            }
        }
        Ok(monos.len())
    }

    /// The degree of a top-degree class.
    pub fn eval(&self, p: &Poly) -> Result<BigRational, ChowError> {
        if self.table.is_empty() {
            return Err(ChowError::NoEvaluation(self.name.clone()));
        }
        let r = self.reduce(p);
        if r.is_zero() {
            return Ok(BigRational::zero());
        }
        if r.degree() != Some(self.top) {
            return Err(ChowError::NotTopDegree(self.top));
        }
        let mut total = BigRational::zero();
        for (m, c) in r.terms() {
            let mut single = Poly::zero(self.gens.len());
            single.add_term(m.clone(), BigRational::one());
            let v = self.table.get(m).ok_or_else(|| ChowError::NoValue(single.display_with(&self.gens)))?;
            total += c * v;
        }
        Ok(total)
    }

    pub fn eval_str(&self, expr: &str) -> Result<BigRational, ChowError> {
        self.eval(&self.parse(expr)?)
    }

    pub fn display(&self, p: &Poly) -> String {
        p.display_with(&self.gens)
    }

    /// Parses an expression over the generators and named classes. Grammar:
    /// sums of products of factors, where a factor is a number, a name or a
    /// parenthesized expression with an optional `^k`; products are written
    /// with `*`, `/` (by constants) or juxtaposition, and adjacent names such
    /// as `BC` are split greedily.
    pub fn parse(&self, s: &str) -> Result<Poly, ChowError> {
        let toks = lex(s)?;
        let mut p = Parser { toks: &toks, pos: 0, ring: self };
        let out = p.expr()?;
        if p.pos != toks.len() {
            return Err(ChowError::Parse { pos: toks[p.pos].0, msg: "unexpected token".into() });
        }
        Ok(out)
    }

    fn symbol(&self, name: &str) -> Option<Poly> {
        let n = self.gens.len();
        if let Some(i) = self.gens.iter().position(|g| g == name) {
            return Some(Poly::var(n, i));
        }
        self.def(name).cloned()
    }

    /// Splits an identifier into known names, longest match first.
    fn split_ident(&self, id: &str) -> Result<Vec<Poly>, ChowError> {
        let mut names: Vec<&str> = self.gens.iter().map(|s| s.as_str()).chain(self.defs.iter().map(|(n, _)| n.as_str())).collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        let mut rest = id;
        let mut out = Vec::new();
        while !rest.is_empty() {
            let n = names.iter().find(|n| rest.starts_with(**n)).ok_or_else(|| ChowError::UnknownSymbol(rest.to_string()))?;
            out.push(self.symbol(n).expect("listed name"));
            rest = &rest[n.len()..];
        }
        Ok(out)
    }
}

fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ChowError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|x| x.1).collect();
            let n = text.parse().map_err(|_| ChowError::Parse { pos, msg: "number too large".into() })?;
            out.push((pos, Tok::Num(n)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|x| x.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ChowError::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    ring: &'a RingSpec,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ChowError> {
        Err(ChowError::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly, ChowError> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ChowError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let d = self.unary()?.as_constant().ok_or(ChowError::NonScalarDivision)?;
                    if d.is_zero() {
                        return Err(ChowError::DivisionByZero);
                    }
                    acc = acc.scale(&d.recip());
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(')) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ChowError> {
        if let Some(Tok::Sym('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.scale(&int(-1)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ChowError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            return match self.peek().cloned() {
                Some(Tok::Num(k)) if (0..=64).contains(&k) => {
                    self.pos += 1;
                    Ok(base.pow(k as u32))
                }
                _ => self.err("expected a small non-negative exponent"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ChowError> {
        let n = self.ring.gens.len();
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(Poly::constant(n, int(k)))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                let parts = self.ring.split_ident(&id)?;
                let (last, init) = parts.split_last().expect("nonempty identifier");
                // `^` binds to the last name only: BC^2 = B·C².
                let mut acc = init.iter().fold(Poly::constant(n, BigRational::one()), |a, p| a.mul(p));
                if let Some(Tok::Sym('^')) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(k)) if (0..=64).contains(&k) => {
                            self.pos += 1;
                            acc = acc.mul(&last.pow(k as u32));
                        }
                        _ => return self.err("expected a small non-negative exponent"),
                    }
                } else {
                    acc = acc.mul(last);
                }
                Ok(acc)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return self.err("expected )");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected a number, a name or ("),
        }
    }
}

/// The invariant ring of the compactification: B = B̂, C = Ĉ.
pub fn inv_ring() -> RingSpec {
    RingSpec::new("inv", &["B", "C"], 4)
        .with_rule("BC", "-3C^2")
        .with_value("B^4", int(-12528))
        .with_value("C^4", int(-240))
        .with_def("H", "(B+3C)/4")
        .with_def("K", "(C-B)/4")
        .with_def("T", "(25B+27C)/4")
        .with_def("c1", "(B-C)/4")
        .with_def("c2", "(B^2-9C^2)/8")
        .with_def("c3", "13/288 B^3 + 181/96 C^3")
}

/// P² blown up in four points.
pub fn v_ring() -> RingSpec {
    let mut r = RingSpec::new("v", &["l", "e1", "e2", "e3", "e4"], 2);
    for i in 1..=4 {
        r = r.with_rule(&format!("l e{i}"), "0").with_rule(&format!("e{i}^2"), "-l^2");
        for j in i + 1..=4 {
            r = r.with_rule(&format!("e{i} e{j}"), "0");
        }
    }
    r.with_value("l^2", int(1)).with_def("c", "e1+e2+e3+e4")
}

/// (P¹)³ with D_i the pullback of a point from the i-th factor; N is the
/// normal class of the cusp divisor.
pub fn cusp_ring() -> RingSpec {
    RingSpec::new("cusp", &["D1", "D2", "D3"], 3)
        .with_rule("D1^2", "0")
        .with_rule("D2^2", "0")
        .with_rule("D3^2", "0")
        .with_value("D1 D2 D3", int(1))
        .with_def("N", "-(D1+D2+D3)")
}

/// The invariant part of the boundary divisor B₀.
pub fn b0_ring() -> RingSpec {
    RingSpec::new("b0", &["Bb", "Cb"], 3)
        .with_rule("Bb Cb", "-3Cb^2")
        .with_value("Bb^3", int(-165))
        .with_value("Cb^3", int(20))
        .with_def("K", "-(2Bb+Cb)/5")
        .with_def("N", "-(Bb+3Cb)/5")
        .with_def("Bhat", "(4Bb-3Cb)/5")
}

/// Q = P¹×P¹ with the diagonal class.
pub fn q_ring() -> RingSpec {
    RingSpec::new("q", &["D"], 2).with_value("D^2", int(2))
}

/// Divisor classes on the tritangent divisor, linear relations only.
pub fn t0_ring() -> RingSpec {
    RingSpec::new("t0", &["Hw", "Bte", "Bti", "Ct"], 1).with_rule("Bti", "12Hw - 6Bte - 3Ct")
}

pub fn ring_by_name(name: &str) -> Result<RingSpec, ChowError> {
    match name {
        "inv" => Ok(inv_ring()),
        "v" => Ok(v_ring()),
        "cusp" => Ok(cusp_ring()),
        "b0" => Ok(b0_ring()),
        "q" => Ok(q_ring()),
        "t0" => Ok(t0_ring()),
        _ => Err(ChowError::UnknownRing(name.into())),
    }
}

pub const RING_NAMES: [&str; 6] = ["inv", "v", "cusp", "b0", "q", "t0"];

/// B⁴, B³C, B²C², BC³, C⁴.
pub fn quartic_table(r: &RingSpec) -> Result<[BigRational; 5], ChowError> {
    let v: Vec<BigRational> = ["B^4", "B^3C", "B^2C^2", "BC^3", "C^4"].iter().map(|e| r.eval_str(e)).collect::<Result<_, _>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone()])
}

/// The intermediate degrees of the Riemann–Roch polynomial for nH.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannRoch {
    pub h4: BigRational,
    pub h3c1: BigRational,
    pub h2_c1sq_c2: BigRational,
    pub h_c1c2: BigRational,
    pub td4: BigRational,
    /// Coefficients of n⁴, n³, n², n, 1.
    pub coefficients: [BigRational; 5],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToddTerms {
    pub c1_4: BigRational,
    pub c1sq_c2: BigRational,
    pub c2_2: BigRational,
    pub c1c3: BigRational,
    pub c4: BigRational,
    pub td4: BigRational,
}

pub const EULER_C4: i64 = 271;

/// td₄ = −(c₁⁴ − 4c₁²c₂ − 3c₂² − c₁c₃ + c₄)/720.
pub fn todd4(r: &RingSpec) -> Result<ToddTerms, ChowError> {
    let c1_4 = r.eval_str("c1^4")?;
    let c1sq_c2 = r.eval_str("c1^2 c2")?;
    let c2_2 = r.eval_str("c2^2")?;
    let c1c3 = r.eval_str("c1 c3")?;
    let c4 = int(EULER_C4);
    let td4 = -(&c1_4 - int(4) * &c1sq_c2 - int(3) * &c2_2 - &c1c3 + &c4) / int(720);
    Ok(ToddTerms { c1_4, c1sq_c2, c2_2, c1c3, c4, td4 })
}

/// χ(O(nH)) = n⁴H⁴/24 + n³H³c₁/12 + n²H²(c₁²+c₂)/24 + nHc₁c₂/24 + td₄.
pub fn riemann_roch(r: &RingSpec) -> Result<RiemannRoch, ChowError> {
    let h4 = r.eval_str("H^4")?;
    let h3c1 = r.eval_str("H^3 c1")?;
    let h2_c1sq_c2 = r.eval_str("H^2 (c1^2 + c2)")?;
    let h_c1c2 = r.eval_str("H c1 c2")?;
    let td4 = todd4(r)?.td4;
    let coefficients = [&h4 / int(24), &h3c1 / int(12), &h2_c1sq_c2 / int(24), &h_c1c2 / int(24), td4.clone()];
    Ok(RiemannRoch { h4, h3c1, h2_c1sq_c2, h_c1c2, td4, coefficients })
}

impl RiemannRoch {
    pub fn at(&self, n: i64) -> BigRational {
        let ascending: Vec<BigRational> = self.coefficients.iter().rev().cloned().collect();
        polynomial_eval(&ascending, &int(n))
    }
}

/// Restriction of B̂_b and Ĉ_b to V: 5l − 3c and c.
fn b0_to_v(v: &RingSpec) -> Vec<Poly> {
    vec![v.parse("5l - 3c").expect("class"), v.parse("c").expect("class")]
}

/// Degree of a cubic class on B₀ computed through V: B̂_b·X·Y = 15(X|V)(Y|V),
/// and Ĉ_b³ = −B̂_bĈ_b²/3.
pub fn b0_triple_via_v(p: &Poly) -> Result<BigRational, ChowError> {
    let v = v_ring();
    let images = b0_to_v(&v);
    let mut total = BigRational::zero();
    for (m, c) in p.terms() {
        let (a, b) = (m[0], m[1]);
        if a + b != 3 {
            return Err(ChowError::NotTopDegree(3));
        }
        let (rest, factor) = if a >= 1 { ([a - 1, b], int(15)) } else { ([0, 2], rat(-15, 3)) };
        let mut mono = Poly::zero(2);
        mono.add_term(rest.to_vec(), BigRational::one());
        total += c * factor * v.eval(&mono.substitute(&images))?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct B0Check {
    /// B̂_b³, B̂_b²Ĉ_b, B̂_bĈ_b², Ĉ_b³ from the ring.
    pub ring: [BigRational; 4],
    /// The same through V.
    pub oracle: [BigRational; 4],
    pub adjunction: bool,
    pub q_adjunction: bool,
    /// Coefficients (n, m) of c₂(B₀) = nB̂_b² + mĈ_b².
    pub c2: (BigRational, BigRational),
    /// c₂ from the normal bundle sequence.
    pub c2_from_normal: (BigRational, BigRational),
    pub c1c2: BigRational,
    pub c2_on_q: BigRational,
}

pub fn b0_check() -> Result<B0Check, ChowError> {
    let r = b0_ring();
    let monos = ["Bb^3", "Bb^2 Cb", "Bb Cb^2", "Cb^3"];
    let mut ring = Vec::new();
    let mut oracle = Vec::new();
    for m in monos {
        let p = r.parse(m)?;
        ring.push(r.eval(&p)?);
        oracle.push(b0_triple_via_v(&p)?);
    }
    // Adjunction: K_{B₀} = (K + B₀)|_{B₀}.
    let inv = inv_ring();
    let restrict = vec![r.def("Bhat").cloned().expect("def"), r.var("Cb")];
    let k_c = inv.def("K").expect("def").substitute(&restrict);
    let n = r.def("N").cloned().expect("def");
    let k_b0 = r.def("K").cloned().expect("def");
    let adjunction = r.reduce(&k_c.add(&n).sub(&k_b0)).is_zero();
    // Q ⊂ B₀ with Q|_Q = −Δ, B̂_b|_Q = 3Δ, Ĉ_b|_Q = −Δ.
    let q = q_ring();
    let to_q = vec![q.parse("3D")?, q.parse("-D")?];
    let kq = k_b0.substitute(&to_q).add(&q.parse("-D")?);
    let q_adjunction = q.reduce(&kq.sub(&q.parse("-2D")?)).is_zero();
    // c₂(B₀) = nB̂_b² + mĈ_b²: c₂·Q = 0 and c₁c₂ = 24.
    let c1 = k_b0.scale(&int(-1));
    let bb2 = r.parse("Bb^2")?;
    let cb2 = r.parse("Cb^2")?;
    let m = ExactMatrix::from_fn(2, 2, |i, j| {
        let basis = if j == 0 { &bb2 } else { &cb2 };
        if i == 0 {
            q.eval(&basis.substitute(&to_q)).expect("q value")
        } else {
            r.eval(&c1.mul(basis)).expect("b0 value")
        }
    });
    let sol = solve(&m, &[int(0), int(24)]).map_err(|e| ChowError::Mismatch(e.to_string()))?;
    let c2 = bb2.scale(&sol[0]).add(&cb2.scale(&sol[1]));
    let c1c2 = r.eval(&c1.mul(&c2))?;
    let c2_on_q = q.eval(&c2.substitute(&to_q))?;
    // c₂(B₀) = c₂(𝒞)| − c₁(B₀)·N.
    let c2_c = inv.def("c2").expect("def").substitute(&restrict);
    let c2n = r.reduce(&c2_c.sub(&c1.mul(&n)));
    let c2_from_normal = (c2n.coeff(&[2, 0]), c2n.coeff(&[0, 2]));
    let arr = |v: Vec<BigRational>| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()];
    Ok(B0Check {
        ring: arr(ring),
        oracle: arr(oracle),
        adjunction,
        q_adjunction,
        c2: (sol[0].clone(), sol[1].clone()),
        c2_from_normal,
        c1c2,
        c2_on_q,
    })
}

/// Degree on the compactification of C₀^k·B₁^a·B₂^b·B₃^c (k ≥ 1), computed
/// on C₀ ≅ (P¹)³ with C₀|_{C₀} = N and Bᵢ|_{C₀} = Dᵢ.
pub fn cusp_product(k: u32, a: [u32; 3]) -> Result<BigRational, ChowError> {
    if k == 0 {
        return Err(ChowError::Mismatch("at least one cusp factor is needed".into()));
    }
    let r = cusp_ring();
    let mut p = r.def("N").cloned().expect("def").pow(k - 1);
    for (i, &e) in a.iter().enumerate() {
        p = p.mul(&Poly::var(3, i).pow(e));
    }
    r.eval(&p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspNumbers {
    pub c0_b1b2b3: BigRational,
    pub c0_bi2_bj: BigRational,
    pub c0_bi3: BigRational,
    pub c0sq_bibj: BigRational,
    pub c0sq_bi2: BigRational,
    pub c0cube_bi: BigRational,
    pub c0_4: BigRational,
    pub chat4: BigRational,
    /// C₀·B̂ restricted to C₀ equals −3 times C₀² restricted.
    pub relation: bool,
}

pub fn cusp_numbers() -> Result<CuspNumbers, ChowError> {
    let r = cusp_ring();
    let c0_4 = cusp_product(4, [0, 0, 0])?;
    // Each Dᵢ is the restriction of the three boundary divisors of a triple.
    let bhat = r.parse("3(D1+D2+D3)")?;
    let n = r.def("N").cloned().expect("def");
    Ok(CuspNumbers {
        c0_b1b2b3: cusp_product(1, [1, 1, 1])?,
        c0_bi2_bj: cusp_product(1, [2, 1, 0])?,
        c0_bi3: cusp_product(1, [3, 0, 0])?,
        c0sq_bibj: cusp_product(2, [1, 1, 0])?,
        c0sq_bi2: cusp_product(2, [2, 0, 0])?,
        c0cube_bi: cusp_product(3, [1, 0, 0])?,
        chat4: &c0_4 * int(40),
        c0_4,
        relation: bhat.add(&n.scale(&int(3))).is_zero(),
    })
}

/// The five invariant quartic numbers rebuilt from B₀ (36 copies) and the
/// cusps (40 copies).
pub fn quartics_from_restrictions() -> Result<[BigRational; 5], ChowError> {
    let r = b0_ring();
    let e = |s: &str| r.eval_str(s).map(|v| v * int(36));
    Ok([e("Bhat^3")?, e("Bhat^2 Cb")?, e("Bhat Cb^2")?, e("Cb^3")?, cusp_numbers()?.chat4])
}

/// c₃ = xB̂³ + yĈ³ recovered from c₃·B₀ and c₃·C₀.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C3Check {
    pub on_b0: BigRational,
    pub on_c0: BigRational,
    pub coefficients: (BigRational, BigRational),
}

pub const EULER_B0: i64 = 34;

pub fn c3_check() -> Result<C3Check, ChowError> {
    let r = b0_ring();
    let b = b0_check()?;
    // c₃(𝒞)·B₀ = c₃(B₀) + c₂(B₀)·N.
    let c2 = r.parse("Bb^2")?.scale(&b.c2.0).add(&r.parse("Cb^2")?.scale(&b.c2.1));
    let on_b0 = int(EULER_B0) + r.eval(&c2.mul(r.def("N").expect("def")))?;
    // c₃(𝒞)·C₀ = c₃(C₀) + c₂(C₀)·N with c((P¹)³) = Π(1+2Dᵢ).
    let c = cusp_ring();
    let on_c0 = c.eval_str("8 D1 D2 D3")? + c.eval(&c.parse("4(D1 D2 + D1 D3 + D2 D3)")?.mul(c.def("N").expect("def")))?;
    let inv = inv_ring();
    let m = ExactMatrix::from_fn(2, 2, |i, j| {
        let (num, den) = match (i, j) {
            (0, 0) => ("B^4", 36),
            (0, 1) => ("BC^3", 36),
            (1, 0) => ("B^3C", 40),
            _ => ("C^4", 40),
        };
        inv.eval_str(num).expect("inv value") / int(den)
    });
    let sol = solve(&m, &[on_b0.clone(), on_c0.clone()]).map_err(|e| ChowError::Mismatch(e.to_string()))?;
    Ok(C3Check { on_b0, on_c0, coefficients: (sol[0].clone(), sol[1].clone()) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TritangentCheck {
    pub canonical_forms_agree: bool,
    pub hyperplane_restriction: bool,
}

pub fn tritangent_check() -> Result<TritangentCheck, ChowError> {
    let r = t0_ring();
    let same = |a: &str, b: &str| -> Result<bool, ChowError> { Ok(r.reduce(&r.parse(a)?.sub(&r.parse(b)?)).is_zero()) };
    Ok(TritangentCheck {
        canonical_forms_agree: same("-Bti/3", "-4Hw + 2Bte + Ct")?,
        hyperplane_restriction: same("(Bti + 2Bte + 3Ct)/4", "3Hw - Bte")?,
    })
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}: generators {}", self.name, self.gens.join(", "))?;
        for r in &self.rules {
            let mut l = Poly::zero(self.gens.len());
            l.add_term(r.lhs.clone(), BigRational::one());
            writeln!(f, "  {} -> {}", self.display(&l), self.display(&r.rhs))?;
        }
        for (m, v) in &self.table {
            let mut l = Poly::zero(self.gens.len());
            l.add_term(m.clone(), BigRational::one());
            writeln!(f, "  {} = {}", self.display(&l), v)?;
        }
        for (n, p) in &self.defs {
            writeln!(f, "  {} := {}", n, self.display(p))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn invariant_table() {
        let r = inv_ring();
        let t = quartic_table(&r).unwrap();
        assert_eq!(t, [int(-12528), int(6480), int(-2160), int(720), int(-240)]);
        // Mixed values come from C⁴ and the relation alone.
        let c4 = int(-240);
        assert_eq!(t[1], int(-27) * &c4);
        assert_eq!(t[2], int(9) * &c4);
        assert_eq!(t[3], int(-3) * &c4);
        assert_eq!(r.eval_str("H^4").unwrap(), int(27));
    }

    #[test]
    fn todd_and_riemann_roch() {
        let r = inv_ring();
        let t = todd4(&r).unwrap();
        assert_eq!((t.c1_4, t.c1sq_c2, t.c2_2, t.c1c3), (int(-213), int(54), int(108), int(238)));
        assert_eq!(t.td4, int(1));
        let rr = riemann_roch(&r).unwrap();
        assert_eq!((rr.h4.clone(), rr.h3c1.clone(), rr.h2_c1sq_c2.clone(), rr.h_c1c2.clone()), (int(27), int(27), int(81), int(54)));
        assert_eq!(rr.coefficients, [rat(9, 8), rat(9, 4), rat(27, 8), rat(9, 4), int(1)]);
        assert_eq!((rr.at(0), rr.at(1), rr.at(2)), (int(1), int(10), int(55)));
        assert_eq!(r.eval_str("c1^4").unwrap(), r.eval_str("(B^2+7C^2)^2/256").unwrap());
    }

    #[test]
    fn b0_values_and_oracle() {
        let b = b0_check().unwrap();
        let expect = [int(-165), int(180), int(-60), int(20)];
        assert_eq!(b.ring, expect);
        assert_eq!(b.oracle, expect);
        assert!(b.adjunction && b.q_adjunction);
        assert_eq!(b.c2, (rat(4, 25), rat(-36, 25)));
        assert_eq!(b.c2_from_normal, b.c2);
        assert_eq!(b.c1c2, int(24));
        assert_eq!(b.c2_on_q, int(0));
    }

    #[test]
    fn cusp_values() {
        let c = cusp_numbers().unwrap();
        assert_eq!(c.c0_b1b2b3, int(1));
        assert_eq!(c.c0_bi2_bj, int(0));
        assert_eq!(c.c0_bi3, int(0));
        assert_eq!(c.c0sq_bibj, int(-1));
        assert_eq!(c.c0sq_bi2, int(0));
        assert_eq!(c.c0cube_bi, int(2));
        assert_eq!(c.c0_4, int(-6));
        assert_eq!(c.chat4, int(-240));
        assert!(c.relation);
    }

    #[test]
    fn quartics_from_b0_match_table() {
        assert_eq!(quartics_from_restrictions().unwrap(), quartic_table(&inv_ring()).unwrap());
    }

    #[test]
    fn third_chern_class() {
        let c = c3_check().unwrap();
        assert_eq!((c.on_b0.clone(), c.on_c0.clone()), (int(22), int(-4)));
        assert_eq!(c.coefficients, (rat(13, 288), rat(181, 96)));
        let inv = inv_ring();
        let c3 = inv.def("c3").unwrap();
        assert_eq!(c3.coeff(&[3, 0]), rat(13, 288));
    }

    #[test]
    fn tritangent_relations() {
        let t = tritangent_check().unwrap();
        assert!(t.canonical_forms_agree && t.hyperplane_restriction);
    }

    #[test]
    fn confluence() {
        for name in RING_NAMES {
            let r = ring_by_name(name).unwrap();
            assert!(r.check_confluence(r.top_degree()).is_ok(), "{name}");
        }
        assert!(matches!(ring_by_name("x"), Err(ChowError::UnknownRing(_))));
    }

    #[test]
    fn non_confluent_system_is_detected() {
        let r = RingSpec::new("bad", &["x", "y"], 2).with_rule("xy", "x^2").with_rule("x^2", "y^2").with_rule("xy", "0");
        assert!(r.check_confluence(2).is_err());
    }

    #[test]
    fn v_ring_values() {
        let v = v_ring();
        assert_eq!(v.eval_str("(5l-3c)^2").unwrap(), int(-11));
        assert_eq!(v.eval_str("c^2").unwrap(), int(-4));
        assert_eq!(v.eval_str("e1e2").unwrap(), int(0));
    }

    #[test]
    fn parser() {
        let r = inv_ring();
        assert_eq!(r.parse("BC").unwrap(), r.parse("B*C").unwrap());
        assert_eq!(r.parse("BC^2").unwrap(), r.parse("B C C").unwrap());
        assert_eq!(r.parse("-B^2").unwrap(), r.parse("(-1)B^2").unwrap());
        assert_eq!(r.parse("13/288B").unwrap(), r.parse("B*13/288").unwrap());
        assert!(matches!(r.parse("X"), Err(ChowError::UnknownSymbol(_))));
        assert!(matches!(r.parse("B/C"), Err(ChowError::NonScalarDivision)));
        assert!(matches!(r.parse("B/0"), Err(ChowError::DivisionByZero)));
        assert!(matches!(r.parse("(B"), Err(ChowError::Parse { .. })));
        assert!(matches!(r.eval_str("B^3"), Err(ChowError::NotTopDegree(4))));
        assert!(matches!(t0_ring().eval_str("Hw"), Err(ChowError::NoEvaluation(_))));
        assert_eq!(r.display(&r.reduce(&r.parse("B^2C").unwrap())), "9*C^3");
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(a in 0u32..5, b in 0u32..5, c in -20i64..20) {
            let r = inv_ring();
            let mut p = Poly::zero(2);
            p.add_term(vec![a, b], int(c));
            let once = r.reduce(&p);
            prop_assert_eq!(r.reduce(&once), once);
        }

        #[test]
        fn evaluation_is_linear(x in -50i64..50, y in -50i64..50) {
            let r = inv_ring();
            let p = r.parse("B^3C").unwrap().scale(&int(x)).add(&r.parse("H^4").unwrap().scale(&int(y)));
            prop_assert_eq!(r.eval(&p).unwrap(), int(6480 * x + 27 * y));
        }
    }
}
