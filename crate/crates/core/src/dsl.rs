//! Textual forms for sets, ideals, sequences, ordinals, maps and operators,
//! with a round-tripping printer: parsing the printed form of a normal-form
//! value yields a structurally equal value.
//!
//! Set forms: `fin{1,2,3}`, `cofin{}`, `ap(0,2)`, `pts{(0,17)}`,
//! `cols(fin{3}, cofin{})`, `patch{1: fin{2}}`, `graph(2n+1, cofin{})`,
//! `qfin{1/2,-3/1}`, `asc(1,1/2)`, `desc(0,2)`, `ordsum[(0,1): qfin{1/2}]`,
//! `U[...]` (parts must be pairwise disjoint). Empty sets over product
//! domains carry a domain suffix: `pts{}@(N*N)`.
//!
//! Ideal forms: `FIN`, `POW` (optionally `FIN@(N*N)`), `WO`, `WOREV`,
//! `P[w^2*3+w+1]`, `Q[0]`, `JOIN(I,J)`, `SUM(I)`, `FUBINI(I,J)`, `PERP(I)`,
//! `RESTRICT(I, set)`, `DSUM([I,...], tail)`.
//!
//! Sequences: `seq[1*chi(ap(0,2)) + 1/2*chi(graph(n, cofin{}))]`, zero as
//! `seq[]@N`. Maps: `id`, `perm{0->1,1->0}`, `pairenc`, `pairdec`,
//! `embed(3)@N`, `negq`, `comp(f,g)`. Operators: `op(map)` or
//! `op(map, neg=set)`.

use num_bigint::BigInt;

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::ideal::{IdealExpr, Node};
use crate::index_map::IndexMap;
use crate::op::IndexOp;
use crate::ordinal::OrdinalCnf;
use crate::rat::Rat;
use crate::seq::SimpleSeq;
use crate::set_expr::{Body, OrdPart, SetExpr};

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

fn print_rat(q: &Rat) -> String {
    crate::rat::rat_to_string(q)
}

/// Rational literal inside point lists: always `p/q`, so the parser can tell
/// rational points from naturals.
fn print_rat_point(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn print_point_lit(p: &Point) -> String {
    match p {
        Point::Nat(n) => n.to_string(),
        Point::Pair(n, inner) => format!("({},{})", n, print_point_lit(inner)),
        Point::Rat(q) => print_rat_point(q),
    }
}

pub fn print_domain(d: &Domain) -> String {
    d.to_string()
}

pub fn print_set(e: &SetExpr) -> String {
    match e.body() {
        Body::FinSet(v) => format!(
            "fin{{{}}}",
            v.iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        Body::CoFin(v) => format!(
            "cofin{{{}}}",
            v.iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        Body::Ap { offset, stride } => format!("ap({offset},{stride})"),
        Body::FinPoints(v) => {
            if v.is_empty() {
                format!("pts{{}}@{}", print_domain(e.domain()))
            } else {
                format!(
                    "pts{{{}}}",
                    v.iter()
                        .map(|(n, p)| format!("({},{})", n, print_point_lit(p)))
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        }
        Body::Cols(s, t) => format!("cols({}, {})", print_set(s), print_set(t)),
        Body::Patch(entries) => format!(
            "patch{{{}}}",
            entries
                .iter()
                .map(|(n, t)| format!("{}: {}", n, print_set(t)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Body::Graph {
            slope,
            intercept,
            rows,
        } => {
            let affine = match (slope, intercept) {
                (0, b) => b.to_string(),
                (1, 0) => "n".to_string(),
                (1, b) => format!("n+{b}"),
                (a, 0) => format!("{a}n"),
                (a, b) => format!("{a}n+{b}"),
            };
            format!("graph({}, {})", affine, print_set(rows))
        }
        Body::FinRat(v) => format!(
            "qfin{{{}}}",
            v.iter().map(print_rat_point).collect::<Vec<_>>().join(",")
        ),
        Body::AscSeq { limit, scale } => format!("asc({}, {})", print_rat(limit), print_rat(scale)),
        Body::DescSeq { limit, scale } => {
            format!("desc({}, {})", print_rat(limit), print_rat(scale))
        }
        Body::OrdSum(parts) => format!(
            "ordsum[{}]",
            parts
                .iter()
                .map(|p| format!(
                    "({},{}): {}",
                    print_rat(&p.lo),
                    print_rat(&p.hi),
                    print_set(&p.part)
                ))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Body::Union(parts) => format!(
            "U[{}]",
            parts.iter().map(print_set).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn print_ordinal(a: &OrdinalCnf) -> String {
    a.to_string()
}

pub fn print_ideal(i: &IdealExpr) -> String {
    match i.node() {
        Node::Fin => {
            if i.domain() == &Domain::Nat {
                "FIN".into()
            } else {
                format!("FIN@{}", print_domain(i.domain()))
            }
        }
        Node::Pow => {
            if i.domain() == &Domain::Nat {
                "POW".into()
            } else {
                format!("POW@{}", print_domain(i.domain()))
            }
        }
        Node::Wo => "WO".into(),
        Node::WoRev => "WOREV".into(),
        Node::CatalogP(a) => format!("P[{}]", print_ordinal(a)),
        Node::CatalogQ(a) => format!("Q[{}]", print_ordinal(a)),
        Node::Join(l, r) => format!("JOIN({}, {})", print_ideal(l), print_ideal(r)),
        Node::OmegaSum(b) => format!("SUM({})", print_ideal(b)),
        Node::DirectSumList(blocks, tail) => format!(
            "DSUM([{}], {})",
            blocks
                .iter()
                .map(print_ideal)
                .collect::<Vec<_>>()
                .join(", "),
            print_ideal(tail)
        ),
        Node::Fubini(l, r) => format!("FUBINI({}, {})", print_ideal(l), print_ideal(r)),
        Node::Perp(inner) => format!("PERP({})", print_ideal(inner)),
        Node::Restrict(inner, a) => {
            format!("RESTRICT({}, {})", print_ideal(inner), print_set(a))
        }
    }
}

pub fn print_seq(x: &SimpleSeq) -> String {
    if x.is_zero() {
        return format!("seq[]@{}", print_domain(x.domain()));
    }
    let mut out = String::from("seq[");
    for (i, (c, r)) in x.terms().iter().enumerate() {
        let neg = c < &Rat::from_integer(0.into());
        let mag = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&format!("{}*chi({})", print_rat(&mag), print_set(r)));
    }
    out.push(']');
    out
}

pub fn print_map(m: &IndexMap) -> String {
    match m {
        IndexMap::Identity(d) => {
            if d == &Domain::Nat {
                "id".into()
            } else {
                format!("id@{}", print_domain(d))
            }
        }
        IndexMap::FinPerm(pairs) => format!(
            "perm{{{}}}",
            pairs
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect::<Vec<_>>()
                .join(",")
        ),
        IndexMap::PairEncode => "pairenc".into(),
        IndexMap::PairDecode => "pairdec".into(),
        IndexMap::BlockEmbed { block, inner } => {
            if inner == &Domain::Nat {
                format!("embed({block})")
            } else {
                format!("embed({block})@{}", print_domain(inner))
            }
        }
        IndexMap::NegateRat => "negq".into(),
        IndexMap::Compose(maps) => format!(
            "comp({})",
            maps.iter().map(print_map).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn print_op(t: &IndexOp) -> String {
    if t.has_negative_part() {
        format!(
            "op({}, neg={})",
            print_map(t.map()),
            print_set(t.negative_part())
        )
    } else {
        format!("op({})", print_map(t.map()))
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
    Arrow, // ->
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|x| x.checked_add(v as u64))
                            .ok_or_else(|| Error::ParseError {
                                line: tline,
                                col: tcol,
                                message: "number literal overflows".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Num(n),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Ident(s),
                    line: tline,
                    col: tcol,
                });
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(Lexed {
                        tok: Tok::Arrow,
                        line: tline,
                        col: tcol,
                    });
                } else {
                    out.push(Lexed {
                        tok: Tok::Sym('-'),
                        line: tline,
                        col: tcol,
                    });
                }
            }
            '{' | '}' | '(' | ')' | '[' | ']' | ',' | ':' | '+' | '*' | '/' | '^' | '@' | '=' => {
                chars.next();
                col += 1;
                out.push(Lexed {
                    tok: Tok::Sym(c),
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(Error::ParseError {
                    line,
                    col,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Cursor {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Cursor {
    fn new(input: &str) -> Result<Cursor> {
        Ok(Cursor {
            toks: lex(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|l| (l.line, l.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, expected: &str) -> Error {
        let (line, col) = self.here();
        let got = match self.peek() {
            Some(Tok::Ident(s)) => format!("'{s}'"),
            Some(Tok::Num(n)) => format!("'{n}'"),
            Some(Tok::Sym(c)) => format!("'{c}'"),
            Some(Tok::Arrow) => "'->'".into(),
            None => "end of input".into(),
        };
        Error::ParseError {
            line,
            col,
            message: format!("expected {expected}, found {got}"),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
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
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn eat_ident(&mut self, s: &str) -> bool {
        if self.peek() == Some(&Tok::Ident(s.to_string())) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_num(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    // -- shared literals --

    fn rational(&mut self) -> Result<Rat> {
        let neg = self.eat_sym('-');
        let num = self.expect_num()?;
        let den = if self.eat_sym('/') {
            self.expect_num()?
        } else {
            1
        };
        if den == 0 {
            return Err(self.error("a nonzero denominator"));
        }
        let mut q = Rat::new(BigInt::from(num), BigInt::from(den));
        if neg {
            q = -q;
        }
        Ok(q)
    }

    fn domain(&mut self) -> Result<Domain> {
        if self.eat_ident("N") {
            Ok(Domain::Nat)
        } else if self.eat_ident("Q") {
            Ok(Domain::Rat)
        } else if self.eat_sym('(') {
            if !self.eat_ident("N") {
                return Err(self.error("'N' on the left of '*'"));
            }
            self.expect_sym('*')?;
            let inner = self.domain()?;
            self.expect_sym(')')?;
            Ok(Domain::prod(inner))
        } else {
            Err(self.error("a domain (N, Q or (N*D))"))
        }
    }

    /// A point literal: nat, (n, point), or p/q (sign or slash marks ℚ).
    fn point(&mut self) -> Result<Point> {
        if self.eat_sym('(') {
            let n = self.expect_num()?;
            self.expect_sym(',')?;
            let inner = self.point()?;
            self.expect_sym(')')?;
            return Ok(Point::pair(n, inner));
        }
        if self.peek() == Some(&Tok::Sym('-')) {
            return Ok(Point::Rat(self.rational()?));
        }
        let n = self.expect_num()?;
        if self.eat_sym('/') {
            let den = self.expect_num()?;
            if den == 0 {
                return Err(self.error("a nonzero denominator"));
            }
            return Ok(Point::Rat(Rat::new(BigInt::from(n), BigInt::from(den))));
        }
        Ok(Point::Nat(n))
    }

    fn nat_list(&mut self) -> Result<Vec<u64>> {
        self.expect_sym('{')?;
        let mut out = Vec::new();
        if !self.eat_sym('}') {
            loop {
                out.push(self.expect_num()?);
                if self.eat_sym('}') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(out)
    }

    // -- sets --

    fn set(&mut self) -> Result<SetExpr> {
        if self.eat_ident("fin") {
            return Ok(SetExpr::fin_set(self.nat_list()?));
        }
        if self.eat_ident("cofin") {
            return Ok(SetExpr::cofin(self.nat_list()?));
        }
        if self.eat_ident("ap") {
            self.expect_sym('(')?;
            let a = self.expect_num()?;
            self.expect_sym(',')?;
            let b = self.expect_num()?;
            self.expect_sym(')')?;
            return SetExpr::ap(a, b);
        }
        if self.eat_ident("pts") {
            self.expect_sym('{')?;
            let mut pts = Vec::new();
            if !self.eat_sym('}') {
                loop {
                    self.expect_sym('(')?;
                    let n = self.expect_num()?;
                    self.expect_sym(',')?;
                    let p = self.point()?;
                    self.expect_sym(')')?;
                    pts.push((n, p));
                    if self.eat_sym('}') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            if pts.is_empty() {
                self.expect_sym('@')?;
                let d = self.domain()?;
                let inner = d
                    .inner()
                    .ok_or_else(|| self.error("a product domain after '@'"))?
                    .clone();
                return SetExpr::fin_points(vec![], &inner);
            }
            let inner = pts[0].1.domain();
            return SetExpr::fin_points(pts, &inner);
        }
        if self.eat_ident("cols") {
            self.expect_sym('(')?;
            let s = self.set()?;
            self.expect_sym(',')?;
            let t = self.set()?;
            self.expect_sym(')')?;
            return SetExpr::cols(s, t);
        }
        if self.eat_ident("patch") {
            self.expect_sym('{')?;
            let mut entries = Vec::new();
            if !self.eat_sym('}') {
                loop {
                    let n = self.expect_num()?;
                    self.expect_sym(':')?;
                    let t = self.set()?;
                    entries.push((n, t));
                    if self.eat_sym('}') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            if entries.is_empty() {
                return Err(self.error("at least one patch entry"));
            }
            let inner = entries[0].1.domain().clone();
            return SetExpr::patch(entries, &inner);
        }
        if self.eat_ident("graph") {
            self.expect_sym('(')?;
            let (slope, intercept) = self.affine()?;
            self.expect_sym(',')?;
            let rows = self.set()?;
            self.expect_sym(')')?;
            return SetExpr::graph(slope, intercept, rows);
        }
        if self.eat_ident("qfin") {
            self.expect_sym('{')?;
            let mut qs = Vec::new();
            if !self.eat_sym('}') {
                loop {
                    qs.push(self.rational()?);
                    if self.eat_sym('}') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            return Ok(SetExpr::fin_rat(qs));
        }
        if self.eat_ident("asc") {
            self.expect_sym('(')?;
            let limit = self.rational()?;
            self.expect_sym(',')?;
            let scale = self.rational()?;
            self.expect_sym(')')?;
            return SetExpr::asc_seq(limit, scale);
        }
        if self.eat_ident("desc") {
            self.expect_sym('(')?;
            let limit = self.rational()?;
            self.expect_sym(',')?;
            let scale = self.rational()?;
            self.expect_sym(')')?;
            return SetExpr::desc_seq(limit, scale);
        }
        if self.eat_ident("ordsum") {
            self.expect_sym('[')?;
            let mut parts = Vec::new();
            if !self.eat_sym(']') {
                loop {
                    self.expect_sym('(')?;
                    let lo = self.rational()?;
                    self.expect_sym(',')?;
                    let hi = self.rational()?;
                    self.expect_sym(')')?;
                    self.expect_sym(':')?;
                    let part = self.set()?;
                    parts.push(OrdPart { lo, hi, part });
                    if self.eat_sym(']') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            return SetExpr::ord_sum(parts);
        }
        if self.eat_ident("U") {
            self.expect_sym('[')?;
            let mut parts = Vec::new();
            if !self.eat_sym(']') {
                loop {
                    parts.push(self.set()?);
                    if self.eat_sym(']') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            if parts.is_empty() {
                return Err(self.error("at least one union part"));
            }
            let domain = parts[0].domain().clone();
            return SetExpr::union_strict(parts, &domain);
        }
        Err(self.error("a set expression"))
    }

    /// Affine literal a·n+b: `2n+1`, `n`, `n+1`, `3n`, `7`.
    fn affine(&mut self) -> Result<(u64, u64)> {
        if self.eat_ident("n") {
            let b = if self.eat_sym('+') {
                self.expect_num()?
            } else {
                0
            };
            return Ok((1, b));
        }
        let first = self.expect_num()?;
        if self.eat_ident("n") {
            let b = if self.eat_sym('+') {
                self.expect_num()?
            } else {
                0
            };
            Ok((first, b))
        } else {
            Ok((0, first))
        }
    }

    // -- ordinals --

    fn ordinal(&mut self) -> Result<OrdinalCnf> {
        let mut terms: Vec<(u32, u64)> = Vec::new();
        loop {
            if self.eat_ident("w") {
                let exp = if self.eat_sym('^') {
                    let e = self.expect_num()?;
                    u32::try_from(e).map_err(|_| self.error("a small exponent"))?
                } else {
                    1
                };
                let coeff = if self.eat_sym('*') {
                    self.expect_num()?
                } else {
                    1
                };
                terms.push((exp, coeff));
            } else {
                let n = self.expect_num()?;
                if n > 0 {
                    terms.push((0, n));
                } else if !terms.is_empty() {
                    return Err(self.error("a positive finite part"));
                }
            }
            if !self.eat_sym('+') {
                break;
            }
        }
        OrdinalCnf::from_terms(terms).map_err(|e| {
            let (line, col) = self.here();
            match e {
                Error::ValidationError(msg) => Error::ParseError {
                    line,
                    col,
                    message: msg,
                },
                other => other,
            }
        })
    }

    // -- ideals --

    fn ideal(&mut self) -> Result<IdealExpr> {
        if self.eat_ident("FIN") {
            let d = if self.eat_sym('@') {
                self.domain()?
            } else {
                Domain::Nat
            };
            return Ok(IdealExpr::fin(d));
        }
        if self.eat_ident("POW") {
            let d = if self.eat_sym('@') {
                self.domain()?
            } else {
                Domain::Nat
            };
            return Ok(IdealExpr::pow(d));
        }
        if self.eat_ident("WO") {
            return Ok(IdealExpr::wo());
        }
        if self.eat_ident("WOREV") {
            return Ok(IdealExpr::wo_rev());
        }
        if self.eat_ident("P") {
            self.expect_sym('[')?;
            let a = self.ordinal()?;
            self.expect_sym(']')?;
            return IdealExpr::catalog_p(a);
        }
        if self.eat_ident("Q") {
            self.expect_sym('[')?;
            let a = self.ordinal()?;
            self.expect_sym(']')?;
            return IdealExpr::catalog_q(a);
        }
        if self.eat_ident("JOIN") {
            self.expect_sym('(')?;
            let l = self.ideal()?;
            self.expect_sym(',')?;
            let r = self.ideal()?;
            self.expect_sym(')')?;
            return IdealExpr::join(l, r);
        }
        if self.eat_ident("SUM") {
            self.expect_sym('(')?;
            let b = self.ideal()?;
            self.expect_sym(')')?;
            return Ok(IdealExpr::omega_sum(b));
        }
        if self.eat_ident("DSUM") {
            self.expect_sym('(')?;
            self.expect_sym('[')?;
            let mut blocks = Vec::new();
            if !self.eat_sym(']') {
                loop {
                    blocks.push(self.ideal()?);
                    if self.eat_sym(']') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            self.expect_sym(',')?;
            let tail = self.ideal()?;
            self.expect_sym(')')?;
            return IdealExpr::direct_sum(blocks, tail);
        }
        if self.eat_ident("FUBINI") {
            self.expect_sym('(')?;
            let l = self.ideal()?;
            self.expect_sym(',')?;
            let r = self.ideal()?;
            self.expect_sym(')')?;
            return IdealExpr::fubini(l, r);
        }
        if self.eat_ident("PERP") {
            self.expect_sym('(')?;
            let i = self.ideal()?;
            self.expect_sym(')')?;
            return Ok(IdealExpr::perp(i));
        }
        if self.eat_ident("RESTRICT") {
            self.expect_sym('(')?;
            let i = self.ideal()?;
            self.expect_sym(',')?;
            let a = self.set()?;
            self.expect_sym(')')?;
            return IdealExpr::restrict(i, a);
        }
        Err(self.error("an ideal expression"))
    }

    // -- sequences --

    fn seq(&mut self) -> Result<SimpleSeq> {
        if !self.eat_ident("seq") {
            return Err(self.error("'seq'"));
        }
        self.expect_sym('[')?;
        if self.eat_sym(']') {
            self.expect_sym('@')?;
            let d = self.domain()?;
            return Ok(SimpleSeq::zero(d));
        }
        let mut terms = Vec::new();
        let mut negate = self.eat_sym('-');
        loop {
            let mut c = self.rational()?;
            if negate {
                c = -c;
            }
            self.expect_sym('*')?;
            if !self.eat_ident("chi") {
                return Err(self.error("'chi'"));
            }
            self.expect_sym('(')?;
            let r = self.set()?;
            self.expect_sym(')')?;
            terms.push((c, r));
            if self.eat_sym(']') {
                break;
            }
            if self.eat_sym('+') {
                negate = false;
            } else if self.eat_sym('-') {
                negate = true;
            } else {
                return Err(self.error("'+', '-' or ']'"));
            }
        }
        let domain = terms[0].1.domain().clone();
        SimpleSeq::new(domain, terms)
    }

    // -- index maps and operators --

    fn map(&mut self) -> Result<IndexMap> {
        if self.eat_ident("id") {
            let d = if self.eat_sym('@') {
                self.domain()?
            } else {
                Domain::Nat
            };
            return Ok(IndexMap::Identity(d));
        }
        if self.eat_ident("perm") {
            self.expect_sym('{')?;
            let mut pairs = Vec::new();
            if !self.eat_sym('}') {
                loop {
                    let a = self.expect_num()?;
                    if self.bump() != Some(Tok::Arrow) {
                        return Err(self.error("'->'"));
                    }
                    let b = self.expect_num()?;
                    pairs.push((a, b));
                    if self.eat_sym('}') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            return IndexMap::fin_perm(pairs);
        }
        if self.eat_ident("pairenc") {
            return Ok(IndexMap::PairEncode);
        }
        if self.eat_ident("pairdec") {
            return Ok(IndexMap::PairDecode);
        }
        if self.eat_ident("embed") {
            self.expect_sym('(')?;
            let block = self.expect_num()?;
            self.expect_sym(')')?;
            let inner = if self.eat_sym('@') {
                self.domain()?
            } else {
                Domain::Nat
            };
            return Ok(IndexMap::BlockEmbed { block, inner });
        }
        if self.eat_ident("negq") {
            return Ok(IndexMap::NegateRat);
        }
        if self.eat_ident("comp") {
            self.expect_sym('(')?;
            let mut maps = Vec::new();
            loop {
                maps.push(self.map()?);
                if self.eat_sym(')') {
                    break;
                }
                self.expect_sym(',')?;
            }
            return IndexMap::compose(maps);
        }
        Err(self.error("an index map"))
    }

    fn op(&mut self) -> Result<IndexOp> {
        if !self.eat_ident("op") {
            return Err(self.error("'op'"));
        }
        self.expect_sym('(')?;
        let map = self.map()?;
        if self.eat_sym(',') {
            if !self.eat_ident("neg") {
                return Err(self.error("'neg'"));
            }
            self.expect_sym('=')?;
            let negative = self.set()?;
            self.expect_sym(')')?;
            return IndexOp::signed(map, negative);
        }
        self.expect_sym(')')?;
        Ok(IndexOp::composition(map))
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

pub fn parse_set(input: &str) -> Result<SetExpr> {
    let mut c = Cursor::new(input)?;
    let e = c.set()?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_ideal(input: &str) -> Result<IdealExpr> {
    let mut c = Cursor::new(input)?;
    let e = c.ideal()?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_seq(input: &str) -> Result<SimpleSeq> {
    let mut c = Cursor::new(input)?;
    let e = c.seq()?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_ordinal(input: &str) -> Result<OrdinalCnf> {
    let mut c = Cursor::new(input)?;
    let e = c.ordinal()?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_map(input: &str) -> Result<IndexMap> {
    let mut c = Cursor::new(input)?;
    let e = c.map()?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_op(input: &str) -> Result<IndexOp> {
    let mut c = Cursor::new(input)?;
    let e = c.op()?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_domain(input: &str) -> Result<Domain> {
    let mut c = Cursor::new(input)?;
    let e = c.domain()?;
    c.expect_end()?;
    Ok(e)
}

/// A sum of elementary tensors: `tens[seq[...] x (1,0), seq[...] x (0,1)]`.
pub fn parse_tensor(input: &str) -> Result<Vec<(SimpleSeq, Vec<Rat>)>> {
    let mut c = Cursor::new(input)?;
    if !c.eat_ident("tens") {
        return Err(c.error("'tens'"));
    }
    c.expect_sym('[')?;
    let mut out = Vec::new();
    loop {
        let x = c.seq()?;
        if !c.eat_ident("x") {
            return Err(c.error("'x'"));
        }
        c.expect_sym('(')?;
        let mut v = Vec::new();
        loop {
            v.push(c.rational()?);
            if c.eat_sym(')') {
                break;
            }
            c.expect_sym(',')?;
        }
        out.push((x, v));
        if c.eat_sym(']') {
            break;
        }
        c.expect_sym(',')?;
    }
    c.expect_end()?;
    Ok(out)
}

pub fn print_tensor(u: &[(SimpleSeq, Vec<Rat>)]) -> String {
    format!(
        "tens[{}]",
        u.iter()
            .map(|(x, v)| format!(
                "{} x ({})",
                print_seq(x),
                v.iter().map(print_rat).collect::<Vec<_>>().join(",")
            ))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// Convenience for building rationals in command arguments.
pub fn parse_rational(input: &str) -> Result<Rat> {
    let mut c = Cursor::new(input)?;
    let q = c.rational()?;
    c.expect_end()?;
    Ok(q)
}
