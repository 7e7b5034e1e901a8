//! Bundled datasets and parsers: cycle-notation permutations and factored
//! polynomial expressions in the notation of the published listings, plus
//! transcription-integrity validation.
//!
//! Dataset files are TOML with three sections: `[triple]` (cycle notation),
//! `[map]` (factored polynomial expressions), and `[expect]` (declared
//! invariants the transcription must satisfy). Validation never repairs a
//! discrepancy; it reports each finding verbatim.

use crate::belyi::{BelyiMapSpec, BranchAssignment, TripleLetter};
use crate::permgroup::{CycleType, PermError, Permutation};
use crate::qpoly::{FactoredPoly, UniPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

pub const BUILTIN_NAMES: [&str; 2] = ["hs-map-1", "hs-map-2"];

const HS_MAP_1: &str = include_str!("../data/hs-map-1.toml");
const HS_MAP_2: &str = include_str!("../data/hs-map-2.toml");

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("unknown dataset '{0}' (builtins: hs-map-1, hs-map-2)")]
    Unknown(String),
    #[error("TOML error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("in field '{field}': {err}")]
    Field { field: String, err: String },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn perr(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
    }
}

/// Parses cycle notation like `(1, 64, 8)(2, 20)`; unlisted points are
/// fixed, whitespace and newlines are insignificant.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut seen = vec![false; degree];
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(perr(pos, format!("expected '(' but found '{}'", bytes[pos] as char)));
        }
        pos += 1;
        let mut cycle: Vec<u32> = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == start {
                let found = bytes
                    .get(pos)
                    .map(|&b| (b as char).to_string())
                    .unwrap_or_else(|| "end of input".into());
                return Err(perr(pos, format!("expected a point label, found {found}")));
            }
            let label: u32 = text[start..pos]
                .parse()
                .map_err(|_| perr(start, "point label too large"))?;
            if label == 0 || label as usize > degree {
                return Err(perr(
                    start,
                    format!("point {label} out of range 1..={degree}"),
                ));
            }
            if seen[label as usize - 1] {
                return Err(perr(start, format!("repeated point {label}")));
            }
            seen[label as usize - 1] = true;
            cycle.push(label);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => {
                    pos += 1;
                }
                Some(b')') => {
                    pos += 1;
                    break;
                }
                Some(&b) => {
                    return Err(perr(pos, format!("expected ',' or ')', found '{}'", b as char)))
                }
                None => return Err(perr(pos, "unclosed cycle: expected ')'")),
            }
        }
        if cycle.len() < 2 {
            return Err(perr(pos, "cycles must list at least two points"));
        }
        cycles.push(cycle);
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| perr(0, e.to_string()))
}

/// Canonical cycle-notation printer (inverse of `parse_cycles` up to
/// whitespace).
pub fn print_cycles(p: &Permutation) -> String {
    p.to_string()
}

// ---------------------------------------------------------------------------
// Polynomial expression grammar:
//   expr    := ['-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ('^' uint)?
//   primary := uint ['X' ('^' uint)?]     (implicit product like 8X^3)
//            | 'X'
//            | '(' expr ')'
// The top-level product structure is preserved as a FactoredPoly.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Expr {
    Const(BigInt),
    Poly(UniPoly),
    Pow(Box<Expr>, u32),
    Prod(Vec<Expr>),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_is_x(&mut self) -> bool {
        // Adjacency check for implicit products: no whitespace skipping.
        self.text.as_bytes().get(self.pos) == Some(&b'X')
    }

    fn peek(&mut self) -> Result<(Tok, usize), ParseError> {
        let save = self.pos;
        let out = self.next()?;
        let at = self.pos;
        self.pos = save;
        Ok((out, at))
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        self.skip_ws();
        let bytes = self.text.as_bytes();
        if self.pos >= bytes.len() {
            return Ok(Tok::End);
        }
        let c = bytes[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'X' => Tok::X,
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n = BigInt::parse_bytes(self.text[start..self.pos].as_bytes(), 10)
                    .ok_or_else(|| perr(start, "bad integer"))?;
                return Ok(Tok::Int(n));
            }
            _ => return Err(perr(self.pos, format!("unexpected character '{}'", c as char))),
        };
        self.pos += 1;
        Ok(tok)
    }
}

struct PolyParser<'a> {
    lex: Lexer<'a>,
}

impl<'a> PolyParser<'a> {
    fn parse_uint(&mut self) -> Result<u32, ParseError> {
        let at = self.lex.pos;
        match self.lex.next()? {
            Tok::Int(n) => u32::try_from(n.clone())
                .map_err(|_| perr(at, format!("exponent {n} out of range"))),
            other => Err(perr(at, format!("expected an exponent, found {other:?}"))),
        }
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.lex.pos;
        match self.lex.next()? {
            Tok::Int(n) => {
                if self.lex.peek_is_x() {
                    // Implicit coefficient-times-X product like 8X^3.
                    self.lex.next()?; // consume X
                    let exp = if let (Tok::Caret, _) = self.lex.peek()? {
                        self.lex.next()?;
                        self.parse_uint()?
                    } else {
                        1
                    };
                    Ok(Expr::Prod(vec![
                        Expr::Const(n),
                        Expr::Pow(Box::new(Expr::Poly(UniPoly::x())), exp),
                    ]))
                } else {
                    Ok(Expr::Const(n))
                }
            }
            Tok::X => Ok(Expr::Poly(UniPoly::x())),
            Tok::LParen => {
                let inner = self.parse_expr()?;
                let at2 = self.lex.pos;
                match self.lex.next()? {
                    Tok::RParen => Ok(inner),
                    other => Err(perr(at2, format!("expected ')', found {other:?}"))),
                }
            }
            other => Err(perr(at, format!("expected a value, found {other:?}"))),
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_primary()?;
        if let (Tok::Caret, _) = self.lex.peek()? {
            self.lex.next()?;
            let e = self.parse_uint()?;
            // 8X^3 style primaries already bound their exponent to X; a
            // further ^ applies to the whole parenthesized value only.
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.parse_factor()?];
        while let (Tok::Star, _) = self.lex.peek()? {
            self.lex.next()?;
            factors.push(self.parse_factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(Expr::Prod(factors))
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut negate_first = false;
        if let (Tok::Minus, _) = self.lex.peek()? {
            self.lex.next()?;
            negate_first = true;
        }
        let first = self.parse_term()?;
        let mut acc = eval(&first);
        if negate_first {
            acc = acc.neg();
        }
        let mut terms = 1usize;
        loop {
            match self.lex.peek()? {
                (Tok::Plus, _) => {
                    self.lex.next()?;
                    acc = acc.add(&eval(&self.parse_term()?));
                    terms += 1;
                }
                (Tok::Minus, _) => {
                    self.lex.next()?;
                    acc = acc.sub(&eval(&self.parse_term()?));
                    terms += 1;
                }
                _ => break,
            }
        }
        if terms == 1 && !negate_first {
            Ok(first)
        } else {
            Ok(Expr::Poly(acc))
        }
    }
}

fn eval(e: &Expr) -> UniPoly {
    match e {
        Expr::Const(n) => UniPoly::constant(BigRational::from_integer(n.clone())),
        Expr::Poly(p) => p.clone(),
        Expr::Pow(b, e) => eval(b).pow(*e),
        Expr::Prod(fs) => {
            let mut acc = UniPoly::one();
            for f in fs {
                acc = acc.mul(&eval(f));
            }
            acc
        }
    }
}

/// Parses a factored polynomial expression, preserving the top-level
/// product structure: integer factors go into the constant, every
/// polynomial factor becomes a `(base, exponent)` pair.
pub fn parse_poly_expr(text: &str) -> Result<FactoredPoly, ParseError> {
    let mut parser = PolyParser {
        lex: Lexer::new(text),
    };
    let expr = parser.parse_expr()?;
    let at = parser.lex.pos;
    match parser.lex.next()? {
        Tok::End => {}
        other => return Err(perr(at, format!("trailing input: {other:?}"))),
    }
    let mut constant = BigRational::one();
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();
    let mut push = |e: &Expr, exp: u32, constant: &mut BigRational, factors: &mut Vec<(UniPoly, u32)>| {
        let p = eval(e);
        if let Some(0) = p.degree() {
            *constant *= p.coeff(0).pow(exp as i32);
        } else if p.is_zero() {
            *constant *= BigRational::zero();
        } else {
            factors.push((p, exp));
        }
    };
    match expr {
        Expr::Prod(fs) => {
            for f in fs {
                match f {
                    Expr::Pow(b, e) => push(&b, e, &mut constant, &mut factors),
                    other => push(&other, 1, &mut constant, &mut factors),
                }
            }
        }
        Expr::Pow(b, e) => push(&b, e, &mut constant, &mut factors),
        other => push(&other, 1, &mut constant, &mut factors),
    }
    Ok(FactoredPoly::new(constant, factors))
}

/// Canonical printer for the factored-expression grammar: explicit `*`,
/// explicit `^`, bases parenthesized with integer coefficients.
pub fn print_poly_expr(f: &FactoredPoly) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !f.constant.is_one() || f.factors.is_empty() {
        parts.push(rational_text(&f.constant));
    }
    for (base, e) in &f.factors {
        let body = poly_body_text(base);
        if *e == 1 {
            parts.push(format!("({body})"));
        } else {
            parts.push(format!("({body})^{e}"));
        }
    }
    parts.join(" * ")
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn poly_body_text(p: &UniPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mag_s = rational_text(&mag);
        match i {
            0 => out.push_str(&mag_s),
            1 if mag.is_one() => out.push('X'),
            1 => out.push_str(&format!("{mag_s}*X")),
            _ if mag.is_one() => out.push_str(&format!("X^{i}")),
            _ => out.push_str(&format!("{mag_s}*X^{i}")),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Dataset files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct RawDataset {
    name: String,
    triple: RawTriple,
    map: RawMap,
    expect: RawExpect,
}

#[derive(Deserialize)]
struct RawTriple {
    degree: usize,
    x: String,
    y: String,
    z: Option<String>,
}

#[derive(Deserialize)]
struct RawMap {
    p: String,
    q: String,
}

#[derive(Deserialize)]
struct RawExpect {
    cycle_type_x: String,
    cycle_type_y: String,
    cycle_type_z: String,
    over0: String,
    over1: String,
    overinf: String,
    group_order: u64,
    subdegrees: Vec<usize>,
    p_leading: String,
    q_leading: String,
    r_constant: Option<String>,
    r_simple_total: usize,
    r_double_total: usize,
    r_simple_factors: Option<Vec<usize>>,
    r_double_factors: Option<Vec<usize>>,
}

/// Declared expectations, parsed into exact values.
#[derive(Clone, Debug)]
pub struct Expectations {
    pub degree: usize,
    pub cycle_type_x: CycleType,
    pub cycle_type_y: CycleType,
    pub cycle_type_z: CycleType,
    pub assignment: BranchAssignment,
    pub group_order: u64,
    pub subdegrees: Vec<usize>,
    pub p_leading: BigRational,
    pub q_leading: BigRational,
    pub r_constant: Option<BigRational>,
    pub r_simple_total: usize,
    pub r_double_total: usize,
    pub r_simple_factors: Option<Vec<usize>>,
    pub r_double_factors: Option<Vec<usize>>,
}

/// A bundled or user-provided verification target: the permutation triple,
/// the factored map, and the declared expectations.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub name: String,
    pub x: Permutation,
    pub y: Permutation,
    pub z: Permutation,
    pub z_given: bool,
    pub map: BelyiMapSpec,
    pub expect: Expectations,
}

fn field_err(field: &str, err: impl std::fmt::Display) -> DatasetError {
    DatasetError::Field {
        field: field.to_string(),
        err: err.to_string(),
    }
}

fn parse_letter(field: &str, s: &str) -> Result<TripleLetter, DatasetError> {
    match s {
        "x" => Ok(TripleLetter::X),
        "y" => Ok(TripleLetter::Y),
        "z" => Ok(TripleLetter::Z),
        other => Err(field_err(field, format!("expected x, y or z, got '{other}'"))),
    }
}

fn parse_constant_expr(field: &str, s: &str) -> Result<BigRational, DatasetError> {
    let f = parse_poly_expr(s).map_err(|e| field_err(field, e))?;
    if !f.factors.is_empty() {
        return Err(field_err(field, "expected a constant expression"));
    }
    Ok(f.constant)
}

/// Loads a dataset from TOML text.
pub fn load_dataset(toml_text: &str) -> Result<Dataset, DatasetError> {
    let raw: RawDataset = toml::from_str(toml_text)?;
    let degree = raw.triple.degree;
    let x = parse_cycles(&raw.triple.x, degree).map_err(|e| field_err("triple.x", e))?;
    let y = parse_cycles(&raw.triple.y, degree).map_err(|e| field_err("triple.y", e))?;
    let (z, z_given) = match &raw.triple.z {
        Some(zs) => (
            parse_cycles(zs, degree).map_err(|e| field_err("triple.z", e))?,
            true,
        ),
        None => (x.compose(&y)?.inverse(), false),
    };
    let p_factored = parse_poly_expr(&raw.map.p).map_err(|e| field_err("map.p", e))?;
    let q_factored = parse_poly_expr(&raw.map.q).map_err(|e| field_err("map.q", e))?;

    let ct = |field: &str, s: &str| {
        CycleType::parse(s).map_err(|e| field_err(field, e))
    };
    let expect = Expectations {
        degree,
        cycle_type_x: ct("expect.cycle_type_x", &raw.expect.cycle_type_x)?,
        cycle_type_y: ct("expect.cycle_type_y", &raw.expect.cycle_type_y)?,
        cycle_type_z: ct("expect.cycle_type_z", &raw.expect.cycle_type_z)?,
        assignment: BranchAssignment {
            over_zero: parse_letter("expect.over0", &raw.expect.over0)?,
            over_one: parse_letter("expect.over1", &raw.expect.over1)?,
            over_infinity: parse_letter("expect.overinf", &raw.expect.overinf)?,
        },
        group_order: raw.expect.group_order,
        subdegrees: raw.expect.subdegrees,
        p_leading: parse_constant_expr("expect.p_leading", &raw.expect.p_leading)?,
        q_leading: parse_constant_expr("expect.q_leading", &raw.expect.q_leading)?,
        r_constant: raw
            .expect
            .r_constant
            .as_deref()
            .map(|s| parse_constant_expr("expect.r_constant", s))
            .transpose()?,
        r_simple_total: raw.expect.r_simple_total,
        r_double_total: raw.expect.r_double_total,
        r_simple_factors: raw.expect.r_simple_factors,
        r_double_factors: raw.expect.r_double_factors,
    };

    let assignment = expect.assignment;
    let type_of = |letter: TripleLetter| -> CycleType {
        match letter {
            TripleLetter::X => expect.cycle_type_x.clone(),
            TripleLetter::Y => expect.cycle_type_y.clone(),
            TripleLetter::Z => expect.cycle_type_z.clone(),
        }
    };
    let map = BelyiMapSpec {
        name: raw.name.clone(),
        degree,
        p_factored,
        q_factored,
        expected_r_constant: expect.r_constant.clone(),
        expected_type_over_zero: type_of(assignment.over_zero),
        expected_type_over_one: type_of(assignment.over_one),
        expected_type_over_infinity: type_of(assignment.over_infinity),
        expected_subdegrees: expect.subdegrees.clone(),
        r_simple_total: expect.r_simple_total,
        r_double_total: expect.r_double_total,
        r_simple_factors: expect.r_simple_factors.clone(),
        r_double_factors: expect.r_double_factors.clone(),
    };

    Ok(Dataset {
        name: raw.name,
        x,
        y,
        z,
        z_given,
        map,
        expect,
    })
}

/// Loads a bundled dataset by name.
pub fn load_builtin(name: &str) -> Result<Dataset, DatasetError> {
    match name {
        "hs-map-1" => load_dataset(HS_MAP_1),
        "hs-map-2" => load_dataset(HS_MAP_2),
        other => Err(DatasetError::Unknown(other.to_string())),
    }
}

/// Raw TOML text of a bundled dataset (used by mutation tests).
pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "hs-map-1" => Some(HS_MAP_1),
        "hs-map-2" => Some(HS_MAP_2),
        _ => None,
    }
}

/// One validation finding; an empty findings list means the transcription
/// is internally consistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub code: &'static str,
    pub message: String,
}

/// Transcription-integrity validation. Checks everything that can be
/// checked instantly; discrepancies are reported, never repaired.
pub fn validate_dataset(d: &Dataset) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut check = |ok: bool, code: &'static str, message: String| {
        if !ok {
            findings.push(Finding { code, message });
        }
    };

    let tx = d.x.cycle_type();
    let ty = d.y.cycle_type();
    let tz = d.z.cycle_type();
    check(
        tx == d.expect.cycle_type_x,
        "cycle-type-x",
        format!("x has cycle type {tx}, expected {}", d.expect.cycle_type_x),
    );
    check(
        ty == d.expect.cycle_type_y,
        "cycle-type-y",
        format!("y has cycle type {ty}, expected {}", d.expect.cycle_type_y),
    );
    check(
        tz == d.expect.cycle_type_z,
        "cycle-type-z",
        format!("z has cycle type {tz}, expected {}", d.expect.cycle_type_z),
    );
    match d.x.compose(&d.y) {
        Ok(xy) => {
            let recomputed = xy.inverse();
            check(
                recomputed == d.z,
                "triple-product",
                "z does not equal (x*y)^-1; the triple product x*y*z is not the identity"
                    .to_string(),
            );
        }
        Err(e) => check(false, "triple-degree", e.to_string()),
    }

    for (name, types) in [
        ("x", &d.expect.cycle_type_x),
        ("y", &d.expect.cycle_type_y),
        ("z", &d.expect.cycle_type_z),
    ] {
        check(
            types.degree() == d.expect.degree,
            "expected-type-degree",
            format!(
                "declared cycle type for {name} sums to {}, expected {}",
                types.degree(),
                d.expect.degree
            ),
        );
    }
    check(
        d.expect.subdegrees.iter().sum::<usize>() == d.expect.degree,
        "subdegree-sum",
        format!(
            "declared subdegrees sum to {}, expected {}",
            d.expect.subdegrees.iter().sum::<usize>(),
            d.expect.degree
        ),
    );

    let p = d.map.p_factored.expand();
    let q = d.map.q_factored.expand();
    check(
        p.degree() == Some(d.expect.degree),
        "p-degree",
        format!("expanded p has degree {:?}, expected {}", p.degree(), d.expect.degree),
    );
    check(
        q.degree() == Some(d.expect.degree),
        "q-degree",
        format!("expanded q has degree {:?}, expected {}", q.degree(), d.expect.degree),
    );
    check(
        p.leading_coeff() == d.expect.p_leading,
        "p-leading",
        format!(
            "expanded p has leading coefficient {}, expected {}",
            p.leading_coeff(),
            d.expect.p_leading
        ),
    );
    check(
        q.leading_coeff() == d.expect.q_leading,
        "q-leading",
        format!(
            "expanded q has leading coefficient {}, expected {}",
            q.leading_coeff(),
            d.expect.q_leading
        ),
    );
    check(
        d.map.p_factored.bases_pairwise_coprime(),
        "p-coprime-bases",
        "bases of p are not pairwise coprime".to_string(),
    );
    check(
        d.map.q_factored.bases_pairwise_coprime(),
        "q-coprime-bases",
        "bases of q are not pairwise coprime".to_string(),
    );
    let expected_r_degree = d.expect.r_simple_total + 2 * d.expect.r_double_total;
    check(
        expected_r_degree <= d.expect.degree,
        "r-degree-bookkeeping",
        format!(
            "declared simple+2*double degrees of p-q give {expected_r_degree} > degree {}",
            d.expect.degree
        ),
    );
    if let Some(fs) = &d.expect.r_simple_factors {
        check(
            fs.iter().sum::<usize>() == d.expect.r_simple_total,
            "r-simple-factors",
            format!(
                "declared simple factor degrees {fs:?} do not sum to {}",
                d.expect.r_simple_total
            ),
        );
    }
    if let Some(fs) = &d.expect.r_double_factors {
        check(
            fs.iter().sum::<usize>() == d.expect.r_double_total,
            "r-double-factors",
            format!(
                "declared double factor degrees {fs:?} do not sum to {}",
                d.expect.r_double_total
            ),
        );
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::big;

    #[test]
    fn parse_simple_transposition() {
        let p = parse_cycles("(1,2)", 3).unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.apply(3), 3);
    }

    #[test]
    fn parse_rejects_repeated_point() {
        let err = parse_cycles("(1,2)(2,3)", 3).unwrap_err();
        assert!(err.message.contains("repeated point 2"), "{err}");
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = parse_cycles("(1,7)", 3).unwrap_err();
        assert!(err.message.contains("out of range"), "{err}");
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_cycles("(1,2", 3).is_err());
        assert!(parse_cycles("(1 2)", 3).is_err());
        assert!(parse_cycles("1,2)", 3).is_err());
    }

    #[test]
    fn cycles_print_parse_roundtrip() {
        let p = parse_cycles("(1, 64, 8, 54, 37)(2, 20)", 100).unwrap();
        let printed = print_cycles(&p);
        let again = parse_cycles(&printed, 100).unwrap();
        assert_eq!(p, again);
        assert_eq!(print_cycles(&again), printed);
    }

    #[test]
    fn poly_single_base() {
        let f = parse_poly_expr("X^2 - 1").unwrap();
        assert_eq!(f.constant, big(1));
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 1);
        assert_eq!(f.expand(), UniPoly::from_int_coeffs(&[-1, 0, 1]));
    }

    #[test]
    fn poly_power_base() {
        let f = parse_poly_expr("(X+1)^3").unwrap();
        assert_eq!(f.factors, vec![(UniPoly::from_int_coeffs(&[1, 1]), 3)]);
        assert_eq!(f.expand(), UniPoly::from_int_coeffs(&[1, 3, 3, 1]));
    }

    #[test]
    fn poly_implicit_coefficient() {
        let f = parse_poly_expr("X^4 - 8X^3 - 6X^2 + 8X + 1").unwrap();
        assert_eq!(f.expand(), UniPoly::from_int_coeffs(&[1, 8, -6, -8, 1]));
    }

    #[test]
    fn poly_constant_product() {
        let f = parse_poly_expr("2^2 * 3^14 * 5^3").unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.constant, big(4) * big(4782969) * big(125));
    }

    #[test]
    fn poly_full_factored_form() {
        let f = parse_poly_expr("3^3 * (X^4 - 8X^3 - 6X^2 + 8X + 1)^5 * (3X^5 - 5X^4 - 5X^3 + 35X^2 + 40X + 4)").unwrap();
        assert_eq!(f.constant, big(27));
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.factors[0].1, 5);
        assert_eq!(f.factors[1].1, 1);
        assert_eq!(f.degree(), 25);
    }

    #[test]
    fn poly_syntax_error_positions() {
        let err = parse_poly_expr("(X+1").unwrap_err();
        assert!(err.message.contains("expected ')'"), "{err}");
        assert!(parse_poly_expr("X^").is_err());
        assert!(parse_poly_expr("X + * 2").is_err());
    }

    #[test]
    fn poly_print_parse_roundtrip() {
        let texts = [
            "2^2 * 3^14 * 5^3 * (X - 1)",
            "3^3 * (X^4 - 8X^3 - 6X^2 + 8X + 1)^5",
            "X^2 - 1",
            "(3X^5 - 35X^4 + 90X^3 - 50X^2 + 15X + 9)^2",
        ];
        for text in texts {
            let f = parse_poly_expr(text).unwrap();
            let printed = print_poly_expr(&f);
            let again = parse_poly_expr(&printed).unwrap();
            assert_eq!(f.expand(), again.expand(), "roundtrip failed for {text}");
            assert_eq!(printed, print_poly_expr(&again));
        }
    }

    #[test]
    fn builtin_datasets_load_and_validate() {
        for name in BUILTIN_NAMES {
            let d = load_builtin(name).unwrap();
            let findings = validate_dataset(&d);
            assert!(
                findings.is_empty(),
                "{name} has findings: {findings:#?}"
            );
            assert_eq!(d.expect.degree, 100);
        }
    }

    #[test]
    fn corrupted_copy_is_pinpointed() {
        // Change one label in x's first cycle: 64 -> 65. Point 65 then
        // appears twice, and the parser names it.
        let text = builtin_text("hs-map-1").unwrap();
        let corrupted = text.replacen("(1, 64, 8, 54, 37)", "(1, 65, 8, 54, 37)", 1);
        let err = load_dataset(&corrupted).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("triple.x"), "{msg}");
        assert!(msg.contains("65"), "{msg}");
    }

    #[test]
    fn corrupted_fixed_point_shifts_cycle_type() {
        // Swap a listed point for an unlisted fixed point: the permutation
        // stays valid but the cycle type check must flag it.
        let text = builtin_text("hs-map-1").unwrap();
        // 39 is a fixed point of x in the first listing; replace 37 with 39.
        let corrupted = text.replacen("(1, 64, 8, 54, 37)", "(1, 64, 8, 54, 39)", 1);
        let d = load_dataset(&corrupted).unwrap();
        let findings = validate_dataset(&d);
        assert!(
            findings.iter().any(|f| f.code == "cycle-type-x" || f.code == "triple-product"),
            "expected a finding, got {findings:?}"
        );
    }
}
