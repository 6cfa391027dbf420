//! One-variable arithmetic expressions.
//!
//! Germ and base functions are supplied as text (`"x^3 + x"`, `"2*x"`,
//! `"1/(x+1)"`) and parsed into an immutable tree that can be evaluated at any
//! abscissa. Precedence, tightest first: `^` (right-associative), unary `-`,
//! `*` `/`, `+` `-`. Recognized calls: `sin`, `cos`, `exp`, `log` (natural),
//! `sqrt`, `abs`.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Maximum polynomial degree `as_polynomial` will materialize.
const MAX_POLY_DEGREE: usize = 60;

/// Relative tolerance on second differences used by [`FunctionExpr::detect_affine`].
const AFFINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Expression node. Leaves are number literals and the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A parsed one-variable expression, immutable after construction and safe to
/// evaluate concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionExpr {
    root: Expr,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("`{name}` takes exactly one argument (at byte {offset})")]
    ArityMismatch { offset: usize, name: String },
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("log of non-positive value {arg} in `{context}` at x = {x}")]
    LogNonPositive { arg: f64, context: String, x: f64 },
    #[error("square root of negative value {arg} in `{context}` at x = {x}")]
    SqrtNegative { arg: f64, context: String, x: f64 },
    #[error("division by zero in `{context}` at x = {x}")]
    DivisionByZero { context: String, x: f64 },
    #[error("non-finite result from `{context}` at x = {x}")]
    NonFinite { context: String, x: f64 },
}

impl FunctionExpr {
    /// Parse `text` into an expression tree.
    pub fn parse(text: &str) -> Result<FunctionExpr, ParseError> {
        if text.trim().is_empty() {
            return Err(ParseError::Empty);
        }
        let mut p = Parser::new(text);
        let root = p.parse_expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(ParseError::Syntax {
                offset: p.pos,
                message: format!("unexpected `{}`", &text[p.pos..]),
            });
        }
        Ok(FunctionExpr { root })
    }

    /// Evaluate at `x`. Domain violations (log of a non-positive value,
    /// square root of a negative value, division by zero) and non-finite
    /// intermediates are reported with the offending subexpression.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval_node(&self.root, x)
    }

    /// Decide whether the expression is affine `p*x + q` on `(a, b)`.
    ///
    /// Probes five equally spaced points; if every second difference is below
    /// a relative tolerance of 1e-9 the slope/intercept pair is returned,
    /// otherwise `None`. Failure is conservative: anything that does not look
    /// affine under the probes is rejected.
    pub fn detect_affine(&self, a: f64, b: f64) -> Result<Option<(f64, f64)>, EvalError> {
        assert!(a < b, "probe interval must be non-degenerate");
        let h = (b - a) / 4.0;
        let mut ys = [0.0; 5];
        for (j, y) in ys.iter_mut().enumerate() {
            *y = self.eval(a + h * j as f64)?;
        }
        let scale = 1.0 + ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        let affine = (0..3).all(|k| (ys[k + 2] - 2.0 * ys[k + 1] + ys[k]).abs() <= AFFINE_TOL * scale);
        if !affine {
            return Ok(None);
        }
        let p = (ys[4] - ys[0]) / (b - a);
        let q = ys[0] - p * a;
        Ok(Some((p, q)))
    }

    /// Dense coefficient vector `[c0, c1, ...]` when the tree is a polynomial
    /// in `x` (only `+ - * ^` with non-negative integer exponents, plus
    /// division by nonzero constants). `None` otherwise.
    pub fn as_polynomial(&self) -> Option<Vec<f64>> {
        poly_of(&self.root)
    }

    /// The expression with `x` replaced by `-x`. Applying it twice returns a
    /// tree structurally equal to the original.
    pub fn reflect(&self) -> FunctionExpr {
        FunctionExpr {
            root: reflect_node(&self.root),
        }
    }

    /// Build `gamma*f + delta*g` as a tree.
    pub fn linear_combination(gamma: f64, f: &FunctionExpr, delta: f64, g: &FunctionExpr) -> FunctionExpr {
        let lhs = Expr::Bin(BinOp::Mul, Box::new(num(gamma)), Box::new(f.root.clone()));
        let rhs = Expr::Bin(BinOp::Mul, Box::new(num(delta)), Box::new(g.root.clone()));
        FunctionExpr {
            root: Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs)),
        }
    }

    /// Build `p*f + q` as a tree.
    pub fn affine_image(p: f64, q: f64, f: &FunctionExpr) -> FunctionExpr {
        let scaled = Expr::Bin(BinOp::Mul, Box::new(num(p)), Box::new(f.root.clone()));
        FunctionExpr {
            root: Expr::Bin(BinOp::Add, Box::new(scaled), Box::new(num(q))),
        }
    }
}

impl FromStr for FunctionExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionExpr::parse(s)
    }
}

/// Literal node for a signed constant; negatives become `Neg(Num(..))` so the
/// printed form re-parses to the same tree.
fn num(c: f64) -> Expr {
    assert!(c.is_finite(), "expression literals must be finite");
    if c < 0.0 {
        Expr::Neg(Box::new(Expr::Num(-c)))
    } else {
        Expr::Num(c)
    }
}

fn eval_node(e: &Expr, x: f64) -> Result<f64, EvalError> {
    match e {
        Expr::Num(c) => Ok(*c),
        Expr::Var => Ok(x),
        Expr::Neg(inner) => Ok(-eval_node(inner, x)?),
        Expr::Bin(op, l, r) => {
            let lv = eval_node(l, x)?;
            let rv = eval_node(r, x)?;
            let v = match op {
                BinOp::Add => lv + rv,
                BinOp::Sub => lv - rv,
                BinOp::Mul => lv * rv,
                BinOp::Div => {
                    if rv == 0.0 {
                        return Err(EvalError::DivisionByZero {
                            context: render(e),
                            x,
                        });
                    }
                    lv / rv
                }
                BinOp::Pow => lv.powf(rv),
            };
            if !v.is_finite() {
                return Err(EvalError::NonFinite {
                    context: render(e),
                    x,
                });
            }
            Ok(v)
        }
        Expr::Call(f, arg) => {
            let a = eval_node(arg, x)?;
            let v = match f {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(EvalError::LogNonPositive {
                            arg: a,
                            context: render(e),
                            x,
                        });
                    }
                    a.ln()
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(EvalError::SqrtNegative {
                            arg: a,
                            context: render(e),
                            x,
                        });
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
            };
            if !v.is_finite() {
                return Err(EvalError::NonFinite {
                    context: render(e),
                    x,
                });
            }
            Ok(v)
        }
    }
}

fn reflect_node(e: &Expr) -> Expr {
    match e {
        Expr::Num(c) => Expr::Num(*c),
        Expr::Var => Expr::Neg(Box::new(Expr::Var)),
        Expr::Neg(inner) => match reflect_node(inner) {
            Expr::Neg(doubled) => *doubled,
            other => Expr::Neg(Box::new(other)),
        },
        Expr::Bin(op, l, r) => Expr::Bin(*op, Box::new(reflect_node(l)), Box::new(reflect_node(r))),
        Expr::Call(f, arg) => Expr::Call(*f, Box::new(reflect_node(arg))),
    }
}

fn trim_poly(mut c: Vec<f64>) -> Vec<f64> {
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    c
}

fn poly_of(e: &Expr) -> Option<Vec<f64>> {
    let c = match e {
        Expr::Num(c) => vec![*c],
        Expr::Var => vec![0.0, 1.0],
        Expr::Neg(inner) => poly_of(inner)?.into_iter().map(|c| -c).collect(),
        Expr::Bin(BinOp::Add, l, r) => poly_add(&poly_of(l)?, &poly_of(r)?, 1.0),
        Expr::Bin(BinOp::Sub, l, r) => poly_add(&poly_of(l)?, &poly_of(r)?, -1.0),
        Expr::Bin(BinOp::Mul, l, r) => poly_mul(&poly_of(l)?, &poly_of(r)?)?,
        Expr::Bin(BinOp::Div, l, r) => {
            let den = trim_poly(poly_of(r)?);
            if den.len() != 1 || den[0] == 0.0 {
                return None;
            }
            poly_of(l)?.into_iter().map(|c| c / den[0]).collect()
        }
        Expr::Bin(BinOp::Pow, l, r) => {
            let exp = trim_poly(poly_of(r)?);
            if exp.len() != 1 || exp[0] < 0.0 || exp[0].fract() != 0.0 || exp[0] > MAX_POLY_DEGREE as f64 {
                return None;
            }
            let base = poly_of(l)?;
            let mut acc = vec![1.0];
            for _ in 0..exp[0] as usize {
                acc = poly_mul(&acc, &base)?;
            }
            acc
        }
        Expr::Call(..) => return None,
    };
    Some(trim_poly(c))
}

fn poly_add(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += sign * c;
    }
    out
}

fn poly_mul(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let a = trim_poly(a.to_vec());
    let b = trim_poly(b.to_vec());
    if a.len() + b.len() > MAX_POLY_DEGREE + 2 {
        return None;
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    Some(out)
}

/// Exact integral of a coefficient vector over `[a, b]`, via the antiderivative
/// evaluated with Horner's scheme.
pub(crate) fn integrate_polynomial(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let anti = |t: f64| -> f64 {
        let mut acc = 0.0;
        for (k, c) in coeffs.iter().enumerate().rev() {
            acc = acc * t + c / (k + 1) as f64;
        }
        acc * t
    };
    anti(b) - anti(a)
}

// ---------------------------------------------------------------------------
// printing

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(..) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        Expr::Num(..) | Expr::Var | Expr::Call(..) => 5,
    }
}

fn render(e: &Expr) -> String {
    let mut s = String::new();
    write_node(&mut s, e).expect("string formatting cannot fail");
    s
}

fn write_node(out: &mut String, e: &Expr) -> fmt::Result {
    use fmt::Write;
    match e {
        Expr::Num(c) => write!(out, "{c}"),
        Expr::Var => write!(out, "x"),
        Expr::Neg(inner) => {
            write!(out, "-")?;
            write_child(out, inner, prec(inner) < 4)
        }
        Expr::Bin(op, l, r) => {
            let (sym, p) = match op {
                BinOp::Add => (" + ", 1),
                BinOp::Sub => (" - ", 1),
                BinOp::Mul => ("*", 2),
                BinOp::Div => ("/", 2),
                BinOp::Pow => ("^", 4),
            };
            if *op == BinOp::Pow {
                // Right-associative: parenthesize any non-atomic left child.
                write_child(out, l, prec(l) < 5)?;
                write!(out, "{sym}")?;
                write_child(out, r, prec(r) < 3)
            } else {
                write_child(out, l, prec(l) < p)?;
                write!(out, "{sym}")?;
                write_child(out, r, prec(r) <= p)
            }
        }
        Expr::Call(f, arg) => {
            write!(out, "{}(", f.name())?;
            write_node(out, arg)?;
            write!(out, ")")
        }
    }
}

fn write_child(out: &mut String, e: &Expr, parens: bool) -> fmt::Result {
    use fmt::Write;
    if parens {
        write!(out, "(")?;
        write_node(out, e)?;
        write!(out, ")")
    } else {
        write_node(out, e)
    }
}

impl fmt::Display for FunctionExpr {
    /// Prints a form that re-parses to a structurally identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.root))
    }
}

// ---------------------------------------------------------------------------
// parsing

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.parse_term()?;
                lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.parse_term()?;
                lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.parse_unary()?;
                lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                let rhs = self.parse_unary()?;
                lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.parse_unary()?)))
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_atom()?;
        if self.eat(b'^') {
            // Exponent may itself carry a unary minus: x^-2.
            let exp = self.parse_unary()?;
            Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(ParseError::Syntax {
                offset: self.pos,
                message: "unexpected end of input".into(),
            }),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if !self.eat(b')') {
                    return Err(ParseError::Syntax {
                        offset: self.pos,
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.parse_number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.parse_ident(),
            Some(c) => Err(ParseError::Syntax {
                offset: self.pos,
                message: format!("unexpected `{}`", c as char),
            }),
        }
    }

    fn parse_number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.bytes.len() && (self.bytes[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.bytes.len() && (self.bytes[self.pos] == b'+' || self.bytes[self.pos] == b'-') {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // `2e` followed by a non-digit is the number 2 and then an identifier.
                self.pos = mark;
            }
        }
        let lit = &self.text[start..self.pos];
        lit.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("invalid number `{lit}`"),
            })
    }

    fn parse_ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.text[start..self.pos];
        if name == "x" {
            return Ok(Expr::Var);
        }
        if let Some(f) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(ParseError::ArityMismatch {
                    offset: start,
                    name: name.into(),
                });
            }
            let arg = self.parse_expr()?;
            if self.eat(b',') {
                return Err(ParseError::ArityMismatch {
                    offset: start,
                    name: name.into(),
                });
            }
            if !self.eat(b')') {
                return Err(ParseError::Syntax {
                    offset: self.pos,
                    message: "expected `)`".into(),
                });
            }
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        Err(ParseError::UnknownIdentifier {
            offset: start,
            name: name.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> FunctionExpr {
        FunctionExpr::parse(s).unwrap()
    }

    #[test]
    fn evaluates_textbook_expressions() {
        assert_eq!(parse("x^3 + x").eval(0.5).unwrap(), 0.625);
        assert_eq!(parse("1/(x+1)").eval(1.0).unwrap(), 0.5);
        assert_eq!(parse("2*x").eval(1.0).unwrap(), 2.0);
        assert_eq!(parse("sqrt(x)").eval(0.25).unwrap(), 0.5);
        assert_eq!(parse("1 - x/2").eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ binds tightest and to the right.
        assert_eq!(parse("2^3^2").eval(0.0).unwrap(), 512.0);
        assert_eq!(parse("-x^2").eval(3.0).unwrap(), -9.0);
        // unary minus binds tighter than *.
        assert_eq!(parse("-2*3").eval(0.0).unwrap(), -6.0);
        assert_eq!(parse("2*-3").eval(0.0).unwrap(), -6.0);
        assert_eq!(parse("1 - 2 - 3").eval(0.0).unwrap(), -4.0);
        assert_eq!(parse("x^-1").eval(4.0).unwrap(), 0.25);
        assert_eq!(parse("(1+2)*3").eval(0.0).unwrap(), 9.0);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match FunctionExpr::parse("1 + @") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match FunctionExpr::parse("y + 1") {
            Err(ParseError::UnknownIdentifier { offset, name }) => {
                assert_eq!((offset, name.as_str()), (0, "y"));
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
        match FunctionExpr::parse("sin(x, 1)") {
            Err(ParseError::ArityMismatch { name, .. }) => assert_eq!(name, "sin"),
            other => panic!("expected arity mismatch, got {other:?}"),
        }
        assert_eq!(FunctionExpr::parse("   "), Err(ParseError::Empty));
    }

    #[test]
    fn domain_errors_identify_subexpression() {
        match parse("log(x)").eval(0.0) {
            Err(EvalError::LogNonPositive { arg, context, x }) => {
                assert_eq!(arg, 0.0);
                assert_eq!(context, "log(x)");
                assert_eq!(x, 0.0);
            }
            other => panic!("expected log domain error, got {other:?}"),
        }
        assert!(matches!(
            parse("sqrt(x - 1)").eval(0.0),
            Err(EvalError::SqrtNegative { .. })
        ));
        assert!(matches!(
            parse("1/x").eval(0.0),
            Err(EvalError::DivisionByZero { .. })
        ));
        assert!(matches!(
            parse("exp(x)").eval(1000.0),
            Err(EvalError::NonFinite { .. })
        ));
    }

    #[test]
    fn detect_affine_examples() {
        let (p, q) = parse("3*x - 2").detect_affine(0.0, 1.0).unwrap().unwrap();
        assert!((p - 3.0).abs() < 1e-9 && (q + 2.0).abs() < 1e-9);
        assert_eq!(parse("x^2").detect_affine(0.0, 1.0).unwrap(), None);
        // Simplifies symbolically to x.
        let (p, q) = parse("2*(x+1) - x - 2").detect_affine(0.0, 1.0).unwrap().unwrap();
        assert!((p - 1.0).abs() < 1e-9 && q.abs() < 1e-9);
    }

    #[test]
    fn polynomial_extraction() {
        assert_eq!(parse("x^3 + x").as_polynomial().unwrap(), vec![0.0, 1.0, 0.0, 1.0]);
        assert_eq!(parse("1 - x/2").as_polynomial().unwrap(), vec![1.0, -0.5]);
        assert_eq!(parse("(x+1)*(x-1)").as_polynomial().unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse("(-x)^2").as_polynomial().unwrap(), vec![0.0, 0.0, 1.0]);
        assert!(parse("sqrt(x)").as_polynomial().is_none());
        assert!(parse("1/(x+1)").as_polynomial().is_none());
        assert!(parse("x^0.5").as_polynomial().is_none());
    }

    #[test]
    fn polynomial_integration_is_exact_on_monomials() {
        assert_eq!(integrate_polynomial(&[0.0, 0.0, 0.0, 1.0], 0.0, 1.0), 0.25);
        assert_eq!(integrate_polynomial(&[0.0, 1.0, 0.0, 1.0], 0.0, 1.0), 0.75);
        assert_eq!(integrate_polynomial(&[1.0], -1.0, 1.0), 2.0);
    }

    #[test]
    fn reflect_is_an_involution() {
        for text in ["x^3 + x", "2*x", "1/(x+1)", "sqrt(x)", "-x", "sin(x) - cos(2*x)"] {
            let e = parse(text);
            let r = e.reflect();
            assert_eq!(r.reflect(), e, "double reflect of `{text}`");
            // Reflected tree evaluates the original at the mirrored abscissa.
            for x in [0.1, 0.5, 0.9] {
                if let (Ok(a), Ok(b)) = (e.eval(x), r.eval(-x)) {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn builders_evaluate_as_written() {
        let f = parse("x^3 + x");
        let g = parse("x^2");
        let c = FunctionExpr::linear_combination(2.0, &f, -3.0, &g);
        let x = 0.7;
        assert_eq!(c.eval(x).unwrap(), 2.0 * f.eval(x).unwrap() + -3.0 * g.eval(x).unwrap());
        let a = FunctionExpr::affine_image(2.0, 1.0, &f);
        assert_eq!(a.eval(x).unwrap(), 2.0 * f.eval(x).unwrap() + 1.0);
        // Printed builders must round-trip through the parser.
        assert_eq!(FunctionExpr::parse(&c.to_string()).unwrap(), c);
        assert_eq!(FunctionExpr::parse(&a.to_string()).unwrap(), a);
    }

    // Random expression trees for the round-trip property.
    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0..10.0f64).prop_map(Expr::Num),
            Just(Expr::Var),
        ];
        leaf.prop_recursive(5, 64, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Bin(
                    BinOp::Add,
                    Box::new(l),
                    Box::new(r)
                )),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Bin(
                    BinOp::Sub,
                    Box::new(l),
                    Box::new(r)
                )),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Bin(
                    BinOp::Mul,
                    Box::new(l),
                    Box::new(r)
                )),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Bin(
                    BinOp::Div,
                    Box::new(l),
                    Box::new(r)
                )),
                (inner.clone(), (0u8..4).prop_map(|k| Expr::Num(k as f64)))
                    .prop_map(|(l, r)| Expr::Bin(BinOp::Pow, Box::new(l), Box::new(r))),
                (
                    prop_oneof![
                        Just(Func::Sin),
                        Just(Func::Cos),
                        Just(Func::Exp),
                        Just(Func::Log),
                        Just(Func::Sqrt),
                        Just(Func::Abs),
                    ],
                    inner
                )
                    .prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
            ]
        })
    }

    proptest! {
        // print -> parse returns the identical tree, hence identical values.
        #[test]
        fn print_parse_round_trip(root in arb_expr()) {
            let e = FunctionExpr { root };
            let text = e.to_string();
            let back = FunctionExpr::parse(&text).unwrap();
            prop_assert_eq!(&back, &e, "text was `{}`", text);
            for k in 0..100 {
                let x = -2.0 + 4.0 * (k as f64) / 99.0;
                match (e.eval(x), back.eval(x)) {
                    (Ok(a), Ok(b)) => {
                        let rel = (a - b).abs() / (1.0 + a.abs());
                        prop_assert!(rel <= 1e-15, "mismatch at x={}: {} vs {}", x, a, b);
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "divergent results at x={}: {:?} vs {:?}", x, a, b),
                }
            }
        }

        // Affine expressions are recovered with slope/intercept agreeing at random points.
        #[test]
        fn detect_affine_recovers_affine(p in -5.0..5.0f64, q in -5.0..5.0f64, seed in 0u64..1000) {
            let e = FunctionExpr::affine_image(p, q, &FunctionExpr::parse("x").unwrap());
            let got = e.detect_affine(0.0, 1.0).unwrap();
            prop_assert!(got.is_some());
            let (gp, gq) = got.unwrap();
            let mut t = seed as f64 / 1000.0;
            for _ in 0..50 {
                t = (t + 0.618033988749895).fract();
                let val = e.eval(t).unwrap();
                let fit = gp * t + gq;
                prop_assert!((val - fit).abs() <= 1e-8 * (1.0 + val.abs()));
            }
        }
    }
}
