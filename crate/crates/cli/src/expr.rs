//! Expression syntax for polynomials over `Q(ζ_n)` in base variables and `z`.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*          division only by nonzero constants
//! unary  := '-' unary | power
//! power  := atom ['^' digits]
//! atom   := digits | ident | '(' expr ')'
//! ```
//!
//! `z` is the cover variable and `zeta` the chosen primitive `n`-th root of
//! unity; every other identifier is a base variable. Base variables are
//! ordered naturally (`x < y`, `x2 < x10`) across all expressions of one input.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use cyclounits_core::ring::{CoverElement, CoverRing, CycNumber, CyclotomicField, MultiPoly};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Var(String),
    Zeta,
    Z,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>, usize),
    Pow(Box<Node>, u32),
}

/// A parsed expression.
#[derive(Clone, Debug)]
pub struct Expr {
    root: Node,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut acc = if self.eat(b'-') {
            Node::Neg(Box::new(self.term()?))
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = Node::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Node::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = Node::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.peek() == Some(b'/') {
                let column = self.pos + 1;
                self.pos += 1;
                acc = Node::Div(Box::new(acc), Box::new(self.unary()?), column);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return self.err("expected a nonnegative integer exponent after '^'");
        }
        match digits.parse::<u32>() {
            Ok(e) => Ok(Node::Pow(Box::new(base), e)),
            Err(_) => self.err("exponent too large"),
        }
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Node::Int(digits.parse().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(match name {
                    "z" => Node::Z,
                    "zeta" => Node::Zeta,
                    _ => Node::Var(name.to_string()),
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    if let Some(i) = src.find(|c: char| !c.is_ascii()) {
        return Err(ExprError {
            column: src[..i].chars().count() + 1,
            message: "non-ASCII character".into(),
        });
    }
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let root = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(Expr { root })
}

/// Natural order on variable names: alphabetic prefix, then numeric suffix.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (&s[..cut], s[cut..].parse().ok())
    }
    split(a).cmp(&split(b)).then_with(|| a.cmp(b))
}

/// Base variables of several expressions, naturally ordered.
pub fn variables<'a, I: IntoIterator<Item = &'a Expr>>(exprs: I) -> Vec<String> {
    let mut set = BTreeSet::new();
    for e in exprs {
        collect(&e.root, &mut set);
    }
    let mut v: Vec<String> = set.into_iter().collect();
    v.sort_by(|a, b| natural_cmp(a, b));
    v
}

fn collect(n: &Node, out: &mut BTreeSet<String>) {
    match n {
        Node::Var(v) => {
            out.insert(v.clone());
        }
        Node::Int(_) | Node::Zeta | Node::Z => {}
        Node::Neg(a) | Node::Pow(a, _) => collect(a, out),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, _) => {
            collect(a, out);
            collect(b, out);
        }
    }
}

/// Polynomial in `z` with coefficients in `A`, before reduction by `z^n = f`.
type ZPoly = Vec<MultiPoly>;

struct Ctx<'a> {
    field: &'a Arc<CyclotomicField>,
    names: &'a [String],
}

impl Ctx<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn constant(&self, c: CycNumber) -> ZPoly {
        vec![MultiPoly::constant(self.nvars(), c)]
    }

    fn add(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        let zero = MultiPoly::zero(self.field, self.nvars());
        (0..a.len().max(b.len()))
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect()
    }

    fn neg(&self, a: &ZPoly) -> ZPoly {
        a.iter().map(|c| -c).collect()
    }

    fn mul(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        let mut out = vec![MultiPoly::zero(self.field, self.nvars()); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        out
    }

    fn eval(&self, n: &Node) -> Result<ZPoly, ExprError> {
        Ok(match n {
            Node::Int(k) => self.constant(CycNumber::rational(
                self.field,
                BigRational::from_integer(k.clone()),
            )),
            Node::Zeta => self.constant(CycNumber::zeta(self.field)),
            Node::Z => vec![
                MultiPoly::zero(self.field, self.nvars()),
                MultiPoly::one(self.field, self.nvars()),
            ],
            Node::Var(v) => {
                let i = self
                    .names
                    .iter()
                    .position(|x| x == v)
                    .expect("variable collected");
                vec![MultiPoly::var(self.field, self.nvars(), i)]
            }
            Node::Neg(a) => self.neg(&self.eval(a)?),
            Node::Add(a, b) => self.add(&self.eval(a)?, &self.eval(b)?),
            Node::Sub(a, b) => self.add(&self.eval(a)?, &self.neg(&self.eval(b)?)),
            Node::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?),
            Node::Div(a, b, column) => {
                let d = self.eval(b)?;
                let c = match d.as_slice() {
                    [c] => c.as_constant(),
                    _ => d
                        .iter()
                        .skip(1)
                        .all(|x| x.is_zero())
                        .then(|| d[0].as_constant())
                        .flatten(),
                };
                let inv = c.and_then(|c| c.inv()).ok_or_else(|| ExprError {
                    column: *column,
                    message: "division is only by nonzero constants".into(),
                })?;
                self.eval(a)?.iter().map(|x| x.scale(&inv)).collect()
            }
            Node::Pow(a, e) => {
                let base = self.eval(a)?;
                let mut acc = self.constant(CycNumber::one(self.field));
                for _ in 0..*e {
                    acc = self.mul(&acc, &base);
                }
                acc
            }
        })
    }
}

impl Expr {
    pub fn uses_z(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Z => true,
                Node::Int(_) | Node::Zeta | Node::Var(_) => false,
                Node::Neg(a) | Node::Pow(a, _) => walk(a),
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, _) => {
                    walk(a) || walk(b)
                }
            }
        }
        walk(&self.root)
    }

    /// Evaluates an expression free of `z` to an element of `A`.
    pub fn to_base(
        &self,
        field: &Arc<CyclotomicField>,
        names: &[String],
    ) -> Result<MultiPoly, ExprError> {
        if self.uses_z() {
            return Err(ExprError {
                column: 1,
                message: "the cover variable z is not allowed here".into(),
            });
        }
        let mut p = Ctx { field, names }.eval(&self.root)?;
        Ok(p.swap_remove(0))
    }

    /// Evaluates to an element of `T`, reducing `z^n` to `f`.
    pub fn to_element(
        &self,
        ring: &Arc<CoverRing>,
        names: &[String],
    ) -> Result<CoverElement, ExprError> {
        let p = Ctx {
            field: ring.field(),
            names,
        }
        .eval(&self.root)?;
        let z = CoverElement::z(ring);
        let mut acc = CoverElement::zero(ring);
        for (j, c) in p.into_iter().enumerate().rev() {
            // Horner in z keeps intermediate degrees below n
            acc = acc
                .mul(&z)
                .and_then(|a| a.add(&CoverElement::from_base(ring, c)?))
                .map_err(|e| ExprError {
                    column: 1,
                    message: format!("{} (at z^{})", e, j),
                })?;
        }
        Ok(acc)
    }
}
