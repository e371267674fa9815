//! Small complex expression language for potentials `q(x)` and the
//! boundary coefficients `a(rho)`, `b(rho)`.
//!
//! Supports `+ - * / ^`, parentheses, the constants `i`, `pi`, `e`, one free
//! variable, and the functions sin, cos, tan, sinh, cosh, tanh, exp, ln (log),
//! sqrt, abs, re, im, sgn (of the real part) and gamma (real argument).

use nsbf_core::potentials::gamma;
use num_complex::Complex64 as C;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Re,
    Im,
    Sgn,
    Gamma,
}

#[derive(Clone, Debug)]
enum Node {
    Const(C),
    Var,
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression in one variable.
#[derive(Clone, Debug)]
pub struct Expr {
    root: Node,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, only when followed by a digit or sign+digit
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| format!("bad number '{text}'"))?;
            out.push(Tok::Num(v));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^,".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else if ch == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if ch == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else {
            return Err(format!("unexpected character '{ch}'"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node, String> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, String> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(op @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
                }
                // implicit product such as `2x` or `3 sin(x)`
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {
                    let rhs = self.unary()?;
                    lhs = Node::Bin('*', Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, String> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, String> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, String> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Node::Const(C::new(v, 0.0))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err("missing ')'".into()),
                }
            }
            Some(Tok::Ident(name)) => {
                if name == self.var {
                    return Ok(Node::Var);
                }
                match name.as_str() {
                    "i" => return Ok(Node::Const(C::new(0.0, 1.0))),
                    "pi" => return Ok(Node::Const(C::new(std::f64::consts::PI, 0.0))),
                    "e" => return Ok(Node::Const(C::new(std::f64::consts::E, 0.0))),
                    _ => {}
                }
                let f = match name.as_str() {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "tan" => Func::Tan,
                    "sinh" => Func::Sinh,
                    "cosh" => Func::Cosh,
                    "tanh" => Func::Tanh,
                    "exp" => Func::Exp,
                    "ln" | "log" => Func::Ln,
                    "sqrt" => Func::Sqrt,
                    "abs" => Func::Abs,
                    "re" => Func::Re,
                    "im" => Func::Im,
                    "sgn" | "sign" => Func::Sgn,
                    "gamma" => Func::Gamma,
                    _ => return Err(format!("unknown name '{name}' (the variable is '{}')", self.var)),
                };
                if self.next() != Some(Tok::LParen) {
                    return Err(format!("'{name}' must be followed by '('"));
                }
                let arg = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(format!("missing ')' after argument of '{name}'"));
                }
                Ok(Node::Call(f, Box::new(arg)))
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn eval(node: &Node, v: C) -> C {
    match node {
        Node::Const(c) => *c,
        Node::Var => v,
        // 0 - z keeps a +0 imaginary part, so sqrt(-4) lands on the principal branch
        Node::Neg(a) => C::new(0.0, 0.0) - eval(a, v),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, v), eval(b, v));
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                _ => {
                    if b.im == 0.0 && b.re.fract() == 0.0 && b.re.abs() <= 64.0 {
                        a.powi(b.re as i32)
                    } else if a.im == 0.0 && a.re > 0.0 && b.im == 0.0 {
                        C::new(a.re.powf(b.re), 0.0)
                    } else {
                        a.powc(b)
                    }
                }
            }
        }
        Node::Call(f, a) => {
            let z = eval(a, v);
            match f {
                Func::Sin => z.sin(),
                Func::Cos => z.cos(),
                Func::Tan => z.tan(),
                Func::Sinh => z.sinh(),
                Func::Cosh => z.cosh(),
                Func::Tanh => z.tanh(),
                Func::Exp => z.exp(),
                Func::Ln => z.ln(),
                Func::Sqrt => z.sqrt(),
                Func::Abs => C::new(z.norm(), 0.0),
                Func::Re => C::new(z.re, 0.0),
                Func::Im => C::new(z.im, 0.0),
                Func::Sgn => C::new(if z.re > 0.0 { 1.0 } else if z.re < 0.0 { -1.0 } else { 0.0 }, 0.0),
                Func::Gamma => {
                    if z.im == 0.0 {
                        C::new(gamma(z.re), 0.0)
                    } else {
                        C::new(f64::NAN, f64::NAN)
                    }
                }
            }
        }
    }
}

impl Expr {
    /// Parses `src` with free variable `var`.
    pub fn parse(src: &str, var: &str) -> Result<Self, String> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err("empty expression".into());
        }
        let mut p = Parser { toks, pos: 0, var };
        let root = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(format!("trailing input after position {}", p.pos));
        }
        Ok(Self { root })
    }

    pub fn eval(&self, v: C) -> C {
        eval(&self.root, v)
    }
}
