//! Arithmetic expressions in `x`, `y`, `z` for field components.
//!
//! Grammar: `+ - * / ^`, unary minus, parentheses, numeric literals, the
//! constant `pi`, and the functions `sin cos exp sqrt`. `^` binds tighter than
//! unary minus and associates to the right, so `-2^2 = -4` and `2^3^2 = 512`.

use serde::Serialize;

use super::FlowError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expr {
    Num(f64),
    /// 0, 1, 2 for x, y, z.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, FlowError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, at: 0, len: text.len() };
        let e = p.sum()?;
        match p.peek() {
            None => Ok(e),
            Some(t) => Err(p.unexpected(t)),
        }
    }

    /// Parses an expression without variables and evaluates it.
    pub fn constant(text: &str) -> Result<f64, FlowError> {
        let e = Expr::parse(text)?;
        if e.uses_variables() {
            return Err(FlowError::Syntax { position: 0, token: text.trim().to_string(), message: "expected a constant".into() });
        }
        Ok(e.eval([0.0; 3]))
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => p[*i],
            Expr::Neg(a) => -a.eval(p),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(p), b.eval(p));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, a) => {
                let a = a.eval(p);
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Sqrt => a.sqrt(),
                }
            }
        }
    }

    pub fn uses_variables(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses_variables(),
            Expr::Bin(_, a, b) => a.uses_variables() || b.uses_variables(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FlowError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent part, only if it is followed by digits.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s = &text[start..i];
            let v = s.parse::<f64>().map_err(|_| FlowError::Syntax { position: start, token: s.into(), message: "bad number".into() })?;
            out.push(Token { tok: Tok::Num(v), pos: start, text: s.into() });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let s = &text[start..i];
            out.push(Token { tok: Tok::Ident(s.into()), pos: start, text: s.into() });
        } else if "+-*/^()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos: i, text: c.to_string() });
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(FlowError::Syntax { position: i, token: ch.to_string(), message: "unexpected character".into() });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn unexpected(&self, t: &Token) -> FlowError {
        FlowError::Syntax { position: t.pos, token: t.text.clone(), message: "unexpected token".into() }
    }

    fn eof(&self) -> FlowError {
        FlowError::Syntax { position: self.len, token: String::new(), message: "unexpected end of input".into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, FlowError> {
        let mut e = self.product()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(e);
            };
            e = Expr::Bin(op, Box::new(e), Box::new(self.product()?));
        }
    }

    fn product(&mut self) -> Result<Expr, FlowError> {
        let mut e = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(e);
            };
            e = Expr::Bin(op, Box::new(e), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, FlowError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, FlowError> {
        let t = self.peek().cloned().ok_or_else(|| self.eof())?;
        self.at += 1;
        match t.tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Sym('(') => {
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.peek().map(|t| self.unexpected(t)).unwrap_or_else(|| self.eof()));
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "x" => return Ok(Expr::Var(0)),
                    "y" => return Ok(Expr::Var(1)),
                    "z" => return Ok(Expr::Var(2)),
                    "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    "sqrt" => Func::Sqrt,
                    _ => return Err(FlowError::UnknownIdentifier { position: t.pos, name }),
                };
                if !self.eat('(') {
                    return Err(self.peek().map(|t| self.unexpected(t)).unwrap_or_else(|| self.eof()));
                }
                let arg = self.sum()?;
                if !self.eat(')') {
                    return Err(self.peek().map(|t| self.unexpected(t)).unwrap_or_else(|| self.eof()));
                }
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::Sym(_) => Err(self.unexpected(&t)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, p: [f64; 3]) -> f64 {
        Expr::parse(s).unwrap().eval(p)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1+2*3", [0.0; 3]), 7.0);
        assert_eq!(ev("-2^2", [0.0; 3]), -4.0);
        assert_eq!(ev("2^3^2", [0.0; 3]), 512.0);
        assert_eq!(ev("2^-1", [0.0; 3]), 0.5);
        assert_eq!(ev("(x-y)/z", [5.0, 1.0, 2.0]), 2.0);
        assert_eq!(ev("1e-3*1E2", [0.0; 3]), 0.1);
        assert!((ev("sqrt(x*x+y*y) + cos(pi)", [3.0, 4.0, 0.0]) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(Expr::parse("x + w").unwrap_err(), FlowError::UnknownIdentifier { position: 4, name: "w".into() });
        match Expr::parse("x * (y + ").unwrap_err() {
            FlowError::Syntax { position, .. } => assert_eq!(position, 9),
            e => panic!("{e:?}"),
        }
        match Expr::parse("sin x").unwrap_err() {
            FlowError::Syntax { position, token, .. } => assert_eq!((position, token.as_str()), (4, "x")),
            e => panic!("{e:?}"),
        }
        match Expr::parse("x $ y").unwrap_err() {
            FlowError::Syntax { position, token, .. } => assert_eq!((position, token.as_str()), (2, "$")),
            e => panic!("{e:?}"),
        }
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("1 2").is_err());
    }

    #[test]
    fn constants() {
        assert!((Expr::constant("2*pi").unwrap() - std::f64::consts::TAU).abs() < 1e-15);
        assert!(Expr::constant("2*x").is_err());
    }
}
