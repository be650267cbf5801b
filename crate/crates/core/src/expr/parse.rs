use super::{BinOp, Expr, Func, Node, SyntaxError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
    End,
}

fn err(offset: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lexeme = &text[start..i];
                let value: f64 = lexeme
                    .parse()
                    .map_err(|_| err(start, format!("malformed number '{lexeme}'")))?;
                if !value.is_finite() {
                    return Err(err(start, format!("number out of range '{lexeme}'")));
                }
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Name(text[start..i].to_owned()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var: Option<(String, usize)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<Node, SyntaxError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Node, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, SyntaxError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, SyntaxError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn expect_close(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Close => {
                self.bump();
                Ok(())
            }
            _ => Err(err(self.offset(), "expected ')'")),
        }
    }

    fn primary(&mut self) -> Result<Node, SyntaxError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Node::Const(v)),
            Tok::Open => {
                let inner = self.sum()?;
                self.expect_close()?;
                Ok(inner)
            }
            Tok::Name(name) => {
                if *self.peek() == Tok::Open {
                    let func = Func::from_name(&name)
                        .ok_or_else(|| err(at, format!("unknown function '{name}'")))?;
                    self.bump();
                    let arg = self.sum()?;
                    self.expect_close()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                if Func::from_name(&name).is_some() {
                    return Err(err(at, format!("function '{name}' needs an argument")));
                }
                match &self.var {
                    Some((existing, _)) if *existing != name => Err(err(
                        at,
                        format!("second free variable '{name}' (already using '{existing}')"),
                    )),
                    Some(_) => Ok(Node::Var),
                    None => {
                        self.var = Some((name, at));
                        Ok(Node::Var)
                    }
                }
            }
            Tok::End => Err(err(at, "unexpected end of input")),
            other => Err(err(at, format!("unexpected token {}", describe(&other)))),
        }
    }
}

fn describe(tok: &Tok) -> &'static str {
    match tok {
        Tok::Num(_) => "number",
        Tok::Name(_) => "name",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::Open => "'('",
        Tok::Close => "')'",
        Tok::End => "end of input",
    }
}

/// Parses expression text; see the module docs for the grammar.
pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        var: None,
    };
    let root = p.sum()?;
    if *p.peek() != Tok::End {
        let at = p.offset();
        let what = describe(p.peek());
        return Err(err(at, format!("trailing {what}")));
    }
    Ok(Expr {
        root,
        var: p.var.map(|(name, _)| name),
    })
}
