//! One-variable expressions: parsing, evaluation and symbolic differentiation.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | name '(' sum ')' | name | '(' sum ')'
//! ```
//!
//! Functions: `sin cos tan sinh cosh tanh exp ln sqrt`. Any other bare name is the
//! free variable; an expression may mention at most one.

mod diff;
mod parse;

use std::fmt;

use num_traits::{Float, FromPrimitive};
use thiserror::Error;

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("domain error: {message} at {at}")]
pub struct DomainError {
    pub message: String,
    pub at: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Call(Func, Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
}

impl Node {
    pub fn is_const(&self, value: f64) -> bool {
        matches!(self, Node::Const(c) if *c == value)
    }

    /// True when the subtree does not mention the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Const(_) => true,
            Node::Var => false,
            Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
            Node::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Const(_) | Node::Var => 1,
            Node::Neg(a) | Node::Call(_, a) => 1 + a.depth(),
            Node::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Parsed expression tree together with the name of its free variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    var: Option<String>,
}

impl Expr {
    /// Builds an expression from a tree; `var` names the variable that `Node::Var`
    /// stands for.
    pub fn from_node(root: Node, var: Option<&str>) -> Self {
        Self {
            root,
            var: var.map(str::to_owned),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::from_node(Node::Const(value), None)
    }

    pub fn variable(name: &str) -> Self {
        Self::from_node(Node::Var, Some(name))
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Name of the free variable, if the text mentioned one.
    pub fn var_name(&self) -> Option<&str> {
        self.var.as_deref()
    }

    pub fn depends_on_variable(&self) -> bool {
        !self.root.is_constant()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn eval(&self, t: f64) -> Result<f64, DomainError> {
        eval_node(&self.root, t)
    }

    /// Evaluation in another floating-point type.
    pub fn eval_as<T: Float + FromPrimitive>(&self, t: T) -> Result<T, DomainError> {
        eval_node(&self.root, t)
    }

    /// Exact derivative with respect to the free variable.
    pub fn differentiate(&self) -> Expr {
        Expr {
            root: diff::derivative(&self.root),
            var: self.var.clone(),
        }
    }

    /// Combines two expressions; the result keeps whichever variable name is set.
    ///
    /// Panics when both operands name different variables.
    pub fn combine(op: BinOp, a: &Expr, b: &Expr) -> Expr {
        let var = match (&a.var, &b.var) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "cannot combine expressions in different variables");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        };
        Expr {
            root: Node::Binary(op, Box::new(a.root.clone()), Box::new(b.root.clone())),
            var,
        }
    }

    pub fn call(func: Func, a: &Expr) -> Expr {
        Expr {
            root: Node::Call(func, Box::new(a.root.clone())),
            var: a.var.clone(),
        }
    }

    pub fn negate(a: &Expr) -> Expr {
        Expr {
            root: Node::Neg(Box::new(a.root.clone())),
            var: a.var.clone(),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

fn domain<T: Float>(message: &str, at: T) -> DomainError {
    DomainError {
        message: message.to_owned(),
        at: at.to_f64().unwrap_or(f64::NAN),
    }
}

fn finite<T: Float>(value: T, what: &str, at: T) -> Result<T, DomainError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(what, at))
    }
}

fn eval_node<T: Float + FromPrimitive>(node: &Node, t: T) -> Result<T, DomainError> {
    let value = match node {
        Node::Const(c) => T::from_f64(*c).ok_or_else(|| domain("constant not representable", t))?,
        Node::Var => t,
        Node::Neg(a) => -eval_node(a, t)?,
        Node::Call(f, a) => {
            let x = eval_node(a, t)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => finite(x.tan(), "tan pole", t)?,
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
                Func::Exp => x.exp(),
                Func::Ln => {
                    if x <= T::zero() {
                        return Err(domain("ln of non-positive value", t));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < T::zero() {
                        return Err(domain("sqrt of negative value", t));
                    }
                    x.sqrt()
                }
            }
        }
        Node::Binary(op, a, b) => {
            let x = eval_node(a, t)?;
            let y = eval_node(b, t)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => finite(x / y, "division result not finite", t)?,
                BinOp::Pow => pow(x, y, t)?,
            }
        }
    };
    finite(value, "non-finite value", t)
}

fn pow<T: Float + FromPrimitive>(base: T, exponent: T, t: T) -> Result<T, DomainError> {
    let limit = T::from_i32(i32::MAX).unwrap();
    if exponent.fract() == T::zero() && exponent.abs() <= limit {
        let n = exponent.to_i32().unwrap();
        return finite(base.powi(n), "power result not finite", t);
    }
    if base <= T::zero() {
        return Err(domain("non-integer power of non-positive base", t));
    }
    finite(base.powf(exponent), "power result not finite", t)
}

struct Printer<'a> {
    node: &'a Node,
    var: &'a str,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |node| Printer {
            node,
            var: self.var,
        };
        match self.node {
            Node::Const(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Node::Const(c) => write!(f, "{c}"),
            Node::Var => f.write_str(self.var),
            Node::Neg(a) => write!(f, "(-{})", sub(a)),
            Node::Call(func, a) => write!(f, "{}({})", func.name(), sub(a)),
            Node::Binary(op, a, b) => write!(f, "({} {} {})", sub(a), op.symbol(), sub(b)),
        }
    }
}

/// Canonical, fully parenthesised form; parsing it gives back the same tree shape.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            node: &self.root,
            var: self.var.as_deref().unwrap_or("x"),
        }
        .fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, t: f64) -> Result<f64, DomainError> {
        parse(text).unwrap().eval(t)
    }

    #[test]
    fn precedence_and_grouping() {
        let e = parse("u^3/3").unwrap();
        assert_eq!(e.to_string(), "((u ^ 3) / 3)");
        assert_eq!(parse("-u^2").unwrap().to_string(), "(-(u ^ 2))");
        assert_eq!(parse("2^3^2").unwrap().eval(0.0).unwrap(), 512.0);
        assert_eq!(parse("1-2-3").unwrap().eval(0.0).unwrap(), -4.0);
        assert_eq!(parse("8/4/2").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("2*-u").unwrap().eval(3.0).unwrap(), -6.0);
        assert_eq!(parse("u^-1").unwrap().eval(4.0).unwrap(), 0.25);
        assert_eq!(parse("1.5e2 + 2E-1").unwrap().eval(0.0).unwrap(), 150.2);
    }

    #[test]
    fn trig_quotient_at_pi() {
        let v = ev("sin(u)/(-1+cos(u))", std::f64::consts::PI).unwrap();
        let expect = std::f64::consts::PI.sin() / (-2.0);
        assert_eq!(v, expect);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(ev("exp(u)", 0.0).unwrap(), 1.0);
        assert!((ev("-exp(-u)", 1.0).unwrap() + 0.36787944117144233).abs() < 1e-15);
        assert!(ev("1/u", 0.0).is_err());
        assert!(ev("ln(u)", 0.0).is_err());
        assert!(ev("ln(u)", -1.0).is_err());
        assert!(ev("sqrt(u)", -1e-300).is_err());
        assert!(ev("u^0.5", -2.0).is_err());
        assert_eq!(ev("u^3", -2.0).unwrap(), -8.0);
        assert!(ev("0^(-1)", 0.0).is_err());
        assert!(ev("exp(u)", 1000.0).is_err());
    }

    #[test]
    fn evaluates_in_single_precision() {
        let e = parse("cosh(u) - sinh(u)").unwrap();
        let v: f32 = e.eval_as(0.5f32).unwrap();
        assert!((v - (-0.5f32).exp()).abs() < 1e-6);
    }

    #[test]
    fn derivative_examples() {
        let d = parse("u^3").unwrap().differentiate();
        assert_eq!(d.to_string(), "(3 * (u ^ 2))");
        assert_eq!(parse("7.5").unwrap().differentiate().to_string(), "0");
        let e = parse("sin(u)/(-1+cos(u))").unwrap();
        let d = e.differentiate();
        let h = 1e-3;
        let fd = |x: f64| {
            let c = |s: f64| (e.eval(x + s).unwrap() - e.eval(x - s).unwrap()) / (2.0 * s);
            (4.0 * c(h / 2.0) - c(h)) / 3.0
        };
        assert!((d.eval(1.0).unwrap() - fd(1.0)).abs() < 1e-7);
    }

    #[test]
    fn variable_name_is_recorded() {
        assert_eq!(parse("v^2 + 1").unwrap().var_name(), Some("v"));
        assert_eq!(parse("2 * 3").unwrap().var_name(), None);
        assert!(!parse("exp(2)").unwrap().depends_on_variable());
    }
}
