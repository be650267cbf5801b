use super::{BinOp, Func, Node};

// Light simplification only: 0*x -> 0, 1*x -> x, x+0 -> x, x-0 -> x, 0-x -> -x,
// 0/x -> 0, x/1 -> x.

fn constant(c: f64) -> Node {
    Node::Const(c)
}

fn neg(a: Node) -> Node {
    if a.is_const(0.0) {
        return a;
    }
    Node::Neg(Box::new(a))
}

fn add(a: Node, b: Node) -> Node {
    if a.is_const(0.0) {
        return b;
    }
    if b.is_const(0.0) {
        return a;
    }
    Node::Binary(BinOp::Add, Box::new(a), Box::new(b))
}

fn sub(a: Node, b: Node) -> Node {
    if b.is_const(0.0) {
        return a;
    }
    if a.is_const(0.0) {
        return neg(b);
    }
    Node::Binary(BinOp::Sub, Box::new(a), Box::new(b))
}

fn mul(a: Node, b: Node) -> Node {
    if a.is_const(0.0) || b.is_const(0.0) {
        return constant(0.0);
    }
    if a.is_const(1.0) {
        return b;
    }
    if b.is_const(1.0) {
        return a;
    }
    Node::Binary(BinOp::Mul, Box::new(a), Box::new(b))
}

fn div(a: Node, b: Node) -> Node {
    if a.is_const(0.0) {
        return a;
    }
    if b.is_const(1.0) {
        return a;
    }
    Node::Binary(BinOp::Div, Box::new(a), Box::new(b))
}

fn call(f: Func, a: Node) -> Node {
    Node::Call(f, Box::new(a))
}

fn pow(a: Node, b: Node) -> Node {
    Node::Binary(BinOp::Pow, Box::new(a), Box::new(b))
}

pub(super) fn derivative(node: &Node) -> Node {
    match node {
        Node::Const(_) => constant(0.0),
        Node::Var => constant(1.0),
        Node::Neg(a) => neg(derivative(a)),
        Node::Call(f, a) => {
            let inner = derivative(a);
            if inner.is_const(0.0) {
                return inner;
            }
            let x = (**a).clone();
            let outer = match f {
                Func::Sin => call(Func::Cos, x),
                Func::Cos => neg(call(Func::Sin, x)),
                Func::Tan => div(constant(1.0), pow(call(Func::Cos, x), constant(2.0))),
                Func::Sinh => call(Func::Cosh, x),
                Func::Cosh => call(Func::Sinh, x),
                Func::Tanh => div(constant(1.0), pow(call(Func::Cosh, x), constant(2.0))),
                Func::Exp => call(Func::Exp, x),
                Func::Ln => div(constant(1.0), x),
                Func::Sqrt => div(constant(1.0), mul(constant(2.0), call(Func::Sqrt, x))),
            };
            mul(outer, inner)
        }
        Node::Binary(op, a, b) => {
            let da = derivative(a);
            let db = derivative(b);
            let (a, b) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add => add(da, db),
                BinOp::Sub => sub(da, db),
                BinOp::Mul => add(mul(da, b.clone()), mul(a, db)),
                BinOp::Div => div(
                    sub(mul(da, b.clone()), mul(a, db)),
                    pow(b, constant(2.0)),
                ),
                BinOp::Pow => power_rule(a, b, da, db),
            }
        }
    }
}

fn power_rule(base: Node, exponent: Node, dbase: Node, dexp: Node) -> Node {
    if let Node::Const(n) = exponent {
        // n * base^(n-1) * base'
        let lowered = if n - 1.0 == 1.0 {
            base
        } else {
            pow(base, constant(n - 1.0))
        };
        return mul(mul(constant(n), lowered), dbase);
    }
    if exponent.is_constant() {
        let lowered = pow(base, sub(exponent.clone(), constant(1.0)));
        return mul(mul(exponent, lowered), dbase);
    }
    // base^e * (e' ln(base) + e base' / base)
    let whole = pow(base.clone(), exponent.clone());
    let log_part = mul(dexp, call(Func::Ln, base.clone()));
    let base_part = div(mul(exponent, dbase), base);
    mul(whole, add(log_part, base_part))
}
