//! Immutable canonical expression trees.
//!
//! Every `Expr` is built through the constructors in [`build`], which keep
//! the tree in canonical form: sums and products are flattened, constants are
//! folded, like terms and like factors are merged, and operands are sorted by
//! the total order implemented here. Structural equality of canonical trees
//! is therefore meaningful.

mod build;
mod raw;
mod traverse;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::symbol::Symbol;

pub use raw::{canonicalize, RawExpr};
pub use traverse::Bindings;

pub type Rational = BigRational;

/// Known elementary functions. Square roots are represented as `Pow(x, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Abs,
    Cos,
    Exp,
    Log,
    Sin,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "abs" => Func::Abs,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            _ => return None,
        })
    }
}

/// Reserved named constants. Euler's number is `exp(1)`, not a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    ImaginaryUnit,
    Infinity,
    Pi,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::ImaginaryUnit => "I",
            Constant::Infinity => "oo",
            Constant::Pi => "pi",
        }
    }
}

/// Direction of approach for a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Direction {
    #[default]
    Both,
    Left,
    Right,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Both => "both",
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Direction> {
        match word {
            "both" => Some(Direction::Both),
            "left" | "-" => Some(Direction::Left),
            "right" | "+" => Some(Direction::Right),
            _ => None,
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const(Rational),
    Named(Constant),
    Sym(Symbol),
    Pow(Expr, Expr),
    Func(Func, Expr),
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
    /// Remainder marker `O((var - point)^degree)`.
    Order { var: Symbol, point: Expr, degree: u32 },
    /// Unevaluated limit, resolved by `doit`.
    Limit { body: Expr, var: Symbol, point: Expr, dir: Direction },
}

impl Node {
    fn rank(&self) -> u8 {
        match self {
            Node::Const(_) => 0,
            Node::Named(_) => 1,
            Node::Sym(_) => 2,
            Node::Pow(..) => 3,
            Node::Func(..) => 4,
            Node::Mul(_) => 5,
            Node::Add(_) => 6,
            Node::Order { .. } => 7,
            Node::Limit { .. } => 8,
        }
    }
}

/// A canonical expression. Cheap to clone; safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub(crate) fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn zero() -> Expr {
        Expr::rational(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::rational(Rational::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(num: i64, den: i64) -> Expr {
        Expr::rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::from_node(Node::Const(r))
    }

    pub fn symbol(sym: &Symbol) -> Expr {
        Expr::from_node(Node::Sym(sym.clone()))
    }

    pub fn constant(c: Constant) -> Expr {
        Expr::from_node(Node::Named(c))
    }

    pub fn pi() -> Expr {
        Expr::constant(Constant::Pi)
    }

    pub fn imaginary_unit() -> Expr {
        Expr::constant(Constant::ImaginaryUnit)
    }

    pub fn infinity() -> Expr {
        Expr::constant(Constant::Infinity)
    }

    /// Euler's number, represented as `exp(1)`.
    pub fn e() -> Expr {
        Expr::from_node(Node::Func(Func::Exp, Expr::one()))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self.node() {
            Node::Const(r) if r.is_integer() => Some(r.numer()),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self.node(), Node::Const(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Const(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Const(r) if r.is_one())
    }

    pub fn is_infinite(&self) -> bool {
        match self.node() {
            Node::Named(Constant::Infinity) => true,
            Node::Mul(fs) => fs.len() == 2 && fs[0].is_const() && fs[1].is_infinite(),
            _ => false,
        }
    }

    /// Sign of an infinite value: `Some(1)` for `oo`, `Some(-1)` for `-oo`.
    pub fn infinity_sign(&self) -> Option<i32> {
        match self.node() {
            Node::Named(Constant::Infinity) => Some(1),
            Node::Mul(fs) if fs.len() == 2 && fs[1].is_infinite() => {
                fs[0].as_rational().map(|c| if c.is_negative() { -1 } else { 1 })
            }
            _ => None,
        }
    }

    /// Operands of an `Add`, or the expression itself as a single term.
    pub fn terms(&self) -> &[Expr] {
        match self.node() {
            Node::Add(ts) => ts,
            _ => std::slice::from_ref(self),
        }
    }

    /// Operands of a `Mul`, or the expression itself as a single factor.
    pub fn factors(&self) -> &[Expr] {
        match self.node() {
            Node::Mul(fs) => fs,
            _ => std::slice::from_ref(self),
        }
    }

    /// Splits a term into its rational coefficient and the remaining factor.
    pub fn as_coeff_mul(&self) -> (Rational, Expr) {
        match self.node() {
            Node::Const(r) => (r.clone(), Expr::one()),
            Node::Mul(fs) => match fs[0].node() {
                Node::Const(c) => {
                    let rest = &fs[1..];
                    let rest = if rest.len() == 1 {
                        rest[0].clone()
                    } else {
                        Expr::from_node(Node::Mul(rest.to_vec()))
                    };
                    (c.clone(), rest)
                }
                _ => (Rational::one(), self.clone()),
            },
            _ => (Rational::one(), self.clone()),
        }
    }

    /// Splits into base and exponent (`x` is `x^1`).
    pub fn as_base_exp(&self) -> (Expr, Expr) {
        match self.node() {
            Node::Pow(b, e) => (b.clone(), e.clone()),
            _ => (self.clone(), Expr::one()),
        }
    }

    /// True when the expression has a negative rational leading coefficient.
    pub fn has_negative_coeff(&self) -> bool {
        match self.node() {
            Node::Const(r) => r.is_negative(),
            Node::Mul(fs) => fs[0].as_rational().is_some_and(|c| c.is_negative()),
            _ => false,
        }
    }

    pub fn contains_order(&self) -> bool {
        self.any(&|e| matches!(e.node(), Node::Order { .. }))
    }

    pub fn contains_limit(&self) -> bool {
        self.any(&|e| matches!(e.node(), Node::Limit { .. }))
    }

    /// True if `pred` holds for this node or any descendant.
    pub fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self.node() {
            Node::Const(_) | Node::Named(_) | Node::Sym(_) => false,
            Node::Pow(b, e) => b.any(pred) || e.any(pred),
            Node::Func(_, a) => a.any(pred),
            Node::Mul(xs) | Node::Add(xs) => xs.iter().any(|x| x.any(pred)),
            Node::Order { point, .. } => point.any(pred),
            Node::Limit { body, point, .. } => body.any(pred) || point.any(pred),
        }
    }

    pub fn contains_symbol(&self, sym: &Symbol) -> bool {
        self.any(&|e| matches!(e.node(), Node::Sym(s) if s == sym))
    }

    pub fn is_free_of(&self, sym: &Symbol) -> bool {
        !self.free_symbols().contains(sym)
    }
}

fn cmp_slices(a: &[Expr], b: &[Expr]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Canonical total order: constants, named constants, symbols, powers,
/// functions, products, sums, then order terms and deferred limits; ties are
/// broken by value, name, or recursive comparison of operands.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (self.node(), other.node());
        match a.rank().cmp(&b.rank()) {
            Ordering::Equal => {}
            other => return other,
        }
        match (a, b) {
            (Node::Const(x), Node::Const(y)) => x.cmp(y),
            (Node::Named(x), Node::Named(y)) => x.cmp(y),
            (Node::Sym(x), Node::Sym(y)) => x.cmp(y),
            (Node::Pow(b1, e1), Node::Pow(b2, e2)) => b1.cmp(b2).then_with(|| e1.cmp(e2)),
            (Node::Func(f1, a1), Node::Func(f2, a2)) => f1.cmp(f2).then_with(|| a1.cmp(a2)),
            (Node::Mul(x), Node::Mul(y)) | (Node::Add(x), Node::Add(y)) => cmp_slices(x, y),
            (
                Node::Order { var: v1, point: p1, degree: d1 },
                Node::Order { var: v2, point: p2, degree: d2 },
            ) => v1.cmp(v2).then_with(|| p1.cmp(p2)).then_with(|| d1.cmp(d2)),
            (
                Node::Limit { body: b1, var: v1, point: p1, dir: d1 },
                Node::Limit { body: b2, var: v2, point: p2, dir: d2 },
            ) => b1
                .cmp(b2)
                .then_with(|| v1.cmp(v2))
                .then_with(|| p1.cmp(p2))
                .then_with(|| d1.cmp(d2)),
            _ => unreachable!("equal ranks imply equal node kinds"),
        }
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::printer::to_infix(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", crate::printer::to_infix(self))
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Expr {
        Expr::rational(r)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Expr {
        Expr::symbol(s)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(&self, &rhs)
            }
        }
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(&self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add(vec![a.clone(), b.clone()]));
binop!(Sub, sub, |a, b| Expr::add(vec![a.clone(), -b]));
binop!(Mul, mul, |a, b| Expr::mul(vec![a.clone(), b.clone()]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self])
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self.clone()])
    }
}
