//! Three-valued assumption queries.
//!
//! Facts are propagated bottom-up from constants and symbol assumptions.
//! Every rule is sound: when a fact cannot be established it is `Unknown`,
//! never a guess.

use num_traits::{Signed, Zero};

use crate::expr::{Constant, Expr, Func, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn is_no(self) -> bool {
        self == Tri::No
    }

    fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Real,
    Positive,
    Negative,
    Nonnegative,
    Integer,
    Nonzero,
}

impl Property {
    pub fn from_keyword(word: &str) -> Option<Property> {
        Some(match word {
            "real" => Property::Real,
            "positive" => Property::Positive,
            "negative" => Property::Negative,
            "nonnegative" => Property::Nonnegative,
            "integer" => Property::Integer,
            "nonzero" => Property::Nonzero,
            _ => return None,
        })
    }
}

/// Known facts about a value.
#[derive(Debug, Clone, Copy)]
struct Facts {
    real: Tri,
    pos: Tri,
    neg: Tri,
    zero: Tri,
    integer: Tri,
    /// Purely imaginary and nonzero.
    imag: Tri,
}

const UNKNOWN: Facts = Facts {
    real: Tri::Unknown,
    pos: Tri::Unknown,
    neg: Tri::Unknown,
    zero: Tri::Unknown,
    integer: Tri::Unknown,
    imag: Tri::Unknown,
};

impl Facts {
    fn positive_real() -> Facts {
        Facts { real: Tri::Yes, pos: Tri::Yes, neg: Tri::No, zero: Tri::No, integer: Tri::Unknown, imag: Tri::No }
    }

    fn real() -> Facts {
        Facts { real: Tri::Yes, imag: Tri::No, ..UNKNOWN }
    }

    fn nonneg(&self) -> Tri {
        if self.pos.is_yes() || self.zero.is_yes() || (self.real.is_yes() && self.neg.is_no()) {
            Tri::Yes
        } else if self.neg.is_yes() || self.real.is_no() {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    fn nonpos(&self) -> Tri {
        if self.neg.is_yes() || self.zero.is_yes() || (self.real.is_yes() && self.pos.is_no()) {
            Tri::Yes
        } else if self.pos.is_yes() || self.real.is_no() {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    fn nonzero(&self) -> Tri {
        if self.pos.is_yes() || self.neg.is_yes() || self.imag.is_yes() {
            Tri::Yes
        } else {
            self.zero.not()
        }
    }

    /// Fills in implied facts.
    fn close(mut self) -> Facts {
        if self.pos.is_yes() || self.neg.is_yes() {
            self.real = Tri::Yes;
            self.zero = Tri::No;
        }
        if self.pos.is_yes() {
            self.neg = Tri::No;
        }
        if self.neg.is_yes() {
            self.pos = Tri::No;
        }
        if self.integer.is_yes() {
            self.real = Tri::Yes;
        }
        if self.real.is_yes() {
            self.imag = Tri::No;
        }
        if self.imag.is_yes() || self.real.is_no() {
            self.real = Tri::No;
            self.pos = Tri::No;
            self.neg = Tri::No;
            self.zero = Tri::No;
            self.integer = Tri::No;
        }
        self
    }
}

/// Answers whether `e` provably has `prop` (`Yes`), provably lacks it (`No`),
/// or neither can be established (`Unknown`).
pub fn ask(e: &Expr, prop: Property) -> Tri {
    let f = facts(e);
    match prop {
        Property::Real => f.real,
        Property::Positive => f.pos,
        Property::Negative => f.neg,
        Property::Nonnegative => f.nonneg(),
        Property::Integer => f.integer,
        Property::Nonzero => f.nonzero(),
    }
}

fn facts(e: &Expr) -> Facts {
    match e.node() {
        Node::Const(r) => Facts {
            real: Tri::Yes,
            pos: Tri::from_bool(r.is_positive()),
            neg: Tri::from_bool(r.is_negative()),
            zero: Tri::from_bool(r.is_zero()),
            integer: Tri::from_bool(r.is_integer()),
            imag: Tri::No,
        },
        Node::Named(Constant::Pi) => Facts { integer: Tri::No, ..Facts::positive_real() },
        Node::Named(Constant::ImaginaryUnit) => Facts { imag: Tri::Yes, ..UNKNOWN }.close(),
        Node::Named(Constant::Infinity) => Facts { zero: Tri::No, ..UNKNOWN },
        Node::Sym(s) => {
            let a = s.assumptions();
            let mut f = UNKNOWN;
            if a.is_real() {
                f.real = Tri::Yes;
            }
            if a.is_positive() {
                f.pos = Tri::Yes;
            }
            if a.is_integer() {
                f.integer = Tri::Yes;
            }
            f.close()
        }
        Node::Add(ts) => add_facts(&ts.iter().map(facts).collect::<Vec<_>>()),
        Node::Mul(fs) => mul_facts(&fs.iter().map(facts).collect::<Vec<_>>()),
        Node::Pow(b, x) => pow_facts(b, x),
        Node::Func(func, a) => func_facts(*func, a),
        Node::Order { .. } | Node::Limit { .. } => UNKNOWN,
    }
}

fn all(fs: &[Facts], p: impl Fn(&Facts) -> bool) -> bool {
    fs.iter().all(p)
}

fn add_facts(fs: &[Facts]) -> Facts {
    let mut out = UNKNOWN;
    if all(fs, |f| f.real.is_yes()) {
        out.real = Tri::Yes;
    } else {
        let imag = fs.iter().filter(|f| f.imag.is_yes()).count();
        let real = fs.iter().filter(|f| f.real.is_yes()).count();
        if imag == 1 && real == fs.len() - 1 {
            out.real = Tri::No;
        }
    }
    if out.real.is_yes() {
        let nonneg = all(fs, |f| f.nonneg().is_yes());
        let nonpos = all(fs, |f| f.nonpos().is_yes());
        if nonneg && fs.iter().any(|f| f.pos.is_yes()) {
            out.pos = Tri::Yes;
        } else if nonpos {
            out.pos = Tri::No;
        }
        if nonpos && fs.iter().any(|f| f.neg.is_yes()) {
            out.neg = Tri::Yes;
        } else if nonneg {
            out.neg = Tri::No;
        }
    }
    if all(fs, |f| f.integer.is_yes()) {
        out.integer = Tri::Yes;
    }
    out.close()
}

fn mul_facts(fs: &[Facts]) -> Facts {
    let mut out = UNKNOWN;
    if fs.iter().any(|f| f.zero.is_yes()) {
        return Facts { zero: Tri::Yes, pos: Tri::No, neg: Tri::No, real: Tri::Yes, imag: Tri::No, integer: Tri::Yes };
    }
    if all(fs, |f| f.nonzero().is_yes()) {
        out.zero = Tri::No;
    }
    let imag = fs.iter().filter(|f| f.imag.is_yes()).count();
    let real = fs.iter().filter(|f| f.real.is_yes()).count();
    if imag + real == fs.len() && out.zero.is_no() {
        if imag % 2 == 1 {
            out.imag = Tri::Yes;
        } else {
            out.real = Tri::Yes;
        }
    } else if real == fs.len() {
        out.real = Tri::Yes;
    }
    if out.real.is_yes() && imag == 0 {
        let signs_known = all(fs, |f| f.pos.is_yes() || f.neg.is_yes());
        if signs_known {
            let negatives = fs.iter().filter(|f| f.neg.is_yes()).count();
            if negatives % 2 == 0 {
                out.pos = Tri::Yes;
            } else {
                out.neg = Tri::Yes;
            }
        } else {
            let nonneg_like = fs.iter().all(|f| f.nonneg().is_yes() || f.nonpos().is_yes());
            if nonneg_like {
                let nonpos_count = fs.iter().filter(|f| !f.nonneg().is_yes()).count();
                // Product of known-sign-or-zero factors is >= 0 or <= 0.
                if nonpos_count % 2 == 0 {
                    out.neg = Tri::No;
                } else {
                    out.pos = Tri::No;
                }
            }
        }
    }
    if all(fs, |f| f.integer.is_yes()) {
        out.integer = Tri::Yes;
    }
    out.close()
}

fn pow_facts(b: &Expr, x: &Expr) -> Facts {
    let fb = facts(b);
    if let Some(q) = x.as_rational() {
        if q.is_integer() {
            let even = (q.numer() % 2u32).is_zero();
            let mut out = UNKNOWN;
            if fb.real.is_yes() {
                out.real = Tri::Yes;
                if even {
                    out.neg = Tri::No;
                    if fb.nonzero().is_yes() {
                        out.pos = Tri::Yes;
                    }
                } else {
                    out.pos = fb.pos;
                    out.neg = fb.neg;
                }
                if fb.nonzero().is_yes() {
                    out.zero = Tri::No;
                }
            } else if fb.imag.is_yes() {
                if even {
                    out.real = Tri::Yes;
                    out.zero = Tri::No;
                } else {
                    out.imag = Tri::Yes;
                }
            }
            if fb.integer.is_yes() && !q.is_negative() {
                out.integer = Tri::Yes;
            }
            return out.close();
        }
        if fb.pos.is_yes() {
            return Facts::positive_real();
        }
        let odd_den = !(q.denom() % 2u32).is_zero();
        if odd_den && fb.real.is_yes() {
            let mut out = Facts::real();
            let odd_num = !(q.numer() % 2u32).is_zero();
            if odd_num {
                out.neg = fb.neg;
            } else {
                out.neg = Tri::No;
            }
            if fb.nonzero().is_yes() {
                out.zero = Tri::No;
                if !odd_num {
                    out.pos = Tri::Yes;
                }
            }
            return out.close();
        }
        if fb.nonneg().is_yes() && q.is_positive() {
            return Facts { neg: Tri::No, ..Facts::real() }.close();
        }
        if fb.neg.is_yes() && *q.denom() == 2.into() {
            return Facts { imag: Tri::Yes, ..UNKNOWN }.close();
        }
        return UNKNOWN;
    }
    if fb.pos.is_yes() && facts(x).real.is_yes() {
        return Facts::positive_real();
    }
    UNKNOWN
}

fn func_facts(func: Func, a: &Expr) -> Facts {
    let fa = facts(a);
    match func {
        Func::Exp if fa.real.is_yes() => Facts::positive_real(),
        Func::Log if fa.pos.is_yes() => Facts::real(),
        Func::Sin | Func::Cos if fa.real.is_yes() => Facts::real(),
        Func::Abs => {
            let mut out = Facts { neg: Tri::No, ..Facts::real() };
            if fa.nonzero().is_yes() {
                out.pos = Tri::Yes;
            }
            out.zero = fa.zero;
            out.close()
        }
        _ => UNKNOWN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{Assumptions, Symbol};

    fn sym(n: &str, a: Assumptions) -> Expr {
        Expr::symbol(&Symbol::new(n, a).unwrap())
    }

    #[test]
    fn declared_assumptions() {
        let x = sym("x", Assumptions::REAL);
        assert_eq!(ask(&x, Property::Real), Tri::Yes);
        let p = sym("p", Assumptions::POSITIVE);
        assert_eq!(ask(&p, Property::Positive), Tri::Yes);
        assert_eq!(ask(&sym("z", Assumptions::NONE), Property::Real), Tri::Unknown);
    }

    #[test]
    fn constants() {
        assert_eq!(ask(&Expr::int(-3), Property::Positive), Tri::No);
        assert_eq!(ask(&Expr::imaginary_unit(), Property::Real), Tri::No);
        assert_eq!(ask(&-Expr::imaginary_unit(), Property::Real), Tri::No);
        assert_eq!(ask(&Expr::pi(), Property::Positive), Tri::Yes);
    }

    #[test]
    fn sums_and_products_of_positives() {
        let x = sym("x", Assumptions::POSITIVE);
        let y = sym("y", Assumptions::POSITIVE);
        assert_eq!(ask(&(&x + &y), Property::Positive), Tri::Yes);
        assert_eq!(ask(&(&x * &y), Property::Positive), Tri::Yes);
        assert_eq!(ask(&(&x - &y), Property::Positive), Tri::Unknown);
        assert_eq!(ask(&(-&x - &y), Property::Positive), Tri::No);
    }

    #[test]
    fn squares_of_reals() {
        let r = sym("r", Assumptions::REAL);
        let sq = r.powi(2).unwrap();
        assert_eq!(ask(&sq, Property::Real), Tri::Yes);
        assert_eq!(ask(&sq, Property::Nonnegative), Tri::Yes);
        assert_eq!(ask(&sq, Property::Positive), Tri::Unknown);
    }
}
