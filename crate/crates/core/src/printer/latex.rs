//! LaTeX rendering (bare math-mode fragments).

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::infix::split_fraction;
use super::terms::ordered_terms;
use crate::expr::{Constant, Direction, Expr, Func, Node, Rational};

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
    "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon", "Phi", "Psi", "Omega",
];

fn base_name(name: &str) -> String {
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else {
        name.to_string()
    }
}

/// `y1 -> y_{1}`, `x_ab -> x_{ab}`, `beta1 -> \beta_{1}`.
pub fn symbol_latex(name: &str) -> String {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 && digits < name.len() && !name[..name.len() - digits].ends_with('_') {
        let (head, sub) = name.split_at(name.len() - digits);
        return format!("{}_{{{}}}", base_name(head), sub);
    }
    if let Some(pos) = name.find('_') {
        if pos > 0 && pos + 1 < name.len() {
            return format!("{}_{{{}}}", base_name(&name[..pos]), &name[pos + 1..]);
        }
    }
    base_name(name)
}

pub fn to_latex(e: &Expr) -> String {
    match e.node() {
        Node::Const(r) => rational_latex(r),
        Node::Named(c) => match c {
            Constant::Pi => "\\pi".into(),
            Constant::ImaginaryUnit => "i".into(),
            Constant::Infinity => "\\infty".into(),
        },
        Node::Sym(s) => symbol_latex(s.name()),
        Node::Add(_) => add_latex(e),
        Node::Mul(_) => mul_latex(e),
        Node::Pow(b, x) => pow_latex(e, b, x),
        Node::Func(f, a) => func_latex(*f, a, None),
        Node::Order { var, point, degree } => {
            let v = Expr::symbol(var);
            if point.is_zero() {
                format!("O\\left({}\\right)", to_latex(&raw_power(&v, *degree)))
            } else {
                let base = Expr::symbol(var) - point;
                format!(
                    "O\\left({}; {} \\rightarrow {}\\right)",
                    to_latex(&raw_power(&base, *degree)),
                    to_latex(&v),
                    to_latex(point)
                )
            }
        }
        Node::Limit { body, var, point, dir } => {
            let mut head = format!("\\lim_{{{} \\to {}", symbol_latex(var.name()), to_latex(point));
            if !point.is_infinite() {
                match dir {
                    Direction::Right => head.push_str("^+"),
                    Direction::Left => head.push_str("^-"),
                    Direction::Both => {}
                }
            }
            head.push('}');
            match body.node() {
                Node::Add(_) | Node::Mul(_) => format!("{head}\\left({}\\right)", to_latex(body)),
                _ => format!("{head} {}", to_latex(body)),
            }
        }
    }
}

fn raw_power(base: &Expr, degree: u32) -> Expr {
    if degree == 1 {
        base.clone()
    } else {
        Expr::from_node(Node::Pow(base.clone(), Expr::int(degree as i64)))
    }
}

fn rational_latex(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_string();
    }
    let sign = if r.is_negative() { "- " } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
}

fn add_latex(e: &Expr) -> String {
    let mut out = String::new();
    for (i, t) in ordered_terms(e).iter().enumerate() {
        if i == 0 {
            out.push_str(&to_latex(t));
        } else if t.has_negative_coeff() {
            out.push_str(" - ");
            out.push_str(&to_latex(&-t));
        } else {
            out.push_str(" + ");
            out.push_str(&to_latex(t));
        }
    }
    out
}

/// Juxtaposes factors, bracketing sums and separating adjacent digits.
fn juxtapose(fs: &[Expr]) -> String {
    if fs.len() == 1 {
        return to_latex(&fs[0]);
    }
    let mut out = String::new();
    for f in fs {
        let mut s = to_latex(f);
        if matches!(f.node(), Node::Add(_)) || f.has_negative_coeff() {
            s = format!("\\left({s}\\right)");
        }
        if !out.is_empty() {
            let prev_digit = out.ends_with(|c: char| c.is_ascii_digit());
            let next_digit = s.starts_with(|c: char| c.is_ascii_digit());
            out.push_str(if prev_digit && next_digit { " \\cdot " } else { " " });
        }
        out.push_str(&s);
    }
    out
}

fn mul_latex(e: &Expr) -> String {
    let (negative, num, den) = split_fraction(e);
    let sign = if negative { "- " } else { "" };
    let numer = if num.is_empty() { "1".to_string() } else { juxtapose(&num) };
    if den.is_empty() {
        if negative && num.len() == 1 && matches!(num[0].node(), Node::Add(_)) {
            return format!("- \\left({numer}\\right)");
        }
        return format!("{sign}{numer}");
    }
    format!("{sign}\\frac{{{numer}}}{{{}}}", juxtapose(&den))
}

fn needs_base_brackets(b: &Expr) -> bool {
    match b.node() {
        Node::Const(r) => r.is_negative() || !r.is_integer(),
        Node::Add(_) | Node::Mul(_) | Node::Pow(..) | Node::Order { .. } | Node::Limit { .. } => true,
        _ => false,
    }
}

fn pow_latex(e: &Expr, b: &Expr, x: &Expr) -> String {
    if let Some(q) = x.as_rational() {
        if q.is_negative() {
            return mul_latex(e);
        }
        if q.numer().is_one() && !q.is_integer() {
            if *q.denom() == BigInt::from(2) {
                return format!("\\sqrt{{{}}}", to_latex(b));
            }
            return format!("\\sqrt[{}]{{{}}}", q.denom(), to_latex(b));
        }
    }
    let exp = to_latex(x);
    if let Node::Func(f, a) = b.node() {
        if matches!(f, Func::Sin | Func::Cos) {
            return func_latex(*f, a, Some(&exp));
        }
    }
    let base = if needs_base_brackets(b) {
        format!("\\left({}\\right)", to_latex(b))
    } else {
        to_latex(b)
    };
    format!("{base}^{{{exp}}}")
}

fn func_latex(f: Func, a: &Expr, power: Option<&str>) -> String {
    let arg = to_latex(a);
    match f {
        Func::Exp => {
            if a.is_one() {
                "e".into()
            } else {
                format!("e^{{{arg}}}")
            }
        }
        Func::Abs => format!("\\left|{{{arg}}}\\right|"),
        _ => {
            let head = match power {
                Some(p) => format!("\\{}^{{{p}}}", f.name()),
                None => format!("\\{}", f.name()),
            };
            format!("{head}{{\\left({arg} \\right)}}")
        }
    }
}

/// Renders a row-major grid of entries as a bracketed matrix.
pub fn matrix_latex(rows: &[Vec<Expr>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(to_latex).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\left[\\begin{{matrix}}{}\\end{{matrix}}\\right]", body.join("\\\\"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol;

    fn s(n: &str) -> Expr {
        Expr::symbol(&Symbol::plain(n).unwrap())
    }

    #[test]
    fn symbols() {
        assert_eq!(symbol_latex("y1"), "y_{1}");
        assert_eq!(symbol_latex("beta1"), "\\beta_{1}");
        assert_eq!(symbol_latex("x"), "x");
        assert_eq!(symbol_latex("lambda"), "\\lambda");
    }

    #[test]
    fn determinant_juxtaposition() {
        let (a, b, c, d) = (s("a"), s("b"), s("c"), s("d"));
        assert_eq!(to_latex(&(&a * &d - &b * &c)), "a d - b c");
    }

    #[test]
    fn fractions_and_functions() {
        let x = s("x");
        assert_eq!(to_latex(&Expr::frac(-1, 2)), "- \\frac{1}{2}");
        assert_eq!(to_latex(&(Expr::frac(1, 24) * x.powi(4).unwrap())), "\\frac{x^{4}}{24}");
        assert_eq!(to_latex(&x.powi(2).unwrap().cos().unwrap()), "\\cos{\\left(x^{2} \\right)}");
        assert_eq!(to_latex(&x.abs().unwrap()), "\\left|{x}\\right|");
        assert_eq!(to_latex(&Expr::e()), "e");
    }

    #[test]
    fn euler_limit() {
        let n = Symbol::plain("n").unwrap();
        let ne = Expr::symbol(&n);
        let body = Expr::pow(&(Expr::one() + ne.recip().unwrap()), &ne).unwrap();
        let lim = Expr::limit(&body, &n, &Expr::infinity(), Direction::Both);
        assert_eq!(
            to_latex(&lim),
            "\\lim_{n \\to \\infty} \\left(1 + \\frac{1}{n}\\right)^{n}"
        );
    }
}
