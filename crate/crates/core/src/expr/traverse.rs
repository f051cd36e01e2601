//! Substitution, free symbols, and structural rebuilding.

use std::collections::BTreeSet;

use super::{Expr, Node};
use crate::error::{Error, Result};
use crate::symbol::{Symbol, SymbolTable};

/// A set of simultaneous substitutions with distinct left-hand symbols.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    pairs: Vec<(Symbol, Expr)>,
}

impl Bindings {
    pub fn new(pairs: Vec<(Symbol, Expr)>) -> Result<Bindings> {
        for (i, (s, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|(t, _)| t == s) {
                return Err(Error::Domain(format!("symbol `{s}` is bound twice")));
            }
        }
        Ok(Bindings { pairs })
    }

    pub fn single(sym: &Symbol, value: &Expr) -> Bindings {
        Bindings { pairs: vec![(sym.clone(), value.clone())] }
    }

    pub fn get(&self, sym: &Symbol) -> Option<&Expr> {
        self.pairs.iter().find(|(s, _)| s == sym).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Symbol, Expr)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn without(&self, sym: &Symbol) -> Bindings {
        Bindings { pairs: self.pairs.iter().filter(|(s, _)| s != sym).cloned().collect() }
    }
}

impl Expr {
    /// Rebuilds this node from transformed children, re-canonicalizing.
    pub fn map_children(&self, f: &mut dyn FnMut(&Expr) -> Result<Expr>) -> Result<Expr> {
        Ok(match self.node() {
            Node::Const(_) | Node::Named(_) | Node::Sym(_) => self.clone(),
            Node::Pow(b, e) => Expr::pow(&f(b)?, &f(e)?)?,
            Node::Func(func, a) => Expr::func(*func, &f(a)?)?,
            Node::Mul(fs) => Expr::mul(fs.iter().map(|x| f(x)).collect::<Result<_>>()?),
            Node::Add(ts) => Expr::add(ts.iter().map(|x| f(x)).collect::<Result<_>>()?),
            Node::Order { var, point, degree } => Expr::order(var, &f(point)?, *degree),
            Node::Limit { body, var, point, dir } => Expr::limit(&f(body)?, var, &f(point)?, *dir),
        })
    }

    /// Simultaneous substitution. The variable of a deferred limit is bound
    /// and is never substituted inside the limit body.
    pub fn subs(&self, bindings: &Bindings) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        match self.node() {
            Node::Sym(s) => Ok(bindings.get(s).cloned().unwrap_or_else(|| self.clone())),
            Node::Order { var, point, degree } => {
                let var = match bindings.get(var).map(|v| v.node()) {
                    Some(Node::Sym(renamed)) => renamed.clone(),
                    _ => var.clone(),
                };
                Ok(Expr::order(&var, &point.subs(bindings)?, *degree))
            }
            Node::Limit { body, var, point, dir } => {
                let inner = bindings.without(var);
                Ok(Expr::limit(&body.subs(&inner)?, var, &point.subs(bindings)?, *dir))
            }
            _ => self.map_children(&mut |c| c.subs(bindings)),
        }
    }

    pub fn subs1(&self, sym: &Symbol, value: &Expr) -> Result<Expr> {
        self.subs(&Bindings::single(sym, value))
    }

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut out);
        out
    }

    /// Replaces every symbol by its current descriptor in `table`, so that
    /// re-declared assumptions take effect.
    pub fn refresh_symbols(&self, table: &SymbolTable) -> Result<Expr> {
        let pairs: Vec<(Symbol, Expr)> = self
            .free_symbols()
            .into_iter()
            .filter_map(|s| {
                let cur = table.get(s.name())?;
                (cur.assumptions() != s.assumptions()).then(|| (s, Expr::symbol(cur)))
            })
            .collect();
        self.subs(&Bindings { pairs })
    }
}

fn collect_free(e: &Expr, out: &mut BTreeSet<Symbol>) {
    match e.node() {
        Node::Const(_) | Node::Named(_) => {}
        Node::Sym(s) => {
            out.insert(s.clone());
        }
        Node::Pow(b, x) => {
            collect_free(b, out);
            collect_free(x, out);
        }
        Node::Func(_, a) => collect_free(a, out),
        Node::Mul(xs) | Node::Add(xs) => xs.iter().for_each(|x| collect_free(x, out)),
        Node::Order { var, point, .. } => {
            out.insert(var.clone());
            collect_free(point, out);
        }
        Node::Limit { body, var, point, .. } => {
            let mut inner = BTreeSet::new();
            collect_free(body, &mut inner);
            inner.remove(var);
            out.extend(inner);
            collect_free(point, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Direction;

    fn s(n: &str) -> Symbol {
        Symbol::plain(n).unwrap()
    }

    #[test]
    fn simultaneous() {
        let (x, y) = (s("x"), s("y"));
        let e = Expr::symbol(&x) - Expr::symbol(&y);
        let b = Bindings::new(vec![(x.clone(), Expr::symbol(&y)), (y.clone(), Expr::symbol(&x))]).unwrap();
        assert_eq!(e.subs(&b).unwrap(), Expr::symbol(&y) - Expr::symbol(&x));
    }

    #[test]
    fn duplicate_binding_rejected() {
        let x = s("x");
        assert!(Bindings::new(vec![(x.clone(), Expr::one()), (x, Expr::zero())]).is_err());
    }

    #[test]
    fn limit_variable_is_bound() {
        let n = s("n");
        let body = Expr::symbol(&n).recip().unwrap();
        let lim = Expr::limit(&body, &n, &Expr::infinity(), Direction::Both);
        assert_eq!(lim.subs1(&n, &Expr::int(3)).unwrap(), lim);
        assert!(lim.free_symbols().is_empty());
    }

    #[test]
    fn subs_canonicalizes() {
        let x = s("x");
        let e = Expr::symbol(&x) * Expr::symbol(&x).cos().unwrap();
        assert_eq!(e.subs1(&x, &Expr::zero()).unwrap(), Expr::zero());
    }
}
