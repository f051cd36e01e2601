//! Symbols, their assumption sets, and the session symbol table.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Names that parse to constants rather than symbols.
pub const RESERVED_NAMES: &[&str] = &["pi", "E", "I", "oo"];

/// Assumption flags attached to a symbol.
///
/// `positive` and `integer` each imply `real`; the constructor methods keep
/// that closed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Assumptions {
    real: bool,
    positive: bool,
    integer: bool,
}

impl Assumptions {
    pub const NONE: Assumptions = Assumptions { real: false, positive: false, integer: false };
    pub const REAL: Assumptions = Assumptions { real: true, positive: false, integer: false };
    pub const POSITIVE: Assumptions = Assumptions { real: true, positive: true, integer: false };
    pub const INTEGER: Assumptions = Assumptions { real: true, positive: false, integer: true };

    pub fn new(real: bool, positive: bool, integer: bool) -> Self {
        Assumptions { real: real || positive || integer, positive, integer }
    }

    pub fn union(self, other: Assumptions) -> Self {
        Assumptions::new(
            self.real || other.real,
            self.positive || other.positive,
            self.integer || other.integer,
        )
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn is_integer(&self) -> bool {
        self.integer
    }

    pub fn is_empty(&self) -> bool {
        !self.real
    }

    /// Parses an assumption keyword (`real`, `positive`, `integer`).
    pub fn from_keyword(word: &str) -> Option<Assumptions> {
        match word {
            "real" => Some(Assumptions::REAL),
            "positive" => Some(Assumptions::POSITIVE),
            "integer" => Some(Assumptions::INTEGER),
            _ => None,
        }
    }
}

impl fmt::Display for Assumptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.positive {
            parts.push("positive");
        } else if self.real && !self.integer {
            parts.push("real");
        }
        if self.integer {
            parts.push("integer");
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A named indeterminate plus its assumptions.
///
/// Identity (equality, ordering, hashing) is by name only: within a session
/// a name denotes one symbol, and re-declaring it replaces the assumptions.
#[derive(Clone)]
pub struct Symbol {
    name: Arc<str>,
    assumptions: Assumptions,
}

pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Symbol {
    /// Creates a symbol, validating the name against `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn new(name: &str, assumptions: Assumptions) -> Result<Symbol> {
        if !is_valid_identifier(name) || RESERVED_NAMES.contains(&name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        Ok(Symbol { name: Arc::from(name), assumptions })
    }

    pub fn plain(name: &str) -> Result<Symbol> {
        Symbol::new(name, Assumptions::NONE)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn assumptions(&self) -> Assumptions {
        self.assumptions
    }

    pub fn with_assumptions(&self, assumptions: Assumptions) -> Symbol {
        Symbol { name: self.name.clone(), assumptions }
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.assumptions.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}{}", self.name, self.assumptions)
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Session-wide map from names to symbol descriptors.
///
/// This is the only mutable state in the kernel; callers serialize access.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    symbols: BTreeMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable::default()
    }

    /// Declares (or re-declares) `name`, replacing any previous assumptions.
    pub fn declare(&mut self, name: &str, assumptions: Assumptions) -> Result<Symbol> {
        let sym = Symbol::new(name, assumptions)?;
        self.symbols.insert(name.to_string(), sym.clone());
        Ok(sym)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    /// The declared symbol for `name`, or a fresh assumption-free one.
    pub fn resolve(&self, name: &str) -> Result<Symbol> {
        match self.symbols.get(name) {
            Some(s) => Ok(s.clone()),
            None => Symbol::plain(name),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifier_pattern() {
        assert!(Symbol::plain("s1").is_ok());
        assert!(Symbol::plain("_tmp").is_ok());
        assert!(matches!(Symbol::plain("2bad"), Err(Error::InvalidName(_))));
        assert!(Symbol::plain("").is_err());
        assert!(Symbol::plain("a-b").is_err());
        assert!(Symbol::plain("pi").is_err());
    }

    #[test]
    fn positive_implies_real() {
        let a = Assumptions::new(false, true, false);
        assert!(a.is_real());
        assert!(Assumptions::INTEGER.is_real());
    }

    #[test]
    fn redeclare_replaces() {
        let mut t = SymbolTable::new();
        t.declare("x", Assumptions::REAL).unwrap();
        t.declare("x", Assumptions::POSITIVE).unwrap();
        assert!(t.get("x").unwrap().assumptions().is_positive());
        assert_eq!(t.resolve("y").unwrap().assumptions(), Assumptions::NONE);
    }
}
