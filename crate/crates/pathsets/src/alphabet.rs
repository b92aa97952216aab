//! Ordered label alphabets shared by every graph.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered finite set of label symbols.
///
/// The ordering is fixed at construction and drives all deterministic
/// tie-breaking in the crate: greedy witness walks, breadth-first
/// renumbering of canonical presentations, and edge sort order. Cloning is
/// cheap (the symbol table is shared), and equality compares the symbol
/// sequences, not the allocations.
#[derive(Clone)]
pub struct Alphabet {
    inner: Arc<Inner>,
}

struct Inner {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    /// Builds an alphabet from distinct, non-empty, whitespace-free symbols.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet(
                "an alphabet needs at least one symbol".into(),
            ));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol {s:?} is empty or contains whitespace"
                )));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Self {
            inner: Arc::new(Inner { symbols, index }),
        })
    }

    /// The alphabet `{0, 1, ..., g-1}` written in decimal.
    pub fn decimal(g: usize) -> Self {
        assert!(g >= 1, "decimal alphabet needs at least one symbol");
        Self::new((0..g).map(|i| i.to_string())).expect("decimal symbols are valid")
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.inner.symbols.len()
    }

    /// Always false; alphabets are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.inner.symbols.is_empty()
    }

    /// The symbol at position `idx` of the ordering.
    pub fn symbol(&self, idx: usize) -> &str {
        &self.inner.symbols[idx]
    }

    /// Position of `sym` in the ordering, if present.
    pub fn index_of(&self, sym: &str) -> Option<usize> {
        self.inner.index.get(sym).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.inner.symbols.iter().map(String::as_str)
    }

    /// A new alphabet with `extra` appended at the end of the ordering.
    ///
    /// Existing symbols keep their indices, so edge labels of graphs over
    /// `self` remain valid over the extension.
    pub fn extended(&self, extra: &str) -> Result<Alphabet> {
        if self.index_of(extra).is_some() {
            return Err(Error::SymbolCollision(extra.to_string()));
        }
        let mut symbols: Vec<String> = self.inner.symbols.clone();
        symbols.push(extra.to_string());
        Alphabet::new(symbols)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.symbols == other.inner.symbols
    }
}

impl Eq for Alphabet {}

impl Hash for Alphabet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.symbols.hash(state);
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet").field(&self.inner.symbols).finish()
    }
}
