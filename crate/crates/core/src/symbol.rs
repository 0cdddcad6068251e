use std::collections::HashMap;

/// Interned symbol of a grammar alphabet.
pub type Sym = u32;

/// Name interner shared by a grammar's terminals, non-terminals and any
/// generated symbols.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), s);
        s
    }

    /// Interns a name not yet in the table, priming `base` until it is fresh.
    pub fn fresh(&mut self, base: &str) -> Sym {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        self.intern(&name)
    }

    pub fn get(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Renders a word with single-space separators.
    pub fn render(&self, w: &[Sym]) -> String {
        w.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Renders a word by plain concatenation (readable when every name is a
    /// single character).
    pub fn render_compact(&self, w: &[Sym]) -> String {
        w.iter().map(|&s| self.name(s)).collect()
    }
}

/// Splits user text into symbol names: on whitespace if present, otherwise
/// the whole text if it is itself a known name, otherwise per character.
pub fn split_word(text: &str, is_name: impl Fn(&str) -> bool) -> Vec<String> {
    let text = text.trim();
    if text.is_empty() {
        return Vec::new();
    }
    if text.contains(char::is_whitespace) {
        return text.split_whitespace().map(str::to_string).collect();
    }
    if is_name(text) {
        return vec![text.to_string()];
    }
    text.chars().map(|c| c.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut t = SymbolTable::new();
        let a = t.intern("α");
        let a2 = t.fresh("α");
        assert_ne!(a, a2);
        assert_eq!(t.name(a2), "α'");
        assert_eq!(t.intern("α"), a);
    }

    #[test]
    fn word_splitting() {
        let known = |s: &str| s == "tau";
        assert_eq!(split_word("a b", known), vec!["a", "b"]);
        assert_eq!(split_word("tau", known), vec!["tau"]);
        assert_eq!(split_word("ab", known), vec!["a", "b"]);
        assert!(split_word("  ", known).is_empty());
    }
}
