//! Words avoiding a set of forbidden length-`k` patterns.
//!
//! A word is S-free when none of its length-`k` windows lies in `S`; words
//! shorter than `k` are S-free. Counting runs a dynamic program over an
//! Aho-Corasick automaton of `S`. All patterns draw their symbols from a
//! subset `I` of the alphabet, so every symbol outside `I` sends the
//! automaton back to its root and those `q - l` symbols are folded into one
//! weighted transition. The cost of counting is therefore independent of `q`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::aho::{Trie, ROOT};
use crate::error::{param, Error, Result};
use crate::words::{check_alphabet, Symbol, Word};

/// Largest explicitly stored pattern set.
pub const MAX_EXPLICIT_PATTERNS: usize = 1 << 20;

/// Largest dense transition table (states x |I|) an automaton may allocate.
pub const MAX_TRANSITION_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Patterns {
    /// S = I^k, kept symbolic.
    Full,
    Explicit(BTreeSet<Vec<Symbol>>),
}

/// The forbidden-pattern material `(k, I, S)` with `S ⊆ I^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    q: u32,
    k: usize,
    // sorted, distinct
    prefix_symbols: Vec<Symbol>,
    patterns: Patterns,
}

impl PatternSet {
    /// Explicit pattern set over the prefix alphabet `i_symbols`.
    pub fn new(q: u32, i_symbols: Vec<Symbol>, patterns: Vec<Vec<Symbol>>) -> Result<Self> {
        check_alphabet(q)?;
        let i_set: BTreeSet<Symbol> = i_symbols.iter().copied().collect();
        if i_set.len() != i_symbols.len() {
            return param("prefix alphabet I has repeated symbols");
        }
        let l = i_set.len();
        if l == 0 || l as u64 > u64::from(q) - 1 {
            return param(format!("|I| = {l} must lie in [1, q-1] = [1, {}]", q - 1));
        }
        if let Some(&s) = i_set.iter().find(|&&s| u32::from(s) >= q) {
            return param(format!("symbol {s} of I not below q = {q}"));
        }
        let Some(k) = patterns.first().map(Vec::len) else {
            return param("pattern set S must be non-empty");
        };
        if k == 0 {
            return param("patterns must have length k >= 1");
        }
        if patterns.len() > MAX_EXPLICIT_PATTERNS {
            return Err(Error::Capacity(format!(
                "{} patterns exceed the explicit cap {MAX_EXPLICIT_PATTERNS}",
                patterns.len()
            )));
        }
        let mut set = BTreeSet::new();
        for p in patterns {
            if p.len() != k {
                return param("all patterns must have the same length k");
            }
            if let Some(s) = p.iter().find(|s| !i_set.contains(s)) {
                return param(format!("pattern symbol {s} is not in I"));
            }
            if !set.insert(p) {
                return param("duplicate pattern in S");
            }
        }
        Ok(PatternSet {
            q,
            k,
            prefix_symbols: i_set.into_iter().collect(),
            patterns: Patterns::Explicit(set),
        })
    }

    /// `S = I^k` with canonical `I = {0, ..., l-1}`.
    pub fn full(q: u32, l: u32, k: usize) -> Result<Self> {
        check_alphabet(q)?;
        if l == 0 || l >= q {
            return param(format!("l = {l} must lie in [1, q-1]"));
        }
        if k == 0 {
            return param("k must be at least 1");
        }
        Ok(PatternSet {
            q,
            k,
            prefix_symbols: (0..l).map(|s| s as Symbol).collect(),
            patterns: Patterns::Full,
        })
    }

    /// `S = {0^k}` with `I = {0}`.
    pub fn zeros(q: u32, k: usize) -> Result<Self> {
        PatternSet::full(q, 1, k)
    }

    /// The lexicographically first `s` words of `I^k`, `I = {0, ..., l-1}`.
    pub fn lex_first(q: u32, l: u32, k: usize, s: u64) -> Result<Self> {
        let full = PatternSet::full(q, l, k)?;
        let total = BigUint::from(l).pow(k as u32);
        if s == 0 || BigUint::from(s) > total {
            return param(format!("|S| = {s} must lie in [1, l^k = {total}]"));
        }
        if BigUint::from(s) == total {
            return Ok(full);
        }
        if s as usize > MAX_EXPLICIT_PATTERNS {
            return Err(Error::Capacity(format!(
                "|S| = {s} exceeds the explicit pattern cap {MAX_EXPLICIT_PATTERNS}"
            )));
        }
        let patterns: BTreeSet<Vec<Symbol>> = full.iter_patterns().take(s as usize).collect();
        Ok(PatternSet {
            patterns: Patterns::Explicit(patterns),
            ..full
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `l = |I|`.
    pub fn l(&self) -> u32 {
        self.prefix_symbols.len() as u32
    }

    pub fn prefix_symbols(&self) -> &[Symbol] {
        &self.prefix_symbols
    }

    /// `|S|`.
    pub fn size(&self) -> BigUint {
        match &self.patterns {
            Patterns::Full => BigUint::from(self.l()).pow(self.k as u32),
            Patterns::Explicit(set) => BigUint::from(set.len()),
        }
    }

    pub fn contains(&self, window: &[Symbol]) -> bool {
        if window.len() != self.k {
            return false;
        }
        match &self.patterns {
            Patterns::Full => window
                .iter()
                .all(|s| self.prefix_symbols.binary_search(s).is_ok()),
            Patterns::Explicit(set) => set.contains(window),
        }
    }

    /// Members of `S` in lexicographic order.
    pub fn iter_patterns(&self) -> Box<dyn Iterator<Item = Vec<Symbol>> + '_> {
        match &self.patterns {
            Patterns::Explicit(set) => Box::new(set.iter().cloned()),
            Patterns::Full => {
                let alpha = &self.prefix_symbols;
                let k = self.k;
                let mut digits: Option<Vec<usize>> = Some(vec![0; k]);
                Box::new(std::iter::from_fn(move || {
                    let cur = digits.as_mut()?;
                    let out: Vec<Symbol> = cur.iter().map(|&d| alpha[d]).collect();
                    let mut i = k;
                    loop {
                        if i == 0 {
                            digits = None;
                            break;
                        }
                        i -= 1;
                        cur[i] += 1;
                        if cur[i] < alpha.len() {
                            break;
                        }
                        cur[i] = 0;
                    }
                    Some(out)
                }))
            }
        }
    }

    /// Builds the counting automaton.
    pub fn automaton(&self) -> Result<SFreeAutomaton> {
        SFreeAutomaton::build(self)
    }
}

const DEAD: u32 = u32::MAX;

/// Deterministic automaton recognising the S-free words.
///
/// State 0 is the root. Transitions are stored densely for the symbols of
/// `I`; every other symbol returns to the root. Completing a member of `S`
/// enters an absorbing dead state, which is not stored.
#[derive(Debug, Clone)]
pub struct SFreeAutomaton {
    q: u32,
    prefix_symbols: Vec<Symbol>,
    states: usize,
    // transitions[state * l + index of symbol in I]
    transitions: Vec<u32>,
}

impl SFreeAutomaton {
    fn build(p: &PatternSet) -> Result<Self> {
        let l = p.prefix_symbols.len();
        match &p.patterns {
            // State i counts the trailing run of I symbols.
            Patterns::Full => {
                let k = p.k;
                check_table(k, l)?;
                let mut transitions = Vec::with_capacity(k * l);
                for run in 0..k {
                    let to = if run + 1 < k { (run + 1) as u32 } else { DEAD };
                    transitions.extend(std::iter::repeat_n(to, l));
                }
                Ok(SFreeAutomaton {
                    q: p.q,
                    prefix_symbols: p.prefix_symbols.clone(),
                    states: k,
                    transitions,
                })
            }
            Patterns::Explicit(set) => {
                let trie = Trie::build(p.k, set.iter().map(Vec::as_slice));
                // Compact the trie nodes of depth < k.
                let mut index = vec![DEAD; trie.len()];
                let mut live = Vec::new();
                for node in 0..trie.len() as u32 {
                    if trie.depth(node) < trie.pattern_len() {
                        index[node as usize] = live.len() as u32;
                        live.push(node);
                    }
                }
                check_table(live.len(), l)?;
                debug_assert_eq!(live[0], ROOT);
                let mut transitions = Vec::with_capacity(live.len() * l);
                for &node in &live {
                    for &a in &p.prefix_symbols {
                        let to = trie.next(node, a);
                        transitions.push(if trie.is_match(to) {
                            DEAD
                        } else {
                            index[to as usize]
                        });
                    }
                }
                Ok(SFreeAutomaton {
                    q: p.q,
                    prefix_symbols: p.prefix_symbols.clone(),
                    states: live.len(),
                    transitions,
                })
            }
        }
    }

    /// Number of live states (the dead state excluded).
    pub fn state_count(&self) -> usize {
        self.states
    }

    /// `None` means the dead state.
    pub fn step(&self, state: usize, a: Symbol) -> Option<usize> {
        match self.prefix_symbols.binary_search(&a) {
            Ok(i) => {
                let to = self.transitions[state * self.prefix_symbols.len() + i];
                (to != DEAD).then_some(to as usize)
            }
            Err(_) => Some(0),
        }
    }

    pub fn accepts(&self, symbols: &[Symbol]) -> bool {
        symbols
            .iter()
            .try_fold(0usize, |s, &a| self.step(s, a))
            .is_some()
    }

    /// Number of S-free words of length `r` over the full alphabet.
    pub fn count(&self, r: usize) -> BigUint {
        let l = self.prefix_symbols.len();
        let reset = BigUint::from(self.q - l as u32);
        let mut cur = vec![BigUint::zero(); self.states];
        cur[0] = BigUint::one();
        let mut next = vec![BigUint::zero(); self.states];
        for _ in 0..r {
            let mut to_root = BigUint::zero();
            for (s, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                to_root += c;
                for &to in &self.transitions[s * l..(s + 1) * l] {
                    if to != DEAD {
                        next[to as usize] += c;
                    }
                }
            }
            next[0] += to_root * &reset;
            std::mem::swap(&mut cur, &mut next);
            next.iter_mut().for_each(|x| x.set_zero());
        }
        cur.into_iter().sum()
    }
}

fn check_table(states: usize, l: usize) -> Result<()> {
    if states.saturating_mul(l) > MAX_TRANSITION_ENTRIES {
        return Err(Error::Capacity(format!(
            "automaton table {states} x {l} exceeds {MAX_TRANSITION_ENTRIES} entries"
        )));
    }
    Ok(())
}

/// True iff no length-`k` window of `w` lies in `S`.
pub fn is_sfree(w: &Word, p: &PatternSet) -> Result<bool> {
    if w.q() != p.q {
        return param(format!("alphabet mismatch: word q={}, patterns q={}", w.q(), p.q));
    }
    Ok(w.symbols().windows(p.k).all(|win| !p.contains(win)))
}

/// Exact number of S-free words of length `r` over `{0, ..., q-1}`.
pub fn count_sfree(p: &PatternSet, r: usize) -> Result<BigUint> {
    Ok(p.automaton()?.count(r))
}

/// Union bound `q^r - (r-k+1)|S|q^(r-k)`; may be negative.
pub fn sfree_lower_bound(p: &PatternSet, r: usize) -> Result<BigInt> {
    let k = p.k;
    if r < k {
        return param(format!("r = {r} < k = {k}: every word is S-free"));
    }
    let q = BigInt::from(p.q);
    let total = q.pow(r as u32);
    let hits = BigInt::from(r - k + 1) * BigInt::from(p.size()) * q.pow((r - k) as u32);
    Ok(total - hits)
}
