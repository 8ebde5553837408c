//! Aho-Corasick trie over equal-length patterns with failure links.

use std::collections::VecDeque;

use crate::words::Symbol;

pub(crate) const ROOT: u32 = 0;

#[derive(Debug, Clone)]
struct Node {
    // sorted by symbol
    children: Vec<(Symbol, u32)>,
    fail: u32,
    depth: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Trie {
    nodes: Vec<Node>,
    pattern_len: usize,
}

impl Trie {
    /// All patterns must have length `pattern_len >= 1`.
    pub(crate) fn build<'a>(pattern_len: usize, patterns: impl IntoIterator<Item = &'a [Symbol]>) -> Self {
        let mut nodes = vec![Node {
            children: Vec::new(),
            fail: ROOT,
            depth: 0,
        }];
        for p in patterns {
            debug_assert_eq!(p.len(), pattern_len);
            let mut cur = ROOT;
            for &a in p {
                let node = &nodes[cur as usize];
                cur = match node.children.binary_search_by_key(&a, |&(s, _)| s) {
                    Ok(i) => node.children[i].1,
                    Err(i) => {
                        let id = nodes.len() as u32;
                        let depth = nodes[cur as usize].depth + 1;
                        nodes[cur as usize].children.insert(i, (a, id));
                        nodes.push(Node {
                            children: Vec::new(),
                            fail: ROOT,
                            depth,
                        });
                        id
                    }
                };
            }
        }
        let mut trie = Trie { nodes, pattern_len };
        trie.link();
        trie
    }

    fn link(&mut self) {
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &(_, c) in &self.nodes[ROOT as usize].children {
            queue.push_back(c);
        }
        while let Some(s) = queue.pop_front() {
            let children = self.nodes[s as usize].children.clone();
            for (a, c) in children {
                let f = self.next(self.nodes[s as usize].fail, a);
                self.nodes[c as usize].fail = f;
                queue.push_back(c);
            }
        }
    }

    fn child(&self, state: u32, a: Symbol) -> Option<u32> {
        let ch = &self.nodes[state as usize].children;
        ch.binary_search_by_key(&a, |&(s, _)| s).ok().map(|i| ch[i].1)
    }

    /// Longest suffix of (text of `state`) + `a` that is a trie prefix.
    pub(crate) fn next(&self, mut state: u32, a: Symbol) -> u32 {
        loop {
            if let Some(c) = self.child(state, a) {
                return c;
            }
            if state == ROOT {
                return ROOT;
            }
            state = self.nodes[state as usize].fail;
        }
    }

    /// True when `state` spells a complete pattern.
    pub(crate) fn is_match(&self, state: u32) -> bool {
        self.nodes[state as usize].depth as usize == self.pattern_len
    }

    pub(crate) fn depth(&self, state: u32) -> usize {
        self.nodes[state as usize].depth as usize
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn pattern_len(&self) -> usize {
        self.pattern_len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_overlapping_matches() {
        let pats: Vec<Vec<Symbol>> = vec![vec![0, 1, 0], vec![1, 0, 0]];
        let trie = Trie::build(3, pats.iter().map(|p| p.as_slice()));
        let text = [0, 1, 0, 0, 1, 0];
        let mut s = ROOT;
        let mut ends = Vec::new();
        for (i, &a) in text.iter().enumerate() {
            s = trie.next(s, a);
            if trie.is_match(s) {
                ends.push(i);
            }
        }
        assert_eq!(ends, vec![2, 3, 5]);
    }
}
