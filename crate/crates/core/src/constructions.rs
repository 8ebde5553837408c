//! Prefix-anchored non-overlapping code families.
//!
//! The general family takes a partition of the alphabet into a prefix part
//! `I = {0, ..., l-1}` and its complement `J`, and a pattern set
//! `S ⊆ I^k`. Its codewords are the words `c` of length `n` with
//!
//! * `c[1..=k]` in `S`,
//! * `c[k+1]` and `c[n]` in `J`,
//! * `c[k+2..n-1]` S-free.
//!
//! With `l = 1` this is the zero-run family: `k` leading zeros, a non-zero
//! symbol, no run of `k` zeros in the middle, and a non-zero last symbol.
//!
//! When `k = n - 1` the positions `k + 1` and `n` coincide, so one factor of
//! `q - l` drops out of the size.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::sfree::{count_sfree, PatternSet};
use crate::words::{check_alphabet, Code, Symbol, Word};

/// Default cap on enumerated code sizes.
pub const ENUMERATION_CAP: usize = 1_000_000;

/// Explicit pattern sets larger than this are not tried by [`select_params_best`].
pub const SWEEP_PATTERN_CAP: u64 = 1 << 16;

/// How `S` is chosen inside `I^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternRule {
    /// The lexicographically first `s` words of `I^k`.
    LexFirst,
    /// `S = I^k`.
    AllOfI,
    /// A caller-supplied list over `I = {0, ..., l-1}`.
    Explicit(Vec<Vec<Symbol>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: usize,
    pub q: u32,
    pub k: usize,
    pub l: u32,
    /// `|S|`.
    pub s: BigUint,
    pub rule: PatternRule,
}

impl ConstructionParams {
    /// Lexicographic-first `S` of size `s`.
    pub fn lex_first(n: usize, q: u32, k: usize, l: u32, s: u64) -> Result<Self> {
        Self::validated(n, q, k, l, BigUint::from(s), PatternRule::LexFirst)
    }

    /// `S = I^k`.
    pub fn all_of_i(n: usize, q: u32, k: usize, l: u32) -> Result<Self> {
        let s = BigUint::from(l).pow(k as u32);
        Self::validated(n, q, k, l, s, PatternRule::AllOfI)
    }

    pub fn explicit(n: usize, q: u32, k: usize, l: u32, patterns: Vec<Vec<Symbol>>) -> Result<Self> {
        let s = BigUint::from(patterns.len());
        Self::validated(n, q, k, l, s, PatternRule::Explicit(patterns))
    }

    /// Zero-run family: `l = 1`, `S = {0^k}`.
    pub fn zero_run(n: usize, q: u32, k: usize) -> Result<Self> {
        Self::all_of_i(n, q, k, 1)
    }

    fn validated(n: usize, q: u32, k: usize, l: u32, s: BigUint, rule: PatternRule) -> Result<Self> {
        check_alphabet(q)?;
        if n < 2 {
            return param(format!("n = {n} must be at least 2"));
        }
        if k == 0 || k > n - 1 {
            return param(format!("k = {k} must lie in [1, n-1] = [1, {}]", n - 1));
        }
        if l == 0 || l > q - 1 {
            return param(format!("l = {l} must lie in [1, q-1] = [1, {}]", q - 1));
        }
        let max = BigUint::from(l).pow(k as u32);
        if s.is_zero() || s > max {
            return param(format!("s = {s} must lie in [1, l^k = {max}]"));
        }
        Ok(ConstructionParams { n, q, k, l, s, rule })
    }

    /// The zero-run family is exactly the `l = 1` case.
    pub fn is_zero_run(&self) -> bool {
        self.l == 1
    }

    pub fn pattern_set(&self) -> Result<PatternSet> {
        match &self.rule {
            PatternRule::AllOfI => PatternSet::full(self.q, self.l, self.k),
            PatternRule::LexFirst => {
                let s = self.s.to_u64().ok_or_else(|| {
                    Error::Capacity(format!("|S| = {} too large to materialise", self.s))
                })?;
                PatternSet::lex_first(self.q, self.l, self.k, s)
            }
            PatternRule::Explicit(patterns) => {
                if patterns.iter().any(|p| p.len() != self.k) {
                    return param(format!("explicit patterns must have length k = {}", self.k));
                }
                PatternSet::new(
                    self.q,
                    (0..self.l).map(|s| s as Symbol).collect(),
                    patterns.clone(),
                )
            }
        }
    }
}

impl fmt::Display for ConstructionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scheme = if self.is_zero_run() { "c1" } else { "c2" };
        write!(
            f,
            "construction={scheme} n={} q={} k={} l={} s={}",
            self.n, self.q, self.k, self.l, self.s
        )
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub params: ConstructionParams,
    pub size: BigUint,
    /// Present only when enumeration was requested.
    pub code: Option<Code>,
}

/// Size of the general family for `p`, using the exact S-free count.
pub fn construction_size(p: &ConstructionParams) -> Result<BigUint> {
    let j = BigUint::from(p.q - p.l);
    if p.k == p.n - 1 {
        return Ok(&p.s * j);
    }
    let patterns = p.pattern_set()?;
    let middle = count_sfree(&patterns, p.n - p.k - 2)?;
    Ok(&p.s * &j * &j * middle)
}

/// General prefix-anchored family. Enumeration is refused above
/// [`ENUMERATION_CAP`] codewords.
pub fn construct_c2(p: &ConstructionParams, enumerate: bool) -> Result<ConstructionResult> {
    construct_c2_capped(p, enumerate, ENUMERATION_CAP)
}

pub fn construct_c2_capped(
    p: &ConstructionParams,
    enumerate: bool,
    cap: usize,
) -> Result<ConstructionResult> {
    let size = construction_size(p)?;
    let code = if enumerate {
        if size > BigUint::from(cap) {
            return Err(Error::Capacity(format!(
                "code size {size} exceeds enumeration cap {cap}"
            )));
        }
        Some(enumerate_code(p)?)
    } else {
        None
    };
    Ok(ConstructionResult {
        params: p.clone(),
        size,
        code,
    })
}

/// Zero-run family with `k` leading zeros.
pub fn construct_c1(n: usize, q: u32, k: usize, enumerate: bool) -> Result<ConstructionResult> {
    construct_c2(&ConstructionParams::zero_run(n, q, k)?, enumerate)
}

fn enumerate_code(p: &ConstructionParams) -> Result<Code> {
    let patterns = p.pattern_set()?;
    let tail: Vec<Symbol> = (p.l..p.q).map(|s| s as Symbol).collect();
    let mut words = BTreeSet::new();
    if p.k == p.n - 1 {
        for head in patterns.iter_patterns() {
            for &last in &tail {
                let mut w = head.clone();
                w.push(last);
                words.insert(Word::from_raw(w, p.q));
            }
        }
        return Ok(Code::from_set_unchecked(p.n, p.q, words));
    }
    let middles = sfree_words(&patterns, p.n - p.k - 2);
    for head in patterns.iter_patterns() {
        for &after_head in &tail {
            for mid in &middles {
                for &last in &tail {
                    let mut w = Vec::with_capacity(p.n);
                    w.extend_from_slice(&head);
                    w.push(after_head);
                    w.extend_from_slice(mid);
                    w.push(last);
                    words.insert(Word::from_raw(w, p.q));
                }
            }
        }
    }
    Ok(Code::from_set_unchecked(p.n, p.q, words))
}

/// All S-free words of length `r`, by depth-first extension with a window
/// check on every appended symbol.
fn sfree_words(patterns: &PatternSet, r: usize) -> Vec<Vec<Symbol>> {
    fn extend(
        patterns: &PatternSet,
        r: usize,
        cur: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let k = patterns.k();
        for a in 0..patterns.q() {
            cur.push(a as Symbol);
            let ok = cur.len() < k || !patterns.contains(&cur[cur.len() - k..]);
            if ok {
                extend(patterns, r, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(patterns, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Smallest `k` with `base^k >= x`.
fn ceil_log(base: u64, x: u64) -> usize {
    let mut k = 0;
    let mut p = BigUint::one();
    while p < BigUint::from(x) {
        p *= base;
        k += 1;
    }
    k
}

/// Largest `k` with `base^k <= x` (`x >= 1`).
fn floor_log(base: u64, x: u64) -> usize {
    let mut k = 0;
    let mut p = BigUint::from(base);
    while p <= BigUint::from(x) {
        p *= base;
        k += 1;
    }
    k
}

/// `⌈s^(1/k)⌉`.
fn ceil_root(s: &BigUint, k: usize) -> BigUint {
    let r = s.nth_root(k as u32);
    if r.pow(k as u32) < *s {
        r + 1u32
    } else {
        r
    }
}

fn check_nq(n: usize, q: u32) -> Result<()> {
    check_alphabet(q)?;
    if n < 2 {
        return param(format!("n = {n} must be at least 2"));
    }
    Ok(())
}

/// Zero-run parameters with `k` next to `log_q(2n)`.
///
/// Candidates are `⌊log_q 2n⌋` and `⌈log_q 2n⌉` restricted to `[1, n-1]`
/// (clamped when neither is in range); the larger code wins, the rounded-up
/// `k` on ties.
pub fn select_params_lemma2(n: usize, q: u32) -> Result<ConstructionParams> {
    check_nq(n, q)?;
    let target = 2 * n as u64;
    let up = ceil_log(u64::from(q), target);
    let down = floor_log(u64::from(q), target);
    let mut candidates: Vec<usize> = [up, down]
        .into_iter()
        .filter(|&k| (1..n).contains(&k))
        .collect();
    candidates.dedup();
    if candidates.is_empty() {
        candidates.push(up.clamp(1, n - 1));
    }
    let mut best: Option<(BigUint, ConstructionParams)> = None;
    for k in candidates {
        let p = ConstructionParams::zero_run(n, q, k)?;
        let size = construction_size(&p)?;
        if best.as_ref().is_none_or(|(b, _)| size > *b) {
            best = Some((size, p));
        }
    }
    Ok(best.expect("at least one candidate").1)
}

/// `k = ⌈log2 2n⌉`, `s = ⌊q^k / 2n⌋`, `l = ⌈s^(1/k)⌉`, lexicographic-first `S`.
pub fn select_params_thm6(n: usize, q: u32) -> Result<ConstructionParams> {
    check_nq(n, q)?;
    let k = ceil_log(2, 2 * n as u64);
    if k > n - 1 {
        return Err(Error::RecipeInfeasible(format!(
            "k = ceil(log2 2n) = {k} exceeds n-1 = {}",
            n - 1
        )));
    }
    let (s, l) = thm6_s_and_l(n, q, k);
    if s.is_zero() {
        return Err(Error::RecipeInfeasible(format!(
            "s = floor(q^k/2n) = 0 for q = {q}, k = {k}"
        )));
    }
    let l = match l.to_u32() {
        Some(l) if l >= 1 && l < q => l,
        _ => {
            return Err(Error::RecipeInfeasible(format!(
                "l = ceil(s^(1/k)) = {l} outside [1, q-1]"
            )))
        }
    };
    ConstructionParams::validated(n, q, k, l, s, PatternRule::LexFirst)
}

fn thm6_s_and_l(n: usize, q: u32, k: usize) -> (BigUint, BigUint) {
    let s = BigUint::from(q).pow(k as u32) / BigUint::from(2 * n);
    let l = ceil_root(&s, k);
    (s, l)
}

/// Sweeps `k` and a grid of `l` (every `l` when `q <= budget`) and returns
/// the largest code. Ties go to smaller `k`, then smaller `l`, then the
/// `S = I^k` candidate.
pub fn select_params_best(n: usize, q: u32, budget: u32) -> Result<ConstructionResult> {
    check_nq(n, q)?;
    let mut candidates = Vec::new();
    for k in 1..n {
        let (s6, l6) = thm6_s_and_l(n, q, k);
        let mut ls: BTreeSet<u32> = BTreeSet::new();
        if q <= budget {
            ls.extend(1..q);
        } else {
            let balanced = ((n as u64 - 1) * u64::from(q)).div_ceil(n as u64) as u32;
            ls.insert(balanced.clamp(1, q - 1));
            ls.insert(1);
            ls.insert((q / 2).max(1));
            let mut g = 2;
            while g < q {
                ls.insert(g);
                g *= 2;
            }
            if let Some(l6) = l6.to_u32().filter(|l| (1..q).contains(l)) {
                ls.insert(l6);
            }
        }
        for l in ls {
            candidates.push(ConstructionParams::all_of_i(n, q, k, l)?);
            if k < n - 1 && !s6.is_zero() && s6 < BigUint::from(l).pow(k as u32) {
                if let Some(s) = s6.to_u64().filter(|&s| s <= SWEEP_PATTERN_CAP) {
                    candidates.push(ConstructionParams::lex_first(n, q, k, l, s)?);
                }
            }
        }
    }
    let sizes: Vec<Option<BigUint>> = candidates
        .par_iter()
        .map(|p| construction_size(p).ok())
        .collect();
    let mut best: Option<(BigUint, usize)> = None;
    for (i, size) in sizes.into_iter().enumerate() {
        if let Some(size) = size {
            if best.as_ref().is_none_or(|(b, _)| size > *b) {
                best = Some((size, i));
            }
        }
    }
    let (size, i) = best.ok_or_else(|| Error::Capacity("no candidate could be sized".into()))?;
    Ok(ConstructionResult {
        params: candidates.swap_remove(i),
        size,
        code: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::verify_code;

    /// Every word of `{0..q-1}^n`, filtered by the three defining conditions.
    fn brute_force_family(p: &ConstructionParams) -> BTreeSet<Vec<Symbol>> {
        let patterns = p.pattern_set().unwrap();
        let total = u64::from(p.q).pow(p.n as u32);
        let mut out = BTreeSet::new();
        for idx in 0..total {
            let mut x = idx;
            let mut w = vec![0 as Symbol; p.n];
            for slot in w.iter_mut().rev() {
                *slot = (x % u64::from(p.q)) as Symbol;
                x /= u64::from(p.q);
            }
            let in_j = |s: Symbol| u32::from(s) >= p.l;
            let head_ok = patterns.contains(&w[..p.k]);
            let ends_ok = in_j(w[p.k]) && in_j(w[p.n - 1]);
            let mid = if p.k + 1 < p.n - 1 { &w[p.k + 1..p.n - 1] } else { &[][..] };
            let mid_ok = mid.windows(p.k).all(|win| !patterns.contains(win));
            if head_ok && ends_ok && mid_ok {
                out.insert(w);
            }
        }
        out
    }

    fn words_of(code: &Code) -> BTreeSet<Vec<Symbol>> {
        code.iter().map(|w| w.symbols().to_vec()).collect()
    }

    #[test]
    fn length_two_split_instance() {
        let p = ConstructionParams::all_of_i(2, 4, 1, 2).unwrap();
        let r = construct_c2(&p, true).unwrap();
        assert_eq!(r.size, BigUint::from(4u32));
        assert!(verify_code(r.code.as_ref().unwrap()).unwrap().is_pass());
    }

    #[test]
    fn length_three_instance() {
        let p = ConstructionParams::all_of_i(3, 3, 2, 2).unwrap();
        assert_eq!(construct_c2(&p, false).unwrap().size, BigUint::from(4u32));
    }

    #[test]
    fn introductory_code_from_zero_run_family() {
        let p = ConstructionParams::lex_first(6, 2, 2, 1, 1).unwrap();
        let r = construct_c2(&p, true).unwrap();
        assert_eq!(r.size, BigUint::from(3u32));
        let expected = Code::from_digits(2, &["001011", "001101", "001111"]).unwrap();
        assert_eq!(r.code.unwrap(), expected);
        let r1 = construct_c1(6, 2, 2, true).unwrap();
        assert_eq!(r1.code.unwrap(), expected);
    }

    #[test]
    fn zero_run_examples() {
        let r = construct_c1(4, 2, 3, true).unwrap();
        assert_eq!(r.size, BigUint::one());
        assert_eq!(r.code.unwrap(), Code::from_digits(2, &["0001"]).unwrap());
        // Frozen from brute_force_family: 16 ternary words.
        let p = ConstructionParams::zero_run(5, 3, 1).unwrap();
        assert_eq!(brute_force_family(&p).len(), 16);
        assert_eq!(construct_c1(5, 3, 1, false).unwrap().size, BigUint::from(16u32));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cases = [
            ConstructionParams::lex_first(5, 3, 2, 2, 3).unwrap(),
            ConstructionParams::all_of_i(4, 3, 3, 2).unwrap(),
            ConstructionParams::all_of_i(4, 4, 2, 2).unwrap(),
            ConstructionParams::explicit(6, 3, 2, 2, vec![vec![0, 1], vec![1, 1]]).unwrap(),
            ConstructionParams::zero_run(7, 2, 2).unwrap(),
        ];
        for p in cases {
            let r = construct_c2(&p, true).unwrap();
            let code = r.code.unwrap();
            assert_eq!(words_of(&code), brute_force_family(&p), "{p}");
            assert_eq!(BigUint::from(code.len()), r.size, "{p}");
            assert!(verify_code(&code).unwrap().is_pass(), "{p}");
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ConstructionParams::all_of_i(2, 4, 2, 2).is_err());
        assert!(ConstructionParams::all_of_i(4, 4, 0, 2).is_err());
        assert!(ConstructionParams::all_of_i(4, 4, 2, 4).is_err());
        assert!(ConstructionParams::lex_first(4, 4, 2, 2, 5).is_err());
        assert!(ConstructionParams::lex_first(4, 4, 2, 2, 0).is_err());
        assert!(ConstructionParams::all_of_i(1, 4, 1, 2).is_err());
    }

    #[test]
    fn enumeration_cap_enforced() {
        let p = ConstructionParams::zero_run(12, 4, 2).unwrap();
        let err = construct_c2_capped(&p, true, 10).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
        assert!(construct_c2_capped(&p, false, 10).is_ok());
    }

    #[test]
    fn lemma2_selection() {
        assert_eq!(select_params_lemma2(8, 2).unwrap().k, 4);
        assert_eq!(select_params_lemma2(2, 8).unwrap().k, 1);
        assert_eq!(select_params_lemma2(16, 2).unwrap().k, 5);
        // log_3 10 lies in (2, 3): both candidates sized, larger wins.
        let p = select_params_lemma2(5, 3).unwrap();
        let s2 = construct_c1(5, 3, 2, false).unwrap().size;
        let s3 = construct_c1(5, 3, 3, false).unwrap().size;
        assert_eq!(p.k, if s2 > s3 { 2 } else { 3 });
    }

    #[test]
    fn lemma2_choice_is_not_the_global_argmax_at_n8() {
        let sizes: Vec<usize> = (3..=5)
            .map(|k| brute_force_family(&ConstructionParams::zero_run(8, 2, k).unwrap()).len())
            .collect();
        assert_eq!(sizes, vec![7, 4, 2]);
        for (k, &size) in (3..=5).zip(&sizes) {
            assert_eq!(construct_c1(8, 2, k, false).unwrap().size, BigUint::from(size));
        }
    }

    #[test]
    fn thm6_recipe() {
        let p = select_params_thm6(16, 16).unwrap();
        assert_eq!((p.k, p.l, p.s.clone()), (5, 8, BigUint::from(32768u32)));
        let p = select_params_thm6(4, 4).unwrap();
        assert_eq!((p.k, p.l, p.s.clone()), (3, 2, BigUint::from(8u32)));
        assert!(matches!(
            select_params_thm6(2, 2).unwrap_err(),
            Error::RecipeInfeasible(_)
        ));
    }

    #[test]
    fn best_selection_examples() {
        let r = select_params_best(2, 7, 64).unwrap();
        assert_eq!(r.size, BigUint::from(12u32));
        assert_eq!(r.params.k, 1);
        assert_eq!(r.params.l, 3);
        let r = select_params_best(3, 4, 64).unwrap();
        assert_eq!(r.size, BigUint::from(9u32));
        // k=2, l=3 also reaches 9; the zero-run code 0ab wins on smaller k.
        assert_eq!((r.params.k, r.params.l), (1, 1));
        let alt = ConstructionParams::all_of_i(3, 4, 2, 3).unwrap();
        assert_eq!(construction_size(&alt).unwrap(), BigUint::from(9u32));
        let by_k: Vec<usize> = (1..6)
            .map(|k| brute_force_family(&ConstructionParams::zero_run(6, 2, k).unwrap()).len())
            .collect();
        assert_eq!(by_k, vec![1, 3, 2, 1, 1]);
        let r = select_params_best(6, 2, 64).unwrap();
        assert_eq!(r.size, BigUint::from(3u32));
        assert_eq!(r.params.k, 2);
    }

    #[test]
    fn best_dominates_recipes() {
        for (n, q) in [(8, 2), (6, 4), (10, 3), (5, 8)] {
            let best = select_params_best(n, q, 64).unwrap().size;
            let l2 = construction_size(&select_params_lemma2(n, q).unwrap()).unwrap();
            assert!(best >= l2);
            if let Ok(p) = select_params_thm6(n, q) {
                assert!(best >= construction_size(&p).unwrap());
            }
        }
    }

    #[test]
    fn header_line() {
        let p = select_params_thm6(4, 4).unwrap();
        assert_eq!(p.to_string(), "construction=c2 n=4 q=4 k=3 l=2 s=8");
    }
}
