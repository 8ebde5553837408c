//! Words, codes and the overlap relation.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{param, Error, Result};
use crate::MAX_ALPHABET;

/// A symbol of the alphabet `{0, ..., q-1}`.
pub type Symbol = u16;

/// A fixed-length word over `{0, ..., q-1}`.
///
/// Ordering is lexicographic on the symbols; words compared inside one code
/// always share `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<Symbol>,
    q: u32,
}

pub(crate) fn check_alphabet(q: u32) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&q) {
        return param(format!("alphabet size {q} outside [2, {MAX_ALPHABET}]"));
    }
    Ok(())
}

impl Word {
    pub fn new(symbols: Vec<Symbol>, q: u32) -> Result<Self> {
        check_alphabet(q)?;
        if symbols.is_empty() {
            return param("word must have length at least 1");
        }
        if let Some(&s) = symbols.iter().find(|&&s| u32::from(s) >= q) {
            return param(format!("symbol {s} not below alphabet size {q}"));
        }
        Ok(Word { symbols, q })
    }

    /// Builds a word from a string of single-character digits, e.g. `"001101"`.
    /// Only usable for `q <= 36`.
    pub fn from_digits(digits: &str, q: u32) -> Result<Self> {
        let symbols = digits
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| Error::Parameter(format!("'{c}' is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols, q)
    }

    /// The constant word `a^n`.
    pub fn constant(symbol: Symbol, n: usize, q: u32) -> Result<Self> {
        Word::new(vec![symbol; n], q)
    }

    pub(crate) fn from_raw(symbols: Vec<Symbol>, q: u32) -> Self {
        debug_assert!(symbols.iter().all(|&s| u32::from(s) < q));
        Word { symbols, q }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join(" "))
        }
    }
}

fn check_pair(u: &Word, v: &Word) -> Result<()> {
    if u.len() != v.len() {
        return param(format!("length mismatch: {} vs {}", u.len(), v.len()));
    }
    if u.q != v.q {
        return param(format!("alphabet mismatch: {} vs {}", u.q, v.q));
    }
    if u.len() < 2 {
        return param("overlap is only defined for length n >= 2");
    }
    Ok(())
}

/// Smallest `t` in `1..n` such that the length-`t` prefix of `u` equals the
/// length-`t` suffix of `v`. One direction only; lengths must already agree.
pub fn overlap_length(u: &[Symbol], v: &[Symbol]) -> Option<usize> {
    let n = u.len();
    debug_assert_eq!(n, v.len());
    (1..n).find(|&t| u[..t] == v[n - t..])
}

/// True iff a non-empty proper prefix of one word equals a non-empty proper
/// suffix of the other, in either direction. With `u == v` this is the
/// border test.
pub fn is_overlapping_pair(u: &Word, v: &Word) -> Result<bool> {
    check_pair(u, v)?;
    Ok(overlap_length(&u.symbols, &v.symbols).is_some()
        || overlap_length(&v.symbols, &u.symbols).is_some())
}

/// True iff `w` has no border.
pub fn is_bifix_free(w: &Word) -> Result<bool> {
    if w.len() < 2 {
        return param("bifix-freeness is only defined for length n >= 2");
    }
    Ok(overlap_length(&w.symbols, &w.symbols).is_none())
}

/// A set of distinct words sharing length `n` and alphabet size `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    q: u32,
    words: BTreeSet<Word>,
}

impl Code {
    /// Rejects duplicate words and words of the wrong shape.
    pub fn new(n: usize, q: u32, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        check_alphabet(q)?;
        if n == 0 {
            return param("code length must be at least 1");
        }
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != n || w.q != q {
                return param(format!(
                    "word {w} has shape (n={}, q={}), code expects (n={n}, q={q})",
                    w.len(),
                    w.q
                ));
            }
            if !set.insert(w) {
                return param("duplicate codeword");
            }
        }
        Ok(Code { n, q, words: set })
    }

    /// Convenience constructor from digit strings, e.g. `["001101", "001011"]`.
    pub fn from_digits(q: u32, words: &[&str]) -> Result<Self> {
        let parsed = words
            .iter()
            .map(|w| Word::from_digits(w, q))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map(Word::len).unwrap_or(1);
        Code::new(n, q, parsed)
    }

    pub(crate) fn from_set_unchecked(n: usize, q: u32, words: BTreeSet<Word>) -> Self {
        Code { n, q, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    /// Codewords in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter()
    }

    /// Renders the code in the line-oriented code file format. `comments` are
    /// emitted as `# ` lines right after the header.
    pub fn to_file_string(&self, comments: &[String]) -> String {
        let mut out = format!("{} {}\n", self.n, self.q);
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        for w in &self.words {
            let line: Vec<String> = w.symbols.iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the code file format: a `n q` header, then one codeword per
    /// line as space-separated decimal symbols. `#` lines and blank lines are
    /// skipped; the text must end with a newline.
    pub fn parse_file(text: &str) -> Result<Self> {
        if !text.ends_with('\n') {
            let line = text.lines().count().max(1);
            return Err(Error::Parse {
                line,
                msg: "missing trailing newline".into(),
            });
        }
        let mut header: Option<(usize, u32)> = None;
        let mut words = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split(' ').collect();
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(perr("header must be `n q`".into()));
                    }
                    let n = fields[0]
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad n: {e}")))?;
                    let q = fields[1]
                        .parse::<u32>()
                        .map_err(|e| perr(format!("bad q: {e}")))?;
                    check_alphabet(q).map_err(|e| perr(e.to_string()))?;
                    if n == 0 {
                        return Err(perr("n must be positive".into()));
                    }
                    header = Some((n, q));
                }
                Some((n, q)) => {
                    if fields.len() != n {
                        return Err(perr(format!("expected {n} symbols, found {}", fields.len())));
                    }
                    let symbols = fields
                        .iter()
                        .map(|f| {
                            f.parse::<Symbol>()
                                .map_err(|e| perr(format!("bad symbol '{f}': {e}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    words.push(Word::new(symbols, q).map_err(|e| perr(e.to_string()))?);
                }
            }
        }
        let (n, q) = header.ok_or(Error::Parse {
            line: 1,
            msg: "missing `n q` header".into(),
        })?;
        Code::new(n, q, words)
    }
}

/// Outcome of [`verify_code`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Pass,
    /// The length-`overlap` prefix of `prefix_word` equals the length-`overlap`
    /// suffix of `suffix_word`.
    Fail {
        prefix_word: Word,
        suffix_word: Word,
        overlap: usize,
    },
}

impl Verification {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verification::Pass)
    }
}

/// Checks every ordered pair `(u, v)` of codewords, `u == v` included.
///
/// On failure reports the lexicographically first ordered pair `(u, v)` for
/// which a proper prefix of `u` is a suffix of `v`, with the smallest such
/// overlap length.
pub fn verify_code(code: &Code) -> Result<Verification> {
    if code.is_empty() {
        return param("cannot verify an empty code");
    }
    if code.n < 2 {
        return param("overlap is only defined for length n >= 2");
    }
    let n = code.n;
    // Proper suffix -> lexicographically least codeword ending with it.
    let mut least_with_suffix: HashMap<&[Symbol], &Word> = HashMap::new();
    for w in &code.words {
        for t in 1..n {
            least_with_suffix.entry(&w.symbols[n - t..]).or_insert(w);
        }
    }
    for u in &code.words {
        let partner = (1..n)
            .filter_map(|t| least_with_suffix.get(&u.symbols[..t]).copied())
            .min();
        if let Some(v) = partner {
            let overlap = overlap_length(&u.symbols, &v.symbols)
                .expect("partner shares a prefix/suffix");
            return Ok(Verification::Fail {
                prefix_word: u.clone(),
                suffix_word: v.clone(),
                overlap,
            });
        }
    }
    Ok(Verification::Pass)
}

/// Positions `i` (1-based) such that the cyclic length-`n` subword of `w`
/// starting at `i` belongs to `code`. `w` must have length `2n - 1`.
pub fn cyclic_occurrences(code: &Code, w: &Word) -> Result<Vec<usize>> {
    let n = code.n;
    let m = 2 * n - 1;
    if w.len() != m {
        return param(format!("word length {} must be 2n-1 = {m}", w.len()));
    }
    if w.q != code.q {
        return param(format!("alphabet mismatch: {} vs {}", w.q, code.q));
    }
    let words: HashSet<&[Symbol]> = code.words.iter().map(|c| c.symbols()).collect();
    let doubled: Vec<Symbol> = w.symbols.iter().chain(&w.symbols).copied().collect();
    Ok((0..m)
        .filter(|&i| words.contains(&doubled[i..i + n]))
        .map(|i| i + 1)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_digits(s, 2).unwrap()
    }

    fn intro_code() -> Code {
        Code::from_digits(2, &["001101", "001011", "001111"]).unwrap()
    }

    #[test]
    fn introductory_overlap_verdicts() {
        assert!(is_overlapping_pair(&w("00000"), &w("01111")).unwrap());
        assert!(is_overlapping_pair(&w("10001"), &w("11110")).unwrap());
        assert!(!is_overlapping_pair(&w("11111"), &w("01110")).unwrap());
        assert!(!is_overlapping_pair(&w("01"), &w("01")).unwrap());
    }

    #[test]
    fn overlap_rejects_bad_shapes() {
        assert!(is_overlapping_pair(&w("01"), &w("011")).is_err());
        let t = Word::from_digits("01", 3).unwrap();
        assert!(is_overlapping_pair(&w("01"), &t).is_err());
        assert!(is_overlapping_pair(&w("0"), &w("1")).is_err());
        assert!(is_bifix_free(&w("0")).is_err());
    }

    #[test]
    fn bifix_free_examples() {
        assert!(is_bifix_free(&w("001101")).unwrap());
        assert!(!is_bifix_free(&w("00000")).unwrap());
        assert!(!is_bifix_free(&w("010")).unwrap());
    }

    #[test]
    fn word_rejects_out_of_range_symbols() {
        assert!(Word::new(vec![0, 2], 2).is_err());
        assert!(Word::new(vec![], 2).is_err());
        assert!(Word::new(vec![0], 1).is_err());
        assert!(Word::new(vec![65535], 65536).is_ok());
        assert!(Word::new(vec![0], 65537).is_err());
    }

    #[test]
    fn code_rejects_duplicates_and_mixed_shapes() {
        assert!(Code::from_digits(2, &["01", "01"]).is_err());
        assert!(Code::from_digits(2, &["01", "011"]).is_err());
    }

    #[test]
    fn verify_intro_code_passes() {
        assert_eq!(verify_code(&intro_code()).unwrap(), Verification::Pass);
    }

    #[test]
    fn verify_reports_first_failure() {
        let c = Code::from_digits(2, &["00000"]).unwrap();
        match verify_code(&c).unwrap() {
            Verification::Fail { overlap, .. } => assert_eq!(overlap, 1),
            Verification::Pass => panic!("constant word must self-overlap"),
        }
        let c = Code::from_digits(2, &["01", "10"]).unwrap();
        assert_eq!(
            verify_code(&c).unwrap(),
            Verification::Fail {
                prefix_word: w("01"),
                suffix_word: w("10"),
                overlap: 1
            }
        );
    }

    #[test]
    fn verify_rejects_empty_code() {
        let c = Code::new(3, 2, Vec::new()).unwrap();
        assert!(verify_code(&c).is_err());
    }

    #[test]
    fn cyclic_occurrence_examples() {
        let c = intro_code();
        assert_eq!(cyclic_occurrences(&c, &w("01111110011")).unwrap(), vec![8]);
        for a in 0..2 {
            let constant = Word::constant(a, 11, 2).unwrap();
            assert!(cyclic_occurrences(&c, &constant).unwrap().is_empty());
        }
        let c = Code::from_digits(2, &["01"]).unwrap();
        assert_eq!(cyclic_occurrences(&c, &w("011")).unwrap(), vec![1]);
        assert!(cyclic_occurrences(&c, &w("0110")).is_err());
    }

    #[test]
    fn code_file_round_trip() {
        let c = intro_code();
        let text = c.to_file_string(&["example".to_string()]);
        assert_eq!(
            text,
            "6 2\n# example\n0 0 1 0 1 1\n0 0 1 1 0 1\n0 0 1 1 1 1\n"
        );
        assert_eq!(Code::parse_file(&text).unwrap(), c);
    }

    #[test]
    fn code_file_errors() {
        assert!(Code::parse_file("2 2\n0 1").is_err());
        assert!(Code::parse_file("# nothing\n").is_err());
        assert!(Code::parse_file("2 2\n0 1 1\n").is_err());
        assert!(Code::parse_file("2 2\n0 2\n").is_err());
        assert!(Code::parse_file("2 2\n0 1\n0 1\n").is_err());
        let c = Code::parse_file("\n# c\n2 3\n\n0 2\n# x\n1 2\n").unwrap();
        assert_eq!(c.len(), 2);
    }
}
