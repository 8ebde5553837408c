//! Exact `C(n, q)` on small instances.
//!
//! The vertices are the bifix-free words of length `n` (a self-overlapping
//! word can never be a codeword) and two vertices are adjacent when the pair
//! is non-overlapping. Non-overlapping codes are exactly the cliques of this
//! graph, so `C(n, q)` is its clique number. The search is a bitset
//! branch-and-bound with greedy colouring bounds, additionally cut off when
//! the incumbent reaches the counting upper bound.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bounds;
use crate::constructions::{construct_c2, select_params_best};
use crate::error::{param, Error, Result};
use crate::words::{check_alphabet, overlap_length, Code, Symbol, Word};

pub const DEFAULT_VERTEX_CAP: usize = 4096;

#[derive(Debug, Clone)]
pub struct SearchLimits {
    /// Largest admissible `q^n`.
    pub vertex_cap: usize,
    pub time_budget: Option<Duration>,
    /// Require the clique to contain a word in first-occurrence normal form.
    pub symmetry: bool,
    /// Start from the best prefix-anchored code instead of an empty incumbent.
    pub seed: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            vertex_cap: DEFAULT_VERTEX_CAP,
            time_budget: None,
            symmetry: false,
            seed: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub n: usize,
    pub q: u32,
    /// `C(n, q)` when `complete`, otherwise the best size found.
    pub optimum: usize,
    pub witness: Code,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// False when the time budget ran out first.
    pub complete: bool,
}

impl SearchResult {
    pub fn summary_line(&self) -> String {
        format!(
            "optimum={} nodes={} time={}{}",
            self.optimum,
            self.nodes_explored,
            self.elapsed.as_millis(),
            if self.complete { "" } else { " incomplete=true" }
        )
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn empty(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Compatibility graph on the bifix-free words, vertices renumbered by
/// decreasing degree (ties in lexicographic order).
struct Graph {
    words: Vec<Vec<Symbol>>,
    adj: Vec<Bitset>,
}

fn all_words(n: usize, q: u32) -> Vec<Vec<Symbol>> {
    let total = (q as usize).pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0 as Symbol; n];
    for _ in 0..total {
        out.push(cur.clone());
        for i in (0..n).rev() {
            cur[i] += 1;
            if u32::from(cur[i]) < q {
                break;
            }
            cur[i] = 0;
        }
    }
    out
}

impl Graph {
    fn build(n: usize, q: u32) -> Self {
        let lex: Vec<Vec<Symbol>> = all_words(n, q)
            .into_iter()
            .filter(|w| overlap_length(w, w).is_none())
            .collect();
        let m = lex.len();
        // Proper prefix -> vertices starting with it.
        let mut by_prefix: HashMap<&[Symbol], Vec<usize>> = HashMap::new();
        for (i, w) in lex.iter().enumerate() {
            for t in 1..n {
                by_prefix.entry(&w[..t]).or_default().push(i);
            }
        }
        let mut conflict: Vec<Bitset> = (0..m).map(|_| Bitset::empty(m)).collect();
        for (v, w) in lex.iter().enumerate() {
            for t in 1..n {
                if let Some(us) = by_prefix.get(&w[n - t..]) {
                    for &u in us {
                        conflict[u].insert(v);
                        conflict[v].insert(u);
                    }
                }
            }
        }
        let degree: Vec<usize> = conflict.iter().map(|c| m - c.count()).collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(degree[i]), i));
        let mut position = vec![0; m];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        let adj = order
            .iter()
            .map(|&i| {
                let mut row = Bitset::empty(m);
                for (j, &p) in position.iter().enumerate() {
                    if j != i && !conflict[i].contains(j) {
                        row.insert(p);
                    }
                }
                row
            })
            .collect();
        let words = order.iter().map(|&i| lex[i].clone()).collect();
        Graph { words, adj }
    }

    fn len(&self) -> usize {
        self.words.len()
    }
}

/// First-occurrence normal form: symbols appear for the first time in the
/// order 0, 1, 2, ...
fn is_normal_form(w: &[Symbol]) -> bool {
    let mut next = 0;
    for &a in w {
        if a > next {
            return false;
        }
        if a == next {
            next += 1;
        }
    }
    true
}

struct Search<'g> {
    graph: &'g Graph,
    best: Vec<usize>,
    target: usize,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    fn stop(&mut self) -> bool {
        if self.best.len() >= self.target {
            return true;
        }
        if self.timed_out {
            return true;
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Greedy sequential colouring of `p`; vertices come back sorted by
    /// colour with the colour number as an upper bound on the clique size
    /// among the vertices up to that point.
    fn colour(&self, p: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.clone();
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncoloured.remove(v);
                q.and_not_assign(&self.graph.adj[v]);
                order.push(v);
                bounds.push(colour);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut p: Bitset) {
        self.nodes += 1;
        if self.stop() {
            return;
        }
        let (order, bounds) = self.colour(&p);
        for i in (0..order.len()).rev() {
            if clique.len() + bounds[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            clique.push(v);
            let next = p.and(&self.graph.adj[v]);
            if next.is_empty() {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            p.remove(v);
            if self.stop() {
                return;
            }
        }
    }
}

/// Computes `C(n, q)` and a witness code of that size.
pub fn exact_search(n: usize, q: u32, limits: &SearchLimits) -> Result<SearchResult> {
    check_alphabet(q)?;
    if n < 2 {
        return param(format!("n = {n} must be at least 2"));
    }
    let total = BigUint::from(q).pow(n as u32);
    if total > BigUint::from(limits.vertex_cap) {
        return Err(Error::Capacity(format!(
            "q^n = {total} exceeds the vertex cap {}",
            limits.vertex_cap
        )));
    }
    let start = Instant::now();
    let graph = Graph::build(n, q);
    let target = bounds::upper_bound(n, q)?
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(graph.len());
    let mut search = Search {
        graph: &graph,
        best: Vec::new(),
        target,
        nodes: 0,
        deadline: limits.time_budget.map(|d| start + d),
        timed_out: false,
    };
    if limits.seed {
        search.best = seed_clique(&graph, n, q);
    }
    let all = {
        let mut b = Bitset::empty(graph.len());
        (0..graph.len()).for_each(|i| b.insert(i));
        b
    };
    if limits.symmetry {
        let mut remaining = all;
        let roots: Vec<usize> = (0..graph.len())
            .filter(|&v| is_normal_form(&graph.words[v]))
            .collect();
        for v in roots {
            if search.stop() {
                break;
            }
            let p = remaining.and(&graph.adj[v]);
            if 1 + p.count() > search.best.len() {
                let mut clique = vec![v];
                if p.is_empty() {
                    search.best = clique;
                } else {
                    search.expand(&mut clique, p);
                }
            }
            remaining.remove(v);
        }
    } else {
        search.expand(&mut Vec::new(), all);
    }
    let witness = Code::new(
        n,
        q,
        search
            .best
            .iter()
            .map(|&v| Word::from_raw(graph.words[v].clone(), q)),
    )?;
    Ok(SearchResult {
        n,
        q,
        optimum: witness.len(),
        witness,
        nodes_explored: search.nodes,
        elapsed: start.elapsed(),
        complete: !search.timed_out,
    })
}

/// Best enumerable prefix-anchored code, mapped onto graph vertices. Dropped
/// if it is not a clique.
fn seed_clique(graph: &Graph, n: usize, q: u32) -> Vec<usize> {
    let Ok(best) = select_params_best(n, q, 64) else {
        return Vec::new();
    };
    let Ok(Some(code)) = construct_c2(&best.params, true).map(|r| r.code) else {
        return Vec::new();
    };
    let index: HashMap<&[Symbol], usize> = graph
        .words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect();
    let Some(vertices) = code
        .iter()
        .map(|w| index.get(w.symbols()).copied())
        .collect::<Option<Vec<usize>>>()
    else {
        return Vec::new();
    };
    let is_clique = vertices.iter().enumerate().all(|(a, &u)| {
        vertices[a + 1..].iter().all(|&v| graph.adj[u].contains(v))
    });
    if is_clique {
        vertices
    } else {
        Vec::new()
    }
}

/// Best code size of the `k = n - 1`, `S = I^{n-1}` family: `max_l l^(n-1) (q-l)`.
pub fn best_full_prefix_family(n: usize, q: u32) -> (u32, BigUint) {
    (1..q)
        .map(|l| (l, BigUint::from(l).pow(n as u32 - 1) * BigUint::from(q - l)))
        .fold((0, BigUint::from(0u32)), |acc, (l, v)| if v > acc.1 { (l, v) } else { acc })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjecture2Verdict {
    Equal,
    Gap { optimum: usize, construction: BigUint },
    /// Search did not finish within its budget.
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct Conjecture2Row {
    pub n: usize,
    pub q: u32,
    pub optimum: usize,
    pub best_l: u32,
    pub construction: BigUint,
    pub verdict: Conjecture2Verdict,
}

impl Conjecture2Row {
    pub fn render(&self) -> String {
        let verdict = match &self.verdict {
            Conjecture2Verdict::Equal => "EQUAL".to_string(),
            Conjecture2Verdict::Gap { optimum, construction } => {
                format!("GAP({optimum},{construction})")
            }
            Conjecture2Verdict::Undetermined => "UNDETERMINED".to_string(),
        };
        format!(
            "n={} q={} optimum={} construction={} l={} verdict={verdict}",
            self.n, self.q, self.optimum, self.construction, self.best_l
        )
    }
}

/// Compares `C(n, q)` with the best `k = n - 1` code for each `q`. Reports,
/// never asserts.
pub fn check_conjecture2(
    n: usize,
    qs: impl IntoIterator<Item = u32>,
    limits: &SearchLimits,
) -> Result<Vec<Conjecture2Row>> {
    qs.into_iter()
        .map(|q| {
            let r = exact_search(n, q, limits)?;
            let (best_l, construction) = best_full_prefix_family(n, q);
            let verdict = if !r.complete {
                Conjecture2Verdict::Undetermined
            } else if BigUint::from(r.optimum) == construction {
                Conjecture2Verdict::Equal
            } else {
                Conjecture2Verdict::Gap {
                    optimum: r.optimum,
                    construction: construction.clone(),
                }
            };
            Ok(Conjecture2Row {
                n,
                q,
                optimum: r.optimum,
                best_l,
                construction,
                verdict,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Closer,
    Farther,
    Level,
}

#[derive(Debug, Clone)]
pub struct Conjecture1Row {
    pub n: usize,
    pub q: u32,
    pub optimum: usize,
    pub complete: bool,
    /// `C(n, q) / q^n`.
    pub ratio: BigRational,
    /// `(1/n) ((n-1)/n)^(n-1)`.
    pub limit: BigRational,
    /// Distance to the limit compared with the previous row.
    pub trend: Option<Trend>,
}

impl Conjecture1Row {
    pub fn render(&self) -> String {
        let trend = match self.trend {
            None => "-",
            Some(Trend::Closer) => "closer",
            Some(Trend::Farther) => "farther",
            Some(Trend::Level) => "level",
        };
        format!(
            "n={} q={} optimum={} ratio={} limit={} ratio_decimal={} limit_decimal={} trend={trend}{}",
            self.n,
            self.q,
            self.optimum,
            self.ratio,
            self.limit,
            bounds::decimal(&self.ratio, 6),
            bounds::decimal(&self.limit, 6),
            if self.complete { "" } else { " incomplete=true" }
        )
    }
}

pub fn conjectured_limit(n: usize) -> BigRational {
    bounds::fixed_length_constant(n) / BigRational::from_integer(n.into())
}

/// `C(n, q) / q^n` against the conjectured large-`q` limit.
pub fn check_conjecture1(
    n: usize,
    qs: impl IntoIterator<Item = u32>,
    limits: &SearchLimits,
) -> Result<Vec<Conjecture1Row>> {
    let limit = conjectured_limit(n);
    let mut rows: Vec<Conjecture1Row> = Vec::new();
    for q in qs {
        let r = exact_search(n, q, limits)?;
        let ratio = BigRational::new(r.optimum.into(), BigUint::from(q).pow(n as u32).into());
        let trend = rows.last().map(|prev| {
            let before = bounds::distance(&prev.ratio, &limit);
            let now = bounds::distance(&ratio, &limit);
            match now.cmp(&before) {
                std::cmp::Ordering::Less => Trend::Closer,
                std::cmp::Ordering::Greater => Trend::Farther,
                std::cmp::Ordering::Equal => Trend::Level,
            }
        });
        rows.push(Conjecture1Row {
            n,
            q,
            optimum: r.optimum,
            complete: r.complete,
            ratio,
            limit: limit.clone(),
            trend,
        });
    }
    Ok(rows)
}
