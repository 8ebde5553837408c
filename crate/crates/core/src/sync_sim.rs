//! Frame synchronisation with non-overlapping markers.
//!
//! Codewords are embedded as markers in a uniformly random symbol stream and
//! recovered by exact multi-pattern matching. Because no proper prefix of a
//! codeword is a suffix of another, two occurrences can never start fewer
//! than `n` positions apart, in any stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;

use crate::aho::{Trie, ROOT};
use crate::error::{param, Result};
use crate::words::{verify_code, Code, Symbol};

#[derive(Debug, Clone)]
pub struct StreamConfig {
    pub code: Code,
    pub stream_length: usize,
    /// Target fraction of positions that start a deliberate marker.
    pub marker_rate: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedStream {
    pub symbols: Vec<Symbol>,
    /// 1-based start positions of the embedded markers.
    pub embedded: Vec<usize>,
}

/// Fills the stream uniformly, then overwrites marker slots. Filler between
/// markers has geometric length with mean `max(0, 1/rate - n)`.
pub fn generate_stream(cfg: &StreamConfig) -> Result<GeneratedStream> {
    let code = &cfg.code;
    if !verify_code(code)?.is_pass() {
        return param("marker code is not non-overlapping");
    }
    let n = code.n();
    if cfg.stream_length < n {
        return param(format!(
            "stream length {} shorter than codeword length {n}",
            cfg.stream_length
        ));
    }
    if !(0.0..=1.0).contains(&cfg.marker_rate) {
        return param(format!("marker rate {} outside [0, 1]", cfg.marker_rate));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let q = code.q();
    let mut symbols: Vec<Symbol> = (0..cfg.stream_length)
        .map(|_| rng.random_range(0..q) as Symbol)
        .collect();
    let mut embedded = Vec::new();
    if cfg.marker_rate > 0.0 {
        let mean_gap = (1.0 / cfg.marker_rate - n as f64).max(0.0);
        let gaps = Geometric::new(1.0 / (1.0 + mean_gap)).expect("probability in (0, 1]");
        let words: Vec<&[Symbol]> = code.iter().map(|w| w.symbols()).collect();
        let mut pos = 0usize;
        loop {
            pos = pos.saturating_add(gaps.sample(&mut rng) as usize);
            if pos.saturating_add(n) > cfg.stream_length {
                break;
            }
            let marker = words[rng.random_range(0..words.len())];
            symbols[pos..pos + n].copy_from_slice(marker);
            embedded.push(pos + 1);
            pos += n;
        }
    }
    Ok(GeneratedStream { symbols, embedded })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionReport {
    pub embedded_positions: Vec<usize>,
    /// 1-based start positions of every codeword occurrence.
    pub detected_positions: Vec<usize>,
    /// `None` with fewer than two detections.
    pub min_gap: Option<usize>,
    /// Detections that were not deliberately embedded.
    pub chance_hits: usize,
}

/// Reusable matcher over a code's words.
pub struct Detector {
    trie: Trie,
    n: usize,
    q: u32,
}

impl Detector {
    pub fn new(code: &Code) -> Self {
        Detector {
            trie: Trie::build(code.n(), code.iter().map(|w| w.symbols())),
            n: code.n(),
            q: code.q(),
        }
    }

    /// Start positions (1-based) of all occurrences.
    pub fn scan(&self, stream: &[Symbol]) -> Result<Vec<usize>> {
        if stream.len() < self.n {
            return param(format!(
                "stream length {} shorter than codeword length {}",
                stream.len(),
                self.n
            ));
        }
        if let Some(&s) = stream.iter().find(|&&s| u32::from(s) >= self.q) {
            return param(format!("stream symbol {s} not below q = {}", self.q));
        }
        let mut state = ROOT;
        let mut out = Vec::new();
        for (i, &a) in stream.iter().enumerate() {
            state = self.trie.next(state, a);
            if self.trie.is_match(state) {
                out.push(i + 2 - self.n);
            }
        }
        Ok(out)
    }

    pub fn report(&self, stream: &[Symbol], embedded: Option<&[usize]>) -> Result<DetectionReport> {
        let detected = self.scan(stream)?;
        let embedded = embedded.map(<[usize]>::to_vec).unwrap_or_default();
        let min_gap = detected.windows(2).map(|w| w[1] - w[0]).min();
        let chance_hits = detected
            .iter()
            .filter(|p| embedded.binary_search(p).is_err())
            .count();
        Ok(DetectionReport {
            embedded_positions: embedded,
            detected_positions: detected,
            min_gap,
            chance_hits,
        })
    }
}

/// One-shot detection; `embedded` must be sorted.
pub fn detect(code: &Code, stream: &[Symbol], embedded: Option<&[usize]>) -> Result<DetectionReport> {
    Detector::new(code).report(stream, embedded)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    /// Symbols consumed until the first detection completes.
    pub delay: Option<usize>,
    pub chance_hits: usize,
    pub min_gap: Option<usize>,
    pub windows: usize,
    pub embedded: usize,
    pub missed: usize,
}

impl TrialRecord {
    /// `trial,delay,chance_hits,min_gap`; missing values print as `inf`.
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("inf".to_string(), |v| v.to_string());
        format!(
            "{},{},{},{}",
            self.trial,
            opt(self.delay),
            self.chance_hits,
            opt(self.min_gap)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub records: Vec<TrialRecord>,
    pub mean_delay: Option<f64>,
    pub median_delay: Option<usize>,
    pub p90_delay: Option<usize>,
    /// Trials with no detection at all.
    pub unsynchronised: usize,
    pub chance_hits: usize,
    pub windows: usize,
    /// Chance hits per scanned window.
    pub chance_hit_rate: f64,
    pub missed_markers: usize,
}

impl TrialSummary {
    pub fn summary_line(&self, expected_rate: f64) -> String {
        let opt = |v: Option<usize>| v.map_or("inf".to_string(), |v| v.to_string());
        format!(
            "trials={} mean_delay={} p50_delay={} p90_delay={} unsynchronised={} chance_hits={} windows={} chance_hit_rate={:.6e} expected_rate={:.6e} missed={}",
            self.records.len(),
            self.mean_delay.map_or("inf".to_string(), |d| format!("{d:.3}")),
            opt(self.median_delay),
            opt(self.p90_delay),
            self.unsynchronised,
            self.chance_hits,
            self.windows,
            self.chance_hit_rate,
            expected_rate,
            self.missed_markers,
        )
    }
}

/// Nearest-rank percentile of a sorted sample.
fn percentile(sorted: &[usize], pct: usize) -> Option<usize> {
    if sorted.is_empty() {
        return None;
    }
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    Some(sorted[rank - 1])
}

/// Runs `trials` independent streams; trial `t` uses seed `cfg.seed + t`.
pub fn run_trials(cfg: &StreamConfig, trials: u64) -> Result<TrialSummary> {
    if trials == 0 {
        return param("at least one trial required");
    }
    let detector = Detector::new(&cfg.code);
    let n = cfg.code.n();
    let records = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_cfg = StreamConfig {
                seed: cfg.seed.wrapping_add(t),
                ..cfg.clone()
            };
            let stream = generate_stream(&trial_cfg)?;
            let report = detector.report(&stream.symbols, Some(&stream.embedded))?;
            let missed = stream
                .embedded
                .iter()
                .filter(|p| report.detected_positions.binary_search(p).is_err())
                .count();
            Ok(TrialRecord {
                trial: t,
                delay: report.detected_positions.first().map(|p| p + n - 1),
                chance_hits: report.chance_hits,
                min_gap: report.min_gap,
                windows: stream.symbols.len() + 1 - n,
                embedded: stream.embedded.len(),
                missed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarise(records))
}

fn summarise(records: Vec<TrialRecord>) -> TrialSummary {
    let mut delays: Vec<usize> = records.iter().filter_map(|r| r.delay).collect();
    delays.sort_unstable();
    let mean_delay = (!delays.is_empty())
        .then(|| delays.iter().map(|&d| d as f64).sum::<f64>() / delays.len() as f64);
    let chance_hits = records.iter().map(|r| r.chance_hits).sum();
    let windows: usize = records.iter().map(|r| r.windows).sum();
    TrialSummary {
        mean_delay,
        median_delay: percentile(&delays, 50),
        p90_delay: percentile(&delays, 90),
        unsynchronised: records.len() - delays.len(),
        chance_hits,
        windows,
        chance_hit_rate: chance_hits as f64 / windows as f64,
        missed_markers: records.iter().map(|r| r.missed).sum(),
        records,
    }
}
