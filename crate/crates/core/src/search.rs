//! Record search over tuples (f_1, .., f_k) of fixed degrees.
//!
//! A candidate is a concatenation of ascending coefficient lists, one digit
//! per coefficient. Digit j ranges over an ordered list of allowed raw field
//! values, so candidate indices (mixed radix, first digit most significant)
//! follow lexicographic coefficient order.
//!
//! Work is split into [`PARTITIONS`] fixed partitions regardless of the
//! thread count. Exhaustive partitions are contiguous index ranges; random
//! and hill-climb partition j draws from ChaCha8 seeded with `seed` on
//! stream j. Partial leaderboards are merged by (N desc, key asc), so the
//! result does not depend on scheduling.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::fibre::{coefficient_lists, genus_fibre, hws_bound, point_count, CurveSystem};
use crate::field::FieldSpec;
use crate::kernel::{char_row, subset_char_sums_from_rows};
use crate::poly::{gcd_degree_in_place, mul_slices, trim, Poly};
use crate::records::RecordsTable;

pub const PARTITIONS: u64 = 64;
pub const DEFAULT_TOP: usize = 10;
pub const DEFAULT_PATIENCE: u64 = 200;
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1_000_000_000;
const SPOT_CHECK_EVERY: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("exhaustive space has {size} candidates, above the cap {cap}")]
    OverCap { size: u128, cap: u64 },
    #[error("no valid candidate found")]
    NoValidCandidate,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    Random,
    HillClimb,
}

impl FromStr for Strategy {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "random" => Ok(Strategy::Random),
            "hill-climb" => Ok(Strategy::HillClimb),
            _ => Err(SearchError::Config(format!("unknown strategy `{s}`"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Random => "random",
            Strategy::HillClimb => "hill-climb",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub field: FieldSpec,
    pub degrees: Vec<usize>,
    pub strategy: Strategy,
    /// Candidates drawn, valid or not.
    pub budget: u64,
    pub seed: u64,
    /// When false, each leading coefficient ranges over {1, ν}.
    pub monic_only: bool,
    /// Restrict f_1's x^{d_1-1} coefficient to scaling-orbit representatives.
    pub normalize: bool,
    pub top: usize,
    pub patience: u64,
    pub exhaustive_cap: u64,
}

impl SearchConfig {
    pub fn new(field: FieldSpec, degrees: Vec<usize>) -> Self {
        SearchConfig {
            field,
            degrees,
            strategy: Strategy::Random,
            budget: 1_000_000,
            seed: 0,
            monic_only: true,
            normalize: true,
            top: DEFAULT_TOP,
            patience: DEFAULT_PATIENCE,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.degrees.is_empty() {
            return Err(SearchError::Config("degrees must be non-empty".into()));
        }
        if self.degrees.contains(&0) {
            return Err(SearchError::Config("degrees must be at least 1".into()));
        }
        if self.degrees.len() > 16 {
            return Err(SearchError::Config("at most 16 polynomials are supported".into()));
        }
        if self.budget == 0 {
            return Err(SearchError::Config("budget must be at least 1".into()));
        }
        if self.top == 0 {
            return Err(SearchError::Config("top must be at least 1".into()));
        }
        if self.patience == 0 {
            return Err(SearchError::Config("patience must be at least 1".into()));
        }
        self.field
            .char_table()
            .map_err(|e| SearchError::Config(e.to_string()))?;
        Ok(())
    }
}

/// JSON form of [`SearchConfig`]; absent keys take the defaults.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfigFile {
    pub field: String,
    pub degrees: Vec<usize>,
    pub strategy: Option<Strategy>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub monic_only: Option<bool>,
    pub normalize: Option<bool>,
    pub top: Option<usize>,
    pub patience: Option<u64>,
    pub exhaustive_cap: Option<u64>,
}

impl SearchConfigFile {
    pub fn into_config(self) -> Result<SearchConfig, SearchError> {
        let field: FieldSpec = self
            .field
            .parse()
            .map_err(|e: crate::field::FieldError| SearchError::Config(e.to_string()))?;
        let mut cfg = SearchConfig::new(field, self.degrees);
        if let Some(s) = self.strategy {
            cfg.strategy = s;
            if s == Strategy::Exhaustive {
                cfg.budget = u64::MAX;
            }
        }
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.monic_only = self.monic_only.unwrap_or(cfg.monic_only);
        cfg.normalize = self.normalize.unwrap_or(cfg.normalize);
        cfg.top = self.top.unwrap_or(cfg.top);
        cfg.patience = self.patience.unwrap_or(cfg.patience);
        cfg.exhaustive_cap = self.exhaustive_cap.unwrap_or(cfg.exhaustive_cap);
        Ok(cfg)
    }
}

/// Per-polynomial character rows χ(f_i(x)), x in enumeration order.
#[derive(Clone, Debug)]
pub struct CharCache {
    rows: Vec<Vec<i8>>,
}

impl CharCache {
    pub fn new(sys: &CurveSystem) -> Result<Self, SearchError> {
        let spec = sys.spec();
        let table = spec
            .char_table()
            .map_err(|e| SearchError::Config(e.to_string()))?;
        let rows = sys
            .polys()
            .iter()
            .map(|f| {
                let mut row = Vec::new();
                char_row(spec, table, f.raw(), &mut row);
                row
            })
            .collect();
        Ok(CharCache { rows })
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }
}

/// (N, g) from cached character rows; agrees with [`point_count`].
pub fn evaluate_candidate(sys: &CurveSystem, cache: &CharCache) -> (u64, u64) {
    let k = sys.k();
    let rows: Vec<&[i8]> = cache.rows.iter().map(Vec::as_slice).collect();
    let mut prods = vec![0i8; 1 << k];
    let mut sums = vec![0i64; 1 << k];
    subset_char_sums_from_rows(&rows, &mut prods, &mut sums);
    let spec = sys.spec();
    let lc_chis: Vec<i8> = sys
        .polys()
        .iter()
        .map(|f| spec.chi_raw(*f.raw().last().expect("non-constant")))
        .collect();
    let n = count_from_sums(spec.q(), sys.degrees(), &lc_chis, &sums);
    (n, sys.genus())
}

/// N = q + 1 - Σ_I (1 - inf_I - S_I).
fn count_from_sums(q: u64, degrees: &[usize], lc_chis: &[i8], sums: &[i64]) -> u64 {
    let mut total = q as i64 + 1;
    for (mask, &s) in sums.iter().enumerate().skip(1) {
        let mut deg = 0;
        let mut chi = 1i64;
        for (i, (&d, &c)) in degrees.iter().zip(lc_chis).enumerate() {
            if mask >> i & 1 == 1 {
                deg += d;
                chi *= c as i64;
            }
        }
        let inf = if deg % 2 == 1 { 1 } else { 1 + chi };
        total -= 1 - inf - s;
    }
    total as u64
}

/// Ordered allowed values for every digit of a candidate.
#[derive(Clone, Debug)]
struct Space {
    spec: FieldSpec,
    degrees: Vec<usize>,
    digits: Vec<Vec<u64>>,
    /// Positions with more than one allowed value.
    mutable: Vec<usize>,
    size: u128,
}

impl Space {
    fn new(cfg: &SearchConfig) -> Self {
        let spec = &cfg.field;
        let nu = spec.non_square().index();
        let all: Vec<u64> = (0..spec.q()).collect();
        let lead = if cfg.monic_only { vec![1] } else { vec![1, nu] };
        let orbit_reps = if cfg.degrees.iter().all(|d| d % 2 == 0) {
            vec![0, 1]
        } else {
            vec![0, 1, nu]
        };
        let mut digits = Vec::new();
        for (i, &d) in cfg.degrees.iter().enumerate() {
            for j in 0..=d {
                digits.push(if j == d {
                    lead.clone()
                } else if i == 0 && cfg.normalize && j + 1 == d {
                    orbit_reps.clone()
                } else {
                    all.clone()
                });
            }
        }
        let size = digits
            .iter()
            .try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128))
            .unwrap_or(u128::MAX);
        let mutable = (0..digits.len()).filter(|&j| digits[j].len() > 1).collect();
        Space {
            spec: spec.clone(),
            degrees: cfg.degrees.clone(),
            digits,
            mutable,
            size,
        }
    }

    /// Choice indices of candidate `index`.
    fn decode(&self, mut index: u128, choice: &mut [usize]) {
        for (c, vals) in choice.iter_mut().zip(&self.digits).rev() {
            let r = vals.len() as u128;
            *c = (index % r) as usize;
            index /= r;
        }
    }

    /// Advances to the next index; false on wrap-around.
    fn increment(&self, choice: &mut [usize]) -> bool {
        for (c, vals) in choice.iter_mut().zip(&self.digits).rev() {
            *c += 1;
            if *c < vals.len() {
                return true;
            }
            *c = 0;
        }
        false
    }

    fn fill(&self, choice: &[usize], coeffs: &mut [u64]) {
        for ((out, &c), vals) in coeffs.iter_mut().zip(choice).zip(&self.digits) {
            *out = vals[c];
        }
    }

    fn randomize(&self, rng: &mut ChaCha8Rng, choice: &mut [usize], coeffs: &mut [u64]) {
        for ((c, out), vals) in choice.iter_mut().zip(coeffs.iter_mut()).zip(&self.digits) {
            *c = if vals.len() == 1 { 0 } else { rng.gen_range(0..vals.len()) };
            *out = vals[*c];
        }
    }

    fn system(&self, coeffs: &[u64]) -> CurveSystem {
        let mut polys = Vec::with_capacity(self.degrees.len());
        let mut start = 0;
        for &d in &self.degrees {
            polys.push(Poly::from_raw(&self.spec, coeffs[start..start + d + 1].to_vec()));
            start += d + 1;
        }
        CurveSystem::new(&self.spec, polys).expect("evaluator accepted the candidate")
    }
}

/// Scores concatenated coefficient vectors without allocating per candidate.
pub struct Evaluator {
    spec: FieldSpec,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    genus: u64,
    hws: u64,
    rows: Vec<Vec<i8>>,
    cached: Vec<Vec<u64>>,
    prods: Vec<i8>,
    sums: Vec<i64>,
    lc_chis: Vec<i8>,
    prod: Vec<u64>,
    tmp: Vec<u64>,
    deriv: Vec<u64>,
}

impl Evaluator {
    pub fn new(spec: &FieldSpec, degrees: &[usize]) -> Result<Self, SearchError> {
        let (genus, _) = genus_fibre(degrees).map_err(|e| SearchError::Config(e.to_string()))?;
        if degrees.contains(&0) {
            return Err(SearchError::Config("degrees must be at least 1".into()));
        }
        if degrees.len() > 16 {
            return Err(SearchError::Config("at most 16 polynomials are supported".into()));
        }
        spec.char_table().map_err(|e| SearchError::Config(e.to_string()))?;
        let k = degrees.len();
        let mut offsets = Vec::with_capacity(k + 1);
        offsets.push(0);
        for &d in degrees {
            offsets.push(offsets.last().unwrap() + d + 1);
        }
        let q = spec.q() as usize;
        Ok(Evaluator {
            spec: spec.clone(),
            degrees: degrees.to_vec(),
            offsets,
            genus,
            hws: hws_bound(spec.q(), genus),
            rows: vec![Vec::with_capacity(q); k],
            cached: vec![Vec::new(); k],
            prods: vec![0; 1 << k],
            sums: vec![0; 1 << k],
            lc_chis: vec![0; k],
            prod: Vec::new(),
            tmp: Vec::new(),
            deriv: Vec::new(),
        })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// N for the concatenated coefficients, or `None` when the product is
    /// inseparable or some f_i has the wrong degree.
    pub fn evaluate(&mut self, coeffs: &[u64]) -> Option<u64> {
        let spec = &self.spec;
        let k = self.degrees.len();
        for i in 0..k {
            let f = &coeffs[self.offsets[i]..self.offsets[i + 1]];
            if *f.last()? == 0 {
                return None;
            }
        }
        self.prod.clear();
        self.prod.extend_from_slice(&coeffs[..self.offsets[1]]);
        for i in 1..k {
            let f = &coeffs[self.offsets[i]..self.offsets[i + 1]];
            mul_slices(spec, &self.prod, f, &mut self.tmp);
            std::mem::swap(&mut self.prod, &mut self.tmp);
        }
        self.deriv.clear();
        self.deriv.extend(
            self.prod
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| spec.mul_raw(c, spec.reduce_int(i as i64))),
        );
        trim(&mut self.deriv);
        if self.deriv.is_empty() || gcd_degree_in_place(spec, &mut self.prod, &mut self.deriv) != 0 {
            return None;
        }
        let table = spec.char_table().expect("checked in new");
        for i in 0..k {
            let f = &coeffs[self.offsets[i]..self.offsets[i + 1]];
            if self.cached[i] != f {
                char_row(spec, table, f, &mut self.rows[i]);
                self.cached[i].clear();
                self.cached[i].extend_from_slice(f);
            }
            self.lc_chis[i] = table[*f.last().unwrap() as usize];
        }
        let rows: [&[i8]; 16] = std::array::from_fn(|i| self.rows.get(i).map_or(&[][..], |r| r));
        subset_char_sums_from_rows(&rows[..k], &mut self.prods, &mut self.sums);
        Some(count_from_sums(spec.q(), &self.degrees, &self.lc_chis, &self.sums))
    }
}

/// Top-R list ordered by N descending, then coefficient key ascending.
#[derive(Clone, Debug, Default)]
struct Leaderboard {
    top: usize,
    entries: Vec<(u64, Vec<u64>)>,
}

fn rank(a: &(u64, Vec<u64>), b: &(u64, Vec<u64>)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1))
}

impl Leaderboard {
    fn new(top: usize) -> Self {
        Leaderboard { top, entries: Vec::with_capacity(top + 1) }
    }

    fn offer(&mut self, n: u64, key: &[u64]) {
        if self.entries.len() == self.top {
            let worst = self.entries.last().unwrap();
            if n < worst.0 || (n == worst.0 && key >= &worst.1[..]) {
                return;
            }
        }
        let pos = self
            .entries
            .partition_point(|e| e.0 > n || (e.0 == n && &e.1[..] < key));
        if self.entries.get(pos).is_some_and(|e| e.0 == n && e.1 == key) {
            return;
        }
        self.entries.insert(pos, (n, key.to_vec()));
        self.entries.truncate(self.top);
    }

    fn merge(mut self, other: Leaderboard) -> Leaderboard {
        self.entries.extend(other.entries);
        self.entries.sort_by(rank);
        self.entries.dedup();
        self.entries.truncate(self.top);
        self
    }
}

/// One leaderboard line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordEntry {
    pub q: u64,
    pub g: u64,
    pub n: u64,
    pub system: CurveSystem,
    pub hws: u64,
    pub known_lower: Option<u64>,
    pub known_upper: Option<u64>,
    pub improved: bool,
}

impl RecordEntry {
    /// N above the known upper bound: a discrepancy to report.
    pub fn exceeds_known_upper(&self) -> bool {
        self.known_upper.is_some_and(|u| self.n > u)
    }

    /// Attaches known bounds for (q, g). An absent lower bound means the
    /// best known curve has at most upper/√2 points, so anything above
    /// that counts as an improvement.
    pub fn annotate(&mut self, table: &RecordsTable) {
        let Some(row) = table.lookup(self.q, self.g) else {
            return;
        };
        self.known_lower = row.lower;
        self.known_upper = Some(row.upper);
        self.improved = match row.lower {
            Some(l) => self.n > l,
            None => 2 * (self.n as u128).pow(2) > (row.upper as u128).pow(2),
        };
    }
}

impl Serialize for RecordEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RecordEntry", 10)?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("field", &self.system.spec().to_string())?;
        s.serialize_field("g", &self.g)?;
        s.serialize_field("N", &self.n)?;
        s.serialize_field("hws", &self.hws)?;
        s.serialize_field("polys", &coefficient_lists(&self.system))?;
        s.serialize_field("known_lower", &self.known_lower)?;
        s.serialize_field("known_upper", &self.known_upper)?;
        s.serialize_field("improved", &self.improved)?;
        s.serialize_field("exceeds_known_upper", &self.exceeds_known_upper())?;
        s.end()
    }
}

/// Deterministic run counters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub strategy: Strategy,
    pub evaluated: u64,
    pub skipped: u64,
    pub space_size: u128,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub entries: Vec<RecordEntry>,
    pub stats: SearchStats,
}

#[derive(Default)]
struct Partial {
    board: Leaderboard,
    evaluated: u64,
    skipped: u64,
}

struct Worker<'a> {
    space: &'a Space,
    eval: Evaluator,
    partial: Partial,
}

impl<'a> Worker<'a> {
    fn new(space: &'a Space, top: usize) -> Result<Self, SearchError> {
        Ok(Worker {
            space,
            eval: Evaluator::new(&space.spec, &space.degrees)?,
            partial: Partial { board: Leaderboard::new(top), ..Partial::default() },
        })
    }

    fn score(&mut self, coeffs: &[u64]) -> Result<Option<u64>, SearchError> {
        let Some(n) = self.eval.evaluate(coeffs) else {
            self.partial.skipped += 1;
            return Ok(None);
        };
        self.partial.evaluated += 1;
        if n > self.eval.hws {
            return Err(SearchError::Invariant(format!(
                "N = {n} exceeds the Hasse-Weil-Serre bound {}",
                self.eval.hws
            )));
        }
        if self.partial.evaluated % SPOT_CHECK_EVERY == 1 {
            let reference = point_count(&self.space.system(coeffs)).n;
            if reference != n {
                return Err(SearchError::Invariant(format!(
                    "fast count {n} disagrees with point_count {reference} at {coeffs:?}"
                )));
            }
        }
        self.partial.board.offer(n, coeffs);
        Ok(Some(n))
    }
}

fn partition_rng(seed: u64, j: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(j);
    rng
}

fn share(total: u64, j: u64) -> u64 {
    total / PARTITIONS + u64::from(j < total % PARTITIONS)
}

fn run_exhaustive(space: &Space, top: usize, lo: u128, hi: u128) -> Result<Partial, SearchError> {
    let mut w = Worker::new(space, top)?;
    let len = space.digits.len();
    let mut choice = vec![0; len];
    let mut coeffs = vec![0; len];
    space.decode(lo, &mut choice);
    let mut i = lo;
    while i < hi {
        space.fill(&choice, &mut coeffs);
        w.score(&coeffs)?;
        space.increment(&mut choice);
        i += 1;
    }
    Ok(w.partial)
}

fn run_random(space: &Space, top: usize, seed: u64, j: u64, budget: u64) -> Result<Partial, SearchError> {
    let mut w = Worker::new(space, top)?;
    let mut rng = partition_rng(seed, j);
    let len = space.digits.len();
    let mut choice = vec![0; len];
    let mut coeffs = vec![0; len];
    for _ in 0..budget {
        space.randomize(&mut rng, &mut choice, &mut coeffs);
        w.score(&coeffs)?;
    }
    Ok(w.partial)
}

fn run_hill_climb(
    space: &Space,
    cfg: &SearchConfig,
    j: u64,
    budget: u64,
) -> Result<Partial, SearchError> {
    let mut w = Worker::new(space, cfg.top)?;
    let mut rng = partition_rng(cfg.seed, j);
    let len = space.digits.len();
    let mut choice = vec![0; len];
    let mut coeffs = vec![0; len];
    let mut current: Option<u64> = None;
    let mut rejected = 0;
    for _ in 0..budget {
        let Some(cur) = current.filter(|_| !space.mutable.is_empty()) else {
            space.randomize(&mut rng, &mut choice, &mut coeffs);
            current = w.score(&coeffs)?;
            rejected = 0;
            continue;
        };
        let pos = space.mutable[rng.gen_range(0..space.mutable.len())];
        let vals = &space.digits[pos];
        let old = choice[pos];
        let mut c = rng.gen_range(0..vals.len() - 1);
        if c >= old {
            c += 1;
        }
        choice[pos] = c;
        coeffs[pos] = vals[c];
        match w.score(&coeffs)? {
            Some(n) if n >= cur => {
                if n > cur {
                    rejected = 0;
                }
                current = Some(n);
            }
            _ => {
                choice[pos] = old;
                coeffs[pos] = vals[old];
                rejected += 1;
                if rejected >= cfg.patience {
                    current = None;
                }
            }
        }
    }
    Ok(w.partial)
}

/// Runs the configured search; output is a function of `cfg` alone.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let space = Space::new(cfg);
    let parts: Vec<u64> = (0..PARTITIONS).collect();
    let partials: Vec<Partial> = match cfg.strategy {
        Strategy::Exhaustive => {
            if space.size > cfg.exhaustive_cap as u128 {
                return Err(SearchError::OverCap { size: space.size, cap: cfg.exhaustive_cap });
            }
            let total = space.size.min(cfg.budget as u128);
            let p = PARTITIONS as u128;
            parts
                .par_iter()
                .map(|&j| {
                    let j = j as u128;
                    run_exhaustive(&space, cfg.top, total * j / p, total * (j + 1) / p)
                })
                .collect::<Result<_, _>>()?
        }
        Strategy::Random => parts
            .par_iter()
            .map(|&j| run_random(&space, cfg.top, cfg.seed, j, share(cfg.budget, j)))
            .collect::<Result<_, _>>()?,
        Strategy::HillClimb => parts
            .par_iter()
            .map(|&j| run_hill_climb(&space, cfg, j, share(cfg.budget, j)))
            .collect::<Result<_, _>>()?,
    };
    let mut board = Leaderboard::new(cfg.top);
    let (mut evaluated, mut skipped) = (0, 0);
    for p in partials {
        evaluated += p.evaluated;
        skipped += p.skipped;
        board = board.merge(p.board);
    }
    if board.entries.is_empty() {
        return Err(SearchError::NoValidCandidate);
    }
    let (genus, _) = genus_fibre(&cfg.degrees).map_err(|e| SearchError::Config(e.to_string()))?;
    let hws = hws_bound(cfg.field.q(), genus);
    let entries = board
        .entries
        .into_iter()
        .map(|(n, key)| RecordEntry {
            q: cfg.field.q(),
            g: genus,
            n,
            system: space.system(&key),
            hws,
            known_lower: None,
            known_upper: None,
            improved: false,
        })
        .collect();
    Ok(SearchOutcome {
        entries,
        stats: SearchStats { strategy: cfg.strategy, evaluated, skipped, space_size: space.size },
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProbeResult {
    pub candidates: u64,
    pub evaluated: u64,
    pub seconds: f64,
    pub rate: f64,
}

/// Single-threaded random-candidate throughput over `cfg.budget` draws.
pub fn throughput_probe(cfg: &SearchConfig) -> Result<ProbeResult, SearchError> {
    cfg.validate()?;
    let space = Space::new(cfg);
    let mut eval = Evaluator::new(&cfg.field, &cfg.degrees)?;
    let mut rng = partition_rng(cfg.seed, 0);
    let len = space.digits.len();
    let mut choice = vec![0; len];
    let mut coeffs = vec![0; len];
    let mut evaluated = 0;
    let start = Instant::now();
    for _ in 0..cfg.budget {
        space.randomize(&mut rng, &mut choice, &mut coeffs);
        if eval.evaluate(&coeffs).is_some() {
            evaluated += 1;
        }
    }
    let seconds = start.elapsed().as_secs_f64().max(1e-9);
    Ok(ProbeResult {
        candidates: cfg.budget,
        evaluated,
        seconds,
        rate: cfg.budget as f64 / seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(p: u64, fs: &[&str]) -> CurveSystem {
        let spec = FieldSpec::prime(p).unwrap();
        let polys = fs.iter().map(|s| Poly::parse(&spec, s).unwrap()).collect();
        CurveSystem::new(&spec, polys).unwrap()
    }

    #[test]
    fn q17_pair_scores_48() {
        let s = sys(17, &["1,15,16,1,1", "15,0,16,13,1"]);
        let cache = CharCache::new(&s).unwrap();
        assert_eq!(evaluate_candidate(&s, &cache), (48, 5));
        let mut e = Evaluator::new(s.spec(), s.degrees()).unwrap();
        assert_eq!(e.evaluate(&[1, 15, 16, 1, 1, 15, 0, 16, 13, 1]), Some(48));
    }

    #[test]
    fn inseparable_candidate_is_skipped() {
        let spec = FieldSpec::prime(5).unwrap();
        let mut e = Evaluator::new(&spec, &[2, 1]).unwrap();
        // (x+4)^2 alone, then a shared root between f_1 and f_2.
        assert_eq!(e.evaluate(&[1, 3, 1, 1, 1]), None);
        assert_eq!(e.evaluate(&[4, 0, 1, 1, 1]), None);
        assert!(e.evaluate(&[1, 0, 1, 1, 1]).is_some());
    }

    #[test]
    fn evaluator_matches_point_count_exhaustively_small() {
        let cfg = SearchConfig::new(FieldSpec::prime(5).unwrap(), vec![2, 3]);
        let space = Space::new(&SearchConfig { normalize: false, monic_only: false, ..cfg });
        let mut e = Evaluator::new(&space.spec, &space.degrees).unwrap();
        let mut choice = vec![0; space.digits.len()];
        let mut coeffs = vec![0; space.digits.len()];
        loop {
            space.fill(&choice, &mut coeffs);
            if let Some(n) = e.evaluate(&coeffs) {
                assert_eq!(point_count(&space.system(&coeffs)).n, n);
            }
            if !space.increment(&mut choice) {
                break;
            }
        }
    }

    #[test]
    fn decode_matches_increment() {
        let mut cfg = SearchConfig::new(FieldSpec::prime(3).unwrap(), vec![2, 2]);
        cfg.monic_only = false;
        let space = Space::new(&cfg);
        let mut a = vec![0; space.digits.len()];
        let mut b = vec![0; space.digits.len()];
        for i in 0..space.size {
            space.decode(i, &mut b);
            assert_eq!(a, b);
            space.increment(&mut a);
        }
    }

    #[test]
    fn leaderboard_order_and_dedup() {
        let mut b = Leaderboard::new(3);
        b.offer(5, &[2]);
        b.offer(7, &[9]);
        b.offer(5, &[1]);
        b.offer(5, &[1]);
        b.offer(4, &[0]);
        b.offer(5, &[0]);
        let got: Vec<_> = b.entries.iter().map(|e| (e.0, e.1[0])).collect();
        assert_eq!(got, vec![(7, 9), (5, 0), (5, 1)]);
    }

    #[test]
    fn normalization_representatives() {
        let spec = FieldSpec::prime(7).unwrap();
        let even = Space::new(&SearchConfig::new(spec.clone(), vec![4, 4]));
        assert_eq!(even.digits[3], vec![0, 1]);
        let odd = Space::new(&SearchConfig::new(spec, vec![4, 3]));
        assert_eq!(odd.digits[3], vec![0, 1, 3]);
        assert_eq!(odd.digits[4], vec![1]);
    }

    #[test]
    fn config_errors() {
        let spec = FieldSpec::prime(5).unwrap();
        let mut cfg = SearchConfig::new(spec.clone(), vec![]);
        assert!(matches!(run_search(&cfg), Err(SearchError::Config(_))));
        cfg.degrees = vec![3, 3];
        cfg.budget = 0;
        assert!(matches!(run_search(&cfg), Err(SearchError::Config(_))));
        let mut big = SearchConfig::new(FieldSpec::prime(97).unwrap(), vec![4, 4]);
        big.strategy = Strategy::Exhaustive;
        assert!(matches!(run_search(&big), Err(SearchError::OverCap { .. })));
        assert!("sideways".parse::<Strategy>().is_err());
    }

    #[test]
    fn no_valid_candidate() {
        // Over F_3 with degree-3 factors, every monic pair in a 1-candidate
        // budget starting at index 0 is x^3 * x^3.
        let mut cfg = SearchConfig::new(FieldSpec::prime(3).unwrap(), vec![3, 3]);
        cfg.strategy = Strategy::Exhaustive;
        cfg.budget = 1;
        assert_eq!(run_search(&cfg).unwrap_err(), SearchError::NoValidCandidate);
    }
}
