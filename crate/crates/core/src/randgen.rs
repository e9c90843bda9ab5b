//! Seeded random complexes with bounded shatter function.
//!
//! Every random decision is drawn from a counter-based generator keyed by
//! the seed and the colex rank of the subset in question, so a complex does
//! not depend on evaluation order or on the number of threads.

use std::collections::HashSet;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::binomial;
use crate::bounds::{floor_log2, g_k, growth_exponent, tk_coefficient};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::span::{complex_shatter_value, SpanSearch, DEFAULT_NODE_LIMIT};
use crate::Rational;

/// Identity of the generator, embedded in every report.
pub const GENERATOR: &str = "splitmix64-keyed/v1";

/// SplitMix64 finalizer.
pub fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Colex rank of a sorted vertex list: `Σ C(v_i, i+1)`.
pub fn colex_rank(vertices: &[u32]) -> u128 {
    vertices
        .iter()
        .enumerate()
        .fold(0u128, |acc, (i, &v)| acc.saturating_add(binomial(v as u64, i as u64 + 1)))
}

/// Seed of trial `trial` at size `n` under `master`.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    mix(mix(mix(master) ^ n as u64) ^ trial as u64)
}

/// Counter-based generator: each subset gets its own 64-bit word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyedRng {
    key: u64,
}

impl KeyedRng {
    pub fn new(seed: u64) -> Self {
        KeyedRng { key: mix(seed ^ 0x5EED_0F_C0_4D1E) }
    }

    pub fn word(&self, size: usize, rank: u128) -> u64 {
        let lo = rank as u64;
        let hi = (rank >> 64) as u64;
        mix(mix(mix(self.key ^ size as u64) ^ lo) ^ mix(hi))
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn unit(&self, size: usize, rank: u128) -> f64 {
        (self.word(size, rank) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli(`p`) decision for the sorted vertex list `face`.
    pub fn accept(&self, face: &[u32], p: f64) -> bool {
        p >= 1.0 || (p > 0.0 && self.unit(face.len(), colex_rank(face)) < p)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} is outside [0, 1]")));
    }
    Ok(())
}

fn check_labels(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if n > u32::MAX as usize {
        return Err(invalid("n exceeds the 32-bit label range"));
    }
    Ok(())
}

/// Sorted lists of upper neighbours, from a lexicographically sorted edge list.
fn upper_neighbours(n: usize, edges: &[Face]) -> Vec<Vec<u32>> {
    let mut up = vec![Vec::new(); n];
    for e in edges {
        up[e.vertices()[0] as usize].push(e.vertices()[1]);
    }
    up
}

/// Level-wise random complex: all `n` vertices, then for each size
/// `2..=t+1` every subset whose proper subsets are all faces becomes a face
/// with probability `p`.
pub fn sample_complex(n: usize, t: usize, p: f64, seed: u64) -> Result<SimplicialComplex> {
    check_labels(n)?;
    if t < 1 {
        return Err(invalid("t must be at least 1"));
    }
    check_probability(p)?;
    let rng = KeyedRng::new(seed);
    let mut faces: Vec<Face> = (0..n as u32).map(|v| Face::new([v])).collect();
    if p == 0.0 || n < 2 {
        return Ok(SimplicialComplex::assemble(n, faces));
    }
    let edges: Vec<Face> = (0..n as u32)
        .into_par_iter()
        .map(|u| {
            (u + 1..n as u32)
                .filter(|&v| rng.accept(&[u, v], p))
                .map(|v| Face::new([u, v]))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    let up = upper_neighbours(n, &edges);
    let mut level = edges;
    for _ in 3..=t + 1 {
        if level.is_empty() {
            break;
        }
        let present: HashSet<&Face> = level.iter().collect();
        let next: Vec<Face> = level
            .par_iter()
            .map(|f| {
                let last = *f.vertices().last().unwrap();
                let mut out = Vec::new();
                for &w in &up[last as usize] {
                    let closed = f.vertices().iter().all(|&x| present.contains(&f.without(x).with(w)));
                    if closed {
                        let cand = f.with(w);
                        if rng.accept(cand.vertices(), p) {
                            out.push(cand);
                        }
                    }
                }
                out
            })
            .flatten()
            .collect();
        drop(present);
        faces.append(&mut level);
        level = next;
    }
    faces.append(&mut level);
    Ok(SimplicialComplex::assemble(n, faces))
}

/// Expected number of `(t+1)`-vertex faces: `C(n, t+1) p^{2^{t+1}-t-2}`.
pub fn expected_top_faces(n: usize, t: usize, p: f64) -> f64 {
    let e = (1i32 << (t + 1)) - t as i32 - 2;
    binomial(n as u64, t as u64 + 1) as f64 * p.powi(e)
}

/// Result of [`prune_bad_msets`].
#[derive(Debug, Clone, PartialEq)]
pub struct PruneOutcome {
    pub complex: SimplicialComplex,
    pub removed_vertices: Vec<u32>,
    /// Distinct bad sets found while marking vertices; each marked vertex
    /// lies in at least one of them.
    pub bad_sets: Vec<Vec<u32>>,
}

/// Removes every vertex lying in some `m`-set that spans at least `z`
/// faces of dimension at least one, together with all faces touching it.
pub fn prune_bad_msets(c: &SimplicialComplex, m: usize, z: u64, node_limit: u64) -> Result<PruneOutcome> {
    if z < 1 {
        return Err(invalid("z must be at least 1"));
    }
    if m < 1 || m > c.vertex_count() {
        return Err(invalid(format!("m = {m} must lie in 1..={}", c.vertex_count())));
    }
    let unchanged = || PruneOutcome { complex: c.clone(), removed_vertices: vec![], bad_sets: vec![] };
    let everything = |bad: Vec<u32>| {
        let all = c.vertices();
        PruneOutcome { complex: c.remove_vertices(&all), removed_vertices: all, bad_sets: vec![bad] }
    };
    let search = SpanSearch::new(c, 2..=usize::MAX).node_limit(node_limit);
    let live = search.universe();
    if live <= m {
        // one m-set holds every face
        let counted = (c.face_count() - live) as u64;
        return Ok(if counted >= z { everything(c.vertices()) } else { unchanged() });
    }
    if search.ceiling(m) < z {
        return Ok(unchanged());
    }
    // an (m-1)-set reaching z makes every vertex bad
    if m >= 2 {
        if let Some(w) = search.find_at_least(m - 1, &[], z)? {
            return Ok(everything(w.vertices));
        }
    }
    let mut bad = vec![false; c.vertex_count()];
    let mut bad_sets = Vec::new();
    for v in c.vertices() {
        if bad[v as usize] || search.face_degree(v) == 0 {
            continue;
        }
        if let Some(w) = search.find_at_least(m, &[v], z)? {
            if w.vertices.len() < m {
                return Ok(everything(w.vertices));
            }
            for &u in &w.vertices {
                bad[u as usize] = true;
            }
            bad_sets.push(w.vertices);
        }
    }
    let removed: Vec<u32> = (0..c.vertex_count() as u32).filter(|&v| bad[v as usize]).collect();
    Ok(PruneOutcome { complex: c.remove_vertices(&removed), removed_vertices: removed, bad_sets })
}

/// Default edge-level probability for the skeleton construction:
/// `ln ln max(n, 16) / n`.
pub fn skeleton_default_p(n: usize) -> f64 {
    (n.max(16) as f64).ln().ln() / n as f64
}

/// Result of [`sample_skeleton_complex`].
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonOutcome {
    pub complex: SimplicialComplex,
    pub sampled_simplices: usize,
    pub deleted_simplices: usize,
}

/// Complete `(d-1)`-skeleton on `n` vertices plus random `d`-simplices,
/// minus every `d`-simplex lying in an `m`-set that spans at least
/// `m - d + 1` of the sampled `d`-simplices.
pub fn sample_skeleton_complex(
    n: usize,
    d: usize,
    m: usize,
    p: f64,
    seed: u64,
    node_limit: u64,
) -> Result<SkeletonOutcome> {
    check_labels(n)?;
    if d < 1 || m <= d {
        return Err(invalid("need d ≥ 1 and m > d"));
    }
    if m > n {
        return Err(invalid(format!("m = {m} exceeds n = {n}")));
    }
    check_probability(p)?;
    if binomial(n as u64, d as u64) > 50_000_000 {
        return Err(Error::ResourceLimit(format!("the complete {}-skeleton on {n} vertices is too large", d - 1)));
    }
    let rng = KeyedRng::new(seed);
    let mut faces = Vec::new();
    for size in 1..=d {
        faces.extend(itertools::Itertools::combinations(0..n as u32, size).map(Face::new));
    }
    let top: Vec<Face> = itertools::Itertools::combinations(0..n as u32, d + 1)
        .filter(|f| rng.accept(f, p))
        .map(Face::new)
        .collect();
    let sampled = top.len();
    faces.extend(top.iter().cloned());
    let full = SimplicialComplex::assemble(n, faces);
    let search = SpanSearch::new(&full, d + 1..=d + 1).node_limit(node_limit);
    let target = (m - d + 1) as u64;
    let mut doomed: HashSet<Face> = HashSet::new();
    for sigma in &top {
        if doomed.contains(sigma) {
            continue;
        }
        if let Some(w) = search.find_at_least(m, sigma.vertices(), target)? {
            // every sampled simplex inside the witness is doomed as well
            let inside: HashSet<u32> = w.vertices.iter().copied().collect();
            for tau in &top {
                if tau.vertices().iter().all(|v| inside.contains(v)) {
                    doomed.insert(tau.clone());
                }
            }
        }
    }
    let complex = full.retain(|f| !doomed.contains(f));
    Ok(SkeletonOutcome { complex, sampled_simplices: sampled, deleted_simplices: doomed.len() })
}

/// Knobs shared by the experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Node budget of each exact span search.
    pub node_limit: u64,
    /// `f(m)` is computed exactly when `C(n, m)` is at most this.
    pub exact_limit: u128,
    /// Random `m`-sets examined when `f(m)` is only sampled.
    pub samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { node_limit: DEFAULT_NODE_LIMIT, exact_limit: 10_000_000, samples: 2000 }
    }
}

/// `f(m)` of a pruned complex: exact, or the best trace size seen over
/// random `m`-sets and a greedy search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShatterValue {
    Exact(u64),
    Sampled { lower_bound: u64, samples: usize },
}

impl ShatterValue {
    pub fn exact(&self) -> Option<u64> {
        match *self {
            ShatterValue::Exact(v) => Some(v),
            ShatterValue::Sampled { .. } => None,
        }
    }

    /// Largest value observed (exact or sampled).
    pub fn observed(&self) -> u64 {
        match *self {
            ShatterValue::Exact(v) => v,
            ShatterValue::Sampled { lower_bound, .. } => lower_bound,
        }
    }
}

impl std::fmt::Display for ShatterValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShatterValue::Exact(v) => write!(f, "{v}"),
            ShatterValue::Sampled { .. } => write!(f, "sampled"),
        }
    }
}

/// Draws `count` random `m`-subsets of the vertices and returns the largest
/// trace size `1 + #faces ⊆ Y` among them.
pub fn sampled_shatter_lower_bound(c: &SimplicialComplex, m: usize, count: usize, seed: u64) -> Result<u64> {
    let verts = c.vertices();
    if m > verts.len() {
        return Ok(1 + c.face_count() as u64);
    }
    let rng = KeyedRng::new(seed ^ 0xA5A5_A5A5);
    let mut best = 0;
    for i in 0..count {
        // partial Fisher-Yates over the vertex list
        let mut pool = verts.clone();
        for j in 0..m {
            let r = rng.word(j + 1, (i as u128) << 32 | j as u128);
            let k = j + (r % (pool.len() - j) as u64) as usize;
            pool.swap(j, k);
        }
        best = best.max(1 + c.span_count(&pool[..m])?);
    }
    Ok(best)
}

fn shatter_value_for(c: &SimplicialComplex, m: usize, config: &ExperimentConfig, seed: u64) -> Result<ShatterValue> {
    if binomial(c.vertex_count() as u64, m as u64) <= config.exact_limit {
        return Ok(ShatterValue::Exact(complex_shatter_value(c, m, config.node_limit)?));
    }
    let mut lower = sampled_shatter_lower_bound(c, m, config.samples, seed)?;
    let search = SpanSearch::new(c, 2..=usize::MAX);
    if m <= search.universe() {
        lower = lower.max(1 + m as u64 + search.greedy(m, &[])?.count);
    }
    Ok(ShatterValue::Sampled { lower_bound: lower, samples: config.samples })
}

/// One seeded run of sample-then-prune.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub generator: String,
    pub seed: u64,
    pub trial: usize,
    pub n: usize,
    pub s: String,
    pub m: usize,
    pub t: usize,
    pub p: f64,
    pub z: u64,
    /// Faces of the pruned complex by vertex count, starting at one.
    pub faces_by_size: Vec<usize>,
    pub faces_total: usize,
    pub faces_top: usize,
    pub unpruned_total: usize,
    pub unpruned_top: usize,
    pub f_m: ShatterValue,
    pub bad_msets: usize,
    pub removed_vertices: usize,
    #[serde(skip)]
    pub wall_time: f64,
}

impl ExperimentReport {
    pub const CSV_HEADER: &'static str = "seed,n,s,m,t,p,faces_total,faces_top,f_m,bad_msets,removed_vertices";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.n,
            self.s,
            self.m,
            self.t,
            self.p,
            self.faces_total,
            self.faces_top,
            self.f_m,
            self.bad_msets,
            self.removed_vertices
        )
    }
}

/// Parameters derived from `s`: `t = ⌊log₂ s⌋` and `z = (s-1)(m+1)`
/// rounded up to an integer face count.
pub fn construction_parameters(s: Rational, m: usize) -> Result<(usize, u64)> {
    if s < Rational::from_integer(2) {
        return Err(invalid(format!("s = {s} must be at least 2")));
    }
    let t = floor_log2(s)? as usize;
    let z = ((s - Rational::from_integer(1)) * Rational::from_integer(m as i64 + 1)).ceil();
    Ok((t, z.to_integer() as u64))
}

/// `p = n^{-1/(s-1)}`.
pub fn construction_probability(s: Rational, n: usize) -> f64 {
    let e = 1.0 / (s - Rational::from_integer(1)).to_f64().unwrap();
    (n as f64).powf(-e)
}

/// Runs one trial of the random construction with pruning.
pub fn run_trial(s: Rational, m: usize, n: usize, seed: u64, trial: usize, config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (t, z) = construction_parameters(s, m)?;
    if m > n {
        return Err(invalid(format!("m = {m} exceeds n = {n}")));
    }
    let p = construction_probability(s, n);
    let key = trial_seed(seed, n, trial);
    let raw = sample_complex(n, t, p, key)?;
    let pruned = prune_bad_msets(&raw, m, z, config.node_limit)?;
    let c = &pruned.complex;
    let f_m = shatter_value_for(c, m, config, key)?;
    let faces_by_size = c.f_vector();
    Ok(ExperimentReport {
        generator: GENERATOR.to_string(),
        seed: key,
        trial,
        n,
        s: s.to_string(),
        m,
        t,
        p,
        z,
        faces_top: c.faces_of_size(t + 1).len(),
        faces_total: c.face_count(),
        faces_by_size,
        unpruned_total: raw.face_count(),
        unpruned_top: raw.faces_of_size(t + 1).len(),
        f_m,
        bad_msets: pruned.bad_sets.len(),
        removed_vertices: pruned.removed_vertices.len(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Reports of a growth run plus the fitted exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub generator: String,
    pub s: String,
    pub m: usize,
    pub t: usize,
    pub z: u64,
    pub target_exponent: String,
    pub trials: Vec<ExperimentReport>,
    /// `(n, mean pruned face total)` per size.
    pub means: Vec<(usize, f64)>,
    pub slope: Option<f64>,
    pub unpruned_slope: Option<f64>,
}

fn means_by_n(n_list: &[usize], trials: &[ExperimentReport], pick: impl Fn(&ExperimentReport) -> usize) -> Vec<(usize, f64)> {
    n_list
        .iter()
        .map(|&n| {
            let xs: Vec<f64> = trials.iter().filter(|r| r.n == n).map(|r| pick(r) as f64).collect();
            (n, xs.iter().sum::<f64>() / xs.len().max(1) as f64)
        })
        .collect()
}

fn slope_of(means: &[(usize, f64)]) -> Option<f64> {
    loglog_slope(&means.iter().map(|&(n, y)| (n as f64, y)).collect::<Vec<_>>())
}

/// Runs `trials` seeded constructions for each `n` and fits the growth
/// exponent of the mean pruned face count. Trials run concurrently and are
/// reported in `(n, trial)` order.
pub fn growth_experiment(
    s: Rational,
    m: usize,
    n_list: &[usize],
    trials: usize,
    seed: u64,
    config: &ExperimentConfig,
) -> Result<GrowthReport> {
    let (t, z) = construction_parameters(s, m)?;
    if n_list.is_empty() || trials == 0 {
        return Err(invalid("need at least one n and one trial"));
    }
    let jobs: Vec<(usize, usize)> = n_list.iter().flat_map(|&n| (0..trials).map(move |i| (n, i))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(n, i)| run_trial(s, m, n, seed, i, config))
        .collect::<Result<Vec<_>>>()?;
    let means = means_by_n(n_list, &reports, |r| r.faces_total);
    let raw = means_by_n(n_list, &reports, |r| r.unpruned_total);
    Ok(GrowthReport {
        generator: GENERATOR.to_string(),
        s: s.to_string(),
        m,
        t,
        z,
        target_exponent: growth_exponent(s)?.to_string(),
        slope: slope_of(&means),
        unpruned_slope: slope_of(&raw),
        means,
        trials: reports,
    })
}

/// How the premise `f(m) ≤ g_k(m)` was established on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiseCheck {
    pub n: usize,
    pub trial: usize,
    pub exact: bool,
    /// Exact `f(m)`, or the largest trace size seen by sampling.
    pub value: u64,
    pub bound: u128,
    pub holds: bool,
}

/// Outcome of the probe against the conjectured `g_k` threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub k: u32,
    pub growth: GrowthReport,
    pub premise: Vec<PremiseCheck>,
    pub premise_holds: bool,
    /// The fitted exponent exceeds `k`.
    pub exceeds_k: bool,
}

/// Random constructions at `s = 2^{k+1}-k-1+ε` checked against the premise
/// `f(m) ≤ g_k(m)`. Premises are exact for `n ≤ exact_n` and sampled above.
#[allow(clippy::too_many_arguments)]
pub fn bondy_hajnal_probe(
    k: u32,
    eps: Rational,
    m: usize,
    n_list: &[usize],
    trials: usize,
    seed: u64,
    exact_n: usize,
    config: &ExperimentConfig,
) -> Result<ProbeReport> {
    if eps <= Rational::from_integer(0) {
        return Err(invalid("ε must be positive"));
    }
    let s = Rational::from_integer(tk_coefficient(k)? as i64) + eps;
    let bound = g_k(m as u64, k as u64);
    let needed = s * Rational::from_integer(m as i64) + s - Rational::from_integer(1);
    if Rational::from_integer(bound.min(i64::MAX as u128) as i64) < needed {
        return Err(Error::PreconditionViolation(format!(
            "s·m + s - 1 = {needed} exceeds g_{k}({m}) = {bound}"
        )));
    }
    let growth = growth_experiment(s, m, n_list, trials, seed, config)?;
    let mut premise = Vec::new();
    for r in &growth.trials {
        let exact = r.n <= exact_n;
        let value = if exact {
            match r.f_m {
                ShatterValue::Exact(v) => v,
                ShatterValue::Sampled { .. } => {
                    let raw = sample_complex(r.n, r.t, r.p, r.seed)?;
                    let pruned = prune_bad_msets(&raw, m, r.z, config.node_limit)?;
                    complex_shatter_value(&pruned.complex, m, config.node_limit)?
                }
            }
        } else {
            r.f_m.observed()
        };
        premise.push(PremiseCheck { n: r.n, trial: r.trial, exact, value, bound, holds: value as u128 <= bound });
    }
    Ok(ProbeReport {
        k,
        premise_holds: premise.iter().all(|p| p.holds),
        exceeds_k: growth.slope.is_some_and(|e| e > k as f64),
        growth,
        premise,
    })
}
