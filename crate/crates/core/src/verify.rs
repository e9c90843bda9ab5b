//! Verification suites run by `shatter verify-paper`.
//!
//! Each suite recomputes a family of quantities, compares them at a fixed
//! tolerance and reports the measured values. Reports contain no timings,
//! so the same configuration always serializes to the same bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bits::{self, Mask};
use crate::bounds::{self, g_k};
use crate::complex::{overlap_lower_bound, Face, SimplicialComplex};
use crate::compression::compress;
use crate::dtree;
use crate::error::{invalid, Error, Result};
use crate::randgen::{self, ExperimentConfig, KeyedRng};
use crate::search;
use crate::setsystem::SetSystem;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Quick,
    Full,
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Tier::Quick),
            "full" => Ok(Tier::Full),
            other => Err(invalid(format!("unknown tier {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    ResourceLimit,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ResourceLimit => "resource_limit",
            Status::Error => "error",
        })
    }
}

/// Which suites to run and at what scale.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub tier: Tier,
    pub suites: Vec<u32>,
    pub seed: u64,
    pub experiment: ExperimentConfig,
}

impl VerifyConfig {
    pub fn new(tier: Tier, seed: u64) -> Self {
        VerifyConfig { tier, suites: (1..=SUITE_COUNT).collect(), seed, experiment: ExperimentConfig::default() }
    }
}

pub const SUITE_COUNT: u32 = 11;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub tolerance: &'static str,
    pub measured: BTreeMap<String, Value>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tier: Tier,
    pub seed: u64,
    pub generator: &'static str,
    pub suites: Vec<SuiteResult>,
    pub all_pass: bool,
}

impl VerifyReport {
    /// Canonical JSON (keys sorted).
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("plain data serializes");
        serde_json::to_string_pretty(&v).expect("values serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,status,tolerance,measured\n");
        for s in &self.suites {
            let measured = serde_json::to_string(&s.measured).expect("values serialize");
            out.push_str(&format!("{},{},{},\"{}\",\"{}\"\n", s.id, s.name, s.status, s.tolerance, measured.replace('"', "\"\"")));
        }
        out
    }
}

pub fn suite_name(id: u32) -> &'static str {
    match id {
        1 => "dtree_grid",
        2 => "contiguous_minimizer",
        3 => "compression",
        4 => "sauer",
        5 => "growth_exponent",
        6 => "prune_guarantee",
        7 => "overlap_witness",
        8 => "embedding_lower_bound",
        9 => "extremal_oracle",
        10 => "bounds_identities",
        11 => "conjecture_probe",
        _ => "unknown",
    }
}

fn tolerance(id: u32) -> &'static str {
    match id {
        5 => "slope 1.5±0.2 (s=3), 2.0±0.25 (s=5)",
        11 => "premise f(13) ≤ 92; slope ≥ 2.0",
        _ => "exact",
    }
}

/// Accumulates checks for one suite.
struct Suite {
    measured: BTreeMap<String, Value>,
    failures: Vec<String>,
}

impl Suite {
    fn new() -> Self {
        Suite { measured: BTreeMap::new(), failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn put(&mut self, key: &str, value: Value) {
        self.measured.insert(key.to_string(), value);
    }
}

/// Runs every configured suite in order.
pub fn verify(config: &VerifyConfig) -> VerifyReport {
    let suites: Vec<SuiteResult> = config.suites.iter().map(|&id| run_suite(id, config)).collect();
    VerifyReport {
        tier: config.tier,
        seed: config.seed,
        generator: randgen::GENERATOR,
        all_pass: suites.iter().all(|s| s.status == Status::Pass),
        suites,
    }
}

pub fn run_suite(id: u32, config: &VerifyConfig) -> SuiteResult {
    let mut suite = Suite::new();
    let outcome = match id {
        1 | 2 => dtree_grid(&mut suite, id),
        3 | 4 => compression_suite(&mut suite, id, config),
        5 => growth_suite(&mut suite, config),
        6 => prune_suite(&mut suite, config),
        7 => overlap_suite(&mut suite, config),
        8 => embedding_suite(&mut suite, config),
        9 => extremal_suite(&mut suite, config),
        10 => bounds_suite(&mut suite),
        11 => probe_suite(&mut suite, config),
        other => Err(invalid(format!("no suite {other}"))),
    };
    let mut diagnostics: Vec<String> = suite.failures.iter().filter(|f| !f.is_empty()).cloned().collect();
    let hidden = suite.failures.len() - diagnostics.len();
    if hidden > 0 {
        diagnostics.push(format!("{hidden} further failures"));
    }
    let status = match outcome {
        Err(Error::ResourceLimit(msg)) => {
            diagnostics.push(msg);
            Status::ResourceLimit
        }
        Err(e) => {
            diagnostics.push(e.to_string());
            Status::Error
        }
        Ok(()) if suite.failures.is_empty() => Status::Pass,
        Ok(()) => Status::Fail,
    };
    SuiteResult { id, name: suite_name(id), status, tolerance: tolerance(id), measured: suite.measured, diagnostics }
}

/// Grid of canonical trees `T_r(d, Q)` with `dQ ≤ 12`, `r ≤ 2Q+1`.
pub fn dtree_grid_cells() -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for d in 1..=3 {
        for q in 1..=5 {
            if d * q > 12 {
                continue;
            }
            for r in 0..=2 * q + 1 {
                cells.push((d, q, r));
            }
        }
    }
    cells
}

fn dtree_grid(suite: &mut Suite, id: u32) -> Result<()> {
    let cells = dtree_grid_cells();
    for &(d, q, r) in &cells {
        let tree = dtree::build_tr(d, q, r)?;
        let formula = dtree::min_density_formula(d, q, r);
        let (block, i, j) = dtree::contiguous_min_density(&tree)?;
        let (brute, _) = dtree::min_density_bruteforce(&tree, dtree::DEFAULT_BRUTE_FORCE_CAP)?;
        let cell = || format!("d={d} Q={q} r={r}");
        if id == 1 {
            suite.check(formula == block && block == brute, || {
                format!("{}: formula {formula}, blocks {block}, brute {brute}", cell())
            });
            suite.check(dtree::is_balanced(&tree, dtree::DEFAULT_BRUTE_FORCE_CAP)?, || format!("{} unbalanced", cell()));
            suite.check(tree.facet_count() == d * q + r, || format!("{}: {} facets", cell(), tree.facet_count()));
            suite.check(tree.roots().len() == r, || format!("{}: {} roots", cell(), tree.roots().len()));
        } else {
            let direct = tree.complex().density(&dtree::block_union(d, i, j))?.density;
            suite.check(brute == block && direct == block, || {
                format!("{}: brute {brute}, best block σ{i}..σ{j} {block} (direct {direct})", cell())
            });
        }
    }
    suite.put("cells", json!(cells.len()));
    Ok(())
}

/// Random set system with `1 ≤ n ≤ 10` and up to 60 draws.
pub fn random_system(seed: u64) -> SetSystem {
    let rng = KeyedRng::new(seed);
    let n = 1 + (rng.word(0, 0) % 10) as usize;
    let draws = 1 + (rng.word(0, 1) % 60) as usize;
    let members = (0..draws).map(|i| rng.word(1, i as u128) & bits::full_mask(n));
    SetSystem::new(n, members).expect("masks fit")
}

fn compression_suite(suite: &mut Suite, id: u32, config: &VerifyConfig) -> Result<()> {
    let count = match config.tier {
        Tier::Quick => 100,
        Tier::Full => 500,
    };
    let mut equality_cases = 0;
    for i in 0..count {
        let s = random_system(randgen::mix(config.seed ^ i));
        let c = compress(&s);
        if id == 3 {
            suite.check(c.len() == s.len(), || format!("system {i}: size {} → {}", s.len(), c.len()));
            suite.check(c.is_downward_closed(), || format!("system {i}: not downward closed"));
            suite.check(c.shatter_profile().dominated_by(&s.shatter_profile()), || {
                format!("system {i}: profile not dominated")
            });
        } else {
            let d = c.vc_dimension()?;
            let cap = g_k(c.ground_size() as u64, d as u64);
            suite.check(c.len() as u128 <= cap, || format!("system {i}: |C| = {} > g_{d}({}) = {cap}", c.len(), c.ground_size()));
        }
    }
    if id == 4 {
        for n in 1..=10usize {
            for k in 0..=4usize.min(n) {
                let members: Vec<Mask> = (0..1u64 << n).filter(|x| x.count_ones() as usize <= k).collect();
                let s = SetSystem::new(n, members)?;
                let ok = s.len() as u128 == g_k(n as u64, k as u64) && s.vc_dimension()? == k;
                suite.check(ok, || format!("skeleton n={n} k={k}: |C| = {}", s.len()));
                equality_cases += 1;
            }
        }
        suite.put("equality_cases", json!(equality_cases));
    }
    suite.put("systems", json!(count));
    Ok(())
}

fn growth_suite(suite: &mut Suite, config: &VerifyConfig) -> Result<()> {
    let (ns3, ns5, trials): (Vec<usize>, Vec<usize>, usize) = match config.tier {
        Tier::Quick => (vec![256, 512, 1024, 2048], vec![128, 256, 512], 4),
        Tier::Full => (vec![256, 512, 1024, 2048, 4096, 8192], vec![128, 256, 512, 1024], 20),
    };
    for (s, ns, target, tol) in [(3, ns3, 1.5, 0.2), (5, ns5, 2.0, 0.25)] {
        let report = randgen::growth_experiment(Rational::from_integer(s), 4, &ns, trials, config.seed, &config.experiment)?;
        let slope = report.slope.unwrap_or(f64::NAN);
        suite.check((slope - target).abs() <= tol, || format!("s={s}: slope {slope:.4} outside {target}±{tol}"));
        suite.put(&format!("slope_s{s}"), json!(slope));
        suite.put(&format!("means_s{s}"), json!(report.means));
        for t in &report.trials {
            if let Some(f) = t.f_m.exact() {
                suite.check(f < (s as u64) * 4 + s as u64, || format!("s={s} n={} trial {}: f(4) = {f}", t.n, t.trial));
            }
        }
    }
    Ok(())
}

/// Largest number of faces of dimension ≥ 1 inside any `m`-subset, by
/// scanning every subset of the vertex labels.
pub fn scan_max_span(c: &SimplicialComplex, m: usize) -> u64 {
    let n = c.vertex_count();
    let mut best = 0;
    let mut member = vec![false; n];
    let mut combo: Vec<usize> = (0..m).collect();
    if m > n {
        return c.faces().iter().filter(|f| f.len() >= 2).count() as u64;
    }
    loop {
        for &v in &combo {
            member[v] = true;
        }
        let mut count = 0u64;
        for &v in &combo {
            for &id in c.incident(v as u32) {
                let f = c.face(id as usize);
                if f.len() >= 2 && f.vertices()[0] as usize == v && f.vertices().iter().all(|&u| member[u as usize]) {
                    count += 1;
                }
            }
        }
        best = best.max(count);
        for &v in &combo {
            member[v] = false;
        }
        // next combination in lexicographic order
        let mut i = m;
        while i > 0 && combo[i - 1] == n - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return best;
        }
        combo[i - 1] += 1;
        for j in i..m {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn prune_suite(suite: &mut Suite, config: &VerifyConfig) -> Result<()> {
    let (s, m, n) = (Rational::from_integer(3), 4usize, 80usize);
    let (t, z) = randgen::construction_parameters(s, m)?;
    let p = randgen::construction_probability(s, n);
    let mut spans = Vec::new();
    let mut shatter = Vec::new();
    for trial in 0..5 {
        let seed = randgen::trial_seed(config.seed, n, trial);
        let raw = randgen::sample_complex(n, t, p, seed)?;
        let pruned = randgen::prune_bad_msets(&raw, m, z, config.experiment.node_limit)?;
        let span = scan_max_span(&pruned.complex, m);
        let f = crate::span::complex_shatter_value(&pruned.complex, m, config.experiment.node_limit)?;
        suite.check(span < z, || format!("seed {seed}: a 4-set spans {span} ≥ {z} faces"));
        suite.check(f < 15, || format!("seed {seed}: f(4) = {f}"));
        spans.push(span);
        shatter.push(f);
    }
    suite.put("max_span", json!(spans));
    suite.put("f_m", json!(shatter));
    suite.put("z", json!(z));
    Ok(())
}

/// A complex with a planted face `ρ` lying in many `d`-simplices, plus noise.
pub fn planted_overlap_instance(seed: u64) -> (SimplicialComplex, Face, usize) {
    let rng = KeyedRng::new(seed);
    let mut draw = {
        let mut i = 0u128;
        move |bound: u64| {
            i += 1;
            rng.word(7, i) % bound
        }
    };
    let d = 1 + draw(3) as usize;
    let d_rho = draw(d as u64) as usize;
    let n = d + 3 + draw(10) as usize;
    let rho: Vec<u32> = (0..=d_rho as u32).collect();
    let planted = 1 + draw(12) as usize;
    let mut facets = vec![Face::new(rho.iter().copied())];
    for _ in 0..planted {
        let mut f = rho.clone();
        while f.len() < d + 1 {
            let v = draw(n as u64) as u32;
            if !f.contains(&v) {
                f.push(v);
            }
        }
        facets.push(Face::new(f));
    }
    for _ in 0..draw(6) {
        let size = 1 + draw(d as u64 + 1) as usize;
        let mut f = Vec::new();
        while f.len() < size {
            let v = draw(n as u64) as u32;
            if !f.contains(&v) {
                f.push(v);
            }
        }
        facets.push(Face::new(f));
    }
    let m = d + 1 + draw((n - d) as u64) as usize;
    let c = SimplicialComplex::from_facets(n, facets).expect("facets are within range");
    (c, Face::new(rho), m.min(n))
}

fn overlap_suite(suite: &mut Suite, config: &VerifyConfig) -> Result<()> {
    let mut tight = 0;
    let mut checked = 0;
    for i in 0..200u64 {
        let (c, rho, m) = planted_overlap_instance(randgen::mix(config.seed ^ (i << 8)));
        let d_rho = rho.len() - 1;
        // the planted faces all have d + 1 vertices: recover d from the top dimension
        let d = c.dimension() as usize;
        if d <= d_rho || m <= d {
            continue;
        }
        let w = c.overlap_witness(&rho, d, m)?;
        checked += 1;
        let bound = overlap_lower_bound(w.simplices_through_rho, d, d_rho, m);
        suite.check(Rational::from_integer(w.count as i64) >= bound && w.vertices.len() <= m, || {
            format!("instance {i}: count {} < bound {bound}", w.count)
        });
        if Rational::from_integer(w.count as i64) == bound {
            tight += 1;
        }
    }
    suite.put("instances", json!(checked));
    suite.put("tight", json!(tight));
    Ok(())
}

/// Small rooted trees with at most three facets.
pub fn small_trees() -> Vec<dtree::RootedDTree> {
    let mut out = Vec::new();
    for (d, q, r) in [(1, 1, 0), (1, 1, 1), (1, 1, 2), (1, 2, 0), (1, 2, 1), (1, 3, 0), (2, 1, 0), (2, 1, 1), (3, 1, 0)] {
        out.push(dtree::build_tr(d, q, r).expect("canonical tree"));
    }
    out
}

/// `d`-skeleton of the full simplex on `n` vertices with some `d`-simplices
/// removed at random.
pub fn thinned_skeleton(n: usize, d: usize, drop: f64, seed: u64) -> SimplicialComplex {
    let rng = KeyedRng::new(seed);
    let full = SimplicialComplex::skeleton(n, d + 1);
    let doomed: Vec<Face> = full
        .faces_of_size(d + 1)
        .iter()
        .filter(|f| rng.accept(f.vertices(), drop))
        .cloned()
        .collect();
    full.remove_cofaces(&doomed)
}

fn embedding_suite(suite: &mut Suite, config: &VerifyConfig) -> Result<()> {
    let mut checked = 0u64;
    for tree in small_trees() {
        let d = tree.d();
        let f = tree.facet_count();
        for (k, n) in [8usize, 10, 12].into_iter().enumerate() {
            for drop in [0.0, 0.1, 0.25] {
                let host = thinned_skeleton(n, d, drop, config.seed ^ (k as u64 * 31 + (drop * 100.0) as u64));
                let delta = host.delta(d)?;
                if delta < f + 1 {
                    continue;
                }
                let bound = ((delta - f) as u64).pow(f as u32);
                for sigma in host.faces_of_size(d).iter().take(4) {
                    let got = dtree::count_embeddings(&tree, &host, sigma, u64::MAX)?;
                    suite.check(got.count >= bound, || {
                        format!("d={d} f={f} n={n}: {} embeddings < {bound}", got.count)
                    });
                    checked += 1;
                }
            }
        }
    }
    suite.put("instances", json!(checked));
    Ok(())
}

fn extremal_suite(suite: &mut Suite, config: &VerifyConfig) -> Result<()> {
    let max_n = match config.tier {
        Tier::Quick => 4,
        Tier::Full => 5,
    };
    let limit = config.experiment.node_limit;
    let mut cells = 0;
    for n in 0..=max_n {
        for m in 0..=n {
            for b in 1..=1u64 << m {
                let fast = search::extremal_max_sets(n, m, b, limit)?;
                let slow = search::extremal_exhaustive(n, m, b, limit)?;
                suite.check(fast.max_size == slow.max_size, || {
                    format!("n={n} m={m} b={b}: search {} vs oracle {}", fast.max_size, slow.max_size)
                });
                if m >= 1 && b == (1 << m) - 1 {
                    let cap = g_k(n as u64, m as u64 - 1);
                    suite.check(fast.max_size as u128 <= cap, || format!("n={n} m={m}: {} > g_{}", fast.max_size, m - 1));
                }
                cells += 1;
            }
        }
    }
    suite.put("cells", json!(cells));
    Ok(())
}

fn bounds_suite(suite: &mut Suite) -> Result<()> {
    for n in 1..=64u64 {
        for k in 1..=64u64 {
            suite.check(g_k(n, k) == g_k(n - 1, k) + g_k(n - 1, k - 1), || format!("Pascal fails at n={n} k={k}"));
        }
    }
    for k in 1..=6 {
        for m in 1..=10_000 {
            let (lo, hi) = bounds::tk_bounds(m, k)?;
            suite.check(lo < hi, || format!("m={m} k={k}: {lo} ≥ {hi}"));
        }
    }
    let mut grid = 0;
    for q in 1..=12i64 {
        for p in 2 * q..=40 * q {
            let s = Rational::new(p, q);
            for d in 0..=bounds::floor_log2(s)? {
                let (_, closed) = bounds::sd_td(s, d)?;
                suite.check(bounds::sd_by_summation(s, d) == closed, || format!("s={s} d={d}"));
                grid += 1;
            }
        }
    }
    suite.put("sd_grid", json!(grid));
    Ok(())
}

fn probe_suite(suite: &mut Suite, config: &VerifyConfig) -> Result<()> {
    let (ns, trials): (Vec<usize>, usize) = match config.tier {
        Tier::Quick => (vec![256, 512], 1),
        Tier::Full => (vec![256, 512, 1024, 2048, 4096], 1),
    };
    let report = randgen::bondy_hajnal_probe(2, Rational::from_integer(1), 13, &ns, trials, config.seed, 256, &config.experiment)?;
    suite.check(report.premise_holds, || "premise f(13) ≤ 92 violated".to_string());
    match report.growth.slope {
        Some(slope) => suite.check(slope >= 2.0, || format!("slope {slope:.4} below 2.0")),
        None => suite.check(false, || "no slope: pruning left no faces at any n".to_string()),
    }
    suite.put("slope", json!(report.growth.slope));
    suite.put("unpruned_slope", json!(report.growth.unpruned_slope));
    suite.put("target", json!(report.growth.target_exponent));
    suite.put("means", json!(report.growth.means));
    suite.put(
        "removed_vertices",
        json!(report.growth.trials.iter().map(|t| (t.n, t.removed_vertices)).collect::<Vec<_>>()),
    );
    suite.put("premise_values", json!(report.premise.iter().map(|p| (p.n, p.exact, p.value)).collect::<Vec<_>>()));
    Ok(())
}
