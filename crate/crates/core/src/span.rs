//! Exact search for `m`-vertex sets spanning many faces.
//!
//! Both the bad-set pruning of random complexes and the shatter value of a
//! large complex reduce to the same question: over `m`-subsets `W` of the
//! vertices, how many faces with a size in a fixed range lie inside `W`?
//! [`SpanSearch`] answers it by branch and bound. Candidates are the
//! vertices lying in at least one counted face, ordered by how many counted
//! faces they touch; the bound adds, for each free slot, the next
//! candidate's capped face count. Vertices outside every counted face only
//! pad a set up to `m` and never change its count.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use crate::bits::binomial;
use crate::complex::SimplicialComplex;
use crate::error::{invalid, Error, Result};

/// Default node budget for one search.
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

/// A vertex set together with the number of counted faces inside it.
///
/// `vertices` may hold fewer than `m` labels; any padding with further
/// vertices keeps the count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanWitness {
    pub vertices: Vec<u32>,
    pub count: u64,
}

pub struct SpanSearch<'a> {
    complex: &'a SimplicialComplex,
    sizes: RangeInclusive<usize>,
    face_degree: Vec<u64>,
    universe: usize,
    node_limit: u64,
}

impl<'a> SpanSearch<'a> {
    /// Counts faces whose vertex count lies in `sizes`.
    pub fn new(complex: &'a SimplicialComplex, sizes: RangeInclusive<usize>) -> Self {
        let mut face_degree = vec![0u64; complex.vertex_count()];
        for f in complex.faces() {
            if sizes.contains(&f.len()) {
                for &v in f.vertices() {
                    face_degree[v as usize] += 1;
                }
            }
        }
        let universe = complex.faces_of_size(1).len();
        SpanSearch { complex, sizes, face_degree, universe, node_limit: DEFAULT_NODE_LIMIT }
    }

    pub fn node_limit(mut self, limit: u64) -> Self {
        self.node_limit = limit;
        self
    }

    pub fn counts(&self, size: usize) -> bool {
        self.sizes.contains(&size)
    }

    /// Number of vertices available to fill a set.
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of counted faces containing `v`.
    pub fn face_degree(&self, v: u32) -> u64 {
        self.face_degree[v as usize]
    }

    /// Most counted faces any `m`-set could hold.
    pub fn ceiling(&self, m: usize) -> u64 {
        let top = (self.complex.dimension() + 1).max(0) as usize;
        let hi = (*self.sizes.end()).min(m).min(top);
        let lo = (*self.sizes.start()).max(1);
        (lo..=hi).map(|k| binomial(m as u64, k as u64) as u64).sum()
    }

    /// The best `m`-set containing `forced`.
    pub fn maximum(&self, m: usize, forced: &[u32]) -> Result<SpanWitness> {
        let mut run = Run::new(self, m, forced, None)?;
        run.solve()?;
        Ok(run.witness())
    }

    /// The greedy warm start alone: a lower bound on [`SpanSearch::maximum`].
    pub fn greedy(&self, m: usize, forced: &[u32]) -> Result<SpanWitness> {
        let mut run = Run::new(self, m, forced, None)?;
        run.greedy();
        Ok(run.witness())
    }

    /// Some `m`-set containing `forced` with at least `target` counted
    /// faces, or `None` when no such set exists.
    pub fn find_at_least(&self, m: usize, forced: &[u32], target: u64) -> Result<Option<SpanWitness>> {
        let mut run = Run::new(self, m, forced, Some(target))?;
        run.solve()?;
        Ok((run.best >= target).then(|| run.witness()))
    }
}

struct Run<'s, 'a> {
    search: &'s SpanSearch<'a>,
    target: Option<u64>,
    ceiling: u64,
    forced: Vec<u32>,
    candidates: Vec<u32>,
    prefix: Vec<u64>,
    in_set: Vec<bool>,
    chosen: Vec<u32>,
    base: u64,
    best: u64,
    best_set: Vec<u32>,
    slots: usize,
    nodes: u64,
}

impl<'s, 'a> Run<'s, 'a> {
    fn new(search: &'s SpanSearch<'a>, m: usize, forced: &[u32], target: Option<u64>) -> Result<Self> {
        let complex = search.complex;
        if m > search.universe {
            return Err(invalid(format!(
                "m = {m} exceeds the {} vertices of the complex",
                search.universe
            )));
        }
        let mut forced = forced.to_vec();
        forced.sort_unstable();
        forced.dedup();
        if forced.len() > m {
            return Err(invalid("more forced vertices than m"));
        }
        let mut in_set = vec![false; complex.vertex_count()];
        for &v in &forced {
            if !complex.is_vertex(v) {
                return Err(invalid(format!("forced label {v} is not a vertex")));
            }
            in_set[v as usize] = true;
        }
        let per_vertex_cap: u64 = ((*search.sizes.start()).max(1)..=(*search.sizes.end()).min(m))
            .map(|k| binomial(m as u64 - 1, k as u64 - 1) as u64)
            .sum();
        let mut candidates: Vec<u32> = (0..complex.vertex_count() as u32)
            .filter(|&v| search.face_degree[v as usize] > 0 && !in_set[v as usize])
            .collect();
        let weight = |v: u32| search.face_degree[v as usize].min(per_vertex_cap);
        candidates.sort_by(|&a, &b| weight(b).cmp(&weight(a)).then(a.cmp(&b)));
        let mut prefix = Vec::with_capacity(candidates.len() + 1);
        prefix.push(0);
        for &c in &candidates {
            prefix.push(prefix.last().unwrap() + weight(c));
        }
        let mut run = Run {
            search,
            target,
            ceiling: search.ceiling(m),
            candidates,
            prefix,
            in_set,
            chosen: Vec::new(),
            base: 0,
            best: 0,
            best_set: forced.clone(),
            slots: m - forced.len(),
            forced,
            nodes: 0,
        };
        run.base = run.forced_count();
        run.best = run.base;
        Ok(run)
    }

    fn forced_count(&self) -> u64 {
        let complex = self.search.complex;
        let mut count = 0;
        for &v in &self.forced {
            for &id in complex.incident(v) {
                let f = complex.face(id as usize);
                if self.search.counts(f.len())
                    && f.vertices()[0] == v
                    && f.vertices().iter().all(|&u| self.in_set[u as usize])
                {
                    count += 1;
                }
            }
        }
        count
    }

    fn goal(&self) -> u64 {
        match self.target {
            Some(t) => t,
            None => self.best + 1,
        }
    }

    fn done(&self) -> bool {
        match self.target {
            Some(t) => self.best >= t,
            None => self.best >= self.ceiling,
        }
    }

    fn witness(&self) -> SpanWitness {
        let mut vertices = self.best_set.clone();
        vertices.sort_unstable();
        SpanWitness { vertices, count: self.best }
    }

    /// Counted faces through `w` whose other vertices are already chosen.
    fn gain(&self, w: u32) -> u64 {
        let complex = self.search.complex;
        complex
            .incident(w)
            .iter()
            .map(|&id| complex.face(id as usize))
            .filter(|f| {
                self.search.counts(f.len())
                    && f.vertices().iter().all(|&u| u == w || self.in_set[u as usize])
            })
            .count() as u64
    }

    fn solve(&mut self) -> Result<()> {
        self.greedy();
        if self.done() {
            return Ok(());
        }
        let base = self.base;
        self.branch(0, self.slots, base)
    }

    /// Warm start: repeatedly add the vertex with the largest gain.
    fn greedy(&mut self) {
        let complex = self.search.complex;
        let mut gains: HashMap<u32, u64> = HashMap::new();
        let mut in_set = self.in_set.clone();
        let bump = |gains: &mut HashMap<u32, u64>, in_set: &[bool], v: u32| {
            for &id in complex.incident(v) {
                let f = complex.face(id as usize);
                if !self.search.counts(f.len()) {
                    continue;
                }
                let mut missing = f.vertices().iter().filter(|&&u| !in_set[u as usize]);
                if let (Some(&u), None) = (missing.next(), missing.next()) {
                    *gains.entry(u).or_insert(0) += 1;
                }
            }
        };
        for &v in &self.forced {
            for &id in complex.incident(v) {
                let f = complex.face(id as usize);
                if !self.search.counts(f.len()) {
                    continue;
                }
                let mut missing = f.vertices().iter().filter(|&&u| !in_set[u as usize]);
                if let (Some(&u), None) = (missing.next(), missing.next()) {
                    // attribute each face once: to its smallest forced vertex
                    let first_forced = f.vertices().iter().find(|&&x| in_set[x as usize]).copied();
                    if first_forced == Some(v) {
                        *gains.entry(u).or_insert(0) += 1;
                    }
                }
            }
        }
        let mut value = self.base;
        let mut chosen = self.forced.clone();
        let mut fallback = self.candidates.iter().copied();
        for _ in 0..self.slots {
            let pick = gains
                .iter()
                .filter(|(v, _)| !in_set[**v as usize])
                .max_by(|(a, ga), (b, gb)| {
                    ga.cmp(gb)
                        .then(self.search.face_degree[**a as usize].cmp(&self.search.face_degree[**b as usize]))
                        .then(b.cmp(a))
                })
                .map(|(&v, &g)| (v, g))
                .or_else(|| fallback.find(|v| !in_set[*v as usize]).map(|v| (v, 0)));
            let Some((v, g)) = pick else { break };
            in_set[v as usize] = true;
            gains.remove(&v);
            value += g;
            chosen.push(v);
            bump(&mut gains, &in_set, v);
        }
        if value > self.best {
            self.best = value;
            self.best_set = chosen;
        }
    }

    fn branch(&mut self, idx: usize, left: usize, value: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.search.node_limit {
            return Err(Error::ResourceLimit(format!(
                "span search exceeded {} nodes",
                self.search.node_limit
            )));
        }
        if value > self.best {
            self.best = value;
            self.best_set = self.forced.iter().chain(&self.chosen).copied().collect();
        }
        if self.done() || left == 0 || idx == self.candidates.len() {
            return Ok(());
        }
        let end = (idx + left).min(self.candidates.len());
        let bound = value + self.prefix[end] - self.prefix[idx];
        if bound < self.goal() {
            return Ok(());
        }
        let w = self.candidates[idx];
        let gain = self.gain(w);
        self.in_set[w as usize] = true;
        self.chosen.push(w);
        let res = self.branch(idx + 1, left - 1, value + gain);
        self.chosen.pop();
        self.in_set[w as usize] = false;
        res?;
        if self.done() {
            return Ok(());
        }
        self.branch(idx + 1, left, value)
    }
}

/// Exact shatter value `f_C(m)` of a complex viewed as a set system that
/// contains the empty set: `1 + max_{|Y| = m} #{faces ⊆ Y}`.
pub fn complex_shatter_value(complex: &SimplicialComplex, m: usize, node_limit: u64) -> Result<u64> {
    let vertices = complex.faces_of_size(1).len();
    if m > complex.vertex_count() {
        return Err(invalid(format!("m = {m} exceeds the ground set size {}", complex.vertex_count())));
    }
    if vertices <= m {
        return Ok(1 + complex.face_count() as u64);
    }
    let best = SpanSearch::new(complex, 2..=usize::MAX)
        .node_limit(node_limit)
        .maximum(m, &[])?;
    Ok(1 + m as u64 + best.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Face;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn brute_max(c: &SimplicialComplex, sizes: RangeInclusive<usize>, m: usize, forced: &[u32]) -> u64 {
        let verts = c.vertices();
        verts
            .iter()
            .copied()
            .combinations(m)
            .filter(|w| forced.iter().all(|f| w.contains(f)))
            .map(|w| {
                c.faces()
                    .iter()
                    .filter(|f| sizes.contains(&f.len()) && f.vertices().iter().all(|v| w.contains(v)))
                    .count() as u64
            })
            .max()
            .unwrap_or(0)
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        (4usize..=10).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(0..n as u32, 1..5), 0..12).prop_map(
                move |fs| {
                    let singles = (0..n as u32).map(|v| Face::new([v]));
                    SimplicialComplex::from_facets(n, fs.into_iter().map(Face::new).chain(singles)).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn maximum_matches_exhaustive(c in arb_complex(), m in 1usize..5, lo in 1usize..3) {
            let m = m.min(c.vertex_count());
            let search = SpanSearch::new(&c, lo..=4);
            let w = search.maximum(m, &[]).unwrap();
            prop_assert_eq!(w.count, brute_max(&c, lo..=4, m, &[]));
            prop_assert!(w.vertices.len() <= m);
            let recount = c.faces().iter()
                .filter(|f| (lo..=4).contains(&f.len()) && f.vertices().iter().all(|v| w.vertices.contains(v)))
                .count() as u64;
            prop_assert_eq!(recount, w.count);
        }

        #[test]
        fn forced_search_matches_exhaustive(c in arb_complex(), m in 2usize..5, v in 0u32..4, target in 1u64..8) {
            let search = SpanSearch::new(&c, 2..=4);
            let best = brute_max(&c, 2..=4, m, &[v]);
            prop_assert_eq!(search.maximum(m, &[v]).unwrap().count, best);
            let found = search.find_at_least(m, &[v], target).unwrap();
            prop_assert_eq!(found.is_some(), best >= target);
            if let Some(w) = found {
                prop_assert!(w.vertices.contains(&v));
                prop_assert!(w.count >= target);
            }
        }

        #[test]
        fn shatter_agrees_with_set_system(c in arb_complex(), m in 0usize..6) {
            let m = m.min(c.vertex_count());
            let exact = c.to_set_system().unwrap().shatter_value(m).unwrap();
            prop_assert_eq!(complex_shatter_value(&c, m, DEFAULT_NODE_LIMIT).unwrap(), exact);
        }
    }

    #[test]
    fn node_limit_is_reported() {
        let c = SimplicialComplex::skeleton(30, 2);
        // greedy already attains the ceiling here, so force a real search
        let search = SpanSearch::new(&c, 2..=2).node_limit(3);
        assert_eq!(search.maximum(5, &[]).unwrap().count, 10);
        let sparse = SimplicialComplex::from_facets(
            40,
            (0..40u32).map(|v| Face::new([v])).chain((0..20u32).map(|i| Face::new([2 * i, (2 * i + 7) % 40]))),
        )
        .unwrap();
        let err = SpanSearch::new(&sparse, 2..=2).node_limit(3).find_at_least(6, &[], 4);
        assert!(matches!(err, Err(Error::ResourceLimit(_))));
    }
}
