//! Largest downward-closed families on a small ground set whose shatter
//! value at `m` stays below a budget.
//!
//! For a downward-closed family `C` the trace on `Y` is `{c ∈ C : c ⊆ Y}`,
//! so `f_C(m)` is the largest number of members inside an `m`-set. Adding a
//! member `e` raises that count exactly on the `m`-sets containing `e`.

use std::collections::HashSet;

use serde::Serialize;

use crate::bits::{binomial, deposit, full_mask, Combinations, Mask};
use crate::bounds::g_k;
use crate::error::{invalid, Error, Result};
use crate::setsystem::SetSystem;

/// Largest ground set accepted by the extremal search.
pub const MAX_N: usize = 16;
/// Ground sets up to this size are canonicalized under all permutations.
pub const CANONICAL_MAX_N: usize = 8;
/// Largest ground set for the exhaustive method.
pub const EXHAUSTIVE_MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Trivial,
    BranchAndBound,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    pub n: usize,
    pub m: usize,
    pub b: u64,
    /// Members of the best family, the empty set included.
    pub max_size: u64,
    #[serde(serialize_with = "as_sets")]
    pub witness: SetSystem,
    pub method: Method,
    pub nodes: u64,
}

fn as_sets<S: serde::Serializer>(w: &SetSystem, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&w.sets(), s)
}

fn validate(n: usize, m: usize, b: u64) -> Result<()> {
    if n > MAX_N {
        return Err(invalid(format!("n = {n} exceeds {MAX_N}")));
    }
    if m > n {
        return Err(invalid(format!("m = {m} exceeds n = {n}")));
    }
    if b < 1 || b > 1u64 << m {
        return Err(invalid(format!("b = {b} must lie in 1..=2^{m}")));
    }
    Ok(())
}

/// Sets ordered by size, then numerically; any prefix is downward closed.
fn graded_order(n: usize) -> Vec<Mask> {
    let mut all: Vec<Mask> = (0..1u64 << n).collect();
    all.sort_by_key(|&x| (x.count_ones(), x));
    all
}

fn trivial(n: usize, m: usize, b: u64) -> Option<ExtremalResult> {
    let take = if b == 1u64 << m {
        1u64 << n
    } else if m == n {
        b
    } else {
        return None;
    };
    let members: Vec<Mask> = graded_order(n).into_iter().take(take as usize).collect();
    let witness = SetSystem::new(n, members).expect("masks fit the ground set");
    Some(ExtremalResult { n, m, b, max_size: take, witness, method: Method::Trivial, nodes: 0 })
}

/// Bitset over the `2^n` subsets of the ground set.
type Family = Vec<u64>;

fn has(f: &[u64], x: Mask) -> bool {
    f[(x >> 6) as usize] >> (x & 63) & 1 == 1
}

fn flip(f: &mut [u64], x: Mask) {
    f[(x >> 6) as usize] ^= 1 << (x & 63);
}

/// Members of the families `m`-sets: how many members each `m`-set holds.
struct Counts {
    n: usize,
    m: usize,
    inside: Vec<u16>,
}

impl Counts {
    fn new(n: usize, m: usize) -> Self {
        Counts { n, m, inside: vec![0; 1 << n] }
    }

    /// Calls `visit` on every `m`-set containing `e` (none when `|e| > m`).
    fn supersets(&self, e: Mask, mut visit: impl FnMut(Mask) -> bool) -> bool {
        let k = e.count_ones() as usize;
        if k > self.m {
            return true;
        }
        let rest = full_mask(self.n) & !e;
        Combinations::new(self.n - k, self.m - k).all(|c| visit(e | deposit(c, rest)))
    }

    fn fits(&self, e: Mask, b: u64) -> bool {
        self.supersets(e, |y| (self.inside[y as usize] as u64) < b)
    }

    fn add(&mut self, e: Mask, delta: i32) {
        let mut ys = Vec::new();
        self.supersets(e, |y| {
            ys.push(y);
            true
        });
        for y in ys {
            let v = &mut self.inside[y as usize];
            *v = (*v as i32 + delta) as u16;
        }
    }
}

/// Permutations of the ground set applied to subset masks.
struct Symmetry {
    maps: Vec<Vec<Mask>>,
}

impl Symmetry {
    fn new(n: usize) -> Self {
        let mut maps = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            maps.push((0..1u64 << n).map(|x| crate::bits::elements(x).map(|i| 1 << perm[i]).sum()).collect());
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Symmetry { maps }
    }

    /// Least image of `family` (compared word by word from the top).
    fn canonical(&self, family: &[u64], members: &[Mask]) -> Family {
        let mut best: Option<Family> = None;
        let mut img = vec![0u64; family.len()];
        for map in &self.maps {
            img.iter_mut().for_each(|w| *w = 0);
            for &x in members {
                flip(&mut img, map[x as usize]);
            }
            if best.as_ref().map_or(true, |b| img.iter().rev().lt(b.iter().rev())) {
                best = Some(img.clone());
            }
        }
        best.unwrap_or_else(|| family.to_vec())
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

struct Dfs {
    n: usize,
    b: u64,
    node_limit: u64,
    nodes: u64,
    cap: u64,
    family: Family,
    members: Vec<Mask>,
    counts: Counts,
    seen: HashSet<Family>,
    symmetry: Option<Symmetry>,
    best: Vec<Mask>,
}

impl Dfs {
    fn touched(&self) -> Mask {
        self.members.iter().fold(0, |a, &x| a | x)
    }

    /// Sets that could still join, each judged against the current counts
    /// only; their number bounds any extension.
    fn alive(&self) -> u64 {
        let total = 1usize << self.n;
        let mut alive = vec![0u64; self.family.len()];
        let mut count = 0;
        for x in 1..total as Mask {
            if has(&self.family, x) {
                continue;
            }
            let subsets_ok = crate::bits::elements(x).all(|i| {
                let s = x & !(1 << i);
                has(&self.family, s) || has(&alive, s)
            });
            if subsets_ok && self.counts.fits(x, self.b) {
                flip(&mut alive, x);
                count += 1;
            }
        }
        count
    }

    fn addable(&self) -> Vec<Mask> {
        let fresh = full_mask(self.n) & !self.touched();
        let first_fresh = if fresh == 0 { None } else { Some(fresh.trailing_zeros()) };
        let mut out: Vec<Mask> = (1..1u64 << self.n)
            .filter(|&x| {
                !has(&self.family, x)
                    && crate::bits::elements(x).all(|i| has(&self.family, x & !(1 << i)))
                    && self.counts.fits(x, self.b)
            })
            // untouched vertices are interchangeable: keep one fresh singleton
            .filter(|&x| !(x.count_ones() == 1 && x & fresh != 0 && Some(x.trailing_zeros()) != first_fresh))
            .collect();
        out.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        out
    }

    fn first_visit(&mut self) -> bool {
        if !self.seen.insert(self.family.clone()) {
            return false;
        }
        if let Some(sym) = &self.symmetry {
            let canon = sym.canonical(&self.family, &self.members);
            if canon != self.family && !self.seen.insert(canon) {
                return false;
            }
        }
        true
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::ResourceLimit(format!("extremal search exceeded {} nodes", self.node_limit)));
        }
        if self.members.len() > self.best.len() {
            self.best = self.members.clone();
        }
        if self.best.len() as u64 >= self.cap {
            return Ok(());
        }
        let bound = (self.members.len() as u64 + self.alive()).min(self.cap);
        if bound <= self.best.len() as u64 {
            return Ok(());
        }
        for e in self.addable() {
            flip(&mut self.family, e);
            self.members.push(e);
            if self.first_visit() {
                self.counts.add(e, 1);
                let res = self.run();
                self.counts.add(e, -1);
                if res.is_err() {
                    return res;
                }
            }
            self.members.pop();
            flip(&mut self.family, e);
            if self.best.len() as u64 >= self.cap {
                break;
            }
        }
        Ok(())
    }
}

fn run_with_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, f)
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}

/// Largest downward-closed family (∅ included) on `n` vertices with
/// `f(m) ≤ b`, by branch and bound over member additions.
pub fn extremal_max_sets(n: usize, m: usize, b: u64, node_limit: u64) -> Result<ExtremalResult> {
    validate(n, m, b)?;
    if let Some(r) = trivial(n, m, b) {
        return Ok(r);
    }
    // no shattered set exceeds ⌊log₂ b⌋ < m, so Sauer caps the family
    let vc = 63 - b.leading_zeros() as u64;
    let cap = g_k(n as u64, vc) as u64;
    let words = ((1usize << n) + 63) / 64;
    let mut dfs = Dfs {
        n,
        b,
        node_limit,
        nodes: 0,
        cap,
        family: vec![0; words],
        members: vec![0],
        counts: Counts::new(n, m),
        seen: HashSet::new(),
        symmetry: (n <= CANONICAL_MAX_N).then(|| Symmetry::new(n)),
        best: vec![],
    };
    flip(&mut dfs.family, 0);
    dfs.counts.add(0, 1);
    let (res, dfs) = run_with_stack(move || {
        let r = dfs.run();
        (r, dfs)
    });
    res?;
    let witness = SetSystem::new(n, dfs.best.iter().copied()).expect("masks fit the ground set");
    Ok(ExtremalResult {
        n,
        m,
        b,
        max_size: dfs.best.len() as u64,
        witness,
        method: Method::BranchAndBound,
        nodes: dfs.nodes,
    })
}

/// The same maximum by visiting every downward-closed family containing ∅.
pub fn extremal_exhaustive(n: usize, m: usize, b: u64, node_limit: u64) -> Result<ExtremalResult> {
    validate(n, m, b)?;
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::ResourceLimit(format!("exhaustive search is limited to n ≤ {EXHAUSTIVE_MAX_N}")));
    }
    struct State {
        order: Vec<Mask>,
        family: Family,
        counts: Counts,
        b: u64,
        size: u64,
        best: u64,
        best_members: Vec<Mask>,
        nodes: u64,
        limit: u64,
    }
    fn go(s: &mut State, idx: usize) -> Result<()> {
        s.nodes += 1;
        if s.nodes > s.limit {
            return Err(Error::ResourceLimit(format!("exhaustive search exceeded {} nodes", s.limit)));
        }
        if idx == s.order.len() {
            if s.size > s.best {
                s.best = s.size;
                s.best_members = s.order.iter().copied().filter(|&x| has(&s.family, x)).collect();
            }
            return Ok(());
        }
        let x = s.order[idx];
        let closed = crate::bits::elements(x).all(|i| has(&s.family, x & !(1 << i)));
        if closed && s.counts.fits(x, s.b) {
            flip(&mut s.family, x);
            s.counts.add(x, 1);
            s.size += 1;
            let r = go(s, idx + 1);
            s.size -= 1;
            s.counts.add(x, -1);
            flip(&mut s.family, x);
            r?;
        }
        go(s, idx + 1)
    }
    let mut s = State {
        order: (1..1u64 << n).collect(),
        family: vec![0; ((1usize << n) + 63) / 64],
        counts: Counts::new(n, m),
        b,
        size: 1,
        best: 0,
        best_members: vec![],
        nodes: 0,
        limit: node_limit,
    };
    flip(&mut s.family, 0);
    s.counts.add(0, 1);
    go(&mut s, 0)?;
    let witness = SetSystem::new(n, std::iter::once(0).chain(s.best_members.iter().copied()))
        .expect("masks fit the ground set");
    Ok(ExtremalResult { n, m, b, max_size: s.best, witness, method: Method::Exhaustive, nodes: s.nodes })
}

/// Sizes of `k` consecutive parts of `0..n`, the first `n mod k` one larger.
pub fn part_sizes(n: usize, k: usize) -> Vec<usize> {
    if k == 0 {
        return vec![];
    }
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// Downward closure of the `k`-sets meeting each of `k` near-equal
/// consecutive parts of `0..n` exactly once.
pub fn kpartite_instance(n: usize, k: usize) -> Result<SetSystem> {
    if k < 1 || k > n || n > crate::setsystem::MAX_GROUND {
        return Err(invalid(format!("need 1 ≤ k ≤ n ≤ {}", crate::setsystem::MAX_GROUND)));
    }
    let sizes = part_sizes(n, k);
    let total: u128 = sizes.iter().map(|&s| s as u128 + 1).product();
    if total > 1 << 24 {
        return Err(Error::ResourceLimit(format!("the instance would have {total} members")));
    }
    let mut members: Vec<Mask> = vec![0];
    let mut start = 0;
    for &size in &sizes {
        let mut next = members.clone();
        for &e in &members {
            next.extend((start..start + size).map(|v| e | 1 << v));
        }
        members = next;
        start += size;
    }
    SetSystem::new(n, members)
}

/// Number of members of a [`kpartite_instance`]: `Π (|P_i| + 1)`.
pub fn kpartite_size(n: usize, k: usize) -> u128 {
    part_sizes(n, k).iter().map(|&s| s as u128 + 1).product()
}

/// `C(n, m)` for the search's size checks.
pub fn msets(n: usize, m: usize) -> u128 {
    binomial(n as u64, m as u64)
}
