//! Rooted d-trees and the canonical balanced family `T_r(d, Q)`.
//!
//! `T_0(d, Q)` lives on `0..d(Q+1)` and consists of every non-empty set
//! whose largest and smallest label differ by at most `d`. Its
//! `(d-1)`-simplices `σ_i = {id, …, (i+1)d - 1}` for `i = 0..=Q` partition
//! the vertices; `σ_0` is the simplex root. `T_r` attaches `r` rooted
//! vertices to the blocks `σ_1..σ_Q` and has min-density
//! `2^d + r(2^d - 1)/(dQ)`, attained by the full unrooted set.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::Rational;

/// Default cap on the number of unrooted vertices for exhaustive scans
/// (`2^20` subsets).
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

/// Parameters of a canonical tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub d: usize,
    pub q: usize,
    pub r: usize,
}

/// A d-tree with a simplex root `rho` and an independent set of vertex roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedDTree {
    complex: SimplicialComplex,
    d: usize,
    rho: Face,
    roots: Vec<u32>,
    params: Option<CanonicalParams>,
    /// Block index `i` of `σ_i` for each rooted vertex, in attachment order.
    attachments: Vec<usize>,
}

impl RootedDTree {
    /// Validates a rooted d-tree: the complex is a d-tree, `rho` is one of
    /// its `(d-1)`-simplices, and `roots` is an independent set of vertices
    /// each nonadjacent to `rho`.
    pub fn new(complex: SimplicialComplex, d: usize, rho: Face, roots: Vec<u32>) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d-trees need d ≥ 1"));
        }
        if !is_d_tree(&complex, d) {
            return Err(invalid(format!("complex is not a {d}-tree")));
        }
        if rho.len() != d || !complex.contains(&rho) {
            return Err(invalid(format!("{rho:?} is not a {}-simplex of the tree", d - 1)));
        }
        let mut roots = roots;
        roots.sort_unstable();
        roots.dedup();
        for (i, &a) in roots.iter().enumerate() {
            let fa = Face::new([a]);
            if !complex.contains(&fa) {
                return Err(invalid(format!("root {a} is not a vertex")));
            }
            if !complex.nonadjacent(&fa, &rho) {
                return Err(invalid(format!("root {a} is adjacent to ρ")));
            }
            for &b in &roots[i + 1..] {
                if complex.contains(&Face::new([a, b])) {
                    return Err(invalid(format!("roots {a} and {b} are adjacent")));
                }
            }
        }
        Ok(RootedDTree { complex, d, rho, roots, params: None, attachments: Vec::new() })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rho(&self) -> &Face {
        &self.rho
    }

    pub fn roots(&self) -> &[u32] {
        &self.roots
    }

    pub fn params(&self) -> Option<CanonicalParams> {
        self.params
    }

    pub fn attachments(&self) -> &[usize] {
        &self.attachments
    }

    pub fn facet_count(&self) -> usize {
        self.complex.faces_of_size(self.d + 1).len()
    }

    /// `V(T) ∖ (ρ ∪ R)`.
    pub fn unrooted(&self) -> Vec<u32> {
        self.complex
            .vertices()
            .into_iter()
            .filter(|v| !self.rho.contains(*v) && self.roots.binary_search(v).is_err())
            .collect()
    }
}

/// Leaf stripping: repeatedly delete a vertex lying in exactly one facet
/// whose remaining `(d-1)`-face sits in another facet; a d-tree ends as a
/// single d-simplex.
pub fn is_d_tree(complex: &SimplicialComplex, d: usize) -> bool {
    let facets = complex.facets();
    if facets.is_empty() || facets.iter().any(|f| f.len() != d + 1) {
        return false;
    }
    let mut alive: Vec<Face> = facets;
    while alive.len() > 1 {
        let mut stripped = None;
        'search: for (i, f) in alive.iter().enumerate() {
            for &v in f.vertices() {
                let lonely = alive.iter().enumerate().all(|(j, g)| j == i || !g.contains(v));
                if !lonely {
                    continue;
                }
                let base = f.without(v);
                if alive.iter().enumerate().any(|(j, g)| j != i && base.is_subset_of(g)) {
                    stripped = Some(i);
                    break 'search;
                }
            }
        }
        match stripped {
            Some(i) => {
                alive.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

fn block(d: usize, i: usize) -> Face {
    Face::new((i * d..(i + 1) * d).map(|v| v as u32))
}

/// Block indices that receive a rooted vertex in `T_r`, in attachment order.
pub fn attachment_blocks(q: usize, r: usize) -> Vec<usize> {
    if r == 0 {
        Vec::new()
    } else if r < q {
        (1..=r).map(|k| (k * q).div_ceil(r)).collect()
    } else {
        let mut v = attachment_blocks(q, r - q);
        v.extend(1..=q);
        v
    }
}

/// `T_0(d, Q)`: all non-empty `σ ⊆ 0..d(Q+1)` with `max σ - min σ ≤ d`.
pub fn build_t0(d: usize, q: usize) -> Result<RootedDTree> {
    build_tr(d, q, 0)
}

/// `T_r(d, Q)`. Rooted vertices get labels `d(Q+1), d(Q+1)+1, …` in
/// attachment order.
pub fn build_tr(d: usize, q: usize, r: usize) -> Result<RootedDTree> {
    if d < 1 || q < 1 {
        return Err(invalid(format!("d = {d} and Q = {q} must both be at least 1")));
    }
    let base = d * (q + 1);
    let attachments = attachment_blocks(q, r);
    let mut facets: Vec<Face> = (0..d * q)
        .map(|i| Face::new((i..=i + d).map(|v| v as u32)))
        .collect();
    for (k, &i) in attachments.iter().enumerate() {
        facets.push(block(d, i).with((base + k) as u32));
    }
    let complex = SimplicialComplex::from_facets(base + r, facets)?;
    let roots = (base..base + r).map(|v| v as u32).collect();
    Ok(RootedDTree {
        complex,
        d,
        rho: block(d, 0),
        roots,
        params: Some(CanonicalParams { d, q, r }),
        attachments,
    })
}

/// `2^d + r(2^d - 1)/(dQ)`.
pub fn min_density_formula(d: usize, q: usize, r: usize) -> Rational {
    let two_d = 1i64 << d;
    Rational::from_integer(two_d) + Rational::new(r as i64 * (two_d - 1), (d * q) as i64)
}

/// `(d-1)2^d + 1`, the number of faces of `T_0` meeting a block union
/// `σ_i ∪ … ∪ σ_j` (`j < Q`) whose largest vertex lies past `σ_j`.
pub fn dangling_count(d: usize) -> i64 {
    (d as i64 - 1) * (1i64 << d) + 1
}

/// Exact minimum density over non-empty sets of unrooted vertices, with the
/// largest minimizer (lexicographically least among equals) as witness.
pub fn min_density_bruteforce(tree: &RootedDTree, cap: usize) -> Result<(Rational, Vec<u32>)> {
    let unrooted = tree.unrooted();
    if unrooted.is_empty() {
        return Err(Error::EmptyDomain("tree has no unrooted vertices".into()));
    }
    if unrooted.len() > cap {
        return Err(Error::ResourceLimit(format!(
            "{} unrooted vertices exceed the brute-force cap of {cap}",
            unrooted.len()
        )));
    }
    let masks: Vec<Mask> = tree
        .complex
        .faces()
        .iter()
        .map(|f| f.mask().ok_or_else(|| invalid("brute force needs labels below 64")))
        .collect::<Result<_>>()?;
    let positions = bits::mask_of(unrooted.iter().map(|&v| v as usize));
    let mut best: Option<(Rational, Vec<u32>)> = None;
    for compact in 1u64..(1 << unrooted.len()) {
        let s = bits::deposit(compact, positions);
        let e = masks.iter().filter(|&&f| f & s != 0).count() as i64;
        let dens = Rational::new(e, s.count_ones() as i64);
        let set: Vec<u32> = bits::elements(s).map(|v| v as u32).collect();
        let better = match &best {
            None => true,
            Some((bd, bs)) => {
                dens < *bd || (dens == *bd && (set.len() > bs.len() || (set.len() == bs.len() && set < *bs)))
            }
        };
        if better {
            best = Some((dens, set));
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Whether the full unrooted set attains the minimum density.
pub fn is_balanced(tree: &RootedDTree, cap: usize) -> Result<bool> {
    let (min, _) = min_density_bruteforce(tree, cap)?;
    let full = tree.complex.density(&tree.unrooted())?;
    Ok(full.density == min)
}

/// Closed-form density of `σ_i ∪ … ∪ σ_j` in a canonical tree.
///
/// With `L` the number of rooted vertices attached to blocks in `i..=j`:
/// `2^d + ((2^d-1)L + [j<Q]((d-1)2^d+1)) / (d(j-i+1))`.
pub fn block_density(d: usize, q: usize, attachments: &[usize], i: usize, j: usize) -> Rational {
    let attached = attachments.iter().filter(|&&b| (i..=j).contains(&b)).count() as i64;
    let dangling = if j < q { dangling_count(d) } else { 0 };
    let two_d = 1i64 << d;
    Rational::from_integer(two_d)
        + Rational::new((two_d - 1) * attached + dangling, (d * (j - i + 1)) as i64)
}

/// Minimum of [`block_density`] over `1 ≤ i ≤ j ≤ Q`. Ties go to the
/// longest block, then the smallest `i`.
pub fn contiguous_min_density(tree: &RootedDTree) -> Result<(Rational, usize, usize)> {
    let p = tree
        .params
        .ok_or_else(|| invalid("contiguous blocks are defined only for canonical trees"))?;
    let mut best: Option<(Rational, usize, usize)> = None;
    for i in 1..=p.q {
        for j in i..=p.q {
            let dens = block_density(p.d, p.q, &tree.attachments, i, j);
            let better = match best {
                None => true,
                Some((bd, bi, bj)) => dens < bd || (dens == bd && (j - i > bj - bi || (j - i == bj - bi && i < bi))),
            };
            if better {
                best = Some((dens, i, j));
            }
        }
    }
    Ok(best.expect("Q ≥ 1"))
}

/// Vertex set of `σ_i ∪ … ∪ σ_j`.
pub fn block_union(d: usize, i: usize, j: usize) -> Vec<u32> {
    (i * d..(j + 1) * d).map(|v| v as u32).collect()
}

/// Result of [`count_embeddings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingCount {
    pub count: u64,
    /// Counting stopped at the cap.
    pub saturated: bool,
}

/// Counts vertex-injective maps `V(T) → V(C)` sending `ρ` onto `sigma`
/// (sorted order to sorted order) and every facet of `T` onto a
/// `d`-simplex of `C`. Stops at `cap`.
pub fn count_embeddings(tree: &RootedDTree, host: &SimplicialComplex, sigma: &Face, cap: u64) -> Result<EmbeddingCount> {
    let d = tree.d;
    if sigma.len() != d || !host.contains(sigma) {
        return Err(invalid(format!("{sigma:?} is not a {}-simplex of the host", d - 1)));
    }
    let plan = attachment_plan(tree)?;
    let n_tree = tree.complex.vertex_count();
    let mut image = vec![u32::MAX; n_tree];
    let mut used = vec![false; host.vertex_count()];
    for (&t, &h) in tree.rho.vertices().iter().zip(sigma.vertices()) {
        image[t as usize] = h;
        used[h as usize] = true;
    }
    let facets = tree.complex.faces_of_size(d + 1).to_vec();
    let mut state = EmbedState { host, plan: &plan, facets: &facets, image, used, count: 0, cap, d };
    state.extend(0);
    Ok(EmbeddingCount { count: state.count, saturated: state.count >= cap })
}

/// Order in which tree vertices are placed, starting from `ρ`: each step
/// is a new vertex and the already-placed `(d-1)`-face it hangs on.
fn attachment_plan(tree: &RootedDTree) -> Result<Vec<(u32, Face)>> {
    let d = tree.d;
    let facets = tree.complex.faces_of_size(d + 1);
    let mut placed: HashSet<u32> = tree.rho.vertices().iter().copied().collect();
    let mut used = vec![false; facets.len()];
    let mut plan = Vec::new();
    let total = tree.complex.vertices().len();
    while placed.len() < total {
        let step = facets.iter().enumerate().find_map(|(i, f)| {
            if used[i] {
                return None;
            }
            let mut fresh = f.vertices().iter().filter(|v| !placed.contains(v));
            match (fresh.next(), fresh.next()) {
                (Some(&v), None) => Some((i, v, f.without(v))),
                _ => None,
            }
        });
        let (i, v, base) = step.ok_or_else(|| invalid("tree cannot be grown from ρ facet by facet"))?;
        used[i] = true;
        placed.insert(v);
        plan.push((v, base));
    }
    Ok(plan)
}

struct EmbedState<'a> {
    host: &'a SimplicialComplex,
    plan: &'a [(u32, Face)],
    facets: &'a [Face],
    image: Vec<u32>,
    used: Vec<bool>,
    count: u64,
    cap: u64,
    d: usize,
}

impl EmbedState<'_> {
    fn extend(&mut self, step: usize) {
        if self.count >= self.cap {
            return;
        }
        if step == self.plan.len() {
            let all_facets = self.facets.iter().all(|f| {
                self.host
                    .contains(&Face::new(f.vertices().iter().map(|&v| self.image[v as usize])))
            });
            if all_facets {
                self.count += 1;
            }
            return;
        }
        let (v, ref base) = self.plan[step];
        let base_image = Face::new(base.vertices().iter().map(|&u| self.image[u as usize]));
        let options: Vec<u32> = self
            .host
            .cofaces_of_size(&base_image, self.d + 1)
            .map(|g| *g.vertices().iter().find(|&&w| !base_image.contains(w)).unwrap())
            .filter(|&w| !self.used[w as usize])
            .collect();
        for w in options {
            self.image[v as usize] = w;
            self.used[w as usize] = true;
            self.extend(step + 1);
            self.used[w as usize] = false;
            self.image[v as usize] = u32::MAX;
            if self.count >= self.cap {
                return;
            }
        }
    }
}

/// JSON description of a tree, used by `dtree build`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeJson {
    pub d: usize,
    pub facets: Vec<Vec<u32>>,
    pub n: usize,
    pub params: Option<CanonicalParams>,
    pub rho: Vec<u32>,
    pub roots: Vec<u32>,
}

pub fn to_json(tree: &RootedDTree) -> String {
    let doc = TreeJson {
        d: tree.d,
        facets: tree.complex.faces_of_size(tree.d + 1).iter().map(|f| f.vertices().to_vec()).collect(),
        n: tree.complex.vertex_count(),
        params: tree.params,
        rho: tree.rho.vertices().to_vec(),
        roots: tree.roots.clone(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}
