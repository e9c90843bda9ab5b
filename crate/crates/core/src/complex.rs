//! Simplicial complexes stored as explicit face lists.
//!
//! Faces are sorted vertex lists over labels `0..vertex_count`. The complex
//! keeps every non-empty face once, an index for O(1) membership and, per
//! vertex, the ids of the faces containing it. The empty face is implicit.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::bits::Mask;
use crate::error::{invalid, Error, Result};
use crate::setsystem::{SetSystem, MAX_GROUND};
use crate::Rational;

/// A non-empty simplex given by its sorted vertex labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(SmallVec<[u32; 4]>);

impl Face {
    /// Sorts and deduplicates `vertices`.
    pub fn new(vertices: impl IntoIterator<Item = u32>) -> Face {
        let mut v: SmallVec<[u32; 4]> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `len() - 1`.
    pub fn dimension(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn with(&self, v: u32) -> Face {
        Face::new(self.0.iter().copied().chain(std::iter::once(v)))
    }

    pub fn without(&self, v: u32) -> Face {
        Face(self.0.iter().copied().filter(|&u| u != v).collect())
    }

    /// Non-empty subsets, including the face itself.
    pub fn subfaces(&self) -> impl Iterator<Item = Face> + '_ {
        let k = self.0.len();
        assert!(k < 32, "face too large to enumerate subfaces");
        (1u32..(1 << k)).map(move |sel| {
            Face(
                (0..k)
                    .filter(|i| sel >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }

    pub fn mask(&self) -> Option<Mask> {
        self.0
            .iter()
            .try_fold(0u64, |acc, &v| (v < 64).then(|| acc | 1 << v))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl From<&[u32]> for Face {
    fn from(v: &[u32]) -> Face {
        Face::new(v.iter().copied())
    }
}

impl<const N: usize> From<[u32; N]> for Face {
    fn from(v: [u32; N]) -> Face {
        Face::new(v)
    }
}

/// `e(S)` and `dens(S) = e(S) / |S|` for a vertex set `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub subject: Vec<u32>,
    pub e_of_s: u64,
    pub density: Rational,
}

/// A downward-closed family of non-empty faces on `0..vertex_count`.
#[derive(Clone)]
pub struct SimplicialComplex {
    vertex_count: usize,
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    incidence: Vec<Vec<u32>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertex_count", &self.vertex_count)
            .field("faces", &self.faces)
            .finish()
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

fn by_size_then_lex(a: &Face, b: &Face) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl SimplicialComplex {
    /// Builds a complex from a face list that must already be downward
    /// closed. Repeated faces are ignored.
    pub fn from_faces(vertex_count: usize, faces: impl IntoIterator<Item = Face>) -> Result<Self> {
        let mut faces: Vec<Face> = faces.into_iter().collect();
        faces.sort_unstable_by(by_size_then_lex);
        faces.dedup();
        for face in &faces {
            if face.is_empty() {
                return Err(invalid("the empty face is implicit and may not be listed"));
            }
            if face.vertices().iter().any(|&v| v as usize >= vertex_count) {
                return Err(invalid(format!("face {face:?} uses a label ≥ {vertex_count}")));
            }
        }
        let complex = Self::assemble(vertex_count, faces);
        for face in &complex.faces {
            if face.len() > 1 {
                for &v in face.vertices() {
                    if !complex.contains(&face.without(v)) {
                        return Err(invalid(format!(
                            "face {face:?} is present but its facet {:?} is not",
                            face.without(v)
                        )));
                    }
                }
            }
        }
        Ok(complex)
    }

    /// Downward closure of `facets`.
    pub fn from_facets(vertex_count: usize, facets: impl IntoIterator<Item = Face>) -> Result<Self> {
        let mut all = HashSet::new();
        for facet in facets {
            if facet.len() > 24 {
                return Err(invalid("facets with more than 24 vertices are not expanded"));
            }
            for sub in facet.subfaces() {
                all.insert(sub);
            }
        }
        Self::from_faces(vertex_count, all)
    }

    /// Trusted constructor: `faces` is sorted, deduplicated and closed.
    pub(crate) fn assemble(vertex_count: usize, faces: Vec<Face>) -> Self {
        let mut index = HashMap::with_capacity(faces.len());
        let mut incidence = vec![Vec::new(); vertex_count];
        for (id, face) in faces.iter().enumerate() {
            index.insert(face.clone(), id);
            for &v in face.vertices() {
                incidence[v as usize].push(id as u32);
            }
        }
        SimplicialComplex { vertex_count, faces, index, incidence }
    }

    /// Reads a downward-closed set system; the empty member is dropped.
    pub fn from_set_system(system: &SetSystem) -> Result<Self> {
        if !system.is_downward_closed() {
            return Err(invalid("set system is not downward closed"));
        }
        let faces = system
            .members()
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| Face::new(crate::bits::elements(m).map(|v| v as u32)));
        Self::from_faces(system.ground_size(), faces)
    }

    /// The faces together with the empty set, as a set system.
    pub fn to_set_system(&self) -> Result<SetSystem> {
        if self.vertex_count > MAX_GROUND {
            return Err(invalid(format!(
                "complex on {} vertices exceeds the {MAX_GROUND}-vertex set-system limit",
                self.vertex_count
            )));
        }
        let masks = std::iter::once(0).chain(self.faces.iter().map(|f| f.mask().unwrap()));
        SetSystem::new(self.vertex_count, masks)
    }

    /// Full simplex on `0..k` truncated to faces of at most `max_size` vertices.
    pub fn skeleton(k: usize, max_size: usize) -> Self {
        let mut faces = Vec::new();
        for size in 1..=max_size.min(k) {
            for combo in itertools::Itertools::combinations(0..k as u32, size) {
                faces.push(Face::new(combo));
            }
        }
        Self::assemble(k, faces)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Faces ordered by size, then lexicographically.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index.contains_key(face)
    }

    pub fn face_id(&self, face: &Face) -> Option<usize> {
        self.index.get(face).copied()
    }

    /// Ids of the faces containing `v`.
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.incidence[v as usize]
    }

    pub fn is_vertex(&self, v: u32) -> bool {
        (v as usize) < self.vertex_count && self.contains(&Face::new([v]))
    }

    /// Labels carrying a singleton face.
    pub fn vertices(&self) -> Vec<u32> {
        self.faces_of_size(1).iter().map(|f| f.vertices()[0]).collect()
    }

    pub fn faces_of_size(&self, size: usize) -> &[Face] {
        let start = self.faces.partition_point(|f| f.len() < size);
        let end = self.faces.partition_point(|f| f.len() <= size);
        &self.faces[start..end]
    }

    /// Maximum face dimension, `-1` when there are no faces.
    pub fn dimension(&self) -> isize {
        self.faces.last().map_or(-1, |f| f.dimension())
    }

    /// `counts[k]` is the number of faces with `k + 1` vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = (self.dimension() + 1).max(0) as usize;
        (1..=top).map(|k| self.faces_of_size(k).len()).collect()
    }

    pub fn facets(&self) -> Vec<Face> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                // a face is a facet iff no face one size larger contains it
                let v = f.vertices()[0];
                !self.incident(v).iter().any(|&id| {
                    let g = &self.faces[id as usize];
                    g.len() == f.len() + 1 && f.is_subset_of(g)
                })
            })
            .map(|(_, f)| f.clone())
            .collect()
    }

    fn require_face(&self, face: &Face) -> Result<()> {
        if face.is_empty() || !self.contains(face) {
            return Err(invalid(format!("{face:?} is not a face of the complex")));
        }
        Ok(())
    }

    /// Faces with `size` vertices that contain `face`.
    pub fn cofaces_of_size<'a>(&'a self, face: &'a Face, size: usize) -> impl Iterator<Item = &'a Face> + 'a {
        let pivot = face
            .vertices()
            .iter()
            .copied()
            .min_by_key(|&v| self.incident(v).len())
            .expect("non-empty face");
        self.incident(pivot)
            .iter()
            .map(|&id| &self.faces[id as usize])
            .filter(move |g| g.len() == size && face.is_subset_of(g))
    }

    /// Number of `d`-simplices containing the `(d-1)`-simplex `sigma`.
    pub fn degree(&self, sigma: &Face, d: usize) -> Result<usize> {
        self.require_face(sigma)?;
        if sigma.len() != d {
            return Err(invalid(format!("{sigma:?} is not a {}-simplex", d as isize - 1)));
        }
        Ok(self.cofaces_of_size(sigma, d + 1).count())
    }

    /// `δ_d`: minimum degree over all `(d-1)`-simplices.
    pub fn delta(&self, d: usize) -> Result<usize> {
        if d == 0 {
            return Err(invalid("δ_d requires d ≥ 1"));
        }
        self.faces_of_size(d)
            .iter()
            .map(|f| self.cofaces_of_size(f, d + 1).count())
            .min()
            .ok_or_else(|| Error::EmptyDomain(format!("no {}-simplices", d - 1)))
    }

    fn membership(&self, set: &[u32]) -> Result<Vec<bool>> {
        let mut member = vec![false; self.vertex_count];
        for &v in set {
            let slot = member
                .get_mut(v as usize)
                .ok_or_else(|| invalid(format!("vertex {v} outside the complex")))?;
            *slot = true;
        }
        Ok(member)
    }

    /// Number of faces meeting `set`.
    pub fn faces_meeting(&self, set: &[u32]) -> Result<u64> {
        let member = self.membership(set)?;
        let mut count = 0;
        for &v in set {
            for &id in self.incident(v) {
                // count each face once, at its smallest vertex inside `set`
                let first = self.faces[id as usize]
                    .vertices()
                    .iter()
                    .find(|&&u| member[u as usize])
                    .copied();
                if first == Some(v) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// `dens(S) = e(S) / |S|` where `e(S)` counts faces with a vertex in `S`.
    pub fn density(&self, set: &[u32]) -> Result<DensityReport> {
        let mut subject = set.to_vec();
        subject.sort_unstable();
        subject.dedup();
        if subject.is_empty() {
            return Err(invalid("density of the empty vertex set"));
        }
        let e = self.faces_meeting(&subject)?;
        Ok(DensityReport {
            density: Rational::new(e as i64, subject.len() as i64),
            e_of_s: e,
            subject,
        })
    }

    /// Vertex disjoint, and no edge of the complex meets both.
    pub fn nonadjacent(&self, a: &Face, b: &Face) -> bool {
        if a.vertices().iter().any(|&v| b.contains(v)) {
            return false;
        }
        !a.vertices().iter().any(|&u| {
            b.vertices()
                .iter()
                .any(|&v| self.contains(&Face::new([u, v])))
        })
    }

    /// Number of non-empty faces contained in `set`.
    pub fn span_count(&self, set: &[u32]) -> Result<u64> {
        let member = self.membership(set)?;
        let mut seen = vec![false; self.vertex_count];
        let mut count = 0;
        for &v in set {
            if std::mem::replace(&mut seen[v as usize], true) {
                continue;
            }
            for &id in self.incident(v) {
                let f = &self.faces[id as usize];
                if f.vertices()[0] == v && f.vertices().iter().all(|&u| member[u as usize]) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Drops `vertices` and every face touching them.
    pub fn remove_vertices(&self, vertices: &[u32]) -> SimplicialComplex {
        let gone: HashSet<u32> = vertices.iter().copied().collect();
        self.retain(|f| !f.vertices().iter().any(|v| gone.contains(v)))
    }

    /// Keeps the faces for which `keep` holds. `keep` must describe a
    /// downward-closed selection (e.g. "avoids a given set of faces' cofaces").
    pub(crate) fn retain(&self, keep: impl Fn(&Face) -> bool) -> SimplicialComplex {
        let faces = self.faces.iter().filter(|f| keep(f)).cloned().collect();
        Self::assemble(self.vertex_count, faces)
    }

    /// Removes every face containing one of `doomed`.
    pub fn remove_cofaces(&self, doomed: &[Face]) -> SimplicialComplex {
        let mut dead = vec![false; self.faces.len()];
        for sigma in doomed {
            if let Some(first) = sigma.vertices().first() {
                for &id in self.incident(*first) {
                    if sigma.is_subset_of(&self.faces[id as usize]) {
                        dead[id as usize] = true;
                    }
                }
            }
        }
        let faces = self
            .faces
            .iter()
            .zip(&dead)
            .filter(|(_, &d)| !d)
            .map(|(f, _)| f.clone())
            .collect();
        Self::assemble(self.vertex_count, faces)
    }

    /// Deletes every `(d-1)`-simplex of degree below `threshold` together
    /// with its cofaces. One pass unless `to_fixpoint` is set.
    pub fn min_degree_prune(&self, d: usize, threshold: usize, to_fixpoint: bool) -> Result<SimplicialComplex> {
        if d == 0 {
            return Err(invalid("pruning requires d ≥ 1"));
        }
        let mut current = self.clone();
        loop {
            let low: Vec<Face> = current
                .faces_of_size(d)
                .iter()
                .filter(|f| current.cofaces_of_size(f, d + 1).count() < threshold)
                .cloned()
                .collect();
            if low.is_empty() {
                return Ok(current);
            }
            current = current.remove_cofaces(&low);
            if !to_fixpoint {
                return Ok(current);
            }
        }
    }

    /// Greedy witness for the overlap bound around `rho`: an at most
    /// `m`-element vertex set spanning at least
    /// `min(N, (2^{d+1} - 2^{d'+1}) / (d - d') · (m - d))` faces, where `N`
    /// is the number of `d`-simplices containing `rho` and `d' = dim rho`.
    pub fn overlap_witness(&self, rho: &Face, d: usize, m: usize) -> Result<OverlapWitness> {
        self.require_face(rho)?;
        let d_rho = rho.len() - 1;
        if d_rho >= d {
            return Err(invalid(format!("dim ρ = {d_rho} must be below d = {d}")));
        }
        if m <= d {
            return Err(invalid(format!("m = {m} must exceed d = {d}")));
        }
        let mut simplices: Vec<&Face> = self.cofaces_of_size(rho, d + 1).collect();
        if simplices.is_empty() {
            return Err(Error::EmptyDomain(format!("{rho:?} lies in no {d}-simplex")));
        }
        simplices.sort();
        let n_simplices = simplices.len();
        let union: HashSet<u32> = simplices.iter().flat_map(|f| f.vertices().iter().copied()).collect();

        let mut chosen: Vec<u32>;
        if union.len() <= m {
            chosen = union.into_iter().collect();
            chosen.sort_unstable();
            // pad to an m-set with the smallest unused vertices
            for v in self.vertices() {
                if chosen.len() >= m {
                    break;
                }
                if !chosen.contains(&v) {
                    chosen.push(v);
                }
            }
        } else {
            let mut inside = HashSet::new();
            let mut used = vec![false; simplices.len()];
            loop {
                let next = simplices
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .map(|(i, f)| {
                        let fresh = f.vertices().iter().filter(|v| !inside.contains(*v)).count();
                        (fresh, i)
                    })
                    .min();
                match next {
                    Some((fresh, i)) if inside.len() + fresh <= m => {
                        used[i] = true;
                        inside.extend(simplices[i].vertices().iter().copied());
                    }
                    _ => break,
                }
            }
            chosen = inside.into_iter().collect();
        }
        chosen.sort_unstable();
        let count = self.span_count(&chosen)?;
        Ok(OverlapWitness { vertices: chosen, count, simplices_through_rho: n_simplices })
    }
}

/// Result of [`SimplicialComplex::overlap_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapWitness {
    pub vertices: Vec<u32>,
    pub count: u64,
    /// `N`, the number of `d`-simplices containing `ρ`.
    pub simplices_through_rho: usize,
}

/// `min(N, (2^{d+1} - 2^{d'+1}) / (d - d') · (m - d))` as an exact rational.
pub fn overlap_lower_bound(n: usize, d: usize, d_rho: usize, m: usize) -> Rational {
    let rate = Rational::new((1i64 << (d + 1)) - (1i64 << (d_rho + 1)), (d - d_rho) as i64);
    let bound = rate * Rational::from_integer(m as i64 - d as i64);
    bound.min(Rational::from_integer(n as i64))
}

/// File shape `{"n": int, "facets": [[int,...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub n: usize,
    pub facets: Vec<Vec<u32>>,
}

pub fn to_json(complex: &SimplicialComplex) -> String {
    let doc = ComplexJson {
        n: complex.vertex_count(),
        facets: complex.facets().iter().map(|f| f.vertices().to_vec()).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn parse_json(text: &str) -> Result<SimplicialComplex> {
    let doc: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.facets.iter().any(|f| f.is_empty()) {
        return Err(Error::Parse("empty facet".into()));
    }
    SimplicialComplex::from_facets(doc.n, doc.facets.into_iter().map(|f| Face::new(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtree;
    use proptest::prelude::*;

    fn complex(n: usize, facets: &[&[u32]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(n, facets.iter().map(|f| Face::from(*f))).unwrap()
    }

    #[test]
    fn rejects_non_closed_face_lists() {
        let faces = vec![Face::from([0, 1]), Face::from([0])];
        assert!(SimplicialComplex::from_faces(2, faces).is_err());
        assert!(SimplicialComplex::from_faces(1, vec![Face::from([3])]).is_err());
    }

    #[test]
    fn degree_in_t0() {
        let t0 = dtree::build_t0(2, 5).unwrap();
        let c = t0.complex();
        assert_eq!(c.degree(&Face::from([0, 1]), 2).unwrap(), 1);
        assert_eq!(c.delta(2).unwrap(), 1);
        assert!(c.degree(&Face::from([0, 5]), 2).is_err());
        assert!(c.degree(&Face::from([0]), 2).is_err());
    }

    #[test]
    fn full_simplex_degrees() {
        for d in 1..=4 {
            let c = SimplicialComplex::skeleton(d + 2, d + 2);
            for f in c.faces_of_size(d) {
                assert_eq!(c.degree(f, d).unwrap(), 2);
            }
        }
    }

    #[test]
    fn delta_of_empty_domain() {
        let c = complex(3, &[&[0], &[1]]);
        assert!(matches!(c.delta(2), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn density_examples() {
        for d in 1..=4usize {
            let c = SimplicialComplex::skeleton(d + 1, d + 1);
            let all: Vec<u32> = (0..=d as u32).collect();
            let r = c.density(&all).unwrap();
            assert_eq!(r.e_of_s, (1 << (d + 1)) - 1);
            assert_eq!(r.density, Rational::new((1 << (d + 1)) - 1, d as i64 + 1));
        }
        let c = complex(2, &[&[0, 1]]);
        assert!(c.density(&[]).is_err());
    }

    #[test]
    fn nonadjacency() {
        let c = complex(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert!(!c.nonadjacent(&Face::from([0, 1, 2]), &Face::from([2, 3, 4])));
        let path = complex(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert!(path.nonadjacent(&Face::from([0]), &Face::from([2])));
        assert!(path.nonadjacent(&Face::from([0]), &Face::from([3])));
        assert!(!path.nonadjacent(&Face::from([0]), &Face::from([1])));
    }

    #[test]
    fn span_examples() {
        let c = complex(6, &[&[0, 1, 2, 3], &[3, 4], &[5]]);
        assert_eq!(c.span_count(&[0, 1, 2, 3]).unwrap(), 15);
        assert_eq!(c.span_count(&[0, 4, 5]).unwrap(), 3);
    }

    #[test]
    fn prune_identity_and_t0() {
        let t0 = dtree::build_t0(2, 5).unwrap();
        let c = t0.complex();
        assert_eq!(&c.min_degree_prune(2, 0, false).unwrap(), c);
        let pruned = c.min_degree_prune(2, 2, false).unwrap();
        let before = c.faces_of_size(3).len();
        let after = pruned.faces_of_size(3).len();
        assert!(after < before);
        // edges below threshold are gone
        for e in c.faces_of_size(2) {
            if c.degree(e, 2).unwrap() < 2 {
                assert!(!pruned.contains(e));
            }
        }
        // every edge {i, i+2} of T0 lies in a single triangle
        assert_eq!(after, 0);
    }

    #[test]
    fn overlap_three_triangles() {
        let c = complex(7, &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]);
        let w = c.overlap_witness(&Face::from([0]), 2, 7).unwrap();
        assert_eq!(w.vertices, (0..7).collect::<Vec<_>>());
        assert_eq!(w.count, 19);
        assert_eq!(w.simplices_through_rho, 3);
        assert!(Rational::from_integer(w.count as i64) >= overlap_lower_bound(3, 2, 0, 7));
    }

    #[test]
    fn overlap_greedy_branch() {
        // star of eight triangles around vertex 0, m too small to hold them all
        let facets: Vec<Vec<u32>> = (0..8).map(|i| vec![0, 2 * i + 1, 2 * i + 2]).collect();
        let c = SimplicialComplex::from_facets(17, facets.iter().map(|f| Face::from(f.as_slice()))).unwrap();
        for m in 3..=16 {
            let w = c.overlap_witness(&Face::from([0]), 2, m).unwrap();
            assert!(w.vertices.len() <= m && w.vertices.len() >= m - 2);
            assert!(Rational::from_integer(w.count as i64) >= overlap_lower_bound(8, 2, 0, m));
        }
    }

    #[test]
    fn overlap_errors() {
        let c = complex(4, &[&[0, 1], &[2, 3]]);
        assert!(matches!(c.overlap_witness(&Face::from([0]), 2, 5), Err(Error::EmptyDomain(_))));
        assert!(c.overlap_witness(&Face::from([0, 1]), 1, 5).is_err());
        assert!(c.overlap_witness(&Face::from([0]), 1, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = complex(6, &[&[0, 1, 2], &[2, 3], &[5]]);
        let text = to_json(&c);
        assert_eq!(text, r#"{"n":6,"facets":[[5],[2,3],[0,1,2]]}"#);
        assert_eq!(parse_json(&text).unwrap(), c);
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        (2usize..=9).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(0..n as u32, 1..5), 1..10)
                .prop_map(move |fs| SimplicialComplex::from_facets(n, fs.into_iter().map(Face::new)).unwrap())
        })
    }

    proptest! {
        #[test]
        fn counts_match_brute_force(c in arb_complex(), sel in any::<u16>()) {
            let set: Vec<u32> = (0..c.vertex_count() as u32).filter(|v| sel >> v & 1 == 1).collect();
            let inside = c.faces().iter().filter(|f| f.vertices().iter().all(|v| set.contains(v))).count();
            prop_assert_eq!(c.span_count(&set).unwrap(), inside as u64);
            let meeting = c.faces().iter().filter(|f| f.vertices().iter().any(|v| set.contains(v))).count();
            prop_assert_eq!(c.faces_meeting(&set).unwrap(), meeting as u64);
            // complementary count
            let avoiding = c.faces().iter().filter(|f| f.vertices().iter().all(|v| !set.contains(v))).count();
            prop_assert_eq!(meeting + avoiding, c.face_count());
            for f in c.faces() {
                let k = f.len();
                let up = c.faces().iter().filter(|g| g.len() == k + 1 && f.is_subset_of(g)).count();
                prop_assert_eq!(c.degree(f, k).unwrap(), up);
            }
        }

        #[test]
        fn prune_removes_every_low_face(c in arb_complex(), d in 1usize..3, th in 0usize..3) {
            let pruned = c.min_degree_prune(d, th, false).unwrap();
            prop_assert!(SimplicialComplex::from_faces(pruned.vertex_count(), pruned.faces().to_vec()).is_ok());
            for f in c.faces_of_size(d) {
                if c.degree(f, d).unwrap() < th {
                    prop_assert!(!pruned.contains(f));
                }
            }
            let fix = c.min_degree_prune(d, th, true).unwrap();
            if let Ok(delta) = fix.delta(d) {
                prop_assert!(delta >= th);
            }
        }

        #[test]
        fn set_system_round_trip(c in arb_complex()) {
            let s = c.to_set_system().unwrap();
            prop_assert!(s.is_downward_closed());
            prop_assert_eq!(SimplicialComplex::from_set_system(&s).unwrap(), c);
        }
    }
}
