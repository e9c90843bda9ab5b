//! Finite set systems over a ground set of at most 64 labeled vertices,
//! their traces, shatter functions and VC dimension.
//!
//! Every member is a [`Mask`]. Traces of a system on `Y` keep the original
//! vertex labels, so `trace(trace(S, Y), Z) == trace(S, Z)` for `Z ⊆ Y`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Combinations, Mask};
use crate::bounds;
use crate::error::{invalid, Error, Result};

/// Largest ground set handled by the exact bitmask core.
pub const MAX_GROUND: usize = 64;

/// A family of distinct subsets of `{0, …, ground_size-1}`.
///
/// Members keep their insertion order so that files round-trip exactly;
/// operations that build new systems emit members in increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground_size: usize,
    members: Vec<Mask>,
}

impl SetSystem {
    /// Builds a system, dropping repeated members (first occurrence wins).
    pub fn new(ground_size: usize, members: impl IntoIterator<Item = Mask>) -> Result<Self> {
        Self::with_duplicates(ground_size, members).map(|(s, _)| s)
    }

    /// Like [`SetSystem::new`] but also reports how many duplicates were dropped.
    pub fn with_duplicates(
        ground_size: usize,
        members: impl IntoIterator<Item = Mask>,
    ) -> Result<(Self, usize)> {
        if ground_size > MAX_GROUND {
            return Err(invalid(format!(
                "ground set of size {ground_size} exceeds the {MAX_GROUND}-vertex limit"
            )));
        }
        let ground = bits::full_mask(ground_size);
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        let mut duplicates = 0;
        for m in members {
            if m & !ground != 0 {
                return Err(invalid(format!(
                    "member {:?} is not a subset of the {ground_size}-vertex ground set",
                    bits::elements(m).collect::<Vec<_>>()
                )));
            }
            if seen.insert(m) {
                kept.push(m);
            } else {
                duplicates += 1;
            }
        }
        Ok((SetSystem { ground_size, members: kept }, duplicates))
    }

    /// Builds a system from explicit vertex lists.
    pub fn from_sets<S: AsRef<[usize]>>(ground_size: usize, sets: &[S]) -> Result<(Self, usize)> {
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mut mask = 0u64;
            for &v in set.as_ref() {
                if v >= ground_size || v >= MAX_GROUND {
                    return Err(invalid(format!(
                        "vertex {v} outside ground set of size {ground_size}"
                    )));
                }
                mask |= 1 << v;
            }
            masks.push(mask);
        }
        Self::with_duplicates(ground_size, masks)
    }

    /// All `2^n` subsets of an `n`-element ground set.
    pub fn power_set(n: usize) -> Result<Self> {
        if n > 24 {
            return Err(invalid("power sets are only materialized for n ≤ 24"));
        }
        Self::new(n, 0..(1u64 << n))
    }

    /// `{∅}` together with every singleton.
    pub fn star(n: usize) -> Result<Self> {
        Self::new(n, std::iter::once(0).chain((0..n).map(|v| 1u64 << v)))
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, member: Mask) -> bool {
        self.members.contains(&member)
    }

    /// Members as sorted vertex lists, in stored order.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&m| bits::elements(m).collect()).collect()
    }

    /// Members sorted by mask; two systems describe the same family iff
    /// their canonical member lists agree.
    pub fn canonical_members(&self) -> Vec<Mask> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    pub fn same_family(&self, other: &SetSystem) -> bool {
        self.ground_size == other.ground_size
            && self.canonical_members() == other.canonical_members()
    }

    /// Every subset of every member is a member (the empty set included).
    pub fn is_downward_closed(&self) -> bool {
        let present: HashSet<Mask> = self.members.iter().copied().collect();
        self.members.iter().all(|&m| {
            bits::elements(m).all(|v| present.contains(&(m & !(1u64 << v))))
        })
    }

    fn check_subset(&self, y: Mask) -> Result<()> {
        if y & !bits::full_mask(self.ground_size) != 0 {
            return Err(invalid(format!(
                "trace set contains a label ≥ {}",
                self.ground_size
            )));
        }
        Ok(())
    }

    /// The family `{ e ∩ Y : e ∈ S }`, deduplicated and sorted.
    pub fn trace(&self, y: Mask) -> Result<SetSystem> {
        self.check_subset(y)?;
        let mut traced: Vec<Mask> = self.members.iter().map(|&e| e & y).collect();
        traced.sort_unstable();
        traced.dedup();
        Ok(SetSystem { ground_size: self.ground_size, members: traced })
    }

    /// `|trace(S, Y)|` without materializing the family.
    pub fn trace_size(&self, y: Mask) -> Result<usize> {
        self.check_subset(y)?;
        let mut scratch = Vec::with_capacity(self.members.len());
        Ok(trace_size_into(&self.members, y, &mut scratch))
    }

    /// Exact `f_S(m)`: the largest trace over all `m`-subsets of the ground
    /// set, scanned in colex order and stopped once `min(2^m, |S|)` is hit.
    pub fn shatter_value(&self, m: usize) -> Result<u64> {
        self.shatter_witness(m).map(|(v, _)| v)
    }

    /// `f_S(m)` together with the colex-first subset attaining it.
    pub fn shatter_witness(&self, m: usize) -> Result<(u64, Mask)> {
        if m > self.ground_size {
            return Err(invalid(format!(
                "m = {m} exceeds the ground set size {}",
                self.ground_size
            )));
        }
        let ceiling = ceiling(m, self.members.len());
        let mut best = 0u64;
        let mut witness = 0;
        let mut scratch = Vec::with_capacity(self.members.len());
        for y in Combinations::new(self.ground_size, m) {
            let size = trace_size_into(&self.members, y, &mut scratch) as u64;
            if size > best {
                best = size;
                witness = y;
                if best == ceiling {
                    break;
                }
            }
        }
        Ok((best, witness))
    }

    pub fn shatter_profile(&self) -> ShatterProfile {
        let values = (0..=self.ground_size)
            .map(|m| self.shatter_value(m).expect("m within range"))
            .collect();
        ShatterProfile { values }
    }

    /// Largest `m` with `f_S(m) = 2^m`.
    pub fn vc_dimension(&self) -> Result<usize> {
        if self.members.is_empty() {
            return Err(Error::UndefinedDimension);
        }
        let mut dim = 0;
        for m in 1..=self.ground_size.min(63) {
            if self.shatter_value(m)? == 1u64 << m {
                dim = m;
            } else {
                break;
            }
        }
        Ok(dim)
    }

    /// Checks `f_S(m) ≤ g_d(m)` for every `m`, where `d` is the VC dimension.
    pub fn sauer_consistent(&self) -> Result<bool> {
        let d = self.vc_dimension()? as u64;
        let profile = self.shatter_profile();
        Ok(profile
            .values
            .iter()
            .enumerate()
            .all(|(m, &f)| (f as u128) <= bounds::g_k(m as u64, d)))
    }
}

fn ceiling(m: usize, members: usize) -> u64 {
    let pow = if m >= 64 { u64::MAX } else { 1u64 << m };
    pow.min(members as u64)
}

fn trace_size_into(members: &[Mask], y: Mask, scratch: &mut Vec<Mask>) -> usize {
    scratch.clear();
    scratch.extend(members.iter().map(|&e| e & y));
    scratch.sort_unstable();
    scratch.dedup();
    scratch.len()
}

/// The sequence `f(0), f(1), …, f(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterProfile {
    pub values: Vec<u64>,
}

impl ShatterProfile {
    /// `self(m) ≤ other(m)` for every `m` both profiles define.
    pub fn dominated_by(&self, other: &ShatterProfile) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Returns the first violated profile invariant, if any.
    pub fn invariant_violation(&self, member_count: usize) -> Option<String> {
        let members = member_count as u64;
        if members > 0 && self.values.first() != Some(&1) {
            return Some("f(0) must be 1 for a non-empty system".into());
        }
        for (m, &f) in self.values.iter().enumerate() {
            if f > ceiling(m, member_count) {
                return Some(format!("f({m}) = {f} exceeds min(2^m, |S|)"));
            }
        }
        for (m, w) in self.values.windows(2).enumerate() {
            if w[1] < w[0] {
                return Some(format!("f decreases between {m} and {}", m + 1));
            }
            if w[1] > 2 * w[0] {
                return Some(format!("f({}) > 2 f({m})", m + 1));
            }
        }
        None
    }
}

/// JSON shape of a set-system file.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SetSystemJson {
    n: usize,
    sets: Vec<Vec<usize>>,
}

/// Renders the line format: `n=<int>` then one member per line.
pub fn to_text(system: &SetSystem) -> String {
    let mut out = format!("n={}\n", system.ground_size);
    for set in system.sets() {
        let line: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the line format. Returns the system and the number of duplicate
/// members that were dropped.
pub fn parse_text(text: &str) -> Result<(SetSystem, usize)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let n = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("expected `n=<int>` header, found {header:?}")))?;
    let mut sets = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let set = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| {
                    Error::Parse(format!("line {}: bad vertex {tok:?}", lineno + 2))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        sets.push(set);
    }
    SetSystem::from_sets(n, &sets)
}

pub fn to_json(system: &SetSystem) -> String {
    let doc = SetSystemJson { n: system.ground_size, sets: system.sets() };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn parse_json(text: &str) -> Result<(SetSystem, usize)> {
    let doc: SetSystemJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    SetSystem::from_sets(doc.n, &doc.sets)
}

/// Parses either format, choosing JSON when the input starts with `{`.
pub fn parse_any(text: &str) -> Result<(SetSystem, usize)> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}
