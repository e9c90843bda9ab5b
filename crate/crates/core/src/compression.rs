//! Down-shift compression of a set system into a simplicial complex of the
//! same cardinality whose shatter function is pointwise no larger.
//!
//! The shift toward element `x` replaces every member `e ∋ x` by `e ∖ {x}`
//! whenever `e ∖ {x}` is not already a member. Passes over `x = 0, 1, …`
//! repeat until nothing moves; a fixed point of all shifts is downward
//! closed.

use std::collections::HashSet;

use crate::bits::Mask;
use crate::setsystem::SetSystem;

/// Outcome of [`compress_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub system: SetSystem,
    /// Number of full passes over the ground set, the last one changing nothing.
    pub passes: usize,
    /// Number of individual member replacements.
    pub moves: usize,
}

/// Applies one down-shift toward `x`. Returns the number of moved members.
pub fn shift(members: &mut [Mask], x: usize) -> usize {
    let bit = 1u64 << x;
    let present: HashSet<Mask> = members.iter().copied().collect();
    let mut moved = 0;
    // Replacements never collide: e ∖ {x} = e' ∖ {x} with x ∈ e, e' forces e = e'.
    for e in members.iter_mut() {
        if *e & bit != 0 && !present.contains(&(*e & !bit)) {
            *e &= !bit;
            moved += 1;
        }
    }
    moved
}

/// Compresses `system`; the result lists members in increasing mask order.
pub fn compress(system: &SetSystem) -> SetSystem {
    compress_traced(system).system
}

pub fn compress_traced(system: &SetSystem) -> Compression {
    let mut members = system.canonical_members();
    let mut passes = 0;
    let mut moves = 0;
    loop {
        passes += 1;
        let mut changed = 0;
        for x in 0..system.ground_size() {
            changed += shift(&mut members, x);
            members.sort_unstable();
        }
        moves += changed;
        if changed == 0 {
            break;
        }
    }
    let system = SetSystem::new(system.ground_size(), members)
        .expect("shifts preserve distinctness and the ground set");
    Compression { system, passes, moves }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;
    use proptest::prelude::*;

    fn total_size(ms: &[Mask]) -> u32 {
        ms.iter().map(|m| m.count_ones()).sum()
    }

    #[test]
    fn hand_traced_example() {
        let (s, _) = SetSystem::from_sets(4, &[vec![1, 2], vec![2, 3]]).unwrap();
        let c = compress(&s);
        assert_eq!(c.sets(), vec![vec![], vec![3]]);
        assert!(c.is_downward_closed());
        assert!(c.shatter_value(1).unwrap() <= 2);
    }

    #[test]
    fn complexes_are_fixed_points() {
        let (s, _) =
            SetSystem::from_sets(4, &[vec![], vec![0], vec![1], vec![0, 1], vec![3]]).unwrap();
        let out = compress_traced(&s);
        assert!(out.system.same_family(&s));
        assert_eq!(out.moves, 0);
        assert_eq!(out.passes, 1);
    }

    proptest! {
        #[test]
        fn postconditions(n in 1usize..=9, raw in proptest::collection::vec(any::<u64>(), 1..40)) {
            let s = SetSystem::new(n, raw.into_iter().map(|m| m & bits::full_mask(n))).unwrap();
            let out = compress_traced(&s);
            let c = &out.system;
            prop_assert_eq!(c.len(), s.len());
            prop_assert!(c.is_downward_closed());
            prop_assert!(c.shatter_profile().dominated_by(&s.shatter_profile()));
            // every move removes one element, so moves ≤ Σ|e|
            prop_assert!(out.moves as u32 <= total_size(s.members()));
            prop_assert_eq!(total_size(c.members()) + out.moves as u32, total_size(s.members()));
        }
    }
}
