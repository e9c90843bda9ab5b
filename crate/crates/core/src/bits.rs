//! Bitmask helpers for ground sets of at most 64 elements.

/// A subset of `{0, …, 63}` stored one bit per element.
pub type Mask = u64;

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> Mask {
    debug_assert!(n <= 64);
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn mask_of(elements: impl IntoIterator<Item = usize>) -> Mask {
    elements.into_iter().fold(0, |acc, e| acc | (1u64 << e))
}

/// Elements of `mask` in increasing order.
pub fn elements(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let low = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(low)
        }
    })
}

/// Scatter the low bits of `compact` onto the set bits of `positions`
/// (a software `pdep`).
pub fn deposit(compact: u64, positions: Mask) -> Mask {
    let mut out = 0;
    let mut bit = 0;
    for pos in elements(positions) {
        if compact >> bit & 1 == 1 {
            out |= 1u64 << pos;
        }
        bit += 1;
    }
    out
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `k`-element subsets of `{0, …, n-1}` in colexicographic order
/// (Gosper's hack).
#[derive(Debug, Clone)]
pub struct Combinations {
    current: u128,
    last: u128,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 64, "ground set larger than 64");
        if k > n {
            return Combinations { current: 0, last: 0, done: true };
        }
        let first = (1u128 << k) - 1;
        Combinations { current: first, last: first << (n - k), done: false }
    }
}

impl Iterator for Combinations {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        if self.done {
            return None;
        }
        let out = self.current as Mask;
        if self.current == self.last {
            self.done = true;
        } else {
            let x = self.current;
            let low = x & x.wrapping_neg();
            let ripple = x + low;
            self.current = (((ripple ^ x) >> 2) / low) | ripple;
        }
        Some(out)
    }
}
