//! Bitmask helpers for occupation strings (bit `k` = mode `k`).

/// Iterates set bit positions in ascending order.
pub fn iter_bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(k)
        }
    })
}

/// Mask with bits `0..k` set.
#[inline]
pub fn below(k: usize) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

/// Mask with bits `k+1..128` set.
#[inline]
pub fn above(k: usize) -> u128 {
    !below(k + 1)
}

#[inline]
pub fn count(mask: u128) -> usize {
    mask.count_ones() as usize
}

#[inline]
pub fn parity(mask: u128) -> bool {
    mask.count_ones() & 1 == 1
}

/// Number of pairs `(x, y)` with `x` in `left`, `y` in `right` and `x > y`:
/// the transpositions needed to merge two ascending lists.
pub fn merge_inversions(left: u128, right: u128) -> usize {
    iter_bits(right).map(|y| count(left & above(y))).sum()
}

/// Mask from a list of positions.
pub fn from_positions(positions: &[usize]) -> u128 {
    positions.iter().fold(0, |m, &p| m | (1u128 << p))
}

/// All masks over `n` bits with exactly `k` set, ascending.
pub fn combinations(n: usize, k: usize) -> Vec<u128> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack
    let mut m: u128 = below(k);
    let limit: u128 = if n >= 128 { u128::MAX } else { 1u128 << n };
    while m < limit {
        out.push(m);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}
