//! Small GF(2) linear algebra on bit-mask vectors.
//!
//! Vectors live in `u32` masks aligned with [`crate::bits::BitString`] values:
//! mask bit `width - 1 - p` is coordinate `p` counting from the left.  All
//! routines are exact integer arithmetic; nothing here is randomized.

use std::collections::BTreeSet;

/// Rank of a list of vectors.
pub fn rank(vectors: &[u32]) -> usize {
    reduce(vectors).len()
}

/// Reduced row-echelon basis of the span, highest pivot first.
///
/// The result is a canonical form: two vector lists span the same subspace
/// exactly when their reduced bases are equal.
pub fn rref_basis(vectors: &[u32]) -> Vec<u32> {
    let mut rows = reduce(vectors);
    // back-substitute so each pivot appears in exactly one row
    for i in 0..rows.len() {
        let pivot = high_bit(rows[i]);
        for j in 0..i {
            if rows[j] & pivot != 0 {
                rows[j] ^= rows[i];
            }
        }
    }
    rows
}

/// True when the two spans intersect only in zero.
pub fn spans_independent(a: &[u32], b: &[u32]) -> bool {
    let mut joint: Vec<u32> = a.to_vec();
    joint.extend_from_slice(b);
    rank(&joint) == rank(a) + rank(b)
}

/// Basis of `{ x : parity(r & x) = 0 for every row r }` inside `width` bits.
///
/// Used to recover the hidden period from accumulated orthogonal samples.
pub fn nullspace(rows: &[u32], width: usize) -> Vec<u32> {
    assert!(width <= 32);
    let rref = rref_basis(rows);
    let pivots: Vec<u32> = rref.iter().map(|&r| high_bit(r)).collect();
    let mut basis = Vec::new();
    for p in 0..width {
        let free_bit = 1u32 << (width - 1 - p);
        if pivots.contains(&free_bit) {
            continue;
        }
        let mut x = free_bit;
        for (row, &pivot) in rref.iter().zip(&pivots) {
            if row & free_bit != 0 {
                x |= pivot;
            }
        }
        basis.push(x);
    }
    basis
}

/// Canonical bases of every `dim`-dimensional subspace of GF(2)^width.
///
/// Enumeration is by brute force over vector combinations, so this is only
/// meant for the narrow registers the sharing-pair search works on.
pub fn subspaces(width: usize, dim: usize) -> Vec<Vec<u32>> {
    assert!(width <= 8, "subspace enumeration is exponential; width {width} is out of scope");
    let all: Vec<u32> = (1..(1u32 << width)).collect();
    let mut seen = BTreeSet::new();
    let mut combo = vec![0usize; dim];
    enumerate_combinations(&all, 0, &mut combo, 0, &mut |chosen| {
        let basis = rref_basis(chosen);
        if basis.len() == dim {
            seen.insert(basis);
        }
    });
    seen.into_iter().collect()
}

fn enumerate_combinations(
    pool: &[u32],
    start: usize,
    combo: &mut [usize],
    depth: usize,
    visit: &mut impl FnMut(&[u32]),
) {
    if depth == combo.len() {
        let chosen: Vec<u32> = combo.iter().map(|&i| pool[i]).collect();
        visit(&chosen);
        return;
    }
    for i in start..pool.len() {
        combo[depth] = i;
        enumerate_combinations(pool, i + 1, combo, depth + 1, visit);
    }
}

fn high_bit(v: u32) -> u32 {
    debug_assert!(v != 0);
    1u32 << (31 - v.leading_zeros())
}

/// Forward elimination: independent rows in echelon order, highest pivot first.
fn reduce(vectors: &[u32]) -> Vec<u32> {
    let mut rows: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &r in &rows {
            if high_bit(r) & v != 0 {
                v ^= r;
            }
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by_key(|&r| std::cmp::Reverse(r));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_counts_independent_vectors() {
        assert_eq!(rank(&[0b01, 0b10, 0b11]), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[0b101, 0b011, 0b110]), 2);
    }

    #[test]
    fn nullspace_of_two_parity_checks() {
        // rows 110 and 011 over 3 bits force x0 = x1 = x2
        let basis = nullspace(&[0b110, 0b011], 3);
        assert_eq!(basis, vec![0b111]);
    }

    #[test]
    fn nullspace_of_single_row_in_two_bits() {
        // row 01 forces the right bit to zero, leaving the left bit free
        let basis = nullspace(&[0b01], 2);
        assert_eq!(basis, vec![0b10]);
    }

    #[test]
    fn rref_is_canonical() {
        assert_eq!(rref_basis(&[0b11, 0b01]), rref_basis(&[0b10, 0b01]));
        assert_eq!(rref_basis(&[0b11, 0b01]), vec![0b10, 0b01]);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        assert_eq!(subspaces(2, 1).len(), 3);
        assert_eq!(subspaces(4, 2).len(), 35);
        assert_eq!(subspaces(3, 1).len(), 7);
        assert_eq!(subspaces(3, 2).len(), 7);
    }

    #[test]
    fn complementary_spans_are_independent() {
        assert!(spans_independent(&[0b10], &[0b01]));
        assert!(spans_independent(&[0b10], &[0b11]));
        assert!(!spans_independent(&[0b10], &[0b10]));
        assert!(!spans_independent(&[0b110, 0b011], &[0b101]));
    }
}
