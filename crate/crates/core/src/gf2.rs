//! Dense GF(2) linear algebra on rows packed into `u64` (at most 64 columns).

/// Reduced row echelon form; returns the pivot column of each kept row.
pub(crate) fn rref(rows: &mut Vec<u64>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let bit = 1u64 << c;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(rows: &[u64], ncols: usize) -> usize {
    let mut rows = rows.to_vec();
    rref(&mut rows, ncols).len()
}

/// Basis of `{v : popcount(row & v) even for every row}`.
pub(crate) fn nullspace(rows: &[u64], ncols: usize) -> Vec<u64> {
    let mut rows = rows.to_vec();
    let pivots = rref(&mut rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = 1u64 << free;
        for (row, &pc) in rows.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                v |= 1u64 << pc;
            }
        }
        basis.push(v);
    }
    basis
}

/// Whether `v` lies in the row span.
pub(crate) fn in_span(rows: &[u64], ncols: usize, v: u64) -> bool {
    let mut ext = rows.to_vec();
    let r = rank(&ext, ncols);
    ext.push(v);
    rank(&ext, ncols) == r
}
