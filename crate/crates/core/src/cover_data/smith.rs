//! Smith normal form of small integer matrices.
//!
//! Only the diagonal is needed here, so no transformation matrices are
//! tracked. Entries of cover matrices are bounded by `N`, which keeps the
//! intermediate values far away from `i128` overflow.

/// Returns the invariant factors `d_1 | d_2 | ... | d_r` followed by zeros,
/// `min(rows, cols)` values in total. All values are non-negative.
#[allow(clippy::needless_range_loop)]
pub fn invariant_factors(matrix: &[Vec<i128>]) -> Vec<i128> {
    let rows = matrix.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = matrix[0].len();
    let mut a: Vec<Vec<i128>> = matrix.to_vec();
    let rank_bound = rows.min(cols);

    for t in 0..rank_bound {
        // pivot: smallest nonzero absolute value in the trailing block
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut done = true;
            // clear column t below the pivot
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                    if a[i][t] != 0 {
                        done = false;
                    }
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                    if a[t][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                // pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // a remainder smaller than the pivot appeared; move it in place
            if let Some((pi, pj)) = smallest_nonzero(&a, t) {
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
            }
        }
    }

    (0..rank_bound).map(|t| a[t][t].abs()).collect()
}

fn smallest_nonzero(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &v) in row.iter().enumerate().skip(t) {
            if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
