//! Integer row reduction for subgroup questions.
//!
//! A subgroup `S = ⟨g_1, …, g_s⟩` of `Z^r × ∏ Z/n_i` is the image of the
//! integer lattice spanned by the lifted generators together with the torsion
//! relations `n_i·e_{r+i}`. Membership is a row-span question on that lattice
//! (echelon form), and the structure of `X/S` is read off the invariant
//! factors (Smith form).

use num_integer::Integer;

pub(crate) type Row = Vec<i128>;

fn axpy(target: &mut Row, q: i128, src: &Row) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row echelon form over the integers with positive pivots; zero rows dropped.
pub(crate) fn echelon(mut rows: Vec<Row>, ncols: usize) -> Vec<Row> {
    let mut top = 0;
    for c in 0..ncols {
        if top >= rows.len() {
            break;
        }
        loop {
            let pivot = (top..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs());
            let Some(p) = pivot else { break };
            rows.swap(top, p);
            let mut clean = true;
            for i in top + 1..rows.len() {
                if rows[i][c] != 0 {
                    let q = rows[i][c] / rows[top][c];
                    let src = rows[top].clone();
                    axpy(&mut rows[i], q, &src);
                    clean &= rows[i][c] == 0;
                }
            }
            if clean {
                break;
            }
        }
        if rows[top][c] == 0 {
            continue;
        }
        if rows[top][c] < 0 {
            rows[top].iter_mut().for_each(|x| *x = -*x);
        }
        let src = rows[top].clone();
        for i in 0..top {
            let q = Integer::div_floor(&rows[i][c], &src[c]);
            if q != 0 {
                axpy(&mut rows[i], q, &src);
            }
        }
        top += 1;
    }
    rows.truncate(top);
    rows
}

/// Whether `v` lies in the integer row span of an echelon basis.
pub(crate) fn in_row_span(basis: &[Row], v: &[i128]) -> bool {
    let mut v = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        if v[c] % row[c] != 0 {
            return false;
        }
        let q = v[c] / row[c];
        if q != 0 {
            axpy(&mut v, q, row);
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Invariant factors of `Z^ncols / rowspan(rows)`, one per column; `0`
/// marks a free `Z` summand and `1` a trivial one.
pub(crate) fn invariant_factors(mut a: Vec<Row>, ncols: usize) -> Vec<i128> {
    let m = a.len();
    let mut diag = Vec::with_capacity(ncols);
    let mut t = 0;
    while t < m.min(ncols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..ncols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            // Bring the smallest nonzero entry of row t / column t to the pivot.
            let mut pick = (t, t);
            for i in t + 1..m {
                if a[i][t] != 0 && a[i][t].abs() < a[pick.0][pick.1].abs() {
                    pick = (i, t);
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 && a[t][j].abs() < a[pick.0][pick.1].abs() {
                    pick = (t, j);
                }
            }
            if pick.0 != t {
                a.swap(t, pick.0);
            }
            if pick.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, pick.1);
                }
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t] / p;
                    let src = a[t].clone();
                    axpy(&mut a[i], q, &src);
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 {
                    let q = a[t][j] / p;
                    for row in a.iter_mut() {
                        let s = row[t];
                        row[j] -= q * s;
                    }
                    clean &= a[t][j] == 0;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into row t and retry.
            let offender = (t + 1..m).find(|&i| (t + 1..ncols).any(|j| a[i][j] % p != 0));
            match offender {
                Some(i) => {
                    let src = a[i].clone();
                    axpy(&mut a[t], -1, &src);
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag.resize(ncols, 0);
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_of_even_lattice() {
        let basis = echelon(vec![vec![2, 0], vec![0, 2], vec![2, 2]], 2);
        assert_eq!(basis, vec![vec![2, 0], vec![0, 2]]);
        assert!(in_row_span(&basis, &[4, -6]));
        assert!(!in_row_span(&basis, &[1, 1]));
    }

    #[test]
    fn echelon_combines_by_gcd() {
        let basis = echelon(vec![vec![6], vec![9]], 1);
        assert_eq!(basis, vec![vec![3]]);
    }

    #[test]
    fn invariant_factors_of_small_lattices() {
        // Z^2 / <(2,0),(0,4)> = Z/2 x Z/4
        assert_eq!(invariant_factors(vec![vec![2, 0], vec![0, 4]], 2), vec![2, 4]);
        // Z^2 / <(2,4),(6,8)>: det = -8, gcd of entries 2 -> Z/2 x Z/4
        assert_eq!(invariant_factors(vec![vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        // Z^2 / <(1,1)> = Z
        assert_eq!(invariant_factors(vec![vec![1, 1]], 2), vec![1, 0]);
        // Z/6 presented as Z^2/<(2,0),(0,3)> has invariant factors 1, 6.
        assert_eq!(invariant_factors(vec![vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
    }
}
