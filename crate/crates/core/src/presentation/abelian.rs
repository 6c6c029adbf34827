use serde::{Deserialize, Serialize};

use super::Presentation;

/// Smith normal form `D = U · A · V` of an integer matrix, with unimodular `U`, `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

/// Invariant factors of `ℤⁿ / ⟨relator exponent sums⟩`.
///
/// Nontrivial factors only: entries equal to 1 are dropped, zeros (free factors)
/// come last so that each entry divides the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianizationResult {
    pub invariant_factors: Vec<u64>,
    pub rank_free: usize,
}

impl AbelianizationResult {
    pub fn torsion(&self) -> impl Iterator<Item = u64> + '_ {
        self.invariant_factors.iter().copied().filter(|&d| d != 0)
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u64 {
        self.torsion().product()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn row_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x += k * y;
    }
}

fn col_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] += k * row[src];
    }
}

fn col_swap(m: &mut [Vec<i64>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form by elementary row/column operations on an `rows × cols` matrix.
pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = a.len();
    let mut d: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let k = rows.min(cols);

    for t in 0..k {
        // pivot: smallest nonzero magnitude in the trailing block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j].unsigned_abs())
        else {
            break;
        };
        d.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut v, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(d[t][t]);
                row_axpy(&mut d, i, t, -q);
                row_axpy(&mut u, i, t, -q);
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(d[t][t]);
                col_axpy(&mut d, j, t, -q);
                col_axpy(&mut v, j, t, -q);
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility of the trailing block by the pivot
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| d[i][j] % d[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        row_axpy(&mut d, t, i, 1);
                        row_axpy(&mut u, t, i, 1);
                        continue;
                    }
                }
            }
            // a smaller remainder appeared in row or column t: move it to the pivot
            let (mi, mj) = std::iter::once((t, t))
                .chain((t + 1..rows).map(|i| (i, t)))
                .chain((t + 1..cols).map(|j| (t, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].unsigned_abs())
                .expect("pivot is nonzero");
            if mi != t {
                d.swap(t, mi);
                u.swap(t, mi);
            }
            if mj != t {
                col_swap(&mut d, t, mj);
                col_swap(&mut v, t, mj);
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diagonal = (0..k).map(|i| d[i][i]).collect();
    SmithForm { diagonal, u, v }
}

/// Exponent-sum matrix of the relators, one row per relator.
pub fn exponent_sum_matrix(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators().iter().map(|r| r.exponent_sums(p.generator_count())).collect()
}

pub fn abelianization(p: &Presentation) -> AbelianizationResult {
    let n = p.generator_count();
    let snf = smith_normal_form(&exponent_sum_matrix(p), n);
    let mut factors: Vec<u64> = snf.diagonal.iter().map(|d| d.unsigned_abs()).collect();
    factors.resize(n, 0);
    let mut nonzero: Vec<u64> = factors.iter().copied().filter(|&d| d > 1).collect();
    nonzero.sort_unstable();
    let rank_free = factors.iter().filter(|&&d| d == 0).count();
    nonzero.extend(std::iter::repeat_n(0, rank_free));
    AbelianizationResult { invariant_factors: nonzero, rank_free }
}
