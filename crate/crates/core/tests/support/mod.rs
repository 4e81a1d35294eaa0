//! Independent oracles shared by the integration tests. Nothing here calls
//! into the polynomial or field code of the library.

#![allow(dead_code)]

use std::collections::HashMap;

use prym_atlas::hasse_witt::SparsePoly;
use prym_atlas::{CoverMatrix, GroupElement};

pub type Monomials = HashMap<Vec<u32>, u64>;

/// Row `c` of Pascal's triangle mod `p`.
pub fn pascal_row(c: u32, p: u64) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..c {
        let mut next = vec![1u64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = (row[k - 1] + row[k]) % p;
        }
        row = next;
    }
    row
}

/// `c_k = ((p - 1) / N) * [-alpha_k]_N` computed from the matrix rows.
pub fn tops(matrix: &CoverMatrix, n: &GroupElement, p: u64) -> Vec<u32> {
    let big_n = matrix.modulus() as u64;
    let q = (p - 1) / big_n;
    (0..matrix.num_cols())
        .map(|j| {
            let a: u64 = (0..matrix.num_rows())
                .map(|i| n.coords()[i] as u64 * matrix.entry(i, j) as u64)
                .sum::<u64>()
                % big_n;
            (q * ((big_n - a) % big_n)) as u32
        })
        .collect()
}

/// `d(n) = -1 + sum_k [-alpha_k]_N / N`, zero for alpha = 0.
pub fn dim(matrix: &CoverMatrix, n: &GroupElement) -> u32 {
    let big_n = matrix.modulus() as u64;
    let neg: Vec<u64> = (0..matrix.num_cols())
        .map(|j| {
            let a: u64 = (0..matrix.num_rows())
                .map(|i| n.coords()[i] as u64 * matrix.entry(i, j) as u64)
                .sum::<u64>()
                % big_n;
            (big_n - a) % big_n
        })
        .collect();
    if neg.iter().all(|&x| x == 0) {
        return 0;
    }
    (neg.iter().sum::<u64>() / big_n - 1) as u32
}

/// Coefficient of `t^degree` in `prod_k (1 + z_k t)^{c_k}`, expanded one
/// factor at a time. Partial products whose `t`-degree can no longer reach
/// `degree` are dropped.
pub fn t_coefficient(c: &[u32], degree: i64, p: u64) -> Monomials {
    t_coefficient_sorted(c, degree, p).into_iter().collect()
}

/// Same expansion as a list in lexicographic exponent order. Factor `k`
/// only touches `z_k`, so distinct branches never produce equal monomials.
pub fn t_coefficient_sorted(c: &[u32], degree: i64, p: u64) -> Vec<(Vec<u32>, u64)> {
    let mut out = Vec::new();
    if degree < 0 {
        return out;
    }
    let s = c.len();
    let mut remaining: Vec<u64> = vec![0; s + 1];
    for k in (0..s).rev() {
        remaining[k] = remaining[k + 1] + c[k] as u64;
    }
    let rows: Vec<Vec<u64>> = c.iter().map(|&ck| pascal_row(ck, p)).collect();
    let mut e = vec![0u32; s];
    expand(&rows, &remaining, 0, degree as u64, 1, p, &mut e, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn expand(
    rows: &[Vec<u64>],
    remaining: &[u64],
    k: usize,
    left: u64,
    coeff: u64,
    p: u64,
    e: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, u64)>,
) {
    if k == rows.len() {
        if left == 0 && coeff != 0 {
            out.push((e.clone(), coeff));
        }
        return;
    }
    for (l, b) in rows[k].iter().enumerate() {
        let l64 = l as u64;
        if l64 > left {
            break;
        }
        if left - l64 > remaining[k + 1] || *b == 0 {
            continue;
        }
        e[k] = l as u32;
        expand(rows, remaining, k + 1, left - l64, coeff * b % p, p, e, out);
    }
    e[k] = 0;
}

pub fn monomials(poly: &SparsePoly) -> Monomials {
    poly.terms().iter().map(|(e, c)| (e.to_vec(), *c)).collect()
}

pub fn upsilon_corrected(d: u32, i: u32, j: u32, p: u64) -> i64 {
    (d as i64 - i as i64 + 1) * (p as i64 - 1) + (j as i64 - i as i64)
}

pub fn upsilon_swapped(d: u32, i: u32, j: u32, p: u64) -> i64 {
    (d as i64 - i as i64 + 1) * (p as i64 - 1) + (i as i64 - j as i64)
}

/// Evaluates a monomial map at a point of `F_p`.
pub fn eval_mod_p(m: &Monomials, point: &[u64], p: u64) -> u64 {
    m.iter().fold(0, |acc, (e, c)| {
        let mut t = *c;
        for (x, &k) in point.iter().zip(e) {
            for _ in 0..k {
                t = t * x % p;
            }
        }
        (acc + t) % p
    })
}

#[allow(clippy::needless_range_loop)]
pub fn det_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_multiple_of(p)) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = (p - det) % p;
        }
        det = det * a[col][col] % p;
        let inv = pow_mod(a[col][col], p - 2, p);
        for r in col + 1..n {
            let f = a[r][col] * inv % p;
            for c in col..n {
                a[r][c] = (a[r][c] + p * p - f * a[col][c] % p) % p;
            }
        }
    }
    det
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Legendre symbol of `a` mod an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Trace of Frobenius of `w^2 = prod (z - z_j)` (four distinct roots) over
/// `F_p`, from a point count.
pub fn elliptic_trace(roots: &[u64], p: u64) -> i64 {
    assert_eq!(roots.len(), 4);
    let sum: i64 = (0..p)
        .map(|z| {
            let f = roots
                .iter()
                .fold(1u64, |acc, &r| acc * ((z + p - r) % p) % p);
            legendre(f, p)
        })
        .sum();
    // two points at infinity since the leading coefficient is 1
    let count = p as i64 + sum + 2;
    p as i64 + 1 - count
}

/// `F_{p^2} = F_p[i]` with `i^2 = -1`, for `p = 3 mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gauss {
    pub re: u64,
    pub im: u64,
}

impl Gauss {
    fn mul(self, o: Gauss, p: u64) -> Gauss {
        Gauss {
            re: (self.re * o.re + p * p - self.im * o.im % p) % p,
            im: (self.re * o.im + self.im * o.re) % p,
        }
    }

    fn pow(self, mut e: u64, p: u64) -> Gauss {
        let mut r = Gauss { re: 1, im: 0 };
        let mut b = self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(b, p);
            }
            b = b.mul(b, p);
            e >>= 1;
        }
        r
    }

    /// Quadratic character on `F_{p^2}^*`.
    fn chi(self, p: u64) -> i64 {
        if self.re == 0 && self.im == 0 {
            return 0;
        }
        let r = self.pow((p * p - 1) / 2, p);
        if r == (Gauss { re: 1, im: 0 }) {
            1
        } else {
            -1
        }
    }
}

/// Middle coefficient of the L-polynomial of the genus-two curve
/// `w^2 = prod (z - z_j)` (six distinct roots in `F_p`, `p = 3 mod 4`),
/// from point counts over `F_p` and `F_{p^2}`.
pub fn genus_two_a2(roots: &[u64], p: u64) -> i64 {
    assert_eq!(roots.len(), 6);
    assert_eq!(p % 4, 3);
    let n1: i64 = p as i64
        + 2
        + (0..p)
            .map(|z| {
                legendre(
                    roots.iter().fold(1, |acc, &r| acc * ((z + p - r) % p) % p),
                    p,
                )
            })
            .sum::<i64>();
    let mut s2 = 0i64;
    for re in 0..p {
        for im in 0..p {
            let z = Gauss { re, im };
            let f = roots.iter().fold(Gauss { re: 1, im: 0 }, |acc, &r| {
                acc.mul(
                    Gauss {
                        re: (z.re + p - r) % p,
                        im: z.im,
                    },
                    p,
                )
            });
            s2 += f.chi(p);
        }
    }
    let q2 = (p * p) as i64;
    let n2 = q2 + 2 + s2;
    // N_k = q^k + 1 - (sum of k-th powers of Frobenius roots)
    let p1 = p as i64 + 1 - n1;
    let p2 = q2 + 1 - n2;
    (p1 * p1 - p2) / 2
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: u64, n: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn row_matrix(n: u32, row: &[u32]) -> CoverMatrix {
    CoverMatrix::new(n, vec![row.to_vec()]).unwrap()
}
