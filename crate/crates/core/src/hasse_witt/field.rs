use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Polynomials over `F_p` as coefficient vectors, lowest degree first,
/// without trailing zeros.
type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut r = f.to_vec();
    let lead_inv = inv_mod(*g.last().expect("nonzero divisor"), p);
    while r.len() >= g.len() {
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - g.len();
        for (k, &gk) in g.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - mul_mod(c, gk, p)) % p;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&trim(r), m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^e) mod m`.
fn frobenius_power(e: u32, m: &[u64], p: u64) -> Poly {
    let mut x = poly_rem(&[0, 1], m, p);
    for _ in 0..e {
        // raise to the p-th power by square-and-multiply
        let mut result: Poly = vec![1];
        let mut base = x.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                result = poly_mulmod(&result, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            k >>= 1;
        }
        x = result;
    }
    x
}

/// Rabin's test for a monic polynomial of degree `k`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = (m.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    let sub = |f: Poly| {
        let mut f = f;
        if f.len() < 2 {
            f.resize(2, 0);
        }
        f[1] = (f[1] + p - 1) % p;
        trim(f)
    };
    if !sub(frobenius_power(k, m, p)).is_empty() {
        return false;
    }
    for d in 1..k {
        if k.is_multiple_of(d) && is_prime(k as u64 / d as u64) {
            let g = poly_gcd(m, &sub(frobenius_power(d, m, p)), p);
            if g.len() > 1 {
                return false;
            }
        }
    }
    true
}

/// An element of `F_{p^k}`: coefficients of a polynomial of degree `< k`
/// in the generator, lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub SmallVec<[u64; 4]>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `F_{p^k} = F_p[x] / (m)` with `m` the first monic irreducible polynomial
/// of degree `k` when its coefficients `(c_0, ..., c_{k-1})` are read as the
/// base-`p` number `sum c_i p^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, k: u32) -> Result<ExtField> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        let size = p.checked_pow(k).ok_or(Error::ResourceCap {
            what: "field size",
            limit: u64::MAX,
        })?;
        for code in 0..size {
            let mut m: Vec<u64> = (0..k).map(|i| (code / p.pow(i)) % p).collect();
            m.push(1);
            if (k > 1 && m[0] == 0) || !is_irreducible(&m, p) {
                continue;
            }
            return Ok(ExtField { p, k, modulus: m });
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// Coefficients of the defining polynomial, lowest first (monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(SmallVec::from_elem(0, self.k as usize))
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    /// Image of an integer under `Z -> F_p -> F_{p^k}`.
    pub fn from_base(&self, c: u64) -> FieldElement {
        let mut e = self.zero();
        e.0[0] = c % self.p;
        e
    }

    /// The element whose coefficients are the base-`p` digits of `index`.
    /// Enumerating indices `0..size` enumerates the field.
    pub fn from_index(&self, index: u64) -> FieldElement {
        FieldElement(
            (0..self.k)
                .map(|i| (index / self.p.pow(i)) % self.p)
                .collect(),
        )
    }

    pub fn index_of(&self, e: &FieldElement) -> u64 {
        e.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn is_zero(&self, e: &FieldElement) -> bool {
        e.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn scale(&self, c: u64, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|&x| mul_mod(c, x, self.p)).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.k as usize;
        if k == 1 {
            return FieldElement(SmallVec::from_elem(mul_mod(a.0[0], b.0[0], self.p), 1));
        }
        let mut r = vec![0u64; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        // reduce using x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for top in (k..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            r[top] = 0;
            for (t, &mt) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + t;
                r[idx] = (r[idx] + self.p - mul_mod(c, mt, self.p)) % self.p;
            }
        }
        r.truncate(k);
        FieldElement(r.into_iter().collect())
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.size() - 2))
    }
}

/// Determinant by Gaussian elimination over the field.
#[allow(clippy::needless_range_loop)]
pub fn determinant(field: &ExtField, matrix: &[Vec<FieldElement>]) -> FieldElement {
    let n = matrix.len();
    let mut a: Vec<Vec<FieldElement>> = matrix.to_vec();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !field.is_zero(&a[r][col])) else {
            return field.zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = field.sub(&field.zero(), &det);
        }
        det = field.mul(&det, &a[col][col]);
        let inv = field.inv(&a[col][col]).expect("pivot is nonzero");
        for r in col + 1..n {
            if field.is_zero(&a[r][col]) {
                continue;
            }
            let factor = field.mul(&a[r][col], &inv);
            for c in col..n {
                let t = field.mul(&factor, &a[col][c]);
                a[r][c] = field.sub(&a[r][c], &t);
            }
        }
    }
    det
}
