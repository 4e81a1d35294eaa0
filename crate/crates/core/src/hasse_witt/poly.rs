use std::collections::HashMap;
use std::fmt::Write as _;

use smallvec::SmallVec;

use super::field::{mul_mod, ExtField, FieldElement};

pub type Exponents = SmallVec<[u32; 8]>;

/// Dense accumulation is used when the product's exponent box has at most
/// this many cells.
const DENSE_LIMIT: u64 = 1 << 22;

/// A polynomial over `F_p` in a fixed number of variables.
///
/// Terms are kept sorted lexicographically by exponent vector with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    p: u64,
    num_vars: usize,
    terms: Vec<(Exponents, u64)>,
}

impl SparsePoly {
    /// `p` must be prime and below `2^31`.
    pub fn zero(p: u64, num_vars: usize) -> SparsePoly {
        assert!((2..1 << 31).contains(&p), "modulus out of range: {p}");
        SparsePoly {
            p,
            num_vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(p: u64, num_vars: usize, c: u64) -> SparsePoly {
        SparsePoly::from_terms(p, num_vars, [(Exponents::from_elem(0, num_vars), c)])
    }

    /// Sums duplicate exponents and drops zero coefficients.
    pub fn from_terms<I>(p: u64, num_vars: usize, terms: I) -> SparsePoly
    where
        I: IntoIterator<Item = (Exponents, u64)>,
    {
        let mut out = SparsePoly::zero(p, num_vars);
        let mut raw: Vec<(Exponents, u64)> = terms
            .into_iter()
            .map(|(e, c)| {
                assert_eq!(e.len(), num_vars, "exponent vector length");
                (e, c % p)
            })
            .collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        for (e, c) in raw {
            match out.terms.last_mut() {
                Some((last, acc)) if *last == e => *acc = (*acc + c) % p,
                _ => out.terms.push((e, c)),
            }
        }
        out.terms.retain(|(_, c)| *c != 0);
        out
    }

    /// Caller guarantees sorted, distinct exponents and nonzero reduced
    /// coefficients.
    pub(crate) fn from_sorted_unchecked(
        p: u64,
        num_vars: usize,
        terms: Vec<(Exponents, u64)>,
    ) -> SparsePoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| *c != 0 && *c < p));
        SparsePoly { p, num_vars, terms }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[(Exponents, u64)] {
        &self.terms
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> u64 {
        self.terms
            .binary_search_by(|(e, _)| e.as_slice().cmp(exponents))
            .map(|k| self.terms[k].1)
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &SparsePoly) {
        assert_eq!(self.p, other.p, "polynomials over different fields");
        assert_eq!(self.num_vars, other.num_vars, "different variable counts");
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        self.check_compatible(other);
        let p = self.p;
        let mut terms = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    std::cmp::Ordering::Less => {
                        terms.push((ea.clone(), *ca));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        terms.push((eb.clone(), *cb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let c = (ca + cb) % p;
                        if c != 0 {
                            terms.push((ea.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(t), None) => {
                    terms.push((*t).clone());
                    a.next();
                }
                (None, Some(t)) => {
                    terms.push((*t).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparsePoly::from_sorted_unchecked(p, self.num_vars, terms)
    }

    pub fn scale(&self, c: u64) -> SparsePoly {
        let c = c % self.p;
        if c == 0 {
            return SparsePoly::zero(self.p, self.num_vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), mul_mod(*x, c, self.p)))
            .collect();
        SparsePoly::from_sorted_unchecked(self.p, self.num_vars, terms)
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(self.p - 1)
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    /// Total degree if every term has the same degree; `None` for mixed
    /// degrees and for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degs = self.terms.iter().map(|(e, _)| total(e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True for the zero polynomial and for polynomials homogeneous of the
    /// given degree.
    pub fn is_homogeneous_of(&self, degree: u64) -> bool {
        self.terms.iter().all(|(e, _)| total(e) == degree)
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        self.check_compatible(other);
        if self.is_zero() || other.is_zero() {
            return SparsePoly::zero(self.p, self.num_vars);
        }
        match self.dense_layout(other) {
            Some(layout) => self.mul_dense(other, &layout),
            None => self.mul_hashed(other),
        }
    }

    /// Strides for a dense product buffer. When both factors are
    /// homogeneous the last exponent is implied by the degree and dropped.
    fn dense_layout(&self, other: &SparsePoly) -> Option<DenseLayout> {
        let n = self.num_vars;
        let degree = match (self.homogeneous_degree(), other.homogeneous_degree()) {
            (Some(a), Some(b)) if n > 0 => Some(a + b),
            _ => None,
        };
        let indexed = if degree.is_some() { n - 1 } else { n };
        let mut dims = vec![0u64; indexed];
        for (v, dim) in dims.iter_mut().enumerate() {
            let ma = self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0);
            let mb = other.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0);
            *dim = ma as u64 + mb as u64 + 1;
        }
        let mut strides = vec![0u64; indexed];
        let mut size = 1u64;
        for v in (0..indexed).rev() {
            strides[v] = size;
            size = size.checked_mul(dims[v])?;
            if size > DENSE_LIMIT {
                return None;
            }
        }
        Some(DenseLayout {
            dims,
            strides,
            size,
            degree,
        })
    }

    fn mul_dense(&self, other: &SparsePoly, layout: &DenseLayout) -> SparsePoly {
        let p = self.p;
        let p2 = p * p;
        let index = |e: &Exponents| -> usize {
            layout
                .strides
                .iter()
                .zip(e.iter())
                .map(|(s, &x)| s * x as u64)
                .sum::<u64>() as usize
        };
        let left: Vec<(usize, u64)> = self.terms.iter().map(|(e, c)| (index(e), *c)).collect();
        let right: Vec<(usize, u64)> = other.terms.iter().map(|(e, c)| (index(e), *c)).collect();
        let mut acc = vec![0u64; layout.size as usize];
        for &(ia, ca) in &left {
            for &(ib, cb) in &right {
                let slot = &mut acc[ia + ib];
                *slot += ca * cb;
                if *slot >= p2 {
                    *slot -= p2;
                }
            }
        }
        let indexed = layout.dims.len();
        let mut terms = Vec::new();
        for (k, &value) in acc.iter().enumerate() {
            let c = value % p;
            if c == 0 {
                continue;
            }
            let mut e = Exponents::from_elem(0, self.num_vars);
            let mut rest = k as u64;
            for v in 0..indexed {
                e[v] = (rest / layout.strides[v]) as u32;
                rest %= layout.strides[v];
            }
            if let Some(d) = layout.degree {
                let partial: u64 = e[..indexed].iter().map(|&x| x as u64).sum();
                e[indexed] = (d - partial) as u32;
            }
            terms.push((e, c));
        }
        SparsePoly::from_sorted_unchecked(p, self.num_vars, terms)
    }

    fn mul_hashed(&self, other: &SparsePoly) -> SparsePoly {
        let p = self.p;
        let mut acc: HashMap<Exponents, u64> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + ca * cb) % p;
            }
        }
        SparsePoly::from_terms(p, self.num_vars, acc)
    }

    /// The polynomial with `z_var` set to zero.
    pub fn restrict_zero(&self, var: usize) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] == 0)
            .cloned()
            .collect();
        SparsePoly::from_sorted_unchecked(self.p, self.num_vars, terms)
    }

    /// Largest `r` with `z_var^r` dividing the polynomial; `None` stands for
    /// infinity (the zero polynomial).
    pub fn valuation(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e[var]).min()
    }

    /// Largest `r` such that `z_h^r` divides the restriction `z_i = 0`
    /// (0-based indices). `None` means the restriction vanishes.
    pub fn divisibility_exponent(&self, i: usize, h: usize) -> Option<u32> {
        assert!(i != h, "restriction and divisibility variables must differ");
        self.terms
            .iter()
            .filter(|(e, _)| e[i] == 0)
            .map(|(e, _)| e[h])
            .min()
    }

    /// Value at a point of `F_{p^k}^s`. The field must have characteristic
    /// `p`.
    pub fn evaluate(&self, field: &ExtField, point: &[FieldElement]) -> FieldElement {
        assert_eq!(field.characteristic(), self.p, "field characteristic");
        assert_eq!(point.len(), self.num_vars, "point dimension");
        let mut powers: Vec<Vec<FieldElement>> = Vec::with_capacity(self.num_vars);
        for (v, x) in point.iter().enumerate() {
            let top = self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0) as usize;
            let mut row = Vec::with_capacity(top + 1);
            row.push(field.one());
            for k in 1..=top {
                let next = field.mul(&row[k - 1], x);
                row.push(next);
            }
            powers.push(row);
        }
        let mut sum = field.zero();
        for (e, c) in &self.terms {
            let mut t = field.from_base(*c);
            for (v, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = field.mul(&t, &powers[v][x as usize]);
                }
            }
            sum = field.add(&sum, &t);
        }
        sum
    }

    /// Body lines `coeff e_1 ... e_s`, one per term, in canonical order.
    pub fn dump_body(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            write!(out, "{c}").unwrap();
            for x in e {
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn total(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

struct DenseLayout {
    dims: Vec<u64>,
    strides: Vec<u64>,
    size: u64,
    degree: Option<u64>,
}
