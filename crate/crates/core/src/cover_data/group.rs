use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

use super::matrix::GroupElement;

pub const DEFAULT_MAX_GROUP_SIZE: u64 = 1_000_000;

/// A finite subgroup of `(Z/N)^m`, stored as the sorted list of its
/// elements encoded in base `N` (most significant coordinate first, so the
/// numeric order is the lexicographic order on coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeckGroup {
    modulus: u32,
    rank: usize,
    codes: Vec<u64>,
}

impl DeckGroup {
    /// Additive closure of `generators` in `(Z/N)^m`.
    pub fn closure(
        modulus: u32,
        rank: usize,
        generators: &[GroupElement],
        max_size: u64,
    ) -> Result<DeckGroup> {
        let gens: Vec<u64> = generators
            .iter()
            .map(|g| encode(g.coords(), modulus))
            .collect();
        closure_codes(modulus, rank, &[0], &gens, max_size)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.codes.len() == 1
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.rank() == self.rank
            && g.coords().iter().all(|&c| c < self.modulus)
            && self.contains_code(encode(g.coords(), self.modulus))
    }

    pub(crate) fn contains_code(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    /// Elements in lexicographic order of their coordinates.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.codes
            .iter()
            .map(|&c| GroupElement::new(decode(c, self.modulus, self.rank)))
    }

    pub fn is_subgroup_of(&self, other: &DeckGroup) -> bool {
        self.codes.iter().all(|&c| other.contains_code(c))
    }

    /// `min{k >= 1 : k g in self}`.
    pub fn order_modulo(&self, g: &GroupElement) -> u32 {
        let n = self.modulus;
        let mut acc = g.clone();
        let mut k = 1;
        while !self.contains(&acc) {
            acc = acc.add(g, n);
            k += 1;
        }
        k
    }

    /// A small generating set: greedily keeps the candidates that enlarge
    /// the span, in the order given.
    pub fn greedy_generators(&self, candidates: &[GroupElement]) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut span = DeckGroup::trivial(self.modulus, self.rank);
        for c in candidates {
            if span.len() == self.len() {
                break;
            }
            if !span.contains(c) {
                gens.push(c.clone());
                span = DeckGroup::closure(self.modulus, self.rank, &gens, u64::MAX)
                    .expect("subgroup closure is bounded by the ambient group");
            }
        }
        gens
    }

    pub fn trivial(modulus: u32, rank: usize) -> DeckGroup {
        DeckGroup {
            modulus,
            rank,
            codes: vec![0],
        }
    }

    /// Every subgroup, each with a generating set, ordered by size and then
    /// by element list. Includes the trivial group and the group itself.
    pub fn subgroups(&self, max_count: u64) -> Result<Vec<(Vec<GroupElement>, DeckGroup)>> {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut found: Vec<(Vec<u64>, DeckGroup)> = Vec::new();
        let trivial = DeckGroup::trivial(self.modulus, self.rank);
        seen.insert(trivial.codes.clone());
        found.push((Vec::new(), trivial));
        let mut cursor = 0;
        while cursor < found.len() {
            let (gens, sub) = found[cursor].clone();
            cursor += 1;
            for &g in &self.codes {
                if sub.contains_code(g) {
                    continue;
                }
                let bigger = closure_codes(self.modulus, self.rank, &sub.codes, &[g], u64::MAX)?;
                if seen.insert(bigger.codes.clone()) {
                    if found.len() as u64 >= max_count {
                        return Err(Error::ResourceCap {
                            what: "subgroup count",
                            limit: max_count,
                        });
                    }
                    let mut g2 = gens.clone();
                    g2.push(g);
                    found.push((g2, bigger));
                }
            }
        }
        found.sort_by(|a, b| (a.1.len(), &a.1.codes).cmp(&(b.1.len(), &b.1.codes)));
        Ok(found
            .into_iter()
            .map(|(gens, sub)| {
                let gens = gens
                    .into_iter()
                    .map(|c| GroupElement::new(decode(c, self.modulus, self.rank)))
                    .collect();
                (gens, sub)
            })
            .collect())
    }
}

pub(crate) fn encode(coords: &[u32], modulus: u32) -> u64 {
    coords
        .iter()
        .fold(0u64, |acc, &c| acc * modulus as u64 + c as u64)
}

pub(crate) fn decode(mut code: u64, modulus: u32, rank: usize) -> Vec<u32> {
    let n = modulus as u64;
    let mut out = vec![0u32; rank];
    for slot in out.iter_mut().rev() {
        *slot = (code % n) as u32;
        code /= n;
    }
    out
}

fn add_codes(a: u64, b: u64, modulus: u32, rank: usize) -> u64 {
    let n = modulus as u64;
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..rank {
        out += ((a % n + b % n) % n) * place;
        a /= n;
        b /= n;
        place *= n;
    }
    out
}

/// Closure of `start` (assumed to be a subgroup) together with `gens`.
fn closure_codes(
    modulus: u32,
    rank: usize,
    start: &[u64],
    gens: &[u64],
    max_size: u64,
) -> Result<DeckGroup> {
    let mut set: BTreeSet<u64> = start.iter().copied().collect();
    let mut frontier: Vec<u64> = start.to_vec();
    let all_gens: Vec<u64> = start
        .iter()
        .chain(gens)
        .copied()
        .filter(|&g| g != 0)
        .collect();
    while let Some(x) = frontier.pop() {
        for &g in &all_gens {
            let y = add_codes(x, g, modulus, rank);
            if set.insert(y) {
                if set.len() as u64 > max_size {
                    return Err(Error::ResourceCap {
                        what: "group size",
                        limit: max_size,
                    });
                }
                frontier.push(y);
            }
        }
    }
    Ok(DeckGroup {
        modulus,
        rank,
        codes: set.into_iter().collect(),
    })
}
