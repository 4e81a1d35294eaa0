use std::collections::VecDeque;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::datum::PrymDatum;
use super::group::{decode, DEFAULT_MAX_GROUP_SIZE};
use super::matrix::{CoverMatrix, GroupElement};

/// Which subgroups `H` to attach to each enumerated matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupChoice {
    /// `H = G`.
    #[default]
    FullGroup,
    /// Every nontrivial subgroup (and the trivial one when allowed).
    AllSubgroups,
    /// Subgroups of index 2.
    IndexTwo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationFilters {
    pub irreducible: bool,
    pub subgroups: SubgroupChoice,
    /// Emit one representative per orbit of simultaneous column
    /// permutations (columns in nondecreasing order).
    pub dedupe_permutations: bool,
    pub allow_trivial_subgroup: bool,
    pub max_count: u64,
    pub max_group_size: u64,
}

impl Default for EnumerationFilters {
    fn default() -> Self {
        EnumerationFilters {
            irreducible: true,
            subgroups: SubgroupChoice::FullGroup,
            dedupe_permutations: false,
            allow_trivial_subgroup: false,
            max_count: 1_000_000,
            max_group_size: DEFAULT_MAX_GROUP_SIZE,
        }
    }
}

/// Every valid `m x s` matrix over `Z/N` (nonzero columns summing to zero)
/// in lexicographic order of the column sequence.
pub fn enumerate_matrices(modulus: u32, rows: usize, cols: usize, dedupe: bool) -> MatrixIter {
    MatrixIter::new(modulus, rows, cols, dedupe)
}

pub struct MatrixIter {
    modulus: u32,
    rows: usize,
    dedupe: bool,
    max_code: u64,
    prefix: Vec<u64>,
    state: IterState,
}

#[derive(PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl MatrixIter {
    fn new(modulus: u32, rows: usize, cols: usize, dedupe: bool) -> MatrixIter {
        let max_code = (modulus as u64).checked_pow(rows as u32).map(|x| x - 1);
        let usable = modulus >= 2 && rows >= 1 && cols >= 3 && max_code.is_some();
        MatrixIter {
            modulus,
            rows,
            dedupe,
            max_code: max_code.unwrap_or(0),
            prefix: vec![1; cols.saturating_sub(1)],
            state: if usable {
                IterState::Fresh
            } else {
                IterState::Done
            },
        }
    }

    fn advance(&mut self) -> bool {
        match self.state {
            IterState::Done => return false,
            IterState::Fresh => {
                self.state = IterState::Running;
                return true;
            }
            IterState::Running => {}
        }
        let len = self.prefix.len();
        let mut k = len;
        while k > 0 {
            k -= 1;
            if self.prefix[k] < self.max_code {
                self.prefix[k] += 1;
                let fill = if self.dedupe { self.prefix[k] } else { 1 };
                for slot in &mut self.prefix[k + 1..] {
                    *slot = fill;
                }
                return true;
            }
        }
        self.state = IterState::Done;
        false
    }
}

impl Iterator for MatrixIter {
    type Item = CoverMatrix;

    fn next(&mut self) -> Option<CoverMatrix> {
        let n = self.modulus;
        while self.advance() {
            let cols: Vec<Vec<u32>> = self
                .prefix
                .iter()
                .map(|&c| decode(c, n, self.rows))
                .collect();
            let mut last = vec![0u32; self.rows];
            for col in &cols {
                for (acc, &x) in last.iter_mut().zip(col) {
                    *acc = (*acc + x) % n;
                }
            }
            for x in last.iter_mut() {
                *x = (n - *x) % n;
            }
            if last.iter().all(|&x| x == 0) {
                continue;
            }
            if self.dedupe && cols.last().is_some_and(|prev| last < *prev) {
                continue;
            }
            let columns: Vec<GroupElement> = cols
                .into_iter()
                .chain(std::iter::once(last))
                .map(GroupElement::new)
                .collect();
            return Some(
                CoverMatrix::from_columns(n, &columns).expect("enumerated shape is valid"),
            );
        }
        None
    }
}

/// Enumerates Prym data over all `(N, m, s)` in the given ranges, in
/// lexicographic order of `(N, m, s, columns, H)`.
///
/// Items are `Err` only for resource caps; after the first error the
/// stream ends.
pub fn enumerate_data(
    moduli: RangeInclusive<u32>,
    rows: RangeInclusive<usize>,
    cols: RangeInclusive<usize>,
    filters: EnumerationFilters,
) -> DatumStream {
    let mut shapes = VecDeque::new();
    for n in moduli {
        for m in rows.clone() {
            for s in cols.clone() {
                shapes.push_back((n, m, s));
            }
        }
    }
    DatumStream {
        shapes,
        current: None,
        pending: VecDeque::new(),
        filters,
        emitted: 0,
        finished: false,
    }
}

pub struct DatumStream {
    shapes: VecDeque<(u32, usize, usize)>,
    current: Option<MatrixIter>,
    pending: VecDeque<PrymDatum>,
    filters: EnumerationFilters,
    emitted: u64,
    finished: bool,
}

impl DatumStream {
    fn next_matrix(&mut self) -> Option<CoverMatrix> {
        loop {
            if let Some(it) = self.current.as_mut() {
                if let Some(m) = it.next() {
                    return Some(m);
                }
            }
            let (n, m, s) = self.shapes.pop_front()?;
            self.current = Some(enumerate_matrices(
                n,
                m,
                s,
                self.filters.dedupe_permutations,
            ));
        }
    }

    fn data_for(&self, matrix: CoverMatrix) -> Result<Vec<PrymDatum>> {
        let group = matrix.group_elements_capped(self.filters.max_group_size)?;
        let allow_trivial = self.filters.allow_trivial_subgroup;
        match self.filters.subgroups {
            SubgroupChoice::FullGroup => {
                let gens = group.greedy_generators(&matrix.columns());
                Ok(vec![PrymDatum::with_group(matrix, group, gens, false)?])
            }
            SubgroupChoice::AllSubgroups | SubgroupChoice::IndexTwo => {
                let subs = group.subgroups(self.filters.max_count)?;
                let want_index_two = self.filters.subgroups == SubgroupChoice::IndexTwo;
                subs.into_iter()
                    .filter(|(_, h)| {
                        if want_index_two {
                            h.len() * 2 == group.len()
                        } else {
                            !h.is_trivial() || allow_trivial
                        }
                    })
                    .map(|(gens, _)| {
                        PrymDatum::with_group(matrix.clone(), group.clone(), gens, allow_trivial)
                    })
                    .collect()
            }
        }
    }
}

impl Iterator for DatumStream {
    type Item = Result<PrymDatum>;

    fn next(&mut self) -> Option<Result<PrymDatum>> {
        if self.finished {
            return None;
        }
        loop {
            if let Some(d) = self.pending.pop_front() {
                if self.emitted >= self.filters.max_count {
                    self.finished = true;
                    return Some(Err(Error::ResourceCap {
                        what: "enumeration count",
                        limit: self.filters.max_count,
                    }));
                }
                self.emitted += 1;
                return Some(Ok(d));
            }
            let Some(matrix) = self.next_matrix() else {
                self.finished = true;
                return None;
            };
            if self.filters.irreducible && !matrix.is_irreducible() {
                continue;
            }
            match self.data_for(matrix) {
                Ok(data) => self.pending.extend(data),
                Err(e) => {
                    self.finished = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_irreducible() -> EnumerationFilters {
        EnumerationFilters::default()
    }

    #[test]
    fn binary_four_points() {
        let data: Vec<_> = enumerate_data(2..=2, 1..=1, 4..=4, full_irreducible())
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].matrix().rows(), &[vec![1, 1, 1, 1]]);
    }

    #[test]
    fn ternary_four_points_matches_brute_force() {
        // rows in {1,2}^4 with sum divisible by 3
        let mut expected = Vec::new();
        for code in 0..16u32 {
            let row: Vec<u32> = (0..4).map(|k| 1 + ((code >> (3 - k)) & 1)).collect();
            if row.iter().sum::<u32>() % 3 == 0 {
                expected.push(row);
            }
        }
        let got: Vec<Vec<u32>> = enumerate_data(3..=3, 1..=1, 4..=4, full_irreducible())
            .map(|d| d.unwrap().matrix().rows()[0].clone())
            .collect();
        assert_eq!(got, expected);
        assert!(got.contains(&vec![1, 1, 2, 2]));
    }

    #[test]
    fn empty_ranges() {
        #[allow(clippy::reversed_empty_ranges)]
        let n = enumerate_data(3..=2, 1..=1, 4..=4, full_irreducible()).count();
        assert_eq!(n, 0);
        assert_eq!(
            enumerate_data(2..=3, 1..=1, 1..=2, full_irreducible()).count(),
            0
        );
    }

    #[test]
    fn dedupe_keeps_sorted_representatives() {
        let all: Vec<_> = enumerate_matrices(3, 1, 4, false).collect();
        let dedup: Vec<_> = enumerate_matrices(3, 1, 4, true).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(dedup.len(), 1);
        assert_eq!(dedup[0].rows(), &[vec![1, 1, 2, 2]]);
    }

    #[test]
    fn count_cap() {
        let filters = EnumerationFilters {
            max_count: 2,
            ..full_irreducible()
        };
        let items: Vec<_> = enumerate_data(3..=3, 1..=1, 4..=4, filters).collect();
        assert_eq!(items.len(), 3);
        assert!(items[..2].iter().all(|r| r.is_ok()));
        assert!(matches!(items[2], Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn subgroup_choices() {
        let base = EnumerationFilters {
            irreducible: true,
            ..Default::default()
        };
        let all = enumerate_data(
            2..=2,
            2..=2,
            4..=4,
            EnumerationFilters {
                subgroups: SubgroupChoice::AllSubgroups,
                ..base.clone()
            },
        )
        .collect::<Result<Vec<_>>>()
        .unwrap();
        let index_two = enumerate_data(
            2..=2,
            2..=2,
            4..=4,
            EnumerationFilters {
                subgroups: SubgroupChoice::IndexTwo,
                ..base
            },
        )
        .collect::<Result<Vec<_>>>()
        .unwrap();
        // each Klein four group contributes 3 order-2 subgroups plus itself
        assert_eq!(all.len() % 4, 0);
        assert_eq!(index_two.len() * 4, all.len() * 3);
        assert!(index_two.iter().all(|d| d.h_elements().len() == 2));
    }
}
