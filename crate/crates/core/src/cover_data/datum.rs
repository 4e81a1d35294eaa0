use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::group::{DeckGroup, DEFAULT_MAX_GROUP_SIZE};
use super::matrix::{CoverMatrix, GroupElement};

/// A cover matrix together with a subgroup `H` of its deck group `G`.
///
/// The branching epimorphism is implicit: the `j`-th standard loop maps to
/// column `j`. `H` is normal automatically since `G` is abelian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrymDatum {
    matrix: CoverMatrix,
    group: DeckGroup,
    h_generators: Vec<GroupElement>,
    h: DeckGroup,
}

impl PrymDatum {
    /// Closes `generators` under addition. Each generator must lie in `G`.
    /// The trivial subgroup is rejected unless `allow_trivial` is set.
    pub fn new(
        matrix: CoverMatrix,
        generators: Vec<GroupElement>,
        allow_trivial: bool,
    ) -> Result<PrymDatum> {
        let group = matrix.group_elements()?;
        PrymDatum::with_group(matrix, group, generators, allow_trivial)
    }

    pub(crate) fn with_group(
        matrix: CoverMatrix,
        group: DeckGroup,
        generators: Vec<GroupElement>,
        allow_trivial: bool,
    ) -> Result<PrymDatum> {
        matrix.ensure_valid()?;
        let m = matrix.num_rows();
        let n = matrix.modulus();
        for g in &generators {
            g.check_shape(m, n)?;
            if !group.contains(g) {
                return Err(Error::NotInGroup(g.coords().to_vec()));
            }
        }
        let h = DeckGroup::closure(n, m, &generators, DEFAULT_MAX_GROUP_SIZE)?;
        if h.is_trivial() && !allow_trivial {
            return Err(Error::TrivialSubgroup);
        }
        Ok(PrymDatum {
            matrix,
            group,
            h_generators: generators,
            h,
        })
    }

    /// The same cover with a different subgroup `H`.
    pub fn with_subgroup(
        &self,
        generators: Vec<GroupElement>,
        allow_trivial: bool,
    ) -> Result<PrymDatum> {
        PrymDatum::with_group(
            self.matrix.clone(),
            self.group.clone(),
            generators,
            allow_trivial,
        )
    }

    /// `H = G`, generated by a greedy subset of the columns. The quotient
    /// curve is then the projective line.
    pub fn full(matrix: CoverMatrix) -> Result<PrymDatum> {
        matrix.ensure_valid()?;
        let group = matrix.group_elements()?;
        let gens = group.greedy_generators(&matrix.columns());
        PrymDatum::with_group(matrix, group, gens, false)
    }

    pub fn matrix(&self) -> &CoverMatrix {
        &self.matrix
    }

    /// The deck group `G` (column span).
    pub fn deck_group(&self) -> &DeckGroup {
        &self.group
    }

    pub fn h_generators(&self) -> &[GroupElement] {
        &self.h_generators
    }

    pub fn h_elements(&self) -> &DeckGroup {
        &self.h
    }

    /// `|G / H|`.
    pub fn quotient_order(&self) -> usize {
        self.group.len() / self.h.len()
    }

    /// Order of the image of `g` in `G / H`: `min{k >= 1 : k g in H}`.
    pub fn order_in_quotient(&self, g: &GroupElement) -> Result<u32> {
        if !self.group.contains(g) {
            return Err(Error::NotInGroup(g.coords().to_vec()));
        }
        Ok(self.h.order_modulo(g))
    }

    /// True iff the character `n` is trivial on `H`: `<n, h> = 0 mod N`
    /// for every `h` in `H` (checking the generators suffices).
    pub fn is_h_invariant(&self, n: &GroupElement) -> bool {
        let modulus = self.matrix.modulus();
        self.h_generators.iter().all(|h| n.dot(h, modulus) == 0)
    }

    /// The external file representation.
    pub fn to_file(&self) -> DatumFile {
        DatumFile {
            modulus: self.matrix.modulus() as i64,
            rows: self
                .matrix
                .rows()
                .iter()
                .map(|r| r.iter().map(|&x| x as i64).collect())
                .collect(),
            h: self
                .h_generators
                .iter()
                .map(|g| g.coords().iter().map(|&x| x as i64).collect())
                .collect(),
        }
    }
}

/// Closes `generators` into a Prym datum over `matrix`.
pub fn subgroup_closure(
    matrix: &CoverMatrix,
    generators: &[GroupElement],
    allow_trivial: bool,
) -> Result<PrymDatum> {
    PrymDatum::new(matrix.clone(), generators.to_vec(), allow_trivial)
}

/// Datum file layout: `{"N": .., "rows": [[..]], "H": [[..]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    #[serde(rename = "N")]
    pub modulus: i64,
    pub rows: Vec<Vec<i64>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<i64>>,
}

/// A parsed datum file, before validation.
#[derive(Clone, Debug)]
pub struct LoadedDatum {
    pub matrix: CoverMatrix,
    pub generators: Vec<GroupElement>,
    pub warnings: Vec<String>,
}

impl DatumFile {
    pub fn parse(json: &str) -> Result<DatumFile> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("datum file serializes")
    }

    /// Reduces every integer mod `N`, collecting a warning for each list
    /// that contained out-of-range values.
    pub fn load(&self) -> Result<LoadedDatum> {
        if self.modulus < 2 || self.modulus > u32::MAX as i64 {
            return Err(Error::Shape(format!(
                "N must be >= 2, got {}",
                self.modulus
            )));
        }
        let modulus = self.modulus as u32;
        let mut warnings = Vec::new();
        let (matrix, reduced) = CoverMatrix::from_signed(modulus, &self.rows)?;
        if reduced {
            warnings.push(format!("matrix entries reduced mod {modulus}"));
        }
        let mut generators = Vec::new();
        for g in &self.h {
            if g.len() != matrix.num_rows() {
                return Err(Error::Shape(format!(
                    "H generator {:?} has length {}, expected {}",
                    g,
                    g.len(),
                    matrix.num_rows()
                )));
            }
            if g.iter().any(|&x| x < 0 || x >= self.modulus) {
                warnings.push(format!("H generator {g:?} reduced mod {modulus}"));
            }
            generators.push(GroupElement::from_signed(g, modulus));
        }
        Ok(LoadedDatum {
            matrix,
            generators,
            warnings,
        })
    }
}
