use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use prym_atlas::cover_data::DatumFile;
use prym_atlas::hasse_witt::{self, OrdinarySearch};
use prym_atlas::hodge;
use prym_atlas::report::{ClassificationReport, VerificationReport};
use prym_atlas::shimura;
use prym_atlas::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ResourceCap { .. } | Error::Consistency(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn element(coords: &[i64], modulus: u32) -> prym_atlas::GroupElement {
    prym_atlas::GroupElement::from_signed(coords, modulus)
}

/// Cover matrix over `Z/N`; entries are reduced mod `N`.
#[pyclass(frozen, module = "prym_atlas")]
struct CoverMatrix {
    inner: prym_atlas::CoverMatrix,
}

#[pymethods]
impl CoverMatrix {
    #[new]
    fn new(modulus: u32, rows: Vec<Vec<i64>>) -> PyResult<Self> {
        let (inner, _) = prym_atlas::CoverMatrix::from_signed(modulus, &rows).map_err(to_py)?;
        Ok(CoverMatrix { inner })
    }

    #[getter]
    fn modulus(&self) -> u32 {
        self.inner.modulus()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<u32>> {
        self.inner.rows().to_vec()
    }

    /// `(rule, detail)` for every violated rule; empty when valid.
    fn violations(&self) -> Vec<(String, String)> {
        self.inner
            .validate()
            .violations
            .into_iter()
            .map(|v| (v.rule, v.detail))
            .collect()
    }

    fn is_irreducible(&self) -> bool {
        self.inner.is_irreducible()
    }

    fn genus(&self) -> PyResult<u64> {
        hodge::genus_total(&self.inner).map_err(to_py)
    }

    fn characters(&self) -> PyResult<Vec<Vec<u32>>> {
        let chars = hodge::characters(&self.inner).map_err(to_py)?;
        Ok(chars.into_iter().map(|c| c.coords().to_vec()).collect())
    }

    fn eigen_dim(&self, character: Vec<i64>) -> u32 {
        hodge::eigen_dim(&self.inner, &element(&character, self.inner.modulus()))
    }

    fn __repr__(&self) -> String {
        format!(
            "CoverMatrix({}, {:?})",
            self.inner.modulus(),
            self.inner.rows()
        )
    }
}

/// A cover together with a subgroup `H`. Without `h` the full deck group
/// is used.
#[pyclass(frozen, module = "prym_atlas")]
struct PrymDatum {
    inner: prym_atlas::PrymDatum,
}

#[pymethods]
impl PrymDatum {
    #[new]
    #[pyo3(signature = (matrix, h=None, allow_trivial_h=false))]
    fn new(
        matrix: &CoverMatrix,
        h: Option<Vec<Vec<i64>>>,
        allow_trivial_h: bool,
    ) -> PyResult<Self> {
        let m = matrix.inner.clone();
        let inner = match h {
            None => prym_atlas::PrymDatum::full(m),
            Some(gens) => {
                let n = m.modulus();
                let gens = gens.iter().map(|g| element(g, n)).collect();
                prym_atlas::PrymDatum::new(m, gens, allow_trivial_h)
            }
        }
        .map_err(to_py)?;
        Ok(PrymDatum { inner })
    }

    /// Reads the `{"N", "rows", "H"}` file format.
    #[staticmethod]
    #[pyo3(signature = (text, allow_trivial_h=false))]
    fn from_json(text: &str, allow_trivial_h: bool) -> PyResult<Self> {
        let loaded = DatumFile::parse(text)
            .and_then(|f| f.load())
            .map_err(to_py)?;
        let inner = prym_atlas::PrymDatum::new(loaded.matrix, loaded.generators, allow_trivial_h)
            .map_err(to_py)?;
        Ok(PrymDatum { inner })
    }

    #[getter]
    fn matrix(&self) -> CoverMatrix {
        CoverMatrix {
            inner: self.inner.matrix().clone(),
        }
    }

    fn to_json(&self) -> String {
        self.inner.to_file().to_json()
    }

    fn h_order(&self) -> usize {
        self.inner.h_elements().len()
    }

    fn quotient_genus(&self) -> PyResult<u64> {
        hodge::quotient_genus(&self.inner).map_err(to_py)
    }

    fn prym_dimension(&self) -> PyResult<u64> {
        hodge::prym_dimension(&self.inner).map_err(to_py)
    }

    fn polarization(&self) -> PyResult<Vec<u64>> {
        hodge::polarization_type(&self.inner).map_err(to_py)
    }

    /// `(a, b)` signature of the `n`-eigenspace of the anti-invariant part.
    fn eigenspace_type(&self, character: Vec<i64>) -> (u32, u32) {
        let t = hodge::eigenspace_type(
            &self.inner,
            &element(&character, self.inner.matrix().modulus()),
        );
        (t.a, t.b)
    }

    /// Speciality verdict, e.g. `"SPECIAL_PEL"`.
    fn verdict(&self) -> PyResult<String> {
        Ok(shimura::classify(&self.inner)
            .map_err(to_py)?
            .verdict
            .to_string())
    }

    fn classification_json(&self) -> PyResult<String> {
        let v = shimura::classify(&self.inner).map_err(to_py)?;
        Ok(serde_json::to_string(&v).expect("verdict serializes"))
    }

    /// Full report as JSON; `prime` adds the ordinary-point search.
    #[pyo3(signature = (prime=None, ext_cap=2, max_points=1_000_000))]
    fn report_json(&self, prime: Option<u64>, ext_cap: u32, max_points: u64) -> PyResult<String> {
        let mut report = ClassificationReport::compute(&self.inner).map_err(to_py)?;
        if let Some(p) = prime {
            hasse_witt::check_prime(p, self.inner.matrix().modulus()).map_err(to_py)?;
            report = report
                .with_char_p(&self.inner, p, ext_cap, max_points)
                .map_err(to_py)?;
        }
        Ok(serde_json::to_string(&report).expect("report serializes"))
    }

    #[pyo3(signature = (prime=None, ext_cap=2, max_points=1_000_000))]
    fn verify_json(&self, prime: Option<u64>, ext_cap: u32, max_points: u64) -> PyResult<String> {
        let n = self.inner.matrix().modulus();
        let p = match prime {
            Some(p) => p,
            None => hasse_witt::choose_prime(n, n as u64 + 1).map_err(to_py)?,
        };
        let report =
            VerificationReport::compute(&self.inner, p, ext_cap, max_points).map_err(to_py)?;
        Ok(serde_json::to_string(&report).expect("report serializes"))
    }

    /// First Prym-ordinary point as a list of field-element coefficient
    /// vectors, or `None`.
    #[pyo3(signature = (prime, max_ext_degree=2, max_points=1_000_000))]
    fn find_ordinary_point(
        &self,
        prime: u64,
        max_ext_degree: u32,
        max_points: u64,
    ) -> PyResult<Option<(u32, Vec<Vec<u64>>)>> {
        match hasse_witt::find_ordinary_point(&self.inner, prime, max_ext_degree, max_points)
            .map_err(to_py)?
        {
            OrdinarySearch::Found { degree, point, .. } => Ok(Some((
                degree,
                point.into_iter().map(|e| e.coeffs().to_vec()).collect(),
            ))),
            OrdinarySearch::NotFound { .. } => Ok(None),
        }
    }
}

/// Smallest prime `p >= lower` with `p = 1 mod N`.
#[pyfunction]
#[pyo3(signature = (modulus, lower=None))]
fn choose_prime(modulus: u32, lower: Option<u64>) -> PyResult<u64> {
    hasse_witt::choose_prime(modulus, lower.unwrap_or(modulus as u64 + 1)).map_err(to_py)
}

/// Hasse-Witt entry `(i, j)` of character `n` as `(exponents, coefficient)`
/// pairs in lexicographic order.
#[pyfunction]
fn hw_entry(
    matrix: &CoverMatrix,
    character: Vec<i64>,
    i: u32,
    j: u32,
    prime: u64,
) -> PyResult<Vec<(Vec<u32>, u64)>> {
    let n = element(&character, matrix.inner.modulus());
    let poly = hasse_witt::hw_entry(&matrix.inner, &n, i, j, prime).map_err(to_py)?;
    Ok(poly.terms().iter().map(|(e, c)| (e.to_vec(), *c)).collect())
}

/// The text dump of every entry of the character's block.
#[pyfunction]
fn hw_dump(matrix: &CoverMatrix, character: Vec<i64>, prime: u64) -> PyResult<String> {
    let n = element(&character, matrix.inner.modulus());
    let block = hasse_witt::hw_matrix(&matrix.inner, &n, prime).map_err(to_py)?;
    let mut out = String::new();
    for i in 1..=block.d {
        for j in 1..=block.d {
            out.push_str(&hasse_witt::dump_entry(block.entry(i, j), &n, i, j));
        }
    }
    Ok(out)
}

#[pyfunction]
fn product_identity_holds(
    matrix: &CoverMatrix,
    a: Vec<i64>,
    a2: Vec<i64>,
    prime: u64,
) -> PyResult<bool> {
    let n = matrix.inner.modulus();
    hasse_witt::product_identity_holds(&matrix.inner, &element(&a, n), &element(&a2, n), prime)
        .map_err(to_py)
}

#[pyfunction]
fn scaled_row_identity_holds(
    matrix: &CoverMatrix,
    n: Vec<i64>,
    n2: Vec<i64>,
    prime: u64,
) -> PyResult<bool> {
    let modulus = matrix.inner.modulus();
    hasse_witt::scaled_row_identity_holds(
        &matrix.inner,
        &element(&n, modulus),
        &element(&n2, modulus),
        prime,
    )
    .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "prym_atlas")]
fn prym_atlas_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CoverMatrix>()?;
    m.add_class::<PrymDatum>()?;
    m.add_function(wrap_pyfunction!(choose_prime, m)?)?;
    m.add_function(wrap_pyfunction!(hw_entry, m)?)?;
    m.add_function(wrap_pyfunction!(hw_dump, m)?)?;
    m.add_function(wrap_pyfunction!(product_identity_holds, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_row_identity_holds, m)?)?;
    Ok(())
}
