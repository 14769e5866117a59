use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use ::magnus_kerint as core;
use core::{
    Alphabet, CrossValidation, FiltrationKind, GroupDescriptor, GroupHom, IndexSequence,
    KerIntMode, RingSpec, SquareMatrix, TruncatedSeries, UnipotentMatrix,
};

create_exception!(magnus_kerint, BudgetExceeded, PyException);

fn to_py(e: core::Error) -> PyErr {
    if e.is_budget() {
        BudgetExceeded::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?
        .call_method1("loads", (value.to_string(),))
}

fn alphabet_from(gens: &Bound<'_, PyAny>) -> PyResult<Alphabet> {
    if let Ok(k) = gens.extract::<usize>() {
        return Ok(Alphabet::standard(k));
    }
    if let Ok(spec) = gens.extract::<String>() {
        return Alphabet::from_spec(&spec).map_err(to_py);
    }
    let names: Vec<String> = gens.extract()?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Alphabet::new(&refs).map_err(to_py)
}

fn kind_from(kind: &str, p: Option<u64>) -> PyResult<FiltrationKind> {
    match p {
        Some(_) => FiltrationKind::from_name(kind, p),
        None => kind.parse(),
    }
    .map_err(to_py)
}

fn ring_from(ring: &str) -> PyResult<RingSpec> {
    ring.parse().map_err(to_py)
}

/// Generator names of a free group.
#[pyclass(
    name = "Alphabet",
    module = "magnus_kerint",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyAlphabet(Alphabet);

#[pymethods]
impl PyAlphabet {
    /// `gens` is a count, a comma-separated string, or a list of names.
    #[new]
    fn new(gens: &Bound<'_, PyAny>) -> PyResult<Self> {
        alphabet_from(gens).map(PyAlphabet)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    fn parse(&self, expr: &str) -> PyResult<PyWord> {
        let word = self.0.parse(expr).map_err(to_py)?;
        Ok(PyWord {
            alphabet: self.0.clone(),
            word,
        })
    }

    fn __repr__(&self) -> String {
        format!("Alphabet({:?})", self.0.names().join(","))
    }
}

/// A reduced word in a free group.
#[pyclass(
    name = "Word",
    module = "magnus_kerint",
    frozen,
    skip_from_py_object,
    eq,
    hash
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord {
    alphabet: Alphabet,
    word: core::Word,
}

impl PyWord {
    fn wrap(&self, word: core::Word) -> Self {
        PyWord {
            alphabet: self.alphabet.clone(),
            word,
        }
    }
}

#[pymethods]
impl PyWord {
    fn __len__(&self) -> usize {
        self.word.len()
    }

    fn __str__(&self) -> String {
        self.alphabet.format(&self.word)
    }

    fn __repr__(&self) -> String {
        format!("Word({:?})", self.alphabet.format(&self.word))
    }

    fn __mul__(&self, other: &PyWord) -> PyResult<Self> {
        Ok(self.wrap(self.word.multiply(&other.word).map_err(to_py)?))
    }

    fn __pow__(&self, exp: i64, _modulo: Option<i64>) -> Self {
        self.wrap(self.word.pow(exp))
    }

    fn inverse(&self) -> Self {
        self.wrap(self.word.invert())
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    fn commutator(&self, other: &PyWord) -> PyResult<Self> {
        Ok(self.wrap(core::Word::commutator(&self.word, &other.word).map_err(to_py)?))
    }

    fn is_identity(&self) -> bool {
        self.word.is_identity()
    }

    fn expand(&self, ring: &str, degree: usize) -> PyResult<PySeries> {
        let series = core::magnus_expand(&self.word, ring_from(ring)?, degree).map_err(to_py)?;
        Ok(PySeries {
            alphabet: self.alphabet.clone(),
            series,
        })
    }
}

/// A truncated Magnus series.
#[pyclass(
    name = "Series",
    module = "magnus_kerint",
    frozen,
    skip_from_py_object,
    eq
)]
#[derive(Clone, PartialEq)]
struct PySeries {
    alphabet: Alphabet,
    series: TruncatedSeries,
}

#[pymethods]
impl PySeries {
    /// Coefficient of a dot-separated monomial such as `"a.b"`; `""` is the constant term.
    fn coefficient(&self, monomial: &str) -> PyResult<String> {
        let seq = IndexSequence::parse(&self.alphabet, monomial).map_err(to_py)?;
        Ok(self.series.coefficient(&seq).to_string())
    }

    /// Nonzero coefficients keyed by monomial.
    fn terms(&self) -> Vec<(String, String)> {
        self.series
            .terms()
            .map(|(seq, c)| (seq.format(&self.alphabet), c.to_string()))
            .collect()
    }

    #[getter]
    fn bound(&self) -> usize {
        self.series.bound()
    }

    #[getter]
    fn ring(&self) -> String {
        self.series.ring().to_string()
    }

    fn min_positive_degree(&self) -> PyResult<Option<usize>> {
        self.series.min_positive_degree().map_err(to_py)
    }

    fn inverse(&self) -> PyResult<Self> {
        let series = self.series.invert_unit().map_err(to_py)?;
        Ok(PySeries {
            alphabet: self.alphabet.clone(),
            series,
        })
    }

    fn __mul__(&self, other: &PySeries) -> PyResult<Self> {
        let series = self.series.mul(&other.series).map_err(to_py)?;
        Ok(PySeries {
            alphabet: self.alphabet.clone(),
            series,
        })
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.series.to_json(&self.alphabet))
    }

    fn __str__(&self) -> String {
        self.series.format(&self.alphabet)
    }

    fn __repr__(&self) -> String {
        format!("Series({:?})", self.series.format(&self.alphabet))
    }
}

/// A square matrix over a ring.
#[pyclass(name = "Matrix", module = "magnus_kerint", frozen, from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyMatrix(SquareMatrix);

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(ring: &str, rows: Vec<Vec<i64>>) -> PyResult<Self> {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        SquareMatrix::from_i64_rows(ring_from(ring)?, &refs)
            .map(PyMatrix)
            .map_err(to_py)
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0
            .rows()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn __mul__(&self, other: &PyMatrix) -> PyResult<Self> {
        self.0.mul(&other.0).map(PyMatrix).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A unipotent matrix group: `U_n(R)` or `G(n, p)`.
#[pyclass(name = "Group", module = "magnus_kerint", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroup(GroupDescriptor);

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn unipotent(ring: &str, n: usize) -> PyResult<Self> {
        GroupDescriptor::full(ring_from(ring)?, n)
            .map(PyGroup)
            .map_err(to_py)
    }

    #[staticmethod]
    fn gnp(n: usize, p: u64) -> PyResult<Self> {
        GroupDescriptor::gnp(n, p).map(PyGroup).map_err(to_py)
    }

    fn order(&self) -> PyResult<u128> {
        self.0.order().map_err(to_py)
    }

    fn contains(&self, m: &PyMatrix) -> bool {
        self.0.contains(&m.0)
    }

    #[pyo3(signature = (cap = core::DEFAULT_CAP))]
    fn elements(&self, cap: u128) -> PyResult<Vec<PyMatrix>> {
        Ok(self
            .0
            .enumerate(cap)
            .map_err(to_py)?
            .map(|m| PyMatrix(m.into_matrix()))
            .collect())
    }

    /// Image of `word` under the hom sending generator `i` to `images[i]`.
    fn hom_eval(&self, images: Vec<PyMatrix>, word: &PyWord) -> PyResult<PyMatrix> {
        let images = images
            .into_iter()
            .map(|m| UnipotentMatrix::new(m.0))
            .collect::<core::Result<Vec<_>>>()
            .map_err(to_py)?;
        let phi = GroupHom::new(self.0.clone(), images).map_err(to_py)?;
        let value = core::hom_eval(&phi, &word.word).map_err(to_py)?;
        Ok(PyMatrix(value.into_matrix()))
    }

    /// Term sizes of a filtration series; `kind` defaults to the group's natural one.
    #[pyo3(signature = (kind = None, cap = core::DEFAULT_CAP))]
    fn series_sizes(&self, kind: Option<&str>, cap: u128) -> PyResult<Vec<usize>> {
        let kind = match kind {
            Some(k) => kind_from(k, None)?,
            None => default_kind(&self.0),
        };
        let report = core::series_report(&self.0, kind, None, cap).map_err(to_py)?;
        Ok(report.term_sizes)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.0.to_string())
    }
}

fn default_kind(desc: &GroupDescriptor) -> FiltrationKind {
    match desc {
        GroupDescriptor::FullUnipotent {
            ring: RingSpec::PrimeField(p),
            ..
        } => FiltrationKind::Zassenhaus(*p),
        GroupDescriptor::IdealUnipotent(chain) => match chain.d() {
            core::RingElement::Residue(p) if *p > 1 => FiltrationKind::LowerPCentral(*p),
            _ => FiltrationKind::LowerCentral,
        },
        _ => FiltrationKind::LowerCentral,
    }
}

/// Magnus expansion of `word` over `ring`, truncated below `degree`.
#[pyfunction]
#[pyo3(signature = (word, degree, ring = "Z", gens = None))]
fn expand(
    word: &str,
    degree: usize,
    ring: &str,
    gens: Option<&Bound<'_, PyAny>>,
) -> PyResult<PySeries> {
    let alphabet = match gens {
        Some(g) => alphabet_from(g)?,
        None => Alphabet::standard(2),
    };
    PyAlphabet(alphabet).parse(word)?.expand(ring, degree)
}

fn parse_with(word: &str, gens: Option<&Bound<'_, PyAny>>) -> PyResult<PyWord> {
    let alphabet = match gens {
        Some(g) => alphabet_from(g)?,
        None => Alphabet::standard(2),
    };
    PyAlphabet(alphabet).parse(word)
}

/// Membership of `word` in the `n`-th term of a filtration (`"lcs"`, `"zass"`, `"lpc"`).
#[pyfunction]
#[pyo3(signature = (word, kind, n, p = None, gens = None))]
fn is_member(
    word: &str,
    kind: &str,
    n: usize,
    p: Option<u64>,
    gens: Option<&Bound<'_, PyAny>>,
) -> PyResult<bool> {
    let w = parse_with(word, gens)?;
    core::filtration_member(&w.word, kind_from(kind, p)?, n).map_err(to_py)
}

/// The first violating coefficient as a dict, or `None` for members.
#[pyfunction]
#[pyo3(signature = (word, kind, n, p = None, gens = None))]
fn violation<'py>(
    py: Python<'py>,
    word: &str,
    kind: &str,
    n: usize,
    p: Option<u64>,
    gens: Option<&Bound<'_, PyAny>>,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let w = parse_with(word, gens)?;
    let Some(v) = core::membership_violation(&w.word, kind_from(kind, p)?, n).map_err(to_py)?
    else {
        return Ok(None);
    };
    let value = serde_json::json!({
        "index": v.index.format(&w.alphabet),
        "coefficient": v.coefficient.to_string(),
        "image": v.image.to_string(),
        "required": v.required,
    });
    json_to_py(py, &value).map(Some)
}

/// Whether every hom into the matching unipotent group kills `word`.
#[pyfunction]
#[pyo3(signature = (word, kind, n, p = None, mode = "witness", gens = None, cap = core::DEFAULT_CAP))]
fn kerint(
    word: &str,
    kind: &str,
    n: usize,
    p: Option<u64>,
    mode: &str,
    gens: Option<&Bound<'_, PyAny>>,
    cap: u128,
) -> PyResult<bool> {
    let w = parse_with(word, gens)?;
    let kind = kind_from(kind, p)?;
    match mode.parse::<KerIntMode>().map_err(to_py)? {
        KerIntMode::Witness => {
            let chain = kind.chain(n).map_err(to_py)?;
            core::kerint_witness(&w.word, &chain).map_err(to_py)
        }
        KerIntMode::Exhaustive => {
            let config =
                CrossValidation::new(kind, n, w.alphabet.rank(), 0, KerIntMode::Exhaustive);
            let desc = config.exhaustive_target().map_err(to_py)?;
            core::kerint_finite(&w.word, &desc, cap).map_err(to_py)
        }
    }
}

/// Compares the Magnus criterion with the kernel intersection on all words up to `max_len`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (kind, n, p = None, rank = 2, max_len = 6, mode = "exhaustive", cap = core::DEFAULT_CAP))]
fn cross_validate<'py>(
    py: Python<'py>,
    kind: &str,
    n: usize,
    p: Option<u64>,
    rank: usize,
    max_len: usize,
    mode: &str,
    cap: u128,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = mode.parse::<KerIntMode>().map_err(to_py)?;
    let mut config = CrossValidation::new(kind_from(kind, p)?, n, rank, max_len, mode);
    config.cap = cap;
    let mut report = core::cross_validate(&config).map_err(to_py)?;
    report.elapsed_ms = None;
    json_to_py(py, &serde_json::to_value(&report).expect("serializable"))
}

/// Samples `depth`-fold commutators in `U_n(Z)`; true iff all are the identity.
#[pyfunction]
#[pyo3(signature = (n, depth = None, trials = 500, entry_bound = 9, seed = 0))]
fn nilpotency_probe(
    n: usize,
    depth: Option<usize>,
    trials: usize,
    entry_bound: i64,
    seed: u64,
) -> PyResult<bool> {
    let desc = GroupDescriptor::full(RingSpec::Integers, n).map_err(to_py)?;
    core::nilpotency_probe(&desc, depth.unwrap_or(n), trials, entry_bound, seed).map_err(to_py)
}

#[pymodule]
fn magnus_kerint(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlphabet>()?;
    m.add_class::<PyWord>()?;
    m.add_class::<PySeries>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyGroup>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(is_member, m)?)?;
    m.add_function(wrap_pyfunction!(violation, m)?)?;
    m.add_function(wrap_pyfunction!(kerint, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(nilpotency_probe, m)?)?;
    Ok(())
}
