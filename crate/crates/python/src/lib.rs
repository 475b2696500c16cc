//! Python bindings. Concepts and examples are addressed by their string ids;
//! teaching sets are lists of example ids labelled by the target.

use std::time::Duration;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use pac_teach::generators::{self, ErrorModel, GammaSource};
use pac_teach::heuristics::{self, Criterion, StopRule};
use pac_teach::learner::{self, LearnerKind, SimulationConfig, TieRule};
use pac_teach::optimize::{approx_optimize_with, probable_optimize_with, size_optimize_with};
use pac_teach::{io, Budget, Error, SimilarityMode, SolveOptions, TeachingSet};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> PyResult<T> {
    s.parse().map_err(|_| PyValueError::new_err(format!("unknown {what} `{s}`")))
}

fn mode(s: &str) -> PyResult<SimilarityMode> {
    parse(s, "mode")
}

#[pyclass(module = "pac_teach", frozen)]
struct Instance {
    inner: pac_teach::Instance,
}

impl Instance {
    fn concept(&self, id: &str) -> PyResult<usize> {
        self.inner
            .concept_index(id)
            .ok_or_else(|| PyValueError::new_err(format!("unknown concept `{id}`")))
    }

    fn set(&self, ids: Vec<String>) -> PyResult<TeachingSet> {
        TeachingSet::from_ids(&self.inner, &ids).map_err(to_py)
    }
}

fn wrap(res: pac_teach::Result<pac_teach::Instance>) -> PyResult<Instance> {
    res.map(|inner| Instance { inner }).map_err(to_py)
}

#[pymethods]
impl Instance {
    #[new]
    fn new(
        examples: Vec<String>,
        concepts: Vec<String>,
        consistency: Vec<Vec<bool>>,
        gamma: Vec<Vec<f64>>,
        target: &str,
    ) -> PyResult<Self> {
        let t = concepts
            .iter()
            .position(|c| c == target)
            .ok_or_else(|| PyValueError::new_err(format!("unknown target `{target}`")))?;
        wrap(pac_teach::Instance::new(examples, concepts, consistency, gamma, t))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        wrap(io::parse_instance(text.as_bytes()))
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        wrap(io::read_instance(path))
    }

    /// Concepts `[k divides x]` over `1..=x_max`. Errors are zero unless
    /// `gamma_max` is given, in which case they are uniform on `[0, gamma_max)`.
    #[staticmethod]
    #[pyo3(signature = (ks, x_max, gamma_max=None, seed=0))]
    fn multiples(ks: Vec<u64>, x_max: u64, gamma_max: Option<f64>, seed: u64) -> PyResult<Self> {
        let gamma = match gamma_max {
            None => GammaSource::Zero,
            Some(max) => GammaSource::Uniform { max, seed },
        };
        wrap(generators::gen_multiples(&ks, x_max, gamma))
    }

    /// Random circles and points; `scale` switches on distance-proportional errors.
    #[staticmethod]
    #[pyo3(signature = (concepts, examples, scale=None, seed=0))]
    fn circles(concepts: usize, examples: usize, scale: Option<f64>, seed: u64) -> PyResult<Self> {
        let error = scale.map_or(ErrorModel::Zero, |scale| ErrorModel::DistanceProportional { scale });
        wrap(generators::gen_circles(concepts, examples, error, seed))
    }

    #[staticmethod]
    #[pyo3(signature = (concepts, examples, gamma_max=0.3, density=0.5, seed=0))]
    fn random(concepts: usize, examples: usize, gamma_max: f64, density: f64, seed: u64) -> PyResult<Self> {
        wrap(generators::gen_random(concepts, examples, gamma_max, density, seed))
    }

    fn to_json(&self) -> String {
        io::serialize_instance(&self.inner)
    }

    fn with_target(&self, target: &str) -> PyResult<Self> {
        let t = self.concept(target)?;
        wrap(self.inner.clone().with_target(t))
    }

    #[getter]
    fn examples(&self) -> Vec<String> {
        self.inner.examples().to_vec()
    }

    #[getter]
    fn concepts(&self) -> Vec<String> {
        self.inner.concepts().to_vec()
    }

    #[getter]
    fn target(&self) -> String {
        self.inner.concepts()[self.inner.target()].clone()
    }

    fn __len__(&self) -> usize {
        self.inner.num_examples()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(concepts={}, examples={}, target={:?})",
            self.inner.num_concepts(),
            self.inner.num_examples(),
            self.target()
        )
    }
}

#[pyclass(module = "pac_teach", frozen, get_all)]
struct SolveResult {
    /// `(example id, label)` pairs in ascending example order.
    teaching_set: Vec<(String, bool)>,
    achieved_p: f64,
    achieved_q: f64,
    size: usize,
    feasible: bool,
    budget_exhausted: bool,
    subsets_evaluated: u64,
    good: Vec<String>,
}

#[pymethods]
impl SolveResult {
    fn __repr__(&self) -> String {
        format!(
            "SolveResult(teaching_set={:?}, achieved_p={}, achieved_q={}, feasible={})",
            self.teaching_set, self.achieved_p, self.achieved_q, self.feasible
        )
    }
}

fn solve_result(inst: &pac_teach::Instance, r: pac_teach::SolveResult) -> SolveResult {
    SolveResult {
        teaching_set: r
            .teaching_set
            .items()
            .iter()
            .map(|it| (inst.examples()[it.example].clone(), it.label))
            .collect(),
        achieved_p: r.achieved_p,
        achieved_q: r.achieved_q,
        size: r.size,
        feasible: r.feasible,
        budget_exhausted: r.budget_exhausted,
        subsets_evaluated: r.subsets_evaluated,
        good: r.partition.good().into_iter().map(|c| inst.concepts()[c].clone()).collect(),
    }
}

fn options(threads: Option<usize>, max_subsets: Option<u64>, max_time: Option<f64>, exact_q: bool) -> SolveOptions {
    SolveOptions {
        threads,
        budget: Budget {
            max_subsets,
            max_time: max_time.map(Duration::from_secs_f64),
        },
        exact_q,
    }
}

#[pyfunction]
fn sim(inst: &Instance, c: &str, other: &str) -> PyResult<f64> {
    pac_teach::sim(&inst.inner, inst.concept(c)?, inst.concept(other)?).map_err(to_py)
}

#[pyfunction]
fn sim_l(inst: &Instance, c: &str, reference: &str) -> PyResult<f64> {
    pac_teach::sim_l(&inst.inner, inst.concept(c)?, inst.concept(reference)?).map_err(to_py)
}

/// Ids of the concepts similar enough to the target at threshold `q`.
#[pyfunction]
#[pyo3(signature = (inst, q, mode="id"))]
fn good_concepts(inst: &Instance, q: f64, mode: &str) -> PyResult<Vec<String>> {
    let part = pac_teach::good_partition(&inst.inner, q, self::mode(mode)?).map_err(to_py)?;
    Ok(part.good().into_iter().map(|c| inst.inner.concepts()[c].clone()).collect())
}

#[pyfunction]
fn count_pmf(inst: &Instance, concept: &str, teaching_set: Vec<String>) -> PyResult<Vec<f64>> {
    let set = inst.set(teaching_set)?;
    pac_teach::count_pmf(&inst.inner, inst.concept(concept)?, &set)
        .map(|d| d.into_pmf())
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (inst, teaching_set, q, mode="id"))]
fn success_probability(inst: &Instance, teaching_set: Vec<String>, q: f64, mode: &str) -> PyResult<f64> {
    let set = inst.set(teaching_set)?;
    let part = pac_teach::good_partition(&inst.inner, q, self::mode(mode)?).map_err(to_py)?;
    pac_teach::success_probability(&inst.inner, &set, &part).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (inst, q, k, mode="id", threads=None, max_subsets=None, max_time=None))]
#[allow(clippy::too_many_arguments)]
fn probable_optimize(
    py: Python<'_>,
    inst: &Instance,
    q: f64,
    k: usize,
    mode: &str,
    threads: Option<usize>,
    max_subsets: Option<u64>,
    max_time: Option<f64>,
) -> PyResult<SolveResult> {
    let mode = self::mode(mode)?;
    let opts = options(threads, max_subsets, max_time, false);
    let r = py.detach(|| probable_optimize_with(&inst.inner, q, k, mode, &opts)).map_err(to_py)?;
    Ok(solve_result(&inst.inner, r))
}

#[pyfunction]
#[pyo3(signature = (inst, p, k, d=2, mode="id", exact_q=false, threads=None, max_subsets=None, max_time=None))]
#[allow(clippy::too_many_arguments)]
fn approx_optimize(
    py: Python<'_>,
    inst: &Instance,
    p: f64,
    k: usize,
    d: u32,
    mode: &str,
    exact_q: bool,
    threads: Option<usize>,
    max_subsets: Option<u64>,
    max_time: Option<f64>,
) -> PyResult<SolveResult> {
    let mode = self::mode(mode)?;
    let opts = options(threads, max_subsets, max_time, exact_q);
    let r = py.detach(|| approx_optimize_with(&inst.inner, p, k, d, mode, &opts)).map_err(to_py)?;
    Ok(solve_result(&inst.inner, r))
}

#[pyfunction]
#[pyo3(signature = (inst, q, p, mode="id", threads=None, max_subsets=None, max_time=None))]
#[allow(clippy::too_many_arguments)]
fn size_optimize(
    py: Python<'_>,
    inst: &Instance,
    q: f64,
    p: f64,
    mode: &str,
    threads: Option<usize>,
    max_subsets: Option<u64>,
    max_time: Option<f64>,
) -> PyResult<SolveResult> {
    let mode = self::mode(mode)?;
    let opts = options(threads, max_subsets, max_time, false);
    let r = py.detach(|| size_optimize_with(&inst.inner, q, p, mode, &opts)).map_err(to_py)?;
    Ok(solve_result(&inst.inner, r))
}

/// Per-example `(id, uniqueness, homogeneity, combined)` rows.
#[pyfunction]
#[pyo3(signature = (inst, alpha=heuristics::DEFAULT_ALPHA))]
fn heuristic_scores(inst: &Instance, alpha: f64) -> PyResult<Vec<(String, f64, f64, f64)>> {
    let scores = heuristics::scores(&inst.inner, alpha).map_err(to_py)?;
    Ok(scores
        .into_iter()
        .map(|s| (inst.inner.examples()[s.example].clone(), s.uniqueness, s.homogeneity, s.combined))
        .collect())
}

/// Greedy teaching set. Pass `size` to take that many examples, or `p` to
/// stop once the success probability at `(q, mode)` reaches it. Returns the
/// chosen ids in order and whether the stop rule was met.
#[pyfunction]
#[pyo3(signature = (inst, criterion, size=None, p=None, q=1.0, mode="id", alpha=heuristics::DEFAULT_ALPHA))]
fn greedy(
    inst: &Instance,
    criterion: &str,
    size: Option<usize>,
    p: Option<f64>,
    q: f64,
    mode: &str,
    alpha: f64,
) -> PyResult<(Vec<String>, bool)> {
    let criterion: Criterion = parse(criterion, "criterion")?;
    let stop = match (size, p) {
        (Some(k), None) => StopRule::Size(k),
        (None, Some(p)) => StopRule::Probability { p, q, mode: self::mode(mode)? },
        _ => return Err(PyValueError::new_err("give exactly one of `size` and `p`")),
    };
    let r = heuristics::greedy_teaching_set(&inst.inner, criterion, alpha, stop).map_err(to_py)?;
    let ids = r.order.iter().map(|&x| inst.inner.examples()[x].clone()).collect();
    Ok((ids, r.satisfied))
}

/// Empirical success rate and its standard error.
#[pyfunction]
#[pyo3(signature = (inst, teaching_set, q=1.0, trials=100_000, seed=0, mode="id", learner="prudent", tie="worst"))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    inst: &Instance,
    teaching_set: Vec<String>,
    q: f64,
    trials: u64,
    seed: u64,
    mode: &str,
    learner: &str,
    tie: &str,
) -> PyResult<(f64, f64)> {
    let set = inst.set(teaching_set)?;
    let part = pac_teach::good_partition(&inst.inner, q, self::mode(mode)?).map_err(to_py)?;
    let config = SimulationConfig {
        learner: parse::<LearnerKind>(learner, "learner")?,
        tie: parse::<TieRule>(tie, "tie rule")?,
        trials,
        seed,
    };
    let est = py.detach(|| learner::simulate(&inst.inner, &set, &part, &config)).map_err(to_py)?;
    Ok((est.estimate, est.std_error))
}

#[pymodule(name = "pac_teach")]
fn pac_teach_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<SolveResult>()?;
    m.add_function(wrap_pyfunction!(sim, m)?)?;
    m.add_function(wrap_pyfunction!(sim_l, m)?)?;
    m.add_function(wrap_pyfunction!(good_concepts, m)?)?;
    m.add_function(wrap_pyfunction!(count_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(success_probability, m)?)?;
    m.add_function(wrap_pyfunction!(probable_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(approx_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(size_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(heuristic_scores, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
