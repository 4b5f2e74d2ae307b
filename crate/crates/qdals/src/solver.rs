//! End-to-end solver pipelines.
//!
//! Four methods, named by Hamiltonian scheme and step operator:
//!
//! | method | Hamiltonians      | per-step operator                    |
//! |--------|-------------------|--------------------------------------|
//! | `OHS`  | original, doubled | exact unitaries `exp(-iTh(1-s)H0)`, `exp(-iThs H1)` |
//! | `NHS`  | new, problem dim  | same unitaries on the new pair       |
//! | `OBE`  | original, doubled | first-order `I - iH(s)` + renormalize |
//! | `NBE`  | new, problem dim  | first-order `I - iH(s)` + renormalize |
//!
//! The first-order methods can run at matrix level (apply `I - iH` and
//! renormalize; deterministic reference) or at circuit level (synthesize the
//! improved block encoding of `I - iH` each step, simulate it, and
//! post-select the ancillas). Both backends realize the same map on the
//! state; the circuit backend additionally tracks the post-selection
//! success probability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blockenc::build_improved;
use crate::error::{Error, Result};
use crate::hamiltonian::{
    first_order_step, interpolate, new_pair, original_pair, HamiltonianPair, Schedule, Scheme,
};
use crate::linalg::{apply_exp_i, herm_eig, ComplexVector};
use crate::qlsp::{exact_solution, fidelity, QlspInstance};
use crate::separator::{gap, separate};
use crate::statevec::{post_select_ancillas, StateVector};

/// Default separation order for the new-scheme methods.
pub const DEFAULT_SEPARATION_ORDER: usize = 8;
/// Norm floor below which a first-order step is treated as annihilating.
const STEP_NORM_FLOOR: f64 = 1e-14;
/// Norm floor for the doubled-space solution extraction.
const EXTRACT_NORM_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ohs,
    Nhs,
    Obe,
    Nbe,
}

impl Method {
    pub fn scheme(self) -> Scheme {
        match self {
            Method::Ohs | Method::Obe => Scheme::Original,
            Method::Nhs | Method::Nbe => Scheme::New,
        }
    }

    pub fn is_block_encoding(self) -> bool {
        matches!(self, Method::Obe | Method::Nbe)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Ohs => "O-HS",
            Method::Nhs => "N-HS",
            Method::Obe => "O-BE",
            Method::Nbe => "N-BE",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ohs" | "o-hs" => Ok(Method::Ohs),
            "nhs" | "n-hs" => Ok(Method::Nhs),
            "obe" | "o-be" => Ok(Method::Obe),
            "nbe" | "n-be" | "bees" => Ok(Method::Nbe),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let short = match self {
            Method::Ohs => "ohs",
            Method::Nhs => "nhs",
            Method::Obe => "obe",
            Method::Nbe => "nbe",
        };
        write!(f, "{short}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Apply `I - iH` as a dense matrix and renormalize.
    MatrixLevel,
    /// Synthesize and simulate the block-encoding circuit each step.
    CircuitLevel,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrix" | "matrixlevel" => Ok(Backend::MatrixLevel),
            "circuit" | "circuitlevel" => Ok(Backend::CircuitLevel),
            other => Err(Error::Parse(format!("unknown backend '{other}'"))),
        }
    }
}

/// Configuration of one solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Number of evolution steps `M`.
    pub steps: usize,
    /// Eigenvalue-separation order `D` (new-scheme methods; 0 disables).
    pub separation_order: usize,
    /// Total evolution time `T` for the Hamiltonian-simulation methods.
    /// `None` selects `T = M`, making each step a unit-time exponential.
    pub evolution_time: Option<f64>,
    pub backend: Backend,
    /// Split each step into the two factor exponentials (the standard form)
    /// instead of exponentiating the interpolated Hamiltonian directly.
    pub trotter_split: bool,
    /// Record the fidelity after every step.
    pub record_trace: bool,
}

impl SolverConfig {
    pub fn new(method: Method, steps: usize) -> Self {
        let separation_order = match method.scheme() {
            Scheme::New => DEFAULT_SEPARATION_ORDER,
            Scheme::Original => 0,
        };
        Self {
            method,
            steps,
            separation_order,
            evolution_time: None,
            backend: Backend::MatrixLevel,
            trotter_split: true,
            record_trace: false,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.separation_order = order;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_evolution_time(mut self, t: f64) -> Self {
        self.evolution_time = Some(t);
        self
    }

    pub fn with_trotter_split(mut self, split: bool) -> Self {
        self.trotter_split = split;
        self
    }

    pub fn with_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be >= 1".into()));
        }
        if self.backend == Backend::CircuitLevel && !self.method.is_block_encoding() {
            return Err(Error::InvalidConfig(
                "the circuit backend applies to the block-encoding methods only".into(),
            ));
        }
        if let Some(t) = self.evolution_time {
            if t <= 0.0 || !t.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "evolution time must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Result of one solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    /// Normalized main-register state after the evolution (for the original
    /// scheme, the renormalized first-N block).
    #[serde(serialize_with = "serialize_vector")]
    pub final_state: ComplexVector,
    /// `|<final_state | x>|` against the classical solution.
    pub fidelity: f64,
    /// Per-step fidelities when tracing was requested.
    pub fidelity_trace: Option<Vec<f64>>,
    /// Product of per-step post-selection probabilities (block-encoding
    /// methods). Underflows to 0 for long runs; see `success_prob_log2`.
    pub cumulative_success_prob: Option<f64>,
    /// Base-2 logarithm of the cumulative success probability.
    pub success_prob_log2: Option<f64>,
    pub steps_used: usize,
    pub config: SolverConfig,
    /// Diagnostic notes (spectral-gap warnings, failure causes).
    pub annotations: Vec<String>,
    /// True when the evolution annihilated the state; fidelity is 0.
    pub failed: bool,
}

fn serialize_vector<S: serde::Serializer>(
    v: &ComplexVector,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(v.dim()))?;
    for a in v.iter() {
        seq.serialize_element(&[a.re, a.im])?;
    }
    seq.end()
}

/// Dispatch on the configured method.
pub fn solve(p: &QlspInstance, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    match cfg.method {
        Method::Ohs | Method::Nhs => solve_hs(p, cfg),
        Method::Obe | Method::Nbe => solve_be(p, cfg),
    }
}

/// Build the scheme's pair (separating the final Hamiltonian for the new
/// scheme), the initial state, and any gap annotation.
fn prepare(
    p: &QlspInstance,
    cfg: &SolverConfig,
) -> Result<(HamiltonianPair, ComplexVector, Vec<String>)> {
    let mut annotations = Vec::new();
    match cfg.method.scheme() {
        Scheme::Original => {
            let pair = original_pair(p)?;
            // |b, 0_N>
            let init = p.rhs().padded(2 * p.dim());
            Ok((pair, init, annotations))
        }
        Scheme::New => {
            let mut pair = new_pair(p)?;
            let top_gap = gap(&pair.h1)?;
            if top_gap < 1e-8 {
                annotations.push(format!(
                    "top eigenvalue gap {top_gap:.3e} is nearly degenerate; adiabatic following may fail"
                ));
            }
            if cfg.separation_order > 0 {
                let (separated, _) = separate(&pair.h1, cfg.separation_order)?;
                pair.h1 = separated;
            }
            let init = p.rhs().clone();
            Ok((pair, init, annotations))
        }
    }
}

/// Extract the main-register solution candidate from the evolved state.
fn extract_candidate(method: Method, state: &ComplexVector, n: usize) -> Result<ComplexVector> {
    match method.scheme() {
        Scheme::New => state.normalized(),
        Scheme::Original => {
            let top = state.prefix(n);
            if top.norm() < EXTRACT_NORM_FLOOR {
                return Err(Error::ZeroProjection);
            }
            top.normalized()
        }
    }
}

/// Hamiltonian-simulation evolution (exact unitary steps).
pub fn solve_hs(p: &QlspInstance, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    if !matches!(cfg.method, Method::Ohs | Method::Nhs) {
        return Err(Error::InvalidConfig(
            "solve_hs expects a Hamiltonian-simulation method".into(),
        ));
    }
    let (pair, mut state, annotations) = prepare(p, cfg)?;
    let x = exact_solution(p)?.x;
    let schedule = Schedule::new(cfg.steps)?;
    let t_total = cfg.evolution_time.unwrap_or(cfg.steps as f64);
    let th = t_total * schedule.step_size();

    let mut trace = cfg.record_trace.then(Vec::new);
    if cfg.trotter_split {
        let eig0 = herm_eig(&pair.h0)?;
        let eig1 = herm_eig(&pair.h1)?;
        for s in schedule.points() {
            // rightmost factor acts first
            state = apply_exp_i(&eig1, th * s, &state)?;
            state = apply_exp_i(&eig0, th * (1.0 - s), &state)?;
            if let Some(tr) = trace.as_mut() {
                tr.push(step_fidelity(cfg.method, &state, p.dim(), &x)?);
            }
        }
    } else {
        for s in schedule.points() {
            let hs = interpolate(&pair, s)?;
            let eig = herm_eig(&hs)?;
            state = apply_exp_i(&eig, th, &state)?;
            if let Some(tr) = trace.as_mut() {
                tr.push(step_fidelity(cfg.method, &state, p.dim(), &x)?);
            }
        }
    }

    let final_state = extract_candidate(cfg.method, &state, p.dim())?;
    let f = fidelity(&final_state, &x)?;
    Ok(SolveReport {
        final_state,
        fidelity: f,
        fidelity_trace: trace,
        cumulative_success_prob: None,
        success_prob_log2: None,
        steps_used: cfg.steps,
        config: cfg.clone(),
        annotations,
        failed: false,
    })
}

fn step_fidelity(
    method: Method,
    state: &ComplexVector,
    n: usize,
    x: &ComplexVector,
) -> Result<f64> {
    match extract_candidate(method, state, n) {
        Ok(candidate) => fidelity(&candidate, x),
        Err(Error::ZeroProjection) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Largest entry magnitude of `I - i[(1-s)H0 + sH1]` without materializing it.
fn step_operator_scale(pair: &HamiltonianPair, s: f64) -> f64 {
    let n = pair.dim();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let h = pair.h0.get(i, j) * (1.0 - s) + pair.h1.get(i, j) * s;
            let delta = if i == j { Complex64::ONE } else { Complex64::ZERO };
            worst = worst.max((delta - Complex64::i() * h).norm());
        }
    }
    worst
}

/// Block-encoding evolution (first-order non-unitary steps).
///
/// A step that annihilates the state is reported as a failed solve with
/// fidelity 0 rather than an error.
pub fn solve_be(p: &QlspInstance, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    if !cfg.method.is_block_encoding() {
        return Err(Error::InvalidConfig(
            "solve_be expects a block-encoding method".into(),
        ));
    }
    let (pair, mut state, mut annotations) = prepare(p, cfg)?;
    let x = exact_solution(p)?.x;
    let schedule = Schedule::new(cfg.steps)?;
    let dim = pair.dim();
    let n_block = dim.trailing_zeros() as usize;

    let mut trace = cfg.record_trace.then(Vec::new);
    let mut log2_success = 0.0f64;
    let mut failed = false;

    match cfg.backend {
        Backend::MatrixLevel => {
            // step as two fixed matvecs: w = v - i[(1-s) H0 v + s H1 v]
            let mut h0v = ComplexVector::zeros(dim);
            let mut h1v = ComplexVector::zeros(dim);
            for s in schedule.points() {
                pair.h0.matvec_into(&state, &mut h0v);
                pair.h1.matvec_into(&state, &mut h1v);
                let mut next = ComplexVector::zeros(dim);
                for k in 0..dim {
                    let hk = h0v.get(k) * (1.0 - s) + h1v.get(k) * s;
                    next.set(k, state.get(k) - Complex64::i() * hk);
                }
                let norm = next.norm();
                if norm < STEP_NORM_FLOOR {
                    failed = true;
                    annotations.push(format!("step at s = {s} annihilated the state"));
                    break;
                }
                let scale = step_operator_scale(&pair, s);
                let denom = scale * (1usize << n_block) as f64;
                log2_success += 2.0 * (norm / denom).log2();
                state = next.scale(Complex64::new(1.0 / norm, 0.0));
                if let Some(tr) = trace.as_mut() {
                    tr.push(step_fidelity(cfg.method, &state, p.dim(), &x)?);
                }
            }
        }
        Backend::CircuitLevel => {
            for s in schedule.points() {
                let hs = interpolate(&pair, s)?;
                let hexp = first_order_step(&hs);
                let circuit = build_improved(&hexp)?;
                let mut sv = StateVector::embed(&state, circuit.n_anc)?;
                sv.run_circuit(&circuit)?;
                match post_select_ancillas(&sv, circuit.n_anc) {
                    Ok(sel) => {
                        log2_success += sel.success_prob.log2();
                        state = sel.kept_state.to_vector();
                    }
                    Err(Error::ZeroProjection) => {
                        failed = true;
                        annotations.push(format!("post-selection at s = {s} annihilated the state"));
                        break;
                    }
                    Err(e) => return Err(e),
                }
                if let Some(tr) = trace.as_mut() {
                    tr.push(step_fidelity(cfg.method, &state, p.dim(), &x)?);
                }
            }
        }
    }

    if failed {
        return Ok(SolveReport {
            final_state: state,
            fidelity: 0.0,
            fidelity_trace: trace,
            cumulative_success_prob: Some(0.0),
            success_prob_log2: Some(f64::NEG_INFINITY),
            steps_used: cfg.steps,
            config: cfg.clone(),
            annotations,
            failed: true,
        });
    }

    let (final_state, fidelity_value, extraction_failed) =
        match extract_candidate(cfg.method, &state, p.dim()) {
            Ok(candidate) => {
                let f = fidelity(&candidate, &x)?;
                (candidate, f, false)
            }
            Err(Error::ZeroProjection) => {
                annotations.push("solution block has vanishing norm".into());
                (state.clone(), 0.0, true)
            }
            Err(e) => return Err(e),
        };

    Ok(SolveReport {
        final_state,
        fidelity: fidelity_value,
        fidelity_trace: trace,
        cumulative_success_prob: Some(exp2_underflowing(log2_success)),
        success_prob_log2: Some(log2_success),
        steps_used: cfg.steps,
        config: cfg.clone(),
        annotations,
        failed: extraction_failed,
    })
}

/// `2^x`, flushing to 0 below the smallest positive double.
fn exp2_underflowing(x: f64) -> f64 {
    if x < -1074.0 {
        0.0
    } else {
        x.exp2()
    }
}

/// Outcome of a steps-to-target search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepsOutcome {
    /// Smallest step count found by the bracketed search that reaches the
    /// target fidelity.
    Converged(usize),
    /// No tested step count up to the cap reached the target.
    Failed,
}

impl StepsOutcome {
    pub fn steps(&self) -> Option<usize> {
        match self {
            StepsOutcome::Converged(m) => Some(*m),
            StepsOutcome::Failed => None,
        }
    }
}

impl std::fmt::Display for StepsOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepsOutcome::Converged(m) => write!(f, "{m}"),
            StepsOutcome::Failed => write!(f, "Failed"),
        }
    }
}

/// Search for the smallest step count reaching fidelity `f_tar`.
///
/// Doubling until the target is bracketed, then bisection on the bracket.
/// The fidelity is not guaranteed monotone in `M`, so the result is the
/// smallest step count *found by this search*, not a proven global minimum.
pub fn steps_to_fidelity(
    p: &QlspInstance,
    cfg: &SolverConfig,
    f_tar: f64,
    m_cap: usize,
) -> Result<StepsOutcome> {
    if !(0.0..1.0).contains(&f_tar) {
        return Err(Error::OutOfRange(format!(
            "target fidelity must lie in [0, 1), got {f_tar}"
        )));
    }
    if m_cap < 1 {
        return Err(Error::OutOfRange("step cap must be >= 1".into()));
    }
    let eval = |m: usize| -> Result<f64> { solve(p, &cfg.clone().with_steps(m)).map(|r| r.fidelity) };

    if eval(1)? >= f_tar {
        return Ok(StepsOutcome::Converged(1));
    }
    let mut lo = 1usize;
    let mut m = 2usize;
    loop {
        let probe = m.min(m_cap);
        if eval(probe)? >= f_tar {
            let mut hi = probe;
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if eval(mid)? >= f_tar {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(StepsOutcome::Converged(hi));
        }
        if probe == m_cap {
            return Ok(StepsOutcome::Failed);
        }
        lo = probe;
        m = m.saturating_mul(2);
    }
}
