//! Interrogation simulator: Lüders projection on density matrices, outcome
//! statistics, and information accounting for questions and for the system.
//!
//! A system starts maximally mixed; interrogating a question projects the
//! state onto the eigenspace of the sampled (or forced) outcome and
//! renormalizes. Information of a question is a function of its outcome
//! distribution, pinned to 0 at the uniform distribution and 1 at a point
//! mass; information of the system is `N - log_p(rank of the state's
//! support)`, which is integer-valued along projective histories and
//! reproduces the sum over relatively independent determining questions on
//! every worked scenario.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Felt, FieldError, Prime};
use crate::gates::GateTable;
use crate::pauli::{
    composite_operator, eigenprojector, normalized_operator, CMatrix, PauliError, PauliLabel,
    EPS,
};
use crate::structure::{Question, QuestionSet, StructureError};

/// Tolerance for recognizing forced/derived outcomes as certain.
const CERTAIN: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("no determining question set for {0} bodies (supported: 1 or 2)")]
    UnsupportedBodies(usize),
    #[error("body index {body} out of range for {bodies} bodies")]
    BodyOutOfRange { body: usize, bodies: usize },
    #[error("forced outcome {outcome} has probability {probability:.3e}, below threshold")]
    ImprobableOutcome { outcome: u64, probability: f64 },
    #[error("state does not match the replayed history")]
    HistoryMismatch,
    #[error("record time indices must be strictly increasing")]
    NonMonotonicTime,
    #[error("questions are not a complementary pair: {0}")]
    NotComplementaryPair(String),
    #[error("questions are not compatible (operators do not commute): {0}")]
    NotCompatiblePair(String),
    #[error("step {step}: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<SimError>,
    },
    #[error("unknown built-in scenario {0:?} (expected single5, composite5, or bell2)")]
    UnknownScenario(String),
    #[error("malformed scenario file: {0}")]
    BadScenarioFile(String),
}

/// A density matrix for `N` bodies of dimension `p` each.
#[derive(Debug, Clone)]
pub struct SystemState {
    modulus: Prime,
    bodies: usize,
    rho: CMatrix,
}

impl SystemState {
    /// The maximally mixed state `I / p^N` — the uninformative prior under
    /// which every determining question is uniform.
    pub fn maximally_mixed(p: Prime, bodies: usize) -> SystemState {
        let dim = (p.get() as usize).pow(bodies as u32);
        SystemState {
            modulus: p,
            bodies,
            rho: CMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// Wrap an explicit density matrix, validating shape, hermiticity,
    /// unit trace, and positivity within tolerance.
    pub fn from_density(p: Prime, bodies: usize, rho: CMatrix) -> Result<SystemState, SimError> {
        let state = SystemState {
            modulus: p,
            bodies,
            rho,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let dim = (self.modulus.get() as usize).pow(self.bodies as u32);
        if self.rho.rows() != dim || self.rho.cols() != dim {
            return Err(SimError::InvalidState(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                self.rho.rows(),
                self.rho.cols()
            )));
        }
        if !self.rho.is_hermitian(EPS) {
            return Err(SimError::InvalidState("not Hermitian".into()));
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > EPS || tr.im.abs() > EPS {
            return Err(SimError::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = self
            .rho
            .hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -EPS {
            return Err(SimError::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn bodies(&self) -> usize {
        self.bodies
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// `<v|rho|v>`, the overlap with a pure state.
    pub fn overlap_with(&self, v: &[Complex64]) -> f64 {
        let rv = self.rho.apply(v);
        crate::pauli::inner(v, &rv).re
    }

    /// Number of eigenvalues above `EPS / p^N` — the dimension of the
    /// state's support.
    pub fn support_rank(&self) -> usize {
        let threshold = EPS / self.dim() as f64;
        self.rho
            .hermitian_eigenvalues()
            .iter()
            .filter(|&&v| v > threshold)
            .count()
    }
}

/// Probabilities of the `p` outcomes of one question.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, outcome: u64) -> f64 {
        self.probs[outcome as usize]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let target = 1.0 / self.probs.len() as f64;
        self.probs.iter().all(|&p| (p - target).abs() < tol)
    }

    /// `Some(c)` when outcome `c` is certain within `tol`.
    pub fn point_mass(&self, tol: f64) -> Option<u64> {
        self.probs
            .iter()
            .position(|&p| p > 1.0 - tol)
            .map(|i| i as u64)
    }
}

/// The operator realizing a question on an `N`-body system: local labels
/// are padded with identity factors, composite questions become
/// `A (x) B^k`. All factors are phase-normalized, so outcome `c` always
/// means eigenvalue `w^c`.
pub fn question_operator(q: &Question, bodies: usize) -> Result<CMatrix, SimError> {
    let p = q.modulus();
    let single = p.get() as usize;
    match q {
        Question::Local { body, label } => {
            if *body >= bodies {
                return Err(SimError::BodyOutOfRange {
                    body: *body,
                    bodies,
                });
            }
            let op = normalized_operator(label);
            let mut acc = if *body == 0 {
                op.clone()
            } else {
                CMatrix::identity(single)
            };
            for slot in 1..bodies {
                let factor = if slot == *body {
                    op.clone()
                } else {
                    CMatrix::identity(single)
                };
                acc = acc.kron(&factor);
            }
            Ok(acc)
        }
        Question::Composite(c) => {
            if bodies != 2 {
                return Err(SimError::UnsupportedBodies(bodies));
            }
            Ok(composite_operator(c))
        }
    }
}

/// Born-rule outcome distribution: `probs[c] = tr(P_c rho)`, clamped into
/// `[0, 1]` against rounding.
pub fn outcome_distribution(
    s: &SystemState,
    q: &Question,
) -> Result<OutcomeDistribution, SimError> {
    let p = q.modulus();
    let op = question_operator(q, s.bodies)?;
    let probs = crate::pauli::eigenprojectors(&op, p)?
        .iter()
        .map(|proj| proj.mul(&s.rho).trace().re.clamp(0.0, 1.0))
        .collect();
    Ok(OutcomeDistribution { probs })
}

/// Interrogate a question: sample an outcome from the Born distribution
/// (or take the forced one, which must have probability above threshold)
/// and apply the Lüders update `rho -> P rho P / tr(P rho)`.
pub fn interrogate<R: Rng>(
    s: &SystemState,
    q: &Question,
    forced: Option<Felt>,
    rng: &mut R,
) -> Result<(SystemState, Felt, f64), SimError> {
    let p = q.modulus();
    let dist = outcome_distribution(s, q)?;
    let outcome = match forced {
        Some(c) => {
            if dist.get(c.value()) <= EPS {
                return Err(SimError::ImprobableOutcome {
                    outcome: c.value(),
                    probability: dist.get(c.value()),
                });
            }
            c
        }
        None => {
            let draw: f64 = rng.gen();
            let mut acc = 0.0;
            let mut picked = p.get() - 1;
            for (i, &prob) in dist.probs().iter().enumerate() {
                acc += prob;
                if draw < acc {
                    picked = i as u64;
                    break;
                }
            }
            p.felt(picked)
        }
    };
    let op = question_operator(q, s.bodies)?;
    let proj = eigenprojector(&op, outcome)?;
    let prob = dist.get(outcome.value());
    let unnormalized = proj.mul(&s.rho).mul(&proj);
    let norm = unnormalized.trace().re;
    let rho = unnormalized.scale(Complex64::new(1.0 / norm, 0.0));
    Ok((
        SystemState {
            modulus: s.modulus,
            bodies: s.bodies,
            rho,
        },
        outcome,
        prob,
    ))
}

/// One interrogation event: "question, outcome, time".
#[derive(Debug, Clone, PartialEq)]
pub struct InterrogationRecord {
    pub question: Question,
    pub outcome: Felt,
    pub time_index: u64,
}

/// An ordered record of interrogations, replayable from the maximally
/// mixed state.
#[derive(Debug, Clone, Default)]
pub struct InterrogationHistory {
    records: Vec<InterrogationRecord>,
    rng_seed: Option<u64>,
}

impl InterrogationHistory {
    pub fn new(rng_seed: Option<u64>) -> InterrogationHistory {
        InterrogationHistory {
            records: Vec::new(),
            rng_seed,
        }
    }

    pub fn push(&mut self, record: InterrogationRecord) -> Result<(), SimError> {
        if let Some(last) = self.records.last() {
            if record.time_index <= last.time_index {
                return Err(SimError::NonMonotonicTime);
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[InterrogationRecord] {
        &self.records
    }

    pub fn rng_seed(&self) -> Option<u64> {
        self.rng_seed
    }

    /// Deterministically re-run every recorded interrogation from the
    /// maximally mixed state.
    pub fn replay(&self, p: Prime, bodies: usize) -> Result<SystemState, SimError> {
        let mut state = SystemState::maximally_mixed(p, bodies);
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed.unwrap_or(0));
        for record in &self.records {
            let (next, _, _) = interrogate(&state, &record.question, Some(record.outcome), &mut rng)?;
            state = next;
        }
        Ok(state)
    }
}

fn snap(v: f64, tol: f64) -> f64 {
    let rounded = v.round();
    if (v - rounded).abs() < tol {
        rounded
    } else {
        v
    }
}

/// Information carried by one outcome distribution under a custom
/// measure. The measure maps the probabilities into `[0, 1]` and must be
/// 0 at the uniform distribution and 1 at a point mass; the wrapper
/// clamps and snaps those two pinned endpoints exactly. Nothing in the
/// bookkeeping depends on the measure's values in between.
pub fn question_information_with(
    d: &OutcomeDistribution,
    measure: impl Fn(&[f64]) -> f64,
) -> f64 {
    snap(measure(d.probs()).clamp(0.0, 1.0), EPS)
}

/// The default measure: the normalized Shannon complement
/// `1 - H(p) / ln n`.
pub fn question_information(d: &OutcomeDistribution) -> f64 {
    question_information_with(d, |probs| {
        let n = probs.len() as f64;
        let entropy: f64 = probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum();
        1.0 - entropy / n.ln()
    })
}

/// Information of the system given a history and the state it produced:
/// `N - log_p(support rank)`. Errors when the state does not match the
/// replayed history.
pub fn system_information(
    h: &InterrogationHistory,
    s: &SystemState,
) -> Result<f64, SimError> {
    let replayed = h.replay(s.modulus, s.bodies)?;
    if !replayed.rho.approx_eq(&s.rho, 1e-8) {
        return Err(SimError::HistoryMismatch);
    }
    let rank = s.support_rank() as f64;
    let info = s.bodies as f64 - rank.ln() / (s.modulus.get() as f64).ln();
    Ok(snap(info, CERTAIN))
}

/// Every determining question that was not interrogated in `h` but whose
/// outcome the current state already fixes, paired with that outcome.
pub fn derived_questions(
    h: &InterrogationHistory,
    s: &SystemState,
    qm: &QuestionSet,
) -> Result<Vec<(Question, Felt)>, SimError> {
    let replayed = h.replay(s.modulus, s.bodies)?;
    if !replayed.rho.approx_eq(&s.rho, 1e-8) {
        return Err(SimError::HistoryMismatch);
    }
    let asked: BTreeSet<&Question> = h.records.iter().map(|r| &r.question).collect();
    let mut out = Vec::new();
    for q in qm.members() {
        if asked.contains(q) {
            continue;
        }
        let dist = outcome_distribution(s, q)?;
        if let Some(c) = dist.point_mass(CERTAIN) {
            out.push((*q, s.modulus.felt(c)));
        }
    }
    Ok(out)
}

fn single_body_pair(q1: &Question, q2: &Question) -> Result<(Prime, PauliLabel, PauliLabel), SimError> {
    match (q1, q2) {
        (
            Question::Local { body: 0, label: l1 },
            Question::Local { body: 0, label: l2 },
        ) => {
            if l1.modulus() != l2.modulus() {
                return Err(SimError::Structure(StructureError::ModulusMismatch(
                    l1.modulus().get(),
                    l2.modulus().get(),
                )));
            }
            Ok((l1.modulus(), *l1, *l2))
        }
        _ => Err(SimError::NotComplementaryPair(format!("{q1} vs {q2}"))),
    }
}

/// Complementary questions erase each other: interrogating `q1` then `q2`
/// from the mixed state must leave `q1` uniform with zero information, on
/// every outcome branch. Errors unless `q1`, `q2` are distinct members of
/// the single-body determining set.
pub fn complementary_erasure_holds(q1: &Question, q2: &Question) -> Result<bool, SimError> {
    let (p, l1, l2) = single_body_pair(q1, q2)?;
    if l1 == l2 || !l1.is_in_alphabet() || !l2.is_in_alphabet() {
        return Err(SimError::NotComplementaryPair(format!("{q1} vs {q2}")));
    }
    let mixed = SystemState::maximally_mixed(p, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for a in p.elements() {
        let (s1, _, prob_a) = interrogate(&mixed, q1, Some(a), &mut rng)?;
        debug_assert!(prob_a > EPS);
        for b in p.elements() {
            if outcome_distribution(&s1, q2)?.get(b.value()) <= EPS {
                continue;
            }
            let (s2, _, _) = interrogate(&s1, q2, Some(b), &mut rng)?;
            let dist = outcome_distribution(&s2, q1)?;
            if !dist.is_uniform(EPS) || question_information(&dist) != 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn required_bodies(q: &Question) -> usize {
    match q {
        Question::Local { body, .. } => body + 1,
        Question::Composite(_) => 2,
    }
}

/// Compatible questions retain each other: interrogating `q1 -> a` then
/// `q2 -> b`, a re-interrogation of `q1` must reproduce `a` with
/// probability 1, on every outcome branch. Errors unless the two question
/// operators commute.
pub fn compatible_retention_holds(q1: &Question, q2: &Question) -> Result<bool, SimError> {
    let p = q1.modulus();
    if p != q2.modulus() {
        return Err(SimError::Structure(StructureError::ModulusMismatch(
            p.get(),
            q2.modulus().get(),
        )));
    }
    let bodies = required_bodies(q1).max(required_bodies(q2));
    let op1 = question_operator(q1, bodies)?;
    let op2 = question_operator(q2, bodies)?;
    if !crate::pauli::commutes(&op1, &op2)? {
        return Err(SimError::NotCompatiblePair(format!("{q1} vs {q2}")));
    }
    let mixed = SystemState::maximally_mixed(p, bodies);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for a in p.elements() {
        if outcome_distribution(&mixed, q1)?.get(a.value()) <= EPS {
            continue;
        }
        let (s1, _, _) = interrogate(&mixed, q1, Some(a), &mut rng)?;
        for b in p.elements() {
            if outcome_distribution(&s1, q2)?.get(b.value()) <= EPS {
                continue;
            }
            let (s2, _, _) = interrogate(&s1, q2, Some(b), &mut rng)?;
            let dist = outcome_distribution(&s2, q1)?;
            if dist.get(a.value()) < 1.0 - CERTAIN {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Distribution of the composite question `A *_k B` computed purely from
/// sequential local statistics:
/// `probs[c] = sum over a0, b0 with a0 + k b0 = c of
/// P(A = a0) P(B = b0 | A = a0)`. Agrees with the direct composite
/// distribution on every state.
pub fn joint_from_local(
    s: &SystemState,
    a: PauliLabel,
    b: PauliLabel,
    k: Felt,
) -> Result<OutcomeDistribution, SimError> {
    if s.bodies != 2 {
        return Err(SimError::UnsupportedBodies(s.bodies));
    }
    let p = s.modulus;
    let gate = GateTable::linear(p, k)
        .map_err(|_| SimError::Structure(StructureError::ZeroExponent))?;
    let local_a = Question::local(0, a);
    let local_b = Question::local(1, b);
    let dist_a = outcome_distribution(s, &local_a)?;
    let mut probs = vec![0.0; p.get() as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for a0 in p.elements() {
        let pa = dist_a.get(a0.value());
        if pa <= 0.0 {
            continue;
        }
        let (after_a, _, _) = interrogate(s, &local_a, Some(a0), &mut rng)?;
        let dist_b = outcome_distribution(&after_a, &local_b)?;
        for b0 in p.elements() {
            let c = gate.apply(a0, b0).expect("same modulus");
            probs[c.value() as usize] += pa * dist_b.get(b0.value());
        }
    }
    Ok(OutcomeDistribution { probs })
}

/// A random full-rank density matrix (normalized Wishart construction),
/// for exercising state-independent identities in tests and examples.
pub fn random_density_matrix<R: Rng>(p: Prime, bodies: usize, rng: &mut R) -> SystemState {
    let dim = (p.get() as usize).pow(bodies as u32);
    let mut gaussian = || {
        // Box-Muller
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let g = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(gaussian(), gaussian()));
    let w = g.mul(&g.dagger());
    let trace = w.trace().re;
    SystemState {
        modulus: p,
        bodies,
        rho: w.scale(Complex64::new(1.0 / trace, 0.0)),
    }
}

/// A scripted interrogation sequence.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub p: Prime,
    pub bodies: usize,
    pub seed: Option<u64>,
    pub steps: Vec<ScenarioStep>,
}

#[derive(Debug, Clone)]
pub struct ScenarioStep {
    pub question: Question,
    pub outcome: Option<u64>,
}

impl Scenario {
    /// Parse the scenario file format:
    /// `{"p": 5, "bodies": 2, "seed": 1, "steps": [{"question": {...}, "outcome": 3}, ...]}`
    /// where a question is either
    /// `{"kind": "local", "body": 0, "x": 1, "z": 0}` or
    /// `{"kind": "composite", "a": {"x":1,"z":0}, "b": {"x":0,"z":1}, "gate": 4}`.
    pub fn from_json(text: &str) -> Result<Scenario, SimError> {
        let bad = |msg: String| SimError::BadScenarioFile(msg);
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let p_raw = value
            .get("p")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing integer field \"p\"".into()))?;
        let p = Prime::new(p_raw).map_err(SimError::Field)?;
        let bodies = value
            .get("bodies")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing integer field \"bodies\"".into()))?
            as usize;
        let seed = value.get("seed").and_then(|v| v.as_u64());
        let steps_raw = value
            .get("steps")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing array field \"steps\"".into()))?;
        let mut steps = Vec::new();
        for (i, step) in steps_raw.iter().enumerate() {
            let qv = step
                .get("question")
                .ok_or_else(|| bad(format!("step {i} lacks a question")))?;
            let question =
                Question::from_json(p, qv).map_err(|e| bad(format!("step {i}: {e}")))?;
            let outcome = step.get("outcome").and_then(|v| v.as_u64());
            if let Some(c) = outcome {
                if c >= p.get() {
                    return Err(bad(format!("step {i}: outcome {c} out of range")));
                }
            }
            steps.push(ScenarioStep { question, outcome });
        }
        Ok(Scenario {
            p,
            bodies,
            seed,
            steps,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p.get(),
            "bodies": self.bodies,
            "seed": self.seed,
            "steps": self.steps.iter().map(|s| serde_json::json!({
                "question": serde_json::to_value(s.question.to_repr()).unwrap(),
                "outcome": s.outcome,
            })).collect::<Vec<_>>(),
        })
    }
}

/// A question whose outcome became certain without being interrogated.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DerivedOutcome {
    pub question: String,
    pub outcome: u64,
}

/// Information snapshot after one step (step 0 is the untouched initial
/// state).
#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub step: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    pub question_info: BTreeMap<String, f64>,
    pub system_info: f64,
    pub derived: Vec<DerivedOutcome>,
}

/// Run a scenario from the maximally mixed state, returning one report per
/// step (plus the initial report). Sampled outcomes draw from the seeded
/// generator, so identical scenarios replay identically.
pub fn run_scenario(sc: &Scenario) -> Result<(Vec<StepReport>, SystemState), SimError> {
    let qm = QuestionSet::for_bodies(sc.p, sc.bodies)
        .ok_or(SimError::UnsupportedBodies(sc.bodies))?;
    let mut state = SystemState::maximally_mixed(sc.p, sc.bodies);
    let mut history = InterrogationHistory::new(sc.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed.unwrap_or(0));
    let mut reports = Vec::with_capacity(sc.steps.len() + 1);
    reports.push(report_for(0, None, None, None, &history, &state, &qm)?);
    for (i, step) in sc.steps.iter().enumerate() {
        let step_no = i + 1;
        let forced = step.outcome.map(|c| sc.p.felt(c));
        let (next, outcome, prob) = interrogate(&state, &step.question, forced, &mut rng)
            .map_err(|e| SimError::StepFailed {
                step: step_no,
                source: Box::new(e),
            })?;
        state = next;
        history.push(InterrogationRecord {
            question: step.question,
            outcome,
            time_index: step_no as u64,
        })?;
        reports.push(report_for(
            step_no,
            Some(step.question),
            Some(outcome.value()),
            Some(prob),
            &history,
            &state,
            &qm,
        )?);
    }
    Ok((reports, state))
}

fn report_for(
    step: usize,
    question: Option<Question>,
    outcome: Option<u64>,
    probability: Option<f64>,
    history: &InterrogationHistory,
    state: &SystemState,
    qm: &QuestionSet,
) -> Result<StepReport, SimError> {
    let mut question_info = BTreeMap::new();
    for q in qm.members() {
        let dist = outcome_distribution(state, q)?;
        question_info.insert(q.to_string(), question_information(&dist));
    }
    let system_info = system_information(history, state)?;
    let derived = derived_questions(history, state, qm)?
        .into_iter()
        .map(|(q, c)| DerivedOutcome {
            question: q.to_string(),
            outcome: c.value(),
        })
        .collect();
    Ok(StepReport {
        step,
        question: question.map(|q| q.to_string()),
        outcome,
        probability,
        question_info,
        system_info,
        derived,
    })
}

/// The built-in worked scenarios: `single5` (two complementary local
/// interrogations at p = 5), `composite5` (the commuting composite pair
/// `X (x) X` then `Z (x) Z^4` at p = 5), and `bell2` (the two-qubit
/// analogue `X (x) X` then `Z (x) Z`).
pub fn builtin_scenario(which: &str, m: u64, n: u64) -> Result<Scenario, SimError> {
    let scenario = |p: Prime, bodies, steps| Scenario {
        p,
        bodies,
        seed: Some(0),
        steps,
    };
    match which {
        "single5" => {
            let p = Prime::new(5).unwrap();
            Ok(scenario(
                p,
                1,
                vec![
                    ScenarioStep {
                        question: Question::local(0, PauliLabel::x_label(p)),
                        outcome: Some(m % 5),
                    },
                    ScenarioStep {
                        question: Question::local(0, PauliLabel::z_label(p)),
                        outcome: Some(n % 5),
                    },
                ],
            ))
        }
        "composite5" => {
            let p = Prime::new(5).unwrap();
            Ok(scenario(
                p,
                2,
                vec![
                    ScenarioStep {
                        question: Question::composite(
                            PauliLabel::x_label(p),
                            PauliLabel::x_label(p),
                            p.one(),
                        )?,
                        outcome: Some(m % 5),
                    },
                    ScenarioStep {
                        question: Question::composite(
                            PauliLabel::z_label(p),
                            PauliLabel::z_label(p),
                            p.felt(4),
                        )?,
                        outcome: Some(n % 5),
                    },
                ],
            ))
        }
        "bell2" => {
            let p = Prime::new(2).unwrap();
            Ok(scenario(
                p,
                2,
                vec![
                    ScenarioStep {
                        question: Question::composite(
                            PauliLabel::x_label(p),
                            PauliLabel::x_label(p),
                            p.one(),
                        )?,
                        outcome: Some(m % 2),
                    },
                    ScenarioStep {
                        question: Question::composite(
                            PauliLabel::z_label(p),
                            PauliLabel::z_label(p),
                            p.one(),
                        )?,
                        outcome: Some(n % 2),
                    },
                ],
            ))
        }
        other => Err(SimError::UnknownScenario(other.to_string())),
    }
}
