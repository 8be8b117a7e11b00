//! The question-set layer: determining sets, commuting-family search over
//! composite labels, the unique-partner formula, and counting identities.
//!
//! Commutation between composite labels is decided symbolically. Writing
//! `A = X^{i1} Z^{i2}`, `C = X^{k1} Z^{k2}` for the first factors and
//! `B = X^{j1} Z^{j2}`, `D = X^{l1} Z^{l2}` for the second, the Weyl
//! relation gives
//!
//! ```text
//! (A (x) B^m)(C (x) D^n) = w^((i2 k1 - i1 k2) + m n (j2 l1 - j1 l2)) (C (x) D^n)(A (x) B^m)
//! ```
//!
//! so two labels commute exactly when that exponent vanishes mod p. The
//! matrix commutator serves as a cross-check oracle in the tests only;
//! the search itself stays in exact integer arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Felt, FieldError, Prime};
use crate::pauli::{CompositeLabel, PauliError, PauliLabel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("labels must differ in both slots for a unique partner (shared {0} factor)")]
    SharedFactor(&'static str),
    #[error("label {0} is outside the single-system alphabet")]
    NotInAlphabet(String),
    #[error("both questions must be composite")]
    NotComposite,
    #[error("malformed question: {0}")]
    Malformed(String),
    #[error("gate exponent must be nonzero")]
    ZeroExponent,
    #[error("body count must be at least 1")]
    NoBodies,
    #[error("counting overflow for p = {p}, bodies = {bodies}")]
    Overflow { p: u64, bodies: u32 },
    #[error("question moduli disagree: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

/// A question posed to the system: either a local question on one body or
/// a correlation question combining one local question from each body
/// through gate `i` (the composite operator `A (x) B^i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Question {
    Local { body: usize, label: PauliLabel },
    Composite(CompositeLabel),
}

impl Question {
    pub fn modulus(&self) -> Prime {
        match self {
            Question::Local { label, .. } => label.modulus(),
            Question::Composite(c) => c.modulus(),
        }
    }

    pub fn composite(a: PauliLabel, b: PauliLabel, gate: Felt) -> Result<Question, StructureError> {
        Ok(Question::Composite(CompositeLabel::new(a, b, gate)?))
    }

    pub fn local(body: usize, label: PauliLabel) -> Question {
        Question::Local { body, label }
    }
}

impl std::fmt::Display for Question {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Question::Local { body, label } => write!(f, "{label}@{body}"),
            Question::Composite(c) => write!(f, "{c}"),
        }
    }
}

/// Serialization schema for questions, used by scenario files and JSON
/// output: local questions carry a body index and the `X`/`Z` exponents of
/// their label; composite questions carry both labels and the gate index.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum QuestionRepr {
    Local { body: usize, x: u64, z: u64 },
    Composite { a: LabelRepr, b: LabelRepr, gate: u64 },
}

#[derive(Serialize, Deserialize)]
struct LabelRepr {
    x: u64,
    z: u64,
}

impl Question {
    pub fn to_repr(&self) -> impl Serialize {
        match self {
            Question::Local { body, label } => QuestionRepr::Local {
                body: *body,
                x: label.x().value(),
                z: label.z().value(),
            },
            Question::Composite(c) => QuestionRepr::Composite {
                a: LabelRepr { x: c.a().x().value(), z: c.a().z().value() },
                b: LabelRepr { x: c.b().x().value(), z: c.b().z().value() },
                gate: c.k().value(),
            },
        }
    }

    /// Parse from the documented JSON schema. Labels must come from the
    /// single-system alphabet; determining sets contain nothing else.
    pub fn from_json(p: Prime, value: &serde_json::Value) -> Result<Question, StructureError> {
        let repr: QuestionRepr = serde_json::from_value(value.clone())
            .map_err(|e| StructureError::Malformed(e.to_string()))?;
        let alphabet_label = |x: u64, z: u64| -> Result<PauliLabel, StructureError> {
            let label = PauliLabel::new(p.felt(x), p.felt(z))?;
            if !label.is_in_alphabet() {
                return Err(StructureError::NotInAlphabet(label.to_string()));
            }
            Ok(label)
        };
        match repr {
            QuestionRepr::Local { body, x, z } => Ok(Question::Local {
                body,
                label: alphabet_label(x, z)?,
            }),
            QuestionRepr::Composite { a, b, gate } => Question::composite(
                alphabet_label(a.x, a.z)?,
                alphabet_label(b.x, b.z)?,
                p.felt(gate),
            ),
        }
    }
}

/// A determining question set for a system of one or two bodies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionSet {
    modulus: Prime,
    bodies: usize,
    members: Vec<Question>,
}

impl QuestionSet {
    /// The `p + 1` local questions of a single body, one per alphabet
    /// label; their operator bases are exactly the mutually unbiased bases.
    pub fn single(p: Prime) -> QuestionSet {
        let members = PauliLabel::alphabet(p)
            .into_iter()
            .map(|l| Question::local(0, l))
            .collect();
        QuestionSet {
            modulus: p,
            bodies: 1,
            members,
        }
    }

    /// The two-body determining set: each body's local questions plus every
    /// composite `A (x) B^i` over the alphabet and the nonzero gate
    /// indices. Its size is `2(p+1) + (p+1)^2 (p-1) = (p+1)(p^2+1)`.
    pub fn two_body(p: Prime) -> QuestionSet {
        let alphabet = PauliLabel::alphabet(p);
        let mut members = Vec::new();
        for body in 0..2 {
            members.extend(alphabet.iter().map(|&l| Question::local(body, l)));
        }
        for &a in &alphabet {
            for &b in &alphabet {
                for k in p.units() {
                    members.push(Question::Composite(
                        CompositeLabel::new(a, b, k).expect("alphabet labels, nonzero gate"),
                    ));
                }
            }
        }
        QuestionSet {
            modulus: p,
            bodies: 2,
            members,
        }
    }

    pub fn for_bodies(p: Prime, bodies: usize) -> Option<QuestionSet> {
        match bodies {
            1 => Some(QuestionSet::single(p)),
            2 => Some(QuestionSet::two_body(p)),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn bodies(&self) -> usize {
        self.bodies
    }

    pub fn members(&self) -> &[Question] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Closed form for the size of the determining set of an `N`-body system:
/// `(p^(2N) - 1) / (p - 1)`.
pub fn question_count(p: Prime, bodies: u32) -> Result<u128, StructureError> {
    if bodies == 0 {
        return Err(StructureError::NoBodies);
    }
    let overflow = || StructureError::Overflow { p: p.get(), bodies };
    let base = p.get() as u128;
    let power = base
        .checked_pow(2 * bodies)
        .ok_or_else(overflow)?;
    Ok((power - 1) / (base - 1))
}

/// Degrees of freedom carried by the determining set, `p^(2N) - 1`; always
/// `(p - 1)` per question, matching the density-matrix parameter count.
pub fn degrees_of_freedom(p: Prime, bodies: u32) -> Result<u128, StructureError> {
    if bodies == 0 {
        return Err(StructureError::NoBodies);
    }
    let overflow = || StructureError::Overflow { p: p.get(), bodies };
    let base = p.get() as u128;
    Ok(base.checked_pow(2 * bodies).ok_or_else(overflow)? - 1)
}

/// The Weyl exponent `e` with `L1 L2 = w^e L2 L1` for composite labels; the
/// pair commutes exactly when `e = 0`.
pub fn commutation_exponent(l1: &CompositeLabel, l2: &CompositeLabel) -> Felt {
    let (i1, i2) = (l1.a().x(), l1.a().z());
    let (k1, k2) = (l2.a().x(), l2.a().z());
    let (j1, j2) = (l1.b().x(), l1.b().z());
    let (d1, d2) = (l2.b().x(), l2.b().z());
    let first = i2 * k1 - i1 * k2;
    let second = l1.k() * l2.k() * (j2 * d1 - j1 * d2);
    first + second
}

/// Symbolic commutation test between two composite labels.
pub fn labels_commute(l1: &CompositeLabel, l2: &CompositeLabel) -> bool {
    commutation_exponent(l1, l2).is_zero()
}

/// For admissible `(A, B, m, C, D)` with `A != C`, `B != D`, `m` nonzero,
/// the unique `n` making `A (x) B^m` and `C (x) D^n` commute:
/// `n = (i1 k2 - i2 k1) / (m (j2 l1 - j1 l2))` in `F_p`.
pub fn commuting_partner_exponent(
    a: PauliLabel,
    b: PauliLabel,
    m: Felt,
    c: PauliLabel,
    d: PauliLabel,
) -> Result<Felt, StructureError> {
    for l in [&a, &b, &c, &d] {
        if !l.is_in_alphabet() {
            return Err(StructureError::NotInAlphabet(l.to_string()));
        }
    }
    if a == c {
        return Err(StructureError::SharedFactor("first"));
    }
    if b == d {
        return Err(StructureError::SharedFactor("second"));
    }
    if m.is_zero() {
        return Err(StructureError::ZeroExponent);
    }
    let (i1, i2) = (a.x(), a.z());
    let (k1, k2) = (c.x(), c.z());
    let (j1, j2) = (b.x(), b.z());
    let (l1, l2) = (d.x(), d.z());
    let numerator = i1 * k2 - i2 * k1;
    let denominator = m * (j2 * l1 - j1 * l2);
    Ok(numerator.try_div(denominator)?)
}

/// Every composite label `A (x) B^k` over the alphabet, in canonical order
/// (first label, second label, gate index). There are `(p+1)^2 (p-1)`.
pub fn all_composite_labels(p: Prime) -> Vec<CompositeLabel> {
    let alphabet = PauliLabel::alphabet(p);
    let mut out = Vec::new();
    for &a in &alphabet {
        for &b in &alphabet {
            for k in p.units() {
                out.push(CompositeLabel::new(a, b, k).expect("valid composite"));
            }
        }
    }
    out
}

/// All maximal families of mutually commuting composite labels, by
/// Bron-Kerbosch search with pivoting on the symbolic commutation graph.
/// Families and their members come back in canonical order.
pub fn maximal_commuting_families(p: Prime) -> Vec<Vec<CompositeLabel>> {
    let labels = all_composite_labels(p);
    let n = labels.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if labels_commute(&labels[i], &labels[j]) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    bron_kerbosch(
        &adj,
        &mut Vec::new(),
        &mut (0..n).collect(),
        &mut Vec::new(),
        &mut cliques,
    );
    for clique in &mut cliques {
        clique.sort_unstable();
    }
    cliques.sort();
    cliques
        .into_iter()
        .map(|clique| clique.into_iter().map(|i| labels[i]).collect())
        .collect()
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: &mut Vec<usize>,
    p_set: &mut Vec<usize>,
    x_set: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p_set.is_empty() && x_set.is_empty() {
        out.push(r.clone());
        return;
    }
    // pivot on the candidate with the most neighbors in P
    let pivot = p_set
        .iter()
        .chain(x_set.iter())
        .copied()
        .max_by_key(|&u| p_set.iter().filter(|&&v| adj[u][v]).count())
        .unwrap();
    let candidates: Vec<usize> = p_set
        .iter()
        .copied()
        .filter(|&v| !adj[pivot][v])
        .collect();
    for v in candidates {
        let mut next_p: Vec<usize> = p_set.iter().copied().filter(|&u| adj[v][u]).collect();
        let mut next_x: Vec<usize> = x_set.iter().copied().filter(|&u| adj[v][u]).collect();
        r.push(v);
        bron_kerbosch(adj, r, &mut next_p, &mut next_x, out);
        r.pop();
        p_set.retain(|&u| u != v);
        x_set.push(v);
    }
}

/// Whether two composite questions conform to the rule that distinct
/// composites sharing exactly one local factor never commute. Pairs
/// sharing neither factor, identical pairs, and pairs sharing both factors
/// (which do commute, differing only in the gate index) satisfy the rule
/// vacuously.
pub fn shared_factor_incompatibility_holds(
    q1: &Question,
    q2: &Question,
) -> Result<bool, StructureError> {
    let (c1, c2) = match (q1, q2) {
        (Question::Composite(c1), Question::Composite(c2)) => (c1, c2),
        _ => return Err(StructureError::NotComposite),
    };
    if c1.modulus() != c2.modulus() {
        return Err(StructureError::ModulusMismatch(
            c1.modulus().get(),
            c2.modulus().get(),
        ));
    }
    if c1 == c2 {
        return Ok(true);
    }
    let shares_first = c1.a() == c2.a();
    let shares_second = c1.b() == c2.b();
    if shares_first ^ shares_second {
        Ok(!labels_commute(c1, c2))
    } else {
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{commutes, composite_operator};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn x(pr: Prime) -> PauliLabel {
        PauliLabel::x_label(pr)
    }

    fn z(pr: Prime) -> PauliLabel {
        PauliLabel::z_label(pr)
    }

    fn xz(pr: Prime, j: u64) -> PauliLabel {
        PauliLabel::xz_label(pr, pr.felt(j))
    }

    #[test]
    fn single_set_sizes() {
        assert_eq!(QuestionSet::single(p(2)).len(), 3);
        assert_eq!(QuestionSet::single(p(5)).len(), 6);
    }

    #[test]
    fn single_set_operators_pairwise_unbiased() {
        use crate::pauli::{check_unbiased, label_eigenbasis};
        let pr = p(3);
        let set = QuestionSet::single(pr);
        for (i, qa) in set.members().iter().enumerate() {
            for qb in set.members().iter().skip(i + 1) {
                let (la, lb) = match (qa, qb) {
                    (Question::Local { label: la, .. }, Question::Local { label: lb, .. }) => {
                        (la, lb)
                    }
                    _ => unreachable!(),
                };
                let ba = label_eigenbasis(la).unwrap();
                let bb = label_eigenbasis(lb).unwrap();
                assert!(check_unbiased(&ba, &bb, pr).unwrap());
            }
        }
    }

    #[test]
    fn two_body_set_sizes() {
        assert_eq!(QuestionSet::two_body(p(2)).len(), 15);
        assert_eq!(QuestionSet::two_body(p(3)).len(), 40);
        assert_eq!(QuestionSet::two_body(p(5)).len(), 156);
    }

    /// Independent oracle for the closed form: the binomial sum
    /// `sum_k C(N,k) (p+1)^k (p-1)^(k-1)`.
    fn binomial_sum(p: u128, bodies: u32) -> u128 {
        let mut total = 0u128;
        for k in 1..=bodies as u128 {
            let mut choose = 1u128;
            for i in 0..k {
                choose = choose * (bodies as u128 - i) / (i + 1);
            }
            total += choose * (p + 1).pow(k as u32) * (p - 1).pow(k as u32 - 1);
        }
        total
    }

    #[test]
    fn question_count_matches_binomial_sum() {
        for q in [2u64, 3, 5, 7] {
            for bodies in 1..=4u32 {
                assert_eq!(
                    question_count(p(q), bodies).unwrap(),
                    binomial_sum(q as u128, bodies),
                    "p = {q}, N = {bodies}"
                );
            }
        }
    }

    #[test]
    fn question_count_spot_values() {
        assert_eq!(question_count(p(2), 2).unwrap(), 15);
        assert_eq!(question_count(p(5), 2).unwrap(), 156);
        assert_eq!(question_count(p(3), 3).unwrap(), 364);
        assert_eq!(
            question_count(p(2), 2).unwrap(),
            QuestionSet::two_body(p(2)).len() as u128
        );
        assert_eq!(
            question_count(p(5), 2).unwrap(),
            QuestionSet::two_body(p(5)).len() as u128
        );
    }

    #[test]
    fn degrees_of_freedom_identity() {
        assert_eq!(degrees_of_freedom(p(2), 1).unwrap(), 3);
        assert_eq!(degrees_of_freedom(p(5), 2).unwrap(), 624);
        assert_eq!(degrees_of_freedom(p(3), 1).unwrap(), 8);
        for q in [2u64, 3, 5, 7] {
            for bodies in 1..=4u32 {
                assert_eq!(
                    degrees_of_freedom(p(q), bodies).unwrap(),
                    question_count(p(q), bodies).unwrap() * (q as u128 - 1)
                );
            }
        }
        assert!(matches!(
            question_count(p(2), 0),
            Err(StructureError::NoBodies)
        ));
    }

    #[test]
    fn symbolic_commutation_agrees_with_matrices() {
        for q in [2u64, 3] {
            let labels = all_composite_labels(p(q));
            let mats: Vec<_> = labels.iter().map(composite_operator).collect();
            for (i, li) in labels.iter().enumerate() {
                for (j, lj) in labels.iter().enumerate() {
                    assert_eq!(
                        labels_commute(li, lj),
                        commutes(&mats[i], &mats[j]).unwrap(),
                        "p = {q}: {li} vs {lj}"
                    );
                }
            }
        }
    }

    #[test]
    fn partner_formula_first_example() {
        // [X (x) Z, Z (x) X] = 0
        let pr = p(5);
        let n = commuting_partner_exponent(x(pr), z(pr), pr.one(), z(pr), x(pr)).unwrap();
        assert_eq!(n.value(), 1);
        let m1 = composite_operator(&CompositeLabel::new(x(pr), z(pr), pr.one()).unwrap());
        let m2 = composite_operator(&CompositeLabel::new(z(pr), x(pr), n).unwrap());
        assert!(commutes(&m1, &m2).unwrap());
    }

    #[test]
    fn partner_formula_cli_example() {
        // a = X, b = Z, m = 2, c = Z, d = X: n = 1/(2*1) = 3 mod 5
        let pr = p(5);
        let n = commuting_partner_exponent(x(pr), z(pr), pr.felt(2), z(pr), x(pr)).unwrap();
        assert_eq!(n.value(), 3);
    }

    fn brute_force_partner(
        pr: Prime,
        a: PauliLabel,
        b: PauliLabel,
        m: Felt,
        c: PauliLabel,
        d: PauliLabel,
    ) -> Vec<Felt> {
        let m1 = composite_operator(&CompositeLabel::new(a, b, m).unwrap());
        pr.units()
            .filter(|&n| {
                let m2 = composite_operator(&CompositeLabel::new(c, d, n).unwrap());
                commutes(&m1, &m2).unwrap()
            })
            .collect()
    }

    #[test]
    fn partner_formula_exhaustive_p3() {
        let pr = p(3);
        let alphabet = PauliLabel::alphabet(pr);
        for &a in &alphabet {
            for &c in &alphabet {
                if a == c {
                    continue;
                }
                for &b in &alphabet {
                    for &d in &alphabet {
                        if b == d {
                            continue;
                        }
                        for m in pr.units() {
                            let formula =
                                commuting_partner_exponent(a, b, m, c, d).unwrap();
                            let found = brute_force_partner(pr, a, b, m, c, d);
                            assert_eq!(found, vec![formula], "a={a} b={b} m={m} c={c} d={d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partner_formula_random_p5_p7() {
        let mut rng = StdRng::seed_from_u64(7);
        for q in [5u64, 7] {
            let pr = p(q);
            let alphabet = PauliLabel::alphabet(pr);
            let mut done = 0;
            while done < 200 {
                let a = alphabet[rng.gen_range(0..alphabet.len())];
                let c = alphabet[rng.gen_range(0..alphabet.len())];
                let b = alphabet[rng.gen_range(0..alphabet.len())];
                let d = alphabet[rng.gen_range(0..alphabet.len())];
                if a == c || b == d {
                    continue;
                }
                let m = pr.felt(rng.gen_range(1..q));
                let formula = commuting_partner_exponent(a, b, m, c, d).unwrap();
                let found = brute_force_partner(pr, a, b, m, c, d);
                assert_eq!(found, vec![formula]);
                done += 1;
            }
        }
    }

    #[test]
    fn partner_scales_inversely_with_m() {
        let pr = p(7);
        let a = x(pr);
        let b = z(pr);
        let c = z(pr);
        let d = xz(pr, 2);
        let n1 = commuting_partner_exponent(a, b, pr.one(), c, d).unwrap();
        let n2 = commuting_partner_exponent(a, b, pr.felt(2), c, d).unwrap();
        assert_eq!(n2, n1 * pr.felt(2).inv().unwrap());
    }

    #[test]
    fn partner_rejects_shared_factors_and_zero_m() {
        let pr = p(5);
        assert!(matches!(
            commuting_partner_exponent(x(pr), z(pr), pr.one(), x(pr), xz(pr, 1)),
            Err(StructureError::SharedFactor("first"))
        ));
        assert!(matches!(
            commuting_partner_exponent(x(pr), z(pr), pr.one(), z(pr), z(pr)),
            Err(StructureError::SharedFactor("second"))
        ));
        assert!(matches!(
            commuting_partner_exponent(x(pr), z(pr), pr.zero(), z(pr), x(pr)),
            Err(StructureError::ZeroExponent)
        ));
    }

    #[test]
    fn label_count_matches_formula() {
        for q in [2u64, 3, 5] {
            let expected = ((q + 1) * (q + 1) * (q - 1)) as usize;
            assert_eq!(all_composite_labels(p(q)).len(), expected);
        }
    }

    #[test]
    fn qubit_families_contain_the_triple() {
        let pr = p(2);
        let families = maximal_commuting_families(pr);
        let max = families.iter().map(Vec::len).max().unwrap();
        assert_eq!(max, 3);
        let triple: Vec<CompositeLabel> = [
            (x(pr), x(pr)),
            (z(pr), z(pr)),
            (xz(pr, 1), xz(pr, 1)),
        ]
        .iter()
        .map(|&(a, b)| CompositeLabel::new(a, b, pr.one()).unwrap())
        .collect();
        let mut sorted = triple.clone();
        sorted.sort();
        assert!(families.contains(&sorted));
    }

    #[test]
    fn ternary_families_bounded_by_four() {
        let families = maximal_commuting_families(p(3));
        let max = families.iter().map(Vec::len).max().unwrap();
        assert_eq!(max, 4);
        assert!(families.iter().any(|f| f.len() == 4));
    }

    #[test]
    fn quinary_families_contain_the_reference_family() {
        let pr = p(5);
        let families = maximal_commuting_families(pr);
        let max = families.iter().map(Vec::len).max().unwrap();
        assert_eq!(max, 6);
        let mut family: Vec<CompositeLabel> = vec![
            CompositeLabel::new(x(pr), x(pr), pr.one()).unwrap(),
            CompositeLabel::new(z(pr), z(pr), pr.felt(4)).unwrap(),
            CompositeLabel::new(xz(pr, 1), xz(pr, 4), pr.one()).unwrap(),
            CompositeLabel::new(xz(pr, 2), xz(pr, 3), pr.one()).unwrap(),
            CompositeLabel::new(xz(pr, 3), xz(pr, 2), pr.one()).unwrap(),
            CompositeLabel::new(xz(pr, 4), xz(pr, 1), pr.one()).unwrap(),
        ];
        family.sort();
        assert!(families.contains(&family));
    }

    /// In a full-size family, each member factors through the first two:
    /// the exponent 4-vector of every further member is
    /// `(first) + i * (second)` for a distinct nonzero `i`, once the member
    /// with a `Z` first factor is taken as the second anchor.
    #[test]
    fn full_families_have_linear_dependence_structure() {
        for q in [2u64, 3, 5] {
            let pr = p(q);
            for family in maximal_commuting_families(pr) {
                if family.len() != (q + 1) as usize {
                    continue;
                }
                let anchor2 = *family
                    .iter()
                    .find(|l| l.a().x().value() == 0)
                    .expect("full family has a Z-slot member");
                let anchor1 = *family.iter().find(|&&l| l != anchor2).unwrap();
                let vec4 = |l: &CompositeLabel| {
                    [
                        l.a().x(),
                        l.a().z(),
                        l.k() * l.b().x(),
                        l.k() * l.b().z(),
                    ]
                };
                let (v1, v2) = (vec4(&anchor1), vec4(&anchor2));
                let mut seen = std::collections::BTreeSet::new();
                for member in family.iter().filter(|&&l| l != anchor1 && l != anchor2) {
                    let vm = vec4(member);
                    let matches: Vec<u64> = pr
                        .units()
                        .filter(|&i| (0..4).all(|t| v1[t] + i * v2[t] == vm[t]))
                        .map(|i| i.value())
                        .collect();
                    assert_eq!(matches.len(), 1, "p={q} member {member}");
                    assert!(seen.insert(matches[0]), "exponent reused");
                }
            }
        }
    }

    /// Exactly one commuting partner exponent exists for every admissible
    /// tuple (uniqueness checked exhaustively, not just via the formula).
    #[test]
    fn partner_uniqueness_exhaustive_symbolic() {
        for q in [3u64, 5] {
            let pr = p(q);
            let alphabet = PauliLabel::alphabet(pr);
            for &a in &alphabet {
                for &c in &alphabet {
                    if a == c {
                        continue;
                    }
                    for &b in &alphabet {
                        for &d in &alphabet {
                            if b == d {
                                continue;
                            }
                            for m in pr.units() {
                                let l1 = CompositeLabel::new(a, b, m).unwrap();
                                let count = pr
                                    .units()
                                    .filter(|&n| {
                                        labels_commute(
                                            &l1,
                                            &CompositeLabel::new(c, d, n).unwrap(),
                                        )
                                    })
                                    .count();
                                assert_eq!(count, 1);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shared_factor_rule() {
        let pr = p(3);
        // same first factor, different second: never commute
        let q1 = Question::composite(x(pr), z(pr), pr.one()).unwrap();
        let q2 = Question::composite(x(pr), xz(pr, 0), pr.felt(2)).unwrap();
        assert!(shared_factor_incompatibility_holds(&q1, &q2).unwrap());
        // identical pair: vacuous
        assert!(shared_factor_incompatibility_holds(&q1, &q1).unwrap());
        // shares both factors with a different gate: such pairs commute and
        // the rule does not apply
        let q3 = Question::composite(x(pr), z(pr), pr.felt(2)).unwrap();
        assert!(shared_factor_incompatibility_holds(&q1, &q3).unwrap());
        if let (Question::Composite(c1), Question::Composite(c3)) = (&q1, &q3) {
            assert!(labels_commute(c1, c3));
        }
    }

    #[test]
    fn shared_factor_rule_random_p5() {
        let pr = p(5);
        let mut rng = StdRng::seed_from_u64(11);
        let alphabet = PauliLabel::alphabet(pr);
        let mut done = 0;
        while done < 100 {
            let a = alphabet[rng.gen_range(0..alphabet.len())];
            let b = alphabet[rng.gen_range(0..alphabet.len())];
            let b2 = alphabet[rng.gen_range(0..alphabet.len())];
            let (m, n) = (
                pr.felt(rng.gen_range(1..5)),
                pr.felt(rng.gen_range(1..5)),
            );
            if b == b2 {
                continue;
            }
            // share the first factor only
            let l1 = CompositeLabel::new(a, b, m).unwrap();
            let l2 = CompositeLabel::new(a, b2, n).unwrap();
            assert!(!labels_commute(&l1, &l2));
            assert!(!commutes(&composite_operator(&l1), &composite_operator(&l2)).unwrap());
            done += 1;
        }
    }

    #[test]
    fn question_json_round_trip() {
        let pr = p(5);
        let q = Question::composite(x(pr), xz(pr, 3), pr.felt(2)).unwrap();
        let json = serde_json::to_value(q.to_repr()).unwrap();
        assert_eq!(json["kind"], "composite");
        assert_eq!(Question::from_json(pr, &json).unwrap(), q);
        let ql = Question::local(1, z(pr));
        let json = serde_json::to_value(ql.to_repr()).unwrap();
        assert_eq!(json["kind"], "local");
        assert_eq!(Question::from_json(pr, &json).unwrap(), ql);
        // labels outside the alphabet are rejected at the parse surface
        let bogus = serde_json::json!({"kind": "local", "body": 0, "x": 2, "z": 0});
        assert!(matches!(
            Question::from_json(pr, &bogus),
            Err(StructureError::NotInAlphabet(_))
        ));
    }
}
