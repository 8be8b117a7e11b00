//! Generalized Pauli operators, mutually unbiased bases, and the dense
//! complex matrices that realize them in prime dimension.
//!
//! `Z` is the clock (`Z|i> = w^i |i>`) and `X` the cyclic shift
//! (`X|i> = |i+1>`), with `w = exp(2*pi*i/p)`; they satisfy `X^p = Z^p = I`
//! and the Weyl relation `ZX = w XZ`. The single-system question alphabet
//! is `{Z, X, XZ, ..., XZ^(p-1)}`, whose eigenbases form the full set of
//! `p + 1` mutually unbiased bases of `C^p`. Composite operators are
//! tensor products `A (x) B^k` with `k` nonzero.
//!
//! All matrix comparisons use the tolerance [`EPS`]; dimensions stay at or
//! below 49, which keeps floating-point error orders of magnitude smaller.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Felt, Prime};

/// Tolerance for all approximate matrix and vector comparisons.
pub const EPS: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("exponent of the second factor must be nonzero")]
    ZeroExponent,
    #[error("label X^{0} Z^{1} is outside the single-system alphabet")]
    NotInAlphabet(u64, u64),
    #[error("basis is not orthonormal within tolerance")]
    NotOrthonormal,
    #[error("operator^p deviates from a scalar multiple of the identity")]
    NotScalarPower,
    #[error("operator^p deviates from the identity; normalize its phase first")]
    UnnormalizedPhase,
    #[error("cannot parse operator label {0:?}")]
    BadLabel(String),
}

/// The primitive `p`-th root of unity `exp(2*pi*i/p)`.
pub fn omega(p: Prime) -> Complex64 {
    Complex64::from_polar(1.0, TAU / p.get() as f64)
}

/// `omega(p)^e` computed from the reduced exponent, so large integer
/// exponents never accumulate rounding.
pub fn omega_pow(p: Prime, e: i64) -> Complex64 {
    let m = p.get() as i64;
    let e = e.rem_euclid(m) as f64;
    Complex64::from_polar(1.0, TAU * e / p.get() as f64)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CMatrixRepr", try_from = "CMatrixRepr")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Serialization form: dimensions plus a flat row-major list of
/// `[re, im]` pairs as 64-bit floats.
#[derive(Serialize, Deserialize)]
struct CMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<(f64, f64)>,
}

impl From<CMatrix> for CMatrixRepr {
    fn from(m: CMatrix) -> Self {
        CMatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}

impl TryFrom<CMatrixRepr> for CMatrix {
    type Error = String;
    fn try_from(r: CMatrixRepr) -> Result<Self, Self::Error> {
        if r.rows * r.cols != r.entries.len() {
            return Err(format!(
                "{}x{} matrix needs {} entries, got {}",
                r.rows,
                r.cols,
                r.rows * r.cols,
                r.entries.len()
            ));
        }
        Ok(CMatrix {
            rows: r.rows,
            cols: r.cols,
            data: r.entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        })
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> CMatrix {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> CMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Kronecker product with the first factor major:
    /// index `(i_A, i_B)` maps to `i_A * dim_B + i_B`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        CMatrix::from_fn(rows, cols, |r, c| {
            let (ra, rb) = (r / rhs.rows, r % rhs.rows);
            let (ca, cb) = (c / rhs.cols, c % rhs.cols);
            self[(ra, ca)] * rhs[(rb, cb)]
        })
    }

    /// `self^e` by repeated multiplication (exponents here never exceed p).
    pub fn pow(&self, e: u64) -> CMatrix {
        assert!(self.is_square());
        let mut acc = CMatrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Entrywise max-modulus norm.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        self.sub(rhs).max_norm()
    }

    pub fn approx_eq(&self, rhs: &CMatrix, eps: f64) -> bool {
        (self.rows, self.cols) == (rhs.rows, rhs.cols) && self.max_abs_diff(rhs) < eps
    }

    pub fn is_identity(&self, eps: f64) -> bool {
        self.is_square() && self.approx_eq(&CMatrix::identity(self.rows), eps)
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.is_square() && self.approx_eq(&self.dagger(), eps)
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        self.is_square() && self.mul(&self.dagger()).is_identity(eps)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.data[r * self.cols + c] * v[c])
                    .sum()
            })
            .collect()
    }

    /// Outer product `|v><v|` as a matrix.
    pub fn projector_onto(v: &[Complex64]) -> CMatrix {
        CMatrix::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Backed by nalgebra's
    /// symmetric eigensolver.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square());
        let n = self.rows;
        let m = nalgebra::DMatrix::from_fn(n, n, |r, c| self[(r, c)]);
        let mut vals: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Inner product `<a|b>` (conjugate-linear in the first argument).
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    inner(v, v).re.sqrt()
}

/// The clock operator `diag(1, w, w^2, ...)`.
pub fn pauli_z(p: Prime) -> CMatrix {
    let n = p.get() as usize;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = omega_pow(p, i as i64);
    }
    m
}

/// The cyclic shift `X|i> = |i+1 mod p>`.
pub fn pauli_x(p: Prime) -> CMatrix {
    let n = p.get() as usize;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[((i + 1) % n, i)] = Complex64::ONE;
    }
    m
}

/// Symbolic operator identity `X^x Z^z`, independent of any matrix
/// realization. The single-system question alphabet is
/// `{(0,1)} U {(1,j) : j in F_p}`, i.e. `Z` and `X Z^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliLabel {
    x: Felt,
    z: Felt,
}

impl PauliLabel {
    pub fn new(x: Felt, z: Felt) -> Result<PauliLabel, PauliError> {
        if x.modulus() != z.modulus() {
            return Err(PauliError::ModulusMismatch(
                x.modulus().get(),
                z.modulus().get(),
            ));
        }
        Ok(PauliLabel { x, z })
    }

    pub fn x(&self) -> Felt {
        self.x
    }

    pub fn z(&self) -> Felt {
        self.z
    }

    pub fn modulus(&self) -> Prime {
        self.x.modulus()
    }

    pub fn z_label(p: Prime) -> PauliLabel {
        PauliLabel { x: p.zero(), z: p.one() }
    }

    pub fn x_label(p: Prime) -> PauliLabel {
        PauliLabel { x: p.one(), z: p.zero() }
    }

    pub fn xz_label(p: Prime, j: Felt) -> PauliLabel {
        PauliLabel { x: p.one(), z: j }
    }

    /// The `p + 1` alphabet labels in canonical order:
    /// `Z, X, XZ, XZ^2, ..., XZ^(p-1)`.
    pub fn alphabet(p: Prime) -> Vec<PauliLabel> {
        let mut out = vec![PauliLabel::z_label(p)];
        out.extend(p.elements().map(|j| PauliLabel::xz_label(p, j)));
        out
    }

    pub fn is_in_alphabet(&self) -> bool {
        (self.x.value() == 0 && self.z.value() == 1) || self.x.value() == 1
    }

    /// Parse `"I"`, `"X"`, `"Z"`, `"XZ"`, `"XZ^3"`, `"X^2Z"`, `"Z^2"`, ...
    pub fn parse(p: Prime, text: &str) -> Result<PauliLabel, PauliError> {
        let bad = || PauliError::BadLabel(text.to_string());
        let s = text.trim();
        if s.eq_ignore_ascii_case("I") {
            return Ok(PauliLabel { x: p.zero(), z: p.zero() });
        }
        let mut x = 0u64;
        let mut z = 0u64;
        let mut rest = s;
        for (letter, slot) in [('X', &mut x), ('Z', &mut z)] {
            if let Some(tail) = rest.strip_prefix(letter) {
                if let Some(tail2) = tail.strip_prefix('^') {
                    let digits: String = tail2.chars().take_while(|c| c.is_ascii_digit()).collect();
                    if digits.is_empty() {
                        return Err(bad());
                    }
                    *slot = digits.parse().map_err(|_| bad())?;
                    rest = &tail2[digits.len()..];
                } else {
                    *slot = 1;
                    rest = tail;
                }
            }
        }
        if !rest.is_empty() || (x == 0 && z == 0) {
            return Err(bad());
        }
        Ok(PauliLabel { x: p.felt(x), z: p.felt(z) })
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, z) = (self.x.value(), self.z.value());
        if x == 0 && z == 0 {
            return write!(f, "I");
        }
        match x {
            0 => {}
            1 => write!(f, "X")?,
            _ => write!(f, "X^{x}")?,
        }
        match z {
            0 => {}
            1 => write!(f, "Z")?,
            _ => write!(f, "Z^{z}")?,
        }
        Ok(())
    }
}

/// Symbolic composite operator `A (x) B^k` with `k` nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositeLabel {
    a: PauliLabel,
    b: PauliLabel,
    k: Felt,
}

impl CompositeLabel {
    pub fn new(a: PauliLabel, b: PauliLabel, k: Felt) -> Result<CompositeLabel, PauliError> {
        for m in [b.modulus(), k.modulus()] {
            if m != a.modulus() {
                return Err(PauliError::ModulusMismatch(a.modulus().get(), m.get()));
            }
        }
        if k.is_zero() {
            return Err(PauliError::ZeroExponent);
        }
        Ok(CompositeLabel { a, b, k })
    }

    pub fn a(&self) -> PauliLabel {
        self.a
    }

    pub fn b(&self) -> PauliLabel {
        self.b
    }

    pub fn k(&self) -> Felt {
        self.k
    }

    pub fn modulus(&self) -> Prime {
        self.a.modulus()
    }
}

impl fmt::Display for CompositeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (x) ({})^{}", self.a, self.b, self.k)
    }
}

/// The raw matrix `X^x Z^z` (this product order is fixed; all phases
/// follow from it).
pub fn operator_from_label(l: &PauliLabel) -> CMatrix {
    let p = l.modulus();
    pauli_x(p).pow(l.x.value()).mul(&pauli_z(p).pow(l.z.value()))
}

/// The exponent `e` with `(X^x Z^z)^p = w^e I`. Zero for odd `p`; for
/// `p = 2` the label `XZ` squares to `-I`.
pub fn label_phase_exponent(l: &PauliLabel) -> u64 {
    let p = l.modulus().get();
    (l.x.value() * l.z.value() % p) * (p * (p - 1) / 2 % p) % p
}

/// The label operator rescaled so that its `p`-th power is exactly the
/// identity: eigenvalues become `w^c` with a well-defined exponent in
/// `F_p`. Divides by the principal `p`-th root of the residual phase.
pub fn normalized_operator(l: &PauliLabel) -> CMatrix {
    let raw = operator_from_label(l);
    let e = label_phase_exponent(l);
    if e == 0 {
        return raw;
    }
    let p = l.modulus();
    let phase = omega_pow(p, e as i64);
    let root = principal_root(phase, p.get());
    raw.scale(root.conj())
}

/// Principal `n`-th root: `exp(i * arg / n)` with `arg` in `(-pi, pi]`.
fn principal_root(z: Complex64, n: u64) -> Complex64 {
    Complex64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

/// Rescale `u` so that `u^p = I`, given that `u^p` is a scalar multiple of
/// the identity. Errors when it is not.
pub fn normalize_phase(u: &CMatrix, p: Prime) -> Result<CMatrix, PauliError> {
    if !u.is_square() {
        return Err(PauliError::DimensionMismatch(u.rows(), u.cols(), u.cols(), u.rows()));
    }
    let w = u.pow(p.get());
    let s = w[(0, 0)];
    if (s.norm() - 1.0).abs() > EPS || !w.approx_eq(&CMatrix::identity(u.rows()).scale(s), EPS) {
        return Err(PauliError::NotScalarPower);
    }
    if (s - Complex64::ONE).norm() < EPS {
        return Ok(u.clone());
    }
    Ok(u.scale(principal_root(s, p.get()).conj()))
}

/// The Fourier basis `|~j> = p^(-1/2) sum_k w^(-kj) |k>`; vector `j` is the
/// eigenvector of `X` with eigenvalue `w^j`.
pub fn fourier_basis(p: Prime) -> Vec<Vec<Complex64>> {
    let n = p.get() as usize;
    let norm = 1.0 / (n as f64).sqrt();
    (0..n as i64)
        .map(|j| {
            (0..n as i64)
                .map(|k| omega_pow(p, -k * j) * norm)
                .collect()
        })
        .collect()
}

/// The eigenvector of `XZ^k` with eigenvalue `w^j`.
///
/// For odd `p` this is the quadratic-phase vector
/// `p^(-1/2) sum_i w^(-ij) w^(k i(i-1)/2) |i>`; the exponent `i(i-1)/2` is
/// an integer, but reducing it mod `p` needs `2` invertible, so `p = 2`
/// instead uses the explicit eigenvectors of the phase-normalized `XZ`
/// (which is `-i XZ`, i.e. minus the second Pauli matrix).
pub fn mub_vector(p: Prime, k: Felt, j: Felt) -> Vec<Complex64> {
    let n = p.get();
    if n == 2 && k.value() == 1 {
        let s = 1.0 / 2f64.sqrt();
        let im = if j.value() == 0 { -s } else { s };
        return vec![Complex64::new(s, 0.0), Complex64::new(0.0, im)];
    }
    let norm = 1.0 / (n as f64).sqrt();
    (0..n as i64)
        .map(|i| {
            let e = -i * j.value() as i64 + k.value() as i64 * (i * (i - 1) / 2);
            omega_pow(p, e) * norm
        })
        .collect()
}

/// The full eigenbasis of `XZ^k`, ordered by eigenvalue exponent.
pub fn mub_basis(p: Prime, k: Felt) -> Vec<Vec<Complex64>> {
    p.elements().map(|j| mub_vector(p, k, j)).collect()
}

/// Computational basis vector `|i>`.
pub fn computational_vector(p: Prime, i: Felt) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; p.get() as usize];
    v[i.value() as usize] = Complex64::ONE;
    v
}

/// The eigenbasis of an alphabet label's normalized operator, ordered by
/// eigenvalue exponent: the computational basis for `Z`, the `XZ^k` basis
/// otherwise.
pub fn label_eigenbasis(l: &PauliLabel) -> Result<Vec<Vec<Complex64>>, PauliError> {
    if !l.is_in_alphabet() {
        return Err(PauliError::NotInAlphabet(l.x.value(), l.z.value()));
    }
    let p = l.modulus();
    if l.x.value() == 0 {
        Ok(p.elements().map(|i| computational_vector(p, i)).collect())
    } else {
        Ok(mub_basis(p, l.z))
    }
}

/// All `p + 1` mutually unbiased bases: the computational basis followed by
/// the eigenbases of `XZ^k` for `k = 0..p-1` (so index 1 is the Fourier
/// basis).
pub fn mub_bases(p: Prime) -> Vec<Vec<Vec<Complex64>>> {
    PauliLabel::alphabet(p)
        .iter()
        .map(|l| label_eigenbasis(l).expect("alphabet labels always have a basis"))
        .collect()
}

fn is_orthonormal(basis: &[Vec<Complex64>]) -> bool {
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (inner(a, b).norm() - expect).abs() > EPS {
                return false;
            }
        }
    }
    true
}

/// Whether every cross overlap satisfies `|<a_i|b_j>|^2 = 1/p` within
/// [`EPS`]. Both inputs must be orthonormal.
pub fn check_unbiased(
    a: &[Vec<Complex64>],
    b: &[Vec<Complex64>],
    p: Prime,
) -> Result<bool, PauliError> {
    if !is_orthonormal(a) || !is_orthonormal(b) {
        return Err(PauliError::NotOrthonormal);
    }
    let target = 1.0 / p.get() as f64;
    for va in a {
        for vb in b {
            if (inner(va, vb).norm_sqr() - target).abs() > EPS {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Kronecker product; first factor major.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// The matrix of `A (x) B^k`, built from the phase-normalized factors so
/// that product eigenvectors carry the exponent `a + k*b` exactly. (For
/// odd `p` the factors are already phase-free; at `p = 2` normalizing the
/// tensor product after the fact would shift the exponent on `XZ (x) XZ`.)
pub fn composite_operator(c: &CompositeLabel) -> CMatrix {
    let a = normalized_operator(&c.a);
    let b = normalized_operator(&c.b).pow(c.k.value());
    a.kron(&b)
}

/// Max-norm commutator test at tolerance [`EPS`].
pub fn commutes(m1: &CMatrix, m2: &CMatrix) -> Result<bool, PauliError> {
    if (m1.rows(), m1.cols()) != (m2.rows(), m2.cols()) {
        return Err(PauliError::DimensionMismatch(
            m1.rows(),
            m1.cols(),
            m2.rows(),
            m2.cols(),
        ));
    }
    Ok(m1.mul(m2).max_abs_diff(&m2.mul(m1)) < EPS)
}

/// Projector onto the `w^c` eigenspace of `u`, for `u` with `u^p = I`:
/// `P_c = (1/p) sum_t w^(-ct) u^t`. Errors when `u^p` strays from the
/// identity beyond [`EPS`].
pub fn eigenprojector(u: &CMatrix, c: Felt) -> Result<CMatrix, PauliError> {
    let p = c.modulus();
    let mut all = eigenprojectors(u, p)?;
    Ok(all.swap_remove(c.value() as usize))
}

/// All `p` eigenprojectors of `u`, indexed by eigenvalue exponent. The
/// powers of `u` are computed once and shared.
pub fn eigenprojectors(u: &CMatrix, p: Prime) -> Result<Vec<CMatrix>, PauliError> {
    if !u.is_square() {
        return Err(PauliError::DimensionMismatch(u.rows(), u.cols(), u.cols(), u.rows()));
    }
    let mut powers = Vec::with_capacity(p.get() as usize);
    powers.push(CMatrix::identity(u.rows()));
    for _ in 1..p.get() {
        powers.push(powers.last().unwrap().mul(u));
    }
    if !powers.last().unwrap().mul(u).is_identity(EPS) {
        return Err(PauliError::UnnormalizedPhase);
    }
    let scale = Complex64::new(1.0 / p.get() as f64, 0.0);
    Ok((0..p.get() as i64)
        .map(|c| {
            let mut acc = CMatrix::zeros(u.rows(), u.cols());
            for (t, power) in powers.iter().enumerate() {
                acc = acc.add(&power.scale(omega_pow(p, -c * t as i64)));
            }
            acc.scale(scale)
        })
        .collect())
}
