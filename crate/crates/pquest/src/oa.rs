//! Orthogonal arrays and the gate-family correspondence.
//!
//! An `OA(N, k, s, t)` is an `N x k` array over `s` symbols in which every
//! `N x t` column subarray contains each `t`-tuple exactly `N / s^t` times.
//! Writing the truth tables of a gate family side by side over the common
//! input columns produces exactly such an array with `N = p^2`, level `p`,
//! and strength 2 — and the known `p + 1` column bound for these arrays is
//! what caps the family at `p - 1` gates.

use std::fmt;

use thiserror::Error;

use crate::field::Prime;
use crate::gates::{GateFamily, GateTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OaError {
    #[error("entry {0} out of range for level {1}")]
    EntryOutOfRange(u64, u64),
    #[error("row count {rows} is not divisible by {levels}^{strength}")]
    NonIntegralIndex {
        rows: usize,
        levels: u64,
        strength: u32,
    },
    #[error("array shape is inconsistent: {0}")]
    BadShape(String),
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("strength must be at least 1 and at most the column count")]
    BadStrength,
}

/// Outcome of a strength check: either the index `lambda`, or the first
/// offending column subset together with the tuple whose count is wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrengthCheck {
    Ok {
        lambda: usize,
    },
    Violation {
        cols: Vec<usize>,
        tuple: Vec<u8>,
        count: usize,
    },
}

impl StrengthCheck {
    pub fn passed(&self) -> bool {
        matches!(self, StrengthCheck::Ok { .. })
    }
}

/// An `N x k` array over `s` levels with a claimed strength `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    rows: usize,
    cols: usize,
    levels: u64,
    strength: u32,
    data: Vec<u8>,
}

impl OrthogonalArray {
    /// Build from row-major data. Rejects out-of-range entries and row
    /// counts for which `lambda = N / s^t` is not an integer.
    pub fn new(
        levels: u64,
        strength: u32,
        cols: usize,
        data: Vec<u8>,
    ) -> Result<OrthogonalArray, OaError> {
        if cols == 0 || !data.len().is_multiple_of(cols) {
            return Err(OaError::BadShape(format!(
                "{} entries do not fill rows of {cols} columns",
                data.len()
            )));
        }
        if strength == 0 || strength as usize > cols {
            return Err(OaError::BadStrength);
        }
        for &v in &data {
            if u64::from(v) >= levels {
                return Err(OaError::EntryOutOfRange(u64::from(v), levels));
            }
        }
        let rows = data.len() / cols;
        let block = (levels as usize).pow(strength);
        if !rows.is_multiple_of(block) {
            return Err(OaError::NonIntegralIndex {
                rows,
                levels,
                strength,
            });
        }
        Ok(OrthogonalArray {
            rows,
            cols,
            levels,
            strength,
            data,
        })
    }

    /// Combine a gate family into one array: row `(a, b)` in lexicographic
    /// order is `[a, b, g_1(a,b), ..., g_m(a,b)]`.
    pub fn from_gates(family: &GateFamily) -> Result<OrthogonalArray, OaError> {
        let p = family.modulus().get();
        let cols = family.len() + 2;
        let mut data = Vec::with_capacity((p * p) as usize * cols);
        for a in 0..p {
            for b in 0..p {
                data.push(a as u8);
                data.push(b as u8);
                for g in family.gates() {
                    data.push(g.get(a, b) as u8);
                }
            }
        }
        OrthogonalArray::new(p, 2, cols, data)
    }

    /// Append one more gate column to a `p^2`-row array whose first two
    /// columns run over `(a, b)` lexicographically.
    pub fn append_gate_column(&self, gate: &GateTable) -> Result<OrthogonalArray, OaError> {
        let p = gate.modulus().get();
        if self.rows != (p * p) as usize {
            return Err(OaError::BadShape(format!(
                "expected {} rows for an order-{p} gate column, got {}",
                p * p,
                self.rows
            )));
        }
        let cols = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for (r, row) in self.data.chunks(self.cols).enumerate() {
            data.extend_from_slice(row);
            let (a, b) = ((r as u64) / p, (r as u64) % p);
            data.push(gate.get(a, b) as u8);
        }
        OrthogonalArray::new(self.levels, self.strength, cols, data)
    }

    /// The subarray keeping only the given columns, same claimed strength.
    pub fn select_columns(&self, keep: &[usize]) -> Result<OrthogonalArray, OaError> {
        if keep.iter().any(|&c| c >= self.cols) {
            return Err(OaError::BadShape("column index out of range".into()));
        }
        let mut data = Vec::with_capacity(self.rows * keep.len());
        for row in self.data.chunks(self.cols) {
            for &c in keep {
                data.push(row[c]);
            }
        }
        OrthogonalArray::new(self.levels, self.strength, keep.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn levels(&self) -> u64 {
        self.levels
    }

    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.cols + col]
    }

    /// Exhaustive strength verification: brute-force tuple counting over
    /// every choice of `t` columns. Deliberately shortcut-free so the check
    /// stays auditable; `N` never exceeds 49 here.
    pub fn check_strength(&self) -> StrengthCheck {
        let t = self.strength as usize;
        let lambda = self.rows / (self.levels as usize).pow(self.strength);
        let tuple_count = (self.levels as usize).pow(self.strength);
        let mut cols: Vec<usize> = (0..t).collect();
        loop {
            let mut counts = vec![0usize; tuple_count];
            for row in self.data.chunks(self.cols) {
                let mut key = 0usize;
                for &c in &cols {
                    key = key * self.levels as usize + row[c] as usize;
                }
                counts[key] += 1;
            }
            if let Some(bad) = counts.iter().position(|&c| c != lambda) {
                // decode the offending tuple from its mixed-radix key
                let mut tuple = vec![0u8; t];
                let mut key = bad;
                for slot in (0..t).rev() {
                    tuple[slot] = (key % self.levels as usize) as u8;
                    key /= self.levels as usize;
                }
                return StrengthCheck::Violation {
                    cols: cols.clone(),
                    tuple,
                    count: counts[bad],
                };
            }
            // next t-combination of columns in lexicographic order
            let mut i = t;
            loop {
                if i == 0 {
                    return StrengthCheck::Ok { lambda };
                }
                i -= 1;
                if cols[i] != i + self.cols - t {
                    cols[i] += 1;
                    for j in i + 1..t {
                        cols[j] = cols[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn verify_strength(&self) -> bool {
        self.check_strength().passed()
    }

    /// One row per line, comma-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.data.chunks(self.cols) {
            let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(levels: u64, strength: u32, text: &str) -> Result<OrthogonalArray, OaError> {
        let mut data = Vec::new();
        let mut cols = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<u64>, _> = line.split(',').map(|f| f.trim().parse()).collect();
            let row = row.map_err(|e| OaError::MalformedCsv(e.to_string()))?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c == row.len() => {}
                Some(c) => {
                    return Err(OaError::MalformedCsv(format!(
                        "row has {} fields, expected {c}",
                        row.len()
                    )))
                }
            }
            for v in row {
                if v > u8::MAX as u64 {
                    return Err(OaError::EntryOutOfRange(v, levels));
                }
                data.push(v as u8);
            }
        }
        let cols = cols.ok_or_else(|| OaError::MalformedCsv("empty input".into()))?;
        OrthogonalArray::new(levels, strength, cols, data)
    }
}

impl fmt::Display for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

/// The column ceiling for an array with `p^2` rows, level `p`, strength 2.
pub fn max_oa_columns(p: Prime) -> u64 {
    p.get() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::all_latin_squares;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn ternary_family() -> GateFamily {
        GateFamily::canonical(p(3)).unwrap()
    }

    // The 9x4 combined array for the ternary family, frozen row by row.
    const TERNARY_OA: [[u8; 4]; 9] = [
        [0, 0, 0, 0],
        [0, 1, 1, 2],
        [0, 2, 2, 1],
        [1, 0, 1, 1],
        [1, 1, 2, 0],
        [1, 2, 0, 2],
        [2, 0, 2, 2],
        [2, 1, 0, 1],
        [2, 2, 1, 0],
    ];

    #[test]
    fn ternary_combination_matches_reference_rows() {
        let oa = OrthogonalArray::from_gates(&ternary_family()).unwrap();
        assert_eq!(oa.rows(), 9);
        assert_eq!(oa.cols(), 4);
        for (r, row) in TERNARY_OA.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(oa.get(r, c), v, "row {r} col {c}");
            }
        }
        assert_eq!(oa.check_strength(), StrengthCheck::Ok { lambda: 1 });
    }

    #[test]
    fn any_single_entry_mutation_breaks_strength() {
        let oa = OrthogonalArray::from_gates(&ternary_family()).unwrap();
        let base: Vec<u8> = (0..9)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .map(|(r, c)| oa.get(r, c))
            .collect();
        for idx in 0..base.len() {
            for delta in 1..3u8 {
                let mut data = base.clone();
                data[idx] = (data[idx] + delta) % 3;
                let mutated = OrthogonalArray::new(3, 2, 4, data).unwrap();
                assert!(!mutated.verify_strength(), "mutation at {idx} passed");
            }
        }
    }

    #[test]
    fn degenerate_single_column_strength_one() {
        let oa = OrthogonalArray::new(3, 1, 1, vec![0, 1, 2, 0, 1, 2]).unwrap();
        assert_eq!(oa.check_strength(), StrengthCheck::Ok { lambda: 2 });
    }

    #[test]
    fn non_integral_lambda_is_structural_error() {
        assert_eq!(
            OrthogonalArray::new(3, 2, 2, vec![0; 2 * 8]),
            Err(OaError::NonIntegralIndex {
                rows: 8,
                levels: 3,
                strength: 2
            })
        );
    }

    #[test]
    fn entries_must_stay_below_level() {
        assert_eq!(
            OrthogonalArray::new(2, 1, 1, vec![0, 2]),
            Err(OaError::EntryOutOfRange(2, 2))
        );
    }

    #[test]
    fn binary_combination_is_a_4x3_strength_2_array() {
        let family = GateFamily::canonical(p(2)).unwrap();
        let oa = OrthogonalArray::from_gates(&family).unwrap();
        assert_eq!((oa.rows(), oa.cols()), (4, 3));
        assert!(oa.verify_strength());
    }

    #[test]
    fn quinary_combination_reaches_the_column_bound() {
        let family = GateFamily::canonical(p(5)).unwrap();
        let oa = OrthogonalArray::from_gates(&family).unwrap();
        assert_eq!((oa.rows(), oa.cols()), (25, 6));
        assert_eq!(oa.cols() as u64, max_oa_columns(p(5)));
        assert!(oa.verify_strength());
    }

    #[test]
    fn every_canonical_family_combines_to_a_maximal_array() {
        for q in [2u64, 3, 5, 7] {
            let family = GateFamily::canonical(p(q)).unwrap();
            let oa = OrthogonalArray::from_gates(&family).unwrap();
            assert_eq!(oa.cols() as u64, max_oa_columns(p(q)), "p = {q}");
            assert!(oa.verify_strength(), "p = {q}");
        }
    }

    #[test]
    fn column_bound_values() {
        assert_eq!(max_oa_columns(p(2)), 3);
        assert_eq!(max_oa_columns(p(3)), 4);
        assert_eq!(max_oa_columns(p(5)), 6);
    }

    #[test]
    fn strength_is_monotone_under_column_deletion() {
        let oa = OrthogonalArray::from_gates(&ternary_family()).unwrap();
        for drop in 0..4 {
            let keep: Vec<usize> = (0..4).filter(|&c| c != drop).collect();
            assert!(oa.select_columns(&keep).unwrap().verify_strength());
        }
        assert!(oa.select_columns(&[0, 2]).unwrap().verify_strength());
    }

    #[test]
    fn no_latin_square_extends_a_maximal_array() {
        for q in [2u64, 3] {
            let family = GateFamily::canonical(p(q)).unwrap();
            let oa = OrthogonalArray::from_gates(&family).unwrap();
            for sq in all_latin_squares(p(q)) {
                let extended = oa.append_gate_column(&sq).unwrap();
                assert!(
                    !extended.verify_strength(),
                    "appending a square extended the p = {q} array"
                );
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let oa = OrthogonalArray::from_gates(&ternary_family()).unwrap();
        let csv = oa.to_csv();
        let back = OrthogonalArray::from_csv(3, 2, &csv).unwrap();
        assert_eq!(back, oa);
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(matches!(
            OrthogonalArray::from_csv(3, 2, "0,1\n2"),
            Err(OaError::MalformedCsv(_))
        ));
        assert!(matches!(
            OrthogonalArray::from_csv(3, 2, "a,b,c"),
            Err(OaError::MalformedCsv(_))
        ));
    }
}
