//! Two-input logical gates over `F_p`.
//!
//! A gate is a `p x p` truth table, `table[a][b]` being the outcome of the
//! correlation question built from subsystem outcomes `a` and `b`. A gate is
//! admissible when each input alone reveals nothing about the output — the
//! table is a Latin square — and two gates can coexist in one determining
//! set only when they are orthogonal as Latin squares. For prime `p` the
//! admissible gates, up to output relabeling, are exactly the linear maps
//! `(a, b) -> a + i*b mod p` with `i = 1..p-1`.

use std::fmt;

use thiserror::Error;

use crate::field::{Felt, Prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("gate index must be nonzero: the output would ignore one input")]
    ZeroIndex,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("table is not a Latin square")]
    NotLatin,
    #[error("malformed gate table: {0}")]
    Malformed(String),
    #[error("gate enumeration supports p <= 7, got {0}")]
    UnsupportedOrder(u64),
    #[error("gate family must not be empty")]
    EmptyFamily,
}

/// Truth table of a two-input gate over `F_p`, stored row-major:
/// `table[a][b]` is the output for first input `a` and second input `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateTable {
    modulus: Prime,
    cells: Vec<u8>,
}

impl GateTable {
    /// The linear gate `(a, b) -> a + i*b mod p`.
    pub fn linear(p: Prime, i: Felt) -> Result<GateTable, GateError> {
        if i.modulus() != p {
            return Err(GateError::ModulusMismatch(p.get(), i.modulus().get()));
        }
        if i.is_zero() {
            return Err(GateError::ZeroIndex);
        }
        let n = p.get();
        let mut cells = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                cells.push(((a + i.value() * b) % n) as u8);
            }
        }
        Ok(GateTable { modulus: p, cells })
    }

    /// Build a table from explicit rows; every entry must lie in `0..p`.
    pub fn from_rows(p: Prime, rows: &[Vec<u64>]) -> Result<GateTable, GateError> {
        let n = p.get() as usize;
        if rows.len() != n {
            return Err(GateError::Malformed(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(GateError::Malformed(format!(
                    "expected {n} entries per row, got {}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= p.get() {
                    return Err(GateError::Malformed(format!(
                        "entry {v} out of range for modulus {p}"
                    )));
                }
                cells.push(v as u8);
            }
        }
        Ok(GateTable { modulus: p, cells })
    }

    /// Parse the text serialization: `p` lines of `p` space-separated digits.
    pub fn parse(p: Prime, text: &str) -> Result<GateTable, GateError> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<u64>, _> = line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|e| GateError::Malformed(e.to_string()))?);
        }
        GateTable::from_rows(p, &rows)
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.modulus.get() as usize
    }

    pub fn get(&self, a: u64, b: u64) -> u64 {
        let n = self.modulus.get();
        assert!(a < n && b < n, "gate input out of range");
        self.cells[(a * n + b) as usize] as u64
    }

    /// Outcome of the composite question given the two subsystem outcomes.
    /// This is a table lookup, never a re-derivation.
    pub fn apply(&self, a: Felt, b: Felt) -> Result<Felt, GateError> {
        for x in [a, b] {
            if x.modulus() != self.modulus {
                return Err(GateError::ModulusMismatch(
                    self.modulus.get(),
                    x.modulus().get(),
                ));
            }
        }
        Ok(self.modulus.felt(self.get(a.value(), b.value())))
    }

    /// Admissibility of a single gate: knowing one input tells nothing
    /// about the output, i.e. each row and each column is a bijection.
    pub fn is_latin(&self) -> bool {
        let n = self.order();
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                let rv = self.cells[a * n + b] as usize;
                let cv = self.cells[b * n + a] as usize;
                if row_seen[rv] || col_seen[cv] {
                    return false;
                }
                row_seen[rv] = true;
                col_seen[cv] = true;
            }
        }
        true
    }

    /// Mutual admissibility of two gates: the joint output map
    /// `(a, b) -> (self[a][b], other[a][b])` hits every pair exactly once
    /// (the two Latin squares are orthogonal).
    pub fn is_orthogonal_to(&self, other: &GateTable) -> Result<bool, GateError> {
        if self.modulus != other.modulus {
            return Err(GateError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        let n = self.order();
        let mut seen = vec![false; n * n];
        for idx in 0..n * n {
            let key = self.cells[idx] as usize * n + other.cells[idx] as usize;
            if seen[key] {
                return Ok(false);
            }
            seen[key] = true;
        }
        Ok(true)
    }

    /// Whether some output relabeling turns `self` into `other`. Gates that
    /// differ only by a permutation of output symbols carry the same
    /// correlation and count as one gate.
    pub fn equivalent_to(&self, other: &GateTable) -> Result<bool, GateError> {
        if self.modulus != other.modulus {
            return Err(GateError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        let n = self.order();
        let mut map = vec![None; n];
        let mut hit = vec![false; n];
        for idx in 0..n * n {
            let from = self.cells[idx] as usize;
            let to = other.cells[idx] as usize;
            match map[from] {
                None => {
                    if hit[to] {
                        return Ok(false);
                    }
                    map[from] = Some(to);
                    hit[to] = true;
                }
                Some(t) if t == to => {}
                Some(_) => return Ok(false),
            }
        }
        Ok(true)
    }

    /// The unique representative of this gate's relabeling class whose
    /// column 0 is the identity (`table[a][0] = a`). Idempotent; linear
    /// gates are already canonical since `a + i*0 = a`.
    pub fn canonicalize(&self) -> Result<GateTable, GateError> {
        if !self.is_latin() {
            return Err(GateError::NotLatin);
        }
        let n = self.order();
        // invert the column-0 map a -> table[a][0]
        let mut relabel = vec![0u8; n];
        for a in 0..n {
            relabel[self.cells[a * n] as usize] = a as u8;
        }
        let cells = self.cells.iter().map(|&v| relabel[v as usize]).collect();
        Ok(GateTable {
            modulus: self.modulus,
            cells,
        })
    }
}

impl fmt::Display for GateTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                if b > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.cells[a * n + b])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// All Latin squares of order `p`, by cell-wise backtracking, in
/// lexicographic table order. Intended for small orders (the exhaustive
/// checks use 2 and 3; order 5 is still fast).
pub fn all_latin_squares(p: Prime) -> Vec<GateTable> {
    let n = p.get() as usize;
    let mut out = Vec::new();
    let mut cells = vec![0u8; n * n];
    let mut row_used = vec![0u16; n];
    let mut col_used = vec![0u16; n];
    fn rec(
        n: usize,
        idx: usize,
        cells: &mut Vec<u8>,
        row_used: &mut Vec<u16>,
        col_used: &mut Vec<u16>,
        p: Prime,
        out: &mut Vec<GateTable>,
    ) {
        if idx == n * n {
            out.push(GateTable {
                modulus: p,
                cells: cells.clone(),
            });
            return;
        }
        let (r, c) = (idx / n, idx % n);
        for v in 0..n as u16 {
            let bit = 1u16 << v;
            if row_used[r] & bit != 0 || col_used[c] & bit != 0 {
                continue;
            }
            cells[idx] = v as u8;
            row_used[r] |= bit;
            col_used[c] |= bit;
            rec(n, idx + 1, cells, row_used, col_used, p, out);
            row_used[r] &= !bit;
            col_used[c] &= !bit;
        }
    }
    rec(n, 0, &mut cells, &mut row_used, &mut col_used, p, &mut out);
    out
}

/// Search for a Latin square orthogonal to every member of `family`
/// (cell-wise backtracking). `None` proves the family cannot be extended.
pub fn orthogonal_extension(family: &[GateTable]) -> Option<GateTable> {
    let p = family.first()?.modulus;
    let n = p.get() as usize;
    let mut cells = vec![0u8; n * n];
    let mut row_used = vec![0u16; n];
    let mut col_used = vec![0u16; n];
    // pair_used[m][v] = bitmask of candidate values already paired with
    // member m's output v
    let mut pair_used: Vec<Vec<u16>> = vec![vec![0u16; n]; family.len()];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        n: usize,
        idx: usize,
        family: &[GateTable],
        cells: &mut Vec<u8>,
        row_used: &mut Vec<u16>,
        col_used: &mut Vec<u16>,
        pair_used: &mut Vec<Vec<u16>>,
        p: Prime,
    ) -> Option<GateTable> {
        if idx == n * n {
            return Some(GateTable {
                modulus: p,
                cells: cells.clone(),
            });
        }
        let (r, c) = (idx / n, idx % n);
        'candidates: for v in 0..n as u16 {
            let bit = 1u16 << v;
            if row_used[r] & bit != 0 || col_used[c] & bit != 0 {
                continue;
            }
            for (m, g) in family.iter().enumerate() {
                if pair_used[m][g.cells[idx] as usize] & bit != 0 {
                    continue 'candidates;
                }
            }
            cells[idx] = v as u8;
            row_used[r] |= bit;
            col_used[c] |= bit;
            for (m, g) in family.iter().enumerate() {
                pair_used[m][g.cells[idx] as usize] |= bit;
            }
            if let Some(found) = rec(n, idx + 1, family, cells, row_used, col_used, pair_used, p)
            {
                return Some(found);
            }
            row_used[r] &= !bit;
            col_used[c] &= !bit;
            for (m, g) in family.iter().enumerate() {
                pair_used[m][g.cells[idx] as usize] &= !bit;
            }
        }
        None
    }
    rec(
        n,
        0,
        family,
        &mut cells,
        &mut row_used,
        &mut col_used,
        &mut pair_used,
        p,
    )
}

/// A maximal set of pairwise-orthogonal admissible gates, one canonical
/// representative per relabeling class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateFamily {
    modulus: Prime,
    gates: Vec<GateTable>,
}

impl GateFamily {
    /// The canonical family for prime `p`.
    ///
    /// For `p <= 3` this enumerates every Latin square of order `p`,
    /// collapses relabeling classes, and keeps a maximal pairwise-orthogonal
    /// set. For `p` in `{5, 7}` it starts from the linear gates and proves
    /// maximality by exhausting orthogonal extensions (the search fails).
    /// Either path ends with the same extension check, so the returned
    /// family is maximal by construction.
    pub fn canonical(p: Prime) -> Result<GateFamily, GateError> {
        if p.get() > 7 {
            return Err(GateError::UnsupportedOrder(p.get()));
        }
        let mut gates: Vec<GateTable> = if p.get() <= 3 {
            let mut classes: Vec<GateTable> = Vec::new();
            for sq in all_latin_squares(p) {
                let canon = sq.canonicalize()?;
                if !classes.contains(&canon) {
                    classes.push(canon);
                }
            }
            classes.sort();
            let mut picked: Vec<GateTable> = Vec::new();
            for g in classes {
                if picked
                    .iter()
                    .all(|h| h.is_orthogonal_to(&g).unwrap_or(false))
                {
                    picked.push(g);
                }
            }
            picked
        } else {
            p.units()
                .map(|i| GateTable::linear(p, i))
                .collect::<Result<_, _>>()?
        };
        while let Some(ext) = orthogonal_extension(&gates) {
            let canon = ext.canonicalize()?;
            gates.push(canon);
        }
        gates.sort();
        let family = GateFamily { modulus: p, gates };
        family.validate()?;
        Ok(family)
    }

    /// Assemble a family from explicit gates, checking the invariants:
    /// every member admissible, every pair orthogonal, size within the
    /// `p - 1` bound.
    pub fn from_gates(p: Prime, gates: Vec<GateTable>) -> Result<GateFamily, GateError> {
        let family = GateFamily { modulus: p, gates };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<(), GateError> {
        if self.gates.is_empty() {
            return Err(GateError::EmptyFamily);
        }
        for g in &self.gates {
            if g.modulus != self.modulus {
                return Err(GateError::ModulusMismatch(
                    self.modulus.get(),
                    g.modulus.get(),
                ));
            }
            if !g.is_latin() {
                return Err(GateError::NotLatin);
            }
        }
        for (i, g) in self.gates.iter().enumerate() {
            for h in &self.gates[i + 1..] {
                if !g.is_orthogonal_to(h)? {
                    return Err(GateError::Malformed(
                        "family members must be pairwise orthogonal".into(),
                    ));
                }
            }
        }
        if self.gates.len() as u64 > self.modulus.get() - 1 {
            return Err(GateError::Malformed(format!(
                "family exceeds the p-1 bound: {} gates for p = {}",
                self.gates.len(),
                self.modulus
            )));
        }
        Ok(())
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn gates(&self) -> &[GateTable] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}
