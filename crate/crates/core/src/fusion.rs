//! Fusion rings: a finite basis with non-negative integer structural constants
//! `m^k_{i,j}` subject to the associativity condition
//! `sum_t m^k_{i,t} m^t_{j,l} = sum_s m^s_{i,j} m^k_{s,l}`.
//!
//! The table is stored flat with `table[(i*rank + j)*rank + k] = m^k_{i,j}`,
//! so `[i][j] = sum_k m^k_{i,j} [k]` in the enveloping ring. All arithmetic is
//! checked 64-bit; overflow is reported, never wrapped.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("arithmetic overflow during {0}")]
    Overflow(&'static str),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("empty input sequence")]
    EmptyInput,
    #[error("element index {index} out of range for rank {rank}")]
    ElementOutOfRange { index: usize, rank: usize },
    #[error("malformed ring description: {0}")]
    Shape(String),
    #[error("ring fails validation: {0}")]
    Invalid(ValidationReport),
    #[error("enumeration bounds exceeded: {0}")]
    EnumerationBounds(String),
}

pub(crate) fn cadd(a: i64, b: i64, what: &'static str) -> Result<i64, FusionError> {
    a.checked_add(b).ok_or(FusionError::Overflow(what))
}

pub(crate) fn cmul(a: i64, b: i64, what: &'static str) -> Result<i64, FusionError> {
    a.checked_mul(b).ok_or(FusionError::Overflow(what))
}

/// One failed ring axiom, with enough coordinates to locate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroRank,
    NegativeEntry {
        i: usize,
        j: usize,
        k: usize,
        value: i64,
    },
    Associativity {
        i: usize,
        j: usize,
        l: usize,
        k: usize,
        lhs: i64,
        rhs: i64,
    },
    IdentityAxiom {
        i: usize,
        j: usize,
        k: usize,
        value: i64,
        expected: i64,
    },
    Overflow {
        context: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroRank => write!(f, "rank must be positive"),
            Violation::NegativeEntry { i, j, k, value } => {
                write!(f, "negative entry m^{k}_{{{i},{j}}} = {value}")
            }
            Violation::Associativity {
                i,
                j,
                l,
                k,
                lhs,
                rhs,
            } => write!(
                f,
                "associativity fails at (i,j,l,k)=({i},{j},{l},{k}): {lhs} != {rhs}"
            ),
            Violation::IdentityAxiom {
                i,
                j,
                k,
                value,
                expected,
            } => write!(
                f,
                "identity axiom fails: m^{k}_{{{i},{j}}} = {value}, expected {expected}"
            ),
            Violation::Overflow { context } => write!(f, "overflow while checking {context}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "OK");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the fusion-ring axioms on a raw rank^3 table. The identity axiom is
/// only checked when an identity index is declared.
pub fn validate_table(rank: usize, table: &[i64], identity: Option<usize>) -> ValidationReport {
    let mut report = ValidationReport::default();
    if rank == 0 {
        report.violations.push(Violation::ZeroRank);
        return report;
    }
    assert_eq!(
        table.len(),
        rank * rank * rank,
        "table must have rank^3 entries"
    );
    let at = |i: usize, j: usize, k: usize| table[(i * rank + j) * rank + k];
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                let value = at(i, j, k);
                if value < 0 {
                    report
                        .violations
                        .push(Violation::NegativeEntry { i, j, k, value });
                }
            }
        }
    }
    if !report.is_ok() {
        return report;
    }
    for i in 0..rank {
        for j in 0..rank {
            for l in 0..rank {
                for k in 0..rank {
                    let mut lhs = Ok(0i64);
                    let mut rhs = Ok(0i64);
                    for t in 0..rank {
                        lhs = lhs.and_then(|acc| {
                            cadd(
                                acc,
                                cmul(at(i, t, k), at(j, l, t), "associativity")?,
                                "associativity",
                            )
                        });
                        rhs = rhs.and_then(|acc| {
                            cadd(
                                acc,
                                cmul(at(i, j, t), at(t, l, k), "associativity")?,
                                "associativity",
                            )
                        });
                    }
                    match (lhs, rhs) {
                        (Ok(lhs), Ok(rhs)) => {
                            if lhs != rhs {
                                report.violations.push(Violation::Associativity {
                                    i,
                                    j,
                                    l,
                                    k,
                                    lhs,
                                    rhs,
                                });
                            }
                        }
                        _ => report.violations.push(Violation::Overflow {
                            context: format!("associativity at (i,j,l,k)=({i},{j},{l},{k})"),
                        }),
                    }
                }
            }
        }
    }
    if let Some(e) = identity {
        assert!(e < rank, "identity index out of range");
        for t in 0..rank {
            for s in 0..rank {
                let expected = i64::from(s == t);
                let right = at(t, e, s);
                if right != expected {
                    report.violations.push(Violation::IdentityAxiom {
                        i: t,
                        j: e,
                        k: s,
                        value: right,
                        expected,
                    });
                }
                let left = at(e, t, s);
                if left != expected {
                    report.violations.push(Violation::IdentityAxiom {
                        i: e,
                        j: t,
                        k: s,
                        value: left,
                        expected,
                    });
                }
            }
        }
    }
    report
}

/// A validated fusion ring. Elements are canonically indexed `0..rank`; the
/// linear order on the basis used elsewhere defaults to this index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    rank: usize,
    names: Vec<String>,
    identity: Option<usize>,
    table: Vec<i64>,
}

impl FusionRing {
    pub fn new(
        names: Vec<String>,
        table: Vec<i64>,
        identity: Option<usize>,
    ) -> Result<Self, FusionError> {
        let rank = names.len();
        if rank == 0 {
            return Err(FusionError::Invalid(ValidationReport {
                violations: vec![Violation::ZeroRank],
            }));
        }
        if table.len() != rank * rank * rank {
            return Err(FusionError::Shape(format!(
                "table has {} entries, expected rank^3 = {}",
                table.len(),
                rank * rank * rank
            )));
        }
        for (n, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(',') {
                return Err(FusionError::Shape(format!(
                    "element name {n:?} must be non-empty and comma-free, got {name:?}"
                )));
            }
            if names[..n].contains(name) {
                return Err(FusionError::Shape(format!(
                    "duplicate element name {name:?}"
                )));
            }
        }
        if let Some(e) = identity {
            if e >= rank {
                return Err(FusionError::ElementOutOfRange { index: e, rank });
            }
        }
        let report = validate_table(rank, &table, identity);
        if !report.is_ok() {
            return Err(FusionError::Invalid(report));
        }
        Ok(FusionRing {
            rank,
            names,
            identity,
            table,
        })
    }

    /// The two-element ring {e, x} with x*x = m x + n e.
    pub fn rank2(m: i64, n: i64) -> Self {
        assert!(m >= 0 && n >= 0);
        let mut table = vec![0i64; 8];
        let mut set = |i: usize, j: usize, k: usize, v: i64| table[(i * 2 + j) * 2 + k] = v;
        set(0, 0, 0, 1);
        set(0, 1, 1, 1);
        set(1, 0, 1, 1);
        set(1, 1, 0, n);
        set(1, 1, 1, m);
        FusionRing::new(vec!["e".into(), "x".into()], table, Some(0))
            .expect("rank-2 identity tables are associative")
    }

    /// The group ring of the group given by its multiplication table.
    pub fn group_ring(mult: &[Vec<usize>]) -> Result<Self, FusionError> {
        let g = mult.len();
        if g == 0 {
            return Err(FusionError::Shape("empty group table".into()));
        }
        let mut table = vec![0i64; g * g * g];
        for (i, row) in mult.iter().enumerate() {
            if row.len() != g {
                return Err(FusionError::Shape("group table is not square".into()));
            }
            for (j, &k) in row.iter().enumerate() {
                if k >= g {
                    return Err(FusionError::Shape(format!(
                        "group table entry {k} out of range"
                    )));
                }
                table[(i * g + j) * g + k] = 1;
            }
        }
        let identity = (0..g).find(|&e| (0..g).all(|t| mult[t][e] == t && mult[e][t] == t));
        let names = (0..g)
            .map(|i| {
                if Some(i) == identity {
                    "e".to_string()
                } else {
                    format!("g{i}")
                }
            })
            .collect();
        FusionRing::new(names, table, identity)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    /// m^k_{i,j}
    pub fn entry(&self, i: usize, j: usize, k: usize) -> i64 {
        self.table[(i * self.rank + j) * self.rank + k]
    }

    /// The coefficients of [i][j], as a slice indexed by k.
    pub fn product_coeffs(&self, i: usize, j: usize) -> &[i64] {
        let base = (i * self.rank + j) * self.rank;
        &self.table[base..base + self.rank]
    }

    pub fn table(&self) -> &[i64] {
        &self.table
    }

    pub fn validate(&self) -> ValidationReport {
        validate_table(self.rank, &self.table, self.identity)
    }

    /// The unique index e with m^s_{t,e} = m^s_{e,t} = delta_{s,t}, if any.
    pub fn find_identity(&self) -> Option<usize> {
        (0..self.rank).find(|&e| {
            (0..self.rank).all(|t| {
                (0..self.rank).all(|s| {
                    let expected = i64::from(s == t);
                    self.entry(t, e, s) == expected && self.entry(e, t, s) == expected
                })
            })
        })
    }

    pub fn basis(&self, i: usize) -> EnvelopingElement<'_> {
        assert!(i < self.rank);
        let mut coeffs = vec![0i64; self.rank];
        coeffs[i] = 1;
        EnvelopingElement { ring: self, coeffs }
    }

    pub fn element(&self, coeffs: Vec<i64>) -> Result<EnvelopingElement<'_>, FusionError> {
        if coeffs.len() != self.rank {
            return Err(FusionError::Shape(format!(
                "coefficient vector has length {}, expected {}",
                coeffs.len(),
                self.rank
            )));
        }
        Ok(EnvelopingElement { ring: self, coeffs })
    }
}

/// An element of the enveloping ring A(S): an integer combination of basis symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopingElement<'r> {
    ring: &'r FusionRing,
    coeffs: Vec<i64>,
}

impl<'r> EnvelopingElement<'r> {
    pub fn ring(&self) -> &'r FusionRing {
        self.ring
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn add(&self, other: &EnvelopingElement<'r>) -> Result<EnvelopingElement<'r>, FusionError> {
        if self.ring != other.ring {
            return Err(FusionError::RingMismatch);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            coeffs.push(cadd(*a, *b, "enveloping addition")?);
        }
        Ok(EnvelopingElement {
            ring: self.ring,
            coeffs,
        })
    }

    /// Bilinear extension of the table: the coefficient of s in the product is
    /// sum_{i,j} a_i b_j m^s_{i,j}.
    pub fn multiply(
        &self,
        other: &EnvelopingElement<'r>,
    ) -> Result<EnvelopingElement<'r>, FusionError> {
        if self.ring != other.ring {
            return Err(FusionError::RingMismatch);
        }
        let rank = self.ring.rank;
        let mut coeffs = vec![0i64; rank];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = cmul(a, b, "enveloping multiplication")?;
                for (s, out) in coeffs.iter_mut().enumerate() {
                    let term = cmul(ab, self.ring.entry(i, j, s), "enveloping multiplication")?;
                    *out = cadd(*out, term, "enveloping multiplication")?;
                }
            }
        }
        Ok(EnvelopingElement {
            ring: self.ring,
            coeffs,
        })
    }
}

/// The n-ary structural constant m^output_{inputs}: the coefficient of `output`
/// in the product of the inputs (independent of parenthesization).
pub fn nary_constant(
    ring: &FusionRing,
    output: usize,
    inputs: &[usize],
) -> Result<i64, FusionError> {
    if inputs.is_empty() {
        return Err(FusionError::EmptyInput);
    }
    if output >= ring.rank {
        return Err(FusionError::ElementOutOfRange {
            index: output,
            rank: ring.rank,
        });
    }
    for &x in inputs {
        if x >= ring.rank {
            return Err(FusionError::ElementOutOfRange {
                index: x,
                rank: ring.rank,
            });
        }
    }
    let mut acc = ring.basis(inputs[0]);
    for &x in &inputs[1..] {
        acc = acc.multiply(&ring.basis(x))?;
    }
    Ok(acc.coeff(output))
}

/// A morphism of fusion rings: a non-negative integer matrix n^t_s
/// (target.rank x source.rank) intertwining the two tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionMorphism {
    pub source: FusionRing,
    pub target: FusionRing,
    /// Row-major target.rank x source.rank; entry (t, s) is n^t_s.
    pub matrix: Vec<i64>,
}

impl FusionMorphism {
    pub fn new(
        source: FusionRing,
        target: FusionRing,
        matrix: Vec<i64>,
    ) -> Result<Self, FusionError> {
        if matrix.len() != source.rank * target.rank {
            return Err(FusionError::Shape(format!(
                "morphism matrix has {} entries, expected {} x {}",
                matrix.len(),
                target.rank,
                source.rank
            )));
        }
        Ok(FusionMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(ring: &FusionRing) -> Self {
        let r = ring.rank;
        let mut matrix = vec![0i64; r * r];
        for i in 0..r {
            matrix[i * r + i] = 1;
        }
        FusionMorphism {
            source: ring.clone(),
            target: ring.clone(),
            matrix,
        }
    }

    pub fn coeff(&self, t: usize, s: usize) -> i64 {
        self.matrix[t * self.source.rank + s]
    }

    /// other then self (matrix product); requires self.source == other.target.
    pub fn compose(&self, other: &FusionMorphism) -> Result<FusionMorphism, FusionError> {
        if self.source != other.target {
            return Err(FusionError::RingMismatch);
        }
        let rows = self.target.rank;
        let mid = self.source.rank;
        let cols = other.source.rank;
        let mut matrix = vec![0i64; rows * cols];
        for t in 0..rows {
            for s in 0..cols {
                let mut acc = 0i64;
                for u in 0..mid {
                    acc = cadd(
                        acc,
                        cmul(self.coeff(t, u), other.coeff(u, s), "morphism composition")?,
                        "morphism composition",
                    )?;
                }
                matrix[t * cols + s] = acc;
            }
        }
        Ok(FusionMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix,
        })
    }
}

/// Checks the intertwining condition
/// `sum_s m^s_{s1,s2} n^t_s = sum_{t1,t2} m'^t_{t1,t2} n^{t1}_{s1} n^{t2}_{s2}`.
/// Violations are reported as associativity-style records keyed by (s1, s2, t).
pub fn validate_morphism(m: &FusionMorphism) -> ValidationReport {
    let mut report = ValidationReport::default();
    let sr = m.source.rank;
    let tr = m.target.rank;
    for s1 in 0..sr {
        for s2 in 0..sr {
            for t in 0..tr {
                let mut lhs = Ok(0i64);
                for s in 0..sr {
                    lhs = lhs.and_then(|acc| {
                        cadd(
                            acc,
                            cmul(m.source.entry(s1, s2, s), m.coeff(t, s), "intertwining")?,
                            "intertwining",
                        )
                    });
                }
                let mut rhs = Ok(0i64);
                for t1 in 0..tr {
                    for t2 in 0..tr {
                        rhs = rhs.and_then(|acc| {
                            let prod = cmul(
                                m.target.entry(t1, t2, t),
                                cmul(m.coeff(t1, s1), m.coeff(t2, s2), "intertwining")?,
                                "intertwining",
                            )?;
                            cadd(acc, prod, "intertwining")
                        });
                    }
                }
                match (lhs, rhs) {
                    (Ok(lhs), Ok(rhs)) => {
                        if lhs != rhs {
                            report.violations.push(Violation::Associativity {
                                i: s1,
                                j: s2,
                                l: 0,
                                k: t,
                                lhs,
                                rhs,
                            });
                        }
                    }
                    _ => report.violations.push(Violation::Overflow {
                        context: format!("intertwining at (s1,s2,t)=({s1},{s2},{t})"),
                    }),
                }
            }
        }
    }
    report
}

/// A linear order on the basis of a ring: `pos[element]` is its sort position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementOrder {
    pos: Vec<usize>,
}

impl ElementOrder {
    pub fn index_order(rank: usize) -> Self {
        ElementOrder {
            pos: (0..rank).collect(),
        }
    }

    pub fn reversed(rank: usize) -> Self {
        ElementOrder {
            pos: (0..rank).rev().collect(),
        }
    }

    pub fn from_positions(pos: Vec<usize>) -> Result<Self, FusionError> {
        let rank = pos.len();
        let mut seen = vec![false; rank];
        for &p in &pos {
            if p >= rank || seen[p] {
                return Err(FusionError::Shape("positions must be a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(ElementOrder { pos })
    }

    pub fn rank(&self) -> usize {
        self.pos.len()
    }

    pub fn position(&self, element: usize) -> usize {
        self.pos[element]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.pos[a] < self.pos[b]
    }

    pub fn greater(&self, a: usize, b: usize) -> bool {
        self.pos[a] > self.pos[b]
    }

    /// Elements listed smallest first.
    pub fn elements_in_order(&self) -> Vec<usize> {
        let mut out = vec![0; self.pos.len()];
        for (e, &p) in self.pos.iter().enumerate() {
            out[p] = e;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationParams {
    pub rank: usize,
    pub max_entry: i64,
    pub require_identity: bool,
}

/// Enumerates every valid table within the bounds, in lexicographic order of
/// the flattened table. No isomorphism reduction is performed. With
/// `require_identity`, element 0 is the identity and its forced entries are
/// not searched. Partial tables are pruned as soon as a fully determined
/// associativity equation fails.
pub fn enumerate_fusion_rings(params: EnumerationParams) -> Result<RingEnumerator, FusionError> {
    if params.rank == 0 || params.rank > 4 {
        return Err(FusionError::EnumerationBounds(format!(
            "rank {} outside supported 1..=4",
            params.rank
        )));
    }
    if params.max_entry < 0 || params.max_entry > 4 {
        return Err(FusionError::EnumerationBounds(format!(
            "max_entry {} outside supported 0..=4",
            params.max_entry
        )));
    }
    Ok(RingEnumerator::new(params))
}

pub struct RingEnumerator {
    params: EnumerationParams,
    table: Vec<i64>,
    free: Vec<usize>,
    /// eqs_at[p] lists equations whose operands are all known once free[p-1]
    /// is assigned; eqs_at[0] holds the all-forced equations.
    eqs_at: Vec<Vec<[usize; 4]>>,
    cursor: Vec<i64>,
    depth: usize,
    started: bool,
    exhausted: bool,
}

impl RingEnumerator {
    fn new(params: EnumerationParams) -> Self {
        let r = params.rank;
        let mut table = vec![0i64; r * r * r];
        let flat = |i: usize, j: usize, k: usize| (i * r + j) * r + k;
        let mut free = Vec::new();
        if params.require_identity {
            for j in 0..r {
                for k in 0..r {
                    table[flat(0, j, k)] = i64::from(j == k);
                }
            }
            for i in 0..r {
                for k in 0..r {
                    table[flat(i, 0, k)] = i64::from(i == k);
                }
            }
            for i in 1..r {
                for j in 1..r {
                    for k in 0..r {
                        free.push(flat(i, j, k));
                    }
                }
            }
        } else {
            free.extend(0..r * r * r);
        }
        free.sort_unstable();

        let mut time_of = vec![-1i64; r * r * r];
        for (p, &pos) in free.iter().enumerate() {
            time_of[pos] = p as i64;
        }
        let mut eqs_at: Vec<Vec<[usize; 4]>> = vec![Vec::new(); free.len() + 1];
        for i in 0..r {
            for j in 0..r {
                for l in 0..r {
                    for k in 0..r {
                        let mut ready = -1i64;
                        for t in 0..r {
                            ready = ready
                                .max(time_of[flat(i, t, k)])
                                .max(time_of[flat(j, l, t)])
                                .max(time_of[flat(i, j, t)])
                                .max(time_of[flat(t, l, k)]);
                        }
                        eqs_at[(ready + 1) as usize].push([i, j, l, k]);
                    }
                }
            }
        }

        let mut this = RingEnumerator {
            params,
            table,
            cursor: vec![-1; free.len()],
            free,
            eqs_at,
            depth: 0,
            started: false,
            exhausted: false,
        };
        // all-forced equations hold for the identity-forced block, but verify
        if !this.eqs_at[0].iter().all(|eq| this.eq_holds(*eq)) {
            this.exhausted = true;
        }
        this
    }

    fn eq_holds(&self, [i, j, l, k]: [usize; 4]) -> bool {
        let r = self.params.rank;
        let at = |i: usize, j: usize, k: usize| self.table[(i * r + j) * r + k];
        let mut lhs = 0i64;
        let mut rhs = 0i64;
        for t in 0..r {
            lhs += at(i, t, k) * at(j, l, t);
            rhs += at(i, j, t) * at(t, l, k);
        }
        lhs == rhs
    }

    fn build(&self) -> FusionRing {
        let r = self.params.rank;
        let names = (0..r)
            .map(|i| {
                if self.params.require_identity {
                    if i == 0 {
                        "e".to_string()
                    } else {
                        format!("x{i}")
                    }
                } else {
                    format!("x{i}")
                }
            })
            .collect();
        let identity = self.params.require_identity.then_some(0);
        FusionRing::new(names, self.table.clone(), identity)
            .expect("enumerated tables satisfy all checked equations")
    }
}

impl Iterator for RingEnumerator {
    type Item = FusionRing;

    fn next(&mut self) -> Option<FusionRing> {
        if self.exhausted {
            return None;
        }
        if self.free.is_empty() {
            self.exhausted = true;
            return Some(self.build());
        }
        if self.started {
            // resume below the table just emitted
            self.depth -= 1;
        }
        self.started = true;
        loop {
            if self.depth == self.free.len() {
                return Some(self.build());
            }
            let v = self.cursor[self.depth] + 1;
            if v > self.params.max_entry {
                self.cursor[self.depth] = -1;
                self.table[self.free[self.depth]] = 0;
                if self.depth == 0 {
                    self.exhausted = true;
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            self.cursor[self.depth] = v;
            self.table[self.free[self.depth]] = v;
            let ready = &self.eqs_at[self.depth + 1];
            if ready.iter().all(|eq| self.eq_holds(*eq)) {
                self.depth += 1;
            }
        }
    }
}

// --- JSON interchange -------------------------------------------------------
//
// {"names": [..], "identity": "e"|null, "table": {"a,b": {"c": m, ..}, ..}}
// with omitted entries meaning 0. The writer emits sorted keys and omits
// zeros, so canonical text round-trips byte-for-byte.

pub fn ring_to_json(ring: &FusionRing) -> Value {
    let mut table = BTreeMap::new();
    for i in 0..ring.rank {
        for j in 0..ring.rank {
            let mut inner = BTreeMap::new();
            for k in 0..ring.rank {
                let v = ring.entry(i, j, k);
                if v != 0 {
                    inner.insert(ring.name(k).to_string(), json!(v));
                }
            }
            if !inner.is_empty() {
                table.insert(format!("{},{}", ring.name(i), ring.name(j)), json!(inner));
            }
        }
    }
    json!({
        "names": ring.names,
        "identity": ring.identity.map(|e| ring.name(e).to_string()),
        "table": table,
    })
}

pub fn ring_to_json_string(ring: &FusionRing) -> String {
    serde_json::to_string(&ring_to_json(ring)).expect("ring JSON serializes")
}

pub fn ring_from_json(value: &Value) -> Result<FusionRing, FusionError> {
    let obj = value
        .as_object()
        .ok_or_else(|| FusionError::Shape("ring JSON must be an object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "names" | "identity" | "table") {
            return Err(FusionError::Shape(format!("unknown ring field {key:?}")));
        }
    }
    let names: Vec<String> = obj
        .get("names")
        .and_then(Value::as_array)
        .ok_or_else(|| FusionError::Shape("missing \"names\" array".into()))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| FusionError::Shape("names must be strings".into()))
        })
        .collect::<Result<_, _>>()?;
    let rank = names.len();
    if rank == 0 {
        return Err(FusionError::Shape("names must be non-empty".into()));
    }
    let index_of = |name: &str| -> Result<usize, FusionError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FusionError::Shape(format!("unknown element name {name:?}")))
    };
    let identity = match obj.get("identity") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(index_of(s)?),
        Some(_) => return Err(FusionError::Shape("identity must be a name or null".into())),
    };
    let mut table = vec![0i64; rank * rank * rank];
    if let Some(t) = obj.get("table") {
        let t = t
            .as_object()
            .ok_or_else(|| FusionError::Shape("table must be an object".into()))?;
        for (pair, inner) in t {
            let Some((a, b)) = pair.split_once(',') else {
                return Err(FusionError::Shape(format!(
                    "table key {pair:?} is not of the form \"a,b\""
                )));
            };
            let (i, j) = (index_of(a)?, index_of(b)?);
            let inner = inner
                .as_object()
                .ok_or_else(|| FusionError::Shape("table entries must be objects".into()))?;
            for (c, v) in inner {
                let k = index_of(c)?;
                let v = v.as_i64().ok_or_else(|| {
                    FusionError::Shape(format!("entry {pair:?} -> {c:?} must be an integer"))
                })?;
                table[(i * rank + j) * rank + k] = v;
            }
        }
    }
    FusionRing::new(names, table, identity)
}

pub fn ring_from_json_str(text: &str) -> Result<FusionRing, FusionError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| FusionError::Shape(format!("invalid JSON: {e}")))?;
    ring_from_json(&value)
}

/// Relabels the ring so the declared identity sits at index 0. Returns the
/// relabeled ring and the permutation, as `perm[old_index] = new_index`.
pub fn normalize_identity_first(ring: &FusionRing) -> (FusionRing, Vec<usize>) {
    let rank = ring.rank;
    let ident: Vec<usize> = (0..rank).collect();
    let Some(e) = ring.identity else {
        return (ring.clone(), ident);
    };
    if e == 0 {
        return (ring.clone(), ident);
    }
    let mut perm = vec![0usize; rank];
    for (old, slot) in perm.iter_mut().enumerate() {
        *slot = match old {
            o if o == e => 0,
            o if o < e => o + 1,
            o => o,
        };
    }
    let mut names = vec![String::new(); rank];
    let mut table = vec![0i64; rank * rank * rank];
    for old in 0..rank {
        names[perm[old]] = ring.names[old].clone();
    }
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                table[(perm[i] * rank + perm[j]) * rank + perm[k]] = ring.entry(i, j, k);
            }
        }
    }
    let ring = FusionRing::new(names, table, Some(0)).expect("relabeling preserves validity");
    (ring, perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn z2_ring() -> FusionRing {
        FusionRing::group_ring(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn validates_z2_group_table() {
        let ring = z2_ring();
        assert!(ring.validate().is_ok());
        assert_eq!(ring.identity(), Some(0));
    }

    #[test]
    fn validates_fibonacci() {
        // {e,x}, x*x = e + x; all 16 associativity equations hold
        let ring = FusionRing::rank2(1, 1);
        assert!(ring.validate().is_ok());
    }

    #[test]
    fn rejects_broken_identity() {
        // {e,x} with identity declared but m^x_{x,e} = 2
        let mut table = vec![0i64; 8];
        let mut set = |i: usize, j: usize, k: usize, v: i64| table[(i * 2 + j) * 2 + k] = v;
        set(0, 0, 0, 1);
        set(0, 1, 1, 1);
        set(1, 0, 1, 2);
        set(1, 1, 0, 1);
        let report = validate_table(2, &table, Some(0));
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::IdentityAxiom {
                i: 1,
                j: 0,
                k: 1,
                value: 2,
                ..
            }
        )));
    }

    #[test]
    fn rejects_negative_entry_and_zero_rank() {
        let report = validate_table(1, &[-1], None);
        assert!(matches!(
            report.violations[0],
            Violation::NegativeEntry { value: -1, .. }
        ));
        let report = validate_table(0, &[], None);
        assert_eq!(report.violations, vec![Violation::ZeroRank]);
    }

    #[test]
    fn find_identity_cases() {
        assert_eq!(z2_ring().find_identity(), Some(0));
        let idem = FusionRing::new(vec!["x".into()], vec![1], None).unwrap();
        assert_eq!(idem.find_identity(), Some(0));
        let doubled = FusionRing::new(vec!["x".into()], vec![2], None).unwrap();
        assert_eq!(doubled.find_identity(), None);
    }

    #[test]
    fn multiply_examples() {
        let fib = FusionRing::rank2(1, 1);
        let xx = fib.basis(1).multiply(&fib.basis(1)).unwrap();
        assert_eq!(xx.coeffs(), &[1, 1]);

        let e_times_x = fib.basis(0).multiply(&fib.basis(1)).unwrap();
        assert_eq!(e_times_x.coeffs(), &[0, 1]);

        // x*x = 2x + 3e: ([x]+[e])*[x] = 3[e] + 3[x]
        let ring = FusionRing::rank2(2, 3);
        let sum = ring.basis(1).add(&ring.basis(0)).unwrap();
        let prod = sum.multiply(&ring.basis(1)).unwrap();
        assert_eq!(prod.coeffs(), &[3, 3]);
    }

    #[test]
    fn multiply_rejects_ring_mismatch() {
        let a = FusionRing::rank2(1, 1);
        let b = FusionRing::rank2(0, 1);
        let err = a.basis(0).multiply(&b.basis(0)).unwrap_err();
        assert!(matches!(err, FusionError::RingMismatch));
    }

    #[test]
    fn nary_examples() {
        let fib = FusionRing::rank2(1, 1);
        assert_eq!(nary_constant(&fib, 1, &[1, 1, 1]).unwrap(), 2);
        assert_eq!(nary_constant(&fib, 0, &[0]).unwrap(), 1);
        assert_eq!(nary_constant(&fib, 1, &[0]).unwrap(), 0);
        let sq2 = FusionRing::rank2(0, 2);
        assert_eq!(nary_constant(&sq2, 0, &[1, 1, 1, 1]).unwrap(), 4);
        assert!(matches!(
            nary_constant(&fib, 0, &[]),
            Err(FusionError::EmptyInput)
        ));
    }

    #[test]
    fn multiply_is_associative_on_basis_triples() {
        let pool = [FusionRing::rank2(2, 3), FusionRing::rank2(0, 2), z2_ring()];
        for ring in &pool {
            for i in 0..ring.rank() {
                for j in 0..ring.rank() {
                    for k in 0..ring.rank() {
                        let left = ring
                            .basis(i)
                            .multiply(&ring.basis(j))
                            .unwrap()
                            .multiply(&ring.basis(k))
                            .unwrap();
                        let right = ring
                            .basis(i)
                            .multiply(&ring.basis(j).multiply(&ring.basis(k)).unwrap())
                            .unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn found_identity_acts_trivially() {
        let rings: Vec<FusionRing> = enumerate_fusion_rings(EnumerationParams {
            rank: 2,
            max_entry: 2,
            require_identity: true,
        })
        .unwrap()
        .collect();
        for ring in &rings {
            let e = ring.find_identity().expect("enumerated with identity");
            for v in 0..ring.rank() {
                assert_eq!(
                    ring.basis(e).multiply(&ring.basis(v)).unwrap(),
                    ring.basis(v)
                );
                assert_eq!(
                    ring.basis(v).multiply(&ring.basis(e)).unwrap(),
                    ring.basis(v)
                );
            }
        }
    }

    #[test]
    fn nary_is_associative_across_splits() {
        // coefficient of out in (x1..xi)(x(i+1)..xn) is independent of the split
        let rings = [FusionRing::rank2(1, 1), FusionRing::rank2(2, 3), z2_ring()];
        for ring in &rings {
            let r = ring.rank();
            for len in 2..=4usize {
                for combo in 0..r.pow(len as u32) {
                    let mut c = combo;
                    let inputs: Vec<usize> = (0..len)
                        .map(|_| {
                            let x = c % r;
                            c /= r;
                            x
                        })
                        .collect();
                    let direct: Vec<i64> = (0..r)
                        .map(|out| nary_constant(ring, out, &inputs).unwrap())
                        .collect();
                    for split in 1..len {
                        let mut acc = vec![0i64; r];
                        for a in 0..r {
                            for b in 0..r {
                                let ca = nary_constant(ring, a, &inputs[..split]).unwrap();
                                let cb = nary_constant(ring, b, &inputs[split..]).unwrap();
                                for (s, slot) in acc.iter_mut().enumerate() {
                                    *slot += ca * cb * ring.entry(a, b, s);
                                }
                            }
                        }
                        assert_eq!(acc, direct);
                    }
                }
            }
        }
    }

    #[test]
    fn morphism_examples() {
        let fib = FusionRing::rank2(1, 1);
        assert!(validate_morphism(&FusionMorphism::identity(&fib)).is_ok());

        // Z/2 -> trivial ring, both elements to the point
        let z2 = z2_ring();
        let pt = FusionRing::new(vec!["pt".into()], vec![1], Some(0)).unwrap();
        let fold = FusionMorphism::new(z2.clone(), pt, vec![1, 1]).unwrap();
        assert!(validate_morphism(&fold).is_ok());

        // Fibonacci -> Z/2 along the identity-shaped matrix fails at (x,x,x)
        let bad = FusionMorphism::new(fib, z2, vec![1, 0, 0, 1]).unwrap();
        let report = validate_morphism(&bad);
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Associativity {
                i: 1,
                j: 1,
                k: 1,
                lhs: 1,
                rhs: 0,
                ..
            }
        )));
    }

    #[test]
    fn morphism_composition_is_valid() {
        let z2 = z2_ring();
        let pt = FusionRing::new(vec!["pt".into()], vec![1], Some(0)).unwrap();
        let fold = FusionMorphism::new(z2.clone(), pt.clone(), vec![1, 1]).unwrap();
        let embed = FusionMorphism::new(pt.clone(), z2, vec![1, 0]).unwrap();
        assert!(validate_morphism(&embed).is_ok());
        let composed = fold.compose(&embed).unwrap();
        assert!(validate_morphism(&composed).is_ok());
        assert_eq!(composed.matrix, vec![1]);
    }

    #[test]
    fn enumeration_counts() {
        let count = |rank, max_entry, require_identity| {
            enumerate_fusion_rings(EnumerationParams {
                rank,
                max_entry,
                require_identity,
            })
            .unwrap()
            .count()
        };
        assert_eq!(count(2, 2, true), 9);
        assert_eq!(count(1, 3, false), 4);
        assert_eq!(count(2, 0, true), 1);
        assert_eq!(count(1, 3, true), 1);
        assert_eq!(count(3, 1, true), 46);
    }

    #[test]
    fn enumeration_is_lexicographic_and_valid() {
        let rings: Vec<FusionRing> = enumerate_fusion_rings(EnumerationParams {
            rank: 2,
            max_entry: 2,
            require_identity: true,
        })
        .unwrap()
        .collect();
        let tables: Vec<Vec<i64>> = rings.iter().map(|r| r.table().to_vec()).collect();
        let mut sorted = tables.clone();
        sorted.sort();
        assert_eq!(tables, sorted);
        for ring in &rings {
            assert!(ring.validate().is_ok());
        }
    }

    #[test]
    fn enumeration_bounds_rejected() {
        assert!(enumerate_fusion_rings(EnumerationParams {
            rank: 5,
            max_entry: 1,
            require_identity: true
        })
        .is_err());
        assert!(enumerate_fusion_rings(EnumerationParams {
            rank: 2,
            max_entry: 5,
            require_identity: true
        })
        .is_err());
    }

    #[test]
    fn json_round_trip_canonical() {
        let ring = FusionRing::rank2(1, 2);
        let text = ring_to_json_string(&ring);
        let back = ring_from_json_str(&text).unwrap();
        assert_eq!(back, ring);
        assert_eq!(ring_to_json_string(&back), text);
    }

    #[test]
    fn json_omitted_entries_are_zero() {
        let text = r#"{"identity":"e","names":["e","x"],"table":{"e,e":{"e":1},"e,x":{"x":1},"x,e":{"x":1},"x,x":{"e":2}}}"#;
        let ring = ring_from_json_str(text).unwrap();
        assert_eq!(ring.entry(1, 1, 1), 0);
        assert_eq!(ring.entry(1, 1, 0), 2);
        assert_eq!(ring_to_json_string(&ring), text);
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(ring_from_json_str("not json").is_err());
        assert!(ring_from_json_str(r#"{"names":["a","a"],"identity":null,"table":{}}"#).is_err());
        assert!(ring_from_json_str(r#"{"names":["a"],"surprise":1,"table":{}}"#).is_err());
    }

    #[test]
    fn normalization_moves_identity_to_front() {
        let mut table = vec![0i64; 8];
        // {x, e} with identity at index 1
        let mut set = |i: usize, j: usize, k: usize, v: i64| table[(i * 2 + j) * 2 + k] = v;
        set(1, 1, 1, 1);
        set(1, 0, 0, 1);
        set(0, 1, 0, 1);
        set(0, 0, 1, 2); // x*x = 2e
        let ring = FusionRing::new(vec!["x".into(), "e".into()], table, Some(1)).unwrap();
        let (norm, perm) = normalize_identity_first(&ring);
        assert_eq!(norm.identity(), Some(0));
        assert_eq!(norm.name(0), "e");
        assert_eq!(perm, vec![1, 0]);
        assert_eq!(norm.entry(1, 1, 0), 2);
        assert!(norm.validate().is_ok());
    }
}
