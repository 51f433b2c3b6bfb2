//! Exact checks of the pentagon equation Phi_12 Phi_13 Phi_23 = Phi_23 Phi_12
//! for explicit operators on a tensor square, the canonical group solutions
//! (s, t) -> (s, s t), and the solvability decision for the x*x = n e family
//! via operator-Schmidt rank. All arithmetic is exact rational; equality of
//! operators is literal equality of entries.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::fusion::{FusionError, FusionRing};

#[derive(Debug, Error)]
pub enum PentagonError {
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    Dimension {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("dimension {0} is not a perfect square")]
    NotASquareDimension(usize),
    #[error("operator is singular")]
    Singular,
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("n must be at least 1")]
    BadN,
    #[error("malformed matrix JSON: {0}")]
    Parse(String),
    #[error(transparent)]
    Ring(#[from] FusionError),
}

/// A sparse exact-rational matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, PentagonError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = ExactMatrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(PentagonError::Parse("ragged rows".into()));
            }
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        assert!(i < self.rows && j < self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut acc: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in other.entries.range((k, 0)..=(k, usize::MAX)) {
                let term = a * b;
                if term.is_zero() {
                    continue;
                }
                match acc.entry((i, j)) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get() + term;
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(term);
                    }
                }
            }
        }
        ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        }
    }

    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (&(i, j), a) in &self.entries {
            for (&(i2, j2), b) in &other.entries {
                m.entries
                    .insert((i * other.rows + i2, j * other.cols + j2), a * b);
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut dense: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !dense[r][col].is_zero()) else {
                continue;
            };
            dense.swap(rank, p);
            for r in rank + 1..self.rows {
                if dense[r][col].is_zero() {
                    continue;
                }
                let factor = &dense[r][col] / &dense[rank][col];
                for c in col..self.cols {
                    let sub = &dense[rank][c] * &factor;
                    dense[r][c] = &dense[r][c] - sub;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// The swap of tensor factors on H (x) H, dim(H) = n.
pub fn swap_factors(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n * n, n * n);
    for k in 0..n {
        for l in 0..n {
            m.set(l * n + k, k * n + l, BigRational::one());
        }
    }
    m
}

/// The swap of the last two factors on H (x) H (x) H.
fn swap_last_two(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n * n * n, n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                m.set((i * n + k) * n + j, (i * n + j) * n + k, BigRational::one());
            }
        }
    }
    m
}

/// Side length n such that dim = n^2, when dim is a perfect square.
pub fn square_side(dim: usize) -> Result<usize, PentagonError> {
    let n = (dim as f64).sqrt().round() as usize;
    for candidate in n.saturating_sub(1)..=n + 1 {
        if candidate * candidate == dim {
            return Ok(candidate);
        }
    }
    Err(PentagonError::NotASquareDimension(dim))
}

/// Decides Phi_12 Phi_13 Phi_23 = Phi_23 Phi_12 on H^(x)3 for an invertible
/// operator Phi on H (x) H, dim(H) = n. Phi_13 conjugates Phi_12 by the swap
/// of the last two factors.
pub fn check_pentagon(phi: &ExactMatrix, n: usize) -> Result<bool, PentagonError> {
    if n == 0 {
        return Err(PentagonError::BadN);
    }
    if phi.rows != n * n || phi.cols != n * n {
        return Err(PentagonError::Dimension {
            rows: phi.rows,
            cols: phi.cols,
            expected: n * n,
        });
    }
    if !phi.is_invertible() {
        return Err(PentagonError::Singular);
    }
    let id = ExactMatrix::identity(n);
    let phi12 = phi.kron(&id);
    let phi23 = id.kron(phi);
    let p23 = swap_last_two(n);
    let phi13 = p23.mul(&phi12).mul(&p23);
    let lhs = phi12.mul(&phi13).mul(&phi23);
    let rhs = phi23.mul(&phi12);
    Ok(lhs == rhs)
}

/// A finite group presented by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, PentagonError> {
        let order = table.len();
        if order == 0 {
            return Err(PentagonError::InvalidGroup("empty table".into()));
        }
        for row in &table {
            if row.len() != order {
                return Err(PentagonError::InvalidGroup("table is not square".into()));
            }
            if row.iter().any(|&v| v >= order) {
                return Err(PentagonError::InvalidGroup("entry out of range".into()));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(PentagonError::InvalidGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|t| table[t][e] == t && table[e][t] == t))
            .ok_or_else(|| PentagonError::InvalidGroup("no identity".into()))?;
        for a in 0..order {
            if !(0..order).any(|b| table[a][b] == identity && table[b][a] == identity) {
                return Err(PentagonError::InvalidGroup(format!(
                    "element {a} has no inverse"
                )));
            }
        }
        Ok(GroupTable {
            order,
            table,
            identity,
        })
    }

    pub fn cyclic(n: usize) -> GroupTable {
        assert!(n >= 1);
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        GroupTable::new(table).expect("cyclic tables are groups")
    }

    pub fn direct_product(&self, other: &GroupTable) -> GroupTable {
        let (g, h) = (self.order, other.order);
        let idx = |a: usize, b: usize| a * h + b;
        let table = (0..g * h)
            .map(|p| {
                let (a1, b1) = (p / h, p % h);
                (0..g * h)
                    .map(|q| {
                        let (a2, b2) = (q / h, q % h);
                        idx(self.table[a1][a2], other.table[b1][b2])
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("products of groups are groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn fusion_ring(&self) -> FusionRing {
        FusionRing::group_ring(&self.table).expect("group tables give valid rings")
    }
}

/// The canonical pentagon solution of a group: the 0/1 operator sending the
/// basis vector (s, t) to (s, s t).
pub fn group_unitary(group: &GroupTable) -> ExactMatrix {
    let g = group.order();
    let mut m = ExactMatrix::zeros(g * g, g * g);
    for s in 0..g {
        for t in 0..g {
            m.set(s * g + group.multiply(s, t), s * g + t, BigRational::one());
        }
    }
    m
}

/// Rank of the reshaped operator that groups row/column indices per tensor
/// slot; rank 1 characterizes products A (x) B.
pub fn operator_schmidt_rank(m: &ExactMatrix, n: usize) -> Result<usize, PentagonError> {
    if n == 0 {
        return Err(PentagonError::BadN);
    }
    if m.rows != n * n || m.cols != n * n {
        return Err(PentagonError::Dimension {
            rows: m.rows,
            cols: m.cols,
            expected: n * n,
        });
    }
    let mut reshaped = ExactMatrix::zeros(n * n, n * n);
    for (&(row, col), v) in &m.entries {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        reshaped.set(i * n + k, j * n + l, v.clone());
    }
    Ok(reshaped.rank())
}

/// Whether an invertible Phi with Phi^2 (x) I equal to the factor swap exists
/// on an n-dimensional space: the swap must factor through the first slot,
/// i.e. have operator-Schmidt rank 1, which happens only for n = 1.
pub fn ne_case_solvable(n: usize) -> Result<bool, PentagonError> {
    if n == 0 {
        return Err(PentagonError::BadN);
    }
    Ok(operator_schmidt_rank(&swap_factors(n), n)? == 1)
}

// --- JSON -------------------------------------------------------------------

fn rational_to_string(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn rational_from_str(s: &str) -> Result<BigRational, PentagonError> {
    let parse_int = |t: &str| {
        BigInt::from_str(t).map_err(|e| PentagonError::Parse(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(PentagonError::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(parse_int(p)?, denom))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Row-major arrays of "p/q" strings.
pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| {
            let row: Vec<Value> = (0..m.cols)
                .map(|j| Value::String(rational_to_string(&m.get(i, j))))
                .collect();
            json!(row)
        })
        .collect();
    json!(rows)
}

pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix, PentagonError> {
    let rows = v
        .as_array()
        .ok_or_else(|| PentagonError::Parse("matrix JSON must be an array of rows".into()))?;
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| PentagonError::Parse("rows must be arrays".into()))?;
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let s = cell
                .as_str()
                .ok_or_else(|| PentagonError::Parse("entries must be \"p/q\" strings".into()))?;
            out.push(rational_from_str(s)?);
        }
        parsed.push(out);
    }
    ExactMatrix::from_rows(parsed)
}

pub fn group_to_json(g: &GroupTable) -> Value {
    json!({"order": g.order, "table": g.table})
}

pub fn group_from_json(v: &Value) -> Result<GroupTable, PentagonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| PentagonError::Parse("group JSON must be an object".into()))?;
    let order = obj
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| PentagonError::Parse("missing \"order\"".into()))? as usize;
    let table = obj
        .get("table")
        .and_then(Value::as_array)
        .ok_or_else(|| PentagonError::Parse("missing \"table\"".into()))?;
    let mut rows = Vec::with_capacity(table.len());
    for row in table {
        let row = row
            .as_array()
            .ok_or_else(|| PentagonError::Parse("table rows must be arrays".into()))?;
        rows.push(
            row.iter()
                .map(|c| {
                    c.as_u64().map(|v| v as usize).ok_or_else(|| {
                        PentagonError::Parse("table entries must be integers".into())
                    })
                })
                .collect::<Result<Vec<usize>, _>>()?,
        );
    }
    if rows.len() != order {
        return Err(PentagonError::Parse(
            "order does not match table size".into(),
        ));
    }
    GroupTable::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| BigRational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_satisfies_pentagon() {
        for n in [1usize, 2, 3] {
            assert!(check_pentagon(&ExactMatrix::identity(n * n), n).unwrap());
        }
    }

    #[test]
    fn swap_fails_pentagon() {
        assert!(!check_pentagon(&swap_factors(2), 2).unwrap());
    }

    #[test]
    fn rejects_singular_and_misshapen() {
        assert!(matches!(
            check_pentagon(&ExactMatrix::zeros(4, 4), 2),
            Err(PentagonError::Singular)
        ));
        assert!(matches!(
            check_pentagon(&ExactMatrix::identity(3), 2),
            Err(PentagonError::Dimension { .. })
        ));
        assert!(matches!(
            square_side(5),
            Err(PentagonError::NotASquareDimension(5))
        ));
        assert_eq!(square_side(49).unwrap(), 7);
    }

    #[test]
    fn z2_unitary_is_the_expected_permutation() {
        let z2 = GroupTable::cyclic(2);
        let w = group_unitary(&z2);
        // (e,t) fixed; (g,t) -> (g, g t)
        let expected = int_matrix(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(w, expected);
        assert!(check_pentagon(&w, 2).unwrap());
    }

    #[test]
    fn trivial_group_unitary() {
        let g = GroupTable::cyclic(1);
        let w = group_unitary(&g);
        assert_eq!(w, ExactMatrix::identity(1));
        assert!(check_pentagon(&w, 1).unwrap());
    }

    #[test]
    fn z3_unitary_passes() {
        let w = group_unitary(&GroupTable::cyclic(3));
        assert_eq!(w.rows(), 9);
        assert!(check_pentagon(&w, 3).unwrap());
    }

    #[test]
    fn group_validation() {
        assert!(GroupTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::new(vec![vec![1, 0], vec![1, 0]]).is_err());
        let v4 = GroupTable::cyclic(2).direct_product(&GroupTable::cyclic(2));
        assert_eq!(v4.order(), 4);
        assert!(v4.fusion_ring().validate().is_ok());
    }

    #[test]
    fn ne_case_only_n_equals_one() {
        assert!(ne_case_solvable(1).unwrap());
        for n in 2..=5 {
            assert!(!ne_case_solvable(n).unwrap(), "n = {n}");
        }
        assert!(ne_case_solvable(0).is_err());
        // the reshaped swap has full rank n^2 for n = 2
        assert_eq!(operator_schmidt_rank(&swap_factors(2), 2).unwrap(), 4);
    }

    #[test]
    fn no_sign_matrix_solves_the_n2_case() {
        // exhaustive: no Phi with entries in {-1,0,1} has Phi^2 (x) I = swap
        let t = swap_factors(2);
        let id = ExactMatrix::identity(2);
        for combo in 0..81u32 {
            let mut c = combo;
            let mut vals = [0i64; 4];
            for v in &mut vals {
                *v = (c % 3) as i64 - 1;
                c /= 3;
            }
            let phi = int_matrix(&[&[vals[0], vals[1]], &[vals[2], vals[3]]]);
            let candidate = phi.mul(&phi).kron(&id);
            assert_ne!(candidate, t);
        }
    }

    #[test]
    fn schmidt_rank_of_products_is_one() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..10 {
            let n = rng.gen_range(2..=3);
            let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> ExactMatrix {
                loop {
                    let mut m = ExactMatrix::zeros(n, n);
                    for i in 0..n {
                        for j in 0..n {
                            let numer: i64 = rng.gen_range(-3..=3);
                            let denom: i64 = rng.gen_range(1..=3);
                            m.set(i, j, BigRational::new(numer.into(), denom.into()));
                        }
                    }
                    if !m.entries.is_empty() {
                        return m;
                    }
                }
            };
            let a = sample(&mut rng);
            let b = sample(&mut rng);
            assert_eq!(operator_schmidt_rank(&a.kron(&b), n).unwrap(), 1);
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut m = ExactMatrix::zeros(2, 2);
        m.set(0, 0, BigRational::new(1.into(), 2.into()));
        m.set(1, 0, BigRational::from_integer((-3).into()));
        let v = matrix_to_json(&m);
        assert_eq!(v[0][0], "1/2");
        assert_eq!(v[0][1], "0");
        assert_eq!(matrix_from_json(&v).unwrap(), m);
        assert!(matrix_from_json(&json!([["1/0"]])).is_err());
    }

    #[test]
    fn group_json_round_trip() {
        let g = GroupTable::cyclic(3);
        let v = group_to_json(&g);
        assert_eq!(group_from_json(&v).unwrap(), g);
    }
}
