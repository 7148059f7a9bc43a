//! Dense exact linear algebra over `F_p`.
//!
//! Entries are canonical residues in `[0, p)`. Elimination pivots on the first
//! nonzero entry in column order, so echelon forms and kernel bases are
//! reproducible bit for bit.

use std::fmt;

use thiserror::Error;

use crate::field::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
}

fn check_len(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

fn check_field(a: Prime, b: Prime) -> Result<(), LinalgError> {
    if a == b {
        Ok(())
    } else {
        Err(LinalgError::FieldMismatch(a.get(), b.get()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    prime: Prime,
    entries: Vec<u32>,
}

impl FpVector {
    pub fn zero(prime: Prime, len: usize) -> Self {
        FpVector { prime, entries: vec![0; len] }
    }

    pub fn unit(prime: Prime, len: usize, i: usize) -> Self {
        let mut v = FpVector::zero(prime, len);
        v.entries[i] = 1 % prime.get();
        v
    }

    pub fn from_i64(prime: Prime, values: &[i64]) -> Self {
        FpVector { prime, entries: values.iter().map(|&x| prime.reduce(x)).collect() }
    }

    /// Reduces every entry modulo `p`.
    pub fn from_u32(prime: Prime, values: Vec<u32>) -> Self {
        FpVector { prime, entries: values.into_iter().map(|x| x % prime.get()).collect() }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: i64) {
        self.entries[i] = self.prime.reduce(value);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect()
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector, LinalgError> {
        check_field(self.prime, other.prime)?;
        check_len(self.len(), other.len())?;
        let p = self.prime;
        Ok(FpVector { prime: p, entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| p.add(a, b)).collect() })
    }

    pub fn sub(&self, other: &FpVector) -> Result<FpVector, LinalgError> {
        check_field(self.prime, other.prime)?;
        check_len(self.len(), other.len())?;
        let p = self.prime;
        Ok(FpVector { prime: p, entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| p.sub(a, b)).collect() })
    }

    pub fn scale(&self, c: u32) -> FpVector {
        let p = self.prime;
        FpVector { prime: p, entries: self.entries.iter().map(|&a| p.mul(a, c)).collect() }
    }

    pub fn neg(&self) -> FpVector {
        self.scale(self.prime.neg(1))
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Row-major dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zero(prime: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { prime, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = FpMatrix::zero(prime, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % prime.get();
        }
        m
    }

    /// Rows of equal length; values are reduced mod `p`.
    pub fn from_rows(prime: Prime, cols: usize, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len(cols, r.len())?;
            data.extend(r.iter().map(|&x| prime.reduce(x)));
        }
        Ok(FpMatrix { prime, rows: rows.len(), cols, data })
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_row_vectors(prime: Prime, cols: usize, vectors: &[FpVector]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            check_field(prime, v.prime)?;
            check_len(cols, v.len())?;
            data.extend_from_slice(&v.entries);
        }
        Ok(FpMatrix { prime, rows: vectors.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(prime: Prime, rows: usize, vectors: &[FpVector]) -> Result<Self, LinalgError> {
        Ok(FpMatrix::from_row_vectors(prime, rows, vectors)?.transpose())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = self.prime.reduce(value);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FpVector {
        FpVector { prime: self.prime, entries: self.row(r).to_vec() }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.prime, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector, LinalgError> {
        check_field(self.prime, v.prime)?;
        check_len(self.cols, v.len())?;
        let p = self.prime;
        let entries = (0..self.rows)
            .map(|r| self.row(r).iter().zip(&v.entries).fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b))))
            .collect();
        Ok(FpVector { prime: p, entries })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let p = self.prime;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = p.inv(m.get(row, col));
            for c in col..m.cols {
                let i = row * m.cols + c;
                m.data[i] = p.mul(m.data[i], inv);
            }
            for r in 0..m.rows {
                let f = m.get(r, col);
                if r == row || f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let sub = p.mul(f, m.data[row * m.cols + c]);
                    let i = r * m.cols + c;
                    m.data[i] = p.sub(m.data[i], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// One solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &FpVector) -> Result<Option<FpVector>, LinalgError> {
        check_field(self.prime, b.prime)?;
        check_len(self.rows, b.len())?;
        let mut aug = FpMatrix::zero(self.prime, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols].copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = b.entries[r];
        }
        let red = aug.rref();
        if red.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = FpVector::zero(self.prime, self.cols);
        for (i, &c) in red.pivots.iter().enumerate() {
            x.entries[c] = red.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<FpVector> {
        let p = self.prime;
        let red = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &red.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = FpVector::zero(p, self.cols);
                v.entries[free] = 1 % p.get();
                for (i, &pc) in red.pivots.iter().enumerate() {
                    v.entries[pc] = p.neg(red.matrix.get(i, free));
                }
                v
            })
            .collect()
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let parts: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Whether `v` lies in the span of `basis`; on success returns coefficients
/// `c` with `Σ c_i basis_i = v`. `basis` need not be independent.
pub fn in_span(v: &FpVector, basis: &[FpVector]) -> Result<Option<FpVector>, LinalgError> {
    if basis.is_empty() {
        return Ok(v.is_zero().then(|| FpVector::zero(v.prime, 0)));
    }
    FpMatrix::from_columns(v.prime, v.len(), basis)?.solve(v)
}

/// Nonzero rows of the reduced echelon form of the span of `vectors`.
pub fn echelon_basis(prime: Prime, len: usize, vectors: &[FpVector]) -> Result<Vec<FpVector>, LinalgError> {
    let red = FpMatrix::from_row_vectors(prime, len, vectors)?.rref();
    Ok((0..red.rank).map(|r| red.matrix.row_vector(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn vecp(p: u32, v: &[i64]) -> FpVector {
        FpVector::from_i64(prime(p), v)
    }

    #[test]
    fn rref_examples() {
        let id = FpMatrix::identity(prime(3), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);

        let z = FpMatrix::zero(prime(3), 2, 3);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);

        let m = FpMatrix::from_rows(prime(5), 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        let r = m.rref();
        assert_eq!(r.matrix, FpMatrix::from_rows(prime(5), 2, &[vec![1, 2], vec![0, 0]]).unwrap());
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(prime(7), 3);
        let b = vecp(7, &[3, 0, 6]);
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));

        let m = FpMatrix::from_rows(prime(3), 1, &[vec![1], vec![1]]).unwrap();
        assert_eq!(m.solve(&vecp(3, &[0, 1])).unwrap(), None);

        let m = FpMatrix::from_rows(prime(5), 1, &[vec![2]]).unwrap();
        assert_eq!(m.solve(&vecp(5, &[1])).unwrap(), Some(vecp(5, &[3])));

        assert!(matches!(m.solve(&vecp(5, &[1, 1])), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(FpMatrix::zero(prime(3), 2, 3).nullspace().len(), 3);
        assert!(FpMatrix::identity(prime(3), 4).nullspace().is_empty());
        let m = FpMatrix::from_rows(prime(2), 2, &[vec![1, 1]]).unwrap();
        assert_eq!(m.nullspace(), vec![vecp(2, &[1, 1])]);
    }

    #[test]
    fn in_span_examples() {
        assert!(in_span(&vecp(3, &[0, 0]), &[vecp(3, &[1, 1])]).unwrap().is_some());
        assert!(in_span(&vecp(3, &[0, 0]), &[]).unwrap().is_some());
        assert_eq!(in_span(&vecp(3, &[1, 0]), &[vecp(3, &[0, 1])]).unwrap(), None);
        assert_eq!(in_span(&vecp(5, &[2, 4]), &[vecp(5, &[1, 2])]).unwrap(), Some(vecp(5, &[2])));
        assert!(in_span(&vecp(5, &[2, 4]), &[vecp(5, &[1, 2, 3])]).is_err());
    }

    fn matrix() -> impl Strategy<Value = FpMatrix> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..6, 1usize..6).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(prop::collection::vec(0i64..p as i64, c), r)
                .prop_map(move |rows| FpMatrix::from_rows(prime(p), c, &rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rref_idempotent(m in matrix()) {
            let r = m.rref().matrix;
            prop_assert_eq!(r.rref().matrix, r);
        }

        #[test]
        fn kernel_and_solutions(m in matrix(), seed in prop::collection::vec(0i64..7, 6)) {
            let kernel = m.nullspace();
            prop_assert_eq!(kernel.len(), m.cols() - m.rank());
            for n in &kernel {
                prop_assert!(m.mul_vec(n).unwrap().is_zero());
            }
            let x = FpVector::from_i64(m.prime(), &seed[..m.cols()]);
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
        }
    }
}
