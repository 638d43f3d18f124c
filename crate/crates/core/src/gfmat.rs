//! Arithmetic in the small finite fields GF(q), q <= 9, and exact row
//! reduction of matrices over them.
//!
//! Elements are encoded as integers in `[0, q)`. For an extension field
//! GF(p^e) the code of `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`, taken modulo one fixed monic
//! irreducible polynomial per order.

use crate::error::{Error, Result};

/// Supported field orders.
pub const SUPPORTED_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

/// A finite field with precomputed operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    e: u32,
    /// Coefficients of the modulus, lowest degree first, leading 1 included.
    /// Empty for prime fields.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn prime_power(q: u32) -> Option<(u32, u32, Vec<u8>)> {
    // One hardcoded modulus per extension order.
    match q {
        2 | 3 | 5 | 7 => Some((q, 1, Vec::new())),
        4 => Some((2, 2, vec![1, 1, 1])),    // x^2 + x + 1
        8 => Some((2, 3, vec![1, 1, 0, 1])), // x^3 + x + 1
        9 => Some((3, 2, vec![1, 0, 1])),    // x^2 + 1
        _ => None,
    }
}

fn to_digits(mut code: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies two polynomials over GF(p) and reduces modulo a monic modulus.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u8], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (e..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        // subtract c * x^(deg-e) * modulus
        for (k, &m) in modulus.iter().enumerate() {
            let idx = deg - e + k;
            prod[idx] = (prod[idx] + p - (c * m as u32) % p) % p;
        }
    }
    prod.truncate(e);
    prod
}

impl Field {
    /// Builds GF(q) for a supported order.
    pub fn new(q: u32) -> Result<Self> {
        let (p, e, modulus) = prime_power(q).ok_or(Error::UnsupportedField(q))?;
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            for b in 0..q {
                let (s, m) = if e == 1 {
                    ((a + b) % p, (a * b) % p)
                } else {
                    let da = to_digits(a, p, e);
                    let db = to_digits(b, p, e);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    let prod = poly_mul_mod(&da, &db, &modulus, p);
                    (from_digits(&sum, p), from_digits(&prod, p))
                };
                add[(a * q + b) as usize] = s as u8;
                mul[(a * q + b) as usize] = m as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .expect("nonzero element without inverse: modulus is reducible")
                    as u8;
            }
        }
        Ok(Field {
            q,
            p,
            e,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.inv[a as usize])
    }
}

/// A dense row-major matrix of field-element codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            entries.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_valid_for(&self, field: &Field) -> bool {
        self.entries.iter().all(|&x| (x as u32) < field.order())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Outcome of a row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Reduced matrix with zero rows removed (`rank x cols`).
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form of `m`; zero rows are dropped.
pub fn rref(field: &Field, m: &Matrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        a.swap_rows(r, pr);
        let inv = field.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in 0..cols {
            let v = field.mul(a.get(r, j), inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c);
            if f == 0 {
                continue;
            }
            for j in 0..cols {
                let v = field.sub(a.get(i, j), field.mul(f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    a.entries.truncate(rank * cols);
    a.rows = rank;
    Rref {
        matrix: a,
        rank,
        pivots,
    }
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    rref(field, m).rank
}

/// Whether `m` is already in reduced row echelon form with no zero rows.
pub fn is_rref(field: &Field, m: &Matrix) -> bool {
    rref(field, m).matrix == *m
}

/// RREF basis of `{x : m x^T = 0}`.
pub fn nullspace_basis(field: &Field, m: &Matrix) -> Matrix {
    let red = rref(field, m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    let mut rows = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![0u8; n];
        x[f] = 1;
        for (r, &pc) in red.pivots.iter().enumerate() {
            x[pc] = field.neg(red.matrix.get(r, f));
        }
        rows.push(x);
    }
    rref(field, &Matrix::from_rows(n, &rows)).matrix
}

/// Coordinates of `x` with respect to the rows of a full-row-rank `basis`,
/// or `None` when `x` is outside the row space.
pub fn coordinates(field: &Field, basis: &Matrix, x: &[u8]) -> Option<Vec<u8>> {
    let d = basis.rows;
    let n = basis.cols;
    // [B | I] reduces to [R | T] with R = T B.
    let mut aug = Matrix::zeros(d, n + d);
    for i in 0..d {
        for j in 0..n {
            aug.set(i, j, basis.get(i, j));
        }
        aug.set(i, n + i, 1);
    }
    let red = rref(field, &aug);
    if red.pivots.iter().take_while(|&&p| p < n).count() != d {
        return None;
    }
    // x = c' R where c'_r = x[pivot_r]
    let mut residual = x.to_vec();
    let mut c = vec![0u8; d];
    for (r, &pc) in red.pivots.iter().enumerate() {
        let coef = residual[pc];
        if coef == 0 {
            continue;
        }
        for j in 0..n {
            residual[j] = field.sub(residual[j], field.mul(coef, red.matrix.get(r, j)));
        }
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = field.add(*ck, field.mul(coef, red.matrix.get(r, n + k)));
        }
    }
    residual.iter().all(|&v| v == 0).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Field> {
        SUPPORTED_ORDERS.iter().map(|&q| Field::new(q).unwrap()).collect()
    }

    #[test]
    fn field_parameters() {
        let f2 = Field::new(2).unwrap();
        assert_eq!((f2.characteristic(), f2.degree()), (2, 1));
        assert!(f2.modulus().is_empty());
        let f4 = Field::new(4).unwrap();
        assert_eq!((f4.characteristic(), f4.degree()), (2, 2));
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert!(matches!(Field::new(6), Err(Error::UnsupportedField(6))));
        assert!(matches!(Field::new(16), Err(Error::UnsupportedField(16))));
    }

    #[test]
    fn x2_x_1_is_only_irreducible_quadratic_over_gf2() {
        // monic quadratics x^2 + b x + c over GF(2); irreducible iff no root
        let irreducible: Vec<(u32, u32)> = (0..2)
            .flat_map(|b| (0..2).map(move |c| (b, c)))
            .filter(|&(b, c)| (0..2).all(|x| (x * x + b * x + c) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![(1, 1)]);
    }

    #[test]
    fn moduli_have_no_roots() {
        for f in all_fields().iter().filter(|f| f.degree() > 1) {
            let p = f.characteristic();
            let m = f.modulus();
            for x in 0..p {
                let v = m
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &c| (acc * x + c as u32) % p);
                assert_ne!(v, 0, "modulus of GF({}) has root {x}", f.order());
            }
        }
    }

    #[test]
    fn small_identities() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.inv(2).unwrap(), 2);
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        assert!(matches!(f3.inv(0), Err(Error::DivisionByZero(3))));
    }

    #[test]
    fn gf4_has_no_zero_divisors() {
        let f4 = Field::new(4).unwrap();
        for a in 1..4 {
            for b in 1..4 {
                assert_ne!(f4.mul(a, b), 0);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let q = f.order() as u8;
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rref_small_cases() {
        let f2 = Field::new(2).unwrap();
        let m = Matrix::from_rows(2, &[vec![1, 1], vec![1, 0]]);
        let r = rref(&f2, &m);
        assert_eq!(r.matrix, Matrix::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);

        let z = Matrix::zeros(3, 4);
        let r = rref(&f2, &z);
        assert_eq!(r.rank, 0);
        assert_eq!(r.matrix.rows(), 0);

        let already = Matrix::from_rows(4, &[vec![1, 0, 1, 0], vec![0, 1, 1, 1]]);
        assert_eq!(rref(&f2, &already).matrix, already);
    }

    #[test]
    fn rref_is_canonical_for_two_row_matrices_over_gf2() {
        // equal row spaces iff equal rref, checked against explicit span sets
        let f2 = Field::new(2).unwrap();
        let vecs: Vec<Vec<u8>> = (0..8u8).map(|v| vec![v & 1, (v >> 1) & 1, (v >> 2) & 1]).collect();
        let span = |a: &Vec<u8>, b: &Vec<u8>| {
            let mut s = std::collections::BTreeSet::new();
            for ca in 0..2u8 {
                for cb in 0..2u8 {
                    s.insert(
                        (0..3)
                            .map(|i| f2.add(f2.mul(ca, a[i]), f2.mul(cb, b[i])))
                            .collect::<Vec<u8>>(),
                    );
                }
            }
            s
        };
        let mats: Vec<(Matrix, std::collections::BTreeSet<Vec<u8>>)> = vecs
            .iter()
            .flat_map(|a| vecs.iter().map(move |b| (a, b)))
            .map(|(a, b)| (Matrix::from_rows(3, &[a.clone(), b.clone()]), span(a, b)))
            .collect();
        for (m1, s1) in &mats {
            for (m2, s2) in &mats {
                let same = rref(&f2, m1).matrix == rref(&f2, m2).matrix;
                assert_eq!(same, s1 == s2);
            }
        }
    }

    #[test]
    fn nullspace_edges() {
        let f3 = Field::new(3).unwrap();
        let id = Matrix::identity(4);
        assert_eq!(nullspace_basis(&f3, &id).rows(), 0);
        let zero = Matrix::zeros(1, 4);
        assert_eq!(nullspace_basis(&f3, &zero), Matrix::identity(4));
    }

    #[test]
    fn coordinates_roundtrip() {
        let f5 = Field::new(5).unwrap();
        let b = Matrix::from_rows(3, &[vec![1, 2, 0], vec![0, 3, 4]]);
        let x: Vec<u8> = (0..3)
            .map(|j| f5.add(f5.mul(2, b.get(0, j)), f5.mul(4, b.get(1, j))))
            .collect();
        assert_eq!(coordinates(&f5, &b, &x), Some(vec![2, 4]));
        assert_eq!(coordinates(&f5, &b, &[0, 0, 1]), None);
    }
}
