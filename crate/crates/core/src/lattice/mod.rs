//! The lattice L_n(q) of subspaces of `(F_q)^n`.
//!
//! Elements are canonical RREF matrices. Ids run through the levels in
//! ascending dimension; within a level they follow the lexicographic order
//! of the row-major entry sequences.

mod cache;
mod gaussian;
mod interval;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gfmat::{self, Field, Matrix};
use crate::poset::{GradedPoset, PosetId};

pub use cache::{cache_file_name, load_cache, parse_cache, to_cache_string, write_cache, CACHE_VERSION};
pub use gaussian::{gaussian, q_bracket, q_factorial};
pub use interval::Interval;

/// Default cap on the total element count of a built lattice.
pub const DEFAULT_ELEMENT_CAP: u64 = 1_000_000;

/// A subspace of `(F_q)^n` held as its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    q: u32,
    rref: Matrix,
}

impl Subspace {
    /// Row space of `m`, canonicalized.
    pub fn from_rows(field: &Field, m: &Matrix) -> Result<Self> {
        if !m.is_valid_for(field) {
            return Err(Error::Domain(format!("entry outside GF({})", field.order())));
        }
        Ok(Subspace {
            n: m.cols(),
            q: field.order(),
            rref: gfmat::rref(field, m).matrix,
        })
    }

    fn from_rref(q: u32, rref: Matrix) -> Self {
        Subspace {
            n: rref.cols(),
            q,
            rref,
        }
    }

    pub fn zero(n: usize, q: u32) -> Self {
        Subspace::from_rref(q, Matrix::zeros(0, n))
    }

    pub fn full(n: usize, q: u32) -> Self {
        Subspace::from_rref(q, Matrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.rref.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rref
    }
}

fn check_ambient(field: &Field, u: &Subspace, w: &Subspace) -> Result<()> {
    if u.n != w.n || u.q != w.q || u.q != field.order() {
        return Err(Error::MismatchedAmbient);
    }
    Ok(())
}

/// Whether `u` is a subspace of `w`.
pub fn contains(field: &Field, u: &Subspace, w: &Subspace) -> Result<bool> {
    check_ambient(field, u, w)?;
    if u.dim() > w.dim() {
        return Ok(false);
    }
    Ok(gfmat::rank(field, &w.rref.stack(&u.rref)) == w.dim())
}

pub fn sum(field: &Field, u: &Subspace, w: &Subspace) -> Result<Subspace> {
    check_ambient(field, u, w)?;
    Ok(Subspace::from_rref(u.q, gfmat::rref(field, &u.rref.stack(&w.rref)).matrix))
}

/// The orthogonal complement under the standard dot product.
pub fn dual(field: &Field, w: &Subspace) -> Subspace {
    Subspace::from_rref(w.q, gfmat::nullspace_basis(field, &w.rref))
}

/// Intersection, computed as the dual of the sum of duals.
pub fn intersect(field: &Field, u: &Subspace, w: &Subspace) -> Result<Subspace> {
    check_ambient(field, u, w)?;
    let s = sum(field, &dual(field, u), &dual(field, w))?;
    Ok(dual(field, &s))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - (k - cur.len()) {
            cur.push(c);
            rec(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `k x n` RREF matrices of rank `k` over GF(q), in canonical order.
fn level_matrices(n: usize, q: u32, k: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut base = Matrix::zeros(k, n);
        for (r, &p) in pivots.iter().enumerate() {
            base.set(r, p, 1);
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut m = base.clone();
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m.set(r, c, d as u8);
            }
            out.push(m);
            // odometer increment
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.entries().cmp(b.entries()));
    out
}

/// The `k`-dimensional subspaces of `(F_q)^n`, in canonical id order.
pub fn enumerate_level(n: usize, q: u32, k: usize) -> Result<Vec<Subspace>> {
    Field::new(q)?;
    if k > n {
        return Err(Error::Domain(format!("k = {k} outside [0, {n}]")));
    }
    Ok(level_matrices(n, q, k)
        .into_iter()
        .map(|m| Subspace::from_rref(q, m))
        .collect())
}

/// Total element count of L_n(q).
pub fn element_count(n: u32, q: u32) -> BigUint {
    (0..=n).map(|k| gaussian(n, k, q).expect("k within range")).sum()
}

/// The subspace lattice with its Hasse diagram.
#[derive(Clone, Debug)]
pub struct LinearLattice {
    n: usize,
    field: Field,
    elements: Vec<Subspace>,
    index: HashMap<Vec<u8>, usize>,
    poset: GradedPoset,
}

/// Builds L_n(q) with the default element cap.
pub fn build_lattice(n: usize, q: u32) -> Result<LinearLattice> {
    build_lattice_capped(n, q, DEFAULT_ELEMENT_CAP)
}

pub fn build_lattice_capped(n: usize, q: u32, cap: u64) -> Result<LinearLattice> {
    if n == 0 {
        return Err(Error::Domain("ambient dimension must be at least 1".into()));
    }
    build_any(n, q, cap)
}

fn build_any(n: usize, q: u32, cap: u64) -> Result<LinearLattice> {
    let field = Field::new(q)?;
    let total = element_count(n as u32, q);
    if total > BigUint::from(cap) {
        return Err(Error::TooLarge {
            elements: total.to_string(),
            cap,
        });
    }
    let levels: Vec<Vec<Matrix>> = (0..=n).map(|k| level_matrices(n, q, k)).collect();
    LinearLattice::from_levels(field, n, levels)
}

impl LinearLattice {
    fn from_levels(field: Field, n: usize, levels: Vec<Vec<Matrix>>) -> Result<Self> {
        let q = field.order();
        let mut elements = Vec::new();
        let mut level_of = Vec::new();
        for (k, lvl) in levels.into_iter().enumerate() {
            for m in lvl {
                level_of.push(k);
                elements.push(Subspace::from_rref(q, m));
            }
        }
        let index: HashMap<Vec<u8>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.rref.entries().to_vec(), i))
            .collect();
        // hyperplanes of a k-space W are C * M_W for C over level k-1 of L_k(q)
        let coeffs: Vec<Vec<Matrix>> = (0..=n)
            .map(|k| if k == 0 { Vec::new() } else { level_matrices(k, q, k - 1) })
            .collect();
        let mut up = vec![Vec::new(); elements.len()];
        for (w, sub) in elements.iter().enumerate() {
            let k = sub.dim();
            for c in &coeffs[k] {
                let h = gfmat::rref(&field, &c.mul(&field, &sub.rref)).matrix;
                let hid = *index
                    .get(h.entries())
                    .ok_or_else(|| Error::BadStructure("hyperplane missing from lattice".into()))?;
                up[hid].push(w);
            }
        }
        let poset = GradedPoset::from_covers(PosetId::Linear { n: n as u32, q }, level_of, up)?;
        Ok(LinearLattice {
            n,
            field,
            elements,
            index,
            poset,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn get(&self, id: usize) -> &Subspace {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn id_of(&self, s: &Subspace) -> Option<usize> {
        if s.n != self.n || s.q != self.q() {
            return None;
        }
        self.index.get(s.rref.entries()).copied()
    }

    /// Id of the row space of an arbitrary matrix.
    pub fn id_of_rows(&self, m: &Matrix) -> Result<usize> {
        if m.cols() != self.n {
            return Err(Error::MismatchedAmbient);
        }
        let s = Subspace::from_rows(&self.field, m)?;
        Ok(self.id_of(&s).expect("every subspace is enumerated"))
    }

    pub fn level(&self, k: usize) -> &[usize] {
        self.poset.level(k)
    }

    pub fn dim_of(&self, id: usize) -> usize {
        self.poset.level_of(id)
    }

    pub fn rank_numbers(&self) -> Vec<usize> {
        self.poset.rank_numbers()
    }

    pub fn zero_id(&self) -> usize {
        0
    }

    pub fn full_id(&self) -> usize {
        self.elements.len() - 1
    }

    /// Sorted ids of the covers of `id`.
    pub fn up_adjacency(&self, id: usize) -> &[usize] {
        self.poset.up(id)
    }

    pub fn contains(&self, u: usize, w: usize) -> bool {
        u == w || self.poset.less(u, w)
    }

    pub fn sum(&self, u: usize, w: usize) -> usize {
        let s = sum(&self.field, self.get(u), self.get(w)).expect("same ambient");
        self.id_of(&s).expect("enumerated")
    }

    pub fn intersect(&self, u: usize, w: usize) -> usize {
        let s = intersect(&self.field, self.get(u), self.get(w)).expect("same ambient");
        self.id_of(&s).expect("enumerated")
    }

    pub fn dual(&self, id: usize) -> usize {
        self.id_of(&dual(&self.field, self.get(id))).expect("enumerated")
    }

    /// Total number of maximal chains, counted over the Hasse diagram.
    pub fn count_maximal_chains(&self) -> BigUint {
        self.poset.count_maximal_chains()
    }

    /// Maximal chains through `id`, `[k]_q! [n-k]_q!` with `k = dim`.
    pub fn chains_through(&self, id: usize) -> BigUint {
        let k = self.dim_of(id) as u32;
        q_factorial(k, self.q()) * q_factorial(self.n as u32 - k, self.q())
    }

    /// The interval `[u, w]` as an isomorphic copy of L_m(q).
    pub fn interval(&self, u: usize, w: usize) -> Result<Interval> {
        Interval::new(self, u, w)
    }

    /// Rank number of level `k` as an exact integer.
    pub fn rank_number(&self, k: usize) -> BigUint {
        gaussian(self.n as u32, k as u32, self.q()).expect("level within range")
    }

    pub fn rank_number_u64(&self, k: usize) -> u64 {
        self.rank_number(k).to_u64().expect("rank numbers of built lattices fit u64")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::gaussian as g;

    #[test]
    fn level_counts_match_gaussian() {
        for (n, q) in [(1, 2), (3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (3, 4), (3, 5), (2, 7), (2, 8), (2, 9)] {
            for k in 0..=n {
                let lvl = enumerate_level(n, q, k).unwrap();
                assert_eq!(BigUint::from(lvl.len()), g(n as u32, k as u32, q).unwrap());
                let f = Field::new(q).unwrap();
                for s in &lvl {
                    assert!(gfmat::is_rref(&f, s.matrix()));
                    assert_eq!(s.dim(), k);
                }
                for w in lvl.windows(2) {
                    assert!(w[0].matrix().entries() < w[1].matrix().entries());
                }
            }
        }
    }

    #[test]
    fn small_lattices() {
        let l = build_lattice(3, 2).unwrap();
        assert_eq!(l.rank_numbers(), vec![1, 7, 7, 1]);
        assert_eq!(l.size(), 16);
        let l4 = build_lattice(4, 2).unwrap();
        assert_eq!(l4.rank_numbers(), vec![1, 15, 35, 15, 1]);
        let l1 = build_lattice(1, 5).unwrap();
        assert_eq!(l1.rank_numbers(), vec![1, 1]);
        assert!(matches!(build_lattice(0, 2), Err(Error::Domain(_))));
        assert!(matches!(build_lattice(3, 6), Err(Error::UnsupportedField(6))));
        assert!(matches!(build_lattice_capped(4, 2, 60), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn covers_agree_with_containment() {
        for (n, q) in [(3, 2), (3, 3), (4, 2)] {
            let l = build_lattice(n, q).unwrap();
            let f = l.field();
            for u in 0..l.size() {
                for w in 0..l.size() {
                    let c = contains(f, l.get(u), l.get(w)).unwrap();
                    let is_cover = l.up_adjacency(u).contains(&w);
                    assert_eq!(is_cover, c && l.dim_of(w) == l.dim_of(u) + 1);
                    assert_eq!(l.contains(u, w), c);
                }
            }
        }
    }

    #[test]
    fn shade_and_shadow_sizes() {
        let l = build_lattice(3, 3).unwrap();
        for &x in l.level(1) {
            assert_eq!(l.poset().shade(&[x]).unwrap().count(), 4);
        }
        let l = build_lattice(4, 2).unwrap();
        for k in 1..=4 {
            for &x in l.level(k) {
                let expect: usize = q_bracket(k as u32, 2).try_into().unwrap();
                assert_eq!(l.poset().shadow(&[x]).unwrap().count(), expect);
            }
            let all = l.poset().shadow(l.level(k)).unwrap();
            assert_eq!(all.count(), l.level(k - 1).len());
        }
    }

    #[test]
    fn modular_identity_and_intersections() {
        let l = build_lattice(4, 2).unwrap();
        for u in 0..l.size() {
            assert_eq!(l.intersect(u, u), u);
            for w in 0..l.size() {
                let (s, i) = (l.sum(u, w), l.intersect(u, w));
                assert_eq!(l.dim_of(s) + l.dim_of(i), l.dim_of(u) + l.dim_of(w));
                assert!(l.contains(i, u) && l.contains(i, w) && l.contains(u, s));
            }
        }
        let l3 = build_lattice(3, 5).unwrap();
        for &u in l3.level(2) {
            for &w in l3.level(2) {
                if u != w {
                    assert_eq!(l3.dim_of(l3.intersect(u, w)), 1);
                }
            }
        }
    }

    #[test]
    fn duality_is_order_reversing_involution() {
        for (n, q) in [(4, 2), (3, 3)] {
            let l = build_lattice(n, q).unwrap();
            assert_eq!(l.dual(l.full_id()), l.zero_id());
            for u in 0..l.size() {
                assert_eq!(l.dual(l.dual(u)), u);
                assert_eq!(l.dim_of(l.dual(u)), n - l.dim_of(u));
                for w in 0..l.size() {
                    assert_eq!(l.contains(u, w), l.contains(l.dual(w), l.dual(u)));
                }
            }
        }
    }

    #[test]
    fn mismatched_ambient() {
        let f = Field::new(2).unwrap();
        let a = Subspace::zero(3, 2);
        let b = Subspace::zero(4, 2);
        assert!(matches!(contains(&f, &a, &b), Err(Error::MismatchedAmbient)));
        assert!(matches!(sum(&f, &a, &b), Err(Error::MismatchedAmbient)));
    }

    #[test]
    fn chain_counts() {
        let l = build_lattice(3, 2).unwrap();
        assert_eq!(l.count_maximal_chains(), BigUint::from(21u32));
        for x in 0..l.size() {
            assert_eq!(l.chains_through(x), l.poset().chains_through(x));
        }
        assert_eq!(l.chains_through(l.zero_id()), BigUint::from(21u32));
        for &x in l.level(1) {
            assert_eq!(l.chains_through(x), BigUint::from(3u32));
        }
        let l = build_lattice(4, 3).unwrap();
        assert_eq!(l.count_maximal_chains(), q_factorial(4, 3));
        for k in 0..=4 {
            let s: BigUint = l.level(k).iter().map(|&x| l.chains_through(x)).sum();
            assert_eq!(s, l.count_maximal_chains());
        }
    }
}
