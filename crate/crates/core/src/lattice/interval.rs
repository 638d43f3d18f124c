use std::collections::HashMap;

use super::{build_any, LinearLattice, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::gfmat::{self, Matrix};

/// An interval `[U, W]` of a linear lattice identified with L_m(q),
/// `m = dim W - dim U`, through quotient coordinates.
#[derive(Clone, Debug)]
pub struct Interval {
    lower: usize,
    upper: usize,
    quotient: LinearLattice,
    to_parent: Vec<usize>,
    from_parent: HashMap<usize, usize>,
}

impl Interval {
    pub(super) fn new(lat: &LinearLattice, u: usize, w: usize) -> Result<Self> {
        if !lat.contains(u, w) {
            return Err(Error::NotComparable);
        }
        let field = lat.field();
        let (us, ws) = (lat.get(u), lat.get(w));
        let m = ws.dim() - us.dim();
        // extend the basis of U by rows of M_W
        let mut basis = us.matrix().clone();
        for r in 0..ws.dim() {
            let row = Matrix::new(1, lat.n(), ws.matrix().row(r).to_vec());
            let cand = basis.stack(&row);
            if gfmat::rank(field, &cand) > basis.rows() {
                basis = cand;
            }
        }
        debug_assert_eq!(basis.rows(), ws.dim());
        let quotient = build_any(m, lat.q(), DEFAULT_ELEMENT_CAP)?;
        let mut members: Vec<usize> = lat.poset().above(u).and(lat.poset().below(w)).to_vec();
        members.push(u);
        if u != w {
            members.push(w);
        }
        members.sort_unstable();
        let mut to_parent = vec![usize::MAX; quotient.size()];
        let mut from_parent = HashMap::new();
        let du = us.dim();
        for &v in &members {
            let vm = lat.get(v).matrix();
            let mut rows = Vec::with_capacity(vm.rows());
            for r in 0..vm.rows() {
                let c = gfmat::coordinates(field, &basis, vm.row(r))
                    .ok_or_else(|| Error::BadStructure("interval member outside W".into()))?;
                rows.push(c[du..].to_vec());
            }
            let qm = Matrix::from_rows(m, &rows);
            let qid = quotient.id_of_rows(&qm)?;
            if to_parent[qid] != usize::MAX {
                return Err(Error::BadStructure("quotient map is not injective".into()));
            }
            to_parent[qid] = v;
            from_parent.insert(v, qid);
        }
        if to_parent.contains(&usize::MAX) {
            return Err(Error::BadStructure("quotient map is not surjective".into()));
        }
        Ok(Interval {
            lower: u,
            upper: w,
            quotient,
            to_parent,
            from_parent,
        })
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    /// The lattice L_m(q) the interval is identified with.
    pub fn lattice(&self) -> &LinearLattice {
        &self.quotient
    }

    pub fn size(&self) -> usize {
        self.to_parent.len()
    }

    /// Parent id of an interval-lattice id.
    pub fn to_parent(&self, id: usize) -> usize {
        self.to_parent[id]
    }

    /// Interval-lattice id of a parent id, if it lies in the interval.
    pub fn from_parent(&self, id: usize) -> Option<usize> {
        self.from_parent.get(&id).copied()
    }

    /// Parent ids of the interval, indexed by interval-lattice id.
    pub fn members(&self) -> &[usize] {
        &self.to_parent
    }
}
