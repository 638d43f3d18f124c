//! Families: subsets of a poset's elements.

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::poset::{GradedPoset, PosetId};

/// A subset of a poset's elements, tagged with the poset's identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    poset: PosetId,
    members: Bitset,
}

impl Family {
    pub fn empty(poset: &GradedPoset) -> Self {
        Family {
            poset: poset.id().clone(),
            members: Bitset::new(poset.size()),
        }
    }

    pub fn from_ids(poset: &GradedPoset, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members = Bitset::new(poset.size());
        for id in ids {
            if id >= poset.size() {
                return Err(Error::NotMember(id));
            }
            members.insert(id);
        }
        Ok(Family {
            poset: poset.id().clone(),
            members,
        })
    }

    pub fn from_bitset(poset: &GradedPoset, members: Bitset) -> Result<Self> {
        if members.capacity() != poset.size() {
            return Err(Error::LatticeMismatch);
        }
        Ok(Family {
            poset: poset.id().clone(),
            members,
        })
    }

    /// All elements on the given levels.
    pub fn levels(poset: &GradedPoset, levels: &[usize]) -> Self {
        let ids = levels.iter().flat_map(|&k| poset.level(k).iter().copied());
        Family::from_ids(poset, ids).expect("level ids are valid")
    }

    pub fn poset_id(&self) -> &PosetId {
        &self.poset
    }

    pub fn bits(&self) -> &Bitset {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(id)
    }

    pub fn insert(&mut self, id: usize) {
        self.members.insert(id);
    }

    pub fn remove(&mut self, id: usize) {
        self.members.remove(id);
    }

    pub fn ids(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    /// Whether this family belongs to `poset`.
    pub fn fits(&self, poset: &GradedPoset) -> bool {
        &self.poset == poset.id() && self.members.capacity() == poset.size()
    }

    pub fn check(&self, poset: &GradedPoset) -> Result<()> {
        if self.fits(poset) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    /// Image under an id map into `target`.
    pub fn map_into(&self, target: &GradedPoset, f: impl Fn(usize) -> usize) -> Family {
        Family {
            poset: target.id().clone(),
            members: Bitset::from_ids(target.size(), self.iter().map(f)),
        }
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.poset != other.poset {
            return Err(Error::LatticeMismatch);
        }
        Ok(Family {
            poset: self.poset.clone(),
            members: self.members.or(&other.members),
        })
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.poset == other.poset && self.members.is_subset(&other.members)
    }

    /// Member ids on level `k`.
    pub fn on_level(&self, poset: &GradedPoset, k: usize) -> Vec<usize> {
        poset.level(k).iter().copied().filter(|&x| self.contains(x)).collect()
    }

    /// Levels that have at least one member, ascending.
    pub fn occupied_levels(&self, poset: &GradedPoset) -> Vec<usize> {
        let mut v: Vec<usize> = self.iter().map(|x| poset.level_of(x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}
