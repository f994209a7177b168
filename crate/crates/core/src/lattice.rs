use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits::Limits;
use crate::subgroup::{closure, Subgroup};

/// All subgroups of a small group with the Möbius function `μ(H, G)`.
pub struct SubgroupLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    mobius: Vec<i64>,
}

impl SubgroupLattice {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Sorted by order, then by element list.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn mobius(&self, i: usize) -> i64 {
        self.mobius[i]
    }

    pub fn mobius_values(&self) -> &[i64] {
        &self.mobius
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|k| k == h)
    }

    /// Whether subgroup `i` is contained in subgroup `j`.
    pub fn includes(&self, i: usize, j: usize) -> bool {
        self.subgroups[i].is_subgroup_of(&self.subgroups[j])
    }

    pub fn normal_subgroups(&self) -> Vec<&Subgroup> {
        self.subgroups.iter().filter(|h| h.is_normal()).collect()
    }

    /// `Σ_H μ(H, G) |H|^n`.
    pub fn hall_phi(&self, n: u32) -> Result<u128> {
        let mut total: i128 = 0;
        for (h, &mu) in self.subgroups.iter().zip(&self.mobius) {
            let term = (h.order() as i128)
                .checked_pow(n)
                .and_then(|p| p.checked_mul(mu as i128))
                .ok_or_else(|| Error::Internal(format!("Möbius sum overflows at n = {n}")))?;
            total += term;
        }
        u128::try_from(total).map_err(|_| Error::Internal(format!("negative Möbius sum {total}")))
    }
}

/// Every subgroup, as the fixpoint of joins with cyclic subgroups.
pub fn subgroup_lattice(group: &FiniteGroup, limits: &Limits) -> Result<SubgroupLattice> {
    if group.order() > limits.max_lattice_order {
        return Err(Error::LatticeCapExceeded {
            order: group.order(),
            cap: limits.max_lattice_order,
        });
    }
    let mut seen = FxHashSet::default();
    let mut cyclic = Vec::new();
    for a in group.elements() {
        let c = closure(group, &[a]);
        if seen.insert(c.members().clone()) {
            cyclic.push(c);
        }
    }
    let mut subgroups = cyclic.clone();
    let mut i = 0;
    while i < subgroups.len() {
        for c in &cyclic {
            if c.is_subgroup_of(&subgroups[i]) {
                continue;
            }
            let mut gens = subgroups[i].generators().to_vec();
            gens.extend_from_slice(c.generators());
            let joined = closure(group, &gens);
            if seen.insert(joined.members().clone()) {
                subgroups.push(joined);
            }
        }
        i += 1;
    }
    subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));

    let len = subgroups.len();
    let mut mobius = vec![0i64; len];
    mobius[len - 1] = 1;
    for i in (0..len - 1).rev() {
        mobius[i] = -(i + 1..len)
            .filter(|&j| subgroups[i].is_subgroup_of(&subgroups[j]))
            .map(|j| mobius[j])
            .sum::<i64>();
    }
    Ok(SubgroupLattice {
        group: group.clone(),
        subgroups,
        mobius,
    })
}

/// Hall's count of generating `n`-tuples through the Möbius function.
pub fn hall_phi(group: &FiniteGroup, n: u32, limits: &Limits) -> Result<u128> {
    subgroup_lattice(group, limits)?.hall_phi(n)
}
