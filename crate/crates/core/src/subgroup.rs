use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::hom::Homomorphism;

/// A subgroup of a concrete group, stored as its sorted element ids.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<Element>,
    generators: Vec<Element>,
    members: FixedBitSet,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent", &self.parent.name())
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    #[inline]
    pub fn contains(&self, a: Element) -> bool {
        self.members.contains(a.index())
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn whole(group: &FiniteGroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(group.order());
        members.insert_range(..);
        Subgroup {
            parent: group.clone(),
            elements: group.elements().collect(),
            generators: group.generators().to_vec(),
            members,
        }
    }

    pub fn trivial(group: &FiniteGroup) -> Subgroup {
        closure(group, &[])
    }

    /// Normal in the parent: conjugates of our generators by the parent's
    /// generators stay inside.
    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        g.generators()
            .iter()
            .all(|&x| self.generators.iter().all(|&n| self.contains(g.conjugate(n, x))))
    }

    /// The subgroup as a group of its own, with ids following the sorted
    /// element list, plus the inclusion map into the parent.
    pub fn to_group(&self, name: &str) -> Result<(FiniteGroup, Homomorphism)> {
        let g = &self.parent;
        let mut position = vec![u32::MAX; g.order()];
        for (i, e) in self.elements.iter().enumerate() {
            position[e.index()] = i as u32;
        }
        let n = self.order();
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                table.push(position[g.multiply(a, b).index()]);
            }
        }
        let labels = self.elements.iter().map(|&e| g.label(e)).collect();
        let gens: Vec<Element> = self
            .generators
            .iter()
            .map(|e| Element(position[e.index()]))
            .collect();
        let sub = FiniteGroup::from_trusted_table(n, table, name, Some(labels), Some(gens.clone()))?;
        let images = self.generators.clone();
        let map = self.elements.clone();
        Ok((sub.clone(), Homomorphism::from_parts(sub, g.clone(), gens, images, map)))
    }
}

/// The subgroup generated by `gens`: breadth-first closure under right
/// multiplication, which is enough in a finite group.
pub fn closure(group: &FiniteGroup, gens: &[Element]) -> Subgroup {
    let mut generators: Vec<Element> = Vec::with_capacity(gens.len());
    for &g in gens {
        if !generators.contains(&g) {
            generators.push(g);
        }
    }
    let mut members = FixedBitSet::with_capacity(group.order());
    members.insert(0);
    let mut elements = vec![Element::IDENTITY];
    let mut i = 0;
    while i < elements.len() {
        let a = elements[i];
        for &g in &generators {
            let b = group.multiply(a, g);
            if !members.put(b.index()) {
                elements.push(b);
            }
        }
        i += 1;
    }
    elements.sort_unstable();
    Subgroup {
        parent: group.clone(),
        elements,
        generators,
        members,
    }
}

/// `<H, x>`.
pub fn join(h: &Subgroup, x: Element) -> Subgroup {
    if h.contains(x) {
        return h.clone();
    }
    let mut gens = h.generators.clone();
    gens.push(x);
    closure(&h.parent, &gens)
}

/// Smallest subgroup containing `gens` and normalised by `ambient_gens`.
pub fn normal_closure_under(group: &FiniteGroup, ambient_gens: &[Element], gens: &[Element]) -> Subgroup {
    let mut sub = closure(group, gens);
    loop {
        let missing = sub.generators.iter().find_map(|&n| {
            ambient_gens
                .iter()
                .map(|&x| group.conjugate(n, x))
                .find(|&c| !sub.contains(c))
        });
        match missing {
            Some(c) => sub = join(&sub, c),
            None => return sub,
        }
    }
}

pub fn normal_closure(group: &FiniteGroup, gens: &[Element]) -> Subgroup {
    normal_closure_under(group, group.generators(), gens)
}

/// A generating set found greedily (largest element order first, then
/// smallest id), with redundant entries removed afterwards.
pub fn greedy_generators(group: &FiniteGroup) -> Vec<Element> {
    let mut candidates: Vec<Element> = group.elements().skip(1).collect();
    candidates.sort_by_key(|&e| (std::cmp::Reverse(group.element_order(e)), e));
    let mut gens = Vec::new();
    let mut sub = closure(group, &[]);
    for &x in &candidates {
        if sub.is_whole() {
            break;
        }
        if !sub.contains(x) {
            gens.push(x);
            sub = join(&sub, x);
        }
    }
    irredundant_subsequence(group, gens)
}

/// Drops entries one at a time while the rest still generates.
pub(crate) fn irredundant_subsequence(group: &FiniteGroup, mut gens: Vec<Element>) -> Vec<Element> {
    let target = closure(group, &gens).order();
    let mut i = 0;
    while i < gens.len() {
        let mut rest = gens.clone();
        rest.remove(i);
        if closure(group, &rest).order() == target {
            gens = rest;
        } else {
            i += 1;
        }
    }
    gens
}

/// The quotient `G/N` as a Cayley-table group together with the canonical
/// surjection. Coset ids follow the smallest element of each coset, so the
/// identity coset is 0.
pub fn quotient_group(group: &FiniteGroup, normal: &Subgroup) -> Result<(FiniteGroup, Homomorphism)> {
    if !normal.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut coset = vec![u32::MAX; group.order()];
    let mut reps = Vec::new();
    for a in group.elements() {
        if coset[a.index()] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(a);
        for &n in normal.elements() {
            coset[group.multiply(a, n).index()] = c;
        }
    }
    let m = reps.len();
    let mut table = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            table.push(coset[group.multiply(a, b).index()]);
        }
    }
    let name = format!("{}/N{}", group.name(), normal.order());
    let gens: Vec<Element> = group.generators().to_vec();
    let images: Vec<Element> = gens.iter().map(|g| Element(coset[g.index()])).collect();
    let qgens = crate::subgroup::irredundant_subsequence_of_table(m, &table, &images);
    let labels = reps.iter().map(|&r| format!("{}N", group.label(r))).collect();
    let quotient = FiniteGroup::from_trusted_table(m, table, &name, Some(labels), Some(qgens))?;
    let map = coset.into_iter().map(Element).collect();
    let hom = Homomorphism::from_parts(group.clone(), quotient.clone(), gens, images, map);
    Ok((quotient, hom))
}

fn irredundant_subsequence_of_table(order: usize, table: &[u32], images: &[Element]) -> Vec<Element> {
    let mut gens: Vec<Element> = Vec::new();
    let mut seen = FixedBitSet::with_capacity(order);
    seen.insert(0);
    let mut elems = vec![0u32];
    for &x in images {
        if seen.contains(x.index()) {
            continue;
        }
        gens.push(x);
        // recompute closure with the enlarged generator list
        seen.clear();
        seen.insert(0);
        elems.clear();
        elems.push(0);
        let mut i = 0;
        while i < elems.len() {
            for g in &gens {
                let b = table[elems[i] as usize * order + g.index()];
                if !seen.put(b as usize) {
                    elems.push(b);
                }
            }
            i += 1;
        }
    }
    gens
}

/// Flags from the structure predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureFlags {
    pub is_abelian: bool,
    pub is_nilpotent: bool,
    pub is_solvable: bool,
}

pub fn structure_predicates(group: &FiniteGroup) -> StructureFlags {
    StructureFlags {
        is_abelian: is_abelian(group),
        is_nilpotent: is_nilpotent(group),
        is_solvable: is_solvable(group),
    }
}

pub fn is_abelian(group: &FiniteGroup) -> bool {
    let gens = group.generators();
    gens.iter()
        .enumerate()
        .all(|(i, &a)| gens[i + 1..].iter().all(|&b| group.commute(a, b)))
}

/// Derived subgroup of `h`, as a subgroup of the same parent.
pub fn derived_subgroup(h: &Subgroup) -> Subgroup {
    let g = h.parent();
    let gens = h.generators();
    let mut comms = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let c = g.commutator(a, b);
            if !c.is_identity() && !comms.contains(&c) {
                comms.push(c);
            }
        }
    }
    normal_closure_under(g, gens, &comms)
}

pub fn derived_series(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(group)];
    loop {
        let last = series.last().expect("nonempty");
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

/// `G = γ1 ≥ γ2 ≥ ..` with `γ(i+1) = [γi, G]`, until it stabilises.
pub fn lower_central_series(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(group)];
    loop {
        let last = series.last().expect("nonempty");
        let mut comms = Vec::new();
        for &x in last.generators() {
            for &g in group.generators() {
                let c = group.commutator(x, g);
                if !c.is_identity() && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        let next = normal_closure(group, &comms);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable(group: &FiniteGroup) -> bool {
    derived_series(group).last().expect("nonempty").is_trivial()
}

pub fn is_nilpotent(group: &FiniteGroup) -> bool {
    lower_central_series(group).last().expect("nonempty").is_trivial()
}

/// Conjugacy classes, each sorted, ordered by smallest member.
pub fn conjugacy_classes(group: &FiniteGroup) -> Vec<Vec<Element>> {
    let mut seen = FixedBitSet::with_capacity(group.order());
    let mut classes = Vec::new();
    for a in group.elements() {
        if seen.contains(a.index()) {
            continue;
        }
        let mut class = vec![a];
        seen.insert(a.index());
        let mut i = 0;
        while i < class.len() {
            let x = class[i];
            for &g in group.generators() {
                let y = group.conjugate(x, g);
                if !seen.put(y.index()) {
                    class.push(y);
                }
            }
            i += 1;
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Nonabelian simple: nontrivial, nonabelian, and the normal closure of
/// every nonidentity class representative is the whole group.
pub fn is_nonabelian_simple(group: &FiniteGroup) -> bool {
    if group.order() == 1 || is_abelian(group) {
        return false;
    }
    conjugacy_classes(group)
        .iter()
        .skip(1)
        .all(|class| normal_closure(group, &class[..1]).is_whole())
}

/// A proper nontrivial normal subgroup, if one exists.
pub fn proper_normal_subgroup(group: &FiniteGroup) -> Option<Subgroup> {
    conjugacy_classes(group)
        .iter()
        .skip(1)
        .map(|class| normal_closure(group, &class[..1]))
        .find(|n| !n.is_whole())
}

pub fn center(group: &FiniteGroup) -> Subgroup {
    let central: Vec<Element> = group
        .elements()
        .filter(|&z| group.generators().iter().all(|&g| group.commute(z, g)))
        .collect();
    closure(group, &central)
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// A Sylow `p`-subgroup, grown greedily: starting from the trivial group,
/// adjoin the smallest-id `p`-element that keeps the closure a `p`-group.
/// Such an element exists until the full `p`-part is reached, since a
/// proper `p`-subgroup of a Sylow subgroup is properly contained in its
/// normaliser there.
pub fn sylow_subgroup(group: &FiniteGroup, p: u64) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not prime")));
    }
    let order = group.order() as u64;
    if !order.is_multiple_of(p) {
        return Err(Error::NotADivisor {
            p,
            order: group.order(),
        });
    }
    let mut target = 1;
    while order.is_multiple_of(target * p) {
        target *= p;
    }
    let mut sub = Subgroup::trivial(group);
    while (sub.order() as u64) < target {
        let next = group
            .elements()
            .filter(|&x| !sub.contains(x) && is_power_of(group.element_order(x) as u64, p))
            .map(|x| join(&sub, x))
            .find(|cand| is_power_of(cand.order() as u64, p));
        match next {
            Some(s) => sub = s,
            None => {
                return Err(Error::Internal(format!(
                    "Sylow search stuck at order {} below {target}",
                    sub.order()
                )))
            }
        }
    }
    Ok(sub)
}
