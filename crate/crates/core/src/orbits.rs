use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::genseq::{check_candidates, count_gamma, enumerate_gamma, rank, GeneratingSequence};
use crate::group::{Element, FiniteGroup};
use crate::hom::{pair_closure_order, Homomorphism};
use crate::limits::Limits;
use crate::subgroup::{conjugacy_classes, greedy_generators};

const UNSET: u32 = u32::MAX;

/// Largest automorphism table kept in memory, in bytes.
const AUT_TABLE_BUDGET: u128 = 1 << 31;

/// Whether an automorphism maps `s` to `t` entrywise: the pairs `(s_i, t_i)`
/// generate a subgroup of `G x G` of order `|G|`.
pub fn equivalent_sequences(group: &FiniteGroup, s: &[Element], t: &[Element]) -> bool {
    if s.len() != t.len() {
        return false;
    }
    let n = group.order();
    pair_closure_order(group, group, s, t, n) == n
}

/// Orders of the entries and of their pairwise products; constant on orbits.
fn signature(group: &FiniteGroup, s: &[Element]) -> Vec<u32> {
    let mut sig: Vec<u32> = s.iter().map(|&a| group.element_order(a)).collect();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            sig.push(group.element_order(group.multiply(s[i], s[j])));
        }
    }
    sig
}

/// A partial injective homomorphism defined on `<gens[..depth]>`.
#[derive(Clone)]
struct Partial {
    map: Vec<u32>,
    hit: FixedBitSet,
    domain: Vec<Element>,
}

/// Depth-first search for automorphisms by images of a fixed generating
/// sequence, extending the partial map one generator at a time.
struct AutSearch<'a> {
    group: &'a FiniteGroup,
    gens: Vec<Element>,
    /// Per element: order, class size, numbers of square and cube roots.
    invariant: Vec<[u32; 4]>,
}

impl<'a> AutSearch<'a> {
    fn new(group: &'a FiniteGroup) -> Self {
        let mut invariant: Vec<[u32; 4]> = group.element_orders().iter().map(|&o| [o, 0, 0, 0]).collect();
        for class in conjugacy_classes(group) {
            for &a in &class {
                invariant[a.index()][1] = class.len() as u32;
            }
        }
        for z in group.elements() {
            let sq = group.multiply(z, z);
            invariant[sq.index()][2] += 1;
            invariant[group.multiply(sq, z).index()][3] += 1;
        }
        AutSearch {
            group,
            gens: greedy_generators(group),
            invariant,
        }
    }

    fn root(&self) -> Partial {
        let n = self.group.order();
        let mut map = vec![UNSET; n];
        map[0] = 0;
        let mut hit = FixedBitSet::with_capacity(n);
        hit.insert(0);
        Partial {
            map,
            hit,
            domain: vec![Element::IDENTITY],
        }
    }

    fn extend(&self, p: &Partial, images: &[Element]) -> Option<Partial> {
        let g = self.group;
        let d = images.len() - 1;
        if self.invariant[self.gens[d].index()] != self.invariant[images[d].index()] {
            return None;
        }
        let mut q = p.clone();
        let assign = |q: &mut Partial, b: Element, fb: u32| -> bool {
            match q.map[b.index()] {
                UNSET => {
                    if self.invariant[b.index()] != self.invariant[fb as usize] || q.hit.put(fb as usize) {
                        return false;
                    }
                    q.map[b.index()] = fb;
                    q.domain.push(b);
                    true
                }
                v => v == fb,
            }
        };
        let old = q.domain.len();
        for i in 0..old {
            let a = q.domain[i];
            let fa = Element(q.map[a.index()]);
            if !assign(&mut q, g.multiply(a, self.gens[d]), g.multiply(fa, images[d]).0) {
                return None;
            }
        }
        let mut i = old;
        while i < q.domain.len() {
            let a = q.domain[i];
            let fa = Element(q.map[a.index()]);
            for (&x, &y) in self.gens[..=d].iter().zip(images.iter()) {
                if !assign(&mut q, g.multiply(a, x), g.multiply(fa, y).0) {
                    return None;
                }
            }
            i += 1;
        }
        Some(q)
    }

    fn exists(&self, p: &Partial, images: &mut Vec<Element>) -> bool {
        if images.len() == self.gens.len() {
            return true;
        }
        for y in self.group.elements() {
            images.push(y);
            let found = self.extend(p, images).is_some_and(|q| self.exists(&q, images));
            images.pop();
            if found {
                return true;
            }
        }
        false
    }

    fn for_each(&self, p: &Partial, images: &mut Vec<Element>, f: &mut dyn FnMut(&[Element], &[u32])) {
        if images.len() == self.gens.len() {
            f(images, &p.map);
            return;
        }
        for y in self.group.elements() {
            images.push(y);
            if let Some(q) = self.extend(p, images) {
                self.for_each(&q, images, f);
            }
            images.pop();
        }
    }

    /// Some automorphism extending `p` and `images`, as a full map.
    fn complete(&self, p: &Partial, images: &mut Vec<Element>) -> Option<Vec<u32>> {
        if images.len() == self.gens.len() {
            return Some(p.map.clone());
        }
        for y in self.group.elements() {
            images.push(y);
            let found = self.extend(p, images).and_then(|q| self.complete(&q, images));
            images.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Transversals of the pointwise stabilizer chain of the generators:
    /// level `d` holds one automorphism fixing `gens[..d]` for each possible
    /// image of `gens[d]`.
    fn transversals(&self) -> Vec<Vec<Vec<u32>>> {
        let mut levels = Vec::with_capacity(self.gens.len());
        let mut p = self.root();
        let mut images: Vec<Element> = Vec::with_capacity(self.gens.len());
        for d in 0..self.gens.len() {
            let mut level = Vec::new();
            for y in self.group.elements() {
                images.push(y);
                if let Some(map) = self.extend(&p, &images).and_then(|q| self.complete(&q, &mut images)) {
                    level.push(map);
                }
                images.pop();
            }
            levels.push(level);
            images.push(self.gens[d]);
            p = self.extend(&p, &images).expect("the identity extends");
        }
        levels
    }

    /// `|Aut(G)|` as the product over levels of the number of extendable
    /// images, each level fixing one extendable choice.
    fn order(&self) -> u128 {
        let mut product = 1u128;
        let mut p = self.root();
        let mut images = Vec::with_capacity(self.gens.len());
        for _ in 0..self.gens.len() {
            let mut count = 0u128;
            let mut chosen: Option<(Element, Partial)> = None;
            for y in self.group.elements() {
                images.push(y);
                if let Some(q) = self.extend(&p, &images) {
                    if self.exists(&q, &mut images) {
                        count += 1;
                        if chosen.is_none() {
                            chosen = Some((y, q));
                        }
                    }
                }
                images.pop();
            }
            let (y, q) = chosen.expect("the identity automorphism always extends");
            product *= count;
            images.push(y);
            p = q;
        }
        product
    }
}

pub fn aut_order(group: &FiniteGroup) -> u128 {
    AutSearch::new(group).order()
}

/// Every automorphism, in ascending order of the images of the group's
/// fixed generating sequence.
pub fn enumerate_aut(group: &FiniteGroup, limits: &Limits) -> Result<Vec<Homomorphism>> {
    let search = AutSearch::new(group);
    let count = search.order();
    if count > limits.max_closure as u128 {
        return Err(Error::EnumerationCapExceeded {
            candidates: count,
            cap: limits.max_closure as u128,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    search.for_each(&search.root(), &mut Vec::new(), &mut |images, map| {
        out.push(Homomorphism::from_parts(
            group.clone(),
            group.clone(),
            search.gens.clone(),
            images.to_vec(),
            map.iter().map(|&v| Element(v)).collect(),
        ));
    });
    Ok(out)
}

/// Every product `prefix ∘ u_d ∘ u_{d+1} ∘ ...` with `u_i` from level `i`;
/// over a full set of transversals these are each automorphism once.
fn compose_levels(levels: &[Vec<Vec<u32>>], prefix: &[u32], emit: &mut dyn FnMut(&[u32])) {
    let Some((level, rest)) = levels.split_first() else {
        emit(prefix);
        return;
    };
    for u in level {
        let next: Vec<u32> = u.iter().map(|&x| prefix[x as usize]).collect();
        compose_levels(rest, &next, emit);
    }
}

/// Automorphisms as flat element maps, one or two bytes per entry.
struct AutTable {
    order: usize,
    wide: bool,
    count: usize,
    data: Vec<u8>,
}

impl AutTable {
    fn build(group: &FiniteGroup, count: u128) -> Option<AutTable> {
        let order = group.order();
        let wide = order > 256;
        let width = if wide { 2 } else { 1 };
        if order > 1 << 16 || count * (order * width) as u128 > AUT_TABLE_BUDGET {
            return None;
        }
        let mut data = Vec::with_capacity(count as usize * order * width);
        let levels = AutSearch::new(group).transversals();
        let identity: Vec<u32> = (0..order as u32).collect();
        compose_levels(&levels, &identity, &mut |map| {
            for &v in map {
                if wide {
                    data.extend_from_slice(&(v as u16).to_le_bytes());
                } else {
                    data.push(v as u8);
                }
            }
        });
        Some(AutTable {
            order,
            wide,
            count: data.len() / (order * width),
            data,
        })
    }

    #[inline]
    fn get(&self, k: usize, a: Element) -> usize {
        let i = k * self.order + a.index();
        if self.wide {
            u16::from_le_bytes([self.data[2 * i], self.data[2 * i + 1]]) as usize
        } else {
            self.data[i] as usize
        }
    }
}

/// The orbits of `Aut(G)` on `Γ_n(G)` with their sizes, before any check
/// that the sizes agree.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub representatives: Vec<GeneratingSequence>,
    pub orbit_sizes: Vec<u128>,
    pub aut_order: u128,
    pub gamma_count: u128,
}

impl OrbitPartition {
    pub fn is_free(&self) -> bool {
        self.orbit_sizes.iter().all(|&s| s == self.aut_order)
    }
}

/// Partition of `Γ_n(G)`, marking the image of each new representative
/// under every automorphism in a bitset over `G^n`. Falls back to
/// [`orbit_partition_by_equivalence`] when the automorphism table would be
/// too large.
pub fn orbit_partition(group: &FiniteGroup, n: usize, limits: &Limits) -> Result<OrbitPartition> {
    check_orbit_preconditions(group, n, limits)?;
    let aut = aut_order(group);
    let Some(table) = AutTable::build(group, aut) else {
        return orbit_partition_by_equivalence(group, n, limits);
    };
    let order = group.order();
    let total = order.pow(n as u32);
    let mut visited = FixedBitSet::with_capacity(total);
    let index = |t: &mut dyn Iterator<Item = usize>| t.fold(0usize, |acc, x| acc * order + x);
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut gamma = 0u128;
    let mut iter = enumerate_gamma(group, n, limits)?;
    while let Some(t) = iter.advance() {
        gamma += 1;
        if visited.contains(index(&mut t.iter().map(|a| a.index()))) {
            continue;
        }
        let mut size = 0u128;
        for k in 0..table.count {
            let idx = index(&mut t.iter().map(|&a| table.get(k, a)));
            if !visited.put(idx) {
                size += 1;
            }
        }
        reps.push(GeneratingSequence::new_unchecked(group, t.to_vec()));
        sizes.push(size);
    }
    Ok(OrbitPartition {
        representatives: reps,
        orbit_sizes: sizes,
        aut_order: aut,
        gamma_count: gamma,
    })
}

/// Partition of `Γ_n(G)` comparing each sequence against the
/// representatives found so far with the same signature.
pub fn orbit_partition_by_equivalence(group: &FiniteGroup, n: usize, limits: &Limits) -> Result<OrbitPartition> {
    check_orbit_preconditions(group, n, limits)?;
    let mut buckets: FxHashMap<Vec<u32>, Vec<usize>> = FxHashMap::default();
    let mut reps: Vec<Vec<Element>> = Vec::new();
    let mut sizes: Vec<u128> = Vec::new();
    let mut gamma = 0u128;
    let mut iter = enumerate_gamma(group, n, limits)?;
    while let Some(t) = iter.advance() {
        gamma += 1;
        let bucket = buckets.entry(signature(group, t)).or_default();
        match bucket.iter().find(|&&r| equivalent_sequences(group, &reps[r], t)) {
            Some(&r) => sizes[r] += 1,
            None => {
                bucket.push(reps.len());
                reps.push(t.to_vec());
                sizes.push(1);
            }
        }
    }
    Ok(OrbitPartition {
        representatives: reps
            .into_iter()
            .map(|t| GeneratingSequence::new_unchecked(group, t))
            .collect(),
        orbit_sizes: sizes,
        aut_order: aut_order(group),
        gamma_count: gamma,
    })
}

fn check_orbit_preconditions(group: &FiniteGroup, n: usize, limits: &Limits) -> Result<()> {
    if n == 0 {
        return Err(Error::PreconditionViolated("sequence length must be at least 1".into()));
    }
    let r = rank(group);
    if n < r {
        return Err(Error::PreconditionViolated(format!(
            "n = {n} is below the rank {r} of {}",
            group.name()
        )));
    }
    check_candidates(group, n, limits)
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub group: FiniteGroup,
    pub n: usize,
    /// Lexicographic minimum of each orbit, in ascending order.
    pub representatives: Vec<GeneratingSequence>,
    pub orbit_size: u128,
    pub h_n: u128,
    pub gamma_count: u128,
}

pub fn orbit_decompose(group: &FiniteGroup, n: usize, limits: &Limits) -> Result<OrbitDecomposition> {
    decomposition(group, n, orbit_partition(group, n, limits)?)
}

fn decomposition(group: &FiniteGroup, n: usize, p: OrbitPartition) -> Result<OrbitDecomposition> {
    if let Some(i) = p.orbit_sizes.iter().position(|&s| s != p.aut_order) {
        return Err(Error::Internal(format!(
            "orbit of {} has {} elements but |Aut| = {}",
            p.representatives[i], p.orbit_sizes[i], p.aut_order
        )));
    }
    Ok(OrbitDecomposition {
        group: group.clone(),
        n,
        h_n: p.representatives.len() as u128,
        representatives: p.representatives,
        orbit_size: p.aut_order,
        gamma_count: p.gamma_count,
    })
}

/// `|Γ_n(G)| / |Aut(G)|`, and 0 when `n` is below the rank.
pub fn h_n(group: &FiniteGroup, n: usize) -> Result<u128> {
    let gamma = count_gamma(group, n)?;
    if gamma == 0 {
        return Ok(0);
    }
    let aut = aut_order(group);
    if gamma % aut != 0 {
        return Err(Error::Internal(format!(
            "|Γ_{n}| = {gamma} is not a multiple of |Aut| = {aut}"
        )));
    }
    Ok(gamma / aut)
}

pub fn is_homogeneous(group: &FiniteGroup, n: usize) -> bool {
    n >= 1 && h_n(group, n).is_ok_and(|h| h == 1)
}
