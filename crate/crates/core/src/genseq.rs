use std::fmt;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::limits::Limits;
use crate::subgroup::{closure, conjugacy_classes, join, Subgroup};

const UNKNOWN: u32 = u32::MAX;

/// An ordered tuple of elements generating its group.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratingSequence {
    group: FiniteGroup,
    entries: Vec<Element>,
}

impl fmt::Debug for GeneratingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.group.name(), self)
    }
}

impl fmt::Display for GeneratingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.entries.iter().map(Element::to_string).collect();
        write!(f, "({})", ids.join(","))
    }
}

impl GeneratingSequence {
    pub fn new(group: &FiniteGroup, entries: Vec<Element>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&a| !group.contains(a)) {
            return Err(Error::IndexOutOfRange {
                index: bad.index(),
                len: group.order(),
            });
        }
        if !is_generating(group, &entries) {
            return Err(Error::PreconditionViolated(format!(
                "({}) does not generate {}",
                entries.iter().map(Element::to_string).collect::<Vec<_>>().join(","),
                group.name()
            )));
        }
        Ok(Self::new_unchecked(group, entries))
    }

    pub(crate) fn new_unchecked(group: &FiniteGroup, entries: Vec<Element>) -> Self {
        GeneratingSequence {
            group: group.clone(),
            entries,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_entries(self) -> Vec<Element> {
        self.entries
    }
}

pub fn is_generating(group: &FiniteGroup, entries: &[Element]) -> bool {
    closure(group, entries).is_whole()
}

/// Generating, and no single deletion still generates.
pub fn is_irredundant(group: &FiniteGroup, entries: &[Element]) -> bool {
    if !is_generating(group, entries) {
        return false;
    }
    (0..entries.len()).all(|i| {
        let rest: Vec<Element> = entries
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &a)| a)
            .collect();
        !is_generating(group, &rest)
    })
}

/// Checks every proper subsequence. Limited to length 6.
pub fn is_irredundant_exhaustive(group: &FiniteGroup, entries: &[Element]) -> Result<bool> {
    let n = entries.len();
    if n > 6 {
        return Err(Error::PreconditionViolated(format!(
            "exhaustive irredundance check supports length <= 6, got {n}"
        )));
    }
    if !is_generating(group, entries) {
        return Ok(false);
    }
    let full = (1u32 << n) - 1;
    Ok((0..full).all(|mask| {
        let sub: Vec<Element> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| entries[i]).collect();
        !is_generating(group, &sub)
    }))
}

/// Interned subgroups with memoized joins and completion counts.
pub(crate) struct SubgroupCache {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    index: FxHashMap<FixedBitSet, u32>,
    joins: Vec<u32>,
    counts: FxHashMap<(u32, u32), u128>,
}

impl SubgroupCache {
    pub(crate) fn new(group: &FiniteGroup) -> Self {
        let mut cache = SubgroupCache {
            group: group.clone(),
            subgroups: Vec::new(),
            index: FxHashMap::default(),
            joins: Vec::new(),
            counts: FxHashMap::default(),
        };
        cache.intern(Subgroup::trivial(group));
        cache
    }

    pub(crate) const TRIVIAL: u32 = 0;

    fn intern(&mut self, h: Subgroup) -> u32 {
        if let Some(&id) = self.index.get(h.members()) {
            return id;
        }
        let id = self.subgroups.len() as u32;
        self.index.insert(h.members().clone(), id);
        self.subgroups.push(h);
        self.joins.resize(self.joins.len() + self.group.order(), UNKNOWN);
        id
    }

    pub(crate) fn join(&mut self, h: u32, x: Element) -> u32 {
        let slot = h as usize * self.group.order() + x.index();
        let cached = self.joins[slot];
        if cached != UNKNOWN {
            return cached;
        }
        let sub = &self.subgroups[h as usize];
        let id = if sub.contains(x) {
            h
        } else {
            let next = join(sub, x);
            self.intern(next)
        };
        self.joins[slot] = id;
        id
    }

    /// Number of `r`-tuples `x` with `<H, x> = G`.
    pub(crate) fn count(&mut self, h: u32, r: u32) -> u128 {
        let order = self.group.order() as u128;
        let sub_order = self.subgroups[h as usize].order() as u128;
        if sub_order == order {
            return order.pow(r);
        }
        if r == 0 {
            return 0;
        }
        if let Some(&c) = self.counts.get(&(h, r)) {
            return c;
        }
        let mut total = sub_order * self.count(h, r - 1);
        let group = self.group.clone();
        if h == Self::TRIVIAL {
            // Conjugate elements generate conjugate cyclic subgroups.
            for class in conjugacy_classes(&group).iter().skip(1) {
                let k = self.join(h, class[0]);
                total += class.len() as u128 * self.count(k, r - 1);
            }
            self.counts.insert((h, r), total);
            return total;
        }
        // `<H, x>` only depends on the coset `xH`.
        let mut seen = self.subgroups[h as usize].members().clone();
        for x in group.elements() {
            if seen.contains(x.index()) {
                continue;
            }
            for &y in self.subgroups[h as usize].elements() {
                seen.insert(group.multiply(x, y).index());
            }
            let k = self.join(h, x);
            total += sub_order * self.count(k, r - 1);
        }
        self.counts.insert((h, r), total);
        total
    }
}

/// `|Γ_n(G)|`, the number of generating `n`-tuples.
pub fn count_gamma(group: &FiniteGroup, n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::PreconditionViolated("sequence length must be at least 1".into()));
    }
    let mut cache = SubgroupCache::new(group);
    Ok(cache.count(SubgroupCache::TRIVIAL, n as u32))
}

/// Smallest `n` with `Γ_n(G)` nonempty; 0 for the trivial group.
pub fn rank(group: &FiniteGroup) -> usize {
    if group.order() == 1 {
        return 0;
    }
    let mut cache = SubgroupCache::new(group);
    (1..)
        .find(|&n| cache.count(SubgroupCache::TRIVIAL, n) > 0)
        .expect("the element list generates") as usize
}

pub(crate) fn check_candidates(group: &FiniteGroup, n: usize, limits: &Limits) -> Result<()> {
    let candidates = (group.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if candidates > limits.max_candidates {
        return Err(Error::EnumerationCapExceeded {
            candidates,
            cap: limits.max_candidates,
        });
    }
    Ok(())
}

/// Lexicographic stream of `Γ_n(G)`.
pub fn enumerate_gamma(group: &FiniteGroup, n: usize, limits: &Limits) -> Result<GammaIter> {
    if n == 0 {
        return Err(Error::PreconditionViolated("sequence length must be at least 1".into()));
    }
    check_candidates(group, n, limits)?;
    Ok(GammaIter {
        cache: SubgroupCache::new(group),
        n,
        order: group.order() as u32,
        path: vec![SubgroupCache::TRIVIAL],
        entries: Vec::with_capacity(n),
        next: vec![0; n],
        pending: false,
        done: false,
    })
}

pub struct GammaIter {
    cache: SubgroupCache,
    n: usize,
    order: u32,
    path: Vec<u32>,
    entries: Vec<Element>,
    next: Vec<u32>,
    pending: bool,
    done: bool,
}

impl GammaIter {
    /// Moves to the next sequence without allocating.
    pub fn advance(&mut self) -> Option<&[Element]> {
        if self.pending {
            self.entries.pop();
            self.path.pop();
            self.pending = false;
        }
        loop {
            if self.done {
                return None;
            }
            let d = self.entries.len();
            if d == self.n {
                self.pending = true;
                return Some(&self.entries);
            }
            let x = self.next[d];
            if x == self.order {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.next[d] = 0;
                self.entries.pop();
                self.path.pop();
                continue;
            }
            self.next[d] += 1;
            let k = self.cache.join(self.path[d], Element(x));
            if self.cache.count(k, (self.n - d - 1) as u32) == 0 {
                continue;
            }
            self.entries.push(Element(x));
            self.path.push(k);
        }
    }
}

impl Iterator for GammaIter {
    type Item = Vec<Element>;

    fn next(&mut self) -> Option<Vec<Element>> {
        self.advance().map(<[Element]>::to_vec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::build;

    fn brute_count(g: &FiniteGroup, n: usize) -> u128 {
        let order = g.order();
        let mut count = 0;
        for code in 0..order.pow(n as u32) {
            let mut c = code;
            let t: Vec<Element> = (0..n)
                .map(|_| {
                    let e = Element((c % order) as u32);
                    c /= order;
                    e
                })
                .collect();
            if is_generating(g, &t) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn generation_predicates() {
        let c6 = build("C6").unwrap();
        assert!(is_generating(&c6, &[Element(1)]));
        assert!(is_irredundant(&c6, &[Element(1)]));
        assert!(is_generating(&c6, &[Element(1), Element(2)]));
        assert!(!is_irredundant(&c6, &[Element(1), Element(2)]));
        let g = build("C2xC3").unwrap();
        // (a,1) and (1,b) in mixed radix
        assert!(is_generating(&g, &[Element(3), Element(1)]));
        assert!(is_irredundant_exhaustive(&g, &[Element(3), Element(1)]).unwrap());
        // in C6, (2, 3) is irredundant although (1) alone generates
        assert!(is_irredundant_exhaustive(&c6, &[Element(2), Element(3)]).unwrap());
        assert!(!is_irredundant_exhaustive(&c6, &[Element(1), Element(2), Element(3)]).unwrap());
    }

    #[test]
    fn counts_match_brute_force() {
        for spec in ["C2", "C6", "C2xC3", "S3", "Q8", "C2^2", "D4", "A4"] {
            let g = build(spec).unwrap();
            for n in 1..=3 {
                assert_eq!(count_gamma(&g, n).unwrap(), brute_count(&g, n), "{spec} n={n}");
            }
        }
        assert_eq!(count_gamma(&build("C2").unwrap(), 2).unwrap(), 3);
        assert_eq!(count_gamma(&build("C2xC3").unwrap(), 2).unwrap(), 24);
        assert!(count_gamma(&build("C6").unwrap(), 0).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let limits = Limits::default();
        for spec in ["S3", "C2^2", "C4"] {
            let g = build(spec).unwrap();
            let all: Vec<Vec<Element>> = enumerate_gamma(&g, 2, &limits).unwrap().collect();
            assert_eq!(all.len() as u128, count_gamma(&g, 2).unwrap());
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            assert!(all.iter().all(|t| is_generating(&g, t)));
        }
        let small = Limits {
            max_candidates: 100,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_gamma(&build("S3").unwrap(), 3, &small),
            Err(Error::EnumerationCapExceeded { candidates: 216, cap: 100 })
        ));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&build("C1").unwrap()), 0);
        assert_eq!(rank(&build("C6").unwrap()), 1);
        assert_eq!(rank(&build("C2^3").unwrap()), 3);
        assert_eq!(rank(&build("C3^2").unwrap()), 2);
        assert_eq!(rank(&build("A5").unwrap()), 2);
        assert_eq!(rank(&build("Q8").unwrap()), 2);
    }

    #[test]
    fn trivial_group_conventions() {
        let g = build("C1").unwrap();
        for n in 1..4 {
            assert_eq!(count_gamma(&g, n).unwrap(), 1);
        }
        let all: Vec<_> = enumerate_gamma(&g, 2, &Limits::default()).unwrap().collect();
        assert_eq!(all, vec![vec![Element(0), Element(0)]]);
    }

    #[test]
    fn sequence_wrapper_validates() {
        let c6 = build("C6").unwrap();
        assert!(GeneratingSequence::new(&c6, vec![Element(2)]).is_err());
        assert!(GeneratingSequence::new(&c6, vec![Element(7)]).is_err());
        let s = GeneratingSequence::new(&c6, vec![Element(5)]).unwrap();
        assert_eq!(s.to_string(), "(5)");
    }
}
