use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::genseq::{is_generating, rank};
use crate::group::{Element, FiniteGroup};
use crate::subgroup::{closure, greedy_generators, structure_predicates, Subgroup};

const UNSET: u32 = u32::MAX;

/// A homomorphism given by the images of a generating sequence, with the
/// full element map (its graph) cached.
#[derive(Clone)]
pub struct Homomorphism {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    domain_gens: Vec<Element>,
    images: Vec<Element>,
    map: Vec<Element>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("domain", &self.domain.name())
            .field("codomain", &self.codomain.name())
            .field("domain_gens", &self.domain_gens)
            .field("images", &self.images)
            .finish()
    }
}

impl Homomorphism {
    pub(crate) fn from_parts(
        domain: FiniteGroup,
        codomain: FiniteGroup,
        domain_gens: Vec<Element>,
        images: Vec<Element>,
        map: Vec<Element>,
    ) -> Homomorphism {
        debug_assert_eq!(map.len(), domain.order());
        Homomorphism {
            domain,
            codomain,
            domain_gens,
            images,
            map,
        }
    }

    pub fn identity(group: &FiniteGroup) -> Homomorphism {
        let gens = group.generators().to_vec();
        Homomorphism::from_parts(group.clone(), group.clone(), gens.clone(), gens, group.elements().collect())
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.codomain
    }

    pub fn domain_gens(&self) -> &[Element] {
        &self.domain_gens
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, a: Element) -> Element {
        self.map[a.index()]
    }

    /// The graph `{(a, f(a))}` as a list indexed by `a`.
    pub fn map(&self) -> &[Element] {
        &self.map
    }

    /// Order of the subgroup of `domain x codomain` generated by the pairs
    /// `(s_i, f(s_i))`. Equals `|domain|` for every well-defined map.
    pub fn graph_order(&self) -> usize {
        pair_closure_order(
            &self.domain,
            &self.codomain,
            &self.domain_gens,
            &self.images,
            usize::MAX,
        )
    }

    pub fn image(&self) -> Subgroup {
        closure(&self.codomain, &self.images)
    }

    pub fn kernel(&self) -> Subgroup {
        let ker: Vec<Element> = self
            .domain
            .elements()
            .filter(|a| self.map[a.index()].is_identity())
            .collect();
        closure(&self.domain, &ker)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_injective(&self) -> bool {
        self.domain
            .elements()
            .skip(1)
            .all(|a| !self.map[a.index()].is_identity())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain.order() == self.codomain.order() && self.is_injective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if !self.codomain.ptr_eq(&other.domain) {
            return Err(Error::PreconditionViolated(format!(
                "cannot compose: codomain {} is not the domain {}",
                self.codomain.name(),
                other.domain.name()
            )));
        }
        let images = self.images.iter().map(|&b| other.apply(b)).collect();
        let map = self.map.iter().map(|&b| other.apply(b)).collect();
        Ok(Homomorphism::from_parts(
            self.domain.clone(),
            other.codomain.clone(),
            self.domain_gens.clone(),
            images,
            map,
        ))
    }

    /// The inverse of a bijective map.
    pub fn inverse(&self) -> Option<Homomorphism> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![Element::IDENTITY; self.codomain.order()];
        for a in self.domain.elements() {
            inv[self.apply(a).index()] = a;
        }
        let gens = self.codomain.generators().to_vec();
        let images = gens.iter().map(|b| inv[b.index()]).collect();
        Some(Homomorphism::from_parts(
            self.codomain.clone(),
            self.domain.clone(),
            gens,
            images,
            inv,
        ))
    }
}

fn check_elements(group: &FiniteGroup, seq: &[Element]) -> Result<()> {
    for &a in seq {
        if !group.contains(a) {
            return Err(Error::IndexOutOfRange {
                index: a.index(),
                len: group.order(),
            });
        }
    }
    Ok(())
}

/// Order of `<(s_i, t_i)> <= G x H`, stopping as soon as it exceeds `stop`.
pub(crate) fn pair_closure_order(
    g: &FiniteGroup,
    h: &FiniteGroup,
    s: &[Element],
    t: &[Element],
    stop: usize,
) -> usize {
    let width = h.order() as u64;
    let key = |a: Element, b: Element| a.0 as u64 * width + b.0 as u64;
    let mut seen = FxHashSet::default();
    seen.insert(key(Element::IDENTITY, Element::IDENTITY));
    let mut queue = VecDeque::from([(Element::IDENTITY, Element::IDENTITY)]);
    while let Some((a, b)) = queue.pop_front() {
        for (&x, &y) in s.iter().zip(t) {
            let next = (g.multiply(a, x), h.multiply(b, y));
            if seen.insert(key(next.0, next.1)) {
                if seen.len() > stop {
                    return seen.len();
                }
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

/// Breadth-first assignment `f(a s_i) = f(a) t_i` over `<s>`. Returns the
/// partial map (unreached entries are `UNSET`), or `None` on a conflict.
pub(crate) fn bfs_map(g: &FiniteGroup, h: &FiniteGroup, s: &[Element], t: &[Element]) -> Option<Vec<u32>> {
    let mut map = vec![UNSET; g.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([Element::IDENTITY]);
    while let Some(a) = queue.pop_front() {
        let fa = Element(map[a.index()]);
        for (&x, &y) in s.iter().zip(t) {
            let b = g.multiply(a, x);
            let fb = h.multiply(fa, y).0;
            match map[b.index()] {
                UNSET => {
                    map[b.index()] = fb;
                    queue.push_back(b);
                }
                v if v != fb => return None,
                _ => {}
            }
        }
    }
    Some(map)
}

/// The homomorphism `domain -> codomain` sending `s_i` to `images_i`, if
/// one exists.
pub fn extend_hom(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    s: &[Element],
    images: &[Element],
) -> Result<Option<Homomorphism>> {
    if s.len() != images.len() {
        return Err(Error::PreconditionViolated(format!(
            "{} generators but {} images",
            s.len(),
            images.len()
        )));
    }
    check_elements(domain, s)?;
    check_elements(codomain, images)?;
    if !is_generating(domain, s) {
        return Err(Error::PreconditionViolated(format!(
            "the sequence does not generate {}",
            domain.name()
        )));
    }
    let n = domain.order();
    if pair_closure_order(domain, codomain, s, images, n) != n {
        return Ok(None);
    }
    let map = bfs_map(domain, codomain, s, images)
        .ok_or_else(|| Error::Internal("graph closure and element map disagree".into()))?;
    Ok(Some(Homomorphism::from_parts(
        domain.clone(),
        codomain.clone(),
        s.to_vec(),
        images.to_vec(),
        map.into_iter().map(Element).collect(),
    )))
}

fn sorted_orders(g: &FiniteGroup) -> Vec<u32> {
    let mut v = g.element_orders().to_vec();
    v.sort_unstable();
    v
}

/// Depth-first search over images of `gens`, extending a consistent partial
/// map one generator at a time.
struct ImageSearch<'a, F: Fn(Element, Element) -> bool> {
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    gens: &'a [Element],
    admissible: F,
    injective: bool,
}

impl<F: Fn(Element, Element) -> bool> ImageSearch<'_, F> {
    fn run(&self, images: &mut Vec<Element>, accept: &mut dyn FnMut(&[Element], &[u32]) -> bool) -> bool {
        let depth = images.len();
        if depth == self.gens.len() {
            let map = bfs_map(self.g, self.h, self.gens, images).expect("checked at each depth");
            return accept(images, &map);
        }
        let x = self.gens[depth];
        for y in self.h.elements() {
            if !(self.admissible)(x, y) {
                continue;
            }
            images.push(y);
            if let Some(map) = bfs_map(self.g, self.h, &self.gens[..=depth], images) {
                if (!self.injective || is_partial_injective(&map, self.h.order()))
                    && self.run(images, accept) {
                        return true;
                    }
            }
            images.pop();
        }
        false
    }
}

fn is_partial_injective(map: &[u32], codomain_order: usize) -> bool {
    let mut hit = vec![false; codomain_order];
    for &v in map {
        if v != UNSET {
            if hit[v as usize] {
                return false;
            }
            hit[v as usize] = true;
        }
    }
    true
}

/// An isomorphism `g -> h`, searching images of an irredundant generating
/// sequence of `g` in ascending id order.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Homomorphism> {
    if g.order() != h.order() || sorted_orders(g) != sorted_orders(h) {
        return None;
    }
    if structure_predicates(g) != structure_predicates(h) {
        return None;
    }
    let gens = greedy_generators(g);
    let search = ImageSearch {
        g,
        h,
        gens: &gens,
        admissible: |x, y| g.element_order(x) == h.element_order(y),
        injective: true,
    };
    let mut found = None;
    search.run(&mut Vec::new(), &mut |images, _| {
        found = extend_hom(g, h, &gens, images)
            .ok()
            .flatten()
            .filter(|f| f.image().order() == h.order());
        found.is_some()
    });
    found
}

/// A surjection `g -> h`. With `prescribed = (t, s)` only the map `t_i -> s_i`
/// is tried.
pub fn find_surjection(
    g: &FiniteGroup,
    h: &FiniteGroup,
    prescribed: Option<(&[Element], &[Element])>,
) -> Result<Option<Homomorphism>> {
    if !g.order().is_multiple_of(h.order()) {
        return Err(Error::PreconditionViolated(format!(
            "|{}| = {} does not divide |{}| = {}",
            h.name(),
            h.order(),
            g.name(),
            g.order()
        )));
    }
    if let Some((t, s)) = prescribed {
        return Ok(extend_hom(g, h, t, s)?.filter(Homomorphism::is_surjective));
    }
    let gens = greedy_generators(g);
    let search = ImageSearch {
        g,
        h,
        gens: &gens,
        admissible: |x, y| g.element_order(x).is_multiple_of(h.element_order(y)),
        injective: false,
    };
    let mut found = None;
    search.run(&mut Vec::new(), &mut |images, map| {
        if closure(h, images).is_whole() {
            found = Some(Homomorphism::from_parts(
                g.clone(),
                h.clone(),
                gens.clone(),
                images.to_vec(),
                map.iter().map(|&v| Element(v)).collect(),
            ));
        }
        found.is_some()
    });
    Ok(found)
}

/// A generating sequence `t` of the domain with `f(t_i) = s_i`, for a
/// surjection `f` and a generating sequence `s` of its codomain of length
/// at least the rank of the domain.
pub fn lift_gaschutz(f: &Homomorphism, s: &[Element]) -> Result<Vec<Element>> {
    let g = f.domain();
    let h = f.codomain();
    check_elements(h, s)?;
    if !f.is_surjective() {
        return Err(Error::PreconditionViolated("the map is not surjective".into()));
    }
    if !is_generating(h, s) {
        return Err(Error::PreconditionViolated(format!(
            "the sequence does not generate {}",
            h.name()
        )));
    }
    let r = rank(g);
    if s.len() < r {
        return Err(Error::PreconditionViolated(format!(
            "length {} is below the rank {r} of {}",
            s.len(),
            g.name()
        )));
    }
    let mut fibers: Vec<Vec<Element>> = vec![Vec::new(); h.order()];
    for a in g.elements() {
        fibers[f.apply(a).index()].push(a);
    }
    let mut t = Vec::with_capacity(s.len());
    if lift_search(&fibers, s, &mut t, &Subgroup::trivial(g)) {
        Ok(t)
    } else {
        Err(Error::Internal(format!(
            "no generating lift found in {}; this contradicts Gaschütz's lemma",
            g.name()
        )))
    }
}

fn lift_search(
    fibers: &[Vec<Element>],
    s: &[Element],
    t: &mut Vec<Element>,
    current: &Subgroup,
) -> bool {
    let i = t.len();
    if i == s.len() {
        return current.is_whole();
    }
    let mut tried: Vec<Subgroup> = Vec::new();
    for &x in &fibers[s[i].index()] {
        let next = crate::subgroup::join(current, x);
        if tried.contains(&next) {
            continue;
        }
        t.push(x);
        if lift_search(fibers, s, t, &next) {
            return true;
        }
        t.pop();
        tried.push(next);
    }
    false
}
