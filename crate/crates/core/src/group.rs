use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::tuple::{product_closure, TupleStore};

/// Index of an element in its group's enumeration. Id 0 is the identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Element {
    fn from(v: u32) -> Self {
        Element(v)
    }
}

enum Backend {
    Table(Vec<u32>),
    Tuple {
        factors: Vec<FiniteGroup>,
        store: TupleStore,
    },
}

struct GroupData {
    order: usize,
    backend: Backend,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
    generators: Vec<Element>,
    labels: Option<Vec<String>>,
    name: String,
}

/// An immutable finite group with elements `0..order`.
///
/// Cloning is cheap; clones share the same storage.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.inner.name)
            .field("order", &self.inner.order)
            .field("backend", &if self.is_table_backed() { "table" } else { "tuple" })
            .finish()
    }
}

/// Identity of storage, not isomorphism.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates `table` (row-major, `order * order`) against the group axioms.
    pub fn from_table(order: usize, table: Vec<u32>, name: &str) -> Result<FiniteGroup> {
        validate_table(order, &table)?;
        Self::from_trusted_table(order, table, name, None, None)
    }

    /// Builds a group from a Cayley table given as rows.
    pub fn from_rows(rows: &[Vec<u32>], name: &str) -> Result<FiniteGroup> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(Error::NotAGroup(format!(
                "row {i} has {} entries, expected {order}",
                r.len()
            )));
        }
        Self::from_table(order, rows.concat(), name)
    }

    /// For tables that are correct by construction; the axioms are not
    /// rechecked.
    pub(crate) fn from_trusted_table(
        order: usize,
        table: Vec<u32>,
        name: &str,
        labels: Option<Vec<String>>,
        generators: Option<Vec<Element>>,
    ) -> Result<FiniteGroup> {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&x| x == 0).expect("validated table");
            inverses[a] = b as u32;
        }
        let mut element_orders = vec![1u32; order];
        for a in 1..order {
            let mut k = 1;
            let mut x = a as u32;
            while x != 0 {
                x = table[x as usize * order + a];
                k += 1;
            }
            element_orders[a] = k;
        }
        let mut group = FiniteGroup {
            inner: Arc::new(GroupData {
                order,
                backend: Backend::Table(table),
                inverses,
                element_orders,
                generators: Vec::new(),
                labels,
                name: name.to_string(),
            }),
        };
        let gens = match generators {
            Some(g) => g,
            None => crate::subgroup::greedy_generators(&group),
        };
        Arc::get_mut(&mut group.inner).expect("unshared").generators = gens;
        Ok(group)
    }

    fn from_store(factors: Vec<FiniteGroup>, store: TupleStore, gens: &[Vec<Element>], name: String) -> FiniteGroup {
        let order = store.len();
        let layout = store.layout().clone();
        let mut inverses = vec![0u32; order];
        let mut element_orders = vec![1u32; order];
        let mut buf = vec![0u64; layout.words()];
        for i in 0..order {
            let row = store.row(i);
            let coords = layout.unpack(row);
            let inv: Vec<Element> = coords
                .iter()
                .zip(&factors)
                .map(|(&e, f)| f.invert(e))
                .collect();
            buf.copy_from_slice(&layout.pack(&inv));
            inverses[i] = store.find(&buf).expect("closed under inversion");
            element_orders[i] = coords
                .iter()
                .zip(&factors)
                .fold(1u64, |acc, (&e, f)| lcm(acc, f.element_order(e) as u64))
                as u32;
        }
        let generators = gens
            .iter()
            .map(|g| Element(store.find(&layout.pack(g)).expect("generator in closure")))
            .collect();
        FiniteGroup {
            inner: Arc::new(GroupData {
                order,
                backend: Backend::Tuple { factors, store },
                inverses,
                element_orders,
                generators,
                labels: None,
                name,
            }),
        }
    }

    /// The subgroup of `G^k` generated by `gens`, stored as sorted tuples.
    pub fn direct_power_subgroup(
        base: &FiniteGroup,
        k: usize,
        gens: &[Vec<Element>],
        limits: &Limits,
    ) -> Result<FiniteGroup> {
        if k == 0 {
            return Err(Error::PreconditionViolated("direct power needs k >= 1".into()));
        }
        let factors = vec![base.clone(); k];
        let name = format!("<{} tuples> <= ({})^{k}", gens.len(), base.name());
        Self::product_subgroup(factors, gens, name, limits)
    }

    /// The subgroup of `factors[0] x .. x factors[k-1]` generated by `gens`.
    pub fn product_subgroup(
        factors: Vec<FiniteGroup>,
        gens: &[Vec<Element>],
        name: String,
        limits: &Limits,
    ) -> Result<FiniteGroup> {
        let store = product_closure(&factors, gens, limits.max_closure)?;
        Ok(Self::from_store(factors, store, gens, name))
    }

    /// Full direct product with a dense table; ids are mixed radix with the
    /// leftmost factor most significant.
    pub fn direct_product(factors: &[FiniteGroup], limits: &Limits) -> Result<FiniteGroup> {
        let name = factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("x");
        let order = factors
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.order() as u128))
            .unwrap_or(u128::MAX);
        if order > limits.max_order as u128 {
            return Err(Error::OrderCapExceeded {
                order,
                cap: limits.max_order,
            });
        }
        let order = order as usize;
        let radices: Vec<usize> = factors.iter().map(FiniteGroup::order).collect();
        let decode = |mut id: usize| -> Vec<usize> {
            let mut out = vec![0; radices.len()];
            for (slot, &r) in out.iter_mut().zip(&radices).rev() {
                *slot = id % r;
                id /= r;
            }
            out
        };
        let encode = |coords: &[usize]| coords.iter().zip(&radices).fold(0, |acc, (&c, &r)| acc * r + c);
        let decoded: Vec<Vec<usize>> = (0..order).map(decode).collect();
        let mut table = Vec::with_capacity(order * order);
        let mut prod = vec![0usize; radices.len()];
        for a in &decoded {
            for b in &decoded {
                for (i, f) in factors.iter().enumerate() {
                    prod[i] = f.multiply(Element(a[i] as u32), Element(b[i] as u32)).index();
                }
                table.push(encode(&prod) as u32);
            }
        }
        let mut gens = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for g in f.generators() {
                let mut coords = vec![0usize; factors.len()];
                coords[i] = g.index();
                gens.push(Element(encode(&coords) as u32));
            }
        }
        Self::from_trusted_table(order, table, &name, None, Some(gens))
    }

    /// A copy with a dense Cayley table and the same element ids.
    pub fn to_table_backend(&self, limits: &Limits) -> Result<FiniteGroup> {
        if self.is_table_backed() {
            return Ok(self.clone());
        }
        if self.order() > limits.max_order {
            return Err(Error::OrderCapExceeded {
                order: self.order() as u128,
                cap: limits.max_order,
            });
        }
        let n = self.order();
        let gens = self.generators();
        let right: Vec<Vec<u32>> = self
            .elements()
            .map(|a| gens.iter().map(|&g| self.multiply(a, g).0).collect())
            .collect();
        // Spanning tree of the Cayley graph: b = parent(b) * gens[via(b)].
        let mut parent = vec![(0u32, 0usize); n];
        let mut order = Vec::with_capacity(n);
        let mut reached = vec![false; n];
        reached[0] = true;
        order.push(0u32);
        let mut i = 0;
        while i < order.len() {
            let b = order[i];
            for (k, &c) in right[b as usize].iter().enumerate() {
                if !reached[c as usize] {
                    reached[c as usize] = true;
                    parent[c as usize] = (b, k);
                    order.push(c);
                }
            }
            i += 1;
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let row = &mut table[a * n..(a + 1) * n];
            row[0] = a as u32;
            for &b in &order[1..] {
                let (p, k) = parent[b as usize];
                row[b as usize] = right[row[p as usize] as usize][k];
            }
        }
        let labels = (0..n).map(|i| self.label(Element(i as u32))).collect();
        Self::from_trusted_table(n, table, self.name(), Some(labels), Some(self.generators().to_vec()))
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn with_name(&self, name: &str) -> FiniteGroup {
        let d = &self.inner;
        let backend = match &d.backend {
            Backend::Table(t) => Backend::Table(t.clone()),
            Backend::Tuple { factors, store } => Backend::Tuple {
                factors: factors.clone(),
                store: store.clone(),
            },
        };
        FiniteGroup {
            inner: Arc::new(GroupData {
                order: d.order,
                backend,
                inverses: d.inverses.clone(),
                element_orders: d.element_orders.clone(),
                generators: d.generators.clone(),
                labels: d.labels.clone(),
                name: name.to_string(),
            }),
        }
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.inner.order as u32).map(Element)
    }

    pub fn contains(&self, a: Element) -> bool {
        a.index() < self.order()
    }

    /// A generating set stored with the group.
    pub fn generators(&self) -> &[Element] {
        &self.inner.generators
    }

    pub fn is_table_backed(&self) -> bool {
        matches!(self.inner.backend, Backend::Table(_))
    }

    pub fn ptr_eq(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    #[inline]
    pub fn multiply(&self, a: Element, b: Element) -> Element {
        match &self.inner.backend {
            Backend::Table(t) => Element(t[a.index() * self.inner.order + b.index()]),
            Backend::Tuple { factors, store } => {
                let layout = store.layout();
                let mut out: SmallVec<[u64; 8]> = SmallVec::from_elem(0, layout.words());
                layout.multiply(factors, store.row(a.index()), store.row(b.index()), &mut out);
                Element(store.find(&out).expect("tuple subgroup is closed"))
            }
        }
    }

    #[inline]
    pub fn invert(&self, a: Element) -> Element {
        Element(self.inner.inverses[a.index()])
    }

    pub fn element_order(&self, a: Element) -> u32 {
        self.inner.element_orders[a.index()]
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.inner.element_orders
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u64 {
        self.inner
            .element_orders
            .iter()
            .fold(1u64, |acc, &o| lcm(acc, o as u64))
    }

    pub fn pow(&self, a: Element, k: u64) -> Element {
        let k = k % self.element_order(a) as u64;
        let mut acc = Element::IDENTITY;
        for _ in 0..k {
            acc = self.multiply(acc, a);
        }
        acc
    }

    /// `g a g^-1`.
    pub fn conjugate(&self, a: Element, g: Element) -> Element {
        self.multiply(self.multiply(g, a), self.invert(g))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Element, b: Element) -> Element {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(self.invert(ba), ab)
    }

    pub fn commute(&self, a: Element, b: Element) -> bool {
        self.multiply(a, b) == self.multiply(b, a)
    }

    /// Coordinates of `a` when the group is a subgroup of a direct product.
    pub fn tuple(&self, a: Element) -> Option<Vec<Element>> {
        match &self.inner.backend {
            Backend::Tuple { store, .. } => Some(store.layout().unpack(store.row(a.index()))),
            Backend::Table(_) => None,
        }
    }

    /// Coordinate `coord` of a tuple-backed element.
    pub fn tuple_coord(&self, a: Element, coord: usize) -> Option<Element> {
        match &self.inner.backend {
            Backend::Tuple { store, .. } if coord < store.layout().arity() => {
                Some(Element(store.layout().get(store.row(a.index()), coord)))
            }
            _ => None,
        }
    }

    pub fn find_tuple(&self, coords: &[Element]) -> Option<Element> {
        match &self.inner.backend {
            Backend::Tuple { store, .. } if coords.len() == store.layout().arity() => {
                store.find(&store.layout().pack(coords)).map(Element)
            }
            _ => None,
        }
    }

    /// The factor groups of a tuple-backed group; empty for table groups.
    pub fn tuple_factors(&self) -> &[FiniteGroup] {
        match &self.inner.backend {
            Backend::Tuple { factors, .. } => factors,
            Backend::Table(_) => &[],
        }
    }

    pub fn label(&self, a: Element) -> String {
        if let Some(labels) = &self.inner.labels {
            return labels[a.index()].clone();
        }
        match self.tuple(a) {
            Some(coords) => {
                let parts: Vec<String> = coords.iter().map(Element::to_string).collect();
                format!("({})", parts.join(","))
            }
            None => a.to_string(),
        }
    }
}

fn validate_table(order: usize, table: &[u32]) -> Result<()> {
    if order == 0 {
        return Err(Error::NotAGroup("order must be positive".into()));
    }
    if table.len() != order * order {
        return Err(Error::NotAGroup(format!(
            "table has {} entries, expected {}",
            table.len(),
            order * order
        )));
    }
    if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
        return Err(Error::NotAGroup(format!("entry {bad} out of range")));
    }
    let at = |a: usize, b: usize| table[a * order + b] as usize;
    for a in 0..order {
        if at(0, a) != a || at(a, 0) != a {
            return Err(Error::NotAGroup(format!("element 0 is not an identity for {a}")));
        }
    }
    for a in 0..order {
        let row = &table[a * order..(a + 1) * order];
        let Some(b) = row.iter().position(|&x| x == 0) else {
            return Err(Error::NotAGroup(format!("element {a} has no right inverse")));
        };
        if at(b, a) != 0 {
            return Err(Error::NotAGroup(format!("element {a} has no two-sided inverse")));
        }
    }
    let check = |a: usize, b: usize, c: usize| -> Result<()> {
        if at(at(a, b), c) != at(a, at(b, c)) {
            return Err(Error::NotAGroup(format!("associativity fails at ({a},{b},{c})")));
        }
        Ok(())
    };
    if order <= 512 {
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..10_000 {
            check(rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order))?;
        }
    }
    Ok(())
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}
