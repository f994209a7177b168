//! Bit-packed storage for elements of a subgroup of a direct product.
//!
//! Every coordinate occupies a fixed-width field, filled from the most
//! significant bit of each word, so comparing packed rows word by word is
//! the same as comparing coordinate tuples lexicographically.

use std::hash::Hasher;

use hashbrown::HashTable;
use rustc_hash::FxHasher;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};

#[derive(Clone, Copy, Debug)]
struct Field {
    word: usize,
    shift: u32,
    mask: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct TupleLayout {
    fields: Vec<Field>,
    words: usize,
}

impl TupleLayout {
    pub(crate) fn new(orders: &[usize]) -> Self {
        let mut fields = Vec::with_capacity(orders.len());
        let mut word = 0;
        let mut used = 0u32;
        for &order in orders {
            let max = order.saturating_sub(1) as u64;
            let width = (64 - max.leading_zeros()).max(1);
            if used + width > 64 {
                word += 1;
                used = 0;
            }
            fields.push(Field {
                word,
                shift: 64 - used - width,
                mask: (1u64 << width) - 1,
            });
            used += width;
        }
        TupleLayout {
            fields,
            words: word + 1,
        }
    }

    pub(crate) fn arity(&self) -> usize {
        self.fields.len()
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub(crate) fn get(&self, row: &[u64], coord: usize) -> u32 {
        let f = self.fields[coord];
        ((row[f.word] >> f.shift) & f.mask) as u32
    }

    #[inline]
    fn set(&self, row: &mut [u64], coord: usize, value: u32) {
        let f = self.fields[coord];
        row[f.word] = (row[f.word] & !(f.mask << f.shift)) | ((value as u64 & f.mask) << f.shift);
    }

    pub(crate) fn pack(&self, coords: &[Element]) -> Vec<u64> {
        let mut row = vec![0u64; self.words];
        for (c, e) in coords.iter().enumerate() {
            self.set(&mut row, c, e.0);
        }
        row
    }

    pub(crate) fn unpack(&self, row: &[u64]) -> Vec<Element> {
        (0..self.arity()).map(|c| Element(self.get(row, c))).collect()
    }

    /// Componentwise product `a * b`, written into `out`.
    #[inline]
    pub(crate) fn multiply(&self, factors: &[FiniteGroup], a: &[u64], b: &[u64], out: &mut [u64]) {
        for (c, factor) in factors.iter().enumerate() {
            let x = Element(self.get(a, c));
            let y = Element(self.get(b, c));
            self.set(out, c, factor.multiply(x, y).0);
        }
    }
}

fn hash_row(row: &[u64]) -> u64 {
    let mut h = FxHasher::default();
    for &w in row {
        h.write_u64(w);
    }
    // Table buckets come from the low bits, which the multiply leaves weak.
    let x = h.finish();
    x ^ (x >> 32)
}

#[derive(Clone, Debug)]
pub(crate) struct TupleStore {
    layout: TupleLayout,
    data: Vec<u64>,
    index: HashTable<u32>,
}

impl TupleStore {
    pub(crate) fn new(layout: TupleLayout) -> Self {
        TupleStore {
            layout,
            data: Vec::new(),
            index: HashTable::new(),
        }
    }

    pub(crate) fn layout(&self) -> &TupleLayout {
        &self.layout
    }

    pub(crate) fn len(&self) -> usize {
        self.data.len() / self.layout.words
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        let w = self.layout.words;
        &self.data[i * w..(i + 1) * w]
    }

    pub(crate) fn find(&self, key: &[u64]) -> Option<u32> {
        let w = self.layout.words;
        let data = &self.data;
        self.index
            .find(hash_row(key), |&i| &data[i as usize * w..(i as usize + 1) * w] == key)
            .copied()
    }

    /// Inserts `key` if absent; returns its index and whether it was new.
    pub(crate) fn insert(&mut self, key: &[u64]) -> (u32, bool) {
        if let Some(i) = self.find(key) {
            return (i, false);
        }
        let w = self.layout.words;
        let idx = self.len() as u32;
        self.data.extend_from_slice(key);
        let data = &self.data;
        self.index.insert_unique(hash_row(key), idx, |&i| {
            hash_row(&data[i as usize * w..(i as usize + 1) * w])
        });
        (idx, true)
    }

    /// Reorders rows lexicographically and rebuilds the index.
    pub(crate) fn sort_canonical(&mut self) {
        let w = self.layout.words;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by(|&a, &b| self.row(a).cmp(self.row(b)));
        let mut data = Vec::with_capacity(self.data.len());
        for &i in &order {
            data.extend_from_slice(self.row(i));
        }
        self.data = data;
        self.index = HashTable::with_capacity(self.len());
        let data = &self.data;
        for i in 0..order.len() {
            let row = &data[i * w..(i + 1) * w];
            self.index.insert_unique(hash_row(row), i as u32, |&j| {
                hash_row(&data[j as usize * w..(j as usize + 1) * w])
            });
        }
    }
}

/// Closure of `gens` inside the direct product of `factors`, canonically
/// sorted so that the identity tuple is row 0.
pub(crate) fn product_closure(
    factors: &[FiniteGroup],
    gens: &[Vec<Element>],
    cap: usize,
) -> Result<TupleStore> {
    for g in gens {
        if g.len() != factors.len() {
            return Err(Error::PreconditionViolated(format!(
                "tuple of length {} in a product of {} factors",
                g.len(),
                factors.len()
            )));
        }
        for (e, f) in g.iter().zip(factors) {
            if e.index() >= f.order() {
                return Err(Error::PreconditionViolated(format!(
                    "coordinate {} out of range for a factor of order {}",
                    e,
                    f.order()
                )));
            }
        }
    }
    let orders: Vec<usize> = factors.iter().map(FiniteGroup::order).collect();
    let layout = TupleLayout::new(&orders);
    let packed: Vec<Vec<u64>> = gens.iter().map(|g| layout.pack(g)).collect();
    let mut store = TupleStore::new(layout);
    store.insert(&vec![0u64; store.layout.words]);
    if store.len() > cap {
        return Err(Error::ClosureCapExceeded { cap });
    }
    let mut buf = vec![0u64; store.layout.words];
    let mut i = 0;
    while i < store.len() {
        for g in &packed {
            store.layout.multiply(factors, store.row(i), g, &mut buf);
            let (_, new) = store.insert(&buf);
            if new && store.len() > cap {
                return Err(Error::ClosureCapExceeded { cap });
            }
        }
        i += 1;
    }
    store.sort_canonical();
    Ok(store)
}
