use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits::Limits;

/// A permutation of `{0, .., degree-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    /// Builds a permutation from disjoint or overlapping cycles written with
    /// 1-based points. Cycles are composed left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, String> {
        let mut perm = Permutation::identity(degree);
        for cycle in cycles {
            let mut seen = Vec::with_capacity(cycle.len());
            for &p in cycle {
                if p == 0 || p as usize > degree {
                    return Err(format!("point {p} outside 1..={degree}"));
                }
                if seen.contains(&p) {
                    return Err(format!("point {p} repeated in a cycle"));
                }
                seen.push(p);
            }
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[p as usize - 1] = next - 1;
            }
            perm = perm.then(&Permutation(images));
        }
        Ok(perm)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// The product that applies `self` first and `other` second.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Nontrivial cycles with 1-based points, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32 + 1);
                p = self.0[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    fn with_degree(&self, degree: usize) -> Permutation {
        let mut images = self.0.clone();
        images.extend(self.0.len() as u32..degree as u32);
        Permutation(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

/// Generators of the symmetric group on `k` points: a transposition and a long cycle.
pub fn symmetric_generators(k: usize) -> Vec<Permutation> {
    if k < 2 {
        return Vec::new();
    }
    let swap = Permutation::from_cycles(k, &[vec![1, 2]]).expect("valid cycle");
    let long = Permutation::from_cycles(k, &[(1..=k as u32).collect()]).expect("valid cycle");
    if k == 2 {
        vec![swap]
    } else {
        vec![swap, long]
    }
}

/// Generators of the alternating group on `k` points: the 3-cycles `(1 2 i)`.
pub fn alternating_generators(k: usize) -> Vec<Permutation> {
    (3..=k as u32)
        .map(|i| Permutation::from_cycles(k, &[vec![1, 2, i]]).expect("valid cycle"))
        .collect()
}

/// The group generated by `gens`, with elements sorted by image list so the
/// identity gets id 0. Products follow [`Permutation::then`].
pub fn permutation_group(gens: &[Permutation], name: &str, limits: &Limits) -> Result<FiniteGroup> {
    let degree = gens.iter().map(Permutation::degree).max().unwrap_or(0).max(1);
    let gens: Vec<Permutation> = gens.iter().map(|g| g.with_degree(degree)).collect();

    let mut elements = vec![Permutation::identity(degree)];
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    seen.insert(elements[0].clone(), 0);
    let mut i = 0;
    while i < elements.len() {
        for g in &gens {
            let p = elements[i].then(g);
            if !seen.contains_key(&p) {
                if elements.len() >= limits.max_order {
                    return Err(Error::OrderCapExceeded {
                        order: elements.len() as u128 + 1,
                        cap: limits.max_order,
                    });
                }
                seen.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        i += 1;
    }
    elements.sort();
    let index: HashMap<&Permutation, u32> =
        elements.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            table.push(index[&a.then(b)]);
        }
    }
    let labels = elements.iter().map(Permutation::to_string).collect();
    let generators = gens
        .iter()
        .map(|g| crate::group::Element(index[g]))
        .collect();
    FiniteGroup::from_trusted_table(n, table, name, Some(labels), Some(generators))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Permutation::from_cycles(5, &[vec![1, 3, 5], vec![2, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1 3 5)(2 4)");
        assert_eq!(Permutation::from_cycles(5, &p.cycles()).unwrap(), p);
        assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn two_transpositions_make_a_three_cycle() {
        let a = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        let c = a.then(&b);
        assert_eq!(c.cycles().len(), 1);
        assert_eq!(c.cycles()[0].len(), 3);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(Permutation::from_cycles(3, &[vec![0, 1]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2, 1]]).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }
}
