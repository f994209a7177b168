use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::genseq::{rank, GeneratingSequence};
use crate::group::{Element, FiniteGroup};
use crate::hom::{bfs_map, extend_hom, Homomorphism};
use crate::limits::Limits;
use crate::orbits::{equivalent_sequences, h_n, orbit_decompose};
use crate::subgroup::is_nonabelian_simple;

/// `H(n, G)` as the subgroup of `G^h` generated by `n` tuples, where the
/// `j`-th generator has `i`-th coordinate equal to entry `j` of
/// representative `i`.
#[derive(Clone, Debug)]
pub struct CoverResult {
    pub base: FiniteGroup,
    pub n: usize,
    pub representatives: Vec<GeneratingSequence>,
    pub cover: FiniteGroup,
    /// The generator tuples, one per sequence position.
    pub generator_tuples: Vec<Vec<Element>>,
}

impl CoverResult {
    pub fn h(&self) -> usize {
        self.representatives.len()
    }

    pub fn order(&self) -> usize {
        self.cover.order()
    }

    /// Cover elements of the generator tuples, in position order.
    pub fn cover_gens(&self) -> &[Element] {
        self.cover.generators()
    }

    /// The projection onto coordinate `i`, counted from 1.
    pub fn coordinate_projection(&self, i: usize) -> Result<Homomorphism> {
        if i == 0 || i > self.h() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.h(),
            });
        }
        let map = self
            .cover
            .elements()
            .map(|a| self.cover.tuple_coord(a, i - 1).expect("tuple backend"))
            .collect();
        Ok(Homomorphism::from_parts(
            self.cover.clone(),
            self.base.clone(),
            self.cover_gens().to_vec(),
            self.representatives[i - 1].entries().to_vec(),
            map,
        ))
    }

    pub fn projections(&self) -> Vec<Homomorphism> {
        (1..=self.h())
            .map(|i| self.coordinate_projection(i).expect("in range"))
            .collect()
    }

    /// Header, one line of coordinates per generator, then optionally every
    /// element as a line of coordinates.
    pub fn export_text(&self, base_spec: &str, with_elements: bool) -> String {
        let mut out = format!(
            "cover base={base_spec} n={} h={} order={}\n",
            self.n,
            self.h(),
            self.order()
        );
        let line = |coords: &[Element]| coords.iter().map(Element::to_string).collect::<Vec<_>>().join(",");
        for t in &self.generator_tuples {
            let _ = writeln!(out, "{}", line(t));
        }
        if with_elements {
            for a in self.cover.elements() {
                let _ = writeln!(out, "{}", line(&self.cover.tuple(a).expect("tuple backend")));
            }
        }
        out
    }
}

/// Header fields and generator tuples read back from [`CoverResult::export_text`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverExport {
    pub base: String,
    pub n: usize,
    pub h: usize,
    pub order: usize,
    pub generators: Vec<Vec<u32>>,
    pub elements: Vec<Vec<u32>>,
}

pub fn parse_cover_export(text: &str) -> Result<CoverExport> {
    let bad = |m: &str| Error::InvalidSpec {
        position: 0,
        message: format!("cover export: {m}"),
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("cover") {
        return Err(bad("header must start with 'cover'"));
    }
    let mut get = |key: &str| -> Result<String> {
        let f = fields.next().ok_or_else(|| bad(&format!("missing {key}")))?;
        f.strip_prefix(&format!("{key}="))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected {key}=")))
    };
    let base = get("base")?;
    let num = |s: String| s.parse::<usize>().map_err(|_| bad("non-numeric header field"));
    let n = num(get("n")?)?;
    let h = num(get("h")?)?;
    let order = num(get("order")?)?;
    let mut rows = Vec::new();
    for l in lines.filter(|l| !l.trim().is_empty()) {
        let row = l
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad("non-numeric coordinate"))?;
        if row.len() != h {
            return Err(bad("row length differs from h"));
        }
        rows.push(row);
    }
    if rows.len() < n {
        return Err(bad("fewer generator lines than n"));
    }
    let elements = rows.split_off(n);
    Ok(CoverExport {
        base,
        n,
        h,
        order,
        generators: rows,
        elements,
    })
}

fn cover_cap_error(base: &FiniteGroup, n: usize, e: Error) -> Error {
    match e {
        Error::ClosureCapExceeded { cap } => Error::CoverTooLarge(format!(
            "H({n}, {}) has more than {cap} elements (closure cap)",
            base.name()
        )),
        other => other,
    }
}

/// Cover from an explicit list of pairwise inequivalent sequences.
pub fn cover_from_representatives(
    base: &FiniteGroup,
    n: usize,
    representatives: Vec<GeneratingSequence>,
    limits: &Limits,
) -> Result<CoverResult> {
    let h = representatives.len();
    if h == 0 {
        return Err(Error::PreconditionViolated("no representatives".into()));
    }
    if let Some(r) = representatives.iter().find(|r| r.len() != n) {
        return Err(Error::PreconditionViolated(format!("representative {r} does not have length {n}")));
    }
    let generator_tuples: Vec<Vec<Element>> = (0..n)
        .map(|j| representatives.iter().map(|r| r.entries()[j]).collect())
        .collect();
    let name = format!("H({n},{})", base.name());
    let cover = FiniteGroup::product_subgroup(vec![base.clone(); h], &generator_tuples, name, limits)
        .map_err(|e| cover_cap_error(base, n, e))?;
    Ok(CoverResult {
        base: base.clone(),
        n,
        representatives,
        cover,
        generator_tuples,
    })
}

/// `H(n, G)` from the lexicographically least representative of each orbit.
pub fn build_cover(base: &FiniteGroup, n: usize, limits: &Limits) -> Result<CoverResult> {
    let r = rank(base);
    if n == 0 || n < r {
        return Err(Error::PreconditionViolated(format!(
            "H({n}, {}) is undefined below the rank {r}",
            base.name()
        )));
    }
    if is_nonabelian_simple(base) {
        let h = h_n(base, n)?;
        let too_big = u32::try_from(h)
            .ok()
            .and_then(|h| (base.order() as u128).checked_pow(h))
            .is_none_or(|order| order > limits.max_closure as u128);
        if too_big {
            return Err(Error::CoverTooLarge(format!(
                "H({n}, {}) = {}^{h} exceeds the closure cap {}",
                base.name(),
                base.name(),
                limits.max_closure
            )));
        }
    }
    let decomposition = orbit_decompose(base, n, limits)?;
    cover_from_representatives(base, n, decomposition.representatives, limits)
}

/// The surjection `H(n, G) -> H(m, G)`.
#[derive(Clone, Debug)]
pub struct TowerMap {
    /// `H(n, G)` with the identity-padded representatives of `Γ_m` first.
    pub source: CoverResult,
    pub target: CoverResult,
    pub map: Homomorphism,
}

pub fn cover_tower_map(base: &FiniteGroup, n: usize, m: usize, limits: &Limits) -> Result<TowerMap> {
    let r = rank(base);
    if !(n > m && m >= r && m >= 1) {
        return Err(Error::PreconditionViolated(format!(
            "tower needs n > m >= rank: n = {n}, m = {m}, rank = {r}"
        )));
    }
    let target = build_cover(base, m, limits)?;
    let mut source_reps: Vec<GeneratingSequence> = target
        .representatives
        .iter()
        .map(|s| {
            let mut padded = s.entries().to_vec();
            padded.resize(n, Element::IDENTITY);
            GeneratingSequence::new_unchecked(base, padded)
        })
        .collect();
    let all = orbit_decompose(base, n, limits)?;
    for rep in all.representatives {
        if !source_reps[..target.h()]
            .iter()
            .any(|p| equivalent_sequences(base, p.entries(), rep.entries()))
        {
            source_reps.push(rep);
        }
    }
    if source_reps.len() as u128 != all.h_n {
        return Err(Error::Internal("padded sequences do not match distinct orbits".into()));
    }
    let source = cover_from_representatives(base, n, source_reps, limits)?;
    let hm = target.h();
    let map = source
        .cover
        .elements()
        .map(|a| {
            let coords = source.cover.tuple(a).expect("tuple backend");
            target
                .cover
                .find_tuple(&coords[..hm])
                .ok_or_else(|| Error::Internal("projection leaves the smaller cover".into()))
        })
        .collect::<Result<Vec<Element>>>()?;
    let images = source.cover_gens().iter().map(|a| map[a.index()]).collect();
    let f = Homomorphism::from_parts(
        source.cover.clone(),
        target.cover.clone(),
        source.cover_gens().to_vec(),
        images,
        map,
    );
    if !f.is_surjective() {
        return Err(Error::Internal("tower map is not surjective".into()));
    }
    Ok(TowerMap { source, target, map: f })
}

/// A homomorphism `σ: H(m) -> H(n)` with `p ∘ σ = id`, if one exists.
pub fn find_section(tower: &TowerMap) -> Result<Option<Homomorphism>> {
    let p = &tower.map;
    let src = p.domain();
    let dst = p.codomain();
    let gens = dst.generators().to_vec();
    let mut fibers: Vec<Vec<Element>> = vec![Vec::new(); dst.order()];
    for a in src.elements() {
        fibers[p.apply(a).index()].push(a);
    }
    let mut images = Vec::with_capacity(gens.len());
    if section_search(dst, src, &gens, &fibers, &mut images) {
        return extend_hom(dst, src, &gens, &images);
    }
    Ok(None)
}

fn section_search(
    dst: &FiniteGroup,
    src: &FiniteGroup,
    gens: &[Element],
    fibers: &[Vec<Element>],
    images: &mut Vec<Element>,
) -> bool {
    let d = images.len();
    if d == gens.len() {
        return true;
    }
    for &y in &fibers[gens[d].index()] {
        images.push(y);
        if bfs_map(dst, src, &gens[..=d], images).is_some() && section_search(dst, src, gens, fibers, images) {
            return true;
        }
        images.pop();
    }
    false
}
