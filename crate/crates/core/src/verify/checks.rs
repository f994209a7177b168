use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Character, CheckReport, SuiteOptions};
use crate::cover::{build_cover, cover_tower_map, find_section, CoverResult};
use crate::error::{Error, Result};
use crate::genseq::{check_candidates, count_gamma, enumerate_gamma, is_generating, rank};
use crate::group::{Element, FiniteGroup};
use crate::hom::{extend_hom, find_isomorphism, find_surjection};
use crate::lattice::subgroup_lattice;
use crate::limits::Limits;
use crate::orbits::{h_n, is_homogeneous, orbit_decompose, orbit_partition};
use crate::spec::{construct_group, pq_scalar, GroupSpec};
use crate::subgroup::{
    center, is_abelian, is_nilpotent, is_nonabelian_simple, prime_factors, quotient_group, structure_predicates,
    sylow_subgroup, Subgroup,
};

/// Tuple-backed groups up to this order get a dense table before heavy
/// re-analysis.
const MATERIALIZE_MAX: usize = 4096;

/// Largest cover whose own generating sequences are counted.
const REANALYSIS_MAX: usize = 8192;

fn materialize(g: &FiniteGroup, limits: &Limits) -> Result<FiniteGroup> {
    if !g.is_table_backed() && g.order() <= MATERIALIZE_MAX {
        g.to_table_backend(limits)
    } else {
        Ok(g.clone())
    }
}

fn seq(t: &[Element]) -> String {
    format!("({})", t.iter().map(Element::to_string).collect::<Vec<_>>().join(","))
}

/// Every orbit of `Aut(G)` on `Γ_n(G)` has `|Aut(G)|` elements.
pub fn check_free_action(g: &FiniteGroup, n: usize, limits: &Limits) -> Result<CheckReport> {
    let mut r = CheckReport::new("free_action", g, n);
    let p = orbit_partition(g, n, limits)?;
    let counted = count_gamma(g, n)?;
    let h = p.representatives.len() as u128;
    r.detail("gamma", p.gamma_count);
    r.detail("aut", p.aut_order);
    r.detail("h", h);
    let mut sizes = p.orbit_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    r.detail("orbit_sizes", sizes.iter().map(u128::to_string).collect::<Vec<_>>().join(","));
    r.require(p.gamma_count == counted, || {
        format!("enumerated {} sequences but counted {counted}", p.gamma_count)
    });
    if let Some(i) = p.orbit_sizes.iter().position(|&s| s != p.aut_order) {
        r.require(false, || {
            format!(
                "orbit of {} has {} elements but |Aut| = {}",
                p.representatives[i], p.orbit_sizes[i], p.aut_order
            )
        });
    }
    r.require(h * p.aut_order == p.gamma_count, || {
        format!("{h} orbits * {} != {}", p.aut_order, p.gamma_count)
    });
    Ok(r)
}

/// For abelian `G` of exponent `k`, `H(n, G) ≅ C_k^n`.
pub fn check_abelian_formula(g: &FiniteGroup, n: usize, limits: &Limits) -> Result<CheckReport> {
    require_abelian(g)?;
    abelian_formula_with(g, n, &build_cover(g, n, limits)?, limits)
}

fn require_abelian(g: &FiniteGroup) -> Result<()> {
    if is_abelian(g) {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{} is not abelian", g.name())))
    }
}

pub(crate) fn abelian_formula_with(g: &FiniteGroup, n: usize, cover: &CoverResult, limits: &Limits) -> Result<CheckReport> {
    require_abelian(g)?;
    let mut r = CheckReport::new("abelian_formula", g, n);
    let k = g.exponent();
    let target = construct_group(
        &GroupSpec::Power(Box::new(GroupSpec::Cyclic(k)), n as u32),
        limits,
    )?;
    r.detail("k", k);
    r.detail("h", cover.h());
    r.detail("cover_order", cover.order());
    r.detail("target", target.name());
    r.detail("target_order", target.order());
    let lhs = materialize(&cover.cover, limits)?;
    match find_isomorphism(&lhs, &target) {
        Some(f) => r.witness = Some(format!("generator images {}", seq(f.images()))),
        None => r.require(false, || {
            format!("no isomorphism from H({n}) of order {} to {}", cover.order(), target.name())
        }),
    }
    Ok(r)
}

/// For nilpotent `G`, `H(n, G)` is the product of the covers of its Sylow
/// subgroups.
pub fn check_nilpotent_sylow(g: &FiniteGroup, n: usize, limits: &Limits) -> Result<CheckReport> {
    require_nilpotent(g)?;
    nilpotent_sylow_with(g, n, &build_cover(g, n, limits)?, limits)
}

fn require_nilpotent(g: &FiniteGroup) -> Result<()> {
    if is_nilpotent(g) {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{} is not nilpotent", g.name())))
    }
}

pub(crate) fn nilpotent_sylow_with(g: &FiniteGroup, n: usize, cover: &CoverResult, limits: &Limits) -> Result<CheckReport> {
    require_nilpotent(g)?;
    let mut r = CheckReport::new("nilpotent_sylow", g, n);
    r.detail("cover_order", cover.order());
    let mut factors = Vec::new();
    for p in prime_factors(g.order() as u64) {
        let (sylow, _) = sylow_subgroup(g, p)?.to_group(&format!("P{p}"))?;
        let c = build_cover(&sylow, n, limits)?;
        r.detail(&format!("cover_p{p}"), c.order());
        factors.push(materialize(&c.cover, limits)?);
    }
    let product = if factors.is_empty() {
        construct_group(&GroupSpec::Cyclic(1), limits)?
    } else {
        FiniteGroup::direct_product(&factors, limits)?
    };
    r.detail("product_order", product.order());
    let lhs = materialize(&cover.cover, limits)?;
    match find_isomorphism(&lhs, &product) {
        Some(f) => r.witness = Some(format!("generator images {}", seq(f.images()))),
        None => r.require(false, || {
            format!(
                "H({n}) of order {} is not isomorphic to the product of order {}",
                cover.order(),
                product.order()
            )
        }),
    }
    Ok(r)
}

/// For `|A|` and `|B|` coprime, `H(n, A x B) ≅ H(n, A) x H(n, B)`. For
/// other pairs both sides are only recorded.
pub fn check_coprime_factorization(a: &FiniteGroup, b: &FiniteGroup, n: usize, limits: &Limits) -> Result<CheckReport> {
    let product = FiniteGroup::direct_product(&[a.clone(), b.clone()], limits)?;
    let mut r = CheckReport::new("coprime_factorization", &product, n);
    let coprime = gcd(a.order(), b.order()) == 1;
    r.detail("factors", format!("{} x {}", a.name(), b.name()));
    r.detail("coprime", coprime);
    let (ca, cb) = (build_cover(a, n, limits)?, build_cover(b, n, limits)?);
    let whole = build_cover(&product, n, limits)?;
    r.detail("cover_product_of_factors", ca.order() as u128 * cb.order() as u128);
    r.detail("cover_of_product", whole.order());
    if coprime {
        let pair = FiniteGroup::direct_product(
            &[materialize(&ca.cover, limits)?, materialize(&cb.cover, limits)?],
            limits,
        )?;
        let lhs = materialize(&whole.cover, limits)?;
        match find_isomorphism(&lhs, &pair) {
            Some(f) => r.witness = Some(format!("generator images {}", seq(f.images()))),
            None => r.require(false, || {
                format!(
                    "H({n}) of order {} is not isomorphic to the product of covers of order {}",
                    whole.order(),
                    pair.order()
                )
            }),
        }
    }
    Ok(r)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn require_simple(s: &FiniteGroup) -> Result<()> {
    if is_nonabelian_simple(s) {
        Ok(())
    } else {
        Err(Error::NotSimple(s.name().to_string()))
    }
}

/// For `k` inequivalent generating sequences of a nonabelian simple group,
/// the paired tuples generate all of `S^k`; an equivalent pair generates
/// only the graph of an automorphism.
pub fn check_hall_independence(s: &FiniteGroup, n: usize, k: usize, limits: &Limits) -> Result<CheckReport> {
    require_simple(s)?;
    if !(1..=3).contains(&k) {
        return Err(Error::PreconditionViolated(format!("k must be 1, 2 or 3, got {k}")));
    }
    let mut r = CheckReport::new("hall_independence", s, n);
    let d = orbit_decompose(s, n, limits)?;
    if d.representatives.len() < k {
        return Err(Error::PreconditionViolated(format!(
            "only {} orbits on Γ_{n}",
            d.representatives.len()
        )));
    }
    let reps = &d.representatives[..k];
    let gens: Vec<Vec<Element>> = (0..n).map(|j| reps.iter().map(|t| t.entries()[j]).collect()).collect();
    let joint = FiniteGroup::product_subgroup(vec![s.clone(); k], &gens, format!("{}^{k}", s.name()), limits)?;
    let expected = (s.order() as u128).pow(k as u32);
    r.detail("k", k);
    r.detail("closure_order", joint.order());
    r.detail("expected", expected);
    r.require(joint.order() as u128 == expected, || {
        format!(
            "representatives {} generate only {} elements",
            reps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            joint.order()
        )
    });

    let x = Element(1);
    let first = reps[0].entries();
    let conj: Vec<Element> = first.iter().map(|&a| s.conjugate(a, x)).collect();
    let pairs: Vec<Vec<Element>> = first.iter().zip(&conj).map(|(&a, &b)| vec![a, b]).collect();
    let graph = FiniteGroup::product_subgroup(vec![s.clone(); 2], &pairs, "graph".into(), limits)?;
    r.detail("equivalent_pair_order", graph.order());
    r.require(graph.order() == s.order(), || {
        format!(
            "{} and its conjugate {} generate {} elements",
            seq(first),
            seq(&conj),
            graph.order()
        )
    });
    Ok(r)
}

/// `H(n, S) = S^{h_n(S)}` for nonabelian simple `S`; the order is asserted
/// from `h_n` and checked by construction only when within the closure cap.
pub fn check_simple_cover_order(s: &FiniteGroup, n: usize, limits: &Limits) -> Result<CheckReport> {
    require_simple(s)?;
    let mut r = CheckReport::new("simple_cover_order", s, n);
    let h = h_n(s, n)?;
    r.detail("h", h);
    if check_candidates(s, n, limits).is_ok() {
        let d = orbit_decompose(s, n, limits)?;
        r.detail("h_by_orbits", d.h_n);
        r.require(d.h_n == h, || format!("orbit count {} differs from |Γ|/|Aut| = {h}", d.h_n));
    }
    let h32 = u32::try_from(h).map_err(|_| Error::Internal(format!("h = {h} too large")))?;
    let asserted = BigUint::from(s.order()).pow(h32);
    r.detail("asserted_order", &asserted);
    if asserted <= BigUint::from(limits.max_closure) {
        let c = build_cover(s, n, limits)?;
        r.detail("built_order", c.order());
        r.require(BigUint::from(c.order()) == asserted, || {
            format!("built cover has order {}", c.order())
        });
    } else {
        r.detail("built_order", "none");
    }
    Ok(r)
}

fn is_elementary_abelian(g: &FiniteGroup, v: &Subgroup, q: u64) -> bool {
    let gens = v.generators();
    gens.iter().all(|&a| gens.iter().all(|&b| g.commute(a, b)))
        && v.elements().iter().all(|&a| q.is_multiple_of(g.element_order(a) as u64))
}

/// Structure of `H(n, G)` for the nonabelian group `G` of order `pq`.
pub fn check_pq_structure(p: u64, q: u64, n: usize, limits: &Limits) -> Result<CheckReport> {
    pq_scalar(p, q)?;
    let g = construct_group(&GroupSpec::PQ { p, q }, limits)?;
    let mut r = CheckReport::new("pq_structure", &g, n);
    let rank_v = (n - 1) * ((p as usize).pow(n as u32) - 1);
    let expected = BigUint::from(q).pow(rank_v as u32) * BigUint::from(p).pow(n as u32);
    if expected > BigUint::from(limits.max_closure) {
        return Err(Error::CoverTooLarge(format!(
            "H({n}, pq({p},{q})) has order {q}^{rank_v}*{p}^{n} = {expected}, above the closure cap {}",
            limits.max_closure
        )));
    }
    let cover = build_cover(&g, n, limits)?;
    let c = materialize(&cover.cover, limits)?;
    r.detail("cover_order", c.order());
    r.detail("expected_order", &expected);
    r.require(BigUint::from(c.order()) == expected, || {
        format!("cover order {} differs from {expected}", c.order())
    });

    let v = sylow_subgroup(&c, q)?;
    let mut v_rank = 0;
    let mut size = 1;
    while size < v.order() {
        size *= q as usize;
        v_rank += 1;
    }
    r.detail("v_order", v.order());
    r.detail("v_rank", v_rank);
    r.require(v.is_normal(), || "Sylow q-subgroup is not normal".into());
    r.require(is_elementary_abelian(&c, &v, q), || "Sylow q-subgroup is not elementary abelian".into());
    r.require(v_rank == rank_v && size == v.order(), || {
        format!("V has order {} but rank {rank_v} was expected", v.order())
    });

    let (quotient, _) = quotient_group(&c, &v)?;
    let pn = (p as usize).pow(n as u32);
    r.detail("quotient_order", quotient.order());
    r.require(
        quotient.order() == pn && is_abelian(&quotient) && p.is_multiple_of(quotient.exponent()),
        || format!("quotient by V has order {} and exponent {}", quotient.order(), quotient.exponent()),
    );
    let z = center(&c);
    r.detail("center_order", z.order());
    r.require(z.order() == 1, || format!("center has order {}", z.order()));

    let complement = sylow_subgroup(&c, p)?;
    let basis = complement.generators().to_vec();
    r.detail("complement_basis", seq(&basis));
    r.require(basis.len() == n, || format!("complement basis has {} elements", basis.len()));
    if basis.len() != n {
        return Ok(r);
    }
    let chars = Character::all(p, q, n)?;
    let mut hits = vec![0u32; c.order()];
    let mut product = 1usize;
    let q_n1 = (q as usize).pow(n as u32 - 1);
    for chi in &chars {
        let eigen: Vec<Element> = v
            .elements()
            .iter()
            .copied()
            .filter(|&x| (0..n).all(|i| c.conjugate(x, basis[i]) == c.pow(x, chi.on_basis(i))))
            .collect();
        let key = chi.exponents.iter().map(u64::to_string).collect::<Vec<_>>().join("-");
        r.detail(&format!("eigenspace_{key}"), eigen.len());
        let want = if chi.is_trivial() { 1 } else { q_n1 };
        r.require(eigen.len() == want, || {
            format!("character {key} has eigenspace of size {} instead of {want}", eigen.len())
        });
        if !chi.is_trivial() {
            product *= eigen.len();
        }
        for x in eigen {
            hits[x.index()] += 1;
        }
    }
    r.require(product == v.order(), || {
        format!("eigenspace sizes multiply to {product}, not |V| = {}", v.order())
    });
    if let Some(x) = (1..c.order()).find(|&i| hits[i] > 1) {
        r.require(false, || format!("element {x} lies in {} eigenspaces", hits[x]));
    }
    Ok(r)
}

fn random_generating(g: &FiniteGroup, n: usize, rng: &mut ChaCha8Rng) -> Vec<Element> {
    loop {
        let t: Vec<Element> = (0..n).map(|_| Element(rng.gen_range(0..g.order() as u32))).collect();
        if is_generating(g, &t) {
            return t;
        }
    }
}

/// Prescribed images of a generating sequence of a homogeneous group extend
/// to a surjection onto any quotient; covers of quotients are quotients of
/// the cover.
pub fn check_universal_lifting(
    g: &FiniteGroup,
    n: usize,
    options: &SuiteOptions,
    limits: &Limits,
) -> Result<CheckReport> {
    universal_lifting_with(g, n, &build_cover(g, n, limits), options, limits)
}

pub(crate) fn universal_lifting_with(
    g: &FiniteGroup,
    n: usize,
    cover: &Result<CoverResult>,
    options: &SuiteOptions,
    limits: &Limits,
) -> Result<CheckReport> {
    let mut r = CheckReport::new("universal_lifting", g, n);
    let lattice = subgroup_lattice(g, limits)?;
    let mut quotients = Vec::new();
    for normal in lattice.normal_subgroups() {
        quotients.push(quotient_group(g, normal)?);
    }
    let homogeneous = is_homogeneous(g, n);
    r.detail("homogeneous", homogeneous);
    r.detail("quotients", quotients.len());
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    if homogeneous {
        let gamma_g = count_gamma(g, n)?;
        let mut total = 0u128;
        for (h, _) in &quotients {
            total += gamma_g * count_gamma(h, n)?;
        }
        let exhaustive = total <= options.samples as u128;
        r.detail("mode", if exhaustive { "exhaustive" } else { "sampled" });
        let mut checked = 0u64;
        let mut check_pair = |r: &mut CheckReport, h: &FiniteGroup, t: &[Element], s: &[Element]| -> Result<()> {
            checked += 1;
            let ok = extend_hom(g, h, t, s)?.is_some_and(|f| f.is_surjective());
            r.require(ok, || format!("{} -> {} in {} does not extend", seq(t), seq(s), h.name()));
            Ok(())
        };
        if exhaustive {
            let ts: Vec<Vec<Element>> = enumerate_gamma(g, n, limits)?.collect();
            for (h, _) in &quotients {
                for s in enumerate_gamma(h, n, limits)? {
                    for t in &ts {
                        check_pair(&mut r, h, t, &s)?;
                    }
                }
            }
        } else {
            for _ in 0..options.samples {
                let (h, _) = &quotients[rng.gen_range(0..quotients.len())];
                let t = random_generating(g, n, &mut rng);
                let s = random_generating(h, n, &mut rng);
                check_pair(&mut r, h, &t, &s)?;
            }
        }
        r.detail("pairs", checked);
    } else {
        r.detail("mode", "counterexample");
        let mut found = None;
        'search: for (h, _) in &quotients {
            let t: Vec<Element> = match enumerate_gamma(g, n, limits)?.next() {
                Some(t) => t,
                None => break,
            };
            for s in enumerate_gamma(h, n, limits)? {
                if extend_hom(g, h, &t, &s)?.is_none() {
                    found = Some(format!("{} -> {} in {} does not extend", seq(&t), seq(&s), h.name()));
                    break 'search;
                }
            }
        }
        r.require(found.is_some(), || "no failing pair for a non-homogeneous group".into());
        r.witness = found.or(r.witness.take());
    }

    match cover {
        Ok(cover) => {
            let big = materialize(&cover.cover, limits)?;
            let mut picks: Vec<usize> = (0..quotients.len()).collect();
            while picks.len() > 6 {
                picks.remove(rng.gen_range(0..picks.len()));
            }
            for i in picks {
                let (k, _) = &quotients[i];
                let kc = build_cover(k, n, limits)?;
                let small = materialize(&kc.cover, limits)?;
                let natural = (cover.cover_gens(), kc.cover_gens());
                let ok = match find_surjection(&big, &small, Some((natural.0, natural.1))) {
                    Ok(Some(_)) => true,
                    Ok(None) => find_surjection(&big, &small, None).is_ok_and(|f| f.is_some()),
                    Err(_) => false,
                };
                r.require(ok, || {
                    format!(
                        "no surjection H({n}, {}) -> H({n}, {}) (orders {} and {})",
                        g.name(),
                        k.name(),
                        big.order(),
                        small.order()
                    )
                });
            }
            r.detail("cover_quotients", "checked");
        }
        Err(e) if e.is_cap_exceeded() => r.detail("cover_quotients", format!("skipped ({})", e.name())),
        Err(e) => return Err(e.clone()),
    }
    Ok(r)
}

/// The surjection `H(n, G) -> H(m, G)`, and whether it splits.
pub fn check_tower(g: &FiniteGroup, n: usize, m: usize, limits: &Limits) -> Result<CheckReport> {
    let mut r = CheckReport::new("tower", g, n);
    let t = cover_tower_map(g, n, m, limits)?;
    r.detail("m", m);
    r.detail("source_order", t.source.order());
    r.detail("target_order", t.target.order());
    r.detail("kernel_order", t.map.kernel().order());
    r.require(t.map.is_surjective(), || "tower map is not surjective".into());
    let section = find_section(&t)?;
    r.detail("split", section.is_some());
    if let Some(s) = section {
        r.witness = Some(format!("section images {}", seq(s.images())));
    }
    Ok(r)
}

/// `H(n, G)` is homogeneous of rank `n` with the exponent and the
/// abelian, nilpotent and solvable flags of `G`.
pub fn check_cover_invariants(g: &FiniteGroup, n: usize, limits: &Limits) -> Result<CheckReport> {
    cover_invariants_with(g, n, &build_cover(g, n, limits)?, limits)
}

pub(crate) fn cover_invariants_with(g: &FiniteGroup, n: usize, cover: &CoverResult, limits: &Limits) -> Result<CheckReport> {
    let mut r = CheckReport::new("cover_invariants", g, n);
    if cover.order() > REANALYSIS_MAX {
        return Err(Error::CoverTooLarge(format!(
            "H({n}, {}) has order {}; re-analysis needs a table of at most {REANALYSIS_MAX} elements",
            g.name(),
            cover.order()
        )));
    }
    let c = cover.cover.to_table_backend(limits)?;
    r.detail("cover_order", c.order());
    r.require(cover.projections().iter().all(|f| f.is_surjective()), || {
        "a coordinate projection is not surjective".into()
    });
    let hn = h_n(&c, n)?;
    r.detail("h_cover", hn);
    r.require(hn == 1, || format!("h_{n}(cover) = {hn}"));
    let rk = rank(&c);
    let want = if g.order() == 1 { 0 } else { n };
    r.detail("rank_cover", rk);
    r.require(rk == want, || format!("rank(cover) = {rk}, expected {want}"));
    r.detail("exponent", c.exponent());
    r.require(c.exponent() == g.exponent(), || {
        format!("exponent {} differs from {}", c.exponent(), g.exponent())
    });
    let (fg, fc) = (structure_predicates(g), structure_predicates(&c));
    r.detail("abelian", fc.is_abelian);
    r.detail("nilpotent", fc.is_nilpotent);
    r.detail("solvable", fc.is_solvable);
    r.require(fg == fc, || format!("flags of G {fg:?} differ from the cover's {fc:?}"));
    let (pg, pc) = (prime_factors(g.order() as u64), prime_factors(c.order() as u64));
    r.require(pg == pc, || format!("prime divisors {pg:?} differ from the cover's {pc:?}"));
    if is_homogeneous(g, n) {
        let iso = find_isomorphism(&c, g).is_some();
        r.detail("isomorphic_to_base", iso);
        r.require(iso, || "homogeneous group is not isomorphic to its cover".into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::build;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn free_action_examples() {
        let r = check_free_action(&build("C2xC3").unwrap(), 2, &limits()).unwrap();
        assert!(r.passed);
        assert_eq!((r.get("h"), r.get("aut")), (Some("12"), Some("2")));
        let r = check_free_action(&build("S3").unwrap(), 2, &limits()).unwrap();
        assert_eq!((r.get("h"), r.get("orbit_sizes")), (Some("3"), Some("6")));
        let r = check_free_action(&build("C2").unwrap(), 2, &limits()).unwrap();
        assert_eq!((r.get("h"), r.get("orbit_sizes")), (Some("3"), Some("1")));
    }

    #[test]
    fn abelian_and_nilpotent() {
        for spec in ["C2", "C2xC4", "C2xC3"] {
            let r = check_abelian_formula(&build(spec).unwrap(), 2, &limits()).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(check_abelian_formula(&build("S3").unwrap(), 2, &limits()).is_err());
        for spec in ["C6", "C2^2", "C12", "Q8"] {
            let r = check_nilpotent_sylow(&build(spec).unwrap(), 2, &limits()).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn simple_group_checks() {
        let a5 = build("A5").unwrap();
        let r = check_hall_independence(&a5, 2, 2, &limits()).unwrap();
        assert!(r.passed);
        assert_eq!(r.get("closure_order"), Some("3600"));
        assert_eq!(r.get("equivalent_pair_order"), Some("60"));
        let r = check_simple_cover_order(&a5, 2, &limits()).unwrap();
        assert_eq!(r.get("h"), Some("19"));
        assert_eq!(r.get("built_order"), Some("none"));
        assert!(r.passed);
        assert!(matches!(
            check_simple_cover_order(&build("S3").unwrap(), 2, &limits()),
            Err(Error::NotSimple(_))
        ));
    }

    #[test]
    fn pq_structure() {
        let r = check_pq_structure(2, 3, 2, &limits()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.get("cover_order"), Some("108"));
        assert_eq!(r.get("v_rank"), Some("3"));
        assert_eq!(r.get("eigenspace_0-0"), Some("1"));
        assert_eq!(r.get("eigenspace_1-1"), Some("3"));
        assert!(matches!(check_pq_structure(3, 7, 2, &limits()), Err(Error::CoverTooLarge(_))));
        assert!(matches!(check_pq_structure(2, 3, 3, &limits()), Err(Error::CoverTooLarge(_))));
        assert!(matches!(check_pq_structure(3, 5, 2, &limits()), Err(Error::InvalidPQ { .. })));
    }

    #[test]
    fn lifting_and_towers() {
        let opts = SuiteOptions::default();
        let r = check_universal_lifting(&build("C2^2").unwrap(), 2, &opts, &limits()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.get("mode"), Some("exhaustive"));
        let r = check_universal_lifting(&build("C2xC3").unwrap(), 2, &opts, &limits()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.get("mode"), Some("counterexample"));
        assert!(r.witness.is_some());
        let r = check_tower(&build("C2").unwrap(), 3, 2, &limits()).unwrap();
        assert!(r.passed);
        assert_eq!(r.get("split"), Some("true"));
    }

    #[test]
    fn coprime_factorization() {
        let (c2, c3) = (build("C2").unwrap(), build("C3").unwrap());
        let r = check_coprime_factorization(&c2, &c3, 2, &limits()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_coprime_factorization(&c2, &c2, 2, &limits()).unwrap();
        assert_eq!(r.get("coprime"), Some("false"));
        assert_eq!(r.get("cover_product_of_factors"), Some("16"));
        assert_eq!(r.get("cover_of_product"), Some("4"));
    }

    #[test]
    fn invariants() {
        for spec in ["C2xC3", "S3", "C2", "C1"] {
            let n = if spec == "C1" { 1 } else { 2 };
            let r = check_cover_invariants(&build(spec).unwrap(), n, &limits()).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
