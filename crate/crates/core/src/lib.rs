//! Homogeneous covers of finite groups.
//!
//! Groups are concrete: a Cayley table or a subgroup of a direct product
//! stored as packed tuples. On top of that sit generating sequences and
//! their counts, the action of `Aut(G)` on them, the cover `H(n, G)` built
//! from orbit representatives, and executable checks of its structure.

pub mod cover;
pub mod error;
pub mod genseq;
pub mod group;
pub mod hom;
pub mod lattice;
pub mod limits;
pub mod orbits;
pub mod perm;
pub mod spec;
pub mod subgroup;
mod tuple;
pub mod verify;

pub use cover::{build_cover, cover_tower_map, CoverResult, TowerMap};
pub use error::{Error, Result};
pub use genseq::{count_gamma, enumerate_gamma, is_generating, is_irredundant, rank, GeneratingSequence};
pub use group::{Element, FiniteGroup};
pub use hom::{extend_hom, find_isomorphism, find_surjection, lift_gaschutz, Homomorphism};
pub use lattice::{hall_phi, subgroup_lattice, SubgroupLattice};
pub use limits::Limits;
pub use orbits::{aut_order, equivalent_sequences, h_n, is_homogeneous, orbit_decompose, OrbitDecomposition};
pub use spec::{build, construct_group, parse_spec, GroupSpec};
pub use subgroup::{closure, quotient_group, Subgroup};
