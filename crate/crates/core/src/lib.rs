//! Exact computations in the Hopf monoid of directed graphs.
//!
//! * [`species`]: label sets, subsets and set compositions.
//! * [`digraph`]: restriction, disjoint-union product, lower halves, coproduct.
//! * [`hopf`]: formal sums, the antipode, characters and their polynomial invariants.
//! * [`invariants`]: strict/weak chromatic polynomials, the B-polynomial, the
//!   edge invariant, brute-force counters and reciprocity checks.
//! * [`subfun`]: extended Boolean functions and the lower-half function `low`.
//! * [`flow`] and [`polytope`]: exact max-flow, base-polytope and graph-cone membership.
//! * [`verify`]: seeded property suites used by the CLI and the acceptance tests.

pub mod binpoly;
pub mod digraph;
pub mod error;
pub mod flow;
pub mod hopf;
pub mod invariants;
pub mod polytope;
pub mod ring;
pub mod species;
pub mod subfun;
pub mod verify;

pub use binpoly::BinPoly;
pub use digraph::Digraph;
pub use error::{Error, Result};
pub use hopf::{BasicCharacter, Character, EdgeCharacter, FormalSum};
pub use ring::{CoeffRing, MPoly, Var};
pub use species::{Composition, Label, LabelSet, Subset};

/// Environment variable overriding [`Limits::max_work`].
pub const MAX_WORK_ENV: &str = "HOPFDG_MAX_WORK";

/// Resource bounds shared by the enumerating operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest vertex set for which all `2^|I|` subsets are scanned.
    pub max_subset_vertices: usize,
    /// Largest vertex set for composition sums (antipode, invariants).
    pub max_composition_vertices: usize,
    /// Largest number of elementary steps for brute-force counts.
    pub max_work: u64,
    /// Split composition enumeration across threads. Results are identical
    /// to the sequential run.
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_subset_vertices: 20,
            max_composition_vertices: 9,
            max_work: 50_000_000,
            parallel: false,
        }
    }
}

impl Limits {
    /// Defaults, with `max_work` taken from `HOPFDG_MAX_WORK` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var(MAX_WORK_ENV) {
            limits.max_work = v.trim().parse().map_err(|_| {
                Error::Precondition(format!("{MAX_WORK_ENV} must be a non-negative integer, got {v:?}"))
            })?;
        }
        Ok(limits)
    }

    pub fn check_subsets(&self, n: usize) -> Result<()> {
        if n > self.max_subset_vertices {
            return Err(Error::SizeLimit {
                what: "subset enumeration",
                size: n,
                limit: self.max_subset_vertices,
            });
        }
        Ok(())
    }

    pub fn check_compositions(&self, n: usize) -> Result<()> {
        if n > self.max_composition_vertices {
            return Err(Error::SizeLimit {
                what: "composition enumeration",
                size: n,
                limit: self.max_composition_vertices,
            });
        }
        Ok(())
    }

    /// Fails when `base^exp` steps would exceed the work bound.
    pub fn check_work(&self, what: &'static str, base: u64, exp: usize) -> Result<()> {
        let mut work: u128 = 1;
        for _ in 0..exp {
            work = work.saturating_mul(base as u128);
        }
        if work > self.max_work as u128 {
            return Err(Error::WorkLimit {
                what,
                work,
                limit: self.max_work,
            });
        }
        Ok(())
    }
}
