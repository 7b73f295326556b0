//! The functional equation `f(x+y)·g(x-y) = f(x)·f(y)·g(x)·g(-y)` on
//! finitely generated Abelian groups `Z^r × Z/n_1 × … × Z/n_k`.
//!
//! - [`group`]: groups, elements, cosets of `X^(2)` and `X^(4)`, windows, subgroups.
//! - [`func`]: value tables and structured solution forms.
//! - [`check`]: pointwise verification of the equation and of the structural identities.
//! - [`decompose`]: recovery of the structured form from a table of values.
//! - [`oracle`]: exhaustive enumeration and built-in examples.

mod lattice;
pub mod numeric;
pub mod group;
pub mod func;
pub mod check;
pub mod decompose;
pub mod oracle;

pub use func::{
    synth_table, table_even_odd_split, AdditiveMap, CharacterSpec, CosetConstantMap, FuncTable, HermitianSolutionForm,
    Kind, ModelError, PositiveSolutionForm, QuadraticForm, RealTable, SignMap, SolutionForm,
};
pub use group::{CosetIndex, Domain, GroupElement, GroupError, GroupSpec, SubgroupSpec, Window};
pub use numeric::{Rational, Real, Value, DEFAULT_TOL};
