//! Curvature of affine factorable surfaces `y = f(x) g(z + a x)` in
//! pseudo-Galilean space, with grid verification of closed-form families
//! and mesh export.

pub mod curvature;
pub mod doc;
pub mod error;
pub mod export;
pub mod families;
pub mod funcs;
pub mod pg_core;
pub mod surface;
pub mod verify;

pub use curvature::{
    curvature_general, evaluate, form_bundle, gauss_closed, mean_closed, omega, relation_a,
    CurvaturePoint, FormBundle,
};
pub use error::{Error, Result};
pub use export::SurfaceMesh;
pub use families::{
    build, catalog, catalog_entry, CatalogEntry, ExpectedInvariant, FamilySpec, InvariantKind,
};
pub use funcs::{C2Fn, Expr, Interval, Jet};
pub use pg_core::{pg_cross, pg_distance, pg_dot, pg_norm, CausalClass, PGVec3};
pub use surface::{FactorableSurface, Rect};
pub use verify::{
    oracle_compare, relation_check, typo_probe_const_k, verify_family, verify_surface, GridSpec,
    Tolerance, Verdict, VerificationReport,
};
