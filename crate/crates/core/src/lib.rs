//! Tilings of the sphere by twelve congruent pentagons.
//!
//! * [`sphere_geom`]: points, isometries, the quadrilateral fourth-edge law.
//! * [`pentagon`]: pentagon realization, area, simplicity, the sign law.
//! * [`tilings`]: combinatorial fixtures for the five tiling types and a
//!   validator for geometric realizations.
//! * [`solver`]: the two-equation systems of types 2 and 3, root
//!   classification, and rigidity scans for types 1 and 4.
//! * [`type5`]: the two-parameter family, its symmetry group and
//!   isohedrality.

pub mod pentagon;
pub mod solver;
pub mod sphere_geom;
pub mod tilings;
pub mod type5;

pub use pentagon::{AngleWord, EdgeLabel, EdgeWord, Lemma3Status, SphericalPentagon};
pub use sphere_geom::{ArcLength, Isometry, UnitVector};
pub use tilings::{AngleLabel, CombinatorialTiling, LengthLabel, ValidationReport};
