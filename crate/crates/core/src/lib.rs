//! Exact computation with real forms of simple complex Lie algebras:
//! construction of the forms as multiplication tables, enumeration of
//! nilpotent orbit representatives through the Kostant-Sekiguchi
//! correspondence, and Cartan-decomposition-preserving isomorphisms.
//!
//! All arithmetic is exact, over the field Q(√p : p prime)(i).

pub mod carrier;
pub mod carrierdb;
pub mod cayley;
pub mod chevsys;
pub mod error;
pub mod exact;
pub mod iso;
pub mod linalg;
pub mod polysolve;
pub mod realform;
pub mod rootsystem;

pub use error::LieError;
