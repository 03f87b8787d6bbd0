//! Desk-scale computational model of the mod-p Hecke algebra side of
//! supersingular representations of SL2(Q_p).
//!
//! The crate builds the finite vertex and edge Hecke algebras over F_p from
//! their presentations, classifies the characters of the full affine Hecke
//! algebra, computes Hom and Ext^1 between supersingular characters by exact
//! linear algebra, cross-validates the vertex algebras against the
//! endomorphism algebra of a concrete permutation module of SL2(F_p), and
//! assembles the resulting dimension tables and consistency ledgers.
//!
//! ```
//! use hecke_core::assembler::HeckeContext;
//! use hecke_core::linalg::PrimeField;
//!
//! let field = PrimeField::new(7)?;
//! let ctx = HeckeContext::new(&field);
//!
//! // The two supersingular modules of weight 1 sit in one block and admit
//! // a two-dimensional space of extensions between them.
//! let report = ctx.six_term_ext((0, 1), (1, 1))?;
//! assert_eq!(report.ext_full, 2);
//! assert_eq!(report.ext_vertex, [1, 1]);
//!
//! // Self-extensions of the same module vanish over the full algebra.
//! assert_eq!(ctx.six_term_ext((0, 1), (0, 1))?.ext_full, 0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod algebra;
pub mod assembler;
pub mod characters;
pub mod finitegroup;
pub mod linalg;
pub mod rep;
pub mod verify;
