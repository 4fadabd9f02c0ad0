//! Computational engine for trigraded Ext over quotient Hopf algebras of the
//! C-motivic (and classical) mod-2 Steenrod algebra.
//!
//! The pipeline: present a quotient of the dual Steenrod algebra from profile
//! data ([`hopf`]), build a free resolution of the ground module over the
//! dual (Milnor-basis) algebra ([`resolution`]), read off trigraded Ext with
//! its tau action, then compute chain-level structure on top: products,
//! Massey products, the Mahowald operator, and restriction maps ([`yoneda`]).
//! A reduced cobar complex ([`cobar`]) provides an independent brute-force
//! oracle for Ext dimensions.

pub mod cobar;
pub mod f2;
pub mod hopf;
pub mod naming;
pub mod resolution;
pub mod verify;
pub mod yoneda;
