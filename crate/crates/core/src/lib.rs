//! Combinatorics of free groups aimed at certifying that an element lies in
//! no proper free factor.
//!
//! * [`words`]: reduced and cyclic words, abelianization, text syntax.
//! * [`whgraph`]: Whitehead graphs and cut vertices.
//! * [`autos`]: Whitehead automorphisms, endomorphisms, length minimization
//!   and the orbit-search simplicity oracle.
//! * [`axes`]: axes in the Cayley tree and their overlaps.
//! * [`certify`]: certificates for non-simple elements.

pub mod autos;
pub mod axes;
pub mod certify;
pub mod whgraph;
pub mod words;
