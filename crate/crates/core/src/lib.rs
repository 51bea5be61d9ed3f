//! Context-free grammars rendered as OWL ontologies.
//!
//! A grammar in Chomsky Normal Form becomes a set of rolified classes,
//! property chains and general class inclusions; a token sequence becomes an
//! ABox linked by a "directly precedes" property. Classification then runs
//! either by saturating the whole axiom set ([`classify::Dl`]) or by parsing
//! the sequence first and asserting only subclass axioms from the parse
//! trees ([`classify::Hybrid`]).

pub mod grammar;
pub mod owl;
pub mod parser;
pub mod abox;
pub mod bench;
pub mod cfg2owl;
pub mod classify;
pub mod materializer;
pub mod pipeline;
