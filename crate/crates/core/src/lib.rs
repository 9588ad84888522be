pub mod families;
pub mod matrices;
pub mod newick;
pub mod tree;
pub mod exact;
pub mod spectral;
pub mod bounds;
pub mod ops;
pub mod caterpillar;
pub mod collections;
pub mod enumeration;
pub mod numfmt;
pub mod verify;
pub mod cli;
