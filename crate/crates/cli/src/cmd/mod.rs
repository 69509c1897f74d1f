pub mod dist;
pub mod fit;
pub mod gen;
pub mod invariant;
pub mod tree;
pub mod verify;
