pub mod equivalence;
pub mod families;
pub mod numerics;
pub mod orbits;
pub mod verify;
pub mod wildness;
