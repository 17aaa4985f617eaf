pub mod csp;
pub mod extform;
pub mod oracles;
pub mod pipeline;
pub mod random;
pub mod ratlp;
pub mod reductions;
pub mod treedec;
pub mod verify;
