pub mod chemistry;
pub mod circuit;
pub mod compiler;
pub mod expr;
pub mod measurement;
pub mod objective;
pub mod optimize;
pub mod pauli;
pub mod random;
pub mod simulator;
