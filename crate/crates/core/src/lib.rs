pub mod analysis;
pub mod ansatz;
pub mod bits;
pub mod cli;
pub mod driver;
pub mod fermion;
pub mod integrals;
pub mod linalg;
pub mod pauli;
pub mod simulator;
pub mod systems;
pub mod tensor;
pub mod transcorrelation;
pub mod vqe;
