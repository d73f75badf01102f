//! Problem instances, witnesses, contraction semantics and exact verification
//! for quadratic, bilinear, pencil and tensor feasibility.

pub mod json;
mod problems;
mod tensor;
mod witness;

pub use json::{Instance, Witness};
pub use problems::{
    verify_bilinear_witness, verify_pencil_witness, verify_quadratic_witness,
    verify_quadratic_witness_surd, BilinearInstance,
    PencilInstance, QuadraticInstance,
};
pub use tensor::{contract_xy, contract_xz, contract_yz, verify_tensor_witness, verify_tensor_witness_surd, Tensor3};
pub use witness::WitnessTriple;
