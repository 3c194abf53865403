//! Greedy power decompositions `λ = Σ a_h^i + r` and short-word synthesis through
//! commutator distortion.

mod power;
mod synth;
mod word;

pub use power::{
    empirical_constant, integer_root, iterated_exponent, n_required, power_decompose, proof_constant, remainder_within,
    step_constant, PowerDecomposition,
};
pub use synth::{full_constant, full_synthesize, layer_constant, nested_length, synthesize_layer_word};
pub use word::{word_eval, Word};
