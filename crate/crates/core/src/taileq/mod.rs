//! Sequences of surjective homomorphisms and their tails.

mod decide;
mod search;
mod sequence;

pub use decide::{family_tail_decide, OrderObstruction, TailVerdict, TAIL_CRITERION};
pub use search::{
    interleaving_search, verify_witness, InterleavingWitness, Node, Obstruction, SearchOutcome, Side,
    WitnessMap,
};
pub use sequence::{
    asymptotically_constant, check_sequence, family_sequence_explicit, family_sequence_structural,
    ranks_order, Constancy, HomSequence, Ranks,
};
