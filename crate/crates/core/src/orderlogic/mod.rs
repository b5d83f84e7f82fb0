//! Certificate-producing order logic: formal words, cited facts,
//! derivations and their checker, search for sign assignments, and
//! mutation testing of the checker.

pub mod check;
pub mod derivation;
pub mod facts;
pub mod mutation;
pub mod scripts;
pub mod search;
pub mod soundness;
pub mod word;

pub use check::{apply_rule, check_derivation, CheckError, Verdict};
pub use derivation::{Derivation, Goal, Judgment, Rule};
pub use facts::{lemma_table, theorem_table, AtomTable, Fact, FactKind, FactStatus};
pub use mutation::{generate_mutations, Edit, run_mutations, sample_mutations, Mutation, MutationKind, MutationOutcome};
pub use scripts::{script_lemma_gen, script_theorem_main};
pub use search::{sign_search, verify_nonlo_witness, IdentityOracle, NonLoWitness, SearchBound};
pub use word::Word;
