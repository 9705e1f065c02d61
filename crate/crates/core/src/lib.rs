//! Knowledge compilation for quantified constraint satisfaction problems.
//!
//! A [`Problem`] is compiled into a [`QcspBase`]: one set of guards per
//! existential variable, each guard a value plus a DAG of earlier move
//! sequences under which that value may be played. Compiled bases are
//! compatible (their interpretation has exactly the winning strategies of
//! the source problem) and optimal (a guarded value is playable exactly
//! when a winning continuation exists). Optimality turns next-move
//! questions into tree walks, see [`query`].
//!
//! ```
//! use qcsp::{compile, fixtures, query, CompileOptions};
//!
//! let problem = fixtures::pstar(); // ∃x∃y∀z∃t (x = y*z + t) over {0,1,2}
//! let (base, _stats) = compile(&problem, CompileOptions::default()).unwrap();
//! let moves = query::allowed_moves(&base, &[2]).unwrap();
//! assert_eq!(moves.into_iter().collect::<Vec<_>>(), vec![0, 1]);
//! ```

pub mod base;
pub mod compiler;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod guard;
pub mod model;
pub mod oracle;
pub mod query;

pub use base::{
    check_compatibility, check_compatibility_by_enumeration, check_optimality, interpret_base, interpret_guard_set,
    interpret_tree, Guard, GuardSet, Interpretation, PairBase, QcspBase, TupleSet,
};
pub use compiler::{compile, CompileOptions, CompileStats, Compiler, Fixpoint, Propagation, SubBase, ValBaseList};
pub use error::{BaseError, CompileError, ModelError, OracleError, QueryError};
pub use guard::{GuardNode, NodeId, NodeStore};
pub use model::{evaluate, validate_problem, Assignment, Problem, ProblemDoc, Quantifier, Table, Value, Variable};
pub use oracle::{
    count_winning_strategies, decide_from, decide_winning, enumerate_winning_strategies, is_winning_strategy,
    oracle_calls, EnumLimits, StrategyTree,
};
pub use query::{
    allowed_moves, answer_next_move_choice, certificate_of, certificate_shape_ok, extract_strategy, verify_certificate,
    TieBreak,
};
