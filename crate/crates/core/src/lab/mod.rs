//! Test-function corpus, inequality evaluators and corpus sweeps.

pub mod corpus;
pub mod function;
pub mod inequality;
pub mod runner;

pub use corpus::{default_corpus, Corpus, CorpusPair};
pub use function::{Packet, TestFunctionSpec, MAX_PACKETS};
pub use inequality::{
    eval_bgn_besov, eval_bgn_linf, eval_bmo_endpoint, eval_kp_endpoint, eval_linear_gn, eval_thm13, eval_weak_l1_endpoint,
    evaluate, gn_exponents, lambda_minimize, InequalityId, InequalityParams, InequalityReport,
};
pub use runner::{run_corpus, CorpusRun, ItemOutcome, SummaryRow};
