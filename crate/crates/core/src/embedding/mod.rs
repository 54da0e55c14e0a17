//! Embedding engines: expansion checks, tree and tree blow-up embedding,
//! cycle embedding into candidate sets, and the end-to-end search.

mod blowup;
mod cycles;
mod dichotomy;
mod expansion;
mod fp;
mod lift;
mod map;
mod ramsey;
mod search;

pub use blowup::{
    bipartite_matching, monochromatic_tree_blowup, qpartition_or_cliques, restrict_colouring, BlowupOutcome, BlowupStage, LayerInstance, LayerSplit,
    SplitParams, TreeBlowupParams,
};
pub use cycles::{
    embed_cycle, embed_cycle_sets, embed_cycles_pipeline, CandidateAssignment, CyclePipeline, CyclePipelineOutcome, CycleStage, Slot, CYCLE_BUDGET,
};
pub use dichotomy::{min_part_size, tree_or_qpartite, Dichotomy, DichotomyReport, EXHAUSTIVE_PART_CAP};
pub use expansion::{alpha_joint_check, expansion_check, expansion_check_within, prune_to_expander, ExpansionReport, JointReport, ProbeConfig, PruneReport};
pub use fp::{embed_tree_fp, embed_tree_in, fp_hypothesis, FpOutcome, TREE_SEARCH_BUDGET};
pub use lift::{dense_pairs_lift, lift_blue_tree, DenseLiftReport};
pub use map::{validate_embedding, EmbeddingCheck, EmbeddingMap};
pub use ramsey::{ramsey_embed, RamseyCase, RamseyConfig, RamseyReport, StageLog};
pub use search::{find_copy, Search};
