#pragma once

#include <cstdint>

#include "qsplit/qubo.hpp"
#include "qsplit/samplers.hpp"

namespace qsplit {

/// Decomposition parameters. cut_dim is the problem size solved by a single
/// direct sampler call; k is the beam width: how many candidate assignments
/// survive each aggregation step.
struct QSplitConfig {
    std::size_t cut_dim = 32;
    std::size_t k = 5;
    SamplerKind sampler = SamplerKind::sa;
    SamplerParams params;
    std::uint64_t seed = 0;
};

/// Quadrant decomposition of a QUBO matrix at m = ceil(n/2). The bottom-left
/// quadrant of an upper-triangular matrix is empty by construction, so only
/// three parts are kept. upper_left and bottom_right are QUBOs over the two
/// variable partitions (bottom_right reindexed by -m); coupling keeps the
/// cross entries at full size n, zero-padded, so it is directly solvable.
struct BlockSplit {
    std::size_t split_point = 0;
    QuboMatrix upper_left;
    QuboMatrix bottom_right;
    QuboMatrix coupling;
};

/// Time and quality accounting for one decomposition solve.
struct SolveReport {
    SampleSet best;
    double cpu_time = 0.0;
    double sampler_time = 0.0;
    std::uint64_t sampler_calls = 0;
    std::size_t max_padded_size = 0;
};

/// Split q into quadrants. The union of the three parts reconstructs the
/// parent entry set exactly. Requires n >= 2.
BlockSplit split(const QuboMatrix& q);

/// Solve the zero-padded coupling quadrant directly with the sampler;
/// returns full-length assignments.
SampleSet solve_coupling(const QuboMatrix& coupling, SamplerKind kind,
                         const SamplerParams& params);

/// Concatenate the top min(k, |a|) assignments over [0, m) with the top
/// min(k, |b|) over [m, n) into conflict-free candidates, re-scored under the
/// full q, deduplicated, truncated to k.
SampleSet combine_disjoint(const SampleSet& a, const SampleSet& b, const QuboMatrix& q,
                           std::size_t k);

/// Pair the top candidates of s1 and u; variables a pair disagrees on form a
/// conflict set that is re-optimized as a conditioned sub-QUBO (agreed
/// variables fixed, couplings folded). A conflict-free pair passes its s1
/// candidate straight through. The pool of these per-pair candidates is
/// scored under q, deduplicated and cut to k.
SampleSet merge_resolve(const SampleSet& s1, const SampleSet& u, const QuboMatrix& q,
                        SamplerKind kind, const SamplerParams& params, std::size_t k);

/// Close out the time ledger: cpu_time is the solve's wall time minus the
/// time spent inside sampler calls, clamped at zero.
void account(SolveReport& report, double wall_time);

/// Full recursive solve: problems at or below cut_dim go straight to the
/// sampler; larger ones are split, the diagonal blocks solved recursively,
/// the coupling block solved padded, and the two candidate streams merged
/// with conflict resolution. Deterministic per cfg.seed; sub-seeds derive
/// from the position in the recursion tree.
SolveReport qsplit_solve(const QuboMatrix& q, const QSplitConfig& cfg);

}  // namespace qsplit
