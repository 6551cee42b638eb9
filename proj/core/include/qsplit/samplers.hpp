#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qsplit/qubo.hpp"

namespace qsplit {

/// Annealing schedule and budget. beta_hot/beta_cold of 0 mean "auto": scale
/// 1/max|coeff| and 50/max|coeff| respectively, resolved per problem.
struct SamplerParams {
    std::uint64_t num_reads = 100;
    std::uint64_t num_sweeps = 1000;
    double beta_hot = 0.0;
    double beta_cold = 0.0;
    std::uint64_t seed = 0;
};

/// Backend result: merged samples plus the time spent inside the backend.
struct SamplerOutcome {
    SampleSet samples;
    double sampler_time = 0.0;
    std::uint64_t calls = 1;
};

enum class SamplerKind { exhaustive, sa };

SamplerKind parse_sampler_kind(std::string_view name);

/// Maintains the energy of an evolving assignment under single-bit flips.
/// Flip deltas come from a per-variable adjacency list, so a sweep costs
/// O(nonzeros) instead of O(n * nonzeros).
class IncrementalEnergy {
  public:
    explicit IncrementalEnergy(const QuboMatrix& q);

    /// Load a full assignment and recompute the energy from scratch.
    void reset(const Assignment& x);

    double current_energy() const { return energy_; }
    const Assignment& assignment() const { return x_; }

    /// Energy change that flipping bit i would cause.
    double flip_delta(std::size_t i) const;

    /// Apply the flip and fold its delta into the tracked energy.
    void flip(std::size_t i);

  private:
    const QuboMatrix& q_;
    std::vector<double> diag_;
    std::vector<std::uint32_t> adj_start_;
    std::vector<std::pair<std::uint32_t, double>> adj_;
    Assignment x_;
    double energy_ = 0.0;
};

/// Ground-truth oracle: enumerates every assignment (Gray-code order with
/// incremental deltas) and returns all global minimizers, occurrences 1.
/// Throws CapacityError above max_vars.
SamplerOutcome exhaustive_solve(const QuboMatrix& q, std::size_t max_vars = 24);

/// Classical QPU stand-in. num_reads independent restarts from uniform random
/// assignments; each read does num_sweeps fixed-order Metropolis passes under
/// a geometric inverse-temperature ramp and contributes its best-seen
/// assignment. Per-read sub-seeds derive from (seed, read index), so results
/// replay exactly and doubling num_reads extends, not reshuffles, the batch.
SamplerOutcome simulated_anneal(const QuboMatrix& q, const SamplerParams& params);

/// Uniform backend entry point; wall time inside the backend is recorded as
/// sampler_time.
SamplerOutcome sampler_dispatch(SamplerKind kind, const QuboMatrix& q,
                                const SamplerParams& params);

}  // namespace qsplit
