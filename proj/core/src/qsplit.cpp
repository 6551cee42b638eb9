#include "qsplit/qsplit.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>
#include <string>

#include "qsplit/seeds.hpp"

namespace qsplit {

namespace {

// Seed-stream codes for the children of a recursion node.
constexpr std::uint64_t kStreamUpperLeft = 1;
constexpr std::uint64_t kStreamBottomRight = 2;
constexpr std::uint64_t kStreamCoupling = 3;
constexpr std::uint64_t kStreamConflictBase = 4;

// Shared sampler front-end for one solve: every backend call goes through
// here so time, call count and padded-size accounting stay consistent.
struct Session {
    SamplerKind kind;
    SamplerParams base;
    SolveReport* report = nullptr;
    std::size_t cut_dim = 0;
    std::uint64_t oversized_conflicts = 0;

    SampleSet call(const QuboMatrix& q, std::uint64_t seed) {
        SamplerParams params = base;
        params.seed = seed;
        SamplerOutcome outcome = sampler_dispatch(kind, q, params);
        if (report) {
            report->sampler_time += outcome.sampler_time;
            report->sampler_calls += outcome.calls;
            report->max_padded_size = std::max(report->max_padded_size, q.size());
        }
        return std::move(outcome.samples);
    }
};

// Pairs every retained S1 assignment with every coupling assignment. Pairs
// that agree everywhere pass through unchanged; otherwise the disagreeing
// variables form a sub-QUBO conditioned on the agreed values, the sampler
// re-solves it, and each returned sub-assignment is composed back into a
// full candidate. Only these candidates enter the pool, so the result is
// honestly limited by what the conflict re-solves recover; with the
// exhaustive backend a repair can never be worse than either parent.
SampleSet merge_resolve_impl(const SampleSet& s1, const SampleSet& u, const QuboMatrix& q,
                             Session& session, std::uint64_t node_seed, std::size_t k) {
    const std::size_t top_s = std::min(k, s1.size());
    const std::size_t top_u = std::min(k, u.size());
    SampleSet pool;
    for (std::size_t a = 0; a < top_s; ++a) {
        const Assignment& s = s1.samples()[a].assignment;
        if (s.size() != q.size())
            throw DimensionError("merge candidate length does not match problem size");
        for (std::size_t b = 0; b < top_u; ++b) {
            const Assignment& other = u.samples()[b].assignment;
            if (other.size() != q.size())
                throw DimensionError("merge candidate length does not match problem size");
            std::vector<std::size_t> conflict;
            for (std::size_t i = 0; i < q.size(); ++i)
                if (s[i] != other[i]) conflict.push_back(i);
            if (conflict.empty()) {  // full agreement, keep as-is
                pool.add(s, energy(q, s));
                continue;
            }
            if (session.cut_dim && conflict.size() > session.cut_dim)
                ++session.oversized_conflicts;

            std::map<std::size_t, std::uint8_t> agreed;
            std::size_t next = 0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (next < conflict.size() && conflict[next] == i)
                    ++next;
                else
                    agreed[i] = s[i];
            }
            FixedQubo conditioned = fix_variables(q, agreed);
            SampleSet repairs = session.call(
                conditioned.sub, derive_seed(node_seed, kStreamConflictBase + a * k + b));
            for (const Sample& repair : repairs.samples()) {
                Assignment full = s;
                for (std::size_t idx = 0; idx < conditioned.free_indices.size(); ++idx)
                    full[conditioned.free_indices[idx]] = repair.assignment[idx];
                double e = energy(q, full);
                pool.add(std::move(full), e);
            }
        }
    }
    pool.truncate(k);
    return pool;
}

SampleSet solve_node(const QuboMatrix& q, Session& session, std::uint64_t node_seed,
                     std::size_t cut_dim, std::size_t k) {
    if (q.size() <= cut_dim) {
        SampleSet samples = session.call(q, node_seed);
        samples.truncate(k);
        return samples;
    }
    BlockSplit blocks = split(q);
    SampleSet ul = solve_node(blocks.upper_left, session,
                              derive_seed(node_seed, kStreamUpperLeft), cut_dim, k);
    SampleSet br = solve_node(blocks.bottom_right, session,
                              derive_seed(node_seed, kStreamBottomRight), cut_dim, k);
    SampleSet s1 = combine_disjoint(ul, br, q, k);
    SampleSet u = session.call(blocks.coupling, derive_seed(node_seed, kStreamCoupling));
    u.truncate(k);
    return merge_resolve_impl(s1, u, q, session, node_seed, k);
}

}  // namespace

BlockSplit split(const QuboMatrix& q) {
    if (q.size() < 2) throw ParameterError("cannot split a problem with fewer than 2 variables");
    BlockSplit out;
    out.split_point = (q.size() + 1) / 2;
    out.upper_left = QuboMatrix(out.split_point);
    out.bottom_right = QuboMatrix(q.size() - out.split_point);
    out.coupling = QuboMatrix(q.size());
    for (const auto& [key, coeff] : q.entries()) {
        auto [i, j] = key;
        if (j < out.split_point)
            out.upper_left.set(i, j, coeff);
        else if (i >= out.split_point)
            out.bottom_right.set(i - out.split_point, j - out.split_point, coeff);
        else
            out.coupling.set(i, j, coeff);
    }
    return out;
}

SampleSet solve_coupling(const QuboMatrix& coupling, SamplerKind kind,
                         const SamplerParams& params) {
    Session session{kind, params};
    return session.call(coupling, params.seed);
}

SampleSet combine_disjoint(const SampleSet& a, const SampleSet& b, const QuboMatrix& q,
                           std::size_t k) {
    SampleSet out;
    const std::size_t top_a = std::min(k, a.size());
    const std::size_t top_b = std::min(k, b.size());
    for (std::size_t i = 0; i < top_a; ++i) {
        const Assignment& head = a.samples()[i].assignment;
        for (std::size_t j = 0; j < top_b; ++j) {
            const Assignment& tail = b.samples()[j].assignment;
            if (head.size() + tail.size() != q.size())
                throw DimensionError("partition sizes do not add up to the problem size");
            Assignment full = head;
            full.insert(full.end(), tail.begin(), tail.end());
            double e = energy(q, full);
            out.add(std::move(full), e);
        }
    }
    out.truncate(k);
    return out;
}

SampleSet merge_resolve(const SampleSet& s1, const SampleSet& u, const QuboMatrix& q,
                        SamplerKind kind, const SamplerParams& params, std::size_t k) {
    Session session{kind, params};
    return merge_resolve_impl(s1, u, q, session, params.seed, k);
}

void account(SolveReport& report, double wall_time) {
    report.cpu_time = std::max(0.0, wall_time - report.sampler_time);
}

SolveReport qsplit_solve(const QuboMatrix& q, const QSplitConfig& cfg) {
    if (q.size() == 0) throw ParameterError("cannot solve an empty problem");
    if (cfg.cut_dim < 2) throw ParameterError("cut_dim must be at least 2");
    if (cfg.k < 1) throw ParameterError("beam width k must be at least 1");

    auto start = std::chrono::steady_clock::now();
    SolveReport report;
    Session session{cfg.sampler, cfg.params, &report, cfg.cut_dim};
    report.best = solve_node(q, session, cfg.seed, cfg.cut_dim, cfg.k);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    account(report, wall);
    if (session.oversized_conflicts > 0)
        std::cerr << "qsplit: " << session.oversized_conflicts
                  << " conflict set(s) exceeded cut_dim " << cfg.cut_dim << "\n";
    return report;
}

}  // namespace qsplit
