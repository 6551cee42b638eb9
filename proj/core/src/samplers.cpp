#include "qsplit/samplers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <string>

#include "qsplit/seeds.hpp"

namespace qsplit {

SamplerKind parse_sampler_kind(std::string_view name) {
    if (name == "exhaustive") return SamplerKind::exhaustive;
    if (name == "sa") return SamplerKind::sa;
    throw ParameterError("unknown sampler kind '" + std::string(name) + "'");
}

IncrementalEnergy::IncrementalEnergy(const QuboMatrix& q)
    : q_(q), diag_(q.size(), 0.0), adj_start_(q.size() + 1, 0) {
    std::vector<std::uint32_t> degree(q.size(), 0);
    for (const auto& [key, coeff] : q.entries()) {
        if (key.first == key.second) continue;
        ++degree[key.first];
        ++degree[key.second];
    }
    for (std::size_t i = 0; i < q.size(); ++i)
        adj_start_[i + 1] = adj_start_[i] + degree[i];
    adj_.resize(adj_start_.back());
    std::vector<std::uint32_t> cursor(adj_start_.begin(), adj_start_.end() - 1);
    for (const auto& [key, coeff] : q.entries()) {
        auto [i, j] = key;
        if (i == j) {
            diag_[i] = coeff;
        } else {
            adj_[cursor[i]++] = {static_cast<std::uint32_t>(j), coeff};
            adj_[cursor[j]++] = {static_cast<std::uint32_t>(i), coeff};
        }
    }
}

void IncrementalEnergy::reset(const Assignment& x) {
    energy_ = energy(q_, x);
    x_ = x;
}

double IncrementalEnergy::flip_delta(std::size_t i) const {
    double coupled = diag_[i];
    for (std::uint32_t a = adj_start_[i]; a < adj_start_[i + 1]; ++a) {
        const auto& [j, coeff] = adj_[a];
        if (x_[j]) coupled += coeff;
    }
    return x_[i] ? -coupled : coupled;
}

void IncrementalEnergy::flip(std::size_t i) {
    energy_ += flip_delta(i);
    x_[i] ^= 1;
}

SamplerOutcome exhaustive_solve(const QuboMatrix& q, std::size_t max_vars) {
    if (q.size() > max_vars)
        throw CapacityError("exhaustive solve limited to " + std::to_string(max_vars) +
                            " variables, got " + std::to_string(q.size()));
    SamplerOutcome out;
    const std::size_t n = q.size();
    if (n == 0) {
        out.samples.add(Assignment{}, q.offset());
        return out;
    }

    IncrementalEnergy tracker(q);
    Assignment x(n, 0);
    tracker.reset(x);

    // Gray-code sweep; near-minimal states are kept as candidates and
    // re-evaluated from scratch afterwards, so accumulated float error in the
    // running energy cannot decide ties.
    double best = tracker.current_energy();
    auto tie_eps = [](double e) { return 1e-9 * (1.0 + std::abs(e)); };
    std::vector<std::pair<std::uint64_t, double>> candidates{{0, best}};
    std::uint64_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < total; ++t) {
        std::size_t bit = static_cast<std::size_t>(std::countr_zero(t));
        tracker.flip(bit);
        mask ^= std::uint64_t{1} << bit;
        double e = tracker.current_energy();
        if (e < best - tie_eps(best)) {
            best = e;
            double cut = best + tie_eps(best);
            std::erase_if(candidates, [cut](const auto& c) { return c.second > cut; });
        }
        if (e <= best + tie_eps(best)) candidates.emplace_back(mask, e);
    }

    double exact_best = 0.0;
    bool first = true;
    std::vector<std::pair<Assignment, double>> evaluated;
    evaluated.reserve(candidates.size());
    for (const auto& [candidate_mask, approx] : candidates) {
        Assignment a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = (candidate_mask >> i) & 1;
        double e = energy(q, a);
        if (first || e < exact_best) {
            exact_best = e;
            first = false;
        }
        evaluated.emplace_back(std::move(a), e);
    }
    for (auto& [a, e] : evaluated)
        if (e == exact_best) out.samples.add(std::move(a), e);
    return out;
}

SamplerOutcome simulated_anneal(const QuboMatrix& q, const SamplerParams& params) {
    if (q.size() == 0) throw ParameterError("cannot anneal an empty problem");
    if (params.num_reads == 0) throw ParameterError("num_reads must be at least 1");
    if (params.num_sweeps == 0) throw ParameterError("num_sweeps must be at least 1");

    double beta_hot = params.beta_hot;
    double beta_cold = params.beta_cold;
    if (beta_hot <= 0.0 || beta_cold <= 0.0) {
        double scale = max_abs_coeff(q);
        if (scale == 0.0) scale = 1.0;
        if (beta_hot <= 0.0) beta_hot = 1.0 / scale;
        if (beta_cold <= 0.0) beta_cold = 50.0 / scale;
    }
    if (!(beta_hot < beta_cold))
        throw ParameterError("beta_hot must be below beta_cold");

    const std::size_t n = q.size();
    const double beta_ratio = beta_cold / beta_hot;
    const std::uint64_t ramp = params.num_sweeps > 1 ? params.num_sweeps - 1 : 1;

    SamplerOutcome out;
    IncrementalEnergy tracker(q);
    for (std::uint64_t read = 0; read < params.num_reads; ++read) {
        SplitMix64 rng(derive_seed(params.seed, read));
        Assignment x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = rng.next_u64() & 1;
        tracker.reset(x);

        Assignment best_x = tracker.assignment();
        double best_e = tracker.current_energy();
        for (std::uint64_t sweep = 0; sweep < params.num_sweeps; ++sweep) {
            double beta = beta_hot * std::pow(beta_ratio, static_cast<double>(sweep) /
                                                              static_cast<double>(ramp));
            for (std::size_t i = 0; i < n; ++i) {
                double delta = tracker.flip_delta(i);
                if (delta <= 0.0 || rng.next_double() < std::exp(-beta * delta)) {
                    tracker.flip(i);
                    if (tracker.current_energy() < best_e) {
                        best_e = tracker.current_energy();
                        best_x = tracker.assignment();
                    }
                }
            }
        }
        double exact = energy(q, best_x);
        out.samples.add(std::move(best_x), exact);
    }
    return out;
}

SamplerOutcome sampler_dispatch(SamplerKind kind, const QuboMatrix& q,
                                const SamplerParams& params) {
    auto start = std::chrono::steady_clock::now();
    SamplerOutcome out;
    switch (kind) {
        case SamplerKind::exhaustive:
            out = exhaustive_solve(q);
            break;
        case SamplerKind::sa:
            out = simulated_anneal(q, params);
            break;
        default:
            throw ParameterError("unknown sampler kind");
    }
    out.sampler_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.calls = 1;
    return out;
}

}  // namespace qsplit
