#include "qsplit/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsplit/seeds.hpp"

namespace qsplit {

QuboMatrix::QuboMatrix(std::size_t n, double offset) : n_(n) { set_offset(offset); }

void QuboMatrix::set_offset(double offset) {
    if (!std::isfinite(offset)) throw ParameterError("offset must be finite");
    offset_ = offset;
}

void QuboMatrix::check_key(std::size_t i, std::size_t j) const {
    if (i > j || j >= n_)
        throw DimensionError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") out of range for n=" + std::to_string(n_));
}

void QuboMatrix::set(std::size_t i, std::size_t j, double coeff) {
    check_key(i, j);
    if (!std::isfinite(coeff)) throw ParameterError("coefficient must be finite");
    if (coeff == 0.0)
        entries_.erase({i, j});
    else
        entries_[{i, j}] = coeff;
}

void QuboMatrix::add(std::size_t i, std::size_t j, double coeff) {
    check_key(i, j);
    if (!std::isfinite(coeff)) throw ParameterError("coefficient must be finite");
    auto it = entries_.find({i, j});
    double value = (it == entries_.end() ? 0.0 : it->second) + coeff;
    if (value == 0.0) {
        if (it != entries_.end()) entries_.erase(it);
    } else {
        entries_[{i, j}] = value;
    }
}

double QuboMatrix::coeff(std::size_t i, std::size_t j) const {
    check_key(i, j);
    auto it = entries_.find({i, j});
    return it == entries_.end() ? 0.0 : it->second;
}

std::size_t VariableMap::total_bits() const {
    std::size_t total = 0;
    for (const auto& group : groups) total += group.size();
    return total;
}

void SampleSet::add(Assignment assignment, double energy, std::uint64_t occurrences) {
    Sample s{std::move(assignment), energy, occurrences};
    auto cmp = [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.assignment < b.assignment;
    };
    auto it = std::lower_bound(samples_.begin(), samples_.end(), s, cmp);
    if (it != samples_.end() && it->assignment == s.assignment && it->energy == s.energy) {
        it->occurrences += occurrences;
        return;
    }
    samples_.insert(it, std::move(s));
}

void SampleSet::truncate(std::size_t k) {
    if (samples_.size() > k) samples_.resize(k);
}

const Sample& SampleSet::best() const {
    if (samples_.empty()) throw ParameterError("empty sample set has no best sample");
    return samples_.front();
}

double energy(const QuboMatrix& q, const Assignment& x) {
    if (x.size() != q.size())
        throw DimensionError("assignment length " + std::to_string(x.size()) +
                             " does not match n=" + std::to_string(q.size()));
    double total = q.offset();
    for (const auto& [key, coeff] : q.entries()) {
        if (x[key.first] && x[key.second]) total += coeff;
    }
    return total;
}

double max_abs_coeff(const QuboMatrix& q) {
    double best = 0.0;
    for (const auto& [key, coeff] : q.entries()) best = std::max(best, std::abs(coeff));
    return best;
}

QuboMatrix from_symmetric(std::size_t n, const std::map<QuboMatrix::Key, double>& entries) {
    QuboMatrix out(n);
    for (const auto& [key, coeff] : entries) {
        auto [i, j] = key;
        if (i >= n || j >= n)
            throw DimensionError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") out of range for n=" + std::to_string(n));
        out.add(std::min(i, j), std::max(i, j), coeff);
    }
    return out;
}

QuboMatrix compose_penalty(const QuboMatrix& objective,
                           const std::vector<LinearConstraint>& constraints, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("penalty lambda must be positive");
    QuboMatrix out = objective;
    for (const auto& c : constraints) {
        // lambda * (sum a_i x_i - rhs)^2 with x_i^2 == x_i:
        //   diagonal  += lambda * (a_i^2 - 2 rhs a_i)
        //   (i, j)    += lambda * 2 a_i a_j
        //   offset    += lambda * rhs^2
        for (auto it = c.coefficients.begin(); it != c.coefficients.end(); ++it) {
            auto [i, a_i] = *it;
            if (i >= out.size())
                throw DimensionError("constraint index " + std::to_string(i) +
                                     " out of range for n=" + std::to_string(out.size()));
            out.add(i, i, lambda * (a_i * a_i - 2.0 * c.rhs * a_i));
            for (auto jt = std::next(it); jt != c.coefficients.end(); ++jt) {
                auto [j, a_j] = *jt;
                if (j >= out.size())
                    throw DimensionError("constraint index " + std::to_string(j) +
                                         " out of range for n=" + std::to_string(out.size()));
                out.add(i, j, lambda * 2.0 * a_i * a_j);
            }
        }
        out.set_offset(out.offset() + lambda * c.rhs * c.rhs);
    }
    return out;
}

VariableMap encode_integers(std::size_t num_vars, std::size_t bits) {
    if (num_vars == 0) throw ParameterError("need at least one integer variable");
    if (bits == 0) throw ParameterError("need at least one bit per variable");
    VariableMap map;
    map.groups.resize(num_vars);
    for (std::size_t v = 0; v < num_vars; ++v) {
        map.groups[v].reserve(bits);
        for (std::size_t k = 0; k < bits; ++k)
            map.groups[v].emplace_back(v * bits + k, std::uint64_t{1} << k);
    }
    return map;
}

std::vector<std::uint64_t> decode_integers(const VariableMap& map, const Assignment& x) {
    if (x.size() != map.total_bits())
        throw DimensionError("assignment length " + std::to_string(x.size()) +
                             " does not match " + std::to_string(map.total_bits()) + " bits");
    std::vector<std::uint64_t> values;
    values.reserve(map.groups.size());
    for (const auto& group : map.groups) {
        std::uint64_t value = 0;
        for (const auto& [index, weight] : group)
            if (x[index]) value += weight;
        values.push_back(value);
    }
    return values;
}

QuboMatrix to_minimization(const QuboMatrix& objective, Sense sense) {
    if (sense == Sense::minimize) return objective;
    QuboMatrix out(objective.size(), -objective.offset());
    for (const auto& [key, coeff] : objective.entries()) out.set(key.first, key.second, -coeff);
    return out;
}

FixedQubo fix_variables(const QuboMatrix& q, const std::map<std::size_t, std::uint8_t>& fixed) {
    std::vector<std::size_t> remap(q.size(), SIZE_MAX);
    FixedQubo result;
    for (const auto& [index, bit] : fixed) {
        if (index >= q.size())
            throw DimensionError("fixed index " + std::to_string(index) +
                                 " out of range for n=" + std::to_string(q.size()));
        if (bit > 1) throw ParameterError("fixed value must be 0 or 1");
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!fixed.count(i)) {
            remap[i] = result.free_indices.size();
            result.free_indices.push_back(i);
        }
    }
    QuboMatrix sub(result.free_indices.size(), q.offset());
    for (const auto& [key, coeff] : q.entries()) {
        auto [i, j] = key;
        auto fi = fixed.find(i);
        auto fj = fixed.find(j);
        if (fi == fixed.end() && fj == fixed.end()) {
            sub.add(remap[i], remap[j], coeff);
        } else if (fi != fixed.end() && fj != fixed.end()) {
            // i == j gives the fixed diagonal, bit * bit == bit
            if (fi->second && fj->second) sub.set_offset(sub.offset() + coeff);
        } else {
            std::size_t free_i = (fi == fixed.end()) ? i : j;
            std::uint8_t bit = (fi == fixed.end()) ? fj->second : fi->second;
            if (bit) sub.add(remap[free_i], remap[free_i], coeff);
        }
    }
    result.sub = std::move(sub);
    return result;
}

QuboMatrix extract_submatrix(const QuboMatrix& q, const std::vector<std::size_t>& keep) {
    std::vector<std::size_t> remap(q.size(), SIZE_MAX);
    std::vector<std::size_t> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t new_index = 0; new_index < sorted.size(); ++new_index) {
        if (sorted[new_index] >= q.size())
            throw DimensionError("keep index " + std::to_string(sorted[new_index]) +
                                 " out of range for n=" + std::to_string(q.size()));
        remap[sorted[new_index]] = new_index;
    }
    QuboMatrix out(sorted.size());
    for (const auto& [key, coeff] : q.entries()) {
        auto [i, j] = key;
        if (remap[i] != SIZE_MAX && remap[j] != SIZE_MAX) out.set(remap[i], remap[j], coeff);
    }
    return out;
}

QuboMatrix random_clique_qubo(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ParameterError("clique instance needs at least one variable");
    SplitMix64 rng(seed);
    QuboMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double coeff = 2.0 * rng.next_double() - 1.0;
            while (coeff == 0.0) coeff = 2.0 * rng.next_double() - 1.0;
            q.set(i, j, coeff);
        }
    }
    return q;
}

double normalized_gap(double e, double e_best, double e_baseline) {
    if (e_baseline < e_best) throw ParameterError("baseline energy below best-known energy");
    if (e_baseline == e_best) return 0.0;
    return std::clamp((e - e_best) / (e_baseline - e_best), 0.0, 1.0);
}

}  // namespace qsplit
