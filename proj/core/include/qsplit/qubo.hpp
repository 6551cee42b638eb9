#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qsplit/errors.hpp"

namespace qsplit {

/// Binary assignment, one 0/1 value per variable.
using Assignment = std::vector<std::uint8_t>;

/// Upper-triangular quadratic form over binary variables plus a constant
/// offset. Diagonal entries act linearly (x*x == x for binary x).
///
/// Stored entries always satisfy i <= j < n, are finite and never exactly
/// zero; setting an entry to zero removes it. Iteration over entries() is in
/// (i, j) ascending order, which fixes the energy accumulation order and the
/// serialization order.
class QuboMatrix {
  public:
    using Key = std::pair<std::size_t, std::size_t>;
    using EntryMap = std::map<Key, double>;

    QuboMatrix() = default;
    explicit QuboMatrix(std::size_t n, double offset = 0.0);

    std::size_t size() const { return n_; }
    double offset() const { return offset_; }
    void set_offset(double offset);

    /// Replace entry (i, j); requires i <= j < n. Zero erases.
    void set(std::size_t i, std::size_t j, double coeff);
    /// Accumulate into entry (i, j); exact cancellation to zero erases.
    void add(std::size_t i, std::size_t j, double coeff);

    /// Coefficient at (i, j), 0 when absent. Requires i <= j < n.
    double coeff(std::size_t i, std::size_t j) const;

    const EntryMap& entries() const { return entries_; }
    std::size_t entry_count() const { return entries_.size(); }

    bool operator==(const QuboMatrix& other) const = default;

  private:
    void check_key(std::size_t i, std::size_t j) const;

    std::size_t n_ = 0;
    double offset_ = 0.0;
    EntryMap entries_;
};

/// One equality constraint: sum(coefficients[i] * x_i) == rhs.
struct LinearConstraint {
    std::map<std::size_t, double> coefficients;
    double rhs = 0.0;
};

/// Integer-to-binary encoding: one group of (binary index, weight) pairs per
/// logical integer variable, weights ascending powers of two.
struct VariableMap {
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> groups;

    std::size_t total_bits() const;
};

/// An assignment with its energy and an occurrence count.
struct Sample {
    Assignment assignment;
    double energy = 0.0;
    std::uint64_t occurrences = 1;

    bool operator==(const Sample& other) const = default;
};

/// Energy-sorted, deduplicated sample collection. Duplicate assignments are
/// merged with occurrence counts summed. Order is ascending energy with
/// lexicographic assignment tie-break, so the contents are reproducible
/// bit-for-bit across runs.
class SampleSet {
  public:
    SampleSet() = default;

    /// Merge one sample in, keeping the set sorted and deduplicated.
    void add(Assignment assignment, double energy, std::uint64_t occurrences = 1);
    void add(const Sample& s) { add(s.assignment, s.energy, s.occurrences); }

    /// Keep only the k lowest-energy samples.
    void truncate(std::size_t k);

    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const Sample& best() const;

    bool operator==(const SampleSet& other) const = default;

  private:
    std::vector<Sample> samples_;
};

enum class Sense { minimize, maximize };

/// Result of conditioning a QUBO on a partial assignment.
struct FixedQubo {
    QuboMatrix sub;
    std::vector<std::size_t> free_indices;  // free_indices[new] = old
};

/// Quadratic-form value of x under q. Pure; throws DimensionError on length
/// mismatch.
double energy(const QuboMatrix& q, const Assignment& x);

/// Largest absolute coefficient, 0 for an empty matrix.
double max_abs_coeff(const QuboMatrix& q);

/// Fold an arbitrary square coefficient layout into upper-triangular form:
/// Q'_ij = Q_ij + Q_ji for i < j. Energy-preserving for every assignment.
QuboMatrix from_symmetric(std::size_t n, const std::map<QuboMatrix::Key, double>& entries);

/// Add lambda * (a.x - rhs)^2 for each constraint, expanded exactly into
/// quadratic, linear and constant terms.
QuboMatrix compose_penalty(const QuboMatrix& objective,
                           const std::vector<LinearConstraint>& constraints, double lambda);

/// Binary encoding of num_vars integer variables over {0, .., 2^bits - 1},
/// flattened variable-major with ascending weights.
VariableMap encode_integers(std::size_t num_vars, std::size_t bits);

/// Weighted sums per group; inverse of the encoding.
std::vector<std::uint64_t> decode_integers(const VariableMap& map, const Assignment& x);

/// Negate everything when the input sense is maximize; identity otherwise.
QuboMatrix to_minimization(const QuboMatrix& objective, Sense sense);

/// Condition q on a partial assignment. Couplings to a variable fixed at 1
/// fold into the remaining diagonal, fixed-fixed terms fold into the offset,
/// so energy(q, merge(fixed, x_free)) == energy(sub, x_free) exactly.
FixedQubo fix_variables(const QuboMatrix& q, const std::map<std::size_t, std::uint8_t>& fixed);

/// Entries with both endpoints in keep, densely reindexed in order; offset
/// drops to zero.
QuboMatrix extract_submatrix(const QuboMatrix& q, const std::vector<std::size_t>& keep);

/// Fully dense random instance: all n(n+1)/2 upper-triangular coefficients
/// drawn uniform on [-1, 1], deterministic per seed.
QuboMatrix random_clique_qubo(std::size_t n, std::uint64_t seed);

/// Solution quality mapped to [0, 1]: 0 = best-known, 1 = baseline. Clamped;
/// degenerate e_baseline == e_best returns 0.
double normalized_gap(double e, double e_best, double e_baseline);

}  // namespace qsplit
