#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsplit/qsplit.hpp"
#include "qsplit/qubo.hpp"
#include "qsplit/samplers.hpp"

namespace qsplit {

/// Labeled feature vectors; labels restricted to -1 / +1.
struct Dataset {
    std::vector<std::vector<double>> points;
    std::vector<int> labels;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }

    bool operator==(const Dataset& other) const = default;
};

struct KernelSpec {
    enum class Kind { linear, rbf };
    Kind kind = Kind::linear;
    double gamma = 1.0;  // rbf only

    bool operator==(const KernelSpec& other) const = default;
};

/// Everything needed to map solver bits back to dual coefficients.
struct SvmQuboEncoding {
    std::size_t bits = 3;
    double lambda = 1.0;
    VariableMap map;
    KernelSpec kernel;
    Dataset data;
};

struct SvmQubo {
    QuboMatrix q;
    SvmQuboEncoding encoding;
};

/// One decoded classifier: integer dual coefficients in [0, 2^bits - 1],
/// bias, kernel and the training data it references.
struct SvmModel {
    std::vector<std::uint64_t> alphas;
    double bias = 0.0;
    std::size_t bits = 1;
    KernelSpec kernel;
    Dataset data;

    bool operator==(const SvmModel& other) const = default;
};

/// Classifiers decoded from distinct optimal assignments; prediction is by
/// majority vote.
struct EnsembleModel {
    std::vector<SvmModel> members;

    bool operator==(const EnsembleModel& other) const = default;
};

/// Solver selection for training, mirroring the CLI's --method choices.
struct SvmSolver {
    enum class Method { exhaustive, sa, qsplit };
    Method method = Method::sa;
    SamplerParams params;
    std::size_t cut_dim = 32;
    std::size_t k = 5;
    std::uint64_t seed = 0;
};

double kernel_eval(const KernelSpec& spec, const std::vector<double>& x,
                   const std::vector<double>& z);

/// Integer-restricted soft-margin dual as a QUBO. With
/// c_ij = y_i y_j (K_ij / 2 + lambda), the dual objective
/// F(alpha) = sum_ij c_ij alpha_i alpha_j - sum_i alpha_i expands over the
/// binary encoding to Q_uu = c_ii 4^k - 2^k and Q_uv = 2 c_ij 2^(k+l); the
/// lambda term is the squared penalty of the balance constraint
/// sum_i y_i alpha_i = 0. energy(Q, bits) == F(decode(bits)) exactly.
/// lambda <= 0 selects the default 5 * max|K_ij|.
SvmQubo build_svm_qubo(const Dataset& data, const KernelSpec& kernel, std::size_t bits,
                       double lambda);

/// Mean of y_i - sum_j alpha_j y_j K_ij over the support set: interior
/// support vectors when any exist, otherwise all positive alphas, otherwise
/// bias 0.
double compute_bias(const std::vector<std::uint64_t>& alphas, const Dataset& data,
                    const KernelSpec& kernel, std::size_t bits);

/// Build the QUBO, solve it with the chosen backend, and decode the top
/// distinct assignments (at most ensemble_size) into an ensemble.
EnsembleModel train(const Dataset& data, const KernelSpec& kernel, std::size_t bits,
                    double lambda, const SvmSolver& solver, std::size_t ensemble_size = 3);

/// Raw decision value of one member at x (before the sign).
double decision_value(const SvmModel& model, const std::vector<double>& x);

/// Majority vote across members, sign(0) = +1; vote ties go to the side with
/// the larger summed absolute decision value, then to +1.
int predict(const EnsembleModel& model, const std::vector<double>& x);

/// F1 of the positive class; 0 when precision + recall is 0.
double f1_score(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Balanced two-class points on the first axis: n/2 positive with
/// x in [margin, 1], n/2 negative mirrored, second coordinate 0; then
/// floor(noise_flip * n) labels flipped at seeded random.
Dataset synthetic_axis_dataset(std::size_t n, double margin, double noise_flip,
                               std::uint64_t seed);

/// CSV rows `label,f1,...,fd`; labels +-1, optional header line tolerated on
/// input, comments starting with '#' skipped.
std::string serialize_dataset_csv(const Dataset& data);
Dataset parse_dataset_csv(std::string_view text);

/// Ensemble model file: JSON with bits, kernel, gamma, training data and one
/// {alphas, bias} record per member. parse(serialize(m)) == m.
std::string serialize_ensemble_json(const EnsembleModel& model);
EnsembleModel parse_ensemble_json(std::string_view text);

}  // namespace qsplit
