#include "qsplit/svm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "json.hpp"
#include "qsplit/qubo_io.hpp"
#include "qsplit/seeds.hpp"

namespace qsplit {

namespace {

void validate_dataset(const Dataset& data) {
    if (data.points.size() != data.labels.size())
        throw DataError("points and labels differ in length");
    if (!data.points.empty()) {
        std::size_t d = data.points.front().size();
        if (d == 0) throw DataError("feature dimension must be at least 1");
        for (const auto& p : data.points)
            if (p.size() != d) throw DataError("feature vectors differ in dimension");
    }
    for (int label : data.labels)
        if (label != 1 && label != -1) throw DataError("labels must be +1 or -1");
}

void validate_kernel(const KernelSpec& spec) {
    if (spec.kind == KernelSpec::Kind::rbf && !(spec.gamma > 0.0))
        throw ParameterError("rbf gamma must be positive");
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const std::vector<double>& x,
                   const std::vector<double>& z) {
    if (x.size() != z.size()) throw DimensionError("kernel arguments differ in dimension");
    validate_kernel(spec);
    if (spec.kind == KernelSpec::Kind::linear) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
        return dot;
    }
    double dist2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - z[i];
        dist2 += d * d;
    }
    return std::exp(-spec.gamma * dist2);
}

SvmQubo build_svm_qubo(const Dataset& data, const KernelSpec& kernel, std::size_t bits,
                       double lambda) {
    validate_dataset(data);
    validate_kernel(kernel);
    if (data.size() < 2) throw DataError("need at least two training examples");
    bool has_pos = false, has_neg = false;
    for (int label : data.labels) (label > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw DataError("training data must contain both classes");
    if (bits == 0) throw ParameterError("need at least one bit per dual variable");

    const std::size_t n = data.size();
    std::vector<double> gram(n * n);
    double max_abs_k = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double k_ij = kernel_eval(kernel, data.points[i], data.points[j]);
            gram[i * n + j] = gram[j * n + i] = k_ij;
            max_abs_k = std::max(max_abs_k, std::abs(k_ij));
        }
    }
    if (lambda <= 0.0) lambda = 5.0 * (max_abs_k > 0.0 ? max_abs_k : 1.0);

    auto c = [&](std::size_t i, std::size_t j) {
        return data.labels[i] * data.labels[j] * (0.5 * gram[i * n + j] + lambda);
    };

    const std::size_t total = n * bits;
    QuboMatrix q(total);
    for (std::size_t u = 0; u < total; ++u) {
        const std::size_t i = u / bits, k = u % bits;
        const double wk = static_cast<double>(std::uint64_t{1} << k);
        q.set(u, u, c(i, i) * wk * wk - wk);
        for (std::size_t v = u + 1; v < total; ++v) {
            const std::size_t j = v / bits, l = v % bits;
            const double wl = static_cast<double>(std::uint64_t{1} << l);
            q.set(u, v, 2.0 * c(i, j) * wk * wl);
        }
    }

    SvmQubo out;
    out.q = std::move(q);
    out.encoding = SvmQuboEncoding{bits, lambda, encode_integers(n, bits), kernel, data};
    return out;
}

double compute_bias(const std::vector<std::uint64_t>& alphas, const Dataset& data,
                    const KernelSpec& kernel, std::size_t bits) {
    const std::uint64_t ceiling = (std::uint64_t{1} << bits) - 1;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (alphas[i] > 0 && alphas[i] < ceiling) support.push_back(i);
    if (support.empty())
        for (std::size_t i = 0; i < alphas.size(); ++i)
            if (alphas[i] > 0) support.push_back(i);
    if (support.empty()) return 0.0;

    double total = 0.0;
    for (std::size_t i : support) {
        double margin = 0.0;
        for (std::size_t j = 0; j < alphas.size(); ++j)
            margin += static_cast<double>(alphas[j]) * data.labels[j] *
                      kernel_eval(kernel, data.points[j], data.points[i]);
        total += data.labels[i] - margin;
    }
    return total / static_cast<double>(support.size());
}

EnsembleModel train(const Dataset& data, const KernelSpec& kernel, std::size_t bits,
                    double lambda, const SvmSolver& solver, std::size_t ensemble_size) {
    if (ensemble_size == 0) throw ParameterError("ensemble size must be at least 1");
    SvmQubo built = build_svm_qubo(data, kernel, bits, lambda);

    SampleSet samples;
    switch (solver.method) {
        case SvmSolver::Method::exhaustive:
            samples = exhaustive_solve(built.q).samples;
            break;
        case SvmSolver::Method::sa: {
            SamplerParams params = solver.params;
            params.seed = solver.seed;
            samples = simulated_anneal(built.q, params).samples;
            break;
        }
        case SvmSolver::Method::qsplit: {
            QSplitConfig cfg;
            cfg.cut_dim = solver.cut_dim;
            cfg.k = solver.k;
            cfg.sampler = SamplerKind::sa;
            cfg.params = solver.params;
            cfg.seed = solver.seed;
            samples = qsplit_solve(built.q, cfg).best;
            break;
        }
    }

    EnsembleModel ensemble;
    const std::size_t members = std::min(ensemble_size, samples.size());
    for (std::size_t m = 0; m < members; ++m) {
        SvmModel model;
        model.alphas = decode_integers(built.encoding.map, samples.samples()[m].assignment);
        model.bits = bits;
        model.kernel = kernel;
        model.data = data;
        model.bias = compute_bias(model.alphas, data, kernel, bits);
        ensemble.members.push_back(std::move(model));
    }
    return ensemble;
}

double decision_value(const SvmModel& model, const std::vector<double>& x) {
    if (x.size() != model.data.dim())
        throw DimensionError("input dimension does not match training data");
    double value = model.bias;
    for (std::size_t j = 0; j < model.alphas.size(); ++j)
        value += static_cast<double>(model.alphas[j]) * model.data.labels[j] *
                 kernel_eval(model.kernel, model.data.points[j], x);
    return value;
}

int predict(const EnsembleModel& model, const std::vector<double>& x) {
    if (model.members.empty()) throw ParameterError("ensemble has no members");
    int votes_pos = 0, votes_neg = 0;
    double weight_pos = 0.0, weight_neg = 0.0;
    for (const SvmModel& member : model.members) {
        double value = decision_value(member, x);
        if (value >= 0.0) {  // sign(0) = +1
            ++votes_pos;
            weight_pos += std::abs(value);
        } else {
            ++votes_neg;
            weight_neg += std::abs(value);
        }
    }
    if (votes_pos != votes_neg) return votes_pos > votes_neg ? 1 : -1;
    if (weight_pos != weight_neg) return weight_pos > weight_neg ? 1 : -1;
    return 1;
}

double f1_score(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw DimensionError("prediction and truth lengths differ");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] != 1 && predicted[i] != -1)
            throw DataError("predictions must be +1 or -1");
        if (truth[i] != 1 && truth[i] != -1) throw DataError("labels must be +1 or -1");
        if (predicted[i] == 1 && truth[i] == 1) ++tp;
        if (predicted[i] == 1 && truth[i] == -1) ++fp;
        if (predicted[i] == -1 && truth[i] == 1) ++fn;
    }
    double precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    double recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

Dataset synthetic_axis_dataset(std::size_t n, double margin, double noise_flip,
                               std::uint64_t seed) {
    if (n == 0 || n % 2 != 0) throw ParameterError("dataset size must be even and positive");
    if (!(margin > 0.0 && margin < 1.0)) throw ParameterError("margin must lie in (0, 1)");
    if (!(noise_flip >= 0.0 && noise_flip < 0.5))
        throw ParameterError("noise_flip must lie in [0, 0.5)");

    SplitMix64 rng(seed);
    Dataset data;
    data.points.reserve(n);
    data.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double magnitude = margin + rng.next_double() * (1.0 - margin);
        bool positive = i < n / 2;
        data.points.push_back({positive ? magnitude : -magnitude, 0.0});
        data.labels.push_back(positive ? 1 : -1);
    }

    // partial Fisher-Yates picks the flip set without replacement
    std::size_t flips = static_cast<std::size_t>(noise_flip * static_cast<double>(n));
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    for (std::size_t f = 0; f < flips; ++f) {
        std::size_t pick = f + static_cast<std::size_t>(rng.next_index(n - f));
        std::swap(indices[f], indices[pick]);
        data.labels[indices[f]] = -data.labels[indices[f]];
    }
    return data;
}

std::string serialize_dataset_csv(const Dataset& data) {
    validate_dataset(data);
    std::string out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        out += data.labels[i] == 1 ? "1" : "-1";
        for (double f : data.points[i]) {
            out += ',';
            out += format_double(f);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split_csv_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool parse_csv_number(std::string_view field, double& value) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
        field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
        field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text) {
    Dataset data;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool first_data_line = true;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_fields(line);
        double label = 0.0;
        if (!parse_csv_number(fields[0], label)) {
            if (first_data_line) {  // optional header row
                first_data_line = false;
                continue;
            }
            throw ParseError("malformed label '" + std::string(fields[0]) + "'", line_no);
        }
        first_data_line = false;
        if (label != 1.0 && label != -1.0)
            throw ParseError("label must be +1 or -1", line_no);
        if (fields.size() < 2) throw ParseError("row has no features", line_no);
        std::vector<double> point;
        point.reserve(fields.size() - 1);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            double value = 0.0;
            if (!parse_csv_number(fields[f], value) || !std::isfinite(value))
                throw ParseError("malformed feature '" + std::string(fields[f]) + "'", line_no);
            point.push_back(value);
        }
        if (!data.points.empty() && point.size() != data.dim())
            throw ParseError("row dimension differs from previous rows", line_no);
        data.points.push_back(std::move(point));
        data.labels.push_back(label == 1.0 ? 1 : -1);
    }
    return data;
}

std::string serialize_ensemble_json(const EnsembleModel& model) {
    if (model.members.empty()) throw ParameterError("ensemble has no members");
    const SvmModel& head = model.members.front();
    nlohmann::json j;
    j["bits"] = head.bits;
    j["kernel"] = head.kernel.kind == KernelSpec::Kind::linear ? "linear" : "rbf";
    j["gamma"] = head.kernel.gamma;
    j["labels"] = head.data.labels;
    j["points"] = head.data.points;
    j["members"] = nlohmann::json::array();
    for (const SvmModel& member : model.members) {
        j["members"].push_back({{"alphas", member.alphas}, {"bias", member.bias}});
    }
    return j.dump(2) + "\n";
}

EnsembleModel parse_ensemble_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid model JSON: ") + e.what(), 0);
    }
    try {
        Dataset data;
        data.labels = j.at("labels").get<std::vector<int>>();
        data.points = j.at("points").get<std::vector<std::vector<double>>>();
        validate_dataset(data);
        KernelSpec kernel;
        std::string kind = j.at("kernel").get<std::string>();
        if (kind == "linear")
            kernel.kind = KernelSpec::Kind::linear;
        else if (kind == "rbf")
            kernel.kind = KernelSpec::Kind::rbf;
        else
            throw ParseError("unknown kernel '" + kind + "'", 0);
        kernel.gamma = j.at("gamma").get<double>();
        std::size_t bits = j.at("bits").get<std::size_t>();

        EnsembleModel model;
        for (const auto& member_json : j.at("members")) {
            SvmModel member;
            member.alphas = member_json.at("alphas").get<std::vector<std::uint64_t>>();
            if (member.alphas.size() != data.size())
                throw ParseError("alphas length does not match training data", 0);
            member.bias = member_json.at("bias").get<double>();
            member.bits = bits;
            member.kernel = kernel;
            member.data = data;
            model.members.push_back(std::move(member));
        }
        if (model.members.empty()) throw ParseError("model has no members", 0);
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid model JSON: ") + e.what(), 0);
    }
}

}  // namespace qsplit
