#include <cmath>
#include <vector>

#include "doctest.h"
#include "qsplit/samplers.hpp"
#include "qsplit/svm.hpp"

using namespace qsplit;

namespace {

// dual objective computed straight from its definition, as the independent
// reference for the QUBO encoding
double dual_objective(const Dataset& data, const KernelSpec& kernel, double lambda,
                      const std::vector<std::uint64_t>& alphas) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.size(); ++j) {
            double k = kernel_eval(kernel, data.points[i], data.points[j]);
            double c = data.labels[i] * data.labels[j] * (0.5 * k + lambda);
            total += c * static_cast<double>(alphas[i]) * static_cast<double>(alphas[j]);
        }
        total -= static_cast<double>(alphas[i]);
    }
    return total;
}

Dataset two_points(double x0, double x1, int y0, int y1) {
    Dataset data;
    data.points = {{x0}, {x1}};
    data.labels = {y0, y1};
    return data;
}

}  // namespace

TEST_CASE("kernel_eval computes linear and rbf kernels") {
    KernelSpec linear;
    CHECK(kernel_eval(linear, {1, 0}, {1, 0}) == 1.0);
    CHECK(kernel_eval(linear, {1, 2}, {3, -1}) == 1.0);

    KernelSpec rbf;
    rbf.kind = KernelSpec::Kind::rbf;
    rbf.gamma = 1.0;
    CHECK(kernel_eval(rbf, {0.5, -2}, {0.5, -2}) == 1.0);
    CHECK(kernel_eval(rbf, {0}, {1}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(kernel_eval(rbf, {0}, {1}) == kernel_eval(rbf, {1}, {0}));

    CHECK_THROWS_AS(kernel_eval(linear, {1, 0}, {1}), DimensionError);
}

TEST_CASE("build_svm_qubo matches the dual objective symbolically") {
    Dataset data = two_points(1.0, -1.0, 1, -1);
    KernelSpec linear;
    SvmQubo built = build_svm_qubo(data, linear, 1, 1.0);
    CHECK(built.q.size() == 2);
    // c = [[1.5, -0.5], [-0.5, 1.5]] gives F(1,1) = 2 - 2 = 0
    CHECK(energy(built.q, {1, 1}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(energy(built.q, {0, 0}) == 0.0);

    SvmQubo wide = build_svm_qubo(data, linear, 2, 1.0);
    CHECK(wide.q.size() == 4);
    for (std::size_t bits = 0; bits < 16; ++bits) {
        Assignment x(4);
        for (std::size_t i = 0; i < 4; ++i) x[i] = (bits >> i) & 1;
        std::vector<std::uint64_t> alphas = decode_integers(wide.encoding.map, x);
        double want = dual_objective(data, linear, 1.0, alphas);
        CHECK(energy(wide.q, x) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("QUBO equals the dual objective for every encoding tried") {
    std::vector<Dataset> datasets;
    datasets.push_back(two_points(0.8, -0.6, 1, -1));
    {
        Dataset three;
        three.points = {{0.9, 0.1}, {-0.7, 0.4}, {0.2, -0.5}};
        three.labels = {1, -1, 1};
        datasets.push_back(three);
    }
    KernelSpec linear;
    KernelSpec rbf;
    rbf.kind = KernelSpec::Kind::rbf;
    rbf.gamma = 0.7;

    for (const Dataset& data : datasets) {
        for (const KernelSpec& kernel : {linear, rbf}) {
            for (std::size_t bits = 1; bits <= 2; ++bits) {
                SvmQubo built = build_svm_qubo(data, kernel, bits, 2.5);
                const std::size_t nb = data.size() * bits;
                for (std::size_t mask = 0; mask < (std::size_t{1} << nb); ++mask) {
                    Assignment x(nb);
                    for (std::size_t i = 0; i < nb; ++i) x[i] = (mask >> i) & 1;
                    double want = dual_objective(data, kernel, 2.5,
                                                 decode_integers(built.encoding.map, x));
                    CHECK(energy(built.q, x) == doctest::Approx(want).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("build_svm_qubo validates data and defaults lambda") {
    Dataset one_class;
    one_class.points = {{1.0}, {2.0}};
    one_class.labels = {1, 1};
    KernelSpec linear;
    CHECK_THROWS_AS(build_svm_qubo(one_class, linear, 1, 1.0), DataError);

    Dataset single;
    single.points = {{1.0}};
    single.labels = {1};
    CHECK_THROWS_AS(build_svm_qubo(single, linear, 1, 1.0), DataError);

    // non-positive lambda selects 5 * max |K_ij|
    SvmQubo defaulted = build_svm_qubo(two_points(1.0, -1.0, 1, -1), linear, 1, 0.0);
    CHECK(defaulted.encoding.lambda == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("penalties push exhaustive minimizers onto the balance constraint") {
    Dataset data;
    data.points = {{0.9}, {0.7}, {-0.8}, {-0.6}};
    data.labels = {1, 1, -1, -1};
    KernelSpec linear;

    bool satisfied_from_here = false;
    for (double lambda : {1.0, 10.0, 100.0}) {
        SvmQubo built = build_svm_qubo(data, linear, 1, lambda);
        SampleSet minima = exhaustive_solve(built.q).samples;
        bool all_balanced = true;
        for (const Sample& s : minima.samples()) {
            std::vector<std::uint64_t> alphas = decode_integers(built.encoding.map, s.assignment);
            long balance = 0;
            for (std::size_t i = 0; i < data.size(); ++i)
                balance += data.labels[i] * static_cast<long>(alphas[i]);
            if (balance != 0) all_balanced = false;
        }
        if (satisfied_from_here) CHECK(all_balanced);
        satisfied_from_here = satisfied_from_here || all_balanced;
    }
    CHECK(satisfied_from_here);
}

TEST_CASE("compute_bias follows the support chain") {
    KernelSpec linear;
    Dataset sym = two_points(1.0, -1.0, 1, -1);
    CHECK(compute_bias({0, 0}, sym, linear, 1) == 0.0);
    CHECK(compute_bias({1, 1}, sym, linear, 1) == doctest::Approx(0.0).epsilon(1e-12));

    // translating both points by c moves the boundary to x = c, so the bias
    // becomes -2c for this two-point configuration
    const double c = 0.3;
    Dataset shifted = two_points(1.0 + c, -1.0 + c, 1, -1);
    CHECK(compute_bias({1, 1}, shifted, linear, 1) ==
          doctest::Approx(-2.0 * c).epsilon(1e-9));

    // interior support vectors take priority when they exist
    Dataset mixed = two_points(1.0, -1.0, 1, -1);
    double interior_only = compute_bias({1, 3}, mixed, linear, 2);
    double expected = -1.0 - (1.0 * 1.0 * -1.0 + 3.0 * -1.0 * 1.0);  // i = 1 alone
    CHECK(interior_only == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("train on a separable dataset reaches F1 1.0 with the oracle") {
    Dataset data = synthetic_axis_dataset(8, 0.5, 0.0, 5);
    KernelSpec linear;
    SvmSolver solver;
    solver.method = SvmSolver::Method::exhaustive;
    EnsembleModel model = train(data, linear, 2, 5.0, solver);
    REQUIRE(!model.members.empty());
    CHECK(model.members.size() <= 3);

    std::vector<int> predictions;
    for (const auto& p : data.points) predictions.push_back(predict(model, p));
    CHECK(f1_score(predictions, data.labels) == 1.0);

    CHECK(train(data, linear, 2, 5.0, solver) == model);  // deterministic replay
}

TEST_CASE("single-member ensembles behave like their member") {
    Dataset data = synthetic_axis_dataset(8, 0.5, 0.0, 6);
    KernelSpec linear;
    SvmSolver solver;
    solver.method = SvmSolver::Method::exhaustive;
    EnsembleModel one = train(data, linear, 2, 5.0, solver, 1);
    REQUIRE(one.members.size() == 1);

    EnsembleModel three;
    three.members = {one.members[0], one.members[0], one.members[0]};
    for (double x = -1.0; x <= 1.0; x += 0.25) {
        std::vector<double> point{x, 0.0};
        double raw = decision_value(one.members[0], point);
        int want = raw >= 0.0 ? 1 : -1;  // sign(0) = +1
        CHECK(predict(one, point) == want);
        CHECK(predict(three, point) == want);
    }
}

TEST_CASE("predict applies sign(0) = +1 and checks dimensions") {
    SvmModel flat;
    flat.alphas = {0, 0};
    flat.bias = 0.0;
    flat.bits = 1;
    flat.data = two_points(1.0, -1.0, 1, -1);
    EnsembleModel model;
    model.members = {flat};
    CHECK(decision_value(flat, {0.4}) == 0.0);
    CHECK(predict(model, {0.4}) == 1);
    CHECK_THROWS_AS(predict(model, {0.4, 0.2}), DimensionError);
}

TEST_CASE("negating labels and coordinates mirrors the trained model") {
    Dataset data = synthetic_axis_dataset(6, 0.4, 0.0, 11);
    Dataset mirrored = data;
    for (auto& p : mirrored.points) p[0] = -p[0];
    for (auto& y : mirrored.labels) y = -y;

    KernelSpec linear;
    SvmSolver solver;
    solver.method = SvmSolver::Method::exhaustive;
    EnsembleModel original = train(data, linear, 2, 5.0, solver);
    EnsembleModel negated = train(mirrored, linear, 2, 5.0, solver);

    for (double x : {-0.9, -0.6, -0.2, 0.3, 0.7, 1.0}) {
        std::vector<double> point{x, 0.0};
        std::vector<double> flipped{-x, 0.0};
        CHECK(predict(negated, flipped) == -predict(original, point));
    }
}

TEST_CASE("f1_score implements the positive-class formula") {
    CHECK(f1_score({1, -1, 1, -1}, {1, -1, 1, -1}) == 1.0);
    CHECK(f1_score({1, 1, 1, 1}, {1, 1, -1, -1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f1_score({-1, -1}, {-1, -1}) == 0.0);  // no positives anywhere
    CHECK_THROWS_AS(f1_score({1}, {1, -1}), DimensionError);
    CHECK_THROWS_AS(f1_score({2, 1}, {1, 1}), DataError);
}

TEST_CASE("synthetic datasets are balanced, on-axis and seeded") {
    Dataset data = synthetic_axis_dataset(8, 0.5, 0.0, 3);
    REQUIRE(data.size() == 8);
    CHECK(data.dim() == 2);
    int positives = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(data.points[i][1] == 0.0);
        CHECK(std::abs(data.points[i][0]) >= 0.5);
        CHECK(std::abs(data.points[i][0]) <= 1.0);
        if (data.labels[i] == 1) ++positives;
        // noise-free labels match the sign of the x-coordinate
        CHECK(data.labels[i] == (data.points[i][0] > 0 ? 1 : -1));
    }
    CHECK(positives == 4);
    CHECK(synthetic_axis_dataset(8, 0.5, 0.0, 3) == data);

    Dataset noisy = synthetic_axis_dataset(10, 0.3, 0.2, 3);
    int flipped = 0;
    for (std::size_t i = 0; i < 10; ++i)
        if (noisy.labels[i] != (noisy.points[i][0] > 0 ? 1 : -1)) ++flipped;
    CHECK(flipped == 2);  // floor(0.2 * 10)

    CHECK_THROWS_AS(synthetic_axis_dataset(7, 0.5, 0.0, 1), ParameterError);
    CHECK_THROWS_AS(synthetic_axis_dataset(8, 0.5, 0.6, 1), ParameterError);
    CHECK_THROWS_AS(synthetic_axis_dataset(8, 1.5, 0.0, 1), ParameterError);
}

TEST_CASE("dataset CSV round-trips") {
    Dataset data = synthetic_axis_dataset(6, 0.4, 0.0, 9);
    CHECK(parse_dataset_csv(serialize_dataset_csv(data)) == data);

    Dataset parsed = parse_dataset_csv("label,f1\n# comment\n+1,0.5\n-1,-0.25\n");
    REQUIRE(parsed.size() == 2);
    CHECK(parsed.labels == std::vector<int>{1, -1});
    CHECK(parsed.points[1][0] == -0.25);

    CHECK_THROWS_AS(parse_dataset_csv("1,0.5\n2,0.25\n"), ParseError);
    CHECK_THROWS_AS(parse_dataset_csv("1,0.5\n-1,0.25,0.75\n"), ParseError);
    CHECK_THROWS_AS(parse_dataset_csv("1\n"), ParseError);
}

TEST_CASE("ensemble JSON round-trips") {
    Dataset data = synthetic_axis_dataset(6, 0.4, 0.0, 13);
    KernelSpec rbf;
    rbf.kind = KernelSpec::Kind::rbf;
    rbf.gamma = 0.8;
    SvmSolver solver;
    solver.method = SvmSolver::Method::exhaustive;
    EnsembleModel model = train(data, rbf, 2, 5.0, solver);
    CHECK(parse_ensemble_json(serialize_ensemble_json(model)) == model);

    CHECK_THROWS_AS(parse_ensemble_json("not json"), ParseError);
    CHECK_THROWS_AS(parse_ensemble_json("{}"), ParseError);
}
