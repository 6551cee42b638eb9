#include <cmath>

#include "doctest.h"
#include "qsplit/samplers.hpp"
#include "qsplit/seeds.hpp"

using namespace qsplit;

TEST_CASE("exhaustive solve returns every global minimizer") {
    QuboMatrix single(1);
    single.set(0, 0, -1.0);
    SamplerOutcome one = exhaustive_solve(single);
    REQUIRE(one.samples.size() == 1);
    CHECK(one.samples.best().assignment == Assignment{1});
    CHECK(one.samples.best().energy == -1.0);
    CHECK(one.calls == 1);
    CHECK(one.sampler_time >= 0.0);

    QuboMatrix tied(2);
    tied.set(0, 0, -1.0);
    tied.set(1, 1, -1.0);
    tied.set(0, 1, 3.0);
    SamplerOutcome two = exhaustive_solve(tied);
    REQUIRE(two.samples.size() == 2);
    CHECK(two.samples.samples()[0].assignment == Assignment{0, 1});
    CHECK(two.samples.samples()[1].assignment == Assignment{1, 0});
    CHECK(two.samples.samples()[0].energy == -1.0);
    CHECK(two.samples.samples()[1].energy == -1.0);

    SamplerOutcome all = exhaustive_solve(QuboMatrix(2));
    CHECK(all.samples.size() == 4);  // every assignment ties at zero
    for (const Sample& s : all.samples.samples()) {
        CHECK(s.energy == 0.0);
        CHECK(s.occurrences == 1);
    }
}

TEST_CASE("exhaustive solve enforces its capacity cap") {
    CHECK_THROWS_AS(exhaustive_solve(random_clique_qubo(25, 1)), CapacityError);
    CHECK_THROWS_AS(exhaustive_solve(random_clique_qubo(5, 1), 4), CapacityError);
    CHECK_NOTHROW(exhaustive_solve(random_clique_qubo(5, 1), 5));
}

TEST_CASE("simulated annealing finds trivial basins and replays exactly") {
    QuboMatrix q(1);
    q.set(0, 0, -5.0);
    SamplerParams params;
    params.num_reads = 3;
    params.num_sweeps = 5;
    SamplerOutcome out = simulated_anneal(q, params);
    CHECK(out.samples.best().assignment == Assignment{1});
    CHECK(out.samples.best().energy == -5.0);

    QuboMatrix inst = random_clique_qubo(12, 3);
    SamplerParams defaults;
    defaults.seed = 11;
    CHECK(simulated_anneal(inst, defaults).samples ==
          simulated_anneal(inst, defaults).samples);
}

TEST_CASE("simulated annealing validates its parameters") {
    QuboMatrix q(2);
    q.set(0, 1, 1.0);
    SamplerParams params;
    params.num_reads = 0;
    CHECK_THROWS_AS(simulated_anneal(q, params), ParameterError);
    params.num_reads = 1;
    params.num_sweeps = 0;
    CHECK_THROWS_AS(simulated_anneal(q, params), ParameterError);
    params.num_sweeps = 1;
    params.beta_hot = 2.0;
    params.beta_cold = 1.0;  // inverted schedule
    CHECK_THROWS_AS(simulated_anneal(q, params), ParameterError);
    CHECK_THROWS_AS(simulated_anneal(QuboMatrix(0), SamplerParams{}), ParameterError);
}

TEST_CASE("annealing with default budget matches the oracle on small cliques") {
    int matched = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        QuboMatrix q = random_clique_qubo(10, 900 + seed);
        SamplerParams params;
        params.seed = seed;
        double sa = simulated_anneal(q, params).samples.best().energy;
        double opt = exhaustive_solve(q).samples.best().energy;
        CHECK(sa >= opt - 1e-9);  // oracle lower bound
        if (std::abs(sa - opt) <= 1e-9 * std::max(1.0, std::abs(opt))) ++matched;
    }
    CHECK(matched >= 9);
}

TEST_CASE("doubling num_reads never worsens the best energy") {
    QuboMatrix q = random_clique_qubo(14, 77);
    SamplerParams small;
    small.num_reads = 5;
    small.num_sweeps = 20;
    small.seed = 4;
    SamplerParams big = small;
    big.num_reads = 10;
    // read sub-seeds depend only on (seed, read index), so the bigger batch
    // is a superset of the smaller one
    CHECK(simulated_anneal(q, big).samples.best().energy <=
          simulated_anneal(q, small).samples.best().energy + 1e-12);
}

TEST_CASE("incremental energy tracks flips exactly") {
    QuboMatrix q = random_clique_qubo(10, 21);
    IncrementalEnergy inc(q);
    Assignment x(10, 0);
    inc.reset(x);
    CHECK(inc.current_energy() == doctest::Approx(energy(q, x)).epsilon(1e-12));

    SplitMix64 rng(5);
    for (int step = 0; step < 200; ++step) {
        std::size_t i = rng.next_index(10);
        double before = inc.current_energy();
        double delta = inc.flip_delta(i);
        inc.flip(i);
        x[i] ^= 1;
        double fresh = energy(q, x);
        CHECK(inc.current_energy() == doctest::Approx(fresh).epsilon(1e-9));
        CHECK(before + delta == doctest::Approx(fresh).epsilon(1e-9));
        CHECK(inc.assignment() == x);
    }
}

TEST_CASE("sampler dispatch delegates and validates the kind") {
    CHECK(parse_sampler_kind("exhaustive") == SamplerKind::exhaustive);
    CHECK(parse_sampler_kind("sa") == SamplerKind::sa);
    CHECK_THROWS_AS(parse_sampler_kind("tabu"), ParameterError);

    QuboMatrix q = random_clique_qubo(3, 8);
    SamplerParams params;
    params.seed = 2;
    SamplerOutcome oracle = sampler_dispatch(SamplerKind::exhaustive, q, params);
    CHECK(oracle.samples == exhaustive_solve(q).samples);
    CHECK(oracle.sampler_time >= 0.0);

    double opt = oracle.samples.best().energy;
    SamplerOutcome annealed = sampler_dispatch(SamplerKind::sa, q, params);
    for (const Sample& s : annealed.samples.samples()) CHECK(s.energy >= opt - 1e-9);
}
