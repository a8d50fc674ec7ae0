#include <catch2/catch_amalgamated.hpp>

#include <modmetrics/generate.hpp>
#include <modmetrics/metrics.hpp>
#include <modmetrics/parallel.hpp>

#include "support/fixtures.hpp"

using namespace modmetrics;

TEST_CASE("plan_partition splits evenly with the remainder up front") {
    SECTION("10 over 2") {
        const auto r = plan_partition(10, 2);
        REQUIRE(r.size() == 2);
        CHECK(r[0] == IndexRange{0, 5});
        CHECK(r[1] == IndexRange{5, 10});
    }
    SECTION("10 over 3") {
        const auto r = plan_partition(10, 3);
        REQUIRE(r.size() == 3);
        CHECK(r[0] == IndexRange{0, 4});
        CHECK(r[1] == IndexRange{4, 7});
        CHECK(r[2] == IndexRange{7, 10});
    }
    SECTION("more workers than work") {
        const auto r = plan_partition(3, 8);
        REQUIRE(r.size() == 8);
        CHECK(r[0] == IndexRange{0, 1});
        CHECK(r[1] == IndexRange{1, 2});
        CHECK(r[2] == IndexRange{2, 3});
        for (std::size_t w = 3; w < 8; ++w) CHECK(r[w].size() == 0);
    }
    SECTION("zero workers is an error") {
        CHECK_THROWS_AS(plan_partition(5, 0), std::invalid_argument);
    }
    SECTION("coverage and balance for arbitrary shapes") {
        SplitMix64 rng(99);
        for (int i = 0; i < 50; ++i) {
            const std::size_t n = rng.below(1000);
            const unsigned w = static_cast<unsigned>(1 + rng.below(16));
            const auto r = plan_partition(n, w);
            REQUIRE(r.size() == w);
            std::size_t at = 0, lo = n, hi = 0;
            for (const IndexRange& range : r) {
                CHECK(range.begin == at);
                at = range.end;
                lo = std::min(lo, range.size());
                hi = std::max(hi, range.size());
            }
            CHECK(at == n);
            CHECK(hi - lo <= 1);
        }
    }
}

namespace {

GeneratedSystem medium_system(std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n_classes = 12;
    cfg.n_methods = 180;
    cfg.n_attributes = 60;
    cfg.k_max_calls = 5;
    cfg.k_max_accesses = 4;
    cfg.intra_class_bias = 0.45;
    return generate(cfg);
}

} // namespace

TEST_CASE("parallel_similarities equals the sequential engine exactly") {
    const GeneratedSystem g = medium_system(11);
    const std::vector<SimilarityEntry> expected = all_similarities(g.model, g.deps);
    REQUIRE_FALSE(expected.empty());
    for (unsigned workers : {1u, 2u, 4u, 8u}) {
        INFO("workers " << workers);
        CHECK(parallel_similarities(g.model, g.deps, workers) == expected);
    }
}

TEST_CASE("parallel_similarities on an empty or tiny method set") {
    auto [model, deps] = fixtures::build_system({{{0}, {0}}}, {{}}, {{0}});
    CHECK(parallel_similarities(model, deps, 4).empty());

    SystemModel empty_model;
    DependencyTable empty_deps;
    CHECK(parallel_similarities(empty_model, empty_deps, 3).empty());
}

TEST_CASE("compaction trace tiles the output exactly") {
    const GeneratedSystem g = medium_system(23);
    CompactionTrace trace;
    const std::vector<SimilarityEntry> out = parallel_similarities(g.model, g.deps, 5, &trace);

    REQUIRE(trace.reservations.size() == 5);
    CHECK(trace.final_cursor == out.size());

    std::uint64_t total = 0;
    std::vector<std::pair<std::size_t, std::size_t>> slices;
    for (unsigned w = 0; w < 5; ++w) {
        const CompactionTrace::Reservation& res = trace.reservations[w];
        CHECK(res.worker == w);
        total += res.count;
        slices.emplace_back(res.offset, res.offset + res.count);
    }
    CHECK(total == out.size());

    // Slices must be disjoint and jointly cover [0, size).
    std::sort(slices.begin(), slices.end());
    std::size_t at = 0;
    for (const auto& [begin, end] : slices) {
        CHECK(begin == at);
        at = end;
    }
    CHECK(at == out.size());
}

TEST_CASE("compaction trace on a zero-overlap system") {
    auto [model, deps] = fixtures::build_system(
        {{{0, 1, 2}, {0, 1, 2}}},
        {{}, {}, {}},
        {{0}, {1}, {2}});
    CompactionTrace trace;
    const auto out = parallel_similarities(model, deps, 3, &trace);
    CHECK(out.empty());
    CHECK(trace.final_cursor == 0);
    for (const auto& res : trace.reservations) CHECK(res.count == 0);
}

TEST_CASE("parallel_class_metrics equals the sequential values") {
    GeneratorConfig cfg;
    cfg.seed = 7;
    cfg.n_classes = 100;
    cfg.n_methods = 400;
    cfg.n_attributes = 250;
    cfg.k_max_calls = 4;
    cfg.k_max_accesses = 4;
    cfg.intra_class_bias = 0.6;
    const GeneratedSystem g = generate(cfg);

    ClassMetrics expected;
    for (ClassId c = 0; c < g.model.class_count(); ++c) {
        expected.lcom.push_back(lcom_normalized(c, g.model, g.deps));
        expected.cbo.push_back(cbo(c, g.model, g.deps));
    }
    for (unsigned workers : {1u, 3u, 4u, 16u}) {
        INFO("workers " << workers);
        CHECK(parallel_class_metrics(g.model, g.deps, workers) == expected);
    }
}

TEST_CASE("parallel_class_metrics with one class and many workers") {
    auto [model, deps] = fixtures::build_system(
        {{{0, 1}, {0, 1}}},
        {{}, {}},
        {{0, 1}, {0}});
    const ClassMetrics cm = parallel_class_metrics(model, deps, 8);
    REQUIRE(cm.lcom.size() == 1);
    CHECK(cm.lcom[0] == 0.25);
    CHECK(cm.cbo[0] == 0);
}

TEST_CASE("parallel_fan_metrics equals the sequential scatter") {
    SECTION("call chain with two workers") {
        auto [model, deps] = fixtures::build_system({{{}, {0, 1, 2}}}, {{1}, {2}, {}}, {});
        const FanMetrics fm = parallel_fan_metrics(model, deps, 2);
        CHECK(fm.fan_in == std::vector<std::uint32_t>{0, 1, 1});
        CHECK(fm.fan_out == std::vector<std::uint32_t>{1, 1, 0});
    }
    SECTION("generated system, several worker counts") {
        const GeneratedSystem g = medium_system(31);
        const std::vector<std::uint32_t> in = fan_in(g.model, g.deps);
        const std::vector<std::uint32_t> out = fan_out(g.model, g.deps);
        for (unsigned workers : {1u, 2u, 7u}) {
            const FanMetrics fm = parallel_fan_metrics(g.model, g.deps, workers);
            INFO("workers " << workers);
            CHECK(fm.fan_in == in);
            CHECK(fm.fan_out == out);
        }
    }
}

TEST_CASE("parallel_lcom_ck equals the sequential values") {
    const GeneratedSystem g = medium_system(47);
    std::vector<std::uint64_t> expected;
    for (ClassId c = 0; c < g.model.class_count(); ++c)
        expected.push_back(lcom_ck(c, g.model, g.deps));
    CHECK(parallel_lcom_ck(g.model, g.deps, 3) == expected);
}

TEST_CASE("parallel_full_report equals full_report, operator== with no tolerance") {
    const GeneratedSystem g = medium_system(53);
    const MetricsReport expected = full_report(g.model, g.deps);
    for (unsigned workers : {1u, 3u, 6u}) {
        INFO("workers " << workers);
        CHECK(parallel_full_report(g.model, g.deps, workers) == expected);
    }
}

TEST_CASE("parallel runs are repeatable") {
    const GeneratedSystem g = medium_system(61);
    const auto first = parallel_similarities(g.model, g.deps, 4);
    for (int i = 0; i < 5; ++i) CHECK(parallel_similarities(g.model, g.deps, 4) == first);
}
