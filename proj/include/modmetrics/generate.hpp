#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace modmetrics {

// splitmix64. Chosen over <random> engines because its output is a fixed
// sequence of u64 ops, identical on every platform and standard library,
// which keeps generated systems byte-reproducible from the seed alone.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        assert(bound > 0);
        return next() % bound;
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::uint32_t n_classes = 1;
    std::uint32_t n_methods = 0;
    std::uint32_t n_attributes = 0;
    std::uint32_t k_max_calls = 0;    // per-method call count drawn from [0, k]
    std::uint32_t k_max_accesses = 0; // per-method access count drawn from [0, k]
    double intra_class_bias = 0.5;    // probability a dependency stays in-class
};

struct GeneratedSystem {
    SystemModel model;
    DependencyTable deps;
};

namespace detail {

// Pick a member of `pool` different from `self`, or the sentinel when the
// pool holds nothing else. pool is sorted; self may or may not be in it.
inline bool pick_excluding(SplitMix64& rng, const std::vector<std::uint32_t>& pool,
                           std::uint32_t self, std::uint32_t& out) {
    const auto it = std::lower_bound(pool.begin(), pool.end(), self);
    const bool contains = it != pool.end() && *it == self;
    const std::size_t n = pool.size() - (contains ? 1 : 0);
    if (n == 0) return false;
    std::size_t idx = rng.below(n);
    if (contains && idx >= static_cast<std::size_t>(it - pool.begin())) ++idx;
    out = pool[idx];
    return true;
}

// Pick an entity owned by a class other than `home` by capped rejection
// sampling. Deterministic for a given stream position; gives up (rarely)
// after 64 draws rather than loop without bound.
inline bool pick_foreign(SplitMix64& rng, const std::vector<ClassId>& owner,
                         ClassId home, std::uint32_t& out) {
    if (owner.empty()) return false;
    for (int attempt = 0; attempt < 64; ++attempt) {
        const auto candidate = static_cast<std::uint32_t>(rng.below(owner.size()));
        if (owner[candidate] != home) {
            out = candidate;
            return true;
        }
    }
    return false;
}

} // namespace detail

// Synthesizes a random system: entities spread round-robin over classes,
// then for each method a uniform number of calls/accesses in [0, k], each
// target in-class with probability intra_class_bias and in some other class
// otherwise. Draws that cannot be satisfied (single class, no attributes,
// lone method) are skipped, and duplicate draws collapse, so realized set
// sizes can undershoot the drawn counts. Output depends only on the config.
inline GeneratedSystem generate(const GeneratorConfig& cfg) {
    if (cfg.n_classes == 0)
        throw std::invalid_argument("generate: n_classes must be positive");
    if (cfg.intra_class_bias < 0.0 || cfg.intra_class_bias > 1.0)
        throw std::invalid_argument("generate: intra_class_bias must be in [0, 1]");

    GeneratedSystem g;
    SystemModel& model = g.model;
    model.classes.resize(cfg.n_classes);
    for (ClassId c = 0; c < cfg.n_classes; ++c) {
        model.classes[c].id = c;
        model.classes[c].name = "C" + std::to_string(c);
    }
    model.method_names.reserve(cfg.n_methods);
    model.method_owner.reserve(cfg.n_methods);
    for (MethodId p = 0; p < cfg.n_methods; ++p) {
        const ClassId owner = p % cfg.n_classes;
        model.method_names.push_back("m" + std::to_string(p));
        model.method_owner.push_back(owner);
        model.classes[owner].method_ids.push_back(p); // stride keeps these sorted
    }
    model.attribute_names.reserve(cfg.n_attributes);
    model.attribute_owner.reserve(cfg.n_attributes);
    for (AttributeId a = 0; a < cfg.n_attributes; ++a) {
        const ClassId owner = a % cfg.n_classes;
        model.attribute_names.push_back("a" + std::to_string(a));
        model.attribute_owner.push_back(owner);
        model.classes[owner].attribute_ids.push_back(a);
    }

    SplitMix64 rng(cfg.seed);
    DependencyTable& deps = g.deps;
    deps.calls.resize(cfg.n_methods);
    deps.accesses.resize(cfg.n_methods);
    for (MethodId p = 0; p < cfg.n_methods; ++p) {
        const ClassId home = model.method_owner[p];

        const std::uint64_t n_calls = cfg.k_max_calls ? rng.below(cfg.k_max_calls + 1ULL) : 0;
        for (std::uint64_t i = 0; i < n_calls; ++i) {
            const bool stay = rng.unit() < cfg.intra_class_bias;
            std::uint32_t target;
            if (stay
                    ? detail::pick_excluding(rng, model.classes[home].method_ids, p, target)
                    : detail::pick_foreign(rng, model.method_owner, home, target))
                deps.calls[p].push_back(target);
        }

        const std::uint64_t n_acc = cfg.k_max_accesses ? rng.below(cfg.k_max_accesses + 1ULL) : 0;
        for (std::uint64_t i = 0; i < n_acc; ++i) {
            const bool stay = rng.unit() < cfg.intra_class_bias;
            std::uint32_t target;
            if (stay) {
                const auto& pool = model.classes[home].attribute_ids;
                if (pool.empty()) continue;
                target = pool[rng.below(pool.size())];
            } else if (!detail::pick_foreign(rng, model.attribute_owner, home, target)) {
                continue;
            }
            deps.accesses[p].push_back(target);
        }

        auto& cs = deps.calls[p];
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        auto& as = deps.accesses[p];
        std::sort(as.begin(), as.end());
        as.erase(std::unique(as.begin(), as.end()), as.end());
    }

    return g;
}

} // namespace modmetrics
