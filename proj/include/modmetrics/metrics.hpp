#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "model.hpp"

namespace modmetrics {

namespace detail {

// Number of common elements of two sorted unique ranges.
template <class T>
inline std::uint64_t intersection_count(std::span<const T> a, std::span<const T> b) {
    std::uint64_t n = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

} // namespace detail

// One stored entry of the sparse similarity table. Only pairs that share at
// least one property are stored, so value is always in (0, 1].
struct SimilarityEntry {
    MethodId first = 0;  // first < second always
    MethodId second = 0;
    double value = 0.0;

    bool operator==(const SimilarityEntry&) const = default;
};

inline std::uint64_t shared_property_count(const PropertySet& a, const PropertySet& b) {
    return detail::intersection_count(a.called, b.called) +
           detail::intersection_count(a.accessed, b.accessed);
}

// Core of the similarity computation, shared verbatim by the sequential and
// parallel engines so both produce bit-identical doubles. Returns false when
// the intersection is empty (the pair is not stored).
inline bool similarity_if_nonzero(MethodId p, MethodId q, const DependencyTable& deps, double& value) {
    const PropertySet a = properties_of(p, deps);
    const PropertySet b = properties_of(q, deps);
    const std::uint64_t inter = shared_property_count(a, b);
    if (inter == 0) return false;
    const std::uint64_t uni = a.size() + b.size() - inter;
    value = static_cast<double>(inter) / static_cast<double>(uni);
    return true;
}

// Jaccard similarity of two distinct methods' property sets. Two methods
// with no properties at all have similarity 0 by convention (empty union).
inline double jaccard(MethodId p, MethodId q, const DependencyTable& deps) {
    if (p == q) throw std::invalid_argument("jaccard: method compared with itself");
    double v = 0.0;
    if (similarity_if_nonzero(p, q, deps, v)) return v;
    return 0.0;
}

// All unordered pairs with nonzero similarity, ordered by (first, second).
inline std::vector<SimilarityEntry> all_similarities(const SystemModel& model,
                                                     const DependencyTable& deps) {
    const auto m = static_cast<MethodId>(model.method_count());
    std::vector<SimilarityEntry> out;
    for (MethodId i = 0; i < m; ++i)
        for (MethodId j = i + 1; j < m; ++j) {
            double v;
            if (similarity_if_nonzero(i, j, deps, v)) out.push_back({i, j, v});
        }
    return out;
}

// Distinct callers per method: fan_in[p] = |{q != p : p in calls(q)}|.
inline std::vector<std::uint32_t> fan_in(const SystemModel& model, const DependencyTable& deps) {
    std::vector<std::uint32_t> in(model.method_count(), 0);
    for (const auto& targets : deps.calls)
        for (MethodId t : targets) ++in[t];
    return in;
}

// Distinct callees per method: fan_out[p] = |calls(p)|.
inline std::vector<std::uint32_t> fan_out(const SystemModel& model, const DependencyTable& deps) {
    std::vector<std::uint32_t> out(model.method_count(), 0);
    for (MethodId p = 0; p < model.method_count(); ++p)
        out[p] = static_cast<std::uint32_t>(deps.calls[p].size());
    return out;
}

namespace detail {

inline void check_class(ClassId cls, const SystemModel& model) {
    if (cls >= model.class_count())
        throw std::out_of_range("unknown class id " + std::to_string(cls));
}

} // namespace detail

// Normalized lack of cohesion over an explicit method set, used both for a
// class as-is and for what-if membership overrides. With A attributes in the
// class and M methods in the set:
//
//   lcom = 1 - (sum over methods of |accesses(m) /\ attrs|) / (A * M)
//
// which equals the mean-per-method form but needs one division, so the
// result is exact-rational-rounded and always lands in [0, 1] without
// clamping. Degenerate classes (A == 0 or M == 0) score 0: nothing to
// cohere around, treated as cohesive.
inline double lcom_normalized_over(ClassId cls, const SystemModel& model,
                                   const DependencyTable& deps,
                                   std::span<const MethodId> methods) {
    detail::check_class(cls, model);
    const auto& attrs = model.classes[cls].attribute_ids;
    if (attrs.empty() || methods.empty()) return 0.0;
    std::uint64_t hits = 0;
    for (MethodId p : methods)
        hits += detail::intersection_count(std::span<const AttributeId>(deps.accesses[p]),
                                           std::span<const AttributeId>(attrs));
    const auto denom = static_cast<double>(attrs.size()) * static_cast<double>(methods.size());
    return 1.0 - static_cast<double>(hits) / denom;
}

inline double lcom_normalized(ClassId cls, const SystemModel& model, const DependencyTable& deps) {
    detail::check_class(cls, model);
    return lcom_normalized_over(cls, model, deps, model.classes[cls].method_ids);
}

// Pairwise lack-of-cohesion count: P pairs of methods with disjoint
// own-attribute access sets minus Q pairs with a shared one, clamped at 0.
inline std::uint64_t lcom_ck_over(ClassId cls, const SystemModel& model,
                                  const DependencyTable& deps,
                                  std::span<const MethodId> methods) {
    detail::check_class(cls, model);
    if (methods.size() < 2) return 0;
    const auto& attrs = model.classes[cls].attribute_ids;
    std::vector<std::vector<AttributeId>> own(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        const auto& acc = deps.accesses[methods[i]];
        std::set_intersection(acc.begin(), acc.end(), attrs.begin(), attrs.end(),
                              std::back_inserter(own[i]));
    }
    std::uint64_t disjoint = 0, sharing = 0;
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j) {
            if (detail::intersection_count(std::span<const AttributeId>(own[i]),
                                           std::span<const AttributeId>(own[j])) > 0)
                ++sharing;
            else
                ++disjoint;
        }
    return disjoint > sharing ? disjoint - sharing : 0;
}

inline std::uint64_t lcom_ck(ClassId cls, const SystemModel& model, const DependencyTable& deps) {
    detail::check_class(cls, model);
    return lcom_ck_over(cls, model, deps, model.classes[cls].method_ids);
}

// Coupling between objects: the number of distinct other classes whose
// methods or attributes this class's methods use. Unidirectional; being
// used by other classes does not count.
inline std::uint32_t cbo_over(ClassId cls, const SystemModel& model,
                              const DependencyTable& deps,
                              std::span<const MethodId> methods) {
    detail::check_class(cls, model);
    std::vector<ClassId> used;
    for (MethodId p : methods) {
        for (MethodId t : deps.calls[p]) {
            const ClassId o = model.method_owner[t];
            if (o != cls) used.push_back(o);
        }
        for (AttributeId a : deps.accesses[p]) {
            const ClassId o = model.attribute_owner[a];
            if (o != cls) used.push_back(o);
        }
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    return static_cast<std::uint32_t>(used.size());
}

inline std::uint32_t cbo(ClassId cls, const SystemModel& model, const DependencyTable& deps) {
    detail::check_class(cls, model);
    return cbo_over(cls, model, deps, model.classes[cls].method_ids);
}

// How many scalar metric values a full analysis of a system produces.
// Counts stay exact in 64 bits; real systems overflow 32 bits (the pair
// term alone is quadratic in the method count).
struct WorkloadEstimate {
    std::uint64_t m = 0;   // methods
    std::uint64_t c = 0;   // classes
    std::uint64_t k_m = 0; // largest call set
    std::uint64_t k_a = 0; // largest access set
    std::uint64_t n_fan = 0;
    std::uint64_t n_sim = 0;
    std::uint64_t n_lcom = 0;
    std::uint64_t n_cbo = 0;
    std::uint64_t n_total = 0;

    bool operator==(const WorkloadEstimate&) const = default;
};

// n_fan  = 2m            (fan-in and fan-out per method)
// n_sim  = m(m-1)/2      (one value per unordered method pair)
// n_lcom = c(m+1)        (per class: every method considered plus the class value)
// n_cbo  = c(m+1)
inline WorkloadEstimate estimate_workload_counts(std::uint64_t m, std::uint64_t c,
                                                 std::uint64_t k_m = 0, std::uint64_t k_a = 0) {
    WorkloadEstimate e;
    e.m = m;
    e.c = c;
    e.k_m = k_m;
    e.k_a = k_a;
    e.n_fan = 2 * m;
    e.n_sim = m == 0 ? 0 : m * (m - 1) / 2;
    e.n_lcom = c * (m + 1);
    e.n_cbo = c * (m + 1);
    e.n_total = e.n_fan + e.n_sim + e.n_lcom + e.n_cbo;
    return e;
}

inline WorkloadEstimate estimate_workload(const SystemModel& model, const DependencyTable& deps) {
    std::uint64_t k_m = 0, k_a = 0;
    for (const auto& s : deps.calls) k_m = std::max<std::uint64_t>(k_m, s.size());
    for (const auto& s : deps.accesses) k_a = std::max<std::uint64_t>(k_a, s.size());
    return estimate_workload_counts(model.method_count(), model.class_count(), k_m, k_a);
}

// Every metric of one system in one pass, sequential reference engine.
struct MetricsReport {
    std::vector<std::uint32_t> fan_in;        // per method
    std::vector<std::uint32_t> fan_out;       // per method
    std::vector<SimilarityEntry> similarity;  // sparse, sorted by (first, second)
    std::vector<double> lcom;                 // per class, normalized, in [0, 1]
    std::vector<std::uint64_t> lcom_ck;       // per class, pairwise count
    std::vector<std::uint32_t> cbo;           // per class
    WorkloadEstimate workload;

    bool operator==(const MetricsReport&) const = default;
};

inline MetricsReport full_report(const SystemModel& model, const DependencyTable& deps) {
    MetricsReport r;
    r.fan_in = fan_in(model, deps);
    r.fan_out = fan_out(model, deps);
    r.similarity = all_similarities(model, deps);
    const auto c = static_cast<ClassId>(model.class_count());
    r.lcom.resize(c);
    r.lcom_ck.resize(c);
    r.cbo.resize(c);
    for (ClassId cls = 0; cls < c; ++cls) {
        r.lcom[cls] = lcom_normalized(cls, model, deps);
        r.lcom_ck[cls] = lcom_ck(cls, model, deps);
        r.cbo[cls] = cbo(cls, model, deps);
    }
    r.workload = estimate_workload(model, deps);
    return r;
}

} // namespace modmetrics
