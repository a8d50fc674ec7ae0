#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "metrics.hpp"
#include "model.hpp"

namespace modmetrics {

enum class Criterion : std::uint8_t { Similarity = 0, Cohesion = 1, Coupling = 2 };

inline std::string_view criterion_name(Criterion c) {
    switch (c) {
        case Criterion::Similarity: return "similarity";
        case Criterion::Cohesion: return "cohesion";
        case Criterion::Coupling: return "coupling";
    }
    return "?";
}

struct ThresholdOverrides {
    std::optional<double> similarity;
    std::optional<double> lcom;
    std::optional<double> cbo;
};

struct Thresholds {
    double similarity = 0.0;
    double lcom = 0.0;
    double cbo = 0.0;
    bool explicit_mode = false; // true when any override was supplied

    bool operator==(const Thresholds&) const = default;
};

// Default thresholds are the means of the observed values: stored similarity
// entries, per-class lcom, per-class cbo. Empty inputs mean 0. Any override
// replaces its metric's mean and flips the reported mode to "explicit".
inline Thresholds compute_thresholds(const MetricsReport& report,
                                     const ThresholdOverrides& ov = {}) {
    auto mean = [](const auto& values, auto project) {
        if (values.empty()) return 0.0;
        double sum = 0.0;
        for (const auto& v : values) sum += project(v);
        return sum / static_cast<double>(values.size());
    };
    Thresholds t;
    t.similarity = ov.similarity ? *ov.similarity
                                 : mean(report.similarity, [](const SimilarityEntry& e) { return e.value; });
    t.lcom = ov.lcom ? *ov.lcom : mean(report.lcom, [](double v) { return v; });
    t.cbo = ov.cbo ? *ov.cbo : mean(report.cbo, [](std::uint32_t v) { return static_cast<double>(v); });
    t.explicit_mode = ov.similarity || ov.lcom || ov.cbo;
    return t;
}

// Metric deltas of one hypothetical move, origin and destination only.
//
// Ownership is frozen: the move changes which methods are *iterated* as
// members of origin and destination, while method/attribute ownership used
// to resolve dependency targets stays that of the base model. Consequences:
// every class other than origin and destination keeps all its metrics, and
// cbo values count dependency targets by their current homes. The moved
// method's own dependencies are re-scored against both classes' attribute
// sets and class boundaries.
struct WhatIfMetrics {
    double lcom_origin_before = 0.0;
    double lcom_origin_after = 0.0;
    double lcom_dest_before = 0.0;
    double lcom_dest_after = 0.0;
    std::uint32_t cbo_origin_before = 0;
    std::uint32_t cbo_origin_after = 0;
    std::uint32_t cbo_dest_before = 0;
    std::uint32_t cbo_dest_after = 0;
    bool origin_degenerate_after = false; // origin left without methods or has no attributes
    bool dest_degenerate_after = false;   // destination has no attributes

    bool operator==(const WhatIfMetrics&) const = default;
};

inline WhatIfMetrics what_if_move(MethodId method, ClassId origin, ClassId destination,
                                  const SystemModel& model, const DependencyTable& deps) {
    if (origin >= model.class_count() || destination >= model.class_count())
        throw std::out_of_range("what_if_move: unknown class id");
    if (origin == destination)
        throw std::invalid_argument("what_if_move: origin and destination coincide");
    const auto& origin_members = model.classes[origin].method_ids;
    if (!std::binary_search(origin_members.begin(), origin_members.end(), method))
        throw std::invalid_argument("what_if_move: method " + std::to_string(method) +
                                    " is not a member of class " + std::to_string(origin));

    std::vector<MethodId> origin_after;
    origin_after.reserve(origin_members.size() - 1);
    for (MethodId p : origin_members)
        if (p != method) origin_after.push_back(p);

    const auto& dest_members = model.classes[destination].method_ids;
    std::vector<MethodId> dest_after;
    dest_after.reserve(dest_members.size() + 1);
    dest_after.insert(dest_after.end(), dest_members.begin(), dest_members.end());
    dest_after.insert(std::lower_bound(dest_after.begin(), dest_after.end(), method), method);

    WhatIfMetrics r;
    r.lcom_origin_before = lcom_normalized(origin, model, deps);
    r.lcom_origin_after = lcom_normalized_over(origin, model, deps, origin_after);
    r.lcom_dest_before = lcom_normalized(destination, model, deps);
    r.lcom_dest_after = lcom_normalized_over(destination, model, deps, dest_after);
    r.cbo_origin_before = cbo(origin, model, deps);
    r.cbo_origin_after = cbo_over(origin, model, deps, origin_after);
    r.cbo_dest_before = cbo(destination, model, deps);
    r.cbo_dest_after = cbo_over(destination, model, deps, dest_after);
    r.origin_degenerate_after =
        origin_after.empty() || model.classes[origin].attribute_ids.empty();
    r.dest_degenerate_after = model.classes[destination].attribute_ids.empty();
    return r;
}

struct MoveSuggestion {
    MethodId method = 0;
    ClassId origin = 0;
    ClassId destination = 0;
    std::vector<Criterion> criteria; // sorted, unique
    WhatIfMetrics impact;

    bool operator==(const MoveSuggestion&) const = default;
};

struct SuggestOptions {
    // false: one suggestion per (criterion, method), the best candidate.
    // true: every candidate destination that passes, ordered by class id.
    bool all_candidates = false;
};

namespace detail {

inline void add_candidate(std::vector<ClassId>& dests, ClassId d, ClassId origin) {
    if (d != origin) dests.push_back(d);
}

inline void finish_candidates(std::vector<ClassId>& dests) {
    std::sort(dests.begin(), dests.end());
    dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
}

// Classes that own anything `method` calls or accesses, minus its own class.
inline std::vector<ClassId> used_classes(MethodId method, ClassId origin, const SystemModel& model,
                                         const DependencyTable& deps) {
    std::vector<ClassId> dests;
    for (MethodId t : deps.calls[method]) add_candidate(dests, model.method_owner[t], origin);
    for (AttributeId a : deps.accesses[method]) add_candidate(dests, model.attribute_owner[a], origin);
    finish_candidates(dests);
    return dests;
}

// Evaluates every candidate destination for one method. `pass` filters on
// the what-if metrics; `key` orders passing candidates (smaller is better,
// destination id breaks ties). Emits the best candidate, or all of them in
// all_candidates mode.
template <class Pass, class Key>
inline void emit_for_method(MethodId method, ClassId origin, const std::vector<ClassId>& dests,
                            Criterion crit, Pass pass, Key key, const SuggestOptions& opts,
                            const SystemModel& model, const DependencyTable& deps,
                            std::vector<MoveSuggestion>& out) {
    std::optional<MoveSuggestion> best;
    std::pair<double, ClassId> best_key{0.0, 0};
    for (ClassId d : dests) {
        const WhatIfMetrics wm = what_if_move(method, origin, d, model, deps);
        if (!pass(wm)) continue;
        MoveSuggestion s{method, origin, d, {crit}, wm};
        if (opts.all_candidates) {
            out.push_back(std::move(s));
            continue;
        }
        const std::pair<double, ClassId> k{key(wm), d};
        if (!best || k < best_key) {
            best = std::move(s);
            best_key = k;
        }
    }
    if (best) out.push_back(std::move(*best));
}

inline bool lcom_improves(const WhatIfMetrics& wm) {
    return wm.lcom_origin_after < wm.lcom_origin_before &&
           wm.lcom_dest_after < wm.lcom_dest_before;
}

inline double lcom_key(const WhatIfMetrics& wm) {
    return wm.lcom_origin_after + wm.lcom_dest_after;
}

} // namespace detail

// Similarity-driven suggestions. A stored pair above the threshold whose
// methods live in different classes makes both methods move candidates;
// each candidate's destinations are the other method's class plus the
// classes owning the methods it calls. A move is suggested only if it
// strictly lowers lcom of origin and destination both; the best candidate
// minimizes the summed after-lcom, lowest destination id on ties.
inline std::vector<MoveSuggestion> suggest_by_similarity(const SystemModel& model,
                                                         const DependencyTable& deps,
                                                         const MetricsReport& report,
                                                         const Thresholds& thresholds,
                                                         const SuggestOptions& opts = {}) {
    std::map<MethodId, std::vector<ClassId>> candidates; // keyed ascending by method
    auto note = [&](MethodId u, MethodId other) {
        const ClassId origin = model.method_owner[u];
        std::vector<ClassId>& dests = candidates[u];
        detail::add_candidate(dests, model.method_owner[other], origin);
        for (MethodId t : deps.calls[u]) detail::add_candidate(dests, model.method_owner[t], origin);
    };
    for (const SimilarityEntry& e : report.similarity) {
        if (!(e.value > thresholds.similarity)) continue;
        if (model.method_owner[e.first] == model.method_owner[e.second]) continue;
        note(e.first, e.second);
        note(e.second, e.first);
    }

    std::vector<MoveSuggestion> out;
    for (auto& [method, dests] : candidates) {
        detail::finish_candidates(dests);
        detail::emit_for_method(method, model.method_owner[method], dests, Criterion::Similarity,
                                detail::lcom_improves, detail::lcom_key, opts, model, deps, out);
    }
    return out;
}

// Cohesion-driven suggestions. Every class whose lcom exceeds the threshold
// is scanned worst-method-first (highest fan-out, then lowest id); each
// method's destinations are the classes owning anything it uses. Acceptance
// and ranking match the similarity criterion: strict lcom decrease on both
// sides, minimal summed after-lcom wins.
inline std::vector<MoveSuggestion> suggest_by_cohesion(const SystemModel& model,
                                                       const DependencyTable& deps,
                                                       const MetricsReport& report,
                                                       const Thresholds& thresholds,
                                                       const SuggestOptions& opts = {}) {
    std::vector<MoveSuggestion> out;
    for (const ClassRecord& cls : model.classes) {
        if (!(report.lcom[cls.id] > thresholds.lcom)) continue;
        std::vector<MethodId> order = cls.method_ids;
        std::sort(order.begin(), order.end(), [&](MethodId a, MethodId b) {
            if (report.fan_out[a] != report.fan_out[b]) return report.fan_out[a] > report.fan_out[b];
            return a < b;
        });
        for (MethodId u : order) {
            const std::vector<ClassId> dests = detail::used_classes(u, cls.id, model, deps);
            detail::emit_for_method(u, cls.id, dests, Criterion::Cohesion, detail::lcom_improves,
                                    detail::lcom_key, opts, model, deps, out);
        }
    }
    return out;
}

// Coupling-driven suggestions. Every class whose cbo exceeds the threshold
// is scanned busiest-method-first (highest fan-in + fan-out, then lowest
// id). A move passes if it strictly lowers the origin's cbo without raising
// the destination's; the best candidate leaves the destination with the
// smallest cbo, lowest destination id on ties.
inline std::vector<MoveSuggestion> suggest_by_coupling(const SystemModel& model,
                                                       const DependencyTable& deps,
                                                       const MetricsReport& report,
                                                       const Thresholds& thresholds,
                                                       const SuggestOptions& opts = {}) {
    std::vector<MoveSuggestion> out;
    for (const ClassRecord& cls : model.classes) {
        if (!(static_cast<double>(report.cbo[cls.id]) > thresholds.cbo)) continue;
        std::vector<MethodId> order = cls.method_ids;
        std::sort(order.begin(), order.end(), [&](MethodId a, MethodId b) {
            const std::uint64_t ta = std::uint64_t(report.fan_in[a]) + report.fan_out[a];
            const std::uint64_t tb = std::uint64_t(report.fan_in[b]) + report.fan_out[b];
            if (ta != tb) return ta > tb;
            return a < b;
        });
        for (MethodId u : order) {
            const std::vector<ClassId> dests = detail::used_classes(u, cls.id, model, deps);
            detail::emit_for_method(
                u, cls.id, dests, Criterion::Coupling,
                [](const WhatIfMetrics& wm) {
                    return wm.cbo_origin_after < wm.cbo_origin_before &&
                           wm.cbo_dest_after <= wm.cbo_dest_before;
                },
                [](const WhatIfMetrics& wm) { return static_cast<double>(wm.cbo_dest_after); },
                opts, model, deps, out);
        }
    }
    return out;
}

enum class Combine { Union, Intersection };

// Runs the selected criteria and merges their suggestions. Union keeps a
// move suggested by any criterion, tagging it with every criterion that
// produced it; intersection keeps only moves every selected criterion
// produced. Output is sorted by (origin, method, destination); entries are
// unique per (method, destination).
inline std::vector<MoveSuggestion> suggest_all(const SystemModel& model,
                                               const DependencyTable& deps,
                                               const MetricsReport& report,
                                               const Thresholds& thresholds,
                                               const std::vector<Criterion>& criteria,
                                               Combine combine,
                                               const SuggestOptions& opts = {}) {
    std::vector<Criterion> selected = criteria;
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    if (selected.empty()) throw std::invalid_argument("suggest_all: no criteria selected");

    std::map<std::pair<MethodId, ClassId>, MoveSuggestion> merged;
    for (Criterion crit : selected) {
        std::vector<MoveSuggestion> part;
        switch (crit) {
            case Criterion::Similarity:
                part = suggest_by_similarity(model, deps, report, thresholds, opts);
                break;
            case Criterion::Cohesion:
                part = suggest_by_cohesion(model, deps, report, thresholds, opts);
                break;
            case Criterion::Coupling:
                part = suggest_by_coupling(model, deps, report, thresholds, opts);
                break;
        }
        for (MoveSuggestion& s : part) {
            const auto key = std::make_pair(s.method, s.destination);
            auto [it, inserted] = merged.try_emplace(key, std::move(s));
            if (!inserted) it->second.criteria.push_back(crit);
        }
    }

    std::vector<MoveSuggestion> out;
    out.reserve(merged.size());
    for (auto& [key, s] : merged) {
        std::sort(s.criteria.begin(), s.criteria.end());
        s.criteria.erase(std::unique(s.criteria.begin(), s.criteria.end()), s.criteria.end());
        if (combine == Combine::Intersection && s.criteria.size() != selected.size()) continue;
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const MoveSuggestion& a, const MoveSuggestion& b) {
        if (a.origin != b.origin) return a.origin < b.origin;
        if (a.method != b.method) return a.method < b.method;
        return a.destination < b.destination;
    });
    return out;
}

} // namespace modmetrics
