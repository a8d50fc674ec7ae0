#pragma once

#include <atomic>
#include <barrier>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "metrics.hpp"
#include "model.hpp"

namespace modmetrics {

// Contiguous index ranges, one per worker, covering [0, n) without overlap.
// Sizes differ by at most one; the first n % workers ranges get the extra
// element. Workers past n get empty ranges rather than being dropped, so a
// caller can always spawn exactly n_workers threads.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

inline std::vector<IndexRange> plan_partition(std::size_t n, unsigned n_workers) {
    if (n_workers == 0) throw std::invalid_argument("plan_partition: zero workers");
    std::vector<IndexRange> ranges(n_workers);
    const std::size_t base = n / n_workers;
    const std::size_t rem = n % n_workers;
    std::size_t at = 0;
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::size_t len = base + (w < rem ? 1 : 0);
        ranges[w] = {at, at + len};
        at += len;
    }
    assert(at == n);
    return ranges;
}

// Observability hook for the similarity compaction step: which slice of the
// output each worker reserved, and where the cursor ended. Tests use it to
// prove the reserved slices tile the output exactly.
struct CompactionTrace {
    struct Reservation {
        unsigned worker = 0;
        std::size_t offset = 0;
        std::size_t count = 0;

        bool operator==(const Reservation&) const = default;
    };

    std::vector<Reservation> reservations; // index == worker id
    std::size_t final_cursor = 0;
};

// Parallel pairwise similarities. The method range is partitioned by rows;
// the owner of row i computes pairs (i, j) for all j > i, so every pair in
// the upper triangle is computed exactly once with no coordination.
//
// Output sizes are data-dependent (only pairs sharing a property are kept),
// so each worker first fills a private buffer while publishing only its
// count. A barrier then separates the two phases: its completion step sizes
// the shared output once, after which every worker claims a disjoint slice
// with a single fetch_add on the reservation cursor and copies its buffer
// in. That fetch_add is the only synchronized write in the whole kernel.
// A final sort by (first, second) restores the sequential order, making the
// result element-for-element identical to all_similarities().
inline std::vector<SimilarityEntry> parallel_similarities(const SystemModel& model,
                                                          const DependencyTable& deps,
                                                          unsigned n_workers,
                                                          CompactionTrace* trace = nullptr) {
    const std::size_t m = model.method_count();
    const std::vector<IndexRange> ranges = plan_partition(m, n_workers);

    std::vector<SimilarityEntry> global;
    std::vector<std::size_t> counts(n_workers, 0);
    std::vector<std::vector<SimilarityEntry>> local(n_workers);
    std::atomic<std::size_t> cursor{0};
    if (trace) trace->reservations.assign(n_workers, {});

    std::barrier sync(static_cast<std::ptrdiff_t>(n_workers), [&]() noexcept {
        std::size_t total = 0;
        for (std::size_t c : counts) total += c;
        global.resize(total);
    });

    auto worker = [&](unsigned w) {
        std::vector<SimilarityEntry>& buf = local[w];
        for (std::size_t i = ranges[w].begin; i < ranges[w].end; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                double v;
                if (similarity_if_nonzero(static_cast<MethodId>(i), static_cast<MethodId>(j),
                                          deps, v))
                    buf.push_back({static_cast<MethodId>(i), static_cast<MethodId>(j), v});
            }
        counts[w] = buf.size();

        sync.arrive_and_wait(); // completion step sizes `global` before anyone proceeds

        const std::size_t slot = cursor.fetch_add(buf.size());
        assert(slot + buf.size() <= global.size());
        std::copy(buf.begin(), buf.end(), global.begin() + static_cast<std::ptrdiff_t>(slot));
        if (trace) trace->reservations[w] = {w, slot, buf.size()};
    };

    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) threads.emplace_back(worker, w);
    for (std::thread& t : threads) t.join();

    if (trace) trace->final_cursor = cursor.load();

    std::sort(global.begin(), global.end(), [](const SimilarityEntry& a, const SimilarityEntry& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    return global;
}

namespace detail {

// Spawns n_workers threads over a partition of [0, n) and joins them.
// body(w, begin, end) must write only worker-owned state.
template <class Body>
inline void run_partitioned(std::size_t n, unsigned n_workers, Body body) {
    const std::vector<IndexRange> ranges = plan_partition(n, n_workers);
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w)
        threads.emplace_back([&, w] { body(w, ranges[w].begin, ranges[w].end); });
    for (std::thread& t : threads) t.join();
}

} // namespace detail

struct ClassMetrics {
    std::vector<double> lcom;       // per class
    std::vector<std::uint32_t> cbo; // per class

    bool operator==(const ClassMetrics&) const = default;
};

// Per-class metrics are dense (one value per class, no filtering), so each
// worker writes directly into its own slice of the output arrays and no
// compaction or reservation is needed.
inline ClassMetrics parallel_class_metrics(const SystemModel& model, const DependencyTable& deps,
                                           unsigned n_workers) {
    ClassMetrics out;
    out.lcom.resize(model.class_count());
    out.cbo.resize(model.class_count());
    detail::run_partitioned(model.class_count(), n_workers,
                            [&](unsigned, std::size_t begin, std::size_t end) {
                                for (std::size_t c = begin; c < end; ++c) {
                                    out.lcom[c] = lcom_normalized(static_cast<ClassId>(c), model, deps);
                                    out.cbo[c] = cbo(static_cast<ClassId>(c), model, deps);
                                }
                            });
    return out;
}

inline std::vector<std::uint64_t> parallel_lcom_ck(const SystemModel& model,
                                                   const DependencyTable& deps,
                                                   unsigned n_workers) {
    std::vector<std::uint64_t> out(model.class_count(), 0);
    detail::run_partitioned(model.class_count(), n_workers,
                            [&](unsigned, std::size_t begin, std::size_t end) {
                                for (std::size_t c = begin; c < end; ++c)
                                    out[c] = lcom_ck(static_cast<ClassId>(c), model, deps);
                            });
    return out;
}

struct FanMetrics {
    std::vector<std::uint32_t> fan_in;
    std::vector<std::uint32_t> fan_out;

    bool operator==(const FanMetrics&) const = default;
};

// Parallel fan metrics. fan_in is inverted relative to the sequential
// scatter: the owner of method p counts p's occurrences across every call
// set, so each output cell has exactly one writer and no atomics are
// needed. Costlier per element, embarrassingly parallel in exchange.
inline FanMetrics parallel_fan_metrics(const SystemModel& model, const DependencyTable& deps,
                                       unsigned n_workers) {
    FanMetrics out;
    const std::size_t m = model.method_count();
    out.fan_in.resize(m);
    out.fan_out.resize(m);
    detail::run_partitioned(m, n_workers, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            out.fan_out[p] = static_cast<std::uint32_t>(deps.calls[p].size());
            std::uint32_t in = 0;
            const auto target = static_cast<MethodId>(p);
            for (std::size_t q = 0; q < m; ++q)
                if (q != p &&
                    std::binary_search(deps.calls[q].begin(), deps.calls[q].end(), target))
                    ++in;
            out.fan_in[p] = in;
        }
    });
    return out;
}

// Full report via the parallel kernels. Produces a MetricsReport that
// compares equal (operator==, no tolerance) to the sequential full_report.
inline MetricsReport parallel_full_report(const SystemModel& model, const DependencyTable& deps,
                                          unsigned n_workers, CompactionTrace* trace = nullptr) {
    MetricsReport r;
    FanMetrics fans = parallel_fan_metrics(model, deps, n_workers);
    r.fan_in = std::move(fans.fan_in);
    r.fan_out = std::move(fans.fan_out);
    r.similarity = parallel_similarities(model, deps, n_workers, trace);
    ClassMetrics cm = parallel_class_metrics(model, deps, n_workers);
    r.lcom = std::move(cm.lcom);
    r.cbo = std::move(cm.cbo);
    r.lcom_ck = parallel_lcom_ck(model, deps, n_workers);
    r.workload = estimate_workload(model, deps);
    return r;
}

} // namespace modmetrics
