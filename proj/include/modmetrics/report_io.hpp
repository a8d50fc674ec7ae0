#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json_writer.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "suggest.hpp"

namespace modmetrics {

inline constexpr std::string_view kReportSchemaVersion = "1";

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::vector<std::string> sorted_criterion_names(const std::vector<Criterion>& cs) {
    std::vector<std::string> names;
    names.reserve(cs.size());
    for (Criterion c : cs) names.emplace_back(criterion_name(c));
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace detail

// Classes whose lcom is 0 by convention rather than by cohesion: no
// attributes, or no methods. Reported so a reader can tell the two apart.
inline std::vector<ClassId> degenerate_lcom_classes(const SystemModel& model) {
    std::vector<ClassId> out;
    for (const ClassRecord& cls : model.classes)
        if (cls.attribute_ids.empty() || cls.method_ids.empty()) out.push_back(cls.id);
    return out;
}

// Canonical metrics report: compact JSON, keys sorted at every level,
// 12 significant digits for doubles, trailing newline. Byte-identical for
// equal inputs regardless of engine or run.
inline std::string render_report_json(const SystemModel& model, const MetricsReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("cbo");
    w.begin_array();
    for (std::uint32_t v : report.cbo) w.value(v);
    w.end_array();
    w.key("class_names");
    w.begin_array();
    for (const ClassRecord& cls : model.classes) w.value(std::string_view(cls.name));
    w.end_array();
    w.key("fan_in");
    w.begin_array();
    for (std::uint32_t v : report.fan_in) w.value(v);
    w.end_array();
    w.key("fan_out");
    w.begin_array();
    for (std::uint32_t v : report.fan_out) w.value(v);
    w.end_array();
    w.key("lcom");
    w.begin_array();
    for (double v : report.lcom) w.value(v);
    w.end_array();
    w.key("lcom_ck");
    w.begin_array();
    for (std::uint64_t v : report.lcom_ck) w.value(v);
    w.end_array();
    w.key("lcom_degenerate");
    w.begin_array();
    for (ClassId c : degenerate_lcom_classes(model)) w.value(c);
    w.end_array();
    w.key("method_names");
    w.begin_array();
    for (const std::string& n : model.method_names) w.value(std::string_view(n));
    w.end_array();
    w.key("schema_version");
    w.value(kReportSchemaVersion);
    w.key("similarity");
    w.begin_array();
    for (const SimilarityEntry& e : report.similarity) {
        w.begin_array();
        w.value(e.first);
        w.value(e.second);
        w.value(e.value);
        w.end_array();
    }
    w.end_array();
    w.key("workload");
    w.begin_object();
    w.key("c");
    w.value(report.workload.c);
    w.key("k_a");
    w.value(report.workload.k_a);
    w.key("k_m");
    w.value(report.workload.k_m);
    w.key("m");
    w.value(report.workload.m);
    w.key("n_cbo");
    w.value(report.workload.n_cbo);
    w.key("n_fan");
    w.value(report.workload.n_fan);
    w.key("n_lcom");
    w.value(report.workload.n_lcom);
    w.key("n_sim");
    w.value(report.workload.n_sim);
    w.key("n_total");
    w.value(report.workload.n_total);
    w.end_object();
    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

inline std::string render_report_text(const SystemModel& model, const MetricsReport& report) {
    std::string out;
    out += "system: " + std::to_string(model.class_count()) + " classes, " +
           std::to_string(model.method_count()) + " methods, " +
           std::to_string(model.attribute_count()) + " attributes\n";
    const WorkloadEstimate& wl = report.workload;
    out += "workload: n_fan=" + std::to_string(wl.n_fan) + " n_sim=" + std::to_string(wl.n_sim) +
           " n_lcom=" + std::to_string(wl.n_lcom) + " n_cbo=" + std::to_string(wl.n_cbo) +
           " n_total=" + std::to_string(wl.n_total) + "\n";
    out += "\nclasses (lcom / lcom_ck / cbo)\n";
    for (const ClassRecord& cls : model.classes) {
        out += "  " + std::to_string(cls.id) + " " + cls.name + ": " +
               detail::fixed6(report.lcom[cls.id]) + " / " +
               std::to_string(report.lcom_ck[cls.id]) + " / " +
               std::to_string(report.cbo[cls.id]);
        if (cls.attribute_ids.empty() || cls.method_ids.empty()) out += "  (lcom degenerate)";
        out += "\n";
    }
    out += "\nmethods (fan_in / fan_out)\n";
    for (MethodId p = 0; p < model.method_count(); ++p)
        out += "  " + std::to_string(p) + " " + model.method_names[p] + ": " +
               std::to_string(report.fan_in[p]) + " / " + std::to_string(report.fan_out[p]) + "\n";
    out += "\nsimilar pairs: " + std::to_string(report.similarity.size()) + " stored\n";
    for (const SimilarityEntry& e : report.similarity)
        out += "  " + model.method_names[e.first] + " ~ " + model.method_names[e.second] + "  " +
               detail::fixed6(e.value) + "\n";
    return out;
}

inline std::string render_suggestions_json(const SystemModel& model,
                                           const std::vector<MoveSuggestion>& suggestions,
                                           const Thresholds& thresholds) {
    JsonWriter w;
    w.begin_object();
    w.key("schema_version");
    w.value(kReportSchemaVersion);
    w.key("suggestions");
    w.begin_array();
    for (const MoveSuggestion& s : suggestions) {
        const WhatIfMetrics& i = s.impact;
        w.begin_object();
        w.key("cbo_dest_after");
        w.value(i.cbo_dest_after);
        w.key("cbo_dest_before");
        w.value(i.cbo_dest_before);
        w.key("cbo_origin_after");
        w.value(i.cbo_origin_after);
        w.key("cbo_origin_before");
        w.value(i.cbo_origin_before);
        w.key("criteria");
        w.begin_array();
        for (const std::string& n : detail::sorted_criterion_names(s.criteria))
            w.value(std::string_view(n));
        w.end_array();
        w.key("destination");
        w.value(s.destination);
        w.key("destination_name");
        w.value(std::string_view(model.classes[s.destination].name));
        w.key("lcom_dest_after");
        w.value(i.lcom_dest_after);
        w.key("lcom_dest_before");
        w.value(i.lcom_dest_before);
        w.key("lcom_dest_degenerate_after");
        w.value(i.dest_degenerate_after);
        w.key("lcom_origin_after");
        w.value(i.lcom_origin_after);
        w.key("lcom_origin_before");
        w.value(i.lcom_origin_before);
        w.key("lcom_origin_degenerate_after");
        w.value(i.origin_degenerate_after);
        w.key("method");
        w.value(s.method);
        w.key("method_name");
        w.value(std::string_view(model.method_names[s.method]));
        w.key("origin");
        w.value(s.origin);
        w.key("origin_name");
        w.value(std::string_view(model.classes[s.origin].name));
        w.end_object();
    }
    w.end_array();
    w.key("thresholds");
    w.begin_object();
    w.key("cbo");
    w.value(thresholds.cbo);
    w.key("lcom");
    w.value(thresholds.lcom);
    w.key("mode");
    w.value(thresholds.explicit_mode ? "explicit" : "mean");
    w.key("similarity");
    w.value(thresholds.similarity);
    w.end_object();
    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

inline std::string render_suggestions_text(const SystemModel& model,
                                           const std::vector<MoveSuggestion>& suggestions,
                                           const Thresholds& thresholds) {
    std::string out;
    out += "thresholds: similarity=" + detail::fixed6(thresholds.similarity) +
           " lcom=" + detail::fixed6(thresholds.lcom) + " cbo=" + detail::fixed6(thresholds.cbo) +
           (thresholds.explicit_mode ? " (explicit)\n" : " (mean)\n");
    out += std::to_string(suggestions.size()) + " suggestion(s)\n";
    for (const MoveSuggestion& s : suggestions) {
        const WhatIfMetrics& i = s.impact;
        out += "  move " + model.method_names[s.method] + ": " + model.classes[s.origin].name +
               " -> " + model.classes[s.destination].name + "  [";
        const auto names = detail::sorted_criterion_names(s.criteria);
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (k) out += ",";
            out += names[k];
        }
        out += "]  lcom " + detail::fixed6(i.lcom_origin_before) + "->" +
               detail::fixed6(i.lcom_origin_after) + " / " + detail::fixed6(i.lcom_dest_before) +
               "->" + detail::fixed6(i.lcom_dest_after);
        out += "  cbo " + std::to_string(i.cbo_origin_before) + "->" +
               std::to_string(i.cbo_origin_after) + " / " + std::to_string(i.cbo_dest_before) +
               "->" + std::to_string(i.cbo_dest_after);
        if (i.origin_degenerate_after) out += "  (origin degenerate)";
        if (i.dest_degenerate_after) out += "  (destination degenerate)";
        out += "\n";
    }
    return out;
}

struct BenchRow {
    std::uint64_t m = 0;
    std::uint64_t c = 0;
    std::uint64_t n_total = 0;
    std::string engine; // "sequential" or "parallel"
    unsigned workers = 1;
    double wall_seconds = 0.0;
    double speedup = 1.0; // sequential wall / this row's wall
};

inline std::string render_bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "m,c,n_total,engine,workers,wall_seconds,speedup\n";
    for (const BenchRow& r : rows) {
        out += std::to_string(r.m) + "," + std::to_string(r.c) + "," + std::to_string(r.n_total) +
               "," + r.engine + "," + std::to_string(r.workers) + "," +
               detail::fixed6(r.wall_seconds) + "," + detail::fixed6(r.speedup) + "\n";
    }
    return out;
}

} // namespace modmetrics
