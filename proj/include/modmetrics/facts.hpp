#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "json_writer.hpp"
#include "model.hpp"

namespace modmetrics {

inline constexpr std::string_view kFactsSchemaVersion = "1";

// Malformed JSON or a document that does not have the facts shape.
class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed facts that describe an inconsistent system. Carries the full
// violation list so callers can report everything at once.
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& message, std::vector<Violation> violations)
        : std::runtime_error(message), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadResult {
    SystemModel model;
    DependencyTable deps;
    std::vector<std::string> warnings; // non-fatal repairs, e.g. dropped self-calls
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return {line, col};
}

inline const nlohmann::json& member(const nlohmann::json& obj, const char* key,
                                    const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError("facts: " + where + ": missing \"" + key + "\"");
    return *it;
}

inline std::uint32_t id_of(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 0xffffffffULL)
        throw ParseError("facts: " + where + ": expected a non-negative id");
    return v.get<std::uint32_t>();
}

inline std::string name_of(const nlohmann::json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError("facts: " + where + ": expected a string name");
    return v.get<std::string>();
}

inline const nlohmann::json& array_of(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError("facts: " + where + ": expected an array");
    return v;
}

} // namespace detail

// Parses a facts document into a validated model. Shape problems (wrong
// types, missing fields) throw ParseError; a shape-correct document that
// violates model invariants throws ValidationError listing every violation.
// Self-calls and duplicate dependency entries are repaired, not rejected:
// the repair is recorded as a warning.
inline LoadResult parse_facts(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte);
        throw ParseError("facts: JSON parse error at line " + std::to_string(line) +
                         ", column " + std::to_string(col));
    }
    if (!doc.is_object()) throw ParseError("facts: top level must be an object");

    std::vector<Violation> violations;
    const nlohmann::json& version = detail::member(doc, "schema_version", "top level");
    if (!version.is_string() || version.get<std::string>() != kFactsSchemaVersion)
        violations.push_back({ViolationKind::UnsupportedSchemaVersion,
                              "schema_version must be \"" + std::string(kFactsSchemaVersion) +
                                  "\", got " + version.dump()});

    const nlohmann::json& classes = detail::array_of(
        detail::member(doc, "classes", "top level"), "classes");

    LoadResult r;
    SystemModel& model = r.model;

    // First pass: declare every entity so id ranges are known before the
    // dependency sets are resolved. Ids are required dense per id space;
    // gaps get placeholder slots so scanning can continue and report every
    // problem in one go.
    struct PendingMethod {
        MethodId id;
        const nlohmann::json* body;
        std::string where;
    };
    std::vector<PendingMethod> pending;

    model.classes.reserve(classes.size());
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const std::string cwhere = "classes[" + std::to_string(ci) + "]";
        const nlohmann::json& cls = classes[ci];
        if (!cls.is_object()) throw ParseError("facts: " + cwhere + ": expected an object");
        ClassRecord rec;
        rec.id = detail::id_of(detail::member(cls, "id", cwhere), cwhere + ".id");
        rec.name = detail::name_of(detail::member(cls, "name", cwhere), cwhere + ".name");
        if (rec.id != ci)
            violations.push_back({ViolationKind::NonDenseClassIds,
                                  cwhere + " has id " + std::to_string(rec.id) +
                                      ", expected " + std::to_string(ci)});

        const nlohmann::json& attrs =
            detail::array_of(detail::member(cls, "attributes", cwhere), cwhere + ".attributes");
        for (std::size_t ai = 0; ai < attrs.size(); ++ai) {
            const std::string awhere = cwhere + ".attributes[" + std::to_string(ai) + "]";
            if (!attrs[ai].is_object()) throw ParseError("facts: " + awhere + ": expected an object");
            const AttributeId id = detail::id_of(detail::member(attrs[ai], "id", awhere), awhere + ".id");
            std::string name = detail::name_of(detail::member(attrs[ai], "name", awhere), awhere + ".name");
            if (id >= model.attribute_names.size()) {
                model.attribute_names.resize(id + 1);
                model.attribute_owner.resize(id + 1, 0xffffffffU);
            }
            if (model.attribute_owner[id] != 0xffffffffU) {
                violations.push_back({ViolationKind::DuplicateAttributeMembership,
                                      "attribute " + std::to_string(id) + " declared more than once"});
            } else {
                model.attribute_owner[id] = static_cast<ClassId>(ci);
                model.attribute_names[id] = std::move(name);
                rec.attribute_ids.push_back(id);
            }
        }

        const nlohmann::json& methods =
            detail::array_of(detail::member(cls, "methods", cwhere), cwhere + ".methods");
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const std::string mwhere = cwhere + ".methods[" + std::to_string(mi) + "]";
            if (!methods[mi].is_object()) throw ParseError("facts: " + mwhere + ": expected an object");
            const MethodId id = detail::id_of(detail::member(methods[mi], "id", mwhere), mwhere + ".id");
            std::string name = detail::name_of(detail::member(methods[mi], "name", mwhere), mwhere + ".name");
            if (id >= model.method_names.size()) {
                model.method_names.resize(id + 1);
                model.method_owner.resize(id + 1, 0xffffffffU);
            }
            if (model.method_owner[id] != 0xffffffffU) {
                violations.push_back({ViolationKind::DuplicateMethodMembership,
                                      "method " + std::to_string(id) + " declared more than once"});
            } else {
                model.method_owner[id] = static_cast<ClassId>(ci);
                model.method_names[id] = std::move(name);
                rec.method_ids.push_back(id);
                pending.push_back({id, &methods[mi], mwhere});
            }
        }

        std::sort(rec.attribute_ids.begin(), rec.attribute_ids.end());
        std::sort(rec.method_ids.begin(), rec.method_ids.end());
        model.classes.push_back(std::move(rec));
    }

    for (MethodId p = 0; p < model.method_owner.size(); ++p)
        if (model.method_owner[p] == 0xffffffffU) {
            violations.push_back({ViolationKind::UnownedMethod,
                                  "method id " + std::to_string(p) + " is never declared"});
            model.method_owner[p] = 0;
        }
    for (AttributeId a = 0; a < model.attribute_owner.size(); ++a)
        if (model.attribute_owner[a] == 0xffffffffU) {
            violations.push_back({ViolationKind::UnownedAttribute,
                                  "attribute id " + std::to_string(a) + " is never declared"});
            model.attribute_owner[a] = 0;
        }

    // Second pass: dependency sets, now that the id universe is fixed.
    DependencyTable& deps = r.deps;
    deps.calls.resize(model.method_owner.size());
    deps.accesses.resize(model.method_owner.size());
    for (const PendingMethod& pm : pending) {
        const nlohmann::json& calls =
            detail::array_of(detail::member(*pm.body, "calls", pm.where), pm.where + ".calls");
        for (std::size_t i = 0; i < calls.size(); ++i) {
            const MethodId t = detail::id_of(calls[i], pm.where + ".calls[" + std::to_string(i) + "]");
            if (t == pm.id) {
                r.warnings.push_back("method " + std::to_string(pm.id) +
                                     " calls itself; self-call dropped");
                continue;
            }
            if (t >= model.method_owner.size()) {
                violations.push_back({ViolationKind::DanglingCallTarget,
                                      "method " + std::to_string(pm.id) + " calls unknown method " +
                                          std::to_string(t)});
                continue;
            }
            deps.calls[pm.id].push_back(t);
        }
        const nlohmann::json& accesses =
            detail::array_of(detail::member(*pm.body, "accesses", pm.where), pm.where + ".accesses");
        for (std::size_t i = 0; i < accesses.size(); ++i) {
            const AttributeId t =
                detail::id_of(accesses[i], pm.where + ".accesses[" + std::to_string(i) + "]");
            if (t >= model.attribute_owner.size()) {
                violations.push_back({ViolationKind::DanglingAccessTarget,
                                      "method " + std::to_string(pm.id) +
                                          " accesses unknown attribute " + std::to_string(t)});
                continue;
            }
            deps.accesses[pm.id].push_back(t);
        }
        auto dedupe = [](auto& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedupe(deps.calls[pm.id]);
        dedupe(deps.accesses[pm.id]);
    }

    if (violations.empty()) {
        // Belt and braces: anything the passes above missed surfaces here.
        ValidationResult check = validate(model, deps);
        violations = std::move(check.violations);
    }
    if (!violations.empty()) {
        // Format before the move: argument evaluation order is unspecified.
        std::string message = "facts validation failed with " +
                              std::to_string(violations.size()) +
                              " violation(s): " + violations.front().message;
        throw ValidationError(std::move(message), std::move(violations));
    }
    return r;
}

inline LoadResult load_facts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read error on " + path);
    return parse_facts(buf.str());
}

// Canonical serialization: compact, keys sorted at every level, entities
// in id order, trailing newline. Loading the output reproduces the model
// exactly, and re-serializing a loaded canonical file reproduces the bytes.
inline std::string facts_to_json(const SystemModel& model, const DependencyTable& deps) {
    JsonWriter w;
    w.begin_object();
    w.key("classes");
    w.begin_array();
    for (const ClassRecord& cls : model.classes) {
        w.begin_object();
        w.key("attributes");
        w.begin_array();
        for (AttributeId a : cls.attribute_ids) {
            w.begin_object();
            w.key("id");
            w.value(a);
            w.key("name");
            w.value(std::string_view(model.attribute_names[a]));
            w.end_object();
        }
        w.end_array();
        w.key("id");
        w.value(cls.id);
        w.key("methods");
        w.begin_array();
        for (MethodId p : cls.method_ids) {
            w.begin_object();
            w.key("accesses");
            w.begin_array();
            for (AttributeId a : deps.accesses[p]) w.value(a);
            w.end_array();
            w.key("calls");
            w.begin_array();
            for (MethodId t : deps.calls[p]) w.value(t);
            w.end_array();
            w.key("id");
            w.value(p);
            w.key("name");
            w.value(std::string_view(model.method_names[p]));
            w.end_object();
        }
        w.end_array();
        w.key("name");
        w.value(std::string_view(cls.name));
        w.end_object();
    }
    w.end_array();
    w.key("schema_version");
    w.value(kFactsSchemaVersion);
    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

inline void save_facts(const SystemModel& model, const DependencyTable& deps,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const std::string text = facts_to_json(model, deps);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write error on " + path);
}

} // namespace modmetrics
