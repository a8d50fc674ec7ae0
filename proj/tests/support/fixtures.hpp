#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <modmetrics/model.hpp>

namespace fixtures {

using namespace modmetrics;

struct ClassSpec {
    std::vector<AttributeId> attrs;
    std::vector<MethodId> methods;
};

// Builds a system from explicit memberships and dependency lists. Ids must
// be dense per id space across all classes; calls/accesses are indexed by
// method id and may be given in any order.
inline std::pair<SystemModel, DependencyTable> build_system(
    const std::vector<ClassSpec>& classes,
    std::vector<std::vector<MethodId>> calls,
    std::vector<std::vector<AttributeId>> accesses) {
    SystemModel model;
    std::size_t n_methods = 0, n_attrs = 0;
    for (const ClassSpec& c : classes) {
        n_methods += c.methods.size();
        n_attrs += c.attrs.size();
    }
    model.method_names.resize(n_methods);
    model.method_owner.resize(n_methods);
    model.attribute_names.resize(n_attrs);
    model.attribute_owner.resize(n_attrs);
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        ClassRecord rec;
        rec.id = static_cast<ClassId>(ci);
        rec.name = "C" + std::to_string(ci);
        rec.attribute_ids = classes[ci].attrs;
        rec.method_ids = classes[ci].methods;
        std::sort(rec.attribute_ids.begin(), rec.attribute_ids.end());
        std::sort(rec.method_ids.begin(), rec.method_ids.end());
        for (MethodId p : rec.method_ids) {
            model.method_owner[p] = rec.id;
            model.method_names[p] = "m" + std::to_string(p);
        }
        for (AttributeId a : rec.attribute_ids) {
            model.attribute_owner[a] = rec.id;
            model.attribute_names[a] = "a" + std::to_string(a);
        }
        model.classes.push_back(std::move(rec));
    }

    DependencyTable deps;
    calls.resize(n_methods);
    accesses.resize(n_methods);
    for (auto& v : calls) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& v : accesses) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    deps.calls = std::move(calls);
    deps.accesses = std::move(accesses);
    return {std::move(model), std::move(deps)};
}

} // namespace fixtures
