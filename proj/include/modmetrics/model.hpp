#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modmetrics {

// Dense numeric ids. Classes, methods and attributes each live in their own
// id space, contiguous from zero, so every per-entity table is a plain array
// indexed by id. Names are carried separately and only matter for reporting.
using ClassId = std::uint32_t;
using MethodId = std::uint32_t;
using AttributeId = std::uint32_t;

struct ClassRecord {
    ClassId id = 0;
    std::string name;
    std::vector<AttributeId> attribute_ids; // sorted ascending, unique
    std::vector<MethodId> method_ids;       // sorted ascending, unique

    bool operator==(const ClassRecord&) const = default;
};

// The entity graph of one system snapshot. Immutable after construction:
// nothing in the library mutates a built model, which is what makes it safe
// to share read-only across worker threads without locks.
struct SystemModel {
    std::vector<ClassRecord> classes;         // index == class id
    std::vector<std::string> method_names;    // index == method id
    std::vector<std::string> attribute_names; // index == attribute id
    std::vector<ClassId> method_owner;        // method id -> owning class
    std::vector<ClassId> attribute_owner;     // attribute id -> owning class

    std::size_t class_count() const { return classes.size(); }
    std::size_t method_count() const { return method_owner.size(); }
    std::size_t attribute_count() const { return attribute_owner.size(); }

    bool operator==(const SystemModel&) const = default;
};

// Per-method dependency sets, indexed by method id. Both tables always have
// exactly method_count() rows. calls[p] never contains p itself: ingestion
// drops self-calls and collapses duplicates before a table reaches here.
struct DependencyTable {
    std::vector<std::vector<MethodId>> calls;       // sorted ascending, unique
    std::vector<std::vector<AttributeId>> accesses; // sorted ascending, unique

    bool operator==(const DependencyTable&) const = default;
};

// A method's property set: the methods it calls plus the attributes it reads
// or writes. The halves stay in separate fields so the two id spaces cannot
// collide inside one set; set operations treat them independently.
struct PropertySet {
    std::span<const MethodId> called;
    std::span<const AttributeId> accessed;

    std::size_t size() const { return called.size() + accessed.size(); }
};

inline PropertySet properties_of(MethodId method, const DependencyTable& deps) {
    if (method >= deps.calls.size() || method >= deps.accesses.size())
        throw std::out_of_range("properties_of: unknown method id " + std::to_string(method));
    return PropertySet{deps.calls[method], deps.accesses[method]};
}

enum class ViolationKind {
    NonDenseClassIds,
    DuplicateMethodMembership,
    DuplicateAttributeMembership,
    UnownedMethod,
    UnownedAttribute,
    OwnerMismatch,
    DependencyTableSize,
    DanglingCallTarget,
    DanglingAccessTarget,
    SelfCall,
    UnsortedDependencySet,
    UnsupportedSchemaVersion,
};

struct Violation {
    ViolationKind kind;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

namespace detail {

template <class T>
inline bool sorted_unique(const std::vector<T>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

} // namespace detail

// Structural consistency check. Collects every violation it can find instead
// of stopping at the first, so a caller can report them all at once. A model
// that passes here upholds the invariants the rest of the library assumes.
inline ValidationResult validate(const SystemModel& model, const DependencyTable& deps) {
    ValidationResult r;
    auto add = [&r](ViolationKind kind, std::string msg) {
        r.violations.push_back({kind, std::move(msg)});
    };

    const std::size_t n_methods = model.method_count();
    const std::size_t n_attributes = model.attribute_count();

    for (std::size_t i = 0; i < model.classes.size(); ++i) {
        if (model.classes[i].id != i)
            add(ViolationKind::NonDenseClassIds,
                "class at index " + std::to_string(i) + " has id " +
                    std::to_string(model.classes[i].id) + ", expected dense ids");
    }

    // Membership must partition each id space: every id in exactly one class,
    // and the owner tables must agree with the membership lists.
    std::vector<std::uint8_t> method_seen(n_methods, 0);
    std::vector<std::uint8_t> attribute_seen(n_attributes, 0);
    for (const ClassRecord& cls : model.classes) {
        if (!detail::sorted_unique(cls.method_ids))
            add(ViolationKind::UnsortedDependencySet,
                "class " + std::to_string(cls.id) + ": method_ids not sorted unique");
        if (!detail::sorted_unique(cls.attribute_ids))
            add(ViolationKind::UnsortedDependencySet,
                "class " + std::to_string(cls.id) + ": attribute_ids not sorted unique");
        for (MethodId m : cls.method_ids) {
            if (m >= n_methods) {
                add(ViolationKind::DanglingCallTarget,
                    "class " + std::to_string(cls.id) + " lists unknown method " + std::to_string(m));
                continue;
            }
            if (method_seen[m]++)
                add(ViolationKind::DuplicateMethodMembership,
                    "method " + std::to_string(m) + " belongs to more than one class");
            else if (model.method_owner[m] != cls.id)
                add(ViolationKind::OwnerMismatch,
                    "method " + std::to_string(m) + ": owner table says " +
                        std::to_string(model.method_owner[m]) + ", membership says " +
                        std::to_string(cls.id));
        }
        for (AttributeId a : cls.attribute_ids) {
            if (a >= n_attributes) {
                add(ViolationKind::DanglingAccessTarget,
                    "class " + std::to_string(cls.id) + " lists unknown attribute " + std::to_string(a));
                continue;
            }
            if (attribute_seen[a]++)
                add(ViolationKind::DuplicateAttributeMembership,
                    "attribute " + std::to_string(a) + " belongs to more than one class");
            else if (model.attribute_owner[a] != cls.id)
                add(ViolationKind::OwnerMismatch,
                    "attribute " + std::to_string(a) + ": owner table says " +
                        std::to_string(model.attribute_owner[a]) + ", membership says " +
                        std::to_string(cls.id));
        }
    }
    for (MethodId m = 0; m < n_methods; ++m)
        if (!method_seen[m])
            add(ViolationKind::UnownedMethod, "method " + std::to_string(m) + " belongs to no class");
    for (AttributeId a = 0; a < n_attributes; ++a)
        if (!attribute_seen[a])
            add(ViolationKind::UnownedAttribute, "attribute " + std::to_string(a) + " belongs to no class");
    for (ClassId owner : model.method_owner)
        if (owner >= model.classes.size())
            add(ViolationKind::OwnerMismatch, "method owner " + std::to_string(owner) + " is not a class");
    for (ClassId owner : model.attribute_owner)
        if (owner >= model.classes.size())
            add(ViolationKind::OwnerMismatch, "attribute owner " + std::to_string(owner) + " is not a class");

    if (deps.calls.size() != n_methods || deps.accesses.size() != n_methods)
        add(ViolationKind::DependencyTableSize,
            "dependency table has " + std::to_string(deps.calls.size()) + "/" +
                std::to_string(deps.accesses.size()) + " rows, model has " +
                std::to_string(n_methods) + " methods");

    const std::size_t rows = std::min({deps.calls.size(), deps.accesses.size(), n_methods});
    for (MethodId p = 0; p < rows; ++p) {
        if (!detail::sorted_unique(deps.calls[p]))
            add(ViolationKind::UnsortedDependencySet,
                "method " + std::to_string(p) + ": calls not sorted unique");
        if (!detail::sorted_unique(deps.accesses[p]))
            add(ViolationKind::UnsortedDependencySet,
                "method " + std::to_string(p) + ": accesses not sorted unique");
        for (MethodId t : deps.calls[p]) {
            if (t == p)
                add(ViolationKind::SelfCall, "method " + std::to_string(p) + " calls itself");
            else if (t >= n_methods)
                add(ViolationKind::DanglingCallTarget,
                    "method " + std::to_string(p) + " calls unknown method " + std::to_string(t));
        }
        for (AttributeId a : deps.accesses[p])
            if (a >= n_attributes)
                add(ViolationKind::DanglingAccessTarget,
                    "method " + std::to_string(p) + " accesses unknown attribute " + std::to_string(a));
    }

    return r;
}

} // namespace modmetrics
