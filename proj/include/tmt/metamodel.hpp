#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmt/diag.hpp"
#include "tmt/symbols.hpp"
#include "tmt/value.hpp"

namespace tmt {

enum class Multiplicity : std::uint8_t { One, OptOne, Many };  // [1], [0..1], [0..*]

inline const char* multiplicity_text(Multiplicity m) {
    switch (m) {
        case Multiplicity::One: return "[1]";
        case Multiplicity::OptOne: return "[0..1]";
        case Multiplicity::Many: return "[0..*]";
    }
    return "?";
}

struct AttrDecl {
    Symbol name = kNoSymbol;
    ValueKind kind = ValueKind::Int;  // one of Int, Bool, Ident
    SourceSpan span;
};

struct RefDecl {
    Symbol name = kNoSymbol;
    int target = -1;  // metaclass index, resolved by Metamodel::finalize
    Symbol target_name = kNoSymbol;
    Multiplicity mult = Multiplicity::Many;
    SourceSpan span;
};

struct Metaclass {
    Symbol name = kNoSymbol;
    bool is_abstract = false;
    Symbol parent_name = kNoSymbol;
    int parent = -1;
    std::vector<AttrDecl> own_attrs;
    std::vector<RefDecl> own_refs;
    SourceSpan span;

    // Filled in by Metamodel::finalize: inherited features first, then own.
    std::vector<AttrDecl> attrs;
    std::vector<RefDecl> refs;
    std::vector<int> descendants;  // indices of this class and all subclasses, sorted
};

/// Schema of a modeling language: a set of metaclasses with single
/// inheritance, typed attributes and references. Owns the symbol table for
/// every name in its universe.
class Metamodel {
public:
    std::string name;
    std::vector<Metaclass> classes;
    SymbolTable syms;

    /// Resolves parents and reference targets, flattens inherited features,
    /// and checks the structural rules: unique metaclass names, acyclic
    /// inheritance, unique feature names per flattened metaclass.
    /// Throws SpecError on violation.
    void finalize() {
        index_.clear();
        for (int i = 0; i < int(classes.size()); ++i) {
            auto [it, inserted] = index_.emplace(classes[i].name, i);
            if (!inserted)
                throw SpecError(classes[i].span,
                                "duplicate metaclass '" + syms.name(classes[i].name) + "'");
        }
        for (auto& mc : classes) {
            if (mc.parent_name != kNoSymbol) {
                mc.parent = class_index(mc.parent_name);
                if (mc.parent < 0)
                    throw SpecError(mc.span, "unknown parent metaclass '" +
                                                 syms.name(mc.parent_name) + "'");
            }
            for (auto& ref : mc.own_refs) {
                ref.target = class_index(ref.target_name);
                if (ref.target < 0)
                    throw SpecError(ref.span, "reference '" + syms.name(ref.name) +
                                                  "' targets unknown metaclass '" +
                                                  syms.name(ref.target_name) + "'");
            }
        }
        flatten();
        compute_descendants();
    }

    int class_index(Symbol name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    int class_index(std::string_view name) const {
        Symbol s = syms.lookup(name);
        return s == kNoSymbol ? -1 : class_index(s);
    }

    const Metaclass& metaclass(int idx) const { return classes.at(static_cast<std::size_t>(idx)); }

    /// True iff `sub` equals `sup` or inherits from it.
    bool is_subtype(int sub, int sup) const {
        for (int c = sub; c >= 0; c = classes[c].parent)
            if (c == sup) return true;
        return false;
    }

    /// Position of an attribute in the flattened layout, or -1.
    int attr_index(int cls, Symbol attr) const {
        const auto& attrs = classes[cls].attrs;
        for (int i = 0; i < int(attrs.size()); ++i)
            if (attrs[i].name == attr) return i;
        return -1;
    }

    const RefDecl* find_ref(int cls, Symbol ref) const {
        for (const auto& r : classes[cls].refs)
            if (r.name == ref) return &r;
        return nullptr;
    }

private:
    void flatten() {
        std::vector<int> state(classes.size(), 0);  // 0 new, 1 visiting, 2 done
        for (int i = 0; i < int(classes.size()); ++i) flatten_one(i, state);
    }

    void flatten_one(int i, std::vector<int>& state) {
        if (state[i] == 2) return;
        if (state[i] == 1)
            throw SpecError(classes[i].span, "inheritance cycle through metaclass '" +
                                                 syms.name(classes[i].name) + "'");
        state[i] = 1;
        Metaclass& mc = classes[i];
        mc.attrs.clear();
        mc.refs.clear();
        if (mc.parent >= 0) {
            flatten_one(mc.parent, state);
            mc.attrs = classes[mc.parent].attrs;
            mc.refs = classes[mc.parent].refs;
        }
        for (const auto& a : mc.own_attrs) {
            if (std::any_of(mc.attrs.begin(), mc.attrs.end(),
                            [&](const AttrDecl& d) { return d.name == a.name; }))
                throw SpecError(a.span, "duplicate attribute '" + syms.name(a.name) +
                                            "' in metaclass '" + syms.name(mc.name) + "'");
            if (std::any_of(mc.refs.begin(), mc.refs.end(),
                            [&](const RefDecl& d) { return d.name == a.name; }))
                throw SpecError(a.span, "feature name '" + syms.name(a.name) +
                                            "' clashes with an inherited reference");
            mc.attrs.push_back(a);
        }
        for (const auto& r : mc.own_refs) {
            if (std::any_of(mc.refs.begin(), mc.refs.end(),
                            [&](const RefDecl& d) { return d.name == r.name; }) ||
                std::any_of(mc.attrs.begin(), mc.attrs.end(),
                            [&](const AttrDecl& d) { return d.name == r.name; }))
                throw SpecError(r.span, "duplicate feature '" + syms.name(r.name) +
                                            "' in metaclass '" + syms.name(mc.name) + "'");
            mc.refs.push_back(r);
        }
        state[i] = 2;
    }

    void compute_descendants() {
        for (auto& mc : classes) mc.descendants.clear();
        for (int i = 0; i < int(classes.size()); ++i)
            for (int c = i; c >= 0; c = classes[c].parent)
                classes[c].descendants.push_back(i);
        for (auto& mc : classes) std::sort(mc.descendants.begin(), mc.descendants.end());
    }

    std::unordered_map<Symbol, int> index_;
};

}  // namespace tmt
