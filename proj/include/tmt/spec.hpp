#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "tmt/model.hpp"
#include "tmt/rule.hpp"

namespace tmt {

/// One source unit: a metamodel, its named initial models, timed rules and
/// named boolean propositions.
struct Spec {
    Metamodel metamodel;
    std::vector<std::pair<Symbol, ModelState>> initial_models;
    std::vector<Rule> rules;
    std::vector<std::pair<Symbol, ExprPtr>> props;

    /// Declared object name -> metaclass, merged over all initial models.
    std::unordered_map<Symbol, int> named_classes;

    const ModelState* find_model(std::string_view name) const {
        Symbol s = metamodel.syms.lookup(name);
        for (const auto& [n, m] : initial_models)
            if (n == s) return &m;
        return nullptr;
    }

    const ExprPtr* find_prop(Symbol name) const {
        for (const auto& [n, e] : props)
            if (n == name) return &e;
        return nullptr;
    }

    const ExprPtr* find_prop(std::string_view name) const {
        Symbol s = metamodel.syms.lookup(name);
        return s == kNoSymbol ? nullptr : find_prop(s);
    }

    const Rule* find_rule(std::string_view name) const {
        Symbol s = metamodel.syms.lookup(name);
        for (const auto& r : rules)
            if (r.name == s) return &r;
        return nullptr;
    }

    int rule_index(Symbol name) const {
        for (int i = 0; i < int(rules.size()); ++i)
            if (rules[i].name == name) return i;
        return -1;
    }
};

}  // namespace tmt
