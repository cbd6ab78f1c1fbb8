#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmt {

/// Interned string id. Dense, stable for the lifetime of the owning table.
using Symbol = std::int32_t;
constexpr Symbol kNoSymbol = -1;

/// Append-only string interner. All names in a universe (metaclass, feature,
/// rule, variable, and object names, plus identifier values) share one table
/// so that equality is an integer compare.
class SymbolTable {
public:
    Symbol intern(std::string_view text) {
        auto it = index_.find(text);
        if (it != index_.end()) return it->second;
        Symbol s = static_cast<Symbol>(names_.size());
        names_.emplace_back(text);
        index_.emplace(names_.back(), s);
        return s;
    }

    /// Returns kNoSymbol if the string was never interned.
    Symbol lookup(std::string_view text) const {
        auto it = index_.find(text);
        return it == index_.end() ? kNoSymbol : it->second;
    }

    const std::string& name(Symbol s) const { return names_.at(static_cast<std::size_t>(s)); }

    std::size_t size() const { return names_.size(); }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view v) const { return std::hash<std::string_view>{}(v); }
    };
    struct Eq {
        using is_transparent = void;
        bool operator()(std::string_view a, std::string_view b) const { return a == b; }
    };

    std::vector<std::string> names_;
    std::unordered_map<std::string, Symbol, Hash, Eq> index_;
};

}  // namespace tmt
