#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tmt/diag.hpp"
#include "tmt/symbols.hpp"

namespace tmt {

/// Opaque object identity. Ordering is used only to make iteration
/// deterministic; the semantics are invariant under renaming.
struct Oid {
    std::uint64_t v = 0;

    friend auto operator<=>(const Oid&, const Oid&) = default;
};

using TimePoint = std::int64_t;

enum class ValueKind : std::uint8_t { Int, Bool, Ident, Object, Collection };

inline const char* kind_name(ValueKind k) {
    switch (k) {
        case ValueKind::Int: return "int";
        case ValueKind::Bool: return "bool";
        case ValueKind::Ident: return "ident";
        case ValueKind::Object: return "object";
        case ValueKind::Collection: return "collection";
    }
    return "?";
}

/// Runtime value: integer, boolean, interned identifier, object handle, or a
/// finite collection. Collections only arise transiently during evaluation;
/// stored attribute values are always scalar.
class Value {
public:
    struct Ident {
        Symbol s;
        friend bool operator==(const Ident&, const Ident&) = default;
    };
    using Collection = std::shared_ptr<const std::vector<Value>>;

    Value() : rep_(std::int64_t{0}) {}
    static Value integer(std::int64_t v) { return Value(Rep{v}); }
    static Value boolean(bool b) { return Value(Rep{b}); }
    static Value ident(Symbol s) { return Value(Rep{Ident{s}}); }
    static Value object(Oid o) { return Value(Rep{o}); }
    static Value collection(std::vector<Value> items) {
        return Value(Rep{std::make_shared<const std::vector<Value>>(std::move(items))});
    }

    ValueKind kind() const { return static_cast<ValueKind>(rep_.index()); }

    std::int64_t as_int() const { return expect<std::int64_t>(ValueKind::Int); }
    bool as_bool() const { return expect<bool>(ValueKind::Bool); }
    Symbol as_ident() const { return expect<Ident>(ValueKind::Ident).s; }
    Oid as_object() const { return expect<Oid>(ValueKind::Object); }
    const std::vector<Value>& as_collection() const {
        return *expect<Collection>(ValueKind::Collection);
    }

    /// Structural equality; collections compare element-wise.
    friend bool operator==(const Value& a, const Value& b) {
        if (a.kind() != b.kind()) return false;
        switch (a.kind()) {
            case ValueKind::Int: return std::get<std::int64_t>(a.rep_) == std::get<std::int64_t>(b.rep_);
            case ValueKind::Bool: return std::get<bool>(a.rep_) == std::get<bool>(b.rep_);
            case ValueKind::Ident: return std::get<Ident>(a.rep_) == std::get<Ident>(b.rep_);
            case ValueKind::Object: return std::get<Oid>(a.rep_) == std::get<Oid>(b.rep_);
            case ValueKind::Collection: return a.as_collection() == b.as_collection();
        }
        return false;
    }

private:
    using Rep = std::variant<std::int64_t, bool, Ident, Oid, Collection>;

    explicit Value(Rep rep) : rep_(std::move(rep)) {}

    template <typename T>
    const T& expect(ValueKind want) const {
        if (kind() != want)
            throw EvalError("value kind mismatch: expected " + std::string(kind_name(want)) +
                            ", got " + kind_name(kind()));
        return std::get<T>(rep_);
    }

    Rep rep_;
};

}  // namespace tmt

template <>
struct std::hash<tmt::Oid> {
    std::size_t operator()(const tmt::Oid& o) const { return std::hash<std::uint64_t>{}(o.v); }
};
