#pragma once

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tmt/expr.hpp"
#include "tmt/model.hpp"

namespace tmt {

/// Variable bindings for evaluation. Scoped pushes/pops; lookups walk
/// innermost-first so quantifier variables shadow outer ones.
class Env {
public:
    void push(Symbol var, Value v) { slots_.emplace_back(var, std::move(v)); }
    void pop() { slots_.pop_back(); }

    const Value* lookup(Symbol var) const {
        for (auto it = slots_.rbegin(); it != slots_.rend(); ++it)
            if (it->first == var) return &it->second;
        return nullptr;
    }

private:
    std::vector<std::pair<Symbol, Value>> slots_;
};

namespace detail {

/// Metaclasses whose flattened attribute set contains every attribute the
/// body accesses directly on the bound variable. Used to give receiver-less
/// quantifiers a typed instance set.
inline std::vector<int> inferred_candidate_classes(const Metamodel& mm, Symbol var,
                                                   const ExprPtr& body) {
    std::vector<Symbol> attrs;
    attrs_accessed_on(body, var, attrs);
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    std::vector<int> classes;
    for (int c = 0; c < int(mm.classes.size()); ++c) {
        bool ok = true;
        for (Symbol a : attrs)
            if (mm.attr_index(c, a) < 0) {
                ok = false;
                break;
            }
        if (ok) classes.push_back(c);
    }
    return classes;
}

}  // namespace detail

/// Resolves an object literal: first by declared object name, then by the
/// unique object whose `id` attribute carries the identifier. Throws
/// EvalError when unresolved or ambiguous.
inline Oid resolve_object_literal(const ModelState& model, const Metamodel& mm, Symbol name,
                                  const SourceSpan& span) {
    if (const ModelObject* named = model.find_named(name)) return named->oid;
    Symbol id_attr = mm.syms.lookup("id");
    std::optional<Oid> found;
    if (id_attr != kNoSymbol) {
        for (const auto& obj : model.objects()) {
            int idx = mm.attr_index(obj.cls, id_attr);
            if (idx < 0 || std::size_t(idx) >= obj.attrs.size()) continue;
            const Value& v = obj.attrs[std::size_t(idx)];
            if (v.kind() == ValueKind::Ident && v.as_ident() == name) {
                if (found)
                    throw EvalError(span, "ambiguous object literal '" + mm.syms.name(name) + "'");
                found = obj.oid;
            }
        }
    }
    if (!found) throw EvalError(span, "unbound object literal '" + mm.syms.name(name) + "'");
    return *found;
}

/// Evaluates an expression against a model. Pure: the result depends only on
/// (expr, model, bindings). Kind mismatches at runtime indicate a bug in the
/// spec under analysis and abort with a located EvalError.
inline Value eval(const ExprPtr& e, const ModelState& model, const Metamodel& mm, Env& env) {
    using Op = Expr::Op;
    auto eval_int = [&](const ExprPtr& x) {
        Value v = eval(x, model, mm, env);
        if (v.kind() != ValueKind::Int)
            throw EvalError(x->span, std::string("expected int, got ") + kind_name(v.kind()));
        return v.as_int();
    };
    auto eval_bool = [&](const ExprPtr& x) {
        Value v = eval(x, model, mm, env);
        if (v.kind() != ValueKind::Bool)
            throw EvalError(x->span, std::string("expected bool, got ") + kind_name(v.kind()));
        return v.as_bool();
    };

    switch (e->op) {
        case Op::IntLit: return Value::integer(e->int_val);
        case Op::BoolLit: return Value::boolean(e->bool_val);
        case Op::ObjectLit:
            return Value::object(resolve_object_literal(model, mm, e->sym, e->span));
        case Op::Var: {
            const Value* v = env.lookup(e->sym);
            if (!v) throw EvalError(e->span, "unbound variable '" + mm.syms.name(e->sym) + "'");
            return *v;
        }
        case Op::Attr: {
            Value base = eval(e->a, model, mm, env);
            if (base.kind() != ValueKind::Object)
                throw EvalError(e->span, std::string("attribute access on ") +
                                             kind_name(base.kind()) + " value");
            const ModelObject* obj = model.find(base.as_object());
            if (!obj) throw EvalError(e->span, "attribute access on a deleted object");
            int idx = mm.attr_index(obj->cls, e->sym);
            if (idx < 0)
                throw EvalError(e->span, "metaclass '" +
                                             mm.syms.name(mm.metaclass(obj->cls).name) +
                                             "' has no attribute '" + mm.syms.name(e->sym) + "'");
            return obj->attrs[std::size_t(idx)];
        }
        case Op::AllInstances: {
            int cls = mm.class_index(e->sym);
            if (cls < 0)
                throw EvalError(e->span, "unknown metaclass '" + mm.syms.name(e->sym) + "'");
            std::vector<Value> items;
            for (Oid oid : all_instances(model, mm, cls)) items.push_back(Value::object(oid));
            return Value::collection(std::move(items));
        }
        case Op::Exists:
        case Op::ForAll: {
            bool exists = e->op == Op::Exists;
            auto test = [&](Value element) {
                env.push(e->sym, std::move(element));
                bool b = eval_bool(e->b);
                env.pop();
                return b;
            };
            if (e->a) {
                Value recv = eval(e->a, model, mm, env);
                if (recv.kind() != ValueKind::Collection)
                    throw EvalError(e->span, "quantifier receiver is not a collection");
                for (const Value& item : recv.as_collection())
                    if (test(item) == exists) return Value::boolean(exists);
                return Value::boolean(!exists);
            }
            // Receiver-less form ranges over every object whose metaclass
            // declares all attributes the body reads off the variable.
            auto classes = detail::inferred_candidate_classes(mm, e->sym, e->b);
            for (const auto& obj : model.objects()) {
                if (!std::binary_search(classes.begin(), classes.end(), obj.cls)) continue;
                if (test(Value::object(obj.oid)) == exists) return Value::boolean(exists);
            }
            return Value::boolean(!exists);
        }
        case Op::Lt: return Value::boolean(eval_int(e->a) < eval_int(e->b));
        case Op::Le: return Value::boolean(eval_int(e->a) <= eval_int(e->b));
        case Op::Gt: return Value::boolean(eval_int(e->a) > eval_int(e->b));
        case Op::Ge: return Value::boolean(eval_int(e->a) >= eval_int(e->b));
        case Op::Eq:
        case Op::Ne: {
            Value lhs = eval(e->a, model, mm, env);
            Value rhs = eval(e->b, model, mm, env);
            if (lhs.kind() != rhs.kind())
                throw EvalError(e->span, std::string("comparison of unlike kinds: ") +
                                             kind_name(lhs.kind()) + " vs " +
                                             kind_name(rhs.kind()));
            bool eq = lhs == rhs;
            return Value::boolean(e->op == Op::Eq ? eq : !eq);
        }
        case Op::Add: return Value::integer(eval_int(e->a) + eval_int(e->b));
        case Op::Sub: return Value::integer(eval_int(e->a) - eval_int(e->b));
        case Op::Mul: return Value::integer(eval_int(e->a) * eval_int(e->b));
        case Op::Div: {
            std::int64_t d = eval_int(e->b);
            if (d == 0) throw EvalError(e->span, "division by zero");
            return Value::integer(eval_int(e->a) / d);  // truncates toward zero
        }
        case Op::And: return Value::boolean(eval_bool(e->a) && eval_bool(e->b));
        case Op::Or: return Value::boolean(eval_bool(e->a) || eval_bool(e->b));
        case Op::Not: return Value::boolean(!eval_bool(e->a));
    }
    throw EvalError(e->span, "malformed expression");
}

inline Value eval(const ExprPtr& e, const ModelState& model, const Metamodel& mm) {
    Env env;
    return eval(e, model, mm, env);
}

inline bool eval_bool_query(const ExprPtr& e, const ModelState& model, const Metamodel& mm) {
    Value v = eval(e, model, mm);
    if (v.kind() != ValueKind::Bool) throw EvalError(e->span, "query is not boolean");
    return v.as_bool();
}

// ---------------------------------------------------------------------------
// Static kinds

/// Static kind of an expression: a value kind plus, for objects and
/// collections, the element metaclass.
struct StaticKind {
    ValueKind kind;
    int cls = -1;

    static StaticKind of(ValueKind k) { return {k, -1}; }
    static StaticKind object(int cls) { return {ValueKind::Object, cls}; }
    static StaticKind collection(int cls) { return {ValueKind::Collection, cls}; }
};

/// Static well-kindedness checker. `named_classes` maps declared object
/// names (from initial models) to their metaclass for 'literal resolution.
class KindChecker {
public:
    KindChecker(const Metamodel& mm, const std::unordered_map<Symbol, int>& named_classes)
        : mm_(mm), named_(named_classes) {}

    /// Checks and returns the kind; throws SpecError at the offending span.
    StaticKind check(const ExprPtr& e) {
        using Op = Expr::Op;
        switch (e->op) {
            case Op::IntLit: return StaticKind::of(ValueKind::Int);
            case Op::BoolLit: return StaticKind::of(ValueKind::Bool);
            case Op::ObjectLit: {
                auto it = named_.find(e->sym);
                if (it == named_.end())
                    throw SpecError(e->span, "object literal '" + mm_.syms.name(e->sym) +
                                                 "' does not name a declared object");
                return StaticKind::object(it->second);
            }
            case Op::Var: {
                for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
                    if (it->first == e->sym) return it->second;
                throw SpecError(e->span, "unbound variable '" + mm_.syms.name(e->sym) + "'");
            }
            case Op::Attr: {
                StaticKind base = check(e->a);
                if (base.kind != ValueKind::Object)
                    throw SpecError(e->span, "attribute access on a non-object expression");
                int idx = mm_.attr_index(base.cls, e->sym);
                if (idx < 0)
                    throw SpecError(e->span,
                                    "metaclass '" + mm_.syms.name(mm_.metaclass(base.cls).name) +
                                        "' has no attribute '" + mm_.syms.name(e->sym) + "'");
                return StaticKind::of(mm_.metaclass(base.cls).attrs[std::size_t(idx)].kind);
            }
            case Op::AllInstances: {
                int cls = mm_.class_index(e->sym);
                if (cls < 0)
                    throw SpecError(e->span,
                                    "unknown metaclass '" + mm_.syms.name(e->sym) + "'");
                return StaticKind::collection(cls);
            }
            case Op::Exists:
            case Op::ForAll: {
                if (e->a) {
                    StaticKind recv = check(e->a);
                    if (recv.kind != ValueKind::Collection)
                        throw SpecError(e->span, "quantifier receiver is not a collection");
                    check_body(e, recv.cls);
                } else {
                    auto classes = detail::inferred_candidate_classes(mm_, e->sym, e->b);
                    if (classes.empty())
                        throw SpecError(e->span,
                                        "no metaclass declares every attribute accessed on '" +
                                            mm_.syms.name(e->sym) + "'");
                    for (int cls : classes) check_body(e, cls);
                }
                return StaticKind::of(ValueKind::Bool);
            }
            case Op::Lt:
            case Op::Le:
            case Op::Gt:
            case Op::Ge:
                require(e->a, ValueKind::Int);
                require(e->b, ValueKind::Int);
                return StaticKind::of(ValueKind::Bool);
            case Op::Eq:
            case Op::Ne: {
                StaticKind lhs = check(e->a);
                StaticKind rhs = check(e->b);
                if (lhs.kind != rhs.kind)
                    throw SpecError(e->span, std::string("comparison of unlike kinds: ") +
                                                 kind_name(lhs.kind) + " vs " +
                                                 kind_name(rhs.kind));
                if (lhs.kind == ValueKind::Collection)
                    throw SpecError(e->span, "collections cannot be compared");
                return StaticKind::of(ValueKind::Bool);
            }
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div:
                require(e->a, ValueKind::Int);
                require(e->b, ValueKind::Int);
                return StaticKind::of(ValueKind::Int);
            case Op::And:
            case Op::Or:
                require(e->a, ValueKind::Bool);
                require(e->b, ValueKind::Bool);
                return StaticKind::of(ValueKind::Bool);
            case Op::Not:
                require(e->a, ValueKind::Bool);
                return StaticKind::of(ValueKind::Bool);
        }
        throw SpecError(e->span, "malformed expression");
    }

    void require(const ExprPtr& e, ValueKind want) {
        StaticKind got = check(e);
        if (got.kind != want)
            throw SpecError(e->span, std::string("expected ") + kind_name(want) + ", got " +
                                         kind_name(got.kind));
    }

    void push_var(Symbol var, StaticKind kind) { scope_.emplace_back(var, kind); }
    void pop_var() { scope_.pop_back(); }

private:
    void check_body(const ExprPtr& e, int element_cls) {
        push_var(e->sym, StaticKind::object(element_cls));
        require(e->b, ValueKind::Bool);
        pop_var();
    }

    const Metamodel& mm_;
    const std::unordered_map<Symbol, int>& named_;
    std::vector<std::pair<Symbol, StaticKind>> scope_;
};

}  // namespace tmt
