#pragma once

#include <memory>

#include "tmt/diag.hpp"
#include "tmt/symbols.hpp"
#include "tmt/value.hpp"

namespace tmt {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression AST for guards, attribute computations, queries and
/// proposition definitions. Immutable; nodes are shared freely.
struct Expr {
    enum class Op {
        IntLit,
        BoolLit,
        ObjectLit,      // 'name
        Var,
        Attr,           // a . sym
        AllInstances,   // sym . allInstances
        Exists,         // a -> exists(sym | b), a may be null (inferred instance set)
        ForAll,         // a -> forAll(sym | b), likewise
        Lt, Le, Gt, Ge, Eq, Ne,
        Add, Sub, Mul, Div,
        And, Or, Not,
    };

    Op op;
    SourceSpan span;
    std::int64_t int_val = 0;
    bool bool_val = false;
    Symbol sym = kNoSymbol;
    ExprPtr a;
    ExprPtr b;

    static ExprPtr int_lit(std::int64_t v, SourceSpan s = {}) {
        return node(Op::IntLit, s, [&](Expr& e) { e.int_val = v; });
    }
    static ExprPtr bool_lit(bool v, SourceSpan s = {}) {
        return node(Op::BoolLit, s, [&](Expr& e) { e.bool_val = v; });
    }
    static ExprPtr object_lit(Symbol name, SourceSpan s = {}) {
        return node(Op::ObjectLit, s, [&](Expr& e) { e.sym = name; });
    }
    static ExprPtr var(Symbol name, SourceSpan s = {}) {
        return node(Op::Var, s, [&](Expr& e) { e.sym = name; });
    }
    static ExprPtr attr(ExprPtr base, Symbol name, SourceSpan s = {}) {
        return node(Op::Attr, s, [&](Expr& e) {
            e.a = std::move(base);
            e.sym = name;
        });
    }
    static ExprPtr all_instances(Symbol metaclass, SourceSpan s = {}) {
        return node(Op::AllInstances, s, [&](Expr& e) { e.sym = metaclass; });
    }
    static ExprPtr quantifier(Op op, ExprPtr receiver, Symbol var, ExprPtr body,
                              SourceSpan s = {}) {
        return node(op, s, [&](Expr& e) {
            e.a = std::move(receiver);
            e.sym = var;
            e.b = std::move(body);
        });
    }
    static ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs, SourceSpan s = {}) {
        return node(op, s, [&](Expr& e) {
            e.a = std::move(lhs);
            e.b = std::move(rhs);
        });
    }
    static ExprPtr negation(ExprPtr operand, SourceSpan s = {}) {
        return node(Op::Not, s, [&](Expr& e) { e.a = std::move(operand); });
    }

private:
    template <typename F>
    static ExprPtr node(Op op, SourceSpan s, F&& fill) {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->span = std::move(s);
        fill(*e);
        return e;
    }
};

/// Structural equality, ignoring source spans.
inline bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    if (x->op != y->op || x->int_val != y->int_val || x->bool_val != y->bool_val ||
        x->sym != y->sym)
        return false;
    return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
}

/// Collects the attribute names accessed directly on `var` (as `var.attr`)
/// anywhere in the expression, skipping subtrees where `var` is rebound.
inline void attrs_accessed_on(const ExprPtr& e, Symbol var, std::vector<Symbol>& out) {
    if (!e) return;
    if ((e->op == Expr::Op::Exists || e->op == Expr::Op::ForAll) && e->sym == var) {
        attrs_accessed_on(e->a, var, out);  // receiver is outside the binder
        return;
    }
    if (e->op == Expr::Op::Attr && e->a && e->a->op == Expr::Op::Var && e->a->sym == var)
        out.push_back(e->sym);
    attrs_accessed_on(e->a, var, out);
    attrs_accessed_on(e->b, var, out);
}

}  // namespace tmt
