#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tmt/diag.hpp"
#include "tmt/symbols.hpp"

namespace tmt {

struct LtlFormula;
using LtlPtr = std::shared_ptr<const LtlFormula>;

/// Linear temporal logic formula over named propositions.
struct LtlFormula {
    enum class Op {
        True, False, Prop,
        Not, And, Or, Implies,
        Always, Eventually, Until,
        Release,  // internal, produced by negation normal form
    };

    Op op;
    Symbol prop = kNoSymbol;
    LtlPtr a;
    LtlPtr b;
    SourceSpan span;

    static LtlPtr make(Op op, LtlPtr a = nullptr, LtlPtr b = nullptr, SourceSpan s = {}) {
        auto f = std::make_shared<LtlFormula>();
        f->op = op;
        f->a = std::move(a);
        f->b = std::move(b);
        f->span = std::move(s);
        return f;
    }
    static LtlPtr prop_ref(Symbol p, SourceSpan s = {}) {
        auto f = std::make_shared<LtlFormula>();
        f->op = Op::Prop;
        f->prop = p;
        f->span = std::move(s);
        return f;
    }
};

inline bool ltl_equal(const LtlPtr& x, const LtlPtr& y) {
    if (!x || !y) return !x && !y;
    if (x->op != y->op || x->prop != y->prop) return false;
    return ltl_equal(x->a, y->a) && ltl_equal(x->b, y->b);
}

/// Negation normal form over {literals, /\, \/, U, R}: implications expanded,
/// negations pushed to propositions, [] and <> rewritten to R and U.
inline LtlPtr nnf(const LtlPtr& f, bool negate = false) {
    using Op = LtlFormula::Op;
    switch (f->op) {
        case Op::True: return LtlFormula::make(negate ? Op::False : Op::True);
        case Op::False: return LtlFormula::make(negate ? Op::True : Op::False);
        case Op::Prop:
            return negate ? LtlFormula::make(Op::Not, LtlFormula::prop_ref(f->prop, f->span))
                          : f;
        case Op::Not:
            if (f->a->op == Op::Prop && !negate) return f;  // already a literal
            return nnf(f->a, !negate);
        case Op::And:
            return LtlFormula::make(negate ? Op::Or : Op::And, nnf(f->a, negate),
                                    nnf(f->b, negate));
        case Op::Or:
            return LtlFormula::make(negate ? Op::And : Op::Or, nnf(f->a, negate),
                                    nnf(f->b, negate));
        case Op::Implies:
            return LtlFormula::make(negate ? Op::And : Op::Or, nnf(f->a, !negate),
                                    nnf(f->b, negate));
        case Op::Always:  // []a = false R a; ~[]a = true U ~a
            return negate ? LtlFormula::make(Op::Until, LtlFormula::make(Op::True),
                                             nnf(f->a, true))
                          : LtlFormula::make(Op::Release, LtlFormula::make(Op::False),
                                             nnf(f->a, false));
        case Op::Eventually:  // <>a = true U a; ~<>a = false R ~a
            return negate ? LtlFormula::make(Op::Release, LtlFormula::make(Op::False),
                                             nnf(f->a, true))
                          : LtlFormula::make(Op::Until, LtlFormula::make(Op::True),
                                             nnf(f->a, false));
        case Op::Until:
            return LtlFormula::make(negate ? Op::Release : Op::Until, nnf(f->a, negate),
                                    nnf(f->b, negate));
        case Op::Release:
            return LtlFormula::make(negate ? Op::Until : Op::Release, nnf(f->a, negate),
                                    nnf(f->b, negate));
    }
    throw SpecError("malformed formula");
}

/// Propositions referenced by a formula, in first-occurrence order.
inline void collect_props(const LtlPtr& f, std::vector<Symbol>& out) {
    if (!f) return;
    if (f->op == LtlFormula::Op::Prop) {
        for (Symbol s : out)
            if (s == f->prop) return;
        out.push_back(f->prop);
        return;
    }
    collect_props(f->a, out);
    collect_props(f->b, out);
}

}  // namespace tmt
