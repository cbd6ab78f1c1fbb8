#pragma once

#include <sstream>
#include <string>

#include "tmt/ltl_formula.hpp"
#include "tmt/spec.hpp"

namespace tmt {

namespace detail {

// Precedence levels used for minimal parenthesization; higher binds tighter.
inline int expr_prec(const Expr& e) {
    using Op = Expr::Op;
    switch (e.op) {
        case Op::Or: return 2;
        case Op::And: return 3;
        case Op::Not: return 4;
        case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
        case Op::Eq: case Op::Ne: return 5;
        case Op::Add: case Op::Sub: return 6;
        case Op::Mul: case Op::Div: return 7;
        case Op::IntLit: return e.int_val < 0 ? 8 : 10;
        case Op::Attr: case Op::AllInstances:
        case Op::Exists: case Op::ForAll: return 9;
        default: return 10;
    }
}

inline void print_expr(std::ostream& os, const SymbolTable& syms, const Expr& e, int context) {
    using Op = Expr::Op;
    int prec = expr_prec(e);
    bool parens = prec < context;
    if (parens) os << '(';
    auto binary = [&](const char* text, int left_ctx, int right_ctx) {
        print_expr(os, syms, *e.a, left_ctx);
        os << ' ' << text << ' ';
        print_expr(os, syms, *e.b, right_ctx);
    };
    switch (e.op) {
        case Op::IntLit: os << e.int_val; break;
        case Op::BoolLit: os << (e.bool_val ? "true" : "false"); break;
        case Op::ObjectLit: os << '\'' << syms.name(e.sym); break;
        case Op::Var: os << syms.name(e.sym); break;
        case Op::Attr:
            print_expr(os, syms, *e.a, 9);
            os << '.' << syms.name(e.sym);
            break;
        case Op::AllInstances: os << syms.name(e.sym) << ".allInstances"; break;
        case Op::Exists:
        case Op::ForAll:
            if (e.a) {
                print_expr(os, syms, *e.a, 9);
                os << " -> ";
            }
            os << (e.op == Op::Exists ? "exists" : "forAll") << '(' << syms.name(e.sym) << " | ";
            print_expr(os, syms, *e.b, 0);
            os << ')';
            break;
        case Op::Or: binary("or", 2, 3); break;
        case Op::And: binary("and", 3, 4); break;
        case Op::Not:
            os << "not ";
            print_expr(os, syms, *e.a, 4);
            break;
        case Op::Lt: binary("<", 6, 6); break;
        case Op::Le: binary("<=", 6, 6); break;
        case Op::Gt: binary(">", 6, 6); break;
        case Op::Ge: binary(">=", 6, 6); break;
        case Op::Eq: binary("=", 6, 6); break;
        case Op::Ne: binary("<>", 6, 6); break;
        case Op::Add: binary("+", 6, 7); break;
        case Op::Sub: binary("-", 6, 7); break;
        case Op::Mul: binary("*", 7, 8); break;
        case Op::Div: binary("div", 7, 8); break;
    }
    if (parens) os << ')';
}

inline void print_value(std::ostream& os, const SymbolTable& syms, const Value& v) {
    switch (v.kind()) {
        case ValueKind::Int: os << v.as_int(); break;
        case ValueKind::Bool: os << (v.as_bool() ? "true" : "false"); break;
        case ValueKind::Ident: os << syms.name(v.as_ident()); break;
        default: throw SpecError("only scalar attribute values can be printed");
    }
}

inline void print_pattern(std::ostream& os, const Spec& spec, const Pattern& pat,
                          const char* indent) {
    const SymbolTable& syms = spec.metamodel.syms;
    os << "{\n";
    for (const auto& node : pat.nodes) {
        os << indent << "  " << syms.name(node.var) << " : "
           << syms.name(spec.metamodel.metaclass(node.cls).name);
        if (node.guard) {
            os << " where ";
            print_expr(os, syms, *node.guard, 0);
        }
        os << '\n';
    }
    for (const auto& link : pat.links)
        os << indent << "  link " << syms.name(pat.nodes[std::size_t(link.src)].var) << '.'
           << syms.name(link.ref) << " = " << syms.name(pat.nodes[std::size_t(link.dst)].var)
           << '\n';
    os << indent << '}';
}

inline void print_updates(std::ostream& os, const SymbolTable& syms,
                          const std::vector<AttrUpdate>& updates) {
    os << "{ ";
    for (const auto& upd : updates) {
        os << syms.name(upd.attr) << " := ";
        print_expr(os, syms, *upd.value, 0);
        os << ' ';
    }
    os << '}';
}

}  // namespace detail

inline std::string print_expr(const ExprPtr& e, const SymbolTable& syms) {
    std::ostringstream os;
    detail::print_expr(os, syms, *e, 0);
    return os.str();
}

inline std::string print_formula(const LtlPtr& f, const SymbolTable& syms) {
    using Op = LtlFormula::Op;
    std::ostringstream os;
    auto rec = [&](auto&& self, const LtlFormula& g, int context) -> void {
        auto prec = [](const LtlFormula& h) {
            switch (h.op) {
                case Op::Implies: return 1;
                case Op::Or: return 2;
                case Op::And: return 3;
                case Op::Until: case Op::Release: return 4;
                default: return 5;
            }
        };
        int p = prec(g);
        bool parens = p < context;
        if (parens) os << '(';
        switch (g.op) {
            case Op::True: os << "true"; break;
            case Op::False: os << "false"; break;
            case Op::Prop: os << syms.name(g.prop); break;
            case Op::Not: os << "~"; self(self, *g.a, 5); break;
            case Op::Always: os << "[] "; self(self, *g.a, 5); break;
            case Op::Eventually: os << "<> "; self(self, *g.a, 5); break;
            case Op::And: self(self, *g.a, 3); os << " /\\ "; self(self, *g.b, 4); break;
            case Op::Or: self(self, *g.a, 2); os << " \\/ "; self(self, *g.b, 3); break;
            case Op::Implies: self(self, *g.a, 2); os << " -> "; self(self, *g.b, 1); break;
            case Op::Until: self(self, *g.a, 5); os << " U "; self(self, *g.b, 4); break;
            case Op::Release: self(self, *g.a, 5); os << " R "; self(self, *g.b, 4); break;
        }
        if (parens) os << ')';
    };
    rec(rec, *f, 0);
    return os.str();
}

inline void print_model(std::ostream& os, const Spec& spec, const ModelState& model,
                        std::string_view name) {
    const SymbolTable& syms = spec.metamodel.syms;
    os << "model " << name << " {\n";
    for (const auto& obj : model.objects()) {
        if (obj.name == kNoSymbol)
            throw SpecError("initial-model objects must carry declared names");
        const Metaclass& mc = spec.metamodel.metaclass(obj.cls);
        os << "  " << syms.name(obj.name) << " : " << syms.name(mc.name) << " { ";
        for (std::size_t i = 0; i < obj.attrs.size(); ++i) {
            os << syms.name(mc.attrs[i].name) << " := ";
            detail::print_value(os, syms, obj.attrs[i]);
            os << ' ';
        }
        os << "}\n";
    }
    for (const auto& link : model.links()) {
        const ModelObject* src = model.find(link.src);
        const ModelObject* dst = model.find(link.dst);
        os << "  link " << syms.name(src->name) << '.' << syms.name(link.ref) << " = "
           << syms.name(dst->name) << '\n';
    }
    os << "}\n";
}

/// Renders a Spec back to source. parse_spec(print_spec(s)) is structurally
/// equal to s.
inline std::string print_spec(const Spec& spec) {
    const SymbolTable& syms = spec.metamodel.syms;
    std::ostringstream os;
    os << "metamodel " << spec.metamodel.name << " {\n";
    for (const auto& mc : spec.metamodel.classes) {
        os << "  ";
        if (mc.is_abstract) os << "abstract ";
        os << "metaclass " << syms.name(mc.name);
        if (mc.parent_name != kNoSymbol) os << " extends " << syms.name(mc.parent_name);
        os << " {\n";
        for (const auto& a : mc.own_attrs)
            os << "    attr " << syms.name(a.name) << " : " << kind_name(a.kind) << '\n';
        for (const auto& r : mc.own_refs)
            os << "    ref " << syms.name(r.name) << " : " << syms.name(r.target_name) << ' '
               << multiplicity_text(r.mult) << '\n';
        os << "  }\n";
    }
    os << "}\n";

    for (const auto& [name, model] : spec.initial_models) {
        os << '\n';
        print_model(os, spec, model, syms.name(name));
    }

    for (const auto& rule : spec.rules) {
        os << "\nrule " << syms.name(rule.name);
        if (rule.kind == RuleKind::Atomic) {
            os << " atomic duration [" << rule.duration_lo << ',' << rule.duration_hi << ']';
            if (rule.period) os << " periodic " << *rule.period;
            if (!rule.eager) os << " noneager";
        } else {
            os << " ongoing";
            if (rule.limit) os << " limit " << *rule.limit;
        }
        os << " {\n  lhs ";
        detail::print_pattern(os, spec, rule.lhs, "  ");
        os << '\n';
        for (const auto& nac : rule.nacs) {
            os << "  nac ";
            detail::print_pattern(os, spec, nac, "  ");
            os << '\n';
        }
        if (rule.kind == RuleKind::Atomic) {
            os << "  rhs {\n";
            for (const auto& keep : rule.rhs.kept) {
                os << "    " << syms.name(rule.lhs.nodes[std::size_t(keep.node)].var);
                if (!keep.updates.empty()) {
                    os << ' ';
                    detail::print_updates(os, syms, keep.updates);
                }
                os << '\n';
            }
            for (const auto& create : rule.rhs.created) {
                os << "    " << syms.name(create.var) << " : "
                   << syms.name(spec.metamodel.metaclass(create.cls).name) << ' ';
                detail::print_updates(os, syms, create.inits);
                os << '\n';
            }
            for (const auto& link : rule.rhs.links)
                os << "    link " << syms.name(link.src_var) << '.' << syms.name(link.ref)
                   << " = " << syms.name(link.dst_var) << '\n';
            os << "  }\n";
        } else {
            os << "  effect {\n";
            for (const auto& assign : rule.effect.assignments) {
                os << "    " << syms.name(rule.lhs.nodes[std::size_t(assign.node)].var) << '.'
                   << syms.name(assign.attr) << " := ";
                detail::print_expr(os, syms, *assign.value, 0);
                os << '\n';
            }
            os << "  }\n";
        }
        os << "}\n";
    }

    for (const auto& [name, e] : spec.props) {
        os << "\nprop " << syms.name(name) << " = ";
        detail::print_expr(os, syms, *e, 0);
        os << '\n';
    }
    return os.str();
}

/// Structural spec equality: same metamodel shape, models, rules and props,
/// ignoring source spans and symbol numbering.
inline bool spec_equal(const Spec& a, const Spec& b) {
    return print_spec(a) == print_spec(b);
}

}  // namespace tmt
