#pragma once

#include <string>
#include <string_view>

#include "tmt/lexer.hpp"
#include "tmt/ltl_formula.hpp"
#include "tmt/spec.hpp"

namespace tmt {

namespace detail {

/// Recursive-descent parser over the token stream. Every construct carries
/// the span of its first token; errors are located SpecErrors.
class Parser {
public:
    Parser(std::string_view src, const std::string& file, SymbolTable& syms)
        : tokens_(lex(src, file)), syms_(syms) {}

    // -- token plumbing -----------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    const Token& next() {
        const Token& t = peek();
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }

    bool at(Tok k) const { return peek().is(k); }
    bool at_word(std::string_view w) const { return peek().is_word(w); }

    bool accept(Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }

    bool accept_word(std::string_view w) {
        if (!at_word(w)) return false;
        next();
        return true;
    }

    const Token& expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what + ", found " + token_desc(peek()));
        return next();
    }

    void expect_word(std::string_view w) {
        if (!accept_word(w))
            fail("expected '" + std::string(w) + "', found " + token_desc(peek()));
    }

    Symbol ident(const char* what) {
        const Token& t = expect(Tok::Ident, what);
        return syms_.intern(t.text);
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SpecError(peek().span, msg); }

    void expect_eof() {
        if (!at(Tok::Eof)) fail("expected end of input, found " + token_desc(peek()));
    }

    // -- expressions ----------------------------------------------------------

    ExprPtr parse_expr() {
        SourceSpan span = peek().span;
        ExprPtr lhs = parse_or();
        if (at(Tok::Arrow) && !quantifier_follows(1)) {
            next();
            ExprPtr rhs = parse_expr();  // right-associative implication
            return Expr::binary(Expr::Op::Or, Expr::negation(std::move(lhs), span), std::move(rhs),
                                span);
        }
        return lhs;
    }

    // -- LTL ------------------------------------------------------------------

    LtlPtr parse_formula() {
        SourceSpan span = peek().span;
        LtlPtr lhs = parse_ltl_or();
        if (accept(Tok::Arrow))
            return LtlFormula::make(LtlFormula::Op::Implies, std::move(lhs), parse_formula(), span);
        return lhs;
    }

private:
    bool quantifier_follows(std::size_t ahead) const {
        return peek(ahead).is_word("exists") || peek(ahead).is_word("forAll");
    }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (at_word("or")) {
            SourceSpan span = next().span;
            e = Expr::binary(Expr::Op::Or, std::move(e), parse_and(), span);
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_not();
        while (at_word("and")) {
            SourceSpan span = next().span;
            e = Expr::binary(Expr::Op::And, std::move(e), parse_not(), span);
        }
        return e;
    }

    ExprPtr parse_not() {
        if (at_word("not")) {
            SourceSpan span = next().span;
            return Expr::negation(parse_not(), span);
        }
        return parse_cmp();
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_add();
        Expr::Op op;
        switch (peek().kind) {
            case Tok::Lt: op = Expr::Op::Lt; break;
            case Tok::Le: op = Expr::Op::Le; break;
            case Tok::Gt: op = Expr::Op::Gt; break;
            case Tok::Ge: op = Expr::Op::Ge; break;
            case Tok::Eq: op = Expr::Op::Eq; break;
            case Tok::Ne: op = Expr::Op::Ne; break;
            default: return e;
        }
        SourceSpan span = next().span;
        return Expr::binary(op, std::move(e), parse_add(), span);  // non-associative
    }

    ExprPtr parse_add() {
        ExprPtr e = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Expr::Op op = at(Tok::Plus) ? Expr::Op::Add : Expr::Op::Sub;
            SourceSpan span = next().span;
            e = Expr::binary(op, std::move(e), parse_mul(), span);
        }
        return e;
    }

    ExprPtr parse_mul() {
        ExprPtr e = parse_unary();
        while (at(Tok::Star) || at_word("div")) {
            Expr::Op op = at(Tok::Star) ? Expr::Op::Mul : Expr::Op::Div;
            SourceSpan span = next().span;
            e = Expr::binary(op, std::move(e), parse_unary(), span);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at(Tok::Minus)) {
            SourceSpan span = next().span;
            if (at(Tok::Int)) {
                const Token& t = next();
                return Expr::int_lit(-t.int_val, span);
            }
            return Expr::binary(Expr::Op::Sub, Expr::int_lit(0, span), parse_unary(), span);
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        for (;;) {
            if (at(Tok::Dot)) {
                SourceSpan span = next().span;
                const Token& t = expect(Tok::Ident, "an attribute name");
                if (t.text == "allInstances") {
                    if (e->op != Expr::Op::Var)
                        throw SpecError(span, "allInstances needs a metaclass name");
                    e = Expr::all_instances(e->sym, span);
                } else {
                    e = Expr::attr(std::move(e), syms_.intern(t.text), span);
                }
                continue;
            }
            if (at(Tok::Arrow) && quantifier_follows(1)) {
                next();
                e = parse_quantifier(std::move(e));
                continue;
            }
            break;
        }
        return e;
    }

    ExprPtr parse_quantifier(ExprPtr receiver) {
        SourceSpan span = peek().span;
        Expr::Op op = accept_word("exists") ? Expr::Op::Exists
                                            : (expect_word("forAll"), Expr::Op::ForAll);
        expect(Tok::LParen, "'('");
        Symbol var = ident("a variable name");
        expect(Tok::Pipe, "'|'");
        ExprPtr body = parse_expr();
        expect(Tok::RParen, "')'");
        return Expr::quantifier(op, std::move(receiver), var, std::move(body), span);
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                next();
                return Expr::int_lit(t.int_val, t.span);
            }
            case Tok::ObjLit: {
                next();
                return Expr::object_lit(syms_.intern(t.text), t.span);
            }
            case Tok::LParen: {
                next();
                ExprPtr e = parse_expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Ident: {
                if (t.text == "true" || t.text == "false") {
                    next();
                    return Expr::bool_lit(t.text == "true", t.span);
                }
                if (t.text == "exists" || t.text == "forAll")
                    return parse_quantifier(nullptr);  // inferred instance set
                next();
                return Expr::var(syms_.intern(t.text), t.span);
            }
            default:
                fail("expected an expression, found " + token_desc(t));
        }
    }

    LtlPtr parse_ltl_or() {
        LtlPtr f = parse_ltl_and();
        while (at(Tok::OrOp)) {
            SourceSpan span = next().span;
            f = LtlFormula::make(LtlFormula::Op::Or, std::move(f), parse_ltl_and(), span);
        }
        return f;
    }

    LtlPtr parse_ltl_and() {
        LtlPtr f = parse_ltl_until();
        while (at(Tok::AndOp)) {
            SourceSpan span = next().span;
            f = LtlFormula::make(LtlFormula::Op::And, std::move(f), parse_ltl_until(), span);
        }
        return f;
    }

    LtlPtr parse_ltl_until() {
        LtlPtr f = parse_ltl_unary();
        if (at_word("U")) {
            SourceSpan span = next().span;
            return LtlFormula::make(LtlFormula::Op::Until, std::move(f), parse_ltl_until(), span);
        }
        return f;
    }

    LtlPtr parse_ltl_unary() {
        const Token& t = peek();
        if (t.is(Tok::LBracket)) {
            SourceSpan span = next().span;
            expect(Tok::RBracket, "']'");
            return LtlFormula::make(LtlFormula::Op::Always, parse_ltl_unary(), nullptr, span);
        }
        if (t.is(Tok::Ne)) {  // the two-character token <>
            SourceSpan span = next().span;
            return LtlFormula::make(LtlFormula::Op::Eventually, parse_ltl_unary(), nullptr, span);
        }
        if (t.is(Tok::Tilde)) {
            SourceSpan span = next().span;
            return LtlFormula::make(LtlFormula::Op::Not, parse_ltl_unary(), nullptr, span);
        }
        if (t.is(Tok::LParen)) {
            next();
            LtlPtr f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.is(Tok::Ident)) {
            if (t.text == "true" || t.text == "false") {
                next();
                return LtlFormula::make(t.text == "true" ? LtlFormula::Op::True
                                                         : LtlFormula::Op::False,
                                        nullptr, nullptr, t.span);
            }
            if (t.text == "U") fail("'U' is reserved for the until connective");
            next();
            return LtlFormula::prop_ref(syms_.intern(t.text), t.span);
        }
        fail("expected a formula, found " + token_desc(t));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    SymbolTable& syms_;
};

// -- spec-level parsing -------------------------------------------------------

class SpecParser {
public:
    SpecParser(std::string_view src, const std::string& file, Spec& spec)
        : p_(src, file, spec.metamodel.syms), spec_(spec) {}

    void run() {
        parse_metamodel();
        spec_.metamodel.finalize();
        while (p_.at_word("model")) parse_model();
        while (p_.at_word("rule")) parse_rule();
        while (p_.at_word("prop")) parse_prop();
        p_.expect_eof();
        check_props();
    }

private:
    Metamodel& mm() { return spec_.metamodel; }

    void parse_metamodel() {
        p_.expect_word("metamodel");
        mm().name = mm().syms.name(p_.ident("a metamodel name"));
        p_.expect(Tok::LBrace, "'{'");
        while (!p_.accept(Tok::RBrace)) {
            Metaclass mc;
            mc.span = p_.peek().span;
            mc.is_abstract = p_.accept_word("abstract");
            p_.expect_word("metaclass");
            mc.name = p_.ident("a metaclass name");
            if (p_.accept_word("extends")) mc.parent_name = p_.ident("a metaclass name");
            p_.expect(Tok::LBrace, "'{'");
            while (!p_.accept(Tok::RBrace)) {
                if (p_.accept_word("attr")) {
                    AttrDecl a;
                    a.span = p_.peek().span;
                    a.name = p_.ident("an attribute name");
                    p_.expect(Tok::Colon, "':'");
                    if (p_.accept_word("int")) a.kind = ValueKind::Int;
                    else if (p_.accept_word("bool")) a.kind = ValueKind::Bool;
                    else if (p_.accept_word("ident")) a.kind = ValueKind::Ident;
                    else p_.fail("expected 'int', 'bool' or 'ident'");
                    mc.own_attrs.push_back(a);
                } else if (p_.accept_word("ref")) {
                    RefDecl r;
                    r.span = p_.peek().span;
                    r.name = p_.ident("a reference name");
                    p_.expect(Tok::Colon, "':'");
                    r.target_name = p_.ident("a metaclass name");
                    r.mult = parse_multiplicity();
                    mc.own_refs.push_back(r);
                } else {
                    p_.fail("expected 'attr', 'ref' or '}', found " + token_desc(p_.peek()));
                }
            }
            mm().classes.push_back(std::move(mc));
        }
    }

    Multiplicity parse_multiplicity() {
        p_.expect(Tok::LBracket, "a multiplicity");
        const Token& lo = p_.expect(Tok::Int, "'1' or '0'");
        if (lo.int_val == 1 && p_.accept(Tok::RBracket)) return Multiplicity::One;
        if (lo.int_val != 0) p_.fail("multiplicity must be [1], [0..1] or [0..*]");
        p_.expect(Tok::DotDot, "'..'");
        Multiplicity m;
        if (p_.accept(Tok::Star)) m = Multiplicity::Many;
        else if (p_.accept(Tok::Int)) m = Multiplicity::OptOne;  // [0..1]
        else p_.fail("multiplicity must be [1], [0..1] or [0..*]");
        p_.expect(Tok::RBracket, "']'");
        return m;
    }

    void parse_model() {
        p_.expect_word("model");
        SourceSpan span = p_.peek().span;
        Symbol name = p_.ident("a model name");
        for (const auto& [n, m] : spec_.initial_models)
            if (n == name) throw SpecError(span, "duplicate model '" + mm().syms.name(name) + "'");
        ModelState model;
        p_.expect(Tok::LBrace, "'{'");
        std::uint64_t oid = 1;
        while (p_.at(Tok::Ident) && !p_.at_word("link")) parse_objdecl(model, oid);
        while (p_.accept_word("link")) parse_linkdecl(model);
        p_.expect(Tok::RBrace, "'}'");
        spec_.initial_models.emplace_back(name, std::move(model));
    }

    void parse_objdecl(ModelState& model, std::uint64_t& oid) {
        SourceSpan span = p_.peek().span;
        Symbol name = p_.ident("an object name");
        if (model.find_named(name))
            throw SpecError(span, "duplicate object name '" + mm().syms.name(name) + "'");
        p_.expect(Tok::Colon, "':'");
        SourceSpan cls_span = p_.peek().span;
        Symbol cls_name = p_.ident("a metaclass name");
        int cls = mm().class_index(cls_name);
        if (cls < 0)
            throw SpecError(cls_span, "unknown metaclass '" + mm().syms.name(cls_name) + "'");
        const Metaclass& mc = mm().metaclass(cls);
        if (mc.is_abstract)
            throw SpecError(cls_span,
                            "cannot instantiate abstract metaclass '" + mm().syms.name(cls_name) + "'");
        std::vector<Value> attrs(mc.attrs.size());
        std::vector<char> covered(mc.attrs.size(), 0);
        p_.expect(Tok::LBrace, "'{'");
        while (!p_.accept(Tok::RBrace)) {
            SourceSpan aspan = p_.peek().span;
            Symbol attr = p_.ident("an attribute name");
            int idx = mm().attr_index(cls, attr);
            if (idx < 0)
                throw SpecError(aspan, "metaclass '" + mm().syms.name(cls_name) +
                                           "' has no attribute '" + mm().syms.name(attr) + "'");
            p_.expect(Tok::Assign, "':='");
            Value v = parse_literal();
            if (v.kind() != mc.attrs[std::size_t(idx)].kind)
                throw SpecError(aspan, std::string("literal kind is ") + kind_name(v.kind()) +
                                           ", attribute is declared " +
                                           kind_name(mc.attrs[std::size_t(idx)].kind));
            if (covered[std::size_t(idx)]) throw SpecError(aspan, "attribute assigned twice");
            covered[std::size_t(idx)] = 1;
            attrs[std::size_t(idx)] = v;
        }
        for (std::size_t i = 0; i < covered.size(); ++i)
            if (!covered[i])
                throw SpecError(span, "object '" + mm().syms.name(name) +
                                          "' leaves attribute '" +
                                          mm().syms.name(mc.attrs[i].name) + "' unset");
        model.add_object(ModelObject{Oid{oid++}, cls, std::move(attrs), name});
        auto [it, inserted] = spec_.named_classes.emplace(name, cls);
        if (!inserted && it->second != cls)
            throw SpecError(span, "object name '" + mm().syms.name(name) +
                                      "' reused with a different metaclass");
    }

    Value parse_literal() {
        const Token& t = p_.peek();
        if (t.is(Tok::Minus)) {
            p_.next();
            const Token& n = p_.expect(Tok::Int, "an integer");
            return Value::integer(-n.int_val);
        }
        if (t.is(Tok::Int)) {
            p_.next();
            return Value::integer(t.int_val);
        }
        if (t.is_word("true") || t.is_word("false")) {
            p_.next();
            return Value::boolean(t.text == "true");
        }
        if (t.is(Tok::Ident)) {
            p_.next();
            return Value::ident(mm().syms.intern(t.text));
        }
        p_.fail("expected a literal, found " + token_desc(t));
    }

    void parse_linkdecl(ModelState& model) {
        SourceSpan span = p_.peek().span;
        Symbol src_name = p_.ident("an object name");
        p_.expect(Tok::Dot, "'.'");
        Symbol ref = p_.ident("a reference name");
        p_.expect(Tok::Eq, "'='");
        Symbol dst_name = p_.ident("an object name");
        const ModelObject* src = model.find_named(src_name);
        const ModelObject* dst = model.find_named(dst_name);
        if (!src) throw SpecError(span, "unknown object '" + mm().syms.name(src_name) + "'");
        if (!dst) throw SpecError(span, "unknown object '" + mm().syms.name(dst_name) + "'");
        const RefDecl* decl = mm().find_ref(src->cls, ref);
        if (!decl)
            throw SpecError(span, "metaclass '" + mm().syms.name(mm().metaclass(src->cls).name) +
                                      "' has no reference '" + mm().syms.name(ref) + "'");
        if (!mm().is_subtype(dst->cls, decl->target))
            throw SpecError(span, "link target is not a '" +
                                      mm().syms.name(mm().metaclass(decl->target).name) + "'");
        model.add_link(Link{src->oid, ref, dst->oid});
    }

    void parse_rule() {
        p_.expect_word("rule");
        Rule rule;
        rule.span = p_.peek().span;
        rule.name = p_.ident("a rule name");
        for (const auto& r : spec_.rules)
            if (r.name == rule.name)
                throw SpecError(rule.span, "duplicate rule '" + mm().syms.name(rule.name) + "'");
        if (p_.accept_word("atomic")) {
            rule.kind = RuleKind::Atomic;
            p_.expect_word("duration");
            p_.expect(Tok::LBracket, "'['");
            rule.duration_lo = p_.expect(Tok::Int, "an integer").int_val;
            p_.expect(Tok::Comma, "','");
            rule.duration_hi = p_.expect(Tok::Int, "an integer").int_val;
            p_.expect(Tok::RBracket, "']'");
            if (p_.accept_word("periodic"))
                rule.period = p_.expect(Tok::Int, "a period").int_val;
            if (p_.accept_word("noneager")) rule.eager = false;
        } else if (p_.accept_word("ongoing")) {
            rule.kind = RuleKind::Ongoing;
            if (p_.accept_word("limit")) rule.limit = p_.expect(Tok::Int, "a time limit").int_val;
        } else {
            p_.fail("expected 'atomic' or 'ongoing'");
        }
        p_.expect(Tok::LBrace, "'{'");
        p_.expect_word("lhs");
        rule.lhs = parse_pattern();
        while (p_.accept_word("nac")) rule.nacs.push_back(parse_pattern());
        if (rule.kind == RuleKind::Atomic) {
            p_.expect_word("rhs");
            rule.rhs = parse_rhs(rule.lhs);
        } else {
            p_.expect_word("effect");
            rule.effect = parse_effect(rule.lhs);
        }
        p_.expect(Tok::RBrace, "'}'");
        validate_rule(rule, mm(), spec_.named_classes);
        spec_.rules.push_back(std::move(rule));
    }

    Pattern parse_pattern() {
        Pattern pat;
        p_.expect(Tok::LBrace, "'{'");
        while (!p_.accept(Tok::RBrace)) {
            if (p_.accept_word("link")) {
                PatternLink link;
                link.span = p_.peek().span;
                Symbol src = p_.ident("a pattern variable");
                p_.expect(Tok::Dot, "'.'");
                link.ref = p_.ident("a reference name");
                p_.expect(Tok::Eq, "'='");
                SourceSpan dspan = p_.peek().span;
                Symbol dst = p_.ident("a pattern variable");
                link.src = pat.node_index(src);
                link.dst = pat.node_index(dst);
                if (link.src < 0)
                    throw SpecError(link.span, "link endpoint '" + mm().syms.name(src) +
                                                   "' is not a declared pattern node");
                if (link.dst < 0)
                    throw SpecError(dspan, "link endpoint '" + mm().syms.name(dst) +
                                               "' is not a declared pattern node");
                pat.links.push_back(link);
                continue;
            }
            PatternNode node;
            node.span = p_.peek().span;
            node.var = p_.ident("a pattern variable");
            p_.expect(Tok::Colon, "':'");
            SourceSpan cspan = p_.peek().span;
            Symbol cls_name = p_.ident("a metaclass name");
            node.cls = mm().class_index(cls_name);
            if (node.cls < 0)
                throw SpecError(cspan, "unknown metaclass '" + mm().syms.name(cls_name) + "'");
            if (p_.accept_word("where")) node.guard = p_.parse_expr();
            pat.nodes.push_back(std::move(node));
        }
        return pat;
    }

    RhsSpec parse_rhs(const Pattern& lhs) {
        RhsSpec rhs;
        p_.expect(Tok::LBrace, "'{'");
        while (!p_.accept(Tok::RBrace)) {
            if (p_.accept_word("link")) {
                RhsLink link;
                link.span = p_.peek().span;
                link.src_var = p_.ident("a variable");
                p_.expect(Tok::Dot, "'.'");
                link.ref = p_.ident("a reference name");
                p_.expect(Tok::Eq, "'='");
                link.dst_var = p_.ident("a variable");
                rhs.links.push_back(link);
                continue;
            }
            SourceSpan span = p_.peek().span;
            Symbol var = p_.ident("a variable");
            if (p_.accept(Tok::Colon)) {
                RhsCreate create;
                create.span = span;
                create.var = var;
                SourceSpan cspan = p_.peek().span;
                Symbol cls_name = p_.ident("a metaclass name");
                create.cls = mm().class_index(cls_name);
                if (create.cls < 0)
                    throw SpecError(cspan, "unknown metaclass '" + mm().syms.name(cls_name) + "'");
                create.inits = parse_updates();
                rhs.created.push_back(std::move(create));
            } else {
                RhsKeep keep;
                keep.span = span;
                keep.node = lhs.node_index(var);
                if (keep.node < 0)
                    throw SpecError(span, "RHS node '" + mm().syms.name(var) +
                                              "' is not an LHS node (create it with 'name : Class')");
                if (p_.at(Tok::LBrace)) keep.updates = parse_updates();
                rhs.kept.push_back(std::move(keep));
            }
        }
        return rhs;
    }

    std::vector<AttrUpdate> parse_updates() {
        std::vector<AttrUpdate> out;
        p_.expect(Tok::LBrace, "'{'");
        while (!p_.accept(Tok::RBrace)) {
            AttrUpdate upd;
            upd.span = p_.peek().span;
            upd.attr = p_.ident("an attribute name");
            p_.expect(Tok::Assign, "':='");
            upd.value = p_.parse_expr();
            out.push_back(std::move(upd));
        }
        return out;
    }

    EffectSpec parse_effect(const Pattern& lhs) {
        mm().syms.intern("T");  // elapsed-time variable is always in scope here
        EffectSpec effect;
        p_.expect(Tok::LBrace, "'{'");
        while (!p_.accept(Tok::RBrace)) {
            EffectAssign assign;
            assign.span = p_.peek().span;
            Symbol var = p_.ident("an LHS variable");
            assign.node = lhs.node_index(var);
            if (assign.node < 0)
                throw SpecError(assign.span,
                                "effect target '" + mm().syms.name(var) + "' is not an LHS node");
            p_.expect(Tok::Dot, "'.'");
            assign.attr = p_.ident("an attribute name");
            p_.expect(Tok::Assign, "':='");
            assign.value = p_.parse_expr();
            effect.assignments.push_back(std::move(assign));
        }
        return effect;
    }

    void parse_prop() {
        p_.expect_word("prop");
        SourceSpan span = p_.peek().span;
        Symbol name = p_.ident("a proposition name");
        for (const auto& [n, e] : spec_.props)
            if (n == name)
                throw SpecError(span, "duplicate proposition '" + mm().syms.name(name) + "'");
        p_.expect(Tok::Eq, "'='");
        spec_.props.emplace_back(name, p_.parse_expr());
    }

    void check_props() {
        KindChecker kinds(mm(), spec_.named_classes);
        for (const auto& [name, e] : spec_.props) kinds.require(e, ValueKind::Bool);
    }

    Parser p_;
    Spec& spec_;
};

}  // namespace detail

/// Parses a complete specification. Total: returns a well-formed Spec or
/// throws a located SpecError.
inline Spec parse_spec(std::string_view text, const std::string& file = "<spec>") {
    Spec spec;
    detail::SpecParser parser(text, file, spec);
    parser.run();
    return spec;
}

/// Parses a query expression using (and extending) the spec's symbol table,
/// then checks that it is boolean over the spec's metamodel.
inline ExprPtr parse_query(std::string_view text, Spec& spec, const std::string& file = "<query>") {
    detail::Parser p(text, file, spec.metamodel.syms);
    ExprPtr e = p.parse_expr();
    p.expect_eof();
    KindChecker kinds(spec.metamodel, spec.named_classes);
    kinds.require(e, ValueKind::Bool);
    return e;
}

/// Syntax-only query parse, for tools that check later.
inline ExprPtr parse_query_syntax(std::string_view text, SymbolTable& syms,
                                  const std::string& file = "<query>") {
    detail::Parser p(text, file, syms);
    ExprPtr e = p.parse_expr();
    p.expect_eof();
    return e;
}

/// Parses an LTL formula; every proposition must be declared in the spec.
inline LtlPtr parse_formula(std::string_view text, Spec& spec,
                            const std::string& file = "<formula>") {
    detail::Parser p(text, file, spec.metamodel.syms);
    LtlPtr f = p.parse_formula();
    p.expect_eof();
    std::vector<Symbol> props;
    collect_props(f, props);
    for (Symbol s : props)
        if (!spec.find_prop(s))
            throw SpecError(f->span,
                            "unknown proposition '" + spec.metamodel.syms.name(s) + "'");
    return f;
}

/// Syntax-only formula parse.
inline LtlPtr parse_formula_syntax(std::string_view text, SymbolTable& syms,
                                   const std::string& file = "<formula>") {
    detail::Parser p(text, file, syms);
    LtlPtr f = p.parse_formula();
    p.expect_eof();
    return f;
}

}  // namespace tmt
