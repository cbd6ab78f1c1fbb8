#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tmt/eval.hpp"
#include "tmt/model.hpp"

namespace tmt {

// ---------------------------------------------------------------------------
// Patterns and rules

struct PatternNode {
    Symbol var = kNoSymbol;
    int cls = -1;
    ExprPtr guard;  // optional, boolean over pattern variables
    SourceSpan span;
};

struct PatternLink {
    int src = -1;  // node indices
    Symbol ref = kNoSymbol;
    int dst = -1;
    SourceSpan span;
};

struct Pattern {
    std::vector<PatternNode> nodes;
    std::vector<PatternLink> links;

    int node_index(Symbol var) const {
        for (int i = 0; i < int(nodes.size()); ++i)
            if (nodes[i].var == var) return i;
        return -1;
    }
};

/// An injective binding of pattern nodes to objects, parallel to
/// Pattern::nodes.
struct Match {
    std::vector<Oid> oids;

    friend bool operator==(const Match&, const Match&) = default;
};

/// The objects a match binds, deduplicated and sorted. Used for the
/// same-participants triggering exclusion.
inline std::vector<Oid> participants(const Match& m) {
    std::vector<Oid> out = m.oids;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct AttrUpdate {
    Symbol attr = kNoSymbol;
    ExprPtr value;
    SourceSpan span;
};

struct RhsKeep {
    int node = -1;  // LHS node index
    std::vector<AttrUpdate> updates;
    SourceSpan span;
};

struct RhsCreate {
    Symbol var = kNoSymbol;
    int cls = -1;
    std::vector<AttrUpdate> inits;
    SourceSpan span;
};

struct RhsLink {
    Symbol src_var = kNoSymbol;
    Symbol ref = kNoSymbol;
    Symbol dst_var = kNoSymbol;
    SourceSpan span;
};

/// Postcondition of an atomic rule. LHS nodes absent from `kept` are
/// deleted together with their incident links; LHS links not re-stated in
/// `links` are removed.
struct RhsSpec {
    std::vector<RhsKeep> kept;
    std::vector<RhsCreate> created;
    std::vector<RhsLink> links;
};

struct EffectAssign {
    int node = -1;  // LHS node index
    Symbol attr = kNoSymbol;
    ExprPtr value;  // may use the elapsed-time variable T
    SourceSpan span;
};

struct EffectSpec {
    std::vector<EffectAssign> assignments;
};

enum class RuleKind : std::uint8_t { Atomic, Ongoing };

struct Rule {
    Symbol name = kNoSymbol;
    RuleKind kind = RuleKind::Atomic;
    TimePoint duration_lo = 0;
    TimePoint duration_hi = 0;
    std::optional<TimePoint> period;
    bool eager = true;
    std::optional<TimePoint> limit;  // ongoing only
    Pattern lhs;
    std::vector<Pattern> nacs;
    RhsSpec rhs;        // atomic
    EffectSpec effect;  // ongoing
    SourceSpan span;

    // Derived during validation.
    std::vector<int> deleted_nodes;  // LHS nodes absent from the RHS
    std::vector<char> lhs_kept;      // per LHS node, whether it survives
};

// ---------------------------------------------------------------------------
// Matching

namespace detail {

class MatchFinder {
public:
    MatchFinder(const Pattern& pattern, const ModelState& model, const Metamodel& mm,
                const std::vector<std::pair<Symbol, Oid>>& pre_bound)
        : pattern_(pattern), model_(model), mm_(mm) {
        bound_.assign(pattern.nodes.size(), Oid{0});
        fixed_.assign(pattern.nodes.size(), false);
        feasible_ = true;
        for (const auto& [var, oid] : pre_bound) {
            int idx = pattern.node_index(var);
            if (idx < 0) {
                env_.push(var, Value::object(oid));  // referenced from guards only
                continue;
            }
            const ModelObject* obj = model.find(oid);
            if (!obj || !mm.is_subtype(obj->cls, pattern.nodes[std::size_t(idx)].cls)) {
                feasible_ = false;
                return;
            }
            bound_[std::size_t(idx)] = oid;
            fixed_[std::size_t(idx)] = true;
        }
        // Injectivity over the pattern's own nodes, including pre-bound ones.
        for (std::size_t i = 0; feasible_ && i < bound_.size(); ++i)
            for (std::size_t j = i + 1; j < bound_.size(); ++j)
                if (fixed_[i] && fixed_[j] && bound_[i] == bound_[j]) feasible_ = false;
        compute_guard_schedule();
    }

    /// Enumerates matches in lexicographic order of the binding tuple.
    /// The visitor returns false to stop early.
    template <typename F>
    bool enumerate(F&& visit) {
        if (!feasible_) return true;
        return descend(0, visit);
    }

private:
    void compute_guard_schedule() {
        guard_at_.assign(pattern_.nodes.size(), std::vector<int>{});
        for (int i = 0; i < int(pattern_.nodes.size()); ++i) {
            if (!pattern_.nodes[std::size_t(i)].guard) continue;
            int at = i;
            std::vector<Symbol> vars;
            collect_vars(pattern_.nodes[std::size_t(i)].guard, vars);
            for (Symbol v : vars) {
                int idx = pattern_.node_index(v);
                if (idx > at) at = idx;
            }
            guard_at_[std::size_t(at)].push_back(i);
        }
        link_at_.assign(pattern_.nodes.size(), std::vector<const PatternLink*>{});
        for (const auto& link : pattern_.links) {
            int at = std::max(link.src, link.dst);
            link_at_[std::size_t(at)].push_back(&link);
        }
    }

    static void collect_vars(const ExprPtr& e, std::vector<Symbol>& out) {
        if (!e) return;
        if (e->op == Expr::Op::Var) out.push_back(e->sym);
        collect_vars(e->a, out);
        collect_vars(e->b, out);
    }

    template <typename F>
    bool descend(std::size_t i, F&& visit) {
        if (i == pattern_.nodes.size()) return visit(Match{bound_});
        if (fixed_[i]) {
            if (!constraints_hold(i)) return true;
            return with_env(i, [&] { return descend(i + 1, visit); });
        }
        const auto& desc = mm_.metaclass(pattern_.nodes[i].cls).descendants;
        for (const auto& obj : model_.objects()) {
            if (!std::binary_search(desc.begin(), desc.end(), obj.cls)) continue;
            bool used = false;
            for (std::size_t j = 0; j < pattern_.nodes.size(); ++j)
                if ((fixed_[j] || j < i) && bound_[j] == obj.oid) used = true;
            if (used) continue;
            bound_[i] = obj.oid;
            if (!constraints_hold(i)) continue;
            bool keep_going = with_env(i, [&] { return descend(i + 1, visit); });
            if (!keep_going) return false;
        }
        return true;
    }

    bool constraints_hold(std::size_t i) {
        for (const PatternLink* link : link_at_[i]) {
            Oid src = link->src == int(i) ? bound_[i] : bound_[std::size_t(link->src)];
            Oid dst = link->dst == int(i) ? bound_[i] : bound_[std::size_t(link->dst)];
            if (link->src != int(i) && !(fixed_[std::size_t(link->src)] || link->src < int(i)))
                continue;  // endpoint not bound yet; rechecked at its index
            if (link->dst != int(i) && !(fixed_[std::size_t(link->dst)] || link->dst < int(i)))
                continue;
            if (!model_.has_link(Link{src, link->ref, dst})) return false;
        }
        if (guard_at_[i].empty()) return true;
        // Guards may reference any pattern variable bound so far.
        Env env = env_;
        for (std::size_t j = 0; j < pattern_.nodes.size(); ++j)
            if (j <= i || fixed_[j]) env.push(pattern_.nodes[j].var, Value::object(bound_[j]));
        for (int g : guard_at_[i]) {
            Value v = eval(pattern_.nodes[std::size_t(g)].guard, model_, mm_, env);
            if (v.kind() != ValueKind::Bool)
                throw EvalError(pattern_.nodes[std::size_t(g)].guard->span,
                                "pattern guard is not boolean");
            if (!v.as_bool()) return false;
        }
        return true;
    }

    template <typename F>
    bool with_env(std::size_t, F&& f) {
        return f();
    }

    const Pattern& pattern_;
    const ModelState& model_;
    const Metamodel& mm_;
    Env env_;  // pre-bound variables that are not pattern nodes
    std::vector<Oid> bound_;
    std::vector<char> fixed_;
    bool feasible_ = true;
    std::vector<std::vector<int>> guard_at_;
    std::vector<std::vector<const PatternLink*>> link_at_;
};

/// True iff the NAC pattern has at least one occurrence extending the given
/// LHS bindings. Shared variable names are pre-bound; fresh NAC variables
/// are existential and stay injective within the NAC's own nodes.
inline bool nac_matches(const Pattern& nac, const Pattern& lhs, const Match& m,
                        const ModelState& model, const Metamodel& mm) {
    std::vector<std::pair<Symbol, Oid>> pre;
    for (std::size_t i = 0; i < lhs.nodes.size(); ++i)
        pre.emplace_back(lhs.nodes[i].var, m.oids[i]);
    MatchFinder finder(nac, model, mm, pre);
    bool found = false;
    finder.enumerate([&](const Match&) {
        found = true;
        return false;
    });
    return found;
}

}  // namespace detail

/// All injective, guard- and link-satisfying bindings of `pattern` for which
/// no NAC occurrence exists, in lexicographic order of the binding tuples.
inline std::vector<Match> find_matches(const Pattern& pattern, std::span<const Pattern> nacs,
                                       const ModelState& model, const Metamodel& mm) {
    std::vector<Match> out;
    detail::MatchFinder finder(pattern, model, mm, {});
    finder.enumerate([&](const Match& m) {
        for (const Pattern& nac : nacs)
            if (detail::nac_matches(nac, pattern, m, model, mm)) return true;
        out.push_back(m);
        return true;
    });
    return out;
}

inline std::vector<Match> find_matches(const Rule& rule, const ModelState& model,
                                       const Metamodel& mm) {
    return find_matches(rule.lhs, rule.nacs, model, mm);
}

/// True iff the match still satisfies the rule's LHS: objects exist with
/// compatible classes, links are present, guards hold. NACs are not
/// re-checked; they gate triggering, not realization.
inline bool match_still_valid(const Pattern& lhs, const Match& m, const ModelState& model,
                              const Metamodel& mm, bool check_guards_and_links = true) {
    Env env;
    for (std::size_t i = 0; i < lhs.nodes.size(); ++i) {
        const ModelObject* obj = model.find(m.oids[i]);
        if (!obj || !mm.is_subtype(obj->cls, lhs.nodes[i].cls)) return false;
        env.push(lhs.nodes[i].var, Value::object(m.oids[i]));
    }
    if (!check_guards_and_links) return true;
    for (const auto& link : lhs.links)
        if (!model.has_link(Link{m.oids[std::size_t(link.src)], link.ref,
                                 m.oids[std::size_t(link.dst)]}))
            return false;
    for (const auto& node : lhs.nodes) {
        if (!node.guard) continue;
        Value v = eval(node.guard, model, mm, env);
        if (v.kind() != ValueKind::Bool || !v.as_bool()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Application

namespace detail {

inline Env match_env(const Pattern& lhs, const Match& m) {
    Env env;
    for (std::size_t i = 0; i < lhs.nodes.size(); ++i)
        env.push(lhs.nodes[i].var, Value::object(m.oids[i]));
    return env;
}

inline int checked_attr_index(const Metamodel& mm, int cls, Symbol attr, const SourceSpan& span) {
    int idx = mm.attr_index(cls, attr);
    if (idx < 0)
        throw SpecError(span, "metaclass '" + mm.syms.name(mm.metaclass(cls).name) +
                                  "' has no attribute '" + mm.syms.name(attr) + "'");
    return idx;
}

}  // namespace detail

/// Applies an atomic rule's RHS to a valid match. Attribute computations read
/// the pre-state; deletions take incident links with them; created objects
/// draw fresh oids from `next_oid`. Throws SpecError (naming the rule) if the
/// result violates a touched [1]/[0..1] multiplicity.
inline ModelState apply(const Rule& rule, const Match& match, const ModelState& model,
                        const Metamodel& mm, std::uint64_t& next_oid,
                        std::vector<Oid>* created_out = nullptr) {
    Env env = detail::match_env(rule.lhs, match);

    // Evaluate everything against the pre-state snapshot first.
    struct Write {
        Oid oid;
        int attr;
        Value value;
    };
    std::vector<Write> writes;
    for (const auto& keep : rule.rhs.kept) {
        Oid oid = match.oids[std::size_t(keep.node)];
        const ModelObject* obj = model.find(oid);
        for (const auto& upd : keep.updates) {
            int idx = detail::checked_attr_index(mm, obj->cls, upd.attr, upd.span);
            writes.push_back({oid, idx, eval(upd.value, model, mm, env)});
        }
    }
    struct Creation {
        const RhsCreate* decl;
        Oid oid;
        std::vector<Value> attrs;
    };
    std::vector<Creation> creations;
    for (const auto& create : rule.rhs.created) {
        const Metaclass& mc = mm.metaclass(create.cls);
        std::vector<Value> attrs(mc.attrs.size());
        for (const auto& init : create.inits) {
            int idx = detail::checked_attr_index(mm, create.cls, init.attr, init.span);
            attrs[std::size_t(idx)] = eval(init.value, model, mm, env);
        }
        creations.push_back({&create, Oid{next_oid++}, std::move(attrs)});
    }

    auto var_oid = [&](Symbol var, const SourceSpan& span) -> Oid {
        int idx = rule.lhs.node_index(var);
        if (idx >= 0) return match.oids[std::size_t(idx)];
        for (const auto& c : creations)
            if (c.decl->var == var) return c.oid;
        throw SpecError(span, "unknown variable '" + mm.syms.name(var) + "' in rule RHS");
    };

    ModelState result = model;
    std::vector<std::pair<Oid, Symbol>> touched;  // (source, ref) pairs to re-validate

    // Deletions, tracking links whose surviving source loses an edge.
    std::vector<Oid> deleted;
    for (int n : rule.deleted_nodes) deleted.push_back(match.oids[std::size_t(n)]);
    for (const auto& link : model.links()) {
        bool src_deleted = std::find(deleted.begin(), deleted.end(), link.src) != deleted.end();
        bool dst_deleted = std::find(deleted.begin(), deleted.end(), link.dst) != deleted.end();
        if (dst_deleted && !src_deleted) touched.emplace_back(link.src, link.ref);
    }
    for (Oid oid : deleted) result.erase_object(oid);

    for (const auto& w : writes)
        if (ModelObject* obj = result.find(w.oid)) obj->attrs[std::size_t(w.attr)] = w.value;

    for (auto& c : creations) {
        result.add_object(ModelObject{c.oid, c.decl->cls, std::move(c.attrs), kNoSymbol});
        if (created_out) created_out->push_back(c.oid);
        for (const auto& ref : mm.metaclass(c.decl->cls).refs)
            if (ref.mult != Multiplicity::Many) touched.emplace_back(c.oid, ref.name);
    }

    // An LHS link between two kept nodes is removed unless the RHS re-states it.
    for (const auto& link : rule.lhs.links) {
        if (!rule.lhs_kept[std::size_t(link.src)] || !rule.lhs_kept[std::size_t(link.dst)])
            continue;
        Symbol src_var = rule.lhs.nodes[std::size_t(link.src)].var;
        Symbol dst_var = rule.lhs.nodes[std::size_t(link.dst)].var;
        bool restated = std::any_of(rule.rhs.links.begin(), rule.rhs.links.end(),
                                    [&](const RhsLink& rl) {
                                        return rl.src_var == src_var && rl.ref == link.ref &&
                                               rl.dst_var == dst_var;
                                    });
        if (restated) continue;
        Oid src = match.oids[std::size_t(link.src)];
        result.remove_link(Link{src, link.ref, match.oids[std::size_t(link.dst)]});
        touched.emplace_back(src, link.ref);
    }
    for (const auto& rl : rule.rhs.links) {
        Oid src = var_oid(rl.src_var, rl.span);
        Oid dst = var_oid(rl.dst_var, rl.span);
        result.add_link(Link{src, rl.ref, dst});
        touched.emplace_back(src, rl.ref);
    }

    for (const auto& [oid, ref] : touched) {
        const ModelObject* obj = result.find(oid);
        if (!obj) continue;
        const RefDecl* decl = mm.find_ref(obj->cls, ref);
        if (!decl) continue;
        std::size_t n = result.link_count(oid, ref);
        if ((decl->mult == Multiplicity::One && n != 1) ||
            (decl->mult == Multiplicity::OptOne && n > 1))
            throw SpecError(rule.span, "rule '" + mm.syms.name(rule.name) + "' leaves " +
                                           multiplicity_text(decl->mult) + " reference '" +
                                           mm.syms.name(ref) + "' with " + std::to_string(n) +
                                           " links");
    }
    return result;
}

struct EffectWrite {
    Oid oid;
    int attr = -1;
    Symbol attr_name = kNoSymbol;
    Value value;
};

/// Evaluates one ongoing match's assignments against the pre-state with
/// T bound to the elapsed time. Does not mutate the model.
inline std::vector<EffectWrite> effect_writes(const Rule& rule, const Match& match,
                                              const ModelState& model, const Metamodel& mm,
                                              TimePoint elapsed) {
    Env env = detail::match_env(rule.lhs, match);
    env.push(mm.syms.lookup("T"), Value::integer(elapsed));
    std::vector<EffectWrite> out;
    for (const auto& assign : rule.effect.assignments) {
        Oid oid = match.oids[std::size_t(assign.node)];
        const ModelObject* obj = model.find(oid);
        int idx = detail::checked_attr_index(mm, obj->cls, assign.attr, assign.span);
        out.push_back({oid, idx, assign.attr, eval(assign.value, model, mm, env)});
    }
    return out;
}

inline void apply_writes(ModelState& model, std::span<const EffectWrite> writes) {
    for (const auto& w : writes)
        if (ModelObject* obj = model.find(w.oid)) obj->attrs[std::size_t(w.attr)] = w.value;
}

/// Applies an ongoing rule's effect for one match, all assignments reading
/// the pre-state simultaneously.
inline ModelState apply_effect(const Rule& rule, const Match& match, const ModelState& model,
                               const Metamodel& mm, TimePoint elapsed) {
    auto writes = effect_writes(rule, match, model, mm, elapsed);
    ModelState result = model;
    apply_writes(result, writes);
    return result;
}

// ---------------------------------------------------------------------------
// Static validation

namespace detail {

inline void validate_pattern(const Pattern& p, const Metamodel& mm, KindChecker& kinds,
                             const Pattern* outer, const char* what) {
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        const PatternNode& n = p.nodes[i];
        if (n.cls < 0 || n.cls >= int(mm.classes.size()))
            throw SpecError(n.span, std::string(what) + " node has an unknown metaclass");
        for (std::size_t j = i + 1; j < p.nodes.size(); ++j)
            if (p.nodes[j].var == n.var)
                throw SpecError(p.nodes[j].span, "duplicate pattern variable '" +
                                                     mm.syms.name(n.var) + "'");
        if (outer) {
            int o = outer->node_index(n.var);
            if (o >= 0) {
                int ocls = outer->nodes[std::size_t(o)].cls;
                if (!mm.is_subtype(ocls, n.cls) && !mm.is_subtype(n.cls, ocls))
                    throw SpecError(n.span, "shared variable '" + mm.syms.name(n.var) +
                                                "' re-declared with an unrelated metaclass");
            }
        }
    }
    for (const auto& link : p.links) {
        const PatternNode& src = p.nodes[std::size_t(link.src)];
        const PatternNode& dst = p.nodes[std::size_t(link.dst)];
        const RefDecl* decl = mm.find_ref(src.cls, link.ref);
        if (!decl)
            throw SpecError(link.span, "metaclass '" + mm.syms.name(mm.metaclass(src.cls).name) +
                                           "' has no reference '" + mm.syms.name(link.ref) + "'");
        if (!mm.is_subtype(dst.cls, decl->target) && !mm.is_subtype(decl->target, dst.cls))
            throw SpecError(link.span, "link target '" + mm.syms.name(dst.var) +
                                           "' can never instantiate reference '" +
                                           mm.syms.name(link.ref) + "'");
    }
    // Guards see this pattern's variables plus, for NACs, the enclosing LHS.
    std::size_t pushed = 0;
    if (outer)
        for (const auto& n : outer->nodes)
            if (p.node_index(n.var) < 0) {
                kinds.push_var(n.var, StaticKind::object(n.cls));
                ++pushed;
            }
    for (const auto& n : p.nodes) {
        kinds.push_var(n.var, StaticKind::object(n.cls));
        ++pushed;
    }
    for (const auto& n : p.nodes)
        if (n.guard) kinds.require(n.guard, ValueKind::Bool);
    while (pushed--) kinds.pop_var();
}

}  // namespace detail

/// Checks a rule against the metamodel and computes its derived fields.
/// Throws SpecError on any violation.
inline void validate_rule(Rule& rule, const Metamodel& mm,
                          const std::unordered_map<Symbol, int>& named_classes) {
    KindChecker kinds(mm, named_classes);
    detail::validate_pattern(rule.lhs, mm, kinds, nullptr, "LHS");
    for (const auto& nac : rule.nacs) detail::validate_pattern(nac, mm, kinds, &rule.lhs, "NAC");

    if (rule.kind == RuleKind::Atomic) {
        if (rule.duration_lo < 0 || rule.duration_lo > rule.duration_hi)
            throw SpecError(rule.span, "empty duration interval");
        if (rule.period && *rule.period <= 0)
            throw SpecError(rule.span, "period must be positive");
        if (rule.limit)
            throw SpecError(rule.span, "only ongoing rules may carry a time limit");
    } else {
        if (rule.period) throw SpecError(rule.span, "ongoing rules have no period");
        if (rule.limit && *rule.limit <= 0)
            throw SpecError(rule.span, "time limit must be positive");
    }

    auto with_lhs_vars = [&](auto&& f) {
        for (const auto& n : rule.lhs.nodes) kinds.push_var(n.var, StaticKind::object(n.cls));
        f();
        for (std::size_t i = 0; i < rule.lhs.nodes.size(); ++i) kinds.pop_var();
    };

    rule.lhs_kept.assign(rule.lhs.nodes.size(), 0);
    rule.deleted_nodes.clear();
    if (rule.kind == RuleKind::Atomic) {
        for (const auto& keep : rule.rhs.kept) {
            if (keep.node < 0 || keep.node >= int(rule.lhs.nodes.size()))
                throw SpecError(keep.span, "RHS names a variable that is not an LHS node");
            if (rule.lhs_kept[std::size_t(keep.node)])
                throw SpecError(keep.span, "RHS repeats a kept node");
            rule.lhs_kept[std::size_t(keep.node)] = 1;
            int cls = rule.lhs.nodes[std::size_t(keep.node)].cls;
            with_lhs_vars([&] {
                for (const auto& upd : keep.updates) {
                    int idx = mm.attr_index(cls, upd.attr);
                    if (idx < 0)
                        throw SpecError(upd.span, "no attribute '" + mm.syms.name(upd.attr) +
                                                      "' to update");
                    StaticKind got = kinds.check(upd.value);
                    ValueKind want = mm.metaclass(cls).attrs[std::size_t(idx)].kind;
                    if (got.kind != want)
                        throw SpecError(upd.span, std::string("attribute update kind is ") +
                                                      kind_name(got.kind) + ", declared " +
                                                      kind_name(want));
                }
            });
        }
        for (std::size_t i = 0; i < rule.lhs.nodes.size(); ++i)
            if (!rule.lhs_kept[i]) rule.deleted_nodes.push_back(int(i));

        for (const auto& create : rule.rhs.created) {
            if (rule.lhs.node_index(create.var) >= 0)
                throw SpecError(create.span, "created variable '" + mm.syms.name(create.var) +
                                                 "' shadows an LHS node");
            const Metaclass& mc = mm.metaclass(create.cls);
            if (mc.is_abstract)
                throw SpecError(create.span, "cannot instantiate abstract metaclass '" +
                                                 mm.syms.name(mc.name) + "'");
            std::vector<char> covered(mc.attrs.size(), 0);
            with_lhs_vars([&] {
                for (const auto& init : create.inits) {
                    int idx = mm.attr_index(create.cls, init.attr);
                    if (idx < 0)
                        throw SpecError(init.span, "metaclass '" + mm.syms.name(mc.name) +
                                                       "' has no attribute '" +
                                                       mm.syms.name(init.attr) + "'");
                    if (covered[std::size_t(idx)])
                        throw SpecError(init.span, "attribute initialized twice");
                    covered[std::size_t(idx)] = 1;
                    StaticKind got = kinds.check(init.value);
                    if (got.kind != mc.attrs[std::size_t(idx)].kind)
                        throw SpecError(init.span, std::string("initializer kind is ") +
                                                       kind_name(got.kind) + ", declared " +
                                                       kind_name(mc.attrs[std::size_t(idx)].kind));
                }
            });
            for (std::size_t i = 0; i < covered.size(); ++i)
                if (!covered[i])
                    throw SpecError(create.span,
                                    "created object leaves attribute '" +
                                        mm.syms.name(mc.attrs[i].name) + "' uninitialized");
        }

        auto rhs_var_class = [&](Symbol var, const SourceSpan& span) -> int {
            int idx = rule.lhs.node_index(var);
            if (idx >= 0) {
                if (!rule.lhs_kept[std::size_t(idx)])
                    throw SpecError(span, "RHS link uses deleted node '" + mm.syms.name(var) + "'");
                return rule.lhs.nodes[std::size_t(idx)].cls;
            }
            for (const auto& c : rule.rhs.created)
                if (c.var == var) return c.cls;
            throw SpecError(span, "unknown variable '" + mm.syms.name(var) + "' in RHS link");
        };
        for (const auto& rl : rule.rhs.links) {
            int src_cls = rhs_var_class(rl.src_var, rl.span);
            int dst_cls = rhs_var_class(rl.dst_var, rl.span);
            const RefDecl* decl = mm.find_ref(src_cls, rl.ref);
            if (!decl)
                throw SpecError(rl.span, "metaclass '" +
                                             mm.syms.name(mm.metaclass(src_cls).name) +
                                             "' has no reference '" + mm.syms.name(rl.ref) + "'");
            if (!mm.is_subtype(dst_cls, decl->target))
                throw SpecError(rl.span, "RHS link target is not a '" +
                                             mm.syms.name(mm.metaclass(decl->target).name) + "'");
        }
    } else {
        // Ongoing: every LHS node survives; assignments may use T.
        for (std::size_t i = 0; i < rule.lhs.nodes.size(); ++i) rule.lhs_kept[i] = 1;
        Symbol t = mm.syms.lookup("T");
        for (const auto& assign : rule.effect.assignments) {
            if (assign.node < 0 || assign.node >= int(rule.lhs.nodes.size()))
                throw SpecError(assign.span, "effect assigns to a variable that is not an LHS node");
            int cls = rule.lhs.nodes[std::size_t(assign.node)].cls;
            int idx = mm.attr_index(cls, assign.attr);
            if (idx < 0)
                throw SpecError(assign.span,
                                "no attribute '" + mm.syms.name(assign.attr) + "' to assign");
            with_lhs_vars([&] {
                if (t != kNoSymbol) kinds.push_var(t, StaticKind::of(ValueKind::Int));
                StaticKind got = kinds.check(assign.value);
                if (t != kNoSymbol) kinds.pop_var();
                ValueKind want = mm.metaclass(cls).attrs[std::size_t(idx)].kind;
                if (got.kind != want)
                    throw SpecError(assign.span, std::string("effect kind is ") +
                                                     kind_name(got.kind) + ", declared " +
                                                     kind_name(want));
            });
        }
    }
}

}  // namespace tmt
