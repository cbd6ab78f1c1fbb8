#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tmt/metamodel.hpp"
#include "tmt/value.hpp"

namespace tmt {

struct ModelObject {
    Oid oid;
    int cls = -1;
    std::vector<Value> attrs;  // positional, flattened metaclass layout
    Symbol name = kNoSymbol;   // declared object name, never generated

    friend bool operator==(const ModelObject&, const ModelObject&) = default;
};

struct Link {
    Oid src;
    Symbol ref = kNoSymbol;
    Oid dst;

    friend auto operator<=>(const Link&, const Link&) = default;
};

/// A runtime object graph. Objects and links are kept sorted so that
/// iteration order is deterministic and replays are bit-identical.
class ModelState {
public:
    const std::vector<ModelObject>& objects() const { return objects_; }
    const std::vector<Link>& links() const { return links_; }

    const ModelObject* find(Oid oid) const {
        auto it = lower_bound(oid);
        return (it != objects_.end() && it->oid == oid) ? &*it : nullptr;
    }

    ModelObject* find(Oid oid) {
        auto it = std::lower_bound(objects_.begin(), objects_.end(), oid,
                                   [](const ModelObject& o, Oid v) { return o.oid < v; });
        return (it != objects_.end() && it->oid == oid) ? &*it : nullptr;
    }

    void add_object(ModelObject obj) {
        auto it = std::lower_bound(objects_.begin(), objects_.end(), obj.oid,
                                   [](const ModelObject& o, Oid v) { return o.oid < v; });
        objects_.insert(it, std::move(obj));
    }

    /// Removes the object together with all incident links.
    void erase_object(Oid oid) {
        auto it = std::lower_bound(objects_.begin(), objects_.end(), oid,
                                   [](const ModelObject& o, Oid v) { return o.oid < v; });
        if (it != objects_.end() && it->oid == oid) objects_.erase(it);
        links_.erase(std::remove_if(links_.begin(), links_.end(),
                                    [&](const Link& l) { return l.src == oid || l.dst == oid; }),
                     links_.end());
    }

    bool has_link(const Link& l) const {
        return std::binary_search(links_.begin(), links_.end(), l);
    }

    void add_link(Link l) {
        auto it = std::lower_bound(links_.begin(), links_.end(), l);
        if (it == links_.end() || !(*it == l)) links_.insert(it, l);
    }

    void remove_link(const Link& l) {
        auto it = std::lower_bound(links_.begin(), links_.end(), l);
        if (it != links_.end() && *it == l) links_.erase(it);
    }

    /// Targets of `ref` links leaving `src`, in oid order.
    std::vector<Oid> targets(Oid src, Symbol ref) const {
        std::vector<Oid> out;
        for (auto it = std::lower_bound(links_.begin(), links_.end(), Link{src, ref, Oid{0}});
             it != links_.end() && it->src == src && it->ref == ref; ++it)
            out.push_back(it->dst);
        return out;
    }

    std::size_t link_count(Oid src, Symbol ref) const {
        std::size_t n = 0;
        for (auto it = std::lower_bound(links_.begin(), links_.end(), Link{src, ref, Oid{0}});
             it != links_.end() && it->src == src && it->ref == ref; ++it)
            ++n;
        return n;
    }

    /// Object with the given declared name, or nullptr.
    const ModelObject* find_named(Symbol name) const {
        for (const auto& o : objects_)
            if (o.name == name) return &o;
        return nullptr;
    }

    Oid max_oid() const { return objects_.empty() ? Oid{0} : objects_.back().oid; }

    friend bool operator==(const ModelState&, const ModelState&) = default;

private:
    std::vector<ModelObject>::const_iterator lower_bound(Oid oid) const {
        return std::lower_bound(objects_.begin(), objects_.end(), oid,
                                [](const ModelObject& o, Oid v) { return o.oid < v; });
    }

    std::vector<ModelObject> objects_;
    std::vector<Link> links_;
};

/// One conformance violation. Diagnostics are results, not errors.
struct Diagnostic {
    Oid oid;
    std::string feature;
    std::string reason;
};

/// Checks a model against a metamodel. Returns an empty list iff the model
/// conforms: every object instantiates a known concrete metaclass with a
/// complete, well-kinded attribute vector; every link instantiates a declared
/// reference with a compatible target; [1] and [0..1] multiplicities hold;
/// no link dangles.
inline std::vector<Diagnostic> conforms(const ModelState& model, const Metamodel& mm) {
    std::vector<Diagnostic> out;
    auto report = [&](Oid oid, std::string feature, std::string reason) {
        out.push_back({oid, std::move(feature), std::move(reason)});
    };

    for (const auto& obj : model.objects()) {
        if (obj.cls < 0 || obj.cls >= int(mm.classes.size())) {
            report(obj.oid, "", "unknown metaclass");
            continue;
        }
        const Metaclass& mc = mm.metaclass(obj.cls);
        if (mc.is_abstract)
            report(obj.oid, "", "instance of abstract metaclass '" + mm.syms.name(mc.name) + "'");
        for (std::size_t i = 0; i < mc.attrs.size(); ++i) {
            if (i >= obj.attrs.size()) {
                report(obj.oid, mm.syms.name(mc.attrs[i].name), "missing attribute value");
                continue;
            }
            if (obj.attrs[i].kind() != mc.attrs[i].kind)
                report(obj.oid, mm.syms.name(mc.attrs[i].name),
                       std::string("attribute value kind is ") + kind_name(obj.attrs[i].kind()) +
                           ", declared " + kind_name(mc.attrs[i].kind));
        }
        if (obj.attrs.size() > mc.attrs.size())
            report(obj.oid, "", "more attribute values than declared attributes");
        for (const auto& ref : mc.refs) {
            std::size_t n = model.link_count(obj.oid, ref.name);
            if (ref.mult == Multiplicity::One && n != 1)
                report(obj.oid, mm.syms.name(ref.name),
                       "[1] reference has " + std::to_string(n) + " links");
            else if (ref.mult == Multiplicity::OptOne && n > 1)
                report(obj.oid, mm.syms.name(ref.name),
                       "[0..1] reference has " + std::to_string(n) + " links");
        }
    }

    for (const auto& link : model.links()) {
        const ModelObject* src = model.find(link.src);
        const ModelObject* dst = model.find(link.dst);
        if (!src || !dst) {
            report(link.src, mm.syms.name(link.ref), "dangling link endpoint");
            continue;
        }
        const RefDecl* decl = mm.find_ref(src->cls, link.ref);
        if (!decl) {
            report(link.src, mm.syms.name(link.ref),
                   "reference not declared on metaclass '" +
                       mm.syms.name(mm.metaclass(src->cls).name) + "'");
            continue;
        }
        if (!mm.is_subtype(dst->cls, decl->target))
            report(link.src, mm.syms.name(link.ref),
                   "link target is not a '" + mm.syms.name(mm.metaclass(decl->target).name) + "'");
    }
    return out;
}

/// All objects whose metaclass equals or inherits from `cls`, in oid order.
inline std::vector<Oid> all_instances(const ModelState& model, const Metamodel& mm, int cls) {
    const auto& desc = mm.metaclass(cls).descendants;
    std::vector<Oid> out;
    for (const auto& obj : model.objects())
        if (std::binary_search(desc.begin(), desc.end(), obj.cls)) out.push_back(obj.oid);
    return out;
}

/// By-name variant; throws on an unknown metaclass.
inline std::vector<Oid> all_instances(const ModelState& model, const Metamodel& mm,
                                      std::string_view metaclass) {
    int cls = mm.class_index(metaclass);
    if (cls < 0) throw EvalError("unknown metaclass '" + std::string(metaclass) + "'");
    return all_instances(model, mm, cls);
}

}  // namespace tmt
