#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tmt/engine.hpp"

namespace tmt {

/// Canonical byte form of a configuration up to oid renaming. Equal keys
/// hold exactly for isomorphic configurations; `now` is part of the key and
/// agenda due times are stored relative to it.
using StateKey = std::string;

namespace detail {

inline void put_varint(std::string& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(char(0x80 | (v & 0x7f)));
        v >>= 7;
    }
    out.push_back(char(v));
}

inline void put_signed(std::string& out, std::int64_t v) {
    put_varint(out, (std::uint64_t(v) << 1) ^ std::uint64_t(v >> 63));  // zigzag
}

inline std::uint64_t get_varint(const std::string& in, std::size_t& pos) {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
        if (pos >= in.size()) throw SpecError("truncated state key");
        unsigned char b = static_cast<unsigned char>(in[pos++]);
        v |= std::uint64_t(b & 0x7f) << shift;
        if (!(b & 0x80)) return v;
        shift += 7;
    }
}

inline std::int64_t get_signed(const std::string& in, std::size_t& pos) {
    std::uint64_t z = get_varint(in, pos);
    return std::int64_t(z >> 1) ^ -std::int64_t(z & 1);
}

inline void put_value(std::string& out, const Value& v) {
    switch (v.kind()) {
        case ValueKind::Int: put_signed(out, v.as_int()); break;
        case ValueKind::Bool: out.push_back(v.as_bool() ? 1 : 0); break;
        case ValueKind::Ident: put_varint(out, std::uint64_t(v.as_ident())); break;
        default: throw SpecError("non-scalar attribute value in a model state");
    }
}

/// Canonical labeling by partition refinement with individualization on
/// ties. Produces, for each object position, its canonical index.
class Canonicalizer {
public:
    Canonicalizer(const Spec& spec, const Configuration& c) : spec_(spec), c_(c) {
        n_ = c.model.objects().size();
        oid_pos_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) oid_pos_.emplace_back(c.model.objects()[i].oid, i);
        // objects() is oid-sorted, so lookups can binary-search oid_pos_.
    }

    StateKey key() {
        std::vector<int> color(n_);
        initial_colors(color);
        refine(color);
        return canonical_from(color);
    }

private:
    std::size_t pos_of(Oid oid) const {
        auto it = std::lower_bound(oid_pos_.begin(), oid_pos_.end(), oid,
                                   [](const auto& p, Oid v) { return p.first < v; });
        return it->second;
    }

    void initial_colors(std::vector<int>& color) const {
        std::vector<std::pair<std::string, std::size_t>> sigs(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const ModelObject& obj = c_.model.objects()[i];
            std::string s;
            put_varint(s, std::uint64_t(obj.cls));
            put_varint(s, std::uint64_t(obj.name + 1));
            for (const Value& v : obj.attrs) put_value(s, v);
            sigs[i] = {std::move(s), i};
        }
        assign_ranks(sigs, color);
    }

    static void assign_ranks(std::vector<std::pair<std::string, std::size_t>>& sigs,
                             std::vector<int>& color) {
        std::sort(sigs.begin(), sigs.end());
        int rank = -1;
        const std::string* prev = nullptr;
        for (const auto& [sig, idx] : sigs) {
            if (!prev || *prev != sig) ++rank;
            color[idx] = rank;
            prev = &sig;
        }
    }

    int count_colors(const std::vector<int>& color) const {
        return color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
    }

    void refine(std::vector<int>& color) const {
        int colors = count_colors(color);
        for (;;) {
            std::vector<std::pair<std::string, std::size_t>> sigs(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                std::string s;
                put_varint(s, std::uint64_t(color[i]));
                signature(i, color, s);
                sigs[i] = {std::move(s), i};
            }
            std::vector<int> next(n_);
            assign_ranks(sigs, next);
            int next_colors = count_colors(next);
            color.swap(next);
            if (next_colors == colors) return;
            colors = next_colors;
        }
    }

    /// Neighborhood signature of one object under the current coloring:
    /// links in both directions plus its roles in the agenda, fired marks and
    /// ongoing accumulators.
    void signature(std::size_t i, const std::vector<int>& color, std::string& s) const {
        Oid oid = c_.model.objects()[i].oid;
        std::vector<std::string> parts;
        for (const Link& l : c_.model.links()) {
            if (l.src == oid) {
                std::string p = "o";
                put_varint(p, std::uint64_t(l.ref));
                put_varint(p, std::uint64_t(color[pos_of(l.dst)]));
                parts.push_back(std::move(p));
            }
            if (l.dst == oid) {
                std::string p = "i";
                put_varint(p, std::uint64_t(l.ref));
                put_varint(p, std::uint64_t(color[pos_of(l.src)]));
                parts.push_back(std::move(p));
            }
        }
        for (const ScheduledAction& a : c_.agenda) {
            for (std::size_t slot = 0; slot < a.match.oids.size(); ++slot) {
                if (a.match.oids[slot] != oid) continue;
                std::string p = "a";
                put_varint(p, std::uint64_t(a.rule));
                put_varint(p, std::uint64_t(slot));
                put_varint(p, std::uint64_t(a.due_time - c_.now));
                parts.push_back(std::move(p));
            }
        }
        for (const FiredMark& f : c_.fired) {
            if (!std::binary_search(f.parts.begin(), f.parts.end(), oid)) continue;
            std::string p = "f";
            put_varint(p, std::uint64_t(f.rule));
            parts.push_back(std::move(p));
        }
        for (const OngoingAcc& acc : c_.ongoing_acc) {
            for (std::size_t slot = 0; slot < acc.oids.size(); ++slot) {
                if (acc.oids[slot] != oid) continue;
                std::string p = "g";
                put_varint(p, std::uint64_t(acc.rule));
                put_varint(p, std::uint64_t(slot));
                put_signed(p, acc.used);
                parts.push_back(std::move(p));
            }
        }
        std::sort(parts.begin(), parts.end());
        for (const auto& p : parts) {
            put_varint(s, p.size());
            s += p;
        }
    }

    /// Serializes under the coloring if it is discrete; otherwise
    /// individualizes each member of the first tied cell and keeps the
    /// lexicographically smallest result.
    StateKey canonical_from(std::vector<int> color) const {
        int colors = count_colors(color);
        if (colors == int(n_)) return serialize(color);
        // first non-singleton cell
        int target = -1;
        for (int cc = 0; cc < colors && target < 0; ++cc) {
            int count = 0;
            for (std::size_t i = 0; i < n_; ++i)
                if (color[i] == cc) ++count;
            if (count > 1) target = cc;
        }
        StateKey best;
        for (std::size_t i = 0; i < n_; ++i) {
            if (color[i] != target) continue;
            std::vector<int> trial(n_);
            // Individualize object i: split it below its cell, shift others up.
            for (std::size_t j = 0; j < n_; ++j)
                trial[j] = color[j] > target ? color[j] + 1 : color[j];
            trial[i] = target;
            for (std::size_t j = 0; j < n_; ++j)
                if (j != i && color[j] == target) trial[j] = target + 1;
            refine(trial);
            StateKey k = canonical_from(std::move(trial));
            if (best.empty() || k < best) best = std::move(k);
        }
        return best;
    }

    StateKey serialize(const std::vector<int>& color) const {
        std::vector<std::size_t> by_rank(n_);
        for (std::size_t i = 0; i < n_; ++i) by_rank[std::size_t(color[i])] = i;
        StateKey out;
        put_signed(out, c_.now);
        put_varint(out, n_);
        for (std::size_t rank = 0; rank < n_; ++rank) {
            const ModelObject& obj = c_.model.objects()[by_rank[rank]];
            put_varint(out, std::uint64_t(obj.cls));
            put_varint(out, std::uint64_t(obj.name + 1));
            for (const Value& v : obj.attrs) put_value(out, v);
        }
        std::vector<std::string> rows;
        for (const Link& l : c_.model.links()) {
            std::string row;
            put_varint(row, std::uint64_t(color[pos_of(l.src)]));
            put_varint(row, std::uint64_t(l.ref));
            put_varint(row, std::uint64_t(color[pos_of(l.dst)]));
            rows.push_back(std::move(row));
        }
        append_rows(out, rows);
        rows.clear();
        for (const ScheduledAction& a : c_.agenda) {
            std::string row;
            put_varint(row, std::uint64_t(a.rule));
            put_varint(row, a.match.oids.size());
            for (Oid oid : a.match.oids) put_varint(row, std::uint64_t(color[pos_of(oid)]));
            put_varint(row, std::uint64_t(a.due_time - c_.now));
            rows.push_back(std::move(row));
        }
        append_rows(out, rows);
        rows.clear();
        for (const FiredMark& f : c_.fired) {
            std::string row;
            put_varint(row, std::uint64_t(f.rule));
            put_varint(row, f.parts.size());
            std::vector<int> ranks;
            for (Oid oid : f.parts) ranks.push_back(color[pos_of(oid)]);
            std::sort(ranks.begin(), ranks.end());
            for (int r : ranks) put_varint(row, std::uint64_t(r));
            rows.push_back(std::move(row));
        }
        append_rows(out, rows);
        rows.clear();
        for (const OngoingAcc& acc : c_.ongoing_acc) {
            std::string row;
            put_varint(row, std::uint64_t(acc.rule));
            put_varint(row, acc.oids.size());
            for (Oid oid : acc.oids) put_varint(row, std::uint64_t(color[pos_of(oid)]));
            put_signed(row, acc.used);
            rows.push_back(std::move(row));
        }
        append_rows(out, rows);
        return out;
    }

    static void append_rows(StateKey& out, std::vector<std::string>& rows) {
        std::sort(rows.begin(), rows.end());
        put_varint(out, rows.size());
        for (const auto& row : rows) {
            put_varint(out, row.size());
            out += row;
        }
    }

    const Spec& spec_;
    const Configuration& c_;
    std::size_t n_ = 0;
    std::vector<std::pair<Oid, std::size_t>> oid_pos_;
};

}  // namespace detail

/// Keys are equal iff the configurations are identical up to a bijective
/// oid renaming (declared object names are preserved; the fresh-oid counter
/// is bookkeeping and excluded).
inline StateKey canonicalize(const Spec& spec, const Configuration& c) {
    detail::Canonicalizer canon(spec, c);
    return canon.key();
}

/// Rebuilds a configuration from a canonical key, numbering objects 1..n in
/// canonical order. The result is isomorphic to every configuration that
/// produced the key; scheduled trigger times are reconstructed as the
/// earliest instants consistent with each rule's duration interval.
inline Configuration config_from_key(const Spec& spec, const StateKey& key) {
    using detail::get_signed;
    using detail::get_varint;
    Configuration c;
    std::size_t pos = 0;
    c.now = get_signed(key, pos);
    std::size_t n = get_varint(key, pos);
    for (std::size_t i = 0; i < n; ++i) {
        ModelObject obj;
        obj.oid = Oid{i + 1};
        obj.cls = int(get_varint(key, pos));
        obj.name = Symbol(get_varint(key, pos)) - 1;
        const Metaclass& mc = spec.metamodel.metaclass(obj.cls);
        obj.attrs.reserve(mc.attrs.size());
        for (const AttrDecl& a : mc.attrs) {
            switch (a.kind) {
                case ValueKind::Int: obj.attrs.push_back(Value::integer(get_signed(key, pos))); break;
                case ValueKind::Bool:
                    obj.attrs.push_back(Value::boolean(key.at(pos++) != 0));
                    break;
                case ValueKind::Ident:
                    obj.attrs.push_back(Value::ident(Symbol(get_varint(key, pos))));
                    break;
                default: throw SpecError("bad attribute kind in state key");
            }
        }
        c.model.add_object(std::move(obj));
    }
    c.next_oid = n + 1;
    std::size_t n_links = get_varint(key, pos);
    for (std::size_t i = 0; i < n_links; ++i) {
        get_varint(key, pos);  // row length
        Oid src{get_varint(key, pos) + 1};
        Symbol ref = Symbol(get_varint(key, pos));
        Oid dst{get_varint(key, pos) + 1};
        c.model.add_link(Link{src, ref, dst});
    }
    std::size_t n_agenda = get_varint(key, pos);
    for (std::size_t i = 0; i < n_agenda; ++i) {
        get_varint(key, pos);
        ScheduledAction a;
        a.rule = int(get_varint(key, pos));
        std::size_t len = get_varint(key, pos);
        for (std::size_t k = 0; k < len; ++k) a.match.oids.push_back(Oid{get_varint(key, pos) + 1});
        a.due_time = c.now + TimePoint(get_varint(key, pos));
        const Rule& rule = spec.rules[std::size_t(a.rule)];
        a.trigger_time = std::max<TimePoint>(0, a.due_time - rule.duration_hi);
        a.parts = participants(a.match);
        c.agenda.push_back(std::move(a));
    }
    std::sort(c.agenda.begin(), c.agenda.end());
    std::size_t n_fired = get_varint(key, pos);
    for (std::size_t i = 0; i < n_fired; ++i) {
        get_varint(key, pos);
        FiredMark f;
        f.rule = int(get_varint(key, pos));
        std::size_t len = get_varint(key, pos);
        for (std::size_t k = 0; k < len; ++k) f.parts.push_back(Oid{get_varint(key, pos) + 1});
        std::sort(f.parts.begin(), f.parts.end());
        c.fired.push_back(std::move(f));
    }
    std::sort(c.fired.begin(), c.fired.end());
    std::size_t n_acc = get_varint(key, pos);
    for (std::size_t i = 0; i < n_acc; ++i) {
        get_varint(key, pos);
        OngoingAcc acc;
        acc.rule = int(get_varint(key, pos));
        std::size_t len = get_varint(key, pos);
        for (std::size_t k = 0; k < len; ++k) acc.oids.push_back(Oid{get_varint(key, pos) + 1});
        acc.used = get_signed(key, pos);
        c.ongoing_acc.push_back(std::move(acc));
    }
    std::sort(c.ongoing_acc.begin(), c.ongoing_acc.end());
    return c;
}

}  // namespace tmt
