#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "tmt/spec.hpp"
#include "tmt/value.hpp"

#include "json.hpp"

namespace tmt {

/// One engine event. Realized/Aborted always follow a Triggered with the
/// same rule and participants; timestamps never decrease along a trace.
struct TraceEvent {
    enum class Kind : std::uint8_t { Triggered, Realized, Aborted, TimeAdvance, OngoingApplied };

    Kind kind = Kind::TimeAdvance;
    TimePoint t = 0;
    Symbol rule = kNoSymbol;
    std::vector<Oid> participants;  // LHS binding tuple, pattern-node order
    TimePoint due = 0;              // Triggered
    int count = 0;                  // OngoingApplied: matches updated
    TimePoint delta = 0;            // TimeAdvance, OngoingApplied

    static TraceEvent triggered(TimePoint t, Symbol rule, std::vector<Oid> parts, TimePoint due) {
        TraceEvent e;
        e.kind = Kind::Triggered;
        e.t = t;
        e.rule = rule;
        e.participants = std::move(parts);
        e.due = due;
        return e;
    }
    static TraceEvent realized(TimePoint t, Symbol rule, std::vector<Oid> parts) {
        TraceEvent e;
        e.kind = Kind::Realized;
        e.t = t;
        e.rule = rule;
        e.participants = std::move(parts);
        return e;
    }
    static TraceEvent aborted(TimePoint t, Symbol rule, std::vector<Oid> parts) {
        TraceEvent e;
        e.kind = Kind::Aborted;
        e.t = t;
        e.rule = rule;
        e.participants = std::move(parts);
        return e;
    }
    static TraceEvent time_advance(TimePoint t, TimePoint delta) {
        TraceEvent e;
        e.kind = Kind::TimeAdvance;
        e.t = t;
        e.delta = delta;
        return e;
    }
    static TraceEvent ongoing_applied(TimePoint t, Symbol rule, int count, TimePoint delta) {
        TraceEvent e;
        e.kind = Kind::OngoingApplied;
        e.t = t;
        e.rule = rule;
        e.count = count;
        e.delta = delta;
        return e;
    }
};

using Trace = std::vector<TraceEvent>;

inline const char* trace_kind_name(TraceEvent::Kind k) {
    switch (k) {
        case TraceEvent::Kind::Triggered: return "triggered";
        case TraceEvent::Kind::Realized: return "realized";
        case TraceEvent::Kind::Aborted: return "aborted";
        case TraceEvent::Kind::TimeAdvance: return "time_advance";
        case TraceEvent::Kind::OngoingApplied: return "ongoing_applied";
    }
    return "?";
}

/// Model snapshot as JSON, for witness exports and --dot tooling.
inline nlohmann::json model_to_json(const ModelState& model, const Metamodel& mm) {
    nlohmann::json objects = nlohmann::json::array();
    for (const auto& obj : model.objects()) {
        const Metaclass& mc = mm.metaclass(obj.cls);
        nlohmann::json attrs = nlohmann::json::object();
        for (std::size_t i = 0; i < obj.attrs.size(); ++i) {
            const Value& v = obj.attrs[i];
            const std::string& key = mm.syms.name(mc.attrs[i].name);
            switch (v.kind()) {
                case ValueKind::Int: attrs[key] = v.as_int(); break;
                case ValueKind::Bool: attrs[key] = v.as_bool(); break;
                case ValueKind::Ident: attrs[key] = mm.syms.name(v.as_ident()); break;
                default: break;
            }
        }
        nlohmann::json o{{"oid", obj.oid.v}, {"class", mm.syms.name(mc.name)}, {"attrs", attrs}};
        if (obj.name != kNoSymbol) o["name"] = mm.syms.name(obj.name);
        objects.push_back(std::move(o));
    }
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : model.links())
        links.push_back(
            {{"src", l.src.v}, {"ref", mm.syms.name(l.ref)}, {"dst", l.dst.v}});
    return nlohmann::json{{"objects", std::move(objects)}, {"links", std::move(links)}};
}

/// One JSON line per event; field order is fixed so replays are
/// byte-identical.
inline std::string event_to_json_line(const TraceEvent& e, const SymbolTable& syms) {
    std::string out = "{\"t\":" + std::to_string(e.t) + ",\"kind\":\"" + trace_kind_name(e.kind) +
                      "\"";
    if (e.rule != kNoSymbol) out += ",\"rule\":\"" + syms.name(e.rule) + "\"";
    switch (e.kind) {
        case TraceEvent::Kind::Triggered:
        case TraceEvent::Kind::Realized:
        case TraceEvent::Kind::Aborted: {
            out += ",\"participants\":[";
            for (std::size_t i = 0; i < e.participants.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(e.participants[i].v);
            }
            out += ']';
            if (e.kind == TraceEvent::Kind::Triggered)
                out += ",\"due\":" + std::to_string(e.due);
            break;
        }
        case TraceEvent::Kind::TimeAdvance:
            out += ",\"delta\":" + std::to_string(e.delta);
            break;
        case TraceEvent::Kind::OngoingApplied:
            out += ",\"count\":" + std::to_string(e.count) +
                   ",\"delta\":" + std::to_string(e.delta);
            break;
    }
    out += '}';
    return out;
}

inline void write_trace(std::ostream& os, const Trace& trace, const SymbolTable& syms) {
    for (const auto& e : trace) os << event_to_json_line(e, syms) << '\n';
}

/// Parses one exported event line. Rule names must exist in the spec.
inline TraceEvent event_from_json(const nlohmann::json& j, const Spec& spec) {
    TraceEvent e;
    std::string kind = j.at("kind").get<std::string>();
    e.t = j.at("t").get<TimePoint>();
    if (kind == "triggered") e.kind = TraceEvent::Kind::Triggered;
    else if (kind == "realized") e.kind = TraceEvent::Kind::Realized;
    else if (kind == "aborted") e.kind = TraceEvent::Kind::Aborted;
    else if (kind == "time_advance") e.kind = TraceEvent::Kind::TimeAdvance;
    else if (kind == "ongoing_applied") e.kind = TraceEvent::Kind::OngoingApplied;
    else throw SpecError("unknown trace event kind '" + kind + "'");
    if (j.contains("rule")) {
        std::string rule = j.at("rule").get<std::string>();
        Symbol s = spec.metamodel.syms.lookup(rule);
        if (s == kNoSymbol || spec.rule_index(s) < 0)
            throw SpecError("trace names unknown rule '" + rule + "'");
        e.rule = s;
    }
    if (j.contains("participants"))
        for (const auto& p : j.at("participants")) e.participants.push_back(Oid{p.get<std::uint64_t>()});
    if (j.contains("due")) e.due = j.at("due").get<TimePoint>();
    if (j.contains("count")) e.count = j.at("count").get<int>();
    if (j.contains("delta")) e.delta = j.at("delta").get<TimePoint>();
    return e;
}

}  // namespace tmt
