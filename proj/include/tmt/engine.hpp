#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tmt/spec.hpp"
#include "tmt/trace.hpp"

namespace tmt {

/// A triggered-but-unrealized atomic action.
struct ScheduledAction {
    int rule = -1;  // index into Spec::rules
    Match match;
    TimePoint trigger_time = 0;
    TimePoint due_time = 0;
    std::vector<Oid> parts;  // sorted participants, cached for exclusion checks

    friend bool operator==(const ScheduledAction&, const ScheduledAction&) = default;

    // Agenda order doubles as the realization tie order: due time first, then
    // rule declaration order, then the binding tuple.
    friend bool operator<(const ScheduledAction& a, const ScheduledAction& b) {
        if (a.due_time != b.due_time) return a.due_time < b.due_time;
        if (a.rule != b.rule) return a.rule < b.rule;
        return a.match.oids < b.match.oids;
    }
};

/// Once-per-instant trigger marks for periodic rules. Cleared on advance.
struct FiredMark {
    int rule = -1;
    std::vector<Oid> parts;

    friend bool operator==(const FiredMark&, const FiredMark&) = default;
    friend bool operator<(const FiredMark& a, const FiredMark& b) {
        return std::tie(a.rule, a.parts) < std::tie(b.rule, b.parts);
    }
};

/// Cumulative applied time of an ongoing match, kept only for rules with a
/// time limit.
struct OngoingAcc {
    int rule = -1;
    std::vector<Oid> oids;  // binding tuple
    TimePoint used = 0;

    friend bool operator==(const OngoingAcc&, const OngoingAcc&) = default;
    friend bool operator<(const OngoingAcc& a, const OngoingAcc& b) {
        return std::tie(a.rule, a.oids) < std::tie(b.rule, b.oids);
    }
};

/// Full engine state: model, current instant, agenda and bookkeeping.
/// Immutable by convention; every operation returns a new Configuration.
struct Configuration {
    ModelState model;
    TimePoint now = 0;
    std::vector<ScheduledAction> agenda;  // sorted
    std::vector<FiredMark> fired;         // sorted, only current instant
    std::vector<OngoingAcc> ongoing_acc;  // sorted
    std::uint64_t next_oid = 1;

    friend bool operator==(const Configuration&, const Configuration&) = default;

    bool has_due_now() const { return !agenda.empty() && agenda.front().due_time == now; }
};

/// Resolves the nondeterminism of the timed semantics for simulation.
struct Policy {
    enum class Durations : std::uint8_t { Min, Max, Uniform };
    enum class NonEager : std::uint8_t { Never, Always, Probability };

    Durations durations = Durations::Uniform;
    NonEager noneager = NonEager::Never;
    double probability = 0.0;
    std::uint64_t seed = 0;
};

struct EngineOptions {
    /// When set, realization only requires participants to exist; the default
    /// re-checks the full LHS (links and guards).
    bool abort_on_existence_only = false;
    int livelock_limit = 10000;
};

struct SimResult {
    Trace trace;
    Configuration config;
    std::size_t peak_agenda = 0;
};

/// The timed operational semantics. At each instant: realize due actions,
/// trigger newly matched atomic rules, repeat to quiescence, then advance
/// time by one unit, applying ongoing effects for the elapsed tick first.
class Engine {
public:
    explicit Engine(const Spec& spec, EngineOptions opts = {}) : spec_(spec), opts_(opts) {}

    const Spec& spec() const { return spec_; }
    const EngineOptions& options() const { return opts_; }

    Configuration initial_configuration(std::string_view model_name) const {
        const ModelState* model = spec_.find_model(model_name);
        if (!model) throw SpecError("unknown model '" + std::string(model_name) + "'");
        auto diags = conforms(*model, spec_.metamodel);
        if (!diags.empty())
            throw SpecError("initial model '" + std::string(model_name) +
                            "' does not conform: " + diags.front().reason);
        Configuration c;
        c.model = *model;
        c.next_oid = model->max_oid().v + 1;
        return c;
    }

    // -- triggering -----------------------------------------------------------

    struct Candidate {
        int rule = -1;
        Match match;
    };

    /// New eager/non-eager matches at this instant: LHS matched, NACs absent,
    /// periodic rules gated to period instants and their once-per-instant
    /// marks, and the same-participants exclusion against the agenda.
    void trigger_candidates(const Configuration& c, std::vector<Candidate>& eager,
                            std::vector<Candidate>& noneager) const {
        for (int r = 0; r < int(spec_.rules.size()); ++r) {
            const Rule& rule = spec_.rules[std::size_t(r)];
            if (rule.kind != RuleKind::Atomic) continue;
            if (rule.period && c.now % *rule.period != 0) continue;
            for (Match& m : find_matches(rule, c.model, spec_.metamodel)) {
                std::vector<Oid> parts = participants(m);
                if (excluded(c, r, parts)) continue;
                if (rule.period && fired_marked(c, r, parts)) continue;
                (rule.eager ? eager : noneager).push_back({r, std::move(m)});
            }
        }
    }

    bool quiescent(const Configuration& c) const {
        if (c.has_due_now()) return false;
        std::vector<Candidate> eager, noneager;
        trigger_candidates(c, eager, noneager);
        return eager.empty();
    }

    /// Schedules one action. Periodic rules are marked so a realization at
    /// the same instant cannot re-trigger them within the period.
    void schedule(Configuration& c, int rule_idx, Match match, TimePoint duration,
                  Trace* trace) const {
        const Rule& rule = spec_.rules[std::size_t(rule_idx)];
        ScheduledAction action;
        action.rule = rule_idx;
        action.parts = participants(match);
        action.match = std::move(match);
        action.trigger_time = c.now;
        action.due_time = c.now + duration;
        if (trace)
            trace->push_back(TraceEvent::triggered(c.now, rule.name, action.match.oids,
                                                   action.due_time));
        if (rule.period) {
            FiredMark mark{rule_idx, action.parts};
            auto it = std::lower_bound(c.fired.begin(), c.fired.end(), mark);
            c.fired.insert(it, std::move(mark));
        }
        auto it = std::lower_bound(c.agenda.begin(), c.agenda.end(), action);
        c.agenda.insert(it, std::move(action));
    }

    // -- realization ----------------------------------------------------------

    /// Realizes or aborts the agenda entry at `index`. The action applies
    /// only if its participants still exist and (unless configured otherwise)
    /// the full LHS still holds.
    Configuration realize_one(const Configuration& c, std::size_t index, Trace* trace) const {
        Configuration out = c;
        ScheduledAction action = out.agenda[index];
        out.agenda.erase(out.agenda.begin() + std::ptrdiff_t(index));
        const Rule& rule = spec_.rules[std::size_t(action.rule)];
        bool valid = match_still_valid(rule.lhs, action.match, out.model, spec_.metamodel,
                                       !opts_.abort_on_existence_only);
        if (!valid) {
            if (trace)
                trace->push_back(TraceEvent::aborted(c.now, rule.name, action.match.oids));
            return out;
        }
        out.model = apply(rule, action.match, out.model, spec_.metamodel, out.next_oid);
        purge_dead_accumulators(out);
        if (trace) trace->push_back(TraceEvent::realized(c.now, rule.name, action.match.oids));
        return out;
    }

    /// Realizes every entry due at the current instant in tie order,
    /// re-checking each match against the model its predecessors left.
    Configuration realize_due(const Configuration& c, Trace* trace) const {
        Configuration out = c;
        while (out.has_due_now()) out = realize_one(out, 0, trace);
        return out;
    }

    // -- ongoing rules ----------------------------------------------------------

    /// Applies every ongoing rule's effect for an elapsed `delta`. Matches
    /// are found once against the pre-state and all writes are composed;
    /// two writes to the same attribute of the same object are a spec error.
    Configuration apply_ongoing(const Configuration& c, TimePoint delta, Trace* trace) const {
        if (delta == 0) return c;
        Configuration out = c;
        std::vector<EffectWrite> all_writes;
        std::map<std::pair<Oid, Symbol>, Symbol> writers;
        for (int r = 0; r < int(spec_.rules.size()); ++r) {
            const Rule& rule = spec_.rules[std::size_t(r)];
            if (rule.kind != RuleKind::Ongoing) continue;
            int applied = 0;
            for (const Match& m : find_matches(rule, c.model, spec_.metamodel)) {
                TimePoint effective = delta;
                if (rule.limit) {
                    OngoingAcc key{r, m.oids, 0};
                    auto it = std::lower_bound(out.ongoing_acc.begin(), out.ongoing_acc.end(), key);
                    if (it == out.ongoing_acc.end() || it->rule != r || it->oids != m.oids)
                        it = out.ongoing_acc.insert(it, key);
                    effective = std::min(delta, *rule.limit - it->used);
                    if (effective <= 0) continue;
                    it->used += effective;
                }
                for (EffectWrite& w : effect_writes(rule, m, c.model, spec_.metamodel, effective)) {
                    auto [it, inserted] = writers.emplace(std::make_pair(w.oid, w.attr_name),
                                                          rule.name);
                    if (!inserted)
                        throw EngineError(
                            "ongoing rules '" + spec_.metamodel.syms.name(it->second) + "' and '" +
                            spec_.metamodel.syms.name(rule.name) +
                            "' both write attribute '" + spec_.metamodel.syms.name(w.attr_name) +
                            "' of object #" + std::to_string(w.oid.v));
                    all_writes.push_back(std::move(w));
                }
                ++applied;
            }
            if (trace && applied > 0)
                trace->push_back(TraceEvent::ongoing_applied(c.now, rule.name, applied, delta));
        }
        apply_writes(out.model, all_writes);
        return out;
    }

    // -- time -----------------------------------------------------------------

    /// Advances time by exactly one unit. Callers must only advance quiescent
    /// configurations. Ongoing effects for the tick run as part of the step,
    /// before anything can trigger at the new instant.
    Configuration advance(const Configuration& c, Trace* trace) const {
        Configuration out = c;
        out.now += 1;
        out.fired.clear();
        if (trace) trace->push_back(TraceEvent::time_advance(out.now, 1));
        return apply_ongoing(out, 1, trace);
    }

    // -- policy-driven execution -------------------------------------------------

    class PolicyRng {
    public:
        explicit PolicyRng(const Policy& policy) : policy_(policy), rng_(policy.seed) {}

        TimePoint duration(const Rule& rule) {
            switch (policy_.durations) {
                case Policy::Durations::Min: return rule.duration_lo;
                case Policy::Durations::Max: return rule.duration_hi;
                case Policy::Durations::Uniform: break;
            }
            auto width = std::uint64_t(rule.duration_hi - rule.duration_lo + 1);
            return rule.duration_lo + TimePoint(rng_() % width);
        }

        bool fire_noneager() {
            switch (policy_.noneager) {
                case Policy::NonEager::Never: return false;
                case Policy::NonEager::Always: return true;
                case Policy::NonEager::Probability: break;
            }
            double u = double(rng_() >> 11) * 0x1.0p-53;
            return u < policy_.probability;
        }

    private:
        const Policy& policy_;
        std::mt19937_64 rng_;
    };

    /// Runs one instant to quiescence under a policy: realize everything due,
    /// schedule every eager match and the policy-chosen non-eager ones,
    /// repeat. Non-eager fire/skip decisions are drawn once per match and
    /// instant.
    Configuration run_instant(const Configuration& start, PolicyRng& rng, Trace* trace) const {
        Configuration c = start;
        std::set<std::pair<int, std::vector<Oid>>> noneager_decided;
        std::map<Symbol, int> realizations;
        int micro = 0;
        for (;;) {
            if (++micro > opts_.livelock_limit) throw livelock_error(realizations);
            bool any_due = c.has_due_now();
            if (any_due) {
                Symbol rule_name = spec_.rules[std::size_t(c.agenda.front().rule)].name;
                ++realizations[rule_name];
                c = realize_one(c, 0, trace);
                continue;
            }
            std::vector<Candidate> eager, noneager;
            trigger_candidates(c, eager, noneager);
            bool scheduled = false;
            for (auto& cand : eager) {
                const Rule& rule = spec_.rules[std::size_t(cand.rule)];
                schedule(c, cand.rule, std::move(cand.match), rng.duration(rule), trace);
                scheduled = true;
            }
            for (auto& cand : noneager) {
                auto key = std::make_pair(cand.rule, participants(cand.match));
                if (!noneager_decided.insert(key).second) continue;
                if (!rng.fire_noneager()) continue;
                const Rule& rule = spec_.rules[std::size_t(cand.rule)];
                schedule(c, cand.rule, std::move(cand.match), rng.duration(rule), trace);
                scheduled = true;
            }
            if (!scheduled && !c.has_due_now()) return c;
        }
    }

    /// One full step under a policy: the current instant to quiescence, then
    /// a unit time advance.
    Configuration step(const Configuration& c, PolicyRng& rng, Trace* trace) const {
        return advance(run_instant(c, rng, trace), trace);
    }

    /// Simulates until now reaches the time bound. The bound instant itself
    /// is not processed, so a trace for bound B covers instants 0..B-1.
    SimResult simulate(std::string_view model_name, TimePoint time_bound,
                       const Policy& policy) const {
        SimResult result;
        result.config = initial_configuration(model_name);
        PolicyRng rng(policy);
        while (result.config.now < time_bound) {
            result.config = step(result.config, rng, &result.trace);
            result.peak_agenda = std::max(result.peak_agenda, result.config.agenda.size());
        }
        return result;
    }

    // -- exhaustive micro-steps ----------------------------------------------------

    /// Emits every successor of one micro-decision: one due realization per
    /// branch; else one duration assignment over the batch of new eager
    /// matches per branch; else each single non-eager firing, plus the time
    /// advance when the instant is quiescent. `emit` receives the successor
    /// and the events along the edge (empty unless `want_events`).
    template <typename F>
    void exhaustive_successors(const Configuration& c, bool allow_advance, bool want_events,
                               F&& emit) const {
        Trace events;
        Trace* ev = want_events ? &events : nullptr;
        if (c.has_due_now()) {
            for (std::size_t i = 0; i < c.agenda.size() && c.agenda[i].due_time == c.now; ++i) {
                events.clear();
                emit(realize_one(c, i, ev), std::move(events));
                events = {};
            }
            return;
        }
        std::vector<Candidate> eager, noneager;
        trigger_candidates(c, eager, noneager);
        if (!eager.empty()) {
            // One successor per integer duration tuple over the whole batch.
            std::vector<TimePoint> choice(eager.size());
            for (std::size_t i = 0; i < eager.size(); ++i)
                choice[i] = spec_.rules[std::size_t(eager[i].rule)].duration_lo;
            for (;;) {
                events.clear();
                Configuration succ = c;
                for (std::size_t i = 0; i < eager.size(); ++i)
                    schedule(succ, eager[i].rule, eager[i].match, choice[i], ev);
                emit(std::move(succ), std::move(events));
                events = {};
                std::size_t k = 0;
                while (k < eager.size()) {
                    const Rule& rule = spec_.rules[std::size_t(eager[k].rule)];
                    if (choice[k] < rule.duration_hi) {
                        ++choice[k];
                        break;
                    }
                    choice[k] = rule.duration_lo;
                    ++k;
                }
                if (k == eager.size()) break;
            }
            return;
        }
        for (const auto& cand : noneager) {
            const Rule& rule = spec_.rules[std::size_t(cand.rule)];
            for (TimePoint d = rule.duration_lo; d <= rule.duration_hi; ++d) {
                events.clear();
                Configuration succ = c;
                schedule(succ, cand.rule, cand.match, d, ev);
                emit(std::move(succ), std::move(events));
                events = {};
            }
        }
        if (allow_advance) {
            events.clear();
            emit(advance(c, ev), std::move(events));
        }
    }

private:
    bool excluded(const Configuration& c, int rule, const std::vector<Oid>& parts) const {
        for (const auto& action : c.agenda)
            if (action.rule == rule && action.parts == parts) return true;
        return false;
    }

    bool fired_marked(const Configuration& c, int rule, const std::vector<Oid>& parts) const {
        FiredMark key{rule, parts};
        return std::binary_search(c.fired.begin(), c.fired.end(), key);
    }

    void purge_dead_accumulators(Configuration& c) const {
        if (c.ongoing_acc.empty()) return;
        std::erase_if(c.ongoing_acc, [&](const OngoingAcc& acc) {
            for (Oid oid : acc.oids)
                if (!c.model.find(oid)) return true;
            return false;
        });
    }

    EngineError livelock_error(const std::map<Symbol, int>& realizations) const {
        std::string rules;
        for (const auto& [name, count] : realizations) {
            if (!rules.empty()) rules += ", ";
            rules += spec_.metamodel.syms.name(name) + " x" + std::to_string(count);
        }
        return EngineError("instantaneous livelock after " +
                           std::to_string(opts_.livelock_limit) +
                           " zero-time micro-steps at one instant (repeating rules: " + rules +
                           ")");
    }

    const Spec& spec_;
    EngineOptions opts_;
};

}  // namespace tmt
