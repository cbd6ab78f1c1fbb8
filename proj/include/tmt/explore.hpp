#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "tmt/canon.hpp"
#include "tmt/eval.hpp"
#include "tmt/engine.hpp"

namespace tmt {

struct SearchOptions {
    TimePoint time_bound = 0;
    int max_solutions = 1;
    std::optional<std::uint64_t> max_depth;  // micro-step depth cap
    std::uint64_t max_states = 400'000'000;  // hard budget; exceeding it is an error
    int workers = 1;
    bool want_witness = true;
    std::optional<std::uint64_t> shuffle_seed;  // test hook: scramble processing order
};

struct SearchStats {
    std::uint64_t states_explored = 0;
    std::uint64_t transitions = 0;
    std::size_t peak_layer = 0;  // largest per-instant state count
};

struct Solution {
    Configuration config;  // concrete witness state
    TimePoint elapsed = 0;
    Trace path;  // replayable from the initial configuration
};

struct SearchResult {
    enum class Outcome { SolutionFound, NoSolution, BoundExhausted };
    Outcome outcome = Outcome::NoSolution;
    std::vector<Solution> solutions;
    SearchStats stats;
    TimePoint time_bound = 0;
};

/// Bounded reachable-state graph with proposition labels. Frontier and
/// otherwise terminal states carry self-loops, so the relation is total.
struct KripkeStructure {
    std::vector<StateKey> keys;
    std::vector<Configuration> states;  // first-discovered concrete representative
    std::vector<std::vector<std::int32_t>> succs;
    std::int32_t initial = 0;
    std::vector<std::pair<Symbol, std::vector<char>>> labels;  // per prop, per state

    std::size_t size() const { return keys.size(); }
};

/// Breadth-first exploration of the exhaustive transition system, states
/// deduplicated by canonical key. Because `now` is part of the key, states
/// of different instants can never merge, so the visited set only has to
/// span the current and the next instant: memory follows the widest layer
/// rather than the whole run, and pruning loses nothing.
class Explorer {
public:
    Explorer(const Engine& engine, SearchOptions opts) : engine_(engine), opts_(opts) {}

    const SearchOptions& options() const { return opts_; }

    /// Windowed forward sweep in breadth-first order (instant, then
    /// micro-generation, then canonical key). `probe` runs inside workers and
    /// must be pure; `on_hit` runs single-threaded in deterministic order for
    /// each probed state and returns true to stop the sweep.
    template <typename Probe, typename OnHit>
    void forward_pass(std::string_view model_name, SearchStats& stats, bool& depth_clipped,
                      Probe&& probe, OnHit&& on_hit) {
        const Spec& spec = engine_.spec();
        struct Pending {
            StateKey key;
            std::uint32_t depth = 0;
        };

        std::unordered_set<StateKey> visited_now, visited_next;
        std::vector<Pending> arrivals;
        {
            Configuration init = engine_.initial_configuration(model_name);
            StateKey k0 = canonicalize(spec, init);
            visited_next.insert(k0);
            arrivals.push_back({std::move(k0), 0});
        }

        std::optional<std::mt19937_64> shuffle_rng;
        if (opts_.shuffle_seed) shuffle_rng.emplace(*opts_.shuffle_seed);

        for (TimePoint t = 0; !arrivals.empty(); ++t) {
            visited_now = std::move(visited_next);
            visited_next = {};
            std::vector<Pending> gen = std::move(arrivals);
            arrivals = {};
            std::size_t layer_states = 0;

            while (!gen.empty()) {
                if (shuffle_rng)
                    std::shuffle(gen.begin(), gen.end(), *shuffle_rng);
                else
                    std::sort(gen.begin(), gen.end(),
                              [](const Pending& a, const Pending& b) { return a.key < b.key; });

                layer_states += gen.size();
                stats.states_explored += gen.size();
                if (stats.states_explored > opts_.max_states)
                    throw BudgetError("state budget exceeded", stats.states_explored);

                struct Expansion {
                    std::vector<std::pair<StateKey, std::uint32_t>> micro;
                    std::vector<std::pair<StateKey, std::uint32_t>> advance;
                    std::vector<StateKey> hits;
                    std::uint64_t transitions = 0;
                    bool clipped = false;
                    std::exception_ptr error;
                };

                int workers = std::max(1, opts_.workers);
                std::vector<Expansion> parts(std::size_t(workers));
                auto expand_range = [&](std::size_t lo, std::size_t hi, Expansion& out) {
                    try {
                        for (std::size_t i = lo; i < hi; ++i) {
                            Configuration c = config_from_key(spec, gen[i].key);
                            if (probe(c)) out.hits.push_back(gen[i].key);
                            if (opts_.max_depth && gen[i].depth >= *opts_.max_depth) {
                                out.clipped = true;
                                continue;
                            }
                            bool allow_advance = t < opts_.time_bound;
                            engine_.exhaustive_successors(
                                c, allow_advance, false, [&](Configuration&& s, Trace&&) {
                                    ++out.transitions;
                                    StateKey key = canonicalize(spec, s);
                                    auto& sink = s.now == t ? out.micro : out.advance;
                                    sink.emplace_back(std::move(key), gen[i].depth + 1);
                                });
                        }
                    } catch (...) {
                        out.error = std::current_exception();
                    }
                };

                if (workers == 1 || gen.size() < 64) {
                    expand_range(0, gen.size(), parts[0]);
                } else {
                    std::vector<std::thread> threads;
                    std::size_t chunk =
                        (gen.size() + std::size_t(workers) - 1) / std::size_t(workers);
                    for (int w = 0; w < workers; ++w) {
                        std::size_t lo = std::size_t(w) * chunk;
                        std::size_t hi = std::min(gen.size(), lo + chunk);
                        if (lo >= hi) break;
                        threads.emplace_back(expand_range, lo, hi, std::ref(parts[std::size_t(w)]));
                    }
                    for (auto& th : threads) th.join();
                }

                std::vector<StateKey> hits;
                std::vector<Pending> next_gen;
                for (auto& part : parts) {
                    if (part.error) std::rethrow_exception(part.error);
                    stats.transitions += part.transitions;
                    depth_clipped = depth_clipped || part.clipped;
                    for (auto& [key, depth] : part.micro)
                        if (visited_now.insert(key).second)
                            next_gen.push_back({std::move(key), depth});
                    for (auto& [key, depth] : part.advance)
                        if (visited_next.insert(key).second)
                            arrivals.push_back({std::move(key), depth});
                    for (auto& key : part.hits) hits.push_back(std::move(key));
                }
                if (!hits.empty()) {
                    std::sort(hits.begin(), hits.end());
                    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
                    for (auto& key : hits)
                        if (on_hit(key, t)) {
                            stats.peak_layer = std::max(stats.peak_layer, layer_states);
                            return;
                        }
                }
                gen = std::move(next_gen);
            }
            stats.peak_layer = std::max(stats.peak_layer, layer_states);
        }
    }

    /// The search command: first configuration in BFS order whose model
    /// satisfies the query, with its elapsed time and a replayable path.
    /// The initial state itself is examined.
    SearchResult search(std::string_view model_name, const ExprPtr& query) {
        const Metamodel& mm = engine_.spec().metamodel;
        SearchResult result;
        result.time_bound = opts_.time_bound;

        struct Hit {
            StateKey key;
            TimePoint at;
        };
        std::vector<Hit> hits;
        bool depth_clipped = false;

        forward_pass(
            model_name, result.stats, depth_clipped,
            [&](const Configuration& c) { return eval_bool_query(query, c.model, mm); },
            [&](const StateKey& key, TimePoint t) {
                hits.push_back({key, t});
                return int(hits.size()) >= opts_.max_solutions;
            });

        if (!hits.empty()) {
            result.outcome = SearchResult::Outcome::SolutionFound;
            for (const Hit& hit : hits) {
                Solution sol;
                sol.elapsed = hit.at;
                if (opts_.want_witness) {
                    reconstruct_witness(model_name, hit.key, hit.at, sol);
                } else {
                    sol.config = config_from_key(engine_.spec(), hit.key);
                }
                result.solutions.push_back(std::move(sol));
            }
        } else {
            result.outcome = depth_clipped ? SearchResult::Outcome::BoundExhausted
                                           : SearchResult::Outcome::NoSolution;
        }
        return result;
    }

    /// Full bounded reachable graph, explicit. Suited to desk-scale bounds;
    /// guarded by the state budget.
    KripkeStructure reachable_graph(std::string_view model_name,
                                    const std::vector<std::pair<Symbol, ExprPtr>>& props) {
        const Spec& spec = engine_.spec();
        KripkeStructure k;
        std::unordered_map<StateKey, std::int32_t> index;
        std::deque<std::int32_t> queue;

        auto intern = [&](Configuration&& c) {
            StateKey key = canonicalize(spec, c);
            auto it = index.find(key);
            if (it != index.end()) return it->second;
            std::int32_t id = std::int32_t(k.states.size());
            if (std::uint64_t(id) >= opts_.max_states)
                throw BudgetError("state budget exceeded while building the reachable graph",
                                  std::uint64_t(id));
            index.emplace(key, id);
            k.keys.push_back(std::move(key));
            k.states.push_back(std::move(c));
            k.succs.emplace_back();
            queue.push_back(id);
            return id;
        };

        k.initial = intern(engine_.initial_configuration(model_name));
        while (!queue.empty()) {
            std::int32_t id = queue.front();
            queue.pop_front();
            Configuration state = k.states[std::size_t(id)];  // copy: vector may grow
            bool allow_advance = state.now < opts_.time_bound;
            std::vector<std::int32_t> succs;
            engine_.exhaustive_successors(state, allow_advance, false,
                                          [&](Configuration&& s, Trace&&) {
                                              succs.push_back(intern(std::move(s)));
                                          });
            std::sort(succs.begin(), succs.end());
            succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
            if (succs.empty()) succs.push_back(id);  // close the frontier
            k.succs[std::size_t(id)] = std::move(succs);
        }

        const Metamodel& mm = spec.metamodel;
        for (const auto& [name, expr] : props) {
            std::vector<char> sat(k.states.size(), 0);
            for (std::size_t i = 0; i < k.states.size(); ++i)
                sat[i] = eval_bool_query(expr, k.states[i].model, mm) ? 1 : 0;
            k.labels.emplace_back(name, std::move(sat));
        }
        return k;
    }

    /// Re-runs the bounded prefix with parent tracking to rebuild one witness
    /// path. Keeps concrete configurations so events and object identities
    /// stay consistent along the chain.
    void reconstruct_witness(std::string_view model_name, const StateKey& target,
                             TimePoint target_time, Solution& sol) {
        const Spec& spec = engine_.spec();
        struct Node {
            Configuration config;
            StateKey parent;
            Trace events;
        };
        std::unordered_map<StateKey, Node> nodes;
        std::deque<StateKey> queue;

        Configuration init = engine_.initial_configuration(model_name);
        StateKey k0 = canonicalize(spec, init);
        bool done = k0 == target;
        nodes.emplace(k0, Node{std::move(init), StateKey{}, {}});
        if (!done) queue.push_back(std::move(k0));

        while (!done && !queue.empty()) {
            StateKey key = std::move(queue.front());
            queue.pop_front();
            Configuration snapshot = nodes.at(key).config;  // expansion may rehash nodes
            if (snapshot.now > target_time) continue;
            bool allow_advance = snapshot.now < target_time;
            engine_.exhaustive_successors(
                snapshot, allow_advance, true, [&](Configuration&& s, Trace&& events) {
                    if (done) return;
                    StateKey sk = canonicalize(spec, s);
                    if (nodes.size() >= opts_.max_states)
                        throw BudgetError("state budget exceeded during witness reconstruction",
                                          nodes.size());
                    auto [it, inserted] =
                        nodes.emplace(std::move(sk), Node{std::move(s), key, std::move(events)});
                    if (!inserted) return;
                    if (it->first == target) {
                        done = true;
                        return;
                    }
                    queue.push_back(it->first);
                });
        }

        auto it = nodes.find(target);
        if (it == nodes.end())
            throw EngineError("internal error: witness state was not rediscovered");
        sol.config = it->second.config;
        std::vector<const Trace*> chain;
        for (const StateKey* k = &target;;) {
            const Node& node = nodes.at(*k);
            chain.push_back(&node.events);
            if (node.parent.empty()) break;
            k = &node.parent;
        }
        for (auto rit = chain.rbegin(); rit != chain.rend(); ++rit)
            sol.path.insert(sol.path.end(), (*rit)->begin(), (*rit)->end());
    }

private:
    const Engine& engine_;
    SearchOptions opts_;
};

}  // namespace tmt
