#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "multirew/rational.hpp"

namespace multirew {

enum class AnalysisMode { sup, inf };

inline const char* to_string(AnalysisMode m) {
    return m == AnalysisMode::sup ? "sup" : "inf";
}

inline AnalysisMode other_mode(AnalysisMode m) {
    return m == AnalysisMode::sup ? AnalysisMode::inf : AnalysisMode::sup;
}

// States and actions are dense 0-based indices into Model::states and
// Model::states[s].actions; names are unique and survive transformations.
struct Action {
    std::string name;
    std::vector<std::pair<int, Rational>> successors;  // (state, probability > 0)
};

struct State {
    std::string name;
    Rational reward;
    std::vector<Action> actions;
    // Intermediate states and sinks introduced by model transformations;
    // never chosen as spider centers.
    bool auxiliary = false;
};

// Memoryless deterministic scheduler: one action index per state.
using MdScheduler = std::vector<int>;

struct Model {
    std::vector<State> states;
    int initial = 0;

    int num_states() const { return static_cast<int>(states.size()); }

    int find_state(const std::string& name) const {
        for (int i = 0; i < num_states(); ++i)
            if (states[i].name == name) return i;
        return -1;
    }

    bool is_markov_chain() const {
        return std::all_of(states.begin(), states.end(),
                           [](const State& s) { return s.actions.size() == 1; });
    }

    bool is_absorbing(int s) const {
        for (const Action& a : states[s].actions) {
            if (a.successors.size() != 1) return false;
            if (a.successors[0].first != s) return false;
        }
        return !states[s].actions.empty();
    }

    // Enabled actions must have probabilities summing to exactly one;
    // every state needs at least one action; names must be unique.
    void validate() const {
        std::set<std::string> names;
        for (int s = 0; s < num_states(); ++s) {
            const State& st = states[s];
            if (!names.insert(st.name).second)
                throw parse_error("duplicate state name: " + st.name);
            if (sgn(st.reward) < 0)
                throw parse_error("negative reward at state " + st.name);
            if (st.actions.empty())
                throw parse_error("state " + st.name + " has no enabled action");
            std::set<std::string> action_names;
            for (const Action& a : st.actions) {
                if (!action_names.insert(a.name).second)
                    throw parse_error("duplicate action " + a.name + " at state " + st.name);
                if (a.successors.empty())
                    throw parse_error("action " + a.name + " at state " + st.name +
                                      " has no successors");
                Rational total(0);
                for (const auto& [t, p] : a.successors) {
                    if (t < 0 || t >= num_states())
                        throw parse_error("unknown successor state index");
                    if (sgn(p) <= 0)
                        throw parse_error("non-positive probability at state " + st.name);
                    total += p;
                }
                if (total != 1)
                    throw parse_error("probabilities of action " + a.name + " at state " +
                                      st.name + " sum to " + format_rational(total) +
                                      ", expected 1");
            }
        }
        if (initial < 0 || initial >= num_states())
            throw parse_error("initial state out of range");
    }
};

namespace detail {

inline std::vector<char> reachable_from(const Model& m, int start) {
    std::vector<char> seen(m.num_states(), 0);
    std::vector<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        int s = queue.back();
        queue.pop_back();
        for (const Action& a : m.states[s].actions)
            for (const auto& [t, p] : a.successors)
                if (!seen[t]) {
                    seen[t] = 1;
                    queue.push_back(t);
                }
    }
    return seen;
}

// Keeps exactly the states with keep[s] != 0, remapping indices.
inline Model restrict_states(const Model& m, const std::vector<char>& keep) {
    std::vector<int> remap(m.num_states(), -1);
    Model out;
    for (int s = 0; s < m.num_states(); ++s) {
        if (!keep[s]) continue;
        remap[s] = out.num_states();
        out.states.push_back(m.states[s]);
    }
    for (State& st : out.states)
        for (Action& a : st.actions)
            for (auto& [t, p] : a.successors) {
                if (remap[t] < 0)
                    throw precondition_error("restriction drops a reachable successor");
                t = remap[t];
            }
    if (remap[m.initial] < 0)
        throw precondition_error("restriction drops the initial state");
    out.initial = remap[m.initial];
    return out;
}

}  // namespace detail

struct ZeroRewardReport {
    std::vector<std::string> zeroed_states;
    std::vector<std::string> removed_states;
};

// Makes every reward-0 state absorbing (a single self-loop) and prunes
// states that become unreachable from the initial state. Reward-0 states
// act as value-0 sinks for all downstream analyses.
inline Model zero_reward_preprocess(const Model& m, ZeroRewardReport* report = nullptr) {
    Model out = m;
    for (int s = 0; s < out.num_states(); ++s) {
        State& st = out.states[s];
        if (sgn(st.reward) != 0) continue;
        if (out.is_absorbing(s) && st.actions.size() == 1) continue;
        st.actions.clear();
        st.actions.push_back(Action{"loop", {{s, Rational(1)}}});
        if (report) report->zeroed_states.push_back(st.name);
    }
    auto seen = detail::reachable_from(out, out.initial);
    if (report)
        for (int s = 0; s < out.num_states(); ++s)
            if (!seen[s]) report->removed_states.push_back(out.states[s].name);
    return detail::restrict_states(out, seen);
}

// Replaces every reward by its reciprocal. Minimizing the multiplicative
// reward on a model equals the reciprocal of maximizing it on the inverted
// model with sup and inf swapped.
inline Model invert_rewards(const Model& m) {
    Model out = m;
    for (State& st : out.states) {
        if (sgn(st.reward) == 0)
            throw invalid_operand_error(
                "invert_rewards requires strictly positive rewards (state " + st.name + ")");
        st.reward = Rational(1) / st.reward;
    }
    return out;
}

}  // namespace multirew
