#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "multirew/model.hpp"

namespace multirew {

// A set of states with, per state, the actions that stay inside the set.
// End components are closed and strongly connected via their internal
// actions; a BSCC has exactly one internal action per state.
struct Component {
    std::vector<int> states;                    // sorted
    std::map<int, std::vector<int>> internal_actions;

    bool contains(int s) const {
        return std::binary_search(states.begin(), states.end(), s);
    }
};

namespace detail {

struct TarjanState {
    std::vector<int> index, lowlink, on_stack;
    std::vector<int> stack;
    int counter = 0;
    std::vector<std::vector<int>> sccs;
};

template <typename Succs>
inline void tarjan_dfs(int v, const Succs& succs, TarjanState& ts) {
    ts.index[v] = ts.lowlink[v] = ts.counter++;
    ts.stack.push_back(v);
    ts.on_stack[v] = 1;
    for (int w : succs(v)) {
        if (ts.index[w] < 0) {
            tarjan_dfs(w, succs, ts);
            ts.lowlink[v] = std::min(ts.lowlink[v], ts.lowlink[w]);
        } else if (ts.on_stack[w]) {
            ts.lowlink[v] = std::min(ts.lowlink[v], ts.index[w]);
        }
    }
    if (ts.lowlink[v] == ts.index[v]) {
        std::vector<int> scc;
        int w;
        do {
            w = ts.stack.back();
            ts.stack.pop_back();
            ts.on_stack[w] = 0;
            scc.push_back(w);
        } while (w != v);
        std::sort(scc.begin(), scc.end());
        ts.sccs.push_back(std::move(scc));
    }
}

// SCCs of an arbitrary successor relation, in reverse topological order
// (every SCC is emitted after all SCCs it can reach).
template <typename Succs>
inline std::vector<std::vector<int>> scc_decomposition(int n, const Succs& succs) {
    TarjanState ts;
    ts.index.assign(n, -1);
    ts.lowlink.assign(n, 0);
    ts.on_stack.assign(n, 0);
    for (int v = 0; v < n; ++v)
        if (ts.index[v] < 0) tarjan_dfs(v, succs, ts);
    return ts.sccs;
}

inline std::vector<std::vector<int>> model_successors(const Model& m) {
    std::vector<std::vector<int>> succs(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) {
        std::set<int> out;
        for (const Action& a : m.states[s].actions)
            for (const auto& [t, p] : a.successors) out.insert(t);
        succs[s].assign(out.begin(), out.end());
    }
    return succs;
}

}  // namespace detail

// SCC decomposition treating every action edge as a graph edge, in reverse
// topological order. Internal actions are those whose successors all stay
// within the SCC (possibly none).
inline std::vector<Component> sccs(const Model& m) {
    auto succs = detail::model_successors(m);
    auto raw = detail::scc_decomposition(m.num_states(),
                                         [&](int v) -> const std::vector<int>& { return succs[v]; });
    std::vector<int> scc_of(m.num_states());
    for (size_t i = 0; i < raw.size(); ++i)
        for (int s : raw[i]) scc_of[s] = static_cast<int>(i);
    std::vector<Component> out;
    for (auto& scc : raw) {
        Component c;
        c.states = scc;
        for (int s : scc) {
            std::vector<int> internal;
            for (int ai = 0; ai < static_cast<int>(m.states[s].actions.size()); ++ai) {
                const Action& a = m.states[s].actions[ai];
                bool inside = std::all_of(a.successors.begin(), a.successors.end(),
                                          [&](const auto& e) { return scc_of[e.first] == scc_of[s]; });
                if (inside) internal.push_back(ai);
            }
            c.internal_actions[s] = std::move(internal);
        }
        out.push_back(std::move(c));
    }
    return out;
}

// SCCs without any leaving action edge. In a Markov chain these are the
// bottom SCCs; all long-run behaviour happens here.
inline std::vector<Component> bottom_sccs(const Model& m) {
    std::vector<Component> out;
    for (Component& c : sccs(m)) {
        bool bottom = true;
        for (int s : c.states)
            if (c.internal_actions[s].size() != m.states[s].actions.size()) bottom = false;
        if (bottom) out.push_back(std::move(c));
    }
    return out;
}

// Maximal end components via the standard iterated SCC-and-prune algorithm.
inline std::vector<Component> mecs(const Model& m) {
    int n = m.num_states();
    // candidate[s][a]: action still usable inside a prospective EC
    std::vector<std::vector<char>> candidate(n);
    std::vector<char> alive(n, 1);
    for (int s = 0; s < n; ++s)
        candidate[s].assign(m.states[s].actions.size(), 1);

    while (true) {
        std::vector<std::vector<int>> succs(n);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            std::set<int> out;
            for (size_t a = 0; a < candidate[s].size(); ++a) {
                if (!candidate[s][a]) continue;
                for (const auto& [t, p] : m.states[s].actions[a].successors)
                    if (alive[t]) out.insert(t);
            }
            succs[s].assign(out.begin(), out.end());
        }
        auto raw = detail::scc_decomposition(
            n, [&](int v) -> const std::vector<int>& { return succs[v]; });
        std::vector<int> scc_of(n, -1);
        for (size_t i = 0; i < raw.size(); ++i)
            for (int s : raw[i]) scc_of[s] = static_cast<int>(i);

        bool changed = false;
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            for (size_t a = 0; a < candidate[s].size(); ++a) {
                if (!candidate[s][a]) continue;
                for (const auto& [t, p] : m.states[s].actions[a].successors) {
                    if (!alive[t] || scc_of[t] != scc_of[s]) {
                        candidate[s][a] = 0;
                        changed = true;
                        break;
                    }
                }
            }
            bool any = std::any_of(candidate[s].begin(), candidate[s].end(),
                                   [](char c) { return c != 0; });
            if (!any && alive[s]) {
                alive[s] = 0;
                changed = true;
            }
        }
        if (!changed) {
            std::vector<Component> out;
            for (auto& scc : raw) {
                Component c;
                for (int s : scc) {
                    if (!alive[s]) continue;
                    std::vector<int> internal;
                    for (size_t a = 0; a < candidate[s].size(); ++a)
                        if (candidate[s][a]) internal.push_back(static_cast<int>(a));
                    if (!internal.empty()) {
                        c.states.push_back(s);
                        c.internal_actions[s] = std::move(internal);
                    }
                }
                // A singleton without a self-loop is no end component.
                if (c.states.size() == 1) {
                    bool self_loop = false;
                    int s = c.states[0];
                    for (int a : c.internal_actions[s])
                        for (const auto& [t, p] : m.states[s].actions[a].successors)
                            if (t == s) self_loop = true;
                    if (!self_loop) continue;
                }
                if (!c.states.empty()) out.push_back(std::move(c));
            }
            return out;
        }
    }
}

// Can `from` reach any state of `targets` in the action-edge graph?
inline bool can_reach(const Model& m, int from, const std::set<int>& targets) {
    if (targets.count(from)) return true;
    std::vector<char> seen(m.num_states(), 0);
    std::vector<int> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        int s = queue.back();
        queue.pop_back();
        for (const Action& a : m.states[s].actions)
            for (const auto& [t, p] : a.successors) {
                if (targets.count(t)) return true;
                if (!seen[t]) {
                    seen[t] = 1;
                    queue.push_back(t);
                }
            }
    }
    return false;
}

// The states from which some scheduler reaches `targets` with probability 1:
// the standard qualitative fixed point that iteratively disables actions
// leaking towards doomed states.
inline std::set<int> almost_sure_reach_max(const Model& m, const std::set<int>& targets) {
    int n = m.num_states();
    std::vector<std::vector<char>> enabled(n);
    for (int s = 0; s < n; ++s)
        enabled[s].assign(m.states[s].actions.size(), 1);
    std::vector<char> doomed(n, 0);

    while (true) {
        // States that can still reach a target through enabled actions.
        std::vector<char> reaches(n, 0);
        std::vector<int> queue;
        for (int t : targets)
            if (!doomed[t]) {
                reaches[t] = 1;
                queue.push_back(t);
            }
        // backward reachability
        std::vector<std::vector<int>> preds(n);
        for (int s = 0; s < n; ++s) {
            if (doomed[s]) continue;
            for (size_t a = 0; a < enabled[s].size(); ++a) {
                if (!enabled[s][a]) continue;
                for (const auto& [t, p] : m.states[s].actions[a].successors)
                    preds[t].push_back(s);
            }
        }
        while (!queue.empty()) {
            int t = queue.back();
            queue.pop_back();
            for (int s : preds[t])
                if (!reaches[s]) {
                    reaches[s] = 1;
                    queue.push_back(s);
                }
        }

        bool changed = false;
        for (int s = 0; s < n; ++s) {
            if (doomed[s] || targets.count(s)) continue;
            if (!reaches[s]) {
                doomed[s] = 1;
                changed = true;
                continue;
            }
            for (size_t a = 0; a < enabled[s].size(); ++a) {
                if (!enabled[s][a]) continue;
                for (const auto& [t, p] : m.states[s].actions[a].successors) {
                    if (doomed[t]) {
                        enabled[s][a] = 0;
                        changed = true;
                        break;
                    }
                }
            }
            bool any = false;
            for (char e : enabled[s]) any = any || e;
            if (!any) {
                doomed[s] = 1;
                changed = true;
            }
        }
        if (!changed) break;
    }

    std::set<int> out;
    for (int s = 0; s < n; ++s)
        if (!doomed[s]) out.insert(s);
    return out;
}

}  // namespace multirew
