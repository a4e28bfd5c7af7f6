#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multirew/graph.hpp"
#include "multirew/linalg.hpp"
#include "multirew/model.hpp"
#include "multirew/succinct.hpp"

namespace multirew {

// Extracts a component of a model as a standalone Markov chain, keeping one
// chosen action per state. index_map[i] is the parent index of chain state i.
inline Model component_chain(const Model& m, const Component& c,
                             std::vector<int>* index_map = nullptr) {
    std::map<int, int> remap;
    Model chain;
    for (int s : c.states) {
        remap[s] = chain.num_states();
        State st;
        st.name = m.states[s].name;
        st.reward = m.states[s].reward;
        st.auxiliary = m.states[s].auxiliary;
        chain.states.push_back(std::move(st));
    }
    for (int s : c.states) {
        const auto& internal = c.internal_actions.at(s);
        if (internal.size() != 1)
            throw precondition_error("component_chain requires one internal action per state");
        const Action& a = m.states[s].actions[internal[0]];
        Action copy;
        copy.name = a.name;
        for (const auto& [t, p] : a.successors) copy.successors.emplace_back(remap.at(t), p);
        chain.states[remap.at(s)].actions.push_back(std::move(copy));
    }
    chain.initial = 0;
    if (index_map) {
        index_map->clear();
        for (int s : c.states) index_map->push_back(s);
    }
    return chain;
}

// The chain a memoryless deterministic scheduler induces on a model.
inline Model induced_chain(const Model& m, const MdScheduler& sched) {
    Model chain = m;
    for (int s = 0; s < m.num_states(); ++s) {
        int a = sched.at(s);
        if (a < 0 || a >= static_cast<int>(m.states[s].actions.size()))
            throw precondition_error("scheduler picks a disabled action");
        chain.states[s].actions = {m.states[s].actions[a]};
    }
    return chain;
}

// Unique stationary distribution of a strongly connected Markov chain.
inline std::vector<Rational> stationary_distribution(const Model& chain) {
    if (!chain.is_markov_chain())
        throw precondition_error("stationary_distribution requires a Markov chain");
    int n = chain.num_states();
    // theta P = theta with sum(theta) = 1; the n balance equations are
    // linearly dependent, so one of them is replaced by the normalization.
    std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, Rational(0)));
    for (int s = 0; s < n; ++s)
        for (const auto& [t, pr] : chain.states[s].actions[0].successors) p[s][t] += pr;
    LinearSystem sys;
    sys.matrix.assign(n, std::vector<Rational>(n, Rational(0)));
    sys.rhs.assign(n, Rational(0));
    for (int i = 0; i < n; ++i) sys.matrix[0][i] = Rational(1);
    sys.rhs[0] = Rational(1);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i)
            sys.matrix[j][i] = p[i][j] - (i == j ? Rational(1) : Rational(0));
    auto theta = solve_square(sys);
    if (!theta)
        throw precondition_error("stationary system is singular: chain not strongly connected");
    for (const Rational& v : *theta)
        if (sgn(v) <= 0)
            throw precondition_error("stationary distribution not positive: chain not strongly connected");
    return *theta;
}

// Sign of the expected logarithmic mean payoff sum_s theta_s log r(s).
inline Sign scc_log_mp_sign(const Model& chain, const CsriOptions& opts = {}) {
    auto theta = stationary_distribution(chain);
    std::vector<std::pair<Rational, Rational>> terms;
    for (int s = 0; s < chain.num_states(); ++s)
        terms.emplace_back(theta[s], chain.states[s].reward);
    return weighted_log_sign(terms, opts);
}

struct UnitCycleAnalysis {
    bool all_unit_cycles = false;
    // R(root, t): the unique multiplicative reward of paths from the root
    // to t (rewards are collected when leaving a state).
    std::map<int, Rational> path_product;
    // Otherwise: a closed walk (listed once, wrap-around edge implied)
    // whose reward product differs from 1.
    std::vector<int> witness_cycle;
    Rational witness_product;
};

namespace detail {

inline std::vector<int> walk_parents(const std::map<int, int>& parent, int from, int to) {
    std::vector<int> rev{to};
    while (to != from) {
        to = parent.at(to);
        rev.push_back(to);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

}  // namespace detail

// Breadth-first search storing the reward product of the discovery path of
// every state. Revisiting a state with a different product yields two paths
// whose completion to cycles exposes a cycle with product different from 1;
// otherwise every pair of states has a unique path reward.
inline UnitCycleAnalysis one_cycle_analysis(const Model& chain, int root) {
    if (!chain.is_markov_chain())
        throw precondition_error("one_cycle_analysis requires a Markov chain");
    UnitCycleAnalysis out;
    std::map<int, Rational> product{{root, Rational(1)}};
    std::map<int, int> parent;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        Rational leaving = product.at(s) * chain.states[s].reward;
        for (const auto& [t, p] : chain.states[s].actions[0].successors) {
            auto it = product.find(t);
            if (it == product.end()) {
                product.emplace(t, leaving);
                parent[t] = s;
                queue.push_back(t);
                continue;
            }
            if (it->second == leaving) continue;

            // Two distinct path products from root to t. Closing both paths
            // with one common return walk to the root gives two cycles with
            // different products; at least one is not 1.
            std::vector<int> path_a = detail::walk_parents(parent, root, t);
            std::vector<int> path_b = detail::walk_parents(parent, root, s);
            path_b.push_back(t);

            std::map<int, int> back_parent;
            std::deque<int> bq{t};
            std::set<int> seen{t};
            while (!bq.empty()) {
                int u = bq.front();
                bq.pop_front();
                if (u == root) break;
                for (const auto& [v, q] : chain.states[u].actions[0].successors)
                    if (seen.insert(v).second) {
                        back_parent[v] = u;
                        bq.push_back(v);
                    }
            }
            std::vector<int> back = detail::walk_parents(back_parent, t, root);
            Rational back_product(1);
            for (size_t i = 0; i + 1 < back.size(); ++i)
                back_product *= chain.states[back[i]].reward;

            auto finish = [&](std::vector<int> walk, Rational to_t) {
                Rational cycle_product = to_t * back_product;
                if (cycle_product == 1) return false;
                walk.insert(walk.end(), back.begin() + 1, back.end());
                walk.pop_back();  // drop the final root; the wrap-around edge closes it
                out.witness_cycle = std::move(walk);
                out.witness_product = cycle_product;
                return true;
            };
            if (!finish(path_a, it->second) && !finish(path_b, leaving))
                throw precondition_error("inconsistent path products without an n-cycle");
            return out;
        }
    }
    out.all_unit_cycles = true;
    out.path_product = std::move(product);
    return out;
}

enum class CycleStructure { all_unit_cycles, ncycle_witness, not_applicable };

struct BsccClassification {
    Sign mp_sign = Sign::zero;
    CycleStructure structure = CycleStructure::not_applicable;
    std::map<int, Rational> unit_reward;  // R(root, t) when all cycles have product 1
    std::vector<int> witness_cycle;
    std::map<int, ExtendedValue> sup_value, inf_value;
};

// Classification of a strongly connected single-action component:
// negative mean payoff gives value 0, positive gives infinity, zero mean
// payoff splits on whether some cycle has product different from 1.
inline BsccClassification bscc_values(const Model& chain, const CsriOptions& opts = {}) {
    BsccClassification out;
    int n = chain.num_states();
    out.mp_sign = scc_log_mp_sign(chain, opts);
    if (out.mp_sign == Sign::negative) {
        for (int s = 0; s < n; ++s) {
            out.sup_value.emplace(s, ExtendedValue::finite(Rational(0)));
            out.inf_value.emplace(s, ExtendedValue::finite(Rational(0)));
        }
        return out;
    }
    if (out.mp_sign == Sign::positive) {
        for (int s = 0; s < n; ++s) {
            out.sup_value.emplace(s, ExtendedValue::infinite());
            out.inf_value.emplace(s, ExtendedValue::infinite());
        }
        return out;
    }
    UnitCycleAnalysis cycles = one_cycle_analysis(chain, 0);
    if (!cycles.all_unit_cycles) {
        out.structure = CycleStructure::ncycle_witness;
        out.witness_cycle = cycles.witness_cycle;
        for (int s = 0; s < n; ++s) {
            out.sup_value.emplace(s, ExtendedValue::infinite());
            out.inf_value.emplace(s, ExtendedValue::finite(Rational(0)));
        }
        return out;
    }
    out.structure = CycleStructure::all_unit_cycles;
    out.unit_reward = cycles.path_product;
    Rational max_r = cycles.path_product.begin()->second;
    Rational min_r = max_r;
    for (const auto& [t, r] : cycles.path_product) {
        max_r = std::max(max_r, r);
        min_r = std::min(min_r, r);
    }
    // R(s, t) = R(root, t) / R(root, s), so the per-state extrema are the
    // root extrema divided by the state's own path product.
    for (int s = 0; s < n; ++s) {
        const Rational& rs = cycles.path_product.at(s);
        out.sup_value.emplace(s, ExtendedValue::finite(max_r / rs));
        out.inf_value.emplace(s, ExtendedValue::finite(min_r / rs));
    }
    return out;
}

struct McBsccVerdict {
    std::vector<std::string> states;
    std::string mp_sign;
    std::string structure;  // "all-unit-cycles" | "n-cycle" | "zero-reward" | ""
};

struct McReport {
    std::vector<McBsccVerdict> bscc_verdicts;
    std::string witness_kind;  // set when the returned value is infinite
    int transient_state_count = 0;
    // Outcome of the transient equality system: "solved", "infeasible" (the
    // least-nonnegative-solution program has no feasible point), or "none"
    // (no transient states).
    std::string transient_system = "none";
    // When infeasible and the equality system is square-regular, its unique
    // (not non-negative) solution, keyed by state name.
    std::map<std::string, Rational> transient_unique_solution;
    bool transient_singular = false;
};

struct McResult {
    std::map<int, ExtendedValue> values;
    McReport report;
};

// Full Markov-chain analysis: classify all bottom SCCs, propagate infinite
// values backwards, identify the almost-surely-worthless region, and solve
// the transient equation system by minimizing the coordinate sum over its
// exact non-negative solutions.
inline McResult mc_values(const Model& m, AnalysisMode mode, const CsriOptions& opts = {}) {
    if (!m.is_markov_chain())
        throw precondition_error("mc_values requires a Markov chain");
    int n = m.num_states();
    McResult res;

    std::vector<char> in_bscc(n, 0);
    std::vector<std::optional<ExtendedValue>> bscc_value(n);
    for (const Component& c : bottom_sccs(m)) {
        McBsccVerdict verdict;
        for (int s : c.states) verdict.states.push_back(m.states[s].name);
        bool zero_reward = std::any_of(c.states.begin(), c.states.end(), [&](int s) {
            return sgn(m.states[s].reward) == 0;
        });
        if (zero_reward) {
            // A recurrent zero-reward state forces every product to 0.
            for (int s : c.states) {
                in_bscc[s] = 1;
                bscc_value[s] = ExtendedValue::finite(Rational(0));
            }
            verdict.mp_sign = "negative";
            verdict.structure = "zero-reward";
        } else {
            std::vector<int> index_map;
            Model chain = component_chain(m, c, &index_map);
            BsccClassification cls = bscc_values(chain, opts);
            const auto& vals = mode == AnalysisMode::sup ? cls.sup_value : cls.inf_value;
            for (int i = 0; i < chain.num_states(); ++i) {
                in_bscc[index_map[i]] = 1;
                bscc_value[index_map[i]] = vals.at(i);
            }
            verdict.mp_sign = to_string(cls.mp_sign);
            verdict.structure = cls.structure == CycleStructure::all_unit_cycles
                                    ? "all-unit-cycles"
                                    : (cls.structure == CycleStructure::ncycle_witness ? "n-cycle" : "");
            if (cls.mp_sign == Sign::positive && res.report.witness_kind.empty())
                res.report.witness_kind = "positive-mec";
            if (cls.structure == CycleStructure::ncycle_witness && mode == AnalysisMode::sup &&
                res.report.witness_kind.empty())
                res.report.witness_kind = "gambling-bscc";
        }
        res.report.bscc_verdicts.push_back(std::move(verdict));
    }

    // Backward closure of the infinite-value states: positive rewards make
    // any state that reaches them infinite as well.
    std::set<int> infinite_seeds;
    for (int s = 0; s < n; ++s)
        if (bscc_value[s] && bscc_value[s]->is_infinite()) infinite_seeds.insert(s);
    std::vector<char> infinite(n, 0);
    for (int s = 0; s < n; ++s)
        if (infinite_seeds.count(s) || can_reach(m, s, infinite_seeds)) infinite[s] = 1;

    // Zero region: transient states from which every reachable bottom SCC
    // has value 0 reach the zero set with probability 1.
    std::set<int> positive_targets;
    for (int s = 0; s < n; ++s)
        if (in_bscc[s] && !bscc_value[s]->is_infinite() && sgn(bscc_value[s]->value()) > 0)
            positive_targets.insert(s);
    std::vector<char> zero_region(n, 0);
    for (int s = 0; s < n; ++s)
        if (!in_bscc[s] && !infinite[s] && !can_reach(m, s, positive_targets))
            zero_region[s] = 1;

    std::vector<int> unknown;
    for (int s = 0; s < n; ++s)
        if (!in_bscc[s] && !infinite[s] && !zero_region[s]) unknown.push_back(s);
    res.report.transient_state_count = static_cast<int>(unknown.size());

    std::map<int, Rational> transient_value;
    if (!unknown.empty()) {
        std::map<int, int> var_of;
        for (size_t i = 0; i < unknown.size(); ++i) var_of[unknown[i]] = static_cast<int>(i);
        size_t k = unknown.size();
        LinearProgram lp;
        lp.objective.assign(k, Rational(1));
        lp.eq_lhs.assign(k, std::vector<Rational>(k, Rational(0)));
        lp.eq_rhs.assign(k, Rational(0));
        for (size_t i = 0; i < k; ++i) {
            int s = unknown[i];
            const Rational& rw = m.states[s].reward;
            lp.eq_lhs[i][i] = Rational(1);
            for (const auto& [t, p] : m.states[s].actions[0].successors) {
                if (var_of.count(t))
                    lp.eq_lhs[i][var_of[t]] -= rw * p;
                else if (in_bscc[t] && !bscc_value[t]->is_infinite())
                    lp.eq_rhs[i] += rw * p * bscc_value[t]->value();
                // zero-region successors contribute nothing
            }
        }
        LpResult sol = lp_solve(lp);
        if (sol.feasible) {
            res.report.transient_system = "solved";
            for (size_t i = 0; i < k; ++i) transient_value[unknown[i]] = sol.solution[i];
        } else {
            res.report.transient_system = "infeasible";
            if (res.report.witness_kind.empty())
                res.report.witness_kind = "transient-divergence";
            auto unique = solve_square(LinearSystem{lp.eq_lhs, lp.eq_rhs});
            if (unique) {
                for (size_t i = 0; i < k; ++i)
                    res.report.transient_unique_solution[m.states[unknown[i]].name] = (*unique)[i];
            } else {
                res.report.transient_singular = true;
            }
        }
    }

    for (int s = 0; s < n; ++s) {
        if (infinite[s])
            res.values.emplace(s, ExtendedValue::infinite());
        else if (in_bscc[s])
            res.values.emplace(s, *bscc_value[s]);
        else if (zero_region[s])
            res.values.emplace(s, ExtendedValue::finite(Rational(0)));
        else if (transient_value.count(s))
            res.values.emplace(s, ExtendedValue::finite(transient_value[s]));
        else
            res.values.emplace(s, ExtendedValue::infinite());
    }
    return res;
}

}  // namespace multirew
