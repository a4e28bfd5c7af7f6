#pragma once

// Shared hand-built models used across the test suites. Each builder mirrors
// one of the canonical examples the solver must get right.

#include <random>
#include <string>
#include <vector>

#include "multirew/model.hpp"

namespace fixtures {

using multirew::Action;
using multirew::Model;
using multirew::Rational;
using multirew::State;
using multirew::make_rational;

inline Rational rat(long n, long d = 1) { return make_rational(n, d); }

struct ModelBuilder {
    Model m;

    ModelBuilder& state(const std::string& name, Rational reward) {
        m.states.push_back(State{name, std::move(reward), {}, false});
        return *this;
    }
    ModelBuilder& act(const std::string& from, const std::string& action,
                      std::vector<std::pair<std::string, Rational>> succs) {
        int s = m.find_state(from);
        Action a;
        a.name = action;
        for (auto& [t, p] : succs) a.successors.emplace_back(m.find_state(t), p);
        m.states[s].actions.push_back(std::move(a));
        return *this;
    }
    Model build(const std::string& initial) {
        m.initial = m.find_state(initial);
        m.validate();
        return m;
    }
};

// Two-state chain, rewards 13/10 and 3/4, all probabilities 1/2. Both
// values are 0: the population goes extinct.
inline Model plant() {
    ModelBuilder b;
    b.state("good", rat(13, 10)).state("bad", rat(3, 4));
    b.act("good", "a", {{"good", rat(1, 2)}, {"bad", rat(1, 2)}});
    b.act("bad", "a", {{"good", rat(1, 2)}, {"bad", rat(1, 2)}});
    return b.build("good");
}

// s1 (reward 3) loops with probability 1/2 or moves to the absorbing s2.
// The expected value diverges through the transient state.
inline Model divergence() {
    ModelBuilder b;
    b.state("s1", rat(3)).state("s2", rat(1));
    b.act("s1", "a", {{"s1", rat(1, 2)}, {"s2", rat(1, 2)}});
    b.act("s2", "a", {{"s2", rat(1)}});
    return b.build("s1");
}

// The MDP contrasting multiplicative against additive-logarithmic optima:
// action a yields multiplicative reward 6, action b yields 4.
inline Model contrast() {
    ModelBuilder b;
    b.state("s1", rat(1)).state("s2", rat(2)).state("s3", rat(4)).state("s4", rat(1));
    b.act("s1", "a", {{"s2", rat(1)}});
    b.act("s1", "b", {{"s3", rat(1)}});
    b.act("s2", "a", {{"s2", rat(2, 5)}, {"s4", rat(3, 5)}});
    b.act("s3", "a", {{"s4", rat(1)}});
    b.act("s4", "a", {{"s4", rat(1)}});
    return b.build("s1");
}

// Deterministic two-cycle with rewards 2 and 1/2: prefix products alternate
// 2, 1, 2, 1, ... so sup is 2 and inf is 1.
inline Model logzeromp_left() {
    ModelBuilder b;
    b.state("s1", rat(2)).state("s2", rat(1, 2));
    b.act("s1", "a", {{"s2", rat(1)}});
    b.act("s2", "a", {{"s1", rat(1)}});
    return b.build("s1");
}

// Driftless random walk over rewards 2 and 1/2: sup infinite, inf zero.
inline Model logzeromp_right() {
    ModelBuilder b;
    b.state("s1", rat(2)).state("s2", rat(1, 2));
    b.act("s1", "a", {{"s1", rat(1, 2)}, {"s2", rat(1, 2)}});
    b.act("s2", "a", {{"s1", rat(1, 2)}, {"s2", rat(1, 2)}});
    return b.build("s1");
}

// The random-walk component plus an optional exit to an absorbing reward-1
// state. With the exit, a scheduler can gamble and then secure the product.
inline Model inf_special(bool with_exit) {
    ModelBuilder b;
    b.state("s1", rat(2)).state("s2", rat(1, 2));
    if (with_exit) b.state("s3", rat(1));
    b.act("s1", "a", {{"s1", rat(1, 2)}, {"s2", rat(1, 2)}});
    b.act("s2", "a", {{"s1", rat(1, 2)}, {"s2", rat(1, 2)}});
    if (with_exit) {
        b.act("s2", "exit", {{"s3", rat(1)}});
        b.act("s3", "a", {{"s3", rat(1)}});
    }
    return b.build("s1");
}

// Transient equation x = x + 1: no solution, value infinite.
inline Model no_solution() {
    ModelBuilder b;
    b.state("x", rat(2)).state("t", rat(1));
    b.act("x", "a", {{"x", rat(1, 2)}, {"t", rat(1, 2)}});
    b.act("t", "a", {{"t", rat(1)}});
    return b.build("x");
}

// Transient equation x = 2x + 1 with unique solution -1 (not non-negative),
// value infinite. The quarter branch to a reward-0 sink realizes the
// constant term 1 exactly.
inline Model one_solution() {
    ModelBuilder b;
    b.state("x", rat(4)).state("t", rat(1)).state("z", rat(0));
    b.act("x", "a", {{"x", rat(1, 2)}, {"t", rat(1, 4)}, {"z", rat(1, 4)}});
    b.act("t", "a", {{"t", rat(1)}});
    b.act("z", "a", {{"z", rat(1)}});
    return b.build("x");
}

// Equations x = 2x + y + 1, y = 2y + x + 1: solutions are exactly the line
// x + y = -1, none of them non-negative, value infinite.
inline Model infinitely_many() {
    ModelBuilder b;
    b.state("x", rat(4)).state("y", rat(4)).state("t", rat(1));
    b.act("x", "a", {{"x", rat(1, 2)}, {"y", rat(1, 4)}, {"t", rat(1, 4)}});
    b.act("y", "a", {{"y", rat(1, 2)}, {"x", rat(1, 4)}, {"t", rat(1, 4)}});
    b.act("t", "a", {{"t", rat(1)}});
    return b.build("x");
}

// Remark fixture: expected n-step reward diverges while almost all paths
// have multiplicative reward 0. Stationary distribution (1/2, 1/4, 1/4).
inline Model infinitevszero() {
    ModelBuilder b;
    b.state("s1", rat(1)).state("s2", rat(2)).state("s3", rat(1, 3));
    b.act("s1", "a", {{"s2", rat(1, 2)}, {"s3", rat(1, 2)}});
    b.act("s2", "a", {{"s1", rat(1)}});
    b.act("s3", "a", {{"s1", rat(1)}});
    return b.build("s1");
}

// Unit-product triangle s -> t -> u -> s (rewards 1/8, 2, 4) with exits,
// fed from an initial state. The canonical spider-construction instance.
inline Model spider_instance() {
    ModelBuilder b;
    b.state("init", rat(1))
        .state("s", rat(1, 8))
        .state("t", rat(2))
        .state("u", rat(4))
        .state("t1", rat(1))
        .state("t2", rat(1))
        .state("t3", rat(1));
    b.act("init", "a", {{"s", rat(1)}});
    b.act("s", "cycle", {{"t", rat(1)}});
    b.act("s", "exit", {{"t1", rat(1, 2)}, {"t2", rat(1, 2)}});
    b.act("t", "cycle", {{"u", rat(1)}});
    b.act("t", "exit", {{"t2", rat(1)}});
    b.act("u", "cycle", {{"s", rat(1)}});
    b.act("u", "exit", {{"t2", rat(2, 3)}, {"t3", rat(1, 3)}});
    b.act("t1", "a", {{"t1", rat(1)}});
    b.act("t2", "a", {{"t2", rat(1)}});
    b.act("t3", "a", {{"t3", rat(1)}});
    return b.build("init");
}

// Random MDP that reaches the final absorbing reward-1 state almost surely
// under every scheduler: every action of every non-final state moves to a
// strictly higher index with positive probability.
inline Model random_absorbing_mdp(std::mt19937_64& rng, int max_states = 5, int max_actions = 2) {
    std::uniform_int_distribution<int> nstates(2, max_states);
    std::uniform_int_distribution<int> nactions(1, max_actions);
    std::uniform_int_distribution<int> weight(1, 4);
    const long reward_num[] = {1, 1, 1, 2, 3};
    const long reward_den[] = {3, 2, 1, 1, 1};
    std::uniform_int_distribution<int> reward_pick(0, 4);

    int n = nstates(rng);
    ModelBuilder b;
    for (int s = 0; s < n - 1; ++s)
        b.state("s" + std::to_string(s), rat(reward_num[reward_pick(rng)],
                                             reward_den[reward_pick(rng)]));
    b.state("s" + std::to_string(n - 1), rat(1));

    for (int s = 0; s < n - 1; ++s) {
        int acts = nactions(rng);
        for (int a = 0; a < acts; ++a) {
            std::uniform_int_distribution<int> higher(s + 1, n - 1);
            std::uniform_int_distribution<int> any(0, n - 1);
            std::vector<int> succ{higher(rng)};
            int extra = std::uniform_int_distribution<int>(0, 2)(rng);
            for (int i = 0; i < extra; ++i) {
                int t = any(rng);
                if (std::find(succ.begin(), succ.end(), t) == succ.end()) succ.push_back(t);
            }
            std::vector<long> w(succ.size());
            long total = 0;
            for (auto& x : w) total += (x = weight(rng));
            std::vector<std::pair<std::string, Rational>> dist;
            for (size_t i = 0; i < succ.size(); ++i)
                dist.emplace_back("s" + std::to_string(succ[i]), rat(w[i], total));
            b.act("s" + std::to_string(s), "a" + std::to_string(a), dist);
        }
    }
    b.act("s" + std::to_string(n - 1), "a0", {{"s" + std::to_string(n - 1), rat(1)}});
    return b.build("s0");
}

// Random strongly connected single-action chain built over a ring with
// optional chords. When force_unit is set, rewards are derived from a
// potential so that every cycle has product exactly 1; otherwise one reward
// is perturbed with probability 1/2.
inline Model random_strongly_connected_chain(std::mt19937_64& rng, int max_states = 8,
                                             bool* made_unit = nullptr) {
    std::uniform_int_distribution<int> nstates(2, max_states);
    std::uniform_int_distribution<int> weight(1, 3);
    const long pot_num[] = {1, 1, 2, 4, 3};
    const long pot_den[] = {1, 2, 1, 1, 1};
    std::uniform_int_distribution<int> pot_pick(0, 4);
    int n = nstates(rng);

    // Potentials phi; edge s -> t is allowed when phi(t) equals the value
    // already fixed for s's successors, which keeps all cycles at product 1.
    std::vector<Rational> phi(n);
    for (auto& v : phi) v = rat(pot_num[pot_pick(rng)], pot_den[pot_pick(rng)]);

    std::vector<std::vector<int>> succ(n);
    for (int s = 0; s < n; ++s) succ[s].push_back((s + 1) % n);
    std::uniform_int_distribution<int> any(0, n - 1);
    int chords = std::uniform_int_distribution<int>(0, n)(rng);
    for (int i = 0; i < chords; ++i) {
        int s = any(rng), t = any(rng);
        if (phi[t] == phi[succ[s][0]] &&
            std::find(succ[s].begin(), succ[s].end(), t) == succ[s].end())
            succ[s].push_back(t);
    }

    std::vector<Rational> reward(n);
    for (int s = 0; s < n; ++s) reward[s] = phi[succ[s][0]] / phi[s];

    bool unit = true;
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
        reward[any(rng)] *= rat(3, 2);
        unit = false;
    }
    if (made_unit) *made_unit = unit;

    ModelBuilder b;
    for (int s = 0; s < n; ++s) b.state("s" + std::to_string(s), reward[s]);
    for (int s = 0; s < n; ++s) {
        std::vector<long> w(succ[s].size());
        long total = 0;
        for (auto& x : w) total += (x = weight(rng));
        std::vector<std::pair<std::string, Rational>> dist;
        for (size_t i = 0; i < succ[s].size(); ++i)
            dist.emplace_back("s" + std::to_string(succ[s][i]), rat(w[i], total));
        b.act("s" + std::to_string(s), "a", dist);
    }
    return b.build("s0");
}

}  // namespace fixtures
