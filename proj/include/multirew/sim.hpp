#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "multirew/mc.hpp"
#include "multirew/model.hpp"

namespace multirew {

// xoshiro256** seeded through splitmix64; fixed across platforms so that
// simulation results are bit-reproducible for a given seed. Episode i draws
// from the stream derived from (seed, i), which keeps parallel episode
// execution reproducible: splitting by episode index is the documented way
// to fan out.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

  private:
    std::uint64_t state_[4];
};

struct SimStats {
    long episodes = 0;
    double mean = 0.0;
    double std_error = 0.0;
    long truncated = 0;
};

namespace detail {

inline int sample_successor(const Action& a, Xoshiro256& rng) {
    // u / 2^64 against the exact cumulative probabilities.
    std::uint64_t bits = rng.next();
    Rational u(Int(bits), Int(1) << 64);
    u.canonicalize();
    Rational cum(0);
    for (const auto& [t, p] : a.successors) {
        cum += p;
        if (u < cum) return t;
    }
    return a.successors.back().first;
}

}  // namespace detail

// Monte Carlo estimate of the expected multiplicative reward under a fixed
// scheduler, for models that reach a reward-0 or reward-1 sink almost
// surely. The only floating-point computation in the library; quarantined
// to test oracles.
inline SimStats simulate_absorbing(const Model& m, const MdScheduler& sched, long episodes,
                                   long horizon, std::uint64_t seed) {
    SimStats stats;
    stats.episodes = episodes;
    double mean = 0.0, m2 = 0.0;
    long count = 0;
    for (long e = 0; e < episodes; ++e) {
        Xoshiro256 rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(e + 1)));
        int s = m.initial;
        double product = 1.0;
        bool absorbed = false;
        for (long step = 0; step < horizon; ++step) {
            const Action& a = m.states[s].actions[sched.at(s)];
            if (a.successors.size() == 1 && a.successors[0].first == s) {
                const Rational& rw = m.states[s].reward;
                if (rw == 1 || sgn(rw) == 0) {
                    if (sgn(rw) == 0) product = 0.0;
                    absorbed = true;
                    break;
                }
            }
            product *= m.states[s].reward.get_d();
            s = detail::sample_successor(a, rng);
        }
        if (!absorbed) {
            ++stats.truncated;
            continue;
        }
        ++count;
        double delta = product - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (product - mean);
    }
    if (stats.truncated * 2 > episodes)
        throw resource_error("simulation horizon exhausted in most episodes");
    stats.mean = mean;
    stats.std_error = count > 1 ? std::sqrt(m2 / (static_cast<double>(count) - 1.0) /
                                            static_cast<double>(count))
                                : 0.0;
    return stats;
}

// All simple cycles of a single-action model with their exact reward
// products (Johnson's algorithm). The verification oracle for the
// breadth-first unit-cycle check; capped at 10 states.
inline std::vector<std::pair<std::vector<int>, Rational>> enumerate_simple_cycles(const Model& m) {
    if (!m.is_markov_chain())
        throw precondition_error("enumerate_simple_cycles requires a Markov chain");
    if (m.num_states() > 10)
        throw resource_error("enumerate_simple_cycles capped at 10 states");
    int n = m.num_states();
    std::vector<std::vector<int>> adj(n);
    for (int s = 0; s < n; ++s)
        for (const auto& [t, p] : m.states[s].actions[0].successors) adj[s].push_back(t);

    std::vector<std::pair<std::vector<int>, Rational>> cycles;
    std::vector<int> stack;
    std::vector<char> blocked(n, 0);
    std::vector<std::set<int>> block_map(n);
    int start = 0;

    std::function<bool(int)> circuit = [&](int v) -> bool {
        bool found = false;
        stack.push_back(v);
        blocked[v] = 1;
        for (int w : adj[v]) {
            if (w < start) continue;
            if (w == start) {
                Rational product(1);
                for (int u : stack) product *= m.states[u].reward;
                cycles.emplace_back(stack, product);
                found = true;
            } else if (!blocked[w]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            // unblock
            std::function<void(int)> unblock = [&](int u) {
                blocked[u] = 0;
                for (int w : block_map[u])
                    if (blocked[w]) unblock(w);
                block_map[u].clear();
            };
            unblock(v);
        } else {
            for (int w : adj[v])
                if (w >= start) block_map[w].insert(v);
        }
        stack.pop_back();
        return found;
    };

    for (start = 0; start < n; ++start) {
        std::fill(blocked.begin(), blocked.end(), 0);
        for (auto& bm : block_map) bm.clear();
        circuit(start);
    }
    return cycles;
}

// Exhaustive memoryless-deterministic optimization oracle: the maximum of
// the chain value over all schedulers.
inline ExtendedValue enumerate_md_values(const Model& m, AnalysisMode mode,
                                         MdScheduler* best = nullptr,
                                         const CsriOptions& opts = {}) {
    unsigned long long combos = 1;
    for (const State& st : m.states) {
        combos *= st.actions.size();
        if (combos > (1ull << 16))
            throw resource_error("enumerate_md_values capped at 2^16 schedulers");
    }
    std::optional<ExtendedValue> best_value;
    MdScheduler sched(m.num_states(), 0);
    for (unsigned long long index = 0; index < combos; ++index) {
        unsigned long long rest = index;
        for (int s = 0; s < m.num_states(); ++s) {
            sched[s] = static_cast<int>(rest % m.states[s].actions.size());
            rest /= m.states[s].actions.size();
        }
        Model chain = zero_reward_preprocess(induced_chain(m, sched));
        McResult r = mc_values(chain, mode, opts);
        ExtendedValue v = r.values.at(chain.initial);
        if (!best_value || *best_value < v) {
            best_value = v;
            if (best) *best = sched;
        }
    }
    return *best_value;
}

// Exact iterates of the Bellman operator from the zero vector: iterate k
// gives the optimal expected product over paths absorbed within k steps.
// Requires every absorbing state to carry reward 0 or 1.
inline std::vector<std::vector<Rational>> value_iteration_oracle(const Model& m, int iterations) {
    int n = m.num_states();
    std::vector<char> target(n, 0);
    for (int s = 0; s < n; ++s)
        if (m.is_absorbing(s)) {
            const Rational& rw = m.states[s].reward;
            if (rw != 1 && sgn(rw) != 0)
                throw precondition_error("value_iteration_oracle: absorbing reward not in {0, 1}");
            target[s] = 1;
        }
    std::vector<std::vector<Rational>> iterates;
    std::vector<Rational> x(n, Rational(0));
    iterates.push_back(x);
    for (int it = 0; it < iterations; ++it) {
        std::vector<Rational> y(n);
        for (int s = 0; s < n; ++s) {
            if (target[s]) {
                y[s] = m.states[s].reward;
                continue;
            }
            std::optional<Rational> best;
            for (const Action& a : m.states[s].actions) {
                Rational acc(0);
                for (const auto& [t, p] : a.successors) acc += p * x[t];
                acc *= m.states[s].reward;
                if (!best || acc > *best) best = acc;
            }
            y[s] = *best;
        }
        x = std::move(y);
        iterates.push_back(x);
    }
    return iterates;
}

}  // namespace multirew
