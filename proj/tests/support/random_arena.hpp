#pragma once

#include "iterplan/synthesis.hpp"

#include <random>

namespace iterplan::testing {

/// Small random arena within the brute-force oracle's bounds.
inline synth::GameArena random_arena(std::mt19937_64& rng, std::size_t max_states = 8)
{
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    const std::size_t n = 1 + pick(max_states);
    const std::size_t num_labels = 2 + pick(2);
    std::vector<ActionLabel> alphabet;
    for (std::size_t l = 0; l < num_labels; ++l)
        alphabet.push_back({std::string(1, static_cast<char>('a' + l)),
                            coin(0.5) ? Controllability::controlled : Controllability::uncontrolled});

    std::vector<std::vector<synth::Move>> moves(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t l = 0; l < num_labels; ++l) {
            if (coin(0.5))
                moves[s].push_back({static_cast<LabelId>(l), static_cast<StateId>(pick(n))});
        }
    }
    synth::StateSet error(n);
    for (std::size_t s = 0; s < n; ++s)
        error[s] = coin(0.1);
    auto random_sets = [&](std::size_t count, double p) {
        std::vector<synth::StateSet> out;
        for (std::size_t i = 0; i < count; ++i) {
            synth::StateSet set(n);
            for (std::size_t s = 0; s < n; ++s)
                set[s] = coin(p);
            out.push_back(std::move(set));
        }
        return out;
    };
    auto assumptions = random_sets(pick(3), 0.5);
    auto goals = random_sets(1 + pick(2), 0.4);
    return synth::GameArena::make(std::move(alphabet), n, 0, std::move(moves), std::move(error),
                                  std::move(assumptions), std::move(goals));
}

} // namespace iterplan::testing
