#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cib/consistency.hpp"

namespace cib {

// The four deterministic update rules. Every rule fixes exactly the
// consistent scenarios; they differ in how inconsistent descriptors move.
enum class SuccessionRule { Global, Incremental, Local, Adiabatic };

const char* to_string(SuccessionRule rule);
SuccessionRule succession_rule_from_string(const std::string& name);

// Smallest state index attaining the maximal balance (1-based).
int argmax_state(const ImpactBalanceVector& balance);

struct Attractor {
    enum class Kind { FixedPoint, Cycle };

    Kind kind = Kind::FixedPoint;
    // FixedPoint: exactly one scenario. Cycle: >= 2 pairwise distinct
    // scenarios in succession order, rotated so the minimum rank comes first.
    std::vector<Scenario> scenarios;

    bool operator==(const Attractor&) const = default;
};

struct SuccessorResult {
    Scenario scenario;
    // An argmax tie among the states of a moved descriptor was broken.
    // Selection ties between descriptors (Local) are not flagged; they do
    // not break state-relabeling equivariance.
    bool argmax_tie = false;
};

Scenario successor(const CrossImpactMatrix& cim, const Scenario& scenario, SuccessionRule rule);
SuccessorResult successor_with_ties(const CrossImpactMatrix& cim, const Scenario& scenario,
                                    SuccessionRule rule);

struct TrajectoryResult {
    Attractor attractor;
    std::uint64_t steps = 0;  // successor applications until the repeat
    bool argmax_tie = false;
};

// Iterates the rule until a scenario repeats; terminates within
// scenario_count + 1 steps.
TrajectoryResult trajectory(const CrossImpactMatrix& cim, const Scenario& start,
                            SuccessionRule rule);

struct WeightEntry {
    Scenario scenario;
    std::uint64_t rank = 0;
    std::uint64_t basin_count = 0;
    Rational weight;

    bool operator==(const WeightEntry&) const = default;
};

struct CycleEntry {
    std::vector<Scenario> scenarios;  // canonical rotation
    std::uint64_t basin_count = 0;
    Rational mass;

    bool operator==(const CycleEntry&) const = default;
};

// Basin sizes of every attractor, as exact fractions of the scenario space.
struct WeightTable {
    SuccessionRule rule = SuccessionRule::Global;
    std::uint64_t total = 0;  // scenario space size
    std::vector<WeightEntry> entries;  // fixed points, ascending rank
    std::vector<CycleEntry> cycles;    // ascending rank of first element
    Rational cycle_mass = Rational{0, 1};
    bool argmax_tie_encountered = false;

    bool operator==(const WeightTable&) const = default;
};

// Runs a trajectory from every scenario and counts basins. Memoizes shared
// trajectory suffixes per worker; output is bit-identical for any worker
// count. workers = 0 picks a hardware default.
WeightTable basin_weights(const CrossImpactMatrix& cim, SuccessionRule rule,
                          std::uint64_t cap = kDefaultEnumerationCap, unsigned workers = 1);

}  // namespace cib
