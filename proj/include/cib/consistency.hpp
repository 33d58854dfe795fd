#pragma once

#include <cstdint>
#include <vector>

#include "cib/cim.hpp"

namespace cib {

// Impact balances of descriptor `descriptor` given the other descriptors'
// chosen states: balances[b-1] = sum over i != descriptor of
// d_{i,descriptor}(scenario[i], b).
struct ImpactBalanceVector {
    int descriptor = 0;
    std::vector<int> balances;

    bool operator==(const ImpactBalanceVector&) const = default;
};

ImpactBalanceVector impact_balance(const CrossImpactMatrix& cim, const Scenario& scenario,
                                   int descriptor);

// All N balance vectors of one scenario in a single pass.
std::vector<ImpactBalanceVector> impact_balances(const CrossImpactMatrix& cim,
                                                 const Scenario& scenario);

// A scenario is consistent when every descriptor's chosen state reaches the
// maximal balance, within the given slack. Tolerance 0 is the strict check.
bool is_consistent(const CrossImpactMatrix& cim, const Scenario& scenario, int tolerance = 0);

// Largest balance gap over all descriptors; 0 iff consistent at tolerance 0.
int inconsistency_score(const CrossImpactMatrix& cim, const Scenario& scenario);

// Exhaustive walk of the scenario space, ascending rank order. Results are
// identical for any worker count; workers = 0 picks a hardware default.
std::vector<Scenario> enumerate_consistent(const CrossImpactMatrix& cim, int tolerance = 0,
                                           std::uint64_t cap = kDefaultEnumerationCap,
                                           unsigned workers = 1);

}  // namespace cib
