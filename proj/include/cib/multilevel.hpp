#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cib/consistency.hpp"

namespace cib {

// Subsystem splitting of the descriptor set. Subsets hold 1-based descriptor
// indices in ascending order; together they must cover all descriptors, each
// with >= 2 members, and the overlap graph must be connected.
struct SubsystemSplit {
    std::vector<std::vector<int>> subsets;

    bool operator==(const SubsystemSplit&) const = default;
};

// Descriptors appearing in at least two subsets, ascending.
using TransitionalSet = std::vector<int>;

// Split invariants plus the zero-block condition: descriptors that share no
// subset must have no direct impact. Shared-pair cell agreement across
// subsystem views is re-checked even though projection from one master CIM
// makes it hold by construction.
ValidationReport validate_split(const CrossImpactMatrix& cim, const SubsystemSplit& split);

TransitionalSet transitional_set(const SubsystemSplit& split);

// CIM over the subset's descriptors (parent order kept), with exactly the
// cells whose endpoints both lie in the subset.
CrossImpactMatrix project_cim(const CrossImpactMatrix& cim, const std::vector<int>& subset);

// One consistent scenario per subsystem, aligned with the split's subsets.
struct Combinatorial {
    std::vector<Scenario> members;

    bool operator==(const Combinatorial&) const = default;
};

// Cartesian product of the per-subsystem consistent sets, streamed in
// lexicographic order of member positions. Refuses when the product exceeds
// the cap.
void enumerate_combinatorials(const std::vector<std::vector<Scenario>>& consistent_sets,
                              const std::function<void(const Combinatorial&)>& fn,
                              std::uint64_t cap = kDefaultEnumerationCap);

struct AggregationOutcome {
    bool aggregated = false;
    Scenario scenario;  // full scenario when aggregated
    // On refusal: the transitional descriptor the members disagree on and
    // the distinct states assigned to it, ascending.
    int conflict_descriptor = 0;
    std::vector<int> conflict_states;
};

// Succeeds iff every transitional descriptor gets the same state from all
// members containing it; the full scenario is then the union of the members.
AggregationOutcome aggregate_combinatorial(const Framework& framework, const Combinatorial& xi,
                                           const SubsystemSplit& split);

struct AggregationReport {
    std::vector<std::uint64_t> subsystem_consistent_counts;
    std::uint64_t combinatorial_count = 0;
    std::vector<Scenario> aggregated;          // A, ascending rank
    std::vector<Scenario> consistent_full;     // B, ascending rank
    std::vector<Scenario> soundness_failures;  // A \ B
    std::vector<Scenario> completeness_gaps;   // B \ A
    std::uint64_t agreement_count = 0;         // |A intersect B|
};

// Solves every subsystem and aggregates all combinatorials (set A). Leaves
// the full-CIM fields empty; the full space is never touched.
AggregationReport aggregate_scenarios(const CrossImpactMatrix& cim, const SubsystemSplit& split,
                                      std::uint64_t cap = kDefaultEnumerationCap,
                                      unsigned workers = 1);

// Empirical check of the aggregation claim: aggregate_scenarios plus the
// consistent scenarios of the full CIM (set B) and both difference
// directions. Completeness gaps are reported, never hidden.
AggregationReport verify_aggregation(const CrossImpactMatrix& cim, const SubsystemSplit& split,
                                     std::uint64_t cap = kDefaultEnumerationCap,
                                     unsigned workers = 1);

}  // namespace cib
