#include "cib/multilevel.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cib {

namespace {

std::string subset_to_string(const std::vector<int>& subset) {
    std::string out = "{";
    for (std::size_t k = 0; k < subset.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(subset[k]);
    }
    return out + "}";
}

bool subset_contains(const std::vector<int>& subset, int descriptor) {
    return std::binary_search(subset.begin(), subset.end(), descriptor);
}

// Subsets sharing at least one descriptor form the overlap graph; a split
// only aggregates into one scenario space when that graph is connected.
bool overlap_graph_connected(const std::vector<std::vector<int>>& subsets) {
    if (subsets.empty()) return false;
    std::vector<bool> reached(subsets.size(), false);
    std::vector<std::size_t> stack = {0};
    reached[0] = true;
    while (!stack.empty()) {
        const std::size_t at = stack.back();
        stack.pop_back();
        for (std::size_t other = 0; other < subsets.size(); ++other) {
            if (reached[other]) continue;
            bool overlaps = false;
            for (const int d : subsets[at])
                if (subset_contains(subsets[other], d)) {
                    overlaps = true;
                    break;
                }
            if (overlaps) {
                reached[other] = true;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(reached.begin(), reached.end(), [](bool r) { return r; });
}

ValidationReport split_structure_violations(const Framework& fw, const SubsystemSplit& split) {
    ValidationReport report;
    const int n = fw.descriptor_count();

    if (split.subsets.size() < 2)
        report.push_back({Severity::Error, "split",
                          "needs at least 2 subsets, got " +
                              std::to_string(split.subsets.size())});

    std::vector<int> coverage(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t x = 0; x < split.subsets.size(); ++x) {
        const auto& subset = split.subsets[x];
        const std::string where = "split subset " + std::to_string(x + 1);
        if (subset.size() < 2)
            report.push_back({Severity::Error, where,
                              "singleton or empty subsystem has no impacts (" +
                                  subset_to_string(subset) + ")"});
        if (!std::is_sorted(subset.begin(), subset.end()) ||
            std::adjacent_find(subset.begin(), subset.end()) != subset.end())
            report.push_back(
                {Severity::Error, where, "descriptor indices must be ascending and distinct"});
        for (const int d : subset) {
            if (d < 1 || d > n)
                report.push_back({Severity::Error, where,
                                  "descriptor index " + std::to_string(d) + " out of [1, " +
                                      std::to_string(n) + "]"});
            else
                ++coverage[static_cast<std::size_t>(d)];
        }
    }
    for (int d = 1; d <= n; ++d)
        if (coverage[static_cast<std::size_t>(d)] == 0)
            report.push_back({Severity::Error, "split",
                              "descriptor " + std::to_string(d) + " ('" +
                                  fw.descriptor(d).name + "') is not covered"});

    if (split.subsets.size() >= 2 && !overlap_graph_connected(split.subsets))
        report.push_back({Severity::Error, "split", "overlap graph is not connected"});
    return report;
}

}  // namespace

ValidationReport validate_split(const CrossImpactMatrix& cim, const SubsystemSplit& split) {
    const Framework& fw = cim.framework();
    ValidationReport report = split_structure_violations(fw, split);
    if (has_errors(report)) return report;  // pair checks assume a usable split

    const int n = fw.descriptor_count();
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            bool shared = false;
            for (const auto& subset : split.subsets)
                if (subset_contains(subset, i) && subset_contains(subset, j)) {
                    shared = true;
                    break;
                }
            if (shared) continue;
            const JudgementCell* cell = cim.cell(i, j);
            if (!cell) continue;
            bool all_zero = true;
            for (const auto& row : cell->values)
                for (const int v : row)
                    if (v != 0) all_zero = false;
            if (!all_zero)
                report.push_back({Severity::Error,
                                  "pair (" + std::to_string(i) + "," + std::to_string(j) + ")",
                                  "descriptors share no subset but have a nonzero judgement cell"});
        }
    }

    // Shared pairs must look identical from every subsystem containing both.
    // Projection from one master CIM guarantees this; re-checked anyway.
    for (std::size_t m = 0; m < split.subsets.size(); ++m) {
        for (std::size_t n2 = m + 1; n2 < split.subsets.size(); ++n2) {
            std::vector<int> common;
            std::set_intersection(split.subsets[m].begin(), split.subsets[m].end(),
                                  split.subsets[n2].begin(), split.subsets[n2].end(),
                                  std::back_inserter(common));
            if (common.size() < 2) continue;
            const CrossImpactMatrix view_m = project_cim(cim, split.subsets[m]);
            const CrossImpactMatrix view_n = project_cim(cim, split.subsets[n2]);
            for (const int i : common) {
                for (const int j : common) {
                    if (i == j) continue;
                    const auto local = [](const std::vector<int>& subset, int d) {
                        return static_cast<int>(std::lower_bound(subset.begin(), subset.end(), d) -
                                                subset.begin()) +
                               1;
                    };
                    const JudgementCell* a =
                        view_m.cell(local(split.subsets[m], i), local(split.subsets[m], j));
                    const JudgementCell* b =
                        view_n.cell(local(split.subsets[n2], i), local(split.subsets[n2], j));
                    const bool same = (!a && !b) || (a && b && a->values == b->values);
                    if (!same)
                        report.push_back(
                            {Severity::Error,
                             "pair (" + std::to_string(i) + "," + std::to_string(j) + ")",
                             "judgement cell differs between subsystems " + std::to_string(m + 1) +
                                 " and " + std::to_string(n2 + 1)});
                }
            }
        }
    }
    return report;
}

TransitionalSet transitional_set(const SubsystemSplit& split) {
    std::map<int, int> occurrences;
    for (const auto& subset : split.subsets) {
        std::set<int> distinct(subset.begin(), subset.end());
        for (const int d : distinct) ++occurrences[d];
    }
    std::vector<int> out;
    for (const auto& [d, count] : occurrences)
        if (count >= 2) out.push_back(d);
    return out;
}

CrossImpactMatrix project_cim(const CrossImpactMatrix& cim, const std::vector<int>& subset) {
    const Framework& fw = cim.framework();
    if (subset.size() < 2)
        throw InvalidArgument("subsystem projection needs at least 2 descriptors");
    if (!std::is_sorted(subset.begin(), subset.end()) ||
        std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw InvalidArgument("subset indices must be ascending and distinct");

    std::vector<Framework::Descriptor> descriptors;
    descriptors.reserve(subset.size());
    for (const int d : subset) descriptors.push_back(fw.descriptor(d));
    auto sub_framework = std::make_shared<const Framework>(std::move(descriptors));

    std::vector<JudgementCell> cells;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = 0; b < subset.size(); ++b) {
            if (a == b) continue;
            const JudgementCell* cell = cim.cell(subset[a], subset[b]);
            if (!cell) continue;
            JudgementCell projected = *cell;
            projected.source = static_cast<int>(a + 1);
            projected.target = static_cast<int>(b + 1);
            cells.push_back(std::move(projected));
        }
    }
    return CrossImpactMatrix(std::move(sub_framework), std::move(cells), cim.impact_range());
}

void enumerate_combinatorials(const std::vector<std::vector<Scenario>>& consistent_sets,
                              const std::function<void(const Combinatorial&)>& fn,
                              std::uint64_t cap) {
    if (consistent_sets.empty()) return;
    unsigned __int128 product = 1;
    for (const auto& set : consistent_sets) {
        if (set.empty()) return;  // empty factor, empty stream
        product *= set.size();
        if (product > cap)
            throw CapExceeded(product > UINT64_MAX ? UINT64_MAX
                                                   : static_cast<std::uint64_t>(product),
                              cap);
    }

    Combinatorial current;
    current.members.reserve(consistent_sets.size());
    std::vector<std::size_t> pick(consistent_sets.size(), 0);
    for (const auto& set : consistent_sets) current.members.push_back(set.front());

    while (true) {
        fn(current);
        std::size_t x = consistent_sets.size();
        while (x > 0) {
            --x;
            if (pick[x] + 1 < consistent_sets[x].size()) {
                ++pick[x];
                current.members[x] = consistent_sets[x][pick[x]];
                break;
            }
            pick[x] = 0;
            current.members[x] = consistent_sets[x].front();
            if (x == 0) return;
        }
    }
}

AggregationOutcome aggregate_combinatorial(const Framework& framework, const Combinatorial& xi,
                                           const SubsystemSplit& split) {
    if (xi.members.size() != split.subsets.size())
        throw InvalidArgument("combinatorial has " + std::to_string(xi.members.size()) +
                              " members for " + std::to_string(split.subsets.size()) +
                              " subsets");

    AggregationOutcome outcome;
    const int n = framework.descriptor_count();
    std::vector<int> assigned(static_cast<std::size_t>(n) + 1, 0);

    for (std::size_t x = 0; x < split.subsets.size(); ++x) {
        const auto& subset = split.subsets[x];
        const Scenario& member = xi.members[x];
        if (member.states.size() != subset.size())
            throw InvalidArgument("member " + std::to_string(x + 1) + " has " +
                                  std::to_string(member.states.size()) + " states for subset " +
                                  subset_to_string(subset));
        for (std::size_t k = 0; k < subset.size(); ++k) {
            const int d = subset[k];
            const int state = member.states[k];
            int& slot = assigned[static_cast<std::size_t>(d)];
            if (slot == 0) {
                slot = state;
            } else if (slot != state) {
                outcome.conflict_descriptor = d;
                outcome.conflict_states = {std::min(slot, state), std::max(slot, state)};
                return outcome;
            }
        }
    }

    outcome.aggregated = true;
    outcome.scenario.states.reserve(static_cast<std::size_t>(n));
    for (int d = 1; d <= n; ++d)
        outcome.scenario.states.push_back(assigned[static_cast<std::size_t>(d)]);
    return outcome;
}

AggregationReport aggregate_scenarios(const CrossImpactMatrix& cim, const SubsystemSplit& split,
                                      std::uint64_t cap, unsigned workers) {
    const Framework& fw = cim.framework();
    AggregationReport report;

    std::vector<std::vector<Scenario>> consistent_sets;
    consistent_sets.reserve(split.subsets.size());
    for (const auto& subset : split.subsets) {
        const CrossImpactMatrix sub = project_cim(cim, subset);
        consistent_sets.push_back(enumerate_consistent(sub, 0, cap, workers));
        report.subsystem_consistent_counts.push_back(consistent_sets.back().size());
    }

    std::set<Scenario> aggregated;
    enumerate_combinatorials(
        consistent_sets,
        [&](const Combinatorial& xi) {
            ++report.combinatorial_count;
            const AggregationOutcome outcome = aggregate_combinatorial(fw, xi, split);
            if (outcome.aggregated) aggregated.insert(outcome.scenario);
        },
        cap);
    report.aggregated.assign(aggregated.begin(), aggregated.end());
    return report;
}

AggregationReport verify_aggregation(const CrossImpactMatrix& cim, const SubsystemSplit& split,
                                     std::uint64_t cap, unsigned workers) {
    const Framework& fw = cim.framework();
    if (fw.scenario_count() > cap) throw CapExceeded(fw.scenario_count(), cap);

    AggregationReport report = aggregate_scenarios(cim, split, cap, workers);
    report.consistent_full = enumerate_consistent(cim, 0, cap, workers);

    const std::set<Scenario> full_set(report.consistent_full.begin(),
                                      report.consistent_full.end());
    std::set_difference(report.aggregated.begin(), report.aggregated.end(), full_set.begin(),
                        full_set.end(), std::back_inserter(report.soundness_failures));
    std::set_difference(full_set.begin(), full_set.end(), report.aggregated.begin(),
                        report.aggregated.end(), std::back_inserter(report.completeness_gaps));
    report.agreement_count = report.aggregated.size() - report.soundness_failures.size();
    return report;
}

}  // namespace cib
