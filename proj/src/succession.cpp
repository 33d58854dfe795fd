#include "cib/succession.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <unordered_map>

namespace cib {

const char* to_string(SuccessionRule rule) {
    switch (rule) {
        case SuccessionRule::Global: return "global";
        case SuccessionRule::Incremental: return "incremental";
        case SuccessionRule::Local: return "local";
        case SuccessionRule::Adiabatic: return "adiabatic";
    }
    return "unknown";
}

SuccessionRule succession_rule_from_string(const std::string& name) {
    if (name == "global") return SuccessionRule::Global;
    if (name == "incremental") return SuccessionRule::Incremental;
    if (name == "local") return SuccessionRule::Local;
    if (name == "adiabatic") return SuccessionRule::Adiabatic;
    throw InvalidArgument("unknown succession rule '" + name + "'");
}

int argmax_state(const ImpactBalanceVector& balance) {
    if (balance.balances.empty()) throw InvalidArgument("empty balance vector");
    int best = 1;
    for (std::size_t b = 1; b < balance.balances.size(); ++b)
        if (balance.balances[b] > balance.balances[static_cast<std::size_t>(best - 1)])
            best = static_cast<int>(b + 1);
    return best;
}

namespace {

struct DescriptorMove {
    int descriptor = 0;
    int gap = 0;        // max balance minus current state's balance
    int target = 0;     // argmax state, smallest index on ties
    bool argmax_tie = false;
};

// Moves for every inconsistent descriptor, ascending descriptor index.
std::vector<DescriptorMove> pending_moves(const CrossImpactMatrix& cim, const Scenario& scenario) {
    std::vector<DescriptorMove> moves;
    const auto balances = impact_balances(cim, scenario);
    for (const auto& ib : balances) {
        const int current = scenario.states[static_cast<std::size_t>(ib.descriptor - 1)];
        const int max = *std::max_element(ib.balances.begin(), ib.balances.end());
        const int gap = max - ib.balances[static_cast<std::size_t>(current - 1)];
        if (gap == 0) continue;
        DescriptorMove move;
        move.descriptor = ib.descriptor;
        move.gap = gap;
        move.target = argmax_state(ib);
        move.argmax_tie =
            std::count(ib.balances.begin(), ib.balances.end(), max) > 1;
        moves.push_back(move);
    }
    return moves;
}

void apply_jump(Scenario& scenario, const DescriptorMove& move) {
    scenario.states[static_cast<std::size_t>(move.descriptor - 1)] = move.target;
}

void apply_step_toward(Scenario& scenario, const DescriptorMove& move) {
    int& v = scenario.states[static_cast<std::size_t>(move.descriptor - 1)];
    v += move.target > v ? 1 : -1;
}

}  // namespace

SuccessorResult successor_with_ties(const CrossImpactMatrix& cim, const Scenario& scenario,
                                    SuccessionRule rule) {
    SuccessorResult result;
    result.scenario = scenario;

    const std::vector<DescriptorMove> moves = pending_moves(cim, scenario);
    if (moves.empty()) return result;  // consistent scenario, fixed point

    switch (rule) {
        case SuccessionRule::Global:
            for (const auto& move : moves) {
                apply_jump(result.scenario, move);
                result.argmax_tie |= move.argmax_tie;
            }
            break;
        case SuccessionRule::Incremental:
            for (const auto& move : moves) {
                apply_step_toward(result.scenario, move);
                result.argmax_tie |= move.argmax_tie;
            }
            break;
        case SuccessionRule::Local: {
            // Largest gap first; ties fall to the lowest descriptor index,
            // which the ascending scan gives for free.
            const DescriptorMove* selected = &moves.front();
            for (const auto& move : moves)
                if (move.gap > selected->gap) selected = &move;
            apply_jump(result.scenario, *selected);
            result.argmax_tie = selected->argmax_tie;
            break;
        }
        case SuccessionRule::Adiabatic:
            // The list is rebuilt each step in ascending descriptor order;
            // the first entry is resolved.
            apply_jump(result.scenario, moves.front());
            result.argmax_tie = moves.front().argmax_tie;
            break;
    }
    return result;
}

Scenario successor(const CrossImpactMatrix& cim, const Scenario& scenario, SuccessionRule rule) {
    return successor_with_ties(cim, scenario, rule).scenario;
}

namespace {

Attractor canonical_cycle(std::vector<Scenario> loop, const Framework& fw) {
    std::size_t min_pos = 0;
    std::uint64_t min_rank = scenario_rank(fw, loop[0]);
    for (std::size_t k = 1; k < loop.size(); ++k) {
        const std::uint64_t r = scenario_rank(fw, loop[k]);
        if (r < min_rank) {
            min_rank = r;
            min_pos = k;
        }
    }
    std::rotate(loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(min_pos), loop.end());
    Attractor attractor;
    attractor.kind = Attractor::Kind::Cycle;
    attractor.scenarios = std::move(loop);
    return attractor;
}

}  // namespace

TrajectoryResult trajectory(const CrossImpactMatrix& cim, const Scenario& start,
                            SuccessionRule rule) {
    const Framework& fw = cim.framework();
    fw.require_valid_scenario(start);

    TrajectoryResult result;
    std::vector<Scenario> path;
    std::unordered_map<std::uint64_t, std::size_t> position;

    Scenario current = start;
    std::uint64_t current_rank = scenario_rank(fw, current);
    const std::uint64_t limit = fw.scenario_count() + 1;

    while (true) {
        const auto hit = position.find(current_rank);
        if (hit != position.end()) {
            const std::size_t first = hit->second;
            if (path.size() - first == 1) {
                result.attractor.kind = Attractor::Kind::FixedPoint;
                result.attractor.scenarios = {path[first]};
            } else {
                result.attractor = canonical_cycle(
                    std::vector<Scenario>(path.begin() + static_cast<std::ptrdiff_t>(first),
                                          path.end()),
                    fw);
            }
            return result;
        }
        position.emplace(current_rank, path.size());
        path.push_back(current);

        const SuccessorResult step = successor_with_ties(cim, current, rule);
        result.argmax_tie |= step.argmax_tie;
        ++result.steps;
        if (result.steps > limit)
            throw Error("trajectory exceeded the scenario-space step bound");
        current = step.scenario;
        current_rank = scenario_rank(fw, current);
    }
}

namespace {

// Canonical attractor identity for merging: fixed points carry one rank,
// cycles their ranks in canonical rotation.
struct AttractorKey {
    bool cycle = false;
    std::vector<std::uint64_t> ranks;

    bool operator<(const AttractorKey& other) const {
        if (cycle != other.cycle) return !cycle;
        return ranks < other.ranks;
    }
    bool operator==(const AttractorKey& other) const = default;
};

struct BasinScan {
    std::map<AttractorKey, std::uint64_t> counts;
    bool argmax_tie = false;
};

// Rank -> attractor-id memo. Dense storage up to 16M scenarios (64 MiB per
// worker), hashed above that.
class RankMemo {
public:
    explicit RankMemo(std::uint64_t total) {
        if (total <= (std::uint64_t{1} << 24)) dense_.assign(total, -1);
    }

    // -1 when unknown
    std::int64_t find(std::uint64_t rank) const {
        if (!dense_.empty()) return dense_[rank];
        const auto it = sparse_.find(rank);
        return it == sparse_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    void assign(std::uint64_t rank, std::uint32_t id) {
        if (!dense_.empty())
            dense_[rank] = static_cast<std::int32_t>(id);
        else
            sparse_.emplace(rank, id);
    }

private:
    std::vector<std::int32_t> dense_;
    std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
};

// Successor on ranks with memoized basin resolution. Walks stay inside the
// worker; the memo only ever maps a rank to the one attractor the
// deterministic map assigns it, so partitioning cannot change results.
void scan_range(const CrossImpactMatrix& cim, SuccessionRule rule, std::uint64_t lo,
                std::uint64_t hi, BasinScan& out) {
    const Framework& fw = cim.framework();
    const std::uint64_t limit = fw.scenario_count() + 1;

    RankMemo memo(fw.scenario_count());
    std::vector<AttractorKey> keys;

    std::vector<std::uint64_t> path;
    std::unordered_map<std::uint64_t, std::size_t> position;

    Scenario scenario = scenario_unrank(fw, lo);
    Scenario walker;
    for (std::uint64_t start = lo; start < hi; ++start) {
        std::uint32_t key_id = 0;
        const std::int64_t memoized = memo.find(start);
        if (memoized >= 0) {
            key_id = static_cast<std::uint32_t>(memoized);
        } else {
            path.clear();
            position.clear();
            walker = scenario;
            std::uint64_t walker_rank = start;
            std::uint64_t steps = 0;
            while (true) {
                const std::int64_t known = memo.find(walker_rank);
                if (known >= 0) {
                    key_id = static_cast<std::uint32_t>(known);
                    break;
                }
                const auto seen = position.find(walker_rank);
                if (seen != position.end()) {
                    AttractorKey key;
                    key.ranks.assign(path.begin() + static_cast<std::ptrdiff_t>(seen->second),
                                     path.end());
                    key.cycle = key.ranks.size() > 1;
                    if (key.cycle) {
                        const auto min_it =
                            std::min_element(key.ranks.begin(), key.ranks.end());
                        std::rotate(key.ranks.begin(), min_it, key.ranks.end());
                    }
                    keys.push_back(std::move(key));
                    key_id = static_cast<std::uint32_t>(keys.size() - 1);
                    break;
                }
                position.emplace(walker_rank, path.size());
                path.push_back(walker_rank);

                const SuccessorResult step = successor_with_ties(cim, walker, rule);
                out.argmax_tie |= step.argmax_tie;
                if (++steps > limit)
                    throw Error("trajectory exceeded the scenario-space step bound");
                walker = step.scenario;
                walker_rank = scenario_rank(fw, walker);
            }
            for (const std::uint64_t r : path) memo.assign(r, key_id);
        }
        ++out.counts[keys[key_id]];

        // odometer step to the next start
        for (int k = fw.descriptor_count(); k >= 1; --k) {
            int& v = scenario.states[static_cast<std::size_t>(k - 1)];
            if (v < fw.state_count(k)) {
                ++v;
                break;
            }
            v = 1;
        }
    }
}

unsigned resolve_workers(unsigned workers, std::uint64_t total) {
    if (workers == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw ? hw : 1;
    }
    if (static_cast<std::uint64_t>(workers) > total) workers = static_cast<unsigned>(total);
    return workers ? workers : 1;
}

}  // namespace

WeightTable basin_weights(const CrossImpactMatrix& cim, SuccessionRule rule, std::uint64_t cap,
                          unsigned workers) {
    const Framework& fw = cim.framework();
    const std::uint64_t total = fw.scenario_count();
    if (total > cap) throw CapExceeded(total, cap);

    workers = resolve_workers(workers, total);

    std::vector<BasinScan> scans(workers);
    if (workers == 1) {
        scan_range(cim, rule, 0, total, scans[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = std::min<std::uint64_t>(total, chunk * w);
            const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
            if (lo >= hi) continue;
            pool.emplace_back(scan_range, std::cref(cim), rule, lo, hi, std::ref(scans[w]));
        }
        for (auto& t : pool) t.join();
    }

    std::map<AttractorKey, std::uint64_t> merged;
    WeightTable table;
    table.rule = rule;
    table.total = total;
    for (const auto& scan : scans) {
        table.argmax_tie_encountered |= scan.argmax_tie;
        for (const auto& [key, count] : scan.counts) merged[key] += count;
    }

    std::uint64_t cycle_count = 0;
    for (const auto& [key, count] : merged) {
        if (!key.cycle) {
            WeightEntry entry;
            entry.rank = key.ranks.front();
            entry.scenario = scenario_unrank(fw, entry.rank);
            entry.basin_count = count;
            entry.weight = Rational::of(count, total);
            table.entries.push_back(std::move(entry));
        } else {
            CycleEntry entry;
            entry.scenarios.reserve(key.ranks.size());
            for (const std::uint64_t r : key.ranks)
                entry.scenarios.push_back(scenario_unrank(fw, r));
            entry.basin_count = count;
            entry.mass = Rational::of(count, total);
            table.cycles.push_back(std::move(entry));
            cycle_count += count;
        }
    }
    table.cycle_mass = Rational::of(cycle_count, total);
    return table;
}

}  // namespace cib
