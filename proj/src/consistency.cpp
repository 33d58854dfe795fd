#include "cib/consistency.hpp"

#include <algorithm>
#include <thread>

namespace cib {

namespace {

int max_balance(const std::vector<int>& balances) {
    return *std::max_element(balances.begin(), balances.end());
}

}  // namespace

ImpactBalanceVector impact_balance(const CrossImpactMatrix& cim, const Scenario& scenario,
                                   int descriptor) {
    const Framework& fw = cim.framework();
    fw.require_valid_scenario(scenario);
    if (descriptor < 1 || descriptor > fw.descriptor_count())
        throw InvalidArgument("descriptor index " + std::to_string(descriptor) + " out of [1, " +
                              std::to_string(fw.descriptor_count()) + "]");

    ImpactBalanceVector out;
    out.descriptor = descriptor;
    out.balances.assign(static_cast<std::size_t>(fw.state_count(descriptor)), 0);
    for (int i = 1; i <= fw.descriptor_count(); ++i) {
        if (i == descriptor) continue;
        const JudgementCell* cell = cim.cell(i, descriptor);
        if (!cell) continue;
        const auto& row =
            cell->values[static_cast<std::size_t>(scenario.states[static_cast<std::size_t>(i - 1)] - 1)];
        for (std::size_t b = 0; b < out.balances.size(); ++b) out.balances[b] += row[b];
    }
    return out;
}

std::vector<ImpactBalanceVector> impact_balances(const CrossImpactMatrix& cim,
                                                 const Scenario& scenario) {
    const Framework& fw = cim.framework();
    fw.require_valid_scenario(scenario);
    const int n = fw.descriptor_count();

    std::vector<ImpactBalanceVector> out(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        out[static_cast<std::size_t>(j - 1)].descriptor = j;
        out[static_cast<std::size_t>(j - 1)].balances.assign(
            static_cast<std::size_t>(fw.state_count(j)), 0);
    }
    for (int i = 1; i <= n; ++i) {
        const int v_i = scenario.states[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const JudgementCell* cell = cim.cell(i, j);
            if (!cell) continue;
            const auto& row = cell->values[static_cast<std::size_t>(v_i - 1)];
            auto& balances = out[static_cast<std::size_t>(j - 1)].balances;
            for (std::size_t b = 0; b < balances.size(); ++b) balances[b] += row[b];
        }
    }
    return out;
}

bool is_consistent(const CrossImpactMatrix& cim, const Scenario& scenario, int tolerance) {
    if (tolerance < 0) throw InvalidArgument("tolerance must be non-negative");
    const auto balances = impact_balances(cim, scenario);
    for (const auto& ib : balances) {
        const int chosen =
            ib.balances[static_cast<std::size_t>(
                scenario.states[static_cast<std::size_t>(ib.descriptor - 1)] - 1)];
        if (chosen < max_balance(ib.balances) - tolerance) return false;
    }
    return true;
}

int inconsistency_score(const CrossImpactMatrix& cim, const Scenario& scenario) {
    const auto balances = impact_balances(cim, scenario);
    int score = 0;
    for (const auto& ib : balances) {
        const int chosen =
            ib.balances[static_cast<std::size_t>(
                scenario.states[static_cast<std::size_t>(ib.descriptor - 1)] - 1)];
        score = std::max(score, max_balance(ib.balances) - chosen);
    }
    return score;
}

namespace {

unsigned resolve_workers(unsigned workers, std::uint64_t total) {
    if (workers == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw ? hw : 1;
    }
    if (static_cast<std::uint64_t>(workers) > total) workers = static_cast<unsigned>(total);
    return workers ? workers : 1;
}

}  // namespace

std::vector<Scenario> enumerate_consistent(const CrossImpactMatrix& cim, int tolerance,
                                           std::uint64_t cap, unsigned workers) {
    if (tolerance < 0) throw InvalidArgument("tolerance must be non-negative");
    const Framework& fw = cim.framework();
    const std::uint64_t total = fw.scenario_count();
    if (total > cap) throw CapExceeded(total, cap);

    workers = resolve_workers(workers, total);

    // Contiguous rank chunks; per-chunk hits are already rank-ascending, so
    // in-order concatenation equals the single-worker output.
    std::vector<std::vector<Scenario>> hits(workers);
    auto scan = [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        Scenario scenario = scenario_unrank(fw, lo);
        for (std::uint64_t r = lo; r < hi; ++r) {
            if (is_consistent(cim, scenario, tolerance)) hits[w].push_back(scenario);
            // odometer step
            for (int k = fw.descriptor_count(); k >= 1; --k) {
                int& v = scenario.states[static_cast<std::size_t>(k - 1)];
                if (v < fw.state_count(k)) {
                    ++v;
                    break;
                }
                v = 1;
            }
        }
    };

    if (workers == 1) {
        scan(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = std::min<std::uint64_t>(total, chunk * w);
            const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
            if (lo >= hi) continue;
            pool.emplace_back(scan, w, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    std::vector<Scenario> out;
    for (auto& part : hits)
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    return out;
}

}  // namespace cib
