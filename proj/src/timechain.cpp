#include "cib/timechain.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace cib {

TimeSeriesModel::TimeSeriesModel(std::shared_ptr<const Framework> framework,
                                 std::vector<Timespan> timespans)
    : framework_(std::move(framework)), timespans_(std::move(timespans)) {
    if (!framework_) throw InvalidArgument("time series model without framework");
}

const Timespan* TimeSeriesModel::find_timespan(const std::string& label) const {
    for (const auto& ts : timespans_)
        if (ts.label == label) return &ts;
    return nullptr;
}

ValidationReport validate_series(const TimeSeriesModel& model) {
    ValidationReport report;
    if (model.timespans().empty())
        report.push_back({Severity::Error, "timespans", "model has no timespans"});

    std::unordered_set<std::string> labels;
    for (std::size_t t = 0; t < model.timespans().size(); ++t) {
        const Timespan& ts = model.timespans()[t];
        const std::string where = "timespan '" + ts.label + "'";
        if (ts.label.empty())
            report.push_back({Severity::Error, "timespans[" + std::to_string(t) + "]",
                              "empty timespan label"});
        else if (!labels.insert(ts.label).second)
            report.push_back({Severity::Error, where, "duplicate timespan label"});

        if (!(ts.cim.framework() == model.framework())) {
            report.push_back({Severity::Error, where,
                              "cross-impact matrix framework differs from the shared framework"});
            continue;  // nested checks would index the wrong shapes
        }
        for (const Violation& v : validate_cim(ts.cim))
            report.push_back({v.severity, where + ": " + v.location, v.message});
    }
    return report;
}

ManualValueTable::ManualValueTable(const Framework& framework,
                                   std::vector<std::vector<double>> values)
    : values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != framework.descriptor_count())
        throw InvalidArgument("manual value table covers " + std::to_string(values_.size()) +
                              " descriptors, framework has " +
                              std::to_string(framework.descriptor_count()));
    for (int k = 1; k <= framework.descriptor_count(); ++k) {
        const auto& row = values_[static_cast<std::size_t>(k - 1)];
        const auto& d = framework.descriptor(k);
        if (row.size() < d.states.size())
            throw InvalidArgument("manual value missing for ('" + d.name + "', '" +
                                  d.states[row.size()] + "')");
        if (row.size() > d.states.size())
            throw InvalidArgument("manual values for descriptor '" + d.name + "' cover " +
                                  std::to_string(row.size()) + " states, expected " +
                                  std::to_string(d.states.size()));
        for (std::size_t s = 0; s < row.size(); ++s)
            if (!std::isfinite(row[s]))
                throw InvalidArgument("manual value for ('" + d.name + "', '" + d.states[s] +
                                      "') is not finite");
    }
}

double manual_weight(const Framework& framework, const Scenario& scenario,
                     const ManualValueTable& table) {
    framework.require_valid_scenario(scenario);
    double sum = 0.0;
    for (int k = 1; k <= framework.descriptor_count(); ++k)
        sum += table.value(k, scenario.states[static_cast<std::size_t>(k - 1)]);
    return sum;
}

double compound_weight(const Rational& scenario_weight, double manual) {
    return manual * scenario_weight.to_double();
}

const char* to_string(WeightingMode mode) {
    return mode == WeightingMode::Scenario ? "scenario" : "compound";
}

WeightingMode weighting_mode_from_string(const std::string& name) {
    if (name == "scenario") return WeightingMode::Scenario;
    if (name == "compound") return WeightingMode::Compound;
    throw InvalidArgument("unknown weighting mode '" + name + "'");
}

ScenarioChain build_chain(const TimeSeriesModel& model, SuccessionRule rule, WeightingMode mode,
                          const ManualValueTable* table, std::uint64_t cap, unsigned workers) {
    if (mode == WeightingMode::Compound && !table)
        throw InvalidArgument("compound weighting requires a manual value table");
    if (model.timespans().empty()) throw ChainError("", "model has no timespans");

    ScenarioChain chain;
    chain.rule = rule;
    chain.mode = mode;

    const Framework& fw = model.framework();
    for (const Timespan& ts : model.timespans()) {
        WeightTable weights = basin_weights(ts.cim, rule, cap, workers);
        if (weights.entries.empty())
            throw ChainError(ts.label,
                             weights.cycles.empty()
                                 ? "no consistent scenarios"
                                 : "all basin mass lies in cyclic attractors");

        ChainLink link;
        link.timespan_label = ts.label;

        // Candidates are in ascending rank order, so the first maximum found
        // is the smallest-rank tie-break.
        std::size_t best = 0;
        auto better = [&](std::size_t lhs, std::size_t rhs) {  // lhs strictly better
            if (mode == WeightingMode::Scenario)
                return weights.entries[rhs].weight.less_than(weights.entries[lhs].weight);
            const double cl = compound_weight(weights.entries[lhs].weight,
                                              manual_weight(fw, weights.entries[lhs].scenario, *table));
            const double cr = compound_weight(weights.entries[rhs].weight,
                                              manual_weight(fw, weights.entries[rhs].scenario, *table));
            return cl > cr;
        };
        for (std::size_t c = 1; c < weights.entries.size(); ++c)
            if (better(c, best)) best = c;

        for (std::size_t c = 0; c < weights.entries.size(); ++c)
            if (!better(best, c) && !better(c, best)) link.tied.push_back(weights.entries[c].scenario);
        link.tie = link.tied.size() > 1;
        if (!link.tie) link.tied.clear();

        const WeightEntry& chosen = weights.entries[best];
        link.scenario = chosen.scenario;
        link.rank = chosen.rank;
        link.scenario_weight = chosen.weight;
        if (mode == WeightingMode::Compound) {
            link.manual = manual_weight(fw, chosen.scenario, *table);
            link.compound = compound_weight(chosen.weight, *link.manual);
            bool any_positive = false;
            for (const auto& entry : weights.entries)
                if (compound_weight(entry.weight, manual_weight(fw, entry.scenario, *table)) > 0.0)
                    any_positive = true;
            link.nonpositive_compound = !any_positive;
        }
        link.table = std::move(weights);
        chain.links.push_back(std::move(link));
    }
    return chain;
}

}  // namespace cib
