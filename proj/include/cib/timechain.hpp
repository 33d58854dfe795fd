#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cib/succession.hpp"

namespace cib {

struct Timespan {
    std::string label;
    CrossImpactMatrix cim;

    bool operator==(const Timespan&) const = default;
};

// Ordered timespans over a shared framework. Construction is permissive;
// validate_series reports mismatches.
class TimeSeriesModel {
public:
    TimeSeriesModel(std::shared_ptr<const Framework> framework, std::vector<Timespan> timespans);

    const Framework& framework() const { return *framework_; }
    std::shared_ptr<const Framework> framework_ptr() const { return framework_; }
    const std::vector<Timespan>& timespans() const { return timespans_; }

    const Timespan* find_timespan(const std::string& label) const;

    bool operator==(const TimeSeriesModel& other) const {
        return *framework_ == *other.framework_ && timespans_ == other.timespans_;
    }

private:
    std::shared_ptr<const Framework> framework_;
    std::vector<Timespan> timespans_;
};

ValidationReport validate_series(const TimeSeriesModel& model);

// One real value per (descriptor, state), complete over the framework.
// Construction rejects missing pairs naming them.
class ManualValueTable {
public:
    ManualValueTable(const Framework& framework, std::vector<std::vector<double>> values);

    double value(int descriptor, int state) const {
        return values_[static_cast<std::size_t>(descriptor - 1)]
                      [static_cast<std::size_t>(state - 1)];
    }
    const std::vector<std::vector<double>>& values() const { return values_; }

    bool operator==(const ManualValueTable&) const = default;

private:
    std::vector<std::vector<double>> values_;
};

// Sum of the assigned values of the scenario's states.
double manual_weight(const Framework& framework, const Scenario& scenario,
                     const ManualValueTable& table);

double compound_weight(const Rational& scenario_weight, double manual);

enum class WeightingMode { Scenario, Compound };

const char* to_string(WeightingMode mode);
WeightingMode weighting_mode_from_string(const std::string& name);

struct ChainLink {
    std::string timespan_label;
    Scenario scenario;
    std::uint64_t rank = 0;
    Rational scenario_weight;
    std::optional<double> manual;
    std::optional<double> compound;
    bool tie = false;
    std::vector<Scenario> tied;  // all maximum attainers when tie is set
    // Compound mode with no strictly positive compound weight; the argmax
    // still stands but the report flags it.
    bool nonpositive_compound = false;
    WeightTable table;

    bool operator==(const ChainLink&) const = default;
};

struct ScenarioChain {
    SuccessionRule rule = SuccessionRule::Global;
    WeightingMode mode = WeightingMode::Scenario;
    std::vector<ChainLink> links;

    bool operator==(const ScenarioChain&) const = default;
};

// Per timespan: basin weights, then argmax by scenario or compound weight.
// Ties break to the smallest scenario rank and are always surfaced.
// Throws ChainError when a timespan has no weighted consistent scenario.
ScenarioChain build_chain(const TimeSeriesModel& model, SuccessionRule rule, WeightingMode mode,
                          const ManualValueTable* table = nullptr,
                          std::uint64_t cap = kDefaultEnumerationCap, unsigned workers = 1);

}  // namespace cib
