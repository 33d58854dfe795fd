#pragma once

#include <optional>
#include <string>

#include "cib/multilevel.hpp"
#include "cib/timechain.hpp"

namespace cib {

// A whole study in one document: framework, per-timespan cells, optional
// manual values and subsystem split.
struct ModelDocument {
    std::shared_ptr<const Framework> framework;
    TimeSeriesModel model;
    std::optional<ManualValueTable> manual_values;
    std::optional<SubsystemSplit> split;
    int impact_range = kDefaultImpactRange;

    bool operator==(const ModelDocument& other) const {
        return *framework == *other.framework && model == other.model &&
               manual_values == other.manual_values && split == other.split &&
               impact_range == other.impact_range;
    }
};

// Strict JSON parse: unknown fields, bad shapes and unresolved names are
// ParseErrors carrying the field path. Absent cells stay absent (they are
// semantically all-zero).
ModelDocument parse_model(const std::string& text);

// Canonical serialization; parse_model(serialize_model(doc)) == doc.
std::string serialize_model(const ModelDocument& doc);

// CSV with header scenario,rank,weight_num,weight_den,weight_decimal.
// Scenario rows sorted by descending weight then ascending rank, then one
// row per cycle, then the cycle_mass row. LF line endings.
std::string write_weight_table(const WeightTable& table, int precision = 6);

// Markdown-flavored report, one section per timespan, deterministic bytes.
std::string render_chain_report(const ScenarioChain& chain, const Framework& framework,
                                int precision = 6);

std::string render_validation_report(const ValidationReport& report);

std::string render_consistent_report(const Framework& framework, const std::string& label,
                                     const std::vector<Scenario>& consistent, int tolerance);

std::string render_aggregation_report(const Framework& framework, const SubsystemSplit& split,
                                      const AggregationReport& report, bool verified);

// Display helpers shared by the renderers.
std::string scenario_csv_token(const Scenario& scenario);
std::string scenario_with_names(const Framework& framework, const Scenario& scenario);
std::string format_decimal(double value, int precision);

}  // namespace cib
