#include "cib/io.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace cib {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParseError(path, message);
}

const Json& member(const Json& object, const std::string& path, const char* key) {
    const auto it = object.find(key);
    if (it == object.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

void reject_unknown(const Json& object, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
}

const Json& expect_object(const Json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected an object");
    return value;
}

const Json& expect_array(const Json& value, const std::string& path) {
    if (!value.is_array()) fail(path, "expected an array");
    return value;
}

std::string expect_string(const Json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

std::shared_ptr<const Framework> parse_framework(const Json& value) {
    expect_object(value, "framework");
    reject_unknown(value, "framework", {"descriptors"});
    const Json& list = expect_array(member(value, "framework", "descriptors"),
                                    "framework.descriptors");

    std::vector<Framework::Descriptor> descriptors;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string path = "framework.descriptors[" + std::to_string(k) + "]";
        const Json& entry = expect_object(list[k], path);
        reject_unknown(entry, path, {"name", "states"});
        Framework::Descriptor d;
        d.name = expect_string(member(entry, path, "name"), path + ".name");
        const Json& states = expect_array(member(entry, path, "states"), path + ".states");
        for (std::size_t s = 0; s < states.size(); ++s)
            d.states.push_back(
                expect_string(states[s], path + ".states[" + std::to_string(s) + "]"));
        descriptors.push_back(std::move(d));
    }
    try {
        return std::make_shared<const Framework>(std::move(descriptors));
    } catch (const InvalidArgument& e) {
        fail("framework", e.what());
    }
}

JudgementCell parse_cell(const Framework& fw, const std::string& key, const Json& value,
                         const std::string& path) {
    const std::size_t arrow = key.find("->");
    if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= key.size())
        fail(path, "cell key must be '<source>-><target>'");
    const std::string src_name = key.substr(0, arrow);
    const std::string dst_name = key.substr(arrow + 2);

    JudgementCell cell;
    cell.source = fw.descriptor_index(src_name);
    if (cell.source == 0) fail(path, "unknown descriptor '" + src_name + "'");
    cell.target = fw.descriptor_index(dst_name);
    if (cell.target == 0) fail(path, "unknown descriptor '" + dst_name + "'");

    const int rows = fw.state_count(cell.source);
    const int cols = fw.state_count(cell.target);
    const Json& matrix = expect_array(value, path);
    if (static_cast<int>(matrix.size()) != rows)
        fail(path, "expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                       " matrix, got " + std::to_string(matrix.size()) + " rows");
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        const Json& row = expect_array(matrix[r], path + "[" + std::to_string(r) + "]");
        if (static_cast<int>(row.size()) != cols)
            fail(path, "expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " matrix, got " + std::to_string(row.size()) + " columns in row " +
                           std::to_string(r + 1));
        std::vector<int> values;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Json& entry = row[c];
            if (!entry.is_number_integer())
                fail(path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                     "expected an integer impact");
            values.push_back(entry.get<int>());
        }
        cell.values.push_back(std::move(values));
    }
    return cell;
}

ManualValueTable parse_manual_values(const Framework& fw, const Json& value) {
    expect_object(value, "manual_values");
    std::vector<std::vector<double>> values;
    values.resize(static_cast<std::size_t>(fw.descriptor_count()));

    for (const auto& [name, states] : value.items()) {
        const int d = fw.descriptor_index(name);
        if (d == 0) fail("manual_values." + name, "unknown descriptor");
        const std::string path = "manual_values." + name;
        expect_object(states, path);
        auto& row = values[static_cast<std::size_t>(d - 1)];
        row.assign(fw.descriptor(d).states.size(), 0.0);
        std::vector<bool> seen(row.size(), false);
        for (const auto& [state_name, number] : states.items()) {
            const int s = fw.state_index(d, state_name);
            if (s == 0) fail(path + "." + state_name, "unknown state");
            if (!number.is_number()) fail(path + "." + state_name, "expected a number");
            row[static_cast<std::size_t>(s - 1)] = number.get<double>();
            seen[static_cast<std::size_t>(s - 1)] = true;
        }
        for (std::size_t s = 0; s < seen.size(); ++s)
            if (!seen[s])
                fail(path, "missing value for state '" + fw.descriptor(d).states[s] + "'");
    }
    for (int d = 1; d <= fw.descriptor_count(); ++d)
        if (values[static_cast<std::size_t>(d - 1)].empty())
            fail("manual_values", "missing descriptor '" + fw.descriptor(d).name + "'");
    return ManualValueTable(fw, std::move(values));
}

SubsystemSplit parse_split(const Framework& fw, const Json& value) {
    expect_array(value, "split");
    SubsystemSplit split;
    for (std::size_t x = 0; x < value.size(); ++x) {
        const std::string path = "split[" + std::to_string(x) + "]";
        const Json& names = expect_array(value[x], path);
        std::vector<int> subset;
        for (std::size_t k = 0; k < names.size(); ++k) {
            const std::string name =
                expect_string(names[k], path + "[" + std::to_string(k) + "]");
            const int d = fw.descriptor_index(name);
            if (d == 0)
                fail(path + "[" + std::to_string(k) + "]", "unknown descriptor '" + name + "'");
            subset.push_back(d);
        }
        std::sort(subset.begin(), subset.end());
        if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
            fail(path, "duplicate descriptor in subset");
        split.subsets.push_back(std::move(subset));
    }
    return split;
}

}  // namespace

ModelDocument parse_model(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("", std::string("syntax error: ") + e.what());
    }
    expect_object(doc, "");
    reject_unknown(doc, "",
                   {"framework", "impact_range", "timespans", "manual_values", "split"});

    auto framework = parse_framework(member(doc, "", "framework"));

    int impact_range = kDefaultImpactRange;
    if (const auto it = doc.find("impact_range"); it != doc.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 1)
            fail("impact_range", "expected a positive integer");
        impact_range = static_cast<int>(it->get<std::int64_t>());
    }

    const Json& timespans_json = expect_array(member(doc, "", "timespans"), "timespans");
    std::vector<Timespan> timespans;
    for (std::size_t t = 0; t < timespans_json.size(); ++t) {
        const std::string path = "timespans[" + std::to_string(t) + "]";
        const Json& entry = expect_object(timespans_json[t], path);
        reject_unknown(entry, path, {"label", "cells"});
        const std::string label = expect_string(member(entry, path, "label"), path + ".label");

        std::vector<JudgementCell> cells;
        if (const auto it = entry.find("cells"); it != entry.end()) {
            expect_object(*it, path + ".cells");
            for (const auto& [key, value] : it->items())
                cells.push_back(parse_cell(*framework, key, value, path + ".cells." + key));
        }
        timespans.push_back(
            {label, CrossImpactMatrix(framework, std::move(cells), impact_range)});
    }

    ModelDocument out{framework, TimeSeriesModel(framework, std::move(timespans)), std::nullopt,
                      std::nullopt, impact_range};
    if (const auto it = doc.find("manual_values"); it != doc.end())
        out.manual_values = parse_manual_values(*framework, *it);
    if (const auto it = doc.find("split"); it != doc.end())
        out.split = parse_split(*framework, *it);
    return out;
}

std::string serialize_model(const ModelDocument& doc) {
    const Framework& fw = *doc.framework;
    Json root;

    Json descriptors = Json::array();
    for (int d = 1; d <= fw.descriptor_count(); ++d) {
        Json entry;
        entry["name"] = fw.descriptor(d).name;
        entry["states"] = fw.descriptor(d).states;
        descriptors.push_back(std::move(entry));
    }
    root["framework"]["descriptors"] = std::move(descriptors);
    root["impact_range"] = doc.impact_range;

    Json timespans = Json::array();
    for (const Timespan& ts : doc.model.timespans()) {
        Json entry;
        entry["label"] = ts.label;
        Json cells = Json::object();
        for (const JudgementCell& cell : ts.cim.cells()) {
            const int n = fw.descriptor_count();
            if (cell.source < 1 || cell.source > n || cell.target < 1 || cell.target > n)
                throw InvalidArgument("cannot serialize cell with out-of-range descriptors");
            cells[fw.descriptor(cell.source).name + "->" + fw.descriptor(cell.target).name] =
                cell.values;
        }
        entry["cells"] = std::move(cells);
        timespans.push_back(std::move(entry));
    }
    root["timespans"] = std::move(timespans);

    if (doc.manual_values) {
        Json manual = Json::object();
        for (int d = 1; d <= fw.descriptor_count(); ++d) {
            Json states = Json::object();
            for (std::size_t s = 0; s < fw.descriptor(d).states.size(); ++s)
                states[fw.descriptor(d).states[s]] =
                    doc.manual_values->values()[static_cast<std::size_t>(d - 1)][s];
            manual[fw.descriptor(d).name] = std::move(states);
        }
        root["manual_values"] = std::move(manual);
    }

    if (doc.split) {
        Json split = Json::array();
        for (const auto& subset : doc.split->subsets) {
            Json names = Json::array();
            for (const int d : subset) names.push_back(fw.descriptor(d).name);
            split.push_back(std::move(names));
        }
        root["split"] = std::move(split);
    }
    return root.dump(2) + "\n";
}

std::string scenario_csv_token(const Scenario& scenario) {
    std::string out;
    for (std::size_t k = 0; k < scenario.states.size(); ++k) {
        if (k) out += "-";
        out += std::to_string(scenario.states[k]);
    }
    return out;
}

std::string scenario_with_names(const Framework& framework, const Scenario& scenario) {
    std::string out;
    for (int k = 1; k <= framework.descriptor_count(); ++k) {
        if (k > 1) out += ", ";
        const auto& d = framework.descriptor(k);
        out += d.name + "=" +
               d.states[static_cast<std::size_t>(
                   scenario.states[static_cast<std::size_t>(k - 1)] - 1)];
    }
    return out;
}

std::string format_decimal(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

namespace {

std::string cycle_csv_token(const CycleEntry& cycle) {
    std::string out = "cycle:";
    for (std::size_t k = 0; k < cycle.scenarios.size(); ++k) {
        if (k) out += ">";
        out += scenario_csv_token(cycle.scenarios[k]);
    }
    return out;
}

std::string cycle_display(const std::vector<Scenario>& scenarios) {
    std::string out = "[";
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        if (k) out += " -> ";
        out += scenario_to_string(scenarios[k]);
    }
    return out + "]";
}

// Display order: descending weight, then ascending rank.
std::vector<const WeightEntry*> entries_by_weight(const WeightTable& table) {
    std::vector<const WeightEntry*> order;
    order.reserve(table.entries.size());
    for (const auto& entry : table.entries) order.push_back(&entry);
    std::stable_sort(order.begin(), order.end(), [](const WeightEntry* a, const WeightEntry* b) {
        if (a->weight == b->weight) return a->rank < b->rank;
        return b->weight.less_than(a->weight);
    });
    return order;
}

std::vector<const CycleEntry*> cycles_by_mass(const WeightTable& table) {
    std::vector<const CycleEntry*> order;
    order.reserve(table.cycles.size());
    for (const auto& cycle : table.cycles) order.push_back(&cycle);
    std::stable_sort(order.begin(), order.end(), [](const CycleEntry* a, const CycleEntry* b) {
        if (a->mass == b->mass) return a->scenarios.front() < b->scenarios.front();
        return b->mass.less_than(a->mass);
    });
    return order;
}

}  // namespace

std::string write_weight_table(const WeightTable& table, int precision) {
    std::string out = "scenario,rank,weight_num,weight_den,weight_decimal\n";
    for (const WeightEntry* entry : entries_by_weight(table)) {
        out += scenario_csv_token(entry->scenario);
        out += "," + std::to_string(entry->rank);
        out += "," + std::to_string(entry->weight.num);
        out += "," + std::to_string(entry->weight.den);
        out += "," + format_decimal(entry->weight.to_double(), precision);
        out += "\n";
    }
    for (const CycleEntry* cycle : cycles_by_mass(table)) {
        out += cycle_csv_token(*cycle);
        out += ",," + std::to_string(cycle->mass.num);
        out += "," + std::to_string(cycle->mass.den);
        out += "," + format_decimal(cycle->mass.to_double(), precision);
        out += "\n";
    }
    out += "cycle_mass,," + std::to_string(table.cycle_mass.num) + "," +
           std::to_string(table.cycle_mass.den) + "," +
           format_decimal(table.cycle_mass.to_double(), precision) + "\n";
    return out;
}

std::string render_validation_report(const ValidationReport& report) {
    if (report.empty()) return "validation: clean\n";
    std::size_t errors = 0;
    std::size_t warnings = 0;
    for (const auto& v : report)
        (v.severity == Severity::Error ? errors : warnings) += 1;
    std::string out = "validation: " + std::to_string(errors) + " error(s), " +
                      std::to_string(warnings) + " warning(s)\n";
    for (const auto& v : report) {
        out += v.severity == Severity::Error ? "- [error] " : "- [warning] ";
        out += v.location + ": " + v.message + "\n";
    }
    return out;
}

std::string render_consistent_report(const Framework& framework, const std::string& label,
                                     const std::vector<Scenario>& consistent, int tolerance) {
    std::string out = "# timespan: " + label + " (tolerance " + std::to_string(tolerance) + ")\n";
    for (const Scenario& scenario : consistent)
        out += scenario_to_string(scenario) + "  rank=" +
               std::to_string(scenario_rank(framework, scenario)) + "  " +
               scenario_with_names(framework, scenario) + "\n";
    out += "consistent: " + std::to_string(consistent.size()) + " of " +
           std::to_string(framework.scenario_count()) + "\n";
    return out;
}

std::string render_chain_report(const ScenarioChain& chain, const Framework& framework,
                                int precision) {
    std::string out = "# Scenario chain\n\n";
    out += "rule: " + std::string(to_string(chain.rule)) + "\n";
    out += "weighting: " + std::string(to_string(chain.mode)) + "\n";
    out += "timespans: " + std::to_string(chain.links.size()) + "\n";

    for (const ChainLink& link : chain.links) {
        out += "\n## timespan: " + link.timespan_label + "\n\n";
        out += "chosen: " + scenario_to_string(link.scenario) + "\n";
        out += "states: " + scenario_with_names(framework, link.scenario) + "\n";
        out += "scenario weight: " + link.scenario_weight.to_string() + " = " +
               format_decimal(link.scenario_weight.to_double(), precision) + "\n";
        if (link.manual)
            out += "manual weight: " + format_decimal(*link.manual, precision) + "\n";
        if (link.compound)
            out += "compound weight: " + format_decimal(*link.compound, precision) + "\n";
        if (link.tie) {
            out += "tie: yes (" + std::to_string(link.tied.size()) + " candidates:";
            for (std::size_t k = 0; k < link.tied.size(); ++k) {
                out += k ? ", " : " ";
                out += scenario_to_string(link.tied[k]);
            }
            out += ")\n";
        } else {
            out += "tie: no\n";
        }
        if (link.nonpositive_compound)
            out += "note: no strictly positive compound weight in this timespan\n";

        out += "\n| scenario | rank | weight | decimal |\n";
        out += "| --- | --- | --- | --- |\n";
        for (const WeightEntry* entry : entries_by_weight(link.table)) {
            out += "| " + scenario_to_string(entry->scenario) + " | " +
                   std::to_string(entry->rank) + " | " + entry->weight.to_string() + " | " +
                   format_decimal(entry->weight.to_double(), precision) + " |\n";
        }
        if (link.table.cycles.empty()) {
            out += "\ncycles: none\n";
        } else {
            out += "\ncycles:\n";
            for (const CycleEntry* cycle : cycles_by_mass(link.table))
                out += "- " + cycle_display(cycle->scenarios) + " mass " +
                       cycle->mass.to_string() + " = " +
                       format_decimal(cycle->mass.to_double(), precision) + "\n";
        }
        out += "cycle mass: " + link.table.cycle_mass.to_string() + " = " +
               format_decimal(link.table.cycle_mass.to_double(), precision) + "\n";
    }
    return out;
}

std::string render_aggregation_report(const Framework& framework, const SubsystemSplit& split,
                                      const AggregationReport& report, bool verified) {
    std::string out = "# Aggregation\n\n";
    out += "split:";
    for (const auto& subset : split.subsets) {
        out += " {";
        for (std::size_t k = 0; k < subset.size(); ++k) {
            if (k) out += ",";
            out += framework.descriptor(subset[k]).name;
        }
        out += "}";
    }
    out += "\n";

    out += "transitional descriptors:";
    const std::vector<int> transitional = transitional_set(split);
    if (transitional.empty()) {
        out += " none";
    } else {
        for (std::size_t k = 0; k < transitional.size(); ++k) {
            out += k ? ", " : " ";
            out += framework.descriptor(transitional[k]).name;
        }
    }
    out += "\n";

    out += "subsystem consistent counts:";
    for (std::size_t k = 0; k < report.subsystem_consistent_counts.size(); ++k) {
        out += k ? ", " : " ";
        out += std::to_string(report.subsystem_consistent_counts[k]);
    }
    out += "\n";
    out += "combinatorials: " + std::to_string(report.combinatorial_count) + "\n";

    out += "aggregated scenarios: " + std::to_string(report.aggregated.size()) + "\n";
    for (const Scenario& scenario : report.aggregated)
        out += "- " + scenario_to_string(scenario) + "  " +
               scenario_with_names(framework, scenario) + "\n";

    if (verified) {
        out += "\n## verification\n\n";
        out += "full consistent scenarios: " + std::to_string(report.consistent_full.size()) +
               "\n";
        out += "soundness failures (aggregated but not consistent): " +
               std::to_string(report.soundness_failures.size()) + "\n";
        for (const Scenario& scenario : report.soundness_failures)
            out += "- " + scenario_to_string(scenario) + "\n";
        out += "completeness gaps (consistent but not aggregated): " +
               std::to_string(report.completeness_gaps.size()) + "\n";
        for (const Scenario& scenario : report.completeness_gaps)
            out += "- " + scenario_to_string(scenario) + "\n";
        out += "agreement: " + std::to_string(report.agreement_count) + "\n";
    }
    return out;
}

}  // namespace cib
