#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cib/io.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string model_path;
    std::string rule = "global";
    std::string weighting = "scenario";
    std::string timespan;
    int tolerance = 0;
    std::uint64_t cap = cib::kDefaultEnumerationCap;
    int precision = 6;
    unsigned workers = 0;  // 0 = hardware default
    bool verify = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cib::ParseError("", "cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Timespans selected by --timespan, or all of them.
std::vector<const cib::Timespan*> selected_timespans(const cib::ModelDocument& doc,
                                                     const Options& opt) {
    std::vector<const cib::Timespan*> out;
    if (doc.model.timespans().empty()) throw cib::Error("model has no timespans");
    if (opt.timespan.empty()) {
        for (const auto& ts : doc.model.timespans()) out.push_back(&ts);
    } else {
        const cib::Timespan* ts = doc.model.find_timespan(opt.timespan);
        if (!ts)
            throw cib::InvalidArgument("unknown timespan '" + opt.timespan + "'");
        out.push_back(ts);
    }
    return out;
}

const cib::Timespan& single_timespan(const cib::ModelDocument& doc, const Options& opt) {
    if (!opt.timespan.empty()) {
        const cib::Timespan* ts = doc.model.find_timespan(opt.timespan);
        if (!ts) throw cib::InvalidArgument("unknown timespan '" + opt.timespan + "'");
        return *ts;
    }
    if (doc.model.timespans().empty())
        throw cib::ChainError("", "model has no timespans");
    return doc.model.timespans().front();
}

int run_validate(const cib::ModelDocument& doc) {
    cib::ValidationReport report = cib::validate_series(doc.model);
    if (doc.split) {
        for (const auto& ts : doc.model.timespans())
            for (const cib::Violation& v : cib::validate_split(ts.cim, *doc.split))
                report.push_back(
                    {v.severity, "timespan '" + ts.label + "': " + v.location, v.message});
    }
    std::cout << cib::render_validation_report(report);
    return cib::has_errors(report) ? kExitDomainFailure : kExitSuccess;
}

int run_consistent(const cib::ModelDocument& doc, const Options& opt) {
    bool any_empty = false;
    bool first = true;
    for (const cib::Timespan* ts : selected_timespans(doc, opt)) {
        const auto consistent =
            cib::enumerate_consistent(ts->cim, opt.tolerance, opt.cap, opt.workers);
        if (consistent.empty()) any_empty = true;
        if (!first) std::cout << "\n";
        first = false;
        std::cout << cib::render_consistent_report(doc.model.framework(), ts->label, consistent,
                                                   opt.tolerance);
    }
    return any_empty ? kExitDomainFailure : kExitSuccess;
}

int run_weights(const cib::ModelDocument& doc, const Options& opt) {
    const cib::SuccessionRule rule = cib::succession_rule_from_string(opt.rule);
    const auto timespans = selected_timespans(doc, opt);
    bool any_empty = false;
    bool first = true;
    for (const cib::Timespan* ts : timespans) {
        const cib::WeightTable table = cib::basin_weights(ts->cim, rule, opt.cap, opt.workers);
        if (table.entries.empty()) any_empty = true;
        if (!first) std::cout << "\n";
        first = false;
        if (timespans.size() > 1) std::cout << "# timespan: " << ts->label << "\n";
        std::cout << cib::write_weight_table(table, opt.precision);
    }
    return any_empty ? kExitDomainFailure : kExitSuccess;
}

int run_chain(const cib::ModelDocument& doc, const Options& opt) {
    const cib::SuccessionRule rule = cib::succession_rule_from_string(opt.rule);
    const cib::WeightingMode mode = cib::weighting_mode_from_string(opt.weighting);
    if (mode == cib::WeightingMode::Compound && !doc.manual_values)
        throw cib::InvalidArgument("compound weighting requires manual_values in the model");
    const cib::ManualValueTable* table =
        doc.manual_values ? &*doc.manual_values : nullptr;
    const cib::ScenarioChain chain =
        cib::build_chain(doc.model, rule, mode, table, opt.cap, opt.workers);
    std::cout << cib::render_chain_report(chain, doc.model.framework(), opt.precision);
    return kExitSuccess;
}

int run_aggregate(const cib::ModelDocument& doc, const Options& opt) {
    if (!doc.split)
        throw cib::ChainError("", "model declares no split");
    const cib::Timespan& ts = single_timespan(doc, opt);

    const cib::ValidationReport split_report = cib::validate_split(ts.cim, *doc.split);
    if (cib::has_errors(split_report)) {
        std::cout << cib::render_validation_report(split_report);
        return kExitDomainFailure;
    }

    const cib::AggregationReport report =
        opt.verify ? cib::verify_aggregation(ts.cim, *doc.split, opt.cap, opt.workers)
                   : cib::aggregate_scenarios(ts.cim, *doc.split, opt.cap, opt.workers);
    std::cout << cib::render_aggregation_report(doc.model.framework(), *doc.split, report,
                                                opt.verify);
    return report.aggregated.empty() ? kExitDomainFailure : kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-impact balance scenario engine"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("model", opt.model_path, "model file (JSON)")->required();
        cmd->add_option("--cap", opt.cap, "enumeration cap override");
        cmd->add_option("--workers", opt.workers, "worker threads (0 = hardware)");
    };

    CLI::App* validate = app.add_subcommand("validate", "validate the model file");
    add_common(validate);

    CLI::App* consistent =
        app.add_subcommand("consistent", "list consistent scenarios per timespan");
    add_common(consistent);
    consistent->add_option("--timespan", opt.timespan, "restrict to one timespan label");
    consistent->add_option("--tolerance", opt.tolerance, "consistency slack (default 0)")
        ->check(CLI::NonNegativeNumber);

    CLI::App* weights = app.add_subcommand("weights", "basin weight table per timespan (CSV)");
    add_common(weights);
    weights->add_option("--rule", opt.rule, "succession rule")
        ->required()
        ->check(CLI::IsMember({"global", "incremental", "local", "adiabatic"}));
    weights->add_option("--timespan", opt.timespan, "restrict to one timespan label");
    weights->add_option("--precision", opt.precision, "decimal digits (default 6)")
        ->check(CLI::Range(0, 17));

    CLI::App* chain = app.add_subcommand("chain", "highest-weight scenario chain");
    add_common(chain);
    chain->add_option("--rule", opt.rule, "succession rule")
        ->required()
        ->check(CLI::IsMember({"global", "incremental", "local", "adiabatic"}));
    chain->add_option("--weighting", opt.weighting, "weighting mode (default scenario)")
        ->check(CLI::IsMember({"scenario", "compound"}));
    chain->add_option("--precision", opt.precision, "decimal digits (default 6)")
        ->check(CLI::Range(0, 17));

    CLI::App* aggregate = app.add_subcommand("aggregate", "subsystem aggregation");
    add_common(aggregate);
    aggregate->add_option("--timespan", opt.timespan,
                          "timespan to aggregate (default: first)");
    aggregate->add_flag("--verify", opt.verify, "verify against the full scenario space");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        const std::string text = read_file(opt.model_path);
        const cib::ModelDocument doc = cib::parse_model(text);

        if (validate->parsed()) return run_validate(doc);
        if (consistent->parsed()) return run_consistent(doc, opt);
        if (weights->parsed()) return run_weights(doc, opt);
        if (chain->parsed()) return run_chain(doc, opt);
        if (aggregate->parsed()) return run_aggregate(doc, opt);
        return kExitUsage;
    } catch (const cib::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cib::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cib::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cib::ChainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainFailure;
    } catch (const cib::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainFailure;
    }
}
