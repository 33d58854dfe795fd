#include <doctest.h>

#include <set>

#include "cib/timechain.hpp"
#include "test_support.hpp"

using namespace cib;
using namespace cib::testing;

namespace {

TimeSeriesModel two_span_model() {
    auto fw = make_framework({2, 2});
    std::vector<Timespan> spans;
    spans.push_back({"T1", CrossImpactMatrix(
                               fw, {{1, 2, matrix_mutual()}, {2, 1, matrix_mutual()}})});
    spans.push_back(
        {"T2", CrossImpactMatrix(fw, {{1, 2, matrix_anti()}, {2, 1, matrix_anti()}})});
    return TimeSeriesModel(fw, std::move(spans));
}

// Values 2 then 1 for both descriptors: manual((1,1)) = 4, manual((2,2)) = 2.
ManualValueTable descending_values(const Framework& fw) {
    return ManualValueTable(fw, {{2.0, 1.0}, {2.0, 1.0}});
}

}  // namespace

TEST_CASE("validate_series accepts matching timespans") {
    CHECK(validate_series(two_span_model()).empty());
}

TEST_CASE("validate_series reports framework mismatches per timespan") {
    auto fw = make_framework({2, 2});
    auto other = make_framework({2, 3});
    std::vector<Timespan> spans;
    spans.push_back({"T1", CrossImpactMatrix(fw, {})});
    spans.push_back({"T2", CrossImpactMatrix(other, {})});
    const TimeSeriesModel model(fw, std::move(spans));
    const ValidationReport report = validate_series(model);
    REQUIRE(report.size() == 1);
    CHECK(report[0].location.find("T2") != std::string::npos);
    CHECK(report[0].message.find("framework") != std::string::npos);
}

TEST_CASE("validate_series nests cell violations") {
    auto fw = make_framework({2, 2});
    auto values = matrix_mutual();
    values[1][1] = 7;
    std::vector<Timespan> spans;
    spans.push_back({"T1", CrossImpactMatrix(fw, {{1, 2, values}})});
    const TimeSeriesModel model(fw, std::move(spans));
    const ValidationReport report = validate_series(model);
    REQUIRE(report.size() == 1);
    CHECK(report[0].location == "timespan 'T1': cell(1,2) row 2 column 2");
}

TEST_CASE("validate_series flags empty models and duplicate labels") {
    auto fw = make_framework({2, 2});
    CHECK(has_errors(validate_series(TimeSeriesModel(fw, {}))));

    std::vector<Timespan> spans;
    spans.push_back({"T", CrossImpactMatrix(fw, {})});
    spans.push_back({"T", CrossImpactMatrix(fw, {})});
    const auto report = validate_series(TimeSeriesModel(fw, std::move(spans)));
    REQUIRE(report.size() == 1);
    CHECK(report[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("manual weights sum the assigned state values") {
    const auto fw = make_framework({2, 2});
    const ManualValueTable zeros(*fw, {{0.0, 0.0}, {0.0, 0.0}});
    CHECK(manual_weight(*fw, Scenario{{2, 1}}, zeros) == 0.0);

    const ManualValueTable values = descending_values(*fw);
    CHECK(manual_weight(*fw, Scenario{{1, 1}}, values) == 4.0);
    CHECK(manual_weight(*fw, Scenario{{2, 2}}, values) == 2.0);

    CHECK_THROWS_WITH_AS(ManualValueTable(*fw, {{2.0}, {2.0, 1.0}}),
                         doctest::Contains("D1"), InvalidArgument);
    CHECK_THROWS_AS(ManualValueTable(*fw, {{2.0, 1.0}}), InvalidArgument);
}

TEST_CASE("compound weight is the product") {
    CHECK(compound_weight(Rational::of(1, 2), 4.0) == 2.0);
    CHECK(compound_weight(Rational::of(1, 4), 0.0) == 0.0);
    CHECK(compound_weight(Rational::of(0, 1), 7.0) == 0.0);
}

TEST_CASE("chain over MUTUAL2 then ANTI2 picks the smallest-rank tie") {
    const TimeSeriesModel model = two_span_model();
    const ScenarioChain chain =
        build_chain(model, SuccessionRule::Local, WeightingMode::Scenario);

    REQUIRE(chain.links.size() == 2);
    CHECK(chain.links[0].timespan_label == "T1");
    CHECK(chain.links[0].scenario == Scenario{{1, 1}});
    CHECK(chain.links[0].scenario_weight == Rational::of(1, 2));
    CHECK(chain.links[0].tie);
    CHECK(chain.links[0].tied == std::vector<Scenario>{{{1, 1}}, {{2, 2}}});

    CHECK(chain.links[1].timespan_label == "T2");
    CHECK(chain.links[1].scenario == Scenario{{1, 2}});
    CHECK(chain.links[1].scenario_weight == Rational::of(1, 2));
    CHECK(chain.links[1].tie);
}

TEST_CASE("compound weighting resolves the MUTUAL2 tie") {
    auto fw = make_framework({2, 2});
    std::vector<Timespan> spans;
    spans.push_back({"T1", mutual2()});
    const TimeSeriesModel model(fw, std::move(spans));
    const ManualValueTable values = descending_values(*fw);

    const ScenarioChain chain =
        build_chain(model, SuccessionRule::Local, WeightingMode::Compound, &values);
    REQUIRE(chain.links.size() == 1);
    const ChainLink& link = chain.links[0];
    CHECK(link.scenario == Scenario{{1, 1}});
    CHECK(link.scenario_weight == Rational::of(1, 2));
    CHECK(link.manual == 4.0);
    CHECK(link.compound == 2.0);
    CHECK(!link.tie);
    CHECK(!link.nonpositive_compound);
}

TEST_CASE("all-zero CIM chains to rank 0 with a full tie") {
    auto fw = make_framework({2, 2});
    std::vector<Timespan> spans;
    spans.push_back({"T1", zero_cim({2, 2})});
    const TimeSeriesModel model(fw, std::move(spans));

    for (const auto rule : {SuccessionRule::Global, SuccessionRule::Incremental,
                            SuccessionRule::Local, SuccessionRule::Adiabatic}) {
        const ScenarioChain chain = build_chain(model, rule, WeightingMode::Scenario);
        REQUIRE(chain.links.size() == 1);
        CHECK(chain.links[0].scenario == Scenario{{1, 1}});
        CHECK(chain.links[0].tie);
        CHECK(chain.links[0].tied.size() == 4);
    }
}

TEST_CASE("chain fails naming the timespan when no weight exists") {
    auto fw = make_framework({2, 2});
    std::vector<Timespan> spans;
    spans.push_back({"T1", mutual2()});
    spans.push_back({"stuck", chase2()});
    const TimeSeriesModel model(fw, std::move(spans));
    CHECK_THROWS_WITH_AS(build_chain(model, SuccessionRule::Global, WeightingMode::Scenario),
                         doctest::Contains("stuck"), ChainError);
}

TEST_CASE("compound mode requires a table") {
    const TimeSeriesModel model = two_span_model();
    CHECK_THROWS_AS(build_chain(model, SuccessionRule::Local, WeightingMode::Compound),
                    InvalidArgument);
}

TEST_CASE("nonpositive compound weights are flagged but still resolved") {
    auto fw = make_framework({2, 2});
    std::vector<Timespan> spans;
    spans.push_back({"T1", mutual2()});
    const TimeSeriesModel model(fw, std::move(spans));
    const ManualValueTable negative(*fw, {{-2.0, -1.0}, {-2.0, -1.0}});

    const ScenarioChain chain =
        build_chain(model, SuccessionRule::Local, WeightingMode::Compound, &negative);
    REQUIRE(chain.links.size() == 1);
    CHECK(chain.links[0].nonpositive_compound);
    // manual((1,1)) = -4, manual((2,2)) = -2; argmax picks the larger -1.0
    CHECK(chain.links[0].scenario == Scenario{{2, 2}});
    CHECK(chain.links[0].compound == -1.0);
}

TEST_CASE("chain links are always consistent scenarios of their timespan") {
    std::mt19937_64 rng(601);
    int built = 0;
    for (int round = 0; round < 25; ++round) {
        const CrossImpactMatrix first = random_cim(rng, 4, 3);
        const CrossImpactMatrix second = random_cim_over(first.framework_ptr(), rng);

        std::vector<Timespan> spans;
        spans.push_back({"A", first});
        spans.push_back({"B", second});
        const TimeSeriesModel model(first.framework_ptr(), std::move(spans));
        for (const auto rule : {SuccessionRule::Global, SuccessionRule::Local}) {
            try {
                const ScenarioChain chain = build_chain(model, rule, WeightingMode::Scenario);
                ++built;
                for (std::size_t t = 0; t < chain.links.size(); ++t) {
                    const auto consistent =
                        enumerate_consistent(model.timespans()[t].cim);
                    CHECK(std::count(consistent.begin(), consistent.end(),
                                     chain.links[t].scenario) == 1);
                }
            } catch (const ChainError&) {
                // a timespan without fixed points is a legitimate refusal
            }
        }
    }
    CHECK(built > 0);
}

TEST_CASE("a constant positive manual table preserves the scenario-mode argmax set") {
    std::mt19937_64 rng(602);
    int compared = 0;
    for (int round = 0; round < 25; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 4, 3);
        const Framework& fw = cim.framework();
        std::vector<std::vector<double>> constant;
        for (int d = 1; d <= fw.descriptor_count(); ++d)
            constant.emplace_back(static_cast<std::size_t>(fw.state_count(d)), 1.0);
        const ManualValueTable table(fw, std::move(constant));

        std::vector<Timespan> spans;
        spans.push_back({"T", cim});
        const TimeSeriesModel model(cim.framework_ptr(), std::move(spans));
        try {
            const ScenarioChain by_weight =
                build_chain(model, SuccessionRule::Adiabatic, WeightingMode::Scenario);
            const ScenarioChain by_compound = build_chain(
                model, SuccessionRule::Adiabatic, WeightingMode::Compound, &table);
            ++compared;
            // argmax-set equality, not value equality
            auto tied_set = [](const ChainLink& link) {
                return link.tie ? std::set<Scenario>(link.tied.begin(), link.tied.end())
                                : std::set<Scenario>{link.scenario};
            };
            CHECK(tied_set(by_weight.links[0]) == tied_set(by_compound.links[0]));
            CHECK(by_weight.links[0].scenario == by_compound.links[0].scenario);
        } catch (const ChainError&) {
        }
    }
    CHECK(compared > 0);
}

TEST_CASE("chains are deterministic") {
    const TimeSeriesModel model = two_span_model();
    const ScenarioChain base =
        build_chain(model, SuccessionRule::Global, WeightingMode::Scenario);
    for (int run = 0; run < 5; ++run)
        CHECK(build_chain(model, SuccessionRule::Global, WeightingMode::Scenario) == base);
    for (const unsigned workers : {4u, 8u})
        CHECK(build_chain(model, SuccessionRule::Global, WeightingMode::Scenario, nullptr,
                          kDefaultEnumerationCap, workers) == base);
}

TEST_CASE("find_timespan and weighting-mode names") {
    const TimeSeriesModel model = two_span_model();
    REQUIRE(model.find_timespan("T2") != nullptr);
    CHECK(model.find_timespan("T2")->label == "T2");
    CHECK(model.find_timespan("T9") == nullptr);

    CHECK(weighting_mode_from_string("scenario") == WeightingMode::Scenario);
    CHECK(weighting_mode_from_string("compound") == WeightingMode::Compound);
    CHECK_THROWS_AS(weighting_mode_from_string("other"), InvalidArgument);
}
