#include <doctest.h>

#include <set>

#include "cib/consistency.hpp"
#include "test_support.hpp"

using namespace cib;
using namespace cib::testing;

TEST_CASE("impact balance on MUTUAL2 matches direct summation") {
    const CrossImpactMatrix cim = mutual2();

    // Single contributing term d_21(1,.) -- confirmed by the oracle.
    CHECK(oracle_balance(cim, {1, 1}, 1) == std::vector<int>{3, -3});
    const ImpactBalanceVector ib11 = impact_balance(cim, Scenario{{1, 1}}, 1);
    CHECK(ib11.descriptor == 1);
    CHECK(ib11.balances == std::vector<int>{3, -3});

    CHECK(oracle_balance(cim, {1, 2}, 1) == std::vector<int>{-3, 3});
    CHECK(impact_balance(cim, Scenario{{1, 2}}, 1).balances == std::vector<int>{-3, 3});

    CHECK_THROWS_AS(impact_balance(cim, Scenario{{1, 1}}, 3), InvalidArgument);
    CHECK_THROWS_AS(impact_balance(cim, Scenario{{1, 9}}, 1), InvalidArgument);
}

TEST_CASE("impact balance of an all-zero CIM is the zero vector") {
    const CrossImpactMatrix cim = zero_cim({2, 3});
    iterate_scenarios(cim.framework(), [&](const Scenario& s, std::uint64_t) {
        for (int j = 1; j <= 2; ++j) {
            const auto ib = impact_balance(cim, s, j);
            for (const int b : ib.balances) CHECK(b == 0);
        }
    });
}

TEST_CASE("bulk balances agree with the per-descriptor operation") {
    std::mt19937_64 rng(411);
    for (int round = 0; round < 30; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 5, 3);
        iterate_scenarios(cim.framework(), [&](const Scenario& s, std::uint64_t) {
            const auto all = impact_balances(cim, s);
            for (int j = 1; j <= cim.framework().descriptor_count(); ++j) {
                CHECK(all[static_cast<std::size_t>(j - 1)] == impact_balance(cim, s, j));
                CHECK(all[static_cast<std::size_t>(j - 1)].balances ==
                      oracle_balance(cim, s.states, j));
            }
        });
    }
}

TEST_CASE("consistency on the fixtures") {
    const CrossImpactMatrix cim = mutual2();
    CHECK(is_consistent(cim, Scenario{{1, 1}}, 0));
    CHECK(!is_consistent(cim, Scenario{{1, 2}}, 0));
    CHECK(is_consistent(cim, Scenario{{1, 2}}, 6));

    const CrossImpactMatrix zero = zero_cim({2, 2});
    iterate_scenarios(zero.framework(), [&](const Scenario& s, std::uint64_t) {
        CHECK(is_consistent(zero, s, 0));
    });

    CHECK_THROWS_AS(is_consistent(cim, Scenario{{1, 1}}, -1), InvalidArgument);
}

TEST_CASE("inconsistency score") {
    const CrossImpactMatrix cim = mutual2();
    CHECK(inconsistency_score(cim, Scenario{{1, 1}}) == 0);
    CHECK(inconsistency_score(cim, Scenario{{1, 2}}) == 6);

    const CrossImpactMatrix zero = zero_cim({2, 2});
    CHECK(inconsistency_score(zero, Scenario{{2, 1}}) == 0);
}

TEST_CASE("enumerate_consistent on the fixtures") {
    CHECK(enumerate_consistent(mutual2()) ==
          std::vector<Scenario>{{{1, 1}}, {{2, 2}}});
    CHECK(enumerate_consistent(anti2()) ==
          std::vector<Scenario>{{{1, 2}}, {{2, 1}}});
    CHECK(enumerate_consistent(zero_cim({2, 2})).size() == 4);
    CHECK(enumerate_consistent(chase2()).empty());
}

TEST_CASE("enumerate_consistent equals the zero-score set and the oracle") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 40; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 5, 3);
        const auto consistent = enumerate_consistent(cim);

        std::vector<Scenario> by_score;
        std::vector<Scenario> by_oracle;
        iterate_scenarios(cim.framework(), [&](const Scenario& s, std::uint64_t) {
            if (inconsistency_score(cim, s) == 0) by_score.push_back(s);
            if (oracle_consistent(cim, s.states)) by_oracle.push_back(s);
        });
        CHECK(consistent == by_score);
        CHECK(consistent == by_oracle);
    }
}

TEST_CASE("consistent sets are nested as tolerance grows") {
    std::mt19937_64 rng(78);
    for (int round = 0; round < 25; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 5, 3);
        std::vector<Scenario> previous;
        for (const int tol : {0, 1, 2, 6}) {
            const auto current = enumerate_consistent(cim, tol);
            CHECK(std::includes(current.begin(), current.end(), previous.begin(),
                                previous.end()));
            previous = current;
        }
    }
}

TEST_CASE("balance bound |IB| <= (N-1)*R holds during enumeration") {
    std::mt19937_64 rng(79);
    for (int round = 0; round < 25; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 5, 3);
        const int bound = (cim.framework().descriptor_count() - 1) * cim.impact_range();
        iterate_scenarios(cim.framework(), [&](const Scenario& s, std::uint64_t) {
            for (const auto& ib : impact_balances(cim, s))
                for (const int b : ib.balances) CHECK(std::abs(b) <= bound);
        });
    }
}

TEST_CASE("state relabeling maps the consistent set exactly") {
    std::mt19937_64 rng(80);
    for (int round = 0; round < 30; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 4, 3);
        const Framework& fw = cim.framework();
        std::uniform_int_distribution<int> pick(1, fw.descriptor_count());
        const int descriptor = pick(rng);

        std::vector<int> perm(static_cast<std::size_t>(fw.state_count(descriptor)));
        for (std::size_t s = 0; s < perm.size(); ++s) perm[s] = static_cast<int>(s + 1);
        std::shuffle(perm.begin(), perm.end(), rng);

        const CrossImpactMatrix mapped = permute_states(cim, descriptor, perm);

        std::set<Scenario> expected;
        for (const Scenario& s : enumerate_consistent(cim))
            expected.insert(permute_scenario(s, descriptor, perm));
        const auto actual = enumerate_consistent(mapped);
        CHECK(std::set<Scenario>(actual.begin(), actual.end()) == expected);
    }
}

TEST_CASE("enumeration is identical across worker counts") {
    std::mt19937_64 rng(81);
    for (int round = 0; round < 10; ++round) {
        const CrossImpactMatrix cim = random_cim(rng, 5, 3);
        const auto single = enumerate_consistent(cim, 0, kDefaultEnumerationCap, 1);
        for (const unsigned workers : {3u, 8u})
            CHECK(enumerate_consistent(cim, 0, kDefaultEnumerationCap, workers) == single);
    }
}

TEST_CASE("enumeration refuses past the cap") {
    const CrossImpactMatrix cim = zero_cim({4, 4, 4});  // 64 scenarios
    CHECK_THROWS_AS(enumerate_consistent(cim, 0, 63), CapExceeded);
    CHECK(enumerate_consistent(cim, 0, 64).size() == 64);
}
