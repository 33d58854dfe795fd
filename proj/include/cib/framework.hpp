#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cib/types.hpp"

namespace cib {

// One assignment of a state to every descriptor. State indices are 1-based,
// matching the external notation; rank arithmetic is the only 0-based place.
struct Scenario {
    std::vector<int> states;

    auto operator<=>(const Scenario&) const = default;
};

// The fixed descriptor/state structure shared by every timespan.
// Immutable after construction; construction validates the invariants.
class Framework {
public:
    struct Descriptor {
        std::string name;
        std::vector<std::string> states;

        bool operator==(const Descriptor&) const = default;
    };

    explicit Framework(std::vector<Descriptor> descriptors);

    int descriptor_count() const { return static_cast<int>(descriptors_.size()); }

    // 1-based access.
    const Descriptor& descriptor(int index) const;
    int state_count(int index) const;

    std::uint64_t scenario_count() const { return scenario_count_; }

    // 1-based index, or 0 when the name is unknown.
    int descriptor_index(std::string_view name) const;
    int state_index(int descriptor, std::string_view state_name) const;

    bool valid_scenario(const Scenario& scenario) const;
    // Throws InvalidArgument naming the offending descriptor.
    void require_valid_scenario(const Scenario& scenario) const;

    // Descriptors with a single state are legal but trivial; flagged as
    // warnings by validate_cim.
    std::vector<int> single_state_descriptors() const;

    bool operator==(const Framework& other) const {
        return descriptors_ == other.descriptors_;
    }

private:
    std::vector<Descriptor> descriptors_;
    std::uint64_t scenario_count_ = 0;
};

// Mixed-radix rank with descriptor 1 as the most significant digit.
std::uint64_t scenario_rank(const Framework& framework, const Scenario& scenario);
Scenario scenario_unrank(const Framework& framework, std::uint64_t rank);

// In-order walk of the whole scenario space without per-step unranking.
// next() advances the odometer; current() is valid until then.
class ScenarioCursor {
public:
    explicit ScenarioCursor(const Framework& framework);

    bool done() const { return done_; }
    const Scenario& current() const { return current_; }
    std::uint64_t rank() const { return rank_; }
    void next();

private:
    const Framework* framework_;
    Scenario current_;
    std::uint64_t rank_ = 0;
    bool done_ = false;
};

// Calls fn(scenario, rank) for every scenario in ascending rank order.
template <typename Fn>
void iterate_scenarios(const Framework& framework, Fn&& fn) {
    for (ScenarioCursor cursor(framework); !cursor.done(); cursor.next())
        fn(cursor.current(), cursor.rank());
}

std::string scenario_to_string(const Scenario& scenario);

}  // namespace cib
