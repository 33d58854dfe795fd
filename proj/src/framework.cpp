#include "cib/framework.hpp"

#include <limits>
#include <unordered_set>

namespace cib {

Framework::Framework(std::vector<Descriptor> descriptors)
    : descriptors_(std::move(descriptors)) {
    if (descriptors_.size() < 2)
        throw InvalidArgument("framework needs at least 2 descriptors, got " +
                              std::to_string(descriptors_.size()));

    std::unordered_set<std::string> names;
    scenario_count_ = 1;
    for (const auto& d : descriptors_) {
        if (d.name.empty()) throw InvalidArgument("descriptor with empty name");
        if (!names.insert(d.name).second)
            throw InvalidArgument("duplicate descriptor name '" + d.name + "'");
        if (d.states.empty())
            throw InvalidArgument("descriptor '" + d.name + "' has no states");
        std::unordered_set<std::string> state_names;
        for (const auto& s : d.states) {
            if (s.empty())
                throw InvalidArgument("descriptor '" + d.name + "' has an empty state name");
            if (!state_names.insert(s).second)
                throw InvalidArgument("descriptor '" + d.name + "' has duplicate state '" + s +
                                      "'");
        }
        const std::uint64_t s_k = d.states.size();
        if (scenario_count_ > std::numeric_limits<std::uint64_t>::max() / s_k)
            throw InvalidArgument("scenario count overflows 64-bit range");
        scenario_count_ *= s_k;
    }
}

const Framework::Descriptor& Framework::descriptor(int index) const {
    if (index < 1 || index > descriptor_count())
        throw InvalidArgument("descriptor index " + std::to_string(index) + " out of [1, " +
                              std::to_string(descriptor_count()) + "]");
    return descriptors_[static_cast<std::size_t>(index - 1)];
}

int Framework::state_count(int index) const {
    return static_cast<int>(descriptor(index).states.size());
}

int Framework::descriptor_index(std::string_view name) const {
    for (std::size_t k = 0; k < descriptors_.size(); ++k)
        if (descriptors_[k].name == name) return static_cast<int>(k + 1);
    return 0;
}

int Framework::state_index(int descriptor_idx, std::string_view state_name) const {
    const Descriptor& d = descriptor(descriptor_idx);
    for (std::size_t s = 0; s < d.states.size(); ++s)
        if (d.states[s] == state_name) return static_cast<int>(s + 1);
    return 0;
}

bool Framework::valid_scenario(const Scenario& scenario) const {
    if (scenario.states.size() != descriptors_.size()) return false;
    for (std::size_t k = 0; k < descriptors_.size(); ++k) {
        const int v = scenario.states[k];
        if (v < 1 || v > static_cast<int>(descriptors_[k].states.size())) return false;
    }
    return true;
}

void Framework::require_valid_scenario(const Scenario& scenario) const {
    if (scenario.states.size() != descriptors_.size())
        throw InvalidArgument("scenario has " + std::to_string(scenario.states.size()) +
                              " states, framework has " + std::to_string(descriptors_.size()) +
                              " descriptors");
    for (std::size_t k = 0; k < descriptors_.size(); ++k) {
        const int v = scenario.states[k];
        if (v < 1 || v > static_cast<int>(descriptors_[k].states.size()))
            throw InvalidArgument("state index " + std::to_string(v) + " out of range for '" +
                                  descriptors_[k].name + "'");
    }
}

std::vector<int> Framework::single_state_descriptors() const {
    std::vector<int> out;
    for (std::size_t k = 0; k < descriptors_.size(); ++k)
        if (descriptors_[k].states.size() == 1) out.push_back(static_cast<int>(k + 1));
    return out;
}

std::uint64_t scenario_rank(const Framework& framework, const Scenario& scenario) {
    framework.require_valid_scenario(scenario);
    std::uint64_t rank = 0;
    for (int k = 1; k <= framework.descriptor_count(); ++k) {
        rank *= static_cast<std::uint64_t>(framework.state_count(k));
        rank += static_cast<std::uint64_t>(scenario.states[static_cast<std::size_t>(k - 1)] - 1);
    }
    return rank;
}

Scenario scenario_unrank(const Framework& framework, std::uint64_t rank) {
    if (rank >= framework.scenario_count())
        throw InvalidArgument("rank " + std::to_string(rank) + " out of [0, " +
                              std::to_string(framework.scenario_count()) + ")");
    const int n = framework.descriptor_count();
    Scenario scenario;
    scenario.states.assign(static_cast<std::size_t>(n), 1);
    for (int k = n; k >= 1; --k) {
        const std::uint64_t s_k = static_cast<std::uint64_t>(framework.state_count(k));
        scenario.states[static_cast<std::size_t>(k - 1)] = static_cast<int>(rank % s_k) + 1;
        rank /= s_k;
    }
    return scenario;
}

ScenarioCursor::ScenarioCursor(const Framework& framework) : framework_(&framework) {
    current_.states.assign(static_cast<std::size_t>(framework.descriptor_count()), 1);
}

void ScenarioCursor::next() {
    const int n = framework_->descriptor_count();
    for (int k = n; k >= 1; --k) {
        int& v = current_.states[static_cast<std::size_t>(k - 1)];
        if (v < framework_->state_count(k)) {
            ++v;
            ++rank_;
            return;
        }
        v = 1;
    }
    done_ = true;
}

std::string scenario_to_string(const Scenario& scenario) {
    std::string out = "(";
    for (std::size_t k = 0; k < scenario.states.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(scenario.states[k]);
    }
    out += ")";
    return out;
}

}  // namespace cib
