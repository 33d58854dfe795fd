#pragma once

#include <memory>
#include <vector>

#include "cib/framework.hpp"
#include "cib/types.hpp"

namespace cib {

inline constexpr int kDefaultImpactRange = 3;

// Direct impacts of descriptor `source` on descriptor `target`:
// values[a-1][b-1] is the impact of source state a on target state b.
struct JudgementCell {
    int source = 0;  // 1-based descriptor indices
    int target = 0;
    std::vector<std::vector<int>> values;

    bool operator==(const JudgementCell&) const = default;
};

// Block matrix of judgement cells over a framework. Absent cells are
// semantically all-zero. The structure is permissive on purpose: invalid
// cells (diagonal keys, bad shapes, out-of-range entries) are storable and
// reported by validate_cim rather than rejected at construction.
class CrossImpactMatrix {
public:
    CrossImpactMatrix(std::shared_ptr<const Framework> framework,
                      std::vector<JudgementCell> cells,
                      int impact_range = kDefaultImpactRange);

    const Framework& framework() const { return *framework_; }
    std::shared_ptr<const Framework> framework_ptr() const { return framework_; }

    int impact_range() const { return impact_range_; }
    const std::vector<JudgementCell>& cells() const { return cells_; }

    // Fast lookup for the balance loops; nullptr when the pair is absent.
    // Only structurally usable cells (valid off-diagonal key, exact shape)
    // are indexed here.
    const JudgementCell* cell(int source, int target) const {
        const int n = framework_->descriptor_count();
        const int slot = cell_index_[static_cast<std::size_t>(source - 1) * n + (target - 1)];
        return slot < 0 ? nullptr : &cells_[static_cast<std::size_t>(slot)];
    }

    // Single impact d_ij(a, b); 0 for absent cells.
    int impact(int source, int target, int source_state, int target_state) const {
        const JudgementCell* c = cell(source, target);
        return c ? c->values[static_cast<std::size_t>(source_state - 1)]
                            [static_cast<std::size_t>(target_state - 1)]
                 : 0;
    }

    bool operator==(const CrossImpactMatrix& other) const {
        return *framework_ == *other.framework_ && impact_range_ == other.impact_range_ &&
               cells_ == other.cells_;
    }

private:
    std::shared_ptr<const Framework> framework_;
    std::vector<JudgementCell> cells_;      // sorted by (source, target)
    std::vector<int> cell_index_;           // N*N dense map, -1 = absent
    int impact_range_ = kDefaultImpactRange;
};

// Reports every invariant violation with its location; empty report = valid.
// Single-state descriptors yield warnings, not errors.
ValidationReport validate_cim(const CrossImpactMatrix& cim);

}  // namespace cib
