#include "cib/cim.hpp"

#include <algorithm>

namespace cib {

namespace {

std::string pair_location(const JudgementCell& cell) {
    return "cell(" + std::to_string(cell.source) + "," + std::to_string(cell.target) + ")";
}

// Usable for lookup: valid off-diagonal key and the exact framework shape.
bool structurally_usable(const Framework& fw, const JudgementCell& cell) {
    const int n = fw.descriptor_count();
    if (cell.source < 1 || cell.source > n || cell.target < 1 || cell.target > n) return false;
    if (cell.source == cell.target) return false;
    if (static_cast<int>(cell.values.size()) != fw.state_count(cell.source)) return false;
    const std::size_t cols = static_cast<std::size_t>(fw.state_count(cell.target));
    for (const auto& row : cell.values)
        if (row.size() != cols) return false;
    return true;
}

}  // namespace

CrossImpactMatrix::CrossImpactMatrix(std::shared_ptr<const Framework> framework,
                                     std::vector<JudgementCell> cells, int impact_range)
    : framework_(std::move(framework)), cells_(std::move(cells)), impact_range_(impact_range) {
    if (!framework_) throw InvalidArgument("cross-impact matrix without framework");
    if (impact_range_ < 1)
        throw InvalidArgument("impact range must be positive, got " +
                              std::to_string(impact_range_));

    std::stable_sort(cells_.begin(), cells_.end(),
                     [](const JudgementCell& a, const JudgementCell& b) {
                         return std::pair(a.source, a.target) < std::pair(b.source, b.target);
                     });

    const int n = framework_->descriptor_count();
    cell_index_.assign(static_cast<std::size_t>(n) * n, -1);
    for (std::size_t slot = 0; slot < cells_.size(); ++slot) {
        const JudgementCell& c = cells_[slot];
        if (!structurally_usable(*framework_, c)) continue;
        int& entry = cell_index_[static_cast<std::size_t>(c.source - 1) * n + (c.target - 1)];
        if (entry < 0) entry = static_cast<int>(slot);  // duplicates flagged by validate_cim
    }
}

ValidationReport validate_cim(const CrossImpactMatrix& cim) {
    ValidationReport report;
    const Framework& fw = cim.framework();
    const int n = fw.descriptor_count();

    for (int k : fw.single_state_descriptors())
        report.push_back({Severity::Warning, "descriptor " + std::to_string(k),
                          "descriptor '" + fw.descriptor(k).name +
                              "' has a single state; it is trivially consistent"});

    const JudgementCell* previous = nullptr;
    for (const JudgementCell& cell : cim.cells()) {
        const std::string where = pair_location(cell);
        if (cell.source < 1 || cell.source > n || cell.target < 1 || cell.target > n) {
            report.push_back({Severity::Error, where,
                              "descriptor index out of [1, " + std::to_string(n) + "]"});
            previous = &cell;
            continue;
        }
        if (cell.source == cell.target) {
            report.push_back(
                {Severity::Error, where, "diagonal judgement cell; self-impacts must be absent"});
            previous = &cell;
            continue;
        }
        if (previous && previous->source == cell.source && previous->target == cell.target)
            report.push_back({Severity::Error, where, "duplicate judgement cell for this pair"});
        previous = &cell;

        const int rows = fw.state_count(cell.source);
        const int cols = fw.state_count(cell.target);
        if (static_cast<int>(cell.values.size()) != rows) {
            report.push_back({Severity::Error, where,
                              "expected " + std::to_string(rows) + " rows, got " +
                                  std::to_string(cell.values.size())});
            continue;
        }
        bool shape_ok = true;
        for (std::size_t r = 0; r < cell.values.size(); ++r) {
            if (static_cast<int>(cell.values[r].size()) != cols) {
                report.push_back({Severity::Error, where + " row " + std::to_string(r + 1),
                                  "expected " + std::to_string(cols) + " columns, got " +
                                      std::to_string(cell.values[r].size())});
                shape_ok = false;
            }
        }
        if (!shape_ok) continue;

        const int range = cim.impact_range();
        for (int a = 1; a <= rows; ++a) {
            for (int b = 1; b <= cols; ++b) {
                const int v = cell.values[static_cast<std::size_t>(a - 1)]
                                         [static_cast<std::size_t>(b - 1)];
                if (v < -range || v > range)
                    report.push_back({Severity::Error,
                                      where + " row " + std::to_string(a) + " column " +
                                          std::to_string(b),
                                      "impact " + std::to_string(v) + " outside [-" +
                                          std::to_string(range) + ", +" + std::to_string(range) +
                                          "]"});
            }
        }
    }
    return report;
}

}  // namespace cib
