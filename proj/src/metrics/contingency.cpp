#include "agriseg/error.hpp"
#include "agriseg/metrics.hpp"

namespace agriseg {

void ContingencyTable::add(std::uint32_t gt, std::uint32_t pred, std::uint64_t count) {
    if (count == 0) return;
    cells_[key(gt, pred)] += count;
    rows_[gt] += count;
    cols_[pred] += count;
    n_ += count;
}

void ContingencyTable::merge(const ContingencyTable& other) {
    for (const auto& [k, c] : other.cells_) {
        add(static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k & 0xFFFFFFFFu), c);
    }
}

std::uint64_t ContingencyTable::count(std::uint32_t gt, std::uint32_t pred) const {
    const auto it = cells_.find(key(gt, pred));
    return it == cells_.end() ? 0 : it->second;
}

ContingencyTable ContingencyTable::transposed() const {
    ContingencyTable t;
    for (const auto& [k, c] : cells_) {
        t.add(static_cast<std::uint32_t>(k & 0xFFFFFFFFu), static_cast<std::uint32_t>(k >> 32), c);
    }
    return t;
}

bool ContingencyTable::is_bijective() const {
    return cells_.size() == rows_.size() && cells_.size() == cols_.size();
}

ContingencyTable contingency(std::span<const std::uint32_t> gt,
                             std::span<const std::uint32_t> pred,
                             bool exclude_pred_background) {
    if (gt.size() != pred.size())
        throw DataError("contingency: labelings differ in size (" + std::to_string(gt.size()) +
                        " vs " + std::to_string(pred.size()) + ")");
    ContingencyTable t;
    // label maps are piecewise constant along rows: one table update per run
    std::size_t i = 0;
    const std::size_t n = gt.size();
    while (i < n) {
        const std::uint32_t g = gt[i];
        const std::uint32_t p = pred[i];
        std::size_t j = i + 1;
        while (j < n && gt[j] == g && pred[j] == p) ++j;
        if (!(exclude_pred_background && p == 0)) t.add(g, p, j - i);
        i = j;
    }
    if (t.total() == 0) throw DataError("contingency: no pixels to compare");
    return t;
}

ContingencyTable contingency(const LabelMap& gt, const LabelMap& pred,
                             bool exclude_pred_background) {
    if (gt.height != pred.height || gt.width != pred.width)
        throw DataError("contingency: label maps differ in dimensions (" +
                        std::to_string(gt.height) + "x" + std::to_string(gt.width) + " vs " +
                        std::to_string(pred.height) + "x" + std::to_string(pred.width) + ")");
    return contingency(gt.labels, pred.labels, exclude_pred_background);
}

}  // namespace agriseg
