#pragma once

#include <functional>

#include "agriseg/vectorize.hpp"

namespace agriseg::detail {

/// Rings of the component whose pixels (row-major sorted) are `pixels`;
/// `inside(row, col)` must be true exactly for those pixels.
TracedRings trace_component(std::span<const std::size_t> pixels, std::size_t width,
                            const std::function<bool(std::int64_t, std::int64_t)>& inside);

}  // namespace agriseg::detail
