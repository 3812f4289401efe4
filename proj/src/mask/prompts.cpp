#include <algorithm>
#include <cmath>

#include "agriseg/mask.hpp"

namespace agriseg {

PromptConfig PromptConfig::resolve(std::size_t side, double pps_percent, double mmra_percent) {
    if (!(pps_percent > 0.0) || !(mmra_percent >= 0.0))
        throw ConfigError("pps_percent must be > 0 and mmra_percent >= 0");
    const double s = static_cast<double>(side);
    PromptConfig cfg;
    cfg.pps_percent = pps_percent;
    cfg.mmra_percent = mmra_percent;
    cfg.pps = static_cast<std::uint32_t>(std::max<long long>(1, std::llround(pps_percent * s)));
    cfg.mmra = static_cast<std::uint64_t>(std::llround(mmra_percent * s * s));
    return cfg;
}

std::vector<PromptPoint> prompt_grid(std::size_t height, std::size_t width, std::uint32_t pps) {
    if (pps < 1 || height < 1 || width < 1) throw ConfigError("prompt grid needs pps, side >= 1");
    std::vector<PromptPoint> points;
    points.reserve(static_cast<std::size_t>(pps) * pps);
    const double step_r = static_cast<double>(height) / pps;
    const double step_c = static_cast<double>(width) / pps;
    for (std::uint32_t a = 0; a < pps; ++a)
        for (std::uint32_t b = 0; b < pps; ++b)
            points.push_back({(a + 0.5) * step_r, (b + 0.5) * step_c});
    return points;
}

std::vector<PromptPoint> prompt_grid(std::size_t side, std::uint32_t pps) {
    return prompt_grid(side, side, pps);
}

}  // namespace agriseg
