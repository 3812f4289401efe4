#include "agriseg/kernels.hpp"
#include "agriseg/raster.hpp"

namespace agriseg {

NdviSeries compute_ndvi(const MultispectralStack& stack, std::size_t nir, std::size_t red,
                        bool keep_per_pixel) {
    if (nir == red) throw ConfigError("NDVI needs distinct NIR and red channels");
    if (nir >= stack.channels() || red >= stack.channels())
        throw ConfigError("NDVI channel index out of range");

    const auto& k = kernels::active();
    const std::size_t px = stack.pixels();
    NdviSeries series;
    series.means.assign(stack.timesteps(), 0.0);
    series.valid.assign(stack.timesteps(), 0);
    if (keep_per_pixel) {
        series.per_pixel.emplace(stack.timesteps() * px);
        series.per_pixel_valid.emplace(stack.timesteps() * px);
    }
    for (std::size_t t = 0; t < stack.timesteps(); ++t) {
        float* out = keep_per_pixel ? series.per_pixel->data() + t * px : nullptr;
        std::uint8_t* ok = keep_per_pixel ? series.per_pixel_valid->data() + t * px : nullptr;
        const auto acc = k.ndvi(stack.frame(t).data(), px, stack.channels(), nir, red, out, ok);
        if (acc.valid > 0) {
            series.means[t] = acc.sum / static_cast<double>(acc.valid);
            series.valid[t] = 1;
        }
    }
    return series;
}

std::size_t select_max_ndvi_timestep(const NdviSeries& series) {
    std::optional<std::size_t> best;
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (!series.is_valid(t)) continue;
        if (!best || series.means[t] > series.means[*best]) best = t;
    }
    if (!best) throw UnusableTileError("no timestep has a valid NDVI value");
    return *best;
}

}  // namespace agriseg
