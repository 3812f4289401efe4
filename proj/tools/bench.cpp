// Times every kernel table available on this machine.
// usage: agriseg_bench [pixels] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "agriseg/kernels.hpp"
#include "agriseg/rng.hpp"

using namespace agriseg;

namespace {

template <typename F>
double best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        if (dt.count() < best) best = dt.count();
    }
    return best;
}

volatile std::uint64_t sink;

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : (1u << 22);
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
    constexpr std::size_t channels = 4;

    Rng rng(7);
    std::vector<float> bands(n * channels);
    for (auto& v : bands) v = static_cast<float>(rng.uniform());
    std::vector<std::uint8_t> rgb(n * 3);
    for (auto& v : rgb) v = static_cast<std::uint8_t>(rng.below(256));
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n;) {
        const std::size_t run = 1 + rng.below(200);
        const std::uint8_t b = static_cast<std::uint8_t>(rng.below(2));
        for (std::size_t j = 0; j < run && i < n; ++j) bits[i++] = b;
    }
    std::vector<float> ndvi(n);
    std::vector<std::uint8_t> valid(n), u8(n);
    std::vector<std::uint32_t> labels(n);

    std::printf("%-8s %-14s %10s %10s\n", "table", "kernel", "ms", "Mpx/s");
    for (const auto* k : kernels::available()) {
        auto report = [&](const char* name, double s) {
            std::printf("%-8.*s %-14s %10.3f %10.1f\n", static_cast<int>(k->name.size()),
                        k->name.data(), name, s * 1e3, static_cast<double>(n) / s / 1e6);
        };
        report("ndvi", best_of(repeats, [&] {
                   sink = k->ndvi(bands.data(), n, channels, 3, 0, ndvi.data(), valid.data()).valid;
               }));
        report("stretch_u8", best_of(repeats, [&] {
                   k->stretch_u8(bands.data(), n, channels, 0.1f, 300.0f, u8.data());
               }));
        report("count_bright", best_of(repeats, [&] { sink = k->count_bright(rgb.data(), n, 200); }));
        report("next_change", best_of(repeats, [&] {
                   std::uint64_t runs = 0;
                   for (std::size_t i = 0; i < n; i = k->next_change(bits.data(), i, n)) ++runs;
                   sink = runs;
               }));
        report("claim", best_of(repeats, [&] {
                   std::fill(labels.begin(), labels.end(), 0u);
                   sink = k->claim(labels.data(), bits.data(), n, 1);
               }));
    }
    return 0;
}
