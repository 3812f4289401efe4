#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "agriseg/harness.hpp"

namespace agriseg {
namespace {

struct Region {
    std::array<std::uint8_t, 3> seed_color{};
    std::vector<std::uint64_t> run_ends;  // cumulative end offset of each run
};

bool region_contains(const Region& r, std::size_t pixel) {
    const auto it = std::upper_bound(r.run_ends.begin(), r.run_ends.end(), pixel);
    return ((it - r.run_ends.begin()) % 2) == 1;
}

std::uint64_t hash_runs(const Rle& runs) {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : runs) {
        h ^= v;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

MaskSet color_oracle_segmenter(const RgbSnapshot& snapshot, const PromptConfig& config,
                               int tolerance) {
    MaskSet set;
    set.image_id = snapshot.tile_id;
    set.height = snapshot.height;
    set.width = snapshot.width;
    set.generator = config;
    if (snapshot.height == 0 || snapshot.width == 0) return set;

    const std::size_t h = snapshot.height, w = snapshot.width;
    std::map<std::array<std::uint8_t, 3>, std::vector<std::size_t>> regions_by_color;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> masks_by_hash;
    std::vector<Region> regions;
    std::vector<std::uint8_t> bits(h * w, 0);
    std::vector<std::size_t> stack, members;

    for (const PromptPoint& pt : prompt_grid(h, w, config.pps)) {
        const std::size_t r0 = std::min(h - 1, static_cast<std::size_t>(pt.row));
        const std::size_t c0 = std::min(w - 1, static_cast<std::size_t>(pt.col));
        const std::size_t seed = r0 * w + c0;
        const std::uint8_t* s = snapshot.pixels.data() + seed * 3;
        const std::array<std::uint8_t, 3> color{s[0], s[1], s[2]};

        // a seed inside a region grown from the same color reproduces that region
        auto& same_color = regions_by_color[color];
        const bool known = std::any_of(same_color.begin(), same_color.end(), [&](std::size_t i) {
            return region_contains(regions[i], seed);
        });
        if (known) continue;

        auto close = [&](std::size_t p) {
            const std::uint8_t* q = snapshot.pixels.data() + p * 3;
            for (int ch = 0; ch < 3; ++ch)
                if (std::abs(int{q[ch]} - int{color[static_cast<std::size_t>(ch)]}) > tolerance) return false;
            return true;
        };
        members.clear();
        bits[seed] = 1;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            members.push_back(p);
            const std::size_t r = p / w, c = p % w;
            auto visit = [&](std::size_t q) {
                if (!bits[q] && close(q)) {
                    bits[q] = 1;
                    stack.push_back(q);
                }
            };
            if (r > 0) visit(p - w);
            if (r + 1 < h) visit(p + w);
            if (c > 0) visit(p - 1);
            if (c + 1 < w) visit(p + 1);
        }

        std::uint64_t perimeter = 0;
        for (std::size_t p : members) {
            const std::size_t r = p / w, c = p % w;
            perimeter += (r == 0 || !bits[p - w]) + (r + 1 == h || !bits[p + w]) +
                         (c == 0 || !bits[p - 1]) + (c + 1 == w || !bits[p + 1]);
        }
        const double area = static_cast<double>(members.size());
        const double roughness = std::clamp(static_cast<double>(perimeter) / (4.0 * area), 0.0, 1.0);
        BooleanMask mask = BooleanMask::from_bitmap(bits, h, w, 1.0 - roughness);
        for (std::size_t p : members) bits[p] = 0;

        Region region;
        region.seed_color = color;
        std::uint64_t acc = 0;
        for (auto run : mask.rle) region.run_ends.push_back(acc += run);
        same_color.push_back(regions.size());
        regions.push_back(std::move(region));

        auto& bucket = masks_by_hash[hash_runs(mask.rle)];
        const bool duplicate = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t i) {
            return set.masks[i].rle == mask.rle;
        });
        if (duplicate) continue;
        bucket.push_back(set.masks.size());
        set.masks.push_back(std::move(mask));
    }
    return set;
}

}  // namespace agriseg
