#pragma once

// Synthetic field scenes for end-to-end runs. Fields are vertical stripes or
// Voronoi cells with one flat color each; an optional road grid paints
// contrasting lines across the image without changing the truth labels.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "agriseg/label_map.hpp"
#include "agriseg/raster.hpp"
#include "agriseg/raster_io.hpp"
#include "agriseg/rng.hpp"

namespace scene {

struct Scene {
    agriseg::RgbSnapshot image;
    agriseg::LabelMap truth;
};

struct Color {
    std::uint8_t r, g, b;
};

// Far apart in every channel pair so a tolerance of 12 never bridges two fields.
inline Color field_color(std::size_t i) {
    static const Color palette[] = {{40, 160, 40},  {200, 180, 60}, {120, 90, 30},
                                    {60, 120, 200}, {170, 60, 140}, {90, 200, 170},
                                    {230, 120, 80}, {20, 60, 90}};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

// dark asphalt; bright roads would trip the cloud screen
inline const Color kRoad{80, 80, 80};

inline Scene blank(std::size_t h, std::size_t w, const std::string& id) {
    Scene s;
    s.image.tile_id = id;
    s.image.height = h;
    s.image.width = w;
    s.image.pixels.assign(h * w * 3, 0);
    s.truth = agriseg::LabelMap(h, w);
    return s;
}

inline void paint(Scene& s, std::size_t row, std::size_t col, Color c) {
    std::uint8_t* p = s.image.pixels.data() + (row * s.image.width + col) * 3;
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
}

inline Scene stripes(std::size_t h, std::size_t w, std::size_t fields, const std::string& id) {
    Scene s = blank(h, w, id);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t f = c * fields / w;
            paint(s, r, c, field_color(f));
            s.truth.at(r, c) = static_cast<std::uint32_t>(f + 1);
        }
    }
    return s;
}

inline Scene voronoi(std::size_t h, std::size_t w, std::size_t cells, std::uint64_t seed,
                     const std::string& id) {
    agriseg::Rng rng(seed);
    std::vector<std::pair<std::int64_t, std::int64_t>> sites(cells);
    for (auto& p : sites) p = {static_cast<std::int64_t>(rng.below(h)), static_cast<std::int64_t>(rng.below(w))};
    Scene s = blank(h, w, id);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            std::size_t best = 0;
            std::int64_t best_d = -1;
            for (std::size_t i = 0; i < cells; ++i) {
                const std::int64_t dr = sites[i].first - static_cast<std::int64_t>(r);
                const std::int64_t dc = sites[i].second - static_cast<std::int64_t>(c);
                const std::int64_t d = dr * dr + dc * dc;
                if (best_d < 0 || d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            paint(s, r, c, field_color(best));
            s.truth.at(r, c) = static_cast<std::uint32_t>(best + 1);
        }
    }
    return s;
}

/// Horizontal and vertical roads of `width` pixels every `spacing` pixels,
/// starting at `offset`. Truth labels are left alone.
inline void add_roads(Scene& s, std::size_t offset, std::size_t spacing, std::size_t width) {
    for (std::size_t r = 0; r < s.image.height; ++r) {
        for (std::size_t c = 0; c < s.image.width; ++c) {
            const bool on_row = r >= offset && (r - offset) % spacing < width;
            const bool on_col = c >= offset && (c - offset) % spacing < width;
            if (on_row || on_col) paint(s, r, c, kRoad);
        }
    }
}

inline void write_data_root(const std::filesystem::path& root, const std::vector<Scene>& scenes) {
    std::filesystem::create_directories(root / "snapshots");
    std::filesystem::create_directories(root / "truth");
    for (const auto& s : scenes) {
        agriseg::write_png(s.image, root / "snapshots" / (s.image.tile_id + ".png"));
        agriseg::write_label_map(s.truth, root / "truth" / (s.image.tile_id + ".lmap"));
    }
}

}  // namespace scene
