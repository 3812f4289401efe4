#include <filesystem>
#include <fstream>
#include <set>

#include "../support/oracles.hpp"
#include "agriseg/error.hpp"
#include "agriseg/raster.hpp"
#include "agriseg/raster_io.hpp"
#include "doctest.h"

using namespace agriseg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("agriseg_raster_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// bands: B4 (red), B3, B2, B8 (nir)
MultispectralStack small_stack(std::size_t t, std::size_t h, std::size_t w, float nir, float red) {
    std::vector<float> data(t * h * w * 4);
    for (std::size_t i = 0; i < t * h * w; ++i) {
        data[i * 4 + 0] = red;
        data[i * 4 + 1] = 0.2f + 0.01f * static_cast<float>(i % 5);
        data[i * 4 + 2] = 0.1f + 0.02f * static_cast<float>(i % 3);
        data[i * 4 + 3] = nir;
    }
    return MultispectralStack("T1", {"B4", "B3", "B2", "B8"}, t, h, w, std::move(data));
}

}  // namespace

TEST_CASE("stack validation") {
    CHECK_THROWS_AS(MultispectralStack("x", {"B4"}, 1, 2, 2, std::vector<float>(3)), DataError);
    CHECK_THROWS_AS(MultispectralStack("x", {"B4"}, 0, 2, 2, {}), DataError);
    const auto s = small_stack(2, 3, 3, 0.5f, 0.1f);
    CHECK(s.band_index("B8") == 3);
    CHECK_THROWS_AS(s.band_index("B11"), ConfigError);
    CHECK(s.frame(1).size() == 36);
}

TEST_CASE("ndvi of nir 0.5 red 0.1") {
    const auto s = small_stack(1, 4, 4, 0.5f, 0.1f);
    const auto series = compute_ndvi(s, 3, 0, true);
    CHECK(series.means[0] == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(series.is_valid(0));
    REQUIRE(series.per_pixel);
    CHECK((*series.per_pixel)[5] == doctest::Approx(0.4f / 0.6f));
}

TEST_CASE("ndvi skips pixels with nir + red == 0 and picks the greenest timestep") {
    std::vector<float> data(3 * 1 * 2 * 3, 0.0f);
    // t0: one valid pixel with ndvi 0.2; t1: none valid; t2: two pixels, ndvi 0.5
    auto set = [&](std::size_t t, std::size_t px, float nir, float red) {
        data[(t * 2 + px) * 3 + 0] = nir;
        data[(t * 2 + px) * 3 + 1] = red;
    };
    set(0, 0, 0.6f, 0.4f);
    set(2, 0, 0.3f, 0.1f);
    set(2, 1, 0.6f, 0.2f);
    MultispectralStack s("v", {"B8", "B4", "B3"}, 3, 1, 2, data);
    const auto series = compute_ndvi(s, 0, 1);
    CHECK(series.is_valid(0));
    CHECK_FALSE(series.is_valid(1));
    CHECK(series.means[0] == doctest::Approx(0.2));
    CHECK(series.means[2] == doctest::Approx(0.5));
    CHECK(select_max_ndvi_timestep(series) == 2);

    MultispectralStack dead("d", {"B8", "B4", "B3"}, 2, 1, 2, std::vector<float>(12, 0.0f));
    CHECK_THROWS_AS(select_max_ndvi_timestep(compute_ndvi(dead, 0, 1)), UnusableTileError);
}

TEST_CASE("ties go to the earliest timestep") {
    const auto s = small_stack(3, 2, 2, 0.5f, 0.1f);
    CHECK(select_max_ndvi_timestep(compute_ndvi(s, 3, 0)) == 0);
}

TEST_CASE("rgb snapshot stretch") {
    const auto s = small_stack(1, 4, 4, 0.5f, 0.1f);
    const auto snap = extract_rgb_snapshot(s, 0, {0, 1, 2}, StretchPolicy::min_max());
    CHECK(snap.height == 4);
    CHECK(snap.pixels.size() == 48);
    // red is constant
    CHECK(snap.pixel(2, 3)[0] == 128);
    std::uint8_t lo = 255, hi = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        lo = std::min(lo, snap.pixels[i * 3 + 1]);
        hi = std::max(hi, snap.pixels[i * 3 + 1]);
    }
    CHECK(lo == 0);
    CHECK(hi == 255);
    CHECK_THROWS_AS(extract_rgb_snapshot(s, 1, {0, 1, 2}), ConfigError);
    CHECK_THROWS_AS(extract_rgb_snapshot(s, 0, {0, 0, 2}), ConfigError);
}

TEST_CASE("cloud screening") {
    RgbSnapshot snap{"c", 0, 10, 10, std::vector<std::uint8_t>(300, 50)};
    CHECK(screen_clouds(snap).usable);
    for (std::size_t i = 0; i < 5; ++i) std::fill_n(snap.pixels.begin() + i * 3, 3, 255);
    auto r = screen_clouds(snap);
    CHECK(r.score == doctest::Approx(0.05));
    CHECK(r.usable);
    std::fill_n(snap.pixels.begin() + 15, 3, 201);
    r = screen_clouds(snap);
    CHECK(r.score == doctest::Approx(0.06));
    CHECK_FALSE(r.usable);
    ScreenPolicy p;
    p.excluded_tiles = {"c"};
    snap.pixels.assign(300, 0);
    r = screen_clouds(snap, p);
    CHECK_FALSE(r.usable);
    CHECK(r.excluded);
}

TEST_CASE("tile sides for a 1098 pixel tile") {
    const std::size_t want[] = {1098, 549, 274, 137};
    const std::size_t factors[] = {1, 2, 4, 8};
    for (int i = 0; i < 4; ++i) {
        const auto tiles = tile_image(1098, 1098, factors[i], want[i], "P");
        REQUIRE_FALSE(tiles.empty());
        CHECK(tiles.front().side == want[i]);
    }
    const auto eight = tile_image(1098, 1098, 8, 68);
    CHECK(eight.size() == oracle::windows(1098, 1098, 8, 68).size());
    CHECK(eight.size() == 256);
}

TEST_CASE("tile placement matches exhaustive enumeration") {
    Rng rng(21);
    for (int k = 0; k < 40; ++k) {
        const std::size_t h = 5 + rng.below(120), w = 5 + rng.below(120);
        const std::size_t factor = 1 + rng.below(5);
        const std::size_t side = std::min(h, w) / factor;
        if (side == 0) continue;
        const std::size_t stride = 1 + rng.below(side + 3);
        const auto got = tile_image(h, w, factor, stride, "P");
        const auto want = oracle::windows(h, w, factor, stride);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].origin_row == want[i].row);
            CHECK(got[i].origin_col == want[i].col);
            CHECK(got[i].side == want[i].side);
        }
    }
    CHECK(tile_image(10, 10, 1, 10, "P").front().id() == "P_s10_r0_c0");
}

TEST_CASE("crop") {
    RgbSnapshot snap{"s", 0, 4, 5, {}};
    for (std::size_t i = 0; i < 60; ++i) snap.pixels.push_back(static_cast<std::uint8_t>(i));
    TileSpec t{"s", 1, 2, 2, 2};
    const auto c = crop(snap, t);
    CHECK(c.tile_id == t.id());
    CHECK(c.pixel(0, 0)[0] == (1 * 5 + 2) * 3);
    CHECK(c.pixel(1, 1)[2] == (2 * 5 + 3) * 3 + 2);
    TileSpec bad{"s", 3, 4, 2, 2};
    CHECK_THROWS_AS(crop(snap, bad), ConfigError);
}

TEST_CASE("seeded sampling") {
    const auto a = sample_indices(1000, 300, 42);
    CHECK(a == sample_indices(1000, 300, 42));
    CHECK(a != sample_indices(1000, 300, 43));
    CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 300);
    for (auto i : a) CHECK(i < 1000);
    CHECK(sample_indices(5, 5, 1).size() == 5);
    std::vector<std::string> ids;
    for (int i = 0; i < 400; ++i) ids.push_back("t" + std::to_string(i));
    const auto pick = sample_select(std::span<const std::string>(ids), 300, 9);
    CHECK(std::set<std::string>(pick.begin(), pick.end()).size() == 300);
}

TEST_CASE("msst round trip and directory stacks") {
    const auto dir = scratch("msst");
    const auto s = small_stack(2, 3, 4, 0.5f, 0.1f);
    write_msst(s, dir / "T1.msst");
    const auto r = read_msst(dir / "T1.msst");
    CHECK(r.tile_id() == "T1");
    CHECK(r.band_names() == s.band_names());
    CHECK(std::equal(r.data().begin(), r.data().end(), s.data().begin(), s.data().end()));

    fs::create_directories(dir / "T2");
    write_msst(small_stack(1, 3, 4, 0.5f, 0.1f), dir / "T2" / "a.msst");
    write_msst(small_stack(2, 3, 4, 0.7f, 0.1f), dir / "T2" / "b.msst");
    const auto cat = read_msst(dir / "T2");
    CHECK(cat.tile_id() == "T2");
    CHECK(cat.timesteps() == 3);
    CHECK(cat.at(2, 0, 0, 3) == doctest::Approx(0.7f));

    std::ofstream(dir / "bad.msst") << "MSSTgarbage";
    CHECK_THROWS_AS(read_msst(dir / "bad.msst"), DataError);
    CHECK_THROWS_AS(read_msst(dir / "missing.msst"), DataError);
}

TEST_CASE("png round trip and exclusion lists") {
    const auto dir = scratch("png");
    RgbSnapshot snap{"img", 0, 3, 2, {}};
    for (std::size_t i = 0; i < 18; ++i) snap.pixels.push_back(static_cast<std::uint8_t>(i * 13));
    write_png(snap, dir / "img.png");
    const auto back = read_png(dir / "img.png");
    CHECK(back.tile_id == "img");
    CHECK(back.pixels == snap.pixels);
    std::ofstream(dir / "ex.txt") << "# cloudy\nA\n\n  B  \n";
    CHECK(read_exclusion_list(dir / "ex.txt") == std::set<std::string>{"A", "B"});
}
