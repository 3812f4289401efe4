#include <filesystem>
#include <fstream>

#include "../support/oracles.hpp"
#include "agriseg/error.hpp"
#include "agriseg/mask.hpp"
#include "agriseg/maskset_io.hpp"
#include "doctest.h"

using namespace agriseg;

namespace {

MaskSet random_maskset(Rng& rng, std::size_t h, std::size_t w, std::size_t masks) {
    MaskSet set{"rand", h, w, PromptConfig{}, {}};
    for (std::size_t k = 0; k < masks; ++k) {
        // coarse IoU values force ties
        const double iou = static_cast<double>(rng.below(4)) / 4.0;
        set.masks.push_back(BooleanMask::from_bitmap(oracle::random_bitmap(rng, h, w), h, w, iou));
    }
    return set;
}

}  // namespace

TEST_CASE("rle encode and decode") {
    const std::vector<std::uint8_t> bits{1, 1, 0, 0, 0, 1};
    const Rle rle = encode_rle(bits);
    CHECK(rle == Rle{0, 2, 3, 1});
    CHECK(decode_rle(rle, 2, 3) == bits);
    CHECK(rle_area(rle) == 3);
    CHECK(encode_rle(std::vector<std::uint8_t>(4, 0)) == Rle{4});
    CHECK_THROWS_AS(decode_rle(Rle{2, 3}, 2, 3), FormatError);
    Rng rng(31);
    for (int k = 0; k < 50; ++k) {
        const std::size_t h = 1 + rng.below(12), w = 1 + rng.below(12);
        const auto b = oracle::random_bitmap(rng, h, w);
        CHECK(decode_rle(encode_rle(b), h, w) == b);
    }
}

TEST_CASE("canonical rle") {
    CHECK(canonical_rle(Rle{0, 2, 0, 3, 1}) == Rle{0, 5, 1});
    CHECK(canonical_rle(Rle{2, 0, 3}) == Rle{5});
    CHECK(canonical_rle(Rle{1, 2, 0}) == Rle{1, 2});
    CHECK(canonical_rle(Rle{}) == Rle{0});
}

TEST_CASE("prompt resolution") {
    const auto p = PromptConfig::resolve(137, 0.08, 0.01);
    CHECK(p.pps == 11);
    CHECK(p.mmra == 188);
    CHECK(PromptConfig::resolve(20, 0.01, 0.0).pps == 1);
    CHECK_THROWS_AS(PromptConfig::resolve(20, 0.0, 0.0), ConfigError);
}

TEST_CASE("prompt grid is pps squared interior points") {
    for (std::size_t side : {1u, 2u, 7u, 137u, 549u}) {
        for (std::uint32_t pps : {1u, 2u, 5u, 32u}) {
            const auto pts = prompt_grid(side, pps);
            REQUIRE(pts.size() == std::size_t{pps} * pps);
            for (const auto& pt : pts) {
                CHECK(pt.row > 0.0);
                CHECK(pt.row < static_cast<double>(side));
                CHECK(pt.col > 0.0);
                CHECK(pt.col < static_cast<double>(side));
            }
        }
    }
    const auto g = prompt_grid(10, 2);
    CHECK(g[1].row == doctest::Approx(2.5));
    CHECK(g[1].col == doctest::Approx(7.5));
}

TEST_CASE("minimum region area filter") {
    SUBCASE("small island removed, border hole kept, enclosed hole filled") {
        // 6x6: a ring with a 1-pixel hole, a lone pixel, and a notch open to the border
        std::vector<std::uint8_t> b{
            1, 1, 1, 0, 0, 0,
            1, 0, 1, 0, 1, 0,
            1, 1, 1, 0, 0, 0,
            0, 0, 0, 0, 0, 0,
            1, 1, 1, 1, 1, 1,
            1, 1, 1, 0, 1, 1};
        auto f = b;
        remove_small_regions(f, 6, 6, 2);
        CHECK(f[1 * 6 + 1] == 1);
        CHECK(f[1 * 6 + 4] == 0);
        CHECK(f[5 * 6 + 3] == 0);
        CHECK(f == oracle::mmra_filter(b, 6, 6, 2));
    }
    SUBCASE("random bitmaps") {
        Rng rng(32);
        for (int k = 0; k < 60; ++k) {
            const std::size_t h = 1 + rng.below(16), w = 1 + rng.below(16);
            const std::uint64_t mmra = rng.below(20);
            const auto b = oracle::random_bitmap(rng, h, w);
            auto f = b;
            remove_small_regions(f, h, w, mmra);
            CHECK(f == oracle::mmra_filter(b, h, w, mmra));
            auto again = f;
            remove_small_regions(again, h, w, mmra);
            CHECK(again == f);
            auto zero = b;
            remove_small_regions(zero, h, w, 0);
            CHECK(zero == b);
        }
    }
    SUBCASE("filter_mmra keeps metadata consistent") {
        Rng rng(33);
        const auto b = oracle::random_bitmap(rng, 9, 9);
        const auto m = BooleanMask::from_bitmap(b, 9, 9, 0.7);
        const auto f = filter_mmra(m, 5);
        CHECK(f.predicted_iou == 0.7);
        CHECK(f.area == rle_area(f.rle));
        CHECK(f.bitmap() == oracle::mmra_filter(b, 9, 9, 5));
    }
}

TEST_CASE("priority order") {
    MaskSet s{"p", 1, 4, {}, {}};
    s.masks.push_back(BooleanMask::from_bitmap(std::vector<std::uint8_t>{1, 0, 0, 0}, 1, 4, 0.5));
    s.masks.push_back(BooleanMask::from_bitmap(std::vector<std::uint8_t>{1, 1, 0, 0}, 1, 4, 0.5));
    s.masks.push_back(BooleanMask::from_bitmap(std::vector<std::uint8_t>{0, 0, 1, 0}, 1, 4, 0.9));
    s.masks.push_back(BooleanMask::from_bitmap(std::vector<std::uint8_t>{0, 1, 0, 0}, 1, 4, 0.5));
    CHECK(priority_order(s.masks) == std::vector<std::size_t>{2, 1, 0, 3});
    const auto l = consolidate(s);
    // mask 2 -> 1, mask 1 -> 2; masks 0 and 3 claim nothing
    CHECK(l.labels == std::vector<std::uint32_t>{2, 2, 1, 0});
}

TEST_CASE("consolidation matches the per-pixel oracle") {
    Rng rng(34);
    for (int k = 0; k < 60; ++k) {
        const auto set = random_maskset(rng, 1 + rng.below(16), 1 + rng.below(16), rng.below(7));
        const auto got = consolidate(set);
        CHECK(got == oracle::consolidate(set));
        CHECK(consolidate(set) == got);
    }
    MaskSet bad{"b", 2, 2, {}, {}};
    bad.masks.push_back(BooleanMask{{1, 2}, 2, 2, 0.5, 2});
    CHECK_THROWS_AS(consolidate(bad), DataError);
}

TEST_CASE("maskset json round trip") {
    Rng rng(35);
    auto set = random_maskset(rng, 7, 5, 3);
    set.generator = PromptConfig::resolve(5, 0.4, 0.04);
    const std::string text = write_maskset(set);
    CHECK(text.back() == '\n');
    CHECK(text.find('\n') == text.size() - 1);
    const auto back = parse_maskset(text);
    CHECK(back == set);
    CHECK(write_maskset(back) == text);

    const auto dir = std::filesystem::temp_directory_path() / "agriseg_maskset";
    std::filesystem::create_directories(dir);
    write_maskset(set, dir / "m.json");
    CHECK(read_maskset(dir / "m.json") == set);
    CHECK_THROWS_AS(read_maskset(dir / "none.json"), DataError);
}

TEST_CASE("maskset parse errors") {
    const std::string head =
        R"({"version":1,"image_id":"x","height":2,"width":2,"generator":{"pps":1,"mmra":0,"pps_percent":0.5,"mmra_percent":0},"masks":[)";
    CHECK_NOTHROW(parse_maskset(head + R"({"predicted_iou":0.5,"area":1,"rle":[0,1,3]}]})"));
    CHECK_THROWS_AS(parse_maskset("{"), FormatError);
    CHECK_THROWS_AS(parse_maskset(head + R"({"predicted_iou":0.5,"area":1,"rle":[0,1,2]}]})"), FormatError);
    CHECK_THROWS_AS(parse_maskset(head + R"({"predicted_iou":0.5,"area":2,"rle":[0,1,3]}]})"), FormatError);
    CHECK_THROWS_AS(parse_maskset(head + R"({"predicted_iou":0.5,"area":1,"rle":[0,-1,5]}]})"), FormatError);
    CHECK_THROWS_AS(parse_maskset(head + R"({"area":1,"rle":[0,1,3]}]})"), FormatError);
    try {
        parse_maskset(head + R"({"predicted_iou":0.5,"area":1,"rle":[0,1,3]},{"predicted_iou":0.5,"area":1,"rle":[9]}]})");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("mask 1") != std::string::npos);
    }
}
