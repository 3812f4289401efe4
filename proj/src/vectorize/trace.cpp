#include "trace.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "agriseg/error.hpp"

namespace agriseg {
namespace detail {
namespace {

// East, south, west, north with rows growing downward. right_of(d) = (d+1)%4.
constexpr std::array<std::int64_t, 4> kDr{0, 1, 0, -1};
constexpr std::array<std::int64_t, 4> kDc{1, 0, -1, 0};

struct Outgoing {
    std::array<std::int8_t, 2> dir{-1, -1};
    std::array<bool, 2> used{false, false};
    int count = 0;
};

std::uint64_t vkey(std::int64_t r, std::int64_t c) {
    return (static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint32_t>(c);
}

Ring finish_ring(const std::vector<Vertex>& walk) {
    // walk is the vertex sequence without the closing repeat
    const std::size_t n = walk.size();
    std::vector<Vertex> corners;
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& prev = walk[(i + n - 1) % n];
        const Vertex& cur = walk[i];
        const Vertex& next = walk[(i + 1) % n];
        const bool straight = (prev.row == cur.row && cur.row == next.row) ||
                              (prev.col == cur.col && cur.col == next.col);
        if (!straight) corners.push_back(cur);
    }
    const auto first = std::min_element(corners.begin(), corners.end());
    std::rotate(corners.begin(), first, corners.end());
    corners.push_back(corners.front());
    return corners;
}

}  // namespace

TracedRings trace_component(std::span<const std::size_t> pixels, std::size_t width,
                            const std::function<bool(std::int64_t, std::int64_t)>& inside) {
    if (pixels.empty()) throw ConfigError("cannot trace an empty component");

    std::unordered_map<std::uint64_t, Outgoing> out;
    out.reserve(pixels.size() * 2);
    auto add_edge = [&](std::int64_t r, std::int64_t c, int dir) {
        Outgoing& o = out[vkey(r, c)];
        o.dir[static_cast<std::size_t>(o.count++)] = static_cast<std::int8_t>(dir);
    };
    // component on the right of every directed edge
    for (std::size_t p : pixels) {
        const auto r = static_cast<std::int64_t>(p / width);
        const auto c = static_cast<std::int64_t>(p % width);
        if (!inside(r - 1, c)) add_edge(r, c, 0);
        if (!inside(r, c + 1)) add_edge(r, c + 1, 1);
        if (!inside(r + 1, c)) add_edge(r + 1, c + 1, 2);
        if (!inside(r, c - 1)) add_edge(r + 1, c, 3);
    }

    std::vector<Ring> rings;
    std::vector<Vertex> walk;
    for (std::size_t p : pixels) {
        const auto pr = static_cast<std::int64_t>(p / width);
        const auto pc = static_cast<std::int64_t>(p % width);
        // candidate start edges of this pixel, in the same order they were added
        const std::array<std::pair<Vertex, int>, 4> starts{{{{pr, pc}, 0},
                                                            {{pr, pc + 1}, 1},
                                                            {{pr + 1, pc + 1}, 2},
                                                            {{pr + 1, pc}, 3}}};
        for (const auto& [v0, d0] : starts) {
            auto it = out.find(vkey(v0.row, v0.col));
            if (it == out.end()) continue;
            Outgoing& o0 = it->second;
            const int slot0 = o0.dir[0] == d0 ? 0 : (o0.count > 1 && o0.dir[1] == d0 ? 1 : -1);
            if (slot0 < 0 || o0.used[static_cast<std::size_t>(slot0)]) continue;

            walk.clear();
            Vertex v = v0;
            Outgoing* o = &o0;
            int slot = slot0;
            for (;;) {
                o->used[static_cast<std::size_t>(slot)] = true;
                const int d = o->dir[static_cast<std::size_t>(slot)];
                walk.push_back(v);
                v = {v.row + kDr[static_cast<std::size_t>(d)], v.col + kDc[static_cast<std::size_t>(d)]};
                o = &out.at(vkey(v.row, v.col));
                if (o->count == 2) {
                    // pinch vertex: turn right, hugging the pixel just passed
                    const int want = (d + 1) % 4;
                    slot = o->dir[0] == want ? 0 : 1;
                } else {
                    slot = 0;
                }
                if (o->used[static_cast<std::size_t>(slot)]) break;
            }
            rings.push_back(finish_ring(walk));
        }
    }

    TracedRings traced;
    for (auto& ring : rings) {
        if (ring_signed_area(ring) > 0) {
            traced.exterior = std::move(ring);
        } else {
            traced.holes.push_back(std::move(ring));
        }
    }
    std::sort(traced.holes.begin(), traced.holes.end(),
              [](const Ring& a, const Ring& b) { return a.front() < b.front(); });
    return traced;
}

}  // namespace detail

TracedRings trace_boundary(std::span<const std::uint8_t> bitmap, std::size_t height,
                           std::size_t width) {
    if (bitmap.size() != height * width) throw ConfigError("bitmap size does not match H*W");
    std::vector<std::size_t> pixels;
    for (std::size_t i = 0; i < bitmap.size(); ++i)
        if (bitmap[i]) pixels.push_back(i);
    const auto h = static_cast<std::int64_t>(height);
    const auto w = static_cast<std::int64_t>(width);
    return detail::trace_component(pixels, width, [&](std::int64_t r, std::int64_t c) {
        return r >= 0 && c >= 0 && r < h && c < w &&
               bitmap[static_cast<std::size_t>(r * w + c)] != 0;
    });
}

double ring_signed_area(const Ring& ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        twice += static_cast<double>(ring[i].col * ring[i + 1].row - ring[i + 1].col * ring[i].row);
    }
    return twice / 2.0;
}

double polygon_area(const FieldPolygon& polygon) {
    double a = ring_signed_area(polygon.exterior);
    for (const auto& h : polygon.holes) a += ring_signed_area(h);
    return a;
}

}  // namespace agriseg
