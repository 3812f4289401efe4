#include <algorithm>
#include <cmath>
#include <fstream>

#include "agriseg/error.hpp"
#include "json.hpp"
#include "trace.hpp"

namespace agriseg {
namespace {

double point_segment_distance(const Vertex& p, const Vertex& a, const Vertex& b) {
    const double ax = static_cast<double>(a.col), ay = static_cast<double>(a.row);
    const double dx = static_cast<double>(b.col) - ax, dy = static_cast<double>(b.row) - ay;
    const double px = static_cast<double>(p.col) - ax, py = static_cast<double>(p.row) - ay;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return std::hypot(px, py);
    const double t = std::clamp((px * dx + py * dy) / len2, 0.0, 1.0);
    return std::hypot(px - t * dx, py - t * dy);
}

void douglas_peucker(const Ring& pts, std::size_t lo, std::size_t hi, double tol,
                     std::vector<std::uint8_t>& keep) {
    if (hi <= lo + 1) return;
    double worst = -1.0;
    std::size_t at = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > worst) {
            worst = d;
            at = i;
        }
    }
    if (worst > tol) {
        keep[at] = 1;
        douglas_peucker(pts, lo, at, tol, keep);
        douglas_peucker(pts, at, hi, tol, keep);
    }
}

}  // namespace

Ring simplify_ring(const Ring& ring, double tolerance) {
    // closed ring with fewer than 4 distinct vertices cannot lose any
    if (tolerance <= 0.0 || ring.size() <= 5) return ring;
    const std::size_t n = ring.size() - 1;
    std::size_t far = 1;
    double best = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = std::hypot(static_cast<double>(ring[i].col - ring[0].col),
                                    static_cast<double>(ring[i].row - ring[0].row));
        if (d > best) {
            best = d;
            far = i;
        }
    }
    std::vector<std::uint8_t> keep(ring.size(), 0);
    keep[0] = keep[far] = keep[n] = 1;
    douglas_peucker(ring, 0, far, tolerance, keep);
    douglas_peucker(ring, far, n, tolerance, keep);
    Ring out;
    for (std::size_t i = 0; i < ring.size(); ++i)
        if (keep[i]) out.push_back(ring[i]);
    return out.size() >= 4 ? out : ring;
}

ShapeMap build_shape_map(const LabelMap& map, std::uint64_t min_area, double simplify_tolerance) {
    ShapeMap shapes;
    shapes.height = map.height;
    shapes.width = map.width;
    const Components comps = connected_components(map);

    // bucket pixels by component, preserving row-major order
    std::vector<std::size_t> offsets(comps.info.size() + 1, 0);
    for (std::uint32_t id : comps.ids)
        if (id) ++offsets[id];
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    std::vector<std::size_t> pixels(offsets.back());
    for (std::size_t p = 0; p < comps.ids.size(); ++p)
        if (const std::uint32_t id = comps.ids[p]) pixels[fill[id - 1]++] = p;

    const auto h = static_cast<std::int64_t>(map.height);
    const auto w = static_cast<std::int64_t>(map.width);
    for (std::size_t k = 0; k < comps.info.size(); ++k) {
        const ComponentInfo& info = comps.info[k];
        if (info.area < min_area) continue;
        const auto id = static_cast<std::uint32_t>(k + 1);
        const std::span<const std::size_t> own(pixels.data() + offsets[k], offsets[k + 1] - offsets[k]);
        TracedRings rings = detail::trace_component(own, map.width, [&](std::int64_t r, std::int64_t c) {
            return r >= 0 && c >= 0 && r < h && c < w &&
                   comps.ids[static_cast<std::size_t>(r * w + c)] == id;
        });
        FieldPolygon poly;
        poly.exterior = simplify_ring(rings.exterior, simplify_tolerance);
        for (auto& hole : rings.holes) poly.holes.push_back(simplify_ring(hole, simplify_tolerance));
        poly.label = info.label;
        poly.area = info.area;
        poly.component_id = id;
        shapes.polygons.push_back(std::move(poly));
    }
    return shapes;
}

LabelMap rasterize(const ShapeMap& shapes) {
    LabelMap out(shapes.height, shapes.width);
    const auto h = static_cast<std::int64_t>(shapes.height);
    const auto w = static_cast<std::int64_t>(shapes.width);
    std::vector<std::vector<std::pair<std::int64_t, int>>> crossings(shapes.height);
    for (const auto& poly : shapes.polygons) {
        for (auto& row : crossings) row.clear();
        auto add_ring = [&](const Ring& ring) {
            for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
                const Vertex& a = ring[i];
                const Vertex& b = ring[i + 1];
                if (a.row == b.row) continue;
                // pixel-center scanline y = r + 0.5 crosses the edge for r in [lo, hi)
                const double r0 = static_cast<double>(a.row), r1 = static_cast<double>(b.row);
                const double c0 = static_cast<double>(a.col), c1 = static_cast<double>(b.col);
                const int dir = b.row > a.row ? 1 : -1;
                const std::int64_t lo = std::max<std::int64_t>(std::min(a.row, b.row), 0);
                const std::int64_t hi = std::min<std::int64_t>(std::max(a.row, b.row), h);
                for (std::int64_t r = lo; r < hi; ++r) {
                    const double y = static_cast<double>(r) + 0.5;
                    const double x = c0 + (c1 - c0) * (y - r0) / (r1 - r0);
                    // pixel centers at col + 0.5 lie right of x when col >= ceil(x - 0.5)
                    crossings[static_cast<std::size_t>(r)].push_back(
                        {static_cast<std::int64_t>(std::ceil(x - 0.5)), dir});
                }
            }
        };
        add_ring(poly.exterior);
        for (const auto& hole : poly.holes) add_ring(hole);
        for (std::int64_t r = 0; r < h; ++r) {
            auto& row = crossings[static_cast<std::size_t>(r)];
            if (row.empty()) continue;
            std::sort(row.begin(), row.end());
            int winding = 0;
            std::size_t k = 0;
            for (std::int64_t c = 0; c < w; ++c) {
                while (k < row.size() && row[k].first <= c) winding += row[k++].second;
                if (winding != 0) out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = poly.label;
            }
        }
    }
    return out;
}

std::string to_geojson(const ShapeMap& shapes) {
    using ojson = nlohmann::ordered_json;
    auto ring_json = [](const Ring& ring) {
        ojson coords = ojson::array();
        for (const auto& v : ring) coords.push_back(ojson::array({v.col, v.row}));
        return coords;
    };
    ojson doc;
    doc["type"] = "FeatureCollection";
    ojson props;
    props["image_id"] = shapes.image_id;
    props["height"] = shapes.height;
    props["width"] = shapes.width;
    props["coordinates"] = "pixel [col, row], pixel-corner lattice";
    if (shapes.prompt) {
        props["pps"] = shapes.prompt->pps;
        props["mmra"] = shapes.prompt->mmra;
        props["pps_percent"] = shapes.prompt->pps_percent;
        props["mmra_percent"] = shapes.prompt->mmra_percent;
    }
    if (shapes.transform) props["transform"] = *shapes.transform;
    doc["properties"] = std::move(props);
    ojson features = ojson::array();
    for (const auto& poly : shapes.polygons) {
        ojson rings = ojson::array();
        rings.push_back(ring_json(poly.exterior));
        for (const auto& hole : poly.holes) rings.push_back(ring_json(hole));
        ojson f;
        f["type"] = "Feature";
        f["properties"] = ojson{{"label", poly.label},
                                {"area", poly.area},
                                {"component_id", poly.component_id},
                                {"image_id", shapes.image_id}};
        f["geometry"] = ojson{{"type", "Polygon"}, {"coordinates", std::move(rings)}};
        features.push_back(std::move(f));
    }
    doc["features"] = std::move(features);
    return doc.dump() + "\n";
}

void write_geojson(const ShapeMap& shapes, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << to_geojson(shapes);
    if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace agriseg
