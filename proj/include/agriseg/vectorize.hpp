#pragma once

// LabelMap -> field-boundary polygons. Vertices sit on the pixel-corner
// lattice: vertex (row, col) is the top-left corner of pixel (row, col).
// Orientation is measured with x = col, y = row: exteriors have positive
// shoelace area (counter-clockwise), holes negative (clockwise).

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agriseg/label_map.hpp"
#include "agriseg/mask.hpp"

namespace agriseg {

struct Vertex {
    std::int64_t row = 0;
    std::int64_t col = 0;
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Closed: front() == back().
using Ring = std::vector<Vertex>;

struct FieldPolygon {
    Ring exterior;
    std::vector<Ring> holes;
    std::uint32_t label = 0;
    std::uint64_t area = 0;
    std::uint32_t component_id = 0;
};

/// GDAL-style geotransform: x = t0 + col*t1 + row*t2, y = t3 + col*t4 + row*t5.
using AffineTransform = std::array<double, 6>;

struct ShapeMap {
    std::vector<FieldPolygon> polygons;
    std::size_t height = 0;
    std::size_t width = 0;
    std::string image_id;
    std::optional<PromptConfig> prompt;
    std::optional<AffineTransform> transform;
};

struct ComponentInfo {
    std::uint32_t label = 0;
    std::uint64_t area = 0;
    std::size_t first_pixel = 0;  // row-major index of the first pixel
};

struct Components {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint32_t> ids;   // 0 = background, else 1-based component id
    std::vector<ComponentInfo> info;  // info[id - 1]
};

/// 4-connected components of each nonzero label, numbered in row-major
/// order of their first pixel.
Components connected_components(const LabelMap& map);

struct TracedRings {
    Ring exterior;
    std::vector<Ring> holes;
};

/// Boundary of one 4-connected component. Holes are the enclosed
/// 8-connected regions of non-component pixels. Collinear vertices are
/// merged; each ring starts at its smallest (row, col) vertex.
/// Throws ConfigError for an empty bitmap.
TracedRings trace_boundary(std::span<const std::uint8_t> bitmap, std::size_t height,
                           std::size_t width);

/// Shoelace area with x = col, y = row.
double ring_signed_area(const Ring& ring);
/// Exterior area plus (negative) hole areas.
double polygon_area(const FieldPolygon& polygon);

/// Douglas-Peucker on a closed ring; tolerance <= 0 returns the ring unchanged.
Ring simplify_ring(const Ring& ring, double tolerance);

ShapeMap build_shape_map(const LabelMap& map, std::uint64_t min_area,
                         double simplify_tolerance = 0.0);

/// Pixel-center, non-zero-winding rasterization of every polygon.
LabelMap rasterize(const ShapeMap& shapes);

/// GeoJSON FeatureCollection, coordinates as [col, row].
std::string to_geojson(const ShapeMap& shapes);
void write_geojson(const ShapeMap& shapes, const std::filesystem::path& path);

}  // namespace agriseg
