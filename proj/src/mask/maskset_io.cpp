#include "agriseg/maskset_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace agriseg {
namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(where + ": missing field '" + key + "'");
    return *it;
}

std::uint64_t unsigned_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_unsigned())
        throw FormatError(where + ": '" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

double number_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) throw FormatError(where + ": '" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError(where + ": '" + key + "' must be finite");
    return d;
}

}  // namespace

MaskSet parse_maskset(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("maskset is not valid JSON: ") + e.what());
    }
    const std::string top = "maskset";
    if (!doc.is_object()) throw FormatError("maskset: top level must be an object");
    if (unsigned_field(doc, "version", top) != 1) throw FormatError("maskset: unsupported version");

    MaskSet set;
    const json& id = field(doc, "image_id", top);
    if (!id.is_string()) throw FormatError("maskset: 'image_id' must be a string");
    set.image_id = id.get<std::string>();
    set.height = unsigned_field(doc, "height", top);
    set.width = unsigned_field(doc, "width", top);

    const json& gen = field(doc, "generator", top);
    if (!gen.is_object()) throw FormatError("maskset: 'generator' must be an object");
    const std::string gwhere = "maskset generator";
    const auto pps = unsigned_field(gen, "pps", gwhere);
    if (pps < 1 || pps > std::numeric_limits<std::uint32_t>::max())
        throw FormatError("maskset generator: 'pps' must be >= 1");
    set.generator.pps = static_cast<std::uint32_t>(pps);
    set.generator.mmra = unsigned_field(gen, "mmra", gwhere);
    set.generator.pps_percent = number_field(gen, "pps_percent", gwhere);
    set.generator.mmra_percent = number_field(gen, "mmra_percent", gwhere);

    const json& masks = field(doc, "masks", top);
    if (!masks.is_array()) throw FormatError("maskset: 'masks' must be an array");
    const std::uint64_t expected = static_cast<std::uint64_t>(set.height) * set.width;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const std::string where = "mask " + std::to_string(i);
        const json& m = masks[i];
        if (!m.is_object()) throw FormatError(where + ": must be an object");
        BooleanMask mask;
        mask.height = set.height;
        mask.width = set.width;
        mask.predicted_iou = number_field(m, "predicted_iou", where);
        mask.area = unsigned_field(m, "area", where);
        const json& rle = field(m, "rle", where);
        if (!rle.is_array() || rle.empty()) throw FormatError(where + ": 'rle' must be a non-empty array");
        std::uint64_t total = 0;
        mask.rle.reserve(rle.size());
        for (const json& run : rle) {
            if (!run.is_number_unsigned())
                throw FormatError(where + ": RLE runs must be non-negative integers");
            const auto v = run.get<std::uint64_t>();
            if (v > std::numeric_limits<std::uint32_t>::max())
                throw FormatError(where + ": RLE run too large");
            total += v;
            mask.rle.push_back(static_cast<std::uint32_t>(v));
        }
        if (total != expected)
            throw FormatError(where + ": RLE runs sum to " + std::to_string(total) +
                              ", expected height*width = " + std::to_string(expected));
        if (rle_area(mask.rle) != mask.area)
            throw FormatError(where + ": area " + std::to_string(mask.area) +
                              " does not match RLE foreground count " +
                              std::to_string(rle_area(mask.rle)));
        set.masks.push_back(std::move(mask));
    }
    return set;
}

MaskSet read_maskset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open maskset " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_maskset(ss.str());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string write_maskset(const MaskSet& set) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["version"] = 1;
    doc["image_id"] = set.image_id;
    doc["height"] = set.height;
    doc["width"] = set.width;
    doc["generator"] = ojson{{"pps", set.generator.pps},
                             {"mmra", set.generator.mmra},
                             {"pps_percent", set.generator.pps_percent},
                             {"mmra_percent", set.generator.mmra_percent}};
    ojson masks = ojson::array();
    for (const auto& m : set.masks) {
        masks.push_back(ojson{{"predicted_iou", m.predicted_iou},
                              {"area", m.area},
                              {"rle", canonical_rle(m.rle)}});
    }
    doc["masks"] = std::move(masks);
    return doc.dump() + "\n";
}

void write_maskset(const MaskSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << write_maskset(set);
    if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace agriseg
