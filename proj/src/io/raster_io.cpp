#include "agriseg/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <fstream>
#include <limits>

#include "agriseg/label_map.hpp"
#include "binary.hpp"

namespace fs = std::filesystem;

namespace agriseg {
namespace {

constexpr std::uint32_t kMsstVersion = 1;
constexpr std::uint32_t kLmapVersion = 1;

struct MsstFile {
    std::vector<std::string> bands;
    std::uint32_t timesteps = 0, height = 0, width = 0;
    std::vector<float> data;
};

MsstFile read_msst_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stack file " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "MSST")
        throw FormatError(path.string() + ": not an MSST file");
    const std::string ctx = "MSST header in " + path.string();
    if (io::get_u32(in, ctx) != kMsstVersion)
        throw FormatError(path.string() + ": unsupported MSST version");
    MsstFile f;
    f.timesteps = io::get_u32(in, ctx);
    f.height = io::get_u32(in, ctx);
    f.width = io::get_u32(in, ctx);
    const std::uint32_t channels = io::get_u32(in, ctx);
    if (channels > 4096) throw FormatError(path.string() + ": implausible channel count");
    for (std::uint32_t c = 0; c < channels; ++c) {
        const std::uint32_t len = io::get_u32(in, ctx);
        if (len > 1024) throw FormatError(path.string() + ": band name too long");
        std::string name(len, '\0');
        if (!in.read(name.data(), len)) throw FormatError("truncated " + ctx);
        f.bands.push_back(std::move(name));
    }
    const std::uint64_t count =
        std::uint64_t{f.timesteps} * f.height * f.width * channels;
    f.data.resize(count);
    for (auto& v : f.data) v = std::bit_cast<float>(io::get_u32(in, "MSST body in " + path.string()));
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError(path.string() + ": trailing bytes after MSST body");
    return f;
}

}  // namespace

MultispectralStack read_msst(const fs::path& path) {
    if (!fs::is_directory(path)) {
        MsstFile f = read_msst_file(path);
        return MultispectralStack(path.stem().string(), std::move(f.bands), f.timesteps,
                                  f.height, f.width, std::move(f.data));
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
        if (e.is_regular_file() && e.path().extension() == ".msst") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .msst files in " + path.string());
    MsstFile all = read_msst_file(files.front());
    for (std::size_t i = 1; i < files.size(); ++i) {
        MsstFile f = read_msst_file(files[i]);
        if (f.bands != all.bands || f.height != all.height || f.width != all.width)
            throw FormatError(files[i].string() + ": bands or dimensions differ from " +
                              files.front().string());
        all.timesteps += f.timesteps;
        all.data.insert(all.data.end(), f.data.begin(), f.data.end());
    }
    const std::string name = path.filename().empty() ? path.parent_path().filename().string()
                                                     : path.filename().string();
    return MultispectralStack(name, std::move(all.bands), all.timesteps, all.height, all.width,
                              std::move(all.data));
}

void write_msst(const MultispectralStack& stack, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write("MSST", 4);
    io::put_u32(out, kMsstVersion);
    io::put_u32(out, static_cast<std::uint32_t>(stack.timesteps()));
    io::put_u32(out, static_cast<std::uint32_t>(stack.height()));
    io::put_u32(out, static_cast<std::uint32_t>(stack.width()));
    io::put_u32(out, static_cast<std::uint32_t>(stack.channels()));
    for (const auto& name : stack.band_names()) {
        io::put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    for (float v : stack.data()) io::put_f32(out, v);
    if (!out) throw DataError("failed writing " + path.string());
}

std::set<std::string> read_exclusion_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open exclusion list " + path.string());
    std::set<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        ids.insert(line.substr(first, last - first + 1));
    }
    return ids;
}

void write_png(const RgbSnapshot& snapshot, const fs::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(snapshot.width);
    image.height = static_cast<png_uint_32>(snapshot.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, snapshot.pixels.data(), 0, nullptr))
        throw DataError("cannot write PNG " + path.string() + ": " + image.message);
}

RgbSnapshot read_png(const fs::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw DataError("cannot read PNG " + path.string() + ": " + image.message);
    image.format = PNG_FORMAT_RGB;
    RgbSnapshot snap;
    snap.tile_id = path.stem().string();
    snap.height = image.height;
    snap.width = image.width;
    snap.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, snap.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw DataError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    return snap;
}

LabelMap read_label_map(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open label map " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "LMAP")
        throw FormatError(path.string() + ": not an LMAP file");
    const std::string ctx = "LMAP in " + path.string();
    if (io::get_u32(in, ctx) != kLmapVersion)
        throw FormatError(path.string() + ": unsupported LMAP version");
    const std::uint32_t h = io::get_u32(in, ctx);
    const std::uint32_t w = io::get_u32(in, ctx);
    LabelMap map(h, w);
    for (auto& v : map.labels) v = io::get_u32(in, ctx);
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError(path.string() + ": trailing bytes after LMAP body");
    return map;
}

void write_label_map(const LabelMap& map, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write("LMAP", 4);
    io::put_u32(out, kLmapVersion);
    io::put_u32(out, static_cast<std::uint32_t>(map.height));
    io::put_u32(out, static_cast<std::uint32_t>(map.width));
    for (auto v : map.labels) io::put_u32(out, v);
    if (!out) throw DataError("failed writing " + path.string());
}

LabelMap crop(const LabelMap& map, const TileSpec& tile) {
    if (tile.origin_row + tile.side > map.height || tile.origin_col + tile.side > map.width)
        throw ConfigError("tile window " + tile.id() + " exceeds the label map");
    LabelMap out(tile.side, tile.side);
    for (std::size_t r = 0; r < tile.side; ++r)
        for (std::size_t c = 0; c < tile.side; ++c)
            out.at(r, c) = map.at(tile.origin_row + r, tile.origin_col + c);
    out.legend = map.legend;
    return out;
}

}  // namespace agriseg
