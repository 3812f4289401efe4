#include "agriseg/vectorize.hpp"

namespace agriseg {

Components connected_components(const LabelMap& map) {
    Components out;
    out.height = map.height;
    out.width = map.width;
    out.ids.assign(map.size(), 0);
    const std::size_t w = map.width;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < map.size(); ++start) {
        const std::uint32_t label = map.labels[start];
        if (label == 0 || out.ids[start] != 0) continue;
        const auto id = static_cast<std::uint32_t>(out.info.size() + 1);
        ComponentInfo info{label, 0, start};
        out.ids[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            ++info.area;
            const std::size_t r = p / w;
            const std::size_t c = p % w;
            auto visit = [&](std::size_t q) {
                if (out.ids[q] == 0 && map.labels[q] == label) {
                    out.ids[q] = id;
                    stack.push_back(q);
                }
            };
            if (r > 0) visit(p - w);
            if (r + 1 < map.height) visit(p + w);
            if (c > 0) visit(p - 1);
            if (c + 1 < w) visit(p + 1);
        }
        out.info.push_back(info);
    }
    return out;
}

}  // namespace agriseg
