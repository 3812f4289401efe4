#include <chrono>
#include <map>
#include <set>

#include "agriseg/error.hpp"
#include "agriseg/harness.hpp"
#include "agriseg/label_map.hpp"
#include "agriseg/maskset_io.hpp"
#include "agriseg/raster_io.hpp"

namespace fs = std::filesystem;

namespace agriseg {
namespace {

struct ParentTile {
    std::string id;
    RgbSnapshot snapshot;
    LabelMap truth;
};

std::map<std::string, fs::path> discover(const fs::path& dir, bool stacks) {
    std::map<std::string, fs::path> found;
    if (!fs::is_directory(dir)) return found;
    for (const auto& e : fs::directory_iterator(dir)) {
        const fs::path& p = e.path();
        if (stacks && (e.is_directory() || p.extension() == ".msst")) {
            found[e.is_directory() ? p.filename().string() : p.stem().string()] = p;
        } else if (!stacks && e.is_regular_file() && p.extension() == ".png") {
            found[p.stem().string()] = p;
        }
    }
    return found;
}

RgbSnapshot snapshot_from_stack(const fs::path& path, const ExperimentConfig& cfg) {
    const MultispectralStack stack = read_msst(path);
    const NdviSeries ndvi =
        compute_ndvi(stack, stack.band_index(cfg.nir_band), stack.band_index(cfg.red_band));
    const std::size_t t = select_max_ndvi_timestep(ndvi);
    const BandTriplet bands{stack.band_index(cfg.rgb_bands[0]), stack.band_index(cfg.rgb_bands[1]),
                            stack.band_index(cfg.rgb_bands[2])};
    return extract_rgb_snapshot(stack, t, bands, cfg.stretch);
}

void quantize(ConsensusScores& s) {
    s.fmi = quantize6(s.fmi);
    s.ari = quantize6(s.ari);
    s.nmi = quantize6(s.nmi);
    s.v_measure = quantize6(s.v_measure);
    s.homogeneity = quantize6(s.homogeneity);
    s.completeness = quantize6(s.completeness);
}

}  // namespace

fs::path maskset_path(const fs::path& data_root, const std::string& sample_id,
                      const PromptConfig& prompt) {
    return data_root / "masks" / sample_id /
           ("pps" + std::to_string(prompt.pps) + "_mmra" + std::to_string(prompt.mmra) + ".json");
}

ConsensusReport run_experiment(const ExperimentConfig& config, const fs::path& data_root) {
    config.validate();
    if (!fs::is_directory(data_root)) throw DataError("data root not found: " + data_root.string());

    ScreenPolicy screen = config.screen;
    if (config.exclusion_list) {
        const fs::path list = config.exclusion_list->is_absolute()
                                  ? *config.exclusion_list
                                  : data_root / *config.exclusion_list;
        const auto ids = read_exclusion_list(list);
        screen.excluded_tiles.insert(ids.begin(), ids.end());
    }

    const auto stacks = discover(data_root / "stacks", true);
    const auto pngs = discover(data_root / "snapshots", false);
    std::set<std::string> ids;
    for (const auto& kv : stacks) ids.insert(kv.first);
    for (const auto& kv : pngs) ids.insert(kv.first);
    if (ids.empty()) throw DataError("no stacks/ or snapshots/ tiles under " + data_root.string());

    ConsensusReport report;
    std::vector<ParentTile> parents;
    for (const auto& id : ids) {
        ParentTile tile;
        tile.id = id;
        try {
            tile.snapshot = stacks.count(id) ? snapshot_from_stack(stacks.at(id), config)
                                             : read_png(pngs.at(id));
        } catch (const UnusableTileError& e) {
            report.screened.push_back({id, e.what(), 0.0});
            continue;
        }
        tile.snapshot.tile_id = id;
        const ScreenResult sr = screen_clouds(tile.snapshot, screen);
        if (!sr.usable) {
            report.screened.push_back(
                {id, sr.excluded ? "exclusion list" : "cloud cover", sr.score});
            continue;
        }
        const fs::path truth_path = data_root / "truth" / (id + ".lmap");
        try {
            tile.truth = read_label_map(truth_path);
        } catch (const DataError& e) {
            throw DataError("ground truth " + truth_path.string() + ": " + e.what());
        }
        if (tile.truth.height != tile.snapshot.height || tile.truth.width != tile.snapshot.width)
            throw DataError("ground truth " + truth_path.string() +
                            ": dimensions differ from the tile image");
        parents.push_back(std::move(tile));
    }

    for (std::size_t factor : config.aoi_factors) {
        struct Candidate {
            std::size_t parent;
            TileSpec tile;
        };
        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < parents.size(); ++i) {
            const auto& snap = parents[i].snapshot;
            const std::size_t side = std::min(snap.height, snap.width) / factor;
            if (side == 0) continue;
            for (auto& t : tile_image(snap.height, snap.width, factor,
                                      config.stride.stride_for(side), parents[i].id))
                candidates.push_back({i, std::move(t)});
        }
        const std::size_t n = std::min(config.samples_per_set, candidates.size());
        for (std::size_t pick : sample_indices(candidates.size(), n, config.seed + factor)) {
            const Candidate& cand = candidates[pick];
            const ParentTile& parent = parents[cand.parent];
            const RgbSnapshot image = crop(parent.snapshot, cand.tile);
            const LabelMap truth = crop(parent.truth, cand.tile);
            const std::string sample_id = cand.tile.id();

            for (double pps_percent : config.pps_percents) {
                // the oracle's masks depend on pps only
                std::optional<MaskSet> oracle_masks;
                for (double mmra_percent : config.mmra_percents) {
                    const auto start = std::chrono::steady_clock::now();
                    SampleResult row;
                    row.sample_id = sample_id;
                    row.tile = cand.tile;
                    row.aoi_factor = factor;
                    row.prompt = PromptConfig::resolve(cand.tile.side, pps_percent, mmra_percent);

                    std::optional<MaskSet> masks;
                    if (config.segmenter == SegmenterKind::color_oracle) {
                        if (!oracle_masks)
                            oracle_masks = color_oracle_segmenter(image, row.prompt, config.oracle_tolerance);
                        masks = *oracle_masks;
                        masks->generator = row.prompt;
                    } else {
                        const fs::path p = maskset_path(data_root, sample_id, row.prompt);
                        try {
                            if (!fs::exists(p)) throw DataError("missing maskset " + p.string());
                            masks = read_maskset(p);
                            if (masks->height != image.height || masks->width != image.width)
                                throw DataError(p.string() + ": maskset dimensions differ from the sub-tile");
                        } catch (const DataError& e) {
                            if (config.strict) throw;
                            row.ok = false;
                            row.reason = e.what();
                        }
                    }

                    if (masks) {
                        for (auto& m : masks->masks) m = filter_mmra(m, row.prompt.mmra);
                        const LabelMap pred = consolidate(*masks);
                        row.mask_count = masks->masks.size();
                        std::size_t unassigned = 0;
                        for (auto v : pred.labels) unassigned += v == 0;
                        row.unassigned_fraction =
                            quantize6(static_cast<double>(unassigned) / static_cast<double>(pred.size()));
                        try {
                            row.scores = consensus_scores(contingency(truth, pred, config.exclude_background));
                            quantize(row.scores);
                        } catch (const DataError& e) {
                            if (config.strict) throw;
                            row.ok = false;
                            row.reason = e.what();
                        }
                    }
                    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    report.rows.push_back(std::move(row));
                }
            }
        }
    }

    report.aggregates = aggregate(report.rows, config);
    for (const auto& cell : report.aggregates) {
        CellTails ct{cell.aoi_factor, cell.pps_percent, cell.mmra_percent, {}};
        std::vector<SampleResult> in_cell;
        for (const auto& r : report.rows)
            if (r.aoi_factor == cell.aoi_factor && r.prompt.pps_percent == cell.pps_percent &&
                r.prompt.mmra_percent == cell.mmra_percent)
                in_cell.push_back(r);
        const std::size_t ok = cell.rows - cell.failed;
        for (std::size_t m = 0; m < kAllMetrics.size(); ++m)
            ct.per_metric[m] = extract_tails(in_cell, kAllMetrics[m], std::min(config.tails_k, ok));
        report.tails.push_back(std::move(ct));
    }
    return report;
}

}  // namespace agriseg
