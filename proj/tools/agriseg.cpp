// agriseg command line. Exit codes: 0 ok, 2 configuration error, 3 data error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "agriseg/error.hpp"
#include "agriseg/harness.hpp"
#include "agriseg/label_map.hpp"
#include "agriseg/maskset_io.hpp"
#include "agriseg/metrics.hpp"
#include "agriseg/raster_io.hpp"
#include "agriseg/vectorize.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace agriseg;
using ojson = nlohmann::ordered_json;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    bool strict = false;
};

ExperimentConfig effective_config(const Globals& g) {
    ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : load_experiment_config(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.strict) cfg.strict = true;
    cfg.validate();
    return cfg;
}

fs::path out_path(const Globals& g, const std::string& name) {
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    if (ec) throw DataError("cannot create " + g.out_dir + ": " + ec.message());
    return fs::path(g.out_dir) / name;
}

BandTriplet rgb_indices(const MultispectralStack& stack, const ExperimentConfig& cfg) {
    return {stack.band_index(cfg.rgb_bands[0]), stack.band_index(cfg.rgb_bands[1]),
            stack.band_index(cfg.rgb_bands[2])};
}

ScreenPolicy screen_policy(const ExperimentConfig& cfg) {
    ScreenPolicy p = cfg.screen;
    if (cfg.exclusion_list) {
        auto ids = read_exclusion_list(*cfg.exclusion_list);
        p.excluded_tiles.insert(ids.begin(), ids.end());
    }
    return p;
}

ojson scores_json(const ConsensusScores& s) {
    ojson j;
    for (Metric m : kAllMetrics) j[std::string(metric_name(m))] = metric_value(s, m);
    j["degenerate_flags"] = s.degenerate_flags;
    return j;
}

int cmd_ingest(const Globals& g, const std::string& stack_path) {
    const auto cfg = effective_config(g);
    const auto stack = read_msst(stack_path);
    const auto series = compute_ndvi(stack, stack.band_index(cfg.nir_band), stack.band_index(cfg.red_band));
    ojson j{{"tile_id", stack.tile_id()},
            {"timesteps", stack.timesteps()},
            {"height", stack.height()},
            {"width", stack.width()},
            {"bands", stack.band_names()}};
    ojson means = ojson::array();
    for (std::size_t t = 0; t < series.size(); ++t)
        means.push_back(series.is_valid(t) ? ojson(series.means[t]) : ojson(nullptr));
    j["ndvi_means"] = std::move(means);
    try {
        j["max_ndvi_timestep"] = select_max_ndvi_timestep(series);
    } catch (const UnusableTileError&) {
        j["max_ndvi_timestep"] = nullptr;
    }
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_snapshot(const Globals& g, const std::string& stack_path) {
    const auto cfg = effective_config(g);
    const auto stack = read_msst(stack_path);
    const auto series = compute_ndvi(stack, stack.band_index(cfg.nir_band), stack.band_index(cfg.red_band));
    const std::size_t t = select_max_ndvi_timestep(series);
    const auto snap = extract_rgb_snapshot(stack, t, rgb_indices(stack, cfg), cfg.stretch);
    const auto screen = screen_clouds(snap, screen_policy(cfg));
    const auto path = out_path(g, stack.tile_id() + ".png");
    write_png(snap, path);
    std::cout << ojson{{"tile_id", snap.tile_id},
                       {"timestep", t},
                       {"cloud_score", screen.score},
                       {"usable", screen.usable},
                       {"excluded", screen.excluded},
                       {"path", path.string()}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_tile(const Globals& g, std::size_t height, std::size_t width, const std::string& image,
             std::size_t factor) {
    const auto cfg = effective_config(g);
    std::string parent = "tile";
    if (!image.empty()) {
        const auto snap = read_png(image);
        height = snap.height;
        width = snap.width;
        parent = snap.tile_id;
    }
    if (height == 0 || width == 0) throw ConfigError("tile: give --image or --height and --width");
    if (factor == 0) throw ConfigError("tile: factor must be >= 1");
    const std::size_t side = std::min(height, width) / factor;
    const auto tiles = tile_image(height, width, factor, cfg.stride.stride_for(side), parent);
    std::cout << "tile_id,origin_row,origin_col,side\n";
    for (const auto& t : tiles)
        std::cout << t.id() << ',' << t.origin_row << ',' << t.origin_col << ',' << t.side << "\n";
    return 0;
}

int cmd_prompts(std::size_t side, double pps_percent, double mmra_percent) {
    if (side == 0) throw ConfigError("prompts: side must be >= 1");
    const auto p = PromptConfig::resolve(side, pps_percent, mmra_percent);
    std::cout << "# pps=" << p.pps << " mmra=" << p.mmra << "\nrow,col\n";
    for (const auto& pt : prompt_grid(side, p.pps)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", pt.row, pt.col);
        std::cout << buf;
    }
    return 0;
}

int cmd_segment_oracle(const Globals& g, const std::string& image, double pps_percent,
                       double mmra_percent) {
    const auto cfg = effective_config(g);
    const auto snap = read_png(image);
    const std::size_t side = std::min(snap.height, snap.width);
    const auto prompt = PromptConfig::resolve(side, pps_percent, mmra_percent);
    const auto set = color_oracle_segmenter(snap, prompt, cfg.oracle_tolerance);
    const fs::path dir = out_path(g, "masks") / snap.tile_id;
    fs::create_directories(dir);
    const fs::path path = maskset_path(g.out_dir, snap.tile_id, prompt);
    write_maskset(set, path);
    std::cout << path.string() << "\n";
    return 0;
}

int cmd_consolidate(const Globals& g, const std::string& maskset, std::optional<std::uint64_t> mmra) {
    MaskSet set = read_maskset(maskset);
    const std::uint64_t area = mmra.value_or(set.generator.mmra);
    for (auto& m : set.masks) m = filter_mmra(m, area);
    const auto labels = consolidate(set);
    const auto path = out_path(g, (set.image_id.empty() ? fs::path(maskset).stem().string() : set.image_id) + ".lmap");
    write_label_map(labels, path);
    std::cout << path.string() << "\n";
    return 0;
}

int cmd_score(const Globals& g, const std::string& truth, const std::string& pred) {
    const auto cfg = effective_config(g);
    const auto gt = read_label_map(truth);
    const auto pr = read_label_map(pred);
    if (gt.height != pr.height || gt.width != pr.width)
        throw DataError("score: " + truth + " and " + pred + " differ in size");
    const auto table = contingency(gt, pr, cfg.exclude_background);
    ConsensusScores s = consensus_scores(table);
    std::cout << scores_json(s).dump(1) << "\n";
    return 0;
}

int cmd_sweep(const Globals& g, const std::string& root, const std::string& format) {
    const auto cfg = effective_config(g);
    ReportFormat fmt;
    if (format == "csv") fmt = ReportFormat::csv;
    else if (format == "json") fmt = ReportFormat::json;
    else throw ConfigError("sweep: format must be csv or json");
    const auto report = run_experiment(cfg, root);
    emit_report(report, g.out_dir, fmt, cfg.emit_timing);
    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += r.ok ? 0 : 1;
    std::cerr << report.rows.size() << " rows, " << failed << " failed, "
              << report.screened.size() << " tiles screened out\n";
    return 0;
}

int cmd_tails(const Globals& g, const std::string& samples, const std::string& metric,
              std::optional<std::size_t> k) {
    const auto cfg = effective_config(g);
    const Metric m = parse_metric(metric);
    const auto rows = read_samples_csv(samples);
    const auto t = extract_tails(rows, m, k.value_or(cfg.tails_k));
    auto list = [](const std::vector<TailEntry>& v) {
        ojson a = ojson::array();
        for (const auto& e : v) a.push_back(ojson{{"sample_id", e.sample_id}, {"value", e.value}});
        return a;
    };
    std::cout << ojson{{"metric", metric}, {"top", list(t.top)}, {"bottom", list(t.bottom)}}.dump(1) << "\n";
    return 0;
}

int cmd_vectorize(const Globals& g, const std::string& labels, std::uint64_t min_area,
                  double tolerance, const std::vector<double>& transform) {
    const auto map = read_label_map(labels);
    ShapeMap shapes = build_shape_map(map, min_area, tolerance);
    shapes.image_id = fs::path(labels).stem().string();
    if (!transform.empty()) {
        if (transform.size() != 6) throw ConfigError("vectorize: --transform takes 6 numbers");
        AffineTransform t;
        std::copy(transform.begin(), transform.end(), t.begin());
        shapes.transform = t;
    }
    const auto path = out_path(g, shapes.image_id + ".geojson");
    write_geojson(shapes, path);
    std::cout << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Field segmentation consensus toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON experiment config");
    app.add_option("--seed", g.seed, "Sampling seed (overrides config)");
    app.add_option("--out-dir", g.out_dir, "Output directory");
    app.add_flag("--strict", g.strict, "Abort on the first failed sample");

    std::string stack_path, image, maskset, truth, pred, root, format = "csv", samples,
                metric = "fmi", labels;
    std::size_t height = 0, width = 0, factor = 1, side = 0;
    double pps_percent = 0.02, mmra_percent = 0.0, tolerance = 0.0;
    std::optional<std::uint64_t> mmra;
    std::optional<std::size_t> k;
    std::uint64_t min_area = 0;
    std::vector<double> transform;
    std::function<int()> run;

    auto* ingest = app.add_subcommand("ingest", "Summarize a stack and its NDVI series");
    ingest->add_option("stack", stack_path, "MSST file or directory")->required();
    ingest->callback([&] { run = [&] { return cmd_ingest(g, stack_path); }; });

    auto* snapshot = app.add_subcommand("snapshot", "Write the peak-NDVI RGB snapshot as PNG");
    snapshot->add_option("stack", stack_path, "MSST file or directory")->required();
    snapshot->callback([&] { run = [&] { return cmd_snapshot(g, stack_path); }; });

    auto* tile = app.add_subcommand("tile", "List sub-tile windows");
    tile->add_option("--image", image, "PNG snapshot (gives size and parent id)");
    tile->add_option("--height", height);
    tile->add_option("--width", width);
    tile->add_option("--factor", factor, "AOI factor")->capture_default_str();
    tile->callback([&] { run = [&] { return cmd_tile(g, height, width, image, factor); }; });

    auto* prompts = app.add_subcommand("prompts", "Print the prompt grid for a sub-tile side");
    prompts->add_option("--side", side)->required();
    prompts->add_option("--pps-percent", pps_percent)->capture_default_str();
    prompts->add_option("--mmra-percent", mmra_percent)->capture_default_str();
    prompts->callback([&] { run = [&] { return cmd_prompts(side, pps_percent, mmra_percent); }; });

    auto* oracle = app.add_subcommand("segment-oracle", "Color flood-fill masks for a PNG");
    oracle->add_option("image", image, "PNG snapshot")->required();
    oracle->add_option("--pps-percent", pps_percent)->capture_default_str();
    oracle->add_option("--mmra-percent", mmra_percent)->capture_default_str();
    oracle->callback([&] { run = [&] { return cmd_segment_oracle(g, image, pps_percent, mmra_percent); }; });

    auto* cons = app.add_subcommand("consolidate", "MMRA-filter and merge a maskset into a label map");
    cons->add_option("maskset", maskset, "Maskset JSON")->required();
    cons->add_option("--mmra", mmra, "Minimum region area in pixels (default: generator value)");
    cons->callback([&] { run = [&] { return cmd_consolidate(g, maskset, mmra); }; });

    auto* score = app.add_subcommand("score", "Consensus scores of two label maps");
    score->add_option("truth", truth)->required();
    score->add_option("pred", pred)->required();
    score->callback([&] { run = [&] { return cmd_score(g, truth, pred); }; });

    auto* sweep = app.add_subcommand("sweep", "Run the configured experiment over a data root");
    sweep->add_option("data_root", root)->required();
    sweep->add_option("--format", format)->capture_default_str();
    sweep->callback([&] { run = [&] { return cmd_sweep(g, root, format); }; });

    auto* tails = app.add_subcommand("tails", "Top and bottom samples of a metric");
    tails->add_option("samples", samples, "samples.csv from sweep")->required();
    tails->add_option("--metric", metric)->capture_default_str();
    tails->add_option("-k", k, "Entries per side (default: config tails_k)");
    tails->callback([&] { run = [&] { return cmd_tails(g, samples, metric, k); }; });

    auto* vec = app.add_subcommand("vectorize", "Label map to GeoJSON field polygons");
    vec->add_option("labels", labels, "LMAP file")->required();
    vec->add_option("--min-area", min_area)->capture_default_str();
    vec->add_option("--tolerance", tolerance, "Simplification tolerance in pixels")->capture_default_str();
    vec->add_option("--transform", transform, "Six affine coefficients")->expected(6);
    vec->callback([&] { run = [&] { return cmd_vectorize(g, labels, min_area, tolerance, transform); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
