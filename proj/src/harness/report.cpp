#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "agriseg/error.hpp"
#include "agriseg/harness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace agriseg {
namespace {

std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s(buf);
    if (s == "-0.000000" || s == "-0.0000000000") s.erase(0, 1);
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

std::string join_flags(const std::set<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) out += (out.empty() ? "" : "|") + f;
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw DataError("failed writing " + path.string());
}

constexpr const char* kSampleHeader =
    "sample_id,parent_tile,aoi_factor,side,origin_row,origin_col,pps_percent,mmra_percent,pps,"
    "mmra,status,mask_count,unassigned_fraction,fmi,ari,nmi,v_measure,homogeneity,completeness,"
    "degenerate_flags,reason";

nlohmann::ordered_json tails_json(const ConsensusReport& report) {
    using ojson = nlohmann::ordered_json;
    ojson cells = ojson::array();
    for (const auto& ct : report.tails) {
        ojson per = ojson::object();
        for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
            auto entries = [](const std::vector<TailEntry>& v) {
                ojson arr = ojson::array();
                for (const auto& e : v) arr.push_back(ojson{{"sample_id", e.sample_id}, {"value", e.value}});
                return arr;
            };
            per[std::string(metric_name(kAllMetrics[m]))] =
                ojson{{"top", entries(ct.per_metric[m].top)}, {"bottom", entries(ct.per_metric[m].bottom)}};
        }
        cells.push_back(ojson{{"aoi_factor", ct.aoi_factor},
                              {"pps_percent", ct.pps_percent},
                              {"mmra_percent", ct.mmra_percent},
                              {"tails", std::move(per)}});
    }
    return cells;
}

}  // namespace

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::fmi: return "fmi";
        case Metric::ari: return "ari";
        case Metric::nmi: return "nmi";
        case Metric::v_measure: return "v_measure";
        case Metric::homogeneity: return "homogeneity";
        case Metric::completeness: return "completeness";
    }
    return "?";
}

Metric parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics)
        if (metric_name(m) == name) return m;
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

double metric_value(const ConsensusScores& s, Metric m) {
    switch (m) {
        case Metric::fmi: return s.fmi;
        case Metric::ari: return s.ari;
        case Metric::nmi: return s.nmi;
        case Metric::v_measure: return s.v_measure;
        case Metric::homogeneity: return s.homogeneity;
        case Metric::completeness: return s.completeness;
    }
    return 0.0;
}

double quantize6(double x) { return std::strtod(fixed(x, 6).c_str(), nullptr); }

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

MetricStats metric_stats(std::vector<double> values) {
    MetricStats st;
    if (values.empty()) return st;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / n;
    double sq = 0.0;
    for (double v : values) sq += (v - st.mean) * (v - st.mean);
    st.std = std::sqrt(sq / n);
    std::sort(values.begin(), values.end());
    for (std::size_t q = 0; q < kQuantileLevels.size(); ++q)
        st.quantiles[q] = quantile_sorted(values, kQuantileLevels[q]);
    return st;
}

std::vector<CellAggregate> aggregate(std::span<const SampleResult> rows,
                                     const ExperimentConfig& config) {
    std::vector<CellAggregate> cells;
    for (std::size_t factor : config.aoi_factors) {
        for (double pps : config.pps_percents) {
            for (double mmra : config.mmra_percents) {
                CellAggregate cell;
                cell.aoi_factor = factor;
                cell.pps_percent = pps;
                cell.mmra_percent = mmra;
                std::array<std::vector<double>, 6> values;
                for (const auto& r : rows) {
                    if (r.aoi_factor != factor || r.prompt.pps_percent != pps ||
                        r.prompt.mmra_percent != mmra)
                        continue;
                    if (cell.rows++ == 0) cell.side = r.tile.side;
                    if (!r.ok) {
                        ++cell.failed;
                        continue;
                    }
                    for (std::size_t m = 0; m < kAllMetrics.size(); ++m)
                        values[m].push_back(metric_value(r.scores, kAllMetrics[m]));
                }
                for (std::size_t m = 0; m < kAllMetrics.size(); ++m)
                    cell.stats[m] = metric_stats(std::move(values[m]));
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

Tails extract_tails(std::span<const SampleResult> rows, Metric metric, std::size_t k) {
    std::vector<TailEntry> ok;
    for (const auto& r : rows)
        if (r.ok) ok.push_back({r.sample_id, metric_value(r.scores, metric)});
    if (k > ok.size())
        throw ConfigError("tails: k = " + std::to_string(k) + " exceeds " +
                          std::to_string(ok.size()) + " scored rows");
    Tails t;
    auto desc = [](const TailEntry& a, const TailEntry& b) {
        return a.value != b.value ? a.value > b.value : a.sample_id < b.sample_id;
    };
    auto asc = [](const TailEntry& a, const TailEntry& b) {
        return a.value != b.value ? a.value < b.value : a.sample_id < b.sample_id;
    };
    std::vector<TailEntry> sorted = ok;
    std::stable_sort(sorted.begin(), sorted.end(), desc);
    t.top.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
    std::stable_sort(ok.begin(), ok.end(), asc);
    t.bottom.assign(ok.begin(), ok.begin() + static_cast<std::ptrdiff_t>(k));
    return t;
}

void emit_report(const ConsensusReport& report, const fs::path& out_dir, ReportFormat format,
                 bool emit_timing) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    if (format == ReportFormat::json) {
        using ojson = nlohmann::ordered_json;
        ojson doc;
        ojson rows = ojson::array();
        for (const auto& r : report.rows) {
            ojson row{{"sample_id", r.sample_id},
                      {"parent_tile", r.tile.parent_tile_id},
                      {"aoi_factor", r.aoi_factor},
                      {"side", r.tile.side},
                      {"origin_row", r.tile.origin_row},
                      {"origin_col", r.tile.origin_col},
                      {"pps_percent", r.prompt.pps_percent},
                      {"mmra_percent", r.prompt.mmra_percent},
                      {"pps", r.prompt.pps},
                      {"mmra", r.prompt.mmra},
                      {"status", r.ok ? "ok" : "failed"}};
            if (r.ok) {
                row["mask_count"] = r.mask_count;
                row["unassigned_fraction"] = r.unassigned_fraction;
                for (Metric m : kAllMetrics) row[std::string(metric_name(m))] = metric_value(r.scores, m);
                row["degenerate_flags"] = r.scores.degenerate_flags;
            } else {
                row["reason"] = r.reason;
            }
            rows.push_back(std::move(row));
        }
        doc["samples"] = std::move(rows);
        ojson aggs = ojson::array();
        for (const auto& c : report.aggregates) {
            ojson per = ojson::object();
            for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
                const auto& st = c.stats[m];
                per[std::string(metric_name(kAllMetrics[m]))] =
                    ojson{{"mean", st.mean}, {"std", st.std}, {"quantiles", st.quantiles}};
            }
            aggs.push_back(ojson{{"aoi_factor", c.aoi_factor},
                                 {"side", c.side},
                                 {"pps_percent", c.pps_percent},
                                 {"mmra_percent", c.mmra_percent},
                                 {"rows", c.rows},
                                 {"failed", c.failed},
                                 {"quantile_levels", kQuantileLevels},
                                 {"metrics", std::move(per)}});
        }
        doc["aggregates"] = std::move(aggs);
        doc["tails"] = tails_json(report);
        ojson screened = ojson::array();
        for (const auto& s : report.screened)
            screened.push_back(ojson{{"tile_id", s.tile_id}, {"reason", s.reason}, {"cloud_score", s.cloud_score}});
        doc["screened"] = std::move(screened);
        const fs::path p = out_dir / "report.json";
        auto out = open_out(p);
        out << doc.dump(1) << "\n";
        check_written(out, p);
    } else {
        {
            const fs::path p = out_dir / "samples.csv";
            auto out = open_out(p);
            out << kSampleHeader << "\n";
            for (const auto& r : report.rows) {
                out << csv_field(r.sample_id) << ',' << csv_field(r.tile.parent_tile_id) << ','
                    << r.aoi_factor << ',' << r.tile.side << ',' << r.tile.origin_row << ','
                    << r.tile.origin_col << ',' << fixed(r.prompt.pps_percent, 6) << ','
                    << fixed(r.prompt.mmra_percent, 6) << ',' << r.prompt.pps << ','
                    << r.prompt.mmra << ',' << (r.ok ? "ok" : "failed") << ',';
                if (r.ok) {
                    out << r.mask_count << ',' << fixed(r.unassigned_fraction, 6);
                    for (Metric m : kAllMetrics) out << ',' << fixed(metric_value(r.scores, m), 6);
                    out << ',' << csv_field(join_flags(r.scores.degenerate_flags)) << ',';
                } else {
                    out << ",,,,,,,,," << csv_field(r.reason);
                }
                out << "\n";
            }
            check_written(out, p);
        }
        {
            const fs::path p = out_dir / "samples_long.csv";
            auto out = open_out(p);
            out << "sample_id,aoi_factor,pps_percent,mmra_percent,metric,value\n";
            for (const auto& r : report.rows) {
                if (!r.ok) continue;
                for (Metric m : kAllMetrics)
                    out << csv_field(r.sample_id) << ',' << r.aoi_factor << ','
                        << fixed(r.prompt.pps_percent, 6) << ',' << fixed(r.prompt.mmra_percent, 6)
                        << ',' << metric_name(m) << ',' << fixed(metric_value(r.scores, m), 6) << "\n";
            }
            check_written(out, p);
        }
        {
            const fs::path p = out_dir / "aggregates.csv";
            auto out = open_out(p);
            out << "aoi_factor,side,pps_percent,mmra_percent,metric,rows,failed,mean,std,q01,q05,"
                   "q25,q50,q75,q95,q99\n";
            for (const auto& c : report.aggregates) {
                for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
                    const auto& st = c.stats[m];
                    out << c.aoi_factor << ',' << c.side << ',' << fixed(c.pps_percent, 6) << ','
                        << fixed(c.mmra_percent, 6) << ',' << metric_name(kAllMetrics[m]) << ','
                        << c.rows << ',' << c.failed << ',' << fixed(st.mean, 10) << ','
                        << fixed(st.std, 10);
                    for (double q : st.quantiles) out << ',' << fixed(q, 10);
                    out << "\n";
                }
            }
            check_written(out, p);
        }
        {
            const fs::path p = out_dir / "tails.json";
            auto out = open_out(p);
            out << tails_json(report).dump(1) << "\n";
            check_written(out, p);
        }
        {
            const fs::path p = out_dir / "screened.csv";
            auto out = open_out(p);
            out << "tile_id,reason,cloud_score\n";
            for (const auto& s : report.screened)
                out << csv_field(s.tile_id) << ',' << csv_field(s.reason) << ','
                    << fixed(s.cloud_score, 6) << "\n";
            check_written(out, p);
        }
    }
    if (emit_timing) {
        const fs::path p = out_dir / "timing.csv";
        auto out = open_out(p);
        out << "sample_id,pps,mmra,seconds\n";
        for (const auto& r : report.rows)
            out << csv_field(r.sample_id) << ',' << r.prompt.pps << ',' << r.prompt.mmra << ','
                << fixed(r.seconds, 6) << "\n";
        check_written(out, p);
    }
}

std::vector<SampleResult> read_samples_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kSampleHeader)
        throw FormatError(path.string() + ": unexpected sample CSV header");
    std::vector<SampleResult> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 21)
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected 21 fields");
        try {
            SampleResult r;
            r.sample_id = f[0];
            r.tile.parent_tile_id = f[1];
            r.aoi_factor = std::stoull(f[2]);
            r.tile.side = r.tile.aoi_side = std::stoull(f[3]);
            r.tile.origin_row = std::stoull(f[4]);
            r.tile.origin_col = std::stoull(f[5]);
            r.prompt.pps_percent = std::stod(f[6]);
            r.prompt.mmra_percent = std::stod(f[7]);
            r.prompt.pps = static_cast<std::uint32_t>(std::stoul(f[8]));
            r.prompt.mmra = std::stoull(f[9]);
            r.ok = f[10] == "ok";
            if (r.ok) {
                r.mask_count = std::stoull(f[11]);
                r.unassigned_fraction = std::stod(f[12]);
                r.scores.fmi = std::stod(f[13]);
                r.scores.ari = std::stod(f[14]);
                r.scores.nmi = std::stod(f[15]);
                r.scores.v_measure = std::stod(f[16]);
                r.scores.homogeneity = std::stod(f[17]);
                r.scores.completeness = std::stod(f[18]);
                std::stringstream ss(f[19]);
                std::string flag;
                while (std::getline(ss, flag, '|'))
                    if (!flag.empty()) r.scores.degenerate_flags.insert(flag);
            } else {
                r.reason = f[20];
            }
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return rows;
}

}  // namespace agriseg
