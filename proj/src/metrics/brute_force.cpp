#include <algorithm>
#include <cmath>
#include <map>

#include "agriseg/error.hpp"
#include "agriseg/metrics.hpp"

namespace agriseg {

ConsensusScores brute_force_scores(std::span<const std::uint32_t> gt,
                                   std::span<const std::uint32_t> pred, std::size_t cap) {
    if (gt.size() != pred.size()) throw DataError("brute force: labelings differ in size");
    if (gt.size() > cap)
        throw ConfigError("brute force: " + std::to_string(gt.size()) + " pixels exceeds cap " +
                          std::to_string(cap));
    if (gt.empty()) throw DataError("brute force: no pixels");
    const std::size_t n = gt.size();
    ConsensusScores s;

    // pair classification
    std::uint64_t both = 0, gt_only = 0, pred_only = 0, neither = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same_gt = gt[i] == gt[j];
            const bool same_pred = pred[i] == pred[j];
            if (same_gt && same_pred) ++both;
            else if (same_gt) ++gt_only;
            else if (same_pred) ++pred_only;
            else ++neither;
        }
    }
    const double a = static_cast<double>(both), b = static_cast<double>(gt_only);
    const double c = static_cast<double>(pred_only), d = static_cast<double>(neither);
    if (both + gt_only == 0 || both + pred_only == 0) {
        s.fmi = 0.0;
        s.degenerate_flags.insert("fmi:no_same_cluster_pairs");
    } else {
        s.fmi = a / std::sqrt((a + b) * (a + c));
    }

    std::map<std::uint32_t, std::uint64_t> fu, fv;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> fuv;
    for (std::size_t i = 0; i < n; ++i) {
        ++fu[gt[i]];
        ++fv[pred[i]];
        ++fuv[{gt[i], pred[i]}];
    }
    const double ari_den = (a + b) * (b + d) + (a + c) * (c + d);
    if (ari_den == 0.0) {
        s.degenerate_flags.insert("ari:undefined");
        const bool identical = fuv.size() == fu.size() && fuv.size() == fv.size();
        s.ari = identical ? 1.0 : 0.0;
    } else {
        s.ari = 2.0 * (a * d - b * c) / ari_den;
    }

    const double dn = static_cast<double>(n);
    double hu = 0.0, hv = 0.0, hu_v = 0.0, hv_u = 0.0, mi = 0.0;
    for (const auto& [u, cu] : fu) hu -= (cu / dn) * std::log(cu / dn);
    for (const auto& [v, cv] : fv) hv -= (cv / dn) * std::log(cv / dn);
    for (const auto& [uv, cuv] : fuv) {
        const double p = cuv / dn;
        const double pu = fu[uv.first] / dn;
        const double pv = fv[uv.second] / dn;
        hu_v -= p * std::log(p / pv);
        hv_u -= p * std::log(p / pu);
        mi += p * std::log(p / (pu * pv));
    }
    if (fu.size() == 1) {
        s.homogeneity = 1.0;
        s.degenerate_flags.insert("homogeneity:gt_single_cluster");
    } else {
        s.homogeneity = 1.0 - hu_v / hu;
    }
    if (fv.size() == 1) {
        s.completeness = 1.0;
        s.degenerate_flags.insert("completeness:pred_single_cluster");
    } else {
        s.completeness = 1.0 - hv_u / hv;
    }
    const double hc = s.homogeneity + s.completeness;
    s.v_measure = hc == 0.0 ? 0.0 : 2.0 * s.homogeneity * s.completeness / hc;

    if (fu.size() == 1 && fv.size() == 1) {
        s.nmi = 1.0;
        s.degenerate_flags.insert("nmi:both_single_cluster");
    } else if (fu.size() == 1 || fv.size() == 1) {
        s.nmi = 0.0;
        s.degenerate_flags.insert("nmi:one_single_cluster");
    } else {
        s.nmi = mi / ((hu + hv) / 2.0);
    }
    if ((fu.size() == 1) != (fv.size() == 1))
        s.degenerate_flags.insert("v_measure:zero");
    return s;
}

}  // namespace agriseg
