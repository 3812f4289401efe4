#include <algorithm>
#include <cmath>
#include <vector>

#include "agriseg/metrics.hpp"

namespace agriseg {
namespace {

using i128 = __int128;

template <typename Map>
std::vector<std::uint64_t> sorted_counts(const Map& m) {
    std::vector<std::uint64_t> v;
    v.reserve(m.size());
    for (const auto& kv : m) v.push_back(kv.second);
    std::sort(v.begin(), v.end());
    return v;
}

// Summing over the sorted multiset makes the result independent of label
// values and of hash-map iteration order.
double entropy(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
    const double total = static_cast<double>(n);
    double h = 0.0;
    for (std::uint64_t c : counts) {
        const double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    return std::max(h, 0.0);
}

template <typename Map>
std::uint64_t pair_sum(const Map& m) {
    std::uint64_t s = 0;
    for (const auto& kv : m) s += kv.second * (kv.second - 1) / 2;
    return s;
}

void flag(Flags* flags, const char* what) {
    if (flags) flags->insert(what);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double arithmetic_nmi(const EntropyTerms& e, Flags* flags) {
    if (e.h_gt == 0.0 && e.h_pred == 0.0) {
        flag(flags, "nmi:both_single_cluster");
        return 1.0;
    }
    if (e.h_gt == 0.0 || e.h_pred == 0.0) {
        flag(flags, "nmi:one_single_cluster");
        return 0.0;
    }
    return clamp01(2.0 * e.mutual_info / (e.h_gt + e.h_pred));
}

}  // namespace

double fmi(const ContingencyTable& t, Flags* flags) {
    const std::uint64_t tp = pair_sum(t.cells());
    const std::uint64_t p_gt = pair_sum(t.row_sums());
    const std::uint64_t p_pred = pair_sum(t.col_sums());
    if (p_gt == 0 || p_pred == 0) {
        flag(flags, "fmi:no_same_cluster_pairs");
        return 0.0;
    }
    return clamp01(static_cast<double>(tp) /
                   std::sqrt(static_cast<double>(p_gt) * static_cast<double>(p_pred)));
}

double ari(const ContingencyTable& t, Flags* flags) {
    const i128 n = t.total();
    const i128 pairs = n * (n - 1) / 2;
    const i128 tp = pair_sum(t.cells());
    const i128 a = pair_sum(t.row_sums());
    const i128 b = pair_sum(t.col_sums());
    // (TP - E) / (M - E) with E = a*b/pairs and M = (a+b)/2, scaled by 2*pairs
    const i128 num = 2 * (tp * pairs - a * b);
    const i128 den = (a + b) * pairs - 2 * a * b;
    if (den == 0) {
        flag(flags, "ari:undefined");
        return t.is_bijective() ? 1.0 : 0.0;
    }
    return std::clamp(static_cast<double>(num) / static_cast<double>(den), -1.0, 1.0);
}

EntropyTerms entropy_terms(const ContingencyTable& t) {
    EntropyTerms e;
    const std::uint64_t n = t.total();
    if (n == 0) return e;
    e.h_gt = entropy(sorted_counts(t.row_sums()), n);
    e.h_pred = entropy(sorted_counts(t.col_sums()), n);
    e.h_joint = entropy(sorted_counts(t.cells()), n);
    e.h_gt_given_pred = std::max(e.h_joint - e.h_pred, 0.0);
    e.h_pred_given_gt = std::max(e.h_joint - e.h_gt, 0.0);
    // symmetric in (gt, pred) so swapping the labelings is bitwise neutral
    e.mutual_info = std::max((e.h_gt + e.h_pred) - e.h_joint, 0.0);
    return e;
}

VMeasure v_measure(const ContingencyTable& t, Flags* flags) {
    const EntropyTerms e = entropy_terms(t);
    VMeasure v;
    if (e.h_gt == 0.0) {
        flag(flags, "homogeneity:gt_single_cluster");
        v.homogeneity = 1.0;
    } else {
        v.homogeneity = clamp01(1.0 - e.h_gt_given_pred / e.h_gt);
    }
    if (e.h_pred == 0.0) {
        flag(flags, "completeness:pred_single_cluster");
        v.completeness = 1.0;
    } else {
        v.completeness = clamp01(1.0 - e.h_pred_given_gt / e.h_pred);
    }
    // 2hc/(h+c) reduces to 2I/(H(U)+H(V)); evaluating that form makes V equal
    // to the arithmetic NMI exactly. Degenerate sides give 1 (both single
    // cluster) or 0 (one side single cluster), matching 2hc/(h+c).
    v.v = arithmetic_nmi(e, nullptr);
    if ((e.h_gt == 0.0) != (e.h_pred == 0.0)) flag(flags, "v_measure:zero");
    return v;
}

double nmi(const ContingencyTable& t, Flags* flags) {
    return arithmetic_nmi(entropy_terms(t), flags);
}

ConsensusScores consensus_scores(const ContingencyTable& t) {
    ConsensusScores s;
    Flags* f = &s.degenerate_flags;
    s.fmi = fmi(t, f);
    s.ari = ari(t, f);
    const VMeasure v = v_measure(t, f);
    s.homogeneity = v.homogeneity;
    s.completeness = v.completeness;
    s.v_measure = v.v;
    s.nmi = nmi(t, f);
    return s;
}

}  // namespace agriseg
