#pragma once

// Clustering consensus between a ground-truth and a predicted LabelMap:
// FMI, ARI, NMI, V-measure, homogeneity and completeness, all computed from a
// sparse contingency table.
//
// Entropies are in nats. Degenerate cases (single-cluster sides, no
// same-cluster pairs) resolve to fixed values and are reported in
// ConsensusScores::degenerate_flags.

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "agriseg/label_map.hpp"

namespace agriseg {

class ContingencyTable {
public:
    void add(std::uint32_t gt, std::uint32_t pred, std::uint64_t count = 1);
    /// Cell-wise addition; exact.
    void merge(const ContingencyTable& other);

    std::uint64_t total() const { return n_; }
    std::uint64_t count(std::uint32_t gt, std::uint32_t pred) const;
    std::size_t cell_count() const { return cells_.size(); }

    const std::unordered_map<std::uint64_t, std::uint64_t>& cells() const { return cells_; }
    const std::unordered_map<std::uint32_t, std::uint64_t>& row_sums() const { return rows_; }
    const std::unordered_map<std::uint32_t, std::uint64_t>& col_sums() const { return cols_; }

    /// Table of the swapped pair (pred, gt).
    ContingencyTable transposed() const;

    /// True when both labelings induce the same set partition.
    bool is_bijective() const;

    static std::uint64_t key(std::uint32_t gt, std::uint32_t pred) {
        return (std::uint64_t{gt} << 32) | pred;
    }

private:
    std::unordered_map<std::uint64_t, std::uint64_t> cells_;
    std::unordered_map<std::uint32_t, std::uint64_t> rows_;
    std::unordered_map<std::uint32_t, std::uint64_t> cols_;
    std::uint64_t n_ = 0;
};

/// Throws DataError on length mismatch or when no pixel is counted.
/// With exclude_pred_background, pixels whose predicted label is 0 are
/// dropped from both labelings.
ContingencyTable contingency(std::span<const std::uint32_t> gt,
                             std::span<const std::uint32_t> pred,
                             bool exclude_pred_background = false);
ContingencyTable contingency(const LabelMap& gt, const LabelMap& pred,
                             bool exclude_pred_background = false);

struct EntropyTerms {
    double h_gt = 0.0;              // H(U)
    double h_pred = 0.0;            // H(V)
    double h_joint = 0.0;           // H(U, V)
    double h_gt_given_pred = 0.0;   // H(U|V)
    double h_pred_given_gt = 0.0;   // H(V|U)
    double mutual_info = 0.0;       // I(U; V)
};

struct VMeasure {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v = 0.0;
};

struct ConsensusScores {
    double fmi = 0.0;
    double ari = 0.0;
    double nmi = 0.0;
    double v_measure = 0.0;
    double homogeneity = 0.0;
    double completeness = 0.0;
    std::set<std::string> degenerate_flags;

    friend bool operator==(const ConsensusScores&, const ConsensusScores&) = default;
};

using Flags = std::set<std::string>;

double fmi(const ContingencyTable& t, Flags* flags = nullptr);
double ari(const ContingencyTable& t, Flags* flags = nullptr);
EntropyTerms entropy_terms(const ContingencyTable& t);
VMeasure v_measure(const ContingencyTable& t, Flags* flags = nullptr);
/// Arithmetic-mean normalization: I / ((H(U) + H(V)) / 2).
double nmi(const ContingencyTable& t, Flags* flags = nullptr);

ConsensusScores consensus_scores(const ContingencyTable& t);

/// Reference implementation: FMI and ARI by enumerating all pixel pairs,
/// entropies by direct frequency tallies. Throws ConfigError above the cap.
ConsensusScores brute_force_scores(std::span<const std::uint32_t> gt,
                                   std::span<const std::uint32_t> pred,
                                   std::size_t cap = 2000);

}  // namespace agriseg
