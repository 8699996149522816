#pragma once

// Binary-relevance ranking metrics at a cutoff, and macro averaging over
// manuscripts. nDCG uses gain 1 per relevant item and discount 1/log2(i + 1)
// for 1-based rank i.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace revset {

inline constexpr std::size_t kDefaultMetricCutoff = 10;
inline constexpr const char* kNdcgVariant = "binary gain, discount 1/log2(rank+1), ideal = min(|relevant|,k) hits";

/// Relevant items in the first k, divided by k.
inline double precision_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                             std::size_t k = kDefaultMetricCutoff) {
    if (k == 0) return 0.0;
    const auto n = std::min(k, ranked.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += relevant.contains(ranked[i]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(k);
}

/// Undefined (nullopt) when there are no relevant items.
inline std::optional<double> average_precision_at_k(std::span<const std::string> ranked,
                                                    const std::set<std::string>& relevant,
                                                    std::size_t k = kDefaultMetricCutoff) {
    if (relevant.empty()) return std::nullopt;
    const auto n = std::min(k, ranked.size());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.contains(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

/// Undefined (nullopt) when there are no relevant items.
inline std::optional<double> ndcg_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                                       std::size_t k = kDefaultMetricCutoff) {
    if (relevant.empty()) return std::nullopt;
    auto discount = [](std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); };
    const auto n = std::min(k, ranked.size());
    double dcg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.contains(ranked[i])) dcg += discount(i + 1);
    }
    double ideal = 0.0;
    for (std::size_t i = 0; i < std::min(k, relevant.size()); ++i) ideal += discount(i + 1);
    return ideal > 0.0 ? dcg / ideal : 0.0;
}

struct ManuscriptMetrics {
    std::string manuscript_id;
    double p_at_k = 0.0;
    double map_at_k = 0.0;
    double ndcg_at_k = 0.0;
};

struct MetricReport {
    std::size_t cutoff = kDefaultMetricCutoff;
    std::vector<ManuscriptMetrics> per_manuscript;  // sorted by manuscript id
    ManuscriptMetrics macro{"MACRO"};
    std::vector<std::string> skipped;  // "id: reason"
};

/// Evaluates rankings (manuscript id -> ranked reviewer ids) against ground
/// truth. Manuscripts without judgments or with an empty relevant set are
/// skipped and excluded from the macro average.
inline MetricReport evaluate_rankings(const std::map<std::string, std::vector<std::string>>& rankings,
                                      const std::map<std::string, std::set<std::string>>& relevant,
                                      std::size_t k = kDefaultMetricCutoff) {
    MetricReport report;
    report.cutoff = k;
    for (const auto& [mid, ranked] : rankings) {
        auto it = relevant.find(mid);
        if (it == relevant.end()) {
            report.skipped.push_back(mid + ": no relevance judgments");
            continue;
        }
        if (it->second.empty()) {
            report.skipped.push_back(mid + ": empty relevant set");
            continue;
        }
        ManuscriptMetrics row{mid, precision_at_k(ranked, it->second, k), *average_precision_at_k(ranked, it->second, k),
                              *ndcg_at_k(ranked, it->second, k)};
        report.per_manuscript.push_back(row);
    }
    if (!report.per_manuscript.empty()) {
        const auto n = static_cast<double>(report.per_manuscript.size());
        for (const auto& row : report.per_manuscript) {
            report.macro.p_at_k += row.p_at_k;
            report.macro.map_at_k += row.map_at_k;
            report.macro.ndcg_at_k += row.ndcg_at_k;
        }
        report.macro.p_at_k /= n;
        report.macro.map_at_k /= n;
        report.macro.ndcg_at_k /= n;
    }
    return report;
}

}  // namespace revset
