#ifndef CATGAN_TESTS_BLEU_REFERENCE_HPP
#define CATGAN_TESTS_BLEU_REFERENCE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace catgan_tests {

// Straight-line BLEU-n reimplementation for cross-checking: counts n-grams
// with nested loops and explicit equality comparisons, no shared code with
// the library implementation.
inline double reference_bleu_sentence(const std::vector<int>& cand,
                                      const std::vector<std::vector<int>>& refs, int n) {
    if (cand.empty()) return 0.0;
    double log_sum = 0.0;
    for (int order = 1; order <= n; ++order) {
        const int total = static_cast<int>(cand.size()) - order + 1;
        if (total <= 0) return 0.0;
        int clipped = 0;
        std::vector<bool> counted(static_cast<std::size_t>(total), false);
        for (int i = 0; i < total; ++i) {
            if (counted[static_cast<std::size_t>(i)]) continue;
            // count this gram's occurrences in the candidate
            int cand_count = 0;
            for (int j = 0; j < total; ++j) {
                bool same = true;
                for (int t = 0; t < order; ++t)
                    if (cand[static_cast<std::size_t>(i + t)] != cand[static_cast<std::size_t>(j + t)]) {
                        same = false;
                        break;
                    }
                if (same) {
                    cand_count++;
                    counted[static_cast<std::size_t>(j)] = true;
                }
            }
            // max occurrences in any single reference
            int best_ref = 0;
            for (const auto& ref : refs) {
                int cnt = 0;
                for (int j = 0; j + order <= static_cast<int>(ref.size()); ++j) {
                    bool same = true;
                    for (int t = 0; t < order; ++t)
                        if (cand[static_cast<std::size_t>(i + t)] != ref[static_cast<std::size_t>(j + t)]) {
                            same = false;
                            break;
                        }
                    if (same) cnt++;
                }
                best_ref = std::max(best_ref, cnt);
            }
            clipped += std::min(cand_count, best_ref);
        }
        if (clipped == 0) return 0.0;
        log_sum += std::log(static_cast<double>(clipped) / total) / n;
    }
    const int c = static_cast<int>(cand.size());
    int r = static_cast<int>(refs.front().size());
    for (const auto& ref : refs) {
        const int len = static_cast<int>(ref.size());
        if (std::abs(len - c) < std::abs(r - c)) r = len;
        else if (std::abs(len - c) == std::abs(r - c)) r = std::min(r, len);
    }
    const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
    return bp * std::exp(log_sum);
}

inline double reference_bleu(const std::vector<std::vector<int>>& cands,
                             const std::vector<std::vector<int>>& refs, int n) {
    double total = 0.0;
    for (const auto& c : cands) total += reference_bleu_sentence(c, refs, n);
    return total / static_cast<double>(cands.size());
}

} // namespace catgan_tests

#endif
