#ifndef CATGAN_METRICS_HPP
#define CATGAN_METRICS_HPP

#include "catgan/corpus.hpp"
#include "catgan/generator.hpp"
#include "catgan/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgan {

// len / sum(1/v). Any zero value collapses the mean to 0 (continuous limit).
inline double harmonic_mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("harmonic_mean: empty input");
    double inv = 0.0;
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("harmonic_mean: negative input");
        if (v == 0.0) return 0.0;
        inv += 1.0 / v;
    }
    return static_cast<double>(values.size()) / inv;
}

namespace detail {
inline constexpr int kScoreChunk = 1024;
}

// Negative mean teacher-forced log-likelihood of the given rows under the
// generator, each row conditioned on its own category. Nats, summed over
// the T steps and averaged over sequences.
inline double nll_under_generator(const GeneratorParams& params, const Eigen::MatrixXi& ids,
                                  const std::vector<int>& categories) {
    const int n = static_cast<int>(ids.rows());
    if (n == 0) throw std::invalid_argument("nll_under_generator: empty batch");
    double total = 0.0;
    for (int lo = 0; lo < n; lo += detail::kScoreChunk) {
        const int len = std::min(detail::kScoreChunk, n - lo);
        Tape tape(false);
        GeneratorVars g = GeneratorVars::lift(tape, params, false);
        Eigen::MatrixXi chunk = ids.middleRows(lo, len);
        std::vector<int> cats(categories.begin() + lo, categories.begin() + lo + len);
        total += -sequence_log_prob(tape, g, chunk, cats).value().sum();
    }
    return total / n;
}

// NLL_div: the generator's negative log-likelihood of its own samples.
// Sampling uses Gumbel-Max (hard tokens); scoring is noise-free.
inline double nll_div(const GeneratorParams& params, int category, int n_samples, int T,
                      std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("nll_div: n_samples must be >= 1");
    NoiseFn noise = gumbel_noise(derive_seed(seed, 0xd1ULL, static_cast<std::uint64_t>(category)));
    double total = 0.0;
    for (int lo = 0; lo < n_samples; lo += detail::kScoreChunk) {
        const int len = std::min(detail::kScoreChunk, n_samples - lo);
        Tape tape(false);
        GeneratorVars g = GeneratorVars::lift(tape, params, false);
        std::vector<int> cats(static_cast<std::size_t>(len), category);
        SoftSequenceBatch batch = generate(tape, g, cats, T, 1.0, noise);
        total += -sequence_log_prob(tape, g, batch.hard, cats).value().sum();
    }
    return total / n_samples;
}

// NLL_gen: negative log-likelihood of real test data under the generator,
// category-matched. Optionally restricted to one category.
inline double nll_gen(const GeneratorParams& params, const LabeledDataset& test_set,
                      int category = -1) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < test_set.size(); ++i)
        if (category < 0 || test_set.labels[i] == category) idx.push_back(i);
    if (idx.empty()) throw std::invalid_argument("nll_gen: no test sequences selected");
    Eigen::MatrixXi ids(static_cast<Eigen::Index>(idx.size()), test_set.T);
    std::vector<int> cats;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const int label = test_set.labels[idx[i]];
        if (label < 0 || label >= params.cfg.categories)
            throw std::out_of_range("nll_gen: label out of range");
        cats.push_back(label);
        for (int t = 0; t < test_set.T; ++t)
            ids(static_cast<Eigen::Index>(i), t) = test_set.sequences[idx[i]].ids[static_cast<std::size_t>(t)];
    }
    return nll_under_generator(params, ids, cats);
}

// NLL_oracle: generator samples scored by the ground-truth oracle. Generator
// and oracle must share one id space.
inline double nll_oracle_metric(const OracleModel& oracle, const GeneratorParams& params,
                                int category, int n_samples, int T, std::uint64_t seed) {
    if (oracle.vocab_size() != params.cfg.vocab_size)
        throw std::invalid_argument("nll_oracle: oracle and generator vocabulary sizes differ");
    if (n_samples < 1) throw std::invalid_argument("nll_oracle: n_samples must be >= 1");
    NoiseFn noise = gumbel_noise(derive_seed(seed, 0x0aULL, static_cast<std::uint64_t>(category)));
    double total = 0.0;
    for (int lo = 0; lo < n_samples; lo += detail::kScoreChunk) {
        const int len = std::min(detail::kScoreChunk, n_samples - lo);
        Tape tape(false);
        GeneratorVars g = GeneratorVars::lift(tape, params, false);
        std::vector<int> cats(static_cast<std::size_t>(len), category);
        SoftSequenceBatch batch = generate(tape, g, cats, T, 1.0, noise);
        for (int i = 0; i < len; ++i) {
            std::vector<int> ids(static_cast<std::size_t>(T));
            for (int t = 0; t < T; ++t) ids[static_cast<std::size_t>(t)] = batch.hard(i, t);
            total += -oracle.sequence_log_prob(category, ids);
        }
    }
    return total / n_samples;
}

// ---- BLEU ----

using Sentence = std::vector<int>;

namespace detail {

inline std::map<Sentence, int> ngram_counts(const Sentence& s, int n) {
    std::map<Sentence, int> counts;
    if (static_cast<int>(s.size()) >= n)
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i)
            ++counts[Sentence(s.begin() + static_cast<std::ptrdiff_t>(i),
                              s.begin() + static_cast<std::ptrdiff_t>(i) + n)];
    return counts;
}

} // namespace detail

// Reference-side cache: per order, the max count of each n-gram over any
// single reference, plus the reference lengths for the brevity penalty.
class BleuReferences {
public:
    BleuReferences(const std::vector<Sentence>& references, int max_order)
        : max_order_(max_order), clipped_(static_cast<std::size_t>(max_order)) {
        if (references.empty()) throw std::invalid_argument("bleu: empty reference set");
        for (const Sentence& r : references) {
            lengths_.push_back(static_cast<int>(r.size()));
            for (int n = 1; n <= max_order; ++n)
                for (const auto& [gram, cnt] : detail::ngram_counts(r, n)) {
                    int& slot = clipped_[static_cast<std::size_t>(n - 1)][gram];
                    slot = std::max(slot, cnt);
                }
        }
        std::sort(lengths_.begin(), lengths_.end());
    }

    int max_order() const { return max_order_; }

    int max_ref_count(int n, const Sentence& gram) const {
        const auto& m = clipped_[static_cast<std::size_t>(n - 1)];
        auto it = m.find(gram);
        return it == m.end() ? 0 : it->second;
    }

    // closest reference length; ties go to the shorter one
    int closest_length(int cand_len) const {
        int best = lengths_.front();
        for (int len : lengths_)
            if (std::abs(len - cand_len) < std::abs(best - cand_len)) best = len;
        return best;
    }

private:
    int max_order_;
    std::vector<std::map<Sentence, int>> clipped_;
    std::vector<int> lengths_;
};

// Sentence-level BLEU-n of one candidate against the reference set: clipped
// modified n-gram precisions, geometric mean over orders 1..n, brevity
// penalty, no smoothing — a zero precision at any order zeroes the score.
inline double bleu_sentence(const Sentence& candidate, const BleuReferences& refs, int n) {
    if (n < 2 || n > refs.max_order())
        throw std::invalid_argument("bleu: order must be in [2, max_order]");
    if (candidate.empty()) return 0.0;
    double log_sum = 0.0;
    for (int order = 1; order <= n; ++order) {
        const auto counts = detail::ngram_counts(candidate, order);
        const int total = std::max(0, static_cast<int>(candidate.size()) - order + 1);
        if (total == 0) return 0.0;
        long long clipped = 0;
        for (const auto& [gram, cnt] : counts)
            clipped += std::min(cnt, refs.max_ref_count(order, gram));
        if (clipped == 0) return 0.0;
        log_sum += std::log(static_cast<double>(clipped) / total) / n;
    }
    const int c = static_cast<int>(candidate.size());
    const int r = refs.closest_length(c);
    const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
    return bp * std::exp(log_sum);
}

inline double bleu_n(const std::vector<Sentence>& candidates,
                     const std::vector<Sentence>& references, int n) {
    if (candidates.empty()) throw std::invalid_argument("bleu: no candidates");
    BleuReferences refs(references, n);
    double total = 0.0;
    for (const Sentence& c : candidates) total += bleu_sentence(c, refs, n);
    return total / static_cast<double>(candidates.size());
}

// ---- report ----

struct MetricsReport {
    int round = 0;
    int samples_per_category = 0;
    std::uint64_t seed = 0;
    int categories = 0;
    // metric name -> one value per category, plus the harmonic aggregate
    std::map<std::string, std::vector<double>> per_category;
    std::map<std::string, double> harmonic;

    void set(const std::string& name, std::vector<double> values) {
        harmonic[name] = harmonic_mean(values);
        per_category[name] = std::move(values);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["round"] = round;
        j["samples_per_category"] = samples_per_category;
        j["seed"] = seed;
        j["categories"] = categories;
        for (const auto& [name, vals] : per_category) {
            j["per_category"][name] = vals;
            j["harmonic"][name] = harmonic.at(name);
        }
        return j;
    }

    std::string to_table() const {
        std::ostringstream os;
        os << std::left << std::setw(14) << "metric";
        for (int c = 0; c < categories; ++c)
            os << std::right << std::setw(12) << ("cat" + std::to_string(c));
        os << std::right << std::setw(12) << "harmonic" << "\n";
        for (const auto& [name, vals] : per_category) {
            os << std::left << std::setw(14) << name;
            os << std::fixed << std::setprecision(4);
            for (double v : vals) os << std::right << std::setw(12) << v;
            os << std::right << std::setw(12) << harmonic.at(name) << "\n";
            os.unsetf(std::ios_base::floatfield);
        }
        return os.str();
    }
};

} // namespace catgan

#endif // CATGAN_METRICS_HPP
