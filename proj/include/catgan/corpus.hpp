#ifndef CATGAN_CORPUS_HPP
#define CATGAN_CORPUS_HPP

#include "catgan/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace catgan {

inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kBosToken = "<bos>";

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

// Ordered token table. Reserved tokens come first in the order given; the
// remaining tokens are sorted by descending corpus frequency, ties broken
// lexicographically, so construction is deterministic.
class Vocabulary {
public:
    Vocabulary() = default;

    static Vocabulary from_tokens(const std::vector<std::string>& reserved,
                                  const std::vector<std::string>& data_tokens) {
        Vocabulary v;
        for (const auto& r : reserved) v.append(r, /*reserved=*/true);
        for (const auto& tok : data_tokens)
            if (!v.index_.count(tok)) v.append(tok, false);
        v.finish_reserved_lookup();
        return v;
    }

    static Vocabulary build(const std::vector<std::string>& corpus_files,
                            const std::vector<std::string>& reserved = {kPadToken, kBosToken}) {
        {
            std::unordered_map<std::string, int> seen;
            for (const auto& r : reserved)
                if (++seen[r] > 1)
                    throw std::invalid_argument("duplicate reserved token: " + r);
        }
        std::unordered_map<std::string, long long> freq;
        bool any_token = false;
        for (const auto& path : corpus_files) {
            std::ifstream in(path);
            if (!in) throw std::runtime_error("cannot open corpus file: " + path);
            std::string line;
            while (std::getline(in, line)) {
                for (const auto& tok : split_tokens(line)) {
                    ++freq[tok];
                    any_token = true;
                }
            }
        }
        if (!any_token) throw std::runtime_error("empty corpus: no tokens found");

        std::vector<std::pair<std::string, long long>> items(freq.begin(), freq.end());
        std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        std::vector<std::string> data_tokens;
        data_tokens.reserve(items.size());
        for (auto& it : items) data_tokens.push_back(it.first);
        return from_tokens(reserved, data_tokens);
    }

    static Vocabulary load(const std::string& path, int n_reserved = 2) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
        Vocabulary v;
        std::string line;
        int i = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            v.append(line, i < n_reserved);
            ++i;
        }
        if (v.size() == 0) throw std::runtime_error("empty vocabulary file: " + path);
        v.finish_reserved_lookup();
        return v;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
        for (const auto& tok : tokens_) out << tok << "\n";
    }

    int size() const { return static_cast<int>(tokens_.size()); }
    int pad_id() const { return pad_id_; }
    int bos_id() const { return bos_id_; }
    int n_reserved() const { return n_reserved_; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }

    int id(const std::string& tok) const {
        auto it = index_.find(tok);
        if (it == index_.end())
            throw std::out_of_range("out-of-vocabulary token: " + tok);
        return it->second;
    }

    bool contains(const std::string& tok) const { return index_.count(tok) != 0; }

    std::vector<int> encode(const std::vector<std::string>& sentence) const {
        std::vector<int> ids;
        ids.reserve(sentence.size());
        for (const auto& tok : sentence) ids.push_back(id(tok));
        return ids;
    }

    std::vector<std::string> decode(const std::vector<int>& ids) const {
        std::vector<std::string> out;
        out.reserve(ids.size());
        for (int i : ids) out.push_back(token(i));
        return out;
    }

    // FNV-1a over the ordered token list; stored in checkpoints so a model
    // cannot silently be paired with the wrong vocabulary.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (const auto& tok : tokens_) {
            for (char c : tok) {
                h ^= static_cast<unsigned char>(c);
                h *= 1099511628211ULL;
            }
            h ^= '\n';
            h *= 1099511628211ULL;
        }
        return h;
    }

private:
    void append(const std::string& tok, bool) {
        if (index_.count(tok)) return;
        index_[tok] = static_cast<int>(tokens_.size());
        tokens_.push_back(tok);
    }

    void finish_reserved_lookup() {
        auto p = index_.find(kPadToken);
        auto b = index_.find(kBosToken);
        if (p == index_.end() || b == index_.end())
            throw std::invalid_argument("vocabulary must reserve <pad> and <bos>");
        pad_id_ = p->second;
        bos_id_ = b->second;
        n_reserved_ = 2;
        if (pad_id_ == bos_id_) throw std::logic_error("pad and bos share an id");
    }

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
    int pad_id_ = -1;
    int bos_id_ = -1;
    int n_reserved_ = 0;
};

struct TokenSequence {
    std::vector<int> ids;      // fixed padded length T
    int effective_length = 0;  // pre-padding length, in [1, T]
};

struct LabeledDataset {
    std::vector<TokenSequence> sequences;
    std::vector<int> labels;   // category per sequence, in [0, k)
    int k = 0;
    int T = 0;

    std::size_t size() const { return sequences.size(); }

    std::vector<std::size_t> indices_of_category(int c) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) out.push_back(i);
        return out;
    }
};

struct LoadStats {
    int truncated = 0;   // sentences longer than T, clipped with a warning count
};

// One file per category; the file index is the label.
inline LabeledDataset load_labeled(const std::vector<std::string>& paths_per_category,
                                   const Vocabulary& vocab, int T,
                                   LoadStats* stats = nullptr) {
    if (paths_per_category.empty())
        throw std::invalid_argument("load_labeled: no category files");
    if (T < 1) throw std::invalid_argument("load_labeled: T must be >= 1");

    LabeledDataset ds;
    ds.k = static_cast<int>(paths_per_category.size());
    ds.T = T;
    LoadStats local;
    for (int c = 0; c < ds.k; ++c) {
        std::ifstream in(paths_per_category[c]);
        if (!in) throw std::runtime_error("cannot open corpus file: " + paths_per_category[c]);
        std::string line;
        std::size_t before = ds.sequences.size();
        while (std::getline(in, line)) {
            auto toks = split_tokens(line);
            if (toks.empty()) continue;
            TokenSequence seq;
            seq.ids = vocab.encode(toks);
            if (static_cast<int>(seq.ids.size()) > T) {
                seq.ids.resize(static_cast<std::size_t>(T));
                ++local.truncated;
            }
            seq.effective_length = static_cast<int>(seq.ids.size());
            seq.ids.resize(static_cast<std::size_t>(T), vocab.pad_id());
            ds.sequences.push_back(std::move(seq));
            ds.labels.push_back(c);
        }
        if (ds.sequences.size() == before)
            throw std::runtime_error("category file has no sentences: " + paths_per_category[c]);
    }
    if (stats) *stats = local;
    return ds;
}

struct Batch {
    Eigen::MatrixXi ids;         // B x T
    std::vector<int> labels;     // B
    int category = -1;           // set when drawn from a single category
};

inline Batch make_batch(const LabeledDataset& ds, const std::vector<std::size_t>& idx) {
    Batch b;
    b.ids.resize(static_cast<Eigen::Index>(idx.size()), ds.T);
    b.labels.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const TokenSequence& s = ds.sequences[idx[i]];
        for (int t = 0; t < ds.T; ++t) b.ids(static_cast<Eigen::Index>(i), t) = s.ids[static_cast<std::size_t>(t)];
        b.labels.push_back(ds.labels[idx[i]]);
    }
    return b;
}

// Endless, seed-deterministic batch stream. With per_category set, each batch
// is drawn from one category and categories cycle round-robin; every category
// reshuffles independently when exhausted. Without it, batches walk a global
// shuffled order (partial trailing batches are dropped before reshuffling).
class BatchIter {
public:
    BatchIter(const LabeledDataset& ds, int batch_size, bool per_category, std::uint64_t seed)
        : ds_(&ds), batch_size_(batch_size), per_category_(per_category), rng_(seed) {
        if (batch_size_ <= 0) throw std::invalid_argument("batch_size must be positive");
        if (per_category_) {
            pools_.resize(static_cast<std::size_t>(ds.k));
            for (int c = 0; c < ds.k; ++c) {
                pools_[static_cast<std::size_t>(c)].order = ds.indices_of_category(c);
                if (pools_[static_cast<std::size_t>(c)].order.size() < static_cast<std::size_t>(batch_size_))
                    throw std::invalid_argument("batch_size exceeds per-category sample count");
                shuffle(pools_[static_cast<std::size_t>(c)].order);
            }
        } else {
            if (ds.size() < static_cast<std::size_t>(batch_size_))
                throw std::invalid_argument("batch_size exceeds dataset size");
            global_.order.resize(ds.size());
            std::iota(global_.order.begin(), global_.order.end(), std::size_t{0});
            shuffle(global_.order);
        }
    }

    Batch next() {
        if (per_category_) {
            const int c = next_category_;
            next_category_ = (next_category_ + 1) % ds_->k;
            Batch b = make_batch(*ds_, take(pools_[static_cast<std::size_t>(c)]));
            b.category = c;
            return b;
        }
        return make_batch(*ds_, take(global_));
    }

private:
    struct Pool {
        std::vector<std::size_t> order;
        std::size_t pos = 0;
    };

    std::vector<std::size_t> take(Pool& p) {
        if (p.pos + static_cast<std::size_t>(batch_size_) > p.order.size()) {
            shuffle(p.order);
            p.pos = 0;
        }
        std::vector<std::size_t> idx(p.order.begin() + static_cast<std::ptrdiff_t>(p.pos),
                                     p.order.begin() + static_cast<std::ptrdiff_t>(p.pos + static_cast<std::size_t>(batch_size_)));
        p.pos += static_cast<std::size_t>(batch_size_);
        return idx;
    }

    void shuffle(std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng_.below(i)]);
    }

    const LabeledDataset* ds_;
    int batch_size_;
    bool per_category_;
    Rng rng_;
    std::vector<Pool> pools_;
    Pool global_;
    int next_category_ = 0;
};

// Seeded one-shot draw of `n` sequence indices from one category (with
// replacement only if the category holds fewer than n sequences). Used by the
// adversarial loop so any round can be reproduced without replaying a stream.
inline std::vector<std::size_t> draw_category_indices(const LabeledDataset& ds, int c,
                                                      int n, std::uint64_t seed) {
    auto pool = ds.indices_of_category(c);
    if (pool.empty()) throw std::invalid_argument("category has no sequences");
    Rng rng(seed);
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(n));
    if (pool.size() >= static_cast<std::size_t>(n)) {
        for (std::size_t i = pool.size(); i > 1; --i)
            std::swap(pool[i - 1], pool[rng.below(i)]);
        out.assign(pool.begin(), pool.begin() + n);
    } else {
        for (int i = 0; i < n; ++i) out.push_back(pool[rng.below(pool.size())]);
    }
    return out;
}

} // namespace catgan

#endif // CATGAN_CORPUS_HPP
