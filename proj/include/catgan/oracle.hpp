#ifndef CATGAN_ORACLE_HPP
#define CATGAN_ORACLE_HPP

#include "catgan/corpus.hpp"
#include "catgan/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace catgan {

// Fixed, randomly initialized single-layer LSTM language models, one per
// category. They define the synthetic ground-truth distributions: sampling
// from them produces training data, and teacher-forced scoring gives exact
// sequence log-likelihoods. Parameters are frozen at construction.
class OracleModel {
public:
    struct CategoryParams {
        Eigen::MatrixXd embed;   // V x d_e
        Eigen::MatrixXd w_x;     // d_e x 4h, gate order [i f g o]
        Eigen::MatrixXd w_h;     // h x 4h
        Eigen::RowVectorXd bias; // 1 x 4h
        Eigen::MatrixXd w_out;   // h x V
        Eigen::RowVectorXd b_out;
    };

    struct State {
        Eigen::RowVectorXd h;
        Eigen::RowVectorXd c;
    };

    OracleModel() = default;

    // All weights drawn i.i.d. from the standard normal; each category's
    // parameter set is an independent draw from a seed derived per category.
    OracleModel(int k, int vocab_size, int hidden_size, std::uint64_t seed, int start_id = 0)
        : k_(k), vocab_(vocab_size), hidden_(hidden_size), seed_(seed), start_id_(start_id) {
        if (k < 1) throw std::invalid_argument("init_oracle: k must be >= 1");
        if (vocab_size < 2) throw std::invalid_argument("init_oracle: vocab_size must be >= 2");
        if (start_id < 0 || start_id >= vocab_size)
            throw std::invalid_argument("init_oracle: start_id out of range");
        const int d_e = hidden_size;  // embedding width tied to hidden width
        for (int c = 0; c < k; ++c) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c), 0x0eac1eULL));
            CategoryParams p;
            p.embed = randn(rng, vocab_, d_e);
            p.w_x = randn(rng, d_e, 4 * hidden_);
            p.w_h = randn(rng, hidden_, 4 * hidden_);
            p.bias = randn(rng, 1, 4 * hidden_).row(0);
            p.w_out = randn(rng, hidden_, vocab_);
            p.b_out = randn(rng, 1, vocab_).row(0);
            cats_.push_back(std::move(p));
        }
    }

    int k() const { return k_; }
    int vocab_size() const { return vocab_; }
    int hidden_size() const { return hidden_; }
    std::uint64_t seed() const { return seed_; }
    int start_id() const { return start_id_; }
    const CategoryParams& category(int c) const { return cats_.at(static_cast<std::size_t>(c)); }
    std::vector<CategoryParams>& mutable_categories() { return cats_; }
    void set_shape(int k, int vocab, int hidden, std::uint64_t seed, int start_id) {
        k_ = k; vocab_ = vocab; hidden_ = hidden; seed_ = seed; start_id_ = start_id;
    }

    State initial_state() const {
        State s;
        s.h = Eigen::RowVectorXd::Zero(hidden_);
        s.c = Eigen::RowVectorXd::Zero(hidden_);
        return s;
    }

    // One recurrence step: consume token id, emit next-token distribution.
    Eigen::RowVectorXd step(int category, State& st, int input_id) const {
        const CategoryParams& p = cats_.at(static_cast<std::size_t>(category));
        if (input_id < 0 || input_id >= vocab_)
            throw std::out_of_range("oracle step: token id out of vocabulary");
        Eigen::RowVectorXd x = p.embed.row(input_id);
        Eigen::RowVectorXd gates = x * p.w_x + st.h * p.w_h + p.bias;
        const int h = hidden_;
        auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
        Eigen::RowVectorXd i_g(h), f_g(h), g_g(h), o_g(h);
        for (int j = 0; j < h; ++j) {
            i_g(j) = sig(gates(j));
            f_g(j) = sig(gates(h + j));
            g_g(j) = std::tanh(gates(2 * h + j));
            o_g(j) = sig(gates(3 * h + j));
        }
        st.c = f_g.cwiseProduct(st.c) + i_g.cwiseProduct(g_g);
        st.h = o_g.cwiseProduct(st.c.array().tanh().matrix());
        Eigen::RowVectorXd logits = st.h * p.w_out + p.b_out;
        Eigen::ArrayXd z = logits.transpose().array() - logits.maxCoeff();
        Eigen::ArrayXd e = z.exp();
        return (e / e.sum()).matrix().transpose();
    }

    // Ancestral sampling of n sequences of exact length T from one category.
    LabeledDataset sample(int category, int n, int T, std::uint64_t sample_seed) const {
        check_category(category);
        LabeledDataset ds;
        ds.k = k_;
        ds.T = T;
        for (int i = 0; i < n; ++i) {
            Rng rng(derive_seed(sample_seed, static_cast<std::uint64_t>(category),
                                static_cast<std::uint64_t>(i)));
            State st = initial_state();
            TokenSequence seq;
            seq.ids.reserve(static_cast<std::size_t>(T));
            int prev = start_id_;
            for (int t = 0; t < T; ++t) {
                Eigen::RowVectorXd probs = step(category, st, prev);
                prev = sample_categorical(probs, rng);
                seq.ids.push_back(prev);
            }
            seq.effective_length = T;
            ds.sequences.push_back(std::move(seq));
            ds.labels.push_back(category);
        }
        return ds;
    }

    // Exact log-likelihood of one sequence under one category's model, in
    // nats, summed over the T steps.
    double sequence_log_prob(int category, const std::vector<int>& ids) const {
        check_category(category);
        State st = initial_state();
        int prev = start_id_;
        double lp = 0.0;
        for (int id : ids) {
            Eigen::RowVectorXd probs = step(category, st, prev);
            if (id < 0 || id >= vocab_)
                throw std::out_of_range("oracle nll: token id out of vocabulary");
            lp += std::log(probs(id));
            prev = id;
        }
        return lp;
    }

    struct NllResult {
        std::vector<double> per_category;  // mean NLL per category, nats
        double harmonic = 0.0;
        std::vector<int> counts;
    };

    // Mean negative log-likelihood of labeled sequences, each scored by its
    // own category's model; categories without sequences are skipped in the
    // harmonic aggregate.
    NllResult nll(const std::vector<TokenSequence>& seqs, const std::vector<int>& labels) const {
        if (seqs.size() != labels.size())
            throw std::invalid_argument("oracle nll: sequence/label size mismatch");
        std::vector<double> sums(static_cast<std::size_t>(k_), 0.0);
        std::vector<int> counts(static_cast<std::size_t>(k_), 0);
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            const int c = labels[i];
            if (c < 0 || c >= k_) throw std::out_of_range("oracle nll: label out of range");
            sums[static_cast<std::size_t>(c)] += -sequence_log_prob(c, seqs[i].ids);
            ++counts[static_cast<std::size_t>(c)];
        }
        NllResult res;
        res.counts = counts;
        double inv_sum = 0.0;
        int present = 0;
        bool zero = false;
        for (int c = 0; c < k_; ++c) {
            const double mean = counts[static_cast<std::size_t>(c)] > 0
                ? sums[static_cast<std::size_t>(c)] / counts[static_cast<std::size_t>(c)]
                : 0.0;
            res.per_category.push_back(mean);
            if (counts[static_cast<std::size_t>(c)] > 0) {
                ++present;
                if (mean == 0.0) zero = true; else inv_sum += 1.0 / mean;
            }
        }
        res.harmonic = (present == 0 || zero) ? 0.0 : present / inv_sum;
        return res;
    }

    static int sample_categorical(const Eigen::RowVectorXd& probs, Rng& rng) {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (Eigen::Index j = 0; j < probs.size(); ++j) {
            acc += probs(j);
            if (u <= acc) return static_cast<int>(j);
        }
        return static_cast<int>(probs.size() - 1);
    }

private:
    void check_category(int c) const {
        if (c < 0 || c >= k_) throw std::out_of_range("oracle: category out of range");
    }

    static Eigen::MatrixXd randn(Rng& rng, int r, int c) {
        Eigen::MatrixXd m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
        return m;
    }

    int k_ = 0;
    int vocab_ = 0;
    int hidden_ = 0;
    std::uint64_t seed_ = 0;
    int start_id_ = 0;
    std::vector<CategoryParams> cats_;
};

} // namespace catgan

#endif // CATGAN_ORACLE_HPP
