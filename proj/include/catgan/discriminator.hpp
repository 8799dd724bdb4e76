#ifndef CATGAN_DISCRIMINATOR_HPP
#define CATGAN_DISCRIMINATOR_HPP

#include "catgan/ad.hpp"
#include "catgan/rng.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace catgan {

struct DiscriminatorConfig {
    int vocab_size = 0;
    int d_emb = 32;
    std::vector<int> window_sizes = {2, 3, 4};
    int filters_per_size = 16;
    int d_hidden = 32;
    double init_scale = 0.1;

    void validate(int T) const {
        if (vocab_size < 2) throw std::invalid_argument("discriminator: vocab_size must be >= 2");
        if (window_sizes.empty()) throw std::invalid_argument("discriminator: no window sizes");
        for (int w : window_sizes)
            if (w < 1 || w > T)
                throw std::invalid_argument("discriminator: window size " + std::to_string(w) +
                                            " exceeds sequence length " + std::to_string(T));
    }
};

// Convolutional sequence scorer: embedded probability rows, a bank of 1-D
// convolutions over the time axis with max-over-time pooling, and a small
// fully connected head to a single unbounded logit per sequence. The sigmoid
// lives in the losses, not here.
struct DiscriminatorParams {
    DiscriminatorConfig cfg;

    ad::Mat e_d;                    // V x d_emb
    std::vector<ad::Mat> w_conv;    // per window size, (w * d_emb) x filters
    std::vector<ad::Mat> b_conv;    // 1 x filters
    ad::Mat w_hidden, b_hidden;
    ad::Mat w_logit, b_logit;

    static DiscriminatorParams init(const DiscriminatorConfig& cfg, std::uint64_t seed) {
        DiscriminatorParams p;
        p.cfg = cfg;
        Rng rng(derive_seed(seed, 0xd15cULL));
        auto randn = [&](int r, int c) {
            ad::Mat m(r, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) m(i, j) = cfg.init_scale * rng.normal();
            return m;
        };
        p.e_d = randn(cfg.vocab_size, cfg.d_emb);
        for (int w : cfg.window_sizes) {
            p.w_conv.push_back(randn(w * cfg.d_emb, cfg.filters_per_size));
            p.b_conv.push_back(ad::Mat::Zero(1, cfg.filters_per_size));
        }
        const int pooled = static_cast<int>(cfg.window_sizes.size()) * cfg.filters_per_size;
        p.w_hidden = randn(pooled, cfg.d_hidden);
        p.b_hidden = ad::Mat::Zero(1, cfg.d_hidden);
        p.w_logit = randn(cfg.d_hidden, 1);
        p.b_logit = ad::Mat::Zero(1, 1);
        return p;
    }

    template <typename Fn>
    void visit(Fn&& fn) {
        fn("e_d", e_d);
        for (std::size_t i = 0; i < w_conv.size(); ++i) {
            const std::string s = std::to_string(cfg.window_sizes[i]);
            fn("w_conv." + s, w_conv[i]);
            fn("b_conv." + s, b_conv[i]);
        }
        fn("w_hidden", w_hidden);
        fn("b_hidden", b_hidden);
        fn("w_logit", w_logit);
        fn("b_logit", b_logit);
    }

    template <typename Fn>
    void visit(Fn&& fn) const {
        const_cast<DiscriminatorParams*>(this)->visit(
            [&](const std::string& name, ad::Mat& m) { fn(name, static_cast<const ad::Mat&>(m)); });
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        visit([&](const std::string&, const ad::Mat& m) { n += static_cast<std::size_t>(m.size()); });
        return n;
    }
};

struct DiscriminatorVars {
    const DiscriminatorConfig* cfg = nullptr;
    ad::Var e_d;
    std::vector<ad::Var> w_conv, b_conv;
    ad::Var w_hidden, b_hidden, w_logit, b_logit;

    static DiscriminatorVars lift(ad::Tape& tape, const DiscriminatorParams& p, bool requires_grad) {
        DiscriminatorVars v;
        v.cfg = &p.cfg;
        v.e_d = ad::leaf(tape, p.e_d, requires_grad);
        for (std::size_t i = 0; i < p.w_conv.size(); ++i) {
            v.w_conv.push_back(ad::leaf(tape, p.w_conv[i], requires_grad));
            v.b_conv.push_back(ad::leaf(tape, p.b_conv[i], requires_grad));
        }
        v.w_hidden = ad::leaf(tape, p.w_hidden, requires_grad);
        v.b_hidden = ad::leaf(tape, p.b_hidden, requires_grad);
        v.w_logit = ad::leaf(tape, p.w_logit, requires_grad);
        v.b_logit = ad::leaf(tape, p.b_logit, requires_grad);
        return v;
    }

    template <typename Fn>
    void visit(Fn&& fn) const {
        fn("e_d", e_d);
        for (std::size_t i = 0; i < w_conv.size(); ++i) {
            const std::string s = std::to_string(cfg->window_sizes[i]);
            fn("w_conv." + s, w_conv[i]);
            fn("b_conv." + s, b_conv[i]);
        }
        fn("w_hidden", w_hidden);
        fn("b_hidden", b_hidden);
        fn("w_logit", w_logit);
        fn("b_logit", b_logit);
    }
};

// Scores a batch given per-step probability rows (T entries of B x V).
// Hard token batches go through the same path after one-hot conversion, so
// a one-hot relaxed sequence and its discrete twin score bit-identically.
inline ad::Var discriminate(ad::Tape& tape, const DiscriminatorVars& d,
                            const std::vector<ad::Var>& prob_rows) {
    const DiscriminatorConfig& cfg = *d.cfg;
    const int T = static_cast<int>(prob_rows.size());
    cfg.validate(T);
    if (prob_rows.empty()) throw std::invalid_argument("discriminate: empty input");
    for (const ad::Var& r : prob_rows)
        if (r.cols() != cfg.vocab_size)
            throw std::invalid_argument("discriminate: row dimension must equal vocab size");

    std::vector<ad::Var> embedded;  // per step, B x d_emb
    embedded.reserve(prob_rows.size());
    for (const ad::Var& r : prob_rows) embedded.push_back(ad::matmul(r, d.e_d));

    std::vector<ad::Var> pooled;
    for (std::size_t wi = 0; wi < cfg.window_sizes.size(); ++wi) {
        const int w = cfg.window_sizes[wi];
        ad::Var best;
        for (int p = 0; p + w <= T; ++p) {
            std::vector<ad::Var> window(embedded.begin() + p, embedded.begin() + p + w);
            ad::Var act = ad::relu(ad::add_rowvec(
                ad::matmul(w == 1 ? window[0] : ad::concat_cols(window), d.w_conv[wi]),
                d.b_conv[wi]));
            best = (p == 0) ? act : ad::cmax(best, act);
        }
        pooled.push_back(best);
    }
    ad::Var features = pooled.size() == 1 ? pooled[0] : ad::concat_cols(pooled);
    ad::Var hidden = ad::relu(ad::add_rowvec(ad::matmul(features, d.w_hidden), d.b_hidden));
    return ad::add_rowvec(ad::matmul(hidden, d.w_logit), d.b_logit);  // B x 1
}

inline std::vector<ad::Var> one_hot_rows(ad::Tape& tape, const Eigen::MatrixXi& ids, int vocab) {
    std::vector<ad::Var> rows;
    rows.reserve(static_cast<std::size_t>(ids.cols()));
    for (Eigen::Index t = 0; t < ids.cols(); ++t) {
        ad::Mat m = ad::Mat::Zero(ids.rows(), vocab);
        for (Eigen::Index i = 0; i < ids.rows(); ++i) {
            const int y = ids(i, t);
            if (y < 0 || y >= vocab)
                throw std::out_of_range("one_hot_rows: token id out of vocabulary");
            m(i, y) = 1.0;
        }
        rows.push_back(ad::constant(tape, m));
    }
    return rows;
}

inline ad::Var discriminate_hard(ad::Tape& tape, const DiscriminatorVars& d,
                                 const Eigen::MatrixXi& ids) {
    return discriminate(tape, d, one_hot_rows(tape, ids, d.cfg->vocab_size));
}

} // namespace catgan

#endif // CATGAN_DISCRIMINATOR_HPP
