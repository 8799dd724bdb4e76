#ifndef CATGAN_GENERATOR_HPP
#define CATGAN_GENERATOR_HPP

#include "catgan/ad.hpp"
#include "catgan/rng.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgan {

using ad::Mat;
using ad::Tape;
using ad::Var;

struct GeneratorConfig {
    int vocab_size = 0;
    int categories = 1;
    int bos_id = 1;
    int d_emb = 32;
    int d_cat = 8;
    int d_mem = 64;      // memory slot width; heads concatenate back to this
    int heads = 2;
    int slots = 1;
    int d_mlp = 64;
    double init_scale = 0.1;
    bool soft_feedback = false;  // feed the relaxed row instead of the hard token

    int d_head() const { return d_mem / heads; }

    void validate() const {
        if (vocab_size < 2) throw std::invalid_argument("generator: vocab_size must be >= 2");
        if (categories < 1) throw std::invalid_argument("generator: categories must be >= 1");
        if (bos_id < 0 || bos_id >= vocab_size)
            throw std::invalid_argument("generator: bos_id out of vocabulary");
        if (heads < 1 || slots < 1 || d_mem < 1 || d_emb < 1 || d_cat < 1 || d_mlp < 1)
            throw std::invalid_argument("generator: sizes must be positive");
        if (d_mem % heads != 0)
            throw std::invalid_argument("generator: d_mem must be divisible by heads");
    }
};

// Trainable state of the relational-memory generator. Plain value type:
// copying yields a fully independent parameter set.
struct GeneratorParams {
    GeneratorConfig cfg;

    Mat e_y;                  // vocab embeddings, V x d_emb
    Mat e_c;                  // category embeddings, k x d_cat
    Mat w_x;                  // (d_emb + d_cat) x d_mem
    std::vector<Mat> w_q, w_k, w_v;  // per head, d_mem x d_head
    Mat w_mlp1, b_mlp1;       // 2 d_mem x d_mlp, 1 x d_mlp
    Mat w_mlp2, b_mlp2;       // d_mlp x d_mem, 1 x d_mem
    Mat w_gate_i, b_gate_i;   // 2 d_mem x d_mem, 1 x d_mem
    Mat w_gate_f, b_gate_f;
    Mat m0;                   // learned initial memory, slots x d_mem
    Mat w_out, b_out;         // slots*d_mem x V, 1 x V

    static GeneratorParams init(const GeneratorConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        GeneratorParams p;
        p.cfg = cfg;
        Rng rng(derive_seed(seed, 0x9e4ULL));
        auto randn = [&](int r, int c) {
            Mat m(r, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) m(i, j) = cfg.init_scale * rng.normal();
            return m;
        };
        const int din = cfg.d_emb + cfg.d_cat;
        p.e_y = randn(cfg.vocab_size, cfg.d_emb);
        p.e_c = randn(cfg.categories, cfg.d_cat);
        p.w_x = randn(din, cfg.d_mem);
        for (int h = 0; h < cfg.heads; ++h) {
            p.w_q.push_back(randn(cfg.d_mem, cfg.d_head()));
            p.w_k.push_back(randn(cfg.d_mem, cfg.d_head()));
            p.w_v.push_back(randn(cfg.d_mem, cfg.d_head()));
        }
        p.w_mlp1 = randn(2 * cfg.d_mem, cfg.d_mlp);
        p.b_mlp1 = Mat::Zero(1, cfg.d_mlp);
        p.w_mlp2 = randn(cfg.d_mlp, cfg.d_mem);
        p.b_mlp2 = Mat::Zero(1, cfg.d_mem);
        p.w_gate_i = randn(2 * cfg.d_mem, cfg.d_mem);
        p.b_gate_i = Mat::Zero(1, cfg.d_mem);
        p.w_gate_f = randn(2 * cfg.d_mem, cfg.d_mem);
        p.b_gate_f = Mat::Zero(1, cfg.d_mem);
        p.m0 = randn(cfg.slots, cfg.d_mem);
        p.w_out = randn(cfg.slots * cfg.d_mem, cfg.vocab_size);
        p.b_out = Mat::Zero(1, cfg.vocab_size);
        return p;
    }

    template <typename Fn>
    void visit(Fn&& fn) {
        fn("e_y", e_y);
        fn("e_c", e_c);
        fn("w_x", w_x);
        for (std::size_t h = 0; h < w_q.size(); ++h) {
            const std::string s = std::to_string(h);
            fn("w_q." + s, w_q[h]);
            fn("w_k." + s, w_k[h]);
            fn("w_v." + s, w_v[h]);
        }
        fn("w_mlp1", w_mlp1);
        fn("b_mlp1", b_mlp1);
        fn("w_mlp2", w_mlp2);
        fn("b_mlp2", b_mlp2);
        fn("w_gate_i", w_gate_i);
        fn("b_gate_i", b_gate_i);
        fn("w_gate_f", w_gate_f);
        fn("b_gate_f", b_gate_f);
        fn("m0", m0);
        fn("w_out", w_out);
        fn("b_out", b_out);
    }

    template <typename Fn>
    void visit(Fn&& fn) const {
        const_cast<GeneratorParams*>(this)->visit(
            [&](const std::string& name, Mat& m) { fn(name, static_cast<const Mat&>(m)); });
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        visit([&](const std::string&, const Mat& m) { n += static_cast<std::size_t>(m.size()); });
        return n;
    }
};

// Tape handles for one training/evaluation graph over a parameter snapshot.
struct GeneratorVars {
    const GeneratorConfig* cfg = nullptr;
    Var e_y, e_c, w_x;
    std::vector<Var> w_q, w_k, w_v;
    Var w_mlp1, b_mlp1, w_mlp2, b_mlp2;
    Var w_gate_i, b_gate_i, w_gate_f, b_gate_f;
    Var m0;
    Var w_out, b_out;

    static GeneratorVars lift(Tape& tape, const GeneratorParams& p, bool requires_grad) {
        GeneratorVars v;
        v.cfg = &p.cfg;
        v.e_y = ad::leaf(tape, p.e_y, requires_grad);
        v.e_c = ad::leaf(tape, p.e_c, requires_grad);
        v.w_x = ad::leaf(tape, p.w_x, requires_grad);
        for (int h = 0; h < p.cfg.heads; ++h) {
            v.w_q.push_back(ad::leaf(tape, p.w_q[static_cast<std::size_t>(h)], requires_grad));
            v.w_k.push_back(ad::leaf(tape, p.w_k[static_cast<std::size_t>(h)], requires_grad));
            v.w_v.push_back(ad::leaf(tape, p.w_v[static_cast<std::size_t>(h)], requires_grad));
        }
        v.w_mlp1 = ad::leaf(tape, p.w_mlp1, requires_grad);
        v.b_mlp1 = ad::leaf(tape, p.b_mlp1, requires_grad);
        v.w_mlp2 = ad::leaf(tape, p.w_mlp2, requires_grad);
        v.b_mlp2 = ad::leaf(tape, p.b_mlp2, requires_grad);
        v.w_gate_i = ad::leaf(tape, p.w_gate_i, requires_grad);
        v.b_gate_i = ad::leaf(tape, p.b_gate_i, requires_grad);
        v.w_gate_f = ad::leaf(tape, p.w_gate_f, requires_grad);
        v.b_gate_f = ad::leaf(tape, p.b_gate_f, requires_grad);
        v.m0 = ad::leaf(tape, p.m0, requires_grad);
        v.w_out = ad::leaf(tape, p.w_out, requires_grad);
        v.b_out = ad::leaf(tape, p.b_out, requires_grad);
        return v;
    }

    // Same traversal order as GeneratorParams::visit, for grad extraction.
    template <typename Fn>
    void visit(Fn&& fn) const {
        fn("e_y", e_y);
        fn("e_c", e_c);
        fn("w_x", w_x);
        for (std::size_t h = 0; h < w_q.size(); ++h) {
            const std::string s = std::to_string(h);
            fn("w_q." + s, w_q[h]);
            fn("w_k." + s, w_k[h]);
            fn("w_v." + s, w_v[h]);
        }
        fn("w_mlp1", w_mlp1);
        fn("b_mlp1", b_mlp1);
        fn("w_mlp2", w_mlp2);
        fn("b_mlp2", b_mlp2);
        fn("w_gate_i", w_gate_i);
        fn("b_gate_i", b_gate_i);
        fn("w_gate_f", w_gate_f);
        fn("b_gate_f", b_gate_f);
        fn("m0", m0);
        fn("w_out", w_out);
        fn("b_out", b_out);
    }
};

// x_t = [E_y ; E_c] W_x with the token embedding either gathered by id or
// mixed by a probability row.
inline Var embed_input_hard(Tape& tape, const GeneratorVars& g,
                            const std::vector<int>& token_ids,
                            const std::vector<int>& category_ids) {
    for (int c : category_ids)
        if (c < 0 || c >= g.cfg->categories)
            throw std::out_of_range("embed_input: category id out of range");
    for (int y : token_ids)
        if (y < 0 || y >= g.cfg->vocab_size)
            throw std::out_of_range("embed_input: token id out of range");
    Var ey = ad::gather_rows(g.e_y, token_ids);
    Var ec = ad::gather_rows(g.e_c, category_ids);
    return ad::matmul(ad::concat_cols({ey, ec}), g.w_x);
}

inline Var embed_input_soft(Tape& tape, const GeneratorVars& g, const Var& prob_rows,
                            const std::vector<int>& category_ids) {
    Var ey = ad::matmul(prob_rows, g.e_y);
    Var ec = ad::gather_rows(g.e_c, category_ids);
    return ad::matmul(ad::concat_cols({ey, ec}), g.w_x);
}

struct RmcStepOut {
    std::vector<Var> memory;     // slots, each B x d_mem
    Var logits;                  // B x V
    std::vector<Var> attention;  // per (slot, head): B x (slots+1) rows summing to 1
    std::vector<Var> attended;   // proposed update per slot (heads concatenated)
};

// One relational-memory update: multi-head dot-product attention of each slot
// over [memory; input], then a gated residual MLP combination, then the
// flattened new memory projected to vocabulary logits.
inline RmcStepOut rmc_step(Tape& tape, const GeneratorVars& g,
                           const std::vector<Var>& memory, const Var& x) {
    const GeneratorConfig& cfg = *g.cfg;
    const int m = cfg.slots;
    if (static_cast<int>(memory.size()) != m)
        throw std::invalid_argument("rmc_step: slot count mismatch");
    const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(cfg.d_head()));

    // keys/values of the m+1 attention targets (slots then input), per head
    std::vector<std::vector<Var>> keys(static_cast<std::size_t>(cfg.heads));
    std::vector<std::vector<Var>> vals(static_cast<std::size_t>(cfg.heads));
    for (int h = 0; h < cfg.heads; ++h) {
        for (int j = 0; j < m; ++j) {
            keys[static_cast<std::size_t>(h)].push_back(ad::matmul(memory[static_cast<std::size_t>(j)], g.w_k[static_cast<std::size_t>(h)]));
            vals[static_cast<std::size_t>(h)].push_back(ad::matmul(memory[static_cast<std::size_t>(j)], g.w_v[static_cast<std::size_t>(h)]));
        }
        keys[static_cast<std::size_t>(h)].push_back(ad::matmul(x, g.w_k[static_cast<std::size_t>(h)]));
        vals[static_cast<std::size_t>(h)].push_back(ad::matmul(x, g.w_v[static_cast<std::size_t>(h)]));
    }

    RmcStepOut out;
    std::vector<Var> new_slots;
    for (int i = 0; i < m; ++i) {
        std::vector<Var> head_ctx;
        for (int h = 0; h < cfg.heads; ++h) {
            Var q = ad::matmul(memory[static_cast<std::size_t>(i)], g.w_q[static_cast<std::size_t>(h)]);
            std::vector<Var> scores;
            for (int j = 0; j <= m; ++j)
                scores.push_back(ad::scale(
                    ad::rowwise_sum(ad::cmul(q, keys[static_cast<std::size_t>(h)][static_cast<std::size_t>(j)])),
                    inv_sqrt_dk));
            Var attn = ad::softmax_rows(ad::concat_cols(scores));
            out.attention.push_back(attn);
            Var ctx = ad::mul_colvec(vals[static_cast<std::size_t>(h)][0], ad::col(attn, 0));
            for (int j = 1; j <= m; ++j)
                ctx = ad::add(ctx, ad::mul_colvec(vals[static_cast<std::size_t>(h)][static_cast<std::size_t>(j)],
                                                  ad::col(attn, j)));
            head_ctx.push_back(ctx);
        }
        Var m_tilde = cfg.heads == 1 ? head_ctx[0] : ad::concat_cols(head_ctx);
        out.attended.push_back(m_tilde);

        Var c = ad::concat_cols({m_tilde, memory[static_cast<std::size_t>(i)]});
        Var hidden = ad::tanh_(ad::add_rowvec(ad::matmul(c, g.w_mlp1), g.b_mlp1));
        Var mlp = ad::add_rowvec(ad::matmul(hidden, g.w_mlp2), g.b_mlp2);
        Var u = ad::add(m_tilde, mlp);  // residual
        Var gate_i = ad::sigmoid(ad::add_rowvec(ad::matmul(c, g.w_gate_i), g.b_gate_i));
        Var gate_f = ad::sigmoid(ad::add_rowvec(ad::matmul(c, g.w_gate_f), g.b_gate_f));
        new_slots.push_back(ad::add(ad::cmul(gate_f, memory[static_cast<std::size_t>(i)]),
                                    ad::cmul(gate_i, ad::tanh_(u))));
    }
    out.memory = new_slots;
    Var flat = m == 1 ? new_slots[0] : ad::concat_cols(new_slots);
    out.logits = ad::add_rowvec(ad::matmul(flat, g.w_out), g.b_out);
    return out;
}

// Initial memory: the learned m0 replicated across the batch, one Var per slot.
inline std::vector<Var> initial_memory(Tape& tape, const GeneratorVars& g, int batch) {
    std::vector<Var> slots;
    for (int i = 0; i < g.cfg->slots; ++i) {
        std::vector<int> rep(static_cast<std::size_t>(batch), i);
        slots.push_back(ad::gather_rows(g.m0, rep));
    }
    return slots;
}

// Row-wise argmax with ties broken toward the lowest index.
inline int argmax_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    int best = 0;
    for (Eigen::Index j = 1; j < row.size(); ++j)
        if (row(j) > row(best)) best = static_cast<int>(j);
    return best;
}

struct GumbelDraw {
    int token = 0;
    Eigen::RowVectorXd soft;
};

// Gumbel-Max sample plus its Gumbel-Softmax relaxation of one logit row.
// The temperature multiplies the perturbed logits, so larger tau sharpens.
inline GumbelDraw gumbel_sample(const Eigen::RowVectorXd& logits, double tau, Rng& rng) {
    if (!(tau > 0.0)) throw std::invalid_argument("gumbel_sample: tau must be positive");
    Eigen::RowVectorXd g(logits.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = rng.gumbel();
    Eigen::RowVectorXd z = logits + g;
    GumbelDraw d;
    d.token = argmax_row(z);
    Eigen::ArrayXd s = tau * (z.transpose().array() - z.maxCoeff());
    Eigen::ArrayXd e = s.exp();
    d.soft = (e / e.sum()).matrix().transpose();
    return d;
}

struct SoftSequenceBatch {
    std::vector<Var> soft;      // T entries, each B x V, rows on the simplex
    std::vector<Var> logits;    // T entries, each B x V, pre-noise
    Eigen::MatrixXi hard;       // B x T discrete tokens
    std::vector<int> categories;
    double tau = 1.0;
};

// Noise provider: returns the B x V Gumbel matrix for step t. Tests freeze it.
using NoiseFn = std::function<Mat(int t, Eigen::Index rows, Eigen::Index cols)>;

inline NoiseFn gumbel_noise(std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    return [rng](int, Eigen::Index r, Eigen::Index c) {
        Mat g(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) g(i, j) = rng->gumbel();
        return g;
    };
}

// Ancestral rollout of one batch: starts from <bos> and the learned initial
// memory, samples with Gumbel-Max and records the softmax relaxation at the
// given temperature. Gradients flow from the soft rows back into the
// parameters; the hard token (default) or the soft row feeds the next step.
inline SoftSequenceBatch generate(Tape& tape, const GeneratorVars& g,
                                  const std::vector<int>& categories, int T,
                                  double tau, const NoiseFn& noise) {
    const GeneratorConfig& cfg = *g.cfg;
    if (!(tau > 0.0)) throw std::invalid_argument("generate: tau must be positive");
    const int B = static_cast<int>(categories.size());
    if (B == 0) return SoftSequenceBatch{{}, {}, Eigen::MatrixXi(0, T), {}, tau};
    for (int c : categories)
        if (c < 0 || c >= cfg.categories)
            throw std::out_of_range("generate: category id out of range");

    SoftSequenceBatch out;
    out.categories = categories;
    out.tau = tau;
    out.hard.resize(B, T);

    std::vector<Var> memory = initial_memory(tape, g, B);
    std::vector<int> prev_ids(static_cast<std::size_t>(B), cfg.bos_id);
    Var prev_soft;  // used only in soft-feedback mode
    for (int t = 0; t < T; ++t) {
        Var x = (cfg.soft_feedback && t > 0)
            ? embed_input_soft(tape, g, prev_soft, categories)
            : embed_input_hard(tape, g, prev_ids, categories);
        RmcStepOut step = rmc_step(tape, g, memory, x);
        memory = step.memory;
        if (!step.logits.value().allFinite())
            throw std::runtime_error("generate: non-finite logits at step " + std::to_string(t));

        Mat gnoise = noise(t, B, cfg.vocab_size);
        Mat perturbed = step.logits.value() + gnoise;
        for (int i = 0; i < B; ++i) {
            const int y = argmax_row(perturbed.row(i));
            out.hard(i, t) = y;
            prev_ids[static_cast<std::size_t>(i)] = y;
        }
        Var soft = ad::softmax_rows(ad::scale(ad::add(step.logits, ad::constant(tape, gnoise)), tau));
        out.soft.push_back(soft);
        out.logits.push_back(step.logits);
        prev_soft = soft;
    }
    return out;
}

// Teacher-forced log-probability of each sequence (rows of `ids`) under the
// generator, conditioned per row on `categories`. No noise, no temperature.
// Returns a B x 1 column of summed per-step log-probabilities in nats.
inline Var sequence_log_prob(Tape& tape, const GeneratorVars& g,
                             const Eigen::MatrixXi& ids,
                             const std::vector<int>& categories) {
    const GeneratorConfig& cfg = *g.cfg;
    const int B = static_cast<int>(ids.rows());
    const int T = static_cast<int>(ids.cols());
    if (static_cast<int>(categories.size()) != B)
        throw std::invalid_argument("sequence_log_prob: category count mismatch");

    std::vector<Var> memory = initial_memory(tape, g, B);
    std::vector<int> prev(static_cast<std::size_t>(B), cfg.bos_id);
    Var total;
    for (int t = 0; t < T; ++t) {
        Var x = embed_input_hard(tape, g, prev, categories);
        RmcStepOut step = rmc_step(tape, g, memory, x);
        memory = step.memory;
        std::vector<int> target(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) {
            const int y = ids(i, t);
            if (y < 0 || y >= cfg.vocab_size)
                throw std::out_of_range("sequence_log_prob: token id out of vocabulary");
            target[static_cast<std::size_t>(i)] = y;
            prev[static_cast<std::size_t>(i)] = y;
        }
        Var lp = ad::pick_per_row(ad::log_softmax_rows(step.logits), target);
        total = (t == 0) ? lp : ad::add(total, lp);
    }
    return total;
}

// Convenience scalar version for a single sequence.
inline double sequence_log_prob(const GeneratorParams& params, const std::vector<int>& ids,
                                int category) {
    Tape tape(false);
    GeneratorVars g = GeneratorVars::lift(tape, params, false);
    Eigen::MatrixXi m(1, static_cast<Eigen::Index>(ids.size()));
    for (std::size_t t = 0; t < ids.size(); ++t) m(0, static_cast<Eigen::Index>(t)) = ids[t];
    return sequence_log_prob(tape, g, m, {category}).value()(0, 0);
}

// Hard samples only (no gradient bookkeeping), for metrics and data dumps.
inline Eigen::MatrixXi sample_hard(const GeneratorParams& params,
                                   const std::vector<int>& categories, int T,
                                   std::uint64_t seed) {
    Tape tape(false);
    GeneratorVars g = GeneratorVars::lift(tape, params, false);
    SoftSequenceBatch r = generate(tape, g, categories, T, 1.0, gumbel_noise(seed));
    return r.hard;
}

} // namespace catgan

#endif // CATGAN_GENERATOR_HPP
