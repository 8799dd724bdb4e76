#ifndef CATGAN_OBJECTIVES_HPP
#define CATGAN_OBJECTIVES_HPP

#include "catgan/ad.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace catgan {

// Log arguments are clamped here so saturated relativistic scores keep every
// loss finite.
inline constexpr double kLogClamp = 1e-12;

// Discriminator logits of one real batch and one fake batch, as B x 1 tape
// columns. The same structure feeds the discriminator and generator losses.
struct LogitPair {
    ad::Var real;
    ad::Var fake;
};

namespace detail {

inline void check_pair(const LogitPair& p) {
    if (p.real.value().size() == 0 || p.fake.value().size() == 0)
        throw std::invalid_argument("objectives: empty logit batch");
    if (!p.real.value().allFinite() || !p.fake.value().allFinite())
        throw std::invalid_argument("objectives: non-finite logit");
}

inline ad::Var mean_log_sigmoid(const ad::Var& x) {
    return ad::mean_all(ad::log_(ad::clamp_min(ad::sigmoid(x), kLogClamp)));
}

} // namespace detail

// L^Ra: -E[log D̄(real)] - E[log(1 - D̄(fake))], with the relativistic
// relation D̄ measured against the opposite population's batch-mean logit.
inline ad::Var loss_ra(const LogitPair& pair) {
    detail::check_pair(pair);
    ad::Var mean_fake = ad::mean_all(pair.fake);
    ad::Var mean_real = ad::mean_all(pair.real);
    // 1 - sigmoid(a - b) == sigmoid(b - a)
    ad::Var real_term = detail::mean_log_sigmoid(ad::sub_scalar_node(pair.real, mean_fake));
    ad::Var fake_term = detail::mean_log_sigmoid(ad::neg(ad::sub_scalar_node(pair.fake, mean_real)));
    return ad::neg(ad::add(real_term, fake_term));
}

// Discriminator objective: per-category relativistic losses plus the
// all-category term.
inline ad::Var d_loss_catra(const std::vector<LogitPair>& per_category, const LogitPair& all) {
    if (per_category.empty()) throw std::invalid_argument("d_loss_catra: no category pairs");
    ad::Var total = loss_ra(per_category[0]);
    for (std::size_t c = 1; c < per_category.size(); ++c)
        total = ad::add(total, loss_ra(per_category[c]));
    return ad::add(total, loss_ra(all));
}

inline ad::Var g_loss_catra(const std::vector<LogitPair>& per_category, const LogitPair& all) {
    return ad::neg(d_loss_catra(per_category, all));
}

// Alternative generator objective: pairwise fake-vs-real differences, the
// i-th fake matched with the i-th real within each pair.
inline ad::Var g_loss_catrs(const std::vector<LogitPair>& per_category, const LogitPair& all) {
    if (per_category.empty()) throw std::invalid_argument("g_loss_catrs: no category pairs");
    auto term = [](const LogitPair& p) {
        detail::check_pair(p);
        if (p.real.rows() != p.fake.rows())
            throw std::invalid_argument("g_loss_catrs: real/fake batch length mismatch");
        return detail::mean_log_sigmoid(ad::sub(p.fake, p.real));
    };
    ad::Var total = term(per_category[0]);
    for (std::size_t c = 1; c < per_category.size(); ++c)
        total = ad::add(total, term(per_category[c]));
    return ad::neg(ad::add(total, term(all)));
}

// ---- plain-number views (evaluation and tests) ----

struct LogitBatchPair {
    std::vector<double> real;
    std::vector<double> fake;
};

namespace detail {

inline ad::Var lift_col(ad::Tape& t, const std::vector<double>& v) {
    ad::Mat m(static_cast<Eigen::Index>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
    return ad::constant(t, m);
}

inline LogitPair lift_pair(ad::Tape& t, const LogitBatchPair& p) {
    return LogitPair{lift_col(t, p.real), lift_col(t, p.fake)};
}

template <typename Fn>
double eval_scalar(Fn&& fn) {
    ad::Tape tape(false);
    return fn(tape).value()(0, 0);
}

} // namespace detail

enum class Side { Real, Fake };

// D̄ of every logit on one side: sigmoid of the logit minus the opposite
// side's batch mean. Values lie strictly inside (0,1).
inline std::vector<double> relativistic_score(const LogitBatchPair& pair, Side side) {
    if (pair.real.empty() || pair.fake.empty())
        throw std::invalid_argument("relativistic_score: empty logit batch");
    const std::vector<double>& own = side == Side::Real ? pair.real : pair.fake;
    const std::vector<double>& other = side == Side::Real ? pair.fake : pair.real;
    double mean = 0.0;
    for (double v : other) mean += v;
    mean /= static_cast<double>(other.size());
    std::vector<double> out;
    out.reserve(own.size());
    for (double v : own) out.push_back(1.0 / (1.0 + std::exp(-(v - mean))));
    return out;
}

inline double loss_ra(const LogitBatchPair& pair) {
    return detail::eval_scalar([&](ad::Tape& t) { return loss_ra(detail::lift_pair(t, pair)); });
}

inline double d_loss_catra(const std::vector<LogitBatchPair>& per_category,
                           const LogitBatchPair& all, int k) {
    if (static_cast<int>(per_category.size()) != k)
        throw std::invalid_argument("d_loss_catra: expected exactly k category pairs");
    return detail::eval_scalar([&](ad::Tape& t) {
        std::vector<LogitPair> pairs;
        for (const auto& p : per_category) pairs.push_back(detail::lift_pair(t, p));
        return d_loss_catra(pairs, detail::lift_pair(t, all));
    });
}

inline double g_loss_catra(const std::vector<LogitBatchPair>& per_category,
                           const LogitBatchPair& all, int k) {
    return -d_loss_catra(per_category, all, k);
}

inline double g_loss_catrs(const std::vector<LogitBatchPair>& per_category,
                           const LogitBatchPair& all) {
    return detail::eval_scalar([&](ad::Tape& t) {
        std::vector<LogitPair> pairs;
        for (const auto& p : per_category) pairs.push_back(detail::lift_pair(t, p));
        return g_loss_catrs(pairs, detail::lift_pair(t, all));
    });
}

} // namespace catgan

#endif // CATGAN_OBJECTIVES_HPP
