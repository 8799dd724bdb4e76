#ifndef CATGAN_ADAM_HPP
#define CATGAN_ADAM_HPP

#include "catgan/ad.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace catgan {

// Adaptive-moment gradient descent with bias correction. Moment buffers are
// keyed by parameter name so the state can ride along in checkpoints and be
// deep-copied together with its parameters.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long step = 0;
    std::map<std::string, std::pair<ad::Mat, ad::Mat>> moments;  // name -> (m, v)
};

template <typename Params>
void adam_step(Params& params, const std::map<std::string, ad::Mat>& grads,
               AdamState& state, double lr) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    params.visit([&](const std::string& name, ad::Mat& p) {
        auto git = grads.find(name);
        if (git == grads.end()) throw std::invalid_argument("adam: missing gradient for " + name);
        const ad::Mat& g = git->second;
        if (g.rows() != p.rows() || g.cols() != p.cols())
            throw std::invalid_argument("adam: gradient shape mismatch for " + name);
        auto& [m, v] = state.moments[name];
        if (m.size() == 0) {
            m = ad::Mat::Zero(p.rows(), p.cols());
            v = ad::Mat::Zero(p.rows(), p.cols());
        }
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
        const ad::Mat m_hat = m / bc1;
        const ad::Mat v_hat = v / bc2;
        p -= lr * (m_hat.array() / (v_hat.array().sqrt() + state.eps)).matrix();
    });
}

// Collect leaf gradients from a lifted Vars mirror after backward().
template <typename Vars>
std::map<std::string, ad::Mat> collect_grads(const Vars& vars) {
    std::map<std::string, ad::Mat> grads;
    vars.visit([&](const std::string& name, const ad::Var& v) { grads[name] = v.grad(); });
    return grads;
}

template <typename Vars>
bool grads_finite(const std::map<std::string, ad::Mat>& grads) {
    for (const auto& [name, g] : grads)
        if (!g.allFinite()) return false;
    return true;
}

} // namespace catgan

#endif // CATGAN_ADAM_HPP
