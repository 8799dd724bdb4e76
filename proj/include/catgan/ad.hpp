#ifndef CATGAN_AD_HPP
#define CATGAN_AD_HPP

#include <Eigen/Dense>

#include <cassert>
#include <cstddef>
#include <deque>
#include <functional>
#include <stdexcept>
#include <vector>

namespace catgan::ad {

using Mat = Eigen::MatrixXd;

// Reverse-mode tape over dense double matrices. A Tape owns every node of one
// computation; Vars are cheap handles into it. Graphs are built eagerly
// (values computed at op call time) and differentiated once with backward().
// Constructing a Tape with grad_enabled=false skips all closure bookkeeping,
// which makes the same forward code usable for plain evaluation.
class Tape {
public:
    struct Node {
        Mat val;
        Mat grad;                    // empty until gradient first touches it
        std::function<void()> back;
        bool needs_grad = false;
    };

    explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    bool grad_enabled() const { return grad_enabled_; }

    std::size_t push(Mat val, bool needs_grad) {
        nodes_.emplace_back();
        nodes_.back().val = std::move(val);
        nodes_.back().needs_grad = needs_grad && grad_enabled_;
        return nodes_.size() - 1;
    }

    Node& node(std::size_t i) { return nodes_[i]; }
    const Node& node(std::size_t i) const { return nodes_[i]; }

    // Gradient buffer of node i, zero-initialized to the value's shape.
    Mat& grad_of(std::size_t i) {
        Node& n = nodes_[i];
        if (n.grad.size() == 0) n.grad = Mat::Zero(n.val.rows(), n.val.cols());
        return n.grad;
    }

    void backward(std::size_t root) {
        Node& r = nodes_[root];
        if (r.val.rows() != 1 || r.val.cols() != 1)
            throw std::invalid_argument("backward: root must be a 1x1 scalar node");
        grad_of(root)(0, 0) = 1.0;
        for (std::size_t i = root + 1; i-- > 0;) {
            Node& n = nodes_[i];
            if (n.needs_grad && n.grad.size() != 0 && n.back) n.back();
        }
    }

private:
    std::deque<Node> nodes_;   // deque: stable references while growing
    bool grad_enabled_;
};

class Var {
public:
    Var() = default;
    Var(Tape* tape, std::size_t idx) : tape_(tape), idx_(idx) {}

    const Mat& value() const { return tape_->node(idx_).val; }
    // Gradient after backward(); zero-shaped if no gradient reached the node.
    Mat grad() const {
        const Mat& g = tape_->node(idx_).grad;
        if (g.size() == 0) {
            const Mat& v = value();
            return Mat::Zero(v.rows(), v.cols());
        }
        return g;
    }
    bool needs_grad() const { return tape_->node(idx_).needs_grad; }
    std::size_t index() const { return idx_; }
    Tape* tape() const { return tape_; }

    Eigen::Index rows() const { return value().rows(); }
    Eigen::Index cols() const { return value().cols(); }

private:
    Tape* tape_ = nullptr;
    std::size_t idx_ = 0;
};

inline void backward(const Var& root) { root.tape()->backward(root.index()); }

inline Var leaf(Tape& t, Mat v, bool requires_grad = false) {
    return Var(&t, t.push(std::move(v), requires_grad));
}

inline Var constant(Tape& t, Mat v) { return leaf(t, std::move(v), false); }

inline Var scalar(Tape& t, double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return constant(t, m);
}

namespace detail {

inline Var unary(Tape& t, const Var& a, Mat val,
                 std::function<void(const Mat& go, Mat& ga)> back) {
    const bool ng = a.needs_grad();
    std::size_t out = t.push(std::move(val), ng);
    if (ng) {
        std::size_t ai = a.index();
        t.node(out).back = [&t, out, ai, back = std::move(back)] {
            back(t.node(out).grad, t.grad_of(ai));
        };
    }
    return Var(&t, out);
}

inline Var binary(Tape& t, const Var& a, const Var& b, Mat val,
                  std::function<void(const Mat& go, Mat& ga)> back_a,
                  std::function<void(const Mat& go, Mat& gb)> back_b) {
    const bool na = a.needs_grad(), nb = b.needs_grad();
    std::size_t out = t.push(std::move(val), na || nb);
    if (na || nb) {
        std::size_t ai = a.index(), bi = b.index();
        t.node(out).back = [&t, out, ai, bi, na, nb,
                            back_a = std::move(back_a), back_b = std::move(back_b)] {
            const Mat& go = t.node(out).grad;
            if (na) back_a(go, t.grad_of(ai));
            if (nb) back_b(go, t.grad_of(bi));
        };
    }
    return Var(&t, out);
}

} // namespace detail

inline Var matmul(const Var& a, const Var& b) {
    Tape& t = *a.tape();
    assert(a.cols() == b.rows());
    Mat av = a.value(), bv = b.value();
    return detail::binary(
        t, a, b, av * bv,
        [bv](const Mat& go, Mat& ga) { ga.noalias() += go * bv.transpose(); },
        [av](const Mat& go, Mat& gb) { gb.noalias() += av.transpose() * go; });
}

inline Var add(const Var& a, const Var& b) {
    Tape& t = *a.tape();
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    return detail::binary(
        t, a, b, a.value() + b.value(),
        [](const Mat& go, Mat& ga) { ga += go; },
        [](const Mat& go, Mat& gb) { gb += go; });
}

inline Var sub(const Var& a, const Var& b) {
    Tape& t = *a.tape();
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    return detail::binary(
        t, a, b, a.value() - b.value(),
        [](const Mat& go, Mat& ga) { ga += go; },
        [](const Mat& go, Mat& gb) { gb -= go; });
}

inline Var cmul(const Var& a, const Var& b) {
    Tape& t = *a.tape();
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Mat av = a.value(), bv = b.value();
    return detail::binary(
        t, a, b, av.cwiseProduct(bv),
        [bv](const Mat& go, Mat& ga) { ga += go.cwiseProduct(bv); },
        [av](const Mat& go, Mat& gb) { gb += go.cwiseProduct(av); });
}

inline Var neg(const Var& a) {
    Tape& t = *a.tape();
    return detail::unary(t, a, -a.value(),
                         [](const Mat& go, Mat& ga) { ga -= go; });
}

inline Var scale(const Var& a, double s) {
    Tape& t = *a.tape();
    return detail::unary(t, a, a.value() * s,
                         [s](const Mat& go, Mat& ga) { ga += s * go; });
}

// a: n x d, row: 1 x d, broadcast over rows
inline Var add_rowvec(const Var& a, const Var& row) {
    Tape& t = *a.tape();
    assert(row.rows() == 1 && row.cols() == a.cols());
    Mat v = a.value();
    v.rowwise() += row.value().row(0);
    return detail::binary(
        t, a, row, std::move(v),
        [](const Mat& go, Mat& ga) { ga += go; },
        [](const Mat& go, Mat& gr) { gr += go.colwise().sum(); });
}

// a: n x d, colv: n x 1, broadcast over columns
inline Var mul_colvec(const Var& a, const Var& colv) {
    Tape& t = *a.tape();
    assert(colv.cols() == 1 && colv.rows() == a.rows());
    Mat av = a.value();
    Eigen::VectorXd cv = colv.value().col(0);
    Mat v = (av.array().colwise() * cv.array()).matrix();
    return detail::binary(
        t, a, colv, std::move(v),
        [cv](const Mat& go, Mat& ga) { ga += (go.array().colwise() * cv.array()).matrix(); },
        [av](const Mat& go, Mat& gc) { gc += go.cwiseProduct(av).rowwise().sum(); });
}

// a - s, s a 1x1 node broadcast to a's shape
inline Var sub_scalar_node(const Var& a, const Var& s) {
    Tape& t = *a.tape();
    assert(s.rows() == 1 && s.cols() == 1);
    return detail::binary(
        t, a, s, (a.value().array() - s.value()(0, 0)).matrix(),
        [](const Mat& go, Mat& ga) { ga += go; },
        [](const Mat& go, Mat& gs) { gs(0, 0) -= go.sum(); });
}

inline Var sigmoid(const Var& a) {
    Tape& t = *a.tape();
    Mat y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
    return detail::unary(t, a, y, [y](const Mat& go, Mat& ga) {
        ga += go.cwiseProduct((y.array() * (1.0 - y.array())).matrix());
    });
}

inline Var tanh_(const Var& a) {
    Tape& t = *a.tape();
    Mat y = a.value().array().tanh().matrix();
    return detail::unary(t, a, y, [y](const Mat& go, Mat& ga) {
        ga += go.cwiseProduct((1.0 - y.array().square()).matrix());
    });
}

inline Var relu(const Var& a) {
    Tape& t = *a.tape();
    Mat av = a.value();
    return detail::unary(t, a, av.cwiseMax(0.0), [av](const Mat& go, Mat& ga) {
        ga += go.cwiseProduct((av.array() > 0.0).cast<double>().matrix());
    });
}

inline Var log_(const Var& a) {
    Tape& t = *a.tape();
    Mat av = a.value();
    return detail::unary(t, a, av.array().log().matrix(), [av](const Mat& go, Mat& ga) {
        ga += go.cwiseQuotient(av);
    });
}

inline Var clamp_min(const Var& a, double lo) {
    Tape& t = *a.tape();
    Mat av = a.value();
    return detail::unary(t, a, av.cwiseMax(lo), [av, lo](const Mat& go, Mat& ga) {
        ga += go.cwiseProduct((av.array() >= lo).cast<double>().matrix());
    });
}

inline Var softmax_rows(const Var& a) {
    Tape& t = *a.tape();
    Mat x = a.value();
    Mat y(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        Eigen::ArrayXd z = x.row(i).transpose().array() - x.row(i).maxCoeff();
        Eigen::ArrayXd e = z.exp();
        y.row(i) = (e / e.sum()).matrix().transpose();
    }
    return detail::unary(t, a, y, [y](const Mat& go, Mat& ga) {
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            const double dot = go.row(i).dot(y.row(i));
            ga.row(i) += (y.row(i).array() * (go.row(i).array() - dot)).matrix();
        }
    });
}

inline Var log_softmax_rows(const Var& a) {
    Tape& t = *a.tape();
    Mat x = a.value();
    Mat y(x.rows(), x.cols());
    Mat sm(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double mx = x.row(i).maxCoeff();
        Eigen::ArrayXd z = x.row(i).transpose().array() - mx;
        Eigen::ArrayXd e = z.exp();
        const double lse = std::log(e.sum());
        y.row(i) = (z - lse).matrix().transpose();
        sm.row(i) = (e / e.sum()).matrix().transpose();
    }
    return detail::unary(t, a, y, [sm](const Mat& go, Mat& ga) {
        for (Eigen::Index i = 0; i < sm.rows(); ++i)
            ga.row(i) += go.row(i) - go.row(i).sum() * sm.row(i);
    });
}

inline Var rowwise_sum(const Var& a) {
    Tape& t = *a.tape();
    const Eigen::Index c = a.cols();
    return detail::unary(t, a, a.value().rowwise().sum(), [c](const Mat& go, Mat& ga) {
        ga += go.col(0).replicate(1, c);
    });
}

inline Var sum_all(const Var& a) {
    Tape& t = *a.tape();
    Mat v(1, 1);
    v(0, 0) = a.value().sum();
    return detail::unary(t, a, v, [](const Mat& go, Mat& ga) {
        ga.array() += go(0, 0);
    });
}

inline Var mean_all(const Var& a) {
    Tape& t = *a.tape();
    const double n = static_cast<double>(a.value().size());
    Mat v(1, 1);
    v(0, 0) = a.value().sum() / n;
    return detail::unary(t, a, v, [n](const Mat& go, Mat& ga) {
        ga.array() += go(0, 0) / n;
    });
}

inline Var concat_cols(const std::vector<Var>& parts) {
    assert(!parts.empty());
    Tape& t = *parts.front().tape();
    const Eigen::Index r = parts.front().rows();
    Eigen::Index c = 0;
    bool ng = false;
    for (const Var& p : parts) {
        assert(p.rows() == r);
        c += p.cols();
        ng = ng || p.needs_grad();
    }
    Mat v(r, c);
    Eigen::Index off = 0;
    for (const Var& p : parts) {
        v.middleCols(off, p.cols()) = p.value();
        off += p.cols();
    }
    std::size_t out = t.push(std::move(v), ng);
    if (ng && t.grad_enabled()) {
        std::vector<std::size_t> idx;
        std::vector<Eigen::Index> widths;
        std::vector<bool> needs;
        for (const Var& p : parts) {
            idx.push_back(p.index());
            widths.push_back(p.cols());
            needs.push_back(p.needs_grad());
        }
        t.node(out).back = [&t, out, idx, widths, needs] {
            const Mat& go = t.node(out).grad;
            Eigen::Index off2 = 0;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (needs[i]) t.grad_of(idx[i]) += go.middleCols(off2, widths[i]);
                off2 += widths[i];
            }
        };
    }
    return Var(&t, out);
}

inline Var concat_rows(const std::vector<Var>& parts) {
    assert(!parts.empty());
    Tape& t = *parts.front().tape();
    const Eigen::Index c = parts.front().cols();
    Eigen::Index r = 0;
    bool ng = false;
    for (const Var& p : parts) {
        assert(p.cols() == c);
        r += p.rows();
        ng = ng || p.needs_grad();
    }
    Mat v(r, c);
    Eigen::Index off = 0;
    for (const Var& p : parts) {
        v.middleRows(off, p.rows()) = p.value();
        off += p.rows();
    }
    std::size_t out = t.push(std::move(v), ng);
    if (ng && t.grad_enabled()) {
        std::vector<std::size_t> idx;
        std::vector<Eigen::Index> heights;
        std::vector<bool> needs;
        for (const Var& p : parts) {
            idx.push_back(p.index());
            heights.push_back(p.rows());
            needs.push_back(p.needs_grad());
        }
        t.node(out).back = [&t, out, idx, heights, needs] {
            const Mat& go = t.node(out).grad;
            Eigen::Index off2 = 0;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (needs[i]) t.grad_of(idx[i]) += go.middleRows(off2, heights[i]);
                off2 += heights[i];
            }
        };
    }
    return Var(&t, out);
}

inline Var col(const Var& a, Eigen::Index j) {
    Tape& t = *a.tape();
    assert(j < a.cols());
    return detail::unary(t, a, a.value().col(j), [j](const Mat& go, Mat& ga) {
        ga.col(j) += go.col(0);
    });
}

// rows of `table` selected by integer ids; backward scatter-adds
inline Var gather_rows(const Var& table, std::vector<int> ids) {
    Tape& t = *table.tape();
    Mat v(static_cast<Eigen::Index>(ids.size()), table.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        assert(ids[i] >= 0 && ids[i] < table.rows());
        v.row(static_cast<Eigen::Index>(i)) = table.value().row(ids[i]);
    }
    return detail::unary(t, table, std::move(v), [ids](const Mat& go, Mat& gt) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            gt.row(ids[i]) += go.row(static_cast<Eigen::Index>(i));
    });
}

// out(i, 0) = a(i, ids[i])
inline Var pick_per_row(const Var& a, std::vector<int> ids) {
    Tape& t = *a.tape();
    assert(static_cast<Eigen::Index>(ids.size()) == a.rows());
    Mat v(a.rows(), 1);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        assert(ids[i] >= 0 && ids[i] < a.cols());
        v(i, 0) = a.value()(i, ids[i]);
    }
    return detail::unary(t, a, std::move(v), [ids](const Mat& go, Mat& ga) {
        for (Eigen::Index i = 0; i < ga.rows(); ++i) ga(i, ids[i]) += go(i, 0);
    });
}

// elementwise max; ties route the gradient to a
inline Var cmax(const Var& a, const Var& b) {
    Tape& t = *a.tape();
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Mat av = a.value(), bv = b.value();
    return detail::binary(
        t, a, b, av.cwiseMax(bv),
        [av, bv](const Mat& go, Mat& ga) {
            ga += go.cwiseProduct((av.array() >= bv.array()).cast<double>().matrix());
        },
        [av, bv](const Mat& go, Mat& gb) {
            gb += go.cwiseProduct((av.array() < bv.array()).cast<double>().matrix());
        });
}

} // namespace catgan::ad

#endif // CATGAN_AD_HPP
