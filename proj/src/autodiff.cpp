#include "redelex/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "redelex/error.hpp"
#include "redelex/threads.hpp"

namespace redelex {

// ---- ParamStore / Adam -------------------------------------------------------

Tensor* ParamStore::add(const std::string& name, int64_t rows, int64_t cols, Rng& rng) {
    Entry e;
    e.name = name;
    e.value = Tensor(rows, cols);
    double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (auto& x : e.value.v) x = rng.next_range(-a, a);
    e.m = Tensor(rows, cols);
    e.s = Tensor(rows, cols);
    entries_.push_back(std::move(e));
    return &entries_.back().value;
}

Tensor* ParamStore::add_zeros(const std::string& name, int64_t rows, int64_t cols) {
    Entry e;
    e.name = name;
    e.value = Tensor(rows, cols);
    e.m = Tensor(rows, cols);
    e.s = Tensor(rows, cols);
    entries_.push_back(std::move(e));
    return &entries_.back().value;
}

Tensor* ParamStore::find(const std::string& name) {
    for (auto& e : entries_)
        if (e.name == name) return &e.value;
    return nullptr;
}

const Tensor* ParamStore::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e.value;
    return nullptr;
}

void ParamStore::zero_grads() {
    for (auto& e : entries_) e.value.zero_grad();
}

int64_t ParamStore::total_params() const {
    int64_t n = 0;
    for (const auto& e : entries_) n += e.value.numel();
    return n;
}

void adam_step(AdamState& state, ParamStore& params) {
    ++state.step;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (auto& e : params.entries()) {
        if (!e.m.same_shape(e.value) || !e.s.same_shape(e.value))
            raise(ErrorCode::ShapeMismatch, "optimizer moments out of shape for " + e.name);
        size_t n = e.value.v.size();
        for (size_t i = 0; i < n; ++i) {
            double g = e.value.g[i];
            e.m.v[i] = state.beta1 * e.m.v[i] + (1.0 - state.beta1) * g;
            e.s.v[i] = state.beta2 * e.s.v[i] + (1.0 - state.beta2) * g * g;
            double mhat = e.m.v[i] / bc1;
            double shat = e.s.v[i] / bc2;
            e.value.v[i] -= state.lr * mhat / (std::sqrt(shat) + state.eps);
        }
    }
}

// ---- Graph ---------------------------------------------------------------------

namespace {

enum class Op : uint8_t {
    Constant,
    Param,
    Matmul,
    Add,
    AddRowVec,
    Relu,
    ConcatCols,
    RowSum,
    RowMean,
    Gather,
    ScatterAdd,
    RowScale,
    Scale,
    SoftmaxCe,
    SigmoidBce,
    SquaredError,
    AddN,
};

// C += A * B with deterministic per-element accumulation order (k ascending).
void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c) {
    int64_t m = a.rows, k = a.cols, n = b.cols;
    parallel_rows(m, [&](int64_t i) {
        double* crow = c.v.data() + i * n;
        const double* arow = a.v.data() + i * k;
        for (int64_t kk = 0; kk < k; ++kk) {
            double av = arow[kk];
            if (av == 0.0) continue;
            const double* brow = b.v.data() + kk * n;
            for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    });
}

}  // namespace

struct Graph::Node {
    Op op = Op::Constant;
    std::vector<ValueId> inputs;
    Tensor out;
    Tensor* external = nullptr;       // Param leaves
    std::vector<int64_t> idx;         // gather/scatter indices, CE labels
    std::vector<double> data;         // targets / row factors
    double factor = 1.0;              // Scale
    Tensor cache;                     // softmax probs / sigmoids
};

struct Graph::Impl {
    std::vector<Node> nodes;
};

Graph::Graph() : impl_(std::make_unique<Impl>()) {}
Graph::~Graph() = default;

Graph::ValueId Graph::push(Node node) {
    impl_->nodes.push_back(std::move(node));
    return static_cast<ValueId>(impl_->nodes.size() - 1);
}

const Tensor& Graph::value(ValueId id) const { return impl_->nodes[static_cast<size_t>(id)].out; }

Graph::ValueId Graph::constant(Tensor t) {
    Node n;
    n.op = Op::Constant;
    n.out = std::move(t);
    return push(std::move(n));
}

Graph::ValueId Graph::param(Tensor* p) {
    Node n;
    n.op = Op::Param;
    n.external = p;
    n.out = Tensor(p->rows, p->cols);
    n.out.v = p->v;  // copy values; gradients flow to the external tensor
    return push(std::move(n));
}

Graph::ValueId Graph::matmul(ValueId a, ValueId b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (ta.cols != tb.rows)
        raise(ErrorCode::ShapeMismatch,
              "matmul: " + std::to_string(ta.rows) + "x" + std::to_string(ta.cols) + " * " +
                  std::to_string(tb.rows) + "x" + std::to_string(tb.cols));
    Node n;
    n.op = Op::Matmul;
    n.inputs = {a, b};
    n.out = Tensor(ta.rows, tb.cols);
    matmul_acc(ta, tb, n.out);
    return push(std::move(n));
}

Graph::ValueId Graph::add(ValueId a, ValueId b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (!ta.same_shape(tb)) raise(ErrorCode::ShapeMismatch, "add: shapes differ");
    Node n;
    n.op = Op::Add;
    n.inputs = {a, b};
    n.out = Tensor(ta.rows, ta.cols);
    for (size_t i = 0; i < ta.v.size(); ++i) n.out.v[i] = ta.v[i] + tb.v[i];
    return push(std::move(n));
}

Graph::ValueId Graph::add_rowvec(ValueId a, ValueId bias) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(bias);
    if (tb.rows != 1 || tb.cols != ta.cols)
        raise(ErrorCode::ShapeMismatch, "add_rowvec: bias must be 1 x cols");
    Node n;
    n.op = Op::AddRowVec;
    n.inputs = {a, bias};
    n.out = Tensor(ta.rows, ta.cols);
    for (int64_t i = 0; i < ta.rows; ++i)
        for (int64_t j = 0; j < ta.cols; ++j)
            n.out.at(i, j) = ta.at(i, j) + tb.at(0, j);
    return push(std::move(n));
}

Graph::ValueId Graph::relu(ValueId a) {
    const Tensor& ta = value(a);
    Node n;
    n.op = Op::Relu;
    n.inputs = {a};
    n.out = Tensor(ta.rows, ta.cols);
    for (size_t i = 0; i < ta.v.size(); ++i) n.out.v[i] = ta.v[i] > 0.0 ? ta.v[i] : 0.0;
    return push(std::move(n));
}

Graph::ValueId Graph::concat_cols(const std::vector<ValueId>& parts) {
    if (parts.empty()) raise(ErrorCode::ShapeMismatch, "concat of nothing");
    int64_t rows = value(parts[0]).rows;
    int64_t cols = 0;
    for (ValueId p : parts) {
        if (value(p).rows != rows) raise(ErrorCode::ShapeMismatch, "concat: row counts differ");
        cols += value(p).cols;
    }
    Node n;
    n.op = Op::ConcatCols;
    n.inputs = parts;
    n.out = Tensor(rows, cols);
    int64_t at = 0;
    for (ValueId p : parts) {
        const Tensor& t = value(p);
        for (int64_t i = 0; i < rows; ++i)
            std::copy(t.v.begin() + i * t.cols, t.v.begin() + (i + 1) * t.cols,
                      n.out.v.begin() + i * cols + at);
        at += t.cols;
    }
    return push(std::move(n));
}

Graph::ValueId Graph::row_sum(ValueId a) {
    const Tensor& ta = value(a);
    Node n;
    n.op = Op::RowSum;
    n.inputs = {a};
    n.out = Tensor(1, ta.cols);
    for (int64_t i = 0; i < ta.rows; ++i)
        for (int64_t j = 0; j < ta.cols; ++j) n.out.at(0, j) += ta.at(i, j);
    return push(std::move(n));
}

Graph::ValueId Graph::row_mean(ValueId a) {
    const Tensor& ta = value(a);
    if (ta.rows == 0) raise(ErrorCode::ShapeMismatch, "row_mean of empty tensor");
    Node n;
    n.op = Op::RowMean;
    n.inputs = {a};
    n.out = Tensor(1, ta.cols);
    for (int64_t i = 0; i < ta.rows; ++i)
        for (int64_t j = 0; j < ta.cols; ++j) n.out.at(0, j) += ta.at(i, j);
    for (int64_t j = 0; j < ta.cols; ++j) n.out.at(0, j) /= static_cast<double>(ta.rows);
    return push(std::move(n));
}

Graph::ValueId Graph::gather(ValueId table, std::vector<int64_t> idx) {
    const Tensor& t = value(table);
    for (int64_t i : idx)
        if (i < 0 || i >= t.rows) raise(ErrorCode::ShapeMismatch, "gather index out of range");
    Node n;
    n.op = Op::Gather;
    n.inputs = {table};
    n.out = Tensor(static_cast<int64_t>(idx.size()), t.cols);
    for (size_t r = 0; r < idx.size(); ++r)
        std::copy(t.v.begin() + idx[r] * t.cols, t.v.begin() + (idx[r] + 1) * t.cols,
                  n.out.v.begin() + static_cast<int64_t>(r) * t.cols);
    n.idx = std::move(idx);
    return push(std::move(n));
}

Graph::ValueId Graph::scatter_add(ValueId src, std::vector<int64_t> idx, int64_t out_rows) {
    const Tensor& t = value(src);
    if (static_cast<int64_t>(idx.size()) != t.rows)
        raise(ErrorCode::ShapeMismatch, "scatter_add: one index per source row");
    for (int64_t i : idx)
        if (i < 0 || i >= out_rows) raise(ErrorCode::ShapeMismatch, "scatter index out of range");
    Node n;
    n.op = Op::ScatterAdd;
    n.inputs = {src};
    n.out = Tensor(out_rows, t.cols);
    for (size_t r = 0; r < idx.size(); ++r)
        for (int64_t j = 0; j < t.cols; ++j)
            n.out.at(idx[r], j) += t.at(static_cast<int64_t>(r), j);
    n.idx = std::move(idx);
    return push(std::move(n));
}

Graph::ValueId Graph::row_scale(ValueId a, std::vector<double> factors) {
    const Tensor& ta = value(a);
    if (static_cast<int64_t>(factors.size()) != ta.rows)
        raise(ErrorCode::ShapeMismatch, "row_scale: one factor per row");
    Node n;
    n.op = Op::RowScale;
    n.inputs = {a};
    n.out = Tensor(ta.rows, ta.cols);
    for (int64_t i = 0; i < ta.rows; ++i)
        for (int64_t j = 0; j < ta.cols; ++j)
            n.out.at(i, j) = ta.at(i, j) * factors[static_cast<size_t>(i)];
    n.data = std::move(factors);
    return push(std::move(n));
}

Graph::ValueId Graph::scale(ValueId a, double factor) {
    const Tensor& ta = value(a);
    Node n;
    n.op = Op::Scale;
    n.inputs = {a};
    n.factor = factor;
    n.out = Tensor(ta.rows, ta.cols);
    for (size_t i = 0; i < ta.v.size(); ++i) n.out.v[i] = ta.v[i] * factor;
    return push(std::move(n));
}

Graph::ValueId Graph::softmax_cross_entropy(ValueId logits, std::vector<int64_t> labels,
                                            bool sum) {
    const Tensor& t = value(logits);
    if (static_cast<int64_t>(labels.size()) != t.rows)
        raise(ErrorCode::ShapeMismatch, "softmax_ce: one label per row");
    for (int64_t y : labels)
        if (y < 0 || y >= t.cols) raise(ErrorCode::LabelOutOfRange, "label out of range");
    Node n;
    n.op = Op::SoftmaxCe;
    n.inputs = {logits};
    n.cache = Tensor(t.rows, t.cols);  // probabilities
    double total = 0.0;
    for (int64_t i = 0; i < t.rows; ++i) {
        double mx = t.at(i, 0);
        for (int64_t j = 1; j < t.cols; ++j) mx = std::max(mx, t.at(i, j));
        double z = 0.0;
        for (int64_t j = 0; j < t.cols; ++j) z += std::exp(t.at(i, j) - mx);
        double logz = std::log(z) + mx;
        for (int64_t j = 0; j < t.cols; ++j) n.cache.at(i, j) = std::exp(t.at(i, j) - logz);
        total += logz - t.at(i, labels[static_cast<size_t>(i)]);
    }
    n.out = Tensor(1, 1);
    n.out.at(0, 0) = sum ? total : total / static_cast<double>(t.rows);
    n.factor = sum ? 1.0 : 1.0 / static_cast<double>(t.rows);
    n.idx = std::move(labels);
    return push(std::move(n));
}

Graph::ValueId Graph::sigmoid_binary_cross_entropy(ValueId logits, std::vector<double> targets,
                                                   bool sum) {
    const Tensor& t = value(logits);
    if (t.cols != 1 || static_cast<int64_t>(targets.size()) != t.rows)
        raise(ErrorCode::ShapeMismatch, "sigmoid_bce: logits must be rows x 1");
    Node n;
    n.op = Op::SigmoidBce;
    n.inputs = {logits};
    n.cache = Tensor(t.rows, 1);  // sigmoid(x)
    double total = 0.0;
    for (int64_t i = 0; i < t.rows; ++i) {
        double x = t.at(i, 0);
        double y = targets[static_cast<size_t>(i)];
        // stable: max(x,0) - x*y + log(1 + exp(-|x|))
        total += std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
        n.cache.at(i, 0) = 1.0 / (1.0 + std::exp(-x));
    }
    n.out = Tensor(1, 1);
    n.out.at(0, 0) = sum ? total : total / static_cast<double>(t.rows);
    n.factor = sum ? 1.0 : 1.0 / static_cast<double>(t.rows);
    n.data = std::move(targets);
    return push(std::move(n));
}

Graph::ValueId Graph::squared_error(ValueId pred, std::vector<double> targets, bool sum) {
    const Tensor& t = value(pred);
    if (t.cols != 1 || static_cast<int64_t>(targets.size()) != t.rows)
        raise(ErrorCode::ShapeMismatch, "squared_error: pred must be rows x 1");
    Node n;
    n.op = Op::SquaredError;
    n.inputs = {pred};
    double total = 0.0;
    for (int64_t i = 0; i < t.rows; ++i) {
        double d = t.at(i, 0) - targets[static_cast<size_t>(i)];
        total += d * d;
    }
    n.out = Tensor(1, 1);
    n.out.at(0, 0) = sum ? total : total / static_cast<double>(t.rows);
    n.factor = sum ? 1.0 : 1.0 / static_cast<double>(t.rows);
    n.data = std::move(targets);
    return push(std::move(n));
}

Graph::ValueId Graph::add_n(const std::vector<ValueId>& scalars) {
    Node n;
    n.op = Op::AddN;
    n.inputs = scalars;
    n.out = Tensor(1, 1);
    for (ValueId s : scalars) {
        if (value(s).numel() != 1) raise(ErrorCode::ShapeMismatch, "add_n wants scalars");
        n.out.at(0, 0) += value(s).at(0, 0);
    }
    return push(std::move(n));
}

void Graph::backward(ValueId loss) {
    auto& nodes_ = impl_->nodes;
    Node& last = nodes_[static_cast<size_t>(loss)];
    if (last.out.numel() != 1) raise(ErrorCode::ShapeMismatch, "backward needs a scalar loss");
    for (auto& n : nodes_) n.out.zero_grad();
    last.out.g[0] = 1.0;

    for (int64_t id = loss; id >= 0; --id) {
        Node& n = nodes_[static_cast<size_t>(id)];
        bool any = false;
        for (double gv : n.out.g)
            if (gv != 0.0) {
                any = true;
                break;
            }
        if (!any) continue;

        switch (n.op) {
            case Op::Constant:
                break;
            case Op::Param:
                if (n.external) {
                    for (size_t i = 0; i < n.out.g.size(); ++i) n.external->g[i] += n.out.g[i];
                }
                break;
            case Op::Matmul: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                Tensor& b = nodes_[static_cast<size_t>(n.inputs[1])].out;
                int64_t m = a.rows, k = a.cols, c = b.cols;
                // dA = dC * B^T
                for (int64_t i = 0; i < m; ++i) {
                    const double* grow = n.out.g.data() + i * c;
                    double* garow = a.g.data() + i * k;
                    for (int64_t kk = 0; kk < k; ++kk) {
                        const double* brow = b.v.data() + kk * c;
                        double acc = 0.0;
                        for (int64_t j = 0; j < c; ++j) acc += grow[j] * brow[j];
                        garow[kk] += acc;
                    }
                }
                // dB = A^T * dC
                for (int64_t i = 0; i < m; ++i) {
                    const double* arow = a.v.data() + i * k;
                    const double* grow = n.out.g.data() + i * c;
                    for (int64_t kk = 0; kk < k; ++kk) {
                        double av = arow[kk];
                        if (av == 0.0) continue;
                        double* gbrow = b.g.data() + kk * c;
                        for (int64_t j = 0; j < c; ++j) gbrow[j] += av * grow[j];
                    }
                }
                break;
            }
            case Op::Add: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                Tensor& b = nodes_[static_cast<size_t>(n.inputs[1])].out;
                for (size_t i = 0; i < n.out.g.size(); ++i) {
                    a.g[i] += n.out.g[i];
                    b.g[i] += n.out.g[i];
                }
                break;
            }
            case Op::AddRowVec: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                Tensor& bias = nodes_[static_cast<size_t>(n.inputs[1])].out;
                for (int64_t i = 0; i < a.rows; ++i)
                    for (int64_t j = 0; j < a.cols; ++j) {
                        double gv = n.out.g[static_cast<size_t>(i * a.cols + j)];
                        a.g[static_cast<size_t>(i * a.cols + j)] += gv;
                        bias.g[static_cast<size_t>(j)] += gv;
                    }
                break;
            }
            case Op::Relu: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                // subgradient 0 at x == 0
                for (size_t i = 0; i < a.v.size(); ++i)
                    if (a.v[i] > 0.0) a.g[i] += n.out.g[i];
                break;
            }
            case Op::ConcatCols: {
                int64_t at = 0;
                for (ValueId p : n.inputs) {
                    Tensor& t = nodes_[static_cast<size_t>(p)].out;
                    for (int64_t i = 0; i < t.rows; ++i)
                        for (int64_t j = 0; j < t.cols; ++j)
                            t.g[static_cast<size_t>(i * t.cols + j)] +=
                                n.out.g[static_cast<size_t>(i * n.out.cols + at + j)];
                    at += t.cols;
                }
                break;
            }
            case Op::RowSum: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                for (int64_t i = 0; i < a.rows; ++i)
                    for (int64_t j = 0; j < a.cols; ++j)
                        a.g[static_cast<size_t>(i * a.cols + j)] += n.out.g[static_cast<size_t>(j)];
                break;
            }
            case Op::RowMean: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                double inv = 1.0 / static_cast<double>(a.rows);
                for (int64_t i = 0; i < a.rows; ++i)
                    for (int64_t j = 0; j < a.cols; ++j)
                        a.g[static_cast<size_t>(i * a.cols + j)] +=
                            n.out.g[static_cast<size_t>(j)] * inv;
                break;
            }
            case Op::Gather: {
                Tensor& t = nodes_[static_cast<size_t>(n.inputs[0])].out;
                for (size_t r = 0; r < n.idx.size(); ++r)
                    for (int64_t j = 0; j < t.cols; ++j)
                        t.g[static_cast<size_t>(n.idx[r] * t.cols + j)] +=
                            n.out.g[static_cast<size_t>(static_cast<int64_t>(r) * t.cols + j)];
                break;
            }
            case Op::ScatterAdd: {
                Tensor& t = nodes_[static_cast<size_t>(n.inputs[0])].out;
                for (size_t r = 0; r < n.idx.size(); ++r)
                    for (int64_t j = 0; j < t.cols; ++j)
                        t.g[static_cast<size_t>(static_cast<int64_t>(r) * t.cols + j)] +=
                            n.out.g[static_cast<size_t>(n.idx[r] * t.cols + j)];
                break;
            }
            case Op::RowScale: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                for (int64_t i = 0; i < a.rows; ++i)
                    for (int64_t j = 0; j < a.cols; ++j)
                        a.g[static_cast<size_t>(i * a.cols + j)] +=
                            n.out.g[static_cast<size_t>(i * a.cols + j)] *
                            n.data[static_cast<size_t>(i)];
                break;
            }
            case Op::Scale: {
                Tensor& a = nodes_[static_cast<size_t>(n.inputs[0])].out;
                for (size_t i = 0; i < a.g.size(); ++i) a.g[i] += n.out.g[i] * n.factor;
                break;
            }
            case Op::SoftmaxCe: {
                Tensor& t = nodes_[static_cast<size_t>(n.inputs[0])].out;
                double go = n.out.g[0] * n.factor;
                for (int64_t i = 0; i < t.rows; ++i)
                    for (int64_t j = 0; j < t.cols; ++j) {
                        double delta = (j == n.idx[static_cast<size_t>(i)]) ? 1.0 : 0.0;
                        t.g[static_cast<size_t>(i * t.cols + j)] +=
                            go * (n.cache.at(i, j) - delta);
                    }
                break;
            }
            case Op::SigmoidBce: {
                Tensor& t = nodes_[static_cast<size_t>(n.inputs[0])].out;
                double go = n.out.g[0] * n.factor;
                for (int64_t i = 0; i < t.rows; ++i)
                    t.g[static_cast<size_t>(i)] +=
                        go * (n.cache.at(i, 0) - n.data[static_cast<size_t>(i)]);
                break;
            }
            case Op::SquaredError: {
                Tensor& t = nodes_[static_cast<size_t>(n.inputs[0])].out;
                double go = n.out.g[0] * n.factor;
                for (int64_t i = 0; i < t.rows; ++i)
                    t.g[static_cast<size_t>(i)] +=
                        go * 2.0 * (t.v[static_cast<size_t>(i)] - n.data[static_cast<size_t>(i)]);
                break;
            }
            case Op::AddN: {
                for (ValueId s : n.inputs)
                    nodes_[static_cast<size_t>(s)].out.g[0] += n.out.g[0];
                break;
            }
        }
    }
}

}  // namespace redelex
