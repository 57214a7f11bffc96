#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "redelex/rng.hpp"

namespace redelex {

// Dense row-major matrix of 64-bit floats with a gradient slot. Rank <= 2 in
// practice (scalars are 1x1); all model state fits this shape.
struct Tensor {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<double> v;  // values
    std::vector<double> g;  // gradient, same shape

    Tensor() = default;
    Tensor(int64_t r, int64_t c) : rows(r), cols(c), v(static_cast<size_t>(r * c), 0.0),
                                   g(static_cast<size_t>(r * c), 0.0) {}

    int64_t numel() const { return rows * cols; }
    double& at(int64_t r, int64_t c) { return v[static_cast<size_t>(r * cols + c)]; }
    double at(int64_t r, int64_t c) const { return v[static_cast<size_t>(r * cols + c)]; }
    void zero_grad() { std::fill(g.begin(), g.end(), 0.0); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
};

// Named parameters plus Adam moments, ordered by creation; creation order
// fixes both initialization and checkpoint layout.
class ParamStore {
  public:
    struct Entry {
        std::string name;
        Tensor value;
        Tensor m;  // first moment
        Tensor s;  // second moment
    };

    // Glorot-uniform init: a = sqrt(6 / (rows + cols)).
    Tensor* add(const std::string& name, int64_t rows, int64_t cols, Rng& rng);
    Tensor* add_zeros(const std::string& name, int64_t rows, int64_t cols);
    Tensor* find(const std::string& name);
    const Tensor* find(const std::string& name) const;

    void zero_grads();
    // deque keeps references stable while entries accumulate
    std::deque<Entry>& entries() { return entries_; }
    const std::deque<Entry>& entries() const { return entries_; }
    int64_t total_params() const;

  private:
    std::deque<Entry> entries_;
};

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t step = 0;
};

// Bias-corrected Adam update over every entry; gradients live in the value
// tensors' g slots.
void adam_step(AdamState& state, ParamStore& params);

// Reverse-mode tape over Tensors. Build a fresh graph per forward pass;
// parameters are external leaves whose g slots accumulate on backward().
class Graph {
  public:
    using ValueId = int32_t;

    Graph();
    ~Graph();
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    ValueId constant(Tensor t);
    ValueId param(Tensor* p);

    ValueId matmul(ValueId a, ValueId b);
    ValueId add(ValueId a, ValueId b);          // same shape
    ValueId add_rowvec(ValueId a, ValueId bias);  // (m x n) + (1 x n)
    ValueId relu(ValueId a);
    ValueId concat_cols(const std::vector<ValueId>& parts);
    ValueId row_sum(ValueId a);   // (m x n) -> (1 x n)
    ValueId row_mean(ValueId a);  // (m x n) -> (1 x n)
    ValueId gather(ValueId table, std::vector<int64_t> idx);
    ValueId scatter_add(ValueId src, std::vector<int64_t> idx, int64_t out_rows);
    ValueId row_scale(ValueId a, std::vector<double> factors);  // constant per-row
    ValueId scale(ValueId a, double factor);

    // Losses produce 1x1 scalars, averaged over rows unless sum=true.
    ValueId softmax_cross_entropy(ValueId logits, std::vector<int64_t> labels,
                                  bool sum = false);
    ValueId sigmoid_binary_cross_entropy(ValueId logits, std::vector<double> targets,
                                         bool sum = false);
    ValueId squared_error(ValueId pred, std::vector<double> targets, bool sum = false);
    ValueId add_n(const std::vector<ValueId>& scalars);  // sum of 1x1 scalars

    const Tensor& value(ValueId id) const;
    void backward(ValueId loss);

  private:
    struct Node;
    struct Impl;
    ValueId push(Node node);
    std::unique_ptr<Impl> impl_;
};

}  // namespace redelex
