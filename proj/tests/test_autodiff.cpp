#include <doctest.h>

#include <cmath>
#include <functional>

#include "redelex/autodiff.hpp"
#include "redelex/error.hpp"
#include "redelex/rng.hpp"

using namespace redelex;

namespace {

// Central finite differences over every parameter entry; returns the max
// relative error against analytic gradients.
double fd_check(ParamStore& params,
                const std::function<double(bool)>& run,  // run(true) also backprops
                double h = 1e-5) {
    params.zero_grads();
    run(true);
    double worst = 0.0;
    for (auto& e : params.entries()) {
        for (size_t i = 0; i < e.value.v.size(); ++i) {
            double saved = e.value.v[i];
            e.value.v[i] = saved + h;
            double up = run(false);
            e.value.v[i] = saved - h;
            double down = run(false);
            e.value.v[i] = saved;
            double fd = (up - down) / (2 * h);
            double an = e.value.g[i];
            double err = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1.0});
            worst = std::max(worst, err);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("relu subgradient is zero at and below zero") {
    Graph g;
    Tensor x(1, 3);
    x.v = {-2.0, 0.0, 3.0};
    Tensor* px = nullptr;
    ParamStore store;
    px = store.add_zeros("x", 1, 3);
    px->v = x.v;
    auto id = g.param(px);
    auto r = g.relu(id);
    auto loss = g.row_sum(r);  // 1x3 -> needs scalar; sum columns via matmul with ones
    Tensor ones(3, 1);
    ones.v = {1, 1, 1};
    auto total = g.matmul(loss, g.constant(ones));
    g.backward(total);
    CHECK(px->g[0] == 0.0);
    CHECK(px->g[1] == 0.0);  // convention: 0 at x == 0
    CHECK(px->g[2] == 1.0);
}

TEST_CASE("matmul gradients match central finite differences within 1e-6") {
    Rng rng(7);
    ParamStore store;
    Tensor* a = store.add("a", 5, 4, rng);
    Tensor* b = store.add("b", 4, 3, rng);
    std::vector<double> targets(5, 0.5);

    auto run = [&](bool backprop) {
        Graph g;
        auto pa = g.param(a);
        auto pb = g.param(b);
        auto c = g.matmul(pa, pb);
        Tensor w(3, 1);
        w.v = {0.3, -0.2, 0.9};
        auto pred = g.matmul(c, g.constant(w));
        auto loss = g.squared_error(pred, targets);
        if (backprop) g.backward(loss);
        return g.value(loss).at(0, 0);
    };
    CHECK(fd_check(store, run) <= 1e-6);
}

TEST_CASE("scatter_add then gather on disjoint indices is the identity") {
    Graph g;
    Tensor src(3, 2);
    src.v = {1, 2, 3, 4, 5, 6};
    auto s = g.constant(src);
    auto scattered = g.scatter_add(s, {4, 0, 2}, 5);
    auto back = g.gather(scattered, {4, 0, 2});
    CHECK(g.value(back).v == src.v);
}

TEST_CASE("gather/scatter/concat/mean pipeline passes the fd check") {
    Rng rng(13);
    ParamStore store;
    Tensor* table = store.add("table", 6, 4, rng);
    Tensor* w = store.add("w", 8, 2, rng);
    std::vector<double> targets = {0.1, -0.4, 0.7};

    auto run = [&](bool backprop) {
        Graph g;
        auto t = g.param(table);
        auto rows = g.gather(t, {0, 2, 5, 2, 1, 0});
        auto pooled = g.scatter_add(rows, {0, 0, 1, 2, 2, 2}, 3);
        auto scaled = g.row_scale(pooled, {0.5, 1.0, 1.0 / 3.0});
        auto twice = g.concat_cols({scaled, scaled});
        auto pred = g.matmul(twice, g.param(w));
        auto col = g.matmul(pred, g.constant([] {
                                Tensor ones(2, 1);
                                ones.v = {1, 1};
                                return ones;
                            }()));
        auto loss = g.squared_error(col, targets);
        if (backprop) g.backward(loss);
        return g.value(loss).at(0, 0);
    };
    CHECK(fd_check(store, run) <= 1e-6);
}

TEST_CASE("softmax cross entropy and bce gradients pass the fd check") {
    Rng rng(99);
    ParamStore store;
    Tensor* w = store.add("w", 3, 4, rng);
    std::vector<int64_t> labels = {0, 3, 1};

    auto run_ce = [&](bool backprop) {
        Graph g;
        Tensor x(3, 3);
        Rng data_rng(5);
        for (auto& v : x.v) v = data_rng.next_range(-1, 1);
        auto logits = g.matmul(g.constant(x), g.param(w));
        auto loss = g.softmax_cross_entropy(logits, labels);
        if (backprop) g.backward(loss);
        return g.value(loss).at(0, 0);
    };
    CHECK(fd_check(store, run_ce) <= 1e-6);

    ParamStore store2;
    Tensor* w2 = store2.add("w", 3, 1, rng);
    std::vector<double> targets = {1, 0, 1, 1};
    auto run_bce = [&](bool backprop) {
        Graph g;
        Tensor x(4, 3);
        Rng data_rng(6);
        for (auto& v : x.v) v = data_rng.next_range(-1, 1);
        auto logits = g.matmul(g.constant(x), g.param(w2));
        auto loss = g.sigmoid_binary_cross_entropy(logits, targets);
        if (backprop) g.backward(loss);
        return g.value(loss).at(0, 0);
    };
    CHECK(fd_check(store2, run_bce) <= 1e-6);
}

TEST_CASE("shape mismatches raise") {
    Graph g;
    auto a = g.constant(Tensor(2, 3));
    auto b = g.constant(Tensor(2, 3));
    CHECK_THROWS_AS(g.matmul(a, b), Error);
    CHECK_THROWS_AS(g.gather(a, {5}), Error);
    auto c = g.constant(Tensor(1, 1));
    CHECK_THROWS_AS(g.add(a, c), Error);
}

TEST_CASE("adam: zero gradients leave parameters unchanged") {
    ParamStore store;
    Tensor* p = store.add_zeros("p", 2, 2);
    p->v = {1, 2, 3, 4};
    store.zero_grads();
    AdamState adam;
    adam_step(adam, store);
    CHECK(p->v == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("adam: one unit-gradient step from zero moves by -lr/(1+eps)") {
    ParamStore store;
    Tensor* p = store.add_zeros("p", 1, 1);
    store.zero_grads();
    p->g[0] = 1.0;
    AdamState adam;  // lr=1e-3, b1=.9, b2=.999, eps=1e-8

    // hand evaluation of the bias-corrected update formula
    double m = 0.1, v = 0.001;
    double mhat = m / (1 - 0.9), vhat = v / (1 - 0.999);
    double expected = -adam.lr * mhat / (std::sqrt(vhat) + adam.eps);

    adam_step(adam, store);
    CHECK(p->v[0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(p->v[0] == doctest::Approx(-adam.lr).epsilon(1e-6));
}

TEST_CASE("adam runs replay bit-identically") {
    auto train = [] {
        Rng rng(42);
        ParamStore store;
        Tensor* w = store.add("w", 4, 2, rng);
        AdamState adam;
        std::vector<double> targets = {0.3, -0.8};
        for (int step = 0; step < 25; ++step) {
            store.zero_grads();
            Graph g;
            Tensor x(2, 4);
            Rng dr(static_cast<uint64_t>(step));
            for (auto& v : x.v) v = dr.next_range(-1, 1);
            auto pred = g.matmul(g.constant(x), g.param(w));
            auto col = g.matmul(pred, g.constant([] {
                                    Tensor ones(2, 1);
                                    ones.v = {1, 1};
                                    return ones;
                                }()));
            auto loss = g.squared_error(col, targets);
            g.backward(loss);
            adam_step(adam, store);
        }
        return w->v;
    };
    auto r1 = train();
    auto r2 = train();
    CHECK(r1 == r2);  // bitwise
}

TEST_CASE("glorot init is seeded and deterministic") {
    Rng r1(5), r2(5);
    ParamStore a, b;
    Tensor* ta = a.add("x", 10, 20, r1);
    Tensor* tb = b.add("x", 10, 20, r2);
    CHECK(ta->v == tb->v);
    double bound = std::sqrt(6.0 / 30.0);
    for (double v : ta->v) {
        CHECK(v >= -bound);
        CHECK(v < bound);
    }
}
