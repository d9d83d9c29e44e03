#include <cmath>
#include <random>

#include "doctest.h"
#include "vitmem/ops.hpp"

using namespace vitmem;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double scale = 1.0) {
    Tensor t(std::move(shape));
    std::normal_distribution<double> dist(0.0, scale);
    for (double& v : t.data) v = dist(rng);
    return t;
}

}  // namespace

TEST_SUITE("ops") {

TEST_CASE("matmul identity and zero") {
    Tensor i2({2, 2}, {1, 0, 0, 1});
    Tensor a({2, 2}, {1, 2, 3, 4});
    Tensor z({2, 2}, {0, 0, 0, 0});

    CHECK(ops::matmul(i2, a).data == a.data);
    CHECK(ops::matmul(a, z).data == z.data);
}

TEST_CASE("matmul matches triple-loop oracle") {
    std::mt19937_64 rng(11);
    for (auto [m, k, n] : {std::array<std::size_t, 3>{3, 4, 2}, {32, 32, 32}, {1, 7, 5}}) {
        Tensor a = random_tensor({m, k}, rng);
        Tensor b = random_tensor({k, n}, rng);
        Tensor c = ops::matmul(a, b);
        REQUIRE(c.shape == std::vector<std::size_t>{m, n});
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0;
                for (std::size_t q = 0; q < k; ++q) s += a.at(i, q) * b.at(q, j);
                CHECK(std::abs(c.at(i, j) - s) <= 1e-12);
            }
    }
}

TEST_CASE("matmul shape mismatch names both shapes") {
    Tensor a({2, 3});
    Tensor b({4, 2});
    CHECK_THROWS_WITH_AS(ops::matmul(a, b), doctest::Contains("[2x3]"), DimensionError);
}

TEST_CASE("matmul is pure") {
    std::mt19937_64 rng(3);
    Tensor a = random_tensor({5, 6}, rng);
    Tensor b = random_tensor({6, 4}, rng);
    CHECK(ops::matmul(a, b).data == ops::matmul(a, b).data);
}

TEST_CASE("layer_norm basics") {
    Tensor gamma1 = Tensor::full({4}, 1.0);
    Tensor beta0 = Tensor::zeros({4});

    Tensor constant({1, 4}, {5, 5, 5, 5});
    for (double v : ops::layer_norm(constant, gamma1, beta0).data) CHECK(v == doctest::Approx(0.0));

    // [1,-1] is already zero-mean unit-variance (up to eps)
    Tensor pm({1, 2}, {1, -1});
    Tensor out = ops::layer_norm(pm, Tensor::full({2}, 1.0), Tensor::zeros({2}));
    CHECK(out.data[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(out.data[1] == doctest::Approx(-1.0).epsilon(1e-5));

    // gamma 0 leaves only beta
    Tensor any({1, 2}, {3.7, -0.4});
    Tensor affine = ops::layer_norm(any, Tensor::zeros({2}), Tensor::full({2}, 7.0));
    CHECK(affine.data[0] == 7.0);
    CHECK(affine.data[1] == 7.0);
}

TEST_CASE("layer_norm pre-affine mean is zero") {
    std::mt19937_64 rng(5);
    Tensor x = random_tensor({6, 16}, rng, 3.0);
    Tensor y = ops::layer_norm(x, Tensor::full({16}, 1.0), Tensor::zeros({16}));
    for (std::size_t i = 0; i < 6; ++i) {
        double mu = 0;
        for (std::size_t j = 0; j < 16; ++j) mu += y.at(i, j);
        CHECK(std::abs(mu / 16.0) < 1e-10);
    }
}

TEST_CASE("softmax examples") {
    Tensor u({1, 3}, {0, 0, 0});
    for (double v : ops::softmax(u).data) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    Tensor big({1, 2}, {1000, 0});
    Tensor sb = ops::softmax(big);
    CHECK(sb.all_finite());
    CHECK(sb.data[0] == doctest::Approx(1.0));
    CHECK(sb.data[1] == doctest::Approx(0.0));

    // frozen high-precision values for softmax([1,2,3])
    Tensor x({1, 3}, {1, 2, 3});
    Tensor s = ops::softmax(x);
    CHECK(std::abs(s.data[0] - 0.09003057317038046) <= 1e-12);
    CHECK(std::abs(s.data[1] - 0.24472847105479767) <= 1e-12);
    CHECK(std::abs(s.data[2] - 0.66524095577482190) <= 1e-12);
}

TEST_CASE("softmax rows sum to one") {
    std::mt19937_64 rng(7);
    Tensor x = random_tensor({8, 13}, rng, 4.0);
    Tensor y = ops::softmax(x);
    for (std::size_t i = 0; i < 8; ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < 13; ++j) {
            CHECK(y.at(i, j) > 0.0);
            sum += y.at(i, j);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("gelu examples") {
    Tensor x({3}, {0.0, 10.0, 1.0});
    Tensor y = ops::gelu(x);
    CHECK(y.data[0] == 0.0);
    CHECK(y.data[1] == doctest::Approx(10.0).epsilon(1e-9));
    // 1 * Phi(1), frozen from a high-precision normal CDF evaluation
    CHECK(std::abs(y.data[2] - 0.8413447460685429) <= 1e-12);
}

TEST_CASE("sigmoid examples") {
    Tensor x({3}, {0.0, -1000.0, 1.0});
    Tensor y = ops::sigmoid(x);
    CHECK(y.data[0] == 0.5);
    CHECK(y.data[1] >= 0.0);
    CHECK(y.data[1] == doctest::Approx(0.0));
    CHECK(y.all_finite());
    CHECK(std::abs(y.data[2] - 0.7310585786300049) <= 1e-12);
}

TEST_CASE("mse_loss examples") {
    Tensor a({2}, {1, 0});
    Tensor b({2}, {0, 1});
    CHECK(ops::mse_loss(a, a) == 0.0);
    CHECK(ops::mse_loss(a, b) == 1.0);

    std::mt19937_64 rng(9);
    Tensor p = random_tensor({10}, rng);
    Tensor t = random_tensor({10}, rng);
    double oracle = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        const double d = p.data[i] - t.data[i];
        oracle += d * d;
    }
    oracle /= 10.0;
    CHECK(std::abs(ops::mse_loss(p, t) - oracle) <= 1e-15);

    CHECK_THROWS_AS(ops::mse_loss(Tensor{}, Tensor{}), Error);
}

TEST_CASE("gradient checks per op") {
    std::mt19937_64 rng(21);

    SUBCASE("matmul") {
        Tensor a = random_tensor({3, 4}, rng);
        Tensor b = random_tensor({4, 2}, rng);
        Tensor w = random_tensor({3, 2}, rng);  // fixed projection to a scalar
        auto loss = [&](const std::vector<Tensor>& in) {
            Tensor c = ops::matmul(in[0], in[1]);
            double s = 0;
            for (std::size_t i = 0; i < c.numel(); ++i) s += c.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            auto [da, db] = ops::matmul_backward(in[0], in[1], w);
            return std::vector<Tensor>{da, db};
        };
        CHECK(ops::grad_check(loss, analytic, {a, b}).max_rel_error < 1e-6);
    }

    SUBCASE("layer_norm") {
        Tensor x = random_tensor({3, 8}, rng);
        Tensor gamma = random_tensor({8}, rng);
        Tensor beta = random_tensor({8}, rng);
        Tensor w = random_tensor({3, 8}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            Tensor y = ops::layer_norm(in[0], in[1], in[2]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            auto g = ops::layer_norm_backward(in[0], in[1], w);
            return std::vector<Tensor>{g.dx, g.dgamma, g.dbeta};
        };
        CHECK(ops::grad_check(loss, analytic, {x, gamma, beta}).max_rel_error < 1e-4);
    }

    SUBCASE("softmax") {
        Tensor x = random_tensor({4, 6}, rng);
        Tensor w = random_tensor({4, 6}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            Tensor y = ops::softmax(in[0]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::softmax_backward(ops::softmax(in[0]), w)};
        };
        CHECK(ops::grad_check(loss, analytic, {x}).max_rel_error < 1e-4);
    }

    SUBCASE("gelu") {
        Tensor x = random_tensor({16}, rng);
        Tensor w = random_tensor({16}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            Tensor y = ops::gelu(in[0]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::gelu_backward(in[0], w)};
        };
        // smaller h: at 1e-3 the truncation term dominates for smooth
        // elementwise ops and masks real backward bugs
        CHECK(ops::grad_check(loss, analytic, {x}, 1e-5).max_rel_error < 1e-8);
    }

    SUBCASE("sigmoid") {
        Tensor x = random_tensor({16}, rng);
        Tensor w = random_tensor({16}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            Tensor y = ops::sigmoid(in[0]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::sigmoid_backward(ops::sigmoid(in[0]), w)};
        };
        CHECK(ops::grad_check(loss, analytic, {x}, 1e-5).max_rel_error < 1e-8);
    }

    SUBCASE("mse_loss") {
        Tensor p = random_tensor({12}, rng);
        Tensor t = random_tensor({12}, rng);
        auto loss = [&](const std::vector<Tensor>& in) { return ops::mse_loss(in[0], t); };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::mse_loss_backward(in[0], t)};
        };
        CHECK(ops::grad_check(loss, analytic, {p}).max_rel_error < 1e-4);
    }
}

}  // TEST_SUITE
