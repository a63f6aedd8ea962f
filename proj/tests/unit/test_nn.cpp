#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "portnav/errors.hpp"
#include "portnav/nn.hpp"

using namespace portnav;
using nn::Matrix;
using nn::Mlp;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = n(rng);
  return m;
}

double weighted_output(const Mlp& net, const Matrix& x, const Matrix& w) { return (net.forward(x).array() * w.array()).sum(); }

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("a zero-weight network outputs its last bias") {
  std::mt19937_64 rng(1);
  Mlp net({3, 5, 2}, rng);
  for (const auto& b : net.blocks()) std::fill(b.data, b.data + b.size, 0.0);
  net.layer(1).bias << 0.75, -2.0;
  const auto out = net.forward(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(out == std::vector<double>{0.75, -2.0});
}

TEST_CASE("a 1x1 linear net multiplies") {
  std::mt19937_64 rng(1);
  Mlp net({1, 1}, rng);
  net.layer(0).weight(0, 0) = 2.5;
  net.layer(0).bias[0] = 0.0;
  CHECK(net.forward(std::vector<double>{-3.0})[0] == -7.5);

  // d(w x)/dw = x and d(w x)/dx = w.
  Mlp::Tape tape;
  net.forward(Matrix::Constant(1, 1, -3.0), tape);
  nn::MlpGradients g = net.zero_gradients();
  const Matrix dx = net.backward(tape, Matrix::Constant(1, 1, 1.0), g);
  CHECK(g.weight[0](0, 0) == -3.0);
  CHECK(g.bias[0][0] == 1.0);
  CHECK(dx(0, 0) == 2.5);
}

TEST_CASE("forward matches the scalar reference") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> size(1, 9);
    std::vector<int> sizes{size(rng), size(rng), size(rng), size(rng)};
    Mlp net(sizes, rng);
    const Matrix x = random_matrix(sizes.front(), 1, rng);
    const std::vector<double> in(x.data(), x.data() + x.size());
    const auto got = net.forward(in);
    const auto want = oracle::mlp_forward(net, in);
    for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(std::abs(got[i] - want[i]) <= 1e-12);
  }
}

TEST_CASE("batched forward equals column-by-column forward") {
  std::mt19937_64 rng(3);
  Mlp net({4, 6, 3}, rng);
  const Matrix x = random_matrix(4, 7, rng);
  const Matrix y = net.forward(x);
  for (Eigen::Index j = 0; j < 7; ++j) {
    const std::vector<double> col(x.col(j).data(), x.col(j).data() + 4);
    const auto yj = net.forward(col);
    for (int i = 0; i < 3; ++i) CHECK(yj[static_cast<std::size_t>(i)] == doctest::Approx(y(i, j)).epsilon(1e-14));
  }
}

TEST_CASE("backward agrees with central finite differences") {
  std::mt19937_64 rng(4);
  for (const std::vector<int>& sizes : {std::vector<int>{3, 4, 2}, std::vector<int>{5, 8, 8, 3}, std::vector<int>{2, 1}}) {
    Mlp net(sizes, rng);
    const Matrix x = random_matrix(sizes.front(), 6, rng);
    const Matrix w = random_matrix(sizes.back(), 6, rng);
    Mlp::Tape tape;
    net.forward(x, tape);
    nn::MlpGradients g = net.zero_gradients();
    const Matrix dx = net.backward(tape, w, g);
    const double err = oracle::max_fd_error(net.blocks(), std::as_const(g).blocks(), [&] { return weighted_output(net, x, w); });
    CHECK(err < 1e-4);

    // Input gradient.
    Matrix xm = x;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < xm.size(); ++k) {
      const double saved = xm.data()[k];
      xm.data()[k] = saved + 1e-5;
      const double up = weighted_output(net, xm, w);
      xm.data()[k] = saved - 1e-5;
      const double down = weighted_output(net, xm, w);
      xm.data()[k] = saved;
      const double num = (up - down) / 2e-5;
      worst = std::max(worst, std::abs(num - dx.data()[k]) / std::max({std::abs(num), std::abs(dx.data()[k]), 1e-6}));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("zero output gradient gives zero parameter gradients") {
  std::mt19937_64 rng(5);
  Mlp net({3, 4, 2}, rng);
  Mlp::Tape tape;
  net.forward(random_matrix(3, 5, rng), tape);
  nn::MlpGradients g = net.zero_gradients();
  const Matrix dx = net.backward(tape, Matrix::Zero(2, 5), g);
  for (const auto& b : std::as_const(g).blocks()) {
    for (std::size_t k = 0; k < b.size; ++k) REQUIRE(b.data[k] == 0.0);
  }
  CHECK(dx.isZero(0.0));
}

TEST_CASE("shape mismatches are errors") {
  std::mt19937_64 rng(6);
  Mlp net({3, 4, 2}, rng);
  CHECK_THROWS_AS(net.forward(std::vector<double>{1.0, 2.0}), InvalidState);
  Mlp::Tape tape;
  net.forward(random_matrix(3, 2, rng), tape);
  nn::MlpGradients g = net.zero_gradients();
  CHECK_THROWS_AS(net.backward(tape, Matrix::Zero(3, 2), g), InvalidState);
  CHECK_THROWS_AS(Mlp({3}, rng), InvalidConfig);
}

TEST_CASE("initialisation is seeded and fan-in scaled") {
  std::mt19937_64 a(9), b(9);
  Mlp na({10, 50, 4}, a);
  Mlp nb({10, 50, 4}, b);
  CHECK(na.layer(0).weight == nb.layer(0).weight);
  CHECK(na.layer(0).weight.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(10.0));
  CHECK(na.layer(1).weight.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(50.0));
  CHECK(na.parameter_count() == 10 * 50 + 50 + 50 * 4 + 4);
}

TEST_CASE("polyak averaging is exact") {
  std::mt19937_64 rng(10);
  Mlp online({3, 4, 1}, rng);
  Mlp target({3, 4, 1}, rng);
  const Mlp before = target;
  target.polyak_from(online, 0.005);
  for (std::size_t l = 0; l < target.layer_count(); ++l) {
    const Matrix want = 0.005 * online.layer(l).weight + (1.0 - 0.005) * before.layer(l).weight;
    CHECK(target.layer(l).weight == want);
  }
}

TEST_CASE("adam with zero gradient only advances the step counter") {
  double p = 1.5;
  double g = 0.0;
  const nn::ParamBlock pb{&p, 1};
  const nn::ConstParamBlock gb{&g, 1};
  nn::AdamState st(nn::AdamOptions{}, std::span<const nn::ConstParamBlock>(&gb, 1));
  for (int i = 0; i < 10; ++i) {
    nn::adam_update(std::span<const nn::ParamBlock>(&pb, 1), std::span<const nn::ConstParamBlock>(&gb, 1), st);
  }
  CHECK(p == 1.5);
  CHECK(st.step == 10);
}

TEST_CASE("adam descends against a constant gradient") {
  for (double grad : {3.0, -0.02}) {
    double p = 0.0;
    const nn::ParamBlock pb{&p, 1};
    const nn::ConstParamBlock gb{&grad, 1};
    nn::AdamState st(nn::AdamOptions{0.01}, std::span<const nn::ConstParamBlock>(&gb, 1));
    for (int i = 0; i < 100; ++i) {
      nn::adam_update(std::span<const nn::ParamBlock>(&pb, 1), std::span<const nn::ConstParamBlock>(&gb, 1), st);
    }
    CHECK(p * grad < 0.0);
  }
}

TEST_CASE("the first adam step is bounded by the learning rate") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    double p = n(rng);
    double g = n(rng);
    const double start = p;
    const nn::ParamBlock pb{&p, 1};
    const nn::ConstParamBlock gb{&g, 1};
    nn::AdamState st(nn::AdamOptions{0.001}, std::span<const nn::ConstParamBlock>(&gb, 1));
    nn::adam_update(std::span<const nn::ParamBlock>(&pb, 1), std::span<const nn::ConstParamBlock>(&gb, 1), st);
    // Closed form: m_hat = g, v_hat = g^2, step = lr * g / (|g| + eps).
    const double want = -0.001 * g / (std::abs(g) + 1e-8);
    // p - start carries the rounding of p itself.
    const double ulp_p = std::abs(std::nextafter(start, 2 * start + 1) - start);
    REQUIRE(std::abs((p - start) - want) <= 2 * ulp_p + 1e-12 * std::abs(want));
    REQUIRE(std::abs(p - start) <= 0.001 * (1 + 1e-12));
  }
}

TEST_CASE("adam rejects mismatched shapes") {
  std::mt19937_64 rng(13);
  Mlp a({2, 3, 1}, rng);
  Mlp b({2, 4, 1}, rng);
  nn::AdamState st(nn::AdamOptions{}, a);
  CHECK_THROWS_AS(nn::adam_update(a, b.zero_gradients(), st), InvalidState);
}

TEST_CASE("seeded updates are reproducible") {
  auto run = [] {
    std::mt19937_64 rng(14);
    Mlp net({3, 5, 1}, rng);
    nn::AdamState st(nn::AdamOptions{}, net);
    const Matrix x = random_matrix(3, 8, rng);
    for (int i = 0; i < 20; ++i) {
      Mlp::Tape tape;
      net.forward(x, tape);
      nn::MlpGradients g = net.zero_gradients();
      net.backward(tape, Matrix::Ones(1, 8), g);
      nn::adam_update(net, g, st);
    }
    return net.layer(0).weight;
  };
  CHECK(run() == run());
}

}
