#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "har/adam.hpp"
#include "har/error.hpp"
#include "har/grad_check.hpp"
#include "har/logsumexp.hpp"
#include "har/matrix.hpp"
#include "har/nonlin.hpp"
#include "har/rng.hpp"

using namespace har;

TEST_CASE("matmul hand arithmetic") {
  Matrix a(2, 2);
  a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
  Matrix b(2, 1, 1.0);
  Matrix c = matmul(a, b);
  CHECK(c.rows() == 2);
  CHECK(c.cols() == 1);
  CHECK(c(0, 0) == 3.0);
  CHECK(c(1, 0) == 7.0);
}

TEST_CASE("matmul identity") {
  Rng rng(5);
  Matrix m = Matrix::uniform(3, 4, -2.0, 2.0, rng);
  CHECK(matmul(Matrix::identity(3), m) == m);
}

TEST_CASE("matmul matches triple-loop oracle") {
  Rng rng(11);
  Matrix a = Matrix::uniform(4, 5, -1.0, 1.0, rng);
  Matrix b = Matrix::uniform(5, 2, -1.0, 1.0, rng);
  Matrix c = matmul(a, b);
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 2; ++j) {
      double acc = 0.0;
      for (size_t k = 0; k < 5; ++k) acc += a(i, k) * b(k, j);
      CHECK(std::fabs(c(i, j) - acc) < 1e-12);
    }
  }
}

TEST_CASE("matmul associativity") {
  Rng rng(17);
  Matrix a = Matrix::uniform(3, 4, -1.0, 1.0, rng);
  Matrix b = Matrix::uniform(4, 5, -1.0, 1.0, rng);
  Matrix c = Matrix::uniform(5, 2, -1.0, 1.0, rng);
  Matrix left = matmul(matmul(a, b), c);
  Matrix right = matmul(a, matmul(b, c));
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 2; ++j) {
      CHECK(std::fabs(left(i, j) - right(i, j)) <
            1e-9 * std::max(1.0, std::fabs(left(i, j))));
    }
  }
}

TEST_CASE("matmul shape error names both shapes") {
  Matrix a(2, 3), b(4, 2);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), Error);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("4x2"), Error);
}

TEST_CASE("sigmoid fixed points and saturation") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(std::fabs(sigmoid(50.0) - 1.0) < 1e-15);
  CHECK(sigmoid(1000.0) == 1.0);
  CHECK(sigmoid(-1000.0) >= 0.0);
  CHECK(std::isfinite(sigmoid(-1000.0)));
  // reference value of 1/(1+exp(-1)) to full double precision
  CHECK(std::fabs(sigmoid(1.0) - 0.73105857863000487925115924182183627436) < 3e-16);
}

TEST_CASE("sigmoid symmetry") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    // strict bounds hold below the double saturation threshold (~36.7)
    const double x = rng.uniform(-30.0, 30.0);
    CHECK(std::fabs(sigmoid(x) + sigmoid(-x) - 1.0) < 1e-12);
    CHECK(sigmoid(x) > 0.0);
    CHECK(sigmoid(x) < 1.0);
  }
}

TEST_CASE("tanh reference value and oddness") {
  CHECK(tanh_act(0.0) == 0.0);
  CHECK(std::fabs(tanh_act(0.5) - 0.46211715726000975850231848364367254873) < 3e-16);
  Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-5.0, 5.0);
    CHECK(tanh_act(-x) == -tanh_act(x));
  }
}

TEST_CASE("softmax uniform logits") {
  std::vector<double> logits(4, 1.25);
  SoftmaxXent r = softmax_xent(logits, 2);
  for (double p : r.probs) CHECK(std::fabs(p - 0.25) < 1e-15);
  CHECK(std::fabs(r.loss - std::log(4.0)) < 1e-15);
}

TEST_CASE("softmax huge logit gap stays finite") {
  std::vector<double> logits = {1000.0, 0.0};
  SoftmaxXent r = softmax_xent(logits, 0);
  CHECK(std::isfinite(r.loss));
  CHECK(r.loss < 1e-12);
  SoftmaxXent worst = softmax_xent(logits, 1);
  CHECK(std::isfinite(worst.loss));
  CHECK(worst.loss > 900.0);
}

TEST_CASE("softmax against extended-precision oracle") {
  // softmax(1,2,3), target 0, evaluated independently in long double
  std::vector<double> logits = {1.0, 2.0, 3.0};
  SoftmaxXent r = softmax_xent(logits, 0);
  const long double denom = expl(1.0L) + expl(2.0L) + expl(3.0L);
  const long double p0 = expl(1.0L) / denom;
  const long double p1 = expl(2.0L) / denom;
  const long double p2 = expl(3.0L) / denom;
  CHECK(std::fabs(r.probs[0] - static_cast<double>(p0)) < 1e-15);
  CHECK(std::fabs(r.probs[1] - static_cast<double>(p1)) < 1e-15);
  CHECK(std::fabs(r.probs[2] - static_cast<double>(p2)) < 1e-15);
  CHECK(std::fabs(r.loss - static_cast<double>(-logl(p0))) < 1e-14);
  CHECK(std::fabs(r.dlogits[0] - static_cast<double>(p0 - 1.0L)) < 1e-15);
  CHECK(std::fabs(r.dlogits[1] - r.probs[1]) < 1e-16);
  CHECK(std::fabs(r.dlogits[2] - r.probs[2]) < 1e-16);
}

TEST_CASE("softmax probabilities sum to one and shift-invariance") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> logits(5);
    for (double& v : logits) v = rng.uniform(-30.0, 30.0);
    SoftmaxXent a = softmax_xent(logits, 3);
    double sum = 0.0;
    for (double p : a.probs) sum += p;
    CHECK(std::fabs(sum - 1.0) < 1e-12);

    std::vector<double> shifted = logits;
    const double c = rng.uniform(-100.0, 100.0);
    for (double& v : shifted) v += c;
    SoftmaxXent b = softmax_xent(shifted, 3);
    for (size_t i = 0; i < logits.size(); ++i) {
      CHECK(std::fabs(a.probs[i] - b.probs[i]) < 1e-12);
    }
  }
}

TEST_CASE("softmax rejects bad input") {
  std::vector<double> empty;
  CHECK_THROWS_AS(softmax_xent(empty, 0), Error);
  std::vector<double> three(3, 0.0);
  CHECK_THROWS_AS(softmax_xent(three, 3), Error);
}

TEST_CASE("adam first step magnitude") {
  std::vector<double> p = {0.0};
  std::vector<double> g = {2.5};
  AdamState st(1);
  adam_step(p, g, st, 0.1);
  CHECK(st.t == 1);
  // bias correction makes the first step lr * g/(|g| + eps') ~= lr * sign(g)
  CHECK(std::fabs(p[0] + 0.1) < 1e-7);
}

TEST_CASE("adam three-step trajectory matches scalar recurrence oracle") {
  std::vector<double> p = {1.0};
  AdamState st(1);
  const double lr = 0.05;
  const double grads[3] = {0.7, -1.3, 0.2};

  double rp = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 3; ++t) {
    std::vector<double> g = {grads[t - 1]};
    adam_step(p, g, st, lr);

    m = 0.9 * m + 0.1 * grads[t - 1];
    v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
    const double mhat = m / (1.0 - std::pow(0.9, t));
    const double vhat = v / (1.0 - std::pow(0.999, t));
    rp -= lr * mhat / (std::sqrt(vhat) + 1e-8);
    CHECK(p[0] == rp);
  }
  CHECK(st.t == 3);
}

TEST_CASE("adam zero gradient leaves params bitwise unchanged") {
  std::vector<double> p = {1.5, -2.25e-10, 3.0, -0.0};
  const std::vector<double> orig = p;
  std::vector<double> g(4, 0.0);
  AdamState st(4);
  for (int k = 0; k < 5; ++k) adam_step(p, g, st, 0.01);
  CHECK(st.t == 5);
  CHECK(std::memcmp(p.data(), orig.data(), p.size() * sizeof(double)) == 0);
}

TEST_CASE("adam length mismatch throws") {
  std::vector<double> p(3, 0.0), g(2, 0.0);
  AdamState st(3);
  CHECK_THROWS_AS(adam_step(p, g, st, 0.1), Error);
}

TEST_CASE("splitmix64 frozen vectors") {
  Rng a(0);
  CHECK(a.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(a.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(a.next_u64() == 0x06c45d188009454fULL);
  CHECK(a.next_u64() == 0xf88bb8a8724c81ecULL);

  Rng b(42);
  CHECK(b.next_u64() == 0xbdd732262feb6e95ULL);
  CHECK(b.next_u64() == 0x28efe333b266f103ULL);
  CHECK(b.next_u64() == 0x47526757130f9f52ULL);
  CHECK(b.next_u64() == 0x581ce1ff0e4ae394ULL);
}

TEST_CASE("rng equal seeds equal streams") {
  Rng a(987654321), b(987654321), c(987654322);
  bool diverged = false;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    if (x != c.next_u64()) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("rng ranges") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 10000; ++i) CHECK(rng.below(7) < 7);
}

TEST_CASE("rng shuffle matches reference sweep") {
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  Rng rng(99);
  rng.shuffle(v);

  std::vector<int> r = {0, 1, 2, 3, 4, 5, 6, 7};
  Rng ref(99);
  for (size_t i = r.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(ref.below(i));
    std::swap(r[i - 1], r[j]);
  }
  CHECK(v == r);

  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>({0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST_CASE("grad_check quadratic") {
  std::vector<double> params = {3.0, -1.5};
  std::vector<double> analytic = {6.0, -3.0};
  auto f = [](std::span<const double> p) {
    double s = 0.0;
    for (double x : p) s += x * x;
    return s;
  };
  CHECK(grad_check(f, params, analytic, 1e-5) < 1e-8);
}

TEST_CASE("grad_check linear") {
  std::vector<double> params = {0.3, 0.7, -2.0};
  std::vector<double> analytic(3, 1.0);
  auto f = [](std::span<const double> p) {
    double s = 0.0;
    for (double x : p) s += x;
    return s;
  };
  CHECK(grad_check(f, params, analytic, 1e-5) < 1e-9);
}

TEST_CASE("grad_check flags a corrupted gradient") {
  std::vector<double> params = {2.0};
  std::vector<double> analytic = {4.5};  // true gradient is 4.0
  auto f = [](std::span<const double> p) { return p[0] * p[0]; };
  CHECK(grad_check(f, params, analytic, 1e-5) > 0.1);
}

TEST_CASE("log_sum_exp") {
  CHECK(log_sum_exp(kNegInf, 2.5) == 2.5);
  CHECK(log_sum_exp(2.5, kNegInf) == 2.5);
  CHECK(log_sum_exp(kNegInf, kNegInf) == kNegInf);
  CHECK(std::fabs(log_sum_exp(0.0, 0.0) - std::numbers::ln2) < 1e-15);
  CHECK(std::fabs(log_sum_exp(1000.0, 1000.0) - (1000.0 + std::numbers::ln2)) < 1e-12);

  Rng rng(41);
  std::vector<double> vals(6);
  for (double& v : vals) v = rng.uniform(-3.0, 3.0);
  double naive = 0.0;
  for (double v : vals) naive += std::exp(v);
  CHECK(std::fabs(log_sum_exp(vals) - std::log(naive)) < 1e-12);

  std::vector<double> allneg(4, kNegInf);
  CHECK(log_sum_exp(allneg) == kNegInf);
}
