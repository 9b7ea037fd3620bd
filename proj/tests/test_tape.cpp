#include <cmath>

#include "doctest.h"
#include "salieval/rng.hpp"
#include "salieval/tape.hpp"

using namespace salieval;
using namespace salieval::ad;

namespace {

Tensor random_tensor(Rng& rng, int64_t r, int64_t c, double scale = 1.0) {
  Tensor t(r, c);
  for (int64_t i = 0; i < t.size(); ++i) t.at(i) = rng.normal(0.0, scale);
  return t;
}

// Max relative FD error for a scalar-valued tape computation of one input.
double check_op(const std::function<Tape::NodeId(Tape&, Tape::NodeId)>& body, const Tensor& x,
                double eps = 1e-5) {
  auto f = [&](const Tensor& in) {
    Tape t;
    const auto input = t.input(in, false);
    return t.value(body(t, input)).item();
  };
  auto grad_f = [&](const Tensor& in) {
    Tape t;
    const auto input = t.input(in, true);
    const auto out = body(t, input);
    t.backward(out);
    return t.grad(input);
  };
  return finite_diff_check(f, grad_f, x, eps);
}

}  // namespace

TEST_CASE("elementary forward values") {
  Tape t;
  CHECK(t.value(t.sigmoid(t.input(Tensor::scalar(0.0)))).item() == doctest::Approx(0.5));
  const auto sm = t.softmax_rows(t.input(Tensor::row({0.0, 0.0})));
  CHECK(t.value(sm).at(0) == doctest::Approx(0.5));
  CHECK(t.value(sm).at(1) == doctest::Approx(0.5));

  Rng rng(7);
  const auto a = t.input(random_tensor(rng, 2, 3));
  const auto b = t.input(random_tensor(rng, 3, 1));
  const Tensor& prod = t.value(t.matmul(a, b));
  CHECK(prod.rows() == 2);
  CHECK(prod.cols() == 1);
}

TEST_CASE("backward of x^2 and sigmoid") {
  {
    Tape t;
    const auto x = t.input(Tensor::scalar(3.0), true);
    const auto y = t.mul(x, x);
    t.backward(y);
    CHECK(t.grad(x).item() == doctest::Approx(6.0));
  }
  {
    Tape t;
    const auto x = t.input(Tensor::scalar(0.0), true);
    const auto y = t.sigmoid(x);
    t.backward(y);
    CHECK(t.grad(x).item() == doctest::Approx(0.25));
  }
}

TEST_CASE("finite differences are exact for a linear function") {
  Rng rng(11);
  const Tensor w = random_tensor(rng, 4, 1);
  const Tensor x = random_tensor(rng, 1, 4);
  const double err = check_op(
      [&](Tape& t, Tape::NodeId in) { return t.matmul(in, t.input(w)); }, x, 1e-5);
  CHECK(err <= 1e-9);
}

TEST_CASE("two-layer network gradient matches finite differences") {
  Rng rng(13);
  const Tensor w1 = random_tensor(rng, 5, 8, 0.5);
  const Tensor b1 = random_tensor(rng, 1, 8, 0.1);
  const Tensor w2 = random_tensor(rng, 8, 1, 0.5);
  const Tensor x = random_tensor(rng, 1, 5);
  const double err = check_op(
      [&](Tape& t, Tape::NodeId in) {
        const auto h = t.tanh(t.add(t.matmul(in, t.input(w1)), t.input(b1)));
        return t.sigmoid(t.matmul(h, t.input(w2)));
      },
      x, 1e-5);
  CHECK(err < 1e-4);
}

TEST_CASE("per-op gradients match finite differences") {
  Rng rng(17);
  const double tol = 1e-4;
  const Tensor x23 = random_tensor(rng, 2, 3);
  const Tensor x43 = random_tensor(rng, 4, 3);
  const Tensor other = random_tensor(rng, 2, 3);
  const Tensor m32 = random_tensor(rng, 3, 2);
  const Tensor bias = random_tensor(rng, 1, 3);
  const Tensor gain = random_tensor(rng, 1, 3, 0.3);

  SUBCASE("matmul lhs") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.sum_all(t.matmul(in, t.input(m32))); },
                   x23) < tol);
  }
  SUBCASE("matmul rhs") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) { return t.sum_all(t.matmul(t.input(m32), in)); },
              x23) < tol);
  }
  SUBCASE("add same shape") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(t.mul(t.add(in, t.input(other)), t.input(other)));
              },
              x23) < tol);
  }
  SUBCASE("bias broadcast, gradient to the bias") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(t.tanh(t.add(t.input(x43), in)));
              },
              bias) < tol);
  }
  SUBCASE("elementwise mul") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.sum_all(t.mul(in, in)); }, x23) < tol);
  }
  SUBCASE("scale") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.sum_all(t.scale(in, -2.5)); }, x23) <
          tol);
  }
  SUBCASE("sigmoid") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.sum_all(t.sigmoid(in)); }, x23) < tol);
  }
  SUBCASE("tanh") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.sum_all(t.tanh(in)); }, x23) < tol);
  }
  SUBCASE("softplus") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.sum_all(t.softplus(in)); }, x23) <
          tol);
  }
  SUBCASE("softmax rows") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(t.mul(t.softmax_rows(in), t.input(other)));
              },
              x23) < tol);
  }
  SUBCASE("embedding gather accumulates into repeated rows") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(t.tanh(t.gather_rows(in, {0, 2, 2, 3})));
              },
              x43) < tol);
  }
  SUBCASE("concat rows and cols") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                const auto top = t.slice_rows(in, 0, 1);
                const auto rest = t.slice_rows(in, 1, 1);
                const auto rows = t.concat_rows({top, rest});
                return t.sum_all(t.tanh(t.concat_cols(rows, t.input(other))));
              },
              x23) < tol);
  }
  SUBCASE("transpose") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(t.matmul(t.transpose(in), t.input(other)));
              },
              x23) < tol);
  }
  SUBCASE("mean") {
    CHECK(check_op([&](Tape& t, Tape::NodeId in) { return t.mean_all(t.mul(in, in)); }, x23) <
          tol);
  }
  SUBCASE("layer norm") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(
                    t.mul(t.layer_norm(in, t.input(gain), t.input(bias)), t.input(other)));
              },
              x23) < tol);
  }
  SUBCASE("layer norm gain and bias") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(
                    t.mul(t.layer_norm(t.input(x23), in, t.input(bias)), t.input(other)));
              },
              gain) < tol);
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(
                    t.mul(t.layer_norm(t.input(x23), t.input(gain), in), t.input(other)));
              },
              bias) < tol);
  }
  SUBCASE("dropout with a fixed mask") {
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                Rng mask_rng(99);  // same mask every call
                return t.sum_all(t.dropout(t.tanh(in), 0.4, mask_rng));
              },
              x23) < tol);
  }
  SUBCASE("scaled dot-product attention") {
    const Tensor q = random_tensor(rng, 4, 3);
    const Tensor k = random_tensor(rng, 4, 3);
    const Tensor v = random_tensor(rng, 4, 3);
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(
                    t.tanh(scaled_dot_attention(t, in, t.input(k), t.input(v))));
              },
              q) < tol);
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(
                    t.tanh(scaled_dot_attention(t, t.input(q), in, t.input(v))));
              },
              k) < tol);
    CHECK(check_op(
              [&](Tape& t, Tape::NodeId in) {
                return t.sum_all(
                    t.tanh(scaled_dot_attention(t, t.input(q), t.input(k), in)));
              },
              v) < tol);
  }
}

TEST_CASE("backward is linear in the output") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor x = random_tensor(rng, 2, 4);
    const Tensor w = random_tensor(rng, 4, 2);
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);

    auto grad_of = [&](double ca, double cb) {
      Tape t;
      const auto in = t.input(x, true);
      const auto f = t.sum_all(t.tanh(t.matmul(in, t.input(w))));
      const auto g = t.sum_all(t.sigmoid(in));
      const auto combined = t.add(t.scale(f, ca), t.scale(g, cb));
      t.backward(combined);
      return t.grad(in);
    };
    const Tensor lhs = grad_of(a, b);
    const Tensor fa = grad_of(1.0, 0.0);
    const Tensor gb = grad_of(0.0, 1.0);
    for (int64_t i = 0; i < lhs.size(); ++i)
      CHECK(lhs.at(i) == doctest::Approx(a * fa.at(i) + b * gb.at(i)).epsilon(1e-9));
  }
}

TEST_CASE("forward and backward are bitwise reproducible") {
  Rng rng(29);
  const Tensor x = random_tensor(rng, 3, 5);
  const Tensor w = random_tensor(rng, 5, 1);
  auto run = [&] {
    Tape t;
    const auto in = t.input(x, true);
    const auto out = t.sum_all(t.sigmoid(t.matmul(t.tanh(in), t.input(w))));
    t.backward(out);
    return std::pair<double, Tensor>(t.value(out).item(), t.grad(in));
  };
  const auto [v1, g1] = run();
  const auto [v2, g2] = run();
  CHECK(v1 == v2);
  for (int64_t i = 0; i < g1.size(); ++i) CHECK(g1.at(i) == g2.at(i));
}

TEST_CASE("error contracts") {
  Tape t;
  const auto a = t.input(Tensor(2, 3), true);
  const auto b = t.input(Tensor(2, 2));
  CHECK_THROWS_AS(t.matmul(a, b), ShapeError);
  CHECK_THROWS_AS(t.add(a, b), ShapeError);
  CHECK_THROWS_AS(t.grad(a), ContractError);  // backward has not run
  const auto big = t.mul(a, a);
  CHECK_THROWS_AS(t.backward(big), ContractError);  // non-scalar output
  Tensor bad(1, 2);
  bad.at(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(t.input(bad), NumericError);

  const auto scalar = t.sum_all(big);
  t.backward(scalar);
  CHECK_THROWS_AS(t.backward(scalar), ContractError);  // one-shot tape
}

TEST_CASE("finite_diff_check contract errors") {
  auto f = [](const Tensor& x) { return x.at(0); };
  auto bad_grad = [](const Tensor&) { return Tensor(2, 2); };
  CHECK_THROWS_AS(finite_diff_check(f, bad_grad, Tensor(1, 3), 1e-5), ContractError);
  auto good_grad = [](const Tensor& x) {
    Tensor g(x.shape());
    g.at(0) = 1.0;
    return g;
  };
  CHECK_THROWS_AS(finite_diff_check(f, good_grad, Tensor(1, 3), 0.0), ContractError);
  CHECK(finite_diff_check(f, good_grad, Tensor::row({1.0, 2.0, 3.0}), 1e-5) <= 1e-9);
}
