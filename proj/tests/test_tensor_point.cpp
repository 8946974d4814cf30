#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sigmaforge/tensor_point.hpp"
#include "sigmaforge/wsym.hpp"

using namespace sigmaforge;

namespace {

std::mt19937_64 rng(40923u);

std::vector<double> random_components(size_t count, double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> out(count);
  for (double& x : out) x = dist(rng);
  return out;
}

Eigen::MatrixXd random_symmetric(int n, double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd random_vector(int n, double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

tensor::PointCurvature random_point(int n) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  tensor::PointCurvature pc;
  pc.Y = dist(rng);
  pc.ric = tensor::Sym2::from(random_symmetric(n));
  pc.cotton = tensor::Cotton3::from(n, random_components(static_cast<size_t>(n) * n * n));
  pc.riem = tensor::Curv4::from(n, random_components(static_cast<size_t>(n) * n * n * n));
  return pc;
}

}  // namespace

TEST_CASE("Sym2 construction symmetrizes exactly") {
  Eigen::MatrixXd raw(3, 3);
  raw << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0;
  tensor::Sym2 s = tensor::Sym2::from(raw);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(s(i, j) == s(j, i));
  CHECK(s(0, 1) == doctest::Approx(3.0));
  CHECK_THROWS_AS(tensor::Sym2::from(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("Cotton3 antisymmetry is exact") {
  const int n = 4;
  tensor::Cotton3 c = tensor::Cotton3::from(n, random_components(static_cast<size_t>(n) * n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) CHECK(c.at(a, b, k) == -c.at(b, a, k));
  tensor::Cotton3 combo = c.minus_scaled(0.37, c);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) CHECK(combo.at(a, b, k) == -combo.at(b, a, k));
}

TEST_CASE("frozen a_dot_db contraction") {
  const int n = 3;
  const double eps = 0.25;
  std::vector<double> raw(static_cast<size_t>(n) * n * n, 0.0);
  raw[(1u * n + 2u) * n + 1u] = eps;   // dB[1][2][1]
  raw[(2u * n + 1u) * n + 1u] = -eps;  // dB[2][1][1]
  tensor::Cotton3 dB = tensor::Cotton3::from(n, raw);
  Eigen::VectorXd v = tensor::a_dot_db(tensor::Sym2::identity(n), dB);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(0.0));
  CHECK(v[2] == doctest::Approx(eps));

  // Sym2 already carries the symmetrization, so feeding an unsymmetric raw
  // matrix and its explicit symmetrization must contract identically.
  Eigen::MatrixXd rawA(3, 3);
  rawA << 0.0, 1.0, 0.0, 3.0, 0.0, 2.0, -1.0, 0.5, 0.0;
  Eigen::MatrixXd symA = 0.5 * (rawA + rawA.transpose());
  Eigen::VectorXd v1 = tensor::a_dot_db(tensor::Sym2::from(rawA), dB);
  Eigen::VectorXd v2 = tensor::a_dot_db(tensor::Sym2::from(symA), dB);
  CHECK((v1 - v2).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("Curv4 projection enforces every identity exactly") {
  for (int n : {3, 4, 5, 6}) {
    tensor::Curv4 R =
        tensor::Curv4::from(n, random_components(static_cast<size_t>(n) * n * n * n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            CHECK(R.at(i, j, k, l) == -R.at(j, i, k, l));
            CHECK(R.at(i, j, k, l) == -R.at(i, j, l, k));
            CHECK(R.at(i, j, k, l) == R.at(k, l, i, j));
            double cyc = R.at(i, j, k, l) + R.at(j, k, i, l) + R.at(k, i, j, l);
            CHECK(cyc == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("Curv4 projection is idempotent and fixes valid tensors") {
  const int n = 4;
  tensor::Curv4 R = tensor::Curv4::from(n, random_components(static_cast<size_t>(n) * n * n * n));
  std::vector<double> comps(static_cast<size_t>(n) * n * n * n);
  size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) comps[idx++] = R.at(i, j, k, l);
  tensor::Curv4 again = tensor::Curv4::from(n, comps);
  idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) CHECK(again.at(i, j, k, l) == comps[idx++]);

  tensor::Curv4 sphere = tensor::Curv4::constant_curvature(3, 1.0);
  CHECK(sphere.at(0, 1, 0, 1) == 1.0);
  CHECK(sphere.at(0, 1, 1, 0) == -1.0);
  CHECK(sphere.at(0, 1, 0, 2) == 0.0);
}

TEST_CASE("rm_dot recovers the Ricci contraction on constant curvature") {
  for (int n : {3, 4, 5}) {
    tensor::Curv4 R = tensor::Curv4::constant_curvature(n, 1.0);
    tensor::Sym2 ric = tensor::rm_dot(R, tensor::Sym2::identity(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(ric(i, j) == doctest::Approx(i == j ? n - 1.0 : 0.0));

    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(n, n);
    proj(0, 0) = 1.0;
    tensor::Sym2 dotted = tensor::rm_dot(R, tensor::Sym2::from(proj));
    // (tr S) I - S for the constant-curvature tensor.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(dotted(i, j) == doctest::Approx((i == j ? 1.0 : 0.0) - proj(i, j)));
  }
}

TEST_CASE("pointwise sigma and Newton operators match the scalar layer") {
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(trial % 4);
    tensor::PointCurvature pc = random_point(n);
    wsym::SymPair sp(pc.Y, pc.ric.mat());
    for (int k = 0; k <= 5; ++k) {
      CHECK(tensor::sigma_pt(k, pc) == doctest::Approx(wsym::weighted_sigma(k, sp)).epsilon(1e-12));
    }
    double scale = std::pow(tensor::magnitude(pc), 5);
    for (int k = 1; k <= 4; ++k) {
      Eigen::MatrixXd lhs = tensor::newton_pt(k, pc).mat();
      Eigen::MatrixXd rhs = tensor::sigma_pt(k, pc) * Eigen::MatrixXd::Identity(n, n) -
                            tensor::newton_pt(k - 1, pc).mat() * pc.ric.mat();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-11 * scale);
    }
  }
}

TEST_CASE("trace-adjusted contraction identity") {
  for (int trial = 0; trial < 500; ++trial) {
    int n = 2 + static_cast<int>(trial % 4);
    tensor::PointCurvature pc = random_point(n);
    for (int k = 0; k <= 4; ++k) {
      double lhs = (tensor::e_pt(k, pc).mat() * pc.ric.mat()).trace();
      double s1 = tensor::sigma_pt(1, pc);
      double rhs = (k + 1) * tensor::sigma_pt(k + 1, pc) - s1 * tensor::sigma_pt(k, pc);
      double scale = std::pow(tensor::magnitude(pc), k + 1);
      CHECK(std::fabs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("Einstein points make E_k a multiple of the identity") {
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(trial % 3);
    double c = dist(rng);
    tensor::PointCurvature pc;
    pc.Y = dist(rng);
    pc.ric = tensor::Sym2::from(c * Eigen::MatrixXd::Identity(n, n));
    pc.cotton = tensor::Cotton3::zero(n);
    pc.riem = tensor::Curv4::zero(n);
    for (int k = 1; k <= 4; ++k) {
      tensor::Sym2 E = tensor::e_pt(k, pc);
      wsym::WeightedSpectrum all{pc.Y, std::vector<double>(static_cast<size_t>(n), c)};
      wsym::WeightedSpectrum removed{pc.Y, std::vector<double>(static_cast<size_t>(n - 1), c)};
      double factor = wsym::weighted_sigma(k, removed) - wsym::weighted_sigma(k, all);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(E(i, j) == doctest::Approx(i == j ? factor : 0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("s_tensor vanishes for low order and parallel data") {
  tensor::PointCurvature pc = random_point(4);
  CHECK(tensor::s_tensor(0, pc).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tensor::s_tensor(1, pc).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tensor::s_tensor(2, pc).cwiseAbs().maxCoeff() == 0.0);
  tensor::PointCurvature flat = pc;
  flat.cotton = tensor::Cotton3::zero(4);
  for (int k = 3; k <= 6; ++k) {
    CHECK(tensor::s_tensor(k, flat).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("flat obstruction leading coefficient matches the prediction") {
  int nonzero = 0, total = 0;
  for (int k : {3, 4, 5}) {
    for (int trial = 0; trial < 60; ++trial) {
      int n = 3 + (trial % 3);
      tensor::PointCurvature pc = random_point(n);
      Eigen::VectorXd X = random_vector(n);
      if (X.norm() < 0.1) X[0] += 1.0;
      Eigen::VectorXd grad = random_vector(n);
      tensor::FlatObstruction probe = tensor::to_flat_leading_coeff(k, pc, X, grad);
      double scale = std::max(1.0, probe.predicted.cwiseAbs().maxCoeff());
      CHECK((probe.fitted - probe.predicted).cwiseAbs().maxCoeff() <= 1e-8 * scale);
      ++total;
      if (probe.predicted.cwiseAbs().maxCoeff() > 1e-10) ++nonzero;
    }
  }
  CHECK(nonzero >= (total * 95) / 100);
}

TEST_CASE("to_flat argument validation") {
  tensor::PointCurvature pc = random_point(3);
  CHECK_THROWS_AS(
      tensor::to_flat_leading_coeff(2, pc, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      tensor::to_flat_leading_coeff(3, pc, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      tensor::to_flat_leading_coeff(3, pc, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Zero(3)),
      std::invalid_argument);
}
