#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sigmaforge/wsym.hpp"

using namespace sigmaforge;

namespace {

std::mt19937_64 rng(7130u);

wsym::WeightedSpectrum random_spectrum(int n, double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  wsym::WeightedSpectrum ws;
  ws.mu0 = dist(rng);
  ws.mu.resize(static_cast<size_t>(n));
  for (double& m : ws.mu) m = dist(rng);
  return ws;
}

// Strictly inside every Gamma_k^{inf,-}: mu0 < 0 and all mu_j <= 0.
wsym::WeightedSpectrum random_cone_spectrum(int n) {
  std::uniform_real_distribution<double> neg(0.1, 2.0);
  std::uniform_real_distribution<double> small(0.0, 1.0);
  wsym::WeightedSpectrum ws;
  ws.mu0 = -neg(rng);
  ws.mu.resize(static_cast<size_t>(n));
  for (double& m : ws.mu) m = -small(rng);
  return ws;
}

Eigen::MatrixXd random_orthogonal(int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("frozen scalar values") {
  CHECK(wsym::weighted_sigma(0, wsym::WeightedSpectrum{3.0, {1.0, 2.0}}) == doctest::Approx(1.0));
  CHECK(wsym::weighted_sigma(1, wsym::WeightedSpectrum{1.0, {2.0, 3.0}}) == doctest::Approx(6.0));
  CHECK(wsym::weighted_sigma(2, wsym::WeightedSpectrum{0.0, {1.0, 2.0, 3.0}}) == doctest::Approx(11.0));
  CHECK(wsym::weighted_sigma(2, wsym::WeightedSpectrum{1.0, {1.0, 2.0}}) == doctest::Approx(5.5));
  CHECK(wsym::weighted_sigma(3, wsym::WeightedSpectrum{2.0, {0.0, 0.0}}) == doctest::Approx(4.0 / 3.0));
  CHECK(wsym::weighted_sigma(3, wsym::WeightedSpectrum{2.0, {}}) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("empty spectrum reduces to the exponential series") {
  for (int k = 0; k <= 12; ++k) {
    double expect = std::pow(-1.7, k) / factorial(k);
    CHECK(wsym::weighted_sigma(k, wsym::WeightedSpectrum{-1.7, {}}) ==
          doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("frozen generating coefficients") {
  std::vector<double> c = wsym::generating_coeffs(wsym::WeightedSpectrum{1.0, {1.0, 2.0}}, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(4.0));
  CHECK(c[2] == doctest::Approx(5.5));
}

TEST_CASE("shift formula agrees with direct evaluation") {
  CHECK(wsym::weighted_sigma_shifted(1, wsym::WeightedSpectrum{-1.0, {4.0}}, 1.0) == doctest::Approx(4.0));
  std::uniform_int_distribution<int> ns(0, 8), ks(0, 10);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  for (int trial = 0; trial < 4000; ++trial) {
    wsym::WeightedSpectrum ws = random_spectrum(ns(rng));
    int k = ks(rng);
    double s = shift(rng);
    wsym::WeightedSpectrum shifted{ws.mu0 + s, ws.mu};
    double direct = wsym::weighted_sigma(k, shifted);
    double series = wsym::weighted_sigma_shifted(k, ws, s);
    double scale = std::max(1.0, wsym::magnitude_scale(shifted, k));
    CHECK(std::fabs(direct - series) <= 1e-12 * scale);
  }
}

TEST_CASE("generating function agrees with the recursion") {
  std::uniform_int_distribution<int> ns(0, 8);
  const int K = 10;
  for (int trial = 0; trial < 1000; ++trial) {
    wsym::WeightedSpectrum ws = random_spectrum(ns(rng));
    std::vector<double> gen = wsym::generating_coeffs(ws, K);
    std::vector<double> rec = wsym::sigma_all(K, ws);
    for (int j = 0; j <= K; ++j) {
      double scale = std::max(1.0, wsym::magnitude_scale(ws, j));
      CHECK(std::fabs(gen[static_cast<size_t>(j)] - rec[static_cast<size_t>(j)]) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("permutation invariance") {
  for (int trial = 0; trial < 300; ++trial) {
    wsym::WeightedSpectrum ws = random_spectrum(6);
    wsym::WeightedSpectrum shuffled = ws;
    std::shuffle(shuffled.mu.begin(), shuffled.mu.end(), rng);
    for (int k = 0; k <= 6; ++k) {
      double scale = std::max(1.0, wsym::magnitude_scale(ws, k));
      CHECK(std::fabs(wsym::weighted_sigma(k, ws) - wsym::weighted_sigma(k, shuffled)) <=
            1e-13 * scale);
    }
  }
}

TEST_CASE("newton inequality gap") {
  CHECK(wsym::newton_gap(1, wsym::WeightedSpectrum{0.0, {1.0, 1.0}}) == doctest::Approx(1.0));
  std::uniform_int_distribution<int> ns(0, 8), ks(1, 6);
  for (int trial = 0; trial < 10000; ++trial) {
    wsym::WeightedSpectrum ws = random_spectrum(ns(rng));
    int k = ks(rng);
    double scale = std::max(1.0, wsym::magnitude_scale(ws, 2 * k));
    CHECK(wsym::newton_gap(k, ws) >= -1e-12 * scale);
  }
}

TEST_CASE("newton equality families") {
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::uniform_int_distribution<int> ns(1, 6), ks(1, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = ns(rng);
    int k = std::min(ks(rng), n);
    wsym::WeightedSpectrum ws;
    ws.mu.assign(static_cast<size_t>(n), 0.0);
    if (trial % 2 == 0) {
      ws.mu0 = dist(rng);  // mu = 0 family
    } else {
      ws.mu0 = 0.0;  // at most k-1 nonzero slots
      std::uniform_int_distribution<int> cnt(0, k - 1);
      int nz = std::min(cnt(rng), n);
      for (int i = 0; i < nz; ++i) ws.mu[static_cast<size_t>(i)] = dist(rng);
      std::shuffle(ws.mu.begin(), ws.mu.end(), rng);
    }
    REQUIRE(wsym::newton_equality_family(k, ws, 1e-14));
    double scale = std::max(1.0, wsym::magnitude_scale(ws, 2 * k));
    CHECK(std::fabs(wsym::newton_gap(k, ws)) <= 1e-12 * scale);
  }
}

TEST_CASE("cone report margins and nesting") {
  wsym::ConeReport report = wsym::cone_report(wsym::WeightedSpectrum{-1.0, {0.0, 0.0, 0.0}}, 5);
  CHECK(report.max_k == 5);
  for (int j = 1; j <= 5; ++j) {
    CHECK(report.margins[static_cast<size_t>(j - 1)] == doctest::Approx(1.0 / factorial(j)));
  }

  for (int trial = 0; trial < 500; ++trial) {
    wsym::WeightedSpectrum ws = random_cone_spectrum(4);
    wsym::ConeReport cr = wsym::cone_report(ws, 6);
    CHECK(cr.max_k == 6);
    // Membership in Gamma_{k+1} implies membership in Gamma_k by construction:
    // max_k is the longest strictly positive prefix.
    for (int j = 0; j < cr.max_k; ++j) CHECK(cr.margins[static_cast<size_t>(j)] > 0.0);
  }

  wsym::ConeReport outside = wsym::cone_report(wsym::WeightedSpectrum{2.0, {1.0}}, 3);
  CHECK(outside.max_k == 0);
}

TEST_CASE("newton corollary gap inside the cone") {
  for (int trial = 0; trial < 2000; ++trial) {
    wsym::WeightedSpectrum ws = random_cone_spectrum(5);
    for (int k = 1; k <= 4; ++k) {
      double scale = std::max(1.0, wsym::magnitude_scale(ws, k + 1));
      CHECK(wsym::newton_cor_gap(k, ws) >= -1e-12 * scale);
    }
  }
  // Equality case mu = 0.
  wsym::WeightedSpectrum gauss{-0.5, {0.0, 0.0}};
  for (int k = 1; k <= 4; ++k) {
    CHECK(std::fabs(wsym::newton_cor_gap(k, gauss)) <= 1e-13);
  }
  CHECK_THROWS_AS(wsym::newton_cor_gap(2, wsym::WeightedSpectrum{3.0, {1.0, 1.0}}), std::domain_error);
}

TEST_CASE("remove-one identity") {
  std::uniform_int_distribution<int> ns(1, 7), ks(1, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = ns(rng);
    wsym::WeightedSpectrum ws = random_spectrum(n);
    int k = ks(rng);
    std::uniform_int_distribution<int> idx(0, n - 1);
    int i = idx(rng);
    wsym::WeightedSpectrum bar = wsym::remove_coordinate(ws, i);
    double lhs = wsym::weighted_sigma(k, ws);
    double rhs = wsym::weighted_sigma(k, bar) +
                 ws.mu[static_cast<size_t>(i)] * wsym::weighted_sigma(k - 1, bar);
    double scale = std::max(1.0, wsym::magnitude_scale(ws, k));
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("matrix sigma paths agree and respect conjugation") {
  std::uniform_int_distribution<int> ns(1, 6);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 400; ++trial) {
    int n = ns(rng);
    wsym::WeightedSpectrum ws = random_spectrum(n, -3.0, 3.0);
    Eigen::VectorXd lam = Eigen::Map<Eigen::VectorXd>(ws.mu.data(), n);
    Eigen::MatrixXd Q = random_orthogonal(n);
    wsym::SymPair sp(ws.mu0, Q * lam.asDiagonal() * Q.transpose());
    std::vector<double> eig_path = wsym::sigma_all(6, sp);
    std::vector<double> trace_path = wsym::sigma_all_via_traces(6, sp);
    std::vector<double> scalar = wsym::sigma_all(6, ws);
    for (int k = 0; k <= 6; ++k) {
      double scale = std::max(1.0, wsym::magnitude_scale(ws, k));
      CHECK(std::fabs(eig_path[static_cast<size_t>(k)] - trace_path[static_cast<size_t>(k)]) <=
            1e-12 * scale);
      CHECK(std::fabs(eig_path[static_cast<size_t>(k)] - scalar[static_cast<size_t>(k)]) <=
            1e-11 * scale);
    }
  }
}

TEST_CASE("frozen newton transform") {
  Eigen::MatrixXd P(2, 2);
  P << 1.0, 0.0, 0.0, 2.0;
  wsym::SymPair sp(1.0, P);
  Eigen::MatrixXd T1 = wsym::newton_transform(1, sp);
  CHECK(T1(0, 0) == doctest::Approx(3.0));
  CHECK(T1(1, 1) == doctest::Approx(2.0));
  CHECK(T1(0, 1) == doctest::Approx(0.0));
  double contraction = (T1 * sp.P).trace();
  CHECK(contraction == doctest::Approx(7.0));
  CHECK(contraction ==
        doctest::Approx(2.0 * wsym::weighted_sigma(2, sp) - 1.0 * wsym::weighted_sigma(1, sp)));
}

TEST_CASE("newton transform recursion, eigenvalues and contraction") {
  std::uniform_int_distribution<int> ns(2, 6), ks(1, 6);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 400; ++trial) {
    int n = ns(rng);
    int k = ks(rng);
    wsym::WeightedSpectrum ws = random_spectrum(n, -3.0, 3.0);
    Eigen::VectorXd lam = Eigen::Map<Eigen::VectorXd>(ws.mu.data(), n);
    Eigen::MatrixXd Q = random_orthogonal(n);
    wsym::SymPair sp(ws.mu0, Q * lam.asDiagonal() * Q.transpose());
    double scale = std::max(1.0, wsym::magnitude_scale(ws, k + 1));

    Eigen::MatrixXd Tk = wsym::newton_transform(k, sp);
    Eigen::MatrixXd recur = wsym::weighted_sigma(k, sp) * Eigen::MatrixXd::Identity(n, n) -
                            wsym::newton_transform(k - 1, sp) * sp.P;
    CHECK((Tk - recur).cwiseAbs().maxCoeff() <= 1e-10 * scale);

    // Eigenvalues of T_k in the eigenbasis of P are the remove-one sigmas.
    Eigen::MatrixXd diagT = Q.transpose() * Tk * Q;
    for (int i = 0; i < n; ++i) {
      double expect = wsym::weighted_sigma(k, wsym::remove_coordinate(ws, i));
      CHECK(std::fabs(diagT(i, i) - expect) <= 1e-9 * scale);
    }

    double contraction = (Tk * sp.P).trace();
    double expect = (k + 1) * wsym::weighted_sigma(k + 1, sp) - ws.mu0 * wsym::weighted_sigma(k, sp);
    CHECK(std::fabs(contraction - expect) <= 1e-9 * scale);
  }
}

TEST_CASE("cone membership makes the newton transform definite") {
  std::uniform_int_distribution<int> ns(2, 6), ks(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = ns(rng);
    int k = ks(rng);
    wsym::WeightedSpectrum ws = random_cone_spectrum(n);
    Eigen::VectorXd lam = Eigen::Map<Eigen::VectorXd>(ws.mu.data(), n);
    Eigen::MatrixXd Q = random_orthogonal(n);
    wsym::SymPair sp(ws.mu0, Q * lam.asDiagonal() * Q.transpose());
    REQUIRE(wsym::cone_report(ws, k + 1).max_k == k + 1);
    wsym::DefinitenessReport report = wsym::definiteness(k, sp);
    CHECK(report.signed_positive_definite);
    CHECK(report.min_signed > 0.0);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(wsym::weighted_sigma(-1, wsym::WeightedSpectrum{0.0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(wsym::newton_gap(0, wsym::WeightedSpectrum{0.0, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(wsym::remove_coordinate(wsym::WeightedSpectrum{0.0, {1.0}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(wsym::weighted_sigma(1, wsym::WeightedSpectrum{std::nan(""), {1.0}}), std::invalid_argument);
  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(wsym::SymPair(0.0, bad), std::invalid_argument);
}
