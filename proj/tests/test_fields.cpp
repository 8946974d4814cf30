#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sigmaforge/fields.hpp"

using namespace sigmaforge;

namespace {

std::mt19937_64 rng(50811u);

fields::PolyField random_poly(int n, int degree, int terms) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> expo(0, degree);
  fields::PolyField f(n);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> alpha(static_cast<size_t>(n), 0);
    int budget = degree;
    for (int i = 0; i < n; ++i) {
      int e = std::min(budget, expo(rng));
      alpha[static_cast<size_t>(i)] = e;
      budget -= e;
    }
    f.add_term(alpha, coeff(rng));
  }
  return f;
}

fields::TrigField random_trig(int n, int max_mode, int modes) {
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  std::uniform_int_distribution<int> ki(-max_mode, max_mode);
  fields::TrigField f(n);
  for (int t = 0; t < modes; ++t) {
    Eigen::VectorXi k(n);
    for (int i = 0; i < n; ++i) k[i] = ki(rng);
    f.add_mode(k, coeff(rng), coeff(rng));
  }
  return f;
}

Eigen::VectorXd random_point(int n, double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = dist(rng);
  return x;
}

// Fourth-order central difference of a scalar callable.
template <typename F>
double fd_derivative(F&& f, double h = 1e-4) {
  return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

}  // namespace

TEST_CASE("polynomial evaluation against hand values") {
  fields::PolyField f(2);
  f.add_term({2, 0}, 1.0);
  f.add_term({1, 1}, -3.0);
  f.add_term({0, 0}, 0.5);
  Eigen::Vector2d x(2.0, -1.0);
  CHECK(f.value(x) == doctest::Approx(4.0 + 6.0 + 0.5));
  Eigen::VectorXd g = f.grad(x);
  CHECK(g[0] == doctest::Approx(2.0 * 2.0 - 3.0 * -1.0));
  CHECK(g[1] == doctest::Approx(-3.0 * 2.0));
  CHECK(f.degree() == 2);
}

TEST_CASE("polynomial derivatives are consistent with the symbolic derivative") {
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 4;
    fields::PolyField f = random_poly(n, 4, 8);
    Eigen::VectorXd x = random_point(n, 1.3);
    Eigen::VectorXd g = f.grad(x);
    Eigen::MatrixXd h = f.hess(x);
    auto t = f.third(x);
    double scale = 1.0;
    for (const auto& [alpha, c] : f.terms()) {
      (void)alpha;
      scale += std::fabs(c);
    }
    for (int a = 0; a < n; ++a) {
      fields::PolyField da = f.derivative(a);
      CHECK(std::fabs(g[a] - da.value(x)) <= 1e-13 * scale * 40.0);
      for (int b = 0; b < n; ++b) {
        fields::PolyField dab = da.derivative(b);
        CHECK(std::fabs(h(a, b) - dab.value(x)) <= 1e-13 * scale * 200.0);
        for (int c = 0; c < n; ++c) {
          CHECK(std::fabs(t[static_cast<size_t>(a)](b, c) - dab.derivative(c).value(x)) <=
                1e-12 * scale * 600.0);
        }
      }
    }
  }
}

TEST_CASE("polynomial product expands correctly") {
  fields::PolyField x = fields::PolyField::monomial({1, 0}, 1.0);
  fields::PolyField y = fields::PolyField::monomial({0, 1}, 1.0);
  fields::PolyField sq = (x + y).multiply(x + y);
  CHECK(sq.terms().at({2, 0}) == 1.0);
  CHECK(sq.terms().at({1, 1}) == 2.0);
  CHECK(sq.terms().at({0, 2}) == 1.0);
  CHECK(sq.terms().size() == 3);
}

TEST_CASE("gaussian potential is the expected quadratic") {
  Eigen::Vector3d x0(0.5, -1.0, 2.0);
  double tau = 0.25;
  fields::PolyField phi = fields::PolyField::gaussian_potential(3, tau, x0);
  CHECK(phi.value(x0) == doctest::Approx(0.0));
  Eigen::Vector3d x(1.0, 0.0, 1.0);
  CHECK(phi.value(x) == doctest::Approx((x - x0).squaredNorm() / (4.0 * tau)));
  Eigen::MatrixXd h = phi.hess(x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(h(i, j) == doctest::Approx(i == j ? 1.0 / (2.0 * tau) : 0.0));
  auto quad = phi.quadratic_dominant();
  CHECK((quad.H - h).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((quad.center - x0).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("quadratic_dominant recovers the stationary point") {
  fields::PolyField f(2);
  f.add_term({2, 0}, 1.5);
  f.add_term({0, 2}, 1.0);
  f.add_term({1, 1}, 0.4);
  f.add_term({1, 0}, -1.0);
  f.add_term({0, 1}, 2.0);
  f.add_constant(7.0);
  f.add_term({3, 1}, 0.3);  // higher-degree content must be ignored
  auto quad = f.quadratic_dominant();
  Eigen::MatrixXd H(2, 2);
  H << 3.0, 0.4, 0.4, 2.0;
  CHECK((quad.H - H).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  Eigen::Vector2d b(-1.0, 2.0);
  CHECK((H * quad.center + b).cwiseAbs().maxCoeff() <= 1e-14);

  fields::PolyField bad(1);
  bad.add_term({2}, -1.0);
  CHECK_THROWS_AS(bad.quadratic_dominant(), std::domain_error);
}

TEST_CASE("trig modes canonicalize so opposite keys merge") {
  fields::TrigField f(2);
  Eigen::VectorXi k(2), mk(2);
  k << 1, -2;
  mk << -1, 2;
  f.add_mode(k, 0.7, 0.3);
  f.add_mode(mk, 0.1, 0.3);  // cos adds, sin cancels against the mirrored key
  REQUIRE(f.modes().size() == 1);
  auto cs = f.modes().begin()->second;
  CHECK(cs[0] == doctest::Approx(0.8));
  CHECK(cs[1] == doctest::Approx(0.0));
  CHECK(f.max_abs_mode() == 2);

  fields::TrigField g(2);
  g.add_mode(Eigen::VectorXi::Zero(2), 0.0, 5.0);  // sin(0) drops entirely
  CHECK(g.modes().empty());
}

TEST_CASE("trig derivatives agree with finite differences") {
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 3;
    fields::TrigField f = random_trig(n, 3, 6);
    Eigen::VectorXd x = random_point(n, 3.0);
    Eigen::VectorXd g = f.grad(x);
    Eigen::MatrixXd h = f.hess(x);
    auto t = f.third(x);
    for (int a = 0; a < n; ++a) {
      fields::TrigField da = f.derivative(a);
      auto slice = [&](double s) {
        Eigen::VectorXd y = x;
        y[a] += s;
        return f.value(y);
      };
      CHECK(std::fabs(g[a] - fd_derivative(slice)) <= 1e-9);
      CHECK(std::fabs(g[a] - da.value(x)) <= 1e-13);
      for (int b = 0; b < n; ++b) {
        fields::TrigField dab = da.derivative(b);
        CHECK(std::fabs(h(a, b) - dab.value(x)) <= 1e-12);
        for (int c = 0; c < n; ++c)
          CHECK(std::fabs(t[static_cast<size_t>(a)](b, c) - dab.derivative(c).value(x)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("sphere restriction of a linear function") {
  // f = a.x on S^2: grad_S f = a - (a.p) p and Hess_S f = -(a.p) g.
  Eigen::Vector3d a(0.3, -1.2, 0.8);
  fields::PolyField amb(3);
  amb.add_term({1, 0, 0}, a[0]);
  amb.add_term({0, 1, 0}, a[1]);
  amb.add_term({0, 0, 1}, a[2]);
  fields::SphereField f(amb);

  Eigen::Vector3d p(2.0, -1.0, 2.0);
  p.normalize();
  Eigen::VectorXd tg = f.tangent_grad(p);
  CHECK((tg - (a - a.dot(p) * p)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(std::fabs(tg.dot(p)) <= 1e-15);

  Eigen::MatrixXd frame(3, 2);
  Eigen::Vector3d e1 = p.cross(Eigen::Vector3d::UnitX()).normalized();
  Eigen::Vector3d e2 = p.cross(e1).normalized();
  frame.col(0) = e1;
  frame.col(1) = e2;
  Eigen::MatrixXd hs = f.frame_hess(p, frame);
  double expected = -a.dot(p);
  CHECK((hs - expected * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("sphere restriction of |x|^2 is covariantly constant") {
  fields::PolyField amb(4);
  for (int i = 0; i < 4; ++i) {
    std::vector<int> sq(4, 0);
    sq[static_cast<size_t>(i)] = 2;
    amb.add_term(sq, 1.0);
  }
  fields::SphereField f(amb);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd p = random_point(4, 1.0);
    if (p.norm() < 0.2) p[0] += 1.0;
    p.normalize();
    CHECK(f.value(p) == doctest::Approx(1.0));
    CHECK(f.tangent_grad(p).cwiseAbs().maxCoeff() <= 1e-14);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(p);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd tangent = q.rightCols(3);
    Eigen::MatrixXd hs = f.frame_hess(p, tangent);
    CHECK(hs.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("sphere hessian matches geodesic second derivatives") {
  fields::PolyField amb = random_poly(3, 3, 6);
  fields::SphereField f(amb);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd p = random_point(3, 1.0);
    if (p.norm() < 0.2) p[2] += 1.0;
    p.normalize();
    Eigen::Vector3d pv = p;
    Eigen::Vector3d e1 = pv.cross(std::fabs(pv[0]) < 0.9 ? Eigen::Vector3d::UnitX()
                                                         : Eigen::Vector3d::UnitY())
                             .normalized();
    Eigen::Vector3d e2 = pv.cross(e1).normalized();
    Eigen::MatrixXd frame(3, 2);
    frame.col(0) = e1;
    frame.col(1) = e2;
    Eigen::MatrixXd hs = f.frame_hess(p, frame);

    auto geodesic_second = [&](const Eigen::Vector3d& u) {
      auto along = [&](double t) { return f.value(std::cos(t) * pv + std::sin(t) * u); };
      double h = 1e-4;
      return (along(h) - 2.0 * along(0.0) + along(-h)) / (h * h);
    };
    CHECK(std::fabs(hs(0, 0) - geodesic_second(e1)) <= 1e-6);
    CHECK(std::fabs(hs(1, 1) - geodesic_second(e2)) <= 1e-6);
    Eigen::Vector3d mix = ((e1 + e2) / std::sqrt(2.0)).eval();
    double mixed = geodesic_second(mix);
    CHECK(std::fabs(0.5 * (hs(0, 0) + hs(1, 1)) + hs(0, 1) - mixed) <= 1e-6);
  }
}

TEST_CASE("field argument validation") {
  CHECK_THROWS_AS(fields::PolyField(0), std::invalid_argument);
  fields::PolyField f(2);
  CHECK_THROWS_AS(f.add_term({1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.add_term({-1, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.derivative(2), std::invalid_argument);
  CHECK_THROWS_AS(f.value(Eigen::VectorXd::Zero(3)), std::invalid_argument);
  fields::TrigField g(2);
  CHECK_THROWS_AS(g.add_mode(Eigen::VectorXi::Zero(3), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fields::PolyField::gaussian_potential(2, -1.0, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
}
