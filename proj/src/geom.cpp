#include "sigmaforge/geom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigmaforge::geom {

namespace {

void check_backend(const Backend& b) {
  if (b.n < 1) throw std::invalid_argument("backend dimension must be positive");
  if (!(b.scale > 0.0)) throw std::invalid_argument("metric scale must be positive");
}

void check_point(const Backend& b, const Eigen::VectorXd& x) {
  if (x.size() != b.ambient_dim()) throw std::invalid_argument("point dimension mismatch");
  if (b.kind == BackendKind::Sphere && std::fabs(x.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("sphere points must be unit vectors");
}

}  // namespace

Backend Backend::euclidean(int n, double scale) {
  Backend b{BackendKind::Euclidean, n, scale};
  check_backend(b);
  return b;
}

Backend Backend::torus(int n, double scale) {
  Backend b{BackendKind::Torus, n, scale};
  check_backend(b);
  return b;
}

Backend Backend::sphere(int n) {
  Backend b{BackendKind::Sphere, n, 1.0};
  check_backend(b);
  return b;
}

Backend scale_metric(const Backend& b, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("metric scale factor must be positive");
  if (b.kind == BackendKind::Sphere) {
    if (c != 1.0) throw std::invalid_argument("the round sphere carries no metric scale");
    return b;
  }
  Backend out = b;
  out.scale *= c;
  return out;
}

void check_pairing(const Backend& b, const Field& f) {
  switch (b.kind) {
    case BackendKind::Euclidean:
      if (const auto* p = std::get_if<fields::PolyField>(&f)) {
        if (p->dim() == b.n) return;
      }
      throw std::invalid_argument("euclidean backends pair with polynomial fields of matching dimension");
    case BackendKind::Torus:
      if (const auto* t = std::get_if<fields::TrigField>(&f)) {
        if (t->dim() == b.n) return;
      }
      throw std::invalid_argument("torus backends pair with trigonometric fields of matching dimension");
    case BackendKind::Sphere:
      if (const auto* s = std::get_if<fields::SphereField>(&f)) {
        if (s->ambient_dim() == b.n + 1) return;
      }
      throw std::invalid_argument("sphere backends pair with sphere fields of matching ambient dimension");
  }
  throw std::invalid_argument("unknown backend kind");
}

double field_value(const Field& f, const Eigen::VectorXd& x) {
  return std::visit([&](const auto& g) { return g.value(x); }, f);
}

Eigen::VectorXd field_frame_grad(const Backend& b, const Field& f, const Eigen::VectorXd& x) {
  check_pairing(b, f);
  check_point(b, x);
  if (b.kind == BackendKind::Sphere) {
    const auto& s = std::get<fields::SphereField>(f);
    return s.frame_grad(x, sphere_frame(x));
  }
  double cs = std::sqrt(b.scale);
  return std::visit(
      [&](const auto& g) -> Eigen::VectorXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, fields::SphereField>)
          throw std::logic_error("unreachable");
        else
          return g.grad(x) / cs;
      },
      f);
}

Eigen::MatrixXd field_frame_hess(const Backend& b, const Field& f, const Eigen::VectorXd& x) {
  check_pairing(b, f);
  check_point(b, x);
  if (b.kind == BackendKind::Sphere) {
    const auto& s = std::get<fields::SphereField>(f);
    return s.frame_hess(x, sphere_frame(x));
  }
  return std::visit(
      [&](const auto& g) -> Eigen::MatrixXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, fields::SphereField>)
          throw std::logic_error("unreachable");
        else
          return g.hess(x) / b.scale;
      },
      f);
}

Field field_axpy(Field base, double t, const Field& dir) {
  if (base.index() != dir.index())
    throw std::invalid_argument("fields must share a representation");
  std::visit(
      [&](auto& g) {
        using T = std::decay_t<decltype(g)>;
        g += t * std::get<T>(dir);
      },
      base);
  return base;
}

Field field_add_constant(Field f, double c) {
  std::visit([&](auto& g) { g.add_constant(c); }, f);
  return f;
}

Eigen::MatrixXd sphere_frame(const Eigen::VectorXd& p) {
  int m = static_cast<int>(p.size());
  if (m < 2) throw std::invalid_argument("sphere frame needs ambient dimension at least 2");
  if (std::fabs(p.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("sphere frame needs a unit vector");
  double s = p[0] >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd v = p;
  v[0] += s;
  double vv = v.squaredNorm();
  // Columns 1..m-1 of the Householder reflection I - 2 v v^T / |v|^2 span p's
  // orthogonal complement; |v|^2 = 2(1 + |p_0|) never degenerates.
  Eigen::MatrixXd frame(m, m - 1);
  for (int j = 1; j < m; ++j) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
    col[j] = 1.0;
    col -= (2.0 * v[j] / vv) * v;
    frame.col(j - 1) = col;
  }
  return frame;
}

namespace detail {

namespace {

// Eigenvalue form of Golub-Welsch: nodes are the eigenvalues of the Jacobi
// matrix, weights are mu0 times the squared first eigenvector components.
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
  int q = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
  for (int i = 0; i < q; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < q; ++i) {
    J(i, i + 1) = offdiag[i];
    J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw std::runtime_error("quadrature eigensolve failed");
  nodes.resize(static_cast<size_t>(q));
  weights.resize(static_cast<size_t>(q));
  for (int i = 0; i < q; ++i) {
    nodes[static_cast<size_t>(i)] = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    weights[static_cast<size_t>(i)] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_hermite(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) throw std::invalid_argument("quadrature order must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd off(q > 1 ? q - 1 : 0);
  for (int i = 1; i < q; ++i) off[i - 1] = std::sqrt(0.5 * i);
  golub_welsch(diag, off, std::sqrt(std::numbers::pi), nodes, weights);
}

void gauss_jacobi(int q, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  if (q < 1) throw std::invalid_argument("quadrature order must be positive");
  if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("jacobi exponents must exceed -1");
  Eigen::VectorXd diag(q);
  Eigen::VectorXd off(q > 1 ? q - 1 : 0);
  double ab = alpha + beta;
  diag[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < q; ++k) {
    double d = 2.0 * k + ab;
    diag[k] = (beta * beta - alpha * alpha) / (d * (d + 2.0));
  }
  for (int k = 1; k < q; ++k) {
    double d = 2.0 * k + ab;
    double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    double den = d * d * (d + 1.0) * (d - 1.0);
    off[k - 1] = std::sqrt(num / den);
  }
  double mu0 = std::exp((ab + 1.0) * std::numbers::ln2 + std::lgamma(alpha + 1.0) +
                        std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  golub_welsch(diag, off, mu0, nodes, weights);
}

}  // namespace detail

namespace {

QuadratureRule euclidean_rule(const Backend& b, const Field& phi, int order) {
  const auto& p = std::get<fields::PolyField>(phi);
  auto quad = p.quadratic_dominant();
  Eigen::LLT<Eigen::MatrixXd> llt(quad.H);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("quadratic part is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  // x = m + sqrt(2) L^{-T} y maps the dominant quadratic to |y|^2, so plain
  // Lebesgue integration picks up the jacobian 2^{n/2} / det(L); the stored
  // weight additionally strips the Gauss-Hermite factor exp(-|y|^2) and folds
  // the flat volume element scale^{n/2}.
  std::vector<double> n1, w1;
  detail::gauss_hermite(order, n1, w1);
  int n = b.n;
  double base = std::pow(b.scale, 0.5 * n) * std::pow(2.0, 0.5 * n) / L.diagonal().prod();
  Eigen::MatrixXd Linv_t =
      L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));

  size_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<size_t>(order);
    if (total > 2000000u) throw std::invalid_argument("quadrature rule too large");
  }
  QuadratureRule rule;
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  std::vector<int> idx(static_cast<size_t>(n), 0);
  Eigen::VectorXd y(n);
  for (size_t count = 0; count < total; ++count) {
    double w = base;
    for (int i = 0; i < n; ++i) {
      y[i] = n1[static_cast<size_t>(idx[static_cast<size_t>(i)])];
      w *= w1[static_cast<size_t>(idx[static_cast<size_t>(i)])];
    }
    w *= std::exp(y.squaredNorm());
    rule.nodes.push_back(quad.center + std::numbers::sqrt2 * (Linv_t * y));
    rule.weights.push_back(w);
    for (int i = 0; i < n; ++i) {
      if (++idx[static_cast<size_t>(i)] < order) break;
      idx[static_cast<size_t>(i)] = 0;
    }
  }
  return rule;
}

QuadratureRule torus_rule(const Backend& b, int order) {
  int n = b.n;
  size_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<size_t>(order);
    if (total > 2000000u) throw std::invalid_argument("quadrature rule too large");
  }
  double w = std::pow(2.0 * std::numbers::pi / order, n) * std::pow(b.scale, 0.5 * n);
  QuadratureRule rule;
  rule.nodes.reserve(total);
  rule.weights.assign(total, w);
  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (size_t count = 0; count < total; ++count) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = 2.0 * std::numbers::pi * idx[static_cast<size_t>(i)] / order;
    rule.nodes.push_back(x);
    for (int i = 0; i < n; ++i) {
      if (++idx[static_cast<size_t>(i)] < order) break;
      idx[static_cast<size_t>(i)] = 0;
    }
  }
  return rule;
}

QuadratureRule sphere_rule(const Backend& b, int order) {
  int n = b.n;
  // Colatitude i (0-based) carries the measure sin^{n-1-i}; in u = cos(theta)
  // that is the Jacobi weight (1-u^2)^{(n-2-i)/2}.
  std::vector<std::vector<double>> un(static_cast<size_t>(n - 1)), uw(static_cast<size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) {
    double e = 0.5 * (n - 2 - i);
    detail::gauss_jacobi(order, e, e, un[static_cast<size_t>(i)], uw[static_cast<size_t>(i)]);
  }
  int azimuth = 2 * order + 2;
  size_t total = static_cast<size_t>(azimuth);
  for (int i = 0; i < n - 1; ++i) {
    total *= static_cast<size_t>(order);
    if (total > 2000000u) throw std::invalid_argument("quadrature rule too large");
  }
  QuadratureRule rule;
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  std::vector<int> idx(static_cast<size_t>(n - 1), 0);
  size_t polar_total = total / static_cast<size_t>(azimuth);
  for (size_t count = 0; count < polar_total; ++count) {
    double w_polar = 1.0;
    double prefix = 1.0;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n + 1);
    for (int i = 0; i < n - 1; ++i) {
      double u = un[static_cast<size_t>(i)][static_cast<size_t>(idx[static_cast<size_t>(i)])];
      w_polar *= uw[static_cast<size_t>(i)][static_cast<size_t>(idx[static_cast<size_t>(i)])];
      x[i] = prefix * u;
      prefix *= std::sqrt(std::max(0.0, 1.0 - u * u));
    }
    for (int j = 0; j < azimuth; ++j) {
      double a = 2.0 * std::numbers::pi * j / azimuth;
      Eigen::VectorXd node = x;
      node[n - 1] = prefix * std::cos(a);
      node[n] = prefix * std::sin(a);
      rule.nodes.push_back(node);
      rule.weights.push_back(w_polar * 2.0 * std::numbers::pi / azimuth);
    }
    for (int i = 0; i < n - 1; ++i) {
      if (++idx[static_cast<size_t>(i)] < order) break;
      idx[static_cast<size_t>(i)] = 0;
    }
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(const Backend& b, const Field& phi, int order) {
  check_backend(b);
  check_pairing(b, phi);
  if (order < 1) throw std::invalid_argument("quadrature order must be positive");
  switch (b.kind) {
    case BackendKind::Euclidean:
      return euclidean_rule(b, phi, order);
    case BackendKind::Torus:
      return torus_rule(b, order);
    case BackendKind::Sphere:
      return sphere_rule(b, order);
  }
  throw std::invalid_argument("unknown backend kind");
}

tensor::PointCurvature point_curvature(const Backend& b, const Field& phi,
                                       const Eigen::VectorXd& x, double lambda) {
  check_pairing(b, phi);
  check_point(b, x);
  int n = b.n;
  tensor::PointCurvature pc;
  if (b.kind == BackendKind::Sphere) {
    const auto& f = std::get<fields::SphereField>(phi);
    Eigen::MatrixXd frame = sphere_frame(x);
    Eigen::MatrixXd ric = (n - 1.0 - lambda) * Eigen::MatrixXd::Identity(n, n) +
                          f.frame_hess(x, frame);
    pc.ric = tensor::Sym2::from(ric);
    double scal = static_cast<double>(n) * (n - 1.0);
    pc.Y = -0.5 * (scal + f.tangent_grad(x).squaredNorm() - 2.0 * lambda * f.value(x));
    pc.cotton = tensor::Cotton3::zero(n);
    pc.riem = tensor::Curv4::constant_curvature(n, 1.0);
    return pc;
  }
  double c = b.scale;
  Eigen::VectorXd g = std::visit(
      [&](const auto& f) -> Eigen::VectorXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, fields::SphereField>)
          throw std::logic_error("unreachable");
        else
          return f.grad(x);
      },
      phi);
  Eigen::MatrixXd h = std::visit(
      [&](const auto& f) -> Eigen::MatrixXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, fields::SphereField>)
          throw std::logic_error("unreachable");
        else
          return f.hess(x);
      },
      phi);
  pc.ric = tensor::Sym2::from(h / c - lambda * Eigen::MatrixXd::Identity(n, n));
  pc.Y = -0.5 * (g.squaredNorm() / c - 2.0 * lambda * field_value(phi, x));
  pc.cotton = tensor::Cotton3::zero(n);
  pc.riem = tensor::Curv4::zero(n);
  return pc;
}

CurvJet curvature_jet(const Backend& b, const Field& phi, const Eigen::VectorXd& x,
                      double lambda) {
  if (!b.flat()) throw std::invalid_argument("curvature jets require a flat backend");
  check_pairing(b, phi);
  check_point(b, x);
  int n = b.n;
  double c = b.scale;
  double cs = std::sqrt(c);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  std::vector<Eigen::MatrixXd> t3;
  std::visit(
      [&](const auto& f) {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, fields::SphereField>) {
          throw std::logic_error("unreachable");
        } else {
          g = f.grad(x);
          h = f.hess(x);
          t3 = f.third(x);
        }
      },
      phi);
  CurvJet jet;
  jet.ric = h / c - lambda * Eigen::MatrixXd::Identity(n, n);
  jet.Y = -0.5 * (g.squaredNorm() / c - 2.0 * lambda * field_value(phi, x));
  jet.dY = Eigen::VectorXd(n);
  for (int a = 0; a < n; ++a) jet.dY[a] = -(h.row(a).dot(g) / c - lambda * g[a]) / cs;
  jet.dric.resize(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) jet.dric[static_cast<size_t>(a)] = t3[static_cast<size_t>(a)] / (c * cs);
  jet.dphi = g / cs;
  return jet;
}

}  // namespace sigmaforge::geom
