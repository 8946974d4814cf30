#include "sigmaforge/fields.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sigmaforge::fields {

namespace {

double ipow(double x, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

// d^m/dx^m x^e evaluated at x: falling factorial times the reduced power.
double power_deriv(double x, int e, int m) {
  if (m > e) return 0.0;
  double factor = 1.0;
  for (int i = 0; i < m; ++i) factor *= static_cast<double>(e - i);
  return factor * ipow(x, e - m);
}

void check_dim(int dim) {
  if (dim <= 0) throw std::invalid_argument("field dimension must be positive");
}

}  // namespace

PolyField::PolyField(int dim) : dim_(dim) { check_dim(dim); }

PolyField PolyField::constant(int dim, double c) {
  PolyField f(dim);
  f.add_term(std::vector<int>(static_cast<size_t>(dim), 0), c);
  return f;
}

PolyField PolyField::monomial(const std::vector<int>& exponents, double coeff) {
  PolyField f(static_cast<int>(exponents.size()));
  f.add_term(exponents, coeff);
  return f;
}

PolyField PolyField::gaussian_potential(int dim, double tau, const Eigen::VectorXd& center) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (center.size() != dim) throw std::invalid_argument("center dimension mismatch");
  PolyField f(dim);
  const double q = 1.0 / (4.0 * tau);
  for (int i = 0; i < dim; ++i) {
    std::vector<int> sq(static_cast<size_t>(dim), 0);
    sq[static_cast<size_t>(i)] = 2;
    f.add_term(sq, q);
    std::vector<int> lin(static_cast<size_t>(dim), 0);
    lin[static_cast<size_t>(i)] = 1;
    f.add_term(lin, -2.0 * q * center[i]);
    f.add_constant(q * center[i] * center[i]);
  }
  return f;
}

int PolyField::degree() const {
  int deg = 0;
  for (const auto& [alpha, coeff] : terms_) {
    (void)coeff;
    deg = std::max(deg, std::accumulate(alpha.begin(), alpha.end(), 0));
  }
  return deg;
}

void PolyField::add_term(const std::vector<int>& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != dim_)
    throw std::invalid_argument("exponent vector dimension mismatch");
  for (int e : exponents)
    if (e < 0) throw std::invalid_argument("exponents must be nonnegative");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(exponents, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void PolyField::add_constant(double c) {
  add_term(std::vector<int>(static_cast<size_t>(dim_), 0), c);
}

PolyField PolyField::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("derivative axis out of range");
  PolyField out(dim_);
  for (const auto& [alpha, coeff] : terms_) {
    int e = alpha[static_cast<size_t>(axis)];
    if (e == 0) continue;
    std::vector<int> beta = alpha;
    beta[static_cast<size_t>(axis)] = e - 1;
    out.add_term(beta, coeff * static_cast<double>(e));
  }
  return out;
}

PolyField PolyField::multiply(const PolyField& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("field dimension mismatch");
  PolyField out(dim_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      std::vector<int> sum(static_cast<size_t>(dim_));
      for (int i = 0; i < dim_; ++i)
        sum[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)];
      out.add_term(sum, ca * cb);
    }
  }
  return out;
}

double PolyField::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  double acc = 0.0;
  for (const auto& [alpha, coeff] : terms_) {
    double term = coeff;
    for (int i = 0; i < dim_; ++i) term *= ipow(x[i], alpha[static_cast<size_t>(i)]);
    acc += term;
  }
  return acc;
}

Eigen::VectorXd PolyField::grad(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  for (const auto& [alpha, coeff] : terms_) {
    for (int a = 0; a < dim_; ++a) {
      if (alpha[static_cast<size_t>(a)] == 0) continue;
      double term = coeff;
      for (int i = 0; i < dim_; ++i)
        term *= power_deriv(x[i], alpha[static_cast<size_t>(i)], i == a ? 1 : 0);
      g[a] += term;
    }
  }
  return g;
}

Eigen::MatrixXd PolyField::hess(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [alpha, coeff] : terms_) {
    for (int a = 0; a < dim_; ++a) {
      for (int b = a; b < dim_; ++b) {
        double term = coeff;
        for (int i = 0; i < dim_; ++i) {
          int m = (i == a ? 1 : 0) + (i == b ? 1 : 0);
          term *= power_deriv(x[i], alpha[static_cast<size_t>(i)], m);
        }
        h(a, b) += term;
      }
    }
  }
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < a; ++b) h(a, b) = h(b, a);
  return h;
}

std::vector<Eigen::MatrixXd> PolyField::third(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  std::vector<Eigen::MatrixXd> t(static_cast<size_t>(dim_),
                                 Eigen::MatrixXd::Zero(dim_, dim_));
  for (const auto& [alpha, coeff] : terms_) {
    for (int a = 0; a < dim_; ++a) {
      for (int b = 0; b < dim_; ++b) {
        for (int c = b; c < dim_; ++c) {
          double term = coeff;
          for (int i = 0; i < dim_; ++i) {
            int m = (i == a ? 1 : 0) + (i == b ? 1 : 0) + (i == c ? 1 : 0);
            term *= power_deriv(x[i], alpha[static_cast<size_t>(i)], m);
          }
          t[static_cast<size_t>(a)](b, c) += term;
        }
      }
    }
  }
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < b; ++c) t[static_cast<size_t>(a)](b, c) = t[static_cast<size_t>(a)](c, b);
  return t;
}

PolyField& PolyField::operator+=(const PolyField& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("field dimension mismatch");
  for (const auto& [alpha, coeff] : other.terms_) add_term(alpha, coeff);
  return *this;
}

PolyField& PolyField::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, coeff] : terms_) {
    (void)alpha;
    coeff *= s;
  }
  return *this;
}

PolyField::Quadratic PolyField::quadratic_dominant() const {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim_, dim_);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim_);
  for (const auto& [alpha, coeff] : terms_) {
    int total = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (total == 1) {
      for (int i = 0; i < dim_; ++i)
        if (alpha[static_cast<size_t>(i)] == 1) b[i] += coeff;
    } else if (total == 2) {
      int first = -1, second = -1;
      for (int i = 0; i < dim_; ++i) {
        if (alpha[static_cast<size_t>(i)] == 2) first = second = i;
        if (alpha[static_cast<size_t>(i)] == 1) (first < 0 ? first : second) = i;
      }
      if (first == second) {
        H(first, first) += 2.0 * coeff;
      } else {
        H(first, second) += coeff;
        H(second, first) += coeff;
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("quadratic part is not positive definite");
  Quadratic q;
  q.H = H;
  q.center = llt.solve(-b);
  return q;
}

TrigField::TrigField(int dim) : dim_(dim) { check_dim(dim); }

TrigField TrigField::constant(int dim, double c) {
  TrigField f(dim);
  f.add_constant(c);
  return f;
}

void TrigField::add_mode(const Eigen::VectorXi& k, double cos_coeff, double sin_coeff) {
  if (k.size() != dim_) throw std::invalid_argument("mode dimension mismatch");
  std::vector<int> key(static_cast<size_t>(dim_));
  int lead = 0;
  for (int i = 0; i < dim_; ++i) {
    key[static_cast<size_t>(i)] = k[i];
    if (lead == 0 && k[i] != 0) lead = k[i];
  }
  if (lead == 0) {
    sin_coeff = 0.0;  // sin(0) contributes nothing
  } else if (lead < 0) {
    for (int& ki : key) ki = -ki;
    sin_coeff = -sin_coeff;
  }
  if (cos_coeff == 0.0 && sin_coeff == 0.0) return;
  auto [it, inserted] = modes_.emplace(key, std::array<double, 2>{cos_coeff, sin_coeff});
  if (!inserted) {
    it->second[0] += cos_coeff;
    it->second[1] += sin_coeff;
    if (it->second[0] == 0.0 && it->second[1] == 0.0) modes_.erase(it);
  }
}

void TrigField::add_constant(double c) {
  add_mode(Eigen::VectorXi::Zero(dim_), c, 0.0);
}

int TrigField::max_abs_mode() const {
  int m = 0;
  for (const auto& [k, cs] : modes_) {
    (void)cs;
    for (int ki : k) m = std::max(m, std::abs(ki));
  }
  return m;
}

TrigField TrigField::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("derivative axis out of range");
  TrigField out(dim_);
  for (const auto& [k, cs] : modes_) {
    double ka = static_cast<double>(k[static_cast<size_t>(axis)]);
    if (ka == 0.0) continue;
    Eigen::VectorXi kv(dim_);
    for (int i = 0; i < dim_; ++i) kv[i] = k[static_cast<size_t>(i)];
    out.add_mode(kv, cs[1] * ka, -cs[0] * ka);
  }
  return out;
}

double TrigField::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  double acc = 0.0;
  for (const auto& [k, cs] : modes_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += static_cast<double>(k[static_cast<size_t>(i)]) * x[i];
    acc += cs[0] * std::cos(phase) + cs[1] * std::sin(phase);
  }
  return acc;
}

Eigen::VectorXd TrigField::grad(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  for (const auto& [k, cs] : modes_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += static_cast<double>(k[static_cast<size_t>(i)]) * x[i];
    double d = -cs[0] * std::sin(phase) + cs[1] * std::cos(phase);
    for (int i = 0; i < dim_; ++i) g[i] += static_cast<double>(k[static_cast<size_t>(i)]) * d;
  }
  return g;
}

Eigen::MatrixXd TrigField::hess(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [k, cs] : modes_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += static_cast<double>(k[static_cast<size_t>(i)]) * x[i];
    double dd = -(cs[0] * std::cos(phase) + cs[1] * std::sin(phase));
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b)
        h(a, b) += static_cast<double>(k[static_cast<size_t>(a)]) *
                   static_cast<double>(k[static_cast<size_t>(b)]) * dd;
  }
  return h;
}

std::vector<Eigen::MatrixXd> TrigField::third(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  std::vector<Eigen::MatrixXd> t(static_cast<size_t>(dim_),
                                 Eigen::MatrixXd::Zero(dim_, dim_));
  for (const auto& [k, cs] : modes_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += static_cast<double>(k[static_cast<size_t>(i)]) * x[i];
    double ddd = cs[0] * std::sin(phase) - cs[1] * std::cos(phase);
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b)
        for (int c = 0; c < dim_; ++c)
          t[static_cast<size_t>(a)](b, c) += static_cast<double>(k[static_cast<size_t>(a)]) *
                                             static_cast<double>(k[static_cast<size_t>(b)]) *
                                             static_cast<double>(k[static_cast<size_t>(c)]) * ddd;
  }
  return t;
}

TrigField& TrigField::operator+=(const TrigField& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("field dimension mismatch");
  for (const auto& [k, cs] : other.modes_) {
    Eigen::VectorXi kv(dim_);
    for (int i = 0; i < dim_; ++i) kv[i] = k[static_cast<size_t>(i)];
    add_mode(kv, cs[0], cs[1]);
  }
  return *this;
}

TrigField& TrigField::operator*=(double s) {
  if (s == 0.0) {
    modes_.clear();
    return *this;
  }
  for (auto& [k, cs] : modes_) {
    (void)k;
    cs[0] *= s;
    cs[1] *= s;
  }
  return *this;
}

SphereField::SphereField(PolyField ambient) : ambient_(std::move(ambient)) {
  if (ambient_.dim() < 2)
    throw std::invalid_argument("sphere fields need ambient dimension at least 2");
}

double SphereField::value(const Eigen::VectorXd& p) const { return ambient_.value(p); }

Eigen::VectorXd SphereField::tangent_grad(const Eigen::VectorXd& p) const {
  Eigen::VectorXd g = ambient_.grad(p);
  return g - (g.dot(p)) * p;
}

Eigen::VectorXd SphereField::frame_grad(const Eigen::VectorXd& p,
                                        const Eigen::MatrixXd& frame) const {
  return frame.transpose() * ambient_.grad(p);
}

Eigen::MatrixXd SphereField::frame_hess(const Eigen::VectorXd& p,
                                        const Eigen::MatrixXd& frame) const {
  Eigen::VectorXd g = ambient_.grad(p);
  Eigen::MatrixXd h = ambient_.hess(p);
  int n = static_cast<int>(frame.cols());
  return (frame.transpose() * h * frame - (g.dot(p)) * Eigen::MatrixXd::Identity(n, n)).eval();
}

SphereField& SphereField::operator+=(const SphereField& other) {
  ambient_ += other.ambient_;
  return *this;
}

SphereField& SphereField::operator*=(double s) {
  ambient_ *= s;
  return *this;
}

}  // namespace sigmaforge::fields
