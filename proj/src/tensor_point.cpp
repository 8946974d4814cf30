#include "sigmaforge/tensor_point.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigmaforge::tensor {

namespace {

void require_dim_match(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

wsym::SymPair pair_of(const PointCurvature& pc) {
  return wsym::SymPair(pc.Y, pc.ric.mat());
}

// Snap to 26 significant bits relative to `ceil`, so that small integer
// combinations of snapped values stay exact in double arithmetic.
double snap(double v, double ceil) {
  if (ceil == 0.0) return 0.0;
  int e = 0;
  std::frexp(ceil, &e);
  double grid = std::ldexp(1.0, e - 27);
  return std::nearbyint(v / grid) * grid;
}

}  // namespace

Sym2 Sym2::zero(int n) { return Sym2(Eigen::MatrixXd::Zero(n, n)); }

Sym2 Sym2::identity(int n) { return Sym2(Eigen::MatrixXd::Identity(n, n)); }

Sym2 Sym2::from(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols()) throw std::invalid_argument("Sym2: matrix must be square");
  if (!raw.allFinite()) throw std::invalid_argument("Sym2: entries must be finite");
  Eigen::MatrixXd m(raw.rows(), raw.cols());
  for (int i = 0; i < raw.rows(); ++i) {
    m(i, i) = raw(i, i);
    for (int j = i + 1; j < raw.cols(); ++j) {
      double v = 0.5 * (raw(i, j) + raw(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return Sym2(std::move(m));
}

Cotton3 Cotton3::zero(int n) { return Cotton3(n); }

Cotton3 Cotton3::from(int n, const std::vector<double>& raw) {
  if (raw.size() != static_cast<size_t>(n) * n * n) {
    throw std::invalid_argument("Cotton3: raw component count mismatch");
  }
  Cotton3 out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        double v = 0.5 * (raw[out.index(a, b, c)] - raw[out.index(b, a, c)]);
        out.v_[out.index(a, b, c)] = v;
        out.v_[out.index(b, a, c)] = -v;
      }
    }
  }
  return out;
}

double Cotton3::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

Cotton3 Cotton3::minus_scaled(double t, const Cotton3& other) const {
  require_dim_match(n_, other.n_, "Cotton3::minus_scaled");
  Cotton3 out(n_);
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      for (int c = 0; c < n_; ++c) {
        double v = v_[index(a, b, c)] - t * other.v_[index(a, b, c)];
        out.v_[out.index(a, b, c)] = v;
        out.v_[out.index(b, a, c)] = -v;
      }
    }
  }
  return out;
}

Curv4 Curv4::zero(int n) { return Curv4(n); }

Curv4 Curv4::constant_curvature(int n, double kappa) {
  Curv4 out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out.v_[out.index(i, j, i, j)] = kappa;
      out.v_[out.index(i, j, j, i)] = -kappa;
    }
  }
  return out;
}

Curv4 Curv4::from(int n, const std::vector<double>& raw) {
  if (raw.size() != static_cast<size_t>(n) * n * n * n) {
    throw std::invalid_argument("Curv4: raw component count mismatch");
  }
  Curv4 out(n);
  // Antisymmetrize both index pairs and symmetrize the pair swap, writing the
  // whole sign orbit of each canonical cell so the linear symmetries hold
  // bitwise.
  auto raw_at = [&](int i, int j, int k, int l) { return raw[out.index(i, j, k, l)]; };
  auto anti = [&](int i, int j, int k, int l) {
    return 0.25 * (raw_at(i, j, k, l) - raw_at(j, i, k, l) - raw_at(i, j, l, k) +
                   raw_at(j, i, l, k));
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = i; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          if (k == i && l < j) continue;
          double v = 0.5 * (anti(i, j, k, l) + anti(k, l, i, j));
          const int orbit[8][5] = {{i, j, k, l, +1}, {j, i, k, l, -1}, {i, j, l, k, -1},
                                   {j, i, l, k, +1}, {k, l, i, j, +1}, {l, k, i, j, -1},
                                   {k, l, j, i, -1}, {l, k, j, i, +1}};
          for (const auto& o : orbit) {
            out.v_[out.index(o[0], o[1], o[2], o[3])] = o[4] * v;
          }
        }
      }
    }
  }
  // First Bianchi repair on each 4-distinct index family.  With
  // A = R_pqrs, B = R_prqs, C = R_psqr the identity reads A - B + C = 0;
  // project, snap A and B to a shared grid, and store C = B - A exactly.
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      for (int r = q + 1; r < n; ++r) {
        for (int s = r + 1; s < n; ++s) {
          double A = out.v_[out.index(p, q, r, s)];
          double B = out.v_[out.index(p, r, q, s)];
          double C = out.v_[out.index(p, s, q, r)];
          double beta = (A - B + C) / 3.0;
          double ceil = std::max({std::fabs(A) + std::fabs(beta),
                                  std::fabs(B) + std::fabs(beta), 1e-300});
          double A2 = snap(A - beta, ceil);
          double B2 = snap(B + beta, ceil);
          double C2 = B2 - A2;
          auto write_orbit = [&](int a, int b, int c, int d, double v) {
            const int orbit[8][5] = {{a, b, c, d, +1}, {b, a, c, d, -1}, {a, b, d, c, -1},
                                     {b, a, d, c, +1}, {c, d, a, b, +1}, {d, c, a, b, -1},
                                     {c, d, b, a, -1}, {d, c, b, a, +1}};
            for (const auto& o : orbit) out.v_[out.index(o[0], o[1], o[2], o[3])] = o[4] * v;
          };
          write_orbit(p, q, r, s, A2);
          write_orbit(p, r, q, s, B2);
          write_orbit(p, s, q, r, C2);
        }
      }
    }
  }
  return out;
}

double Curv4::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

Cotton3 Curv4::contract3(const Eigen::VectorXd& X) const {
  require_dim_match(n_, static_cast<int>(X.size()), "Curv4::contract3");
  std::vector<double> raw(static_cast<size_t>(n_) * n_ * n_, 0.0);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      for (int c = 0; c < n_; ++c) {
        double acc = 0.0;
        for (int m = 0; m < n_; ++m) acc += at(a, b, m, c) * X[m];
        raw[(static_cast<size_t>(a) * n_ + b) * n_ + c] = acc;
      }
    }
  }
  return Cotton3::from(n_, raw);
}

double magnitude(const PointCurvature& pc) {
  double ric_max = pc.ric.dim() > 0 ? pc.ric.mat().cwiseAbs().maxCoeff() : 0.0;
  return 1.0 + std::fabs(pc.Y) + ric_max + pc.cotton.max_abs() + pc.riem.max_abs();
}

Sym2 rm_dot(const Curv4& rm, const Sym2& S) {
  require_dim_match(rm.dim(), S.dim(), "rm_dot");
  const int n = rm.dim();
  Eigen::MatrixXd out(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = x; y < n; ++y) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) acc += rm.at(i, x, j, y) * S(i, j);
      }
      out(x, y) = acc;
      out(y, x) = acc;
    }
  }
  return Sym2::from(out);
}

Eigen::VectorXd a_dot_db(const Sym2& A, const Cotton3& dB) {
  require_dim_match(A.dim(), dB.dim(), "a_dot_db");
  const int n = A.dim();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) acc += A(a, b) * dB.at(a, c, b);
    }
    v[c] = acc;
  }
  return v;
}

double sigma_pt(int k, const PointCurvature& pc) {
  return wsym::weighted_sigma(k, pair_of(pc));
}

Sym2 newton_pt(int k, const PointCurvature& pc) {
  return Sym2::from(wsym::newton_transform(k, pair_of(pc)));
}

Sym2 e_pt(int k, const PointCurvature& pc) {
  Eigen::MatrixXd T = wsym::newton_transform(k, pair_of(pc));
  double sk = wsym::weighted_sigma(k, pair_of(pc));
  return Sym2::from(T - sk * Eigen::MatrixXd::Identity(T.rows(), T.cols()));
}

Eigen::VectorXd s_tensor(int k, const PointCurvature& pc) {
  if (k < 0) throw std::invalid_argument("s_tensor: negative order");
  const int n = pc.ric.dim();
  require_dim_match(n, pc.cotton.dim(), "s_tensor");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (k <= 2) return out;
  wsym::SymPair sp = pair_of(pc);
  Eigen::MatrixXd ric_power = pc.ric.mat();  // ric^{j+1}, starting at j = 0
  double sign = 1.0;
  for (int j = 0; j <= k - 3; ++j) {
    Eigen::VectorXd w = a_dot_db(Sym2::from(ric_power), pc.cotton);
    out += sign * (wsym::newton_transform(k - 3 - j, sp) * w);
    ric_power = ric_power * pc.ric.mat();
    sign = -sign;
  }
  return out;
}

FlatObstruction to_flat_leading_coeff(int k, const PointCurvature& pc,
                                      const Eigen::VectorXd& X,
                                      const Eigen::VectorXd& grad_phi) {
  if (k < 3) throw std::invalid_argument("to_flat_leading_coeff: requires k >= 3");
  const int n = pc.ric.dim();
  require_dim_match(n, static_cast<int>(X.size()), "to_flat_leading_coeff");
  require_dim_match(n, static_cast<int>(grad_phi.size()), "to_flat_leading_coeff");
  double norm = X.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("to_flat_leading_coeff: X must be nonzero");
  Eigen::VectorXd Xh = X * (std::sqrt(2.0) / norm);

  const int samples = 2 * k - 4;  // fits the degree-(2k-5) polynomial exactly
  const double pairing = grad_phi.dot(Xh);
  Cotton3 rm3 = pc.riem.contract3(Xh);

  Eigen::MatrixXd vander(samples, samples);
  Eigen::MatrixXd values(samples, n);
  for (int m = 0; m < samples; ++m) {
    double t = std::cos((2.0 * m + 1.0) * std::numbers::pi / (2.0 * samples));
    double power = 1.0;
    for (int d = 0; d < samples; ++d) {
      vander(m, d) = power;
      power *= t;
    }
    PointCurvature moved{pc.Y - t * pairing - t * t, pc.ric,
                         pc.cotton.minus_scaled(t, rm3), pc.riem};
    values.row(m) = s_tensor(k, moved).transpose();
  }
  Eigen::MatrixXd coeffs = vander.colPivHouseholderQr().solve(values);

  double fact = 1.0;
  for (int i = 2; i <= k - 3; ++i) fact *= i;
  double pref = (k % 2 == 0 ? 1.0 : -1.0) / fact;
  FlatObstruction result;
  result.fitted = coeffs.row(samples - 1).transpose();
  result.predicted = pref * a_dot_db(pc.ric, rm3);
  return result;
}

}  // namespace sigmaforge::tensor
