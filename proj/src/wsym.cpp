#include "sigmaforge/wsym.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigmaforge::wsym {

namespace {

void require_finite(const WeightedSpectrum& ws) {
  if (!std::isfinite(ws.mu0)) throw std::invalid_argument("wsym: mu0 is not finite");
  for (double m : ws.mu) {
    if (!std::isfinite(m)) throw std::invalid_argument("wsym: spectrum entry is not finite");
  }
}

void require_order(int k, const char* what) {
  if (k < 0) throw std::invalid_argument(std::string(what) + ": negative order");
}

// Power sums N_i = sum_j mu_j^i for i = 1..kmax (index 0 unused).
std::vector<double> power_sums(const std::vector<double>& mu, int kmax) {
  std::vector<double> N(static_cast<size_t>(kmax) + 1, 0.0);
  for (double m : mu) {
    double p = 1.0;
    for (int i = 1; i <= kmax; ++i) {
      p *= m;
      N[static_cast<size_t>(i)] += p;
    }
  }
  return N;
}

std::vector<double> sigma_from_power_sums(int kmax, double mu0, const std::vector<double>& N) {
  std::vector<double> s(static_cast<size_t>(kmax) + 1, 0.0);
  s[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    double acc = mu0 * s[static_cast<size_t>(k - 1)];
    double sign = 1.0;
    for (int i = 0; i < k; ++i) {
      acc += sign * s[static_cast<size_t>(k - 1 - i)] * N[static_cast<size_t>(i + 1)];
      sign = -sign;
    }
    s[static_cast<size_t>(k)] = acc / k;
  }
  return s;
}

Eigen::VectorXd eigenvalues_of(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(P, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("wsym: eigenvalue solve failed");
  return solver.eigenvalues();
}

WeightedSpectrum spectrum_of(const SymPair& sp) {
  Eigen::VectorXd ev = eigenvalues_of(sp.P);
  return WeightedSpectrum{sp.mu0, std::vector<double>(ev.data(), ev.data() + ev.size())};
}

}  // namespace

SymPair::SymPair(double weight, const Eigen::MatrixXd& raw) : mu0(weight) {
  if (raw.rows() != raw.cols()) throw std::invalid_argument("SymPair: matrix must be square");
  if (!raw.allFinite() || !std::isfinite(weight)) {
    throw std::invalid_argument("SymPair: entries must be finite");
  }
  P = 0.5 * (raw + raw.transpose());
}

double magnitude_scale(const WeightedSpectrum& ws, int degree) {
  double base = std::fabs(ws.mu0) + 1.0;
  for (double m : ws.mu) base += std::fabs(m);
  return std::pow(base, degree);
}

double magnitude_scale(const SymPair& sp, int degree) {
  return magnitude_scale(spectrum_of(sp), degree);
}

std::vector<double> sigma_all(int kmax, const WeightedSpectrum& ws) {
  require_order(kmax, "sigma_all");
  require_finite(ws);
  return sigma_from_power_sums(kmax, ws.mu0, power_sums(ws.mu, kmax));
}

double weighted_sigma(int k, const WeightedSpectrum& ws) {
  return sigma_all(k, ws).back();
}

double weighted_sigma_shifted(int k, const WeightedSpectrum& ws, double s) {
  require_order(k, "weighted_sigma_shifted");
  if (!std::isfinite(s)) throw std::invalid_argument("weighted_sigma_shifted: shift is not finite");
  std::vector<double> sig = sigma_all(k, ws);
  double acc = sig[static_cast<size_t>(k)];
  double pow_term = 1.0;
  for (int j = 1; j <= k; ++j) {
    pow_term *= s / j;
    acc += pow_term * sig[static_cast<size_t>(k - j)];
  }
  return acc;
}

std::vector<double> generating_coeffs(const WeightedSpectrum& ws, int K) {
  require_order(K, "generating_coeffs");
  require_finite(ws);
  std::vector<double> poly(static_cast<size_t>(K) + 1, 0.0);
  poly[0] = 1.0;
  for (double m : ws.mu) {
    for (int d = K; d >= 1; --d) {
      poly[static_cast<size_t>(d)] += m * poly[static_cast<size_t>(d - 1)];
    }
  }
  std::vector<double> expo(static_cast<size_t>(K) + 1, 0.0);
  expo[0] = 1.0;
  for (int i = 1; i <= K; ++i) {
    expo[static_cast<size_t>(i)] = expo[static_cast<size_t>(i - 1)] * ws.mu0 / i;
  }
  std::vector<double> out(static_cast<size_t>(K) + 1, 0.0);
  for (int a = 0; a <= K; ++a) {
    for (int b = 0; a + b <= K; ++b) {
      out[static_cast<size_t>(a + b)] += expo[static_cast<size_t>(a)] * poly[static_cast<size_t>(b)];
    }
  }
  return out;
}

double newton_gap(int k, const WeightedSpectrum& ws) {
  if (k < 1) throw std::invalid_argument("newton_gap: k must be >= 1");
  std::vector<double> s = sigma_all(k + 1, ws);
  double sk = s[static_cast<size_t>(k)];
  return (static_cast<double>(k) / (k + 1)) * sk * sk -
         s[static_cast<size_t>(k - 1)] * s[static_cast<size_t>(k + 1)];
}

bool newton_equality_family(int k, const WeightedSpectrum& ws, double tol) {
  if (k < 1) throw std::invalid_argument("newton_equality_family: k must be >= 1");
  bool mu_zero = true;
  int nonzero = 0;
  for (double m : ws.mu) {
    if (std::fabs(m) > tol) {
      mu_zero = false;
      ++nonzero;
    }
  }
  if (mu_zero) return true;
  return std::fabs(ws.mu0) <= tol && nonzero <= k - 1;
}

ConeReport cone_report(const WeightedSpectrum& ws, int kmax) {
  if (kmax < 1) throw std::invalid_argument("cone_report: kmax must be >= 1");
  std::vector<double> s = sigma_all(kmax, ws);
  ConeReport report;
  report.margins.resize(static_cast<size_t>(kmax));
  bool alive = true;
  double sign = -1.0;
  for (int j = 1; j <= kmax; ++j) {
    double margin = sign * s[static_cast<size_t>(j)];
    report.margins[static_cast<size_t>(j - 1)] = margin;
    if (alive && margin > 0.0) {
      report.max_k = j;
    } else {
      alive = false;
    }
    sign = -sign;
  }
  return report;
}

double newton_cor_gap(int k, const WeightedSpectrum& ws) {
  if (k < 1) throw std::invalid_argument("newton_cor_gap: k must be >= 1");
  if (cone_report(ws, k).max_k < k) {
    throw std::domain_error("newton_cor_gap: spectrum is outside Gamma_k^{inf,-}");
  }
  std::vector<double> s = sigma_all(k + 1, ws);
  double bracket = s[1] * s[static_cast<size_t>(k)] - (k + 1) * s[static_cast<size_t>(k + 1)];
  return (k % 2 == 0 ? -1.0 : 1.0) * bracket;
}

WeightedSpectrum remove_coordinate(const WeightedSpectrum& ws, int i) {
  if (i < 0 || i >= static_cast<int>(ws.mu.size())) {
    throw std::invalid_argument("remove_coordinate: index out of range");
  }
  WeightedSpectrum out{ws.mu0, ws.mu};
  out.mu.erase(out.mu.begin() + i);
  return out;
}

std::vector<double> sigma_all(int kmax, const SymPair& sp) {
  return sigma_all(kmax, spectrum_of(sp));
}

std::vector<double> sigma_all_via_traces(int kmax, const SymPair& sp) {
  require_order(kmax, "sigma_all_via_traces");
  std::vector<double> N(static_cast<size_t>(kmax) + 1, 0.0);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(sp.P.rows(), sp.P.cols());
  for (int i = 1; i <= kmax; ++i) {
    power = power * sp.P;
    N[static_cast<size_t>(i)] = power.trace();
  }
  return sigma_from_power_sums(kmax, sp.mu0, N);
}

double weighted_sigma(int k, const SymPair& sp) {
  return sigma_all(k, sp).back();
}

Eigen::MatrixXd newton_transform(int k, const SymPair& sp) {
  require_order(k, "newton_transform");
  std::vector<double> s = sigma_all(k, sp);
  const auto n = sp.P.rows();
  Eigen::MatrixXd T = s[static_cast<size_t>(k)] * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  double sign = 1.0;
  for (int j = 1; j <= k; ++j) {
    power = power * sp.P;
    sign = -sign;
    T += sign * s[static_cast<size_t>(k - j)] * power;
  }
  return T;
}

DefinitenessReport definiteness(int k, const SymPair& sp) {
  Eigen::MatrixXd T = newton_transform(k, sp);
  DefinitenessReport report;
  report.eigenvalues = eigenvalues_of(0.5 * (T + T.transpose()));
  double parity = (k % 2 == 0) ? 1.0 : -1.0;
  report.min_signed = (parity * report.eigenvalues.array()).minCoeff();
  report.signed_positive_definite = report.min_signed > 0.0;
  return report;
}

}  // namespace sigmaforge::wsym
