#include "sigmaforge/functionals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigmaforge::functionals {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

wsym::SymPair pair_at(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                      double lambda) {
  tensor::PointCurvature pc = geom::point_curvature(b, phi, x, lambda);
  return wsym::SymPair(pc.Y, pc.ric.mat());
}

double measure_factor(int n, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  return std::pow(4.0 * std::numbers::pi * tau, -0.5 * n);
}

// Weighted measure density (4 pi tau)^{-n/2} e^{-phi} at every node.
std::vector<double> measure_at_nodes(const geom::Backend& b, const geom::Field& phi, double tau,
                                     const geom::QuadratureRule& rule) {
  double norm = measure_factor(b.n, tau);
  std::vector<double> w(rule.nodes.size());
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    w[i] = rule.weights[i] * norm * std::exp(-geom::field_value(phi, rule.nodes[i]));
  return w;
}

void require_order(int k, int min_k = 0) {
  if (k < min_k) throw std::invalid_argument("order k out of range");
}

}  // namespace

double lambda_value(Mode mode, double tau, double explicit_lambda) {
  switch (mode) {
    case Mode::Shrinking:
      if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
      return 0.5 / tau;
    case Mode::Steady:
      return 0.0;
    case Mode::Expanding:
      if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
      return -0.5 / tau;
    case Mode::Explicit:
      return explicit_lambda;
  }
  throw std::invalid_argument("unknown mode");
}

double pairwise_sum(std::vector<double> values) {
  if (values.empty()) return 0.0;
  size_t count = values.size();
  while (count > 1) {
    size_t half = count / 2;
    for (size_t i = 0; i < half; ++i) values[i] = values[2 * i] + values[2 * i + 1];
    if (count % 2 == 1) {
      values[half] = values[count - 1];
      ++half;
    }
    count = half;
  }
  return values[0];
}

double sigma_field(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                   int k, double lambda) {
  require_order(k);
  return wsym::weighted_sigma(k, pair_at(b, phi, x, lambda));
}

double hat_sigma_field(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                       int k, double lambda) {
  require_order(k);
  wsym::SymPair sp = pair_at(b, phi, x, lambda);
  return wsym::weighted_sigma(k, wsym::SymPair(sp.mu0 - lambda, sp.P));
}

SigmaJet sigma_jet(const geom::CurvJet& jet, int kmax) {
  require_order(kmax);
  int n = static_cast<int>(jet.ric.rows());
  SigmaJet out;
  std::vector<Eigen::MatrixXd> P(static_cast<size_t>(kmax) + 1);
  P[0] = Eigen::MatrixXd::Identity(n, n);
  for (int i = 1; i <= kmax; ++i) P[static_cast<size_t>(i)] = P[static_cast<size_t>(i - 1)] * jet.ric;
  std::vector<double> N(static_cast<size_t>(kmax) + 1, 0.0);
  std::vector<Eigen::VectorXd> dN(static_cast<size_t>(kmax) + 1, Eigen::VectorXd::Zero(n));
  for (int i = 1; i <= kmax; ++i) {
    N[static_cast<size_t>(i)] = P[static_cast<size_t>(i)].trace();
    for (int a = 0; a < n; ++a)
      dN[static_cast<size_t>(i)][a] =
          i * (P[static_cast<size_t>(i - 1)] * jet.dric[static_cast<size_t>(a)]).trace();
  }
  out.sigma.assign(static_cast<size_t>(kmax) + 1, 0.0);
  out.dsigma.assign(static_cast<size_t>(kmax) + 1, Eigen::VectorXd::Zero(n));
  out.sigma[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    double acc = jet.Y * out.sigma[static_cast<size_t>(k - 1)];
    Eigen::VectorXd dacc = jet.dY * out.sigma[static_cast<size_t>(k - 1)] +
                           jet.Y * out.dsigma[static_cast<size_t>(k - 1)];
    double sign = 1.0;
    for (int i = 0; i < k; ++i) {
      acc += sign * out.sigma[static_cast<size_t>(k - 1 - i)] * N[static_cast<size_t>(i + 1)];
      dacc += sign * (out.dsigma[static_cast<size_t>(k - 1 - i)] * N[static_cast<size_t>(i + 1)] +
                      out.sigma[static_cast<size_t>(k - 1 - i)] * dN[static_cast<size_t>(i + 1)]);
      sign = -sign;
    }
    out.sigma[static_cast<size_t>(k)] = acc / k;
    out.dsigma[static_cast<size_t>(k)] = dacc / k;
  }
  out.T.assign(static_cast<size_t>(kmax) + 1, Eigen::MatrixXd::Identity(n, n));
  out.dT.assign(static_cast<size_t>(kmax) + 1,
                std::vector<Eigen::MatrixXd>(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n)));
  for (int j = 1; j <= kmax; ++j) {
    out.T[static_cast<size_t>(j)] = out.sigma[static_cast<size_t>(j)] * Eigen::MatrixXd::Identity(n, n) -
                                    out.T[static_cast<size_t>(j - 1)] * jet.ric;
    for (int a = 0; a < n; ++a) {
      out.dT[static_cast<size_t>(j)][static_cast<size_t>(a)] =
          out.dsigma[static_cast<size_t>(j)][a] * Eigen::MatrixXd::Identity(n, n) -
          out.dT[static_cast<size_t>(j - 1)][static_cast<size_t>(a)] * jet.ric -
          out.T[static_cast<size_t>(j - 1)] * jet.dric[static_cast<size_t>(a)];
    }
  }
  return out;
}

double d_operator(const geom::Backend& b, const geom::Field& phi, const geom::Field& psi,
                  const Eigen::VectorXd& x, int k, double lambda) {
  require_order(k, 1);
  wsym::SymPair sp = pair_at(b, phi, x, lambda);
  double sigma_km1 = wsym::weighted_sigma(k - 1, sp);
  Eigen::MatrixXd T = wsym::newton_transform(k - 1, sp);
  Eigen::MatrixXd hess_psi = geom::field_frame_hess(b, psi, x);
  Eigen::VectorXd grad_psi = geom::field_frame_grad(b, psi, x);
  Eigen::VectorXd grad_phi = geom::field_frame_grad(b, phi, x);
  return T.cwiseProduct(hess_psi).sum() - sigma_km1 * grad_phi.dot(grad_psi) +
         lambda * sigma_km1 * geom::field_value(psi, x);
}

double d_operator_divergence(const geom::Backend& b, const geom::Field& phi,
                             const geom::Field& psi, const Eigen::VectorXd& x, int k,
                             double lambda) {
  require_order(k, 1);
  geom::CurvJet jet = geom::curvature_jet(b, phi, x, lambda);
  SigmaJet sj = sigma_jet(jet, k - 1);
  Eigen::MatrixXd hess_psi = geom::field_frame_hess(b, psi, x);
  Eigen::VectorXd grad_psi = geom::field_frame_grad(b, psi, x);
  int n = b.n;
  const Eigen::MatrixXd& T = sj.T[static_cast<size_t>(k - 1)];
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    double va = T.row(a).dot(grad_psi);
    double dva = 0.0;
    for (int c = 0; c < n; ++c)
      dva += sj.dT[static_cast<size_t>(k - 1)][static_cast<size_t>(a)](a, c) * grad_psi[c] +
             T(a, c) * hess_psi(a, c);
    acc += dva - jet.dphi[a] * va;
  }
  return acc + lambda * sj.sigma[static_cast<size_t>(k - 1)] * geom::field_value(psi, x);
}

double dsigma_residual(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                       int k, double lambda) {
  require_order(k, 1);
  geom::CurvJet jet = geom::curvature_jet(b, phi, x, lambda);
  SigmaJet sj = sigma_jet(jet, k);
  int n = b.n;
  std::vector<Eigen::MatrixXd> P(static_cast<size_t>(k));
  P[0] = Eigen::MatrixXd::Identity(n, n);
  for (int j = 1; j < k; ++j) P[static_cast<size_t>(j)] = P[static_cast<size_t>(j - 1)] * jet.ric;
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    double rhs = sj.sigma[static_cast<size_t>(k - 1)] * jet.dY[a];
    double sign = 1.0;
    for (int j = 0; j < k; ++j) {
      rhs += sign * sj.sigma[static_cast<size_t>(k - 1 - j)] *
             (P[static_cast<size_t>(j)] * jet.dric[static_cast<size_t>(a)]).trace();
      sign = -sign;
    }
    worst = std::max(worst, std::fabs(sj.dsigma[static_cast<size_t>(k)][a] - rhs));
  }
  return worst;
}

DivergenceResiduals divergence_residuals(const geom::Backend& b, const geom::Field& phi,
                                         const Eigen::VectorXd& x, int k, double lambda) {
  require_order(k);
  geom::CurvJet jet = geom::curvature_jet(b, phi, x, lambda);
  SigmaJet sj = sigma_jet(jet, k);
  int n = b.n;
  const Eigen::MatrixXd& T = sj.T[static_cast<size_t>(k)];
  DivergenceResiduals out{0.0, 0.0};
  for (int bb = 0; bb < n; ++bb) {
    double div_t = 0.0;
    double div_e = 0.0;
    for (int a = 0; a < n; ++a) {
      double dta = sj.dT[static_cast<size_t>(k)][static_cast<size_t>(a)](a, bb);
      double ta = T(a, bb);
      div_t += dta - jet.dphi[a] * ta;
      double ea = ta - (a == bb ? sj.sigma[static_cast<size_t>(k)] : 0.0);
      double dea = dta - (a == bb ? sj.dsigma[static_cast<size_t>(k)][a] : 0.0);
      div_e += dea - jet.dphi[a] * ea;
    }
    out.newton = std::max(out.newton,
                          std::fabs(div_t + sj.sigma[static_cast<size_t>(k)] * jet.dphi[bb]));
    out.einstein =
        std::max(out.einstein, std::fabs(div_e + sj.dsigma[static_cast<size_t>(k)][bb]));
  }
  return out;
}

double obata_residual(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                      int k, double lambda) {
  require_order(k);
  tensor::PointCurvature pc = geom::point_curvature(b, phi, x, lambda);
  wsym::SymPair hat(pc.Y - lambda, pc.ric.mat());
  int n = b.n;
  Eigen::MatrixXd E = wsym::newton_transform(k, hat) -
                      wsym::weighted_sigma(k, hat) * Eigen::MatrixXd::Identity(n, n);
  double lhs = (E * pc.ric.mat()).trace();
  double rhs = (k + 1.0) * wsym::weighted_sigma(k + 1, hat) -
               wsym::weighted_sigma(1, hat) * wsym::weighted_sigma(k, hat);
  return std::fabs(lhs - rhs);
}

double obata_cone_gap(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                      int k, double lambda) {
  require_order(k, 1);
  tensor::PointCurvature pc = geom::point_curvature(b, phi, x, lambda);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pc.ric.mat());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
  wsym::WeightedSpectrum ws;
  ws.mu0 = pc.Y - lambda;
  ws.mu.assign(es.eigenvalues().data(), es.eigenvalues().data() + b.n);
  return wsym::newton_cor_gap(k, ws);
}

double weighted_volume(const geom::Backend& b, const geom::Field& phi, double tau,
                       const geom::QuadratureRule& rule) {
  return pairwise_sum(measure_at_nodes(b, phi, tau, rule));
}

geom::Field normalize_c1(const geom::Backend& b, geom::Field phi, double tau,
                         const geom::QuadratureRule& rule) {
  double vol = weighted_volume(b, phi, tau, rule);
  if (!(vol > 0.0)) throw std::domain_error("weighted volume must be positive");
  return geom::field_add_constant(std::move(phi), std::log(vol));
}

double w_eval(const geom::Backend& b, const geom::Field& phi, double tau, double lambda, int k,
              const geom::QuadratureRule& rule) {
  require_order(k);
  double tk = std::pow(tau, k);
  std::vector<double> terms = measure_at_nodes(b, phi, tau, rule);
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    terms[i] *= tk * sigma_field(b, phi, rule.nodes[i], k, lambda);
  return pairwise_sum(terms);
}

std::vector<double> hat_w_coeffs(int k) {
  require_order(k);
  std::vector<double> c(static_cast<size_t>(k) + 1, 0.0);
  c[static_cast<size_t>(k)] = 1.0;
  for (int m = k - 1; m >= 0; --m)
    c[static_cast<size_t>(m)] =
        std::pow(-0.5, k - m) / factorial(k - m) + 0.5 * c[static_cast<size_t>(m + 1)];
  return c;
}

double hat_w_eval(const geom::Backend& b, const geom::Field& phi, double tau, int k,
                  const geom::QuadratureRule& rule) {
  require_order(k);
  double lambda = 0.5 / tau;
  std::vector<double> c = hat_w_coeffs(k);
  std::vector<double> terms = measure_at_nodes(b, phi, tau, rule);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    wsym::SymPair sp = pair_at(b, phi, rule.nodes[i], lambda);
    std::vector<double> sig = wsym::sigma_all(k, sp);
    double acc = 0.0;
    double tm = 1.0;
    for (int m = 0; m <= k; ++m) {
      acc += c[static_cast<size_t>(m)] * tm * sig[static_cast<size_t>(m)];
      tm *= tau;
    }
    terms[i] *= acc;
  }
  return pairwise_sum(terms);
}

namespace {

template <typename F>
double richardson_first(F&& f, double h) {
  auto d = [&](double step) { return (f(step) - f(-step)) / (2.0 * step); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

template <typename F>
double richardson_second(F&& f, double f0, double h) {
  auto s = [&](double step) { return (f(step) - 2.0 * f0 + f(-step)) / (step * step); };
  return (4.0 * s(0.5 * h) - s(h)) / 3.0;
}

void require_variation_order(const geom::Backend& b, int k) {
  if (!b.flat() && k >= 3)
    throw std::domain_error(
        "curved backends support closed-form variations only up to order two");
}

}  // namespace

FirstVariation first_variation(const geom::Backend& b, const geom::Field& phi,
                               const geom::Field& psi, double tau, double lambda, int k,
                               const geom::QuadratureRule& rule) {
  require_order(k);
  require_variation_order(b, k);
  auto f = [&](double t) {
    return w_eval(b, geom::field_axpy(phi, t, psi), tau, lambda, k, rule);
  };
  FirstVariation out;
  out.finite_difference = richardson_first(f, 1e-3);
  double tk = std::pow(tau, k);
  std::vector<double> terms = measure_at_nodes(b, phi, tau, rule);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    wsym::SymPair sp = pair_at(b, phi, rule.nodes[i], lambda);
    double density = wsym::weighted_sigma(k, sp);
    if (k >= 1) density -= lambda * wsym::weighted_sigma(k - 1, sp);
    terms[i] *= -tk * density * geom::field_value(psi, rule.nodes[i]);
  }
  out.closed_form = pairwise_sum(terms);
  return out;
}

FirstVariation hat_first_variation(const geom::Backend& b, const geom::Field& phi,
                                   const geom::Field& psi, double tau, int k,
                                   const geom::QuadratureRule& rule) {
  require_order(k);
  require_variation_order(b, k);
  double lambda = 0.5 / tau;
  auto f = [&](double t) { return hat_w_eval(b, geom::field_axpy(phi, t, psi), tau, k, rule); };
  FirstVariation out;
  out.finite_difference = richardson_first(f, 1e-3);
  double tk = std::pow(tau, k);
  std::vector<double> terms = measure_at_nodes(b, phi, tau, rule);
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    terms[i] *= -tk * hat_sigma_field(b, phi, rule.nodes[i], k, lambda) *
                geom::field_value(psi, rule.nodes[i]);
  out.closed_form = pairwise_sum(terms);
  return out;
}

PairedIntegrals selfadjoint_pair(const geom::Backend& b, const geom::Field& phi,
                                 const geom::Field& psi1, const geom::Field& psi2, double tau,
                                 double lambda, int k, const geom::QuadratureRule& rule) {
  require_order(k, 1);
  std::vector<double> w = measure_at_nodes(b, phi, tau, rule);
  std::vector<double> lhs(w.size()), rhs(w.size());
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const Eigen::VectorXd& x = rule.nodes[i];
    lhs[i] = w[i] * d_operator(b, phi, psi1, x, k, lambda) * geom::field_value(psi2, x);
    rhs[i] = w[i] * d_operator(b, phi, psi2, x, k, lambda) * geom::field_value(psi1, x);
  }
  return {pairwise_sum(std::move(lhs)), pairwise_sum(std::move(rhs))};
}

namespace {

void require_critical(const geom::Backend& b, const geom::Field& phi, double tau,
                      const geom::QuadratureRule& rule) {
  double lambda = 0.5 / tau;
  std::vector<double> w = measure_at_nodes(b, phi, tau, rule);
  double vol = pairwise_sum(w);
  std::vector<double> s1(w.size()), sw(w.size()), dev(w.size());
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    s1[i] = sigma_field(b, phi, rule.nodes[i], 1, lambda);
    sw[i] = w[i] * s1[i];
  }
  double mean = pairwise_sum(std::move(sw)) / vol;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    dev[i] = w[i] * (s1[i] - mean) * (s1[i] - mean);
  double var = pairwise_sum(std::move(dev)) / vol;
  if (std::sqrt(std::max(0.0, var)) > 1e-6 * (1.0 + std::fabs(mean)))
    throw std::domain_error("second variations require a critical potential");
}

}  // namespace

double second_variation(const geom::Backend& b, const geom::Field& phi, const geom::Field& psi,
                        double tau, int k, const geom::QuadratureRule& rule,
                        FunctionalKind kind) {
  require_order(k);
  require_critical(b, phi, tau, rule);
  double lambda = 0.5 / tau;
  auto f = [&](double t) {
    geom::Field moved = normalize_c1(b, geom::field_axpy(phi, t, psi), tau, rule);
    return kind == FunctionalKind::W ? w_eval(b, moved, tau, lambda, k, rule)
                                     : hat_w_eval(b, moved, tau, k, rule);
  };
  double f0 = f(0.0);
  return richardson_second(f, f0, 1e-3);
}

double gaussian_second_variation_reference(const geom::Backend& b, const geom::Field& phi,
                                           const geom::Field& psi, double tau, int k,
                                           const geom::QuadratureRule& rule) {
  require_order(k, 1);
  std::vector<double> w = measure_at_nodes(b, phi, tau, rule);
  double vol = pairwise_sum(w);
  std::vector<double> pw(w.size());
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    pw[i] = w[i] * geom::field_value(psi, rule.nodes[i]);
  double mean = pairwise_sum(std::move(pw)) / vol;
  std::vector<double> q(w.size());
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const Eigen::VectorXd& x = rule.nodes[i];
    double centered = geom::field_value(psi, x) - mean;
    double grad_sq = geom::field_frame_grad(b, psi, x).squaredNorm();
    q[i] = w[i] * (grad_sq - centered * centered / (2.0 * tau));
  }
  double quad = pairwise_sum(std::move(q)) / vol;
  return std::pow(-0.5, k - 1) * tau / factorial(k - 1) * quad;
}

SolitonReport soliton_report(const geom::Backend& b, const geom::Field& phi, double tau,
                             const geom::QuadratureRule& rule) {
  double lambda = 0.5 / tau;
  int n = b.n;
  size_t m = rule.nodes.size();
  std::vector<double> w = measure_at_nodes(b, phi, tau, rule);
  double vol = pairwise_sum(w);

  SolitonReport rep{};
  rep.weighted_volume = vol;
  rep.phi0_l2_bound = 0.5 * n;

  std::vector<double> s1w(m), u1(m), u2(m);
  std::vector<double> sigma1(m);
  for (size_t i = 0; i < m; ++i) {
    const Eigen::VectorXd& x = rule.nodes[i];
    tensor::PointCurvature pc = geom::point_curvature(b, phi, x, lambda);
    rep.sup_ric = std::max(rep.sup_ric, pc.ric.mat().cwiseAbs().maxCoeff());
    wsym::SymPair sp(pc.Y, pc.ric.mat());
    std::vector<double> sig = wsym::sigma_all(5, sp);
    sigma1[i] = sig[1];
    double power = 1.0;
    for (int k = 1; k <= 5; ++k) {
      power *= sig[1] / k;
      rep.sup_sigma_consistency =
          std::max(rep.sup_sigma_consistency, std::fabs(sig[static_cast<size_t>(k)] - power));
    }
    s1w[i] = w[i] * sig[1];

    tensor::PointCurvature pc0 = geom::point_curvature(b, phi, x, 0.0);
    wsym::SymPair sp0(pc0.Y, pc0.ric.mat());
    u1[i] = w[i] * wsym::weighted_sigma(1, sp0);
    u2[i] = w[i] * wsym::weighted_sigma(2, sp0);
  }
  rep.sigma1_mean = pairwise_sum(std::move(s1w)) / vol;
  std::vector<double> s1dev(m);
  for (size_t i = 0; i < m; ++i)
    s1dev[i] = w[i] * (sigma1[i] - rep.sigma1_mean) * (sigma1[i] - rep.sigma1_mean);
  rep.sigma1_stddev = std::sqrt(std::max(0.0, pairwise_sum(std::move(s1dev)) / vol));

  double shift = 0.5 * n + 2.0 * tau * rep.sigma1_mean;
  std::vector<double> p2(m);
  for (size_t i = 0; i < m; ++i) {
    const Eigen::VectorXd& x = rule.nodes[i];
    double phi0 = geom::field_value(phi, x) - shift;
    p2[i] = w[i] * phi0 * phi0;
    double lap = geom::field_frame_hess(b, phi, x).trace();
    double drift = geom::field_frame_grad(b, phi, x).squaredNorm();
    rep.eigenfunction_residual =
        std::max(rep.eigenfunction_residual, std::fabs(lap - drift + phi0 / tau));
  }
  rep.phi0_l2 = pairwise_sum(std::move(p2)) / vol;
  rep.int_sigma1_unmodified = pairwise_sum(std::move(u1)) / vol;
  rep.int_sigma1_expected = 0.25 * n / tau;
  rep.int_sigma2_unmodified = pairwise_sum(std::move(u2)) / vol;
  rep.int_sigma2_expected =
      n * (n - 4.0) / (32.0 * tau * tau) + rep.phi0_l2 / (8.0 * tau * tau);
  return rep;
}

CriticalityReport critical_point_residual(const geom::Backend& b, const geom::Field& phi,
                                          double tau, int k, const geom::QuadratureRule& rule) {
  if (k != 1 && k != 2) throw std::invalid_argument("criticality checks cover k = 1 and k = 2");
  if (k == 2 && !b.flat())
    throw std::domain_error("second-order criticality checks require a flat backend");
  double lambda = 0.5 / tau;
  int n = b.n;
  std::vector<double> w = measure_at_nodes(b, phi, tau, rule);
  double vol = pairwise_sum(w);
  size_t m = rule.nodes.size();
  std::vector<double> qv(m), qw(m), tr(m);
  for (size_t i = 0; i < m; ++i) {
    wsym::SymPair sp = pair_at(b, phi, rule.nodes[i], lambda);
    std::vector<double> sig = wsym::sigma_all(k, sp);
    double q = sig[static_cast<size_t>(k)] - lambda * sig[static_cast<size_t>(k - 1)];
    qv[i] = q;
    qw[i] = w[i] * q;
    Eigen::MatrixXd ek = wsym::newton_transform(k, sp) -
                         sig[static_cast<size_t>(k)] * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd ekm1 = wsym::newton_transform(k - 1, sp) -
                           sig[static_cast<size_t>(k - 1)] * Eigen::MatrixXd::Identity(n, n);
    tr[i] = w[i] * (ek - lambda * ekm1).trace();
  }
  double mean = pairwise_sum(std::move(qw)) / vol;
  std::vector<double> dev(m);
  for (size_t i = 0; i < m; ++i) dev[i] = w[i] * (qv[i] - mean) * (qv[i] - mean);
  CriticalityReport rep{};
  rep.stddev = std::sqrt(std::max(0.0, pairwise_sum(std::move(dev)) / vol));
  rep.trace_integral = pairwise_sum(std::move(tr)) / vol;
  return rep;
}

double spectral_gap(double tau, int basis, int order) {
  if (basis < 1) throw std::invalid_argument("basis size must be positive");
  if (order < 2 * basis + 2)
    throw std::invalid_argument("quadrature order must be at least 2 * basis + 2");
  geom::Backend b = geom::Backend::euclidean(1);
  fields::PolyField phi =
      fields::PolyField::gaussian_potential(1, tau, Eigen::VectorXd::Zero(1));
  geom::QuadratureRule rule = geom::quadrature(b, geom::Field(phi), order);
  std::vector<double> w = measure_at_nodes(b, geom::Field(phi), tau, rule);
  double s = std::sqrt(2.0 * tau);
  size_t m = rule.nodes.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(basis, basis);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(basis, basis);
  std::vector<double> he(static_cast<size_t>(basis) + 1);
  for (size_t i = 0; i < m; ++i) {
    double y = rule.nodes[i][0] / s;
    he[0] = 1.0;
    if (basis >= 1) he[1] = y;
    for (int j = 1; j < basis; ++j)
      he[static_cast<size_t>(j + 1)] = y * he[static_cast<size_t>(j)] - j * he[static_cast<size_t>(j - 1)];
    for (int j = 1; j <= basis; ++j) {
      double uj = he[static_cast<size_t>(j)];
      double duj = j * he[static_cast<size_t>(j - 1)] / s;
      for (int l = j; l <= basis; ++l) {
        double ul = he[static_cast<size_t>(l)];
        double dul = l * he[static_cast<size_t>(l - 1)] / s;
        A(j - 1, l - 1) += w[i] * duj * dul;
        B(j - 1, l - 1) += w[i] * uj * ul;
      }
    }
  }
  for (int j = 0; j < basis; ++j)
    for (int l = 0; l < j; ++l) {
      A(j, l) = A(l, j);
      B(j, l) = B(l, j);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  if (es.info() != Eigen::Success) throw std::runtime_error("galerkin eigensolve failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace sigmaforge::functionals
