#include "sigmaforge/suites.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sigmaforge/fields.hpp"
#include "sigmaforge/functionals.hpp"
#include "sigmaforge/geom.hpp"
#include "sigmaforge/tensor_point.hpp"
#include "sigmaforge/wsym.hpp"

namespace sigmaforge::suites {

namespace {

using report::Record;

Record positive(std::string suite, std::string check, std::string anchor, double value,
                double margin) {
  Record r;
  r.suite = std::move(suite);
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.value = value;
  r.reference = 0.0;
  r.residual = std::max(0.0, margin - value);
  r.tol = margin;
  r.pass = std::isfinite(value) && value >= margin;
  return r;
}

void validate(const Config& cfg) {
  if (cfg.backend != "euclidean" && cfg.backend != "torus" && cfg.backend != "sphere")
    throw std::invalid_argument("backend must be euclidean, torus, or sphere");
  if (cfg.mode != "shrinking" && cfg.mode != "steady" && cfg.mode != "expanding")
    throw std::invalid_argument("mode must be shrinking, steady, or expanding");
  if (cfg.model != "gaussian" && cfg.model != "sphere")
    throw std::invalid_argument("model must be gaussian or sphere");
  if (cfg.n < 1 || cfg.n > 8) throw std::invalid_argument("n must lie in [1, 8]");
  if (cfg.backend == "sphere" && cfg.n < 2)
    throw std::invalid_argument("sphere backend needs n >= 2");
  if (cfg.k < 0 || cfg.k > 8) throw std::invalid_argument("k must lie in [0, 8]");
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (cfg.quad_order < 4 || cfg.quad_order > 64)
    throw std::invalid_argument("quad-order must lie in [4, 64]");
  if (cfg.grid < 8 || cfg.grid > 256) throw std::invalid_argument("grid must lie in [8, 256]");
  if (cfg.samples < 1 || cfg.samples > 2000000)
    throw std::invalid_argument("samples must lie in [1, 2000000]");
  if (!(cfg.tol_scale > 0.0)) throw std::invalid_argument("tol-scale must be positive");
}

wsym::WeightedSpectrum random_spectrum(std::mt19937_64& rng, int max_n) {
  std::uniform_int_distribution<int> ni(0, max_n);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int n = ni(rng);
  wsym::WeightedSpectrum ws;
  ws.mu0 = u(rng);
  ws.mu.resize(static_cast<size_t>(n));
  for (double& m : ws.mu) m = u(rng);
  return ws;
}

wsym::SymPair random_pair(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(rng);
  return wsym::SymPair(u(rng), 0.5 * (A + A.transpose()));
}

fields::PolyField random_poly(std::mt19937_64& rng, int n, int degree, int terms, double amp) {
  std::uniform_real_distribution<double> coeff(-amp, amp);
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

fields::TrigField random_trig(std::mt19937_64& rng, int n, int max_mode, int modes, double amp) {
  std::uniform_real_distribution<double> coeff(-amp, amp);
  std::uniform_int_distribution<int> ki(-max_mode, max_mode);
  fields::TrigField f(n);
  for (int t = 0; t < modes; ++t) {
    Eigen::VectorXi k(n);
    for (int i = 0; i < n; ++i) k[i] = ki(rng);
    f.add_mode(k, coeff(rng), coeff(rng));
  }
  return f;
}

// Quadratic potential with a seeded SPD Hessian, kept Gauss-exact under the
// adapted quadrature so path derivatives of the functionals carry no
// integration error.
fields::PolyField random_quadratic(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(rng);
  Eigen::MatrixXd H = A * A.transpose() + Eigen::MatrixXd::Identity(n, n);
  fields::PolyField f(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> sq(static_cast<size_t>(n), 0);
    sq[static_cast<size_t>(i)] = 2;
    f.add_term(sq, 0.5 * H(i, i));
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> cross(static_cast<size_t>(n), 0);
      cross[static_cast<size_t>(i)] = 1;
      cross[static_cast<size_t>(j)] = 1;
      f.add_term(cross, H(i, j));
    }
    std::vector<int> lin(static_cast<size_t>(n), 0);
    lin[static_cast<size_t>(i)] = 1;
    f.add_term(lin, 0.3 * u(rng));
  }
  return f;
}

// Restriction of a harmonic ambient polynomial (linear plus trace-free
// quadratic) to the sphere.
fields::SphereField random_harmonic(std::mt19937_64& rng, int ambient) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  fields::PolyField amb(ambient);
  for (int i = 0; i < ambient; ++i) {
    std::vector<int> lin(static_cast<size_t>(ambient), 0);
    lin[static_cast<size_t>(i)] = 1;
    amb.add_term(lin, u(rng));
  }
  std::vector<double> diag(static_cast<size_t>(ambient));
  double trace = 0.0;
  for (double& d : diag) {
    d = u(rng);
    trace += d;
  }
  for (int i = 0; i < ambient; ++i) {
    std::vector<int> sq(static_cast<size_t>(ambient), 0);
    sq[static_cast<size_t>(i)] = 2;
    amb.add_term(sq, diag[static_cast<size_t>(i)] - trace / ambient);
    for (int j = i + 1; j < ambient; ++j) {
      std::vector<int> cross(static_cast<size_t>(ambient), 0);
      cross[static_cast<size_t>(i)] = 1;
      cross[static_cast<size_t>(j)] = 1;
      amb.add_term(cross, u(rng));
    }
  }
  return fields::SphereField(amb);
}

Eigen::VectorXd random_point(std::mt19937_64& rng, int n, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

Eigen::VectorXd random_sphere_point(std::mt19937_64& rng, int ambient) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd p(ambient);
  do {
    for (int i = 0; i < ambient; ++i) p[i] = g(rng);
  } while (p.norm() < 1e-3);
  p.normalize();
  return p;
}

geom::Backend make_backend(const Config& cfg) {
  if (cfg.backend == "euclidean") return geom::Backend::euclidean(cfg.n);
  if (cfg.backend == "torus") return geom::Backend::torus(cfg.n);
  return geom::Backend::sphere(cfg.n);
}

geom::Field make_potential(const Config& cfg, std::mt19937_64& rng) {
  if (cfg.backend == "euclidean") return geom::Field(random_quadratic(rng, cfg.n));
  if (cfg.backend == "torus") return geom::Field(random_trig(rng, cfg.n, 2, 5, 0.25));
  return geom::Field(fields::SphereField(
      fields::PolyField::constant(cfg.n + 1, sphere_soliton_constant(cfg.n, cfg.tau))));
}

geom::Field make_variation(const Config& cfg, std::mt19937_64& rng) {
  if (cfg.backend == "euclidean") return geom::Field(random_poly(rng, cfg.n, 3, 6, 0.5));
  if (cfg.backend == "torus") return geom::Field(random_trig(rng, cfg.n, 2, 4, 0.25));
  return geom::Field(random_harmonic(rng, cfg.n + 1));
}

Eigen::VectorXd sample_point(const Config& cfg, std::mt19937_64& rng) {
  if (cfg.backend == "sphere") return random_sphere_point(rng, cfg.n + 1);
  return random_point(rng, cfg.n, cfg.backend == "torus" ? std::numbers::pi : 1.5);
}

double jet_scale(const geom::CurvJet& jet, int degree) {
  double m = 1.0 + std::fabs(jet.Y) + jet.ric.cwiseAbs().maxCoeff() +
             jet.dY.cwiseAbs().maxCoeff() + jet.dphi.cwiseAbs().maxCoeff();
  for (const auto& d : jet.dric) m += d.cwiseAbs().maxCoeff();
  return std::pow(m, degree);
}

int quad_order_for(const Config& cfg) {
  return cfg.backend == "torus" ? std::max(cfg.grid, 16) : cfg.quad_order;
}

}  // namespace

double resolve_lambda(const Config& cfg) {
  if (cfg.lambda_override)
    return functionals::lambda_value(functionals::Mode::Explicit, cfg.tau, cfg.lambda);
  if (cfg.mode == "shrinking") return functionals::lambda_value(functionals::Mode::Shrinking, cfg.tau);
  if (cfg.mode == "steady") return functionals::lambda_value(functionals::Mode::Steady, cfg.tau);
  return functionals::lambda_value(functionals::Mode::Expanding, cfg.tau);
}

double sphere_soliton_constant(int n, double tau) {
  double volume = 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
  return std::log(volume) - 0.5 * n * std::log(4.0 * std::numbers::pi * tau);
}

std::vector<Record> algebra_suite(const Config& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> korder(0, 10);
  const std::string suite = "algebra";
  std::vector<Record> out;

  double shift_err = 0.0, gen_err = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    wsym::WeightedSpectrum ws = random_spectrum(rng, 8);
    int k = korder(rng);
    double t = u(rng);
    double lhs = wsym::weighted_sigma_shifted(k, ws, t);
    wsym::WeightedSpectrum shifted = ws;
    shifted.mu0 += t;
    double rhs = wsym::weighted_sigma(k, shifted);
    double scale = std::max({std::fabs(lhs), std::fabs(rhs), wsym::magnitude_scale(ws, k)});
    shift_err = std::max(shift_err, std::fabs(lhs - rhs) / scale);

    int kmax = std::min<int>(10, static_cast<int>(ws.mu.size()) + 4);
    std::vector<double> rec = wsym::sigma_all(kmax, ws);
    std::vector<double> gen = wsym::generating_coeffs(ws, kmax);
    for (int j = 0; j <= kmax; ++j) {
      double sc = std::max({std::fabs(rec[static_cast<size_t>(j)]),
                            std::fabs(gen[static_cast<size_t>(j)]),
                            wsym::magnitude_scale(ws, j)});
      gen_err = std::max(
          gen_err, std::fabs(rec[static_cast<size_t>(j)] - gen[static_cast<size_t>(j)]) / sc);
    }
  }
  out.push_back(report::bounded(suite, "shift-formula-max-rel", "sigma-shift-formula", shift_err,
                                1e-12 * cfg.tol_scale));
  out.push_back(report::bounded(suite, "generating-coeff-max-rel", "sigma-generating-function",
                                gen_err, 1e-10 * cfg.tol_scale));

  double worst_gap = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    wsym::WeightedSpectrum ws = random_spectrum(rng, 8);
    std::uniform_int_distribution<int> ki(1, 6);
    int k = ki(rng);
    double scale = std::pow(wsym::magnitude_scale(ws, k), 2);
    worst_gap = std::min(worst_gap, wsym::newton_gap(k, ws) / scale);
  }
  out.push_back(report::bounded(suite, "newton-gap-min", "weighted-newton-inequality",
                                std::max(0.0, -worst_gap), 1e-12 * cfg.tol_scale));

  double eq_err = 0.0;
  for (int s = 0; s < std::min(cfg.samples, 400); ++s) {
    std::uniform_int_distribution<int> ni(1, 6), ki(1, 5);
    int n = ni(rng);
    int k = std::min(ki(rng), n);
    wsym::WeightedSpectrum ws;
    ws.mu.assign(static_cast<size_t>(n), 0.0);
    if (s % 2 == 0) {
      ws.mu0 = 2.0 * u(rng);
    } else {
      ws.mu0 = 0.0;
      std::uniform_int_distribution<int> cnt(0, k - 1);
      int nz = std::min(cnt(rng), n);
      for (int i = 0; i < nz; ++i) ws.mu[static_cast<size_t>(i)] = 2.0 * u(rng);
      std::shuffle(ws.mu.begin(), ws.mu.end(), rng);
    }
    if (!wsym::newton_equality_family(k, ws, 1e-14)) continue;
    double scale = std::pow(wsym::magnitude_scale(ws, k), 2);
    eq_err = std::max(eq_err, std::fabs(wsym::newton_gap(k, ws)) / scale);
  }
  out.push_back(report::bounded(suite, "newton-equality-family", "weighted-newton-equality",
                                eq_err, 1e-12 * cfg.tol_scale));

  double eig_err = 0.0, contract_err = 0.0;
  int matrix_samples = std::min(cfg.samples, 400);
  for (int s = 0; s < matrix_samples; ++s) {
    std::uniform_int_distribution<int> ni(1, 6), ki(0, 6);
    int n = ni(rng), k = ki(rng);
    wsym::SymPair sp = random_pair(rng, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sp.P);
    Eigen::MatrixXd tk = wsym::newton_transform(k, sp);
    wsym::WeightedSpectrum ws;
    ws.mu0 = sp.mu0;
    ws.mu.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    double scale = wsym::magnitude_scale(sp, k + 1);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd v = es.eigenvectors().col(i);
      double diag = v.dot(tk * v);
      double expect = wsym::weighted_sigma(k, wsym::remove_coordinate(ws, i));
      eig_err = std::max(eig_err, std::fabs(diag - expect) / scale);
    }
    double pair = tk.cwiseProduct(sp.P).sum();
    double closed = (k + 1) * wsym::weighted_sigma(k + 1, ws) - ws.mu0 * wsym::weighted_sigma(k, ws);
    contract_err = std::max(contract_err, std::fabs(pair - closed) / scale);
  }
  out.push_back(report::bounded(suite, "transform-eigenvalue-lemma", "newton-transform-spectrum",
                                eig_err, 1e-9 * cfg.tol_scale));
  out.push_back(report::bounded(suite, "transform-contraction", "newton-transform-contraction",
                                contract_err, 1e-9 * cfg.tol_scale));

  double min_eig = std::numeric_limits<double>::infinity();
  std::uniform_real_distribution<double> neg(-2.0, -0.05);
  for (int s = 0; s < cfg.samples; ++s) {
    std::uniform_int_distribution<int> ni(1, 6), ki(0, 5);
    int n = ni(rng), k = ki(rng);
    Eigen::VectorXd mu(n);
    for (int i = 0; i < n; ++i) mu[i] = std::min(0.0, neg(rng) + 1.0);
    wsym::SymPair sp(neg(rng), Eigen::MatrixXd(mu.asDiagonal()));
    wsym::DefinitenessReport rep = wsym::definiteness(k, sp);
    wsym::WeightedSpectrum ws;
    ws.mu0 = sp.mu0;
    ws.mu.assign(mu.data(), mu.data() + n);
    min_eig = std::min(min_eig, rep.min_signed / wsym::magnitude_scale(ws, k));
  }
  out.push_back(positive(suite, "cone-definiteness-min-eig", "newton-transform-definiteness",
                         min_eig, 0.0));
  return out;
}

std::vector<Record> identities_suite(const Config& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ull);
  const std::string suite = "identities";
  std::vector<Record> out;
  geom::Backend b = make_backend(cfg);
  double lambda = resolve_lambda(cfg);
  int kmax = std::min(cfg.k, 4);
  int points = std::min(cfg.samples, 200);

  geom::Field phi = make_potential(cfg, rng);
  if (cfg.backend == "sphere")
    phi = geom::field_axpy(phi, 1.0, geom::Field(random_harmonic(rng, cfg.n + 1)));

  if (b.flat()) {
    double dsigma_sup = 0.0, div_newton = 0.0, div_einstein = 0.0, shifted_sup = 0.0;
    geom::Field phi_shift = geom::field_add_constant(phi, 2.5);
    for (int s = 0; s < points; ++s) {
      Eigen::VectorXd x = sample_point(cfg, rng);
      geom::CurvJet jet = geom::curvature_jet(b, phi, x, lambda);
      for (int k = 1; k <= kmax; ++k) {
        double scale = jet_scale(jet, k + 1);
        dsigma_sup =
            std::max(dsigma_sup, functionals::dsigma_residual(b, phi, x, k, lambda) / scale);
        functionals::DivergenceResiduals dr =
            functionals::divergence_residuals(b, phi, x, k, lambda);
        div_newton = std::max(div_newton, dr.newton / scale);
        div_einstein = std::max(div_einstein, dr.einstein / scale);
        functionals::DivergenceResiduals ds =
            functionals::divergence_residuals(b, phi_shift, x, k, lambda);
        shifted_sup = std::max({shifted_sup, ds.newton / scale, ds.einstein / scale});
      }
    }
    double tol = 1e-8 * cfg.tol_scale;
    out.push_back(report::bounded(suite, "dsigma-gradient-sup", "sigma-gradient-identity",
                                  dsigma_sup, tol));
    out.push_back(report::bounded(suite, "div-newton-sup", "newton-divergence-flat", div_newton, tol));
    out.push_back(
        report::bounded(suite, "div-einstein-sup", "einstein-divergence-flat", div_einstein, tol));
    out.push_back(report::bounded(suite, "div-constant-shift-sup", "divergence-shift-invariance",
                                  shifted_sup, tol));
  }

  double obata_sup = 0.0;
  double cone_min = std::numeric_limits<double>::infinity();
  int cone_members = 0, cone_total = 0;
  for (int s = 0; s < points; ++s) {
    Eigen::VectorXd x = sample_point(cfg, rng);
    tensor::PointCurvature pc = geom::point_curvature(b, phi, x, lambda);
    double scale =
        std::pow(1.0 + std::fabs(pc.Y - lambda) + pc.ric.mat().cwiseAbs().maxCoeff(), kmax + 2);
    for (int k = 0; k <= kmax; ++k)
      obata_sup = std::max(obata_sup, functionals::obata_residual(b, phi, x, k, lambda) / scale);
    for (int k = 1; k <= kmax; ++k) {
      ++cone_total;
      try {
        cone_min = std::min(cone_min, functionals::obata_cone_gap(b, phi, x, k, lambda) / scale);
        ++cone_members;
      } catch (const std::domain_error&) {
      }
    }
  }
  out.push_back(report::bounded(suite, "shifted-contraction-sup", "einstein-contraction-shifted",
                                obata_sup, 1e-9 * cfg.tol_scale));
  if (cone_members > 0)
    out.push_back(positive(suite, "shifted-cone-gap-min", "cone-contraction-sign", cone_min,
                           -1e-10 * cfg.tol_scale));
  out.push_back(positive(suite, "cone-membership-fraction", "cone-contraction-sign",
                         cone_total == 0 ? 0.0 : static_cast<double>(cone_members) / cone_total,
                         0.0));

  int ksa = b.flat() ? kmax : std::min(kmax, 2);
  geom::QuadratureRule rule = geom::quadrature(b, phi, quad_order_for(cfg));
  double sa_err = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    geom::Field psi1 = make_variation(cfg, rng);
    geom::Field psi2 = make_variation(cfg, rng);
    for (int k = 1; k <= ksa; ++k) {
      functionals::PairedIntegrals pi =
          functionals::selfadjoint_pair(b, phi, psi1, psi2, cfg.tau, lambda, k, rule);
      sa_err = std::max(sa_err,
                        std::fabs(pi.lhs - pi.rhs) / (1.0 + std::fabs(pi.lhs) + std::fabs(pi.rhs)));
    }
  }
  out.push_back(report::bounded(suite, "selfadjoint-pairing", "weighted-self-adjointness", sa_err,
                                1e-8 * cfg.tol_scale));

  double flat_err = 0.0;
  int nonzero = 0, obstruction_samples = std::min(cfg.samples, 200);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < obstruction_samples; ++s) {
    for (int k : {3, 4}) {
      int n = 4 + s % 2;
      std::vector<double> raw4(static_cast<size_t>(n) * n * n * n);
      for (double& r : raw4) r = u(rng);
      std::vector<double> raw3(static_cast<size_t>(n) * n * n);
      for (double& r : raw3) r = u(rng);
      tensor::PointCurvature pc;
      pc.Y = u(rng);
      Eigen::MatrixXd A(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = u(rng);
      pc.ric = tensor::Sym2::from(0.5 * (A + A.transpose()));
      pc.cotton = tensor::Cotton3::from(n, raw3);
      pc.riem = tensor::Curv4::from(n, raw4);
      Eigen::VectorXd X = random_point(rng, n, 1.0);
      if (X.norm() < 0.1) X[0] += 1.0;
      Eigen::VectorXd grad = random_point(rng, n, 1.0);
      tensor::FlatObstruction fo = tensor::to_flat_leading_coeff(k, pc, X, grad);
      double scale = std::max(1.0, fo.predicted.cwiseAbs().maxCoeff());
      flat_err = std::max(flat_err, (fo.fitted - fo.predicted).cwiseAbs().maxCoeff() / scale);
      if (fo.predicted.cwiseAbs().maxCoeff() > 1e-10) ++nonzero;
    }
  }
  out.push_back(report::bounded(suite, "obstruction-coefficient-rel", "curved-obstruction-leading",
                                flat_err, 1e-8 * cfg.tol_scale));
  out.push_back(positive(suite, "obstruction-nonzero-fraction", "curved-obstruction-generic",
                         static_cast<double>(nonzero) / (2.0 * obstruction_samples), 0.95));
  return out;
}

std::vector<Record> soliton_suite(const Config& cfg) {
  validate(cfg);
  const std::string suite = "soliton";
  std::vector<Record> out;
  bool sphere = cfg.model == "sphere";
  int n = sphere ? std::max(cfg.n, 2) : cfg.n;
  double tau = sphere ? 0.5 / (n - 1.0) : cfg.tau;
  geom::Backend b = sphere ? geom::Backend::sphere(n) : geom::Backend::euclidean(n);
  geom::Field phi =
      sphere ? geom::Field(fields::SphereField(
                   fields::PolyField::constant(n + 1, sphere_soliton_constant(n, tau))))
             : geom::Field(fields::PolyField::gaussian_potential(n, tau, Eigen::VectorXd::Zero(n)));
  geom::QuadratureRule rule = geom::quadrature(b, phi, cfg.quad_order);
  functionals::SolitonReport rep = functionals::soliton_report(b, phi, tau, rule);
  double ts = cfg.tol_scale;

  out.push_back(report::bounded(suite, "ricci-residual-sup", "soliton-equation", rep.sup_ric,
                                1e-12 * ts));
  out.push_back(report::bounded(suite, "sigma-power-chain-sup", "soliton-sigma-powers",
                                rep.sup_sigma_consistency, 1e-10 * ts));
  out.push_back(report::below(suite, "scalar-mean-sign", "yokota-scalar-sign", rep.sigma1_mean,
                              0.0, 1e-10 * ts));
  out.push_back(report::bounded(suite, "scalar-stddev", "soliton-scalar-constant",
                                rep.sigma1_stddev, 1e-10 * ts));
  out.push_back(report::bounded(suite, "potential-eigenfunction-sup", "grs-potential-eigenfunction",
                                rep.eigenfunction_residual, 1e-9 * ts));
  if (sphere) {
    out.push_back(report::below(suite, "potential-l2-bound", "grs-potential-l2-bound", rep.phi0_l2,
                                rep.phi0_l2_bound, 1e-8 * ts));
    out.push_back(report::bounded(suite, "potential-l2-value", "grs-potential-l2-bound",
                                  rep.phi0_l2, 1e-9 * ts));
  } else {
    out.push_back(report::against(suite, "potential-l2-equality", "grs-potential-l2-bound",
                                  rep.phi0_l2, rep.phi0_l2_bound,
                                  1e-8 * ts * (1.0 + rep.phi0_l2_bound)));
  }
  out.push_back(report::against(suite, "scalar-integral", "grs-scalar-integral",
                                rep.int_sigma1_unmodified, rep.int_sigma1_expected,
                                1e-9 * ts * (1.0 + std::fabs(rep.int_sigma1_expected))));
  out.push_back(report::against(suite, "sigma2-integral", "grs-sigma2-integral",
                                rep.int_sigma2_unmodified, rep.int_sigma2_expected,
                                1e-9 * ts * (1.0 + std::fabs(rep.int_sigma2_expected))));
  if (sphere && n == 4)
    out.push_back(report::bounded(suite, "sigma2-integral-vanishing", "grs-sigma2-integral",
                                  rep.int_sigma2_unmodified, 1e-10 * ts));
  out.push_back(report::against(suite, "weighted-volume", "normalized-volume-unit",
                                rep.weighted_volume, 1.0, 1e-10 * ts));

  if (!sphere) {
    double lambda = 0.5 / tau;
    std::mt19937_64 rng(cfg.seed + 2);
    double sup_sigma = 0.0;
    for (int s = 0; s < 50; ++s) {
      Eigen::VectorXd x = random_point(rng, n, 2.0);
      for (int k = 1; k <= 4; ++k)
        sup_sigma = std::max(sup_sigma,
                             std::fabs(functionals::sigma_field(b, phi, x, k, lambda)));
    }
    out.push_back(report::bounded(suite, "modified-sigma-vanishing", "gaussian-sigma-zero",
                                  sup_sigma, 1e-10 * ts));
  }

  for (int k = 1; k <= (sphere ? 1 : 2); ++k) {
    functionals::CriticalityReport crit = functionals::critical_point_residual(b, phi, tau, k, rule);
    std::string label = k == 1 ? "first" : "second";
    out.push_back(report::bounded(suite, "criticality-" + label + "-stddev",
                                  "critical-point-density", crit.stddev, 1e-10 * ts));
    out.push_back(report::bounded(suite, "criticality-" + label + "-trace",
                                  "critical-point-trace", std::fabs(crit.trace_integral),
                                  1e-10 * ts));
  }
  return out;
}

std::vector<Record> variation_suite(const Config& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed + 0x6a09e667f3bcc909ull);
  const std::string suite = "variation";
  std::vector<Record> out;
  geom::Backend b = make_backend(cfg);
  double lambda = resolve_lambda(cfg);
  double ts = cfg.tol_scale;
  int kmax = std::min(cfg.k, 4);

  double coeff_err = 0.0;
  std::vector<double> c2 = functionals::hat_w_coeffs(2);
  std::vector<double> frozen2 = {0.125, 0.0, 1.0};
  std::vector<double> c4 = functionals::hat_w_coeffs(4);
  std::vector<double> frozen4 = {3.0 / 128.0, 1.0 / 24.0, 0.125, 0.0, 1.0};
  for (size_t i = 0; i < c2.size(); ++i) coeff_err = std::max(coeff_err, std::fabs(c2[i] - frozen2[i]));
  for (size_t i = 0; i < c4.size(); ++i) coeff_err = std::max(coeff_err, std::fabs(c4[i] - frozen4[i]));
  out.push_back(report::bounded(suite, "hat-coefficients-frozen", "hat-combination-recursion",
                                coeff_err, 1e-14));

  geom::Field phi = make_potential(cfg, rng);
  geom::QuadratureRule rule = geom::quadrature(b, phi, quad_order_for(cfg));
  phi = functionals::normalize_c1(b, phi, cfg.tau, rule);

  int kgrad = b.flat() ? kmax : std::min(kmax, 2);
  int trials = std::min(cfg.samples, 12);
  double grad_err = 0.0, hat_err = 0.0;
  for (int t = 0; t < trials; ++t) {
    geom::Field psi = make_variation(cfg, rng);
    for (int k = 0; k <= kgrad; ++k) {
      functionals::FirstVariation fv =
          functionals::first_variation(b, phi, psi, cfg.tau, lambda, k, rule);
      grad_err = std::max(grad_err, std::fabs(fv.finite_difference - fv.closed_form) /
                                        (1.0 + std::fabs(fv.closed_form)));
    }
    if (b.flat()) {
      for (int k = 1; k <= kmax; ++k) {
        functionals::FirstVariation fv =
            functionals::hat_first_variation(b, phi, psi, cfg.tau, k, rule);
        hat_err = std::max(hat_err, std::fabs(fv.finite_difference - fv.closed_form) /
                                        (1.0 + std::fabs(fv.closed_form)));
      }
    }
  }
  out.push_back(report::bounded(suite, "first-variation-gradient", "functional-gradient-density",
                                grad_err, 1e-6 * ts));
  if (b.flat())
    out.push_back(report::bounded(suite, "hat-gradient", "hat-gradient-density", hat_err,
                                  1e-6 * ts));

  if (!b.flat()) {
    bool refused = false;
    try {
      geom::Field psi = make_variation(cfg, rng);
      functionals::first_variation(b, phi, psi, cfg.tau, lambda, 3, rule);
    } catch (const std::domain_error&) {
      refused = true;
    }
    out.push_back(positive(suite, "curved-gradient-refusal", "curved-nonvariational", refused ? 1.0 : 0.0,
                           1.0));
  }

  if (b.flat()) {
    double scale_err = 0.0;
    for (double c : {0.5, 2.0, 5.0}) {
      geom::Backend scaled = geom::scale_metric(b, c);
      geom::QuadratureRule rule_c = geom::quadrature(scaled, phi, quad_order_for(cfg));
      for (int k = 0; k <= kmax; ++k) {
        double w1 = functionals::w_eval(b, phi, cfg.tau, 0.5 / cfg.tau, k, rule);
        double wc =
            functionals::w_eval(scaled, phi, c * cfg.tau, 0.5 / (c * cfg.tau), k, rule_c);
        scale_err = std::max(scale_err, std::fabs(wc - w1) / (1.0 + std::fabs(w1)));
      }
    }
    out.push_back(report::bounded(suite, "scale-invariance", "functional-scale-invariance",
                                  scale_err, 1e-10 * ts));
  }

  if (cfg.backend == "euclidean") {
    geom::Field gauss(fields::PolyField::gaussian_potential(cfg.n, cfg.tau,
                                                            Eigen::VectorXd::Zero(cfg.n)));
    geom::QuadratureRule grule = geom::quadrature(b, gauss, std::max(cfg.quad_order, 16));
    double w_err = std::fabs(functionals::w_eval(b, gauss, cfg.tau, 0.5 / cfg.tau, 0, grule) - 1.0);
    double hat_const_err = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      w_err = std::max(w_err, std::fabs(functionals::w_eval(b, gauss, cfg.tau, 0.5 / cfg.tau, k, grule)));
      hat_const_err = std::max(hat_const_err,
                               std::fabs(functionals::hat_w_eval(b, gauss, cfg.tau, k, grule) -
                                         functionals::hat_w_coeffs(k)[0]));
    }
    out.push_back(report::bounded(suite, "gaussian-functional-values", "gaussian-functional-zero",
                                  w_err, 1e-10 * ts));
    out.push_back(report::bounded(suite, "hat-functional-constant", "hat-functional-gaussian",
                                  hat_const_err, 1e-10 * ts));

    int count = std::min(cfg.samples, 100);
    double sign_worst = -std::numeric_limits<double>::infinity();
    double closed_err = 0.0;
    for (int t = 0; t < count; ++t) {
      geom::Field psi(random_poly(rng, cfg.n, 3, 5, 0.8));
      for (int k = 1; k <= kmax; ++k) {
        double sv = functionals::second_variation(b, gauss, psi, cfg.tau, k, grule,
                                                  functionals::FunctionalKind::HatW);
        double ref =
            functionals::gaussian_second_variation_reference(b, gauss, psi, cfg.tau, k, grule);
        double signed_sv = (k % 2 == 0) ? sv : -sv;
        sign_worst = std::max(sign_worst, signed_sv);
        closed_err = std::max(closed_err, std::fabs(sv - ref) / (1.0 + std::fabs(ref)));
      }
    }
    out.push_back(report::below(suite, "second-variation-sign", "hat-second-variation-sign",
                                sign_worst, 0.0, 1e-6 * ts));
    out.push_back(report::bounded(suite, "second-variation-closed-form",
                                  "gaussian-second-variation-value", closed_err, 1e-6 * ts));

    fields::PolyField lin(cfg.n);
    std::vector<int> e1(static_cast<size_t>(cfg.n), 0);
    e1[0] = 1;
    lin.add_term(e1, 0.7);
    double lin_sv = std::fabs(functionals::second_variation(b, gauss, geom::Field(lin), cfg.tau, 1,
                                                            grule, functionals::FunctionalKind::HatW));
    out.push_back(report::bounded(suite, "second-variation-linear-null",
                                  "second-variation-equality-case", lin_sv, 1e-6 * ts));

    geom::Backend b1 = geom::Backend::euclidean(1);
    geom::Field g1(fields::PolyField::gaussian_potential(1, 0.5, Eigen::VectorXd::Zero(1)));
    geom::QuadratureRule r1 = geom::quadrature(b1, g1, 24);
    fields::PolyField sq(1);
    sq.add_term({2}, 1.0);
    double worked = functionals::second_variation(b1, g1, geom::Field(sq), 0.5, 2, r1,
                                                  functionals::FunctionalKind::HatW);
    out.push_back(report::against(suite, "second-variation-worked-value",
                                  "gaussian-second-variation-value", worked, -0.5, 1e-6 * ts));
  }

  if (cfg.backend == "sphere") {
    int n = std::max(cfg.n, 2);
    double tau = 0.5 / (n - 1.0);
    geom::Backend bs = geom::Backend::sphere(n);
    geom::Field soliton(fields::SphereField(
        fields::PolyField::constant(n + 1, sphere_soliton_constant(n, tau))));
    geom::QuadratureRule srule = geom::quadrature(bs, soliton, cfg.quad_order);
    int count = std::min(cfg.samples, 100);
    double first_min = std::numeric_limits<double>::infinity();
    double second_max = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < count; ++t) {
      geom::Field psi(random_harmonic(rng, n + 1));
      first_min = std::min(first_min,
                           functionals::second_variation(bs, soliton, psi, tau, 1, srule,
                                                         functionals::FunctionalKind::W));
      second_max = std::max(second_max,
                            functionals::second_variation(bs, soliton, psi, tau, 2, srule,
                                                          functionals::FunctionalKind::W));
    }
    out.push_back(positive(suite, "sphere-first-order-min", "sphere-local-minimality", first_min,
                           -1e-6 * ts));
    out.push_back(report::below(suite, "sphere-second-order-max", "sphere-local-maximality",
                                second_max, 0.0, 1e-6 * ts));
  }
  return out;
}

std::vector<Record> spectrum_suite(const Config& cfg) {
  validate(cfg);
  const std::string suite = "spectrum";
  std::vector<Record> out;
  std::vector<double> taus = {0.25, 0.5, 1.0};
  if (std::find(taus.begin(), taus.end(), cfg.tau) == taus.end()) taus.push_back(cfg.tau);
  for (double tau : taus) {
    double expect = 0.5 / tau;
    double g6 = functionals::spectral_gap(tau, 6, 16);
    double g12 = functionals::spectral_gap(tau, 12, 28);
    std::string label = report::format_double(tau);
    out.push_back(report::against(suite, "ou-gap-tau-" + label, "ou-spectral-gap", g6, expect,
                                  1e-10 * cfg.tol_scale * (1.0 + expect)));
    out.push_back(report::bounded(suite, "galerkin-stability-tau-" + label,
                                  "ou-spectral-gap-stability", std::fabs(g6 - g12),
                                  1e-10 * cfg.tol_scale * (1.0 + expect)));
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra", "identities", "soliton", "variation",
                                                 "spectrum"};
  return names;
}

std::vector<Record> run_suite(const std::string& name, const Config& cfg) {
  if (name == "algebra") return algebra_suite(cfg);
  if (name == "identities") return identities_suite(cfg);
  if (name == "soliton") return soliton_suite(cfg);
  if (name == "variation") return variation_suite(cfg);
  if (name == "spectrum") return spectrum_suite(cfg);
  throw std::invalid_argument("unknown suite: " + name);
}

std::vector<Record> run_all(const Config& cfg, int jobs) {
  std::vector<Record> out;
  if (jobs > 1) {
    std::vector<std::future<std::vector<Record>>> futures;
    for (const std::string& name : suite_names())
      futures.push_back(
          std::async(std::launch::async, [&cfg, name] { return run_suite(name, cfg); }));
    for (auto& f : futures) {
      std::vector<Record> part = f.get();
      out.insert(out.end(), part.begin(), part.end());
    }
  } else {
    for (const std::string& name : suite_names()) {
      std::vector<Record> part = run_suite(name, cfg);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  return out;
}

}  // namespace sigmaforge::suites
