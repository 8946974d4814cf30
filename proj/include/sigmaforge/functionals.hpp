#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigmaforge/geom.hpp"
#include "sigmaforge/tensor_point.hpp"
#include "sigmaforge/wsym.hpp"

namespace sigmaforge::functionals {

enum class Mode { Shrinking, Steady, Expanding, Explicit };
double lambda_value(Mode mode, double tau, double explicit_lambda = 0.0);

// Deterministic reduction with O(log n) error growth.
double pairwise_sum(std::vector<double> values);

// sigma_k of the weighted pair (Y, ric) at a point of the backend.
double sigma_field(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                   int k, double lambda);
// Same with the scalar slot shifted by -lambda.
double hat_sigma_field(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                       int k, double lambda);

// Exact first-derivative data of sigma_j and of the Newton tensors along a
// flat frame, obtained by differentiating the recursion term by term.
struct SigmaJet {
  std::vector<double> sigma;                     // j = 0..kmax
  std::vector<Eigen::VectorXd> dsigma;           // dsigma[j][a]
  std::vector<Eigen::MatrixXd> T;                // j = 0..kmax
  std::vector<std::vector<Eigen::MatrixXd>> dT;  // dT[j][a]
};
SigmaJet sigma_jet(const geom::CurvJet& jet, int kmax);

// D_k(psi) = <T_{k-1}, hess psi> - sigma_{k-1} <grad phi, grad psi>
//          + lambda sigma_{k-1} psi, the pointwise derivative of sigma_k
// along the potential direction psi. Valid on every backend.
double d_operator(const geom::Backend& b, const geom::Field& phi, const geom::Field& psi,
                  const Eigen::VectorXd& x, int k, double lambda);
// Divergence form div_phi(T_{k-1}(grad psi)) + lambda sigma_{k-1} psi,
// available on flat backends where the Newton tensors are divergence-clean.
double d_operator_divergence(const geom::Backend& b, const geom::Field& phi,
                             const geom::Field& psi, const Eigen::VectorXd& x, int k,
                             double lambda);

// |grad sigma_k - sigma_{k-1} grad Y
//  - sum_j (-1)^j/(j+1) sigma_{k-1-j} grad tr(ric^{j+1})| at x, flat backends.
double dsigma_residual(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                       int k, double lambda);

// newton: |div_phi T_k + sigma_k dphi|, einstein: |div_phi E_k + d sigma_k|
// with E_k = T_k - sigma_k I. Flat backends.
struct DivergenceResiduals {
  double newton;
  double einstein;
};
DivergenceResiduals divergence_residuals(const geom::Backend& b, const geom::Field& phi,
                                         const Eigen::VectorXd& x, int k, double lambda);

// |<E_k(shifted), ric> - ((k+1) hat_sigma_{k+1} - hat_sigma_1 hat_sigma_k)|.
double obata_residual(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                      int k, double lambda);
// Companion sign quantity on the shifted spectrum; throws outside the cone.
double obata_cone_gap(const geom::Backend& b, const geom::Field& phi, const Eigen::VectorXd& x,
                      int k, double lambda);

// int (4 pi tau)^{-n/2} e^{-phi} dvol computed on the supplied rule.
double weighted_volume(const geom::Backend& b, const geom::Field& phi, double tau,
                       const geom::QuadratureRule& rule);
// Adds the constant making the weighted volume one; idempotent.
geom::Field normalize_c1(const geom::Backend& b, geom::Field phi, double tau,
                         const geom::QuadratureRule& rule);

// F_k(phi) = int tau^k sigma_k (4 pi tau)^{-n/2} e^{-phi} dvol with the given
// lambda; lambda = 1/(2 tau) gives the shrinking-normalized functional.
double w_eval(const geom::Backend& b, const geom::Field& phi, double tau, double lambda, int k,
              const geom::QuadratureRule& rule);

// Coefficients c_0..c_k of the combination hat_W_k = sum_m c_m W_m whose
// gradient density is the shifted sigma: c_k = 1 and
// c_m = (-1/2)^{k-m}/(k-m)! + c_{m+1}/2.
std::vector<double> hat_w_coeffs(int k);
double hat_w_eval(const geom::Backend& b, const geom::Field& phi, double tau, int k,
                  const geom::QuadratureRule& rule);

struct FirstVariation {
  double finite_difference;
  double closed_form;
};
// d/dt F_k(phi + t psi) against -int tau^k (sigma_k - lambda sigma_{k-1}) psi w.
// The closed form needs divergence-clean Newton tensors, so curved backends
// are limited to k <= 2 and larger k throws.
FirstVariation first_variation(const geom::Backend& b, const geom::Field& phi,
                               const geom::Field& psi, double tau, double lambda, int k,
                               const geom::QuadratureRule& rule);
// d/dt hat_W_k(phi + t psi) against -int tau^k hat_sigma_k psi w (shrinking).
FirstVariation hat_first_variation(const geom::Backend& b, const geom::Field& phi,
                                   const geom::Field& psi, double tau, int k,
                                   const geom::QuadratureRule& rule);

struct PairedIntegrals {
  double lhs;
  double rhs;
};
// int D_k(psi1) psi2 w against int psi1 D_k(psi2) w.
PairedIntegrals selfadjoint_pair(const geom::Backend& b, const geom::Field& phi,
                                 const geom::Field& psi1, const geom::Field& psi2, double tau,
                                 double lambda, int k, const geom::QuadratureRule& rule);

enum class FunctionalKind { W, HatW };
// Second derivative at t = 0 of F(normalize_c1(phi + t psi)) by Richardson
// extrapolated central differences. phi must already be critical: the
// scalar sigma_1 has to be constant, otherwise a domain_error is thrown.
double second_variation(const geom::Backend& b, const geom::Field& phi, const geom::Field& psi,
                        double tau, int k, const geom::QuadratureRule& rule, FunctionalKind kind);
// Closed form of that second variation at the gaussian critical point:
// (-1/2)^{k-1} tau/(k-1)! int (|grad psi0|^2 - psi0^2/(2 tau)) w with psi0
// the weighted-mean-free part of psi.
double gaussian_second_variation_reference(const geom::Backend& b, const geom::Field& phi,
                                           const geom::Field& psi, double tau, int k,
                                           const geom::QuadratureRule& rule);

struct SolitonReport {
  double sup_ric;                 // sup |modified tensor|
  double sup_sigma_consistency;   // sup_{k<=5} |sigma_k - sigma_1^k/k!|
  double sigma1_mean;             // weighted mean of sigma_1, <= 0 on solitons
  double sigma1_stddev;
  double eigenfunction_residual;  // sup |Delta_phi phi0 + phi0 / tau|
  double phi0_l2;                 // int phi0^2 w
  double phi0_l2_bound;           // n / 2
  double int_sigma1_unmodified;   // lambda = 0 sigma_1 integral
  double int_sigma1_expected;     // n / (4 tau)
  double int_sigma2_unmodified;   // lambda = 0 sigma_2 integral
  double int_sigma2_expected;     // n(n-4)/(32 tau^2) + phi0_l2/(8 tau^2)
  double weighted_volume;
};
SolitonReport soliton_report(const geom::Backend& b, const geom::Field& phi, double tau,
                             const geom::QuadratureRule& rule);

struct CriticalityReport {
  double stddev;          // weighted stddev of sigma_k - lambda sigma_{k-1}
  double trace_integral;  // int tr(E_k - lambda E_{k-1}) w
};
// k = 1 on every backend, k = 2 on flat backends only.
CriticalityReport critical_point_residual(const geom::Backend& b, const geom::Field& phi,
                                          double tau, int k, const geom::QuadratureRule& rule);

// Smallest Dirichlet eigenvalue of the weighted laplacian on mean-free
// functions of the one-dimensional gaussian, by a Hermite Galerkin basis of
// the given size; the exact value is 1/(2 tau).
double spectral_gap(double tau, int basis, int order);

}  // namespace sigmaforge::functionals
