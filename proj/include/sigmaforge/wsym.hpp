// Weighted elementary symmetric polynomials sigma_k^inf(mu0; mu), their
// Newton-type inequalities, elliptic cones and Newton transformations.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sigmaforge::wsym {

// A weight mu0 together with the ordinary eigenvalue slots mu_1..mu_n.
// n = 0 is allowed; every entry must be finite.
struct WeightedSpectrum {
  double mu0 = 0.0;
  std::vector<double> mu;
};

// A weight paired with a symmetric matrix.  The constructor symmetrizes the
// input so that P == P^T holds exactly on the stored matrix.
struct SymPair {
  double mu0 = 0.0;
  Eigen::MatrixXd P;

  SymPair(double weight, const Eigen::MatrixXd& raw);
};

// Membership report for the negative weighted elliptic cones Gamma_k^{inf,-}.
// margins[j-1] = (-1)^j sigma_j^inf for j = 1..kmax; max_k is the largest k
// such that the first k margins are strictly positive (0 if none).
struct ConeReport {
  int max_k = 0;
  std::vector<double> margins;
};

// Eigenvalues of T_k^inf(mu0; P) in ascending order, together with the
// signed minimum min_i (-1)^k lambda_i used for the ellipticity check.
struct DefinitenessReport {
  Eigen::VectorXd eigenvalues;
  double min_signed = 0.0;
  bool signed_positive_definite = false;
};

// (|mu0| + sum |mu_j| + 1)^degree, the magnitude scale used to make
// tolerances relative for degree-`degree` expressions in the spectrum.
double magnitude_scale(const WeightedSpectrum& ws, int degree);
double magnitude_scale(const SymPair& sp, int degree);

// sigma_0^inf .. sigma_kmax^inf evaluated through the defining recursion
// k sigma_k = mu0 sigma_{k-1} + sum_{i=0}^{k-1} (-1)^i sigma_{k-1-i} N_{i+1}
// with power sums N_i = sum_j mu_j^i.
std::vector<double> sigma_all(int kmax, const WeightedSpectrum& ws);

// sigma_k^inf(mu0; mu).
double weighted_sigma(int k, const WeightedSpectrum& ws);

// sum_{j=0}^{k} (s^j / j!) sigma_{k-j}^inf(mu0; mu), which equals
// sigma_k^inf(mu0 + s; mu); kept as an independent evaluation path.
double weighted_sigma_shifted(int k, const WeightedSpectrum& ws, double s);

// Coefficients of e^{mu0 t} prod_j (1 + mu_j t) through order K, computed by
// polynomial convolution against the truncated exponential series.
std::vector<double> generating_coeffs(const WeightedSpectrum& ws, int K);

// (k/(k+1)) (sigma_k)^2 - sigma_{k-1} sigma_{k+1}, nonnegative for all
// admissible spectra; k >= 1.
double newton_gap(int k, const WeightedSpectrum& ws);

// Structural predicate for the equality cases of the Newton inequality:
// either mu vanishes, or mu0 vanishes and at most k-1 of the mu_j are
// nonzero.  Entries are compared against tol in absolute value.
bool newton_equality_family(int k, const WeightedSpectrum& ws, double tol);

// Cone membership margins for Gamma_1^{inf,-} .. Gamma_kmax^{inf,-}.
ConeReport cone_report(const WeightedSpectrum& ws, int kmax);

// (-1)^{k+1} [sigma_1 sigma_k - (k+1) sigma_{k+1}], nonnegative inside
// Gamma_k^{inf,-}; throws std::domain_error outside the cone.
double newton_cor_gap(int k, const WeightedSpectrum& ws);

// The spectrum with slot i removed (0-based); mu0 is kept.
WeightedSpectrum remove_coordinate(const WeightedSpectrum& ws, int i);

// Matrix layer.  sigma_all(kmax, sp) diagonalizes P and reuses the scalar
// recursion; sigma_all_via_traces feeds tr(P^i) into the same recursion
// without an eigendecomposition and exists as a cross-check path.
std::vector<double> sigma_all(int kmax, const SymPair& sp);
std::vector<double> sigma_all_via_traces(int kmax, const SymPair& sp);
double weighted_sigma(int k, const SymPair& sp);

// T_k^inf(mu0; P) = sum_{j=0}^{k} (-1)^j sigma_{k-j}^inf(mu0; P) P^j.
Eigen::MatrixXd newton_transform(int k, const SymPair& sp);

// Eigenvalue summary of T_k^inf used for the cone ellipticity statement.
DefinitenessReport definiteness(int k, const SymPair& sp);

}  // namespace sigmaforge::wsym
