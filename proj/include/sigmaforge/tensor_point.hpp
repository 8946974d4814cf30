// Pointwise tensor algebra in an orthonormal frame: symmetric 2-tensors,
// Cotton-type 3-tensors, algebraic curvature tensors, and the Newton-type
// operators built from a weighted scalar Y and a symmetric tensor ric.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigmaforge/wsym.hpp"

namespace sigmaforge::tensor {

// Symmetric 2-tensor.  Construction symmetrizes, so mat() equals its
// transpose exactly.
class Sym2 {
 public:
  static Sym2 zero(int n);
  static Sym2 identity(int n);
  static Sym2 from(const Eigen::MatrixXd& raw);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit Sym2(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

// 3-tensor antisymmetric in its first two slots, C[a][b][c] = -C[b][a][c];
// the layout matches the covariant-derivative convention
// dS(X, Y, Z) = (nabla_X S)(Y, Z) - (nabla_Y S)(X, Z).
class Cotton3 {
 public:
  static Cotton3 zero(int n);
  static Cotton3 from(int n, const std::vector<double>& raw);

  int dim() const { return n_; }
  double at(int a, int b, int c) const { return v_[index(a, b, c)]; }
  double max_abs() const;

  // this - t * other, computed on the stored components so antisymmetry is
  // preserved exactly.
  Cotton3 minus_scaled(double t, const Cotton3& other) const;

 private:
  explicit Cotton3(int n) : n_(n), v_(static_cast<size_t>(n) * n * n, 0.0) {}
  size_t index(int a, int b, int c) const {
    return (static_cast<size_t>(a) * n_ + b) * n_ + c;
  }
  int n_;
  std::vector<double> v_;
};

// Algebraic curvature tensor: antisymmetric in (i,j) and (k,l), symmetric
// under pair swap, and satisfying the first Bianchi identity.  from() projects
// arbitrary input onto that symmetry class; components are rounded to 26
// significant bits during the Bianchi repair so that every identity residual,
// the cyclic one included, is exactly zero in double arithmetic.
class Curv4 {
 public:
  static Curv4 zero(int n);
  static Curv4 constant_curvature(int n, double kappa);
  static Curv4 from(int n, const std::vector<double>& raw);

  int dim() const { return n_; }
  double at(int i, int j, int k, int l) const { return v_[index(i, j, k, l)]; }
  double max_abs() const;

  // Rm(., ., X, .) as a 3-tensor: out[a][b][c] = sum_m Rm[a][b][m][c] X[m].
  Cotton3 contract3(const Eigen::VectorXd& X) const;

 private:
  explicit Curv4(int n) : n_(n), v_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  size_t index(int i, int j, int k, int l) const {
    return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_;
  std::vector<double> v_;
};

// Curvature data of a manifold with density at one point, expressed in an
// orthonormal frame: the weighted scalar Y, the modified tensor ric, the
// antisymmetrized derivative of ric, and the curvature of the background.
struct PointCurvature {
  double Y = 0.0;
  Sym2 ric = Sym2::zero(0);
  Cotton3 cotton = Cotton3::zero(0);
  Curv4 riem = Curv4::zero(0);
};

// Result of the flat-obstruction probe: the leading polynomial coefficient of
// the obstruction vector along the distinguished perturbation family, and the
// closed-form prediction it must match.
struct FlatObstruction {
  Eigen::VectorXd fitted;
  Eigen::VectorXd predicted;
};

// 1 + |Y| + component sup norms, the base magnitude used for relative
// tolerances on pointwise identities.
double magnitude(const PointCurvature& pc);

// (Rm . S)(x, y) = sum_{i,j} Rm[i][x][j][y] S[i][j]; with this convention
// Rm . g recovers the Ricci contraction of Rm.
Sym2 rm_dot(const Curv4& rm, const Sym2& S);

// v[c] = sum_{a,b} A[a][b] dB[a][c][b], the pairing <A . dB, X> = <A, dB(.,X,.)>.
Eigen::VectorXd a_dot_db(const Sym2& A, const Cotton3& dB);

// sigma_k^inf(Y; ric) through the eigenvalues of ric.
double sigma_pt(int k, const PointCurvature& pc);

// T_k^inf(Y; ric) and E_k = T_k - sigma_k id.
Sym2 newton_pt(int k, const PointCurvature& pc);
Sym2 e_pt(int k, const PointCurvature& pc);

// sum_{j=0}^{k-3} (-1)^j T_{k-3-j}(ric^{j+1} . cotton); the empty sum for
// k <= 2 returns the zero vector.
Eigen::VectorXd s_tensor(int k, const PointCurvature& pc);

// Evaluates s_tensor along the family Y_t = Y - t<grad_phi, X> - t^2,
// cotton_t = cotton - t Rm(.,.,X,.), with X rescaled internally to |X|^2 = 2,
// fits the degree-(2k-5) vector polynomial in t on Chebyshev nodes, and
// returns its top coefficient next to the prediction
// (-1)^k / (k-3)! * (ric . Rm(.,.,X,.)).  Requires k >= 3.
FlatObstruction to_flat_leading_coeff(int k, const PointCurvature& pc,
                                      const Eigen::VectorXd& X,
                                      const Eigen::VectorXd& grad_phi);

}  // namespace sigmaforge::tensor
