#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

namespace sigmaforge::fields {

// Multivariate polynomial with exact coefficient arithmetic. Derivatives are
// computed symbolically, so gradients, Hessians and third derivatives carry no
// discretization error.
class PolyField {
 public:
  explicit PolyField(int dim);
  static PolyField constant(int dim, double c);
  static PolyField monomial(const std::vector<int>& exponents, double coeff);
  // |x - center|^2 / (4 tau)
  static PolyField gaussian_potential(int dim, double tau, const Eigen::VectorXd& center);

  int dim() const { return dim_; }
  int degree() const;
  void add_term(const std::vector<int>& exponents, double coeff);
  void add_constant(double c);

  PolyField derivative(int axis) const;
  PolyField multiply(const PolyField& other) const;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hess(const Eigen::VectorXd& x) const;
  // third(x)[a](b, c) = d_a d_b d_c f(x)
  std::vector<Eigen::MatrixXd> third(const Eigen::VectorXd& x) const;

  PolyField& operator+=(const PolyField& other);
  PolyField& operator*=(double s);
  friend PolyField operator+(PolyField a, const PolyField& b) { return a += b; }
  friend PolyField operator*(double s, PolyField a) { return a *= s; }

  struct Quadratic {
    Eigen::MatrixXd H;       // Hessian of the degree-two part
    Eigen::VectorXd center;  // stationary point of the degree <= 2 part
  };
  // Requires the degree-two part to be positive definite.
  Quadratic quadratic_dominant() const;

  const std::map<std::vector<int>, double>& terms() const { return terms_; }

 private:
  int dim_;
  std::map<std::vector<int>, double> terms_;
};

// Finite trigonometric sum on the torus [0, 2pi)^n with integer modes,
// f(x) = sum_k a_k cos(k.x) + b_k sin(k.x). Modes are stored canonically
// (first nonzero component positive) so representations are unique.
class TrigField {
 public:
  explicit TrigField(int dim);
  static TrigField constant(int dim, double c);

  int dim() const { return dim_; }
  void add_mode(const Eigen::VectorXi& k, double cos_coeff, double sin_coeff);
  void add_constant(double c);
  // Largest |k_i| over stored modes; grids must stay above Nyquist for this.
  int max_abs_mode() const;

  TrigField derivative(int axis) const;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hess(const Eigen::VectorXd& x) const;
  std::vector<Eigen::MatrixXd> third(const Eigen::VectorXd& x) const;

  TrigField& operator+=(const TrigField& other);
  TrigField& operator*=(double s);
  friend TrigField operator+(TrigField a, const TrigField& b) { return a += b; }
  friend TrigField operator*(double s, TrigField a) { return a *= s; }

  const std::map<std::vector<int>, std::array<double, 2>>& modes() const { return modes_; }

 private:
  int dim_;
  // key: canonical mode, value: {cos coefficient, sin coefficient}
  std::map<std::vector<int>, std::array<double, 2>> modes_;
};

// Restriction of an ambient polynomial to the unit sphere S^n in R^{n+1}.
// Intrinsic derivatives are obtained from ambient ones: with P = I - p p^T,
// grad_S f = P grad f and Hess_S f(E_i, E_j) = E_i^T (hess f) E_j - (grad f . p) delta_ij
// for an orthonormal tangent frame E.
class SphereField {
 public:
  explicit SphereField(PolyField ambient);

  int ambient_dim() const { return ambient_.dim(); }
  const PolyField& ambient() const { return ambient_; }

  double value(const Eigen::VectorXd& p) const;
  Eigen::VectorXd tangent_grad(const Eigen::VectorXd& p) const;
  Eigen::VectorXd frame_grad(const Eigen::VectorXd& p, const Eigen::MatrixXd& frame) const;
  Eigen::MatrixXd frame_hess(const Eigen::VectorXd& p, const Eigen::MatrixXd& frame) const;

  SphereField& operator+=(const SphereField& other);
  SphereField& operator*=(double s);
  friend SphereField operator+(SphereField a, const SphereField& b) { return a += b; }
  friend SphereField operator*(double s, SphereField a) { return a *= s; }
  void add_constant(double c) { ambient_.add_constant(c); }

 private:
  PolyField ambient_;
};

}  // namespace sigmaforge::fields
