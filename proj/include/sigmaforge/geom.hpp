#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "sigmaforge/fields.hpp"
#include "sigmaforge/tensor_point.hpp"

namespace sigmaforge::geom {

enum class BackendKind { Euclidean, Torus, Sphere };

// Model geometry carrying a density. Flat backends use the metric
// g = scale * delta on R^n or [0, 2pi)^n; the sphere backend is the unit
// round S^n in R^{n+1} and carries no scale freedom.
struct Backend {
  BackendKind kind;
  int n;
  double scale;

  static Backend euclidean(int n, double scale = 1.0);
  static Backend torus(int n, double scale = 1.0);
  static Backend sphere(int n);

  int ambient_dim() const { return kind == BackendKind::Sphere ? n + 1 : n; }
  bool flat() const { return kind != BackendKind::Sphere; }
};

// Multiplies the flat metric by c. The sphere has no scale parameter, so any
// c != 1 is rejected there.
Backend scale_metric(const Backend& b, double c);

using Field = std::variant<fields::PolyField, fields::TrigField, fields::SphereField>;

// Each backend pairs with exactly one field type and dimension.
void check_pairing(const Backend& b, const Field& f);

double field_value(const Field& f, const Eigen::VectorXd& x);
// Gradient and Hessian of a scalar in the orthonormal frame of the backend.
Eigen::VectorXd field_frame_grad(const Backend& b, const Field& f, const Eigen::VectorXd& x);
Eigen::MatrixXd field_frame_hess(const Backend& b, const Field& f, const Eigen::VectorXd& x);

// base + t * dir; both fields must live on the same backend type.
Field field_axpy(Field base, double t, const Field& dir);
Field field_add_constant(Field f, double c);

// Deterministic orthonormal tangent frame at a point of S^n, as the columns
// of an (n+1) x n matrix: the Householder complement of p.
Eigen::MatrixXd sphere_frame(const Eigen::VectorXd& p);

// Nodes and weights realizing integration against the Riemannian volume:
// sum_i w_i f(x_i) ~ int f dvol_g. Euclidean rules are Gauss-Hermite adapted
// to the positive definite quadratic dominant part of phi (exact for
// polynomial * exp(-quadratic) integrands up to degree 2*order - 1 per axis),
// torus rules are uniform grids (exact below Nyquist, spectrally accurate for
// smooth periodic integrands), sphere rules combine Gauss-Jacobi colatitude
// nodes with a uniform azimuth (exact for polynomial restrictions of degree
// up to 2*order - 1).
struct QuadratureRule {
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;
};
QuadratureRule quadrature(const Backend& b, const Field& phi, int order);

// Pointwise weighted curvature data in the orthonormal frame at x: the
// modified tensor ric + hess(phi) - lambda g, the scalar counterpart of the
// weight, and (for the sphere) the background curvature operator. Flat
// backends have exactly vanishing curvature three-tensor.
tensor::PointCurvature point_curvature(const Backend& b, const Field& phi,
                                       const Eigen::VectorXd& x, double lambda);

// First-derivative data of the modified tensor on flat backends, where the
// frame is parallel and covariant derivatives reduce to scaled coordinate
// ones. dric[a](i, j) is the frame derivative of ric(i, j) along e_a.
struct CurvJet {
  double Y;
  Eigen::VectorXd dY;
  Eigen::MatrixXd ric;
  std::vector<Eigen::MatrixXd> dric;
  Eigen::VectorXd dphi;
};
CurvJet curvature_jet(const Backend& b, const Field& phi, const Eigen::VectorXd& x,
                      double lambda);

namespace detail {
// Golub-Welsch rules, exposed for direct testing.
void gauss_hermite(int q, std::vector<double>& nodes, std::vector<double>& weights);
void gauss_jacobi(int q, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights);
}  // namespace detail

}  // namespace sigmaforge::geom
