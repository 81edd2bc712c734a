#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

#include "seamkit/error.hpp"

namespace seamkit {

/// Relative singular-value cutoff of the pseudoinverse.
inline constexpr double kPinvCutoff = 1e-10;

/// Design matrix of monomials (x - center)^d, d = 0..degree.
inline Eigen::MatrixXd vandermonde(std::span<const double> xs, int degree, double center) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(xs.size()), degree + 1);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const double t = xs[static_cast<std::size_t>(i)] - center;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      v(i, d) = p;
      p *= t;
    }
  }
  return v;
}

/// Minimal-norm least-squares polynomial coefficients via the SVD-based
/// Moore-Penrose pseudoinverse. Coefficients are in the centred basis.
inline std::vector<double> fit_polynomial(std::span<const double> xs, std::span<const double> ys,
                                          int degree, double center) {
  if (xs.size() != ys.size() || xs.empty())
    throw ShapeError("polynomial fit needs equally sized, non-empty samples");
  if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
  const Eigen::MatrixXd v = vandermonde(xs, degree, center);
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));

  Eigen::BDCSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::VectorXd uty = svd.matrixU().transpose() * y;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    uty(i) = (smax > 0.0 && s(i) > kPinvCutoff * smax) ? uty(i) / s(i) : 0.0;
  const Eigen::VectorXd coef = svd.matrixV() * uty;

  std::vector<double> out(coef.data(), coef.data() + coef.size());
  for (double c : out)
    if (!std::isfinite(c)) throw NumericError("non-finite polynomial coefficient");
  return out;
}

/// Horner evaluation in the centred basis.
inline double eval_polynomial(std::span<const double> coef, double x, double center) {
  const double t = x - center;
  double acc = 0.0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace seamkit
