#pragma once

#include <array>
#include <cmath>
#include <deque>
#include <vector>

#include "seamkit/image.hpp"

namespace seamkit {

enum class SolverMethod { ConjugateGradient, GaussSeidel };

struct SolverParams {
  double tolerance = 1e-6;
  int max_iterations = 10000;
  SolverMethod method = SolverMethod::ConjugateGradient;

  void validate() const {
    if (!(tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("solver max_iterations must be >= 1");
  }
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Sparse 5-point system over the pixels of a region. Image borders are
/// Neumann (missing neighbours drop out); non-region neighbours are
/// Dirichlet and move to the right-hand side.
class LaplaceSystem {
 public:
  LaplaceSystem(const Mask& region) : height_(region.height()), width_(region.width()) {
    require_binary(region, "laplace region");
    index_.assign(region.size(), -1);
    for (std::size_t i = 0; i < region.size(); ++i) {
      if (region[i] == 1.0) {
        index_[i] = static_cast<int>(pixels_.size());
        pixels_.push_back(i);
      }
    }
    diag_.resize(pixels_.size());
    neighbors_.resize(pixels_.size());
    dirichlet_.resize(pixels_.size());
    for (std::size_t k = 0; k < pixels_.size(); ++k) {
      const int y = static_cast<int>(pixels_[k] / width_);
      const int x = static_cast<int>(pixels_[k] % width_);
      for (const auto& [dy, dx] : kOffsets) {
        const int yy = y + dy, xx = x + dx;
        if (yy < 0 || yy >= height_ || xx < 0 || xx >= width_) continue;
        const std::size_t q = static_cast<std::size_t>(yy) * width_ + xx;
        diag_[k] += 1.0;
        if (index_[q] >= 0) neighbors_[k].push_back(index_[q]);
        else dirichlet_[k].push_back(q);
      }
    }
    check_anchored();
  }

  std::size_t unknowns() const { return pixels_.size(); }
  const std::vector<std::size_t>& pixels() const { return pixels_; }
  int index_of(std::size_t pixel) const { return index_[pixel]; }
  double diagonal(std::size_t k) const { return diag_[k]; }
  const std::vector<int>& region_neighbors(std::size_t k) const { return neighbors_[k]; }
  const std::vector<std::size_t>& boundary_neighbors(std::size_t k) const { return dirichlet_[k]; }

  /// In-image 4-neighbours of a region pixel, as flat pixel indices.
  std::vector<std::size_t> all_neighbors(std::size_t k) const {
    std::vector<std::size_t> out;
    for (int j : neighbors_[k]) out.push_back(pixels_[static_cast<std::size_t>(j)]);
    out.insert(out.end(), dirichlet_[k].begin(), dirichlet_[k].end());
    return out;
  }

  void multiply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      double v = diag_[k] * u[k];
      for (int j : neighbors_[k]) v -= u[static_cast<std::size_t>(j)];
      out[k] = v;
    }
  }

  /// Solves A u = b starting from u; throws NumericError on non-convergence.
  SolveStats solve(const std::vector<double>& b, std::vector<double>& u, const SolverParams& params) const {
    params.validate();
    return params.method == SolverMethod::GaussSeidel ? gauss_seidel(b, u, params) : conjugate_gradient(b, u, params);
  }

 private:
  static constexpr std::array<std::pair<int, int>, 4> kOffsets{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

  static double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }

  void check_anchored() const {
    // every connected component needs at least one Dirichlet neighbour
    std::vector<char> seen(pixels_.size(), 0);
    for (std::size_t start = 0; start < pixels_.size(); ++start) {
      if (seen[start]) continue;
      bool anchored = false;
      std::deque<std::size_t> queue{start};
      seen[start] = 1;
      while (!queue.empty()) {
        const std::size_t k = queue.front();
        queue.pop_front();
        anchored = anchored || !dirichlet_[k].empty();
        for (int j : neighbors_[k]) {
          if (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = 1;
            queue.push_back(static_cast<std::size_t>(j));
          }
        }
      }
      if (!anchored) throw PreconditionError("region component has no boundary pixel outside the region");
    }
  }

  SolveStats conjugate_gradient(const std::vector<double>& b, std::vector<double>& u,
                                const SolverParams& params) const {
    SolveStats st;
    const double bnorm = norm(b);
    if (bnorm == 0.0) {
      std::fill(u.begin(), u.end(), 0.0);
      return st;
    }
    std::vector<double> r(b.size()), p, ap;
    multiply(u, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    p = r;
    double rr = 0.0;
    for (double v : r) rr += v * v;
    st.relative_residual = std::sqrt(rr) / bnorm;
    while (st.relative_residual > params.tolerance) {
      if (st.iterations >= params.max_iterations)
        throw NumericError("conjugate gradient did not converge",
                           "residual=" + std::to_string(st.relative_residual));
      multiply(p, ap);
      double pap = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) pap += p[i] * ap[i];
      const double alpha = rr / pap;
      double rr_next = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
        rr_next += r[i] * r[i];
      }
      const double beta = rr_next / rr;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
      rr = rr_next;
      ++st.iterations;
      // the recursive residual drifts; confirm with the true one before stopping
      if (std::sqrt(rr) / bnorm <= params.tolerance) {
        std::vector<double> au;
        multiply(u, au);
        double t = 0.0;
        for (std::size_t i = 0; i < au.size(); ++i) t += (b[i] - au[i]) * (b[i] - au[i]);
        st.relative_residual = std::sqrt(t) / bnorm;
      } else {
        st.relative_residual = std::sqrt(rr) / bnorm;
      }
      if (!std::isfinite(st.relative_residual)) throw NumericError("conjugate gradient diverged");
    }
    return st;
  }

  SolveStats gauss_seidel(const std::vector<double>& b, std::vector<double>& u, const SolverParams& params) const {
    SolveStats st;
    const double bnorm = norm(b);
    if (bnorm == 0.0) {
      std::fill(u.begin(), u.end(), 0.0);
      return st;
    }
    std::vector<double> au;
    auto residual = [&] {
      multiply(u, au);
      double t = 0.0;
      for (std::size_t i = 0; i < au.size(); ++i) t += (b[i] - au[i]) * (b[i] - au[i]);
      return std::sqrt(t) / bnorm;
    };
    st.relative_residual = residual();
    while (st.relative_residual > params.tolerance) {
      if (st.iterations >= params.max_iterations)
        throw NumericError("Gauss-Seidel did not converge", "residual=" + std::to_string(st.relative_residual));
      for (std::size_t k = 0; k < u.size(); ++k) {
        double v = b[k];
        for (int j : neighbors_[k]) v += u[static_cast<std::size_t>(j)];
        u[k] = v / diag_[k];
      }
      ++st.iterations;
      st.relative_residual = residual();
    }
    return st;
  }

  int height_;
  int width_;
  std::vector<int> index_;
  std::vector<std::size_t> pixels_;
  std::vector<double> diag_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<std::size_t>> dirichlet_;
};

struct BlendResult {
  Image image;
  std::array<SolveStats, 3> stats{};
};

namespace detail {

/// Shared driver: per channel, b_k = sum over in-image neighbours q of
/// guidance (src[p] - src[q]) plus dst[q] for Dirichlet neighbours.
inline BlendResult solve_guided(const Image* src, const Image& dst, const Mask& region, const SolverParams& params) {
  BlendResult res{dst, {}};
  if (support_size(region) == 0) return res;
  const LaplaceSystem sys(region);
  const std::size_t n = sys.unknowns();
  std::vector<double> b(n), u(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t p = sys.pixels()[k];
      double v = 0.0;
      for (std::size_t q : sys.boundary_neighbors(k)) v += dst[3 * q + c];
      if (src) {
        for (std::size_t q : sys.all_neighbors(k)) v += (*src)[3 * p + c] - (*src)[3 * q + c];
      }
      b[k] = v;
      u[k] = dst[3 * p + c];
    }
    res.stats[c] = sys.solve(b, u, params);
    for (std::size_t k = 0; k < n; ++k) res.image[3 * sys.pixels()[k] + c] = u[k];
  }
  return res;
}

}  // namespace detail

/// Poisson blending without the final clamp: Laplacian of the result
/// matches src inside the mask, values match dst on its boundary.
inline BlendResult poisson_solve(const Image& src, const Image& dst, const Mask& mask, const SolverParams& params = {}) {
  require_same_shape(src, dst, "poisson_blend images");
  require_same_shape(src, mask, "poisson_blend mask");
  require_binary(mask, "poisson_blend");
  return detail::solve_guided(&src, dst, mask, params);
}

inline Image poisson_blend(const Image& src, const Image& dst, const Mask& mask, const SolverParams& params = {}) {
  return clamped(poisson_solve(src, dst, mask, params).image);
}

/// Laplace fill of `region` from its surroundings; other pixels untouched.
inline BlendResult harmonic_fill_detailed(const Image& img, const Mask& region, const SolverParams& params = {}) {
  require_same_shape(img, region, "harmonic_fill region");
  require_binary(region, "harmonic_fill");
  if (support_size(region) == region.size()) throw PreconditionError("harmonic fill region covers the whole image");
  return detail::solve_guided(nullptr, img, region, params);
}

inline Image harmonic_fill(const Image& img, const Mask& region, const SolverParams& params = {}) {
  return harmonic_fill_detailed(img, region, params).image;
}

}  // namespace seamkit
