#pragma once

/**
 * \file charges.hpp
 * \brief Many-charge configurations inside a spherical drop.
 *
 * N charges of radius eps sit inside a host ball of radius R.  Admissible
 * configurations keep every charge ball inside the host (|x_i - center| <=
 * R - eps) and the charge balls pairwise disjoint (|x_i - x_j| >= 2 eps,
 * closed constraint).  The Coulomb energy is gamma eps^3 sum_{i<j} 1/r_ij.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/math/constants/constants.hpp>
#include <fmt/format.h>

#include "charged_drop/error.hpp"
#include "charged_drop/rng.hpp"

namespace charged_drop::charges {

using Vec3 = Eigen::Vector3d;

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

struct ChargeConfig {
  std::vector<Vec3> centers;
  double eps = 0.0;
  Ball host{};

  std::size_t size() const { return centers.size(); }
};

/// Kepler packing density; n balls of radius eps are declared packable into
/// a ball of radius R when n eps^3 <= density * R^3.
inline constexpr double kPackingDensity = 0.74048048969306104;

inline bool packing_feasible(std::size_t n, double eps, double R) {
  return R > eps && double(n) * eps * eps * eps <= kPackingDensity * R * R * R;
}

/// sum_{i<j} 1 / |x_i - x_j|
inline double inverse_distance_sum(const std::vector<Vec3>& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double r = (x[i] - x[j]).norm();
      if (!(r > 0))
        throw DomainError(
            fmt::format("coincident charges {} and {}", i, j));
      sum += 1.0 / r;
    }
  return sum;
}

inline double coulomb_energy(const ChargeConfig& config, double gamma) {
  const double e3 = config.eps * config.eps * config.eps;
  return gamma * e3 * inverse_distance_sum(config.centers);
}

struct Violation {
  enum class Kind { Overlap, Containment };
  Kind kind = Kind::Overlap;
  std::size_t i = 0;
  std::size_t j = 0;  ///< second charge for Overlap; equal to i otherwise
  double margin = 0;  ///< how far the constraint is violated (positive)

  std::string describe() const {
    if (kind == Kind::Overlap)
      return fmt::format("charges {} and {} overlap by {:.6g}", i, j, margin);
    return fmt::format("charge {} leaves the host by {:.6g}", i, margin);
  }
};

/// Constraint violations; empty iff the configuration is admissible.
inline std::vector<Violation> validate(const ChargeConfig& config) {
  std::vector<Violation> out;
  const double limit = config.host.radius - config.eps;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const double r = (config.centers[i] - config.host.center).norm();
    if (r > limit)
      out.push_back({Violation::Kind::Containment, i, i, r - limit});
  }
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j) {
      const double r = (config.centers[i] - config.centers[j]).norm();
      if (r < 2 * config.eps)
        out.push_back({Violation::Kind::Overlap, i, j, 2 * config.eps - r});
    }
  return out;
}

struct OptimizeOptions {
  int restarts = 8;
  double tol = 1e-9;
  int max_iterations = 50000;
};

/// Diagnostics of a single descent run.
struct DescentReport {
  double energy = 0;  ///< sum of inverse distances
  double projected_gradient = 0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline void project(std::vector<Vec3>& x, const Vec3& center, double rho) {
  for (auto& p : x) {
    Vec3 d = p - center;
    const double r = d.norm();
    if (r <= rho) continue;
    d *= rho / r;
    // Rounding may leave the point an ulp outside the closed ball.
    while (d.norm() > rho) d *= 1 - std::numeric_limits<double>::epsilon();
    p = center + d;
  }
}

/// E(y) - E(x) for E = sum_{i<j} 1/r_ij, summed pairwise as
/// (r_x - r_y) / (r_x r_y) so that small changes are not lost against the
/// magnitude of E.  Also returns the gradient at y.
inline double energy_change_and_gradient(const std::vector<Vec3>& x,
                                         const std::vector<Vec3>& y,
                                         std::vector<Vec3>& grad_y) {
  grad_y.assign(y.size(), Vec3::Zero());
  double change = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      const Vec3 dx = x[i] - x[j];
      const Vec3 dy = y[i] - y[j];
      const double rx = dx.norm();
      const double ry = dy.norm();
      // r_x^2 - r_y^2 = (dx - dy) . (dx + dy)
      const double diff_sq = (dx - dy).dot(dx + dy);
      change += diff_sq / ((rx + ry) * rx * ry);
      const double inv = 1.0 / ry;
      const Vec3 g = dy * (inv * inv * inv);
      grad_y[i] -= g;
      grad_y[j] += g;
    }
  return change;
}

inline double energy_and_gradient(const std::vector<Vec3>& x,
                                  std::vector<Vec3>& grad) {
  grad.assign(x.size(), Vec3::Zero());
  double e = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const Vec3 d = x[i] - x[j];
      const double r2 = d.squaredNorm();
      const double inv = 1.0 / std::sqrt(r2);
      e += inv;
      const Vec3 g = d * (inv * inv * inv);
      grad[i] -= g;
      grad[j] += g;
    }
  return e;
}

/// -grad projected onto the tangent cone of the ball constraint: points on
/// the boundary lose the outward component of the force.
inline void descent_direction(const std::vector<Vec3>& x,
                              const std::vector<Vec3>& grad,
                              const Vec3& center, double rho,
                              std::vector<Vec3>& dir) {
  dir.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vec3 v = -grad[i];
    const Vec3 d = x[i] - center;
    const double r = d.norm();
    if (r >= rho * (1 - 1e-12) && r > 0) {
      const Vec3 n = d / r;
      const double outward = v.dot(n);
      if (outward > 0) v -= outward * n;
    }
    dir[i] = v;
  }
}

inline double projected_gradient_norm(const std::vector<Vec3>& x,
                                      const std::vector<Vec3>& grad,
                                      const Vec3& center, double rho) {
  std::vector<Vec3> dir;
  descent_direction(x, grad, center, rho, dir);
  double sum = 0;
  for (const auto& v : dir) sum += v.squaredNorm();
  return std::sqrt(sum);
}

inline double dot(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

}  // namespace detail

/// Seeded start: uniform in the ball of radius rho, rejecting points closer
/// than 2 eps to an earlier one.
inline std::vector<Vec3> random_start(std::size_t n, double eps,
                                      const Ball& host, std::uint64_t key) {
  CounterRng rng(key);
  const double rho = host.radius - eps;
  std::vector<Vec3> out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000 * n + 100000)
      throw InfeasibleError("random_start: rejection sampling did not finish");
    Vec3 p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (p.squaredNorm() > 1) continue;
    p = host.center + rho * p;
    bool clear = true;
    for (const auto& q : out)
      if ((p - q).norm() < 2 * eps) {
        clear = false;
        break;
      }
    if (clear) out.push_back(p);
  }
  return out;
}

/// Projected gradient descent on sum 1/r_ij over the ball of radius
/// R - eps.  The search direction is the force projected onto the tangent
/// cone, so charges pressed against the boundary slide along it; the
/// Barzilai-Borwein step is built from changes of that direction, which keeps
/// the large outward force out of the curvature estimate.  Armijo
/// backtracking guarantees that accepted iterates never increase the energy.
inline DescentReport descend(std::vector<Vec3>& x, const Ball& host,
                             double eps, const OptimizeOptions& opts) {
  const double rho = host.radius - eps;
  detail::project(x, host.center, rho);
  DescentReport rep;
  if (x.size() < 2) {
    rep.converged = true;
    return rep;
  }
  std::vector<Vec3> g, dir, trial, g_trial, dir_trial;
  double e = detail::energy_and_gradient(x, g);
  detail::descent_direction(x, g, host.center, rho, dir);
  double step = 1e-3 / std::max(1e-300, std::sqrt(detail::dot(dir, dir)));
  for (rep.iterations = 0; rep.iterations < opts.max_iterations;
       ++rep.iterations) {
    rep.projected_gradient = std::sqrt(detail::dot(dir, dir));
    if (rep.projected_gradient <= opts.tol) {
      rep.converged = true;
      break;
    }
    bool accepted = false;
    double e_trial = 0;
    const double noise = 16 * std::numeric_limits<double>::epsilon() * e;
    for (int halvings = 0; halvings < 80; ++halvings) {
      trial = x;
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] += step * dir[i];
      detail::project(trial, host.center, rho);
      double descent = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        descent += g[i].dot(trial[i] - x[i]);
      const double change =
          detail::energy_change_and_gradient(x, trial, g_trial);
      e_trial = e + change;
      if (descent < 0 && change <= 1e-4 * descent) {
        accepted = true;
      } else if (change <= noise) {
        // Projection rounds every boundary charge radially by about an ulp;
        // since the outward forces sum to E/rho this perturbs E by roughly
        // eps_mach * E and hides the true decrease close to the minimum.
        // There the step is judged by the projected gradient instead.
        detail::descent_direction(trial, g_trial, host.center, rho,
                                  dir_trial);
        accepted = detail::dot(dir_trial, dir_trial) <
                   rep.projected_gradient * rep.projected_gradient;
      }
      if (accepted) break;
      step /= 2;
    }
    if (!accepted) break;  // stalled at roundoff level

    detail::descent_direction(trial, g_trial, host.center, rho, dir_trial);
    double ss = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Vec3 s = trial[i] - x[i];
      const Vec3 y = dir[i] - dir_trial[i];
      ss += s.squaredNorm();
      sy += s.dot(y);
    }
    x.swap(trial);
    g.swap(g_trial);
    dir.swap(dir_trial);
    e = e_trial;
    step = sy > 0 ? ss / sy : 2 * step;
  }
  rep.energy = detail::energy_and_gradient(x, g);
  if (!rep.converged) {
    rep.projected_gradient =
        detail::projected_gradient_norm(x, g, host.center, rho);
    rep.converged = rep.projected_gradient <= opts.tol;
  }
  return rep;
}

/// Multi-start minimization of the Coulomb energy of n charges inside a ball
/// of radius R centered at the origin.  The result does not depend on gamma.
inline ChargeConfig optimize(std::size_t n, double eps, double R,
                             std::uint64_t seed, const OptimizeOptions& opts = {},
                             DescentReport* report = nullptr) {
  if (n < 1) throw DomainError("optimize: need n >= 1");
  if (!(eps > 0 && R > 0)) throw DomainError("optimize: need eps, R > 0");
  if (!packing_feasible(n, eps, R))
    throw InfeasibleError(
        fmt::format("optimize: {} charges of radius {} do not pack into a "
                    "ball of radius {}",
                    n, eps, R));
  if (opts.restarts < 1) throw DomainError("optimize: need restarts >= 1");

  ChargeConfig best;
  best.eps = eps;
  best.host = Ball{Vec3::Zero(), R};
  DescentReport best_report;
  best_report.energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    auto x = random_start(n, eps, best.host,
                          CounterRng::derive_key(seed, std::uint64_t(r)));
    const DescentReport rep = descend(x, best.host, eps, opts);
    if (rep.energy < best_report.energy) {
      best_report = rep;
      best.centers = std::move(x);
    }
  }
  if (report) *report = best_report;
  return best;
}

struct EvaporationMargin {
  double min_margin = 0;
  std::size_t argmin = 0;
};

/// Energy change 8 pi eps^2 - gamma eps^3 sum_{j != i} 1/r_ij of detaching
/// charge i to infinity, minimized over i.  Negative means unstable.
inline EvaporationMargin evaporation_margin(const ChargeConfig& config,
                                            double gamma) {
  const double pi = boost::math::constants::pi<double>();
  const double eps = config.eps;
  EvaporationMargin out;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < config.size(); ++j)
      if (j != i) s += 1.0 / (config.centers[i] - config.centers[j]).norm();
    const double m = 8 * pi * eps * eps - gamma * eps * eps * eps * s;
    if (m < out.min_margin) {
      out.min_margin = m;
      out.argmin = i;
    }
  }
  return out;
}

/// (2 / N^2) sum_{i<j} 1/r_ij, the discrete Coulomb energy of the empirical
/// measure.
inline double scaled_riesz(const ChargeConfig& config) {
  const std::size_t n = config.size();
  if (n < 2) throw DomainError("scaled_riesz: need N >= 2");
  return 2.0 / (double(n) * double(n)) * inverse_distance_sum(config.centers);
}

/// Fixed family of 64 spherical caps: 16 Fibonacci directions times four
/// half-angles (30, 60, 90, 120 degrees).
struct Cap {
  Vec3 axis;
  double cos_half_angle;
  double area_fraction;
};

inline const std::vector<Cap>& reference_caps() {
  static const std::vector<Cap> caps = [] {
    const double pi = boost::math::constants::pi<double>();
    const double golden_angle = pi * (3 - std::sqrt(5.0));
    std::vector<Cap> out;
    for (int i = 0; i < 16; ++i) {
      const double z = 1 - (2 * i + 1) / 16.0;
      const double r = std::sqrt(1 - z * z);
      const Vec3 axis(r * std::cos(golden_angle * i),
                      r * std::sin(golden_angle * i), z);
      for (int k = 1; k <= 4; ++k) {
        const double cos_theta = std::cos(k * pi / 6);
        out.push_back({axis, cos_theta, (1 - cos_theta) / 2});
      }
    }
    return out;
  }();
  return caps;
}

struct UniformityStats {
  double shell_fraction = 0;
  double riesz_gap = 0;
  double cap_discrepancy = 0;
};

inline UniformityStats uniformity_stats(const ChargeConfig& config,
                                        double shell_delta) {
  const std::size_t n = config.size();
  if (n < 2) throw DomainError("uniformity_stats: need N >= 2");
  UniformityStats out;
  const double shell = config.host.radius - config.eps - shell_delta;
  std::size_t on_shell = 0;
  std::vector<Vec3> directions;
  directions.reserve(n);
  for (const auto& x : config.centers) {
    const Vec3 d = x - config.host.center;
    const double r = d.norm();
    if (r >= shell) ++on_shell;
    directions.push_back(r > 0 ? Vec3(d / r) : Vec3::Zero());
  }
  out.shell_fraction = double(on_shell) / double(n);
  out.riesz_gap = std::abs(scaled_riesz(config) - 1);
  for (const Cap& cap : reference_caps()) {
    std::size_t inside = 0;
    for (const auto& d : directions)
      if (d.squaredNorm() > 0 && d.dot(cap.axis) >= cap.cos_half_angle) ++inside;
    out.cap_discrepancy =
        std::max(out.cap_discrepancy,
                 std::abs(double(inside) / double(n) - cap.area_fraction));
  }
  return out;
}

/// Energy of the competitor with one ball of volume 4pi/3 (1 - (n-1) eps^3)
/// carrying one charge and n - 1 charges evaporated in their own balls.
inline double upper_bound_energy(std::size_t n, double eps) {
  if (n < 1) throw DomainError("upper_bound_energy: need n >= 1");
  const double pi = boost::math::constants::pi<double>();
  const double rest = double(n - 1) * eps * eps * eps;
  if (!(rest < 1))
    throw DomainError("upper_bound_energy: evaporated charges exceed volume");
  const double r1_sq = std::exp(2.0 / 3.0 * std::log1p(-rest));
  return 4 * pi * (r1_sq + eps * eps * double(n - 1));
}

}  // namespace charged_drop::charges
