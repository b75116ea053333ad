#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary.  Nothing here calls the elliptic-integral code.
//
// The unduloid meridian with neck a and bulge c obeys the first integral
//   z / sqrt(1 + z_x^2) = (z^2 + a c) / (a + c),
// so that along each monotone half-period
//   dx/dz = (z^2 + a c) / sqrt((z - a)(c - z)(z + a)(z + c)),
//   ds/dz = (a + c) z   / sqrt((z - a)(c - z)(z + a)(z + c)).
// Areas, volumes and abscissae follow by tanh-sinh quadrature, which copes
// with the inverse-square-root endpoint singularities.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

namespace oracle {

inline const double pi = boost::math::constants::pi<double>();

/// Integral over z in [lo, c] on one monotone half of the meridian.
template <class F>
double half_integral(double a, double c, double lo, F&& f) {
  boost::math::quadrature::tanh_sinh<double> ts;
  // tanh_sinh passes zc, the signed distance to the nearer endpoint
  // (negative near lo, positive near c); use it where z - a or c - z would
  // lose digits.
  auto g = [&](double z, double zc) {
    const double bottom = (zc < 0 && lo == a) ? -zc : z - a;
    const double top = zc > 0 ? zc : c - z;
    // Factor the root so that tiny z (a = 0) does not underflow to 0/0.
    return f(z) / (std::sqrt(bottom) * std::sqrt(z + a) * std::sqrt(top * (z + c)));
  };
  return ts.integrate(g, lo, c);
}

/// x-distance from the bulge down to height z on the meridian.
inline double x_from_bulge(double a, double c, double z) {
  return half_integral(a, c, z, [&](double s) { return s * s + a * c; });
}

/// Lateral area of the meridian piece z in [lo, c] on both sides of the bulge.
inline double symmetric_area(double a, double c, double lo) {
  return 2 * 2 * pi * half_integral(a, c, lo, [&](double z) { return (a + c) * z * z; });
}

/// Volume enclosed by the same piece (disks of radius z).
inline double symmetric_volume(double a, double c, double lo) {
  return 2 * pi * half_integral(a, c, lo, [&](double z) { return z * z * (z * z + a * c); });
}

inline double period_area(double a, double c) { return symmetric_area(a, c, a); }
inline double period_volume(double a, double c) { return symmetric_volume(a, c, a); }

/// Case-1 two-charge drop assembled from the first-integral quadratures: the
/// meridian between the two tangency points at height h, plus the charge
/// ball caps sticking out beyond the contact planes.
struct Case1Drop {
  double a, c, area, volume, L;
};

inline Case1Drop case1_drop(double c, double h, double eps) {
  const double a = h * h * (c - eps) / (c * eps - h * h);
  const double d = std::sqrt(eps * eps - h * h);
  const double cap_volume = pi / 3 * (eps - d) * (eps - d) * (2 * eps + d);
  const double cap_area = 2 * pi * eps * (eps - d);
  Case1Drop out;
  out.a = a;
  out.c = c;
  out.area = symmetric_area(a, c, h) + 2 * cap_area;
  out.volume = symmetric_volume(a, c, h) + 2 * cap_volume;
  out.L = 2 * (x_from_bulge(a, c, h) - d);
  return out;
}

/// Case-1 energy at contact height h with c fixed by the unit-ball volume,
/// solved by plain bisection on the quadrature volume.
struct Case1Energy {
  double c, perimeter, coulomb, total, L;
};

inline Case1Energy case1_energy(double h, double eps, double gamma) {
  const double target = 4 * pi / 3;
  auto residual = [&](double c) { return case1_drop(c, h, eps).volume - target; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo, hi] =
      boost::math::tools::bisect(residual, 0.9, 1.01, tol, iters);
  const double c = (lo + hi) / 2;
  const Case1Drop drop = case1_drop(c, h, eps);
  const double coulomb = gamma * eps * eps * eps / drop.L;
  return {c, drop.area, coulomb, drop.area + coulomb, drop.L};
}

// ---------------------------------------------------------------------------
// Many-charge brute force: plain fixed-step gradient descent of the Coulomb
// sum on the sphere of radius rho (every minimizer lies on the boundary),
// from many random starts.

inline double inverse_sum(const std::vector<Eigen::Vector3d>& x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += 1 / (x[i] - x[j]).norm();
  return s;
}

inline double brute_force_min(std::size_t n, double rho, int restarts,
                              std::uint64_t seed, int max_steps = 4000) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector3d> x(n), g(n);
  for (int r = 0; r < restarts; ++r) {
    for (auto& p : x) {
      p = Eigen::Vector3d(normal(gen), normal(gen), normal(gen));
      p *= rho / p.norm();
    }
    // Step scaled with the typical nearest-neighbour distance.
    const double step = 0.05 * rho * rho * rho / double(n);
    for (int it = 0; it < max_steps; ++it) {
      for (auto& v : g) v.setZero();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const Eigen::Vector3d d = x[i] - x[j];
          const double r = d.norm();
          const Eigen::Vector3d f = d / (r * r * r);
          g[i] -= f;
          g[j] += f;
        }
      double tangential = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d u = x[i] / x[i].norm();
        const Eigen::Vector3d t = g[i] - g[i].dot(u) * u;
        tangential = std::max(tangential, t.norm());
        x[i] -= step * t;
        x[i] *= rho / x[i].norm();
      }
      if (tangential < 1e-10) break;
    }
    best = std::min(best, inverse_sum(x));
  }
  return best;
}

}  // namespace oracle
