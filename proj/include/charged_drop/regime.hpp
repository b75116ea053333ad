#pragma once

/**
 * \file regime.hpp
 * \brief Existence / non-existence classification over (eps, gamma, N).
 *
 * For N >= 3 the classifier only applies the explicit windows
 *
 *   Exists     if gamma > gamma0 and N < C / (eps gamma),
 *   NotExists  if gamma > gamma0 and C / (eps gamma) < N < delta0 / eps^2,
 *
 * and answers Unknown everywhere else.  N = 2 is decided numerically by the
 * exact two-charge solver, N = 1 is always a ball.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "charged_drop/charges.hpp"
#include "charged_drop/error.hpp"
#include "charged_drop/two_charge.hpp"

namespace charged_drop::regime {

enum class Label { Exists, NotExists, Unknown, Infeasible };

inline const char* to_string(Label label) {
  switch (label) {
    case Label::Exists: return "Exists";
    case Label::NotExists: return "NotExists";
    case Label::Unknown: return "Unknown";
    case Label::Infeasible: return "Infeasible";
  }
  return "?";
}

struct ClassifierConstants {
  double C_threshold = 32 * boost::math::constants::pi<double>();
  double gamma0 = 64 * boost::math::constants::pi<double>();
  /// Placeholder: the non-existence window N < delta0 / eps^2 comes with a
  /// constant that depends on gamma in an unspecified way.
  double delta0 = 1e-2;

  void check() const {
    if (!(C_threshold > 0 && gamma0 > 0 && delta0 > 0))
      throw DomainError("classifier constants must be positive");
  }
};

struct Witness {
  double split_energy{};
  double classical_estimate{};
};

struct RegimeCell {
  double eps{};
  double gamma{};
  std::size_t n{};
  Label label = Label::Unknown;
  std::optional<Witness> witness;

  auto key() const { return std::tie(eps, gamma, n); }
};

/// Ball with n charges spread on its surface: 4 pi + gamma eps^3 n^2 /
/// (2 (1 - eps)), the leading-order energy of the uniform configuration.
inline double classical_estimate(std::size_t n, double eps, double gamma) {
  const double pi = boost::math::constants::pi<double>();
  const double nn = double(n);
  return 4 * pi + gamma * eps * eps * eps * nn * nn / (2 * (1 - eps));
}

inline RegimeCell classify(double eps, double gamma, std::size_t n,
                           const ClassifierConstants& k = {},
                           const two_charge::Options& two_opts = {}) {
  if (!(eps > 0 && gamma > 0 && n >= 1))
    throw DomainError("classify: need eps > 0, gamma > 0, n >= 1");
  k.check();
  const double pi = boost::math::constants::pi<double>();
  RegimeCell cell{eps, gamma, n, Label::Unknown, std::nullopt};

  if (!charges::packing_feasible(n, eps, 1.0)) {
    cell.label = Label::Infeasible;
    return cell;
  }
  if (n == 1) {
    cell.label = Label::Exists;
    cell.witness = Witness{4 * pi, 4 * pi};
    return cell;
  }
  if (n == 2) {
    if (eps > two_opts.eps_max) return cell;  // outside the solver's range
    const auto sol = two_charge::minimize(eps, gamma, two_opts);
    cell.label = sol.exists ? Label::Exists : Label::NotExists;
    cell.witness = Witness{sol.split_energy, sol.energy.total};
    return cell;
  }

  cell.witness = Witness{charges::upper_bound_energy(n, eps),
                         classical_estimate(n, eps, gamma)};
  if (!(gamma > k.gamma0)) return cell;
  const double nn = double(n);
  const double divide = k.C_threshold / (eps * gamma);
  if (nn < divide)
    cell.label = Label::Exists;
  else if (nn > divide && nn < k.delta0 / (eps * eps))
    cell.label = Label::NotExists;
  return cell;
}

struct Grid {
  std::vector<double> eps;
  std::vector<double> gamma;
  std::vector<std::size_t> n;
};

/// Cartesian product of the grid, rows sorted by (eps, gamma, n).
inline std::vector<RegimeCell> sweep(const Grid& grid,
                                     const ClassifierConstants& k = {},
                                     const two_charge::Options& two_opts = {}) {
  if (grid.eps.empty() || grid.gamma.empty() || grid.n.empty())
    throw DomainError("sweep: empty grid");
  std::vector<RegimeCell> out;
  out.reserve(grid.eps.size() * grid.gamma.size() * grid.n.size());
  for (double e : grid.eps)
    for (double g : grid.gamma)
      for (std::size_t n : grid.n) out.push_back(classify(e, g, n, k, two_opts));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.key() < b.key();
  });
  return out;
}

struct BoundaryPoint {
  double eps{};
  double gamma_c{};
  double product{};  ///< gamma_c * eps, tends to 8 pi
};

/// Numerical two-charge existence threshold for each eps, bracketed by
/// (4 pi / eps, 16 pi / eps).
inline std::vector<BoundaryPoint> two_charge_boundary_curve(
    const std::vector<double>& eps_list, const two_charge::Options& opts = {},
    double rel_width = 1e-6) {
  const double pi = boost::math::constants::pi<double>();
  std::vector<BoundaryPoint> out;
  for (double eps : eps_list) {
    if (!(eps > 0 && eps <= opts.eps_max))
      throw DomainError("two_charge_boundary_curve: eps outside (0, eps_max]");
    const double g = two_charge::existence_boundary(
        eps, 0.5 * 8 * pi / eps, 2 * 8 * pi / eps, opts, rel_width);
    out.push_back({eps, g, g * eps});
  }
  return out;
}

}  // namespace charged_drop::regime
