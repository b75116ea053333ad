#pragma once

/**
 * \file two_charge.hpp
 * \brief Exact two-charge minimizers built from unduloid sections.
 *
 * For two charges of radius eps in a drop of volume 4pi/3 the free surface of
 * a minimizer is a single unduloid section that touches both charge balls
 * tangentially at a common height h.  Three geometries are possible:
 *
 * - Case1: the section stays on the hump of the unduloid (never reaches its
 *   neck a); the balls stick out through small caps.
 * - Case2: one full period between the charges, which sit in full balls at
 *   its ends.
 * - Case3: the section passes through the neck on both sides and meets the
 *   balls on the far side of it; the balls stick out through large caps.
 *
 * For each geometry and each contact height h the maximum height c is fixed
 * by the volume constraint, the minimum a by the tangency condition, and the
 * energy (perimeter plus gamma eps^3 / L) follows in closed form.  The
 * minimizer is found by a one-dimensional search over h and compared with the
 * split configuration (two separate balls) to decide existence.
 *
 * Volumes below are carried in units of 2pi/3, so the volume constraint reads
 * `scaled_volume(...) == 2`.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "charged_drop/error.hpp"
#include "charged_drop/precision.hpp"
#include "charged_drop/unduloid.hpp"

namespace charged_drop::two_charge {

using unduloid::CaseKind;
using unduloid::UnduloidSection;

/// Label of a two-charge solution: a classical geometry, or the split
/// (generalized) minimizer made of two separate balls.
enum class SolutionKind { Case1, Case2, Case3, Split };

inline const char* to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::Case1: return "Case1";
    case SolutionKind::Case2: return "Case2";
    case SolutionKind::Case3: return "Case3";
    case SolutionKind::Split: return "Split";
  }
  return "?";
}

inline SolutionKind to_solution_kind(CaseKind kind) {
  switch (kind) {
    case CaseKind::Case1: return SolutionKind::Case1;
    case CaseKind::Case2: return SolutionKind::Case2;
    case CaseKind::Case3: return SolutionKind::Case3;
  }
  return SolutionKind::Split;
}

template <class Real = double>
struct EnergyBreakdown {
  Real perimeter{};
  Real coulomb{};
  Real total{};
};

/// Geometry and energy of one case at one contact height.
template <class Real = double>
struct CaseState {
  UnduloidSection<Real> section{};
  Real L{};  ///< charge separation
  EnergyBreakdown<Real> energy{};
};

/// Window in which the leading-order asymptotics are expected to hold:
/// C1 / log(1/eps) < gamma < 8 pi / eps - C.
struct AsymptoticWindow {
  double C = 16 * boost::math::constants::pi<double>();
  double C1 = 1.0;
};

struct Options {
  double eps_max = 0.05;
  /// Contact heights are searched in [h_min_ratio * eps, eps].
  double h_min_ratio = 1e-4;
  std::size_t scan_points = 200;
  /// Existence requires E_classical < E_split - tie_margin * |E_split|.
  double tie_margin = 1e-12;
  double c_lo = 0.5;
  double c_hi = 1.05;
  double residual_tol = 1e-10;
  AsymptoticWindow window{};
};

struct Asymptotic {
  double h{};
  double L{};
  double E{};
  bool in_window = false;
};

/// Best configuration found for one case.
struct CaseOptimum {
  CaseKind kind = CaseKind::Case1;
  bool feasible = false;
  double h{};
  double c{};
  double L{};
  EnergyBreakdown<double> energy{};
};

struct TwoChargeSolution {
  double eps{};
  double gamma{};
  bool exists = false;
  SolutionKind case_kind = SolutionKind::Split;
  /// Lowest-energy classical geometry; equals case_kind when exists.
  CaseKind best_case = CaseKind::Case1;
  /// h*, c*, L* and energy describe the best classical candidate, also when
  /// it loses to the split configuration.
  double h_star{};
  double c_star{};
  double L_star{};
  EnergyBreakdown<double> energy{};
  double split_energy{};
  /// energy.total - 4 pi and split_energy - 4 pi, formed before rounding to
  /// double.  Competing energies often differ by less than an ulp of 4 pi.
  double excess{};
  double split_excess{};
  Asymptotic asymptotic{};
  /// Positive second difference of the energy at h*; only checked if exists.
  bool strictly_convex = false;
  std::vector<CaseOptimum> cases;
};

/// Energy of the split configuration: a ball of volume 4pi/3 (1 - eps^3) and
/// a ball of radius eps, infinitely far apart.
template <class Real>
Real generalized_energy(Real eps) {
  using std::exp;
  if (!(eps > 0 && eps < 1))
    throw DomainError("generalized_energy: need 0 < eps < 1");
  const Real pi = boost::math::constants::pi<Real>();
  const Real big = exp(Real(2) / 3 * boost::math::log1p(-eps * eps * eps));
  return 4 * pi * (eps * eps + big);
}

namespace detail {

/// Elliptic building blocks shared by the volume and energy assembly.
template <class Real>
struct Pieces {
  Real a{};
  Real t0{};
  Real d{};       ///< sqrt(eps^2 - h^2): ball center to contact plane
  Real f0{};      ///< F at the contact amplitude
  Real e0{};      ///< E at the contact amplitude
  Real fc{};      ///< complete F
  Real ec{};      ///< complete E
  Real sc_term{}; ///< (c^2 - a^2) h sin u0 cos u0
};

template <class Real>
Pieces<Real> pieces(CaseKind kind, const Real& h, const Real& eps,
                    const Real& c) {
  using std::sqrt;
  const auto contact = unduloid::contact_params(c, h, eps);
  Pieces<Real> p;
  p.a = contact.a;
  p.t0 = contact.t0;
  p.d = sqrt((eps - h) * (eps + h));
  const Real kc = (p.a / c) * (p.a / c);
  if (kind != CaseKind::Case2) {
    p.f0 = elliptic::first_kind_sc(contact.u0.sn, contact.u0.cn, kc);
    p.e0 = elliptic::second_kind_sc(contact.u0.sn, contact.u0.cn, kc);
    p.sc_term = (c - p.a) * (c + p.a) * h * contact.u0.sn * contact.u0.cn;
  }
  if (kind != CaseKind::Case1) {
    p.fc = elliptic::first_kind_sc(Real(1), Real(0), kc);
    p.ec = elliptic::second_kind_sc(Real(1), Real(0), kc);
  }
  return p;
}

template <class Real>
Real cap_volume_term(const Real& h, const Real& eps, const Real& d) {
  return d * (2 * eps * eps + h * h);
}

}  // namespace detail

/// Drop volume in units of 2pi/3 for the given case, contact height and
/// maximum height c.  The volume constraint is scaled_volume(...) == 2.
template <class Real>
Real scaled_volume(CaseKind kind, Real h, Real eps, Real c) {
  const auto p = detail::pieces(kind, h, eps, c);
  const Real a = p.a;
  const Real e_coef = 2 * c * (a * a + c * c) + 3 * a * c * c;
  const Real f_coef = a * a * c;
  const Real balls = 2 * eps * eps * eps;
  switch (kind) {
    case CaseKind::Case1:
      return balls - detail::cap_volume_term(h, eps, p.d) + p.sc_term -
             f_coef * p.f0 + e_coef * p.e0;
    case CaseKind::Case2:
      return e_coef * p.ec - f_coef * p.fc + balls;
    case CaseKind::Case3:
      return e_coef * (2 * p.ec - p.e0) - f_coef * (2 * p.fc - p.f0) -
             p.sc_term + balls + detail::cap_volume_term(h, eps, p.d);
  }
  throw DomainError("scaled_volume: unknown case");
}

/// Maximum profile height c satisfying the volume constraint.
template <class Real>
Real solve_c(CaseKind kind, Real h, Real eps, const Options& opts = {}) {
  using std::abs;
  if (!(h > 0 && h <= eps))
    throw DomainError("solve_c: need 0 < h <= eps");
  const auto residual = [&](const Real& c) {
    return scaled_volume(kind, h, eps, c) - 2;
  };
  const Real lo = opts.c_lo, hi = opts.c_hi;
  const Real f_lo = residual(lo), f_hi = residual(hi);
  if (f_lo == 0) return lo;
  if (f_hi == 0) return hi;
  if ((f_lo < 0) == (f_hi < 0))
    throw NoRootError(std::string("solve_c: no sign change of the volume "
                                  "residual in [c_lo, c_hi] for ") +
                      unduloid::to_string(kind));
  std::uintmax_t max_iter = 200;
  const auto tol = boost::math::tools::eps_tolerance<Real>(
      std::numeric_limits<Real>::digits - 3);
  const auto [left, right] = boost::math::tools::toms748_solve(
      residual, lo, hi, f_lo, f_hi, tol, max_iter);
  const Real c = (left + right) / 2;
  if (abs(residual(c)) > Real(opts.residual_tol))
    throw NoRootError("solve_c: volume residual above tolerance");
  return c;
}

/// Closed-form energy of the given case at contact height h.
template <class Real>
CaseState<Real> energy_of_h(CaseKind kind, Real h, Real eps, Real gamma,
                            const Options& opts = {}) {
  const Real c = solve_c(kind, h, eps, opts);
  const auto p = detail::pieces(kind, h, eps, c);
  const Real pi = boost::math::constants::pi<Real>();
  const Real a = p.a;
  // eps - sqrt(eps^2 - h^2) without cancellation.
  const Real small_cap = h * h / (eps + p.d);

  CaseState<Real> out;
  out.section = {a, c, h, p.t0, kind, eps};
  Real perimeter{};
  switch (kind) {
    case CaseKind::Case1:
      perimeter = 4 * pi * ((a + c) * c * p.e0 + eps * small_cap);
      out.L = 2 * (a * p.f0 + c * p.e0 - p.d);
      break;
    case CaseKind::Case2:
      perimeter = 4 * pi * c * (a + c) * p.ec + 4 * pi * eps * eps;
      out.L = 2 * (a * p.fc + c * p.ec);
      break;
    case CaseKind::Case3:
      perimeter = 8 * pi * c * (a + c) * p.ec - 4 * pi * c * (a + c) * p.e0 +
                  4 * pi * eps * (eps + p.d);
      out.L = 2 * (p.d + 2 * (a * p.fc + c * p.ec) - (a * p.f0 + c * p.e0));
      break;
  }
  if (out.L < 2 * eps)
    throw InfeasibleError("energy_of_h: charge balls overlap");
  out.energy.perimeter = perimeter;
  out.energy.coulomb = gamma * eps * eps * eps / out.L;
  out.energy.total = out.energy.perimeter + out.energy.coulomb;
  return out;
}

/// Leading-order predictions for h*, L* and E*.
inline Asymptotic asymptotic_solution(double eps, double gamma,
                                      const AsymptoticWindow& window = {}) {
  using std::log;
  using std::sqrt;
  if (!(eps > 0 && eps < 1 && gamma > 0))
    throw DomainError("asymptotic_solution: need 0 < eps < 1, gamma > 0");
  const double pi = boost::math::constants::pi<double>();
  const double e3 = eps * eps * eps;
  const double g_e4 = gamma * e3 * eps;
  Asymptotic out;
  out.h = sqrt(g_e4 / (8 * pi));
  out.L = 2 - 2 * eps - gamma * e3 / (8 * pi) * log(g_e4);
  out.E = 4 * pi + gamma * e3 / 2 * (1 + eps + eps * eps) +
          gamma * gamma * e3 * e3 / (64 * pi) * log(g_e4);
  out.in_window = gamma > window.C1 / log(1 / eps) &&
                  gamma < 8 * pi / eps - window.C;
  return out;
}

namespace detail {

template <class Real>
Real total_or_inf(CaseKind kind, const Real& h, const Real& eps,
                  const Real& gamma, const Options& opts) {
  try {
    return energy_of_h(kind, h, eps, gamma, opts).energy.total;
  } catch (const Error&) {
    return std::numeric_limits<Real>::infinity();
  }
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  using std::exp;
  using std::log;
  std::vector<double> out(n);
  const double step = (log(hi) - log(lo)) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = i + 1 == n ? hi : exp(log(lo) + step * double(i));
  return out;
}

/// Coarse scan in extended precision, refinement in quad precision.
inline std::optional<std::pair<quad, CaseState<quad>>> optimize_case(
    CaseKind kind, double eps, double gamma, const Options& opts) {
  using std::exp;
  using std::log;
  const std::vector<double> grid =
      log_grid(eps * opts.h_min_ratio, eps, opts.scan_points);
  std::size_t best = grid.size();
  extended best_energy = std::numeric_limits<extended>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const extended e =
        total_or_inf<extended>(kind, grid[i], eps, gamma, opts);
    if (e < best_energy) {
      best_energy = e;
      best = i;
    }
  }
  if (best == grid.size()) return std::nullopt;

  const quad q_eps = eps, q_gamma = gamma;
  const quad lo = log(quad(grid[best == 0 ? 0 : best - 1]));
  const quad hi = log(quad(grid[std::min(best + 1, grid.size() - 1)]));
  const auto objective = [&](const quad& log_h) {
    quad h = exp(log_h);
    if (h > q_eps) h = q_eps;
    return total_or_inf<quad>(kind, h, q_eps, q_gamma, opts);
  };
  std::uintmax_t max_iter = 500;
  const auto [arg, value] =
      boost::math::tools::brent_find_minima(objective, lo, hi, 50, max_iter);
  quad h = exp(arg);
  if (h > q_eps) h = q_eps;
  // Brent never evaluates the bracket ends; a boundary minimum sits there.
  quad best_h = h, best_value = value;
  for (const quad& end : {exp(lo), exp(hi)}) {
    const quad clamped = end > q_eps ? q_eps : end;
    const quad v = total_or_inf<quad>(kind, clamped, q_eps, q_gamma, opts);
    if (v < best_value) {
      best_value = v;
      best_h = clamped;
    }
  }
  if (!(best_value < std::numeric_limits<quad>::infinity())) return std::nullopt;
  return std::make_pair(best_h,
                        energy_of_h(kind, best_h, q_eps, q_gamma, opts));
}

inline EnergyBreakdown<double> to_double(const EnergyBreakdown<quad>& e) {
  return {static_cast<double>(e.perimeter), static_cast<double>(e.coulomb),
          static_cast<double>(e.total)};
}

}  // namespace detail

/// Global two-charge minimizer for (eps, gamma), or the split verdict.
inline TwoChargeSolution minimize(double eps, double gamma,
                                  const Options& opts = {}) {
  if (!(eps > 0 && eps <= opts.eps_max))
    throw DomainError("two_charge::minimize: need 0 < eps <= eps_max");
  if (!(gamma > 0)) throw DomainError("two_charge::minimize: need gamma > 0");

  TwoChargeSolution sol;
  sol.eps = eps;
  sol.gamma = gamma;
  sol.asymptotic = asymptotic_solution(eps, gamma, opts.window);
  const quad split = generalized_energy(quad(eps));
  const quad four_pi = 4 * boost::math::constants::pi<quad>();
  sol.split_energy = static_cast<double>(split);
  sol.split_excess = static_cast<double>(split - four_pi);

  std::optional<std::pair<quad, CaseState<quad>>> best;
  for (CaseKind kind : {CaseKind::Case1, CaseKind::Case2, CaseKind::Case3}) {
    const auto found = detail::optimize_case(kind, eps, gamma, opts);
    CaseOptimum record;
    record.kind = kind;
    if (found) {
      record.feasible = true;
      record.h = static_cast<double>(found->first);
      record.c = static_cast<double>(found->second.section.c);
      record.L = static_cast<double>(found->second.L);
      record.energy = detail::to_double(found->second.energy);
      if (!best || found->second.energy.total < best->second.energy.total)
        best = found;
    }
    sol.cases.push_back(record);
  }
  if (!best) throw InfeasibleError("two_charge::minimize: no feasible case");

  const CaseState<quad>& state = best->second;
  sol.best_case = state.section.case_kind;
  sol.h_star = static_cast<double>(best->first);
  sol.c_star = static_cast<double>(state.section.c);
  sol.L_star = static_cast<double>(state.L);
  sol.energy = detail::to_double(state.energy);
  sol.excess = static_cast<double>(state.energy.total - four_pi);

  using boost::multiprecision::abs;
  sol.exists = state.energy.total < split - quad(opts.tie_margin) * abs(split);
  sol.case_kind = sol.exists ? to_solution_kind(sol.best_case)
                             : SolutionKind::Split;

  if (sol.exists) {
    const quad h = best->first;
    const quad q_eps = eps, q_gamma = gamma;
    quad step = h / 20;
    if (h + step > q_eps) step = (q_eps - h) / 2;
    const quad h_min = q_eps * quad(opts.h_min_ratio);
    if (h - step < h_min) step = std::min(step, (h - h_min) / 2);
    if (step > 0) {
      const auto e = [&](const quad& x) {
        return detail::total_or_inf<quad>(sol.best_case, x, q_eps, q_gamma,
                                          opts);
      };
      sol.strictly_convex = e(h + step) + e(h - step) - 2 * e(h) > 0;
    }
  }
  return sol;
}

/// Existence threshold gamma_c(eps) by bisection on gamma.  The bracket must
/// have a classical minimizer at `lo` and none at `hi`.
inline double existence_boundary(double eps, double lo, double hi,
                                 const Options& opts = {},
                                 double rel_width = 1e-6) {
  if (!(lo > 0 && hi > lo))
    throw BracketError("existence_boundary: need 0 < lo < hi");
  if (!minimize(eps, lo, opts).exists)
    throw BracketError("existence_boundary: no minimizer at lower gamma");
  if (minimize(eps, hi, opts).exists)
    throw BracketError("existence_boundary: minimizer exists at upper gamma");
  while (hi - lo > rel_width * hi) {
    const double mid = (lo + hi) / 2;
    if (minimize(eps, mid, opts).exists)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace charged_drop::two_charge
