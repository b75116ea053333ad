#pragma once

/**
 * \file unduloid.hpp
 * \brief Axisymmetric constant-mean-curvature (Delaunay unduloid) geometry.
 *
 * An unduloid is described by the minimum a and maximum c of its meridian
 * (the elliptic catenary).  One period of the meridian is parametrized by
 * t in [-pi/2, 3pi/2] with the maximum z = c at t = pi/2, x(pi/2) = 0, and
 * minima z = a at both ends.  Writing u = t/2 - pi/4 in [-pi/2, pi/2] and
 * k = (c^2 - a^2)/c^2, the meridian is
 *
 *   x(u) = a F(u, k) + c E(u, k),      z(u) = c sqrt(1 - k sin^2 u),
 *
 * and the mean curvature of the surface is 1/(a + c).
 *
 * Sections symmetric about the maximum, u in [-v, v], have lateral area
 * 4 pi c (a + c) E(v, k) and volume
 *
 *   (2 pi / 3) [ (2c(a^2+c^2) + 3ac^2) E(v,k) - a^2 c F(v,k)
 *                + c (c^2 - a^2) sin v cos v sqrt(1 - k sin^2 v) ].
 *
 * The parameter is always carried as 1 - k = a^2/c^2 to avoid cancellation
 * when a << c.
 */

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <fmt/format.h>

#include "charged_drop/elliptic.hpp"
#include "charged_drop/error.hpp"

namespace charged_drop::unduloid {

/// Which geometry an unduloid section realizes between the two charges.
enum class CaseKind { Case1, Case2, Case3 };

inline const char* to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Case1: return "Case1";
    case CaseKind::Case2: return "Case2";
    case CaseKind::Case3: return "Case3";
  }
  return "?";
}

/// Drop geometry for two charges joined by a single unduloid section.
template <class Real = double>
struct UnduloidSection {
  Real a{};   ///< minimum profile height
  Real c{};   ///< maximum profile height
  Real h{};   ///< contact height with the charge balls
  Real t0{};  ///< profile parameter at the contact point
  CaseKind case_kind = CaseKind::Case1;
  Real eps{};  ///< charge radius

  Real mean_curvature() const { return Real(1) / (a + c); }
};

template <class Real = double>
struct ProfilePoint {
  Real x{};
  Real z{};
};

/// Amplitude v of a section given through its sine and cosine.
template <class Real>
struct Amplitude {
  Real sn{};
  Real cn{};
};

/// Contact of the profile with a charge ball of radius eps at height h.
template <class Real = double>
struct ContactParams {
  Real a{};
  Real t0{};
  /// Amplitude u0 = t0/2 - pi/4 in [0, pi/2] of the contact point.
  Amplitude<Real> u0{};
};

namespace detail {

template <class Real>
void check_heights(const Real& a, const Real& c, const char* who) {
  if (!(c > 0) || a < 0 || a > c)
    throw DomainError(std::string(who) + ": need 0 <= a <= c, c > 0");
}

template <class Real>
Real complement(const Real& a, const Real& c) {
  const Real r = a / c;
  return r * r;
}

}  // namespace detail

/// x-extent a F(v) + c E(v) of the meridian from the maximum to amplitude v.
template <class Real>
Real half_length(const Real& a, const Real& c, const Amplitude<Real>& v) {
  const Real kc = detail::complement(a, c);
  return a * elliptic::first_kind_sc(v.sn, v.cn, kc) +
         c * elliptic::second_kind_sc(v.sn, v.cn, kc);
}

/// Lateral area of the section u in [-v, v].
template <class Real>
Real section_area(const Real& a, const Real& c, const Amplitude<Real>& v) {
  const Real kc = detail::complement(a, c);
  return 4 * boost::math::constants::pi<Real>() * c * (a + c) *
         elliptic::second_kind_sc(v.sn, v.cn, kc);
}

/// Volume of the solid of revolution bounded by the section u in [-v, v].
template <class Real>
Real section_volume(const Real& a, const Real& c, const Amplitude<Real>& v) {
  using std::sqrt;
  const Real kc = detail::complement(a, c);
  const Real f = elliptic::first_kind_sc(v.sn, v.cn, kc);
  const Real e = elliptic::second_kind_sc(v.sn, v.cn, kc);
  const Real delta = sqrt(v.cn * v.cn + kc * v.sn * v.sn);
  const Real bracket = (2 * c * (a * a + c * c) + 3 * a * c * c) * e -
                       a * a * c * f +
                       c * (c - a) * (c + a) * v.sn * v.cn * delta;
  return 2 * boost::math::constants::pi<Real>() / 3 * bracket;
}

/// Point of the meridian at parameter t in [-pi/2, 3pi/2].
template <class Real>
ProfilePoint<Real> profile_point(Real a, Real c, Real t) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;
  detail::check_heights(a, c, "profile_point");
  const Real pi = boost::math::constants::pi<Real>();
  if (t < -pi / 2 || t > 3 * pi / 2)
    throw DomainError("profile_point: t outside [-pi/2, 3pi/2]");
  const Real u = t / 2 - pi / 4;
  Amplitude<Real> v{abs(sin(u)), cos(u)};
  if (abs(u) == pi / 2) v = {Real(1), Real(0)};
  const Real x = half_length(a, c, v);
  return {u < 0 ? -x : x, sqrt(c * c * v.cn * v.cn + a * a * v.sn * v.sn)};
}

/// Minimum height a and contact parameter t0 of the profile that touches the
/// sphere of radius eps tangentially at height h, given the maximum c.
template <class Real>
ContactParams<Real> contact_params(Real c, Real h, Real eps) {
  using std::asin;
  using std::sqrt;
  if (!(h > 0 && h <= eps && eps < c))
    throw DomainError("contact_params: need 0 < h <= eps < c");
  const Real h2 = h * h;
  const Real denom = c * eps - h2;
  if (!(denom > 0))
    throw InfeasibleError("contact_params: degenerate geometry, c eps <= h^2");
  const Real a = h2 * (c - eps) / denom;
  if (a < 0 || a > h)
    throw InfeasibleError("contact_params: minimum height outside [0, h]");

  const Real pi = boost::math::constants::pi<Real>();
  const Real span = (c - a) * (c + a);
  const Real s = (2 * h2 - (c * c + a * a)) / span;
  ContactParams<Real> out;
  out.a = a;
  out.t0 = pi - asin(std::clamp(s, Real(-1), Real(1)));
  out.u0.sn = sqrt((c - h) * (c + h) / span);
  out.u0.cn = sqrt((h - a) * (h + a) / span);
  return out;
}

/// Lateral area of one full period.
template <class Real>
Real full_period_area(Real a, Real c) {
  detail::check_heights(a, c, "full_period_area");
  const Real pi = boost::math::constants::pi<Real>();
  if (a == 0) return 4 * pi * c * c;
  return section_area(a, c, Amplitude<Real>{Real(1), Real(0)});
}

/// Enclosed volume of one full period.
template <class Real>
Real full_period_volume(Real a, Real c) {
  detail::check_heights(a, c, "full_period_volume");
  const Real pi = boost::math::constants::pi<Real>();
  if (a == 0) return 4 * pi * c * c * c / 3;
  return section_volume(a, c, Amplitude<Real>{Real(1), Real(0)});
}

/// |H_numeric(t) - 1/(a + c)| with H_numeric from central differences of the
/// parametrization.
template <class Real>
Real cmc_residual(Real a, Real c, Real t) {
  using std::abs;
  using std::pow;
  using std::sin;
  using std::sqrt;
  detail::check_heights(a, c, "cmc_residual");
  const Real pi = boost::math::constants::pi<Real>();
  const Real target = Real(1) / (a + c);
  if (a == c) {
    // Cylinder: z is constant, so the meridian has no curvature.
    return abs(Real(1) / (2 * c) - target);
  }
  const Real step = Real(1e-3);
  if (t - 2 * step < -pi / 2 || t + 2 * step > 3 * pi / 2 ||
      abs(abs(sin(t)) - 1) < Real(1e-6))
    throw DomainError("cmc_residual: t at a profile extremum");

  const auto p = [&](Real s) { return profile_point(a, c, s); };
  const ProfilePoint<Real> m2 = p(t - 2 * step), m1 = p(t - step), p0 = p(t),
                           p1 = p(t + step), p2 = p(t + 2 * step);
  // Fourth-order central differences.
  const Real xd = (m2.x - 8 * m1.x + 8 * p1.x - p2.x) / (12 * step);
  const Real zd = (m2.z - 8 * m1.z + 8 * p1.z - p2.z) / (12 * step);
  const Real xdd =
      (-m2.x + 16 * m1.x - 30 * p0.x + 16 * p1.x - p2.x) / (12 * step * step);
  const Real zdd =
      (-m2.z + 16 * m1.z - 30 * p0.z + 16 * p1.z - p2.z) / (12 * step * step);
  const Real speed = sqrt(xd * xd + zd * zd);
  const Real meridian = (zdd * xd - zd * xdd) / pow(speed, 3);
  const Real parallel = xd / (p0.z * speed);
  const Real h_numeric = (parallel - meridian) / 2;
  return abs(h_numeric - target);
}

template <class Real = double>
struct ProfileSample {
  Real t{};
  Real x{};
  Real z{};
};

/// n evenly spaced samples of one period, t from -pi/2 to 3pi/2.
template <class Real>
std::vector<ProfileSample<Real>> sample_profile(Real a, Real c, std::size_t n) {
  if (n < 2) throw DomainError("sample_profile: need at least two points");
  const Real pi = boost::math::constants::pi<Real>();
  std::vector<ProfileSample<Real>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Real t = i + 1 == n ? 3 * pi / 2
                              : -pi / 2 + 2 * pi * Real(i) / Real(n - 1);
    const auto q = profile_point(a, c, t);
    out.push_back({t, q.x, q.z});
  }
  return out;
}

/// CSV rows t,x,z with a header.
inline void write_profile_csv(std::ostream& os,
                              const std::vector<ProfileSample<double>>& rows) {
  os << "t,x,z\n";
  for (const auto& r : rows) os << fmt::format("{:.17g},{:.17g},{:.17g}\n", r.t, r.x, r.z);
}

}  // namespace charged_drop::unduloid
