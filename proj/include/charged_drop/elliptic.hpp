#pragma once

/**
 * \file elliptic.hpp
 * \brief Incomplete elliptic integrals of the first and second kind.
 *
 * The integrals use the parameter convention
 *
 *   F(u, k) = \int_0^u (1 - k sin^2 t)^{-1/2} dt,
 *   E(u, k) = \int_0^u (1 - k sin^2 t)^{1/2} dt,
 *
 * i.e. k multiplies sin^2 directly (it is the square of the modulus).
 *
 * Evaluation goes through Carlson's symmetric forms R_F and R_D computed by
 * the duplication algorithm:
 * - B. C. Carlson, Numerical computation of real or complex elliptic
 *   integrals, Numerical Algorithms 10, 13-26 (1995).
 *
 * Every routine is templated on the floating-point type so that the same code
 * serves double, long double and boost::multiprecision::float128.  Geometry
 * code frequently knows 1 - k and the sine/cosine of the amplitude in closed
 * form; the `*_sc` entry points accept exactly those quantities so that no
 * cancellation happens near the k -> 1, u -> pi/2 corner.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "charged_drop/error.hpp"

namespace charged_drop::elliptic {

namespace detail {

template <class Real>
Real max3(const Real& a, const Real& b, const Real& c) {
  return std::max(a, std::max(b, c));
}

}  // namespace detail

/// Carlson's R_F(x, y, z); at most one argument may vanish.
template <class Real>
Real carlson_rf(Real x, Real y, Real z) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0)
    throw DomainError("carlson_rf: negative argument");
  if ((x == 0) + (y == 0) + (z == 0) > 1)
    throw DomainError("carlson_rf: more than one zero argument");

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real a0 = (x + y + z) / 3;
  Real q = pow(3 * eps, Real(-1) / 6) *
           detail::max3(abs(a0 - x), abs(a0 - y), abs(a0 - z));
  Real a = a0;
  Real scale = 1;  // 4^-m
  while (q * scale >= abs(a)) {
    const Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Real lam = sx * sy + sy * sz + sz * sx;
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    scale /= 4;
  }
  const Real X = (a - x) / a;
  const Real Y = (a - y) / a;
  const Real Z = -(X + Y);
  const Real e2 = X * Y - Z * Z;
  const Real e3 = X * Y * Z;
  return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / sqrt(a);
}

/// Carlson's R_D(x, y, z); x and y may not both vanish, z > 0.
template <class Real>
Real carlson_rd(Real x, Real y, Real z) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z <= 0)
    throw DomainError("carlson_rd: invalid argument");
  if (x == 0 && y == 0) throw DomainError("carlson_rd: x = y = 0");

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real a0 = (x + y + 3 * z) / 5;
  Real q = pow(eps / 4, Real(-1) / 6) *
           detail::max3(abs(a0 - x), abs(a0 - y), abs(a0 - z));
  Real a = a0;
  Real scale = 1;
  Real sum = 0;
  while (q * scale >= abs(a)) {
    const Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Real lam = sx * sy + sy * sz + sz * sx;
    sum += scale / (sz * (z + lam));
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    scale /= 4;
  }
  const Real X = (a - x) / a;
  const Real Y = (a - y) / a;
  const Real Z = -(X + Y) / 3;
  const Real xy = X * Y, z2 = Z * Z;
  const Real e2 = xy - 6 * z2;
  const Real e3 = (3 * xy - 8 * z2) * Z;
  const Real e4 = 3 * (xy - z2) * z2;
  const Real e5 = xy * z2 * Z;
  const Real series = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 -
                      3 * e4 / 22 - 9 * e2 * e3 / 52 + 3 * e5 / 26;
  return scale * series / (a * sqrt(a)) + 3 * sum;
}

/// F with the amplitude given as (sin u, cos u), u in [0, pi/2], and the
/// parameter given as kc = 1 - k, kc in [0, 1].
template <class Real>
Real first_kind_sc(const Real& sn, const Real& cn, const Real& kc) {
  const Real delta2 = cn * cn + kc * sn * sn;
  if (!(delta2 > 0))
    throw DomainError("ellip_f: k sin^2 u >= 1 (logarithmic singularity)");
  if (sn == 0) return Real(0);
  return sn * carlson_rf(cn * cn, delta2, Real(1));
}

/// E with the amplitude given as (sin u, cos u) and the parameter as 1 - k.
template <class Real>
Real second_kind_sc(const Real& sn, const Real& cn, const Real& kc) {
  using std::sqrt;
  if (kc < 0) throw DomainError("ellip_e: k > 1");
  if (sn == 0) return Real(0);
  if (kc == 0) return sn;  // E(u, 1) = sin u
  const Real k = 1 - kc;
  const Real c2 = cn * cn;
  const Real delta2 = c2 + kc * sn * sn;
  if (kc >= Real(0.5)) {
    return sn * carlson_rf(c2, delta2, Real(1)) -
           k / 3 * sn * sn * sn * carlson_rd(c2, delta2, Real(1));
  }
  // Near k = 1 the standard combination cancels; this form keeps every term
  // positive (Carlson's identity with the roles of 1 and Delta^2 swapped).
  const Real s3 = sn * sn * sn;
  return kc * sn * carlson_rf(c2, delta2, Real(1)) +
         k * kc / 3 * s3 * carlson_rd(c2, Real(1), delta2) +
         k * sn * cn / sqrt(delta2);
}

namespace detail {

template <class Real>
void check_amplitude(const Real& u, const char* who) {
  const Real half_pi = boost::math::constants::half_pi<Real>();
  if (!(u >= 0 && u <= half_pi))
    throw DomainError(std::string(who) + ": amplitude outside [0, pi/2]");
}

template <class Real>
void amplitude_sc(const Real& u, Real& sn, Real& cn) {
  using std::cos;
  using std::sin;
  if (u == boost::math::constants::half_pi<Real>()) {
    sn = 1;
    cn = 0;
  } else {
    sn = sin(u);
    cn = cos(u);
  }
}

}  // namespace detail

/// F(u, kc') where the caller supplies kc = 1 - k.
template <class Real>
Real ellip_f_kc(Real u, Real kc) {
  detail::check_amplitude(u, "ellip_f");
  if (kc > 1) throw DomainError("ellip_f: k < 0 is not supported");
  Real sn, cn;
  detail::amplitude_sc(u, sn, cn);
  return first_kind_sc(sn, cn, kc);
}

/// E(u, kc') where the caller supplies kc = 1 - k.
template <class Real>
Real ellip_e_kc(Real u, Real kc) {
  detail::check_amplitude(u, "ellip_e");
  if (kc > 1) throw DomainError("ellip_e: k < 0 is not supported");
  Real sn, cn;
  detail::amplitude_sc(u, sn, cn);
  return second_kind_sc(sn, cn, kc);
}

/// Incomplete integral of the first kind. Requires k sin^2 u < 1.
template <class Real>
Real ellip_f(Real u, Real k) {
  if (k < 0) throw DomainError("ellip_f: k < 0 is not supported");
  if (k > 1) throw DomainError("ellip_f: k > 1");
  return ellip_f_kc(u, Real(1) - k);
}

/// Incomplete integral of the second kind. Requires k <= 1.
template <class Real>
Real ellip_e(Real u, Real k) {
  if (k < 0) throw DomainError("ellip_e: k < 0 is not supported");
  if (k > 1) throw DomainError("ellip_e: k > 1");
  return ellip_e_kc(u, Real(1) - k);
}

/// Leading-order expansions of F and E near the degenerate parameter k = 1.
/// For FEx/EEx/FHBig/EHBig the integrals are evaluated at amplitude
/// arcsin(s); the routine receives the angle u and uses s = sin u.
enum class Expansion { FComp, EComp, FEx, EEx, FHBig, EHBig };

/// Largest 1 - k for which the near-degenerate expansions are evaluated.
inline constexpr double kExpansionMaxComplement = 0.1;
/// Smallest 1 - sin u accepted by FEx/EEx.
inline constexpr double kExpansionMinSineGap = 1e-2;

template <class Real>
Real expansion_value(Expansion which, Real u, Real k) {
  using std::abs;
  using std::atanh;
  using std::log;
  using std::sin;
  const Real kc = 1 - k;
  if (!(kc >= 0 && kc <= Real(kExpansionMaxComplement)))
    throw DomainError("expansion_value: k outside [0.9, 1]");
  detail::check_amplitude(u, "expansion_value");
  const Real half_pi = boost::math::constants::half_pi<Real>();

  // (z - 1) log(1 - z) vanishes at z = 1.
  const auto corr = [&] { return kc == 0 ? Real(0) : -kc / 4 * log(kc); };

  switch (which) {
    case Expansion::FComp:
    case Expansion::EComp:
      if (abs(u - half_pi) > Real(1e-12))
        throw DomainError("expansion_value: complete expansions need u = pi/2");
      [[fallthrough]];
    case Expansion::FHBig:
    case Expansion::EHBig:
      if (which == Expansion::FComp || which == Expansion::FHBig) {
        if (kc == 0)
          throw DomainError("expansion_value: F diverges at k = 1");
        return -log(kc) / 2;
      }
      return 1 + corr();
    case Expansion::FEx:
    case Expansion::EEx: {
      const Real s = sin(u);
      if (1 - s < Real(kExpansionMinSineGap))
        throw DomainError("expansion_value: sin u too close to 1");
      if (which == Expansion::FEx) return atanh(s);
      return s + kc / 2 * atanh(s);
    }
  }
  throw DomainError("expansion_value: unknown expansion");
}

}  // namespace charged_drop::elliptic
