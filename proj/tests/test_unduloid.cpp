#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "charged_drop/unduloid.hpp"
#include "oracles.hpp"

using namespace charged_drop;
using namespace charged_drop::unduloid;

namespace {
const double pi = oracle::pi;
}

TEST(Unduloid, ProfileExamples) {
  for (double t : {-1.0, 0.3, 2.0, 4.0}) {
    const auto p = profile_point(0.4, 0.4, t);
    EXPECT_NEAR(p.z, 0.4, 1e-15);
  }
  EXPECT_NEAR(profile_point(0.3, 1.0, pi / 2).z, 1.0, 1e-15);
  EXPECT_NEAR(profile_point(0.3, 1.0, -pi / 2).z, 0.3, 1e-15);
  EXPECT_NEAR(profile_point(0.3, 1.0, 3 * pi / 2).z, 0.3, 1e-15);
  EXPECT_NEAR(profile_point(0.3, 1.0, pi / 2).x, 0.0, 1e-15);

  const auto p = profile_point(0.1, 1.0, 0.0);
  EXPECT_NEAR(p.z, std::sqrt(0.505), 1e-14);
  EXPECT_NEAR(p.z, 0.710634, 1e-6);
  // x(0) is negative: it lies on the rising half, left of the bulge.
  EXPECT_NEAR(-p.x, oracle::x_from_bulge(0.1, 1.0, p.z), 1e-12);
}

TEST(Unduloid, ZMatchesClosedForm) {
  for (double t = -pi / 2; t <= 3 * pi / 2; t += 0.1) {
    const double a = 0.25, c = 0.9;
    const double z2 = (c * c - a * a) / 2 * std::sin(t) + (c * c + a * a) / 2;
    EXPECT_NEAR(profile_point(a, c, t).z, std::sqrt(z2), 1e-14);
  }
}

TEST(Unduloid, AbscissaMatchesFirstIntegral) {
  for (double a : {0.0, 0.05, 0.3, 0.7})
    for (double t : {-1.2, -0.4, 0.6, 1.5, 2.2, 3.0, 4.4}) {
      const auto p = profile_point(a, 1.0, t);
      const double ref = oracle::x_from_bulge(a, 1.0, p.z);
      EXPECT_NEAR(std::abs(p.x), ref, 1e-11) << "a=" << a << " t=" << t;
      EXPECT_EQ(p.x < 0, t < pi / 2);
    }
}

TEST(Unduloid, DomainErrors) {
  EXPECT_THROW(profile_point(1.2, 1.0, 0.0), DomainError);
  EXPECT_THROW(profile_point(-0.1, 1.0, 0.0), DomainError);
  EXPECT_THROW(profile_point(0.5, 1.0, 5.0), DomainError);
  EXPECT_THROW(full_period_area(2.0, 1.0), DomainError);
}

TEST(Unduloid, ContactExamples) {
  const auto same = contact_params(1.0, 0.01, 0.01);
  EXPECT_NEAR(same.a, 0.01, 1e-17);
  // a = (c - eps) h^2 / (c eps - h^2) = 0.99 * 2.5e-5 / 0.009975.
  const auto mid = contact_params(1.0, 0.005, 0.01);
  EXPECT_NEAR(mid.a, 0.99 * 2.5e-5 / (0.01 - 2.5e-5), 1e-18);
  EXPECT_NEAR(mid.a, 2.481203e-3, 1e-9);
  const auto tiny = contact_params(1.0, 1e-7, 0.01);
  EXPECT_LT(tiny.a, 1e-11);
  EXPECT_NEAR(tiny.t0, 3 * pi / 2, 1e-6);
}

TEST(Unduloid, ContactErrors) {
  EXPECT_THROW(contact_params(1.0, 0.02, 0.01), DomainError);
  EXPECT_THROW(contact_params(0.005, 0.001, 0.01), DomainError);
  EXPECT_THROW(contact_params(1.0, 0.0, 0.01), DomainError);
}

TEST(Unduloid, ContactIsTangent) {
  // The profile reaches height h at t0 and there its slope equals that of the
  // charge circle, whose center sits sqrt(eps^2 - h^2) inward.
  for (double c : {0.8, 1.0, 1.03})
    for (double eps : {0.002, 0.01, 0.05})
      for (double ratio : {0.02, 0.3, 0.7, 0.95}) {
        const double h = ratio * eps;
        const auto cp = contact_params(c, h, eps);
        EXPECT_GE(cp.t0, pi / 2);
        EXPECT_LE(cp.t0, 3 * pi / 2);
        const double a = cp.a;
        // Height through the exact amplitude, and through t0 (whose arcsin
        // form is ill-conditioned as t0 -> 3 pi / 2).
        const double z0 = std::sqrt(c * c * cp.u0.cn * cp.u0.cn + a * a * cp.u0.sn * cp.u0.sn);
        EXPECT_NEAR(z0 / h, 1.0, 1e-12);
        EXPECT_NEAR(profile_point(a, c, cp.t0).z / h, 1.0, 1e-6);
        EXPECT_NEAR(cp.t0 / 2 - pi / 4, std::atan2(cp.u0.sn, cp.u0.cn), 1e-7);
        const double profile_slope =
            std::sqrt((h - a) * (c - h) * (h + a) * (h + c)) / (h * h + a * c);
        const double circle_slope = std::sqrt(eps * eps - h * h) / h;
        EXPECT_NEAR(profile_slope / circle_slope, 1.0, 1e-8);
      }
}

TEST(Unduloid, FullPeriodLimits) {
  EXPECT_NEAR(full_period_area(0.0, 1.0), 4 * pi, 1e-12);
  EXPECT_NEAR(full_period_volume(0.0, 1.0), 4 * pi / 3, 1e-12);
  EXPECT_NEAR(full_period_area(0.0, 2.0), 16 * pi, 1e-12);
  for (double r : {0.5, 1.0, 1.7}) {
    EXPECT_NEAR(full_period_area(r, r) / (4 * pi * pi * r * r), 1.0, 1e-14);
    EXPECT_NEAR(full_period_volume(r, r) / (2 * pi * pi * r * r * r), 1.0, 1e-14);
  }
}

TEST(Unduloid, FullPeriodMatchesQuadrature) {
  for (int i = 0; i <= 19; ++i) {
    const double a = 0.05 * i;
    EXPECT_NEAR(full_period_area(a, 1.0) / oracle::period_area(a, 1.0), 1.0, 1e-8)
        << "a/c=" << a;
    EXPECT_NEAR(full_period_volume(a, 1.0) / oracle::period_volume(a, 1.0), 1.0, 1e-8)
        << "a/c=" << a;
  }
}

TEST(Unduloid, ScalingCovariance) {
  const double a = 0.3, c = 1.1, s = 2.5;
  for (double t : {-1.0, 0.4, 2.9}) {
    const auto p = profile_point(a, c, t), q = profile_point(s * a, s * c, t);
    EXPECT_NEAR(q.x, s * p.x, 1e-13);
    EXPECT_NEAR(q.z, s * p.z, 1e-13);
  }
  EXPECT_NEAR(full_period_area(s * a, s * c) / full_period_area(a, c), s * s, 1e-12);
  EXPECT_NEAR(full_period_volume(s * a, s * c) / full_period_volume(a, c), s * s * s,
              1e-12);
}

TEST(Unduloid, ProfileShape) {
  const double a = 0.2, c = 1.0;
  const auto rows = sample_profile(a, c, 401);
  ASSERT_EQ(rows.size(), 401u);
  EXPECT_DOUBLE_EQ(rows.front().t, -pi / 2);
  EXPECT_DOUBLE_EQ(rows.back().t, 3 * pi / 2);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].x, rows[i - 1].x);
  for (const auto& r : rows) {
    EXPECT_GE(r.z, a - 1e-15);
    EXPECT_LE(r.z, c + 1e-15);
  }
  EXPECT_NEAR(rows.front().z, a, 1e-15);
  EXPECT_NEAR(rows[200].z, c, 1e-15);
  EXPECT_NEAR(rows.back().z, a, 1e-15);
}

TEST(Unduloid, MeanCurvatureResidual) {
  EXPECT_LE(cmc_residual(0.2, 1.0, 0.3), 1e-5);
  EXPECT_LE(cmc_residual(0.2, 1.0, 1.2), 1e-5);
  EXPECT_LE(cmc_residual(0.7, 0.7, 0.5), 1e-12);
  EXPECT_THROW(cmc_residual(0.2, 1.0, pi / 2), DomainError);
  for (int i = 0; i < 20; ++i) {
    const double t = -pi / 2 + 0.05 + (2 * pi - 0.1) * (i + 0.5) / 20;
    if (std::abs(std::abs(std::sin(t)) - 1) < 1e-3) continue;
    EXPECT_LE(cmc_residual(0.35, 1.0, t), 1e-5) << "t=" << t;
  }
  UnduloidSection<double> s{0.2, 1.0, 0.3, 2.0, CaseKind::Case1, 0.3};
  EXPECT_DOUBLE_EQ(s.mean_curvature(), 1 / 1.2);
}

TEST(Unduloid, CsvExport) {
  std::ostringstream os;
  write_profile_csv(os, sample_profile(0.5, 1.0, 3));
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, 6), "t,x,z\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}
