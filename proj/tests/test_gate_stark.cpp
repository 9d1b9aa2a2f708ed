#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "donorspin/gate_stark.hpp"
#include "donorspin/numerics.hpp"

using namespace donorspin;

namespace {

constexpr double kNuA = 92.5092156079;  // nu_A at 2 T, P31 in Si

GateGeometry geometry(double V, double V_FB = 0.0) {
  GateGeometry g;
  g.V = V;
  g.V_FB = V_FB;
  return g;
}

}  // namespace

TEST(GatePotential, OnAxisAtDonor) {
  EXPECT_NEAR(gate_potential(0.0, 10.0, geometry(1.0)), 2.0 / M_PI * std::atan(0.5), 1e-14);
  EXPECT_NEAR(gate_potential(0.0, 10.0, geometry(1.0)), 0.295167235301, 1e-12);
}

TEST(GatePotential, OffAxisValues) {
  EXPECT_NEAR(gate_potential(3.0, 4.0, geometry(1.0)), 0.535440945602, 1e-12);
  EXPECT_NEAR(gate_potential(7.0, 0.0, geometry(1.0)), 0.506496571142, 1e-12);
}

TEST(GatePotential, ConductorSurfaceAndFarField) {
  EXPECT_DOUBLE_EQ(gate_potential(0.0, 0.0, geometry(0.8)), 0.8);
  EXPECT_DOUBLE_EQ(gate_potential(2.5, 0.0, geometry(0.8)), 0.8);
  const double z = 1e5;
  EXPECT_NEAR(gate_potential(0.0, z, geometry(1.0)) / (2.0 / M_PI * 5.0 / z), 1.0, 1e-8);
}

TEST(GatePotential, DomainErrors) {
  EXPECT_THROW(gate_potential(0.0, -1.0, geometry(1.0)), DomainError);
  EXPECT_THROW(gate_potential(-1.0, 1.0, geometry(1.0)), DomainError);
  EXPECT_THROW(gate_potential(NAN, 1.0, geometry(1.0)), DomainError);
}

TEST(GatePotential, EvenInRadius) {
  // The lateral derivative vanishes on the axis: phi(h) - phi(0) is O(h^2).
  const auto g = geometry(1.0);
  const double p0 = gate_potential(0.0, 10.0, g);
  const double d1 = gate_potential(1e-3, 10.0, g) - p0;
  const double d2 = gate_potential(2e-3, 10.0, g) - p0;
  EXPECT_NEAR(d2 / d1, 4.0, 1e-4);
}

TEST(GatePotential, Harmonic) {
  const auto g = geometry(1.0);
  const double h = 1e-3;
  for (auto [rho, z] : std::vector<std::pair<double, double>>{{2.0, 3.0}, {6.0, 1.5}, {1.0, 12.0}}) {
    const double c = gate_potential(rho, z, g);
    const double prr = (gate_potential(rho + h, z, g) - 2 * c + gate_potential(rho - h, z, g)) / (h * h);
    const double pr = (gate_potential(rho + h, z, g) - gate_potential(rho - h, z, g)) / (2 * h);
    const double pzz = (gate_potential(rho, z + h, g) - 2 * c + gate_potential(rho, z - h, g)) / (h * h);
    EXPECT_NEAR(prr + pr / rho + pzz, 0.0, 1e-5 * std::abs(pzz) + 1e-8);
  }
}

TEST(FieldAtDonor, DefaultGeometryPerVolt) {
  const auto f = field_at_donor(geometry(1.0));
  EXPECT_NEAR(f.E_c, 254647.908947, 1e-5);
  EXPECT_NEAR(f.E_c / 2.5e5, 1.0, 0.03);
  EXPECT_NEAR(f.E_c_prime, 407436654315.0, 1.0);
  EXPECT_NEAR(f.phi, 0.295167235301, 1e-12);
}

TEST(FieldAtDonor, ZeroBias) {
  const auto f = field_at_donor(geometry(0.0));
  EXPECT_EQ(f.phi, 0.0);
  EXPECT_EQ(f.E_c, 0.0);
  EXPECT_EQ(f.E_c_prime, 0.0);
}

TEST(FieldAtDonor, FiniteDifferenceOfPotential) {
  for (auto [a, c] : std::vector<std::pair<double, double>>{{5.0, 10.0}, {5.0, 1.0}, {10.0, 10.0}}) {
    GateGeometry g;
    g.a = a;
    g.c = c;
    g.V = 1.0;
    const double h = 1e-4 * c;
    const auto phi = [&](double z) { return gate_potential(0.0, z, g); };
    const double field = -(phi(c + h) - phi(c - h)) / (2.0 * h) / kCmPerNm;
    const double curv = (phi(c + h) - 2.0 * phi(c) + phi(c - h)) / (h * h) / (kCmPerNm * kCmPerNm);
    const auto f = field_at_donor(g);
    EXPECT_NEAR(field / f.E_c, 1.0, 1e-6);
    EXPECT_NEAR(curv / f.E_c_prime, 1.0, 1e-6);
  }
}

TEST(FieldAtDonor, InvalidGeometry) {
  GateGeometry g;
  g.a = 0.0;
  EXPECT_THROW(field_at_donor(g), InputError);
}

TEST(Stark, Fraction) {
  EXPECT_EQ(stark_fraction(0.0), 0.0);
  EXPECT_NEAR(stark_fraction(2.55e5), -0.2015775, 1e-7);
  EXPECT_NEAR(stark_fraction(2.55e5) / -0.19, 1.0, 0.07);
  for (double E : {1e3, 2.5e5, 7e5}) EXPECT_EQ(stark_fraction(-E), stark_fraction(E));
  EXPECT_TRUE(stark_field_small(2.5e5));
  EXPECT_FALSE(stark_field_small(9e5));
}

TEST(Stark, DetuningAtOneVolt) {
  const auto d = resonance_detuning(geometry(1.0), 92.6);
  EXPECT_NEAR(d.delta_nu, -18.61456574, 1e-7);
  EXPECT_FALSE(d.beyond_second_order);
  EXPECT_NEAR(detuning_coefficient(geometry(0.0), kNuA), -18.5963161549, 1e-8);
}

TEST(Stark, DetuningAgainstPublishedCoefficient) {
  EXPECT_NEAR(resonance_detuning(geometry(1.0), 92.6).delta_nu / -17.5, 1.0, 0.05);
}

TEST(Stark, UnbiasedAndEven) {
  EXPECT_EQ(resonance_detuning(geometry(0.0), kNuA).delta_nu, 0.0);
  for (double V : {0.1, 0.4, 1.3}) {
    EXPECT_DOUBLE_EQ(resonance_detuning(geometry(V), kNuA).delta_nu,
                     resonance_detuning(geometry(-V), kNuA).delta_nu);
    EXPECT_DOUBLE_EQ(resonance_detuning(geometry(V, 0.6), kNuA).delta_nu,
                     resonance_detuning(geometry(-V, -0.6), kNuA).delta_nu);
  }
}

TEST(Stark, ValidityFlag) {
  EXPECT_FALSE(resonance_detuning(geometry(1.2), kNuA).beyond_second_order);
  EXPECT_TRUE(resonance_detuning(geometry(1.3), kNuA).beyond_second_order);
}

TEST(Stark, FlatBandExpansionCoefficients) {
  std::vector<double> v;
  std::vector<double> d;
  for (int i = 0; i <= 20; ++i) {
    v.push_back(0.05 * i);
    d.push_back(resonance_detuning(geometry(v.back(), 0.6), kNuA).delta_nu);
  }
  const auto c = fit_quadratic(v, d);
  const double k = detuning_coefficient(geometry(0.0), kNuA);
  EXPECT_NEAR(c[0], 0.36 * k, 1e-9);
  EXPECT_NEAR(c[1], 1.2 * k, 1e-9);
  EXPECT_NEAR(c[2], k, 1e-9);
  EXPECT_NEAR(c[0] / -6.3, 1.0, 0.05);
  EXPECT_NEAR(c[1] / -21.0, 1.0, 0.05);
  EXPECT_NEAR(c[2] / -17.5, 1.0, 0.05);
}

TEST(Stark, TuningSlopeMatchesFiniteDifference) {
  for (double V : {0.0, 0.3, 0.9}) {
    const auto g = geometry(V, 0.6);
    const double h = 1e-4;
    const double fd = (resonance_detuning(geometry(V + h, 0.6), kNuA).delta_nu -
                       resonance_detuning(geometry(V - h, 0.6), kNuA).delta_nu) /
                      (2.0 * h);
    EXPECT_NEAR(fd / tuning_slope(g, kNuA), 1.0, 1e-6);
  }
}

TEST(Placement, Regimes) {
  GateGeometry g;
  EXPECT_EQ(placement_sensitivity(0.0, g), 0.0);
  g.a = 5.0;
  g.c = 1.0;
  EXPECT_NEAR(placement_sensitivity(1.0, g), 0.08, 1e-15);
  g.a = 10.0;
  g.c = 10.0;
  EXPECT_NEAR(placement_sensitivity(1.0, g), 0.02, 1e-15);
  EXPECT_THROW(placement_sensitivity(-1.0, g), InputError);
}
