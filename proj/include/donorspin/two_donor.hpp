#pragma once

// Two exchange-coupled donors a and b, each an electron spin S and a nuclear
// spin I (all spin 1/2):
//
//   H = 2 mu_B B (S_za + S_zb) + J S_a.S_b
//       - g_N mu_N B (I_za + I_zb) + A_a I_a.S_a + A_b I_b.S_b
//
// Product basis |M_a, M_b, m_a, m_b>, lexicographic with -1/2 before +1/2:
// index = 8 b(M_a) + 4 b(M_b) + 2 b(m_a) + b(m_b), b(-1/2) = 0, b(+1/2) = 1.
//
// Coupled basis |S, M; I, m> from the two-spin tables
//   |1,+1> = |uu>, |1,0> = (|ud> + |du>)/sqrt2, |1,-1> = |dd>,
//   |0,0>  = (|ud> - |du>)/sqrt2,
// with the donor-a spin written first.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "donorspin/core_params.hpp"
#include "donorspin/numerics.hpp"

namespace donorspin {

struct TwoDonorConfig {
  double B = 0.0;     // T
  double J = 0.0;     // MHz
  double A_a = 0.0;   // MHz
  double A_b = 0.0;   // MHz
  double g_N = 0.0;
};

inline TwoDonorConfig two_donor_config(double B, double J, const DonorParams& donor) {
  return {B, J, donor.A, donor.A, donor.g_N};
}

inline void validate(const TwoDonorConfig& cfg) {
  if (!(cfg.A_a >= 0.0) || !(cfg.A_b >= 0.0)) throw InputError("hyperfine constants must be >= 0");
  if (!std::isfinite(cfg.B) || !std::isfinite(cfg.J) || !std::isfinite(cfg.g_N)) {
    throw InputError("non-finite two-donor parameter");
  }
}

struct CoupledBasisState {
  int S;
  int M;
  int I;
  int m;

  friend bool operator==(const CoupledBasisState&, const CoupledBasisState&) = default;
};

inline std::string label(const CoupledBasisState& s) {
  return "|" + std::to_string(s.S) + "," + std::to_string(s.M) + ";" + std::to_string(s.I) +
         "," + std::to_string(s.m) + ">";
}

/// All sixteen coupled labels.
inline std::vector<CoupledBasisState> coupled_basis() {
  static constexpr std::array<std::array<int, 2>, 4> pairs{{{1, 1}, {1, 0}, {1, -1}, {0, 0}}};
  std::vector<CoupledBasisState> out;
  for (const auto& e : pairs)
    for (const auto& n : pairs) out.push_back({e[0], e[1], n[0], n[1]});
  return out;
}

/// Basis of the reduced m + M = -1 problem, in matrix order.
inline constexpr std::array<CoupledBasisState, 4> kReducedBasis{{
    {1, -1, 0, 0},
    {1, -1, 1, 0},
    {1, 0, 1, -1},
    {0, 0, 1, -1},
}};

namespace detail {

// Spin slot order inside a product index: S_a, S_b, I_a, I_b.
inline int spin_bit(std::size_t index, int slot) {
  return static_cast<int>((index >> (3 - slot)) & 1U);
}

inline double spin_z(std::size_t index, int slot) { return spin_bit(index, slot) - 0.5; }

// Adds coeff * X_p . X_q for two spin-1/2 slots.
inline void add_spin_dot(SymmetricMatrix& h, int p, int q, double coeff) {
  for (std::size_t i = 0; i < 16; ++i) {
    h.add(i, i, coeff * spin_z(i, p) * spin_z(i, q));
    if (spin_bit(i, p) == 1 && spin_bit(i, q) == 0) {
      const std::size_t j = i ^ (std::size_t{1} << (3 - p)) ^ (std::size_t{1} << (3 - q));
      h.add(i, j, 0.5 * coeff);
    }
  }
}

// Two-spin state over index 2 b(first) + b(second).
inline std::array<double, 4> pair_state(int total, int projection) {
  const double r = 1.0 / std::sqrt(2.0);
  if (total == 1 && projection == 1) return {0.0, 0.0, 0.0, 1.0};
  if (total == 1 && projection == 0) return {0.0, r, r, 0.0};
  if (total == 1 && projection == -1) return {1.0, 0.0, 0.0, 0.0};
  if (total == 0 && projection == 0) return {0.0, -r, r, 0.0};
  throw InputError("invalid two-spin quantum numbers");
}

}  // namespace detail

/// Total projection m + M of a product basis state.
inline int total_projection(std::size_t index) {
  double sum = 0.0;
  for (int slot = 0; slot < 4; ++slot) sum += detail::spin_z(index, slot);
  return static_cast<int>(std::lround(sum));
}

/// Product-basis amplitudes of a coupled state.
inline std::vector<double> coupled_state_vector(const CoupledBasisState& s) {
  const auto e = detail::pair_state(s.S, s.M);
  const auto n = detail::pair_state(s.I, s.m);
  std::vector<double> v(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) v[4 * i + j] = e[i] * n[j];
  return v;
}

inline SymmetricMatrix two_donor_hamiltonian(const TwoDonorConfig& cfg,
                                             const PhysicalConstants& k = kPaperConstants) {
  validate(cfg);
  const double ze = electron_zeeman(cfg.B, k);
  const double zn = nuclear_zeeman(cfg.g_N, cfg.B, k);
  SymmetricMatrix h(16);
  for (std::size_t i = 0; i < 16; ++i) {
    h.add(i, i, ze * (detail::spin_z(i, 0) + detail::spin_z(i, 1)) -
                    zn * (detail::spin_z(i, 2) + detail::spin_z(i, 3)));
  }
  detail::add_spin_dot(h, 0, 1, cfg.J);
  detail::add_spin_dot(h, 0, 2, cfg.A_a);
  detail::add_spin_dot(h, 1, 3, cfg.A_b);
  return h;
}

struct SpinBlock {
  int total_projection;
  std::vector<std::size_t> indices;  // product-basis indices, ascending
  SymmetricMatrix matrix;
};

struct BlockDecomposition {
  std::vector<SpinBlock> blocks;  // m + M = -2, -1, 0, +1, +2
};

/// Splits a 16x16 two-donor Hamiltonian into its five m + M sectors.
/// Throws StructureError if any element couples different sectors.
inline BlockDecomposition block_decompose(const SymmetricMatrix& h) {
  if (h.dim() != 16) throw InputError("block_decompose expects a 16x16 matrix");
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = i + 1; j < 16; ++j) {
      if (total_projection(i) != total_projection(j) && std::abs(h(i, j)) > 1e-12) {
        throw StructureError("Hamiltonian couples m+M sectors " +
                             std::to_string(total_projection(i)) + " and " +
                             std::to_string(total_projection(j)));
      }
    }
  }
  BlockDecomposition out;
  for (int sector = -2; sector <= 2; ++sector) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < 16; ++i)
      if (total_projection(i) == sector) idx.push_back(i);
    SymmetricMatrix block(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = r; c < idx.size(); ++c) block.set(r, c, h(idx[r], idx[c]));
    out.blocks.push_back({sector, std::move(idx), std::move(block)});
  }
  return out;
}

/// Union of the block spectra, ascending.
inline std::vector<double> block_spectrum(const BlockDecomposition& d) {
  std::vector<double> all;
  for (const auto& b : d.blocks) {
    const auto v = eigenvalues(b.matrix);
    all.insert(all.end(), v.begin(), v.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

struct ElectronicLevel {
  int S;
  int M;
  double energy;  // MHz
};

/// E0(S, M) = J [S(S+1)/2 - 3/4] + 2 mu_B B M, ordered singlet, then
/// triplet M = -1, 0, +1.
inline std::array<ElectronicLevel, 4> unperturbed_levels(
    double B, double J, const PhysicalConstants& k = kPaperConstants) {
  const double ze = electron_zeeman(B, k);
  return {{{0, 0, -0.75 * J},
           {1, -1, 0.25 * J - ze},
           {1, 0, 0.25 * J},
           {1, 1, 0.25 * J + ze}}};
}

enum class GroundRegime { TripletGround, SingletGround };

/// Triplet ground iff J < 2 mu_B B.
inline GroundRegime ground_regime(const TwoDonorConfig& cfg,
                                  const PhysicalConstants& k = kPaperConstants) {
  return cfg.J < electron_zeeman(cfg.B, k) ? GroundRegime::TripletGround
                                           : GroundRegime::SingletGround;
}

struct LevelCorrection {
  CoupledBasisState state;
  double shift;  // MHz
};

/// First-order hyperfine corrections to the electronic ground level.
inline std::array<LevelCorrection, 4> first_order_splittings(
    const TwoDonorConfig& cfg, GroundRegime regime,
    const PhysicalConstants& k = kPaperConstants) {
  validate(cfg);
  if (regime != ground_regime(cfg, k)) {
    throw InputError("requested regime does not match J relative to 2 mu_B B");
  }
  const double zn = nuclear_zeeman(cfg.g_N, cfg.B, k);
  if (regime == GroundRegime::TripletGround) {
    const double outer = zn + 0.25 * (cfg.A_a + cfg.A_b);
    return {{{{1, -1, 1, -1}, outer},
             {{1, -1, 0, 0}, 0.0},
             {{1, -1, 1, 0}, 0.0},
             {{1, -1, 1, 1}, -outer}}};
  }
  return {{{{0, 0, 1, -1}, zn},
           {{0, 0, 0, 0}, 0.0},
           {{0, 0, 1, 0}, 0.0},
           {{0, 0, 1, 1}, -zn}}};
}

struct MatrixElement {
  CoupledBasisState bra;
  CoupledBasisState ket;
  double value;  // MHz
};

/// The four off-diagonal hyperfine elements connecting the electronic singlet
/// to the M = -1 triplet inside equal-(m + M) sectors.
inline std::array<MatrixElement, 4> nonsecular_elements(const TwoDonorConfig& cfg) {
  const double sum = 0.25 * (cfg.A_a + cfg.A_b);
  const double diff = 0.25 * (cfg.A_a - cfg.A_b);
  return {{{{0, 0, 0, 0}, {1, -1, 1, 1}, -sum},
           {{0, 0, 1, -1}, {1, -1, 1, 0}, diff},
           {{0, 0, 1, -1}, {1, -1, 0, 0}, sum},
           {{0, 0, 1, 0}, {1, -1, 1, 1}, diff}}};
}

/// Reduced 4x4 Hamiltonian in the basis kReducedBasis. The printed form of this
/// matrix is not symmetric in its (2,4) entry; the upper triangle is used.
/// For A_a != A_b the (A_a - A_b)/4 terms at (1,2), (1,3) and (2,4) carry the
/// opposite sign to a literal projection of the full Hamiltonian (see
/// projected_reduced_hamiltonian). The spectra then differ slightly (well
/// below 0.1 MHz for donor-scale A); for A_a == A_b the matrices are identical.
inline SymmetricMatrix reduced_hamiltonian(const TwoDonorConfig& cfg,
                                           const PhysicalConstants& k = kPaperConstants) {
  validate(cfg);
  const double ze = electron_zeeman(cfg.B, k);
  const double zn = nuclear_zeeman(cfg.g_N, cfg.B, k);
  const double sum = 0.25 * (cfg.A_a + cfg.A_b);
  const double diff = 0.25 * (cfg.A_a - cfg.A_b);
  const double J = cfg.J;
  return SymmetricMatrix{
      {0.25 * J - ze, diff, -diff, sum},
      {diff, 0.25 * J - ze, sum, -diff},
      {-diff, sum, zn + 0.25 * J, -diff},
      {sum, -diff, -diff, zn - 0.75 * J},
  };
}

/// <i| H |j> for coupled states i, j of kReducedBasis, from the full 16x16.
inline SymmetricMatrix projected_reduced_hamiltonian(
    const TwoDonorConfig& cfg, const PhysicalConstants& k = kPaperConstants) {
  const auto h = two_donor_hamiltonian(cfg, k);
  std::array<std::vector<double>, 4> basis;
  for (std::size_t i = 0; i < 4; ++i) basis[i] = coupled_state_vector(kReducedBasis[i]);
  SymmetricMatrix out(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) s += basis[i][r] * h(r, c) * basis[j][c];
      out.set(i, j, s);
    }
  }
  return out;
}

struct ClosedFormEigs {
  double Es_plus;
  double Es_minus;
  double Ea_plus;
  double Ea_minus;
};

namespace detail {

inline double require_equal_hyperfine(const TwoDonorConfig& cfg) {
  if (std::abs(cfg.A_a - cfg.A_b) > 1e-12 * std::max(1.0, std::abs(cfg.A_a))) {
    throw InputError("closed-form eigenvalues need A_a == A_b");
  }
  return cfg.A_a;
}

}  // namespace detail

/// Eigenvalues of the reduced matrix for A_a = A_b = A:
///   E_s(+/-) = zn/2 + J/4 - ze/2 +/- sqrt((ze/2 + zn/2)^2 + (A/2)^2)
///   E_a(+/-) = zn/2 - J/4 - ze/2 +/- sqrt((ze/2 + zn/2 - J/2)^2 + (A/2)^2)
/// with ze = 2 mu_B B and zn = g_N mu_N B (MHz). The s pair spans
/// |1,-1;1,0>, |1,0;1,-1>; the a pair spans |1,-1;0,0>, |0,0;1,-1>.
inline ClosedFormEigs closed_form_eigs(const TwoDonorConfig& cfg,
                                       const PhysicalConstants& k = kPaperConstants) {
  validate(cfg);
  const double A = detail::require_equal_hyperfine(cfg);
  const double half_ze = 0.5 * electron_zeeman(cfg.B, k);
  const double half_zn = 0.5 * nuclear_zeeman(cfg.g_N, cfg.B, k);
  const double u = half_ze + half_zn;
  const double rs = std::hypot(u, 0.5 * A);
  const double ra = std::hypot(u - 0.5 * cfg.J, 0.5 * A);
  const double cs = half_zn + 0.25 * cfg.J - half_ze;
  const double ca = half_zn - 0.25 * cfg.J - half_ze;
  return {cs + rs, cs - rs, ca + ra, ca - ra};
}

/// Residual of the factorized characteristic quartic
///   [(J/4 - ze - E)(zn - J/4 - E) - A^2/4]^2 - [(J/4 - ze - E) J/2]^2
/// relative to the larger of its two terms.
inline double quartic_relative_residual(const TwoDonorConfig& cfg, double E,
                                        const PhysicalConstants& k = kPaperConstants) {
  const double A = detail::require_equal_hyperfine(cfg);
  const double ze = electron_zeeman(cfg.B, k);
  const double zn = nuclear_zeeman(cfg.g_N, cfg.B, k);
  const double x = 0.25 * cfg.J - ze - E;
  const double y = zn - 0.25 * cfg.J - E;
  const double t1 = std::pow(x * y - 0.25 * A * A, 2);
  const double t2 = std::pow(x * 0.5 * cfg.J, 2);
  const double scale = std::max({t1, t2, 1e-300});
  return std::abs(t1 - t2) / scale;
}

enum class NuJVariant { Exact, SmallExchange, AtCrossing, LargeExchange };

/// Splitting E_s(-) - E_a(-) of |1,-1;1,0> and |1,-1;0,0>, MHz.
/// Asymptotic variants:
///   SmallExchange  (A/2)^2 / (2 mu_B B - J) - (A/2)^2 / (2 mu_B B)
///   AtCrossing     A/2
///   LargeExchange  J - 2 mu_B B
inline double nu_J(const TwoDonorConfig& cfg, NuJVariant variant = NuJVariant::Exact,
                   const PhysicalConstants& k = kPaperConstants) {
  const double A = detail::require_equal_hyperfine(cfg);
  const double ze = electron_zeeman(cfg.B, k);
  switch (variant) {
    case NuJVariant::Exact: {
      const auto e = closed_form_eigs(cfg, k);
      return e.Es_minus - e.Ea_minus;
    }
    case NuJVariant::SmallExchange: {
      const double a2 = 0.25 * A * A;
      return a2 / (ze - cfg.J) - a2 / ze;
    }
    case NuJVariant::AtCrossing:
      return 0.5 * A;
    case NuJVariant::LargeExchange:
      return cfg.J - ze;
  }
  return 0.0;
}

struct Anticrossing {
  double J;    // MHz, location of the minimum gap
  double gap;  // MHz
};

/// Minimum separation of the anticrossing pair near J = 2 mu_B B, found by
/// golden-section search on the numeric reduced spectrum over +/-5% of the
/// crossing. The pair is the lowest and third-lowest level of the reduced
/// problem there, with the symmetric level in between.
inline Anticrossing find_anticrossing(TwoDonorConfig cfg,
                                      const PhysicalConstants& k = kPaperConstants) {
  const double jc = electron_zeeman(cfg.B, k);
  if (!(jc > 0.0)) throw InputError("anticrossing search requires B > 0");
  auto gap = [&](double J) {
    cfg.J = J;
    const auto ev = eigenvalues(reduced_hamiltonian(cfg, k));
    return ev[2] - ev[0];
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.95 * jc;
  double hi = 1.05 * jc;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = gap(x1);
  double f2 = gap(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-9 * jc; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = gap(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = gap(x2);
    }
  }
  const double J = 0.5 * (lo + hi);
  return {J, gap(J)};
}

// ---------------------------------------------------------------------------
// Adiabatic passage as eigenvector continuation.

struct TrackPath {
  double B = 2.0;
  double A_a = 116.0;
  double A_b = 116.0;
  double g_N = 2.26;
  double J_lo = 1.0e4;   // MHz
  double J_hi = 1.0e5;   // MHz
  std::size_t points = 2000;
};

struct TrackedState {
  CoupledBasisState initial;
  double initial_weight;          // |<initial|v(J_lo)>|^2
  CoupledBasisState final_label;  // dominant label at J_hi
  double final_weight;            // |<final_label|v(J_hi)>|^2
  std::vector<double> final_vector;
};

struct TrackResult {
  std::vector<double> grid;       // J values, MHz
  std::vector<TrackedState> states;
  double min_step_overlap;
};

/// J grid from J_lo to J_hi. If the crossing J = 2 mu_B B lies inside, half of
/// the points go to the window within +/-5% of it; the rest are spaced
/// geometrically outside (linearly when J_lo <= 0).
inline std::vector<double> track_grid(double J_lo, double J_hi, double J_cross,
                                      std::size_t points) {
  if (!(J_hi > J_lo)) throw InputError("track grid needs J_lo < J_hi");
  if (points < 1000) throw InputError("track grid needs at least 1000 points");
  auto segment = [](double from, double to, std::size_t n, std::vector<double>& out) {
    const bool geometric = from > 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n);
      out.push_back(geometric ? from * std::pow(to / from, t) : from + (to - from) * t);
    }
  };
  std::vector<double> grid;
  const double w_lo = std::max(J_lo, 0.95 * J_cross);
  const double w_hi = std::min(J_hi, 1.05 * J_cross);
  if (J_cross > J_lo && J_cross < J_hi) {
    const std::size_t inner = points / 2;
    const std::size_t below = w_lo > J_lo ? (points - inner) / 2 : 0;
    const std::size_t above = points - inner - below - 1;
    if (below > 0) segment(J_lo, w_lo, below, grid);
    segment(w_lo, w_hi, above > 0 ? inner : inner + (points - inner - below - 1), grid);
    if (above > 0 && w_hi < J_hi) segment(w_hi, J_hi, above, grid);
  } else {
    segment(J_lo, J_hi, points - 1, grid);
  }
  grid.push_back(J_hi);
  return grid;
}

/// Follows each eigenvector of the reduced Hamiltonian from J_lo to J_hi by
/// maximal overlap between neighbouring grid points. Throws GridError when a
/// step overlap drops below 0.6 or two states claim the same eigenvector.
inline TrackResult adiabatic_track(const TrackPath& path,
                                   const PhysicalConstants& k = kPaperConstants) {
  constexpr double kMinOverlap = 0.6;
  TwoDonorConfig cfg{path.B, path.J_lo, path.A_a, path.A_b, path.g_N};
  validate(cfg);

  TrackResult result;
  result.grid = track_grid(path.J_lo, path.J_hi, electron_zeeman(path.B, k), path.points);
  result.min_step_overlap = 1.0;

  auto solve = [&](double J) {
    cfg.J = J;
    return eig_sym(reduced_hamiltonian(cfg, k));
  };
  auto overlap = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };

  auto es = solve(result.grid.front());
  std::array<std::vector<double>, 4> tracked;
  std::array<double, 4> initial_weight{};
  for (std::size_t label = 0; label < 4; ++label) {
    std::size_t best = 0;
    for (std::size_t v = 1; v < 4; ++v)
      if (std::abs(es.vectors[v][label]) > std::abs(es.vectors[best][label])) best = v;
    tracked[label] = es.vectors[best];
    initial_weight[label] = es.vectors[best][label] * es.vectors[best][label];
  }

  for (std::size_t g = 1; g < result.grid.size(); ++g) {
    es = solve(result.grid[g]);
    std::array<bool, 4> claimed{};
    for (auto& vec : tracked) {
      std::size_t best = 0;
      double best_ov = 0.0;
      for (std::size_t v = 0; v < 4; ++v) {
        const double ov = std::abs(overlap(vec, es.vectors[v]));
        if (ov > best_ov) {
          best_ov = ov;
          best = v;
        }
      }
      if (best_ov < kMinOverlap || claimed[best]) {
        throw GridError("eigenvector continuation ambiguous near J = " +
                        std::to_string(result.grid[g]) + " MHz; refine the grid");
      }
      claimed[best] = true;
      result.min_step_overlap = std::min(result.min_step_overlap, best_ov);
      const double sign = overlap(vec, es.vectors[best]) < 0.0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < 4; ++i) vec[i] = sign * es.vectors[best][i];
    }
  }

  for (std::size_t label = 0; label < 4; ++label) {
    const auto& v = tracked[label];
    std::size_t dominant = 0;
    for (std::size_t i = 1; i < 4; ++i)
      if (std::abs(v[i]) > std::abs(v[dominant])) dominant = i;
    result.states.push_back({kReducedBasis[label], initial_weight[label],
                             kReducedBasis[dominant], v[dominant] * v[dominant], v});
  }
  return result;
}

}  // namespace donorspin
