#pragma once

// Parameter sweeps over the library's operations.
//
// A sweep names a target operation, fixes some of its parameters, varies one
// numeric parameter over a linear or logarithmic grid, and collects named
// observables into a SweepTable. Rows are independent; a row whose evaluation
// raises a donorspin::Error is kept, filled with NaN and flagged.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "donorspin/core_params.hpp"
#include "donorspin/effective_mass.hpp"
#include "donorspin/gate_stark.hpp"
#include "donorspin/single_donor.hpp"
#include "donorspin/two_donor.hpp"

namespace donorspin {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Spacing { Linear, Log };

struct SweepVariable {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 0;
  Spacing spacing = Spacing::Linear;
};

struct SweepSpec {
  std::string target;
  std::string constants = "paper";
  std::map<std::string, std::string> fixed;
  SweepVariable variable;
  std::vector<std::string> outputs;  // empty: every observable of the target
};

struct SweepColumn {
  std::string name;
  std::vector<double> values;
};

struct SweepMeta {
  std::string spec;          // canonical spec text
  std::string constant_set;  // e.g. "paper-1"
  std::string version;
  std::map<std::size_t, std::string> flags;  // row -> error message
};

struct SweepTable {
  std::vector<SweepColumn> columns;
  SweepMeta meta;

  [[nodiscard]] std::size_t rows() const {
    return columns.empty() ? 0 : columns.front().values.size();
  }

  [[nodiscard]] const SweepColumn& column(std::string_view name) const {
    for (const auto& c : columns)
      if (c.name == name) return c;
    throw SpecError("table has no column '" + std::string(name) + "'");
  }

  [[nodiscard]] bool has_flagged_rows() const { return !meta.flags.empty(); }
};

// ---------------------------------------------------------------------------
// Parameter access

namespace detail {

inline double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  if (s == "nan" || s == "NaN") return NAN;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw SpecError("'" + std::string(what) + "' expects a number, got '" + s + "'");
  }
  return v;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Resolved parameter values for one evaluation.
class ParamValues {
 public:
  explicit ParamValues(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  [[nodiscard]] double number(const std::string& name) const {
    return detail::parse_number(text(name), name);
  }

  [[nodiscard]] const std::string& text(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end()) throw SpecError("parameter '" + name + "' is not set");
    return it->second;
  }

  void set(const std::string& name, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    values_[name] = std::string(buf, res.ptr);
  }

 private:
  std::map<std::string, std::string> values_;
};

enum class ParamKind { Number, Text };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  std::string default_value;
  std::string unit;
};

struct Target {
  std::string id;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<std::string> observables;
  std::function<std::vector<double>(const ParamValues&, const PhysicalConstants&)> evaluate;

  [[nodiscard]] const ParamSpec* param(std::string_view name) const {
    for (const auto& p : params)
      if (p.name == name) return &p;
    return nullptr;
  }
};

namespace detail {

inline void validate_text_param(const std::string& name, const std::string& value) {
  if (name == "donor") (void)donor_params(value);
  if (name == "material") (void)material_params(value);
}

inline const DonorParams& donor_of(const ParamValues& p) { return donor_params(p.text("donor")); }

inline double or_default(double value, double fallback) {
  return std::isnan(value) ? fallback : value;
}

inline TwoDonorConfig two_donor_of(const ParamValues& p) {
  const auto& donor = donor_of(p);
  return {p.number("B"), p.number("J"), or_default(p.number("A_a"), donor.A),
          or_default(p.number("A_b"), donor.A), donor.g_N};
}

inline ExchangeModel exchange_of(const ParamValues& p, const PhysicalConstants& k) {
  const auto& material = material_params(p.text("material"));
  return exchange_model(or_default(p.number("a_t"), default_exchange_radius(material.host)),
                        material.eps_s, k);
}

inline std::vector<std::string> numbered(std::string_view stem, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", i);
    out.push_back(std::string(stem) + buf);
  }
  return out;
}

inline std::vector<std::string> concat(std::vector<std::string> a,
                                       const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::vector<Target> build_targets() {
  using PV = const ParamValues&;
  using PC = const PhysicalConstants&;
  const ParamSpec B{"B", ParamKind::Number, "2", "T"};
  const ParamSpec donor{"donor", ParamKind::Text, "p31-si", ""};
  const ParamSpec material{"material", ParamKind::Text, "si", ""};
  const ParamSpec J{"J", ParamKind::Number, "30000", "MHz"};
  const ParamSpec A_a{"A_a", ParamKind::Number, "nan", "MHz"};
  const ParamSpec A_b{"A_b", ParamKind::Number, "nan", "MHz"};
  const ParamSpec a_t{"a_t", ParamKind::Number, "nan", "nm"};
  const ParamSpec gate_a{"a", ParamKind::Number, "5", "nm"};
  const ParamSpec gate_c{"c", ParamKind::Number, "10", "nm"};

  std::vector<Target> t;

  t.push_back({"breit_rabi_levels",
               "Single-donor Breit-Rabi levels; X overrides B when set",
               {B, {"X", ParamKind::Number, "nan", ""}, donor},
               {"B", "X", "E_1_p1", "E_1_0", "E_1_m1", "E_0_0", "nu_A"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto& d = donor_of(p);
                 const double X = p.number("X");
                 const FieldConfig f = std::isnan(X) ? FieldConfig{p.number("B")}
                                                     : field_for_x(X, d, k);
                 const auto lv = breit_rabi_levels(f, d, k);
                 return {f.B,
                         lv.X,
                         lv.energy(1, 1),
                         lv.energy(1, 0),
                         lv.energy(1, -1),
                         lv.energy(0, 0),
                         lv.energy(1, -1) - lv.energy(0, 0)};
               }});

  t.push_back({"single_donor_spectrum",
               "Numeric eigenvalues of the 4x4 single-donor Hamiltonian",
               {B, donor},
               {"eig_0", "eig_1", "eig_2", "eig_3", "trace"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto h = single_donor_hamiltonian({p.number("B")}, donor_of(p), k);
                 const auto ev = eigenvalues(h);
                 return {ev[0], ev[1], ev[2], ev[3], h.trace()};
               }});

  t.push_back({"nuclear_resonance",
               "nu_A (exact and asymptotic) and sublattice frequencies",
               {B, donor},
               {"nu_A", "nu_A_asymptotic", "nu_A_plus", "nu_A_minus", "gain", "T_polarization"},
               [](PV p, PC k) -> std::vector<double> {
                 const FieldConfig f{p.number("B")};
                 const auto& d = donor_of(p);
                 const auto sub = sublattice_frequencies(f, d, k);
                 return {nuclear_resonance_frequency(f, d, ResonanceVariant::Exact, k),
                         nuclear_resonance_frequency(f, d, ResonanceVariant::Asymptotic, k),
                         sub.plus,
                         sub.minus,
                         gain_factor(f, d, 0.5, k),
                         electron_polarization_temperature(f, k)};
               }});

  t.push_back({"resonance_detuning",
               "Gate-voltage detuning of nu_A; nu_A defaults to the exact value at B",
               {{"V", ParamKind::Number, "0", "V"},
                {"V_FB", ParamKind::Number, "0", "V"},
                gate_a,
                gate_c,
                {"nu_A", ParamKind::Number, "nan", "MHz"},
                B,
                donor},
               {"E_c", "E_c_prime", "phi", "dA_over_A", "dnu_A", "slope", "beyond_second_order"},
               [](PV p, PC k) -> std::vector<double> {
                 const GateGeometry g{p.number("a"), p.number("c"), p.number("V"),
                                      p.number("V_FB")};
                 const double nu = or_default(
                     p.number("nu_A"), nuclear_resonance_frequency({p.number("B")}, donor_of(p),
                                                                   ResonanceVariant::Exact, k));
                 const auto field = field_at_donor(g, g.V_FB + g.V);
                 const auto det = resonance_detuning(g, nu);
                 return {field.E_c,       field.E_c_prime,          field.phi,
                         det.fraction,    det.delta_nu,             tuning_slope(g, nu),
                         det.beyond_second_order ? 1.0 : 0.0};
               }});

  t.push_back({"gate_potential",
               "Disk-gate potential at (rho, z)",
               {{"rho", ParamKind::Number, "0", "nm"},
                {"z", ParamKind::Number, "10", "nm"},
                gate_a,
                {"V", ParamKind::Number, "1", "V"}},
               {"phi"},
               [](PV p, PC) -> std::vector<double> {
                 GateGeometry g;
                 g.a = p.number("a");
                 g.V = p.number("V");
                 return {gate_potential(p.number("rho"), p.number("z"), g)};
               }});

  t.push_back({"placement_sensitivity",
               "Relative error of A from lateral placement error",
               {{"delta_rho", ParamKind::Number, "1", "nm"}, gate_a, gate_c},
               {"dA_over_A"},
               [](PV p, PC) -> std::vector<double> {
                 GateGeometry g;
                 g.a = p.number("a");
                 g.c = p.number("c");
                 const double d = p.number("delta_rho");
                 return {placement_sensitivity(d * d, g)};
               }});

  t.push_back({"exchange_coupling",
               "Asymptotic exchange J(l); a_t defaults to the host's exchange radius",
               {{"l", ParamKind::Number, "15", "nm"}, material, a_t, B},
               {"J", "J_over_zeeman", "formula_valid"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto model = exchange_of(p, k);
                 const double l = p.number("l");
                 const double J = exchange_coupling(l, model);
                 return {J, J / electron_zeeman(p.number("B"), k),
                         exchange_formula_valid(l, model) ? 1.0 : 0.0};
               }});

  t.push_back({"crossing_distance",
               "Separation where J(l) = 2 mu_B B",
               {B, material, a_t},
               {"l_star", "relative_residual"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto c = crossing_distance({p.number("B")}, exchange_of(p, k), 1e-10, k);
                 return {c.l, c.relative_residual};
               }});

  t.push_back({"two_donor_levels",
               "Unperturbed electronic levels and the full 16-level spectrum",
               {B, J, A_a, A_b, donor},
               concat({"E0_S0", "E0_T_m1", "E0_T_0", "E0_T_p1"}, numbered("level_", 16)),
               [](PV p, PC k) -> std::vector<double> {
                 const auto cfg = two_donor_of(p);
                 std::vector<double> out;
                 for (const auto& l : unperturbed_levels(cfg.B, cfg.J, k)) out.push_back(l.energy);
                 const auto ev = eigenvalues(two_donor_hamiltonian(cfg, k));
                 out.insert(out.end(), ev.begin(), ev.end());
                 return out;
               }});

  t.push_back({"reduced_spectrum",
               "Numeric eigenvalues of the reduced m+M=-1 Hamiltonian",
               {B, J, A_a, A_b, donor},
               {"r_0", "r_1", "r_2", "r_3", "gap"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto ev = eigenvalues(reduced_hamiltonian(two_donor_of(p), k));
                 return {ev[0], ev[1], ev[2], ev[3], ev[2] - ev[0]};
               }});

  t.push_back({"nu_J",
               "Closed-form reduced eigenvalues and the nuclear splitting nu_J (A_a = A_b)",
               {B, J, A_a, A_b, donor},
               {"Es_plus", "Es_minus", "Ea_plus", "Ea_minus", "nu_J", "nu_J_small_J",
                "nu_J_large_J"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto cfg = two_donor_of(p);
                 const auto e = closed_form_eigs(cfg, k);
                 return {e.Es_plus,
                         e.Es_minus,
                         e.Ea_plus,
                         e.Ea_minus,
                         nu_J(cfg, NuJVariant::Exact, k),
                         nu_J(cfg, NuJVariant::SmallExchange, k),
                         nu_J(cfg, NuJVariant::LargeExchange, k)};
               }});

  t.push_back({"central_cell_shift",
               "Ground-state shift from a potential deviation of rms radius r_rms",
               {{"r_rms", ParamKind::Number, "0.42", "nm"}, material, donor},
               {"F0_sq", "dE_d"},
               [](PV p, PC k) -> std::vector<double> {
                 const auto& m = material_params(p.text("material"));
                 const double F0 = modulation_density_from_experiment(
                     donor_of(p).contact_density, m);
                 const double r = nm_to_cm(p.number("r_rms"));
                 return {F0, energy_shift_potential_deviation(F0, r * r, m.eps_s, k)};
               }});

  return t;
}

}  // namespace detail

inline const std::vector<Target>& targets() {
  static const std::vector<Target> registry = detail::build_targets();
  return registry;
}

inline const Target& find_target(std::string_view id) {
  for (const auto& t : targets())
    if (t.id == id) return t;
  throw SpecError("unknown sweep target '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// Spec text format
//
//   # comment
//   target = breit_rabi_levels
//   constants = paper
//   [fixed]
//   B = 2
//   [variable]
//   name = X
//   from = 0
//   to = 4
//   points = 201
//   spacing = linear
//   [outputs]
//   E_0_0
//
// One level of nesting; blank lines and '#' comments are ignored.

inline SweepSpec parse_spec(std::string_view text) {
  SweepSpec spec;
  std::string section;
  bool have_from = false;
  bool have_to = false;
  bool have_points = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw SpecError("spec line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "fixed" && section != "variable" && section != "outputs") {
        fail("unknown section '" + section + "'");
      }
      continue;
    }
    if (section == "outputs") {
      if (line.find('=') != std::string::npos) fail("outputs section lists names only");
      spec.outputs.push_back(line);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    try {
      if (section.empty()) {
        if (key == "target") {
          spec.target = value;
        } else if (key == "constants") {
          spec.constants = value;
        } else if (key == "outputs") {
          std::istringstream names(value);
          std::string name;
          while (std::getline(names, name, ',')) {
            if (!detail::trim(name).empty()) spec.outputs.push_back(detail::trim(name));
          }
        } else {
          fail("unknown top-level key '" + key + "'");
        }
      } else if (section == "fixed") {
        if (spec.fixed.count(key)) fail("duplicate fixed parameter '" + key + "'");
        spec.fixed[key] = value;
      } else {
        if (key == "name") {
          spec.variable.name = value;
        } else if (key == "from") {
          spec.variable.from = detail::parse_number(value, key);
          have_from = true;
        } else if (key == "to") {
          spec.variable.to = detail::parse_number(value, key);
          have_to = true;
        } else if (key == "points") {
          const double n = detail::parse_number(value, key);
          if (n < 0 || n != std::floor(n)) fail("points must be a non-negative integer");
          spec.variable.points = static_cast<std::size_t>(n);
          have_points = true;
        } else if (key == "spacing") {
          if (value == "linear") {
            spec.variable.spacing = Spacing::Linear;
          } else if (value == "log") {
            spec.variable.spacing = Spacing::Log;
          } else {
            fail("spacing must be linear or log");
          }
        } else {
          fail("unknown variable key '" + key + "'");
        }
      }
    } catch (const SpecError&) {
      throw;
    }
  }
  if (spec.target.empty()) throw SpecError("spec has no target");
  if (spec.variable.name.empty() || !have_from || !have_to || !have_points) {
    throw SpecError("spec variable needs name, from, to and points");
  }
  return spec;
}

namespace detail {

inline std::string format_spec_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Canonical text form; parse_spec(to_text(s)) reproduces s.
inline std::string to_text(const SweepSpec& spec) {
  std::ostringstream out;
  out << "target = " << spec.target << "\n";
  out << "constants = " << spec.constants << "\n";
  out << "[fixed]\n";
  for (const auto& [k, v] : spec.fixed) out << k << " = " << v << "\n";
  out << "[variable]\n";
  out << "name = " << spec.variable.name << "\n";
  out << "from = " << detail::format_spec_number(spec.variable.from) << "\n";
  out << "to = " << detail::format_spec_number(spec.variable.to) << "\n";
  out << "points = " << spec.variable.points << "\n";
  out << "spacing = " << (spec.variable.spacing == Spacing::Log ? "log" : "linear") << "\n";
  out << "[outputs]\n";
  for (const auto& o : spec.outputs) out << o << "\n";
  return out.str();
}

/// Throws SpecError unless every name resolves and the grid is well formed.
inline void validate_spec(const SweepSpec& spec) {
  const Target& target = find_target(spec.target);
  try {
    (void)constants_by_name(spec.constants);
  } catch (const RegistryError& e) {
    throw SpecError(e.what());
  }
  const auto& v = spec.variable;
  const ParamSpec* var = target.param(v.name);
  if (var == nullptr) {
    throw SpecError("target '" + target.id + "' has no parameter '" + v.name + "'");
  }
  if (var->kind != ParamKind::Number) throw SpecError("variable '" + v.name + "' is not numeric");
  if (spec.fixed.count(v.name)) throw SpecError("'" + v.name + "' is both fixed and varied");
  if (v.points < 2) throw SpecError("sweep needs at least 2 points");
  if (!std::isfinite(v.from) || !std::isfinite(v.to) || !(v.from < v.to)) {
    throw SpecError("sweep range needs finite from < to");
  }
  if (v.spacing == Spacing::Log && !(v.from > 0.0)) {
    throw SpecError("log spacing needs from > 0");
  }
  for (const auto& [name, value] : spec.fixed) {
    const ParamSpec* p = target.param(name);
    if (p == nullptr) {
      throw SpecError("target '" + target.id + "' has no parameter '" + name + "'");
    }
    try {
      if (p->kind == ParamKind::Number) {
        (void)detail::parse_number(value, name);
      } else {
        detail::validate_text_param(name, value);
      }
    } catch (const RegistryError& e) {
      throw SpecError(e.what());
    }
  }
  for (const auto& o : spec.outputs) {
    if (std::find(target.observables.begin(), target.observables.end(), o) ==
        target.observables.end()) {
      throw SpecError("target '" + target.id + "' has no observable '" + o + "'");
    }
  }
}

inline std::vector<double> sweep_grid(const SweepVariable& v) {
  std::vector<double> grid(v.points);
  const double n = static_cast<double>(v.points - 1);
  for (std::size_t i = 0; i < v.points; ++i) {
    const double t = static_cast<double>(i) / n;
    grid[i] = v.spacing == Spacing::Log ? v.from * std::pow(v.to / v.from, t)
                                        : v.from + (v.to - v.from) * t;
  }
  grid.back() = v.to;
  return grid;
}

struct SweepOptions {
  unsigned threads = 1;
  /// Evaluate rows in a shuffled order (single thread). Output is unaffected.
  std::optional<std::uint64_t> shuffle_seed;
};

namespace detail {

struct RowResult {
  std::vector<double> values;
  std::string error;
};

inline RowResult evaluate_row(const Target& target, const std::vector<std::size_t>& selected,
                              ParamValues params, const PhysicalConstants& k) {
  RowResult r;
  try {
    const auto all = target.evaluate(params, k);
    for (std::size_t idx : selected) {
      if (!std::isfinite(all[idx])) throw DomainError("non-finite " + target.observables[idx]);
      r.values.push_back(all[idx]);
    }
  } catch (const Error& e) {
    r.values.assign(selected.size(), NAN);
    r.error = e.what();
  }
  return r;
}

inline std::map<std::string, std::string> defaults_with(
    const Target& target, const std::map<std::string, std::string>& fixed) {
  std::map<std::string, std::string> values;
  for (const auto& p : target.params) values[p.name] = p.default_value;
  for (const auto& [k, v] : fixed) values[k] = v;
  return values;
}

inline std::vector<std::size_t> select_outputs(const Target& target,
                                               const std::vector<std::string>& outputs) {
  std::vector<std::size_t> selected;
  if (outputs.empty()) {
    selected.resize(target.observables.size());
    std::iota(selected.begin(), selected.end(), std::size_t{0});
    return selected;
  }
  for (const auto& o : outputs) {
    const auto it = std::find(target.observables.begin(), target.observables.end(), o);
    selected.push_back(static_cast<std::size_t>(it - target.observables.begin()));
  }
  return selected;
}

}  // namespace detail

/// Runs a validated sweep. Output rows are in grid order whatever the
/// evaluation order; the same spec and constants give a bit-identical table.
inline SweepTable run_sweep(const SweepSpec& spec, const SweepOptions& options = {}) {
  validate_spec(spec);
  const Target& target = find_target(spec.target);
  const PhysicalConstants& k = constants_by_name(spec.constants);
  const auto selected = detail::select_outputs(target, spec.outputs);
  const auto grid = sweep_grid(spec.variable);
  const auto base = detail::defaults_with(target, spec.fixed);

  std::vector<detail::RowResult> rows(grid.size());
  auto eval = [&](std::size_t i) {
    ParamValues params(base);
    params.set(spec.variable.name, grid[i]);
    rows[i] = detail::evaluate_row(target, selected, std::move(params), k);
  };

  if (options.shuffle_seed) {
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) eval(i);
  } else if (options.threads > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < options.threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) eval(i);
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) eval(i);
  }

  SweepTable table;
  table.meta = {to_text(spec), std::string(k.id), std::string(kVersion), {}};
  table.columns.push_back({spec.variable.name, grid});
  for (std::size_t idx : selected) table.columns.push_back({target.observables[idx], {}});
  SweepColumn flag{"flag", {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < selected.size(); ++c) {
      table.columns[c + 1].values.push_back(rows[i].values[c]);
    }
    flag.values.push_back(rows[i].error.empty() ? 0.0 : 1.0);
    if (!rows[i].error.empty()) table.meta.flags[i] = rows[i].error;
  }
  table.columns.push_back(std::move(flag));
  return table;
}

/// Single evaluation of a target, as a one-row table without a variable column.
inline SweepTable evaluate_once(const std::string& target_id,
                                const std::map<std::string, std::string>& fixed,
                                const std::string& constants = "paper",
                                const std::vector<std::string>& outputs = {}) {
  const Target& target = find_target(target_id);
  for (const auto& [name, value] : fixed) {
    const ParamSpec* p = target.param(name);
    if (p == nullptr) throw SpecError("target '" + target_id + "' has no parameter '" + name + "'");
    try {
      if (p->kind == ParamKind::Number) {
        (void)detail::parse_number(value, name);
      } else {
        detail::validate_text_param(name, value);
      }
    } catch (const RegistryError& e) {
      throw SpecError(e.what());
    }
  }
  for (const auto& o : outputs) {
    if (std::find(target.observables.begin(), target.observables.end(), o) ==
        target.observables.end()) {
      throw SpecError("target '" + target_id + "' has no observable '" + o + "'");
    }
  }
  const PhysicalConstants& k = constants_by_name(constants);
  const auto selected = detail::select_outputs(target, outputs);
  const auto row = detail::evaluate_row(target, selected,
                                        ParamValues(detail::defaults_with(target, fixed)), k);
  SweepTable table;
  table.meta = {"target = " + target_id + "\n", std::string(k.id), std::string(kVersion), {}};
  for (std::size_t c = 0; c < selected.size(); ++c) {
    table.columns.push_back({target.observables[selected[c]], {row.values[c]}});
  }
  table.columns.push_back({"flag", {row.error.empty() ? 0.0 : 1.0}});
  if (!row.error.empty()) table.meta.flags[0] = row.error;
  return table;
}

}  // namespace donorspin
