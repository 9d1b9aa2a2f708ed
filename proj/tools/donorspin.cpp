// donorspin command-line front end.
//
// Exit codes: 0 ok, 1 I/O or unexpected failure, 2 bad invocation or spec,
// 3 output contains flagged rows.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "donorspin/donorspin.hpp"

namespace {

using namespace donorspin;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSpec = 2;
constexpr int kExitFlagged = 3;

struct Common {
  double B = 2.0;
  std::string material = "si";
  std::string donor = "p31";
  std::string constants = "paper";
  std::string format;
  std::string out;
};

std::string num(double v) { return format_value(v); }

// "p31" follows the host material; an explicit tag is taken as given.
std::string donor_tag(const Common& c) {
  if (c.donor == "p31") return std::string(donor_for_host(material_params(c.material).host).tag);
  return c.donor;
}

/// Writes text to --out or stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw IoError("cannot open '" + c.out + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + c.out + "'");
}

int emit_table(const Common& c, const SweepTable& t) {
  std::ostringstream s;
  write_table(t, format_by_name(c.format.empty() ? "csv" : c.format), s);
  emit(c, s.str());
  if (t.has_flagged_rows()) {
    for (const auto& [row, msg] : t.meta.flags) std::cerr << "row " << row << " flagged: " << msg << "\n";
    return kExitFlagged;
  }
  return kExitOk;
}

SweepTable merge(SweepTable a, const SweepTable& b) {
  a.columns.pop_back();  // flag
  for (const auto& col : b.columns) a.columns.push_back(col);
  a.columns.back().values[0] = std::max(a.columns.back().values[0], a.has_flagged_rows() ? 1.0 : 0.0);
  for (const auto& [row, msg] : b.meta.flags) a.meta.flags[row] = msg;
  return a;
}

SweepTable table_from(std::vector<SweepColumn> columns, const PhysicalConstants& k,
                      const std::string& what) {
  SweepTable t;
  t.columns = std::move(columns);
  t.meta = {what + "\n", std::string(k.id), std::string(kVersion), {}};
  return t;
}

TwoDonorConfig two_donor_from(const Common& c, double J, std::optional<double> A_a,
                              std::optional<double> A_b) {
  const auto& d = donor_params(donor_tag(c));
  return {c.B, J, A_a.value_or(d.A), A_b.value_or(d.A), d.g_N};
}

int run_two_donor(const Common& c, const std::string& mode, double J, std::optional<double> A_a,
                  std::optional<double> A_b) {
  const auto& k = constants_by_name(c.constants);
  auto cfg = two_donor_from(c, J, A_a, A_b);
  std::map<std::string, std::string> fixed{{"B", num(c.B)},        {"J", num(J)},
                                           {"A_a", num(cfg.A_a)},  {"A_b", num(cfg.A_b)},
                                           {"donor", donor_tag(c)}};
  if (mode == "spectrum") {
    const auto blocks = block_decompose(two_donor_hamiltonian(cfg, k));
    std::vector<SweepColumn> cols{{"sector", {}}, {"energy", {}}};
    for (const auto& b : blocks.blocks) {
      for (double e : eigenvalues(b.matrix)) {
        cols[0].values.push_back(b.total_projection);
        cols[1].values.push_back(e);
      }
    }
    return emit_table(c, table_from(cols, k, "two-donor spectrum"));
  }
  if (mode == "reduced") {
    const auto h = reduced_hamiltonian(cfg, k);
    const auto ev = eigenvalues(h);
    std::vector<SweepColumn> cols{{"row", {}}, {"h0", {}}, {"h1", {}}, {"h2", {}}, {"h3", {}},
                                  {"eigenvalue", {}}};
    for (std::size_t i = 0; i < 4; ++i) {
      cols[0].values.push_back(static_cast<double>(i));
      for (std::size_t j = 0; j < 4; ++j) cols[j + 1].values.push_back(h(i, j));
      cols[5].values.push_back(ev[i]);
    }
    return emit_table(c, table_from(cols, k, "two-donor reduced"));
  }
  if (mode == "nu_J") return emit_table(c, evaluate_once("nu_J", fixed, c.constants));
  if (mode == "anticross") {
    const auto ac = find_anticrossing(cfg, k);
    cfg.J = ac.J;
    return emit_table(c, table_from({{"J_min_gap", {ac.J}},
                                     {"min_gap", {ac.gap}},
                                     {"nu_J", {nu_J(cfg, NuJVariant::Exact, k)}}},
                                    k, "two-donor anticross"));
  }
  throw SpecError("unknown two-donor mode '" + mode + "'");
}

int run_track(const Common& c, TrackPath path) {
  const auto& k = constants_by_name(c.constants);
  const auto& d = donor_params(donor_tag(c));
  path.B = c.B;
  path.g_N = d.g_N;
  const auto r = adiabatic_track(path, k);
  const std::string fmt = c.format.empty() ? "csv" : c.format;
  std::ostringstream s;
  if (fmt == "csv") {
    s << "initial,initial_weight,final,final_weight\n";
    for (const auto& st : r.states) {
      s << label(st.initial) << "," << num(st.initial_weight) << "," << label(st.final_label)
        << "," << num(st.final_weight) << "\n";
    }
  } else if (fmt == "json") {
    nlohmann::ordered_json j;
    j["meta"] = {{"constant_set", k.id}, {"version", kVersion}};
    j["grid_points"] = r.grid.size();
    j["min_step_overlap"] = round_to_precision(r.min_step_overlap);
    auto states = nlohmann::ordered_json::array();
    for (const auto& st : r.states) {
      states.push_back({{"initial", label(st.initial)},
                        {"initial_weight", round_to_precision(st.initial_weight)},
                        {"final", label(st.final_label)},
                        {"final_weight", round_to_precision(st.final_weight)}});
    }
    j["states"] = states;
    s << j.dump(2) << "\n";
  } else {
    throw SpecError("unknown format '" + fmt + "' (expected csv or json)");
  }
  emit(c, s.str());
  return kExitOk;
}

int run_sweep_cmd(const Common& c, const std::string& spec_file, const std::string& preset,
                  unsigned threads, std::optional<std::uint64_t> seed) {
  std::string text;
  if (!preset.empty()) {
    text = std::string(preset_text(preset));
  } else {
    std::ifstream in(spec_file);
    if (!in) throw SpecError("cannot read spec file '" + spec_file + "'");
    std::ostringstream s;
    s << in.rdbuf();
    text = s.str();
  }
  SweepSpec spec = parse_spec(text);
  return emit_table(c, run_sweep(spec, {threads, seed}));
}

int run_report(const Common& c, const std::string& topic, double J, double V_FB) {
  ReportOptions opt;
  opt.B = c.B;
  opt.J = J;
  opt.V_FB = V_FB;
  opt.material = c.material;
  opt.donor = donor_tag(c);
  opt.constants = c.constants;
  Report r;
  try {
    r = make_report(topic, opt);
  } catch (const RegistryError& e) {
    throw SpecError(e.what());
  }
  std::ostringstream s;
  const std::string fmt = c.format.empty() ? "text" : c.format;
  if (fmt == "text") {
    write_report_text(r, s);
  } else if (fmt == "csv") {
    write_report_csv(r, s);
  } else if (fmt == "json") {
    s << report_to_json(r).dump(2) << "\n";
  } else {
    throw SpecError("unknown format '" + fmt + "' (expected text, csv or json)");
  }
  emit(c, s.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Donor nuclear-spin qubit calculator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--B", c.B, "Magnetic induction, T")->capture_default_str();
  app.add_option("--material", c.material, "Host material: si | ge")->capture_default_str();
  app.add_option("--donor", c.donor, "Donor: p31 (follows --material), p31-si, p31-ge")
      ->capture_default_str();
  app.add_option("--constants", c.constants, "Constant set: paper | codata")->capture_default_str();
  app.add_option("--format", c.format, "Output format: csv | json (report also: text)");
  app.add_option("--out", c.out, "Write output to this path instead of stdout");

  auto* levels = app.add_subcommand("levels", "Single-donor Breit-Rabi levels");
  std::optional<double> X;
  levels->add_option("--X", X, "Breit-Rabi parameter; overrides --B");

  auto* freq = app.add_subcommand("freq", "Nuclear resonance nu_A and sublattice frequencies");

  auto* stark = app.add_subcommand("stark", "Gate-voltage detuning of nu_A");
  double V = 0.0;
  double V_FB = 0.0;
  double gate_a = 5.0;
  double gate_c = 10.0;
  stark->add_option("--V", V, "Gate voltage, V")->capture_default_str();
  stark->add_option("--V-FB", V_FB, "Flat-band voltage, V")->capture_default_str();
  stark->add_option("--a", gate_a, "Gate radius, nm")->capture_default_str();
  stark->add_option("--c", gate_c, "Donor depth, nm")->capture_default_str();

  auto* exchange = app.add_subcommand("exchange", "Exchange coupling and crossing distance");
  std::optional<double> l;
  exchange->add_option("--l", l, "Donor separation, nm");

  auto* two = app.add_subcommand("two-donor", "Two coupled donors");
  std::string mode;
  double J = 30000.0;
  std::optional<double> A_a;
  std::optional<double> A_b;
  two->add_option("mode", mode, "spectrum | reduced | nu_J | anticross")
      ->required()
      ->check(CLI::IsMember({"spectrum", "reduced", "nu_J", "anticross"}));
  two->add_option("--J", J, "Exchange J/h, MHz")->capture_default_str();
  two->add_option("--A-a", A_a, "Hyperfine constant of donor a, MHz");
  two->add_option("--A-b", A_b, "Hyperfine constant of donor b, MHz");

  auto* track = app.add_subcommand("track", "Adiabatic label tracking through the crossing");
  TrackPath path;
  track->add_option("--J-lo", path.J_lo, "Start of the J sweep, MHz")->capture_default_str();
  track->add_option("--J-hi", path.J_hi, "End of the J sweep, MHz")->capture_default_str();
  track->add_option("--points", path.points, "Grid points (>= 1000)")->capture_default_str();
  track->add_option("--A-a", path.A_a, "Hyperfine constant of donor a, MHz")
      ->capture_default_str();
  track->add_option("--A-b", path.A_b, "Hyperfine constant of donor b, MHz")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a spec file or preset");
  std::string spec_file;
  std::string preset;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  auto* spec_opt = sweep->add_option("--spec", spec_file, "Sweep spec file");
  auto* preset_opt = sweep->add_option("--preset", preset, "Bundled preset name");
  spec_opt->excludes(preset_opt);
  sweep->add_option("--threads", threads, "Worker threads")->capture_default_str();
  sweep->add_option("--shuffle-seed", seed, "Evaluate rows in a shuffled order");

  auto* report = app.add_subcommand("report", "Compare a headline number with its published value");
  std::string topic;
  double report_J = 30000.0;
  double report_VFB = 0.6;
  report->add_option("topic", topic, "Report topic")->required();
  report->add_option("--J", report_J, "Exchange J/h, MHz (nu_J)")->capture_default_str();
  report->add_option("--V-FB", report_VFB, "Flat-band voltage, V (flatband)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitSpec;
  }

  try {
    if (!c.format.empty() && c.format != "csv" && c.format != "json" &&
        !(report->parsed() && c.format == "text")) {
      throw SpecError("unknown format '" + c.format + "'");
    }
    (void)constants_by_name(c.constants);
    (void)material_params(c.material);
    (void)donor_params(donor_tag(c));

    std::map<std::string, std::string> base{{"B", num(c.B)}, {"donor", donor_tag(c)}};
    if (levels->parsed()) {
      auto fixed = base;
      if (X) fixed["X"] = num(*X);
      return emit_table(c, evaluate_once("breit_rabi_levels", fixed, c.constants));
    }
    if (freq->parsed()) return emit_table(c, evaluate_once("nuclear_resonance", base, c.constants));
    if (stark->parsed()) {
      auto fixed = base;
      fixed["V"] = num(V);
      fixed["V_FB"] = num(V_FB);
      fixed["a"] = num(gate_a);
      fixed["c"] = num(gate_c);
      return emit_table(c, evaluate_once("resonance_detuning", fixed, c.constants));
    }
    if (exchange->parsed()) {
      std::map<std::string, std::string> fixed{{"B", num(c.B)}, {"material", c.material}};
      auto table = evaluate_once("crossing_distance", fixed, c.constants);
      if (l) {
        fixed["l"] = num(*l);
        table = merge(std::move(table), evaluate_once("exchange_coupling", fixed, c.constants));
      }
      return emit_table(c, table);
    }
    if (two->parsed()) return run_two_donor(c, mode, J, A_a, A_b);
    if (track->parsed()) return run_track(c, path);
    if (sweep->parsed()) {
      if (spec_file.empty() && preset.empty()) throw SpecError("sweep needs --spec or --preset");
      return run_sweep_cmd(c, spec_file, preset, threads, seed);
    }
    if (report->parsed()) return run_report(c, topic, report_J, report_VFB);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
