#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "donorspin/donorspin.hpp"

using namespace donorspin;

namespace {

std::string csv_of(const SweepTable& t) {
  std::ostringstream s;
  write_csv(t, s);
  return s.str();
}

SweepSpec preset(std::string_view name) { return parse_spec(preset_text(name)); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(DONORSPIN_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, {}};
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("donorspin_test_" + name);
}

}  // namespace

TEST(SpecParser, ParsesAllSections) {
  const auto s = parse_spec(R"(
# comment
target = exchange_coupling
constants = codata
outputs = J, formula_valid
[fixed]
material = ge   # trailing comment
[variable]
name = l
from = 5
to = 50
points = 10
spacing = log
)");
  EXPECT_EQ(s.target, "exchange_coupling");
  EXPECT_EQ(s.constants, "codata");
  EXPECT_EQ(s.fixed.at("material"), "ge");
  EXPECT_EQ(s.variable.name, "l");
  EXPECT_EQ(s.variable.points, 10u);
  EXPECT_EQ(s.variable.spacing, Spacing::Log);
  EXPECT_EQ(s.outputs, (std::vector<std::string>{"J", "formula_valid"}));
}

TEST(SpecParser, CanonicalTextRoundTrip) {
  for (const auto& p : kPresets) {
    const auto s = parse_spec(p.text);
    const auto again = parse_spec(to_text(s));
    EXPECT_EQ(to_text(again), to_text(s)) << p.name;
  }
}

TEST(SpecParser, Errors) {
  EXPECT_THROW(parse_spec("name = X\n"), SpecError);
  EXPECT_THROW(parse_spec("target = x\n[bogus]\n"), SpecError);
  EXPECT_THROW(parse_spec("target = x\n[variable]\nname = X\nfrom = a\nto = 1\npoints = 3\n"),
               SpecError);
  EXPECT_THROW(parse_spec("target = x\n[variable]\nname = X\nfrom = 0\nto = 1\n"), SpecError);
  EXPECT_THROW(parse_spec("target = x\n[variable]\nname = X\nfrom = 0\nto = 1\npoints = 2.5\n"),
               SpecError);
  EXPECT_THROW(parse_spec("target = x\n[fixed]\nB = 1\nB = 2\n"), SpecError);
  EXPECT_THROW(parse_spec("target = x\nnot a pair\n"), SpecError);
}

TEST(SpecValidation, UnresolvableNames) {
  auto s = preset("fig2");
  s.target = "no_such_target";
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.variable.name = "Q";
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.fixed["Q"] = "1";
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.outputs.push_back("E_2_0");
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.fixed["donor"] = "sb121";
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.constants = "cgs";
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.variable.name = "donor";
  EXPECT_THROW(run_sweep(s), SpecError);
}

TEST(SpecValidation, DegenerateRanges) {
  auto s = preset("fig2");
  s.variable.to = s.variable.from;
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.variable.from = 5.0;
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.variable.points = 1;
  EXPECT_THROW(run_sweep(s), SpecError);
  s = preset("fig2");
  s.variable.spacing = Spacing::Log;
  EXPECT_THROW(run_sweep(s), SpecError);  // from = 0
}

TEST(Grid, LinearAndLog) {
  const auto lin = sweep_grid({"x", 0.0, 4.0, 201, Spacing::Linear});
  EXPECT_EQ(lin.size(), 201u);
  EXPECT_EQ(lin.front(), 0.0);
  EXPECT_EQ(lin.back(), 4.0);
  EXPECT_NEAR(lin[100], 2.0, 1e-15);
  const auto lg = sweep_grid({"x", 1.0, 1000.0, 4, Spacing::Log});
  EXPECT_NEAR(lg[1], 10.0, 1e-12);
  EXPECT_NEAR(lg[2], 100.0, 1e-10);
  EXPECT_EQ(lg[3], 1000.0);
}

TEST(Presets, EmbeddedTextMatchesBundledFiles) {
  for (const auto& p : kPresets) {
    const auto path = std::filesystem::path(DONORSPIN_PRESET_DIR) / (std::string(p.name) + ".spec");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(read_file(path), std::string(p.text)) << p.name;
  }
  EXPECT_THROW(preset_text("fig9"), SpecError);
}

TEST(Presets, AllRunWithoutFlags) {
  for (const auto& p : kPresets) {
    const auto t = run_sweep(parse_spec(p.text));
    EXPECT_FALSE(t.has_flagged_rows()) << p.name;
    for (const auto& c : t.columns)
      for (double v : c.values) EXPECT_TRUE(std::isfinite(v)) << p.name << " " << c.name;
  }
}

TEST(Presets, Fig2MatchesClosedForm) {
  const auto t = run_sweep(preset("fig2"));
  ASSERT_EQ(t.rows(), 201u);
  EXPECT_EQ(t.columns.front().name, "X");
  EXPECT_EQ(t.columns.back().name, "flag");
  const double A = 116.0;
  const double zn_per_tesla = 2.26 * 5.05e-27 / 6.626e-34 / 1e6;
  const double z_per_tesla = (2.0 * 9.27e-24 + 2.26 * 5.05e-27) / 6.626e-34 / 1e6;
  const auto& X = t.column("X").values;
  const char* names[4] = {"E_1_p1", "E_1_0", "E_1_m1", "E_0_0"};
  for (std::size_t r = 0; r < X.size(); ++r) {
    const double B = X[r] * A / z_per_tesla;
    const double x = X[r];
    const double zn = zn_per_tesla * B;
    // E(F, m_F) = -A/4 - zn m_F +/- (A/2) sqrt(1 + 2 m_F x + x^2); signed root for |m_F| = 1.
    const double expected[4] = {-A / 4 - zn + A / 2 * (1 + x), -A / 4 + A / 2 * std::sqrt(1 + x * x),
                                -A / 4 + zn + A / 2 * (1 - x), -A / 4 - A / 2 * std::sqrt(1 + x * x)};
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(t.column(names[k]).values[r], expected[k], 1e-9);
  }
  for (int k = 0; k < 4; ++k) {
    const auto& v = t.column(names[k]).values;
    const bool up = k < 2;
    for (std::size_t r = 1; r < v.size(); ++r) {
      if (up) {
        EXPECT_GE(v[r], v[r - 1]);
      } else {
        EXPECT_LE(v[r], v[r - 1]);
      }
    }
  }
}

TEST(Presets, StarkColumnQuadraticInVoltage) {
  const auto t = run_sweep(preset("stark"));
  const auto& V = t.column("V").values;
  const auto& d = t.column("dnu_A").values;
  for (std::size_t r = 1; r < V.size(); ++r) {
    EXPECT_NEAR(d[r], -18.5963161549 * V[r] * V[r], 1e-9);
  }
}

TEST(Presets, StarkColumnAgainstPublishedCoefficient) {
  const auto t = run_sweep(preset("stark"));
  const auto& V = t.column("V").values;
  const auto& d = t.column("dnu_A").values;
  for (std::size_t r = 1; r < V.size(); ++r) {
    EXPECT_NEAR(d[r] / (-17.5 * V[r] * V[r]), 1.0, 0.05) << "V = " << V[r];
  }
}

TEST(RunSweep, DeterministicAcrossRuns) {
  for (const char* name : {"fig2", "fig3-vs-B", "fig3-vs-J", "stark"}) {
    EXPECT_EQ(csv_of(run_sweep(preset(name))), csv_of(run_sweep(preset(name)))) << name;
  }
}

TEST(RunSweep, ShuffledAndThreadedOrderGiveIdenticalTables) {
  for (const char* name : {"fig3-vs-J", "anticross", "exchange"}) {
    const auto base = csv_of(run_sweep(preset(name)));
    EXPECT_EQ(csv_of(run_sweep(preset(name), {1, 42})), base) << name;
    EXPECT_EQ(csv_of(run_sweep(preset(name), {1, 7})), base) << name;
    EXPECT_EQ(csv_of(run_sweep(preset(name), {4, std::nullopt})), base) << name;
  }
}

TEST(RunSweep, MetaBlock) {
  const auto t = run_sweep(preset("fig2"));
  EXPECT_EQ(t.meta.constant_set, "paper-1");
  EXPECT_EQ(t.meta.version, "0.1.0");
  EXPECT_EQ(parse_spec(t.meta.spec).target, "breit_rabi_levels");
  auto s = preset("fig2");
  s.constants = "codata";
  EXPECT_EQ(run_sweep(s).meta.constant_set, "codata-2018");
}

TEST(RunSweep, DefaultOutputsAreAllObservables) {
  const auto t = run_sweep(preset("fig3-vs-J"));
  // J, 4 unperturbed levels, 16 levels, flag
  EXPECT_EQ(t.columns.size(), 22u);
  EXPECT_EQ(t.columns[1].name, "E0_S0");
  EXPECT_EQ(t.columns[20].name, "level_15");
}

TEST(RunSweep, DomainErrorsFlagRowsAndKeepGrid) {
  SweepSpec s;
  s.target = "gate_potential";
  s.variable = {"z", -2.0, 2.0, 5, Spacing::Linear};
  const auto t = run_sweep(s);
  ASSERT_EQ(t.rows(), 5u);
  const auto& flag = t.column("flag").values;
  const auto& phi = t.column("phi").values;
  EXPECT_EQ(flag, (std::vector<double>{1, 1, 0, 0, 0}));
  EXPECT_TRUE(std::isnan(phi[0]));
  EXPECT_TRUE(std::isnan(phi[1]));
  EXPECT_DOUBLE_EQ(phi[2], 1.0);
  EXPECT_TRUE(t.has_flagged_rows());
  EXPECT_EQ(t.meta.flags.size(), 2u);
}

TEST(RunSweep, ClosedFormTargetFlagsUnequalConstants) {
  SweepSpec s;
  s.target = "nu_J";
  s.fixed = {{"A_a", "120"}, {"A_b", "112"}};
  s.variable = {"J", 1000.0, 2000.0, 3, Spacing::Linear};
  const auto t = run_sweep(s);
  EXPECT_EQ(t.meta.flags.size(), 3u);
}

TEST(Export, ThreePointCsvShape) {
  SweepSpec s;
  s.target = "gate_potential";
  s.variable = {"z", 1.0, 3.0, 3, Spacing::Linear};
  const auto csv = csv_of(run_sweep(s));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "z,phi,flag");
}

TEST(Export, TwelveSignificantDigits) {
  EXPECT_EQ(format_value(92.50921560791234), "92.5092156079");
  EXPECT_EQ(format_value(-0.0000123456789012345), "-1.23456789012e-05");
  EXPECT_EQ(format_value(NAN), "nan");
}

TEST(Export, JsonRoundTrip) {
  for (const char* name : {"fig2", "anticross"}) {
    const auto t = run_sweep(preset(name));
    std::stringstream s;
    write_json(t, s);
    const auto back = read_json(s);
    EXPECT_TRUE(tables_equal(t, back)) << name;
    EXPECT_EQ(back.meta.constant_set, "paper-1");
    EXPECT_EQ(back.meta.spec, t.meta.spec);
    std::stringstream again;
    write_json(back, again);
    std::stringstream first;
    write_json(t, first);
    EXPECT_EQ(again.str(), first.str());
  }
}

TEST(Export, JsonRoundTripWithFlaggedRows) {
  SweepSpec s;
  s.target = "gate_potential";
  s.variable = {"z", -1.0, 1.0, 3, Spacing::Linear};
  const auto t = run_sweep(s);
  std::stringstream j;
  write_json(t, j);
  EXPECT_NE(j.str().find("null"), std::string::npos);
  const auto back = read_json(j);
  EXPECT_TRUE(tables_equal(t, back));
  EXPECT_EQ(back.meta.flags, t.meta.flags);
}

TEST(Export, CsvRoundTrip) {
  const auto t = run_sweep(preset("exchange"));
  std::stringstream s;
  write_csv(t, s);
  EXPECT_TRUE(tables_equal(t, read_csv(s)));
}

TEST(Export, FilesAndErrors) {
  const auto t = run_sweep(preset("stark"));
  const auto path = temp_path("stark.json");
  export_table(t, Format::Json, path.string());
  std::ifstream in(path);
  EXPECT_TRUE(tables_equal(t, read_json(in)));
  std::filesystem::remove(path);
  EXPECT_THROW(export_table(t, Format::Csv, "/nonexistent-dir/x/out.csv"), IoError);
  EXPECT_THROW(format_by_name("xml"), SpecError);
  std::stringstream bad("{\"meta\": 3}");
  EXPECT_THROW(read_json(bad), IoError);
}

TEST(Report, NuA) {
  const auto r = make_report("nu_A", {});
  const auto& l = r.line("nu_A");
  EXPECT_NEAR(l.computed, 92.5092156079, 1e-9);
  ASSERT_TRUE(l.quoted.has_value());
  EXPECT_EQ(*l.quoted, 92.6);
  EXPECT_LT(std::abs(l.deviation()), 0.005);
}

TEST(Report, Crossing) {
  const auto r = make_report("crossing", {});
  const auto& l = r.line("l_star");
  EXPECT_NEAR(l.computed, 14.3034961578, 1e-8);
  EXPECT_EQ(l.deviation(), 0.0);
  ReportOptions ge;
  ge.material = "ge";
  EXPECT_EQ(make_report("crossing", ge).line("l_star").deviation(), 0.0);
}

TEST(Report, NuJIsReportedNotAsserted) {
  const auto r = make_report("nu_J", {});
  const auto& l = r.line("nu_J");
  EXPECT_GE(l.computed, 0.066);
  EXPECT_LE(l.computed, 0.070);
  EXPECT_EQ(*l.quoted, 0.075);
  EXPECT_TRUE(std::isfinite(l.deviation()));
}

TEST(Report, QuotesOnlyUnderMatchingConditions) {
  ReportOptions o;
  o.B = 1.0;
  EXPECT_FALSE(make_report("nu_A", o).line("nu_A").quoted.has_value());
  EXPECT_TRUE(std::isnan(make_report("nu_A", o).line("nu_A").deviation()));
}

TEST(Report, AllTopicsRender) {
  for (const auto& topic : report_topics()) {
    const auto r = make_report(topic, {});
    std::ostringstream text;
    write_report_text(r, text);
    EXPECT_NE(text.str().find(topic), std::string::npos);
    EXPECT_FALSE(r.lines.empty());
    EXPECT_NO_THROW(report_to_json(r).dump());
  }
  EXPECT_THROW(make_report("bogus", {}), RegistryError);
}

TEST(Cli, LevelsAndExitOk) {
  const auto r = run_cli("levels --B 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "B,X,E_1_p1,E_1_0,E_1_m1,E_0_0,nu_A,flag");
  EXPECT_NE(r.out.find("92.5092156079"), std::string::npos);
}

TEST(Cli, SubcommandsSucceed) {
  for (const char* args :
       {"freq --format json", "stark --V 1", "exchange --l 15", "exchange --material ge",
        "two-donor spectrum", "two-donor reduced --A-a 120 --A-b 112", "two-donor nu_J --J 30000",
        "two-donor anticross", "track", "report nu_A", "report flatband --format json",
        "report crossing --material ge --format csv", "--constants codata levels"}) {
    EXPECT_EQ(run_cli(args).code, 0) << args;
  }
}

TEST(Cli, PresetSweepByteIdentical) {
  for (const char* name : {"fig2", "fig3-vs-B", "fig3-vs-J", "stark"}) {
    const std::string args = std::string("sweep --preset ") + name;
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, csv_of(run_sweep(preset(name))));
  }
}

TEST(Cli, SpecFileAndOutPath) {
  const auto out = temp_path("fig2.csv");
  const auto spec = std::filesystem::path(DONORSPIN_PRESET_DIR) / "fig2.spec";
  const auto r = run_cli("sweep --spec " + spec.string() + " --out " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_file(out), csv_of(run_sweep(preset("fig2"))));
  std::filesystem::remove(out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("report bogus").code, 2);
  EXPECT_EQ(run_cli("sweep --spec /nonexistent.spec").code, 2);
  EXPECT_EQ(run_cli("levels --material gaas").code, 2);
  EXPECT_EQ(run_cli("levels --format xml").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("levels --B -1").code, 3);
  EXPECT_EQ(run_cli("stark --V 1 --out /nonexistent-dir/x.csv").code, 1);

  const auto spec = temp_path("flagged.spec");
  {
    std::ofstream f(spec);
    f << "target = gate_potential\n[variable]\nname = z\nfrom = -1\nto = 1\npoints = 3\n";
  }
  const auto flagged = run_cli("sweep --spec " + spec.string());
  EXPECT_EQ(flagged.code, 3);
  EXPECT_NE(flagged.out.find("nan"), std::string::npos);
  {
    std::ofstream f(spec);
    f << "target = gate_potential\n[variable]\nname = z\nfrom = 1\nto = 1\npoints = 3\n";
  }
  EXPECT_EQ(run_cli("sweep --spec " + spec.string()).code, 2);
  std::filesystem::remove(spec);
}
