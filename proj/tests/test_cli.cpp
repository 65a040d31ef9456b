// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace gt = gaussthermo;
namespace io = gaussthermo::io;
namespace ex = gaussthermo::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gaussthermo_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GAUSSTHERMO_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

io::CsvTable read_table(const fs::path& p) {
  std::ifstream in(p);
  return io::read_csv(in);
}

io::CsvTable render(auto write, const io::RunConfig& c, const auto& result) {
  std::stringstream ss;
  write(ss, c, result);
  return io::read_csv(ss);
}

}  // namespace

TEST(Csv, FormatsSeventeenSignificantDigits) {
  EXPECT_EQ(io::format_double(0.1), "1.0000000000000001e-01");
  EXPECT_EQ(io::format_double(-2.0), "-2.0000000000000000e+00");
  EXPECT_EQ(io::format_double(NAN), "nan");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 40 - 20);
    EXPECT_EQ(std::strtod(io::format_double(x).c_str(), nullptr), x);
  }
}

TEST(Csv, WriterAndReaderAgree) {
  std::stringstream ss;
  io::CsvWriter w(ss);
  w.metadata("k", "v w");
  w.header({"a", "b", "c"});
  io::CsvRow r;
  r.add(1.5).empty().add("x");
  w.row(r);
  io::CsvRow bad;
  bad.add(1.0);
  EXPECT_THROW(w.row(bad), gt::StructuralError);
  const auto t = io::read_csv(ss);
  EXPECT_EQ(t.metadata.at("k"), "v w");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.value(0, "a"), 1.5);
  EXPECT_FALSE(t.number(0, "b"));
  EXPECT_EQ(t.cell(0, "c"), "x");
  EXPECT_THROW(t.column("missing"), gt::StructuralError);
}

TEST(Config, DefaultsValidate) {
  io::RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.params.omega_a, 1.0);
  EXPECT_EQ(c.params.k_a, 0.1);
  EXPECT_EQ(c.samples, 10000u);
  EXPECT_EQ(c.epsilon, 1e-3);
  EXPECT_EQ(c.dm, 1e-3);
}

TEST(Config, JsonRoundTrip) {
  io::RunConfig c;
  c.params.gn = 0.35;
  c.params.m_a = 0.5;
  c.state = io::StateFamily::twin_beam;
  c.r = 1.25;
  c.spacing = gt::GridSpacing::log;
  c.seed = 1234567890123ULL;
  io::RunConfig back;
  io::apply_json(back, io::to_json(c));
  EXPECT_EQ(io::to_json(back), io::to_json(c));
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const std::string& text) -> std::string {
    io::RunConfig c;
    try {
      io::apply_json(c, nlohmann::json::parse(text));
      c.validate();
    } catch (const gt::ConfigError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(R"({"k_a": -1})").find("'k_a'"), std::string::npos);
  EXPECT_NE(message(R"({"gn": "x"})").find("'gn'"), std::string::npos);
  EXPECT_NE(message(R"({"bogus": 1})").find("'bogus'"), std::string::npos);
  EXPECT_NE(message(R"({"state": "cat"})").find("'state'"), std::string::npos);
  EXPECT_NE(message(R"({"dm": 1e-9})").find("'dm'"), std::string::npos);
  EXPECT_NE(message(R"({"state": "file"})").find("'state_file'"), std::string::npos);
  EXPECT_EQ(message(R"({"gn": 0.35, "m_a": 1})"), "");
}

TEST(Config, MatrixFile) {
  const auto p = scratch("state.txt");
  write_file(p, "# twin beam like\n2 0 1 0\n0 2 0 -1\n1 0 2 0  # row 3\n0 -1 0 2\n");
  const auto s = io::load_matrix_file(p.string());
  EXPECT_EQ(s.matrix()(0, 2), 1.0);
  EXPECT_EQ(s.matrix()(3, 1), -1.0);
  write_file(p, "1 0 0\n");
  EXPECT_THROW(io::load_matrix_file(p.string()), gt::ConfigError);
  EXPECT_THROW(io::load_matrix_file("/nonexistent/file"), gt::IoError);
  write_file(p, "0.5 0 0 0 0 0.5 0 0 0 0 0.5 0 0 0 0 0.5");
  io::RunConfig c;
  c.state = io::StateFamily::file;
  c.state_file = p.string();
  EXPECT_THROW(io::initial_state(c, io::StateFamily::file), gt::ConfigError);
}

TEST(Config, PanelsAndEdges) {
  io::RunConfig c;
  c.panels = true;
  const auto panels = io::panel_params(c);
  ASSERT_EQ(panels.size(), 6u);
  EXPECT_EQ(panels[2].m_a, 1.0);
  EXPECT_EQ(panels[3].gn, 0.35);
  const auto edges = io::lower_bound_edges(c);
  EXPECT_EQ(edges.front(), 0.005);
  EXPECT_EQ(edges[1], 0.02);
  EXPECT_EQ(edges.back(), 1.0);
  EXPECT_EQ(edges.size(), 51u);
}

TEST(Experiments, SteadyStateRowsRevalidate) {
  io::RunConfig c;
  c.panels = true;
  const auto t = render(ex::write_steady_state, c, ex::run_steady_state(c));
  ASSERT_EQ(t.rows.size(), 6u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.cell(i, "status"), "ok");
    gt::Mat4 m;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) m(a, b) = t.value(i, "s" + std::to_string(a) + std::to_string(b));
    }
    const gt::CovarianceMatrix s(m);
    EXPECT_TRUE(gt::validate_physical(s).physical);
    gt::SystemParams p = c.params;
    p.m_a = t.value(i, "m_a");
    p.m_b = t.value(i, "m_b");
    p.gn = t.value(i, "gn");
    EXPECT_LE(gt::lyapunov_residual(gt::build_drift(p), gt::build_diffusion(p), m), 1e-10);
    EXPECT_NEAR(t.value(i, "nu_minus"), gt::symplectic_eigenvalues(s).nu_minus, 1e-12);
    EXPECT_NEAR(t.value(i, "purity"), 1.0 / std::sqrt(m.determinant()), 1e-12);
    if (p.gn == 0.0) {
      EXPECT_NEAR(m(0, 0), 1 + 2 * p.m_a, 1e-12);
      EXPECT_NEAR(m(0, 2), 0.0, 1e-12);
    }
  }
}

TEST(Experiments, SampleStatesRowsRevalidate) {
  io::RunConfig c;
  c.samples = 500;
  c.seed = 77;
  const auto t = render(ex::write_sample_states, c, ex::run_sample_states(c));
  ASSERT_EQ(t.rows.size(), 500u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const gt::PurityTriple triple{t.value(i, "mu1"), t.value(i, "mu2"), t.value(i, "mu"),
                                  t.value(i, "delta")};
    EXPECT_TRUE(gt::is_admissible(triple));
    const auto s = gt::from_simon(
        {t.value(i, "a"), t.value(i, "b"), t.value(i, "c_plus"), t.value(i, "c_minus")});
    const auto back = gt::purity_triple(s);
    EXPECT_NEAR(back.mu, triple.mu, 1e-8 * triple.mu);
    EXPECT_NEAR(back.delta, triple.delta, 1e-8 * triple.delta);
    EXPECT_EQ(t.cell(i, "region"), gt::to_string(gt::classify_region(triple)));
    const double nt = t.value(i, "nu_tilde_minus");
    EXPECT_NEAR(nt, gt::ppt_min_eigenvalue(s), 1e-9 * std::max(1.0, nt));
    EXPECT_EQ(t.cell(i, "classification"), nt < 1.0 - 1e-12 ? "entangled" : "separable");
    EXPECT_EQ(t.value(i, "index"), static_cast<double>(i));
  }
}

TEST(Experiments, SampleStatesZeroCount) {
  io::RunConfig c;
  c.samples = 0;
  const auto t = render(ex::write_sample_states, c, ex::run_sample_states(c));
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(t.columns.front(), "index");
}

TEST(Experiments, SpeedScanRows) {
  io::RunConfig c;
  c.samples = 300;
  c.bound_grid_points = 6;
  c.nu_bin_width = 0.25;
  c.params.gn = 0.35;
  c.params.m_a = c.params.m_b = 0.5;
  const auto t = render(ex::write_speed_scan, c, ex::run_speed_scan(c));
  EXPECT_NE(t.metadata.at("config").find("\"gn\":0.35"), std::string::npos);
  EXPECT_FALSE(t.metadata.at("sampling_measure").empty());
  std::size_t samples = 0, bounds = 0;
  const gt::InitialSpeedEvaluator eval(c.params, c.epsilon);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.cell(i, "record") == "sample") {
      ++samples;
      const auto g = gt::generate_state(c.seed, static_cast<std::uint64_t>(t.value(i, "index")));
      EXPECT_NEAR(t.value(i, "mu"), g.triple.mu, 1e-8);
      const auto v = t.number(i, "v_squared");
      EXPECT_EQ(t.cell(i, "excluded"), v ? "0" : "1");
      if (v) {
        EXPECT_GE(*v, 0.0);
        EXPECT_NEAR(*v, eval.speed(g.sigma), 1e-12 * std::max(1.0, *v));
      }
    } else {
      ++bounds;
      EXPECT_EQ(t.cell(i, "record"), "bound");
      EXPECT_LE(t.value(i, "nu_lo"), t.value(i, "nu_hi"));
    }
  }
  EXPECT_EQ(samples, 300u);
  EXPECT_EQ(bounds, 4u);
}

TEST(Experiments, QfiScanFamiliesAndTrivialGrid) {
  io::RunConfig c;
  c.n_points = 1;
  const auto t = render(ex::write_qfi_scan, c, ex::run_qfi_scan(c));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.cell(0, "family"), "thermal");
  EXPECT_EQ(t.cell(1, "family"), "local-squeeze");
  EXPECT_EQ(t.cell(2, "family"), "twin-beam");
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.value(i, "t"), 0.0);
    EXPECT_EQ(t.value(i, "q_m"), 0.0);
  }
}

TEST(Experiments, QfiScanThermalSteadyValue) {
  io::RunConfig c;
  c.state = io::StateFamily::thermal;
  c.t_max = 200.0;
  c.n_points = 5;
  const auto t = render(ex::write_qfi_scan, c, ex::run_qfi_scan(c));
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_NEAR(t.value(4, "q_m") / (2.0 / (0.1 * 1.1)), 1.0, 1e-2);
  EXPECT_GT(t.value(4, "q_t"), 0.0);
}

TEST(Experiments, PropagateRows) {
  io::RunConfig c;
  c.state = io::StateFamily::twin_beam;
  c.params.gn = 0.35;
  c.n_points = 11;
  c.t_max = 10.0;
  const auto t = render(ex::write_propagate, c, ex::run_propagate(c));
  ASSERT_EQ(t.rows.size(), 11u);
  EXPECT_FALSE(t.number(0, "v_squared"));
  const gt::Propagator prop(c.params);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    gt::Mat4 m;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) m(a, b) = t.value(i, "s" + std::to_string(a) + std::to_string(b));
    }
    const gt::CovarianceMatrix s(m);
    EXPECT_TRUE(gt::validate_physical(s).physical);
    const gt::Mat4 want = prop(gt::twin_beam(2.0), t.value(i, "t")).matrix();
    EXPECT_LT(oracle::max_abs(m - want), 1e-12 * std::max(1.0, oracle::max_abs(want)));
  }
}

TEST(Cli, ExitCodes) {
  const auto out = scratch("out.csv");
  EXPECT_EQ(run_cli("steady-state --out " + out.string()), 0);
  EXPECT_EQ(read_table(out).rows.size(), 1u);
  EXPECT_EQ(run_cli("steady-state --gn 2 --out " + out.string()), 3);
  const auto t = read_table(out);
  EXPECT_EQ(t.cell(0, "status"), "unstable");
  EXPECT_FALSE(t.cell(0, "message").empty());
  EXPECT_EQ(run_cli("qfi-scan --gn 2 --out " + out.string()), 3);
  EXPECT_EQ(run_cli("steady-state --k-a -1"), 2);
  EXPECT_EQ(run_cli("qfi-scan --dm 1e-9"), 2);
  EXPECT_EQ(run_cli("qfi-scan --state nope"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("propagate --panels"), 2);
  EXPECT_EQ(run_cli("steady-state --out /nonexistent/dir/x.csv"), 4);
  EXPECT_EQ(run_cli("propagate --state file --state-file /nonexistent/m.txt"), 4);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = scratch("cfg.json");
  write_file(cfg, R"({"gn": 0.35, "m_a": 1.0, "m_b": 1.0, "samples": 5})");
  const auto out = scratch("ss.csv");
  ASSERT_EQ(run_cli("steady-state --config " + cfg.string() + " --m-b 0.5 --out " + out.string()), 0);
  const auto t = read_table(out);
  EXPECT_EQ(t.value(0, "gn"), 0.35);
  EXPECT_EQ(t.value(0, "m_a"), 1.0);
  EXPECT_EQ(t.value(0, "m_b"), 0.5);
  write_file(cfg, R"({"gn": "strong"})");
  EXPECT_EQ(run_cli("steady-state --config " + cfg.string()), 2);
  write_file(cfg, "{not json");
  EXPECT_EQ(run_cli("steady-state --config " + cfg.string()), 2);
}

TEST(Cli, ZeroSamplesGivesHeaderOnlyFile) {
  const auto out = scratch("empty.csv");
  ASSERT_EQ(run_cli("speed-scan --samples 0 --nu-bin-width 0.5 --out " + out.string()), 0);
  const auto t = read_table(out);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(t.cell(i, "record"), "bound");
  ASSERT_EQ(run_cli("sample-states --samples 0 --out " + out.string()), 0);
  EXPECT_TRUE(read_table(out).rows.empty());
}

TEST(Cli, IdenticalRunsAreByteIdentical) {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  const std::string args = "sample-states --samples 200 --seed 9 --threads 3 --out ";
  ASSERT_EQ(run_cli(args + a.string()), 0);
  ASSERT_EQ(run_cli("sample-states --samples 200 --seed 9 --threads 1 --out " + b.string()), 0);
  std::ifstream fa(a), fb(b);
  const std::string sa((std::istreambuf_iterator<char>(fa)), {});
  const std::string sb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa.find("\"threads\""), std::string::npos);
  EXPECT_EQ(sa, sb);
}
