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


#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gaussthermo.hpp"
#include "gaussthermo/io/log.hpp"

namespace gt = gaussthermo;
namespace io = gaussthermo::io;
namespace ex = gaussthermo::experiments;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

// Flag values are held as optionals so only flags the user actually passed
// override the config file.
struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> omega_a, omega_b, k_a, k_b, gn, m_a, m_b;
  std::optional<double> epsilon, dm, t_max;
  std::optional<std::size_t> n_points, samples;
  std::optional<std::string> state, spacing, bath_shift, state_file;
  std::optional<double> r, r_a, r_b, state_m_a, state_m_b, nu_bin_width;
  std::optional<unsigned> threads;
  bool panels = false;
};

void add_shared_flags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "sampling seed");
  app->add_option("--out", o.out, "output CSV path (default: stdout)");
  app->add_option("--omega-a", o.omega_a, "mode a frequency");
  app->add_option("--omega-b", o.omega_b, "mode b frequency");
  app->add_option("--k-a", o.k_a, "mode a damping rate");
  app->add_option("--k-b", o.k_b, "mode b damping rate");
  app->add_option("--gn", o.gn, "coupling strength GN");
  app->add_option("--m-a", o.m_a, "bath a mean occupation");
  app->add_option("--m-b", o.m_b, "bath b mean occupation");
  app->add_option("--epsilon", o.epsilon, "evolution time of the initial speed");
  app->add_option("--dm", o.dm, "occupation step for the QFI");
  app->add_option("--t-max", o.t_max, "final time of the grid");
  app->add_option("--n-points", o.n_points, "number of grid points");
  app->add_option("--spacing", o.spacing, "grid spacing")
      ->check(CLI::IsMember({"linear", "log"}));
  app->add_option("--samples", o.samples, "number of sampled states");
  app->add_option("--state", o.state, "initial state family")
      ->check(CLI::IsMember({"thermal", "local-squeeze", "twin-beam", "file", "all"}));
  app->add_option("--state-file", o.state_file, "covariance matrix file for --state file");
  app->add_option("--state-m-a", o.state_m_a, "thermal initial occupation of mode a");
  app->add_option("--state-m-b", o.state_m_b, "thermal initial occupation of mode b");
  app->add_option("--r", o.r, "twin-beam squeezing");
  app->add_option("--r-a", o.r_a, "local squeezing of mode a");
  app->add_option("--r-b", o.r_b, "local squeezing of mode b");
  app->add_option("--bath-shift", o.bath_shift, "baths moved by dM")
      ->check(CLI::IsMember({"both", "a", "b"}));
  app->add_option("--nu-bin-width", o.nu_bin_width, "lower-bound bin width");
  app->add_option("--threads", o.threads, "worker threads (0: hardware)");
  app->add_flag("--panels", o.panels, "run the six (M, GN) panel configurations");
}

io::RunConfig resolve(const Overrides& o) {
  io::RunConfig c;
  if (!o.config.empty()) c = io::load_config_file(o.config);
  auto set = [](auto& field, const auto& opt) {
    if (opt) field = *opt;
  };
  set(c.seed, o.seed);
  set(c.out, o.out);
  set(c.params.omega_a, o.omega_a);
  set(c.params.omega_b, o.omega_b);
  set(c.params.k_a, o.k_a);
  set(c.params.k_b, o.k_b);
  set(c.params.gn, o.gn);
  set(c.params.m_a, o.m_a);
  set(c.params.m_b, o.m_b);
  set(c.epsilon, o.epsilon);
  set(c.dm, o.dm);
  set(c.t_max, o.t_max);
  set(c.n_points, o.n_points);
  set(c.samples, o.samples);
  set(c.state_file, o.state_file);
  set(c.state_m_a, o.state_m_a);
  set(c.state_m_b, o.state_m_b);
  set(c.r, o.r);
  set(c.r_a, o.r_a);
  set(c.r_b, o.r_b);
  set(c.nu_bin_width, o.nu_bin_width);
  set(c.threads, o.threads);
  if (o.state) {
    c.state = *o.state == "all" ? std::nullopt
                                : std::optional(io::parse_state_family(*o.state));
  }
  if (o.spacing) c.spacing = io::parse_spacing(*o.spacing);
  if (o.bath_shift) c.bath_shift = io::parse_bath_shift(*o.bath_shift);
  if (o.panels) c.panels = true;
  c.validate();
  return c;
}

template <class Compute, class Write>
int run(const std::string& name, const Overrides& o, Compute compute, Write write) {
  const io::RunConfig c = resolve(o);
  io::log_info(name + ": config " + io::to_json(c).dump());
  const auto result = compute(c);
  if (c.out.empty()) {
    write(std::cout, c, result);
    return kOk;
  }
  // Write to a sibling file first so a failed run never leaves a partial CSV.
  const std::filesystem::path target(c.out);
  const std::filesystem::path tmp = target.string() + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw gt::IoError("cannot open output file '" + tmp.string() + "'");
    write(f, c, result);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw gt::IoError("cannot write '" + target.string() + "': " + ec.message());
  io::log_info(name + ": wrote " + target.string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-equilibrium Gaussian quantum thermometer simulator"};
  app.set_version_flag("--version", std::string(ex::kVersion));
  app.require_subcommand(1);

  Overrides o;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"speed-scan", "initial speed of evolution of sampled states and its lower bound"},
      {"qfi-scan", "quantum Fisher information of the occupation along time"},
      {"steady-state", "steady-state covariance matrix"},
      {"propagate", "covariance matrix trajectory of one initial state"},
      {"sample-states", "sampled two-mode states and their invariants"},
  };
  for (const auto& cmd : commands) add_shared_flags(app.add_subcommand(cmd.name, cmd.help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "speed-scan") {
      return run(name, o, ex::run_speed_scan, ex::write_speed_scan);
    }
    if (name == "qfi-scan") {
      return run(name, o, ex::run_qfi_scan, ex::write_qfi_scan);
    }
    if (name == "steady-state") {
      bool unstable = false;
      const int code = run(
          name, o,
          [&](const io::RunConfig& c) {
            auto res = ex::run_steady_state(c);
            for (const auto& r : res) {
              if (!r.stable) {
                unstable = true;
                io::log_error("steady-state: " + r.message);
              }
            }
            return res;
          },
          ex::write_steady_state);
      return unstable ? kNumericalError : code;
    }
    if (o.panels) throw gt::ConfigError("field 'panels': not supported by " + name);
    if (name == "propagate") {
      return run(name, o, ex::run_propagate, ex::write_propagate);
    }
    return run(name, o, ex::run_sample_states, ex::write_sample_states);
  } catch (const gt::IoError& e) {
    io::log_error(e.what());
    return kIoError;
  } catch (const gt::ConfigError& e) {
    io::log_error(e.what());
    return kConfigError;
  } catch (const gt::DomainError& e) {
    io::log_error(e.what());
    return kConfigError;
  } catch (const gt::PreconditionError& e) {
    io::log_error(e.what());
    return kNumericalError;
  } catch (const gt::NumericalError& e) {
    io::log_error(e.what());
    return kNumericalError;
  } catch (const gt::Error& e) {
    io::log_error(e.what());
    return kNumericalError;
  }
}
