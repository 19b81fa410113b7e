// uwbsim: command line front end for the IR-UWB link simulator.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "uwb/config.hpp"
#include "uwb/error.hpp"
#include "uwb/harness.hpp"
#include "uwb/spectrum.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  unsigned threads = 1;
  bool plot = false;
};

void add_common(CLI::App* sub, Common& c, bool run_options) {
  sub->add_option("--config", c.config, "key = value experiment file")->required()->check(CLI::ExistingFile);
  if (!run_options) return;
  sub->add_option("--seed", c.seed, "override the master seed");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");
}

uwb::ExperimentConfig load(const Common& c) {
  uwb::ExperimentConfig cfg = uwb::load_config(c.config);
  if (c.seed) cfg.master_seed = *c.seed;
  return cfg;
}

uwb::RunOptions run_options(const Common& c) {
  uwb::RunOptions o;
  o.threads = c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads;
  return o;
}

std::ofstream open_out(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  const fs::path p = fs::path(c.out) / name;
  std::ofstream f(p);
  if (!f) throw uwb::Error(uwb::ErrorCode::InvalidParameter, "cannot write " + p.string());
  return f;
}

void write_metadata(const Common& c, const uwb::ExperimentConfig& cfg) {
  auto meta = open_out(c, "metadata.txt");
  uwb::write_run_metadata(meta, cfg);
  auto used = open_out(c, "config.used");
  uwb::write_config(used, cfg);
}

int cmd_sweep(const Common& c) {
  const auto cfg = load(c);
  const auto curve = uwb::sweep(cfg, run_options(c));
  auto csv = open_out(c, "ber.csv");
  uwb::write_ber_csv(csv, curve);
  write_metadata(c, cfg);
  if (c.plot) {
    auto gp = open_out(c, "ber.gp");
    uwb::write_gnuplot_script(gp, "ber.csv");
  }
  uwb::write_ber_csv(std::cout, curve);
  return 0;
}

int cmd_psd(const Common& c) {
  const auto cfg = load(c);
  const int nc = cfg.link.timing.chips_per_frame;
  uwb::LinkConfig fixed = cfg.link;
  fixed.code = uwb::make_th_code({0}, nc);

  const auto with_th = uwb::psd(uwb::pulse_train(cfg.link, cfg.psd.frames), cfg.psd.segment_len);
  const auto no_th = uwb::psd(uwb::pulse_train(fixed, cfg.psd.frames), cfg.psd.segment_len);
  auto a = open_out(c, "psd.csv");
  uwb::write_psd_csv(a, with_th);
  auto b = open_out(c, "psd_fixed.csv");
  uwb::write_psd_csv(b, no_th);
  write_metadata(c, cfg);
  std::printf("line_suppression_db=%.4f\n", uwb::line_suppression(no_th, with_th));
  return 0;
}

int cmd_scenario(const Common& c) {
  const auto cfg = load(c);
  const auto opts = run_options(c);
  auto csv = open_out(c, "scenario.csv");
  if (std::holds_alternative<uwb::scenario::Reconfigure>(cfg.scenario)) {
    csv << "ebn0_db,segment,trials,errors,ber,ci_low,ci_high,collisions,boundary_errors,sync_failures\n";
    for (double x : cfg.ebn0_grid) {
      const auto rep = uwb::run_reconfiguration_scenario(cfg, x, opts);
      char line[256];
      const auto row = [&](int seg, const uwb::BerPoint& p, std::size_t coll) {
        std::snprintf(line, sizeof line, "%.9g,%d,%zu,%zu,%.9g,%.9g,%.9g,%zu,%zu,%zu\n", x, seg, p.trials,
                      p.errors, p.ber, p.ci95.low, p.ci95.high, coll, rep.boundary_errors, rep.sync_failures);
        csv << line;
        std::cout << line;
      };
      row(1, rep.segment1, rep.collisions1);
      row(2, rep.segment2, rep.collisions2);
    }
  } else if (const auto* two = std::get_if<uwb::scenario::TwoUser>(&cfg.scenario)) {
    const std::size_t frames = cfg.bits_per_point;
    const std::size_t coll = uwb::collision_count(cfg.link.code, two->code2, frames);
    const auto curve = uwb::sweep(cfg, opts);
    uwb::write_ber_csv(csv, curve);
    uwb::write_ber_csv(std::cout, curve);
    std::printf("collision_rate=%.6f (%zu of %zu frames)\n", static_cast<double>(coll) / frames, coll, frames);
  } else {
    throw uwb::Error(uwb::ErrorCode::InvalidConfig, "scenario subcommand needs scenario = two_user or reconfigure");
  }
  write_metadata(c, cfg);
  return 0;
}

int cmd_validate(const Common& c) {
  const auto cfg = load(c);
  uwb::write_config(std::cout, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impulse-radio UWB link-level simulator"};
  app.require_subcommand(1);

  Common sweep_c, psd_c, scen_c, val_c;
  auto* sweep = app.add_subcommand("sweep", "BER versus Eb/N0 over the configured grid");
  add_common(sweep, sweep_c, true);
  sweep->add_flag("--plot", sweep_c.plot, "also write a gnuplot script");
  auto* psd = app.add_subcommand("psd", "power spectral density of TH and fixed-position pulse trains");
  add_common(psd, psd_c, true);
  auto* scen = app.add_subcommand("scenario", "two-user or run-time reconfiguration scenario");
  add_common(scen, scen_c, true);
  auto* val = app.add_subcommand("validate-config", "parse and print the normalized configuration");
  add_common(val, val_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) return cmd_sweep(sweep_c);
    if (*psd) return cmd_psd(psd_c);
    if (*scen) return cmd_scenario(scen_c);
    return cmd_validate(val_c);
  } catch (const uwb::Error& e) {
    std::cerr << "uwbsim: " << e.what() << '\n';
    return e.code() == uwb::ErrorCode::InvalidConfig ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "uwbsim: " << e.what() << '\n';
    return kExitRuntime;
  }
}
