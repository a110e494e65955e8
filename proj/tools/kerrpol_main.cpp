// Command-line front end. Talks to the library exclusively through the C API
// so it exercises the same surface any foreign-language binding would.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kerrpol.h"

namespace {

int exit_code_for(kp_status s) {
  if (s == KP_OK) return 0;
  if (s == KP_ERR_INVARIANT || s == KP_ERR_INTERNAL) return 2;
  return 1;
}

int report_error(kp_status s) {
  std::fprintf(stderr, "error (%s): %s\n", kp_status_name(s), kp_last_error_message());
  return exit_code_for(s);
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;  // empty: stdout
  std::string format = "csv";
  std::string engine;  // empty: keep the configured engine
  bool fixed_metadata = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "run description file")->required();
  cmd->add_option("--out", o.out_path, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--engine", o.engine, "override the configured engine")
      ->check(CLI::IsMember({"linearized", "analytic", "fock"}));
  cmd->add_flag("--fixed-metadata", o.fixed_metadata,
                "pin the generation stamp so reruns are byte-identical");
}

int emit(const kp_table* table, const CommonOpts& o) {
  const int fixed = o.fixed_metadata ? 1 : 0;
  if (o.out_path.empty()) {
    char* text = nullptr;
    const kp_status s = kp_table_emit_string(table, o.format.c_str(), fixed, &text);
    if (s != KP_OK) return report_error(s);
    std::fputs(text, stdout);
    kp_string_free(text);
    return 0;
  }
  const kp_status s = kp_table_emit_file(table, o.out_path.c_str(), o.format.c_str(), fixed);
  if (s != KP_OK) return report_error(s);
  return 0;
}

int run_mode(const CommonOpts& o, kp_status (*runner)(const kp_config*, kp_table**)) {
  kp_config* cfg = nullptr;
  kp_status s = kp_config_parse_file(o.config_path.c_str(), &cfg);
  if (s != KP_OK) return report_error(s);
  if (!o.engine.empty()) {
    s = kp_config_override_engine(cfg, o.engine.c_str());
    if (s != KP_OK) {
      kp_config_free(cfg);
      return report_error(s);
    }
  }
  kp_table* table = nullptr;
  s = runner(cfg, &table);
  kp_config_free(cfg);
  if (s != KP_OK) return report_error(s);
  const int rc = emit(table, o);
  kp_table_free(table);
  return rc;
}

int run_fig1(const std::string& outdir) {
  for (char panel : {'a', 'b', 'c', 'd'}) {
    for (const char* engine : {"linearized", "analytic"}) {
      kp_table* table = nullptr;
      kp_status s = kp_fig1_table(panel, engine, &table);
      if (s != KP_OK) return report_error(s);
      const std::string path = outdir + "/fig1" + panel + "_" + engine + ".csv";
      s = kp_table_emit_file(table, path.c_str(), "csv", 1);
      kp_table_free(table);
      if (s != KP_OK) return report_error(s);
      std::fprintf(stderr, "wrote %s\n", path.c_str());
    }
  }
  return 0;
}

int run_selftest(const std::string& inject_fault) {
  char* report = nullptr;
  int all_pass = 0;
  const kp_status s =
      kp_selftest(inject_fault.empty() ? nullptr : inject_fault.c_str(), &report, &all_pass);
  if (s != KP_OK) return report_error(s);
  std::fputs(report, stdout);
  kp_string_free(report);
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("kerrpol ") + kp_version() +
               " - polarization noise of Kerr-evolved two-mode light"};
  app.require_subcommand(1);

  CommonOpts point_opts, sweep_opts, scan_opts;
  CLI::App* point = app.add_subcommand("point", "evaluate a single parameter point");
  add_common(point, point_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate the configured grid");
  add_common(sweep, sweep_opts);
  CLI::App* scan = app.add_subcommand("seed-scan", "squeezing factor across seed ratios");
  add_common(scan, scan_opts);

  std::string outdir = ".";
  CLI::App* fig1 = app.add_subcommand("fig1", "regenerate the preset demonstration panels");
  fig1->add_option("--outdir", outdir, "directory for the eight CSV files")
      ->capture_default_str();

  std::string inject_fault;
  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
  selftest->add_option("--inject-fault", inject_fault,
                       "sabotage the named check to demonstrate failure detection");

  CLI11_PARSE(app, argc, argv);

  if (point->parsed()) return run_mode(point_opts, kp_run_point);
  if (sweep->parsed()) return run_mode(sweep_opts, kp_run_sweep);
  if (scan->parsed()) return run_mode(scan_opts, kp_run_seed_scan);
  if (fig1->parsed()) return run_fig1(outdir);
  if (selftest->parsed()) return run_selftest(inject_fault);
  return 1;
}
