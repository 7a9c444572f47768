#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sasim/cli/commands.hpp"
#include "sasim/error.hpp"

namespace {

bool parse_shape(const std::string& text, int64_t& rows, int64_t& cols) {
  const auto x = text.find('x');
  if (x == std::string::npos) return false;
  try {
    rows = std::stoll(text.substr(0, x));
    cols = std::stoll(text.substr(x + 1));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

bool parse_dtype(const std::string& text, sasim::NumKind& out) {
  if (text == "real") {
    out = sasim::NumKind::Real;
    return true;
  }
  if (text == "complex") {
    out = sasim::NumKind::Complex;
    return true;
  }
  return false;
}

void add_array_flags(CLI::App* app, sasim::fabric::ArrayConfig& array,
                     std::string& array_shape) {
  app->add_option("--array", array_shape, "array grid as RxC (default 8x8)");
  app->add_option("--top-reads", array.top_reads_per_cycle,
                  "reads per cycle from each top bank");
  app->add_option("--left-reads", array.left_reads_per_cycle,
                  "reads per cycle from each left bank");
  app->add_option("--depth", array.pe_buffer_depth,
                  "weight buffer slots per PE");
  app->add_option("--accumulators", array.accumulators,
                  "bottom accumulators (0 = one per column)");
  app->add_option("--clock", array.clock_ghz, "clock in GHz");
  app->add_option("--shift-bandwidth", array.column_shift_bandwidth,
                  "vertical shift words per cycle (b_c)");
  app->add_option("--injection-points", array.injection_points,
                  "weight injection points per column (n_j)");
  app->add_option("--long-op-latency", array.long_op_latency,
                  "reciprocal / inverse-sqrt latency");
  app->add_option("--acc-port-words", array.accumulator_port_words,
                  "drain/write words per accumulator per cycle");
}

int apply_array_shape(const std::string& shape,
                      sasim::fabric::ArrayConfig& array) {
  if (shape.empty()) return 0;
  int64_t r = 0, c = 0;
  if (!parse_shape(shape, r, c) || r < 1 || c < 1) {
    std::cerr << "config error: bad --array shape '" << shape << "'\n";
    return sasim::cli::kExitConfig;
  }
  array.rows = static_cast<int>(r);
  array.cols = static_cast<int>(c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial-array kernel simulator"};
  app.require_subcommand(1);

  // --- run ---
  sasim::cli::RunConfig run;
  std::string kernel, in_shape, w_shape;
  std::string dtype, dtype_in, dtype_w;
  std::string run_array_shape;
  int64_t windows = 0;
  std::vector<std::string> formats{"json"};
  auto* run_cmd = app.add_subcommand("run", "simulate one kernel");
  run_cmd->add_option("--kernel", kernel, "kernel name")->required();
  run_cmd->add_option("--in", in_shape, "input shape RxC")->required();
  run_cmd->add_option("--w", w_shape, "weight shape RxC");
  run_cmd->add_option("--dtype", dtype, "both operand dtypes");
  run_cmd->add_option("--dtype-in", dtype_in, "input dtype");
  run_cmd->add_option("--dtype-w", dtype_w, "weight dtype");
  run_cmd->add_option("--stride", run.spec.stride, "convolution stride");
  run_cmd->add_option("--streams", run.spec.streams,
                      "matched filter streams");
  run_cmd->add_option("--windows", windows, "window count override");
  run_cmd->add_option("--seed", run.seed, "operand RNG seed");
  run_cmd->add_option("--out", run.out_dir,
                      "output directory (default $SASIM_OUT_DIR or .)");
  run_cmd->add_option("--format", formats, "report formats: json csv");
  run_cmd->add_flag("--trace", run.trace, "emit a JSONL trace");
  run_cmd->add_flag("--check-baseline", run.check_baseline,
                    "log the delta against the reference row");
  add_array_flags(run_cmd, run.array, run_array_shape);

  // --- validate ---
  sasim::cli::ValidateConfig validate;
  std::string validate_array_shape;
  auto* validate_cmd =
      app.add_subcommand("validate", "reproduce the reference suite");
  validate_cmd->add_option("--rows", validate.rows_filter,
                           "kernel-name filter");
  add_array_flags(validate_cmd, validate.array, validate_array_shape);

  // --- report ---
  sasim::cli::ReportConfig report;
  auto* report_cmd =
      app.add_subcommand("report", "comparison + chart data from run reports");
  report_cmd->add_option("inputs", report.inputs, "report JSON files")
      ->required();
  report_cmd->add_option("--out", report.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? sasim::cli::kExitOk : sasim::cli::kExitConfig;
  }

  if (run_cmd->parsed()) {
    if (int rc = apply_array_shape(run_array_shape, run.array)) return rc;
    const auto kind = sasim::kernel_from_name(kernel);
    if (!kind) {
      std::cerr << "config error: unknown kernel '" << kernel << "'\n";
      return sasim::cli::kExitConfig;
    }
    run.spec.kind = *kind;
    if (!parse_shape(in_shape, run.spec.in_rows, run.spec.in_cols)) {
      std::cerr << "config error: bad --in shape\n";
      return sasim::cli::kExitConfig;
    }
    if (!w_shape.empty() &&
        !parse_shape(w_shape, run.spec.w_rows, run.spec.w_cols)) {
      std::cerr << "config error: bad --w shape\n";
      return sasim::cli::kExitConfig;
    }
    // Matched filter accepts --in NxS as stream shorthand, like the
    // reference tables.
    if (run.spec.kind == sasim::KernelKind::MatchedFilter &&
        run.spec.in_cols > 1 && run.spec.streams == 1) {
      run.spec.streams = run.spec.in_cols;
      run.spec.in_cols = 1;
    }
    const bool f64 = run.spec.kind == sasim::KernelKind::TriSolve ||
                     run.spec.kind == sasim::KernelKind::Cholesky;
    sasim::NumKind both =
        f64 ? sasim::NumKind::Real : sasim::NumKind::Complex;
    if (!dtype.empty() && !parse_dtype(dtype, both)) {
      std::cerr << "config error: bad --dtype\n";
      return sasim::cli::kExitConfig;
    }
    run.spec.dtype_in = run.spec.dtype_w = both;
    if (!dtype_in.empty() && !parse_dtype(dtype_in, run.spec.dtype_in)) {
      std::cerr << "config error: bad --dtype-in\n";
      return sasim::cli::kExitConfig;
    }
    if (!dtype_w.empty() && !parse_dtype(dtype_w, run.spec.dtype_w)) {
      std::cerr << "config error: bad --dtype-w\n";
      return sasim::cli::kExitConfig;
    }
    if (windows > 0) run.spec.window_count_override = windows;
    run.json = run.csv = false;
    for (const auto& f : formats) {
      if (f == "json") {
        run.json = true;
      } else if (f == "csv") {
        run.csv = true;
      } else {
        std::cerr << "config error: unknown format '" << f << "'\n";
        return sasim::cli::kExitConfig;
      }
    }
    return sasim::cli::cmd_run(run, std::cout);
  }
  if (validate_cmd->parsed()) {
    if (int rc = apply_array_shape(validate_array_shape, validate.array)) {
      return rc;
    }
    return sasim::cli::cmd_validate(validate, std::cout);
  }
  return sasim::cli::cmd_report(report, std::cout);
}
