#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sasim/fabric/config.hpp"
#include "sasim/fabric/simulator.hpp"
#include "sasim/kernel_spec.hpp"
#include "sasim/perf/metrics.hpp"
#include "sasim/tensor.hpp"

namespace sasim {
namespace cli {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitOracleMismatch = 2;
inline constexpr int kExitResourceViolation = 3;

// Name of the environment variable supplying the default output directory.
inline constexpr const char* kOutDirEnv = "SASIM_OUT_DIR";

// Deterministic operand generation: same spec + seed => identical tensors.
// Amplitudes are scaled down with accumulation depth so fixed-point
// writeback cannot overflow. Returns {input, weight}.
std::pair<Tensor, Tensor> make_operands(const KernelSpec& spec,
                                        uint64_t seed);

// spec -> operands -> mapper -> simulate -> oracle check -> metrics.
struct PipelineResult {
  fabric::Schedule schedule;
  fabric::SimResult sim;
  Tensor expected;
  bool oracle_ok = false;
  double rel_error = 0.0;  // F64 kernels only
  perf::PerfReport report;
};

PipelineResult run_pipeline(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg, uint64_t seed,
                            bool with_trace);

struct RunConfig {
  KernelSpec spec;
  fabric::ArrayConfig array;
  uint64_t seed = 1;
  std::string out_dir;  // empty: $SASIM_OUT_DIR, else "."
  bool json = true;
  bool csv = false;
  bool trace = false;
  bool check_baseline = false;
};

int cmd_run(const RunConfig& config, std::ostream& log);

struct ValidateConfig {
  fabric::ArrayConfig array;
  std::string rows_filter;  // kernel-name substring, empty = all
};

int cmd_validate(const ValidateConfig& config, std::ostream& log);

struct ReportConfig {
  std::vector<std::string> inputs;  // report JSON files from cmd_run
  std::string out_dir;
};

int cmd_report(const ReportConfig& config, std::ostream& log);

}  // namespace cli
}  // namespace sasim
