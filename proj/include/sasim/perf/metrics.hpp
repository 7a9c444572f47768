#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sasim/fabric/config.hpp"
#include "sasim/kernel_spec.hpp"

namespace sasim {
namespace perf {

enum class Source { Simulated, PaperTableI, PaperTableII };

const char* source_name(Source s);
std::optional<Source> source_from_name(const std::string& name);

// One row of benchmark accounting, either produced by a simulation run or
// parsed from the shipped reference dataset.
struct PerfReport {
  KernelSpec kernel;
  int64_t latency_cycles = 0;
  int64_t lower_bound_cycles = 0;
  double utilization_pct = 0.0;
  double throughput_gops = 0.0;
  double clock_ghz = 1.0;
  std::optional<double> area_mm2;
  std::optional<double> power_mw;
  Source source = Source::Simulated;
  int multipliers = 0;
};

// Compute-only minimum cycles: real multiplications over multiplier count.
int64_t lower_bound(const KernelSpec& spec, const fabric::ArrayConfig& cfg);

// Secondary diagnostic: operand + output words over the aggregate SRAM
// bandwidth of the array edges. Never folded into lower_bound.
int64_t memory_bound(const KernelSpec& spec, const fabric::ArrayConfig& cfg);

double utilization(int64_t lower_bound_cycles, int64_t latency_cycles);
double throughput(int64_t total_ops, int64_t latency_cycles, double clock_ghz);

// Assemble the full report for a simulated latency.
PerfReport make_report(const KernelSpec& spec, const fabric::ArrayConfig& cfg,
                       int64_t latency_cycles);

// Row identity used to join simulated reports against baseline rows. The
// matched filter folds its stream count into the second shape slot so the
// one- and eight-stream configurations stay distinct.
std::string report_key(const KernelSpec& spec);

}  // namespace perf
}  // namespace sasim
