#include "sasim/perf/metrics.hpp"

#include <sstream>

#include "sasim/error.hpp"

namespace sasim {
namespace perf {

const char* source_name(Source s) {
  switch (s) {
    case Source::Simulated: return "Simulated";
    case Source::PaperTableI: return "PaperTableI";
    case Source::PaperTableII: return "PaperTableII";
  }
  return "unknown";
}

std::optional<Source> source_from_name(const std::string& name) {
  if (name == "Simulated") return Source::Simulated;
  if (name == "PaperTableI") return Source::PaperTableI;
  if (name == "PaperTableII") return Source::PaperTableII;
  return std::nullopt;
}

int64_t lower_bound(const KernelSpec& spec, const fabric::ArrayConfig& cfg) {
  cfg.validate();
  const int64_t mults = count_ops(spec).real_mults;
  const int64_t units = cfg.pe_count();
  return (mults + units - 1) / units;
}

int64_t memory_bound(const KernelSpec& spec, const fabric::ArrayConfig& cfg) {
  cfg.validate();
  spec.validate();
  const int64_t in_w = spec.dtype_in == NumKind::Complex ? 2 : 1;
  const int64_t w_w = spec.dtype_w == NumKind::Complex ? 2 : 1;
  const int64_t out_w = spec.out_kind() == NumKind::Complex ? 2 : 1;
  int64_t words = spec.in_rows * spec.in_cols * in_w +
                  spec.w_rows * spec.w_cols * w_w +
                  spec.out_rows() * spec.out_cols() * out_w;
  const int64_t bandwidth =
      static_cast<int64_t>(cfg.cols) * cfg.top_reads_per_cycle +
      static_cast<int64_t>(cfg.rows) * cfg.left_reads_per_cycle + 1;
  return (words + bandwidth - 1) / bandwidth;
}

double utilization(int64_t lower_bound_cycles, int64_t latency_cycles) {
  if (latency_cycles < 1 || lower_bound_cycles < 1) {
    throw ConfigError("utilization needs latency >= lower bound >= 1");
  }
  if (latency_cycles < lower_bound_cycles) {
    throw ConfigError("latency below the compute lower bound");
  }
  return 100.0 * static_cast<double>(lower_bound_cycles) /
         static_cast<double>(latency_cycles);
}

double throughput(int64_t total_ops, int64_t latency_cycles,
                  double clock_ghz) {
  if (latency_cycles < 1) throw ConfigError("throughput needs latency >= 1");
  return static_cast<double>(total_ops) * clock_ghz /
         static_cast<double>(latency_cycles);
}

PerfReport make_report(const KernelSpec& spec, const fabric::ArrayConfig& cfg,
                       int64_t latency_cycles) {
  PerfReport r;
  r.kernel = spec;
  r.latency_cycles = latency_cycles;
  r.lower_bound_cycles = lower_bound(spec, cfg);
  r.utilization_pct = utilization(r.lower_bound_cycles, latency_cycles);
  r.throughput_gops =
      throughput(count_ops(spec).total_ops, latency_cycles, cfg.clock_ghz);
  r.clock_ghz = cfg.clock_ghz;
  r.source = Source::Simulated;
  r.multipliers = static_cast<int>(cfg.pe_count());
  return r;
}

std::string report_key(const KernelSpec& spec) {
  std::ostringstream os;
  const int64_t second = spec.kind == KernelKind::MatchedFilter
                             ? spec.streams
                             : spec.in_cols;
  os << kernel_name(spec.kind) << '|' << spec.in_rows << 'x' << second << '|'
     << spec.w_rows << 'x' << spec.w_cols << '|'
     << (spec.dtype_in == NumKind::Complex ? "cx" : "re") << '|'
     << (spec.dtype_w == NumKind::Complex ? "cx" : "re");
  return os.str();
}

}  // namespace perf
}  // namespace sasim
