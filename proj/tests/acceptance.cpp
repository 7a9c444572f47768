// Acceptance suite: eight machine-checkable criteria, one PASS/FAIL line
// each. Exit status is nonzero when any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sasim/cli/commands.hpp"
#include "sasim/fabric/simulator.hpp"
#include "sasim/perf/baseline.hpp"
#include "sasim/perf/report.hpp"

using namespace sasim;

namespace {

int failures = 0;

void verdict(int criterion, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << detail << '\n';
}

int64_t rnd(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

NumKind rnd_kind(std::mt19937_64& rng) {
  return rng() % 2 ? NumKind::Complex : NumKind::Real;
}

KernelSpec random_spec(KernelKind kind, std::mt19937_64& rng) {
  KernelSpec s;
  s.kind = kind;
  switch (kind) {
    case KernelKind::MatVec:
      s.in_rows = rnd(rng, 1, 1024);
      s.in_cols = rnd(rng, 1, 16);
      s.w_rows = s.in_cols;
      s.w_cols = 1;
      s.dtype_in = rnd_kind(rng);
      s.dtype_w = rnd_kind(rng);
      break;
    case KernelKind::MatMul:
      s.in_rows = rnd(rng, 1, 256);
      s.in_cols = rnd(rng, 1, 16);
      s.w_rows = s.in_cols;
      s.w_cols = rnd(rng, 1, 16);
      s.dtype_in = rnd_kind(rng);
      s.dtype_w = rnd_kind(rng);
      break;
    case KernelKind::Conv1D:
    case KernelKind::Fir:
      s.in_rows = rnd(rng, 16, 1024);
      s.in_cols = 1;
      s.w_rows = rnd(rng, 1, 16);
      s.w_cols = kind == KernelKind::Conv1D ? rnd(rng, 1, 3) : 1;
      s.stride = rnd(rng, 1, 3);
      s.dtype_in = rnd_kind(rng);
      s.dtype_w = rnd_kind(rng);
      break;
    case KernelKind::MatchedFilter:
      s.in_rows = rnd(rng, 16, 512);
      s.in_cols = 1;
      s.w_rows = rnd(rng, 1, 16);
      s.w_cols = 1;
      s.streams = rnd(rng, 1, 4);
      s.dtype_in = rnd_kind(rng);
      s.dtype_w = rnd_kind(rng);
      break;
    case KernelKind::VecMagSq:
      s.in_rows = rnd(rng, 1, 1024);
      s.in_cols = 1;
      s.w_rows = s.in_rows;
      s.w_cols = 1;
      s.dtype_in = s.dtype_w = NumKind::Complex;
      break;
    case KernelKind::OuterProduct:
      s.in_rows = rnd(rng, 1, 256);
      s.in_cols = rnd(rng, 1, 16);
      s.w_rows = s.in_rows;
      s.w_cols = s.in_cols;
      s.dtype_in = rnd_kind(rng);
      s.dtype_w = rnd_kind(rng);
      break;
    case KernelKind::TriSolve:
      s.w_rows = s.w_cols = rnd(rng, 1, 48);
      s.in_rows = s.w_rows;
      s.in_cols = 1;
      s.dtype_in = s.dtype_w = NumKind::Real;
      break;
    case KernelKind::Cholesky:
      s.w_rows = s.w_cols = rnd(rng, 1, 48);
      s.in_rows = s.in_cols = s.w_rows;
      s.dtype_in = s.dtype_w = NumKind::Real;
      break;
  }
  return s;
}

// Published utilization column of the spatial-array reference table.
const std::map<std::string, double>& published_utilization() {
  static const std::map<std::string, double> table = {
      {"matvec|1024x4|4x1|cx|cx", 48.3},
      {"matvec|1024x8|8x1|cx|cx", 49.1},
      {"matvec|1024x16|16x1|cx|cx", 49.5},
      {"matmul|1024x4|4x8|re|re", 97.4},
      {"matmul|1024x4|4x16|re|re", 98.5},
      {"matmul|1024x8|8x8|re|re", 98.5},
      {"matmul|1024x8|8x16|re|re", 99.2},
      {"matmul|1024x16|16x8|re|re", 99.2},
      {"matmul|1024x16|16x16|re|re", 99.44},
      {"fir|1024x1|32x1|re|re", 48.27},
      {"fir|1024x1|32x1|cx|cx", 98.2},
      {"matchedfilter|1024x1|32x1|cx|cx", 91.8},
      {"matchedfilter|1024x8|32x1|cx|cx", 90.20},
      {"vecmagsq|512x1|512x1|cx|cx", 50.0},
      {"vecmagsq|1024x1|1024x1|cx|cx", 50.0},
      {"outerproduct|1024x8|1024x8|cx|cx", 99.12},
      {"outerproduct|1024x32|1024x32|cx|cx", 99.94},
      {"outerproduct|1024x64|1024x64|cx|cx", 99.98},
      {"outerproduct|1024x128|1024x128|cx|cx", 99.98},
      {"outerproduct|1024x512|1024x512|cx|cx", 99.99},
  };
  return table;
}

KernelSpec conditional_fir(KernelSpec spec) {
  if (spec.kind == KernelKind::Fir || spec.kind == KernelKind::Conv1D) {
    spec.window_count_override =
        spec.dtype_in == NumKind::Complex ? 447 : 448;
  }
  return spec;
}

// Discrete-event walk of the injection/shift chain: the loopback buffer
// at the region head pumps groups of b_c words (phantom-padded when the
// last group is short), drains one word per cycle starting the cycle
// after the pump, deepest destination first, one hop per cycle, refilling
// once empty.
int64_t des_weight_load(int rows, int nj, int bc) {
  const int beta = (rows + nj - 1) / nj;
  int64_t last_arrival = 0;
  int64_t pump = 0;
  int next_depth = beta - 1;
  int remaining = beta;
  while (remaining > 0) {
    const int real = std::min(bc, remaining);
    const int phantom = (remaining == real && real < bc) ? bc - real : 0;
    const int64_t first_leave = pump + 1 + phantom;
    for (int j = 0; j < real; ++j) {
      const int depth = next_depth - j;  // deepest destination first
      last_arrival = std::max(last_arrival, first_leave + j + depth);
    }
    next_depth -= real;
    remaining -= real;
    pump += bc + 1;
  }
  return last_arrival;
}

std::string read_dir_bytes(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream is(f, std::ios::binary);
    all += f.filename().string();
    all += '\0';
    all.append(std::istreambuf_iterator<char>(is), {});
    all += '\0';
  }
  return all;
}

}  // namespace

int main() {
  const fabric::ArrayConfig cfg;
  const auto& table = perf::BaselineTable::shipped();

  // Shared across criteria 1, 4 and 5.
  bool oracle_ok = true, bound_ok = true, trace_ok = true;
  std::string oracle_detail, trace_detail;
  int runs = 0, traced = 0;

  // --- 1: functional oracle equivalence, 50 random specs per kernel ---
  {
    const KernelKind kinds[] = {
        KernelKind::MatVec,        KernelKind::MatMul,
        KernelKind::Conv1D,        KernelKind::Fir,
        KernelKind::MatchedFilter, KernelKind::VecMagSq,
        KernelKind::OuterProduct,  KernelKind::TriSolve,
        KernelKind::Cholesky};
    std::mt19937_64 rng(20240817);
    for (const auto kind : kinds) {
      for (int i = 0; i < 50 && oracle_ok; ++i) {
        const KernelSpec spec = random_spec(kind, rng);
        const bool with_trace = ++runs % 10 == 0;
        try {
          const auto result =
              cli::run_pipeline(spec, cfg, rng(), with_trace);
          if (!result.oracle_ok) {
            oracle_ok = false;
            oracle_detail = "mismatch on " + spec.describe();
          }
          if (result.sim.latency_cycles <
              perf::lower_bound(spec, cfg)) {
            bound_ok = false;
          }
          if (with_trace && result.sim.trace) {
            ++traced;
            const auto audit =
                fabric::verify_trace(*result.sim.trace, cfg);
            const auto statics =
                fabric::assert_resources(result.schedule, cfg);
            if (!audit.clean() || !statics.clean()) {
              trace_ok = false;
              trace_detail = (audit.clean() ? statics : audit)
                                 .violations.front()
                                 .detail +
                             " on " + spec.describe();
            }
          }
        } catch (const std::exception& e) {
          oracle_ok = false;
          oracle_detail = spec.describe() + " threw: " + e.what();
        }
      }
    }
    std::ostringstream os;
    os << "oracle equivalence over " << runs << " randomized runs";
    if (!oracle_ok) os << " (" << oracle_detail << ")";
    verdict(1, oracle_ok, os.str());
  }

  // --- 2: exact lower-bound reproduction (FIR rows conditional) ---
  {
    bool ok = true;
    std::string detail;
    for (const auto& row : table.rows) {
      if (row.source != perf::Source::PaperTableI) continue;
      const KernelSpec spec = conditional_fir(row.kernel);
      const int64_t lb = perf::lower_bound(spec, cfg);
      if (lb != row.lower_bound_cycles) {
        ok = false;
        detail = perf::report_key(spec) + " gave " + std::to_string(lb) +
                 " != " + std::to_string(row.lower_bound_cycles);
        break;
      }
    }
    verdict(2, ok,
            ok ? "lower bounds integer-exact on all 20 reference rows "
                 "(FIR rows conditional on window counts 448/447)"
               : detail);
  }

  // --- 3: metric identities from the published latency column ---
  {
    bool ok = true;
    std::string detail;
    for (const auto& row : table.rows) {
      if (row.source != perf::Source::PaperTableI) continue;
      const KernelSpec spec = conditional_fir(row.kernel);
      const std::string key = perf::report_key(spec);
      const double util =
          perf::utilization(row.lower_bound_cycles, row.latency_cycles);
      const double pub = published_utilization().at(key);
      const double thr = perf::throughput(count_ops(spec).total_ops,
                                          row.latency_cycles, 1.0);
      if (std::abs(util - pub) > 0.3 ||
          std::abs(thr - row.throughput_gops) > 0.05) {
        ok = false;
        detail = key + " util/throughput identity broken";
        break;
      }
    }
    verdict(3, ok,
            ok ? "utilization within 0.3 pp and throughput within 0.05 "
                 "GOPS on every reference row"
               : detail);
  }

  // --- 4: simulated latency bands (plus the hard compute-bound floor) ---
  {
    bool ok = bound_ok;
    std::string detail =
        bound_ok ? "" : "randomized run beat the compute bound; ";
    for (const auto& row : table.rows) {
      if (row.source != perf::Source::PaperTableI) continue;
      if (row.kernel.kind == KernelKind::OuterProduct &&
          row.kernel.in_cols > 64) {
        continue;  // beyond desk scale; covered analytically above
      }
      const KernelSpec spec = conditional_fir(row.kernel);
      const bool banded =
          spec.kind != KernelKind::Fir && spec.kind != KernelKind::Conv1D;
      try {
        const auto result = cli::run_pipeline(spec, cfg, 1, false);
        if (!result.oracle_ok) {
          ok = false;
          detail += perf::report_key(spec) + " oracle mismatch; ";
          continue;
        }
        if (result.sim.latency_cycles < result.report.lower_bound_cycles) {
          ok = false;
          detail += perf::report_key(spec) + " beat the compute bound; ";
        }
        if (banded) {
          const double delta = std::abs(
              static_cast<double>(result.sim.latency_cycles) -
              static_cast<double>(row.latency_cycles));
          if (delta > 0.10 * static_cast<double>(row.latency_cycles)) {
            ok = false;
            detail += perf::report_key(spec) + " latency " +
                      std::to_string(result.sim.latency_cycles) +
                      " outside +/-10% of " +
                      std::to_string(row.latency_cycles) + "; ";
          }
        }
      } catch (const std::exception& e) {
        ok = false;
        detail += perf::report_key(spec) + " threw: " + e.what();
      }
    }
    verdict(4, ok,
            ok ? "simulated latencies within +/-10% on all banded rows and "
                 "never below the compute bound (FIR band-exempt)"
               : detail);
  }

  // --- 5: resource invariants audited from sampled traces ---
  {
    std::ostringstream os;
    os << "zero budget/weight-mutation violations across " << traced
       << " traced runs (10% sample of " << runs << ")";
    if (!trace_ok) os << ": " << trace_detail;
    verdict(5, trace_ok, os.str());
  }

  // --- 6: weight-load formula vs discrete-event simulation ---
  {
    bool ok = true;
    std::string detail;
    for (int r = 1; r <= 16 && ok; ++r) {
      for (int nj = 1; nj <= r && ok; ++nj) {
        for (const int bc : {1, 2, 4}) {
          const int64_t formula = fabric::weight_load_latency(r, nj, bc);
          const int64_t des = des_weight_load(r, nj, bc);
          if (formula != des) {
            ok = false;
            detail = "r=" + std::to_string(r) + " nj=" + std::to_string(nj) +
                     " bc=" + std::to_string(bc) + ": formula " +
                     std::to_string(formula) + " != DES " +
                     std::to_string(des);
            break;
          }
        }
      }
    }
    verdict(6, ok,
            ok ? "weight-load formula matches the discrete-event chain for "
                 "all (rows, injection points, shift bandwidth) cases"
               : detail);
  }

  // --- 7: byte-determinism of the CLI report files ---
  {
    bool ok = true;
    std::string detail;
#ifdef SASIM_CLI_PATH
    const std::string cli = SASIM_CLI_PATH;
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"matvec", "--in 64x4 --w 4x1 --dtype complex"},
        {"matmul", "--in 64x4 --w 4x8 --dtype real"},
        {"conv1d", "--in 64x1 --w 8x2 --dtype complex"},
        {"fir", "--in 64x1 --w 8x1 --dtype real"},
        {"matchedfilter", "--in 64x1 --w 8x1 --dtype complex --streams 2"},
        {"vecmagsq", "--in 64x1 --dtype complex"},
        {"outerproduct", "--in 64x4 --w 64x4 --dtype complex"},
        {"trisolve", "--in 16x1 --w 16x16"},
        {"cholesky", "--in 8x8 --w 8x8"},
    };
    const auto root = std::filesystem::temp_directory_path() /
                      "sasim_acceptance_determinism";
    std::filesystem::remove_all(root);
    for (const auto& [kernel, flags] : cases) {
      std::string first;
      for (int rep = 0; rep < 3; ++rep) {
        const auto dir = root / kernel / std::to_string(rep);
        std::filesystem::create_directories(dir);
        std::ostringstream cmd;
        cmd << '"' << cli << "\" run --kernel " << kernel << ' ' << flags
            << " --seed 5 --format json --format csv --out " << dir
            << " > /dev/null 2>&1";
        if (std::system(cmd.str().c_str()) != 0) {
          ok = false;
          detail = kernel + " run failed";
          break;
        }
        const std::string bytes = read_dir_bytes(dir);
        if (rep == 0) {
          first = bytes;
        } else if (bytes != first) {
          ok = false;
          detail = kernel + " reports differ between repetitions";
          break;
        }
      }
      if (!ok) break;
    }
#else
    ok = false;
    detail = "CLI path not configured";
#endif
    verdict(7, ok,
            ok ? "report files byte-identical over 3 repetitions for all 9 "
                 "kernels"
               : detail);
  }

  // --- 8: comparison-report aggregate and hand-computed ratios ---
  {
    bool ok = true;
    std::string detail;
    std::vector<perf::PerfReport> sims;
    for (const auto& row : table.rows) {
      if (row.source != perf::Source::PaperTableI) continue;
      perf::PerfReport sim = row;
      sim.source = perf::Source::Simulated;
      sims.push_back(sim);
    }
    const auto cmp = perf::compare(sims, table);
    if (!cmp.all) {
      ok = false;
      detail = "missing 'All' aggregate";
    } else {
      // Largest HLS configuration per kernel, summed by hand from the
      // shipped table.
      const double expect_area =
          0.4637 + 0.4054 + 0.4641 + 0.4641 + 0.1164 + 0.3296;
      if (std::abs(cmp.all->hls_area_mm2 - expect_area) > 1e-9 ||
          std::abs(cmp.all->sa_area_mm2 - 1.014) > 1e-12) {
        ok = false;
        detail = "aggregate areas off";
      }
    }
    double mm_ratio = 0.0, vms_ratio = 0.0;
    for (const auto& row : cmp.rows) {
      if (row.key == "matmul|1024x8|8x8|re|re" && row.hls_sa_latency_ratio) {
        mm_ratio = *row.hls_sa_latency_ratio;
      }
      if (row.key == "vecmagsq|512x1|512x1|cx|cx" && row.sa_hls_power_ratio) {
        vms_ratio = *row.sa_hls_power_ratio;
      }
    }
    if (std::abs(mm_ratio - 3.98) > 0.01) {
      ok = false;
      detail += " matmul latency ratio " + std::to_string(mm_ratio);
    }
    if (std::abs(vms_ratio - 1.74) > 0.01) {
      ok = false;
      detail += " vecmagsq power ratio " + std::to_string(vms_ratio);
    }
    verdict(8, ok,
            ok ? "aggregate HLS area sums per-kernel maxima vs the single "
                 "1.014 mm2 fabric; latency/power ratios match hand "
                 "computation within 0.01"
               : detail);
  }

  return failures == 0 ? 0 : 1;
}
