#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sasim/perf/baseline.hpp"
#include "sasim/perf/metrics.hpp"
#include "sasim/perf/report.hpp"

using namespace sasim;
using namespace sasim::perf;

namespace {

KernelSpec make_spec(KernelKind kind, int64_t ir, int64_t ic, int64_t wr,
                     int64_t wc, NumKind din, NumKind dw) {
  KernelSpec s;
  s.kind = kind;
  s.in_rows = ir;
  s.in_cols = ic;
  s.w_rows = wr;
  s.w_cols = wc;
  s.dtype_in = din;
  s.dtype_w = dw;
  return s;
}

}  // namespace

TEST_CASE("lower bound examples") {
  fabric::ArrayConfig cfg;
  CHECK(lower_bound(make_spec(KernelKind::MatVec, 1024, 4, 4, 1,
                              NumKind::Complex, NumKind::Complex),
                    cfg) == 256);
  CHECK(lower_bound(make_spec(KernelKind::OuterProduct, 1024, 8, 1024, 8,
                              NumKind::Complex, NumKind::Complex),
                    cfg) == 4096);
  KernelSpec mf = make_spec(KernelKind::MatchedFilter, 1024, 1, 32, 1,
                            NumKind::Complex, NumKind::Complex);
  mf.streams = 8;
  CHECK(lower_bound(mf, cfg) == 16400);
  // A 1x1 array gives exactly the real multiplication count.
  fabric::ArrayConfig one;
  one.rows = one.cols = 1;
  one.injection_points = 1;
  const auto mm = make_spec(KernelKind::MatMul, 12, 3, 3, 5, NumKind::Real,
                            NumKind::Real);
  CHECK(lower_bound(mm, one) == count_ops(mm).real_mults);
}

TEST_CASE("lower bound is monotone in every shape dimension") {
  fabric::ArrayConfig cfg;
  auto lb = [&](int64_t n, int64_t k, int64_t m) {
    return lower_bound(make_spec(KernelKind::MatMul, n, k, k, m,
                                 NumKind::Real, NumKind::Real),
                       cfg);
  };
  for (int64_t n = 1; n <= 32; n *= 2) {
    for (int64_t k = 1; k <= 16; k *= 2) {
      for (int64_t m = 1; m <= 16; m *= 2) {
        CHECK(lb(2 * n, k, m) >= lb(n, k, m));
        CHECK(lb(n, 2 * k, m) >= lb(n, k, m));
        CHECK(lb(n, k, 2 * m) >= lb(n, k, m));
      }
    }
  }
}

TEST_CASE("utilization and throughput identities") {
  CHECK(utilization(256, 530) == doctest::Approx(48.30).epsilon(1e-3));
  CHECK(utilization(4096, 4119) == doctest::Approx(99.44).epsilon(1e-4));
  CHECK(utilization(100, 100) == doctest::Approx(100.0));
  CHECK_THROWS_AS(utilization(100, 99), ConfigError);
  CHECK(throughput(32768, 530, 1.0) == doctest::Approx(61.83).epsilon(1e-4));
  CHECK(throughput(65536, 527, 1.0) ==
        doctest::Approx(124.36).epsilon(1e-4));
  CHECK(throughput(0, 10, 1.0) == 0.0);
}

TEST_CASE("shipped baseline parses with unique keys and both sources") {
  const auto& table = BaselineTable::shipped();
  int sa = 0, hls = 0;
  for (const auto& row : table.rows) {
    if (row.source == Source::PaperTableI) ++sa;
    if (row.source == Source::PaperTableII) ++hls;
  }
  CHECK(sa == 20);
  CHECK(hls == 20);
  const auto* mm = table.find("matmul|1024x8|8x8|re|re", Source::PaperTableI);
  REQUIRE(mm != nullptr);
  CHECK(mm->latency_cycles == 1039);
  CHECK(mm->lower_bound_cycles == 1024);
}

TEST_CASE("every spatial-array baseline row satisfies the metric identity") {
  const auto& table = BaselineTable::shipped();
  fabric::ArrayConfig cfg;
  for (const auto& row : table.rows) {
    if (row.source != Source::PaperTableI) continue;
    KernelSpec spec = row.kernel;
    if (spec.kind == KernelKind::Fir) {
      spec.window_count_override =
          spec.dtype_in == NumKind::Complex ? 447 : 448;
    }
    CHECK(lower_bound(spec, cfg) == row.lower_bound_cycles);
    const double thr = throughput(count_ops(spec).total_ops,
                                  row.latency_cycles, 1.0);
    CHECK(std::abs(thr - row.throughput_gops) <= 0.05);
  }
}

TEST_CASE("normalization is idempotent and scales to per-kernel maxima") {
  std::vector<ChartPoint> pts = {{"a", "latency", "x", 10.0},
                                 {"a", "latency", "y", 40.0},
                                 {"b", "latency", "x", 5.0},
                                 {"a", "power", "x", 2.0}};
  const auto once = normalize_points(pts);
  CHECK(once[0].value == doctest::Approx(0.25));
  CHECK(once[1].value == doctest::Approx(1.0));
  CHECK(once[2].value == doctest::Approx(1.0));  // per-kernel maximum
  CHECK(once[3].value == doctest::Approx(1.0));
  const auto twice = normalize_points(once);
  for (size_t i = 0; i < once.size(); ++i) {
    CHECK(twice[i].value == doctest::Approx(once[i].value).epsilon(1e-12));
  }
}

TEST_CASE("comparison reproduces hand-computed table ratios") {
  const auto& table = BaselineTable::shipped();
  std::vector<PerfReport> sims;
  const auto* mm = table.find("matmul|1024x8|8x8|re|re", Source::PaperTableI);
  const auto* vms =
      table.find("vecmagsq|512x1|512x1|cx|cx", Source::PaperTableI);
  REQUIRE(mm != nullptr);
  REQUIRE(vms != nullptr);
  PerfReport sim_mm = *mm;
  sim_mm.source = Source::Simulated;
  PerfReport sim_vms = *vms;
  sim_vms.source = Source::Simulated;
  sims = {sim_mm, sim_vms};
  const auto cmp = compare(sims, table);
  REQUIRE(cmp.rows.size() == 2);
  REQUIRE(cmp.rows[0].hls_sa_latency_ratio.has_value());
  CHECK(*cmp.rows[0].hls_sa_latency_ratio ==
        doctest::Approx(4138.0 / 1039.0).epsilon(1e-6));
  REQUIRE(cmp.rows[1].sa_hls_power_ratio.has_value());
  CHECK(*cmp.rows[1].sa_hls_power_ratio ==
        doctest::Approx(48.6 / 28.0).epsilon(1e-6));
  REQUIRE(cmp.all.has_value());
  // Largest HLS configuration of each kernel, summed.
  CHECK(cmp.all->hls_area_mm2 ==
        doctest::Approx(0.4637 + 0.4054 + 0.4641 + 0.4641 + 0.1164 + 0.3296)
            .epsilon(1e-9));
  CHECK(cmp.all->sa_area_mm2 == doctest::Approx(1.014));
  CHECK(cmp.all->kernels == 6);
}

TEST_CASE("identical reference rows compare with zero deltas") {
  const auto& table = BaselineTable::shipped();
  const auto* row =
      table.find("matvec|1024x4|4x1|cx|cx", Source::PaperTableI);
  REQUIRE(row != nullptr);
  PerfReport sim = *row;
  sim.source = Source::Simulated;
  const auto cmp = compare({sim}, table);
  REQUIRE(cmp.rows.size() == 1);
  REQUIRE(cmp.rows[0].latency_delta_cycles.has_value());
  CHECK(*cmp.rows[0].latency_delta_cycles == 0.0);
  CHECK(*cmp.rows[0].latency_delta_pct == 0.0);
}

TEST_CASE("report JSON round-trips") {
  fabric::ArrayConfig cfg;
  const auto spec = make_spec(KernelKind::MatMul, 64, 8, 8, 8,
                              NumKind::Real, NumKind::Real);
  const PerfReport report = make_report(spec, cfg, 200);
  const auto j = report_to_json(report);
  CHECK(j.at("schema_version").get<int>() == kSchemaVersion);
  const PerfReport back = report_from_json(j);
  CHECK(back.latency_cycles == report.latency_cycles);
  CHECK(back.lower_bound_cycles == report.lower_bound_cycles);
  CHECK(back.kernel.kind == report.kernel.kind);
  CHECK(report_key(back.kernel) == report_key(report.kernel));
  CHECK(back.throughput_gops ==
        doctest::Approx(report.throughput_gops).epsilon(1e-12));
}

TEST_CASE("memory bound stays a secondary diagnostic") {
  fabric::ArrayConfig cfg;
  const auto spec = make_spec(KernelKind::MatVec, 1024, 4, 4, 1,
                              NumKind::Complex, NumKind::Complex);
  const int64_t mem = memory_bound(spec, cfg);
  CHECK(mem > 0);
  CHECK(lower_bound(spec, cfg) == 256);  // unaffected by memory traffic
}
