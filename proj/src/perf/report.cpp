#include "sasim/perf/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sasim/error.hpp"

namespace sasim {
namespace perf {

namespace {

const char* dtype_name(NumKind k) {
  return k == NumKind::Complex ? "complex" : "real";
}

NumKind dtype_of(const std::string& s) {
  if (s == "real") return NumKind::Real;
  if (s == "complex") return NumKind::Complex;
  throw ConfigError("dtype must be real or complex, got " + s);
}

void push_series(std::vector<ChartPoint>& bars, const std::string& kernel,
                 const std::string& series, const PerfReport& r) {
  auto add = [&](const char* metric, double v) {
    bars.push_back({kernel, metric, series, v});
  };
  add("latency", static_cast<double>(r.latency_cycles));
  add("throughput", r.throughput_gops);
  if (r.multipliers > 0) add("multipliers", r.multipliers);
  if (r.area_mm2) {
    add("area", *r.area_mm2);
    if (*r.area_mm2 > 0) add("perf_per_area", r.throughput_gops / *r.area_mm2);
  }
  if (r.power_mw) {
    add("power", *r.power_mw);
    if (*r.power_mw > 0) {
      add("perf_per_power", r.throughput_gops / *r.power_mw);
    }
  }
}

}  // namespace

std::vector<ChartPoint> normalize_points(std::vector<ChartPoint> points) {
  std::map<std::pair<std::string, std::string>, double> maxima;
  for (const auto& p : points) {
    auto& m = maxima[{p.kernel, p.metric}];
    m = std::max(m, std::abs(p.value));
  }
  for (auto& p : points) {
    const double m = maxima[{p.kernel, p.metric}];
    if (m > 0) p.value /= m;
  }
  return points;
}

ComparisonReport compare(const std::vector<PerfReport>& sims,
                         const BaselineTable& baseline) {
  ComparisonReport out;
  std::vector<ChartPoint> radar;
  for (const auto& sim : sims) {
    ComparisonRow row;
    row.key = report_key(sim.kernel);
    row.kernel = kernel_name(sim.kernel.kind);
    row.sim = sim;
    if (const auto* sa = baseline.find(row.key, Source::PaperTableI)) {
      row.table_sa = *sa;
      row.latency_delta_cycles =
          static_cast<double>(sim.latency_cycles - sa->latency_cycles);
      row.latency_delta_pct =
          100.0 * *row.latency_delta_cycles /
          static_cast<double>(sa->latency_cycles);
    } else {
      out.warnings.push_back("no spatial-array reference row for " + row.key);
    }
    if (const auto* hls = baseline.find(row.key, Source::PaperTableII)) {
      row.table_hls = *hls;
      const double sa_latency = static_cast<double>(
          row.table_sa ? row.table_sa->latency_cycles : sim.latency_cycles);
      row.hls_sa_latency_ratio =
          static_cast<double>(hls->latency_cycles) / sa_latency;
      if (row.table_sa && row.table_sa->power_mw && hls->power_mw &&
          *hls->power_mw > 0) {
        row.sa_hls_power_ratio = *row.table_sa->power_mw / *hls->power_mw;
      }
      if (row.table_sa && row.table_sa->area_mm2 && hls->area_mm2 &&
          *hls->area_mm2 > 0) {
        row.sa_hls_area_ratio = *row.table_sa->area_mm2 / *hls->area_mm2;
      }
    } else {
      out.warnings.push_back("no HLS reference row for " + row.key);
    }

    // Chart samples. The spatial-array series pairs the simulated cycle
    // counts with the fabric's measured constants; the HLS series is pure
    // reference data.
    const std::string label = sim.kernel.describe();
    PerfReport sa_series = sim;
    if (row.table_sa) {
      sa_series.area_mm2 = row.table_sa->area_mm2;
      sa_series.power_mw = row.table_sa->power_mw;
    }
    push_series(out.bars, label, "spatial_array", sa_series);
    if (row.table_hls) push_series(out.bars, label, "hls", *row.table_hls);

    auto radar_point = [&](const char* metric, const char* series, double v) {
      radar.push_back({label, metric, series, v});
    };
    radar_point("latency", "spatial_array",
                static_cast<double>(sim.latency_cycles));
    if (sim.throughput_gops > 0) {
      radar_point("inv_throughput", "spatial_array",
                  1.0 / sim.throughput_gops);
    }
    if (sa_series.area_mm2) {
      radar_point("area", "spatial_array", *sa_series.area_mm2);
    }
    if (sa_series.power_mw) {
      radar_point("power", "spatial_array", *sa_series.power_mw);
    }
    if (row.table_hls) {
      const auto& h = *row.table_hls;
      radar_point("latency", "hls", static_cast<double>(h.latency_cycles));
      if (h.throughput_gops > 0) {
        radar_point("inv_throughput", "hls", 1.0 / h.throughput_gops);
      }
      if (h.area_mm2) radar_point("area", "hls", *h.area_mm2);
      if (h.power_mw) radar_point("power", "hls", *h.power_mw);
    }
    out.rows.push_back(std::move(row));
  }
  out.radar = normalize_points(std::move(radar));

  // 'All' aggregate: a single fabric serves every kernel, so its constants
  // stand alone, while a bank of HLS cores needs the largest configuration
  // of every kernel at once.
  if (!sims.empty()) {
    std::map<KernelKind, const PerfReport*> biggest;
    double sa_area = 0.0, sa_power = 0.0;
    for (const auto& r : baseline.rows) {
      if (r.source == Source::PaperTableII && r.area_mm2) {
        auto& slot = biggest[r.kernel.kind];
        if (!slot || *r.area_mm2 > *slot->area_mm2) slot = &r;
      }
      if (r.source == Source::PaperTableI) {
        if (r.area_mm2) sa_area = std::max(sa_area, *r.area_mm2);
        if (r.power_mw) sa_power = std::max(sa_power, *r.power_mw);
      }
    }
    if (!biggest.empty()) {
      AllAggregate all;
      for (const auto& [kind, r] : biggest) {
        all.hls_area_mm2 += *r->area_mm2;
        if (r->power_mw) all.hls_power_mw += *r->power_mw;
        ++all.kernels;
      }
      all.sa_area_mm2 = sa_area;
      all.sa_power_mw = sa_power;
      out.all = all;
    }
  }
  return out;
}

nlohmann::ordered_json report_to_json(const PerfReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kernel"] = {
      {"kind", kernel_name(r.kernel.kind)},
      {"in_rows", r.kernel.in_rows},
      {"in_cols", r.kernel.in_cols},
      {"w_rows", r.kernel.w_rows},
      {"w_cols", r.kernel.w_cols},
      {"dtype_in", dtype_name(r.kernel.dtype_in)},
      {"dtype_w", dtype_name(r.kernel.dtype_w)},
      {"stride", r.kernel.stride},
      {"streams", r.kernel.streams},
  };
  if (r.kernel.window_count_override) {
    j["kernel"]["window_count_override"] = *r.kernel.window_count_override;
  }
  j["key"] = report_key(r.kernel);
  j["latency_cycles"] = r.latency_cycles;
  j["lower_bound_cycles"] = r.lower_bound_cycles;
  j["utilization_pct"] = r.utilization_pct;
  j["throughput_gops"] = r.throughput_gops;
  j["clock_ghz"] = r.clock_ghz;
  if (r.area_mm2) j["area_mm2"] = *r.area_mm2;
  if (r.power_mw) j["power_mw"] = *r.power_mw;
  j["source"] = source_name(r.source);
  j["multipliers"] = r.multipliers;
  return j;
}

PerfReport report_from_json(const nlohmann::json& j) {
  PerfReport r;
  const auto& k = j.at("kernel");
  const auto kind = kernel_from_name(k.at("kind").get<std::string>());
  if (!kind) throw ConfigError("unknown kernel kind in report file");
  r.kernel.kind = *kind;
  r.kernel.in_rows = k.at("in_rows").get<int64_t>();
  r.kernel.in_cols = k.at("in_cols").get<int64_t>();
  r.kernel.w_rows = k.at("w_rows").get<int64_t>();
  r.kernel.w_cols = k.at("w_cols").get<int64_t>();
  r.kernel.dtype_in = dtype_of(k.at("dtype_in").get<std::string>());
  r.kernel.dtype_w = dtype_of(k.at("dtype_w").get<std::string>());
  r.kernel.stride = k.value("stride", int64_t{1});
  r.kernel.streams = k.value("streams", int64_t{1});
  if (k.contains("window_count_override")) {
    r.kernel.window_count_override =
        k.at("window_count_override").get<int64_t>();
  }
  r.latency_cycles = j.at("latency_cycles").get<int64_t>();
  r.lower_bound_cycles = j.at("lower_bound_cycles").get<int64_t>();
  r.utilization_pct = j.at("utilization_pct").get<double>();
  r.throughput_gops = j.at("throughput_gops").get<double>();
  r.clock_ghz = j.value("clock_ghz", 1.0);
  if (j.contains("area_mm2")) r.area_mm2 = j.at("area_mm2").get<double>();
  if (j.contains("power_mw")) r.power_mw = j.at("power_mw").get<double>();
  if (j.contains("source")) {
    if (auto s = source_from_name(j.at("source").get<std::string>())) {
      r.source = *s;
    }
  }
  r.multipliers = j.value("multipliers", 0);
  return r;
}

std::string report_to_csv(const std::vector<PerfReport>& reports) {
  std::ostringstream os;
  os << "kernel,in_rows,in_cols,w_rows,w_cols,dtype_in,dtype_w,latency,"
        "lower_bound,throughput,area_mm2,power_mw,source,multipliers,"
        "utilization_pct\n";
  for (const auto& r : reports) {
    const int64_t second = r.kernel.kind == KernelKind::MatchedFilter
                               ? r.kernel.streams
                               : r.kernel.in_cols;
    os << kernel_name(r.kernel.kind) << ',' << r.kernel.in_rows << ','
       << second << ',' << r.kernel.w_rows << ',' << r.kernel.w_cols << ','
       << dtype_name(r.kernel.dtype_in) << ','
       << dtype_name(r.kernel.dtype_w) << ',' << r.latency_cycles << ','
       << r.lower_bound_cycles << ',' << r.throughput_gops << ','
       << (r.area_mm2 ? std::to_string(*r.area_mm2) : "") << ','
       << (r.power_mw ? std::to_string(*r.power_mw) : "") << ','
       << source_name(r.source) << ',' << r.multipliers << ','
       << r.utilization_pct << '\n';
  }
  return os.str();
}

nlohmann::ordered_json chart_to_json(const std::vector<ChartPoint>& points) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    arr.push_back({{"kernel", p.kernel},
                   {"metric", p.metric},
                   {"series", p.series},
                   {"value", p.value}});
  }
  return arr;
}

nlohmann::ordered_json comparison_to_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json rj;
    rj["key"] = row.key;
    rj["kernel"] = row.kernel;
    rj["simulated"] = report_to_json(row.sim);
    if (row.table_sa) rj["spatial_array_reference"] = report_to_json(*row.table_sa);
    if (row.table_hls) rj["hls_reference"] = report_to_json(*row.table_hls);
    if (row.latency_delta_cycles) {
      rj["latency_delta_cycles"] = *row.latency_delta_cycles;
      rj["latency_delta_pct"] = *row.latency_delta_pct;
    }
    if (row.hls_sa_latency_ratio) {
      rj["hls_sa_latency_ratio"] = *row.hls_sa_latency_ratio;
    }
    if (row.sa_hls_power_ratio) {
      rj["sa_hls_power_ratio"] = *row.sa_hls_power_ratio;
    }
    if (row.sa_hls_area_ratio) {
      rj["sa_hls_area_ratio"] = *row.sa_hls_area_ratio;
    }
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  if (report.all) {
    j["all"] = {{"hls_area_mm2", report.all->hls_area_mm2},
                {"hls_power_mw", report.all->hls_power_mw},
                {"sa_area_mm2", report.all->sa_area_mm2},
                {"sa_power_mw", report.all->sa_power_mw},
                {"kernels", report.all->kernels}};
  }
  j["radar"] = chart_to_json(report.radar);
  j["bars"] = chart_to_json(report.bars);
  j["warnings"] = report.warnings;
  return j;
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "key,sim_latency,sa_latency,hls_latency,latency_delta_cycles,"
        "latency_delta_pct,hls_sa_latency_ratio,sa_hls_power_ratio,"
        "sa_hls_area_ratio\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& row : report.rows) {
    os << row.key << ',' << row.sim.latency_cycles << ','
       << (row.table_sa ? std::to_string(row.table_sa->latency_cycles)
                        : std::string())
       << ','
       << (row.table_hls ? std::to_string(row.table_hls->latency_cycles)
                         : std::string())
       << ',' << opt(row.latency_delta_cycles) << ','
       << opt(row.latency_delta_pct) << ',' << opt(row.hls_sa_latency_ratio)
       << ',' << opt(row.sa_hls_power_ratio) << ','
       << opt(row.sa_hls_area_ratio) << '\n';
  }
  if (report.all) {
    os << "all,,,,,,," << report.all->hls_area_mm2 << ','
       << report.all->sa_area_mm2 << '\n';
  }
  return os.str();
}

}  // namespace perf
}  // namespace sasim
