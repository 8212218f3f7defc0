#include "pacekit/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pacekit/random.hpp"

namespace pacekit {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double value) { return json(value).dump(); }

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  out += "\r\n";
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path resolve_out_dir(const RunRequest& request, const Scenario& scenario) {
  if (request.out_dir) return *request.out_dir;
  if (scenario.out_dir) return *scenario.out_dir;
  if (const char* env = std::getenv("PACEKIT_OUT_DIR"); env && *env) return env;
  return ".";
}

Scenario load_scenario(const RunRequest& request) {
  json doc = load_scenario_json(request.scenario);
  if (!doc.is_object()) throw ScenarioError("<root>", "scenario must be a JSON object");
  for (const auto& assignment : request.overrides) apply_override(doc, assignment);
  if (request.seed) doc["seed"] = *request.seed;
  if (request.mode) doc["mode"] = *request.mode;
  if (request.days) doc["days"] = *request.days;
  return parse_scenario(doc);
}

namespace {

constexpr std::int64_t kCurrencyScale = Money::kMicrosPerUnit;

template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    body();
    return kExitOk;
  } catch (const ScenarioError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InvalidSpec& e) {
    log << "config error: " << e.field() << ": " << e.violations().front().reason << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

std::uint64_t campaign_seed(const Scenario& sc, const CampaignSpec& spec) {
  return derive_seed(sc.seed, hash_tag(spec.campaign_id));
}

std::vector<LoopDay> run_campaign(const Scenario& sc, const CampaignEntry& c,
                                  const SffParams& params) {
  CampaignHistory history = c.history;
  return simulate_closed_loop(c.spec, params, history, sc.days, c.traffic, campaign_seed(sc, c.spec),
                              sc.options, sc.mode);
}

json day_metrics_json(const CampaignEntry& c, const LoopDay& day, LiveHoursBasis basis) {
  const auto m = campaign_metrics(day.result, c.spec, basis);
  json j;
  j["campaign_id"] = c.spec.campaign_id;
  j["date"] = format_date(day.date);
  j["start_fraction"] = day.start_fraction;
  j["transition_window_minutes"] = day.result.plan.window_minutes;
  j["live_hours"] = m.live_hours;
  j["overdelivery_rate"] = m.overdelivery_rate;
  j["total_spend"] = m.total_spend.micros();
  j["dropped_spend"] = day.result.final_ledger.dropped_spend().micros();
  j["goal_hit"] = m.goal_hit;
  j["goal_hit_minute"] = day.result.goal_hit_minute ? json(*day.result.goal_hit_minute) : json();
  return j;
}

json distribution_json(const DistributionSummary& d) {
  return {{"count", d.count},
          {"mean", d.mean},
          {"median", d.median},
          {"histogram", {{"edges", d.histogram.edges}, {"counts", d.histogram.counts}}}};
}

json metrics_summary_json(const MetricsSummary& m) {
  return {{"live_hours", distribution_json(m.live_hours)},
          {"overdelivery_rate", distribution_json(m.overdelivery_rate)}};
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

using Grid = std::map<std::string, std::vector<double>>;

Grid build_grid(const Scenario& sc, const std::vector<std::string>& flags) {
  Grid grid = sc.sweep;
  for (const auto& flag : flags) {
    const auto eq = flag.find('=');
    if (eq == std::string::npos) throw ScenarioError("--grid " + flag, "expected name=v1,v2,...");
    const std::string name = flag.substr(0, eq);
    const auto& known = sweepable_parameters();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ScenarioError("--grid " + name, "not a sweepable parameter");
    }
    std::vector<double> values;
    std::stringstream parts(flag.substr(eq + 1));
    for (std::string part; std::getline(parts, part, ',');) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != part.size()) throw ScenarioError("--grid " + name, "bad value '" + part + "'");
      values.push_back(v);
    }
    if (values.empty()) throw ScenarioError("--grid " + name, "needs at least one value");
    grid[name] = values;
  }
  if (grid.empty()) throw ScenarioError("sweep", "no parameters to sweep");
  for (auto& [name, values] : grid) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
  }
  return grid;
}

// Grid points in lexicographic order of (name-sorted) parameter values.
std::vector<std::vector<double>> grid_points(const Grid& grid) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(grid.size(), 0);
  std::vector<const std::vector<double>*> axes;
  for (const auto& [name, values] : grid) axes.push_back(&values);
  for (;;) {
    std::vector<double> point;
    for (std::size_t a = 0; a < axes.size(); ++a) point.push_back((*axes[a])[idx[a]]);
    out.push_back(std::move(point));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a]->size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
  }
}

}  // namespace

int cmd_simulate(const RunRequest& request, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario sc = load_scenario(request);
    const fs::path out_dir = resolve_out_dir(request, sc);

    std::string curve = csv_row({"campaign_id", "date", "minute", "recognized_spend", "phase",
                                 "throttle_rate"});
    json metrics = json::array();
    for (const auto& c : sc.campaigns) {
      const auto days = run_campaign(sc, c, sc.params);
      for (const auto& day : days) {
        const auto& r = day.result;
        const std::string date = format_date(day.date);
        for (std::size_t i = 0; i < r.phase_trace.size(); ++i) {
          curve += csv_row({c.spec.campaign_id, date, std::to_string(r.first_minute + static_cast<Minute>(i)),
                            std::to_string(r.spend_curve[i].micros()), to_string(r.phase_trace[i]),
                            format_number(r.throttle_trace[i])});
        }
        // End-of-day settlement point.
        curve += csv_row({c.spec.campaign_id, date, std::to_string(c.spec.targeting_end),
                          std::to_string(r.spend_curve.back().micros()),
                          r.phase_trace.empty() ? "" : to_string(r.phase_trace.back()),
                          r.throttle_trace.empty() ? "0" : format_number(r.throttle_trace.back())});
        metrics.push_back(day_metrics_json(c, day, sc.live_hours_basis));
      }
    }
    json doc;
    doc["schema_version"] = kScenarioSchemaVersion;
    doc["command"] = "simulate";
    doc["mode"] = to_string(sc.mode);
    doc["seed"] = sc.seed;
    doc["days"] = sc.days;
    doc["currency_scale"] = kCurrencyScale;
    doc["campaigns"] = std::move(metrics);

    write_file_atomic(out_dir / "spend_curve.csv", curve);
    write_file_atomic(out_dir / "metrics.json", doc.dump(2) + "\n");
    log << "simulate: " << sc.campaigns.size() << " campaign(s), " << sc.days << " day(s) -> "
        << out_dir.string() << "\n";
  });
}

int cmd_abtest(const RunRequest& request, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario sc = load_scenario(request);
    const fs::path out_dir = resolve_out_dir(request, sc);

    std::vector<CampaignSpec> specs;
    std::vector<CampaignHistory> histories;
    std::vector<TrafficModel> traffic;
    for (const auto& c : sc.campaigns) {
      specs.push_back(c.spec);
      histories.push_back(c.history);
      traffic.push_back(c.traffic);
    }
    AbConfig config;
    config.control = sc.control;
    config.treatment = sc.treatment;
    config.days = sc.days;
    config.seed = sc.seed;
    config.options = sc.options;
    config.buckets = sc.buckets;
    config.live_hours_basis = sc.live_hours_basis;
    const AbResult result = run_budget_split(specs, histories, traffic, config);

    std::string csv = csv_row({"campaign_id", "control_live_hours", "treatment_live_hours",
                               "delta_live_hours", "control_overdelivery_rate",
                               "treatment_overdelivery_rate", "delta_overdelivery",
                               "control_total_spend", "treatment_total_spend", "control_goal_hit",
                               "treatment_goal_hit"});
    for (const auto& r : result.rows) {
      csv += csv_row({r.campaign_id, format_number(r.control.live_hours),
                      format_number(r.treatment.live_hours), format_number(r.delta_live_hours),
                      format_number(r.control.overdelivery_rate),
                      format_number(r.treatment.overdelivery_rate),
                      format_number(r.delta_overdelivery),
                      std::to_string(r.control.total_spend.micros()),
                      std::to_string(r.treatment.total_spend.micros()), bool_text(r.control.goal_hit),
                      bool_text(r.treatment.goal_hit)});
    }

    json doc;
    doc["schema_version"] = kScenarioSchemaVersion;
    doc["command"] = "abtest";
    doc["seed"] = sc.seed;
    doc["days"] = sc.days;
    doc["currency_scale"] = kCurrencyScale;
    doc["control_mode"] = to_string(sc.control.mode);
    doc["treatment_mode"] = to_string(sc.treatment.mode);
    json failures = json::array();
    for (const auto& f : result.failures) {
      failures.push_back({{"campaign_id", f.campaign_id}, {"message", f.message}});
    }
    doc["failures"] = std::move(failures);
    if (result.aggregates) {
      const auto& a = *result.aggregates;
      doc["campaigns"] = a.campaigns;
      doc["mean_delta_live_hours"] = a.mean_delta_live_hours;
      doc["mean_delta_overdelivery"] = a.mean_delta_overdelivery;
      doc["control"] = metrics_summary_json(a.control);
      doc["treatment"] = metrics_summary_json(a.treatment);
      doc["delta_live_hours"] = distribution_json(a.delta_live_hours);
    } else {
      doc["campaigns"] = 0;
    }

    write_file_atomic(out_dir / "abtest.csv", csv);
    write_file_atomic(out_dir / "summary.json", doc.dump(2) + "\n");
    log << "abtest: " << result.rows.size() << " campaign(s), " << result.failures.size()
        << " failure(s) -> " << out_dir.string() << "\n";
    for (const auto& f : result.failures) log << "  failed " << f.campaign_id << ": " << f.message << "\n";
    if (!result.aggregates) throw std::runtime_error("every campaign failed");
  });
}

int cmd_sweep(const RunRequest& request, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario sc = load_scenario(request);
    const fs::path out_dir = resolve_out_dir(request, sc);
    const Grid grid = build_grid(sc, request.grid);
    const auto points = grid_points(grid);

    std::vector<SffParams> param_sets;
    for (const auto& point : points) {
      SffParams p = sc.params;
      std::size_t a = 0;
      for (const auto& [name, values] : grid) set_sweep_parameter(p, name, point[a++]);
      try {
        for (const auto& c : sc.campaigns) validate_params(p, c.spec);
      } catch (const InvalidSpec& e) {
        std::string where;
        a = 0;
        for (const auto& [name, values] : grid) {
          where += (where.empty() ? "" : ",") + name + "=" + format_number(point[a++]);
        }
        throw ScenarioError("sweep[" + where + "]." + e.field(), e.violations().front().reason);
      }
      param_sets.push_back(p);
    }

    std::vector<std::string> header;
    for (const auto& [name, values] : grid) header.push_back(name);
    for (const char* col : {"live_hours", "overdelivery_rate", "total_spend", "goal_hit_rate"}) {
      header.emplace_back(col);
    }
    std::string csv = csv_row(header);
    for (std::size_t k = 0; k < points.size(); ++k) {
      std::vector<double> hours;
      std::vector<double> over;
      Money spend;
      std::size_t hits = 0;
      for (const auto& c : sc.campaigns) {
        for (const auto& day : run_campaign(sc, c, param_sets[k])) {
          const auto m = campaign_metrics(day.result, c.spec, sc.live_hours_basis);
          hours.push_back(m.live_hours);
          over.push_back(m.overdelivery_rate);
          spend += m.total_spend;
          hits += m.goal_hit ? 1 : 0;
        }
      }
      const auto none = std::span<const double>{};
      std::vector<std::string> row;
      for (double v : points[k]) row.push_back(format_number(v));
      row.push_back(format_number(summarize_values(hours, none).mean));
      row.push_back(format_number(summarize_values(over, none).mean));
      row.push_back(std::to_string(spend.micros()));
      row.push_back(format_number(static_cast<double>(hits) / static_cast<double>(hours.size())));
      csv += csv_row(row);
    }
    write_file_atomic(out_dir / "sweep.csv", csv);
    log << "sweep: " << points.size() << " grid point(s) -> " << out_dir.string() << "\n";
  });
}

}  // namespace pacekit
