#include "pacekit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pacekit {

using nlohmann::json;

namespace {

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  // nlohmann reports the byte after the offending character.
  if (column > 1) --column;
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const char* type_name(const json& v) { return v.type_name(); }

// Typed accessors over one JSON object that report errors by field path.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw ScenarioError(path_.empty() ? "<root>" : path_,
                          std::string("expected an object, got ") + type_name(obj_));
    }
  }

  [[nodiscard]] std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  [[nodiscard]] const json* find(const std::string& key) const {
    auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }
  [[nodiscard]] const json& require(const std::string& key) const {
    const json* v = find(key);
    if (!v) throw ScenarioError(at(key), "missing required field");
    return *v;
  }

  [[nodiscard]] double number(const std::string& key) const { return as_number(require(key), key); }
  [[nodiscard]] double number(const std::string& key, double fallback) const {
    const json* v = find(key);
    return v ? as_number(*v, key) : fallback;
  }
  [[nodiscard]] std::int64_t integer(const std::string& key) const {
    return as_integer(require(key), key);
  }
  [[nodiscard]] std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    const json* v = find(key);
    return v ? as_integer(*v, key) : fallback;
  }
  [[nodiscard]] std::string string(const std::string& key) const {
    return as_string(require(key), key);
  }
  [[nodiscard]] std::string string(const std::string& key, const std::string& fallback) const {
    const json* v = find(key);
    return v ? as_string(*v, key) : fallback;
  }
  [[nodiscard]] bool boolean(const std::string& key, bool fallback) const {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ScenarioError(at(key), "expected true or false");
    return v->get<bool>();
  }
  [[nodiscard]] Money money(const std::string& key) const { return Money::from_units(number(key)); }

  [[nodiscard]] std::vector<double> numbers(const std::string& key,
                                            std::vector<double> fallback) const {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ScenarioError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      out.push_back(as_number((*v)[i], key + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

 private:
  [[nodiscard]] double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ScenarioError(at(key), std::string("expected a number, got ") + type_name(v));
    return v.get<double>();
  }
  [[nodiscard]] std::int64_t as_integer(const json& v, const std::string& key) const {
    if (!v.is_number_integer()) {
      throw ScenarioError(at(key), std::string("expected an integer, got ") + type_name(v));
    }
    return v.get<std::int64_t>();
  }
  [[nodiscard]] std::string as_string(const json& v, const std::string& key) const {
    if (!v.is_string()) throw ScenarioError(at(key), std::string("expected a string, got ") + type_name(v));
    return v.get<std::string>();
  }

  const json& obj_;
  std::string path_;
};

[[noreturn]] void rethrow_at(const std::string& path, const InvalidSpec& e) {
  const auto& v = e.violations().front();
  throw ScenarioError(path.empty() ? v.field : path + "." + v.field, v.reason);
}

void raise_violations(const std::string& path, std::vector<SpecViolation> violations) {
  if (!violations.empty()) rethrow_at(path, InvalidSpec(std::move(violations)));
}

Date date_field(const Fields& f, const std::string& key) {
  const std::string text = f.string(key);
  try {
    return parse_date(text);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(f.at(key), e.what());
  }
}

DelayModel parse_delay(const json& v, const std::string& path) {
  const Fields f(v, path);
  const std::string kind = f.string("kind");
  try {
    if (kind == "fixed") return DelayModel::fixed(static_cast<int>(f.integer("minutes")));
    if (kind == "exponential") return DelayModel::exponential(f.number("mean_minutes"));
    if (kind == "histogram") {
      const json& buckets = f.require("buckets");
      if (!buckets.is_array()) throw ScenarioError(f.at("buckets"), "expected an array");
      std::vector<DelayBucket> out;
      for (std::size_t i = 0; i < buckets.size(); ++i) {
        const Fields b(buckets[i], f.at("buckets") + "[" + std::to_string(i) + "]");
        out.push_back({static_cast<int>(b.integer("delay_minutes")), b.number("probability")});
      }
      return DelayModel::histogram(std::move(out));
    }
  } catch (const InvalidSpec& e) {
    throw ScenarioError(path, e.violations().front().reason);
  }
  throw ScenarioError(f.at("kind"), "expected fixed, exponential or histogram, got '" + kind + "'");
}

TrafficModel parse_traffic(const json& v, const std::string& path, const TrafficModel& base) {
  const Fields f(v, path);
  TrafficModel t = base;
  if (f.find("kind")) {
    const std::string kind = f.string("kind");
    if (kind == "constant") {
      t.kind = TrafficKind::Constant;
    } else if (kind == "piecewise") {
      t.kind = TrafficKind::Piecewise;
    } else if (kind == "poisson") {
      t.kind = TrafficKind::Poisson;
    } else {
      throw ScenarioError(f.at("kind"), "expected constant, piecewise or poisson, got '" + kind + "'");
    }
  }
  t.rate = f.number("rate", t.rate);
  if (const json* profile = f.find("profile")) {
    if (!profile->is_array()) throw ScenarioError(f.at("profile"), "expected an array");
    t.profile.clear();
    for (std::size_t i = 0; i < profile->size(); ++i) {
      const Fields seg((*profile)[i], f.at("profile") + "[" + std::to_string(i) + "]");
      t.profile.push_back({static_cast<Minute>(seg.integer("start_minute")), seg.number("rate")});
    }
  }
  t.win_probability = f.number("win_probability", t.win_probability);
  t.win_noise = f.number("win_noise", t.win_noise);
  try {
    validate_traffic(t);
  } catch (const InvalidSpec& e) {
    const auto& viol = e.violations().front();
    const std::string field = viol.field.substr(viol.field.find('.') + 1);
    throw ScenarioError(f.at(field), viol.reason);
  }
  return t;
}

CampaignHistory parse_history(const json& v, const std::string& path, const CampaignSpec& spec,
                              Date start_date) {
  const Fields f(v, path);
  CampaignHistory h;
  try {
    if (const json* records = f.find("records")) {
      if (!records->is_array()) throw ScenarioError(f.at("records"), "expected an array");
      for (std::size_t i = 0; i < records->size(); ++i) {
        const Fields r((*records)[i], f.at("records") + "[" + std::to_string(i) + "]");
        const Money goal = r.find("daily_goal") ? r.money("daily_goal") : spec.daily_goal;
        h.append({date_field(r, "date"), r.money("actual_spend"), goal});
      }
    } else if (f.find("overspend_ratio")) {
      const double ratio = f.number("overspend_ratio");
      const auto days = f.integer("days", 28);
      if (ratio < 0.0) throw ScenarioError(f.at("overspend_ratio"), "must be >= 0");
      if (days < 1) throw ScenarioError(f.at("days"), "must be >= 1");
      h = make_flat_history(spec.daily_goal, ratio, static_cast<int>(days), start_date);
    }
  } catch (const InvalidSpec& e) {
    rethrow_at(path, e);
  }
  if (f.find("current_start_fraction")) {
    std::optional<Date> refreshed;
    if (f.find("last_refresh_date")) refreshed = date_field(f, "last_refresh_date");
    h.set_start(f.number("current_start_fraction"), refreshed);
  }
  return h;
}

CampaignEntry parse_campaign(const json& v, const std::string& path, const TrafficModel& traffic,
                             Date start_date) {
  const Fields f(v, path);
  CampaignEntry c;
  auto& s = c.spec;
  s.campaign_id = f.string("campaign_id");
  s.daily_goal = f.money("daily_goal");
  s.billing_cap = f.money("billing_cap");
  s.fee_per_conversion = f.money("fee_per_conversion");
  s.conversion_rate = f.number("conversion_rate");
  if (const json* delay = f.find("conversion_delay")) {
    s.conversion_delay = parse_delay(*delay, f.at("conversion_delay"));
  }
  s.targeting_start = static_cast<Minute>(f.integer("targeting_start", 0));
  s.targeting_end = static_cast<Minute>(f.integer("targeting_end", kMinutesPerDay));
  raise_violations(path, check_campaign(s));

  c.traffic = traffic;
  if (const json* t = f.find("traffic")) c.traffic = parse_traffic(*t, f.at("traffic"), traffic);
  if (const json* h = f.find("history")) c.history = parse_history(*h, f.at("history"), s, start_date);
  return c;
}

template <typename Enum>
Enum choice(const Fields& f, const std::string& key, Enum fallback,
            std::initializer_list<std::pair<const char*, Enum>> options) {
  if (!f.find(key)) return fallback;
  const std::string text = f.string(key);
  std::string expected;
  for (const auto& [name, value] : options) {
    if (text == name) return value;
    expected += expected.empty() ? name : std::string(", ") + name;
  }
  throw ScenarioError(f.at(key), "expected one of " + expected + ", got '" + text + "'");
}

ArmConfig parse_arm(const json* v, const std::string& path, ArmConfig arm, const SffParams& params) {
  arm.params = params;
  if (!v) return arm;
  const Fields f(*v, path);
  if (f.find("mode")) {
    try {
      arm.mode = parse_mode(f.string("mode"));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(f.at("mode"), e.what());
    }
  }
  arm.static_start_fraction = f.number("start_fraction", arm.static_start_fraction);
  if (!(arm.static_start_fraction >= 0.0 && arm.static_start_fraction <= 1.0)) {
    throw ScenarioError(f.at("start_fraction"), "must lie in [0, 1]");
  }
  return arm;
}

}  // namespace

json parse_scenario_text(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ScenarioError(line_column(text, e.byte), what);
  }
}

json load_scenario_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string(), "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ", " + e.location(),
                        std::string(e.what()).substr(e.location().size() + 2));
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ScenarioError("--set " + assignment, "expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  std::string pointer;
  std::stringstream parts(key);
  for (std::string part; std::getline(parts, part, '.');) {
    if (part.empty()) throw ScenarioError("--set " + key, "empty path component");
    pointer += "/" + part;
  }
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  try {
    doc[json::json_pointer(pointer)] = std::move(value);
  } catch (const json::exception& e) {
    throw ScenarioError("--set " + key, e.what());
  }
}

PacingMode parse_mode(const std::string& text) {
  if (text == "sff") return PacingMode::Sff;
  if (text == "traditional_ff") return PacingMode::TraditionalFF;
  if (text == "asap") return PacingMode::Asap;
  throw std::invalid_argument("expected mode sff, traditional_ff or asap, got '" + text + "'");
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> kNames{"max_or", "max_start", "min_or", "min_start",
                                               "transition_window_minutes"};
  return kNames;
}

void set_sweep_parameter(SffParams& params, const std::string& name, double value) {
  if (name == "min_or") {
    params.min_or = value;
  } else if (name == "max_or") {
    params.max_or = value;
  } else if (name == "min_start") {
    params.min_start = value;
  } else if (name == "max_start") {
    params.max_start = value;
  } else if (name == "transition_window_minutes") {
    if (value != std::floor(value)) {
      throw ScenarioError("sweep." + name, "window length must be a whole number of minutes");
    }
    params.transition_window_minutes = static_cast<int>(value);
  } else {
    throw ScenarioError("sweep." + name, "not a sweepable parameter");
  }
}

namespace {

std::uint64_t seed_value(const json& v, const std::string& location) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ScenarioError(location, "expected a non-negative integer");
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  const Fields root(doc, "");
  Scenario sc;
  sc.schema_version = static_cast<int>(root.integer("schema_version"));
  if (sc.schema_version != kScenarioSchemaVersion) {
    throw ScenarioError("schema_version", "unsupported version " + std::to_string(sc.schema_version));
  }
  sc.seed = seed_value(root.require("seed"), "seed");
  if (root.find("mode")) {
    try {
      sc.mode = parse_mode(root.string("mode"));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("mode", e.what());
    }
  }
  sc.days = static_cast<int>(root.integer("days", 1));
  if (sc.days < 1) throw ScenarioError("days", "must be >= 1");
  sc.start_date = root.find("start_date") ? date_field(root, "start_date") : parse_date("2024-06-01");
  sc.options.as_of = sc.start_date;

  if (const json* sff = root.find("sff")) {
    const Fields f(*sff, "sff");
    auto& p = sc.params;
    p.min_or = f.number("min_or", p.min_or);
    p.max_or = f.number("max_or", p.max_or);
    p.min_start = f.number("min_start", p.min_start);
    p.max_start = f.number("max_start", p.max_start);
    p.transition_window_minutes =
        static_cast<int>(f.integer("transition_window_minutes", p.transition_window_minutes));
    p.refresh_period_days = static_cast<int>(f.integer("refresh_period_days", p.refresh_period_days));
  }
  raise_violations("sff", check_params(sc.params));

  if (const json* opts = root.find("options")) {
    const Fields f(*opts, "options");
    auto& o = sc.options;
    o.sff.lookback_days = static_cast<int>(f.integer("lookback_days", o.sff.lookback_days));
    if (o.sff.lookback_days < 1) throw ScenarioError(f.at("lookback_days"), "must be >= 1");
    o.sff.averaging = choice(f, "ratio_averaging", o.sff.averaging,
                             {{"mean_of_ratios", RatioAveraging::MeanOfRatios},
                              {"ratio_of_totals", RatioAveraging::RatioOfTotals}});
    o.sff.monotone_updates = f.boolean("monotone_updates", o.sff.monotone_updates);
    o.plan.basis = choice(f, "start_basis", o.plan.basis,
                          {{"targeting_window", StartBasis::TargetingWindow},
                           {"calendar_day", StartBasis::CalendarDay}});
    o.plan.window_lead_minutes =
        static_cast<int>(f.integer("window_lead_minutes", o.plan.window_lead_minutes));
    if (o.plan.window_lead_minutes < 0) {
      throw ScenarioError(f.at("window_lead_minutes"), "must be >= 0");
    }
    o.spill_to_next_day = f.boolean("spill_to_next_day", o.spill_to_next_day);
    sc.live_hours_basis = choice(f, "live_hours_basis", sc.live_hours_basis,
                                 {{"targeting_start", LiveHoursBasis::TargetingStart},
                                  {"midnight", LiveHoursBasis::Midnight}});
    o.controller.max_step = f.number("intraday_max_step", o.controller.max_step);
    o.controller.min_pass = f.number("intraday_min_pass", o.controller.min_pass);
    if (!(o.controller.max_step > 0.0 && o.controller.max_step < 1.0)) {
      throw ScenarioError(f.at("intraday_max_step"), "must lie in (0, 1)");
    }
    if (!(o.controller.min_pass > 0.0 && o.controller.min_pass <= 1.0)) {
      throw ScenarioError(f.at("intraday_min_pass"), "must lie in (0, 1]");
    }
  }

  const Fields* ab = nullptr;
  std::optional<Fields> ab_fields;
  if (const json* v = root.find("abtest")) {
    ab_fields.emplace(*v, "abtest");
    ab = &*ab_fields;
  }
  sc.control = parse_arm(ab ? ab->find("control") : nullptr, "abtest.control",
                         ArmConfig::traditional_ff(root.number("control_start_fraction", 0.85)),
                         sc.params);
  sc.treatment = parse_arm(ab ? ab->find("treatment") : nullptr, "abtest.treatment",
                           ArmConfig::smart(sc.params), sc.params);
  sc.options.static_start_fraction = sc.control.static_start_fraction;

  if (const json* hist = root.find("histogram")) {
    const Fields f(*hist, "histogram");
    auto& b = sc.buckets;
    b.live_hours_edges = f.numbers("live_hours_edges", b.live_hours_edges);
    b.overdelivery_edges = f.numbers("overdelivery_edges", b.overdelivery_edges);
    b.delta_live_hours_edges = f.numbers("delta_live_hours_edges", b.delta_live_hours_edges);
    for (const auto* edges : {&b.live_hours_edges, &b.overdelivery_edges, &b.delta_live_hours_edges}) {
      if (!std::is_sorted(edges->begin(), edges->end())) {
        throw ScenarioError("histogram", "bucket edges must be sorted ascending");
      }
    }
  }

  TrafficModel traffic;
  traffic.rate = 20;
  if (const json* t = root.find("traffic")) traffic = parse_traffic(*t, "traffic", traffic);

  if (const json* list = root.find("campaigns")) {
    if (!list->is_array()) throw ScenarioError("campaigns", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      sc.campaigns.push_back(
          parse_campaign((*list)[i], "campaigns[" + std::to_string(i) + "]", traffic, sc.start_date));
    }
  }
  if (const json* syn = root.find("synthetic_campaigns")) {
    const Fields f(*syn, "synthetic_campaigns");
    const auto count = f.integer("count");
    if (count < 0) throw ScenarioError(f.at("count"), "must be >= 0");
    const std::uint64_t seed = seed_value(f.require("seed"), f.at("seed"));
    for (auto& c : synthetic_campaigns(static_cast<int>(count), seed, sc.start_date)) {
      sc.campaigns.push_back({std::move(c.spec), std::move(c.history), std::move(c.traffic)});
    }
  }
  if (sc.campaigns.empty()) throw ScenarioError("campaigns", "at least one campaign is required");
  for (std::size_t i = 0; i < sc.campaigns.size(); ++i) {
    try {
      validate_params(sc.params, sc.campaigns[i].spec);
    } catch (const InvalidSpec& e) {
      rethrow_at("sff", e);
    }
  }

  if (const json* sweep = root.find("sweep")) {
    const Fields f(*sweep, "sweep");
    for (const auto& [name, values] : sweep->items()) {
      const auto& known = sweepable_parameters();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ScenarioError(f.at(name), "not a sweepable parameter");
      }
      sc.sweep[name] = f.numbers(name, {});
      if (sc.sweep[name].empty()) throw ScenarioError(f.at(name), "needs at least one value");
    }
  }

  if (const json* out = root.find("output")) {
    const Fields f(*out, "output");
    if (f.find("out_dir")) sc.out_dir = f.string("out_dir");
  }
  return sc;
}

}  // namespace pacekit
