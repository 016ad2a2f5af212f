#include "upf/config.hpp"

#include <cstdio>
#include <sstream>

namespace upf {
namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(s);
  while (std::getline(in, token, sep)) out.push_back(token);
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(line, "bad number '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "bad number '" + s + "'");
  }
}

long to_long(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) fail(line, "bad integer '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "bad integer '" + s + "'");
  }
}

std::vector<double> to_doubles(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_double(item, line));
  if (out.empty()) fail(line, "empty number list");
  return out;
}

AppSpec parse_app(const std::string& value, int line) {
  const auto parts = split(value, ',');
  if (parts.size() != 4)
    fail(line, "app needs model,p1,p2,alpha; got '" + value + "'");
  AppSpec app;
  app.model = parts[0];
  if (app.model != "sigmoid" && app.model != "log")
    fail(line, "unknown utility model '" + app.model + "'");
  app.p1 = to_double(parts[1], line);
  app.p2 = to_double(parts[2], line);
  app.alpha = to_double(parts[3], line);
  return app;
}

// "<id> beta=<b> app=<model>,<p1>,<p2>,<alpha> [app=...]"
UESpec parse_ue(const std::vector<std::string>& parts, std::size_t start,
                int line) {
  if (parts.size() <= start) fail(line, "UE spec needs an id");
  UESpec ue;
  ue.id = parts[start];
  for (std::size_t i = start + 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) fail(line, "expected key=value, got '" + parts[i] + "'");
    const std::string key = parts[i].substr(0, eq);
    const std::string value = parts[i].substr(eq + 1);
    if (key == "beta")
      ue.beta = to_double(value, line);
    else if (key == "app")
      ue.apps.push_back(parse_app(value, line));
    else
      fail(line, "unknown UE attribute '" + key + "'");
  }
  if (ue.apps.empty()) fail(line, "UE '" + ue.id + "' needs at least one app");
  return ue;
}

EventSpec parse_event(const std::string& value, int line) {
  const auto parts = tokens(value);
  if (parts.size() < 3) fail(line, "event needs '<slot> <kind> <id> ...'");
  EventSpec ev;
  ev.slot = to_long(parts[0], line);
  const std::string& kind = parts[1];
  if (kind == "join") {
    ev.type = EventSpec::Type::Join;
    ev.ue = parse_ue(parts, 2, line);
    ev.id = ev.ue.id;
  } else if (kind == "leave") {
    if (parts.size() != 3) fail(line, "leave takes exactly one id");
    ev.type = EventSpec::Type::Leave;
    ev.id = parts[2];
  } else if (kind == "set-alphas") {
    if (parts.size() != 4) fail(line, "set-alphas takes '<id> <a1,a2,...>'");
    ev.type = EventSpec::Type::SetAlphas;
    ev.id = parts[2];
    ev.alphas = to_doubles(parts[3], line);
  } else {
    fail(line, "unknown event kind '" + kind + "'");
  }
  return ev;
}

Architecture parse_architecture(const std::string& s, int line) {
  if (s == "centralized") return Architecture::Centralized;
  if (s == "distributed") return Architecture::Distributed;
  fail(line, "architecture must be centralized or distributed");
}

RebidPolicy parse_policy(const std::string& s, int line) {
  if (s == "rebid") return RebidPolicy::Rebid;
  if (s == "no-rebid") return RebidPolicy::NoRebid;
  fail(line, "policy must be rebid or no-rebid");
}

BetaLocation parse_beta_location(const std::string& s, int line) {
  if (s == "ue") return BetaLocation::AtUe;
  if (s == "enb") return BetaLocation::AtEnb;
  fail(line, "beta_location must be ue or enb");
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "network" && section != "run" && section != "ues" &&
          section != "events" && section != "overhead")
        fail(line, "unknown section '" + section + "'");
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line, "expected 'key = value'");

    if (section == "network") {
      if (key == "R")
        config.total_rate = to_double(value, line);
      else if (key == "delta")
        config.delta = to_double(value, line);
      else if (key == "damping")
        config.damping = to_double(value, line);
      else if (key == "max_slots")
        config.max_slots = to_long(value, line);
      else
        fail(line, "unknown network key '" + key + "'");
    } else if (section == "run") {
      if (key == "architecture")
        config.architecture = parse_architecture(value, line);
      else if (key == "policy")
        config.policy = parse_policy(value, line);
      else if (key == "beta_location")
        config.beta_location = parse_beta_location(value, line);
      else if (key == "horizon")
        config.horizon = to_long(value, line);
      else
        fail(line, "unknown run key '" + key + "'");
    } else if (section == "ues") {
      if (key != "ue") fail(line, "[ues] lines must start with 'ue ='");
      config.ues.push_back(parse_ue(tokens(value), 0, line));
    } else if (section == "events") {
      if (key != "event") fail(line, "[events] lines must start with 'event ='");
      config.events.push_back(parse_event(value, line));
    } else if (section == "overhead") {
      if (key == "deltas")
        config.overhead_deltas = to_doubles(value, line);
      else if (key == "scenarios")
        config.overhead_scenarios = split(value, ',');
      else
        fail(line, "unknown overhead key '" + key + "'");
    } else {
      fail(line, "key outside of any section");
    }
  }

  if (config.ues.empty()) throw ConfigError("config: no UEs defined");
  if (!(config.total_rate > 0.0)) throw ConfigError("config: R must be positive");
  if (!(config.delta > 0.0)) throw ConfigError("config: delta must be positive");
  if (config.horizon < 1) throw ConfigError("config: horizon must be >= 1");
  return config;
}

std::string render_config(const RunConfig& config) {
  std::ostringstream out;
  out << "[network]\n";
  out << "R = " << number(config.total_rate) << '\n';
  out << "delta = " << number(config.delta) << '\n';
  out << "damping = " << number(config.damping) << '\n';
  out << "max_slots = " << config.max_slots << '\n';
  out << "\n[run]\n";
  out << "architecture = " << to_string(config.architecture) << '\n';
  out << "policy = " << to_string(config.policy) << '\n';
  out << "beta_location = " << to_string(config.beta_location) << '\n';
  out << "horizon = " << config.horizon << '\n';
  out << "\n[ues]\n";
  for (const auto& ue : config.ues) {
    out << "ue = " << ue.id << " beta=" << number(ue.beta);
    for (const auto& app : ue.apps)
      out << " app=" << app.model << ',' << number(app.p1) << ','
          << number(app.p2) << ',' << number(app.alpha);
    out << '\n';
  }
  if (!config.events.empty()) {
    out << "\n[events]\n";
    for (const auto& ev : config.events) {
      out << "event = " << ev.slot << ' ';
      switch (ev.type) {
        case EventSpec::Type::Join:
          out << "join " << ev.ue.id << " beta=" << number(ev.ue.beta);
          for (const auto& app : ev.ue.apps)
            out << " app=" << app.model << ',' << number(app.p1) << ','
                << number(app.p2) << ',' << number(app.alpha);
          break;
        case EventSpec::Type::Leave:
          out << "leave " << ev.id;
          break;
        case EventSpec::Type::SetAlphas: {
          out << "set-alphas " << ev.id << ' ';
          for (std::size_t i = 0; i < ev.alphas.size(); ++i)
            out << (i ? "," : "") << number(ev.alphas[i]);
          break;
        }
      }
      out << '\n';
    }
  }
  out << "\n[overhead]\n";
  out << "deltas = ";
  for (std::size_t i = 0; i < config.overhead_deltas.size(); ++i)
    out << (i ? "," : "") << number(config.overhead_deltas[i]);
  out << '\n';
  out << "scenarios = ";
  for (std::size_t i = 0; i < config.overhead_scenarios.size(); ++i)
    out << (i ? "," : "") << config.overhead_scenarios[i];
  out << '\n';
  return out.str();
}

UEDefinition to_definition(const UESpec& spec) {
  UEDefinition def;
  def.id = spec.id;
  def.beta = spec.beta;
  for (const auto& app : spec.apps) {
    if (app.model == "sigmoid")
      def.utilities.emplace_back(SigmoidParams{app.p1, app.p2});
    else
      def.utilities.emplace_back(LogParams{app.p1, app.p2});
    def.alphas.push_back(app.alpha);
  }
  return def;
}

std::vector<UEProfile> build_profiles(const RunConfig& config) {
  std::vector<UEProfile> profiles;
  profiles.reserve(config.ues.size());
  for (const auto& ue : config.ues)
    profiles.push_back(to_definition(ue).active_profile());
  return profiles;
}

ScenarioScript build_script(const RunConfig& config) {
  ScenarioScript script;
  script.total_rate = config.total_rate;
  script.horizon = config.horizon;
  script.policy = config.policy;
  script.architecture = config.architecture;
  script.cfg.delta = config.delta;
  script.cfg.beta_location = config.beta_location;
  script.cfg.damping = config.damping;
  script.cfg.max_slots = config.max_slots;
  for (const auto& ue : config.ues)
    script.initial_ues.push_back(to_definition(ue));
  for (const auto& ev : config.events) {
    ScenarioEvent out;
    out.slot = ev.slot;
    switch (ev.type) {
      case EventSpec::Type::Join:
        out.action = JoinUE{to_definition(ev.ue)};
        break;
      case EventSpec::Type::Leave:
        out.action = LeaveUE{ev.id};
        break;
      case EventSpec::Type::SetAlphas:
        out.action = SetAlphas{ev.id, ev.alphas};
        break;
    }
    script.events.push_back(std::move(out));
  }
  return script;
}

}  // namespace upf
