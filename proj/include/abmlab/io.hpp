#pragma once

// Serialization: JSON schemas for configs, profiles, states and reports,
// CSV writers for trajectories and tables. Doubles are written with 17
// significant digits, which round-trips IEEE754 exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "abmlab/density_profile.hpp"
#include "abmlab/discrete_config.hpp"
#include "abmlab/duality.hpp"
#include "abmlab/estimate.hpp"
#include "abmlab/particles.hpp"
#include "abmlab/version.hpp"

namespace abmlab {

inline std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal JSON emitter that controls number formatting; parsing goes through
// nlohmann::json.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return token("{"); }
  JsonWriter& end_object() {
    strip_comma();
    out_ += "},";
    return *this;
  }
  JsonWriter& begin_array() { return token("["); }
  JsonWriter& end_array() {
    strip_comma();
    out_ += "],";
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    out_ += "\"" + escape(k) + "\":";
    return *this;
  }
  JsonWriter& value(double v) { return token(num17(v)); }
  JsonWriter& value(long v) { return token(std::to_string(v)); }
  JsonWriter& value(int v) { return token(std::to_string(v)); }
  JsonWriter& value(std::uint64_t v) { return token(std::to_string(v)); }
  JsonWriter& value(bool v) { return token(v ? "true" : "false"); }
  JsonWriter& value(const std::string& s) { return token("\"" + escape(s) + "\""); }
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& values(std::span<const double> vs) {
    begin_array();
    for (double v : vs) value(v);
    return end_array();
  }
  JsonWriter& raw(const std::string& r) { return token(r); }

  std::string str() const {
    std::string s = out_;
    while (!s.empty() && s.back() == ',') s.pop_back();
    return s;
  }

 private:
  JsonWriter& token(const std::string& t) {
    out_ += t;
    if (t != "{" && t != "[") out_ += ",";
    return *this;
  }
  void strip_comma() {
    if (!out_.empty() && out_.back() == ',') out_.pop_back();
  }
  static std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
      switch (c) {
        case '"': o += "\\\""; break;
        case '\\': o += "\\\\"; break;
        case '\n': o += "\\n"; break;
        default: o += c;
      }
    }
    return o;
  }
  std::string out_;
};

inline void write_domain(JsonWriter& w, const Domain& d) {
  if (d.is_torus()) {
    w.begin_object().key("torus").value(d.circumference).end_object();
  } else {
    w.value("line");
  }
}

inline std::string to_json(const DiscreteConfig& c) {
  JsonWriter w;
  w.begin_object();
  w.key("format_version").value(kFormatVersion);
  w.key("domain");
  write_domain(w, c.domain);
  w.key("positions").values(c.positions);
  w.end_object();
  return w.str();
}

inline std::string to_json(const DensityProfile& u) {
  JsonWriter w;
  w.begin_object();
  w.key("format_version").value(kFormatVersion);
  w.key("domain");
  write_domain(w, u.domain);
  w.key("breakpoints").values(u.breakpoints);
  w.key("values").values(u.values);
  w.end_object();
  return w.str();
}

inline std::string to_json(const EstimateWithCI& e) {
  JsonWriter w;
  w.begin_object();
  w.key("mean").value(e.mean);
  w.key("se").value(e.std_error);
  w.key("n").value(e.replicas);
  w.key("seed").begin_object();
  w.key("root_seed").value(e.seed.root_seed);
  w.key("experiment").value(e.seed.experiment);
  w.end_object();
  w.end_object();
  return w.str();
}

inline std::string to_json(const Verdict& v, const std::string& identity, const std::string& params) {
  JsonWriter w;
  w.begin_object();
  w.key("format_version").value(kFormatVersion);
  w.key("identity").value(identity);
  w.key("params").raw(params.empty() ? "{}" : params);
  w.key("lhs").raw(to_json(v.lhs));
  w.key("rhs").raw(to_json(v.rhs));
  w.key("z").value(v.z);
  w.key("alpha").value(v.alpha);
  w.key("pass").value(v.pass);
  w.end_object();
  return w.str();
}

namespace detail {

inline Domain domain_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "line") return Domain::line();
  if (j.is_object() && j.contains("torus")) return Domain::torus(j["torus"].get<double>());
  throw ValidationError("unknown domain encoding");
}

}  // namespace detail

inline DiscreteConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return DiscreteConfig(detail::domain_from_json(j.at("domain")),
                        j.at("positions").get<std::vector<double>>());
}

inline DensityProfile profile_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return DensityProfile(detail::domain_from_json(j.at("domain")),
                        j.at("breakpoints").get<std::vector<double>>(),
                        j.at("values").get<std::vector<double>>());
}

// Trajectory CSV: one row per snapshot, positions semicolon-joined.
template <typename State>
void write_trajectory_csv(std::ostream& os, const std::vector<State>& states) {
  os << "# abmlab/trajectory/v" << kFormatVersion << "\n";
  os << "time,particle_count,positions\n";
  for (const auto& s : states) {
    os << num17(s.time) << "," << s.positions.size() << ",";
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
      if (i) os << ";";
      os << num17(s.positions[i]);
    }
    os << "\n";
  }
}

struct DensityCsvRow {
  std::vector<double> xs;
  double t = 0.0;
  double epsilon = 0.0;  // 0 marks the extrapolated row
  double estimate = 0.0;
  double std_error = 0.0;
  long replicas = 0;
  std::string route;
};

inline void write_density_csv(std::ostream& os, const std::vector<DensityCsvRow>& rows) {
  os << "# abmlab/density/v" << kFormatVersion << "\n";
  os << "x,t,epsilon,estimate,std_error,replicas,route\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.xs.size(); ++i) {
      if (i) os << ";";
      os << num17(r.xs[i]);
    }
    os << "," << num17(r.t) << "," << num17(r.epsilon) << "," << num17(r.estimate) << ","
       << num17(r.std_error) << "," << r.replicas << "," << r.route << "\n";
  }
}

}  // namespace abmlab
