#include "tsqkd/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#ifndef TSQKD_VERSION
#define TSQKD_VERSION "0.0.0"
#endif
#ifndef TSQKD_REVISION
#define TSQKD_REVISION ""
#endif

namespace tsqkd::scenario {

using nlohmann::json;

namespace {

// Walks one object, recording type errors and unknown keys under their
// dotted paths.
class Section {
 public:
  Section(const json* node, std::string path, std::vector<std::string>& issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (node_ && !node_->is_object()) {
      issues_.push_back((path_.empty() ? std::string("config") : path_) + ": must be an object");
      node_ = nullptr;
    }
  }

  ~Section() {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.count(key)) issues_.push_back(field(key) + ": unknown key");
    }
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(find(key), field(key), issues_);
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }
  bool present() const { return node_ != nullptr; }

  void number(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      if (v->is_number()) out = v->get<double>();
      else issues_.push_back(field(key) + ": must be a number");
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = take(key)) {
      if (v->is_number_integer()) out = v->get<int>();
      else issues_.push_back(field(key) + ": must be an integer");
    }
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
      else issues_.push_back(field(key) + ": must be a nonnegative integer");
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = take(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else issues_.push_back(field(key) + ": must be true or false");
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = take(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else issues_.push_back(field(key) + ": must be a string");
    }
  }

  template <typename T, typename Parse>
  void choice(const std::string& key, T& out, Parse parse) {
    std::string name;
    if (!has(key)) {
      seen_.insert(key);
      return;
    }
    text(key, name);
    if (name.empty()) return;
    try {
      out = parse(name);
    } catch (const std::exception& e) {
      issues_.push_back(field(key) + ": " + e.what());
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) {
        issues_.push_back(field(key) + ": must be an array of numbers");
        return;
      }
      for (std::size_t i = 0; i < v->size(); ++i) {
        if ((*v)[i].is_number()) out.push_back((*v)[i].get<double>());
        else issues_.push_back(field(key) + "[" + std::to_string(i) + "]: must be a number");
      }
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json* find(const std::string& key) const {
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  const json* take(const std::string& key) {
    seen_.insert(key);
    return find(key);
  }

  const json* node_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

channel::ECConditioning conditioning_from_string(const std::string& name) {
  if (name == "pass_only") return channel::ECConditioning::kPassOnly;
  if (name == "with_discarded") return channel::ECConditioning::kWithDiscarded;
  throw ParameterError("unknown conditioning '" + name + "' (pass_only, with_discarded)");
}

const char* to_string(channel::ECConditioning c) {
  return c == channel::ECConditioning::kPassOnly ? "pass_only" : "with_discarded";
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: not valid JSON: ") + e.what()});
  }

  std::vector<std::string> issues;
  Config config;
  Scenario& s = config.scenario;
  {
    Section top(&root, "", issues);
    top.text("description", config.description);

    Section constellation = top.child("constellation");
    constellation.number("amplitude", s.amplitude);

    Section ch = top.child("channel");
    ch.number("length_km", s.channel.length_km);
    ch.number("attenuation_db_per_km", s.channel.attenuation_db_per_km);
    ch.number("excess_noise", s.channel.excess_noise);

    Section src = top.child("source");
    src.choice("mode", s.source.mode, noise_mode_from_string);
    src.number("noise", s.source.noise);
    src.number("coupling_transmittance", s.source.coupling_transmittance);
    {
      Section device = src.child("device");
      if (device.present()) {
        noise::DeviceParams d;
        device.number("modulation_variance", d.modulation_variance);
        device.number("rin_per_hz", d.rin_per_hz);
        device.number("linewidth_hz", d.linewidth_hz);
        device.number("extinction_ratio_db", d.extinction_ratio_db);
        device.number("dac_voltage", d.dac_voltage);
        device.number("dac_deviation", d.dac_deviation);
        s.source.device = d;
      }
      Section trust = src.child("trusted_components");
      if (trust.present() && !s.source.device) {
        issues.push_back("source.trusted_components: only meaningful with source.device");
      }
      trust.boolean("rin", s.source.device_trust.rin);
      trust.boolean("modulator", s.source.device_trust.modulator);
      trust.boolean("dac", s.source.device_trust.dac);
    }

    Section det = top.child("detector");
    det.choice("mode", s.detector.mode, noise_mode_from_string);
    det.number("efficiency", s.detector.efficiency);
    det.number("electronic_noise", s.detector.electronic_noise);

    Section post = top.child("postselection");
    post.number("radius", s.postselection_radius);

    Section rec = top.child("reconciliation");
    rec.number("efficiency", s.reconciliation_efficiency);

    Section num = top.child("numerics");
    num.integer("cutoff", s.numerics.cutoff);
    num.number("epsilon", s.numerics.epsilon);
    num.boolean("use_symmetry", s.numerics.use_symmetry);
    num.unsigned_integer("seed", s.numerics.seed);
    num.choice("ec_conditioning", s.numerics.conditioning, conditioning_from_string);
    num.boolean("scale_bound_by_pass", s.numerics.scale_bound_by_pass);
    num.boolean("stop_when_zero", s.numerics.stop_when_zero);
    {
      Section sdp = num.child("sdp");
      sdp.number("feasibility_tol", s.numerics.sdp_feasibility_tol);
      sdp.number("gap_tol", s.numerics.sdp_gap_tol);
      sdp.integer("max_iterations", s.numerics.sdp_max_iterations);
      Section fw = num.child("frank_wolfe");
      fw.integer("max_iterations", s.numerics.fw_max_iterations);
      fw.number("improvement_tol", s.numerics.fw_improvement_tol);
      fw.number("certified_gap_tol", s.numerics.fw_certified_gap_tol);
    }

    Section sweep = top.child("sweep");
    if (sweep.present()) {
      SweepSection out;
      std::string axis_name;
      sweep.text("axis", axis_name);
      if (!axis_name.empty()) {
        try {
          out.axis = axis_from_string(axis_name);
        } catch (const std::exception& e) {
          issues.push_back(std::string("sweep.axis: ") + e.what());
        }
      }
      sweep.numbers("values", out.values);
      Section range = sweep.child("range");
      if (range.present()) {
        if (!out.values.empty()) issues.push_back("sweep.range: give either values or range, not both");
        double start = 0.0, stop = -1.0, step = 0.0;
        for (const char* key : {"start", "stop", "step"}) {
          if (!range.has(key)) issues.push_back(range.field(key) + ": required");
        }
        range.number("start", start);
        range.number("stop", stop);
        range.number("step", step);
        try {
          if (range.has("start") && range.has("stop") && range.has("step")) {
            out.values = range_values(start, stop, step);
          }
        } catch (const std::exception& e) {
          issues.push_back(std::string("sweep.range: ") + e.what());
        }
      }
      config.sweep = out;
    }
  }

  if (issues.empty()) {
    auto semantic = s.issues();
    issues.insert(issues.end(), semantic.begin(), semantic.end());
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_json(const Scenario& s, int indent) {
  json j;
  j["constellation"] = {{"amplitude", s.amplitude}};
  j["channel"] = {{"length_km", s.channel.length_km},
                  {"attenuation_db_per_km", s.channel.attenuation_db_per_km},
                  {"excess_noise", s.channel.excess_noise}};
  json src = {{"mode", to_string(s.source.mode)},
              {"noise", s.source.noise},
              {"coupling_transmittance", s.source.coupling_transmittance}};
  if (s.source.device) {
    const auto& d = *s.source.device;
    src["device"] = {{"modulation_variance", d.modulation_variance},
                     {"rin_per_hz", d.rin_per_hz},
                     {"linewidth_hz", d.linewidth_hz},
                     {"extinction_ratio_db", d.extinction_ratio_db},
                     {"dac_voltage", d.dac_voltage},
                     {"dac_deviation", d.dac_deviation}};
    src["trusted_components"] = {{"rin", s.source.device_trust.rin},
                                 {"modulator", s.source.device_trust.modulator},
                                 {"dac", s.source.device_trust.dac}};
  }
  j["source"] = src;
  j["detector"] = {{"mode", to_string(s.detector.mode)},
                   {"efficiency", s.detector.efficiency},
                   {"electronic_noise", s.detector.electronic_noise}};
  j["postselection"] = {{"radius", s.postselection_radius}};
  j["reconciliation"] = {{"efficiency", s.reconciliation_efficiency}};
  const auto& n = s.numerics;
  j["numerics"] = {{"cutoff", n.cutoff},
                   {"epsilon", n.epsilon},
                   {"use_symmetry", n.use_symmetry},
                   {"seed", n.seed},
                   {"ec_conditioning", to_string(n.conditioning)},
                   {"scale_bound_by_pass", n.scale_bound_by_pass},
                   {"stop_when_zero", n.stop_when_zero},
                   {"sdp",
                    {{"feasibility_tol", n.sdp_feasibility_tol},
                     {"gap_tol", n.sdp_gap_tol},
                     {"max_iterations", n.sdp_max_iterations}}},
                   {"frank_wolfe",
                    {{"max_iterations", n.fw_max_iterations},
                     {"improvement_tol", n.fw_improvement_tol},
                     {"certified_gap_tol", n.fw_certified_gap_tol}}}};
  return j.dump(indent);
}

std::string version_string() {
  const std::string revision = TSQKD_REVISION;
  return revision.empty() ? std::string(TSQKD_VERSION) : std::string(TSQKD_VERSION) + "+g" + revision;
}

}  // namespace tsqkd::scenario
