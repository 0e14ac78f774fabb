#include "braggsim/config.hpp"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace braggsim {

using nlohmann::json;
using nlohmann::ordered_json;

GratingSpec BraggConfig::to_spec() const {
  GratingSpec g;
  g.period = period_nm * 1e-9;
  g.duty_cycle = duty_cycle;
  g.n_periods = n_periods;
  g.n_lo = n_lo;
  g.delta_n = delta_n;
  g.lead_in_length = lead_in_um * 1e-6;
  g.lead_out_length = lead_out_um * 1e-6;
  return g;
}

RingSpec RingConfig::to_spec() const {
  RingSpec r;
  r.radius = radius_um * 1e-6;
  r.lambda_p = pump_wavelength_nm * 1e-9;
  r.lambda_s = signal_wavelength_nm * 1e-9;
  r.lambda_i = idler_wavelength_nm * 1e-9;
  r.q_p = q_pump;
  r.q_s = q_signal;
  r.q_i = q_idler;
  r.group_index = group_index;
  return r;
}

NonlinearParams ParamsConfig::to_params() const {
  NonlinearParams p;
  p.gamma = gamma_per_w_m;
  p.pump_power = pump_power_mw * 1e-3;
  p.signal_power = signal_power_mw * 1e-3;
  p.coupling_loss_db = coupling_loss_db;
  p.gvd_beta2 = gvd_beta2_ps2_per_km * 1e-27;
  return p;
}

CollectionWindow WindowConfig::to_window() const {
  CollectionWindow w;
  w.center_wavelength = center_wavelength_nm * 1e-9;
  w.width = constants::two_pi * width_ghz * 1e9;
  return w;
}

const WindowConfig* ScenarioConfig::window(WindowRole role) const {
  for (const auto& w : windows)
    if (w.role == role) return &w;
  return nullptr;
}

namespace {

// JSON pointer -> 1-based line of the value, from a light structural scan of
// already validated JSON text.
class LineMap {
public:
  explicit LineMap(const std::string& text) { scan(text); }

  int line(std::string pointer) const {
    for (;;) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 0;
      pointer.erase(pointer.rfind('/'));
    }
  }

private:
  struct Frame {
    bool object;
    std::string pointer;
    std::size_t index = 0;
    std::string key;
  };
  std::map<std::string, int> lines_;

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void scan(const std::string& t) {
    std::vector<Frame> stack;
    bool expect_key = false;
    int line = 1;
    auto here = [&]() -> std::string {
      if (stack.empty()) return "";
      const Frame& f = stack.back();
      return f.pointer + "/" + (f.object ? escape(f.key) : std::to_string(f.index));
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
      const char c = t[i];
      if (c == '\n') {
        ++line;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == ':') continue;
      if (c == '"') {
        std::string s;
        for (++i; i < t.size() && t[i] != '"'; ++i) {
          if (t[i] == '\\') ++i;
          s += t[i];
        }
        if (expect_key) {
          stack.back().key = s;
          expect_key = false;
        } else {
          lines_.emplace(here(), line);
        }
      } else if (c == '{' || c == '[') {
        const std::string p = here();
        lines_.emplace(p, line);
        stack.push_back({c == '{', p, 0, {}});
        expect_key = c == '{';
      } else if (c == '}' || c == ']') {
        stack.pop_back();
        expect_key = false;
      } else if (c == ',') {
        if (stack.back().object) expect_key = true;
        else ++stack.back().index;
      } else {
        lines_.emplace(here(), line);
        while (i + 1 < t.size() && std::string(",}] \t\r\n").find(t[i + 1]) == std::string::npos) ++i;
      }
    }
  }
};

class Reader {
public:
  explicit Reader(const std::string& text) : lines_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    const int line = lines_.line(pointer);
    std::ostringstream msg;
    msg << (pointer.empty() ? "/" : pointer);
    if (line > 0) msg << " (line " << line << ")";
    msg << ": " << what;
    throw ConfigError(pointer.empty() ? "/" : pointer, line, msg.str());
  }

  void object(const json& j, const std::string& p, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(p, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) fail(p + "/" + k, "unknown field '" + k + "'");
  }

  void number(const json& j, const std::string& p, const char* key, double& out) const {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) fail(p + "/" + key, "expected a number");
    out = v.get<double>();
  }

  void number(const json& j, const std::string& p, const char* key, std::optional<double>& out) const {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
      out.reset();
      return;
    }
    double v = 0;
    number(j, p, key, v);
    out = v;
  }

  void positive(const json& j, const std::string& p, const char* key, double& out) const {
    number(j, p, key, out);
    if (!(out > 0)) fail(p + "/" + key, "must be positive");
  }

  template <typename Int>
  void integer(const json& j, const std::string& p, const char* key, Int& out, long min) const {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(p + "/" + key, "expected an integer");
    const long long x = v.get<long long>();
    if (x < min) fail(p + "/" + key, "must be at least " + std::to_string(min));
    out = static_cast<Int>(x);
  }

  std::string text(const json& j, const std::string& p, const char* key, const std::string& def,
                   std::initializer_list<const char*> choices) const {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    std::string list;
    for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
    if (!v.is_string()) fail(p + "/" + key, "expected one of " + list);
    const std::string s = v.get<std::string>();
    for (const char* c : choices)
      if (s == c) return s;
    fail(p + "/" + key, "'" + s + "' is not one of " + list);
  }

  // Runs a domain validate() and reports its message against `p`.
  template <typename F>
  void check(const std::string& p, F&& validate) const {
    try {
      validate();
    } catch (const InvalidArgument& e) {
      fail(p, e.what());
    }
  }

private:
  LineMap lines_;
};

BraggConfig read_bragg(const Reader& r, const json& j, const std::string& p) {
  r.object(j, p, {"type", "period_nm", "duty_cycle", "n_periods", "n_lo", "delta_n", "lead_in_um", "lead_out_um"});
  BraggConfig b;
  r.positive(j, p, "period_nm", b.period_nm);
  r.number(j, p, "duty_cycle", b.duty_cycle);
  r.integer(j, p, "n_periods", b.n_periods, 1);
  r.number(j, p, "n_lo", b.n_lo);
  r.number(j, p, "delta_n", b.delta_n);
  r.number(j, p, "lead_in_um", b.lead_in_um);
  r.number(j, p, "lead_out_um", b.lead_out_um);
  if (b.lead_in_um < 0) r.fail(p + "/lead_in_um", "must not be negative");
  if (b.lead_out_um < 0) r.fail(p + "/lead_out_um", "must not be negative");
  r.check(p, [&] { b.to_spec().validate(); });
  return b;
}

RingConfig read_ring(const Reader& r, const json& j, const std::string& p) {
  r.object(j, p, {"type", "radius_um", "pump_wavelength_nm", "signal_wavelength_nm", "idler_wavelength_nm",
                  "q_pump", "q_signal", "q_idler", "group_index", "pulse_duration_ps"});
  RingConfig c;
  r.positive(j, p, "radius_um", c.radius_um);
  r.positive(j, p, "pump_wavelength_nm", c.pump_wavelength_nm);
  r.positive(j, p, "signal_wavelength_nm", c.signal_wavelength_nm);
  r.positive(j, p, "idler_wavelength_nm", c.idler_wavelength_nm);
  r.positive(j, p, "q_pump", c.q_pump);
  r.positive(j, p, "q_signal", c.q_signal);
  r.positive(j, p, "q_idler", c.q_idler);
  r.positive(j, p, "group_index", c.group_index);
  r.number(j, p, "pulse_duration_ps", c.pulse_duration_ps);
  if (c.pulse_duration_ps && !(*c.pulse_duration_ps > 0)) r.fail(p + "/pulse_duration_ps", "must be positive");
  r.check(p, [&] { c.to_spec().validate(); });
  return c;
}

ordered_json write_bragg(const BraggConfig& b) {
  ordered_json j;
  j["type"] = "bragg";
  j["period_nm"] = b.period_nm;
  j["duty_cycle"] = b.duty_cycle;
  j["n_periods"] = b.n_periods;
  j["n_lo"] = b.n_lo;
  j["delta_n"] = b.delta_n;
  j["lead_in_um"] = b.lead_in_um;
  j["lead_out_um"] = b.lead_out_um;
  return j;
}

ordered_json write_ring(const RingConfig& c) {
  ordered_json j;
  j["type"] = "ring";
  j["radius_um"] = c.radius_um;
  j["pump_wavelength_nm"] = c.pump_wavelength_nm;
  j["signal_wavelength_nm"] = c.signal_wavelength_nm;
  j["idler_wavelength_nm"] = c.idler_wavelength_nm;
  j["q_pump"] = c.q_pump;
  j["q_signal"] = c.q_signal;
  j["q_idler"] = c.q_idler;
  j["group_index"] = c.group_index;
  if (c.pulse_duration_ps) j["pulse_duration_ps"] = *c.pulse_duration_ps;
  return j;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("/", line, "line " + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  const Reader r(text);
  r.object(root, "", {"$schema", "structure", "comparator", "params", "pulse", "windows", "sweep", "output"});
  ScenarioConfig c;

  if (!root.contains("structure")) r.fail("", "missing required field 'structure'");
  {
    const json& s = root.at("structure");
    if (!s.is_object()) r.fail("/structure", "expected an object");
    const std::string type = r.text(s, "/structure", "type", "", {"bragg", "ring"});
    if (type.empty()) r.fail("/structure", "missing required field 'type' (bragg or ring)");
    if (type == "bragg") c.structure = read_bragg(r, s, "/structure");
    else c.structure = read_ring(r, s, "/structure");
  }
  if (root.contains("comparator") && !root.at("comparator").is_null()) {
    const json& s = root.at("comparator");
    if (!s.is_object()) r.fail("/comparator", "expected an object");
    if (s.contains("type") && r.text(s, "/comparator", "type", "ring", {"ring"}) != "ring")
      r.fail("/comparator/type", "comparator must be a ring");
    c.comparator = read_ring(r, s, "/comparator");
  }
  if (root.contains("params")) {
    const json& j = root.at("params");
    const std::string p = "/params";
    r.object(j, p, {"gamma_per_w_m", "pump_power_mw", "signal_power_mw", "coupling_loss_db", "gvd_beta2_ps2_per_km"});
    r.number(j, p, "gamma_per_w_m", c.params.gamma_per_w_m);
    r.number(j, p, "pump_power_mw", c.params.pump_power_mw);
    r.number(j, p, "signal_power_mw", c.params.signal_power_mw);
    r.number(j, p, "coupling_loss_db", c.params.coupling_loss_db);
    r.number(j, p, "gvd_beta2_ps2_per_km", c.params.gvd_beta2_ps2_per_km);
    r.check(p, [&] { c.params.to_params().validate(); });
  }
  if (root.contains("pulse")) {
    const json& j = root.at("pulse");
    const std::string p = "/pulse";
    r.object(j, p, {"shape", "duration_ps", "peak_power_mw", "center_wavelength_nm"});
    c.pulse.shape = r.text(j, p, "shape", "top_hat", {"top_hat", "gaussian"}) == "gaussian" ? PulseShape::Gaussian
                                                                                        : PulseShape::TopHat;
    r.positive(j, p, "duration_ps", c.pulse.duration_ps);
    r.number(j, p, "peak_power_mw", c.pulse.peak_power_mw);
    if (c.pulse.peak_power_mw < 0) r.fail(p + "/peak_power_mw", "must not be negative");
    r.number(j, p, "center_wavelength_nm", c.pulse.center_wavelength_nm);
    if (c.pulse.center_wavelength_nm && !(*c.pulse.center_wavelength_nm > 0))
      r.fail(p + "/center_wavelength_nm", "must be positive");
  }
  if (root.contains("windows")) {
    const json& j = root.at("windows");
    if (!j.is_array()) r.fail("/windows", "expected an array");
    c.windows.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = "/windows/" + std::to_string(i);
      const json& w = j.at(i);
      r.object(w, p, {"role", "center_wavelength_nm", "width_ghz"});
      WindowConfig wc;
      if (!w.contains("role")) r.fail(p, "missing required field 'role'");
      wc.role = r.text(w, p, "role", "", {"signal", "idler"}) == "signal" ? WindowRole::Signal : WindowRole::Idler;
      if (c.window(wc.role)) r.fail(p + "/role", "duplicate window role");
      r.positive(w, p, "center_wavelength_nm", wc.center_wavelength_nm);
      r.positive(w, p, "width_ghz", wc.width_ghz);
      c.windows.push_back(wc);
    }
    if (!c.window(WindowRole::Idler)) r.fail("/windows", "an idler window is required");
  }
  if (root.contains("sweep")) {
    const json& j = root.at("sweep");
    const std::string p = "/sweep";
    r.object(j, p, {"design_rejection_db", "spectrum", "stim", "contrast", "jsd"});
    r.number(j, p, "design_rejection_db", c.sweep.design_rejection_db);
    if (j.contains("spectrum")) {
      const json& s = j.at("spectrum");
      const std::string q = p + "/spectrum";
      r.object(s, q, {"center_nm", "span_nm", "step_pm"});
      r.number(s, q, "center_nm", c.sweep.spectrum.center_nm);
      r.positive(s, q, "span_nm", c.sweep.spectrum.span_nm);
      r.positive(s, q, "step_pm", c.sweep.spectrum.step_pm);
    }
    if (j.contains("stim")) {
      const json& s = j.at("stim");
      const std::string q = p + "/stim";
      r.object(s, q, {"start_nm", "stop_nm", "points", "signal_wavelength_nm"});
      r.positive(s, q, "start_nm", c.sweep.stim.start_nm);
      r.positive(s, q, "stop_nm", c.sweep.stim.stop_nm);
      r.integer(s, q, "points", c.sweep.stim.points, 2);
      r.positive(s, q, "signal_wavelength_nm", c.sweep.stim.signal_wavelength_nm);
      if (c.sweep.stim.stop_nm <= c.sweep.stim.start_nm) r.fail(q + "/stop_nm", "must exceed start_nm");
    }
    if (j.contains("contrast")) {
      const json& s = j.at("contrast");
      const std::string q = p + "/contrast";
      r.object(s, q, {"delta_n", "target_rejection_db", "compare_rejection_db", "grid_points"});
      if (s.contains("delta_n")) {
        const json& d = s.at("delta_n");
        if (!d.is_array() || d.empty()) r.fail(q + "/delta_n", "expected a non-empty array of numbers");
        c.sweep.contrast.delta_n.clear();
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (!d.at(i).is_number()) r.fail(q + "/delta_n/" + std::to_string(i), "expected a number");
          const double v = d.at(i).get<double>();
          if (v < 5e-4 || v > 1e-2) r.fail(q + "/delta_n/" + std::to_string(i), "contrast must lie in [5e-4, 1e-2]");
          c.sweep.contrast.delta_n.push_back(v);
        }
      }
      r.number(s, q, "target_rejection_db", c.sweep.contrast.target_rejection_db);
      r.number(s, q, "compare_rejection_db", c.sweep.contrast.compare_rejection_db);
      r.integer(s, q, "grid_points", c.sweep.contrast.grid_points, 2);
    }
    if (j.contains("jsd")) {
      const json& s = j.at("jsd");
      const std::string q = p + "/jsd";
      r.object(s, q, {"points", "span_factor", "ring_points", "ring_linewidths"});
      r.integer(s, q, "points", c.sweep.jsd.points, 2);
      r.number(s, q, "span_factor", c.sweep.jsd.span_factor);
      if (c.sweep.jsd.span_factor < 1.0) r.fail(q + "/span_factor", "must be at least 1");
      r.integer(s, q, "ring_points", c.sweep.jsd.ring_points, 2);
      r.positive(s, q, "ring_linewidths", c.sweep.jsd.ring_linewidths);
    }
  }
  if (root.contains("output")) {
    const json& j = root.at("output");
    r.object(j, "/output", {"dir", "format"});
    if (j.contains("dir")) {
      if (!j.at("dir").is_string() || j.at("dir").get<std::string>().empty())
        r.fail("/output/dir", "expected a non-empty string");
      c.output.dir = j.at("dir").get<std::string>();
    }
    c.output.format = r.text(j, "/output", "format", "csv", {"csv", "json"}) == "json" ? OutputFormat::Json
                                                                                   : OutputFormat::Csv;
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  ordered_json j;
  if (c.is_bragg()) j["structure"] = write_bragg(std::get<BraggConfig>(c.structure));
  else j["structure"] = write_ring(std::get<RingConfig>(c.structure));
  if (c.comparator) j["comparator"] = write_ring(*c.comparator);

  ordered_json& p = j["params"];
  p["gamma_per_w_m"] = c.params.gamma_per_w_m;
  p["pump_power_mw"] = c.params.pump_power_mw;
  p["signal_power_mw"] = c.params.signal_power_mw;
  if (c.params.coupling_loss_db) p["coupling_loss_db"] = *c.params.coupling_loss_db;
  p["gvd_beta2_ps2_per_km"] = c.params.gvd_beta2_ps2_per_km;

  ordered_json& u = j["pulse"];
  u["shape"] = c.pulse.shape == PulseShape::Gaussian ? "gaussian" : "top_hat";
  u["duration_ps"] = c.pulse.duration_ps;
  u["peak_power_mw"] = c.pulse.peak_power_mw;
  if (c.pulse.center_wavelength_nm) u["center_wavelength_nm"] = *c.pulse.center_wavelength_nm;

  j["windows"] = ordered_json::array();
  for (const auto& w : c.windows) {
    ordered_json o;
    o["role"] = w.role == WindowRole::Signal ? "signal" : "idler";
    o["center_wavelength_nm"] = w.center_wavelength_nm;
    o["width_ghz"] = w.width_ghz;
    j["windows"].push_back(o);
  }

  ordered_json& s = j["sweep"];
  s["design_rejection_db"] = c.sweep.design_rejection_db;
  if (c.sweep.spectrum.center_nm) s["spectrum"]["center_nm"] = *c.sweep.spectrum.center_nm;
  s["spectrum"]["span_nm"] = c.sweep.spectrum.span_nm;
  s["spectrum"]["step_pm"] = c.sweep.spectrum.step_pm;
  s["stim"]["start_nm"] = c.sweep.stim.start_nm;
  s["stim"]["stop_nm"] = c.sweep.stim.stop_nm;
  s["stim"]["points"] = c.sweep.stim.points;
  s["stim"]["signal_wavelength_nm"] = c.sweep.stim.signal_wavelength_nm;
  s["contrast"]["delta_n"] = c.sweep.contrast.delta_n;
  s["contrast"]["target_rejection_db"] = c.sweep.contrast.target_rejection_db;
  if (c.sweep.contrast.compare_rejection_db)
    s["contrast"]["compare_rejection_db"] = *c.sweep.contrast.compare_rejection_db;
  else
    s["contrast"]["compare_rejection_db"] = nullptr;
  s["contrast"]["grid_points"] = c.sweep.contrast.grid_points;
  s["jsd"]["points"] = c.sweep.jsd.points;
  s["jsd"]["span_factor"] = c.sweep.jsd.span_factor;
  s["jsd"]["ring_points"] = c.sweep.jsd.ring_points;
  s["jsd"]["ring_linewidths"] = c.sweep.jsd.ring_linewidths;

  j["output"]["dir"] = c.output.dir;
  j["output"]["format"] = c.output.format == OutputFormat::Json ? "json" : "csv";
  return j.dump(2) + "\n";
}

} // namespace braggsim
