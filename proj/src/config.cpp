#include "fstirap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fstirap {

using nlohmann::json;

namespace {

using C = PhysConstants;

const double kErgPerMicroKelvin = C::kB * 1e-6 * 1e7;

struct UnitEntry {
  const char* kind;
  const char* unit;
  double factor;  // internal = value * factor
};

const UnitEntry kUnits[] = {
    {"energy", "1/s", 1.0},
    {"energy", "uK", kMicroKelvin},
    {"energy", "nK", 1e-3 * kMicroKelvin},
    {"energy", "mK", 1e3 * kMicroKelvin},
    {"energy", "K", 1e6 * kMicroKelvin},
    {"energy", "mG", kMicroKelvinPerMilliGauss * kMicroKelvin},
    {"time", "s", 1.0},
    {"time", "ms", 1e-3},
    {"time", "us", 1e-6},
    {"time", "ns", 1e-9},
    {"temperature", "K", 1.0},
    {"temperature", "mK", 1e-3},
    {"temperature", "uK", 1e-6},
    {"temperature", "nK", 1e-9},
    {"dipole", "esu cm", 1.0},
    {"dipole", "D", C::debye},
    {"continuum_dipole", "esu cm/sqrt(erg)", 1.0},
    {"continuum_dipole", "D/sqrt(uK)", 0.0},  // filled in below
    {"intensity", "W/cm2", 1.0},
    {"density", "cm^-3", 1.0},
    {"density", "m^-3", 1e-6},
    {"mass", "kg", 1.0},
    {"mass", "amu", C::amu},
    {"volume", "cm3", 1.0},
    {"volume", "mm3", 1e-3},
    {"volume", "m3", 1e6},
};

const char* canonical_unit(const std::string& kind) {
  if (kind == "energy") return "1/s";
  if (kind == "time") return "s";
  if (kind == "temperature") return "K";
  if (kind == "dipole") return "esu cm";
  if (kind == "continuum_dipole") return "esu cm/sqrt(erg)";
  if (kind == "intensity") return "W/cm2";
  if (kind == "density") return "cm^-3";
  if (kind == "mass") return "kg";
  if (kind == "volume") return "cm3";
  return "";
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

json quantity(double value, const std::string& kind) {
  return json{{"value", value}, {"unit", canonical_unit(kind)}};
}

// Strict view of one JSON object: every key must be consumed.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    return v.get<double>();
  }

  long integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& key) {
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  double quantity(const std::string& key, const std::string& kind) {
    const json& v = at(key);
    const std::string p = path(key);
    if (!v.is_object()) throw ConfigError(p, "expected {\"value\": ..., \"unit\": ...}");
    Obj q(v, p);
    if (!q.has("value")) throw ConfigError(join(p, "value"), "missing");
    if (!q.has("unit")) throw ConfigError(join(p, "unit"), "missing");
    const double value = q.number("value");
    const std::string unit = q.string("unit");
    q.finish();
    return to_internal_unit(value, unit, kind, p);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::string sweep_kind(const std::string& name) {
  static const std::set<std::string> times{"T_S", "T_p", "tau_S", "tau_p", "t0"};
  static const std::set<std::string> plain{"q", "pump_amplitude", "gamma_over_delta"};
  if (times.count(name)) return "time";
  if (plain.count(name)) return "dimensionless";
  return "energy";
}

Regime parse_regime(const std::string& s, const std::string& path) {
  for (Regime r : {Regime::none, Regime::broad, Regime::narrow, Regime::full_oracle})
    if (regime_name(r) == s) return r;
  throw ConfigError(path, "unknown regime '" + s + "' (none, broad, narrow, full_oracle)");
}

void require(const Obj& o, const std::string& key, std::vector<std::string>& missing) {
  if (!o.has(key)) missing.push_back(o.path(key));
}

}  // namespace

double to_internal_unit(double value, const std::string& unit, const std::string& kind,
                        const std::string& path) {
  std::vector<std::string> accepted;
  for (const auto& e : kUnits) {
    if (kind != e.kind) continue;
    accepted.push_back(e.unit);
    if (unit == e.unit) {
      if (kind == "continuum_dipole" && unit == "D/sqrt(uK)")
        return value * C::debye / std::sqrt(kErgPerMicroKelvin);
      return value * e.factor;
    }
  }
  if (accepted.empty()) throw ConfigError(path, "no units for kind " + kind);
  std::string list;
  for (const auto& a : accepted) list += (list.empty() ? "" : ", ") + a;
  throw ConfigError(path, "unit '" + unit + "' is not a " + kind + " unit (expected one of: " + list + ")");
}

RunConfig parse_config(const json& doc) {
  Obj root(doc, "");
  std::vector<std::string> missing;
  require(root, "regime", missing);
  require(root, "wavepacket", missing);
  require(root, "pulses", missing);
  if (root.has("wavepacket") && doc.at("wavepacket").is_object())
    require(Obj(doc.at("wavepacket"), "wavepacket"), "delta_eps", missing);
  if (!root.has("pulses")) {
    for (const char* k : {"pulses.stokes", "pulses.pump"}) missing.push_back(k);
  } else if (doc.at("pulses").is_object()) {
    const json& p = doc.at("pulses");
    for (const char* which : {"stokes", "pump"}) {
      const std::string base = std::string("pulses.") + which;
      if (!p.contains(which)) {
        missing.push_back(base);
        continue;
      }
      if (!p.at(which).is_object()) continue;
      Obj po(p.at(which), base);
      require(po, "width", missing);
      require(po, "offset", missing);
      if (std::string(which) == "stokes") require(po, "peak", missing);
      else if (!po.has("amplitude") && !po.has("intensity")) missing.push_back(base + ".amplitude");
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError("", "missing required fields: " + list);
  }

  RunConfig out;
  ScenarioConfig& sc = out.scenario;
  if (root.has("name")) out.name = root.string("name");
  sc.regime = parse_regime(root.string("regime"), "regime");

  // Wavepacket first: the resonance may be placed relative to eps0.
  std::optional<double> collision_time;
  {
    Obj w(root.at("wavepacket"), "wavepacket");
    sc.wavepacket.delta_eps = w.quantity("delta_eps", "energy");
    if (!(sc.wavepacket.delta_eps > 0.0)) throw ConfigError("wavepacket.delta_eps", "must be positive");
    if (w.has("eps0")) sc.wavepacket.eps0 = w.quantity("eps0", "energy");
    if (w.has("t0")) {
      const json& t0 = w.at("t0");
      if (t0.is_string()) {
        if (t0.get<std::string>() != "midpoint")
          throw ConfigError("wavepacket.t0", "expected a time or \"midpoint\"");
      } else {
        collision_time = w.quantity("t0", "time");
      }
    }
    w.finish();
  }

  if (root.has("resonance")) {
    Obj r(root.at("resonance"), "resonance");
    FanoResonance<double> res;
    if (!r.has("q")) throw ConfigError("resonance.q", "missing");
    if (!r.has("Gamma")) throw ConfigError("resonance.Gamma", "missing");
    res.q = r.number("q");
    res.Gamma = r.quantity("Gamma", "energy");
    if (!(res.Gamma > 0.0)) throw ConfigError("resonance.Gamma", "must be positive");
    const bool has_abs = r.has("eps_F"), has_rel = r.has("feshbach_detuning");
    if (has_abs == has_rel)
      throw ConfigError("resonance", "give exactly one of eps_F and feshbach_detuning");
    if (has_abs) {
      res.eps_F = r.quantity("eps_F", "energy");
    } else {
      const json& fd = r.at("feshbach_detuning");
      if (fd.is_string()) {
        if (fd.get<std::string>() != "enhancement_max")
          throw ConfigError("resonance.feshbach_detuning", "expected an energy or \"enhancement_max\"");
        if (res.q == 0.0)
          throw ConfigError("resonance.feshbach_detuning", "enhancement_max needs q != 0");
        res.eps_F = sc.wavepacket.eps0 - res.Gamma / (2.0 * res.q);
      } else {
        res.eps_F = sc.wavepacket.eps0 + r.quantity("feshbach_detuning", "energy");
      }
    }
    r.finish();
    sc.resonance = res;
  }

  if (root.has("dipoles")) {
    Obj d(root.at("dipoles"), "dipoles");
    if (d.has("mu21")) out.dipoles.mu21 = d.quantity("mu21", "dipole");
    if (d.has("mu2b")) out.dipoles.mu2b = d.quantity("mu2b", "dipole");
    if (d.has("mu2eps")) out.dipoles.mu2eps = d.quantity("mu2eps", "continuum_dipole");
    d.finish();
  }

  {
    Obj p(root.at("pulses"), "pulses");
    if (p.has("t0")) sc.pulses.t0 = p.quantity("t0", "time");
    Obj s(p.at("stokes"), "pulses.stokes");
    sc.pulses.stokes.peak = s.quantity("peak", "energy");
    sc.pulses.stokes.width = s.quantity("width", "time");
    sc.pulses.stokes.center_offset = s.quantity("offset", "time");
    sc.pulses.stokes.sign = +1;
    s.finish();
    Obj q(p.at("pump"), "pulses.pump");
    sc.pulses.pump.width = q.quantity("width", "time");
    sc.pulses.pump.center_offset = q.quantity("offset", "time");
    sc.pulses.pump.sign = -1;
    if (q.has("amplitude") && q.has("intensity"))
      throw ConfigError("pulses.pump", "give either amplitude or intensity, not both");
    if (q.has("amplitude")) {
      sc.pulses.pump.peak = q.number("amplitude");
    } else {
      const double I = q.quantity("intensity", "intensity");
      const double d = sc.wavepacket.delta_eps;
      if (out.dipoles.mu2eps) {
        sc.pulses.pump.peak = std::sqrt(I / pump_intensity_continuum(1.0, d, *out.dipoles.mu2eps));
      } else if (sc.resonance && out.dipoles.mu2b) {
        sc.pulses.pump.peak = pump_amplitude_from_intensity(I, sc.resonance->q, d, sc.resonance->Gamma,
                                                            *out.dipoles.mu2b / C::debye);
      } else {
        throw ConfigError("pulses.pump.intensity",
                          "converting an intensity needs dipoles.mu2eps, or a resonance and dipoles.mu2b");
      }
    }
    q.finish();
    p.finish();
    for (const auto* g : {&sc.pulses.stokes, &sc.pulses.pump}) {
      const std::string base = g == &sc.pulses.stokes ? "pulses.stokes" : "pulses.pump";
      if (!(g->width > 0.0)) throw ConfigError(base + ".width", "must be positive");
      if (g->peak < 0.0) throw ConfigError(base, "peak must be non-negative");
    }
  }
  sc.wavepacket.t0 = collision_time.value_or(0.5 * (sc.pulses.stokes_center() + sc.pulses.pump_center()));

  if (root.has("delta")) sc.delta = root.quantity("delta", "energy");
  if (root.has("gamma")) sc.gamma = root.quantity("gamma", "energy");
  if (root.has("two_photon_offset")) sc.two_photon_offset = root.quantity("two_photon_offset", "energy");
  if (root.has("overlap_threshold")) {
    out.overlap_threshold = root.number("overlap_threshold");
    if (!(out.overlap_threshold > 0.0 && out.overlap_threshold < 1.0))
      throw ConfigError("overlap_threshold", "must lie in (0, 1)");
  }
  if (root.has("narrow_source")) {
    const std::string ns = root.string("narrow_source");
    if (ns == "bessel_struve") sc.narrow_source = NarrowSource::bessel_struve;
    else if (ns == "quadrature") sc.narrow_source = NarrowSource::quadrature;
    else throw ConfigError("narrow_source", "expected \"bessel_struve\" or \"quadrature\"");
  }

  if (root.has("integration")) {
    Obj in(root.at("integration"), "integration");
    auto& ic = sc.integration;
    if (in.has("rel_tol")) ic.rel_tol = in.number("rel_tol");
    if (in.has("abs_tol")) ic.abs_tol = in.number("abs_tol");
    if (in.has("samples")) ic.samples = static_cast<int>(in.integer("samples"));
    if (in.has("max_step")) ic.max_step = in.quantity("max_step", "time");
    if (in.has("t_start") != in.has("t_end"))
      throw ConfigError("integration", "t_start and t_end must be given together");
    if (in.has("t_start")) {
      ic.auto_window = false;
      ic.t_start = in.quantity("t_start", "time");
      ic.t_end = in.quantity("t_end", "time");
    }
    in.finish();
  }

  if (root.has("oracle")) {
    Obj o(root.at("oracle"), "oracle");
    if (o.has("n_states")) sc.oracle.n_states = static_cast<int>(o.integer("n_states"));
    if (o.has("eps_lo")) sc.oracle.eps_lo = o.quantity("eps_lo", "energy");
    if (o.has("eps_hi")) sc.oracle.eps_hi = o.quantity("eps_hi", "energy");
    if (o.has("check_resolution")) sc.oracle.check_resolution = o.boolean("check_resolution");
    o.finish();
  }

  if (root.has("ensemble")) {
    Obj e(root.at("ensemble"), "ensemble");
    EnsembleBlock eb;
    for (const char* k : {"temperature", "density", "reduced_mass", "trap_volume"})
      if (!e.has(k)) throw ConfigError(e.path(k), "missing");
    const json& T = e.at("temperature");
    if (T.is_string()) {
      if (T.get<std::string>() != "from_wavepacket")
        throw ConfigError("ensemble.temperature", "expected a temperature or \"from_wavepacket\"");
      // delta_eps = sqrt(3/2) k_B T
      eb.spec.temperature = sc.wavepacket.delta_eps * C::hbar / (std::sqrt(1.5) * C::kB);
    } else {
      eb.spec.temperature = e.quantity("temperature", "temperature");
    }
    eb.spec.density = e.quantity("density", "density");
    eb.spec.reduced_mass = e.quantity("reduced_mass", "mass");
    eb.spec.trap_volume = e.quantity("trap_volume", "volume");
    if (e.has("nodes")) eb.nodes = static_cast<int>(e.integer("nodes"));
    if (e.has("cycle_time")) eb.cycle_time = e.quantity("cycle_time", "time");
    if (e.has("residual")) eb.residual = e.number("residual");
    if (e.has("tau_tr")) eb.tau_tr = e.quantity("tau_tr", "time");
    if (e.has("p_avg")) eb.p_avg = e.number("p_avg");
    e.finish();
    try {
      eb.spec.validate();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError("ensemble", ex.what());
    }
    if (eb.nodes < 8) throw ConfigError("ensemble.nodes", "must be at least 8");
    if (eb.p_avg && !(*eb.p_avg >= 0.0 && *eb.p_avg <= 1.0))
      throw ConfigError("ensemble.p_avg", "must lie in [0, 1]");
    if (!(eb.residual > 0.0 && eb.residual < 1.0)) throw ConfigError("ensemble.residual", "must lie in (0, 1)");
    out.ensemble = eb;
  }

  if (root.has("optimize")) {
    Obj o(root.at("optimize"), "optimize");
    OptimizeBlock ob;
    if (!o.has("free_params")) throw ConfigError("optimize.free_params", "missing");
    const json& fp = o.at("free_params");
    if (!fp.is_array() || fp.empty()) throw ConfigError("optimize.free_params", "expected a non-empty list");
    for (std::size_t i = 0; i < fp.size(); ++i) {
      const std::string path = "optimize.free_params[" + std::to_string(i) + "]";
      Obj item(fp[i], path);
      if (!item.has("param")) throw ConfigError(join(path, "param"), "missing");
      const std::string name = item.string("param");
      const auto p = param_from_name(name);
      if (!p) throw ConfigError(join(path, "param"), "unknown parameter '" + name + "'");
      const std::string kind = sweep_kind(name);
      Bounds b;
      if (kind == "dimensionless") {
        b.lo = item.number("lo");
        b.hi = item.number("hi");
        if (item.has("unit") && !item.string("unit").empty())
          throw ConfigError(join(path, "unit"), "parameter is dimensionless");
      } else {
        if (!item.has("unit")) throw ConfigError(join(path, "unit"), "missing");
        const std::string unit = item.string("unit");
        b.lo = to_internal_unit(item.number("lo"), unit, kind, join(path, "lo"));
        b.hi = to_internal_unit(item.number("hi"), unit, kind, join(path, "hi"));
      }
      item.finish();
      if (!(b.lo < b.hi)) throw ConfigError(path, "need lo < hi");
      ob.free_params.push_back(*p);
      ob.bounds.push_back(b);
    }
    if (o.has("objective")) {
      const std::string obj = o.string("objective");
      if (obj == "final_population") ob.objective = Objective::final_population;
      else if (obj == "ensemble_averaged_population") ob.objective = Objective::ensemble_averaged_population;
      else throw ConfigError("optimize.objective", "expected final_population or ensemble_averaged_population");
    }
    if (o.has("budget")) ob.budget = o.integer("budget");
    if (o.has("seed")) ob.seed = static_cast<std::uint64_t>(o.integer("seed"));
    if (o.has("ensemble_nodes")) ob.ensemble_nodes = static_cast<int>(o.integer("ensemble_nodes"));
    o.finish();
    if (ob.objective == Objective::ensemble_averaged_population && !out.ensemble)
      throw ConfigError("optimize.objective", "ensemble averaging needs an ensemble block");
    out.optimize = ob;
  }

  if (root.has("sweep")) {
    Obj s(root.at("sweep"), "sweep");
    SweepBlock sb;
    if (!s.has("param")) throw ConfigError("sweep.param", "missing");
    sb.param = s.string("param");
    if (!is_sweep_name(sb.param)) throw ConfigError("sweep.param", "unknown parameter '" + sb.param + "'");
    if (!s.has("values")) throw ConfigError("sweep.values", "missing");
    const json& vals = s.at("values");
    if (!vals.is_array() || vals.empty()) throw ConfigError("sweep.values", "expected a non-empty list");
    const std::string kind = sweep_kind(sb.param);
    std::string unit;
    if (s.has("unit")) unit = s.string("unit");
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::string path = "sweep.values[" + std::to_string(i) + "]";
      if (!vals[i].is_number()) throw ConfigError(path, "expected a number");
      const double v = vals[i].get<double>();
      if (kind == "dimensionless") {
        if (!unit.empty()) throw ConfigError("sweep.unit", "parameter is dimensionless");
        sb.values.push_back(v);
      } else {
        if (unit.empty()) throw ConfigError("sweep.unit", "missing");
        sb.values.push_back(to_internal_unit(v, unit, kind, path));
      }
    }
    s.finish();
    if (!std::is_sorted(sb.values.begin(), sb.values.end()))
      throw ConfigError("sweep.values", "must be sorted");
    out.sweep = sb;
  }
  root.finish();

  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json serialize_config(const RunConfig& cfg) {
  const ScenarioConfig& sc = cfg.scenario;
  json doc;
  if (!cfg.name.empty()) doc["name"] = cfg.name;
  doc["regime"] = std::string(regime_name(sc.regime));
  doc["wavepacket"] = {{"eps0", quantity(sc.wavepacket.eps0, "energy")},
                       {"delta_eps", quantity(sc.wavepacket.delta_eps, "energy")},
                       {"t0", quantity(sc.wavepacket.t0, "time")}};
  if (sc.resonance) {
    doc["resonance"] = {{"q", sc.resonance->q},
                        {"Gamma", quantity(sc.resonance->Gamma, "energy")},
                        {"eps_F", quantity(sc.resonance->eps_F, "energy")}};
  }
  json dip = json::object();
  if (cfg.dipoles.mu21) dip["mu21"] = quantity(*cfg.dipoles.mu21, "dipole");
  if (cfg.dipoles.mu2b) dip["mu2b"] = quantity(*cfg.dipoles.mu2b, "dipole");
  if (cfg.dipoles.mu2eps) dip["mu2eps"] = quantity(*cfg.dipoles.mu2eps, "continuum_dipole");
  if (!dip.empty()) doc["dipoles"] = dip;
  doc["pulses"] = {
      {"t0", quantity(sc.pulses.t0, "time")},
      {"stokes",
       {{"peak", quantity(sc.pulses.stokes.peak, "energy")},
        {"width", quantity(sc.pulses.stokes.width, "time")},
        {"offset", quantity(sc.pulses.stokes.center_offset, "time")}}},
      {"pump",
       {{"amplitude", sc.pulses.pump.peak},
        {"width", quantity(sc.pulses.pump.width, "time")},
        {"offset", quantity(sc.pulses.pump.center_offset, "time")}}}};
  doc["delta"] = quantity(sc.delta, "energy");
  doc["gamma"] = quantity(sc.gamma, "energy");
  doc["two_photon_offset"] = quantity(sc.two_photon_offset, "energy");
  doc["overlap_threshold"] = cfg.overlap_threshold;
  doc["narrow_source"] = sc.narrow_source == NarrowSource::quadrature ? "quadrature" : "bessel_struve";
  json integ = {{"rel_tol", sc.integration.rel_tol},
                {"abs_tol", sc.integration.abs_tol},
                {"samples", sc.integration.samples}};
  if (sc.integration.max_step > 0.0) integ["max_step"] = quantity(sc.integration.max_step, "time");
  if (!sc.integration.auto_window) {
    integ["t_start"] = quantity(sc.integration.t_start, "time");
    integ["t_end"] = quantity(sc.integration.t_end, "time");
  }
  doc["integration"] = integ;
  json orc = {{"n_states", sc.oracle.n_states}, {"check_resolution", sc.oracle.check_resolution}};
  if (sc.oracle.eps_lo) orc["eps_lo"] = quantity(*sc.oracle.eps_lo, "energy");
  if (sc.oracle.eps_hi) orc["eps_hi"] = quantity(*sc.oracle.eps_hi, "energy");
  doc["oracle"] = orc;
  if (cfg.ensemble) {
    const auto& e = *cfg.ensemble;
    json ej = {{"temperature", quantity(e.spec.temperature, "temperature")},
               {"density", quantity(e.spec.density, "density")},
               {"reduced_mass", quantity(e.spec.reduced_mass, "mass")},
               {"trap_volume", quantity(e.spec.trap_volume, "volume")},
               {"nodes", e.nodes},
               {"cycle_time", quantity(e.cycle_time, "time")},
               {"residual", e.residual}};
    if (e.tau_tr) ej["tau_tr"] = quantity(*e.tau_tr, "time");
    if (e.p_avg) ej["p_avg"] = *e.p_avg;
    doc["ensemble"] = ej;
  }
  if (cfg.optimize) {
    const auto& o = *cfg.optimize;
    json fp = json::array();
    for (std::size_t i = 0; i < o.free_params.size(); ++i) {
      const std::string name(param_name(o.free_params[i]));
      json item = {{"param", name}, {"lo", o.bounds[i].lo}, {"hi", o.bounds[i].hi}};
      const std::string kind = sweep_kind(name);
      if (kind != "dimensionless") item["unit"] = canonical_unit(kind);
      fp.push_back(item);
    }
    doc["optimize"] = {{"free_params", fp},
                       {"objective", o.objective == Objective::final_population
                                         ? "final_population"
                                         : "ensemble_averaged_population"},
                       {"budget", o.budget},
                       {"seed", o.seed},
                       {"ensemble_nodes", o.ensemble_nodes}};
  }
  if (cfg.sweep) {
    json sj = {{"param", cfg.sweep->param}, {"values", cfg.sweep->values}};
    const std::string kind = sweep_kind(cfg.sweep->param);
    if (kind != "dimensionless") sj["unit"] = canonical_unit(kind);
    doc["sweep"] = sj;
  }
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("", "override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component in override");
    path = join(path, part);
    if (!node->is_object()) throw ConfigError(path, "override walks into a non-object");
    if (dot == std::string::npos) {
      json& target = (*node)[part];
      if (target.is_object() && target.contains("value") && value.is_number())
        target["value"] = value;
      else
        target = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

OptimizationProblem RunConfig::problem() const {
  if (!optimize) throw ConfigError("optimize", "missing");
  OptimizationProblem p;
  p.base = scenario;
  p.free_params = optimize->free_params;
  p.bounds = optimize->bounds;
  p.objective = optimize->objective;
  p.budget = optimize->budget;
  p.seed = optimize->seed;
  p.ensemble_nodes = optimize->ensemble_nodes;
  if (ensemble) p.ensemble = ensemble->spec;
  return p;
}

std::optional<double> RunConfig::stokes_intensity() const {
  if (!dipoles.mu21) return std::nullopt;
  return fstirap::stokes_intensity(scenario.pulses.stokes.peak, *dipoles.mu21 / C::debye);
}

std::optional<double> RunConfig::pump_intensity() const {
  const double P = scenario.pulses.pump.peak;
  const double d = scenario.wavepacket.delta_eps;
  if (dipoles.mu2eps) return pump_intensity_continuum(P, d, *dipoles.mu2eps);
  if (scenario.resonance && dipoles.mu2b)
    return pump_intensity_broad(P, scenario.resonance->q, d, scenario.resonance->Gamma,
                                *dipoles.mu2b / C::debye);
  return std::nullopt;
}

}  // namespace fstirap
