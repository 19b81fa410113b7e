#include "uwb/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "uwb/error.hpp"
#include "uwb/receiver.hpp"

namespace uwb {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scheme", "ppm.delta_s", "ook.a1", "bpam.a1", "bpam.a0", "biphase.a", "psm.order0", "psm.order1",
      "pulse.order", "pulse.tau_s", "pulse.amplitude",
      "link.chip_s", "link.chips_per_frame", "link.ppm_shift_s", "link.tx_gain", "link.sample_rate_hz",
      "th.seed", "th.period", "th.chips",
      "channel", "channel.delay_s", "channel.attenuation", "channel.distance_m", "channel.path_loss_exponent",
      "channel.d0_m",
      "sv.preset", "sv.cluster_rate_per_s", "sv.ray_rate_per_s", "sv.cluster_decay_s", "sv.ray_decay_s",
      "sv.max_delay_spread_s", "sv.seed", "sv.awgn",
      "sweep.ebn0_db", "sweep.bits_per_point", "sweep.block_bits", "seed",
      "sync.search_window_s", "sync.forced_error_s",
      "scenario", "two_user.th_seed", "two_user.th_chips", "two_user.delay_s", "two_user.gain",
      "reconfigure.switch_frame", "reconfigure.chip_s", "reconfigure.chips_per_frame", "reconfigure.ppm_shift_s",
      "reconfigure.tau_s", "reconfigure.tx_gain", "reconfigure.th_seed", "reconfigure.th_chips",
      "reconfigure.interferer_th_seed", "reconfigure.interferer_th_chips", "reconfigure.interferer_gain",
      "psd.segment_len", "psd.frames",
  };
  return keys;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Entries {
 public:
  explicit Entries(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& k) const { return kv_.count(k) > 0; }
  const std::string& str(const std::string& k) const { return kv_.at(k); }

  double real(const std::string& k, double fallback) const {
    if (!has(k)) return fallback;
    return to_real(k, str(k));
  }

  template <class Int>
  Int integer(const std::string& k, Int fallback) const {
    if (!has(k)) return fallback;
    return to_int<Int>(k, str(k));
  }

  bool boolean(const std::string& k, bool fallback) const {
    if (!has(k)) return fallback;
    const std::string& v = str(k);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad(k + ": expected true or false, got '" + v + "'");
  }

  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& item : items(k)) out.push_back(to_real(k, item));
    return out;
  }

  std::vector<int> ints(const std::string& k) const {
    std::vector<int> out;
    for (const auto& item : items(k)) out.push_back(to_int<int>(k, item));
    return out;
  }

 private:
  std::vector<std::string> items(const std::string& k) const {
    std::vector<std::string> out;
    std::stringstream ss(str(k));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (out.empty()) bad(k + ": empty list");
    return out;
  }

  static double to_real(const std::string& k, const std::string& v) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) bad(k + ": not a number: '" + v + "'");
    return x;
  }

  template <class Int>
  static Int to_int(const std::string& k, const std::string& v) {
    Int x{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) bad(k + ": not an integer: '" + v + "'");
    return x;
  }

  std::map<std::string, std::string> kv_;
};

ThCode code_from(const Entries& e, const std::string& seed_key, const std::string& chips_key, int nc,
                 int period, std::uint64_t default_seed) {
  if (e.has(chips_key)) {
    if (e.has(seed_key)) bad(chips_key + " and " + seed_key + " are mutually exclusive");
    try {
      return make_th_code(e.ints(chips_key), nc);
    } catch (const Error& err) {
      bad(chips_key + ": " + err.what());
    }
  }
  return generate_th_code(e.integer<std::uint64_t>(seed_key, default_seed), period, nc);
}

ModulationScheme scheme_from(const Entries& e, const FrameTiming& timing) {
  const std::string name = e.has("scheme") ? e.str("scheme") : "ppm";
  if (name == "ppm") return scheme::Ppm{e.real("ppm.delta_s", timing.ppm_shift)};
  if (name == "ook") return scheme::Ook{e.real("ook.a1", 1.0)};
  if (name == "bpam") {
    scheme::Bpam b;
    b.a1 = e.real("bpam.a1", b.a1);
    b.a0 = e.real("bpam.a0", b.a0);
    return b;
  }
  if (name == "biphase") return scheme::BiPhase{e.real("biphase.a", 1.0)};
  if (name == "psm") {
    scheme::Psm p;
    p.shape0.order = e.integer("psm.order0", p.shape0.order);
    p.shape1.order = e.integer("psm.order1", p.shape1.order);
    return p;
  }
  bad("scheme: unknown value '" + name + "' (ppm, ook, bpam, biphase, psm)");
}

std::string scheme_key(const ModulationScheme& s) {
  switch (scheme_kind(s)) {
    case SchemeKind::Ppm: return "ppm";
    case SchemeKind::Ook: return "ook";
    case SchemeKind::Bpam: return "bpam";
    case SchemeKind::BiPhase: return "biphase";
    case SchemeKind::Psm: return "psm";
  }
  return "ppm";
}

void put(std::ostream& os, const std::string& key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << key << " = " << buf << '\n';
}

template <class T>
void put_int(std::ostream& os, const std::string& key, T v) {
  os << key << " = " << v << '\n';
}

void put_list(std::ostream& os, const std::string& key, const std::vector<int>& v) {
  os << key << " = ";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '\n';
}

// Seeded codes are re-derived with the file's th.period on parse.
void put_code(std::ostream& os, const std::string& prefix, const std::string& seed_key, const ThCode& code,
              int period) {
  if (!code.chips.empty() && generate_th_code(code.seed, period, code.chips_per_frame) == code) {
    put_int(os, prefix + seed_key, code.seed);
  } else {
    put_list(os, prefix + (seed_key == "seed" ? "chips" : "th_chips"), code.chips);
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) bad("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) bad("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (!kv.emplace(key, value).second) bad("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  const Entries e(std::move(kv));

  ExperimentConfig cfg;
  LinkConfig& l = cfg.link;
  l.timing.chip_duration = e.real("link.chip_s", l.timing.chip_duration);
  l.timing.chips_per_frame = e.integer("link.chips_per_frame", l.timing.chips_per_frame);
  l.timing.ppm_shift = e.real("link.ppm_shift_s", l.timing.ppm_shift);
  l.tx_gain = e.real("link.tx_gain", l.tx_gain);
  l.sample_rate = e.real("link.sample_rate_hz", l.sample_rate);
  l.pulse.order = e.integer("pulse.order", l.pulse.order);
  l.pulse.tau = e.real("pulse.tau_s", l.pulse.tau);
  l.pulse.amplitude = e.real("pulse.amplitude", l.pulse.amplitude);
  l.scheme = scheme_from(e, l.timing);
  if (auto* psm = std::get_if<scheme::Psm>(&l.scheme)) {
    psm->shape0.tau = psm->shape1.tau = l.pulse.tau;
  }
  const int nc = l.timing.chips_per_frame;
  if (nc < 1) bad("link.chips_per_frame must be >= 1");
  const int period = e.integer("th.period", 1024);
  if (period < 1) bad("th.period must be >= 1");
  if (e.has("th.chips") && e.has("th.period")) bad("th.chips and th.period are mutually exclusive");
  l.code = code_from(e, "th.seed", "th.chips", nc, period, 1);

  const std::string channel = e.has("channel") ? e.str("channel") : "awgn";
  PerfectChannel prop;
  prop.delay = e.real("channel.delay_s", 0.0);
  prop.attenuation = e.real("channel.attenuation", 1.0);
  if (e.has("channel.distance_m")) {
    if (e.has("channel.delay_s") || e.has("channel.attenuation")) {
      bad("channel.distance_m excludes channel.delay_s and channel.attenuation");
    }
    const double d = e.real("channel.distance_m", 1.0);
    try {
      prop.attenuation = path_loss(d, e.real("channel.path_loss_exponent", 2.0), e.real("channel.d0_m", 1.0));
    } catch (const Error& err) {
      bad(std::string("channel.distance_m: ") + err.what());
    }
    prop.delay = d / kSpeedOfLight;
  }
  if (channel == "perfect") {
    cfg.channel = prop;
  } else if (channel == "awgn") {
    cfg.channel = AwgnChannel{};
    cfg.propagation = prop;
  } else if (channel == "sv") {
    MultipathSV m;
    if (e.has("sv.preset")) {
      if (e.str("sv.preset") != "residential_los") bad("sv.preset: unknown value '" + e.str("sv.preset") + "'");
      m = residential_los_preset();
    }
    m.cluster_rate = e.real("sv.cluster_rate_per_s", m.cluster_rate);
    m.ray_rate = e.real("sv.ray_rate_per_s", m.ray_rate);
    m.cluster_decay = e.real("sv.cluster_decay_s", m.cluster_decay);
    m.ray_decay = e.real("sv.ray_decay_s", m.ray_decay);
    m.max_delay_spread = e.real("sv.max_delay_spread_s", m.max_delay_spread);
    m.rng_seed = e.integer<std::uint64_t>("sv.seed", 0);
    cfg.channel = m;
    cfg.propagation = prop;
    cfg.multipath_awgn = e.boolean("sv.awgn", true);
  } else {
    bad("channel: unknown value '" + channel + "' (perfect, awgn, sv)");
  }
  if (channel != "sv") {
    for (const auto& k : known_keys()) {
      if (k.rfind("sv.", 0) == 0 && e.has(k)) bad(k + " requires channel = sv");
    }
  }

  if (e.has("sweep.ebn0_db")) cfg.ebn0_grid = e.reals("sweep.ebn0_db");
  cfg.bits_per_point = e.integer("sweep.bits_per_point", cfg.bits_per_point);
  cfg.block_bits = e.integer("sweep.block_bits", cfg.block_bits);
  cfg.master_seed = e.integer("seed", cfg.master_seed);
  cfg.sync_search_window = e.real("sync.search_window_s", cfg.sync_search_window);
  cfg.forced_sync_error = e.real("sync.forced_error_s", cfg.forced_sync_error);
  cfg.psd.segment_len = e.integer("psd.segment_len", cfg.psd.segment_len);
  cfg.psd.frames = e.integer("psd.frames", cfg.psd.frames);

  const std::string sc = e.has("scenario") ? e.str("scenario") : "single";
  const auto reject_prefix = [&](const std::string& prefix) {
    for (const auto& k : known_keys()) {
      if (k.rfind(prefix, 0) == 0 && e.has(k)) bad(k + " does not apply to scenario = " + sc);
    }
  };
  if (sc == "single") {
    reject_prefix("two_user.");
    reject_prefix("reconfigure.");
  } else if (sc == "two_user") {
    reject_prefix("reconfigure.");
    scenario::TwoUser t;
    t.code2 = code_from(e, "two_user.th_seed", "two_user.th_chips", nc, period, 2);
    t.delay2 = e.real("two_user.delay_s", 0.0);
    t.gain2 = e.real("two_user.gain", 1.0);
    cfg.scenario = t;
  } else if (sc == "reconfigure") {
    reject_prefix("two_user.");
    scenario::Reconfigure r;
    r.switch_frame = e.integer<std::size_t>("reconfigure.switch_frame", cfg.bits_per_point / 2);
    if (e.has("reconfigure.chip_s") || e.has("reconfigure.chips_per_frame") || e.has("reconfigure.ppm_shift_s")) {
      FrameTiming t = l.timing;
      t.chip_duration = e.real("reconfigure.chip_s", t.chip_duration);
      t.chips_per_frame = e.integer("reconfigure.chips_per_frame", t.chips_per_frame);
      t.ppm_shift = e.real("reconfigure.ppm_shift_s", t.ppm_shift);
      r.patch.timing = t;
    }
    if (e.has("reconfigure.tau_s")) r.patch.tau = e.real("reconfigure.tau_s", 0.0);
    if (e.has("reconfigure.tx_gain")) r.patch.tx_gain = e.real("reconfigure.tx_gain", 0.0);
    const int nc2 = r.patch.timing ? r.patch.timing->chips_per_frame : nc;
    if (nc2 < 1) bad("reconfigure.chips_per_frame must be >= 1");
    if (e.has("reconfigure.th_seed") || e.has("reconfigure.th_chips")) {
      r.patch.code = code_from(e, "reconfigure.th_seed", "reconfigure.th_chips", nc2, period, 0);
    } else if (nc2 != nc) {
      bad("reconfigure.chips_per_frame changes Nc; give reconfigure.th_seed or reconfigure.th_chips");
    }
    if (e.has("reconfigure.interferer_th_seed") || e.has("reconfigure.interferer_th_chips")) {
      r.interferer_code =
          code_from(e, "reconfigure.interferer_th_seed", "reconfigure.interferer_th_chips", nc, period, 0);
      r.interferer_gain = e.real("reconfigure.interferer_gain", 1.0);
    } else if (e.has("reconfigure.interferer_gain")) {
      bad("reconfigure.interferer_gain requires an interferer code");
    }
    cfg.scenario = r;
  } else {
    bad("scenario: unknown value '" + sc + "' (single, two_user, reconfigure)");
  }

  try {
    validate(cfg);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::InvalidConfig) throw;
    bad(err.what());
  }
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  const LinkConfig& l = cfg.link;
  os << "scheme = " << scheme_key(l.scheme) << '\n';
  if (const auto* p = std::get_if<scheme::Ppm>(&l.scheme)) put(os, "ppm.delta_s", p->delta);
  if (const auto* o = std::get_if<scheme::Ook>(&l.scheme)) put(os, "ook.a1", o->a1);
  if (const auto* b = std::get_if<scheme::Bpam>(&l.scheme)) {
    put(os, "bpam.a1", b->a1);
    put(os, "bpam.a0", b->a0);
  }
  if (const auto* b = std::get_if<scheme::BiPhase>(&l.scheme)) put(os, "biphase.a", b->a);
  if (const auto* p = std::get_if<scheme::Psm>(&l.scheme)) {
    put_int(os, "psm.order0", p->shape0.order);
    put_int(os, "psm.order1", p->shape1.order);
  }
  put_int(os, "pulse.order", l.pulse.order);
  put(os, "pulse.tau_s", l.pulse.tau);
  put(os, "pulse.amplitude", l.pulse.amplitude);
  put(os, "link.chip_s", l.timing.chip_duration);
  put_int(os, "link.chips_per_frame", l.timing.chips_per_frame);
  put(os, "link.ppm_shift_s", l.timing.ppm_shift);
  put(os, "link.tx_gain", l.tx_gain);
  put(os, "link.sample_rate_hz", l.sample_rate);
  const bool seeded = generate_th_code(l.code.seed, static_cast<int>(l.code.period()), l.code.chips_per_frame) == l.code;
  const int period = seeded ? static_cast<int>(l.code.period()) : 1024;
  if (seeded) put_int(os, "th.period", period);
  put_code(os, "th.", "seed", l.code, period);

  const PerfectChannel prop =
      std::holds_alternative<PerfectChannel>(cfg.channel) ? std::get<PerfectChannel>(cfg.channel) : cfg.propagation;
  os << "channel = " << channel_name(cfg.channel) << '\n';
  put(os, "channel.delay_s", prop.delay);
  put(os, "channel.attenuation", prop.attenuation);
  if (const auto* m = std::get_if<MultipathSV>(&cfg.channel)) {
    put(os, "sv.cluster_rate_per_s", m->cluster_rate);
    put(os, "sv.ray_rate_per_s", m->ray_rate);
    put(os, "sv.cluster_decay_s", m->cluster_decay);
    put(os, "sv.ray_decay_s", m->ray_decay);
    put(os, "sv.max_delay_spread_s", m->max_delay_spread);
    put_int(os, "sv.seed", m->rng_seed);
    os << "sv.awgn = " << (cfg.multipath_awgn ? "true" : "false") << '\n';
  }

  os << "sweep.ebn0_db = ";
  for (std::size_t i = 0; i < cfg.ebn0_grid.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", cfg.ebn0_grid[i]);
    os << (i ? "," : "") << buf;
  }
  os << '\n';
  put_int(os, "sweep.bits_per_point", cfg.bits_per_point);
  put_int(os, "sweep.block_bits", cfg.block_bits);
  put_int(os, "seed", cfg.master_seed);
  put(os, "sync.search_window_s", cfg.sync_search_window);
  put(os, "sync.forced_error_s", cfg.forced_sync_error);
  put_int(os, "psd.segment_len", cfg.psd.segment_len);
  put_int(os, "psd.frames", cfg.psd.frames);

  if (const auto* t = std::get_if<scenario::TwoUser>(&cfg.scenario)) {
    os << "scenario = two_user\n";
    put_code(os, "two_user.", "th_seed", t->code2, period);
    put(os, "two_user.delay_s", t->delay2);
    put(os, "two_user.gain", t->gain2);
  } else if (const auto* r = std::get_if<scenario::Reconfigure>(&cfg.scenario)) {
    os << "scenario = reconfigure\n";
    put_int(os, "reconfigure.switch_frame", r->switch_frame);
    if (r->patch.timing) {
      put(os, "reconfigure.chip_s", r->patch.timing->chip_duration);
      put_int(os, "reconfigure.chips_per_frame", r->patch.timing->chips_per_frame);
      put(os, "reconfigure.ppm_shift_s", r->patch.timing->ppm_shift);
    }
    if (r->patch.tau) put(os, "reconfigure.tau_s", *r->patch.tau);
    if (r->patch.tx_gain) put(os, "reconfigure.tx_gain", *r->patch.tx_gain);
    if (r->patch.code) put_code(os, "reconfigure.", "th_seed", *r->patch.code, period);
    if (r->interferer_code) {
      put_code(os, "reconfigure.interferer_", "th_seed", *r->interferer_code, period);
      put(os, "reconfigure.interferer_gain", r->interferer_gain);
    }
  } else {
    os << "scenario = single\n";
  }
}

}  // namespace uwb
