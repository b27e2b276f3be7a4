#include "bcg/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "bcg/errors.hpp"

namespace bcg {

namespace {

using nlohmann::json;

// Reads known keys from one JSON object and rejects the rest.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw InvalidConfig(path_ + " must be a JSON object");
  }

  template <typename T>
  void read(const char* key, T& target) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      target = it->get<T>();
    } catch (const json::exception&) {
      throw InvalidConfig(path_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw InvalidConfig("unknown config key " + path_ + "." + key);
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void read_bandpass(const json& j, dsp::BandpassSpec& b) {
  Section s(j, "bandpass");
  s.read("pass_low_hz", b.pass_low_hz);
  s.read("pass_high_hz", b.pass_high_hz);
  s.read("stop_low_hz", b.stop_low_hz);
  s.read("stop_high_hz", b.stop_high_hz);
  s.read("min_stop_atten_db", b.min_stop_atten_db);
  s.read("tap_count", b.tap_count);
  s.finish();
}

void read_pipeline(const json& j, dsp::PipelineConfig& p) {
  Section s(j, "pipeline");
  s.read("short_window_s", p.short_window_s);
  s.read("long_window_s", p.long_window_s);
  s.finish();
}

void read_detector(const json& j, detect::DetectorConfig& d) {
  Section s(j, "detector");
  s.read("init_window_s", d.init_window_s);
  s.read("init_fraction", d.init_fraction);
  s.read("threshold_fraction", d.threshold_fraction);
  s.read("history_len", d.history_len);
  s.read("clamp_factor", d.clamp_factor);
  s.read("decay_fraction", d.decay_fraction);
  s.read("floor_fraction", d.floor_fraction);
  s.read("fallback_jj_s", d.fallback_jj_s);
  s.read("falling_window_s", d.falling_window_s);
  s.read("refractory_s", d.refractory_s);
  s.read("hr_cadence_s", d.hr_cadence_s);
  s.finish();
}

void read_synth(const json& j, synth::SynthConfig& c) {
  Section s(j, "synth");
  s.read("duration_s", c.duration_s);
  s.read("mean_hr_bpm", c.mean_hr_bpm);
  s.read("hr_jitter_pct", c.hr_jitter_pct);
  s.read("beat_amplitude", c.beat_amplitude);
  s.read("amplitude_jitter_pct", c.amplitude_jitter_pct);
  s.read("respiration_hz", c.respiration_hz);
  s.read("respiration_amplitude", c.respiration_amplitude);
  s.read("seed", c.seed);
  s.read("carrier_hz", c.carrier_hz);
  s.read("envelope_sigma_s", c.envelope_sigma_s);
  if (const json* snr = s.child("noise_snr_db")) {
    if (snr->is_null()) {
      c.noise_snr_db.reset();
    } else if (snr->is_number()) {
      c.noise_snr_db = snr->get<double>();
    } else {
      throw InvalidConfig("synth.noise_snr_db must be a number or null");
    }
  }
  if (const json* bursts = s.child("motion_bursts")) {
    if (!bursts->is_array()) throw InvalidConfig("synth.motion_bursts must be an array");
    c.motion_bursts.clear();
    for (const auto& item : *bursts) {
      synth::MotionBurst b;
      Section bs(item, "synth.motion_bursts[]");
      bs.read("start_s", b.start_s);
      bs.read("duration_s", b.duration_s);
      bs.read("gain", b.gain);
      bs.finish();
      c.motion_bursts.push_back(b);
    }
  }
  s.finish();
}

}  // namespace

void AppConfig::set_sample_rate(int rate_hz) {
  engine.set_sample_rate(rate_hz);
  match.sample_rate_hz = rate_hz;
}

void apply_config(AppConfig& cfg, std::istream& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig(source + ": " + e.what());
  }
  Section s(root, source);
  int rate = cfg.sample_rate_hz();
  s.read("sample_rate_hz", rate);
  cfg.set_sample_rate(rate);
  if (const json* j = s.child("bandpass")) read_bandpass(*j, cfg.engine.pipeline.bandpass);
  if (const json* j = s.child("pipeline")) read_pipeline(*j, cfg.engine.pipeline);
  if (const json* j = s.child("detector")) read_detector(*j, cfg.engine.detector);
  if (const json* j = s.child("synth")) read_synth(*j, cfg.synth);
  if (const json* j = s.child("delay_compensation")) {
    if (j->is_null()) {
      cfg.engine.delay_compensation.reset();
    } else if (j->is_number_integer()) {
      cfg.engine.delay_compensation = j->get<std::int64_t>();
    } else {
      throw InvalidConfig(source + ": delay_compensation must be an integer or null");
    }
  }
  if (const json* j = s.child("eval")) {
    Section e(*j, "eval");
    e.read("tolerance_ms", cfg.match.tolerance_ms);
    e.finish();
  }
  s.finish();
}

void apply_config_file(AppConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  apply_config(cfg, in, path.string());
}

}  // namespace bcg
