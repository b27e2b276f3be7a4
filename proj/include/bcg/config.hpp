#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bcg/engine.hpp"
#include "bcg/eval.hpp"
#include "bcg/synth.hpp"

namespace bcg {

// Everything the CLI can configure. Defaults are the standard detector
// constants; a JSON config file overrides them and command-line flags
// override the file.
//
//   {
//     "sample_rate_hz": 50,
//     "bandpass": {"pass_low_hz": 2, "pass_high_hz": 10, "stop_low_hz": 0.7,
//                  "stop_high_hz": 15, "min_stop_atten_db": 40, "tap_count": 101},
//     "pipeline": {"short_window_s": 0.06, "long_window_s": 0.3},
//     "detector": {"init_window_s": 6, "init_fraction": 0.25, ...},
//     "delay_compensation": 58,
//     "eval": {"tolerance_ms": 150},
//     "synth": {"duration_s": 60, "mean_hr_bpm": 72, "noise_snr_db": 10,
//               "motion_bursts": [{"start_s": 20, "duration_s": 3, "gain": 3}], ...}
//   }
struct AppConfig {
  EngineConfig engine;
  synth::SynthConfig synth;
  eval::MatchConfig match;

  int sample_rate_hz() const { return engine.pipeline.signal.sample_rate_hz; }
  void set_sample_rate(int rate_hz);
};

// Overlays JSON text onto `cfg`. Unknown keys and mistyped values throw
// InvalidConfig.
void apply_config(AppConfig& cfg, std::istream& json, const std::string& source);
void apply_config_file(AppConfig& cfg, const std::filesystem::path& path);

}  // namespace bcg
