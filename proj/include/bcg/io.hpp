#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcg/detector.hpp"
#include "bcg/signal_config.hpp"

namespace bcg::io {

// Signal CSV:
//
//   # sample_rate_hz: 50
//   # units: au
//   # start: 2026-10-15T08:00:00Z      (optional)
//   value
//   0
//   1.5
//
// Header lines are "# key: value"; sample_rate_hz is mandatory.
struct SignalData {
  SignalConfig config;
  std::string units = "au";
  std::optional<std::string> start;
  std::vector<double> samples;
};

// A beat mapped back to the raw input: raw_index = processed_index - delay.
struct BeatRecord {
  std::int64_t raw_index = 0;
  std::int64_t processed_index = 0;
  double amplitude = 0.0;
};

// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

SignalData parse_signal(std::istream& in, const std::string& source);
SignalData read_signal(const std::filesystem::path& path);
void write_signal(std::ostream& out, const SignalData& data);
void write_signal(const std::filesystem::path& path, const SignalData& data);

// Annotation CSV: header "index", one strictly increasing nonnegative sample
// index per line.
std::vector<std::int64_t> parse_annotations(std::istream& in, const std::string& source);
std::vector<std::int64_t> read_annotations(const std::filesystem::path& path);
void write_annotations(std::ostream& out, std::span<const std::int64_t> indices);
void write_annotations(const std::filesystem::path& path, std::span<const std::int64_t> indices);

// Beat CSV: raw_index,processed_index,amplitude.
void write_beats(std::ostream& out, std::span<const BeatRecord> beats);
void write_beats(const std::filesystem::path& path, std::span<const BeatRecord> beats);
std::vector<BeatRecord> parse_beats(std::istream& in, const std::string& source);

// Detected indices for evaluation from either a beat CSV (raw_index column)
// or an annotation CSV (index column).
std::vector<std::int64_t> read_beat_indices(const std::filesystem::path& path);

// Heart-rate CSV: at_sample,bpm,interval_count.
void write_heart_rates(std::ostream& out, std::span<const detect::HeartRateEstimate> hrs);
void write_heart_rates(const std::filesystem::path& path,
                       std::span<const detect::HeartRateEstimate> hrs);
std::vector<detect::HeartRateEstimate> parse_heart_rates(std::istream& in,
                                                         const std::string& source);
std::vector<detect::HeartRateEstimate> read_heart_rates(const std::filesystem::path& path);

// Opens a file for writing, creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace bcg::io
