#include "bcg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "bcg/errors.hpp"

namespace bcg::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string where(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

double parse_real(const std::string& text, const std::string& source, std::size_t line_no) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw NonNumericSample(where(source, line_no) + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::int64_t parse_integer(const std::string& text, const std::string& source,
                           std::size_t line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw NonNumericSample(where(source, line_no) + ": not an integer: '" + text + "'");
  }
  return v;
}

// Header-row CSV with '#' comment lines skipped; rows keep their line
// numbers for error messages.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;

  std::size_t column(const std::string& name, const std::string& source) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw MalformedHeader(source + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

Table parse_table(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto fields = split_fields(text);
    if (!have_header) {
      t.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw NonNumericSample(where(source, line_no) + ": expected " +
                             std::to_string(t.columns.size()) + " fields, found " +
                             std::to_string(fields.size()));
    }
    t.rows.emplace_back(line_no, std::move(fields));
  }
  if (!have_header) throw MalformedHeader(source + ": missing CSV header row");
  return t;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

SignalData parse_signal(std::istream& in, const std::string& source) {
  SignalData data;
  bool have_rate = false;
  bool have_columns = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (have_columns) continue;
      const auto colon = text.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(std::string_view(text).substr(1, colon - 1));
      const std::string value = trim(std::string_view(text).substr(colon + 1));
      if (key == "sample_rate_hz") {
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                               data.config.sample_rate_hz);
        if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() ||
            data.config.sample_rate_hz <= 0) {
          throw MalformedHeader(where(source, line_no) + ": bad sample_rate_hz '" + value + "'");
        }
        have_rate = true;
      } else if (key == "units") {
        data.units = value;
      } else if (key == "start") {
        data.start = value;
      }
      continue;
    }
    if (!have_columns) {
      if (!have_rate) {
        throw MalformedHeader(where(source, line_no) +
                              ": header lacks '# sample_rate_hz: <rate>'");
      }
      if (text != "value") {
        throw MalformedHeader(where(source, line_no) + ": expected column header 'value'");
      }
      have_columns = true;
      continue;
    }
    data.samples.push_back(parse_real(text, source, line_no));
  }
  if (!have_rate) throw MalformedHeader(source + ": header lacks '# sample_rate_hz: <rate>'");
  if (!have_columns) throw MalformedHeader(source + ": missing column header 'value'");
  return data;
}

SignalData read_signal(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_signal(in, path.string());
}

void write_signal(std::ostream& out, const SignalData& data) {
  out << "# sample_rate_hz: " << data.config.sample_rate_hz << '\n';
  out << "# units: " << data.units << '\n';
  if (data.start) out << "# start: " << *data.start << '\n';
  out << "value\n";
  for (double v : data.samples) out << format_double(v) << '\n';
}

void write_signal(const std::filesystem::path& path, const SignalData& data) {
  auto out = open_output(path);
  write_signal(out, data);
  finish_output(out, path);
}

std::vector<std::int64_t> parse_annotations(std::istream& in, const std::string& source) {
  const Table t = parse_table(in, source);
  const std::size_t col = t.column("index", source);
  std::vector<std::int64_t> out;
  out.reserve(t.rows.size());
  for (const auto& [line_no, fields] : t.rows) {
    const std::int64_t v = parse_integer(fields[col], source, line_no);
    if (v < 0) throw NonNumericSample(where(source, line_no) + ": negative beat index");
    if (!out.empty() && v <= out.back()) {
      throw UnsortedInput(where(source, line_no) + ": beat indices must strictly increase");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> read_annotations(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_annotations(in, path.string());
}

void write_annotations(std::ostream& out, std::span<const std::int64_t> indices) {
  out << "index\n";
  for (auto i : indices) out << i << '\n';
}

void write_annotations(const std::filesystem::path& path, std::span<const std::int64_t> indices) {
  auto out = open_output(path);
  write_annotations(out, indices);
  finish_output(out, path);
}

void write_beats(std::ostream& out, std::span<const BeatRecord> beats) {
  out << "raw_index,processed_index,amplitude\n";
  for (const auto& b : beats) {
    out << b.raw_index << ',' << b.processed_index << ',' << format_double(b.amplitude) << '\n';
  }
}

void write_beats(const std::filesystem::path& path, std::span<const BeatRecord> beats) {
  auto out = open_output(path);
  write_beats(out, beats);
  finish_output(out, path);
}

std::vector<BeatRecord> parse_beats(std::istream& in, const std::string& source) {
  const Table t = parse_table(in, source);
  const std::size_t raw = t.column("raw_index", source);
  const std::size_t processed = t.column("processed_index", source);
  const std::size_t amp = t.column("amplitude", source);
  std::vector<BeatRecord> out;
  out.reserve(t.rows.size());
  for (const auto& [line_no, fields] : t.rows) {
    out.push_back({parse_integer(fields[raw], source, line_no),
                   parse_integer(fields[processed], source, line_no),
                   parse_real(fields[amp], source, line_no)});
  }
  return out;
}

std::vector<std::int64_t> read_beat_indices(const std::filesystem::path& path) {
  auto in = open_input(path);
  const std::string source = path.string();
  const Table t = parse_table(in, source);
  const bool is_beats =
      std::find(t.columns.begin(), t.columns.end(), "raw_index") != t.columns.end();
  const std::size_t col = t.column(is_beats ? "raw_index" : "index", source);
  std::vector<std::int64_t> out;
  out.reserve(t.rows.size());
  for (const auto& [line_no, fields] : t.rows) {
    out.push_back(parse_integer(fields[col], source, line_no));
  }
  return out;
}

void write_heart_rates(std::ostream& out, std::span<const detect::HeartRateEstimate> hrs) {
  out << "at_sample,bpm,interval_count\n";
  for (const auto& h : hrs) {
    out << h.at_sample << ',' << format_double(h.bpm) << ',' << h.interval_count << '\n';
  }
}

void write_heart_rates(const std::filesystem::path& path,
                       std::span<const detect::HeartRateEstimate> hrs) {
  auto out = open_output(path);
  write_heart_rates(out, hrs);
  finish_output(out, path);
}

std::vector<detect::HeartRateEstimate> parse_heart_rates(std::istream& in,
                                                         const std::string& source) {
  const Table t = parse_table(in, source);
  const std::size_t at = t.column("at_sample", source);
  const std::size_t bpm = t.column("bpm", source);
  const std::size_t count = t.column("interval_count", source);
  std::vector<detect::HeartRateEstimate> out;
  for (const auto& [line_no, fields] : t.rows) {
    const auto n = parse_integer(fields[count], source, line_no);
    out.push_back({parse_integer(fields[at], source, line_no),
                   parse_real(fields[bpm], source, line_no),
                   static_cast<std::size_t>(std::max<std::int64_t>(n, 0))});
  }
  return out;
}

std::vector<detect::HeartRateEstimate> read_heart_rates(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_heart_rates(in, path.string());
}

}  // namespace bcg::io
