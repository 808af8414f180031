#include "ufcr/text_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ufcr {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_as(const std::string& text, int line) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) fail(line, "bad number '" + text + "'");
  return v;
}

struct KeyValue {
  int line;
  std::string key;
  std::string value;
};

std::vector<KeyValue> read_pairs(std::istream& in) {
  std::vector<KeyValue> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    out.push_back({line, trim(raw.substr(0, eq)), trim(raw.substr(eq + 1))});
    if (out.back().key.empty()) fail(line, "empty key");
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

IntRange parse_range(const std::string& text, int line) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) fail(line, "expected lo:hi");
  return {parse_as<int>(parts[0], line), parse_as<int>(parts[1], line)};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Scenario read_scenario(std::istream& in) {
  int n_total = -1;
  std::vector<PuBand> bands;
  Scenario extra;
  for (const auto& kv : read_pairs(in)) {
    const int line = kv.line;
    if (kv.key == "n_total") {
      n_total = parse_as<int>(kv.value, line);
    } else if (kv.key == "delta_f_hz") {
      extra.delta_f_hz = parse_as<double>(kv.value, line);
    } else if (kv.key == "pu_band") {
      const auto r = parse_range(kv.value, line);
      bands.push_back({r.lo, r.hi});
    } else if (kv.key == "i_th_dbw") {
      extra.i_th_watts = dbw_to_watts(parse_as<double>(kv.value, line));
    } else if (kv.key == "i_th_w") {
      extra.i_th_watts = parse_as<double>(kv.value, line);
    } else if (kv.key == "p_max_w") {
      extra.p_max_watts = parse_as<double>(kv.value, line);
    } else if (kv.key == "noise_var") {
      extra.noise_variance = parse_as<double>(kv.value, line);
    } else if (kv.key == "pu_interference_w") {
      extra.pu_to_sm_interference_watts = parse_as<double>(kv.value, line);
    } else {
      fail(line, "unknown key '" + kv.key + "'");
    }
  }
  if (n_total < 0) throw std::runtime_error("scenario is missing n_total");
  std::sort(bands.begin(), bands.end(),
            [](const PuBand& a, const PuBand& b) { return a.start < b.start; });
  Scenario s = Scenario::from_layout(n_total, std::move(bands));
  s.delta_f_hz = extra.delta_f_hz;
  s.i_th_watts = extra.i_th_watts;
  s.p_max_watts = extra.p_max_watts;
  s.noise_variance = extra.noise_variance;
  s.pu_to_sm_interference_watts = extra.pu_to_sm_interference_watts;
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& s) {
  out << "n_total = " << s.n_total << '\n';
  out << "delta_f_hz = " << format_double(s.delta_f_hz) << '\n';
  for (const auto& b : s.pu_bands) out << "pu_band = " << b.start << ':' << b.length << '\n';
  out << "i_th_w = " << format_double(s.i_th_watts) << '\n';
  out << "p_max_w = " << format_double(s.p_max_watts) << '\n';
  out << "noise_var = " << format_double(s.noise_variance) << '\n';
  out << "pu_interference_w = " << format_double(s.pu_to_sm_interference_watts) << '\n';
}

WaveformSpec parse_waveform(const std::string& text, double subband_width_hz) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("empty waveform");
  const WaveformKind kind = parse_waveform_kind(parts[0]);
  const auto num = [&](std::size_t i) { return parse_as<double>(parts[i], 0); };
  WaveformSpec spec;
  switch (kind) {
    case WaveformKind::ofdm:
      if (parts.size() > 2) throw std::invalid_argument("ofdm takes at most a CP fraction");
      spec = WaveformSpec::ofdm(subband_width_hz, parts.size() > 1 ? num(1) : 0.0);
      break;
    case WaveformKind::fbmc:
      if (parts.size() > 2) throw std::invalid_argument("fbmc takes at most an overlap factor");
      spec = WaveformSpec::fbmc(subband_width_hz,
                                parts.size() > 1 ? parse_as<int>(parts[1], 0) : 4);
      break;
    case WaveformKind::ufofdm:
      if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument("ufofdm needs alpha and optionally a filter length");
      spec = WaveformSpec::ufofdm(num(1), parts.size() > 2 ? parse_as<int>(parts[2], 0) : 73,
                                  subband_width_hz);
      break;
  }
  spec.validate();
  return spec;
}

SweepConfig read_sweep_config(std::istream& in) {
  SweepConfig c = SweepConfig::defaults();
  std::vector<std::string> waveforms;
  for (const auto& kv : read_pairs(in)) {
    const int line = kv.line;
    if (kv.key == "waveform") {
      waveforms.push_back(kv.value);
    } else if (kv.key == "i_th_dbw") {
      c.i_th_dbw_grid.clear();
      for (const auto& p : split(kv.value, ',')) c.i_th_dbw_grid.push_back(parse_as<double>(p, line));
    } else if (kv.key == "trials") {
      c.trials = parse_as<int>(kv.value, line);
    } else if (kv.key == "seed") {
      c.seed = parse_as<std::uint64_t>(kv.value, line);
    } else if (kv.key == "k_sm") {
      c.k_sm = parse_as<int>(kv.value, line);
    } else if (kv.key == "k_pu") {
      c.k_pu = parse_as<int>(kv.value, line);
    } else if (kv.key == "n_total") {
      c.n_total = parse_as<int>(kv.value, line);
    } else if (kv.key == "pu_total") {
      c.pu_total = parse_range(kv.value, line);
    } else if (kv.key == "p_max_w") {
      c.p_max_watts = parse_as<double>(kv.value, line);
    } else if (kv.key == "noise_var") {
      c.noise_variance = parse_as<double>(kv.value, line);
    } else if (kv.key == "delta_f_hz") {
      c.delta_f_hz = parse_as<double>(kv.value, line);
    } else if (kv.key == "pu_snr_db") {
      c.pu_snr_db = parse_as<double>(kv.value, line);
    } else if (kv.key == "threads") {
      c.threads = parse_as<int>(kv.value, line);
    } else {
      fail(line, "unknown key '" + kv.key + "'");
    }
  }
  if (!waveforms.empty()) {
    c.waveforms.clear();
    for (const auto& w : waveforms) c.waveforms.push_back(parse_waveform(w, c.delta_f_hz));
  } else {
    for (auto& w : c.waveforms) w.subband_width_hz = c.delta_f_hz;
  }
  c.validate();
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_sweep_config(in);
}

std::vector<int> read_assignment(std::istream& in, const Scenario& scenario) {
  std::vector<int> assign(static_cast<std::size_t>(scenario.n_sm()), -1);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    raw = trim(raw);
    if (raw.empty() || raw[0] == '#') continue;
    const auto parts = split(raw, ',');
    if (parts.size() != 2) fail(line, "expected subband,sm");
    if (line == 1 && parts[0] == "subband") continue;
    const int subband = parse_as<int>(parts[0], line);
    const int sm = parse_as<int>(parts[1], line);
    const int pos = scenario.hole_position(subband);
    if (pos < 0) fail(line, "subband " + parts[0] + " is not a hole");
    if (sm < 0) fail(line, "negative SM index");
    if (assign[pos] >= 0) fail(line, "subband " + parts[0] + " assigned twice");
    assign[pos] = sm;
  }
  for (std::size_t i = 0; i < assign.size(); ++i)
    if (assign[i] < 0)
      throw std::runtime_error("hole " + std::to_string(scenario.sm_subbands[i]) +
                               " has no SM");
  return assign;
}

}  // namespace ufcr
