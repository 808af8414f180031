#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ufcr/harness.hpp"
#include "ufcr/scenario.hpp"
#include "ufcr/waveform.hpp"

namespace ufcr {

/// Shortest round-tripping decimal form.
std::string format_double(double v);

/// Scenario files are `key = value` lines; `#` starts a comment.
///
///     n_total = 32
///     delta_f_hz = 312500
///     pu_band = 4:6        # start:length, repeat per PU
///     i_th_dbw = -30
///     p_max_w = 1
///     noise_var = 1e-6
///     pu_interference_w = 0
///
/// Holes are the complement of the bands. Throws std::runtime_error with
/// the line number on malformed input.
Scenario read_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);
void write_scenario(std::ostream& out, const Scenario& scenario);

/// `ofdm`, `ofdm:<cp>`, `fbmc`, `fbmc:<K>`, `ufofdm:<alpha>` or
/// `ufofdm:<alpha>:<len>`.
WaveformSpec parse_waveform(const std::string& text, double subband_width_hz);

/// Sweep configuration in the same syntax, starting from
/// SweepConfig::defaults(). Keys: waveform (repeatable; the first one
/// replaces the default list), i_th_dbw (comma list), trials, seed, k_sm,
/// k_pu, n_total, pu_total (lo:hi), p_max_w, noise_var, delta_f_hz,
/// pu_snr_db, threads.
SweepConfig read_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Two-column `subband,sm` assignment file (header optional). Returns the
/// SM per hole position of `scenario`; every hole must appear once.
std::vector<int> read_assignment(std::istream& in, const Scenario& scenario);

}  // namespace ufcr
