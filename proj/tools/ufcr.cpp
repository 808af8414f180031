#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ufcr/allocator.hpp"
#include "ufcr/harness.hpp"
#include "ufcr/interference.hpp"
#include "ufcr/power.hpp"
#include "ufcr/scenario.hpp"
#include "ufcr/text_io.hpp"
#include "ufcr/waveform.hpp"

namespace {

using namespace ufcr;

// "-" or empty writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct WaveformArgs {
  std::string kind = "ufofdm";
  double alpha = 40.0;
  int filter_len = 73;
  double cp = 0.0;
  int overlap = 4;

  void add(CLI::App* cmd) {
    cmd->add_option("--waveform", kind, "ofdm, fbmc or ufofdm")->capture_default_str();
    cmd->add_option("--alpha", alpha, "UF-OFDM sidelobe attenuation (dB)")->capture_default_str();
    cmd->add_option("--filter-len", filter_len, "UF-OFDM filter length (odd)")
        ->capture_default_str();
    cmd->add_option("--cp", cp, "OFDM cyclic prefix fraction")->capture_default_str();
    cmd->add_option("--overlap", overlap, "FBMC overlap factor")->capture_default_str();
  }

  WaveformSpec spec(double width) const {
    WaveformSpec s;
    switch (parse_waveform_kind(kind)) {
      case WaveformKind::ofdm:
        s = WaveformSpec::ofdm(width, cp);
        break;
      case WaveformKind::fbmc:
        s = WaveformSpec::fbmc(width, overlap);
        break;
      case WaveformKind::ufofdm:
        s = WaveformSpec::ufofdm(alpha, filter_len, width);
        break;
    }
    s.validate();
    return s;
  }
};

IntRange parse_range_arg(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

InterferenceFactors omega_for(const Scenario& s, const ChannelSet& ch, const WaveformSpec& w) {
  const PsdProfile psd = psd_profile(w, s.delta_f_hz / kDefaultGridDivisions,
                                     psd_support_hz(s.n_total, s.delta_f_hz));
  return interference_matrix(s, ch, psd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UF-OFDM cognitive downlink resource allocation"};
  app.require_subcommand(1);

  // psd
  auto* psd_cmd = app.add_subcommand("psd", "Tabulate a normalised single-subband PSD");
  WaveformArgs psd_wave;
  psd_wave.add(psd_cmd);
  double psd_width = kDefaultSubbandWidthHz;
  double psd_div = kDefaultGridDivisions;
  double psd_support = kDefaultSupportSubbands;
  std::string psd_out;
  psd_cmd->add_option("--delta-f", psd_width, "Subband width (Hz)")->capture_default_str();
  psd_cmd->add_option("--grid-div", psd_div, "Grid points per subband")->capture_default_str();
  psd_cmd->add_option("--support", psd_support, "Half support in subbands")
      ->capture_default_str();
  psd_cmd->add_option("--out", psd_out, "Output CSV (default stdout)");

  // scenario
  auto* scn_cmd = app.add_subcommand("scenario", "Generate a random spectrum layout");
  std::uint64_t scn_seed = 1;
  int scn_n_total = 32;
  int scn_k_pu = 3;
  std::string scn_pu_total = "16:20";
  double scn_ith = kDefaultIthDbw;
  std::string scn_out;
  scn_cmd->add_option("--seed", scn_seed)->capture_default_str();
  scn_cmd->add_option("--n-total", scn_n_total)->capture_default_str();
  scn_cmd->add_option("--k-pu", scn_k_pu)->capture_default_str();
  scn_cmd->add_option("--pu-total", scn_pu_total, "PU subband total, lo:hi")
      ->capture_default_str();
  scn_cmd->add_option("--i-th-dbw", scn_ith)->capture_default_str();
  scn_cmd->add_option("--out", scn_out, "Scenario file (default stdout)");

  // omega
  auto* omg_cmd = app.add_subcommand("omega", "Interference factor table");
  WaveformArgs omg_wave;
  omg_wave.add(omg_cmd);
  std::string omg_scn;
  std::uint64_t omg_seed = 1;
  int omg_k_sm = 4;
  std::string omg_out;
  omg_cmd->add_option("--scenario", omg_scn)->required();
  omg_cmd->add_option("--channels-seed", omg_seed)->capture_default_str();
  omg_cmd->add_option("--k-sm", omg_k_sm)->capture_default_str();
  omg_cmd->add_option("--out", omg_out);

  // allocate
  auto* alc_cmd = app.add_subcommand("allocate", "Greedy subband assignment");
  std::string alc_scn;
  std::uint64_t alc_seed = 1;
  int alc_k_sm = 4;
  std::string alc_out;
  alc_cmd->add_option("--scenario", alc_scn)->required();
  alc_cmd->add_option("--channels-seed", alc_seed)->capture_default_str();
  alc_cmd->add_option("--k-sm", alc_k_sm)->capture_default_str();
  alc_cmd->add_option("--out", alc_out);

  // power
  auto* pwr_cmd = app.add_subcommand("power", "Optimal power for a fixed assignment");
  WaveformArgs pwr_wave;
  pwr_wave.add(pwr_cmd);
  std::string pwr_scn;
  std::string pwr_assign;
  std::string pwr_method = "socp";
  std::uint64_t pwr_seed = 1;
  int pwr_k_sm = 4;
  std::string pwr_out;
  pwr_cmd->add_option("--scenario", pwr_scn)->required();
  pwr_cmd->add_option("--assignment", pwr_assign, "subband,sm CSV")->required();
  pwr_cmd->add_option("--method", pwr_method, "socp or wf")->capture_default_str();
  pwr_cmd->add_option("--channels-seed", pwr_seed)->capture_default_str();
  pwr_cmd->add_option("--k-sm", pwr_k_sm)->capture_default_str();
  pwr_cmd->add_option("--out", pwr_out);

  // oracle-compare
  auto* orc_cmd = app.add_subcommand("oracle-compare", "Exhaustive optimum vs two-phase");
  WaveformArgs orc_wave;
  orc_wave.add(orc_cmd);
  std::string orc_n_sm = "4:8";
  int orc_k_sm = 2;
  int orc_k_pu = 2;
  int orc_trials = 200;
  std::uint64_t orc_seed = 1;
  double orc_ith = -40.0;
  std::string orc_out;
  orc_cmd->add_option("--n-sm", orc_n_sm, "Hole count or lo:hi range")->capture_default_str();
  orc_cmd->add_option("--k-sm", orc_k_sm)->capture_default_str();
  orc_cmd->add_option("--k-pu", orc_k_pu)->capture_default_str();
  orc_cmd->add_option("--trials", orc_trials)->capture_default_str();
  orc_cmd->add_option("--seed", orc_seed)->capture_default_str();
  orc_cmd->add_option("--i-th-dbw", orc_ith)->capture_default_str();
  orc_cmd->add_option("--out", orc_out);

  // sweep
  auto* swp_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over waveforms and thresholds");
  std::string swp_cfg;
  std::string swp_out;
  int swp_threads = -1;
  swp_cmd->add_option("--config", swp_cfg)->required();
  swp_cmd->add_option("--out", swp_out);
  swp_cmd->add_option("--threads", swp_threads, "Worker threads (overrides the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*psd_cmd) {
      const WaveformSpec spec = psd_wave.spec(psd_width);
      const PsdProfile p = psd_profile(spec, psd_width / psd_div, psd_support * psd_width);
      Output out(psd_out);
      auto& os = out.stream();
      os << "offset_hz,density_per_hz\n";
      const auto f = p.offsets_hz();
      const auto d = p.samples();
      for (std::size_t i = 0; i < f.size(); ++i) os << num(f[i]) << ',' << num(d[i]) << '\n';
      return 0;
    }

    if (*scn_cmd) {
      Scenario s = generate_spectrum(scn_seed, scn_n_total, scn_k_pu, parse_range_arg(scn_pu_total));
      s.i_th_watts = dbw_to_watts(scn_ith);
      Output out(scn_out);
      write_scenario(out.stream(), s);
      return 0;
    }

    if (*omg_cmd) {
      const Scenario s = load_scenario(omg_scn);
      const ChannelSet ch = generate_channels(omg_seed, s, omg_k_sm);
      const InterferenceFactors om = omega_for(s, ch, omg_wave.spec(s.delta_f_hz));
      Output out(omg_out);
      auto& os = out.stream();
      os << "subband,pu,omega\n";
      for (int n = 0; n < s.n_sm(); ++n)
        for (int l = 0; l < s.k_pu(); ++l)
          os << s.sm_subbands[n] << ',' << l << ',' << num(om(n, l)) << '\n';
      return 0;
    }

    if (*alc_cmd) {
      const Scenario s = load_scenario(alc_scn);
      const ChannelSet ch = generate_channels(alc_seed, s, alc_k_sm);
      const Allocation a = allocate_subbands(ch, s, alc_k_sm);
      Output out(alc_out);
      auto& os = out.stream();
      os << "subband,sm\n";
      for (int n = 0; n < s.n_sm(); ++n) os << s.sm_subbands[n] << ',' << a.assign[n] << '\n';
      return 0;
    }

    if (*pwr_cmd) {
      const Scenario s = load_scenario(pwr_scn);
      const ChannelSet ch = generate_channels(pwr_seed, s, pwr_k_sm);
      std::ifstream in(pwr_assign);
      if (!in) throw std::runtime_error("cannot open " + pwr_assign);
      Allocation a;
      a.assign = read_assignment(in, s);
      for (int sm : a.assign)
        if (sm >= pwr_k_sm) throw std::runtime_error("assignment names an SM beyond --k-sm");
      const InterferenceFactors om = omega_for(s, ch, pwr_wave.spec(s.delta_f_hz));
      const PowerProblem problem = make_power_problem(a, ch, s, om);
      std::vector<double> powers;
      bool ok = false;
      if (parse_power_method(pwr_method) == PowerMethod::socp) {
        const PowerSolution sol = solve_power(problem);
        powers = sol.powers;
        ok = sol.ok();
        if (!ok) std::cerr << "socp: " << to_string(sol.status) << '\n';
      } else {
        const WaterfillSolution sol = dual_waterfilling(problem);
        powers = sol.powers;
        ok = sol.ok();
        if (!ok) std::cerr << "wf: " << to_string(sol.status) << '\n';
      }
      Output out(pwr_out);
      auto& os = out.stream();
      os << "subband,power_w,rate_bps\n";
      for (int n = 0; n < s.n_sm(); ++n)
        os << s.sm_subbands[n] << ',' << num(powers[n]) << ','
           << num(s.delta_f_hz * std::log2(1.0 + powers[n] * problem.g[n])) << '\n';
      return ok ? 0 : 2;
    }

    if (*orc_cmd) {
      InstanceOptions opt;
      opt.k_sm = orc_k_sm;
      opt.k_pu = orc_k_pu;
      opt.i_th_dbw = orc_ith;
      opt.waveform = orc_wave.spec(kDefaultSubbandWidthHz);
      const auto rows = compare_with_oracle(orc_seed, orc_trials, parse_range_arg(orc_n_sm), opt);
      Output out(orc_out);
      auto& os = out.stream();
      os << "oracle_bps,two_phase_bps,gap_percent\n";
      std::vector<double> gaps;
      for (const auto& r : rows) {
        os << num(r.oracle_bps) << ',' << num(r.two_phase_bps) << ',' << num(r.gap_percent)
           << '\n';
        gaps.push_back(r.gap_percent);
      }
      std::sort(gaps.begin(), gaps.end());
      const std::size_t m = gaps.size() / 2;
      const double median = gaps.size() % 2 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
      std::cerr << "median gap " << num(median) << " %, max gap " << num(gaps.back()) << " %\n";
      return 0;
    }

    if (*swp_cmd) {
      SweepConfig cfg = load_sweep_config(swp_cfg);
      if (swp_threads >= 0) cfg.threads = swp_threads;
      const auto records = run_sweep(cfg);
      Output out(swp_out);
      write_sweep_csv(out.stream(), records);
      const auto bad = std::count_if(records.begin(), records.end(),
                                     [](const SweepRecord& r) { return !r.feasible; });
      if (bad > 0) {
        std::cerr << bad << " of " << records.size() << " records infeasible or uncertified\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
