#include "ufcr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "ufcr/oracle.hpp"

namespace ufcr {

namespace {

constexpr std::uint64_t kTrialStream = 0x7472'6961'6cULL;
constexpr std::uint64_t kChannelStream = 0x6368'616eULL;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SweepConfig SweepConfig::defaults() {
  SweepConfig c;
  c.waveforms = {WaveformSpec::ofdm(), WaveformSpec::fbmc(), WaveformSpec::ufofdm(40.0),
                 WaveformSpec::ufofdm(60.0)};
  c.i_th_dbw_grid = {-60.0, -50.0, -40.0, -30.0, -20.0, -10.0, 0.0};
  return c;
}

void SweepConfig::validate() const {
  if (waveforms.empty()) throw std::invalid_argument("sweep needs at least one waveform");
  if (i_th_dbw_grid.empty()) throw std::invalid_argument("threshold grid is empty");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (k_sm < 1 || k_pu < 1 || n_total < 2) throw std::invalid_argument("bad system size");
  if (pu_total.lo < k_pu || pu_total.hi < pu_total.lo || pu_total.hi >= n_total)
    throw std::invalid_argument("bad PU total range");
  if (n_total - pu_total.hi < k_sm)
    throw std::invalid_argument("fewer holes than SMs at the top of the PU range");
  if (!(p_max_watts > 0.0) || !(noise_variance > 0.0) || !(delta_f_hz > 0.0))
    throw std::invalid_argument("p_max, noise and subband width must be positive");
  for (const auto& w : waveforms) {
    w.validate();
    if (w.subband_width_hz != delta_f_hz)
      throw std::invalid_argument("waveform subband width differs from the sweep's");
  }
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

double psd_support_hz(int n_total, double delta_f_hz) {
  return std::max(kDefaultSupportSubbands, static_cast<double>(n_total)) * delta_f_hz;
}

double power_loss_percent(double power_used_w, double p_max_w) {
  return 100.0 - power_used_w / p_max_w * 100.0;
}

double rate_gain_percent(double capacity_bps, double reference_bps) {
  if (!(reference_bps > 0.0)) throw std::invalid_argument("reference capacity must be positive");
  return 100.0 * (capacity_bps - reference_bps) / reference_bps;
}

double pu_rate_loss_percent(double interference_w, int band_subbands, double noise_variance,
                            double pu_snr_db) {
  if (interference_w < 0.0) throw std::invalid_argument("interference must be >= 0");
  if (band_subbands < 1) throw std::invalid_argument("PU band must be non-empty");
  const double gamma = std::pow(10.0, pu_snr_db / 10.0);
  const double clean = std::log2(1.0 + gamma);
  const double sinr = gamma * noise_variance / (noise_variance + interference_w / band_subbands);
  // N_l * delta_f cancels in the ratio
  return 100.0 * (1.0 - std::log2(1.0 + sinr) / clean);
}

std::vector<double> pu_rate_loss_percent(std::span<const double> interference_w,
                                         const Scenario& scenario, double pu_snr_db) {
  if (static_cast<int>(interference_w.size()) != scenario.k_pu())
    throw std::invalid_argument("one interference value per PU expected");
  std::vector<double> out;
  out.reserve(interference_w.size());
  for (int l = 0; l < scenario.k_pu(); ++l)
    out.push_back(pu_rate_loss_percent(interference_w[l], scenario.pu_bands[l].length,
                                       scenario.noise_variance, pu_snr_db));
  return out;
}

TwoPhaseResult two_phase(const ChannelSet& channels, const Scenario& scenario, int k_sm,
                         const InterferenceFactors& omega) {
  TwoPhaseResult r;
  r.allocation = allocate_subbands(channels, scenario, k_sm);
  r.problem = make_power_problem(r.allocation, channels, scenario, omega);
  r.power = solve_power(r.problem);
  r.allocation.powers = r.power.powers;
  update_sm_rates(r.allocation, r.problem.g, scenario.delta_f_hz, k_sm);
  r.capacity_bps = capacity(r.power.powers, r.problem.g, scenario.delta_f_hz);
  return r;
}

TrialSetup sweep_trial(const SweepConfig& config, int trial) {
  const std::uint64_t trial_seed = mix_seed(config.seed, kTrialStream + trial);
  TrialSetup t;
  t.scenario = generate_spectrum(trial_seed, config.n_total, config.k_pu, config.pu_total);
  t.scenario.delta_f_hz = config.delta_f_hz;
  t.scenario.p_max_watts = config.p_max_watts;
  t.scenario.noise_variance = config.noise_variance;
  t.channels = generate_channels(mix_seed(trial_seed, kChannelStream), t.scenario, config.k_sm);
  return t;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const int n_wave = static_cast<int>(config.waveforms.size());
  const int n_th = static_cast<int>(config.i_th_dbw_grid.size());
  const int base_th = static_cast<int>(
      std::min_element(config.i_th_dbw_grid.begin(), config.i_th_dbw_grid.end()) -
      config.i_th_dbw_grid.begin());

  const double support = psd_support_hz(config.n_total, config.delta_f_hz);
  std::vector<PsdProfile> profiles;
  profiles.reserve(config.waveforms.size());
  for (const auto& w : config.waveforms)
    profiles.push_back(psd_profile(w, config.delta_f_hz / kDefaultGridDivisions, support));

  std::vector<std::vector<SweepRecord>> per_trial(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](int trial) {
    const TrialSetup setup = sweep_trial(config, trial);
    const Scenario& scenario = setup.scenario;
    const ChannelSet& channels = setup.channels;
    const Allocation allocation = allocate_subbands(channels, scenario, config.k_sm);
    const std::vector<double> gains = aggregate_gains(allocation, channels, scenario);
    const double unconstrained =
        capacity(budget_waterfilling(gains, config.p_max_watts), gains, config.delta_f_hz);

    auto& out = per_trial[trial];
    for (int w = 0; w < n_wave; ++w) {
      const InterferenceFactors omega = interference_matrix(scenario, channels, profiles[w]);
      std::vector<SweepRecord> rows(static_cast<std::size_t>(n_th));
      for (int t = 0; t < n_th; ++t) {
        SweepRecord& rec = rows[t];
        const WaveformSpec& spec = config.waveforms[w];
        rec.waveform_index = w;
        rec.waveform = std::string(spec.id());
        rec.alpha_db = spec.kind == WaveformKind::ufofdm ? spec.alpha_db : 0.0;
        rec.i_th_dbw = config.i_th_dbw_grid[t];
        rec.trial = trial;
        rec.unconstrained_capacity_bps = unconstrained;

        Scenario s = scenario;
        s.i_th_watts = dbw_to_watts(rec.i_th_dbw);
        Allocation a = allocation;
        PowerProblem problem = make_power_problem(a, channels, s, omega);
        const PowerSolution sol = solve_power(problem);
        const WaterfillSolution cert = dual_waterfilling(problem);
        rec.status = sol.status;
        a.powers = sol.powers;
        rec.capacity_bps = capacity(sol.powers, gains, s.delta_f_hz);
        const double cert_cap = capacity(cert.powers, gains, s.delta_f_hz);
        rec.certificate_rel_gap =
            cert_cap > 0.0 ? std::abs(rec.capacity_bps - cert_cap) / cert_cap : 0.0;
        rec.power_used_w = 0.0;
        for (double p : sol.powers) rec.power_used_w += p;
        rec.interference_w.resize(static_cast<std::size_t>(s.k_pu()));
        bool ok = sol.ok() && cert.ok() && rec.certificate_rel_gap <= kCertificateTol &&
                  rec.power_used_w <= s.p_max_watts * (1.0 + kPowerSlack);
        for (int l = 0; l < s.k_pu(); ++l) {
          rec.interference_w[l] = total_interference(a, omega, l);
          ok = ok && rec.interference_w[l] <= s.i_th_watts * (1.0 + kInterferenceSlack);
        }
        rec.max_pu_interference_w =
            *std::max_element(rec.interference_w.begin(), rec.interference_w.end());
        rec.pu_rate_loss_pct = pu_rate_loss_percent(rec.interference_w, s, config.pu_snr_db);
        rec.max_pu_rate_loss_pct =
            *std::max_element(rec.pu_rate_loss_pct.begin(), rec.pu_rate_loss_pct.end());
        rec.power_loss_pct =
            power_loss_percent(std::min(rec.power_used_w, s.p_max_watts), s.p_max_watts);
        rec.feasible = ok;
      }
      const double reference = rows[base_th].capacity_bps;
      for (auto& rec : rows) {
        if (reference > 0.0) {
          rec.rate_gain_pct = rate_gain_percent(rec.capacity_bps, reference);
        } else {
          rec.rate_gain_pct = 0.0;
          rec.feasible = false;
        }
        out.push_back(std::move(rec));
      }
    }
  });

  std::vector<SweepRecord> records;
  records.reserve(static_cast<std::size_t>(config.trials) * n_wave * n_th);
  for (auto& v : per_trial)
    for (auto& r : v) records.push_back(std::move(r));
  std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    if (a.waveform_index != b.waveform_index) return a.waveform_index < b.waveform_index;
    if (a.i_th_dbw != b.i_th_dbw) return a.i_th_dbw < b.i_th_dbw;
    return a.trial < b.trial;
  });
  return records;
}

bool all_feasible(std::span<const SweepRecord> records) {
  return std::all_of(records.begin(), records.end(),
                     [](const SweepRecord& r) { return r.feasible; });
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.waveform << ',' << format_number(r.alpha_db) << ',' << format_number(r.i_th_dbw)
        << ',' << r.trial << ',' << format_number(r.capacity_bps) << ','
        << format_number(r.power_used_w) << ',' << format_number(r.max_pu_interference_w) << ','
        << format_number(r.rate_gain_pct) << ',' << format_number(r.max_pu_rate_loss_pct) << ','
        << format_number(r.power_loss_pct) << '\n';
  }
}

Instance random_instance(std::uint64_t seed, const InstanceOptions& options) {
  if (options.n_sm < std::max(options.k_sm, options.k_pu - 1))
    throw std::invalid_argument("too few holes for the requested SMs and PUs");
  const int pu_total = 3 * options.k_pu;
  const int n_total = options.n_sm + pu_total;
  Instance inst;
  inst.scenario =
      generate_spectrum(seed, n_total, options.k_pu, IntRange{pu_total, pu_total});
  inst.scenario.delta_f_hz = options.waveform.subband_width_hz;
  inst.scenario.i_th_watts = dbw_to_watts(options.i_th_dbw);
  inst.channels = generate_channels(mix_seed(seed, kChannelStream), inst.scenario, options.k_sm);
  const PsdProfile psd =
      psd_profile(options.waveform, options.waveform.subband_width_hz / kDefaultGridDivisions,
                  psd_support_hz(n_total, options.waveform.subband_width_hz));
  inst.omega = interference_matrix(inst.scenario, inst.channels, psd);
  return inst;
}

std::vector<OracleComparison> compare_with_oracle(std::uint64_t seed, int trials,
                                                  IntRange n_sm_range,
                                                  const InstanceOptions& options) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (n_sm_range.lo < 1 || n_sm_range.hi < n_sm_range.lo)
    throw std::invalid_argument("bad hole-count range");
  std::vector<OracleComparison> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix_seed(seed, kTrialStream + trial);
    std::mt19937_64 rng(trial_seed);
    InstanceOptions opt = options;
    opt.n_sm = std::uniform_int_distribution<int>(n_sm_range.lo, n_sm_range.hi)(rng);
    const Instance inst = random_instance(trial_seed, opt);
    const TwoPhaseResult tp = two_phase(inst.channels, inst.scenario, opt.k_sm, inst.omega);
    if (!tp.power.ok()) throw std::runtime_error("two-phase power solve failed");
    const OracleResult best = exhaustive_best(inst.channels, inst.scenario, opt.k_sm, inst.omega);
    OracleComparison c;
    c.trial = trial;
    c.n_sm = opt.n_sm;
    c.oracle_bps = best.best_capacity;
    c.two_phase_bps = tp.capacity_bps;
    c.gap_percent = 100.0 * (c.oracle_bps - c.two_phase_bps) / c.oracle_bps;
    out.push_back(c);
  }
  return out;
}

}  // namespace ufcr
